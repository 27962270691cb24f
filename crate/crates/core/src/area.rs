//! Riemann-surface area `S_u = ∫∫_𝔻 J_u` of an α-harmonic map, its harmonic
//! counterpart `S_v`, and a quadrature oracle for both.

use std::cell::Cell;
use std::f64::consts::{PI, TAU};
use std::num::NonZeroUsize;

use gauss_quad::GaussLegendre;
use num_complex::Complex64;
use serde::{Deserialize, Serialize};
use sha2::{Digest, Sha256};

use crate::error::{check_alpha, Error, Result};
use crate::field::{AlphaHarmonicMap, CoefficientSequence, MAX_SERIES_RADIUS};
use crate::specfun::{digamma, f_k_at_one, gamma, gamma_ratio, AlphaK};

/// Minimum quadrature resolution in either direction.
pub const MIN_RESOLUTION: usize = 64;

/// Relative agreement demanded between closed form and quadrature for even α.
pub const EVEN_AGREEMENT_TOL: f64 = 1e-6;

/// Margin for strict monotonicity of a sweep.
pub const STRICT_MARGIN: f64 = 1e-12;

/// Upper end of the α-range on which the sweep is proven decreasing.
pub const MONOTONE_ALPHA_MAX: f64 = 0.8;

fn require_no_constant(coeffs: &CoefficientSequence) -> Result<()> {
    let c0 = coeffs.get(0);
    if c0 != Complex64::new(0.0, 0.0) {
        return Err(Error::Invalid(format!("area formulas require c_0 = 0, got {c0}")));
    }
    Ok(())
}

/// `π Σ k (|c_k|² - |c_{-k}|²) F_k(1)²`.
pub fn area_closed(m: &AlphaHarmonicMap) -> Result<f64> {
    let coeffs = m.coeffs();
    require_no_constant(coeffs)?;
    let mut sum = 0.0;
    for k in coeffs.frequencies() {
        if k == 0 {
            continue;
        }
        let fk = f_k_at_one(AlphaK::new(m.alpha(), k)?)?;
        let ki = i64::from(k);
        sum += f64::from(k) * (coeffs.get(ki).norm_sqr() - coeffs.get(-ki).norm_sqr()) * fk * fk;
    }
    Ok(PI * sum)
}

/// `π Σ k (|c_k|² - |c_{-k}|²)`.
pub fn area_harmonic(coeffs: &CoefficientSequence) -> Result<f64> {
    require_no_constant(coeffs)?;
    // Same pairing and order as `area_closed`, so the two agree bitwise at α = 0.
    let sum: f64 = coeffs
        .frequencies()
        .into_iter()
        .filter(|&k| k > 0)
        .map(|k| f64::from(k) * (coeffs.get(i64::from(k)).norm_sqr() - coeffs.get(-i64::from(k)).norm_sqr()))
        .sum();
    Ok(PI * sum)
}

/// Radial panels: one for even α, geometrically graded toward `r_end` otherwise.
fn radial_panels(r_end: f64, graded: bool) -> Vec<(f64, f64)> {
    if !graded {
        return vec![(0.0, r_end)];
    }
    let gap = 1.0 - r_end;
    let mut panels = Vec::new();
    let mut a = 0.0;
    let mut b = 0.5;
    while 1.0 - b > 2.0 * gap {
        panels.push((a, b));
        a = b;
        b = 1.0 - (1.0 - b) / 2.0;
    }
    panels.push((a, r_end));
    panels
}

fn composite<F>(rule: &GaussLegendre, panels: &[(f64, f64)], mut f: F) -> Result<f64>
where
    F: FnMut(f64) -> Result<f64>,
{
    let err = Cell::new(None);
    let mut total = 0.0;
    for &(a, b) in panels {
        total += rule.integrate(a, b, |r| match f(r) {
            Ok(v) => v,
            Err(e) => {
                err.set(Some(e));
                0.0
            }
        });
        if let Some(e) = err.take() {
            return Err(e);
        }
    }
    Ok(total)
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct AreaQuadrature {
    pub value: f64,
    /// Estimate of the omitted annulus `r_max < r < 1`; zero for even α.
    pub error_bar: f64,
    pub r_max: f64,
    pub n_r: usize,
    pub n_theta: usize,
}

fn angular_integral(m: &AlphaHarmonicMap, r: f64, n_theta: usize) -> Result<f64> {
    let profile = m.profile(r)?;
    let sum: f64 = (0..n_theta)
        .map(|j| {
            let z = Complex64::from_polar(r, TAU * j as f64 / n_theta as f64);
            m.wirtinger_on(&profile, z).jacobian()
        })
        .sum();
    Ok(sum * TAU / n_theta as f64 * r)
}

/// `∫_0^{2π} ∫_0^{r_max} J_u r dr dθ` by Gauss–Legendre in `r` and the trapezoid
/// rule in `θ`. For non-even α the integral stops at `1 - 1e-4` and the omitted
/// annulus is reported as an error bar.
pub fn area_quadrature(m: &AlphaHarmonicMap, n_r: usize, n_theta: usize) -> Result<AreaQuadrature> {
    if n_r < MIN_RESOLUTION || n_theta < MIN_RESOLUTION {
        return Err(Error::Invalid(format!(
            "quadrature resolution {n_r}x{n_theta} below {MIN_RESOLUTION}"
        )));
    }
    let even = m.polyharmonic_order().is_some();
    let r_max = if even { 1.0 } else { MAX_SERIES_RADIUS };
    let rule = GaussLegendre::new(NonZeroUsize::new(n_r).expect("n_r >= 64"));
    let value = composite(&rule, &radial_panels(r_max, !even), |r| angular_integral(m, r, n_theta))?;
    let error_bar = if even {
        0.0
    } else {
        // g(r) ~ (1-r)^min(α,0) near the rim, so the tail is about g(r_max) δ / (1 + min(α,0)).
        let delta = 1.0 - r_max;
        angular_integral(m, r_max, n_theta)?.abs() * delta / (1.0 + m.alpha().min(0.0))
    };
    Ok(AreaQuadrature {
        value,
        error_bar,
        r_max,
        n_r,
        n_theta,
    })
}

/// `h(α) = ψ(1+α) - ψ(1+α/2) - 1/(2+α)` on `(-1, 1)`.
pub fn h_aux(alpha: f64) -> Result<f64> {
    if !(alpha > -1.0 && alpha < 1.0) {
        return Err(Error::Domain(format!("h is considered on (-1, 1), got {alpha}")));
    }
    Ok(digamma(1.0 + alpha)? - digamma(1.0 + alpha / 2.0)? - 1.0 / (2.0 + alpha))
}

/// `f(x) = Γ(1+α)Γ(x+1) / (Γ(1+α/2)Γ(x+1+α/2))`.
pub fn ratio_f(alpha: f64, x: f64) -> Result<f64> {
    check_alpha(alpha)?;
    if !(x > 0.0) {
        return Err(Error::Domain(format!("ratio_f needs x > 0, got {x}")));
    }
    Ok(gamma(1.0 + alpha)? / gamma(1.0 + alpha / 2.0)? * gamma_ratio(x + 1.0, x + 1.0 + alpha / 2.0)?)
}

/// `2k ∫_0^{r} (k F² s^{2k-1} + 2 F F_t s^{2k+1}) ds` and its antiderivative
/// value `k F(r²)² r^{2k}`, computed independently.
pub fn radial_identity(alpha: f64, k: u32, r_end: f64, n_r: usize) -> Result<(f64, f64)> {
    let ak = AlphaK::new(alpha, k)?;
    if k == 0 {
        return Err(Error::Invalid("k must be positive".into()));
    }
    let kf = f64::from(k);
    let rule = GaussLegendre::new(NonZeroUsize::new(n_r.max(2)).expect("positive"));
    let graded = crate::specfun::polyharmonic_order(alpha).is_none();
    let integral = composite(&rule, &radial_panels(r_end, graded), |s| {
        let (f, ft) = ak.eval(s * s)?;
        Ok(kf * f * f * s.powi(2 * k as i32 - 1) + 2.0 * f * ft * s.powi(2 * k as i32 + 1))
    })?;
    let (f_end, _) = ak.eval(r_end * r_end)?;
    Ok((2.0 * kf * integral, kf * f_end * f_end * r_end.powi(2 * k as i32)))
}

/// True iff `|c_k| ≥ |c_{-k}|` for every `k ≥ 1` and not all pairs are equal.
pub fn dominance_hypothesis(coeffs: &CoefficientSequence) -> bool {
    let mut strict = false;
    for k in coeffs.frequencies().into_iter().filter(|&k| k > 0) {
        let (a, b) = (coeffs.get(i64::from(k)).norm(), coeffs.get(-i64::from(k)).norm());
        if a < b {
            return false;
        }
        strict |= a > b;
    }
    strict
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SweepEntry {
    pub alpha: f64,
    pub s_u: Option<f64>,
    pub note: Option<String>,
}

/// `area_closed` at each α. Entries outside the hypotheses carry a note.
pub fn area_sweep(coeffs: &CoefficientSequence, alphas: &[f64]) -> Result<Vec<SweepEntry>> {
    require_no_constant(coeffs)?;
    let dominant = dominance_hypothesis(coeffs);
    Ok(alphas
        .iter()
        .map(|&alpha| {
            let mut notes = Vec::new();
            if !dominant {
                notes.push("coefficients violate |c_k| >= |c_-k| (not all equal)".to_string());
            }
            if alpha >= MONOTONE_ALPHA_MAX {
                notes.push(format!("alpha >= {MONOTONE_ALPHA_MAX}: monotonicity not established"));
            }
            let s_u = match AlphaHarmonicMap::new(alpha, coeffs.clone()).and_then(|m| area_closed(&m)) {
                Ok(v) => Some(v),
                Err(e) => {
                    notes.push(e.to_string());
                    None
                }
            };
            SweepEntry {
                alpha,
                s_u,
                note: (!notes.is_empty()).then(|| notes.join("; ")),
            }
        })
        .collect())
}

/// Every step drops by more than [`STRICT_MARGIN`].
pub fn is_strictly_decreasing(values: &[f64]) -> bool {
    values.windows(2).all(|w| w[1] < w[0] - STRICT_MARGIN)
}

/// SHA-256 over `(k, re bits, im bits)` in ascending `k`.
pub fn coeffs_digest(coeffs: &CoefficientSequence) -> String {
    let mut h = Sha256::new();
    for (k, c) in coeffs.iter() {
        h.update(k.to_le_bytes());
        h.update(c.re.to_bits().to_le_bytes());
        h.update(c.im.to_bits().to_le_bytes());
    }
    h.finalize().iter().map(|b| format!("{b:02x}")).collect()
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct AreaReport {
    pub alpha: f64,
    pub coeffs_digest: String,
    pub s_u_closed: f64,
    pub s_v_closed: f64,
    pub s_u_quadrature: f64,
    pub quadrature_error_bar: f64,
    pub relative_discrepancy: f64,
    pub agreement: bool,
    /// `|c_k| ≥ |c_{-k}|`, not all equal. Sense-preservation is the caller's to ensure.
    pub hypothesis_ok: bool,
}

pub fn area_report(m: &AlphaHarmonicMap, n_r: usize, n_theta: usize) -> Result<AreaReport> {
    let s_u_closed = area_closed(m)?;
    let s_v_closed = area_harmonic(m.coeffs())?;
    let q = area_quadrature(m, n_r, n_theta)?;
    let diff = (q.value - s_u_closed).abs();
    let scale = s_u_closed.abs().max(f64::MIN_POSITIVE);
    let agreement = diff <= EVEN_AGREEMENT_TOL * scale + 2.0 * q.error_bar;
    Ok(AreaReport {
        alpha: m.alpha(),
        coeffs_digest: coeffs_digest(m.coeffs()),
        s_u_closed,
        s_v_closed,
        s_u_quadrature: q.value,
        quadrature_error_bar: q.error_bar,
        relative_discrepancy: diff / scale,
        agreement,
        hypothesis_ok: dominance_hypothesis(m.coeffs()),
    })
}
