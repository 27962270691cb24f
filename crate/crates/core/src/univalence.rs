//! The one-parameter family `u(z) = F_1 z + c F_k z̄^k` with real `c`: the
//! bounds `N`, `M`, `L`, and grid-based certification of sense-preservation,
//! circle injectivity and convexity of the boundary curve.
//!
//! Every verdict here holds on the sampled grid recorded in the report and
//! claims nothing beyond it.

use std::f64::consts::{PI, TAU};

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{check_alpha, Error, Result};
use crate::field::{AlphaHarmonicMap, CoefficientSequence, MAX_SERIES_RADIUS};
use crate::poisson::BoundaryCurve;
use crate::specfun::{gamma, gamma_ratio, f_k_at_one, AlphaK};

/// Radii at which interior circles are checked by [`rkc_certificate`].
pub const CERTIFICATE_RADII: [f64; 5] = [0.25, 0.5, 0.75, 0.9, 0.99];

/// Default samples per circle.
pub const DEFAULT_CIRCLE_SAMPLES: usize = 512;

/// Default samples of the boundary curve for the convexity test.
pub const DEFAULT_CONVEXITY_SAMPLES: usize = 2048;

/// Tolerance on the total winding `2π`.
pub const WINDING_TOL: f64 = 1e-6;

fn check_k(k: u32) -> Result<()> {
    if k == 0 {
        return Err(Error::Invalid("k must be a positive integer".into()));
    }
    Ok(())
}

/// `Γ(k+1) Γ(2+α/2) / Γ(k+1+α/2)`.
fn gamma_block(alpha: f64, k: u32) -> Result<f64> {
    let kf = f64::from(k);
    Ok(gamma_ratio(kf + 1.0, kf + 1.0 + alpha / 2.0)? * gamma(2.0 + alpha / 2.0)?)
}

/// `N = (α/2) / ((k - α/2) Γ(k+1)Γ(2+α/2)/Γ(k+1+α/2) + k)` for `α ∈ (0, 2]`.
pub fn bound_n(alpha: f64, k: u32) -> Result<f64> {
    check_k(k)?;
    if !(alpha > 0.0 && alpha <= 2.0) {
        return Err(Error::Domain(format!("N is defined for alpha in (0, 2], got {alpha}")));
    }
    let kf = f64::from(k);
    Ok((alpha / 2.0) / ((kf - alpha / 2.0) * gamma_block(alpha, k)? + kf))
}

/// `M = Γ(k+1+α/2) / (k² Γ(k+1) Γ(2+α/2))` for `α > -1`.
pub fn bound_m(alpha: f64, k: u32) -> Result<f64> {
    check_alpha(alpha)?;
    check_k(k)?;
    let kf = f64::from(k);
    Ok(1.0 / (kf * kf * gamma_block(alpha, k)?))
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct BoundConstants {
    pub alpha: f64,
    pub k: u32,
    pub n_bound: f64,
    pub m_bound: f64,
    pub l_bound: f64,
}

impl BoundConstants {
    pub fn new(alpha: f64, k: u32) -> Result<Self> {
        let n_bound = bound_n(alpha, k)?;
        let m_bound = bound_m(alpha, k)?;
        Ok(Self {
            alpha,
            k,
            n_bound,
            m_bound,
            l_bound: n_bound.min(m_bound),
        })
    }
}

/// `u(z) = F_1 z + c F_k z̄^k` with real `c`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SpecialMap {
    alpha: f64,
    k: u32,
    c_minus_k: f64,
}

impl SpecialMap {
    pub fn new(alpha: f64, k: u32, c_minus_k: f64) -> Result<Self> {
        check_alpha(alpha)?;
        check_k(k)?;
        if !c_minus_k.is_finite() {
            return Err(Error::Invalid(format!("c_minus_k must be finite, got {c_minus_k}")));
        }
        Ok(Self { alpha, k, c_minus_k })
    }

    /// Only real coefficients are supported; a nonzero imaginary part is rejected.
    pub fn from_complex(alpha: f64, k: u32, c: Complex64) -> Result<Self> {
        if c.im != 0.0 {
            return Err(Error::Invalid(format!(
                "c_minus_k must be real for this family, got {c}"
            )));
        }
        Self::new(alpha, k, c.re)
    }

    pub fn alpha(&self) -> f64 {
        self.alpha
    }

    pub fn k(&self) -> u32 {
        self.k
    }

    pub fn c_minus_k(&self) -> f64 {
        self.c_minus_k
    }
}

pub fn special_map(s: SpecialMap) -> AlphaHarmonicMap {
    let coeffs = CoefficientSequence::new()
        .with(1, 1.0)
        .with(-i64::from(s.k), s.c_minus_k);
    AlphaHarmonicMap::new(s.alpha, coeffs).expect("SpecialMap is validated on construction")
}

/// Radial × angular sample counts.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct Grid {
    pub radial: usize,
    pub angular: usize,
}

impl Grid {
    pub const MAX_POINTS: usize = 4_000_000;

    pub fn new(radial: usize, angular: usize) -> Result<Self> {
        if radial < 2 || angular < 4 {
            return Err(Error::Invalid(format!("grid {radial}x{angular} too small (need >= 2x4)")));
        }
        if radial.saturating_mul(angular) > Self::MAX_POINTS {
            return Err(Error::Invalid(format!(
                "grid {radial}x{angular} exceeds {} points",
                Self::MAX_POINTS
            )));
        }
        Ok(Self { radial, angular })
    }

    /// `r_i = (1 - 1e-4) i / (radial - 1)`.
    pub fn radius(&self, i: usize) -> f64 {
        MAX_SERIES_RADIUS * i as f64 / (self.radial - 1) as f64
    }

    pub fn angle(&self, j: usize) -> f64 {
        TAU * j as f64 / self.angular as f64
    }
}

impl Default for Grid {
    fn default() -> Self {
        Self { radial: 200, angular: 256 }
    }
}

impl std::str::FromStr for Grid {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let bad = || Error::Invalid(format!("grid must look like NRxNT, got {s:?}"));
        let (a, b) = s.split_once(['x', 'X']).ok_or_else(bad)?;
        let radial = a.trim().parse().map_err(|_| bad())?;
        let angular = b.trim().parse().map_err(|_| bad())?;
        Self::new(radial, angular)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct JacobianScan {
    pub grid: Grid,
    pub jacobian_min: f64,
    pub argmin_r: f64,
    pub argmin_theta: f64,
}

impl JacobianScan {
    pub fn positive(&self) -> bool {
        self.jacobian_min > 0.0
    }
}

/// Minimum of the Jacobian over the polar grid.
pub fn check_sense_preserving(s: SpecialMap, grid: Grid) -> Result<JacobianScan> {
    let m = special_map(s);
    let mut scan = JacobianScan {
        grid,
        jacobian_min: f64::INFINITY,
        argmin_r: 0.0,
        argmin_theta: 0.0,
    };
    for i in 0..grid.radial {
        let r = grid.radius(i);
        let profile = m.profile(r)?;
        for j in 0..grid.angular {
            let theta = grid.angle(j);
            let jac = m.wirtinger_on(&profile, Complex64::from_polar(r, theta)).jacobian();
            if jac < scan.jacobian_min {
                scan.jacobian_min = jac;
                scan.argmin_r = r;
                scan.argmin_theta = theta;
            }
        }
    }
    Ok(scan)
}

/// True iff the argument strictly increases along the closed sample loop, each
/// step staying below `π/2`, with total winding `2π`.
pub fn arg_monotone(samples: &[Complex64]) -> Result<bool> {
    if let Some(i) = samples.iter().position(|w| *w == Complex64::new(0.0, 0.0)) {
        return Err(Error::Degenerate(format!("image sample {i} is the origin")));
    }
    let n = samples.len();
    let mut total = 0.0;
    for j in 0..n {
        let step = (samples[(j + 1) % n] / samples[j]).arg();
        if !(step > 0.0 && step < PI / 2.0) {
            return Ok(false);
        }
        total += step;
    }
    Ok((total - TAU).abs() <= WINDING_TOL)
}

/// Argument monotonicity of the image of `|z| = r`.
pub fn check_circle_injectivity(s: SpecialMap, r: f64, n_samples: usize) -> Result<bool> {
    if !(r > 0.0 && r < 1.0) {
        return Err(Error::Domain(format!("circle radius must lie in (0, 1), got {r}")));
    }
    let min = 4 * s.k as usize + 8;
    if n_samples < min {
        return Err(Error::Invalid(format!("need at least {min} samples, got {n_samples}")));
    }
    let m = special_map(s);
    let profile = m.profile(r)?;
    let samples: Vec<_> = (0..n_samples)
        .map(|j| m.eval_on(&profile, Complex64::from_polar(r, TAU * j as f64 / n_samples as f64)))
        .collect();
    arg_monotone(&samples)
}

/// `f(e^{iθ}) = F_1(1) e^{iθ} + c F_k(1) e^{-ikθ}`.
pub fn boundary_curve(s: SpecialMap) -> Result<BoundaryCurve> {
    let f1 = f_k_at_one(AlphaK::new(s.alpha, 1)?)?;
    let fk = f_k_at_one(AlphaK::new(s.alpha, s.k)?)?;
    Ok(BoundaryCurve::Modes(
        CoefficientSequence::new()
            .with(1, f1)
            .with(-i64::from(s.k), s.c_minus_k * fk),
    ))
}

fn cross(a: Complex64, b: Complex64) -> f64 {
    a.re * b.im - a.im * b.re
}

/// True iff consecutive chords of the sampled curve turn strictly one way and
/// the total turning is `±2π`.
pub fn check_convexity(bc: &BoundaryCurve, n_samples: usize) -> Result<bool> {
    let min = 8 * bc.degree() as usize + 16;
    if n_samples < min {
        return Err(Error::Invalid(format!("need at least {min} samples, got {n_samples}")));
    }
    let pts: Vec<_> = (0..n_samples)
        .map(|j| bc.eval(TAU * j as f64 / n_samples as f64))
        .collect();
    let chords: Vec<_> = (0..n_samples).map(|j| pts[(j + 1) % n_samples] - pts[j]).collect();
    if let Some(j) = chords.iter().position(|c| c.norm() == 0.0) {
        return Err(Error::Degenerate(format!("zero tangent at sample {j}")));
    }
    let mut sign = 0.0;
    let mut turning = 0.0;
    for j in 0..n_samples {
        let (a, b) = (chords[j], chords[(j + 1) % n_samples]);
        let x = cross(a, b);
        if x == 0.0 || (sign != 0.0 && x.signum() != sign) {
            return Ok(false);
        }
        sign = x.signum();
        turning += (b / a).arg();
    }
    Ok((turning.abs() - TAU).abs() <= WINDING_TOL)
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct CircleCheck {
    pub r: f64,
    pub samples: usize,
    pub arg_monotone: bool,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct UnivalenceReport {
    pub map: SpecialMap,
    pub precondition_ok: bool,
    pub precondition_message: Option<String>,
    pub n_bound: Option<f64>,
    pub m_bound: f64,
    pub l_bound: Option<f64>,
    pub boundary_homeomorphism: bool,
    pub convex: bool,
    pub convexity_samples: usize,
    pub jacobian: JacobianScan,
    pub circles: Vec<CircleCheck>,
    pub passed: bool,
}

/// Runs every check. A violated precondition is recorded in the report and the
/// checks still run, so the failing ones can be inspected.
pub fn rkc_certificate(s: SpecialMap, grid: Grid) -> Result<UnivalenceReport> {
    let m_bound = bound_m(s.alpha, s.k)?;
    let (n_bound, precondition_message) = match bound_n(s.alpha, s.k) {
        Ok(n) if s.c_minus_k.abs() < n.min(m_bound) => (Some(n), None),
        Ok(n) => (
            Some(n),
            Some(format!(
                "|c_minus_k| = {} is not inside (-L, L) with L = {}",
                s.c_minus_k.abs(),
                n.min(m_bound)
            )),
        ),
        Err(e) => (None, Some(e.to_string())),
    };
    let l_bound = n_bound.map(|n| n.min(m_bound));
    let circle_samples = DEFAULT_CIRCLE_SAMPLES.max(4 * s.k as usize + 8);
    let convexity_samples = DEFAULT_CONVEXITY_SAMPLES.max(8 * s.k as usize + 16);

    let bc = boundary_curve(s)?;
    let boundary: Vec<_> = (0..circle_samples)
        .map(|j| bc.eval(TAU * j as f64 / circle_samples as f64))
        .collect();
    let boundary_homeomorphism = arg_monotone(&boundary).unwrap_or(false);
    let convex = check_convexity(&bc, convexity_samples).unwrap_or(false);
    let jacobian = check_sense_preserving(s, grid)?;
    let circles = CERTIFICATE_RADII
        .iter()
        .map(|&r| {
            Ok(CircleCheck {
                r,
                samples: circle_samples,
                arg_monotone: match check_circle_injectivity(s, r, circle_samples) {
                    Ok(b) => b,
                    Err(Error::Degenerate(_)) => false,
                    Err(e) => return Err(e),
                },
            })
        })
        .collect::<Result<Vec<_>>>()?;

    let passed = precondition_message.is_none()
        && boundary_homeomorphism
        && convex
        && jacobian.positive()
        && circles.iter().all(|c| c.arg_monotone);
    Ok(UnivalenceReport {
        map: s,
        precondition_ok: precondition_message.is_none(),
        precondition_message,
        n_bound,
        m_bound,
        l_bound,
        boundary_homeomorphism,
        convex,
        convexity_samples,
        jacobian,
        circles,
        passed,
    })
}
