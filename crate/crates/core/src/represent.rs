//! Explicit representation of p-harmonic maps (α = 2(p - 1)) through the
//! holomorphic functions `I_n`, `J_n`:
//!
//! ```text
//! u(z) = Σ_{n=0}^{p-1} |z|^{2n} (1-p)_n / n! (I_n(z) + conj(J_n(z))),
//! I_n = I_{n-1} - p z^{-n} ∫_0^z s^{n-1} I_{n-1}(s) ds,   I_0 = h,  J_0 = g,
//! ```
//!
//! where `v = h + conj(g)` is the corresponding harmonic map. All recurrences
//! act on Taylor coefficients, where the antiderivative-and-divide step is the
//! exact rescaling `a_k ↦ a_k / (k + n)`.

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::field::{AlphaHarmonicMap, DiskPoint};
use crate::specfun::pochhammer;

/// Dense Taylor coefficients `a_0, a_1, ...` of a polynomial in `z`.
#[derive(Debug, Clone, PartialEq, Default)]
pub struct PowerSeries(pub Vec<Complex64>);

impl PowerSeries {
    pub fn coeff(&self, k: usize) -> Complex64 {
        self.0.get(k).copied().unwrap_or_default()
    }

    pub fn eval(&self, z: Complex64) -> Complex64 {
        self.0.iter().rev().fold(Complex64::new(0.0, 0.0), |acc, a| acc * z + a)
    }

    /// Term-wise derivative.
    pub fn derivative(&self) -> Self {
        Self(
            self.0
                .iter()
                .enumerate()
                .skip(1)
                .map(|(k, a)| a * k as f64)
                .collect(),
        )
    }

    /// `Σ_k |a_k|`, a bound for the supremum on the closed disk.
    pub fn abs_sum(&self) -> f64 {
        self.0.iter().map(|a| a.norm()).sum()
    }
}

/// `I_0..I_{p-1}` and `J_0..J_{p-1}` of a p-harmonic map.
#[derive(Debug, Clone, PartialEq)]
pub struct PolyharmonicRep {
    p: u32,
    i_series: Vec<PowerSeries>,
    j_series: Vec<PowerSeries>,
}

/// Coefficients of `I'_n` and `J'_n`.
#[derive(Debug, Clone, PartialEq)]
pub struct DerivativeSeries {
    pub i_prime: Vec<PowerSeries>,
    pub j_prime: Vec<PowerSeries>,
}

/// Bounds for `sup|I_n|` and `sup|I'_n|` over the disk.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SupBounds {
    pub n: u32,
    pub sup_i: f64,
    pub sup_i_prime: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct LipschitzReport {
    pub p: u32,
    pub m_bound: f64,
    pub c_bound: f64,
    pub per_n_sup: Vec<SupBounds>,
}

/// `(k+1-p)_n / (k+1)_n`, the factor taking `c_k` to the k-th coefficient of `I_n`.
pub fn closed_form_ratio(p: u32, n: u32, k: u32) -> f64 {
    let kf = f64::from(k);
    pochhammer(kf + 1.0 - f64::from(p), n) / pochhammer(kf + 1.0, n)
}

fn recur(prev: &PowerSeries, p: u32, n: u32) -> PowerSeries {
    let p = f64::from(p);
    let n = f64::from(n);
    PowerSeries(
        prev.0
            .iter()
            .enumerate()
            .map(|(k, a)| a * (1.0 - p / (k as f64 + n)))
            .collect(),
    )
}

/// Builds `I_n`, `J_n` for a map with α = 2(p - 1).
pub fn build_rep(m: &AlphaHarmonicMap) -> Result<PolyharmonicRep> {
    let p = m.polyharmonic_order().ok_or_else(|| {
        Error::Invalid(format!(
            "alpha = {} is not a nonnegative even integer; no polyharmonic representation",
            m.alpha()
        ))
    })?;
    let len = m.coeffs().max_index() as usize + 1;
    let mut h = vec![Complex64::new(0.0, 0.0); len];
    let mut g = vec![Complex64::new(0.0, 0.0); len];
    for (k, c) in m.coeffs().iter() {
        if k >= 0 {
            h[k as usize] = c;
        } else {
            // v = h + conj(g) with conj(g) = Σ c_{-k} z̄^k
            g[k.unsigned_abs() as usize] = c.conj();
        }
    }
    let mut i_series = vec![PowerSeries(h)];
    let mut j_series = vec![PowerSeries(g)];
    for n in 1..p {
        let next_i = recur(&i_series[n as usize - 1], p, n);
        let next_j = recur(&j_series[n as usize - 1], p, n);
        i_series.push(next_i);
        j_series.push(next_j);
    }
    Ok(PolyharmonicRep { p, i_series, j_series })
}

impl PolyharmonicRep {
    pub fn p(&self) -> u32 {
        self.p
    }

    pub fn i_series(&self) -> &[PowerSeries] {
        &self.i_series
    }

    pub fn j_series(&self) -> &[PowerSeries] {
        &self.j_series
    }
}

/// Evaluates the representation at a point.
pub fn eval_rep(rep: &PolyharmonicRep, pt: DiskPoint) -> Complex64 {
    let z = pt.z();
    let t = pt.t();
    let p = f64::from(rep.p);
    let mut weight = 1.0; // t^n (1-p)_n / n!
    let mut sum = Complex64::new(0.0, 0.0);
    for (n, (i_n, j_n)) in rep.i_series.iter().zip(&rep.j_series).enumerate() {
        if n > 0 {
            let nf = n as f64;
            weight *= t * (1.0 - p + nf - 1.0) / nf;
        }
        sum += weight * (i_n.eval(z) + j_n.eval(z).conj());
    }
    sum
}

/// `I'_n`, `J'_n` by term-wise differentiation.
pub fn derivative_series(rep: &PolyharmonicRep) -> DerivativeSeries {
    DerivativeSeries {
        i_prime: rep.i_series.iter().map(PowerSeries::derivative).collect(),
        j_prime: rep.j_series.iter().map(PowerSeries::derivative).collect(),
    }
}

/// `I'_n`, `J'_n` from the derivative recurrence
/// `I'_n = I'_{n-1} - p (z^n I_{n-1} - n ∫_0^z s^{n-1} I_{n-1}) / z^{n+1}`,
/// whose k-th term contributes `-p k a_k / (k + n)` at degree `k - 1`.
pub fn derivative_series_recurrence(rep: &PolyharmonicRep) -> DerivativeSeries {
    let step = |series: &[PowerSeries]| {
        let p = f64::from(rep.p);
        let mut out = vec![series[0].derivative()];
        for n in 1..series.len() {
            let prev_d = &out[n - 1];
            let prev = &series[n - 1];
            let len = prev.0.len().saturating_sub(1);
            let next = (0..len)
                .map(|j| {
                    let k = j + 1;
                    prev_d.coeff(j) - p * k as f64 * prev.coeff(k) / (k + n) as f64
                })
                .collect();
            out.push(PowerSeries(next));
        }
        out
    };
    DerivativeSeries {
        i_prime: step(&rep.i_series),
        j_prime: step(&rep.j_series),
    }
}

/// The constant `C = (1 + p Σ_{i=1}^{n} (i+1)(p+1)^{i-1}) M`, `n = p - 1`, with the
/// intermediate bounds `sup|I_n| ≤ (p+1)^n M`.
pub fn lipschitz_constant(rep: &PolyharmonicRep, m_bound: f64) -> Result<LipschitzReport> {
    if !(m_bound > 0.0 && m_bound.is_finite()) {
        return Err(Error::Invalid(format!("Lipschitz bound M = {m_bound} must be positive")));
    }
    let p = f64::from(rep.p);
    let mut per_n_sup = Vec::with_capacity(rep.p as usize);
    let mut weighted = 0.0;
    for n in 0..rep.p {
        if n > 0 {
            weighted += (f64::from(n) + 1.0) * (p + 1.0).powi(n as i32 - 1);
        }
        per_n_sup.push(SupBounds {
            n,
            sup_i: (p + 1.0).powi(n as i32) * m_bound,
            sup_i_prime: (1.0 + p * weighted) * m_bound,
        });
    }
    let c_bound = per_n_sup.last().map_or(m_bound, |s| s.sup_i_prime);
    Ok(LipschitzReport {
        p: rep.p,
        m_bound,
        c_bound,
        per_n_sup,
    })
}

/// Crude bound `|c_0| + Σ_{k≠0} |k| |c_k|` for `sup|h|`, `sup|g|`, `sup|h'|`, `sup|g'|`.
pub fn crude_m_bound(m: &AlphaHarmonicMap) -> f64 {
    m.coeffs()
        .iter()
        .map(|(k, c)| if k == 0 { c.norm() } else { k.unsigned_abs() as f64 * c.norm() })
        .sum()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::field::{eval_u, CoefficientSequence};
    use approx::assert_relative_eq;

    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    fn rep_of(alpha: f64, coeffs: CoefficientSequence) -> PolyharmonicRep {
        build_rep(&AlphaHarmonicMap::new(alpha, coeffs).unwrap()).unwrap()
    }

    #[test]
    fn harmonic_case_has_single_level() {
        let coeffs = CoefficientSequence::new().with(2, c(1.0, 1.0)).with(-1, c(0.5, -0.5));
        let rep = rep_of(0.0, coeffs);
        assert_eq!(rep.p(), 1);
        assert_eq!(rep.i_series().len(), 1);
        assert_eq!(rep.i_series()[0].coeff(2), c(1.0, 1.0));
        assert_eq!(rep.j_series()[0].coeff(1), c(0.5, 0.5));
    }

    #[test]
    fn biharmonic_square() {
        let rep = rep_of(2.0, CoefficientSequence::new().with(2, 1.0));
        let i1 = &rep.i_series()[1];
        assert_relative_eq!(i1.coeff(2).re, 1.0 / 3.0, max_relative = 1e-15);
        assert_eq!(i1.coeff(0), c(0.0, 0.0));
        assert_eq!(i1.coeff(1), c(0.0, 0.0));
        let d = derivative_series(&rep);
        assert_eq!(d.i_prime[0].coeff(1), c(2.0, 0.0));
        assert_relative_eq!(d.i_prime[1].coeff(1).re, 2.0 / 3.0, max_relative = 1e-15);
    }

    #[test]
    fn coefficient_ratio_closed_form() {
        let coeffs = (0..10).fold(CoefficientSequence::new(), |acc, k| acc.with(k, c(1.0 + k as f64, -0.5)));
        for p in 1..=5u32 {
            let rep = rep_of(2.0 * f64::from(p - 1), coeffs.clone());
            for n in 0..p {
                for k in 0..10u32 {
                    let got = rep.i_series()[n as usize].coeff(k as usize) / coeffs.get(i64::from(k));
                    assert_relative_eq!(got.re, closed_form_ratio(p, n, k), epsilon = 1e-14);
                    assert_relative_eq!(got.im, 0.0, epsilon = 1e-14);
                }
            }
        }
    }

    #[test]
    fn eval_rep_matches_biharmonic_closed_form() {
        for k in 0..10u32 {
            let rep = rep_of(2.0, CoefficientSequence::new().with(i64::from(k), 1.0));
            let kf = f64::from(k);
            for (r, th) in [(0.3, 0.2), (0.8, 2.9)] {
                let pt = DiskPoint::new(r, th).unwrap();
                let want = pt.z().powu(k) * (1.0 - r * r * (kf - 1.0) / (kf + 1.0));
                assert_relative_eq!((eval_rep(&rep, pt) - want).norm(), 0.0, epsilon = 1e-15);
            }
        }
    }

    #[test]
    fn eval_rep_matches_triharmonic_closed_form() {
        for k in 0..8u32 {
            let rep = rep_of(4.0, CoefficientSequence::new().with(i64::from(k), 1.0));
            let kf = f64::from(k);
            let pt = DiskPoint::new(0.7, 1.1).unwrap();
            let t = pt.t();
            let want = pt.z().powu(k)
                * (1.0 - 2.0 * t * (kf - 2.0) / (kf + 1.0)
                    + t * t * (kf - 1.0) * (kf - 2.0) / ((kf + 1.0) * (kf + 2.0)));
            assert_relative_eq!((eval_rep(&rep, pt) - want).norm(), 0.0, epsilon = 1e-14);
        }
    }

    #[test]
    fn eval_rep_at_origin_is_constant_term() {
        let coeffs = CoefficientSequence::new().with(0, c(0.3, 0.7)).with(3, 1.0).with(-2, c(0.0, 1.0));
        let rep = rep_of(6.0, coeffs);
        let origin = DiskPoint::new(0.0, 0.0).unwrap();
        assert_eq!(eval_rep(&rep, origin), c(0.3, 0.7));
    }

    #[test]
    fn eval_rep_matches_series() {
        let coeffs = CoefficientSequence::new()
            .with(0, c(0.1, 0.0))
            .with(1, c(1.0, -0.3))
            .with(5, c(0.2, 0.2))
            .with(-1, c(0.0, 0.4))
            .with(-4, c(-0.3, 0.1));
        for p in 1..=4u32 {
            let alpha = 2.0 * f64::from(p - 1);
            let m = AlphaHarmonicMap::new(alpha, coeffs.clone()).unwrap();
            let rep = build_rep(&m).unwrap();
            for (r, th) in [(0.1, 0.0), (0.6, 2.2), (0.99, 5.5)] {
                let pt = DiskPoint::new(r, th).unwrap();
                assert_relative_eq!((eval_rep(&rep, pt) - eval_u(&m, pt).unwrap()).norm(), 0.0, epsilon = 1e-13);
            }
        }
    }

    #[test]
    fn derivative_routes_agree() {
        let coeffs = CoefficientSequence::new().with(1, c(1.0, 0.5)).with(3, c(-0.4, 0.2)).with(-2, c(0.3, 0.3));
        let rep = rep_of(6.0, coeffs);
        let a = derivative_series(&rep);
        let b = derivative_series_recurrence(&rep);
        for (x, y) in a.i_prime.iter().zip(&b.i_prime).chain(a.j_prime.iter().zip(&b.j_prime)) {
            for k in 0..x.0.len().max(y.0.len()) {
                assert_relative_eq!((x.coeff(k) - y.coeff(k)).norm(), 0.0, epsilon = 1e-14);
            }
        }
    }

    #[test]
    fn lipschitz_constants() {
        let coeffs = CoefficientSequence::new().with(1, 1.0);
        assert_eq!(lipschitz_constant(&rep_of(0.0, coeffs.clone()), 2.0).unwrap().c_bound, 2.0);
        assert_eq!(lipschitz_constant(&rep_of(2.0, coeffs.clone()), 1.0).unwrap().c_bound, 5.0);
        let r3 = lipschitz_constant(&rep_of(4.0, coeffs.clone()), 1.0).unwrap();
        assert_eq!(r3.c_bound, 43.0);
        assert_eq!(r3.per_n_sup[2].sup_i, 16.0);
        assert!(lipschitz_constant(&rep_of(4.0, coeffs), 0.0).is_err());
    }

    #[test]
    fn non_even_alpha_rejected() {
        let m = AlphaHarmonicMap::new(1.0, CoefficientSequence::new().with(1, 1.0)).unwrap();
        assert!(matches!(build_rep(&m), Err(Error::Invalid(_))));
    }
}
