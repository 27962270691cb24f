//! α-harmonic maps given by their coefficient sequence, and the corresponding
//! harmonic maps.
//!
//! A map with coefficients `{c_k}` and weight `α > -1` is
//!
//! ```text
//! u(z) = Σ_{k≥0} c_k F_k(|z|²) z^k + Σ_{k≥1} c_{-k} F_k(|z|²) z̄^k,
//! F_k(t) = F(-α/2, k - α/2; k + 1; t),
//! ```
//!
//! and the corresponding harmonic map `v` drops the `F_k` factors. Only
//! finitely supported sequences are represented.

use std::collections::BTreeMap;
use std::f64::consts::TAU;

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{check_alpha, Error, Result};
use crate::specfun::{polyharmonic_order, AlphaK};

/// Largest radius at which non-polynomial series are evaluated.
pub const MAX_SERIES_RADIUS: f64 = 1.0 - 1e-4;

/// Default finite-difference step for [`t_alpha_residual`].
pub const DEFAULT_FD_STEP: f64 = 1e-4;

/// Finitely supported two-sided sequence `{c_k}`, `k ∈ ℤ`. Zeros are not stored.
#[derive(Debug, Clone, Default, PartialEq)]
pub struct CoefficientSequence {
    entries: BTreeMap<i64, Complex64>,
}

impl CoefficientSequence {
    pub fn new() -> Self {
        Self::default()
    }

    /// Builds a sequence from `(k, c_k)` pairs, rejecting repeated indices.
    pub fn from_pairs<I>(pairs: I) -> Result<Self>
    where
        I: IntoIterator<Item = (i64, Complex64)>,
    {
        let mut seen = std::collections::BTreeSet::new();
        let mut out = Self::new();
        for (k, c) in pairs {
            if !seen.insert(k) {
                return Err(Error::Invalid(format!("duplicate coefficient index k = {k}")));
            }
            if !(c.re.is_finite() && c.im.is_finite()) {
                return Err(Error::Invalid(format!("non-finite coefficient at k = {k}")));
            }
            out.set(k, c);
        }
        Ok(out)
    }

    /// Builder form of [`set`](Self::set).
    pub fn with(mut self, k: i64, c: impl Into<Complex64>) -> Self {
        self.set(k, c.into());
        self
    }

    pub fn set(&mut self, k: i64, c: Complex64) {
        if c == Complex64::new(0.0, 0.0) {
            self.entries.remove(&k);
        } else {
            self.entries.insert(k, c);
        }
    }

    pub fn get(&self, k: i64) -> Complex64 {
        self.entries.get(&k).copied().unwrap_or_default()
    }

    /// Nonzero entries in increasing index order.
    pub fn iter(&self) -> impl Iterator<Item = (i64, Complex64)> + '_ {
        self.entries.iter().map(|(k, c)| (*k, *c))
    }

    pub fn len(&self) -> usize {
        self.entries.len()
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }

    /// Largest `|k|` with a nonzero coefficient (0 for the empty sequence).
    pub fn max_index(&self) -> u32 {
        self.entries
            .keys()
            .map(|k| k.unsigned_abs() as u32)
            .max()
            .unwrap_or(0)
    }

    /// Distinct `|k|` values in the support.
    pub fn frequencies(&self) -> Vec<u32> {
        let mut ks: Vec<u32> = self.entries.keys().map(|k| k.unsigned_abs() as u32).collect();
        ks.sort_unstable();
        ks.dedup();
        ks
    }

    pub fn scaled(&self, s: Complex64) -> Self {
        let mut out = Self::new();
        for (k, c) in self.iter() {
            out.set(k, c * s);
        }
        out
    }

    pub fn plus(&self, other: &Self) -> Self {
        let mut out = self.clone();
        for (k, c) in other.iter() {
            out.set(k, out.get(k) + c);
        }
        out
    }

    /// The sequence `k ↦ conj(c_{-k})`, whose map is the pointwise conjugate.
    pub fn reflected_conj(&self) -> Self {
        let mut out = Self::new();
        for (k, c) in self.iter() {
            out.set(-k, c.conj());
        }
        out
    }

    /// The sequence `k ↦ conj(c_k)`, whose map is `z ↦ conj(u(z̄))`.
    pub fn conj(&self) -> Self {
        let mut out = Self::new();
        for (k, c) in self.iter() {
            out.set(k, c.conj());
        }
        out
    }
}

/// A point `z = r e^{iθ}` of the open unit disk.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct DiskPoint {
    r: f64,
    theta: f64,
}

impl DiskPoint {
    pub fn new(r: f64, theta: f64) -> Result<Self> {
        if !(r.is_finite() && theta.is_finite()) || !(0.0..1.0).contains(&r) {
            return Err(Error::Domain(format!("point (r = {r}, θ = {theta}) not in the open disk")));
        }
        Ok(Self {
            r,
            theta: theta.rem_euclid(TAU),
        })
    }

    pub fn from_complex(z: Complex64) -> Result<Self> {
        Self::new(z.norm(), z.arg())
    }

    pub fn r(&self) -> f64 {
        self.r
    }

    pub fn theta(&self) -> f64 {
        self.theta
    }

    /// `t = |z|²`.
    pub fn t(&self) -> f64 {
        self.r * self.r
    }

    pub fn z(&self) -> Complex64 {
        Complex64::from_polar(self.r, self.theta)
    }
}

/// Wirtinger derivatives `(∂u/∂z, ∂u/∂z̄)` at a point.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct WirtingerPair {
    pub u_z: Complex64,
    pub u_zbar: Complex64,
}

impl WirtingerPair {
    pub fn jacobian(&self) -> f64 {
        self.u_z.norm_sqr() - self.u_zbar.norm_sqr()
    }

    /// `∂u/∂x = u_z + u_z̄`.
    pub fn d_dx(&self) -> Complex64 {
        self.u_z + self.u_zbar
    }

    /// `∂u/∂y = i (u_z - u_z̄)`.
    pub fn d_dy(&self) -> Complex64 {
        Complex64::i() * (self.u_z - self.u_zbar)
    }
}

/// Values `F_k(t)` and `F_k'(t)` for every frequency of a map at one radius.
///
/// Everything on a circle `|z| = r` shares these, so grid evaluations build
/// one profile per radius.
#[derive(Debug, Clone)]
pub struct RadialProfile {
    t: f64,
    modes: BTreeMap<u32, (f64, f64)>,
}

impl RadialProfile {
    pub fn t(&self) -> f64 {
        self.t
    }

    /// `(F_k(t), F_k'(t))`; zero for frequencies not in the profile.
    pub fn mode(&self, k: u32) -> (f64, f64) {
        self.modes.get(&k).copied().unwrap_or((0.0, 0.0))
    }
}

/// The map `u` of weight `alpha` with coefficient sequence `coeffs`.
#[derive(Debug, Clone, PartialEq)]
pub struct AlphaHarmonicMap {
    alpha: f64,
    coeffs: CoefficientSequence,
    order: Option<u32>,
}

impl AlphaHarmonicMap {
    pub fn new(alpha: f64, coeffs: CoefficientSequence) -> Result<Self> {
        check_alpha(alpha)?;
        Ok(Self {
            alpha,
            coeffs,
            order: polyharmonic_order(alpha),
        })
    }

    pub fn alpha(&self) -> f64 {
        self.alpha
    }

    pub fn coeffs(&self) -> &CoefficientSequence {
        &self.coeffs
    }

    /// `Some(p)` when α = 2(p - 1), i.e. the map is p-harmonic.
    pub fn polyharmonic_order(&self) -> Option<u32> {
        self.order
    }

    /// Largest radius at which the map may be evaluated.
    pub fn max_radius(&self) -> f64 {
        if self.order.is_some() {
            1.0
        } else {
            MAX_SERIES_RADIUS
        }
    }

    fn check_radius(&self, r: f64) -> Result<()> {
        if self.order.is_none() && r > MAX_SERIES_RADIUS {
            return Err(Error::Domain(format!(
                "r = {r} exceeds the series evaluation radius {MAX_SERIES_RADIUS} for alpha = {}",
                self.alpha
            )));
        }
        Ok(())
    }

    pub fn profile(&self, r: f64) -> Result<RadialProfile> {
        self.check_radius(r)?;
        let t = r * r;
        let modes = self
            .coeffs
            .frequencies()
            .into_iter()
            .map(|k| Ok((k, AlphaK::new(self.alpha, k)?.eval(t)?)))
            .collect::<Result<_>>()?;
        Ok(RadialProfile { t, modes })
    }

    /// Value at `z`, with `|z|² = profile.t()`.
    pub fn eval_on(&self, profile: &RadialProfile, z: Complex64) -> Complex64 {
        self.coeffs
            .iter()
            .map(|(k, c)| {
                let n = k.unsigned_abs() as u32;
                let (f, _) = profile.mode(n);
                let power = if k >= 0 { z.powu(n) } else { z.conj().powu(n) };
                c * f * power
            })
            .sum()
    }

    /// Wirtinger derivatives at `z`, with `|z|² = profile.t()`.
    pub fn wirtinger_on(&self, profile: &RadialProfile, z: Complex64) -> WirtingerPair {
        let zb = z.conj();
        let mut u_z = Complex64::new(0.0, 0.0);
        let mut u_zbar = Complex64::new(0.0, 0.0);
        for (k, c) in self.coeffs.iter() {
            let n = k.unsigned_abs() as u32;
            let (f, ft) = profile.mode(n);
            let nf = f64::from(n);
            if k >= 0 {
                // ∂z [F(t) z^n] = F' z̄ z^n + n F z^(n-1),  ∂z̄ [F(t) z^n] = F' z^(n+1)
                let zn = z.powu(n);
                let lower = if n == 0 { Complex64::new(0.0, 0.0) } else { nf * f * z.powu(n - 1) };
                u_z += c * (ft * zb * zn + lower);
                u_zbar += c * ft * z * zn;
            } else {
                let zbn = zb.powu(n);
                u_z += c * ft * zb * zbn;
                u_zbar += c * (ft * z * zbn + nf * f * zb.powu(n - 1));
            }
        }
        WirtingerPair { u_z, u_zbar }
    }
}

/// Evaluates `u` at a point of the disk.
pub fn eval_u(m: &AlphaHarmonicMap, p: DiskPoint) -> Result<Complex64> {
    Ok(m.eval_on(&m.profile(p.r())?, p.z()))
}

/// Evaluates the harmonic map `v(z) = Σ c_k z^k + Σ c_{-k} z̄^k`.
pub fn eval_v(coeffs: &CoefficientSequence, p: DiskPoint) -> Complex64 {
    let z = p.z();
    coeffs
        .iter()
        .map(|(k, c)| {
            let n = k.unsigned_abs() as u32;
            if k >= 0 {
                c * z.powu(n)
            } else {
                c * z.conj().powu(n)
            }
        })
        .sum()
}

pub fn wirtinger(m: &AlphaHarmonicMap, p: DiskPoint) -> Result<WirtingerPair> {
    Ok(m.wirtinger_on(&m.profile(p.r())?, p.z()))
}

/// `J_u = |u_z|² - |u_z̄|²`.
pub fn jacobian(m: &AlphaHarmonicMap, p: DiskPoint) -> Result<f64> {
    Ok(wirtinger(m, p)?.jacobian())
}

/// `|T_α u|` at `p` from central differences with step `h`.
///
/// The operator is
///
/// ```text
/// T_α = -α²/4 (1-|z|²)^(-α-1) + α/2 (1-|z|²)^(-α-1) (z ∂_z + z̄ ∂_z̄) + (1-|z|²)^(-α) ∂_z ∂_z̄
/// ```
///
/// with `∂_z ∂_z̄ = Δ/4`; this normalisation is the one annihilating the
/// hypergeometric series. `Δ` uses the five-point stencil and the radial
/// operator `z ∂_z + z̄ ∂_z̄ = x ∂_x + y ∂_y` uses first central differences.
pub fn t_alpha_residual(m: &AlphaHarmonicMap, p: DiskPoint, h: f64) -> Result<f64> {
    t_alpha_residual_of(m.alpha(), |z| eval_u(m, DiskPoint::from_complex(z)?), p, h)
}

/// [`t_alpha_residual`] for an arbitrary function `u` on the disk.
pub fn t_alpha_residual_of<F>(alpha: f64, u: F, p: DiskPoint, h: f64) -> Result<f64>
where
    F: Fn(Complex64) -> Result<Complex64>,
{
    check_alpha(alpha)?;
    if !(1e-6..=1e-3).contains(&h) {
        return Err(Error::Invalid(format!("finite-difference step h = {h} outside [1e-6, 1e-3]")));
    }
    if p.r() + 2.0 * h >= MAX_SERIES_RADIUS {
        return Err(Error::Domain(format!(
            "stencil at r = {} with h = {h} reaches past r = {MAX_SERIES_RADIUS}",
            p.r()
        )));
    }
    let z = p.z();
    let u0 = u(z)?;
    let ue = u(z + h)?;
    let uw = u(z - h)?;
    let un = u(z + Complex64::new(0.0, h))?;
    let us = u(z - Complex64::new(0.0, h))?;

    let laplacian = (ue + uw + un + us - 4.0 * u0) / (h * h);
    let u_x = (ue - uw) / (2.0 * h);
    let u_y = (un - us) / (2.0 * h);
    let radial = z.re * u_x + z.im * u_y;

    let one_minus_t = 1.0 - p.t();
    let w_low = one_minus_t.powf(-alpha - 1.0);
    let w_lap = one_minus_t.powf(-alpha);
    let value =
        -0.25 * alpha * alpha * w_low * u0 + 0.5 * alpha * w_low * radial + 0.25 * w_lap * laplacian;
    Ok(value.norm())
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_relative_eq;
    use std::f64::consts::FRAC_PI_2;

    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    fn pt(r: f64, theta: f64) -> DiskPoint {
        DiskPoint::new(r, theta).unwrap()
    }

    #[test]
    fn eval_v_examples() {
        let coeffs = CoefficientSequence::new().with(1, 1.0).with(-1, 0.5);
        assert_relative_eq!(eval_v(&coeffs, pt(0.5, 0.0)).re, 0.75);
        let coeffs = CoefficientSequence::new().with(0, c(0.0, 1.0));
        assert_eq!(eval_v(&coeffs, pt(0.3, 1.1)), c(0.0, 1.0));
        let coeffs = CoefficientSequence::new().with(2, 1.0);
        let v = eval_v(&coeffs, pt(0.5, FRAC_PI_2));
        assert_relative_eq!(v.re, -0.25, epsilon = 1e-15);
        assert_relative_eq!(v.im, 0.0, epsilon = 1e-15);
    }

    #[test]
    fn alpha_zero_is_harmonic() {
        let coeffs = CoefficientSequence::new().with(0, c(0.2, -0.1)).with(3, c(1.0, 0.5)).with(-2, c(-0.3, 0.7));
        let m = AlphaHarmonicMap::new(0.0, coeffs.clone()).unwrap();
        for (r, th) in [(0.0, 0.0), (0.4, 1.0), (0.95, 4.0)] {
            let p = pt(r, th);
            assert_relative_eq!((eval_u(&m, p).unwrap() - eval_v(&coeffs, p)).norm(), 0.0, epsilon = 1e-15);
        }
    }

    #[test]
    fn alpha_two_single_mode_is_identity() {
        let m = AlphaHarmonicMap::new(2.0, CoefficientSequence::new().with(1, 1.0)).unwrap();
        for (r, th) in [(0.1, 0.3), (0.7, 2.0), (0.999, 5.0)] {
            let p = pt(r, th);
            assert_relative_eq!((eval_u(&m, p).unwrap() - p.z()).norm(), 0.0, epsilon = 1e-15);
        }
    }

    #[test]
    fn zero_map() {
        let m = AlphaHarmonicMap::new(1.3, CoefficientSequence::new()).unwrap();
        assert_eq!(eval_u(&m, pt(0.5, 0.5)).unwrap(), c(0.0, 0.0));
    }

    #[test]
    fn series_radius_enforced() {
        let m = AlphaHarmonicMap::new(1.5, CoefficientSequence::new().with(1, 1.0)).unwrap();
        assert!(matches!(eval_u(&m, pt(0.99995, 0.0)), Err(Error::Domain(_))));
        let even = AlphaHarmonicMap::new(4.0, CoefficientSequence::new().with(1, 1.0)).unwrap();
        assert!(eval_u(&even, pt(0.99995, 0.0)).is_ok());
        assert!(DiskPoint::new(1.0, 0.0).is_err());
    }

    #[test]
    fn duplicate_indices_rejected() {
        let err = CoefficientSequence::from_pairs([(1, c(1.0, 0.0)), (1, c(2.0, 0.0))]);
        assert!(matches!(err, Err(Error::Invalid(_))));
    }

    #[test]
    fn identity_and_anti_identity_jacobians() {
        let id = AlphaHarmonicMap::new(0.0, CoefficientSequence::new().with(1, 1.0)).unwrap();
        let anti = AlphaHarmonicMap::new(0.0, CoefficientSequence::new().with(-1, 1.0)).unwrap();
        for (r, th) in [(0.0, 0.0), (0.3, 1.0), (0.9, 3.0)] {
            let w = wirtinger(&id, pt(r, th)).unwrap();
            assert_relative_eq!((w.u_z - 1.0).norm(), 0.0, epsilon = 1e-15);
            assert_relative_eq!(w.u_zbar.norm(), 0.0, epsilon = 1e-15);
            assert_relative_eq!(jacobian(&id, pt(r, th)).unwrap(), 1.0, epsilon = 1e-15);
            assert_relative_eq!(jacobian(&anti, pt(r, th)).unwrap(), -1.0, epsilon = 1e-15);
        }
    }

    #[test]
    fn co_analytic_mode_u_zbar_closed_form() {
        // α = 2: F_k = 1 - (k-1)/(k+1) t, F_k' = -(k-1)/(k+1)
        let k = 3u32;
        let cc = c(0.4, -0.2);
        let m = AlphaHarmonicMap::new(2.0, CoefficientSequence::new().with(-(k as i64), cc)).unwrap();
        let (r, th) = (0.6, 0.8);
        let kf = f64::from(k);
        let t = r * r;
        let f = 1.0 - (kf - 1.0) / (kf + 1.0) * t;
        let ft = -(kf - 1.0) / (kf + 1.0);
        let want = cc * (ft * r.powi(k as i32 + 1) + kf * f * r.powi(k as i32 - 1)) * Complex64::from_polar(1.0, -(kf - 1.0) * th);
        let got = wirtinger(&m, pt(r, th)).unwrap().u_zbar;
        assert_relative_eq!((got - want).norm(), 0.0, epsilon = 1e-14);
    }

    fn fd_wirtinger(m: &AlphaHarmonicMap, p: DiskPoint, h: f64) -> WirtingerPair {
        let z = p.z();
        let at = |dz: Complex64| eval_u(m, DiskPoint::from_complex(z + dz).unwrap()).unwrap();
        let ux = (at(c(h, 0.0)) - at(c(-h, 0.0))) / (2.0 * h);
        let uy = (at(c(0.0, h)) - at(c(0.0, -h))) / (2.0 * h);
        WirtingerPair {
            u_z: 0.5 * (ux - Complex64::i() * uy),
            u_zbar: 0.5 * (ux + Complex64::i() * uy),
        }
    }

    #[test]
    fn wirtinger_matches_finite_differences() {
        let coeffs = CoefficientSequence::new()
            .with(0, c(0.5, 0.1))
            .with(1, c(1.0, 0.0))
            .with(2, c(0.2, 0.3))
            .with(-1, c(0.1, -0.4))
            .with(-3, c(0.25, 0.05));
        for alpha in [-0.6, 0.0, 0.7, 2.0, 3.5] {
            let m = AlphaHarmonicMap::new(alpha, coeffs.clone()).unwrap();
            for (r, th) in [(0.2, 0.1), (0.55, 2.3), (0.8, 4.4)] {
                let p = pt(r, th);
                let w = wirtinger(&m, p).unwrap();
                let fd = fd_wirtinger(&m, p, 1e-5);
                assert!((w.u_z - fd.u_z).norm() <= 1e-5 * (1.0 + w.u_z.norm()), "alpha {alpha} r {r}");
                assert!((w.u_zbar - fd.u_zbar).norm() <= 1e-5 * (1.0 + w.u_zbar.norm()), "alpha {alpha} r {r}");
            }
        }
    }

    #[test]
    fn jacobian_matches_finite_differences() {
        let coeffs = CoefficientSequence::new().with(1, 1.0).with(-2, 0.1);
        let m = AlphaHarmonicMap::new(2.0, coeffs).unwrap();
        let p = pt(0.5, 0.0);
        let fd = fd_wirtinger(&m, p, 1e-5).jacobian();
        assert_relative_eq!(jacobian(&m, p).unwrap(), fd, epsilon = 1e-6);
    }

    #[test]
    fn residual_examples() {
        let coeffs = CoefficientSequence::new().with(1, c(1.0, 0.2)).with(-2, c(0.3, 0.0)).with(0, c(0.1, 0.1));
        for alpha in [-0.5, 0.0, 1.0, 2.0, 4.0] {
            let m = AlphaHarmonicMap::new(alpha, coeffs.clone()).unwrap();
            for (r, th) in [(0.1, 0.0), (0.5, 1.0), (0.8, 2.5)] {
                let p = pt(r, th);
                let u = eval_u(&m, p).unwrap().norm();
                let res = t_alpha_residual(&m, p, DEFAULT_FD_STEP).unwrap();
                assert!(res <= 1e-4 * (1.0 + u), "alpha {alpha} r {r}: {res}");
            }
        }
    }

    #[test]
    fn residual_detects_non_solution() {
        // ∂_z ∂_z̄ |z|² = Δ|z|² / 4 = 1
        let probe = |z: Complex64| Ok(Complex64::new(z.norm_sqr(), 0.0));
        let res = t_alpha_residual_of(0.0, probe, pt(0.4, 0.7), 1e-4).unwrap();
        assert_relative_eq!(res, 1.0, epsilon = 1e-6);
        let v = CoefficientSequence::new().with(3, c(0.5, 0.5)).with(-1, 1.0);
        let harmonic = |z: Complex64| Ok(eval_v(&v, DiskPoint::from_complex(z)?));
        let p = pt(0.6, 2.0);
        let res = t_alpha_residual_of(0.0, harmonic, p, 1e-4).unwrap();
        assert!(res <= 1e-4 * (1.0 + eval_v(&v, p).norm()));
    }

    #[test]
    fn residual_preconditions() {
        let m = AlphaHarmonicMap::new(1.0, CoefficientSequence::new().with(1, 1.0)).unwrap();
        assert!(t_alpha_residual(&m, pt(0.5, 0.0), 1e-2).is_err());
        assert!(t_alpha_residual(&m, pt(0.9999, 0.0), 1e-4).is_err());
    }
}
