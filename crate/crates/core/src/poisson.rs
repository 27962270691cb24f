//! Poisson-type kernel `K_α` and the integral solution of the Dirichlet problem.

use std::f64::consts::TAU;

use num_complex::Complex64;

use crate::error::{check_alpha, Error, Result};
use crate::field::{AlphaHarmonicMap, CoefficientSequence, DiskPoint};
use crate::specfun::{f_k_at_one, ln_gamma, AlphaK};

/// Largest `|z|` accepted by [`solve_dirichlet`].
pub const MAX_SOLVE_RADIUS: f64 = 1.0 - 1e-3;
/// Smallest accepted quadrature node count.
pub const MIN_NODES: usize = 64;

/// Boundary data `u*` on the unit circle.
#[derive(Debug, Clone, PartialEq)]
pub enum BoundaryCurve {
    /// `u*(e^{iθ}) = Σ_{k≥0} d_k e^{ikθ} + Σ_{k≥1} d_{-k} e^{-ikθ}`.
    Modes(CoefficientSequence),
    /// Values at the uniform angles `θ_j = 2πj/n`.
    Samples(Vec<Complex64>),
}

impl BoundaryCurve {
    /// Trigonometric-polynomial form. Samples are interpolated by their
    /// discrete Fourier coefficients, the Nyquist mode split evenly.
    pub fn to_modes(&self) -> CoefficientSequence {
        match self {
            Self::Modes(m) => m.clone(),
            Self::Samples(values) => {
                let n = values.len();
                let mut modes = CoefficientSequence::new();
                if n == 0 {
                    return modes;
                }
                let half = n as i64 / 2;
                for k in (-(half)..=half).filter(|k| n % 2 == 1 || k.abs() < half || *k == half) {
                    let sum: Complex64 = values
                        .iter()
                        .enumerate()
                        .map(|(j, v)| v * Complex64::from_polar(1.0, -TAU * (k * j as i64) as f64 / n as f64))
                        .sum();
                    let mut d = sum / n as f64;
                    if n % 2 == 0 && k == half {
                        // e^{i n/2 θ} and e^{-i n/2 θ} coincide on the grid
                        d *= 0.5;
                        modes.set(-half, d);
                    }
                    modes.set(k, d);
                }
                modes
            }
        }
    }

    /// Value of the trigonometric polynomial at angle `theta`.
    pub fn eval(&self, theta: f64) -> Complex64 {
        eval_modes(&self.to_modes(), theta)
    }

    pub fn degree(&self) -> u32 {
        match self {
            Self::Modes(m) => m.max_index(),
            Self::Samples(v) => (v.len() / 2) as u32,
        }
    }
}

pub(crate) fn eval_modes(modes: &CoefficientSequence, theta: f64) -> Complex64 {
    modes
        .iter()
        .map(|(k, d)| d * Complex64::from_polar(1.0, k as f64 * theta))
        .sum()
}

/// `K_α(z) = c_α (1-|z|²)^(α+1) / |1-z|^(α+2)`, evaluated in log space.
pub fn kernel_k_alpha(alpha: f64, z: Complex64) -> Result<f64> {
    check_alpha(alpha)?;
    let t = z.norm_sqr();
    if !(t < 1.0) {
        return Err(Error::Domain(format!("kernel evaluated at |z| = {} >= 1", t.sqrt())));
    }
    let ln_c = 2.0 * ln_gamma(0.5 * alpha + 1.0)? - ln_gamma(1.0 + alpha)?;
    let ln_num = (alpha + 1.0) * (-t).ln_1p();
    let ln_den = 0.5 * (alpha + 2.0) * (1.0 - z).norm_sqr().ln();
    Ok((ln_c + ln_num - ln_den).exp())
}

/// Node count at which [`solve_dirichlet`] is expected to reach ~1e-12 for
/// boundary data of the given degree at radius `r`: the trapezoid error decays
/// like `r^(n - degree)`.
pub fn recommended_nodes(degree: u32, r: f64) -> usize {
    let decay = -r.clamp(1e-3, MAX_SOLVE_RADIUS).ln();
    let bound = 32.0 / decay + 2.0 * (f64::from(degree) + 1.0);
    (bound.ceil() as usize).max(MIN_NODES)
}

/// `(1/2π) ∫ K_α(z e^{-iτ}) u*(e^{iτ}) dτ` by the trapezoid rule on `n_nodes`
/// uniform nodes, summed in node order.
pub fn solve_dirichlet(alpha: f64, bc: &BoundaryCurve, p: DiskPoint, n_nodes: usize) -> Result<Complex64> {
    check_alpha(alpha)?;
    if p.r() > MAX_SOLVE_RADIUS {
        return Err(Error::Domain(format!(
            "|z| = {} is closer to the boundary than {MAX_SOLVE_RADIUS}",
            p.r()
        )));
    }
    if n_nodes < MIN_NODES {
        return Err(Error::Invalid(format!("n_nodes = {n_nodes} < {MIN_NODES}")));
    }
    let modes = bc.to_modes();
    let z = p.z();
    let mut sum = Complex64::new(0.0, 0.0);
    for j in 0..n_nodes {
        let tau = TAU * j as f64 / n_nodes as f64;
        let kernel = kernel_k_alpha(alpha, z * Complex64::from_polar(1.0, -tau))?;
        sum += kernel * eval_modes(&modes, tau);
    }
    Ok(sum / n_nodes as f64)
}

/// Boundary values of a map: `d_{±k} = c_{±k} F_k(1)`.
pub fn boundary_of_map(m: &AlphaHarmonicMap) -> Result<BoundaryCurve> {
    let mut modes = CoefficientSequence::new();
    for (k, c) in m.coeffs().iter() {
        let limit = f_k_at_one(AlphaK::new(m.alpha(), k.unsigned_abs() as u32)?)?;
        modes.set(k, c * limit);
    }
    Ok(BoundaryCurve::Modes(modes))
}

/// Inverse of [`boundary_of_map`]: the series solution with boundary data `bc`.
pub fn series_solution(alpha: f64, bc: &BoundaryCurve) -> Result<AlphaHarmonicMap> {
    let mut coeffs = CoefficientSequence::new();
    for (k, d) in bc.to_modes().iter() {
        let limit = f_k_at_one(AlphaK::new(alpha, k.unsigned_abs() as u32)?)?;
        coeffs.set(k, d / limit);
    }
    AlphaHarmonicMap::new(alpha, coeffs)
}

/// Classical harmonic extension `Σ d_k z^k + Σ d_{-k} z̄^k`.
pub fn harmonic_extension(bc: &BoundaryCurve, p: DiskPoint) -> Complex64 {
    crate::field::eval_v(&bc.to_modes(), p)
}

/// `(1/2π) ∫ K_α(z e^{-iτ}) dτ` by the trapezoid rule.
pub fn kernel_mean(alpha: f64, p: DiskPoint, n_nodes: usize) -> Result<f64> {
    let z = p.z();
    let mut sum = 0.0;
    for j in 0..n_nodes {
        sum += kernel_k_alpha(alpha, z * Complex64::from_polar(1.0, -TAU * j as f64 / n_nodes as f64))?;
    }
    Ok(sum / n_nodes as f64)
}
