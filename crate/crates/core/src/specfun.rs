//! Real special functions used throughout the crate.
//!
//! Gamma is a Lanczos approximation (g = 7, nine terms) with exact factorials
//! on the positive integers, digamma and trigamma shift their argument above
//! [`ASYMPTOTIC_THRESHOLD`] with the unit recurrence and then use the
//! Stirling-type asymptotic series. The Gauss hypergeometric function is
//! summed directly as a power series; terminating parameter sets are detected
//! and summed as exact polynomials.

use std::f64::consts::PI;

use serde::{Deserialize, Serialize};

use crate::error::{check_alpha, Error, Result};

/// Euler–Mascheroni constant.
pub const EULER_GAMMA: f64 = 0.577_215_664_901_532_9;

/// Relative size below which a series term counts as negligible.
pub const SERIES_REL_TOL: f64 = 1e-16;
/// Number of consecutive negligible terms required to stop summing.
pub const SERIES_QUIET_TERMS: usize = 3;
/// Hard cap on the number of series terms.
pub const SERIES_MAX_TERMS: usize = 1_000_000;
/// Distance within which a parameter is snapped to an integer.
pub const INTEGER_SNAP: f64 = 1e-12;
/// Largest argument for which `gamma` is finite in double precision.
pub const GAMMA_MAX_ARG: f64 = 171.624_376_956_302_7;

const ASYMPTOTIC_THRESHOLD: f64 = 10.0;

const LANCZOS_G: f64 = 7.0;
const LANCZOS_COEFFS: [f64; 9] = [
    0.999_999_999_999_809_93,
    676.520_368_121_885_1,
    -1_259.139_216_722_402_8,
    771.323_428_777_653_13,
    -176.615_029_162_140_59,
    12.507_343_278_686_905,
    -0.138_571_095_265_720_12,
    9.984_369_578_019_571_6e-6,
    1.505_632_735_149_311_6e-7,
];

fn check_positive(name: &str, x: f64) -> Result<()> {
    if x.is_nan() || x <= 0.0 {
        return Err(Error::Domain(format!("{name} requires x > 0, got {x}")));
    }
    Ok(())
}

/// Lanczos partial-fraction sum for the shifted argument `x - 1`.
fn lanczos_sum(xm1: f64) -> f64 {
    LANCZOS_COEFFS
        .iter()
        .enumerate()
        .skip(1)
        .fold(LANCZOS_COEFFS[0], |acc, (i, c)| acc + c / (xm1 + i as f64))
}

/// Returns `Some(n)` when `x` is (within [`INTEGER_SNAP`]) the integer `n`.
fn snapped_integer(x: f64) -> Option<f64> {
    let r = x.round();
    ((x - r).abs() <= INTEGER_SNAP).then_some(r)
}

/// If `x` is a nonpositive integer (within [`INTEGER_SNAP`]) returns its magnitude.
pub fn nonpositive_integer(x: f64) -> Option<u64> {
    snapped_integer(x).filter(|r| *r <= 0.0).map(|r| (-r) as u64)
}

/// Gamma function for positive arguments.
pub fn gamma(x: f64) -> Result<f64> {
    check_positive("gamma", x)?;
    if x > GAMMA_MAX_ARG {
        return Err(Error::Overflow(format!("gamma({x}) exceeds f64 range")));
    }
    if let Some(n) = snapped_integer(x) {
        if n >= 1.0 {
            // exact factorial (n - 1)!
            return Ok((2..n as u64).fold(1.0, |acc, i| acc * i as f64));
        }
    }
    if x < 0.5 {
        return Ok(gamma(x + 1.0)? / x);
    }
    let xm1 = x - 1.0;
    let t = xm1 + LANCZOS_G + 0.5;
    // split the power so t^(x - 1/2) cannot overflow before e^-t is applied
    let half = t.powf(0.5 * (xm1 + 0.5));
    Ok((2.0 * PI).sqrt() * lanczos_sum(xm1) * half * (half * (-t).exp()))
}

/// Natural logarithm of the Gamma function for positive arguments.
pub fn ln_gamma(x: f64) -> Result<f64> {
    check_positive("ln_gamma", x)?;
    if x < 0.5 {
        return Ok(ln_gamma(x + 1.0)? - x.ln());
    }
    let xm1 = x - 1.0;
    let t = xm1 + LANCZOS_G + 0.5;
    Ok(0.5 * (2.0 * PI).ln() + (xm1 + 0.5) * t.ln() - t + lanczos_sum(xm1).ln())
}

/// `Γ(x) / Γ(y)`, falling back to log space when either factor would overflow.
pub fn gamma_ratio(x: f64, y: f64) -> Result<f64> {
    if x <= 170.0 && y <= 170.0 {
        Ok(gamma(x)? / gamma(y)?)
    } else {
        Ok((ln_gamma(x)? - ln_gamma(y)?).exp())
    }
}

/// Digamma ψ(x) = Γ'(x)/Γ(x).
pub fn digamma(x: f64) -> Result<f64> {
    check_positive("digamma", x)?;
    let mut x = x;
    let mut shift = 0.0;
    // ψ(x) = ψ(x + 1) - 1/x
    while x < ASYMPTOTIC_THRESHOLD {
        shift -= 1.0 / x;
        x += 1.0;
    }
    let inv2 = 1.0 / (x * x);
    let tail = inv2
        * (1.0 / 12.0
            - inv2
                * (1.0 / 120.0
                    - inv2
                        * (1.0 / 252.0
                            - inv2
                                * (1.0 / 240.0
                                    - inv2 * (1.0 / 132.0 - inv2 * (691.0 / 32_760.0 - inv2 / 12.0))))));
    Ok(shift + x.ln() - 0.5 / x - tail)
}

/// Trigamma ψ'(x).
pub fn trigamma(x: f64) -> Result<f64> {
    check_positive("trigamma", x)?;
    let mut x = x;
    let mut shift = 0.0;
    while x < ASYMPTOTIC_THRESHOLD {
        shift += 1.0 / (x * x);
        x += 1.0;
    }
    let inv = 1.0 / x;
    let inv2 = inv * inv;
    // 1/x + 1/(2x^2) + Σ B_2n / x^(2n+1)
    let bern = inv2
        * (1.0 / 6.0
            - inv2
                * (1.0 / 30.0
                    - inv2
                        * (1.0 / 42.0
                            - inv2 * (1.0 / 30.0 - inv2 * (5.0 / 66.0 - inv2 * (691.0 / 2730.0 - inv2 * 7.0 / 6.0))))));
    Ok(shift + inv + 0.5 * inv2 + inv * bern)
}

/// Rising factorial (a)_n = a (a + 1) ... (a + n - 1).
pub fn pochhammer(a: f64, n: u32) -> f64 {
    let has_zero_factor = nonpositive_integer(a).is_some_and(|m| m < u64::from(n));
    if n > 64 && a > 0.0 && !has_zero_factor {
        if let Ok(v) = gamma_ratio(a + f64::from(n), a) {
            return v;
        }
    }
    (0..n).fold(1.0, |acc, i| acc * (a + f64::from(i)))
}

/// Parameters (a, b; c) of a Gauss hypergeometric function.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct HyperTriple {
    pub a: f64,
    pub b: f64,
    pub c: f64,
}

impl HyperTriple {
    pub fn new(a: f64, b: f64, c: f64) -> Result<Self> {
        if !(a.is_finite() && b.is_finite() && c.is_finite()) {
            return Err(Error::Domain(format!("non-finite parameters ({a}, {b}; {c})")));
        }
        if nonpositive_integer(c).is_some() {
            return Err(Error::Domain(format!(
                "c = {c} is a nonpositive integer, the series is undefined"
            )));
        }
        Ok(Self { a, b, c })
    }

    /// Degree of the polynomial when a or b is a nonpositive integer.
    pub fn terminating_degree(&self) -> Option<u64> {
        match (nonpositive_integer(self.a), nonpositive_integer(self.b)) {
            (Some(m), Some(n)) => Some(m.min(n)),
            (m, n) => m.or(n),
        }
    }

    /// Parameters of the derivative series, `F' = (ab/c) F(a+1, b+1; c+1)`.
    pub fn shifted(&self) -> Self {
        Self {
            a: self.a + 1.0,
            b: self.b + 1.0,
            c: self.c + 1.0,
        }
    }
}

/// F(a, b; c; t) for t in [0, 1), or t in [0, 1] when the series terminates.
pub fn hyper_f(p: HyperTriple, t: f64) -> Result<f64> {
    if t.is_nan() || t < 0.0 {
        return Err(Error::Domain(format!("hypergeometric argument t = {t} outside [0, 1)")));
    }
    if let Some(degree) = p.terminating_degree() {
        if t > 1.0 {
            return Err(Error::Domain(format!("polynomial evaluated at t = {t} > 1")));
        }
        let snap = |x: f64| nonpositive_integer(x).map_or(x, |m| -(m as f64));
        let (a, b) = (snap(p.a), snap(p.b));
        let mut term = 1.0;
        let mut sum = 1.0;
        for n in 0..degree {
            let n = n as f64;
            term *= (a + n) * (b + n) / ((p.c + n) * (n + 1.0)) * t;
            sum += term;
        }
        return Ok(sum);
    }
    if t >= 1.0 {
        return Err(Error::Domain(format!(
            "non-terminating series evaluated at t = {t}; use the closed-form limit at t = 1"
        )));
    }
    let mut term = 1.0;
    let mut sum = 1.0;
    let mut quiet = 0;
    for n in 0..SERIES_MAX_TERMS {
        let nf = n as f64;
        term *= (p.a + nf) * (p.b + nf) / ((p.c + nf) * (nf + 1.0)) * t;
        sum += term;
        if term.abs() <= SERIES_REL_TOL * sum.abs() {
            quiet += 1;
            if quiet == SERIES_QUIET_TERMS {
                return Ok(sum);
            }
        } else {
            quiet = 0;
        }
    }
    Err(Error::NoConvergence {
        a: p.a,
        b: p.b,
        c: p.c,
        t,
        terms: SERIES_MAX_TERMS,
    })
}

/// dF/dt via the contiguous relation `F' = (ab/c) F(a+1, b+1; c+1; t)`.
pub fn hyper_f_t(p: HyperTriple, t: f64) -> Result<f64> {
    let factor = p.a * p.b / p.c;
    if factor == 0.0 || p.a.abs() <= INTEGER_SNAP || p.b.abs() <= INTEGER_SNAP {
        return Ok(0.0);
    }
    Ok(factor * hyper_f(p.shifted(), t)?)
}

/// The pair (α, k) selecting `F_k = F(-α/2, k - α/2; k + 1; t)`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct AlphaK {
    pub alpha: f64,
    pub k: u32,
}

impl AlphaK {
    pub fn new(alpha: f64, k: u32) -> Result<Self> {
        check_alpha(alpha)?;
        Ok(Self { alpha, k })
    }

    pub fn triple(&self) -> HyperTriple {
        let half = 0.5 * self.alpha;
        HyperTriple {
            a: -half,
            b: f64::from(self.k) - half,
            c: f64::from(self.k) + 1.0,
        }
    }

    /// `(F_k(t), dF_k/dt(t))`.
    pub fn eval(&self, t: f64) -> Result<(f64, f64)> {
        let p = self.triple();
        Ok((hyper_f(p, t)?, hyper_f_t(p, t)?))
    }
}

/// F_k(1) = Γ(k+1) Γ(1+α) / (Γ(k+1+α/2) Γ(1+α/2)).
pub fn f_k_at_one(ak: AlphaK) -> Result<f64> {
    check_alpha(ak.alpha)?;
    let k = f64::from(ak.k);
    let half = 0.5 * ak.alpha;
    Ok(gamma_ratio(k + 1.0, k + 1.0 + half)? * gamma_ratio(1.0 + ak.alpha, 1.0 + half)?)
}

/// Normalisation c_α = Γ(α/2 + 1)² / Γ(1 + α) of the Poisson-type kernel.
pub fn c_alpha(alpha: f64) -> Result<f64> {
    check_alpha(alpha)?;
    let g = gamma(0.5 * alpha + 1.0)?;
    Ok(g * g / gamma(1.0 + alpha)?)
}

/// `Some(p)` with α = 2(p - 1) when α/2 is a nonnegative integer.
pub fn polyharmonic_order(alpha: f64) -> Option<u32> {
    snapped_integer(0.5 * alpha)
        .filter(|h| *h >= 0.0 && *h < f64::from(u32::MAX - 1))
        .map(|h| h as u32 + 1)
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_relative_eq;

    const GAMMA_REF: [(f64, f64); 8] = [
        (0.1, 9.513_507_698_668_731_3),
        (0.5, 1.772_453_850_905_516),
        (1.5, 0.886_226_925_452_758),
        (2.5, 1.329_340_388_179_137),
        (7.3, 1_271.423_633_663_908_8),
        (33.3, 7.487_577_596_522_632e35),
        (100.5, 9.320_963_104_082_717e156),
        (170.0, 4.269_068_009_004_705e304),
    ];

    #[test]
    fn gamma_reference_values() {
        assert_eq!(gamma(1.0).unwrap(), 1.0);
        assert_eq!(gamma(5.0).unwrap(), 24.0);
        for (x, want) in GAMMA_REF {
            assert_relative_eq!(gamma(x).unwrap(), want, max_relative = 1e-13);
            assert_relative_eq!(ln_gamma(x).unwrap(), want.ln(), max_relative = 1e-13, epsilon = 1e-14);
        }
    }

    #[test]
    fn gamma_domain_and_overflow() {
        assert!(matches!(gamma(0.0), Err(Error::Domain(_))));
        assert!(matches!(gamma(-2.5), Err(Error::Domain(_))));
        assert!(matches!(gamma(200.0), Err(Error::Overflow(_))));
        assert!(gamma(171.6).unwrap().is_finite());
    }

    #[test]
    fn gamma_half_against_reflection() {
        // Γ(1/2)² = π / sin(π/2)
        let g = gamma(0.5).unwrap();
        assert_relative_eq!(g * g, PI, max_relative = 1e-15);
    }

    #[test]
    fn digamma_reference_values() {
        let refs = [
            (0.01, -100.560_885_457_868_67),
            (0.3, -3.502_524_222_200_133),
            (1.7, 0.208_547_874_873_493_92),
            (9.99, 2.250_700_372_831_201),
            (10.5, 2.303_001_034_297_686_4),
            (123.4, 4.811_373_775_116_277),
        ];
        for (x, want) in refs {
            assert_relative_eq!(digamma(x).unwrap(), want, max_relative = 1e-13, epsilon = 1e-13);
        }
        assert_relative_eq!(digamma(1.0).unwrap(), -EULER_GAMMA, epsilon = 1e-14);
        assert_relative_eq!(digamma(2.0).unwrap(), 1.0 - EULER_GAMMA, epsilon = 1e-14);
        assert!(digamma(-1.0).is_err());
    }

    #[test]
    fn digamma_half_matches_partial_sum_oracle() {
        // ψ(x) = -γ + Σ_{n≥0} (1/(n+1) - 1/(n+x)); tail for x = 1/2 is ≈ (x-1)/N
        let x = 0.5;
        let n_terms = 2_000_000u64;
        let partial: f64 = (0..n_terms)
            .rev()
            .map(|n| 1.0 / (n as f64 + 1.0) - 1.0 / (n as f64 + x))
            .sum();
        let tail = (x - 1.0) / n_terms as f64;
        let oracle = -EULER_GAMMA + partial + tail;
        assert_relative_eq!(oracle, -1.963_510_026_021_423_5, epsilon = 1e-11);
        assert_relative_eq!(digamma(x).unwrap(), -1.963_510_026_021_423_5, epsilon = 1e-14);
    }

    #[test]
    fn trigamma_reference_values() {
        let z2 = PI * PI / 6.0;
        assert_relative_eq!(trigamma(1.0).unwrap(), z2, epsilon = 1e-14);
        assert_relative_eq!(trigamma(2.0).unwrap(), z2 - 1.0, epsilon = 1e-14);
        assert_relative_eq!(trigamma(10.0).unwrap(), 0.105_166_335_681_685_75, epsilon = 1e-15);
        for (x, want) in [
            (0.05, 401.532_357_342_115_07),
            (0.7, 2.834_049_156_694_611),
            (3.3, 0.353_501_541_841_061_8),
            (15.0, 0.068_938_227_847_683_81),
        ] {
            assert_relative_eq!(trigamma(x).unwrap(), want, max_relative = 1e-13);
        }
    }

    #[test]
    fn pochhammer_cases() {
        assert_eq!(pochhammer(3.0, 0), 1.0);
        assert_eq!(pochhammer(2.0, 3), 24.0);
        assert_eq!(pochhammer(-1.0, 2), 0.0);
        assert_eq!(pochhammer(-3.0, 100), 0.0);
        assert_relative_eq!(pochhammer(0.5, 100), gamma(100.5).unwrap() / gamma(0.5).unwrap(), max_relative = 1e-12);
        assert_relative_eq!(pochhammer(1.0, 10), 3_628_800.0);
    }

    #[test]
    fn hyper_f_terminating_examples() {
        let p = HyperTriple::new(-1.0, 0.0, 2.0).unwrap();
        assert_eq!(hyper_f(p, 0.7).unwrap(), 1.0);
        let p = HyperTriple::new(-1.0, 1.0, 3.0).unwrap();
        for t in [0.0, 0.2, 0.5, 0.99, 1.0] {
            assert_relative_eq!(hyper_f(p, t).unwrap(), 1.0 - t / 3.0, epsilon = 1e-16);
            assert_relative_eq!(hyper_f_t(p, t).unwrap(), -1.0 / 3.0, epsilon = 1e-16);
        }
        // drift in -α/2 is snapped
        let p = HyperTriple::new(-1.0 - 1e-14, 1.0, 3.0).unwrap();
        assert_relative_eq!(hyper_f(p, 1.0).unwrap(), 2.0 / 3.0, epsilon = 1e-15);
    }

    #[test]
    fn hyper_f_reference_value() {
        // 60-digit direct summation
        let p = HyperTriple::new(-0.5, 0.5, 2.0).unwrap();
        assert_relative_eq!(hyper_f(p, 0.25).unwrap(), 0.967_687_511_260_251_6, max_relative = 1e-14);
        assert_relative_eq!(hyper_f_t(p, 0.25).unwrap(), -0.133_888_214_370_230_08, max_relative = 1e-13);
        let h = 1e-6;
        let fd = (hyper_f(p, 0.25 + h).unwrap() - hyper_f(p, 0.25 - h).unwrap()) / (2.0 * h);
        assert_relative_eq!(hyper_f_t(p, 0.25).unwrap(), fd, max_relative = 1e-6);
    }

    #[test]
    fn hyper_f_errors() {
        assert!(HyperTriple::new(1.0, 1.0, -2.0).is_err());
        assert!(HyperTriple::new(1.0, 1.0, 0.0).is_err());
        let p = HyperTriple::new(0.5, 0.5, 2.0).unwrap();
        assert!(matches!(hyper_f(p, 1.0), Err(Error::Domain(_))));
        assert!(matches!(hyper_f(p, -0.1), Err(Error::Domain(_))));
        // c - a - b < 0 diverges at t -> 1 and blows through the cap
        let p = HyperTriple::new(3.0, 3.0, 1.5).unwrap();
        assert!(matches!(hyper_f(p, 1.0 - 1e-7), Err(Error::NoConvergence { .. })));
        let p = HyperTriple::new(0.0, 2.5, 1.5).unwrap();
        assert_eq!(hyper_f_t(p, 0.4).unwrap(), 0.0);
    }

    #[test]
    fn f_k_at_one_cases() {
        for k in 0..20 {
            let v = f_k_at_one(AlphaK::new(2.0, k).unwrap()).unwrap();
            assert_relative_eq!(v, 2.0 / (f64::from(k) + 1.0), max_relative = 1e-15);
            assert_relative_eq!(f_k_at_one(AlphaK::new(0.0, k).unwrap()).unwrap(), 1.0, max_relative = 1e-15);
        }
        let v = f_k_at_one(AlphaK::new(1.0, 1).unwrap()).unwrap();
        let composed = gamma(2.0).unwrap().powi(2) / (gamma(2.5).unwrap() * gamma(1.5).unwrap());
        assert_relative_eq!(v, composed, max_relative = 1e-14);
        assert_relative_eq!(v, 8.0 / (3.0 * PI), max_relative = 1e-14);
        assert!(AlphaK::new(-1.0, 1).is_err());
    }

    #[test]
    fn c_alpha_cases() {
        assert_eq!(c_alpha(0.0).unwrap(), 1.0);
        assert_eq!(c_alpha(2.0).unwrap(), 0.5);
        assert_relative_eq!(c_alpha(-0.5).unwrap(), 0.847_213_084_793_979_1, max_relative = 1e-14);
        assert!(c_alpha(-1.0).is_err());
    }

    #[test]
    fn polyharmonic_order_detection() {
        assert_eq!(polyharmonic_order(0.0), Some(1));
        assert_eq!(polyharmonic_order(2.0), Some(2));
        assert_eq!(polyharmonic_order(6.0 + 1e-13), Some(4));
        assert_eq!(polyharmonic_order(1.0), None);
        assert_eq!(polyharmonic_order(-0.5), None);
    }
}
