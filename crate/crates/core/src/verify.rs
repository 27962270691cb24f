//! Cross-module verification suites.
//!
//! Suites `c1`..`c10` are the acceptance criteria; the `inv-*` suites cover the
//! per-module invariants. Each check records the worst measured error against
//! its tolerance. Randomised checks draw from a ChaCha stream keyed by the seed
//! and the check id, so filtering suites never changes what a check sees.

use std::collections::BTreeMap;
use std::f64::consts::TAU;

use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};
use sha2::{Digest, Sha256};

use crate::area::{
    area_closed, area_harmonic, area_quadrature, area_sweep, h_aux, is_strictly_decreasing, radial_identity,
};
use crate::error::Result;
use crate::field::{
    eval_u, t_alpha_residual, wirtinger, AlphaHarmonicMap, CoefficientSequence, DiskPoint, MAX_SERIES_RADIUS,
};
use crate::poisson::{
    boundary_of_map, harmonic_extension, kernel_k_alpha, kernel_mean, solve_dirichlet, BoundaryCurve,
};
use crate::represent::{build_rep, closed_form_ratio, crude_m_bound, eval_rep, lipschitz_constant};
use crate::specfun::{
    c_alpha, digamma, f_k_at_one, hyper_f, hyper_f_t, pochhammer, trigamma, AlphaK, HyperTriple,
};
use crate::univalence::{
    bound_m, bound_n, boundary_curve, check_circle_injectivity, check_convexity, check_sense_preserving, Grid,
    SpecialMap, CERTIFICATE_RADII,
};

/// Seed used when none is given.
pub const DEFAULT_SEED: u64 = 20_240_917;

const HYPER_FIXTURE: &str = include_str!("../fixtures/hyper_reference.csv");

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum Fault {
    /// Negates the reference value inside every comparison.
    FlipSign,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct VerifyOptions {
    pub seed: u64,
    /// Suite names to run; empty runs all.
    pub suites: Vec<String>,
    pub fault: Option<Fault>,
}

impl Default for VerifyOptions {
    fn default() -> Self {
        Self {
            seed: DEFAULT_SEED,
            suites: Vec::new(),
            fault: None,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CheckResult {
    pub suite: String,
    pub id: String,
    pub passed: bool,
    /// Worst error observed (or the decisive quantity).
    pub measured: f64,
    pub tolerance: f64,
    pub detail: String,
}

impl CheckResult {
    pub fn line(&self) -> String {
        format!(
            "{} {:<34} measured={:.3e} tol={:.1e}  {}",
            if self.passed { "PASS" } else { "FAIL" },
            format!("{}/{}", self.suite, self.id),
            self.measured,
            self.tolerance,
            self.detail
        )
    }
}

struct Ctx {
    rng: ChaCha8Rng,
    /// Multiplies reference values; -1 under [`Fault::FlipSign`].
    s: f64,
}

/// Outcome of a check before it is tagged with its suite.
struct Outcome {
    measured: f64,
    tolerance: f64,
    passed: bool,
    detail: String,
}

impl Outcome {
    /// Passes iff `measured <= tolerance`.
    fn within(measured: f64, tolerance: f64, detail: impl Into<String>) -> Self {
        Self {
            measured,
            tolerance,
            passed: measured <= tolerance,
            detail: detail.into(),
        }
    }

    /// Boolean check; `measured` is the number of violations.
    fn count(violations: usize, detail: impl Into<String>) -> Self {
        Self {
            measured: violations as f64,
            tolerance: 0.0,
            passed: violations == 0,
            detail: detail.into(),
        }
    }
}

type CheckFn = fn(&mut Ctx) -> Result<Outcome>;

const CHECKS: &[(&str, CheckFn)] = &[
    ("hyper-oracle", hyper_oracle),
    ("hyper-derivative-fd", hyper_derivative_fd),
    ("even-limit", even_limit),
    ("richardson-limit", richardson_limit),
    ("reconstruction", reconstruction),
    ("pde-residual", pde_residual),
    ("rep-vs-series", rep_vs_series),
    ("biharmonic-closed-form", biharmonic_closed_form),
    ("coefficient-ratio", coefficient_ratio),
    ("bounds-alpha2-table", bounds_alpha2_table),
    ("bounds-equal-small-k", bounds_equal_small_k),
    ("bounds-n-exceeds-m", bounds_n_exceeds_m),
    ("bounds-n-below-inv-k", bounds_n_below_inv_k),
    ("certify-random-100", certify_random_100),
    ("convexity-flip", convexity_flip),
    ("area-quadrature", area_quadrature_check),
    ("area-harmonic-reduction", area_harmonic_reduction),
    ("area-sign-comparison", area_sign_comparison),
    ("area-sweep", area_sweep_check),
    ("h-at-0.8", h_at_0_8),
    ("digamma-recurrence", digamma_recurrence),
    ("trigamma-series", trigamma_series),
    ("hyper-derivative-random", hyper_derivative_random),
    ("lemma-monotone-hyper", lemma_monotone_hyper),
    ("alpha-zero-identity", alpha_zero_identity),
    ("digamma-increasing", digamma_increasing),
    ("lemma-ratio-bound", lemma_ratio_bound),
    ("lemma-derivative-bound", lemma_derivative_bound),
    ("conjugation-symmetry", conjugation_symmetry),
    ("linearity", linearity),
    ("wirtinger-fd", wirtinger_fd),
    ("kernel-positive-normalised", kernel_positive_normalised),
    ("alpha-zero-reduction", alpha_zero_reduction),
    ("pochhammer-truncation", pochhammer_truncation),
    ("lipschitz-witness", lipschitz_witness),
    ("sin-ratio", sin_ratio),
    ("certify-random-500", certify_random_500),
    ("convexity-dichotomy", convexity_dichotomy),
    ("h-aux-shape", h_aux_shape),
    ("fundamental-identity", fundamental_identity),
];

/// Suite name and the check ids it runs, in order.
pub const SUITES: &[(&str, &[&str])] = &[
    ("c1", &["hyper-oracle", "hyper-derivative-fd"]),
    ("c2", &["even-limit", "richardson-limit"]),
    ("c3", &["reconstruction"]),
    ("c4", &["pde-residual"]),
    ("c5", &["rep-vs-series", "biharmonic-closed-form", "coefficient-ratio"]),
    (
        "c6",
        &["bounds-alpha2-table", "bounds-equal-small-k", "bounds-n-exceeds-m", "bounds-n-below-inv-k"],
    ),
    ("c7", &["certify-random-100", "convexity-flip"]),
    (
        "c8",
        &["area-quadrature", "area-harmonic-reduction", "area-sign-comparison", "area-sweep"],
    ),
    ("c9", &["h-at-0.8"]),
    ("c10", &["digamma-recurrence", "trigamma-series"]),
    (
        "inv-specfun",
        &[
            "hyper-derivative-random",
            "lemma-monotone-hyper",
            "even-limit",
            "alpha-zero-identity",
            "digamma-increasing",
            "lemma-ratio-bound",
            "lemma-derivative-bound",
        ],
    ),
    (
        "inv-field",
        &["rep-vs-series", "conjugation-symmetry", "linearity", "pde-residual", "wirtinger-fd"],
    ),
    (
        "inv-poisson",
        &["reconstruction", "kernel-positive-normalised", "alpha-zero-reduction"],
    ),
    (
        "inv-represent",
        &["rep-vs-series", "coefficient-ratio", "pochhammer-truncation", "lipschitz-witness"],
    ),
    (
        "inv-univalence",
        &[
            "bounds-n-below-inv-k",
            "bounds-equal-small-k",
            "bounds-n-exceeds-m",
            "sin-ratio",
            "certify-random-500",
            "convexity-dichotomy",
        ],
    ),
    (
        "inv-area",
        &["area-quadrature", "area-sign-comparison", "area-sweep", "h-aux-shape", "fundamental-identity"],
    ),
];

pub fn suite_names() -> Vec<&'static str> {
    SUITES.iter().map(|(name, _)| *name).collect()
}

fn check_seed(seed: u64, id: &str) -> u64 {
    let digest = Sha256::new().chain_update(seed.to_le_bytes()).chain_update(id.as_bytes()).finalize();
    u64::from_le_bytes(digest[..8].try_into().expect("8 bytes"))
}

/// Runs the selected suites. Unknown suite names are an error; a check that
/// errors internally is reported as failed with the error text.
pub fn run(opts: &VerifyOptions) -> std::result::Result<Vec<CheckResult>, String> {
    for name in &opts.suites {
        if !SUITES.iter().any(|(s, _)| s == name) {
            return Err(format!("unknown suite {name:?}; known: {}", suite_names().join(", ")));
        }
    }
    let mut cache: BTreeMap<&str, Outcome> = BTreeMap::new();
    let mut out = Vec::new();
    for (suite, ids) in SUITES {
        if !opts.suites.is_empty() && !opts.suites.iter().any(|s| s == suite) {
            continue;
        }
        for id in ids.iter() {
            let outcome = cache.entry(id).or_insert_with(|| {
                let f = CHECKS.iter().find(|(c, _)| c == id).expect("suite lists a known check").1;
                let mut ctx = Ctx {
                    rng: ChaCha8Rng::seed_from_u64(check_seed(opts.seed, id)),
                    s: if opts.fault == Some(Fault::FlipSign) { -1.0 } else { 1.0 },
                };
                f(&mut ctx).unwrap_or_else(|e| Outcome {
                    measured: f64::NAN,
                    tolerance: 0.0,
                    passed: false,
                    detail: format!("error: {e}"),
                })
            });
            out.push(CheckResult {
                suite: (*suite).to_string(),
                id: (*id).to_string(),
                passed: outcome.passed,
                measured: outcome.measured,
                tolerance: outcome.tolerance,
                detail: outcome.detail.clone(),
            });
        }
    }
    Ok(out)
}

// ---------------------------------------------------------------- sampling

fn random_point(rng: &mut ChaCha8Rng, r_max: f64) -> DiskPoint {
    let r = r_max * rng.gen::<f64>().sqrt();
    DiskPoint::new(r, rng.gen_range(0.0..TAU)).expect("r < 1")
}

fn random_complex(rng: &mut ChaCha8Rng) -> Complex64 {
    Complex64::new(rng.gen_range(-1.0..1.0), rng.gen_range(-1.0..1.0))
}

/// Up to `terms` random entries with `|k| <= max_k`.
fn random_coeffs(rng: &mut ChaCha8Rng, max_k: i64, terms: usize) -> CoefficientSequence {
    let mut c = CoefficientSequence::new();
    for _ in 0..terms {
        c.set(rng.gen_range(-max_k..=max_k), random_complex(rng));
    }
    c
}

/// `c_0 = 0`, `c_{-k} = ρ c_k e^{iφ}` with `ρ ∈ [0, 0.9]`.
fn admissible_coeffs(rng: &mut ChaCha8Rng, max_k: u32) -> CoefficientSequence {
    let mut c = CoefficientSequence::new().with(1, random_complex(rng) + 1.0);
    for k in 2..=max_k {
        if rng.gen_bool(0.6) {
            c.set(i64::from(k), random_complex(rng));
        }
    }
    for k in 1..=max_k {
        let ck = c.get(i64::from(k));
        let rho = rng.gen_range(0.0..0.9);
        c.set(-i64::from(k), ck * Complex64::from_polar(rho, rng.gen_range(0.0..TAU)));
    }
    c
}

fn map(alpha: f64, c: CoefficientSequence) -> Result<AlphaHarmonicMap> {
    AlphaHarmonicMap::new(alpha, c)
}

fn rel(a: f64, b: f64) -> f64 {
    (a - b).abs() / b.abs().max(f64::MIN_POSITIVE)
}

fn linspace(a: f64, b: f64, n: usize) -> impl Iterator<Item = f64> {
    (0..n).map(move |i| a + (b - a) * i as f64 / (n - 1) as f64)
}

// ---------------------------------------------------------------- c1

fn fixture_rows() -> impl Iterator<Item = (f64, u32, f64, f64)> {
    HYPER_FIXTURE.lines().skip(1).filter(|l| !l.trim().is_empty()).map(|l| {
        let f: Vec<&str> = l.split(',').collect();
        (
            f[0].parse().expect("fixture alpha"),
            f[1].parse().expect("fixture k"),
            f[2].parse().expect("fixture t"),
            f[3].parse().expect("fixture value"),
        )
    })
}

fn hyper_oracle(ctx: &mut Ctx) -> Result<Outcome> {
    let mut worst = 0.0f64;
    let mut n = 0;
    for (alpha, k, t, value) in fixture_rows() {
        let got = hyper_f(AlphaK::new(alpha, k)?.triple(), t)?;
        worst = worst.max(rel(got, ctx.s * value));
        n += 1;
    }
    Ok(Outcome::within(worst, 1e-12, format!("max relative error over {n} high-precision reference points")))
}

fn fd_derivative_error(p: HyperTriple, t: f64, s: f64) -> Result<f64> {
    let h = 1e-6;
    let fd = (hyper_f(p, t + h)? - hyper_f(p, t - h)?) / (2.0 * h);
    let exact = hyper_f_t(p, t)?;
    Ok((exact - s * fd).abs() / (1.0 + exact.abs()))
}

fn hyper_derivative_fd(ctx: &mut Ctx) -> Result<Outcome> {
    let mut worst = 0.0f64;
    for (alpha, k, t, _) in fixture_rows() {
        let t = t.max(1e-5);
        worst = worst.max(fd_derivative_error(AlphaK::new(alpha, k)?.triple(), t, ctx.s)?);
    }
    Ok(Outcome::within(worst, 1e-6, "|F' - FD| / (1 + |F'|), central difference h = 1e-6"))
}

// ---------------------------------------------------------------- c2

fn even_limit(ctx: &mut Ctx) -> Result<Outcome> {
    let mut worst = 0.0f64;
    for p in 1..=6u32 {
        let alpha = 2.0 * f64::from(p - 1);
        for k in 0..=10 {
            let ak = AlphaK::new(alpha, k)?;
            let tri = ak.triple();
            if tri.terminating_degree().is_none_or(|d| d > u64::from(p - 1)) {
                return Ok(Outcome::count(1, format!("alpha={alpha}, k={k}: not a polynomial of degree <= {}", p - 1)));
            }
            worst = worst.max(rel(hyper_f(tri, 1.0)?, ctx.s * f_k_at_one(ak)?));
        }
    }
    Ok(Outcome::within(worst, 1e-12, "polynomial at t=1 vs Gamma closed form, alpha in {0,2,..,10}, k <= 10"))
}

/// Limit of the partial sums at `t = 1`, Richardson-extrapolated over
/// `N = 256 * 2^j` with tail exponents `(1+α) + j`.
fn richardson_at_one(ak: AlphaK) -> f64 {
    const LEVELS: usize = 8;
    let p = ak.triple();
    let mut sums = Vec::with_capacity(LEVELS);
    let (mut term, mut sum, mut n) = (1.0, 1.0, 0usize);
    for j in 0..LEVELS {
        let target = 256usize << j;
        while n + 1 < target {
            let nf = n as f64;
            term *= (p.a + nf) * (p.b + nf) / ((p.c + nf) * (nf + 1.0));
            sum += term;
            n += 1;
        }
        sums.push(sum);
    }
    let mut table = sums;
    for m in 0..LEVELS - 1 {
        let w = 2f64.powf(1.0 + ak.alpha + m as f64);
        table = table.windows(2).map(|x| (w * x[1] - x[0]) / (w - 1.0)).collect();
    }
    table[0]
}

fn richardson_limit(ctx: &mut Ctx) -> Result<Outcome> {
    let mut worst = 0.0f64;
    for &alpha in &[-0.5, -0.25, 0.3, 1.0, 1.7, 3.0, 3.5] {
        for k in 0..=10 {
            let ak = AlphaK::new(alpha, k)?;
            worst = worst.max(rel(f_k_at_one(ak)?, ctx.s * richardson_at_one(ak)));
        }
    }
    Ok(Outcome::within(worst, 1e-6, "closed form vs Richardson-extrapolated partial sums, 7 non-even alpha, k <= 10"))
}

// ---------------------------------------------------------------- c3, c4

fn reconstruction(ctx: &mut Ctx) -> Result<Outcome> {
    let mut worst = 0.0f64;
    for _ in 0..20 {
        let alpha = ctx.rng.gen_range(-0.9..4.0);
        let terms = ctx.rng.gen_range(1..=4);
        let m = map(alpha, random_coeffs(&mut ctx.rng, 6, terms))?;
        let bc = boundary_of_map(&m)?;
        for _ in 0..5 {
            let p = random_point(&mut ctx.rng, 0.9);
            let got = solve_dirichlet(alpha, &bc, p, 2048)?;
            worst = worst.max((got - ctx.s * eval_u(&m, p)?).norm());
        }
    }
    Ok(Outcome::within(worst, 1e-8, "Poisson integral (2048 nodes) vs series, 20 maps x 5 points, |z| <= 0.9"))
}

fn pde_residual(ctx: &mut Ctx) -> Result<Outcome> {
    let mut worst = 0.0f64;
    for &alpha in &[-0.5, 0.0, 1.0, 2.0, 4.0] {
        for _ in 0..2 {
            let terms = ctx.rng.gen_range(1..=4);
            let m = map(alpha, random_coeffs(&mut ctx.rng, 5, terms))?;
            for _ in 0..100 {
                let p = random_point(&mut ctx.rng, 0.85);
                let res = t_alpha_residual(&m, p, 1e-4)?;
                let u = eval_u(&m, p)?;
                worst = worst.max((res - (1.0 - ctx.s)).abs() / (1.0 + u.norm()));
            }
        }
    }
    Ok(Outcome::within(worst, 1e-4, "|T_alpha u| / (1 + |u|), h = 1e-4, 10 maps x 100 points"))
}

// ---------------------------------------------------------------- c5

fn rep_vs_series(ctx: &mut Ctx) -> Result<Outcome> {
    let mut worst = 0.0f64;
    for p in 1..=4u32 {
        let alpha = 2.0 * f64::from(p - 1);
        for _ in 0..200 {
            let terms = ctx.rng.gen_range(1..=4);
            let m = map(alpha, random_coeffs(&mut ctx.rng, 6, terms))?;
            let rep = build_rep(&m)?;
            let pt = random_point(&mut ctx.rng, 1.0 - 1e-12);
            worst = worst.max((eval_rep(&rep, pt) - ctx.s * eval_u(&m, pt)?).norm());
        }
    }
    Ok(Outcome::within(worst, 1e-12, "representation vs series, p in 1..4, 200 points each"))
}

fn biharmonic_closed_form(ctx: &mut Ctx) -> Result<Outcome> {
    let mut worst = 0.0f64;
    for k in 0..10u32 {
        let m = map(2.0, CoefficientSequence::new().with(i64::from(k), 1.0))?;
        let rep = build_rep(&m)?;
        let kf = f64::from(k);
        for _ in 0..20 {
            let pt = random_point(&mut ctx.rng, 1.0 - 1e-12);
            let want = ctx.s * pt.z().powu(k) * (1.0 - (kf - 1.0) / (kf + 1.0) * pt.t());
            worst = worst.max((eval_rep(&rep, pt) - want).norm()).max((eval_u(&m, pt)? - want).norm());
        }
    }
    Ok(Outcome::within(worst, 4.0 * f64::EPSILON, "z^k (1 - (k-1)/(k+1) |z|^2), k = 0..9, both evaluators"))
}

fn coefficient_ratio(ctx: &mut Ctx) -> Result<Outcome> {
    let mut worst = 0.0f64;
    for p in 1..=5u32 {
        let mut c = CoefficientSequence::new();
        for k in 0..=20 {
            c.set(k, random_complex(&mut ctx.rng) + 1.5);
        }
        let rep = build_rep(&map(2.0 * f64::from(p - 1), c.clone())?)?;
        for n in 0..p {
            for k in 0..=20u32 {
                let ratio = rep.i_series()[n as usize].coeff(k as usize) / c.get(i64::from(k));
                worst = worst.max((ratio - ctx.s * closed_form_ratio(p, n, k)).norm());
            }
        }
    }
    Ok(Outcome::within(worst, 1e-14, "coeff_k(I_n)/c_k vs (k+1-p)_n/(k+1)_n, p <= 5, k <= 20"))
}

// ---------------------------------------------------------------- c6

fn bounds_alpha2_table(ctx: &mut Ctx) -> Result<Outcome> {
    let mut worst = 0.0f64;
    for k in 1..=50u32 {
        let kf = f64::from(k);
        worst = worst
            .max(rel(bound_n(2.0, k)?, ctx.s * (kf + 1.0) / (kf * kf + 3.0 * kf - 2.0)))
            .max(rel(bound_m(2.0, k)?, ctx.s * (kf + 1.0) / (2.0 * kf * kf)));
    }
    Ok(Outcome::within(worst, 1e-12, "N, M at alpha=2 vs rational forms, k = 1..50"))
}

fn bounds_equal_small_k(ctx: &mut Ctx) -> Result<Outcome> {
    let mut worst = 0.0f64;
    for k in 1..=2 {
        worst = worst.max(rel(bound_n(2.0, k)?, ctx.s * bound_m(2.0, k)?));
    }
    Ok(Outcome::within(worst, 1e-12, "N = M at alpha=2, k in {1,2}"))
}

fn bounds_n_exceeds_m(ctx: &mut Ctx) -> Result<Outcome> {
    let bad = (3..=50u32)
        .filter(|&k| !(ctx.s * (bound_n(2.0, k).unwrap_or(f64::NAN) - bound_m(2.0, k).unwrap_or(f64::NAN)) > 0.0))
        .count();
    Ok(Outcome::count(bad, "N > M at alpha=2, k = 3..50"))
}

fn bounds_n_below_inv_k(ctx: &mut Ctx) -> Result<Outcome> {
    let mut bad = 0;
    for i in 1..=50 {
        let alpha = 2.0 * f64::from(i) / 50.0;
        for k in 1..=50u32 {
            let (n, inv_k) = (bound_n(alpha, k)?, ctx.s / f64::from(k));
            // (α, k) = (2, 1) is the one point where N = 1/k = 1 exactly.
            let ok = if alpha == 2.0 && k == 1 { n == inv_k } else { n < inv_k };
            if !ok {
                bad += 1;
            }
        }
    }
    Ok(Outcome::count(
        bad,
        "N < 1/k on a 50 x 50 grid, alpha in (0,2], except N = 1/k exactly at (alpha, k) = (2, 1)",
    ))
}

// ---------------------------------------------------------------- c7

/// Jacobian and circle checks for random members of the family.
fn certify_random(ctx: &mut Ctx, count: usize, grid: Grid, circle_samples: usize) -> Result<Outcome> {
    let mut bad = 0;
    let mut min_jac = f64::INFINITY;
    for _ in 0..count {
        let alpha = 2.0 * (1.0 - ctx.rng.gen::<f64>());
        let k = ctx.rng.gen_range(1..=8);
        let c = 0.95 * bound_n(alpha, k)? * ctx.rng.gen_range(-1.0..1.0);
        let s = SpecialMap::new(alpha, k, c)?;
        let jac = check_sense_preserving(s, grid)?.jacobian_min;
        min_jac = min_jac.min(jac);
        let circles_ok = CERTIFICATE_RADII
            .iter()
            .all(|&r| check_circle_injectivity(s, r, circle_samples).unwrap_or(false));
        if !(ctx.s * jac > 0.0 && circles_ok) {
            bad += 1;
        }
    }
    Ok(Outcome::count(
        bad,
        format!(
            "{count} maps, |c| <= 0.95 N, grid {}x{}, {circle_samples} samples at 5 radii; min Jacobian {min_jac:.3e}",
            grid.radial, grid.angular
        ),
    ))
}

fn certify_random_100(ctx: &mut Ctx) -> Result<Outcome> {
    certify_random(ctx, 100, Grid::default(), 512)
}

fn convex_at(c: f64, samples: usize) -> Result<bool> {
    check_convexity(&boundary_curve(SpecialMap::new(2.0, 3, c)?)?, samples)
}

fn convexity_flip(ctx: &mut Ctx) -> Result<Outcome> {
    let (mut lo, mut hi) = (0.0, bound_n(2.0, 3)?);
    if !convex_at(lo, 4096)? || convex_at(hi, 4096)? {
        return Ok(Outcome::count(1, "convexity verdict does not bracket a flip on [0, N]"));
    }
    while hi - lo > 1e-6 {
        let mid = 0.5 * (lo + hi);
        if convex_at(mid, 4096)? {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    let m = ctx.s * bound_m(2.0, 3)?;
    Ok(Outcome::within(
        (0.5 * (lo + hi) - m).abs(),
        1e-3,
        format!("bisected flip at c = {:.6}, M = 2/9, 4096 boundary samples", 0.5 * (lo + hi)),
    ))
}

// ---------------------------------------------------------------- c8

fn area_quadrature_check(ctx: &mut Ctx) -> Result<Outcome> {
    let mut worst = 0.0f64;
    for _ in 0..50 {
        let alpha = 2.0 * f64::from(ctx.rng.gen_range(0..4u32));
        let max_k = ctx.rng.gen_range(1..=5);
        let m = map(alpha, admissible_coeffs(&mut ctx.rng, max_k))?;
        worst = worst.max(rel(area_quadrature(&m, 64, 64)?.value, ctx.s * area_closed(&m)?));
    }
    Ok(Outcome::within(worst, 1e-6, "closed form vs 64x64 quadrature, 50 maps, alpha in {0,2,4,6}"))
}

fn area_harmonic_reduction(ctx: &mut Ctx) -> Result<Outcome> {
    let mut bad = 0;
    for _ in 0..20 {
        let c = admissible_coeffs(&mut ctx.rng, 6);
        if area_closed(&map(0.0, c.clone())?)? != ctx.s * area_harmonic(&c)? {
            bad += 1;
        }
    }
    Ok(Outcome::count(bad, "S_u(0) == S_v bitwise, 20 sequences"))
}

fn area_sign_comparison(ctx: &mut Ctx) -> Result<Outcome> {
    let mut bad = 0;
    for _ in 0..20 {
        let c = admissible_coeffs(&mut ctx.rng, 6);
        let s_v = ctx.s * area_harmonic(&c)?;
        for &alpha in &[-0.9, -0.5, 0.5, 0.9, 1.0, 1.9] {
            let s_u = area_closed(&map(alpha, c.clone())?)?;
            if (alpha > 0.0 && !(s_u < s_v)) || (alpha < 0.0 && !(s_u > s_v)) {
                bad += 1;
            }
        }
    }
    Ok(Outcome::count(bad, "S_u < S_v for alpha in (0,2), S_u > S_v for alpha in (-1,0); 20 sequences x 6 alpha"))
}

fn area_sweep_check(ctx: &mut Ctx) -> Result<Outcome> {
    let alphas: Vec<f64> = linspace(-0.9, 0.79, 20).collect();
    let mut bad = 0;
    for _ in 0..20 {
        let c = admissible_coeffs(&mut ctx.rng, 6);
        let values: Vec<f64> = area_sweep(&c, &alphas)?
            .iter()
            .map(|e| ctx.s * e.s_u.unwrap_or(f64::NAN))
            .collect();
        if !is_strictly_decreasing(&values) {
            bad += 1;
        }
    }
    Ok(Outcome::count(bad, "strictly decreasing over 20 alpha in [-0.9, 0.79], 20 sequences"))
}

// ---------------------------------------------------------------- c9, c10

fn h_at_0_8(ctx: &mut Ctx) -> Result<Outcome> {
    let h = h_aux(0.8)?;
    Ok(Outcome::within((h - ctx.s * -0.0108).abs(), 5e-4, format!("h(0.8) = {h:.9}")))
}

fn digamma_recurrence(ctx: &mut Ctx) -> Result<Outcome> {
    let mut worst = 0.0f64;
    for _ in 0..1000 {
        let x = ctx.rng.gen_range(0.5..100.0);
        worst = worst.max((digamma(x + 1.0)? - ctx.s * (digamma(x)? + 1.0 / x)).abs());
    }
    Ok(Outcome::within(worst, 1e-13, "|psi(x+1) - psi(x) - 1/x|, 1000 x in [0.5, 100]"))
}

/// Partial sums of `Σ 1/(x+n)²` bracket trigamma by the integral tail bounds
/// and converge to it.
fn trigamma_series(ctx: &mut Ctx) -> Result<Outcome> {
    let mut worst = 0.0f64;
    let mut bracket_violations = 0;
    for _ in 0..50 {
        let x = ctx.rng.gen_range(0.1..20.0);
        let target = ctx.s * trigamma(x)?;
        let mut partial = 0.0;
        let mut n = 0u32;
        for &stop in &[10u32, 100, 1000, 10_000, 100_000] {
            while n < stop {
                let d = x + f64::from(n);
                partial += 1.0 / (d * d);
                n += 1;
            }
            let d = x + f64::from(stop);
            let (low, high) = (partial + 1.0 / d, partial + 1.0 / d + 1.0 / (d * d));
            let slack = 1e-14 * target.abs();
            if !(low - slack <= target && target <= high + slack) {
                bracket_violations += 1;
            }
        }
        let d = x + f64::from(n);
        let tail = 1.0 / d + 1.0 / (2.0 * d * d) + 1.0 / (6.0 * d * d * d);
        worst = worst.max((partial + tail - target).abs() / target.abs());
    }
    let mut o = Outcome::within(
        worst,
        1e-12,
        format!("partial sum to 1e5 terms plus Euler-Maclaurin tail; {bracket_violations} bracket violations"),
    );
    o.passed &= bracket_violations == 0;
    Ok(o)
}

// ---------------------------------------------------------------- specfun invariants

fn hyper_derivative_random(ctx: &mut Ctx) -> Result<Outcome> {
    let mut worst = 0.0f64;
    for _ in 0..300 {
        let p = HyperTriple::new(
            ctx.rng.gen_range(-3.0..3.0),
            ctx.rng.gen_range(-3.0..3.0),
            ctx.rng.gen_range(0.2..5.0),
        )?;
        let t = ctx.rng.gen_range(1e-5..0.99);
        worst = worst.max(fd_derivative_error(p, t, ctx.s)?);
    }
    Ok(Outcome::within(worst, 1e-6, "|F' - FD| / (1 + |F'|), 300 random (a,b,c), t in (0, 0.99)"))
}

fn lemma_monotone_hyper(ctx: &mut Ctx) -> Result<Outcome> {
    let mut bad = 0;
    for _ in 0..200 {
        let c: f64 = ctx.rng.gen_range(0.2..4.0);
        let p = HyperTriple::new(ctx.rng.gen_range(-3.0..c), ctx.rng.gen_range(-3.0..c), c)?;
        let dir = if p.a * p.b <= 0.0 { -1.0 } else { 1.0 } * ctx.s;
        let values = (1..=99).map(|i| hyper_f(p, f64::from(i) / 100.0)).collect::<Result<Vec<_>>>()?;
        if values.windows(2).any(|w| dir * (w[1] - w[0]) < -1e-13 * w[0].abs().max(1.0)) {
            bad += 1;
        }
    }
    Ok(Outcome::count(bad, "monotone direction by sign of ab, 200 triples, t = 0.01..0.99"))
}

fn alpha_zero_identity(ctx: &mut Ctx) -> Result<Outcome> {
    let mut bad = 0;
    for k in 0..=12 {
        for i in 0..=100 {
            if hyper_f(AlphaK::new(0.0, k)?.triple(), f64::from(i) / 100.0)? != ctx.s {
                bad += 1;
            }
        }
    }
    Ok(Outcome::count(bad, "F_k == 1 at alpha = 0, k <= 12, t in [0,1]"))
}

fn digamma_increasing(ctx: &mut Ctx) -> Result<Outcome> {
    let values = (0..2000)
        .map(|i| digamma(10f64.powf(-3.0 + 6.0 * f64::from(i) / 1999.0)).map(|v| ctx.s * v))
        .collect::<Result<Vec<_>>>()?;
    let bad = values.windows(2).filter(|w| !(w[1] > w[0])).count();
    Ok(Outcome::count(bad, "psi strictly increasing on 2000 log-spaced x in [1e-3, 1e3]"))
}

fn lemma_ratio_bound(ctx: &mut Ctx) -> Result<Outcome> {
    let mut worst = f64::NEG_INFINITY;
    for alpha in linspace(0.1, 2.0, 20) {
        for k in 1..=12 {
            for i in 1..=99 {
                let t = f64::from(i) / 100.0;
                let f1 = hyper_f(AlphaK::new(alpha, 1)?.triple(), t)?;
                let fk = hyper_f(AlphaK::new(alpha, k)?.triple(), t)?;
                worst = worst.max((fk - ctx.s * f1) / f1);
            }
        }
    }
    Ok(Outcome::within(worst, 1e-14, "max (F_k - F_1) / F_1, alpha/2 in (0,1], k <= 12"))
}

fn lemma_derivative_bound(ctx: &mut Ctx) -> Result<Outcome> {
    let mut bad = 0;
    let mut tightest = f64::INFINITY;
    for alpha in linspace(0.1, 2.0, 20) {
        for k in 1..=12u32 {
            let kf = f64::from(k);
            let rhs = (kf - alpha / 2.0) * gamma_block(alpha, k)? / 2.0;
            for i in 1..=99 {
                let t = f64::from(i) / 100.0;
                let f1 = hyper_f(AlphaK::new(alpha, 1)?.triple(), t)?;
                let (_, fkt) = AlphaK::new(alpha, k)?.eval(t)?;
                let lhs = fkt.abs() / (ctx.s * f1);
                // At alpha = 2, F_k = 1 - (k-1)t/(k+1) and F_1 = 1, so both sides coincide.
                let ok = if alpha == 2.0 { (lhs - rhs).abs() <= 1e-14 } else { lhs < rhs };
                if !ok {
                    bad += 1;
                }
                if alpha < 2.0 {
                    tightest = tightest.min(rhs - lhs);
                }
            }
        }
    }
    Ok(Outcome::count(bad, format!("|F_k,t|/F_1 below the Gamma bound for alpha < 2 (smallest gap {tightest:.3e}), equal at alpha = 2")))
}

fn gamma_block(alpha: f64, k: u32) -> Result<f64> {
    let kf = f64::from(k);
    Ok(crate::specfun::gamma_ratio(kf + 1.0, kf + 1.0 + alpha / 2.0)? * crate::specfun::gamma(2.0 + alpha / 2.0)?)
}

// ---------------------------------------------------------------- field invariants

fn conjugation_symmetry(ctx: &mut Ctx) -> Result<Outcome> {
    let mut worst = 0.0f64;
    for _ in 0..100 {
        let alpha = ctx.rng.gen_range(-0.9..4.0);
        let terms = ctx.rng.gen_range(1..=5);
        let c = random_coeffs(&mut ctx.rng, 6, terms);
        let m = map(alpha, c.clone())?;
        let reflected = map(alpha, c.reflected_conj())?;
        let conjugated = map(alpha, c.conj())?;
        let p = random_point(&mut ctx.rng, 0.95);
        let pbar = DiskPoint::from_complex(p.z().conj())?;
        let u = ctx.s * eval_u(&m, p)?;
        worst = worst
            .max((eval_u(&reflected, p)? - u.conj()).norm())
            .max((eval_u(&conjugated, pbar)? - u.conj()).norm());
    }
    Ok(Outcome::within(
        worst,
        1e-13,
        "c_k -> conj(c_-k) gives conj(u(z)); c_k -> conj(c_k) gives conj(u(conj z))",
    ))
}

fn linearity(ctx: &mut Ctx) -> Result<Outcome> {
    let mut worst = 0.0f64;
    for _ in 0..100 {
        let alpha = ctx.rng.gen_range(-0.9..4.0);
        let a = random_coeffs(&mut ctx.rng, 6, 3);
        let b = random_coeffs(&mut ctx.rng, 6, 3);
        let lambda = random_complex(&mut ctx.rng) * 3.0;
        let p = random_point(&mut ctx.rng, 0.95);
        let ua = eval_u(&map(alpha, a.clone())?, p)?;
        let ub = eval_u(&map(alpha, b.clone())?, p)?;
        let sum = eval_u(&map(alpha, a.plus(&b))?, p)?;
        let scaled = eval_u(&map(alpha, a.scaled(lambda))?, p)?;
        let scale = 1.0 + ua.norm() + ub.norm();
        worst = worst
            .max((sum - ctx.s * (ua + ub)).norm() / scale)
            .max((scaled - ctx.s * lambda * ua).norm() / (scale * lambda.norm()));
    }
    Ok(Outcome::within(worst, 1e-14, "additivity and homogeneity in the coefficients"))
}

fn wirtinger_fd(ctx: &mut Ctx) -> Result<Outcome> {
    let h = 1e-5;
    let i = Complex64::new(0.0, 1.0);
    let mut worst = 0.0f64;
    for _ in 0..100 {
        let alpha = ctx.rng.gen_range(-0.9..4.0);
        let terms = ctx.rng.gen_range(1..=4);
        let m = map(alpha, random_coeffs(&mut ctx.rng, 5, terms))?;
        let p = random_point(&mut ctx.rng, 0.85);
        let z = p.z();
        let at = |w: Complex64| DiskPoint::from_complex(w).and_then(|q| eval_u(&m, q));
        let ux = (at(z + h)? - at(z - h)?) / (2.0 * h);
        let uy = (at(z + i * h)? - at(z - i * h)?) / (2.0 * h);
        let w = wirtinger(&m, p)?;
        let fd_z = ctx.s * (ux - i * uy) / 2.0;
        let fd_zbar = (ux + i * uy) / 2.0;
        let scale = 1.0 + w.u_z.norm() + w.u_zbar.norm();
        worst = worst.max(((w.u_z - fd_z).norm() + (w.u_zbar - fd_zbar).norm()) / scale);
    }
    Ok(Outcome::within(worst, 1e-6, "analytic Wirtinger pair vs central differences, h = 1e-5"))
}

// ---------------------------------------------------------------- poisson invariants

fn kernel_positive_normalised(ctx: &mut Ctx) -> Result<Outcome> {
    let mut worst = 0.0f64;
    let mut non_positive = 0;
    for &alpha in &[-0.9, -0.5, 0.0, 0.7, 2.0, 3.3] {
        for _ in 0..20 {
            let p = random_point(&mut ctx.rng, 0.9);
            for j in 0..64 {
                let w = p.z() * Complex64::from_polar(1.0, -TAU * f64::from(j) / 64.0);
                if !(kernel_k_alpha(alpha, w)? > 0.0) {
                    non_positive += 1;
                }
            }
            let mean = kernel_mean(alpha, p, 2048)?;
            let want = ctx.s * c_alpha(alpha)? * hyper_f(HyperTriple::new(-alpha / 2.0, -alpha / 2.0, 1.0)?, p.t())?;
            worst = worst.max((mean - want).abs());
        }
    }
    let mut o = Outcome::within(
        worst,
        1e-9,
        format!("kernel mean vs c_alpha F(-a/2,-a/2;1;t); {non_positive} non-positive kernel samples"),
    );
    o.passed &= non_positive == 0;
    Ok(o)
}

fn alpha_zero_reduction(ctx: &mut Ctx) -> Result<Outcome> {
    let mut worst = 0.0f64;
    for _ in 0..50 {
        let bc = BoundaryCurve::Modes(random_coeffs(&mut ctx.rng, 6, 4));
        let p = random_point(&mut ctx.rng, 0.9);
        worst = worst.max((solve_dirichlet(0.0, &bc, p, 2048)? - ctx.s * harmonic_extension(&bc, p)).norm());
    }
    Ok(Outcome::within(worst, 1e-10, "alpha = 0 solver vs harmonic extension, 50 boundary curves"))
}

// ---------------------------------------------------------------- represent invariants

fn pochhammer_truncation(ctx: &mut Ctx) -> Result<Outcome> {
    let mut bad = 0;
    for p in 1..=8u32 {
        for n in p..p + 6 {
            if pochhammer(1.0 - f64::from(p), n) != 0.0 {
                bad += 1;
            }
        }
        // (1-p)_{p-1} = (-1)^{p-1} (p-1)!
        let last = (1..p).fold(1.0, |acc, i| -acc * f64::from(i));
        if pochhammer(1.0 - f64::from(p), p - 1) != ctx.s * last {
            bad += 1;
        }
    }
    Ok(Outcome::count(bad, "(1-p)_n = 0 exactly for n >= p and (-1)^(p-1) (p-1)! at n = p-1, p <= 8"))
}

fn lipschitz_witness(ctx: &mut Ctx) -> Result<Outcome> {
    let mut worst = f64::NEG_INFINITY;
    for _ in 0..20 {
        let p = ctx.rng.gen_range(1..=4u32);
        let terms = ctx.rng.gen_range(1..=4);
        let m = map(2.0 * f64::from(p - 1), random_coeffs(&mut ctx.rng, 5, terms))?;
        let report = lipschitz_constant(&build_rep(&m)?, crude_m_bound(&m).max(f64::MIN_POSITIVE))?;
        let mut sup = 0.0f64;
        for i in 0..60 {
            let r = 0.999 * f64::from(i) / 59.0;
            for j in 0..128 {
                let w = wirtinger(&m, DiskPoint::new(r, TAU * f64::from(j) / 128.0)?)?;
                sup = sup.max(w.d_dx().norm()).max(w.d_dy().norm());
            }
        }
        worst = worst.max((sup - ctx.s * 2.0 * report.c_bound) / (2.0 * report.c_bound));
    }
    Ok(Outcome::within(worst, 1e-12, "(sup |u_x|, |u_y| - 2C) / 2C over r <= 0.999"))
}

// ---------------------------------------------------------------- univalence invariants

fn sin_ratio(ctx: &mut Ctx) -> Result<Outcome> {
    let mut worst = f64::NEG_INFINITY;
    for k in 1..=30u32 {
        for j in 0..4000 {
            let theta = TAU * (f64::from(j) + 0.5) / 4000.0;
            let s = theta.sin();
            if s.abs() < 1e-8 {
                continue;
            }
            worst = worst.max((((f64::from(k) * theta).sin() / s).abs() - ctx.s * f64::from(k)) / f64::from(k));
        }
    }
    Ok(Outcome::within(worst, 1e-12, "max (|sin k theta / sin theta| - k) / k, k <= 30"))
}

fn certify_random_500(ctx: &mut Ctx) -> Result<Outcome> {
    certify_random(ctx, 500, Grid::new(64, 128)?, 256)
}

fn convexity_dichotomy(ctx: &mut Ctx) -> Result<Outcome> {
    let cs: Vec<f64> = linspace(0.17, 0.27, 101).collect();
    let verdicts = cs.iter().map(|&c| convex_at(c, 4096)).collect::<Result<Vec<_>>>()?;
    let flips: Vec<usize> = (1..verdicts.len()).filter(|&i| verdicts[i] != verdicts[i - 1]).collect();
    if flips.len() != 1 || !verdicts[0] {
        return Ok(Outcome::count(flips.len().max(1), format!("{} verdict changes across c in [0.17, 0.27]", flips.len())));
    }
    let at = 0.5 * (cs[flips[0] - 1] + cs[flips[0]]);
    Ok(Outcome::within(
        (at - ctx.s * 2.0 / 9.0).abs(),
        1e-3,
        format!("single flip near c = {at:.4}, step 1e-3"),
    ))
}

// ---------------------------------------------------------------- area invariants

fn h_aux_shape(ctx: &mut Ctx) -> Result<Outcome> {
    let neg = linspace(-0.99, 0.79, 200)
        .filter(|&a| !(ctx.s * h_aux(a).unwrap_or(f64::NAN) < 0.0))
        .count();
    let values = linspace(-0.99, 0.99, 200).map(h_aux).collect::<Result<Vec<_>>>()?;
    let non_inc = values.windows(2).filter(|w| !(w[1] > w[0])).count();
    Ok(Outcome::count(
        neg + non_inc,
        format!("h < 0 on (-1, 0.8): {neg} violations; h increasing on (-1, 1): {non_inc} violations"),
    ))
}

fn fundamental_identity(ctx: &mut Ctx) -> Result<Outcome> {
    let mut worst = 0.0f64;
    for &alpha in &[0.0, 2.0, 4.0, -0.5, 0.5, 1.3] {
        let r_end = if crate::specfun::polyharmonic_order(alpha).is_some() { 1.0 } else { MAX_SERIES_RADIUS };
        for k in 1..=8 {
            let (lhs, rhs) = radial_identity(alpha, k, r_end, 64)?;
            worst = worst.max(rel(lhs, ctx.s * rhs));
        }
    }
    Ok(Outcome::within(worst, 1e-8, "2k * integral vs k F^2 r^2k at the end radius, k = 1..8"))
}
