use std::fmt::Write as _;
use std::io::Write as _;

use kernelmap::area::{area_report, area_sweep, is_strictly_decreasing, AreaReport, SweepEntry, MIN_RESOLUTION};
use kernelmap::field::{eval_u, DiskPoint};
use kernelmap::poisson::{recommended_nodes, series_solution, solve_dirichlet, MAX_SOLVE_RADIUS};
use kernelmap::represent::{build_rep, eval_rep};
use kernelmap::univalence::{bound_m, bound_n, rkc_certificate, Grid, SpecialMap};
use kernelmap::verify::{self, Fault, VerifyOptions};
use kernelmap::Complex64;
use serde::Serialize;

use crate::config::{JobConfig, MAX_NODES};
use crate::{Common, Failure};

const DEFAULT_EVAL_GRID: &str = "16x16";
const DEFAULT_SOLVE_GRID: &str = "8x16";
const DEFAULT_SOLVE_RADIUS: f64 = 0.9;

fn load(common: &Common) -> Result<JobConfig, Failure> {
    match &common.config {
        Some(path) => JobConfig::load(path),
        None => Err(Failure::config("--config PATH is required")),
    }
}

fn grid(common: &Common, cfg: &JobConfig, default: &str) -> Result<Grid, Failure> {
    let spec = common.grid.as_deref().or(cfg.grid.as_deref()).unwrap_or(default);
    Ok(spec.parse::<Grid>()?)
}

fn emit(common: &Common, text: &str) -> Result<(), Failure> {
    match &common.out {
        Some(path) => std::fs::write(path, text).map_err(Failure::io),
        None => std::io::stdout().lock().write_all(text.as_bytes()).map_err(Failure::io),
    }
}

fn emit_json<T: Serialize>(common: &Common, value: &T) -> Result<(), Failure> {
    let mut text = serde_json::to_string_pretty(value).map_err(|e| Failure::config(e.to_string()))?;
    text.push('\n');
    emit(common, &text)
}

/// Seventeen significant digits.
fn num(x: f64) -> String {
    format!("{x:.16e}")
}

pub fn eval(common: &Common) -> Result<u8, Failure> {
    let cfg = load(common)?;
    let m = cfg.map()?;
    let grid = grid(common, &cfg, DEFAULT_EVAL_GRID)?;
    let rep = match cfg.method.as_deref().unwrap_or("series") {
        "series" => None,
        "representation" => Some(build_rep(&m)?),
        other => return Err(Failure::config(format!("unknown method {other:?}; use series or representation"))),
    };
    let mut out = String::from("r,theta,re_u,im_u,jacobian\n");
    for i in 0..grid.radial {
        let r = grid.radius(i);
        let profile = m.profile(r)?;
        for j in 0..grid.angular {
            let theta = grid.angle(j);
            let z = Complex64::from_polar(r, theta);
            let u = match &rep {
                Some(rep) => eval_rep(rep, DiskPoint::new(r, theta)?),
                None => m.eval_on(&profile, z),
            };
            let jac = m.wirtinger_on(&profile, z).jacobian();
            writeln!(out, "{},{},{},{},{}", num(r), num(theta), num(u.re), num(u.im), num(jac)).expect("string");
        }
    }
    emit(common, &out)?;
    Ok(0)
}

pub fn solve(common: &Common) -> Result<u8, Failure> {
    let cfg = load(common)?;
    let alpha = cfg.alpha()?;
    let bc = cfg.boundary()?;
    // Validates alpha before any work.
    let series = series_solution(alpha, &bc)?;
    let grid = grid(common, &cfg, DEFAULT_SOLVE_GRID)?;
    let r_max = cfg.r_max.unwrap_or(DEFAULT_SOLVE_RADIUS);
    if !(r_max > 0.0 && r_max <= MAX_SOLVE_RADIUS) {
        return Err(Failure::config(format!("r_max must lie in (0, {MAX_SOLVE_RADIUS}], got {r_max}")));
    }
    let nodes = common
        .nodes
        .or(cfg.nodes)
        .unwrap_or_else(|| recommended_nodes(bc.degree(), r_max));
    if nodes > MAX_NODES {
        return Err(Failure::config(format!("nodes = {nodes} exceeds {MAX_NODES}")));
    }
    let mut out = String::from("r,theta,re_u,im_u");
    out.push_str(if cfg.residual { ",residual\n" } else { "\n" });
    for i in 0..grid.radial {
        let r = r_max * i as f64 / (grid.radial - 1) as f64;
        for j in 0..grid.angular {
            let theta = grid.angle(j);
            let p = DiskPoint::new(r, theta)?;
            let u = solve_dirichlet(alpha, &bc, p, nodes)?;
            write!(out, "{},{},{},{}", num(r), num(theta), num(u.re), num(u.im)).expect("string");
            if cfg.residual {
                write!(out, ",{}", num((u - eval_u(&series, p)?).norm())).expect("string");
            }
            out.push('\n');
        }
    }
    emit(common, &out)?;
    Ok(0)
}

#[derive(Serialize)]
struct BoundsOut {
    #[serde(rename = "N")]
    n: Option<f64>,
    #[serde(rename = "M")]
    m: f64,
    #[serde(rename = "L")]
    l: Option<f64>,
}

pub fn bounds(common: &Common, alpha: Option<f64>, k: Option<u32>) -> Result<u8, Failure> {
    let cfg = match &common.config {
        Some(path) => JobConfig::load(path)?,
        None => JobConfig::default(),
    };
    let alpha = alpha.or(cfg.alpha).ok_or_else(|| Failure::config("bounds needs --alpha or \"alpha\""))?;
    let k = k.or(cfg.k).ok_or_else(|| Failure::config("bounds needs --k or \"k\""))?;
    let m = bound_m(alpha, k)?;
    let n = match bound_n(alpha, k) {
        Ok(n) => Some(n),
        Err(e) => {
            eprintln!("kernelmap: N and L are null: {e}");
            None
        }
    };
    emit_json(common, &BoundsOut { n, m, l: n.map(|n| n.min(m)) })?;
    Ok(0)
}

pub fn certify(common: &Common) -> Result<u8, Failure> {
    let cfg = load(common)?;
    let alpha = cfg.alpha()?;
    if !(alpha > 0.0 && alpha <= 2.0) {
        return Err(Failure::config(format!("certification needs alpha in (0, 2] where N is defined, got {alpha}")));
    }
    let k = cfg.k.ok_or_else(|| Failure::config("certify needs \"k\""))?;
    let c = cfg.c_minus_k.ok_or_else(|| Failure::config("certify needs \"c_minus_k\""))?;
    let grid = grid(common, &cfg, "200x256")?;
    let report = rkc_certificate(SpecialMap::new(alpha, k, c)?, grid)?;
    emit_json(common, &report)?;
    Ok(if report.passed { 0 } else { 1 })
}

#[derive(Serialize)]
struct AreaOut {
    #[serde(flatten)]
    report: AreaReport,
    #[serde(skip_serializing_if = "Option::is_none")]
    sweep: Option<Vec<SweepEntry>>,
    #[serde(skip_serializing_if = "Option::is_none")]
    sweep_strictly_decreasing: Option<bool>,
}

pub fn area(common: &Common) -> Result<u8, Failure> {
    let cfg = load(common)?;
    let m = cfg.map()?;
    let (n_r, n_theta) = match common.grid.as_deref() {
        Some(spec) => {
            let g: Grid = spec.parse()?;
            (g.radial, g.angular)
        }
        None => (cfg.n_r.unwrap_or(MIN_RESOLUTION), cfg.n_theta.unwrap_or(MIN_RESOLUTION)),
    };
    let report = area_report(&m, n_r, n_theta)?;
    let (sweep, sweep_strictly_decreasing) = match &cfg.sweep {
        Some(alphas) => {
            let entries = area_sweep(m.coeffs(), alphas)?;
            let values: Option<Vec<f64>> = entries.iter().map(|e| e.s_u).collect();
            let decreasing = values.is_some_and(|v| is_strictly_decreasing(&v));
            (Some(entries), Some(decreasing))
        }
        None => (None, None),
    };
    emit_json(
        common,
        &AreaOut {
            report,
            sweep,
            sweep_strictly_decreasing,
        },
    )?;
    Ok(0)
}

pub fn verify(common: &Common, seed: u64, suites: Vec<String>, inject_fault: bool) -> Result<u8, Failure> {
    let opts = VerifyOptions {
        seed,
        suites,
        fault: inject_fault.then_some(Fault::FlipSign),
    };
    let results = verify::run(&opts).map_err(Failure::config)?;
    let passed = results.iter().all(|r| r.passed);
    match &common.out {
        Some(_) => emit_json(common, &results)?,
        None => {
            let mut text: String = results.iter().map(|r| r.line() + "\n").collect();
            let failed = results.iter().filter(|r| !r.passed).count();
            writeln!(text, "{} checks, {failed} failed (seed {seed})", results.len()).expect("string");
            emit(common, &text)?;
        }
    }
    Ok(if passed { 0 } else { 1 })
}
