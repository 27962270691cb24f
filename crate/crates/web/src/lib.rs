//! Browser bindings for the demo page in `www/`.
//!
//! Each export takes plain numbers or JSON text and returns JSON text, so the
//! page needs no generated type glue beyond strings.

use std::f64::consts::TAU;

use kernelmap::area::{area_sweep, is_strictly_decreasing};
use kernelmap::field::CoefficientSequence;
use kernelmap::univalence::{
    bound_m, bound_n, boundary_curve, check_convexity, rkc_certificate, special_map, Grid, SpecialMap,
};
use kernelmap::Complex64;
use serde_json::{json, Value};
use wasm_bindgen::prelude::*;

const MESH_CIRCLES: usize = 10;
const MESH_RAYS: usize = 24;
const MESH_SAMPLES: usize = 256;

fn pts(zs: impl Iterator<Item = Complex64>) -> Value {
    Value::Array(zs.map(|z| json!([z.re, z.im])).collect())
}

/// Images of concentric circles and rays under `u = F_1 z + c F_k z̄^k`,
/// together with the univalence certificate on a `radial x angular` grid.
pub fn special_map_view(alpha: f64, k: u32, c: f64, radial: usize, angular: usize) -> Result<String, String> {
    let s = SpecialMap::new(alpha, k, c).map_err(|e| e.to_string())?;
    let m = special_map(s);
    let r_top = m.max_radius();
    let image = |r: f64, theta: f64| -> Result<Complex64, String> {
        let profile = m.profile(r).map_err(|e| e.to_string())?;
        Ok(m.eval_on(&profile, Complex64::from_polar(r, theta)))
    };
    let mut circles = Vec::new();
    for i in 1..=MESH_CIRCLES {
        let r = r_top * i as f64 / MESH_CIRCLES as f64;
        let profile = m.profile(r).map_err(|e| e.to_string())?;
        let ring = (0..=MESH_SAMPLES)
            .map(|j| m.eval_on(&profile, Complex64::from_polar(r, TAU * j as f64 / MESH_SAMPLES as f64)));
        circles.push(pts(ring));
    }
    let mut rays = Vec::new();
    for j in 0..MESH_RAYS {
        let theta = TAU * j as f64 / MESH_RAYS as f64;
        let ray = (0..=64)
            .map(|i| image(r_top * f64::from(i) / 64.0, theta))
            .collect::<Result<Vec<_>, _>>()?;
        rays.push(pts(ray.into_iter()));
    }
    let certificate = if alpha > 0.0 && alpha <= 2.0 {
        let grid = Grid::new(radial, angular).map_err(|e| e.to_string())?;
        serde_json::to_value(rkc_certificate(s, grid).map_err(|e| e.to_string())?).map_err(|e| e.to_string())?
    } else {
        Value::Null
    };
    Ok(json!({ "circles": circles, "rays": rays, "certificate": certificate }).to_string())
}

/// Sampled boundary curve `F_1(1) e^{iθ} + c F_k(1) e^{-ikθ}`, its convexity
/// verdict and the bounds `N`, `M`.
pub fn boundary_view(alpha: f64, k: u32, c: f64, samples: usize) -> Result<String, String> {
    let s = SpecialMap::new(alpha, k, c).map_err(|e| e.to_string())?;
    let bc = boundary_curve(s).map_err(|e| e.to_string())?;
    let n_samples = samples.max(8 * k as usize + 16);
    let convex = check_convexity(&bc, n_samples).map_err(|e| e.to_string())?;
    let curve = (0..=n_samples).map(|j| bc.eval(TAU * j as f64 / n_samples as f64));
    Ok(json!({
        "curve": pts(curve),
        "convex": convex,
        "samples": n_samples,
        "N": bound_n(alpha, k).ok(),
        "M": bound_m(alpha, k).map_err(|e| e.to_string())?,
    })
    .to_string())
}

/// `S_u(α)` for `n` values of α evenly spaced on `[lo, hi]`; the coefficients
/// are a JSON list of `{"k", "re", "im"}` objects.
pub fn area_sweep_view(coeffs_json: &str, lo: f64, hi: f64, n: usize) -> Result<String, String> {
    let entries: Vec<Value> = serde_json::from_str(coeffs_json).map_err(|e| format!("coefficients: {e}"))?;
    let pairs = entries
        .iter()
        .map(|e| {
            let k = e["k"].as_i64().ok_or("each coefficient needs an integer \"k\"")?;
            let re = e["re"].as_f64().unwrap_or(0.0);
            let im = e["im"].as_f64().unwrap_or(0.0);
            Ok((k, Complex64::new(re, im)))
        })
        .collect::<Result<Vec<_>, String>>()?;
    let coeffs = CoefficientSequence::from_pairs(pairs).map_err(|e| e.to_string())?;
    if !(2..=2000).contains(&n) || lo.is_nan() || hi.is_nan() || lo >= hi {
        return Err("need lo < hi and 2 <= n <= 2000".into());
    }
    let alphas: Vec<f64> = (0..n).map(|i| lo + (hi - lo) * i as f64 / (n - 1) as f64).collect();
    let sweep = area_sweep(&coeffs, &alphas).map_err(|e| e.to_string())?;
    let values: Option<Vec<f64>> = sweep.iter().map(|e| e.s_u).collect();
    Ok(json!({
        "sweep": sweep,
        "strictly_decreasing": values.is_some_and(|v| is_strictly_decreasing(&v)),
    })
    .to_string())
}

#[wasm_bindgen(js_name = specialMapView)]
pub fn special_map_view_js(alpha: f64, k: u32, c: f64, radial: usize, angular: usize) -> Result<String, JsError> {
    special_map_view(alpha, k, c, radial, angular).map_err(|e| JsError::new(&e))
}

#[wasm_bindgen(js_name = boundaryView)]
pub fn boundary_view_js(alpha: f64, k: u32, c: f64, samples: usize) -> Result<String, JsError> {
    boundary_view(alpha, k, c, samples).map_err(|e| JsError::new(&e))
}

#[wasm_bindgen(js_name = areaSweepView)]
pub fn area_sweep_view_js(coeffs_json: &str, lo: f64, hi: f64, n: usize) -> Result<String, JsError> {
    area_sweep_view(coeffs_json, lo, hi, n).map_err(|e| JsError::new(&e))
}
