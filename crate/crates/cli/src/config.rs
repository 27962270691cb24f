use std::path::Path;

use kernelmap::field::{AlphaHarmonicMap, CoefficientSequence};
use kernelmap::poisson::BoundaryCurve;
use kernelmap::Complex64;
use serde::Deserialize;

use crate::Failure;

/// Largest accepted quadrature node count.
pub const MAX_NODES: usize = 1 << 20;

#[derive(Debug, Clone, Copy, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct CoeffEntry {
    pub k: i64,
    pub re: f64,
    #[serde(default)]
    pub im: f64,
}

#[derive(Debug, Clone, Default, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct JobConfig {
    pub alpha: Option<f64>,
    #[serde(default)]
    pub coefficients: Vec<CoeffEntry>,
    /// Polar grid as `NRxNT`.
    pub grid: Option<String>,
    /// Largest radius sampled by `solve`.
    pub r_max: Option<f64>,
    /// `eval` evaluator: `series` or `representation`.
    pub method: Option<String>,
    /// Boundary modes for `solve`.
    pub boundary: Option<Vec<CoeffEntry>>,
    /// Equispaced boundary samples `[re, im]` for `solve`.
    pub boundary_samples: Option<Vec<[f64; 2]>>,
    pub nodes: Option<usize>,
    /// Adds the series reconstruction residual column to `solve`.
    #[serde(default)]
    pub residual: bool,
    pub k: Option<u32>,
    pub c_minus_k: Option<f64>,
    pub sweep: Option<Vec<f64>>,
    pub n_r: Option<usize>,
    pub n_theta: Option<usize>,
}

impl JobConfig {
    pub fn load(path: &Path) -> Result<Self, Failure> {
        let text = std::fs::read_to_string(path)
            .map_err(|e| Failure::config(format!("cannot read {}: {e}", path.display())))?;
        serde_json::from_str(&text).map_err(|e| Failure::config(format!("malformed config {}: {e}", path.display())))
    }

    pub fn alpha(&self) -> Result<f64, Failure> {
        self.alpha.ok_or_else(|| Failure::config("config needs \"alpha\""))
    }

    pub fn coefficients(&self) -> Result<CoefficientSequence, Failure> {
        entries_to_sequence(&self.coefficients)
    }

    pub fn map(&self) -> Result<AlphaHarmonicMap, Failure> {
        Ok(AlphaHarmonicMap::new(self.alpha()?, self.coefficients()?)?)
    }

    pub fn boundary(&self) -> Result<BoundaryCurve, Failure> {
        match (&self.boundary, &self.boundary_samples) {
            (Some(modes), None) => Ok(BoundaryCurve::Modes(entries_to_sequence(modes)?)),
            (None, Some(samples)) => {
                if samples.is_empty() {
                    return Err(Failure::config("\"boundary_samples\" is empty"));
                }
                Ok(BoundaryCurve::Samples(samples.iter().map(|[re, im]| Complex64::new(*re, *im)).collect()))
            }
            (Some(_), Some(_)) => Err(Failure::config("give either \"boundary\" or \"boundary_samples\", not both")),
            (None, None) => Err(Failure::config("solve needs \"boundary\" modes or \"boundary_samples\"")),
        }
    }
}

fn entries_to_sequence(entries: &[CoeffEntry]) -> Result<CoefficientSequence, Failure> {
    Ok(CoefficientSequence::from_pairs(
        entries.iter().map(|e| (e.k, Complex64::new(e.re, e.im))),
    )?)
}
