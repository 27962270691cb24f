use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("domain error: {0}")]
    Domain(String),

    #[error("overflow: {0}")]
    Overflow(String),

    #[error(
        "hypergeometric series F({a}, {b}; {c}; {t}) not converged after {terms} terms"
    )]
    NoConvergence {
        a: f64,
        b: f64,
        c: f64,
        t: f64,
        terms: usize,
    },

    /// For alpha <= -1 every solution with a boundary limit vanishes identically,
    /// so the Dirichlet problem carries no information.
    #[error(
        "alpha = {0} <= -1: every solution with a boundary limit vanishes identically \
         (u = 0 in the disk), so the Dirichlet problem is trivial and is rejected"
    )]
    DegenerateAlpha(f64),

    #[error("invalid input: {0}")]
    Invalid(String),

    #[error("degenerate sample: {0}")]
    Degenerate(String),
}

pub type Result<T> = std::result::Result<T, Error>;

pub(crate) fn check_alpha(alpha: f64) -> Result<()> {
    if !alpha.is_finite() {
        return Err(Error::Domain(format!("alpha must be finite, got {alpha}")));
    }
    if alpha <= -1.0 {
        return Err(Error::DegenerateAlpha(alpha));
    }
    Ok(())
}
