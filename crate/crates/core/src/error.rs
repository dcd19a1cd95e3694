use thiserror::Error;

/// Errors raised by the solvers in this crate.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("invalid input: {0}")]
    InvalidInput(String),

    #[error("degenerate equation: {0}")]
    Degenerate(String),

    #[error("domain error: {0}")]
    Domain(String),

    #[error("unknown preset `{0}`")]
    UnknownPreset(String),

    #[error("auto_r0: potential has neither a positive minimum nor a positive zero; supply r0 explicitly")]
    NoStructure,

    #[error("no real NU branch: {0}")]
    NoBranch(String),

    #[error("k = {k} is not a certified candidate (under-root discriminant {disc:e})")]
    InvalidK { k: f64, disc: f64 },

    #[error("unsupported sigma: closed-form factors require sigma(s) = s")]
    UnsupportedSigma,

    #[error("complex Laguerre index: q + 1/4 = {0} < 0")]
    ComplexIndex(f64),

    #[error("singular branch: denominator (2n + 1) +/- 2 sqrt(q + 1/4) vanishes for n = {n}")]
    SingularBranch { n: usize },

    #[error("state is not normalizable: {0}")]
    NonNormalizable(String),

    #[error("integration failed to converge on [{lo}, {hi}]")]
    Integration { lo: f64, hi: f64 },

    #[error("oracle: {0}")]
    Oracle(String),
}

pub type Result<T> = std::result::Result<T, Error>;

pub(crate) fn ensure_finite(name: &str, x: f64) -> Result<()> {
    if x.is_finite() {
        Ok(())
    } else {
        Err(Error::InvalidInput(format!("{name} is not finite ({x})")))
    }
}
