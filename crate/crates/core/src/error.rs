use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("amplitude vector has length {got}, expected N+1 = {expected}")]
    LengthMismatch { expected: usize, got: usize },

    #[error("amplitude {index} is not finite")]
    NonFinite { index: usize },

    #[error("state vector has zero norm")]
    ZeroNorm,

    #[error("monomial has {0} factors, at most {max} are supported", max = crate::fock::MAX_MONOMIAL_LEN)]
    MonomialTooLong(usize),

    #[error("cannot parse monomial factor `{0}`")]
    BadFactor(String),

    #[error("particle numbers differ ({left} vs {right})")]
    ParticleMismatch { left: usize, right: usize },

    #[error("invalid parameter `{name}`: {reason}")]
    InvalidParameter { name: &'static str, reason: String },

    #[error(
        "boundary weight |C_0|^2 = {c0:.3e}, |C_N|^2 = {cn:.3e} exceeds tolerance {tol:.1e}; \
         state lies outside the fragmented-cat regime"
    )]
    BoundaryWeight { c0: f64, cn: f64, tol: f64 },

    #[error("weight ratio r diverges (pure |-beta> limit)")]
    RatioDiverges,

    #[error("odd-sector weight u diverges (pure |odd> limit)")]
    OddWeightDiverges,
}

impl Error {
    pub(crate) fn param(name: &'static str, reason: impl Into<String>) -> Self {
        Error::InvalidParameter {
            name,
            reason: reason.into(),
        }
    }
}
