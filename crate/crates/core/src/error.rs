use thiserror::Error;

/// Errors raised while building or analysing cones and fans.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("cone {context} contains a line (not strongly convex)")]
    NotStronglyConvex { context: String },

    #[error("cones {first} and {second} do not meet in a common face")]
    NotAFan { first: String, second: String },

    #[error("the zero cone has no interior point")]
    ZeroCone,

    #[error("cone {0} is not in the fan")]
    ConeNotInFan(String),

    #[error("{tau} is not a face of {sigma}")]
    NotAFace { sigma: String, tau: String },

    #[error("polynomials live on different cones")]
    ConeMismatch,

    #[error("piecewise polynomials belong to different fans")]
    FanMismatch,

    #[error("fan is not complete")]
    NotComplete,

    #[error("fan is not simplicial")]
    NotSimplicial,

    #[error("maximal cone {0} is not full-dimensional")]
    MaximalNotFullDim(String),

    #[error("dimension mismatch: {0}")]
    DimensionMismatch(String),

    #[error("coordinate does not fit in 64 bits")]
    Overflow,

    #[error("{0}")]
    Parse(String),
}

impl Error {
    /// Stable variant name for machine-readable reports.
    pub fn kind(&self) -> &'static str {
        match self {
            Error::NotStronglyConvex { .. } => "NotStronglyConvex",
            Error::NotAFan { .. } => "NotAFan",
            Error::ZeroCone => "ZeroCone",
            Error::ConeNotInFan(_) => "ConeNotInFan",
            Error::NotAFace { .. } => "NotAFace",
            Error::ConeMismatch => "ConeMismatch",
            Error::FanMismatch => "FanMismatch",
            Error::NotComplete => "NotComplete",
            Error::NotSimplicial => "NotSimplicial",
            Error::MaximalNotFullDim(_) => "MaximalNotFullDim",
            Error::DimensionMismatch(_) => "DimensionMismatch",
            Error::Overflow => "Overflow",
            Error::Parse(_) => "ParseError",
        }
    }
}

pub type Result<T> = std::result::Result<T, Error>;
