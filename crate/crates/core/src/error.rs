use thiserror::Error;

pub type Result<T, E = NcError> = std::result::Result<T, E>;

#[derive(Debug, Error)]
pub enum NcError {
    #[error("signature mismatch: {left} vs {right}")]
    SignatureMismatch { left: String, right: String },

    #[error("letter {letter} exceeds signature arity ({arity})")]
    ArityExceeded { letter: String, arity: usize },

    #[error("shape error: {0}")]
    Shape(String),

    #[error("parse error at offset {offset}: {message}")]
    Parse { offset: usize, message: String },

    #[error("resource limit exceeded: {0}")]
    Resource(String),

    #[error("domain error: {0}")]
    Domain(String),

    #[error("singularity: {0}")]
    Singularity(String),

    #[error("matrix is not unitary (deviation {deviation:.3e})")]
    NotUnitary { deviation: f64 },

    #[error("matrix is not Hermitian (deviation {deviation:.3e})")]
    NotHermitian { deviation: f64 },

    #[error(
        "ill-conditioned coefficient extraction (residual {residual:.3e}); try a larger degree cap or smaller radius"
    )]
    Extraction { residual: f64 },

    #[error("invalid measure: {0}")]
    Measure(String),

    #[error("evaluation failed on sample {sample}: {source}")]
    Sample {
        sample: usize,
        #[source]
        source: Box<NcError>,
    },

    #[error("{0}")]
    Usage(String),

    #[error(transparent)]
    Io(#[from] std::io::Error),

    #[error(transparent)]
    Json(#[from] serde_json::Error),
}

impl NcError {
    pub(crate) fn at_sample(self, sample: usize) -> Self {
        NcError::Sample {
            sample,
            source: Box::new(self),
        }
    }

    pub(crate) fn parse(offset: usize, message: impl Into<String>) -> Self {
        NcError::Parse {
            offset,
            message: message.into(),
        }
    }
}
