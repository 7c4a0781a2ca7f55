use thiserror::Error;

/// Errors raised across the library.
#[derive(Debug, Error)]
pub enum Error {
    #[error("alphabet size mismatch: {left} vs {right}")]
    AlphabetMismatch { left: u16, right: u16 },
    #[error("symbol {value} outside alphabet 1..={alphabet}")]
    InvalidSymbol { value: u16, alphabet: u16 },
    #[error("address depth must be at least {min}, got {got}")]
    DepthTooShallow { min: usize, got: usize },
    #[error("addresses have different depths: {left} vs {right}")]
    DepthMismatch { left: usize, right: usize },
    #[error("invalid probability vector: {0}")]
    InvalidProbability(String),
    #[error("point {point} is not in attractor `{label}` (no tile contains it at step {step})")]
    PointNotInAttractor { label: String, step: usize, point: String },
    #[error("tile enumeration of {tiles} exceeds the limit of {limit}")]
    DepthTooLarge { tiles: u128, limit: u128 },
    #[error("unknown label `{0}`")]
    UnknownLabel(String),
    #[error("invalid parameter: {0}")]
    InvalidParameter(String),
    #[error("sample {index} failed: {source}")]
    SampleFailure {
        index: usize,
        #[source]
        source: Box<Error>,
    },
    #[error("empty measure")]
    EmptyMeasure,
    #[error("under-powered test: {n} samples, need at least {required}")]
    UnderPowered { n: usize, required: usize },
    #[error("domain mismatch: `{left}` vs `{right}`")]
    DomainMismatch { left: String, right: String },
    #[error("invalid basis index: {0}")]
    InvalidIndex(String),
    #[error("grid resolution {resolution} too coarse, need at least {required}")]
    ResolutionTooCoarse { resolution: usize, required: usize },
    #[error("pullback not finite at stencil point {0}")]
    NonFinitePullback(f64),
    #[error("malformed image: {0}")]
    Image(String),
    #[error("parse error: {0}")]
    Parse(String),
    #[error(transparent)]
    Io(#[from] std::io::Error),
}

pub type Result<T, E = Error> = std::result::Result<T, E>;
