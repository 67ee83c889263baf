use thiserror::Error;

/// Errors raised by the coarse-structure toolkit.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("coordinate index {index} exceeds the coordinate bound {bound}")]
    BoundExceeded { index: usize, bound: usize },

    #[error("invalid group specification: {0}")]
    InvalidSpec(String),

    #[error("element is not in canonical form: {0}")]
    NotCanonical(String),

    #[error("a support window needs finite moduli; coordinate {0} is infinite cyclic")]
    UnboundedWindow(usize),

    #[error("invalid window: {0}")]
    InvalidWindow(String),

    #[error("window would contain {size} elements, above the limit {limit}")]
    WindowTooLarge { size: u128, limit: usize },

    #[error("invalid generator system: {0}")]
    InvalidGenerators(String),

    #[error("ball enumeration exceeded the cap of {cap} elements")]
    BallTooLarge { cap: usize },

    #[error("invalid argument: {0}")]
    InvalidArgument(String),

    #[error("no answer within the search bound {max_r}")]
    ExceedsBound { max_r: u32 },

    #[error("operation needs a Boolean group (every modulus 2)")]
    WrongGroup,

    #[error("sequence of length {len} is too long (maximum {max})")]
    TooLong { len: usize, max: usize },

    #[error("index {index} out of range for a sequence of length {len}")]
    IndexOutOfRange { index: usize, len: usize },

    #[error(
        "scan exhausted after {selected} terms: no candidate below index {scan_limit} passed ({last_failure})"
    )]
    ScanExhausted {
        selected: usize,
        scan_limit: usize,
        last_failure: String,
    },

    #[error("candidate sets leave {uncovered} window points uncovered")]
    CandidatesInsufficient { uncovered: usize },

    #[error("interior margin {margin} leaves no interior points in the window")]
    EmptyInterior { margin: u32 },

    #[error("function is not binary-valued")]
    NotBinary,

    #[error("function table has {got} values for a window of {expected} points")]
    FunctionShape { expected: usize, got: usize },

    #[error("element is not in the window")]
    OutsideWindow,
}

pub type Result<T> = std::result::Result<T, Error>;
