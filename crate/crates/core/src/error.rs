use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("line {line}: {message}")]
    Parse { line: usize, message: String },

    #[error("duplicate generator `{0}`")]
    DuplicateGenerator(String),

    #[error("unknown generator `{0}`")]
    UnknownGenerator(String),

    #[error("generator `{0}` cannot commute with itself")]
    SelfLoop(String),

    #[error("a group needs at least one generator")]
    NoGenerators,

    #[error("{0} generators exceed the supported maximum of {max}", max = crate::group::MAX_GENERATORS)]
    TooManyGenerators(usize),

    #[error("elements belong to different groups")]
    MixedGroups,

    #[error("enumeration exceeded the cap of {cap}")]
    CapExceeded { cap: usize },

    #[error("`{0}` is not a reflection")]
    NotAReflection(String),

    #[error("unknown colour {colour} (colouring uses 1..={n})")]
    UnknownColour { colour: usize, n: usize },

    #[error("invalid colouring: {0}")]
    InvalidColoring(String),

    #[error("reflections have different colours ({0} and {1})")]
    ColourMismatch(usize, usize),

    #[error("reflection has level {actual}, expected {expected}")]
    LevelMismatch { expected: u32, actual: u32 },

    #[error("product points have {0} and {1} coordinates")]
    ArityMismatch(usize, usize),

    #[error("invalid separation parameters: {0}")]
    InvalidParams(String),

    #[error("unknown builtin group `{0}`")]
    UnknownBuiltin(String),

    #[error("unknown suite `{0}`")]
    UnknownSuite(String),
}

pub type Result<T, E = Error> = std::result::Result<T, E>;
