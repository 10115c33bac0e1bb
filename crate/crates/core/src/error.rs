use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("polynomial degree {degree} exceeds the configured bound {bound}")]
    ExponentOverflow { degree: u32, bound: u32 },

    #[error("expression is not divisible by generator {generator}: remainder {remainder}")]
    NotDivisible { generator: usize, remainder: String },

    #[error("expression contains smooth primitives where a polynomial is required")]
    NonPolynomial,

    #[error("bump radii must satisfy 0 < inner < outer")]
    BadRadii,

    #[error("operands live over different rings")]
    RingMismatch,

    #[error("ring presentations support at most 64 generators, got {0}")]
    TooManyGenerators(usize),

    #[error("generator index {index} out of range for a ring with {count} generators")]
    GeneratorOutOfRange { index: usize, count: usize },

    #[error("expected {expected} {what}, got {got}")]
    ArityMismatch {
        what: &'static str,
        expected: usize,
        got: usize,
    },

    #[error("ring map does not send ideal generator {generator} into the target ideal")]
    InvalidHom { generator: usize },

    #[error("vector fields are not related by the ring map: generator {generator}")]
    NotRelated { generator: usize },

    #[error("vector field is not tangent: image of ideal generator {generator} reduces to {reduction}")]
    NotTangent { generator: usize, reduction: String },

    #[error("classes live over different ideals")]
    IdealMismatch,

    #[error("canonical pairs are only defined over the ideal <x*y> in two variables")]
    WrongIdeal,

    #[error("operators of degree {left} and {right} cannot be summed")]
    DegreeMismatch { left: i32, right: i32 },

    #[error("local data on {first} and {second} disagree at {witness:?}")]
    Incompatible {
        first: String,
        second: String,
        witness: Vec<f64>,
    },

    #[error("local derivation family is not compatible with restrictions ({0})")]
    IncompatibleFamily(String),

    #[error("invalid open poset: {0}")]
    InvalidPoset(String),

    #[error("syntax error at column {column}: {message}")]
    Syntax { column: usize, message: String },

    #[error("unknown identifier `{0}`")]
    UnknownIdentifier(String),

    #[error("unknown primitive `{0}`")]
    UnknownPrimitive(String),

    #[error("invalid input: {0}")]
    Invalid(String),
}

impl Error {
    /// Variant name, used as the machine-readable error kind.
    pub fn kind(&self) -> &'static str {
        match self {
            Error::ExponentOverflow { .. } => "ExponentOverflow",
            Error::NotDivisible { .. } => "NotDivisible",
            Error::NonPolynomial => "NonPolynomial",
            Error::BadRadii => "BadRadii",
            Error::RingMismatch => "RingMismatch",
            Error::TooManyGenerators(_) => "TooManyGenerators",
            Error::GeneratorOutOfRange { .. } => "GeneratorOutOfRange",
            Error::ArityMismatch { .. } => "ArityMismatch",
            Error::InvalidHom { .. } => "InvalidHom",
            Error::NotRelated { .. } => "NotRelated",
            Error::NotTangent { .. } => "NotTangent",
            Error::IdealMismatch => "IdealMismatch",
            Error::WrongIdeal => "WrongIdeal",
            Error::DegreeMismatch { .. } => "DegreeMismatch",
            Error::Incompatible { .. } => "Incompatible",
            Error::IncompatibleFamily(_) => "IncompatibleFamily",
            Error::InvalidPoset(_) => "InvalidPoset",
            Error::Syntax { .. } => "SyntaxError",
            Error::UnknownIdentifier(_) => "UnknownIdentifier",
            Error::UnknownPrimitive(_) => "UnknownPrimitive",
            Error::Invalid(_) => "Invalid",
        }
    }

    /// Errors in the input text itself rather than in the mathematics.
    pub fn is_syntax(&self) -> bool {
        matches!(
            self,
            Error::Syntax { .. } | Error::UnknownIdentifier(_) | Error::UnknownPrimitive(_)
        )
    }
}
