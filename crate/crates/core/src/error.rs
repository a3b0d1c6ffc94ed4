use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum Error {
    #[error("syntax error at {line}:{column}: {message}")]
    Syntax {
        line: usize,
        column: usize,
        message: String,
    },

    #[error("atom `{atom}` is not part of the declared signature")]
    UnknownAtom { atom: String },

    #[error("duplicate atom `{0}` in signature")]
    DuplicateAtom(String),

    #[error("invalid atom name `{0}`")]
    InvalidAtomName(String),

    #[error("signature has {size} atoms, enumeration cap is {cap}")]
    SignatureTooLarge { size: usize, cap: usize },

    #[error("interpretation mentions atoms outside the signature")]
    SignatureMismatch,

    #[error("pair <{here}, {there}> is not a valid interpretation shape: {reason}")]
    InvalidShape {
        here: String,
        there: String,
        reason: &'static str,
    },

    #[error("base interpretation intersects the forgotten atoms")]
    BaseIntersectsForgotten,

    #[error("forgotten atom `{0}` is outside the ambient signature")]
    ForgetOutsideAmbient(String),

    #[error("model set is not total-closed: <{here}, {there}> present without <{there}, {there}>")]
    NotTotalClosed { here: String, there: String },

    #[error("synthesized program does not reproduce the target model set (internal bug)")]
    SynthesisMismatch,

    #[error("unknown property `{0}`")]
    UnknownProperty(String),

    #[error("unknown operator `{0}`")]
    UnknownOperator(String),

    #[error("operator `{0}` is not a model-set transformer")]
    UnsupportedOperator(String),

    #[error("invalid generator configuration: {0}")]
    InvalidConfig(String),

    #[error("malformed witness: {0}")]
    Witness(String),

    #[error("i/o error: {0}")]
    Io(String),
}

impl From<std::io::Error> for Error {
    fn from(e: std::io::Error) -> Self {
        Error::Io(e.to_string())
    }
}

pub type Result<T> = std::result::Result<T, Error>;
