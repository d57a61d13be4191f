use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("group mismatch: {0}")]
    GroupMismatch(String),
    #[error("field mismatch")]
    FieldMismatch,
    #[error("subfield mismatch: {0}")]
    SubfieldMismatch(String),
    #[error("division by zero")]
    DivisionByZero,
    #[error("invalid field descriptor: {0}")]
    InvalidField(String),
    #[error("no rootless monic polynomial of degree <= {0}")]
    NotFound(usize),
    #[error("negative valuation")]
    NegativeValuation,
    #[error("unsatisfiable constraints: {0}")]
    Unsatisfiable(String),
    #[error("zero denominator")]
    ZeroDenominator,
    #[error("degree {degree} exceeds cap {cap}")]
    DegreeOverflow { degree: usize, cap: usize },
    #[error("composite undefined: outer function has a pole at the constant inner value")]
    UndefinedComposite,
    #[error("zero polynomial")]
    ZeroPolynomial,
    #[error("zero function")]
    ZeroFunction,
    #[error("inconsistent constraints: {0}")]
    InconsistentConstraints(String),
    #[error("element is not in the domain")]
    NotInDomain,
    #[error("generator(s) {0:?} have a pole at the sample point")]
    PoleAtSample(Vec<usize>),
    #[error("residues do not form a basis: {0}")]
    NotABasis(String),
    #[error("maximal ideal is not principal in the valuation overring")]
    MNotPrincipal,
    #[error("second function is zero")]
    ZeroSecond,
    #[error("unsupported scene: {0}")]
    UnsupportedScene(String),
    #[error("scene does not meet the suite hypotheses: {0}")]
    SceneMismatch(String),
    #[error("invalid filter: {0}")]
    InvalidFilter(String),
    #[error("syntax error at {pos}: {msg}")]
    Syntax { pos: usize, msg: String },
    #[error("rational exponent not allowed: {0}")]
    RationalExponentNotAllowed(String),
    #[error("unknown symbol `{0}`")]
    UnknownSymbol(String),
    #[error("schema error at {path}: {msg}")]
    Schema { path: String, msg: String },
    #[error("io error: {0}")]
    Io(String),
    #[error("usage: {0}")]
    Usage(String),
}

pub type Result<T> = std::result::Result<T, Error>;
