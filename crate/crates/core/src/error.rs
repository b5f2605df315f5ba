use thiserror::Error;

/// Errors produced by the numerical and algebraic routines of this crate.
#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error("quantity `{quantity}` uses base system {found:?}, expected {expected:?}")]
    BaseSystemMismatch {
        quantity: String,
        expected: Vec<String>,
        found: Vec<String>,
    },

    #[error("invalid base system: {0}")]
    InvalidBaseSystem(String),

    #[error("duplicate quantity name `{0}`")]
    DuplicateQuantity(String),

    #[error("empty quantity set")]
    EmptyQuantitySet,

    #[error("length mismatch: expected {expected}, got {found}")]
    LengthMismatch { expected: usize, found: usize },

    #[error("parse error on line {line}: {message}")]
    Parse { line: usize, message: String },

    #[error("a0 is not a root of the unperturbed polynomial (residual {residual})")]
    NotARoot { residual: f64 },

    #[error(
        "degenerate root: p'(a0) = {derivative} vanishes, the regular hierarchy is singular; \
         rescale x = eps^-p y with `rescale_singular` first"
    )]
    DegenerateRoot { derivative: f64 },

    #[error("scale exponent {0} is not a rational number with a small denominator")]
    NonRationalExponent(f64),

    #[error("polynomial family has an identically zero leading coefficient")]
    ZeroLeadingCoefficient,

    #[error("invalid argument: {0}")]
    InvalidArgument(String),

    #[error("step size underflow at t = {t} (h = {h:e}, span = {span}) after {steps} steps")]
    StepSizeUnderflow {
        t: f64,
        h: f64,
        span: f64,
        steps: usize,
    },

    #[error("step budget of {max_steps} exhausted at t = {t}")]
    TooManySteps { t: f64, max_steps: usize },

    #[error("Newton iteration did not converge in {iterations} iterations (last residual {residual:e})")]
    NewtonDivergence { iterations: usize, residual: f64 },

    #[error("unknown case `{0}`")]
    UnknownCase(String),

    #[error("horizon exponent {requested} exceeds the validity range ({validity} + 1) of case `{case}`")]
    HorizonTooLong {
        case: String,
        requested: f64,
        validity: i32,
    },

    #[error("eps = {eps} is below the overflow-safe floor {floor}")]
    EpsilonTooSmall { eps: f64, floor: f64 },

    #[error("carrier k = {k} is not phase matched (residual {residual:e})")]
    NotPhaseMatched { k: f64, residual: f64 },

    #[error("grid size {0} is not a power of two")]
    GridNotPowerOfTwo(usize),
}

pub type Result<T> = std::result::Result<T, Error>;
