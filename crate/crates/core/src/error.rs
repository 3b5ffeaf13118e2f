use alloc::string::String;
use alloc::vec::Vec;

/// Errors raised across the symbolic and numeric layers.
#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum Error {
    #[error("syntax error at byte {pos}: {msg}")]
    Syntax { pos: usize, msg: String },
    #[error("unknown variable `{0}`")]
    UnknownVariable(String),
    #[error("variable lists differ")]
    VariableMismatch,
    #[error("denominator vanishes at the evaluation point")]
    SingularPoint,
    #[error("domain error: {0}")]
    Domain(String),
    #[error("factor `{0}` is not a declared singular factor")]
    UndeclaredFactor(String),

    #[error("generators are degenerate: generic rank {found} < {expected}")]
    DegenerateGenerators { expected: usize, found: usize },
    #[error("bracket [V{i}, V{j}] not verified in the span up to degree {bound}")]
    NotInvolutive { i: usize, j: usize, bound: u32 },
    #[error("coframe conversion needs rank = dim (rank {rank}, dim {dim})")]
    RankDeficient { rank: usize, dim: usize },
    #[error("determinant `{0}` has factors outside the declared singular set")]
    DeterminantOutsideSingularSet(String),
    #[error("Z component `{component}` is not preserved by generator {generator}")]
    TangencyViolation { component: String, generator: usize },

    #[error("operands live on different frames")]
    FrameMismatch,
    #[error("operands use different bases")]
    BasisMismatch,
    #[error("form degree {found} where {expected} was required")]
    DegreeMismatch { expected: usize, found: usize },
    #[error("operation needs a genuine (polynomial-coefficient) form")]
    ExtendedForm,
    #[error("2-form is degenerate: {0}")]
    Degenerate(String),
    #[error("determinant `{0}` is not a unit of the coefficient ring")]
    NonUnitDeterminant(String),
    #[error("bivector is not Poisson")]
    NotPoisson,

    #[error("index {index} is not a singular hyperplane of this stratum")]
    NotSingularHere { index: usize },
    #[error("assignment does not cover ordered stratum {0:?}")]
    MissingStratum(Vec<usize>),
    #[error("form is not closed")]
    NotClosed,
    #[error("form is closed but not exact in the computed degrees")]
    NotExact,

    #[error("graded mode unavailable: {0}")]
    NotGraded(String),
    #[error("invalid argument: {0}")]
    InvalidArgument(String),

    #[error("quadrature did not converge (error estimate {estimate:e} > {tol:e})")]
    NoConvergence { estimate: f64, tol: f64 },
    #[error("dμ differs from ω1 - ω0")]
    NotAPrimitive,
    #[error("trajectory left the chart box at t = {t}")]
    LeftChart { t: f64 },
    #[error("step rejected at t = {t}: non-finite state")]
    StepRejected { t: f64 },
    #[error("point {0:?} lies on the singular locus")]
    OnSingularLocus(Vec<f64>),
}

pub type Result<T, E = Error> = core::result::Result<T, E>;
