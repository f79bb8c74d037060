use thiserror::Error;

/// Typed failures of the dynamical computations.
///
/// Most of these are data rather than bugs: a parameter that is not
/// renormalizable or a pullback that hits a branch cut is a legitimate
/// answer about the map under study.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("c = {c} > 1/4: the map has no real fixed points")]
    NoRealFixedPoints { c: f64 },

    #[error("c = {c} is outside the quadratic family range [-2, 1/4]")]
    ParamOutOfRange { c: f64 },

    #[error("invalid interval [{lo}, {hi}]")]
    InvalidInterval { lo: f64, hi: f64 },

    #[error("interval does not contain the critical point in its interior")]
    NotCentral,

    #[error("orbit of 0 did not return within a budget of {budget} iterates")]
    NoReturnWithinBudget { budget: usize },

    #[error("interval lies below the critical value, no real preimage")]
    NoPreimage,

    #[error("critical value lies outside the interval")]
    CriticalValueOutside,

    #[error("point is critical for the iterate at step {step}")]
    CriticalPoint { step: usize },

    #[error("point leaves the ambient range interval")]
    OutsideRange,

    #[error("alpha fixed point is not repelling (c = {c})")]
    AlphaAttracting { c: f64 },

    #[error("map is not renormalizable within the search budget")]
    NotRenormalizable,

    #[error("no preimage of 0 in [alpha, beta'] (attracting fixed point present)")]
    NoPreimageInInterval,

    #[error("point lies in the interior of the interval")]
    DegeneratePosition,

    #[error("inner interval is not contained in the outer one")]
    InvalidNesting,

    #[error("pullback hit a branch cut without bank information at step {step}")]
    BranchCutAmbiguity { step: usize },

    #[error("cascade is not of saddle-node type")]
    WrongCascadeKind,

    #[error("Julia sampling kept no points (grid too coarse)")]
    SamplingFailure,

    #[error("insufficient data: {0}")]
    InsufficientData(String),

    #[error("precondition violated: {0}")]
    Precondition(String),

    #[error("level {0} is not present in the tower")]
    MissingLevel(usize),

    #[error("internal invariant violated: {0}")]
    Invariant(String),
}

pub type Result<T> = std::result::Result<T, Error>;
