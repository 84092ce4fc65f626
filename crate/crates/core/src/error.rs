use thiserror::Error;

use crate::census::ValidationReport;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("division by zero")]
    DivisionByZero,
    #[error("field order {order} exceeds the cap {cap}")]
    OrderOverflow { order: u32, cap: u32 },
    #[error("sign requested for a non-real element")]
    NotReal,
    #[error("invalid input: {0}")]
    InvalidInput(String),
    #[error("parse error: {0}")]
    Parse(String),

    #[error("input points are collinear")]
    CollinearInput,
    #[error("projection target equals the center")]
    TargetEqualsCenter,
    #[error("projection center lies on the screen plane")]
    CenterOnScreen,

    #[error("validation failed: {0}")]
    ValidationFailure(Box<ValidationReport>),
    #[error("points are not coplanar")]
    NotCoplanar,
    #[error("could not sample {0} distinct points within the bound")]
    CannotSample(usize),

    #[error("edge is not rather good")]
    NotRatherGood,
    #[error("structure violation: {0}")]
    StructureViolation(String),
    #[error("arrangement violation: {0}")]
    ArrangementViolation(String),
    #[error("n = {n} exceeds the cap {cap}")]
    CapExceeded { n: usize, cap: usize },

    #[error("point is not on the base locus of the pencil")]
    PointNotOnBaseLocus,
    #[error("tangent kernels coincide or vanish")]
    EqualOrDegenerateKernels,
    #[error("gradient vanishes at the point")]
    SingularPoint,
    #[error("intersection points coincide")]
    CoincidentIntersectionPoints,
    #[error("degenerate intersections")]
    DegenerateIntersections,
    #[error("forms are linearly dependent")]
    DependentForms,
    #[error("coefficients are not rational")]
    NonRationalCoefficients,

    #[error("no rather-good segment of length at least {0}")]
    NoSegmentLongEnough(usize),
    #[error("{outliers} outliers exceed the budget {budget}")]
    BudgetExceeded { outliers: usize, budget: usize },

    #[error("pencil is degenerate at the pole")]
    PencilDegenerateAtPole,
}
