use thiserror::Error;

/// Errors raised by the geometric routines.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("base triangle is degenerate (twice signed area {area2:e} below threshold)")]
    DegenerateBase { area2: f64 },
    #[error("invalid base description: {0}")]
    InvalidBase(String),
    #[error("invalid tolerance configuration: {0}")]
    InvalidTolerance(String),
    #[error("lengths must be positive")]
    NonPositiveLength,
    #[error("apex coincides with base vertex {0}")]
    ApexAtBaseVertex(char),
    #[error("distances are inconsistent: raw cosine {0} outside [-1, 1]")]
    InconsistentDistances(f64),
    #[error("apex lies in the base plane")]
    CoplanarApex,
    #[error("base triangle is not acute")]
    NotAcuteBase,
    #[error("slice level {0} is outside (-1, 1)")]
    DegenerateSlice(f64),
    #[error("cylinder point needs positive height, got {0}")]
    HeightNonPositive(f64),
    #[error("point is on the non-smooth ray at phi = {0}")]
    NonSmoothPoint(f64),
    #[error("apex is not on the cylinder over the circumcircle")]
    NotOnCylinder,
    #[error("point coincides with a chord endpoint")]
    PointOnChordEndpoint,
    #[error("critical curve is empty: opposite angle is not acute")]
    EmptyCurve,
    #[error("special region is empty: a bounding angle is not acute")]
    EmptyRegion,
    #[error("mesh patch {patch} exceeds tolerance: residual {residual:e}")]
    MeshToleranceUnreachable { patch: String, residual: f64 },
    #[error("inverse solver did not converge: {0}")]
    SolverNonConvergence(String),
}

pub type Result<T> = std::result::Result<T, Error>;
