//! Error type shared across the crate.

use num_complex::Complex64;
use thiserror::Error;

/// Crate-wide result alias.
pub type Result<T> = std::result::Result<T, Error>;

/// All failure modes of the library.
///
/// Construction errors indicate invalid input; numerical errors
/// (`SingularSystem`, `PositivityViolation`, `NegativeDensity`, ...)
/// indicate that a computation left its domain of validity and should
/// be treated as bugs or ill-conditioned configurations, not ignored.
#[derive(Debug, Error)]
pub enum Error {
    #[error("arcs overlap or touch: arc {0} and arc {1}")]
    OverlappingArcs(usize, usize),

    #[error("degenerate arc {index}: counterclockwise length {length} outside (0, 2pi)")]
    DegenerateArc { index: usize, length: f64 },

    #[error("arc set is not invariant under complex conjugation")]
    AsymmetricArcSet,

    #[error("the point 1 lies inside the arc set, so no admissible gap 0 exists")]
    PointOneInsideE,

    #[error("Moebius map is singular (|det| = {0:.3e})")]
    SingularMoebius(f64),

    #[error("pole encountered at z = {0}")]
    PoleEncountered(Complex64),

    #[error("Caratheodory function not normalized: |M(0) - 1| = {0:.3e}")]
    NotNormalized(f64),

    #[error("reference point {0} is not strictly inside gap 0")]
    RefPointNotInGap(Complex64),

    #[error("extremal Schur function: |s(0)| = {0} leaves no room to strip")]
    ExtremalFunction(f64),

    #[error("Schur parameter {0} lies outside the open unit disk")]
    ParamOutOfDisk(Complex64),

    #[error("invalid Schur samples: {0}")]
    InvalidSchurSamples(String),

    #[error("divisor has {got} points but the arc set has {expected} gaps")]
    WrongGapCount { got: usize, expected: usize },

    #[error("divisor point {index} at angle {angle} does not lie on its closed gap")]
    PointOffGap { index: usize, angle: f64 },

    #[error("linear system is numerically singular (condition estimate {cond:.3e}) for divisor {divisor}")]
    SingularSystem { cond: f64, divisor: String },

    #[error("constructed function violates positivity on the disk grid: min Re M = {0:.3e}")]
    PositivityViolation(f64),

    #[error("fit did not converge: residual {residual:.3e} after {iterations} iterations")]
    NoConvergence { residual: f64, iterations: usize },

    #[error("function is not purely imaginary at the reference point: |Re M(zref)| = {0:.3e}")]
    NotImaginaryAtRef(f64),

    #[error("reference point is a pole of the function")]
    RefIsPole,

    #[error("density is negative ({value:.3e}) at angle {angle}")]
    NegativeDensity { angle: f64, value: f64 },

    #[error("extracted atom mass is negative ({mass:.3e}) at angle {angle}")]
    NegativeMass { angle: f64, mass: f64 },

    #[error("quadrature mass deficit: |total - 1| = {0:.3e} exceeds 1e-5")]
    MassDeficit(f64),

    #[error("point at angle {0} is not in the open interior of an arc")]
    PointNotOnSupport(f64),

    #[error("measure too thin: {nodes} nodes cannot resolve degree {degree}")]
    MeasureTooThin { nodes: usize, degree: usize },

    #[error("norm collapse at step {step}: squared norm {norm_sq:.3e}")]
    NormCollapse { step: usize, norm_sq: f64 },

    #[error("normalization point coincides with the Blaschke center")]
    NormalizationVanishes,

    #[error("consistency check '{what}' failed with residual {residual:.3e}")]
    ConsistencyCheck { what: &'static str, residual: f64 },

    #[error("invalid parameter: {0}")]
    InvalidParameter(String),

    #[error("i/o error: {0}")]
    Io(#[from] std::io::Error),

    #[error("json error: {0}")]
    Json(#[from] serde_json::Error),
}
