use thiserror::Error;

/// Crate-wide result alias.
pub type Result<T> = std::result::Result<T, Error>;

/// Errors shared by wheel construction, the road solvers, and the
/// kinematics/validation layers.
#[derive(Debug, Error)]
#[non_exhaustive]
pub enum Error {
    /// A polar angle fell outside the wheel's domain.
    #[error("theta = {theta} outside wheel domain [{lo}, {hi}]")]
    OutOfDomain { theta: f64, lo: f64, hi: f64 },

    /// The radius evaluated to a non-positive (or non-finite) value.
    #[error("radius must stay positive: r({theta}) = {value}")]
    NonPositiveRadius { theta: f64, value: f64 },

    /// A constructor or solver argument violated an invariant.
    #[error("invalid parameter: {0}")]
    BadParameter(String),

    /// A query landed outside the sampled span of a curve.
    #[error("value {value} outside sampled range [{lo}, {hi}]")]
    OutOfRange { value: f64, lo: f64, hi: f64 },

    /// The inverse problem was handed a road that touches or crosses the
    /// x-axis.
    #[error("road must stay below the x-axis: f({x}) = {value}")]
    RoadAboveAxis { x: f64, value: f64 },

    /// The inverse trajectory left the road's x-interval before covering
    /// the requested rotation range.
    #[error("trajectory left the road interval at theta = {theta_reached}")]
    RangeExceeded { theta_reached: f64 },

    /// Adaptive refinement could not reach the configured tolerance.
    #[error("tolerance not met: {0}")]
    ToleranceNotMet(String),

    /// Arc length requested for a wheel that is continuous but nowhere
    /// differentiable; polyline lengths diverge under refinement, so no
    /// finite answer exists.
    #[error("arc length is undefined for a continuous-only wheel")]
    NotRectifiableHere,
}
