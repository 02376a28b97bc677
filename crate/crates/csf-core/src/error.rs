//! Error type shared by every module of the crate.

use core::fmt;

/// Crate-wide result alias.
pub type Result<T> = core::result::Result<T, Error>;

/// Failure modes of constructions, solvers and measurements.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Error {
    /// Curve has coincident vertices, vanishing span or vanishing arclength.
    DegenerateCurve { reason: &'static str },
    /// Graph endpoint is not on the reflection axis within tolerance.
    BoundaryNotOnAxis { value: f64 },
    /// The requested side of the curve is not single-valued in y.
    NotGraphical,
    /// Argument outside the domain of a closed-form profile.
    DomainError { value: f64 },
    /// Closed-form solution no longer exists at the requested time.
    Extinct { time: f64 },
    /// Glued construction requested at or after its latest valid time.
    TimeTooLate { t: f64, latest: f64 },
    /// Ladder sequences violate the admissibility conditions.
    InvalidConfig { reason: &'static str },
    /// Barrier width parameter exceeds the reaper scale.
    BarrierTooWide { width: f64, max: f64 },
    /// Time step exceeds the solver's stability/accuracy guard.
    StepTooLarge { dt: f64, limit: f64 },
    /// Tridiagonal pivot collapsed below tolerance.
    SolverSingular,
    /// Adaptive stepping underflowed without reaching the target time.
    NonConvergent { t: f64 },
    /// First graph's domain is not contained in the second graph's domain.
    DomainMismatch,
    /// Operation requires a closed curve.
    NotClosed,
    /// Hull input has fewer than three non-collinear points.
    CollinearInput,
    /// Non-positive or non-finite scalar argument.
    InvalidInput { reason: &'static str },
}

impl fmt::Display for Error {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Error::DegenerateCurve { reason } => write!(f, "degenerate curve: {reason}"),
            Error::BoundaryNotOnAxis { value } => {
                write!(f, "graph endpoint off the reflection axis (|x| = {value:e})")
            }
            Error::NotGraphical => write!(f, "curve side is not single-valued in y"),
            Error::DomainError { value } => write!(f, "argument {value} outside profile domain"),
            Error::Extinct { time } => write!(f, "solution extinct at t = {time}"),
            Error::TimeTooLate { t, latest } => {
                write!(f, "construction time {t} not below latest valid time {latest}")
            }
            Error::InvalidConfig { reason } => write!(f, "invalid ladder config: {reason}"),
            Error::BarrierTooWide { width, max } => {
                write!(f, "barrier width {width} not below reaper scale {max}")
            }
            Error::StepTooLarge { dt, limit } => {
                write!(f, "time step {dt} exceeds guard {limit}")
            }
            Error::SolverSingular => write!(f, "tridiagonal pivot below tolerance"),
            Error::NonConvergent { t } => write!(f, "time step underflow at t = {t}"),
            Error::DomainMismatch => write!(f, "first domain not contained in second"),
            Error::NotClosed => write!(f, "operation requires a closed curve"),
            Error::CollinearInput => write!(f, "hull input is collinear"),
            Error::InvalidInput { reason } => write!(f, "invalid input: {reason}"),
        }
    }
}

impl core::error::Error for Error {}
