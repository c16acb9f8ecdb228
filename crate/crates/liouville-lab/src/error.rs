//! Error type shared by every module of the crate.

use thiserror::Error;

/// Convenience alias used throughout the crate.
pub type Result<T> = std::result::Result<T, Error>;

/// Everything that can go wrong while evaluating an identity, integrating a
/// profile or running a scan.
///
/// Variants carry enough context to produce an actionable message; none of
/// them is ever swallowed silently by the library.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    /// A parameter is outside its mathematical domain (e.g. `a <= 0`).
    #[error("invalid input: {0}")]
    InvalidInput(String),

    /// The parameters sit exactly on the rigid threshold `a = 1/(N+1)`,
    /// where the admissible mass interval collapses to a point.
    #[error("degenerate parameter: {0}")]
    DegenerateParameter(String),

    /// The requested formula or mechanism does not apply in this regime.
    #[error("out of regime: {0}")]
    OutOfRegime(String),

    /// A function was evaluated outside the domain where it is defined.
    #[error("out of domain: {0}")]
    OutOfDomain(String),

    /// A square root radicand is negative beyond the snapping tolerance.
    #[error("complex root: radicand {radicand:e} < 0 in {context}")]
    ComplexRoot { context: String, radicand: f64 },

    /// One part of a mass decomposition is negative: the total mass lies
    /// outside the admissible window.
    #[error("negative mass: beta1 = {beta1}, beta2 = {beta2} for beta = {beta}")]
    NegativeMass { beta: f64, beta1: f64, beta2: f64 },

    /// The power-law tails used to close the mass integrals are not
    /// integrable at the fixed point.
    #[error("tail divergent: beta = {beta} makes a power-law tail non-integrable")]
    TailDivergent { beta: f64 },

    /// `r u'` has not reached an integrable power-law regime at `r_max`.
    #[error("no decay by r_max = {r_max:e}: {reason}")]
    NoDecay { r_max: f64, reason: String },

    /// `u` exceeded the overflow guard of the exponential nonlinearity.
    #[error("overflow: u = {u} exceeds threshold {threshold}")]
    Overflow { u: f64, threshold: f64 },

    /// The series start radius is too large for the requested accuracy.
    #[error("series start radius too large: dropped-order estimate {estimate:e} > {tolerance:e}")]
    StepTooLarge { estimate: f64, tolerance: f64 },

    /// The integrator failed to make progress (step size underflow).
    #[error("integrator stalled at t = {t}: step size {h:e}")]
    IntegratorStalled { t: f64, h: f64 },

    /// A target mass lies outside the open radial interval.
    #[error("target beta = {target} outside the radial interval ({lo}, {hi})")]
    TargetOutsideInterval { target: f64, lo: f64, hi: f64 },

    /// A root-finding sweep could not bracket the target.
    #[error("could not bracket target {target}: {detail}")]
    NonBracketed { target: f64, detail: String },

    /// Two points of a configuration coincide (or a point is zero).
    #[error("coincident points: {0}")]
    CoincidentPoints(String),

    /// A cone angle in a conical-sphere reduction is not positive.
    #[error("non-positive cone angle: {0}")]
    AngleNonPositive(String),

    /// Explicit-family parameters violate the admissibility inequalities.
    #[error("inadmissible example parameters: {0}")]
    Inadmissible(String),

    /// A sampling patch reaches into the excluded neighbourhood of the origin.
    #[error("patch too close to the origin: {0}")]
    PatchTooCloseToOrigin(String),

    /// Quadrature disks around concentration points overlap.
    #[error("disks overlap: {0}")]
    DisksOverlap(String),

    /// Filesystem or serialization failure in the command-line front-end.
    #[error("i/o error: {0}")]
    Io(String),
}

impl From<std::io::Error> for Error {
    fn from(e: std::io::Error) -> Self {
        Error::Io(e.to_string())
    }
}

impl From<serde_json::Error> for Error {
    fn from(e: serde_json::Error) -> Self {
        Error::Io(e.to_string())
    }
}

impl From<csv::Error> for Error {
    fn from(e: csv::Error) -> Self {
        Error::Io(e.to_string())
    }
}
