//! Archimedean tropical varieties of n-variate exponential sums.
//!
//! The central object is g(z) = sum_j e^{a_j . z + b_j} with real frequency
//! vectors a_j and complex coefficient exponents b_j. The tropical variety
//! Trop(g) is the set of points w where max_j (a_j . w + Re b_j) is attained
//! at least twice; it is a polyhedral shadow of the zero set Z(g) and the two
//! stay within explicit, computable Hausdorff distance of each other.
//!
//! Module map:
//! - [`expsum`]: data model, spacing, affine maps, line slicing, evaluation
//! - [`archnewt`]: lifted point set and the univariate lower convex hull
//! - [`tropical`]: tropical points, clusters, root strips, cells, vertices
//! - [`lp`]: dense simplex, redundancy removal, vertex enumeration
//! - [`roots`]: strip count bounds and a certified winding-number root oracle
//! - [`metric`]: distance bounds, nearest tropical point, projections,
//!   sampled Hausdorff estimates, the tightness witness family
//! - [`verify`]: seeded verification suites behind `exptrop verify`
//! - [`cli`]: the command-line front end

pub mod archnewt;
pub mod cli;
pub mod expsum;
mod linalg;
pub mod lp;
pub mod metric;
pub mod roots;
pub mod tropical;
pub mod verify;

pub use expsum::{ExpSum, Spacing, Term};
pub use roots::{CountInterval, Rectangle};


/// Crate-wide error type. Variants split into input errors (rejected data or
/// flags) and numerical errors (an oracle or iteration gave up); the CLI maps
/// the former to exit 2 and the latter to exit 3.
#[derive(Debug, thiserror::Error)]
pub enum Error {
    #[error("duplicate frequencies: terms {p} and {q} are {dist:.3e} apart, below tolerance {tol:.3e}")]
    DuplicateFrequencies { p: usize, q: usize, dist: f64, tol: f64 },
    #[error("non-finite value in {0}")]
    NonFinite(&'static str),
    #[error("invalid input: {0}")]
    InvalidInput(String),
    #[error("{0} requires a univariate sum")]
    NotUnivariate(&'static str),
    #[error("degenerate slice: fewer than two terms survive the projection")]
    DegenerateSlice,
    #[error("evaluation overflow: exponent {0:.6} exceeds the guard")]
    EvaluationOverflow(f64),
    #[error("singular matrix in {0}")]
    SingularMatrix(&'static str),
    #[error("{0:.9} is not a slope of the lower hull")]
    SlopeNotFound(f64),
    #[error("infeasible linear system")]
    Infeasible,
    #[error("ill-conditioned simplex pivot")]
    IllConditioned,
    #[error("root on boundary: clearance {0:.3e} after jitter retries")]
    RootOnBoundary(f64),
    #[error("quadrature failure: {0}")]
    QuadratureFailure(String),
    #[error("root count {0} exceeds the isolation guard")]
    CountGuard(usize),
    #[error("projection sampling failed after {0} consecutive draws")]
    ProjectionSamplingFailed(u32),
    #[error("json: {0}")]
    Json(#[from] serde_json::Error),
    #[error("io: {0}")]
    Io(#[from] std::io::Error),
}

impl Error {
    /// CLI exit code: 2 for input validation failures, 3 for numerical ones.
    pub fn exit_code(&self) -> i32 {
        match self {
            Error::DuplicateFrequencies { .. }
            | Error::NonFinite(_)
            | Error::InvalidInput(_)
            | Error::NotUnivariate(_)
            | Error::Json(_)
            | Error::Io(_) => 2,
            _ => 3,
        }
    }
}

pub type Result<T> = std::result::Result<T, Error>;
