//! Error types shared across the crate.

use thiserror::Error;

/// Errors produced by the geometry, potential, evolution, and functional
/// layers.
#[derive(Debug, Clone, Error)]
pub enum CoreError {
    /// |Q| > M has no event horizon; the exterior problem is not posed.
    #[error("supercritical parameters: |Q|={q} exceeds M={m}")]
    Supercritical { m: f64, q: f64 },

    /// Mass must be strictly positive.
    #[error("non-positive mass M={m}")]
    NonPositiveMass { m: f64 },

    /// An operation restricted to the exterior region was called with
    /// r ≤ r₊.
    #[error("radius r={r} is not in the exterior region (r+={r_plus})")]
    NotExterior { r: f64, r_plus: f64 },

    /// The inversion ρ* → r could not establish a bracket. This signals an
    /// internal inconsistency rather than bad input.
    #[error("failed to bracket r(ρ*) at ρ*={rho_star}")]
    BracketFailure { rho_star: f64 },

    /// Grid specification violated a precondition.
    #[error("invalid grid: {0}")]
    InvalidGrid(String),

    /// Initial-data specification violated a precondition.
    #[error("invalid initial data: {0}")]
    InvalidData(String),

    /// Effective-potential peak search found zero or multiple sign changes.
    #[error("effective potential for l={l}: expected one sign change of I_l, found {found}")]
    PeakStructure { l: u32, found: usize },

    /// The positive part of a trapping term touches a grid edge where it
    /// must be compactly supported.
    #[error("trapping envelope support touches the grid edge ({side}); enlarge the grid")]
    EnvelopeTouchesEdge { side: &'static str },

    /// NaN/Inf contamination detected during evolution.
    #[error("non-finite value in mode l={l} at t={t}")]
    NonFinite { l: u32, t: f64 },

    /// Evolution configuration violated a precondition.
    #[error("invalid evolution config: {0}")]
    InvalidConfig(String),

    /// Weight specification outside its admissible parameter range.
    #[error("invalid weight: {0}")]
    InvalidWeight(String),

    /// An analysis routine received input it cannot act on (for example a
    /// decay fit over nonpositive values, or a zero state in a ratio).
    #[error("degenerate input: {0}")]
    DegenerateInput(String),

    /// A self-convergence study measured order below 1: a scheme defect.
    #[error("non-convergent: measured order {order} < 1")]
    NonConvergent { order: f64 },

    /// Malformed serialized data (CSV columns, headers, numbers).
    #[error("format error: {0}")]
    Format(String),
}

/// Crate-wide result alias.
pub type Result<T> = std::result::Result<T, CoreError>;
