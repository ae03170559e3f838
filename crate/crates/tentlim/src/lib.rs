//! Exact-arithmetic invariants of tent-map inverse limit spaces.
//!
//! The tent map `T_s(x) = min(sx, s(1-x))` on `[0,1]` with slope `s ∈ (1,2]`
//! generates an inverse limit space whose zero-composant ray carries a rich
//! combinatorial structure: p-points, p-levels, the folding pattern, snappy
//! points, natural chains and their link itineraries.  This crate computes all
//! of these with certified exact arithmetic (rationals, real quadratic fields,
//! or adaptive-precision intervals), and uses them to distinguish slopes and to
//! verify the counting laws that make the distinguishing argument work.
//!
//! Modules mirror the mathematical layering:
//!
//! * [`numerics`] — certified scalars ([`Rat`], [`Quad`], [`Real`]) and the
//!   shared slope-input grammar.
//! * [`tentmap`] — the map itself, critical orbits, preimage trees, κ.
//! * [`composant`] — ray segments, folding patterns, snappy points, σ-shifts.
//! * [`chains`] — natural chains, link itineraries, link-symmetric arcs and
//!   the snappy-count laws.
//! * [`symmetry`] — ε-symmetry certificates, closest precritical points,
//!   the N/N₀/δ/ε/r₀ parameter selection, and the monotone pullback procedure.
//! * [`classify`] — renormalization reduction, the folding-pattern
//!   distinguisher, bridges, and the σ^R shift-action report.

pub mod chains;
pub mod classify;
pub mod composant;
pub mod numerics;
pub mod symmetry;
pub mod tentmap;

pub use numerics::{parse_slope, Scalar, SlopeValue};

/// Exact rational scalar (arbitrary-precision `p/q`).
pub type Rat = num_rational::BigRational;
/// Exact real-quadratic-field scalar `a + b√d`.
pub type Quad = numerics::quad::QuadExt;
/// Adaptive-precision interval scalar with a hard certification cap.
pub type Real = numerics::interval::IntervalReal;

/// Tent map over exact rationals.
pub type TentMapRat = tentmap::TentMap<Rat>;
/// Tent map over a real quadratic field.
pub type TentMapQuad = tentmap::TentMap<Quad>;
/// Tent map over adaptive intervals.
pub type TentMapReal = tentmap::TentMap<Real>;
/// Tent map over hardware floats (uncertified; for exploratory use only).
pub type TentMapF64 = tentmap::TentMap<f64>;

/// Every fallible operation in the crate reports through this type.
#[derive(Debug, thiserror::Error)]
pub enum Error {
    /// Interval refinement hit the precision cap without separating the
    /// operands and no exactness certificate exists.
    #[error("precision exhausted: intervals still overlap at the {0}-bit cap")]
    PrecisionExhausted(u32),
    #[error("division by zero (or by a value not certified nonzero)")]
    DivisionByZero,
    /// An operand outgrew the configured bit-size budget.
    #[error("bit-size budget exceeded: {used} bits used, cap {cap}")]
    BudgetExceeded { used: u64, cap: u64 },
    #[error("domain error: {0}")]
    Domain(String),
    /// `computeKappa` found no index within its bound.
    #[error("no orbit index i in [3, {0}] with c_i >= c")]
    NotFoundWithinBound(u32),
    #[error("chain too coarse: width {width} is not below epsilon {epsilon}")]
    ChainTooCoarse { width: String, epsilon: String },
    #[error("index too small: {0}")]
    IndexTooSmall(String),
    /// The off-center hypothesis is violated (the candidate center shares an
    /// arc component with a neighbouring snappy point).
    #[error("bad center: {0}")]
    BadCenter(String),
    #[error("step {0} is not a turn step")]
    NotATurn(u64),
    #[error("projection is not injective up to the requested point")]
    InvalidProjection,
    /// The monotone pullback procedure failed to produce its certified output;
    /// this indicates inconsistent parameters, not a resource limit.
    #[error("pullback procedure found no admissible interval: {0}")]
    NotFound(String),
    #[error("cannot certify the boundary comparison: {0}")]
    UncertifiableBoundary(String),
    /// The affine conjugacy certificate failed — an implementation bug.
    #[error("conjugacy certificate violated at sample {0}")]
    ConjugacyViolation(String),
    #[error("parse error: {0}")]
    Parse(String),
}

/// Convenience alias used throughout the crate.
pub type Result<T> = std::result::Result<T, Error>;
