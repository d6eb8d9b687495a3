//! Spectral determination of cographs.
//!
//! Graphs on up to 64 vertices with graph6 I/O and canonical labels
//! ([`graph`]), cotrees and hierarchies ([`cotree`]), exact hierarchy counts
//! with pattern avoidance ([`enumeration`]), exact generalized spectra
//! ([`spectral`]), cospectral mate search and construction ([`mates`]),
//! singularity analysis of the counting series ([`asymptotics`]), and
//! threshold graph contrasts ([`threshold`]).
//!
//! Numeric code is generic over [`real::Real`]; the aliases below fix the
//! two scalars in use.

pub mod asymptotics;
pub mod cotree;
pub mod enumeration;
pub mod graph;
pub mod mates;
pub mod real;
pub mod spectral;
pub mod threshold;

pub use graph::Graph;
pub use real::BigReal;

/// Estimates at arbitrary precision.
pub type BigEstimate = asymptotics::AsymptoticEstimate<BigReal>;
/// Estimates in hardware doubles.
pub type FastEstimate = asymptotics::AsymptoticEstimate<f64>;
/// Implicit system at arbitrary precision.
pub type BigSystem = asymptotics::ImplicitSystem<BigReal>;
pub use spectral::IntPolynomial;
