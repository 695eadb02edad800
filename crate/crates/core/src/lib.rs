//! Wind-generation curtailment and network-investment analysis toolkit.
//!
//! The crate is organised as a pipeline:
//!
//! * [`ingest`] — read raw anemometer and demand CSVs, repair short gaps,
//!   convert units and build seasonal demand profiles.
//! * [`windmodel`] — statistical wind/power modelling: Weibull fitting and
//!   sampling, cross-site correlation, hub-height extrapolation, power curves,
//!   Beta fits of normalised power and hour-by-season joint histograms.
//! * [`curtailment`] — principles-of-access allocation rules (last-in first-out,
//!   rotation, proportional, capacity-quota round-robin) and timeline
//!   simulation with per-generator metrics.
//! * [`stackelberg`] — a leader/follower capacity game between a network
//!   investor and local generators, solved by backward induction over a
//!   discrete strategy grid, plus parameter sweeps.
//! * [`numerics`] — small numerical helpers shared by the statistical code
//!   (double-exponential quadrature, polygamma, closed-form rectangle
//!   integrals).
//!
//! All random number generation is seeded ChaCha8 (identifier
//! [`RNG_ALGORITHM`]) so that every result in the pipeline is reproducible
//! from a configuration and a 64-bit seed.

pub mod curtailment;
pub mod ingest;
pub mod numerics;
pub mod stackelberg;
pub mod windmodel;

/// Identifier of the PRNG used throughout the crate, recorded in output
/// headers so results can be tied to the exact generation algorithm.
pub const RNG_ALGORITHM: &str = "chacha8";

/// Allocation quantities smaller than this (in MW) are treated as zero.
pub const EPSILON_MW: f64 = 1e-9;
