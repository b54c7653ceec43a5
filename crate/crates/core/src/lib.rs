//! Uplink sum-rate maximization for multi-user wireless powered
//! communication networks (WPCN).
//!
//! A hybrid access point charges `K` energy-constrained users over the
//! downlink and decodes their uplink transmissions in TDMA. Users may only
//! spend energy harvested in strictly earlier time slots. Two solvers are
//! provided:
//!
//! * [`alg1::solve_infinite`] — closed-form allocation for unbounded user
//!   energy storage, built from Lambert-W chain coefficients and a scan
//!   over the access point turn-off slot.
//! * [`alg2::solve_finite`] — Lagrange dual decomposition for finite
//!   storage capacities, driven by an ellipsoid method and a final LP.
//!
//! Both are certified against an independent grid-search [`oracle`], and a
//! Monte-Carlo [`sim`] harness reproduces Rayleigh-fading rate curves.
//!
//! Core math is generic over the scalar type through [`real::Real`];
//! concrete `f64` aliases live at the crate root.

pub mod alg1;
pub mod alg2;
pub mod baselines;
pub mod error;
pub mod model;
pub mod optim;
pub mod oracle;
pub mod real;
pub mod sim;
pub mod special;

pub use error::Error;

/// Default scalar for the end-user API.
pub type Scalar = f64;

pub type SystemInstance = model::SystemInstance<Scalar>;
pub type Capacity = model::Capacity<Scalar>;
pub type Allocation = model::Allocation<Scalar>;
pub type SolveReport = model::SolveReport<Scalar>;
pub type FeasibilityReport = model::FeasibilityReport<Scalar>;
pub type DualPoint = alg2::DualPoint<Scalar>;
pub type OracleConfig = oracle::OracleConfig<Scalar>;
