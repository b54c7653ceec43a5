//! Generic numerical machinery: a central-cut ellipsoid method and a
//! small dense LP solver.

mod ellipsoid;
mod lp;

pub use ellipsoid::{ellipsoid_minimize, Cut, Ellipsoid, EllipsoidOutcome};
pub use lp::{lp_solve, LinearProgram, LpSolution, LpStatus};
