//! Solver library for finding all complex critical points of polynomial
//! programs `min uᵀx  s.t. f(x) = 0`.
//!
//! The pipeline builds the Lagrange system of the program, constructs a
//! binomial start system whose roots are known in closed form, and tracks one
//! homotopy path per root — no mixed-cell computation at any point. Closed-form
//! degree formulas predict the exact path count, and a tropical verifier
//! certifies the lifting that justifies the start system. A total-degree
//! (Bezout) pipeline is included as an independent cross-check.

pub mod degree;
pub mod lagrange;
pub mod poly;
pub mod solver;
pub mod start;
pub mod tracker;
pub mod tropical;

mod eval;
mod linalg;

pub use eval::EvalScratch;
pub use lagrange::{LinearObjectiveProblem, SquareSystem};
pub use poly::{ExponentVector, SparsePolynomial, SupportDescription};
pub use solver::{CriticalPoint, SolveConfig, SolveError, SolveReport};
pub use tracker::{Homotopy, PathResult, PathStatus, PolynomialHomotopy, TrackerConfig};
