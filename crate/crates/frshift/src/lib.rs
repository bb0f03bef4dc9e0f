//! Numerical laboratory for binomial functional operators and singular
//! integral operators with slowly oscillating shifts on the half-line.
//!
//! The crate is organized around a chain of reductions: admissible data
//! expressions are certified slowly oscillating (`so_expr`); an orientation
//! preserving shift of the half-line is represented through its exponent
//! function (`shift`); the Cauchy singular operator and its companions are
//! diagonalized by a discrete Mellin calculus (`mellin`, `oplab`); and the
//! invertibility / Fredholm questions are answered by endpoint cluster
//! analysis (`solver`, `fredholm`), cross-checked against finite sections
//! and quadrature oracles.

pub mod error;
pub mod export;
pub mod fredholm;
pub mod interp;
pub mod mellin;
pub mod oplab;
pub mod problem;
pub mod shift;
pub mod solver;
pub mod so_expr;
pub mod special;
pub mod validate;

pub use error::{Error, Result};
