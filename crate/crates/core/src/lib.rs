//! Symbolic-numeric toolkit for the KP-BBM equation
//!
//! ```text
//! (u_t + u_x + a(u²)_x + b u_xxt)_x + k u_yy = 0
//! ```
//!
//! The crate is layered bottom-up:
//!
//! * [`expr`] — exact computer-algebra kernel (canonical trees, calculus,
//!   two-tier zero test, prefix text syntax);
//! * [`jet`] — jet coordinates, total derivatives, prolongation;
//! * [`kpbbm`] — the equation and its reductions as residual operators;
//! * [`painleve`] — WTC singular-expansion analysis;
//! * [`symmetry`] — linearized symmetry condition and an ansatz solver;
//! * [`liealg`] — the four-dimensional symmetry algebra, adjoint action,
//!   invariants and the optimal-system classifier;
//! * [`solutions`] — closed-form solitary waves and the constructive solvers;
//! * [`numerics`] — finite-difference residuals, a pseudo-spectral integrator
//!   and peak tracking;
//! * [`cli`] — the `kpbbm` command-line front end.

pub mod expr;
pub mod jet;
pub mod kpbbm;
pub mod liealg;
pub mod linalg;
pub mod numerics;
pub mod cli;
pub mod painleve;
pub mod solutions;
pub mod symmetry;
