//! Numerical toolkit for Hilfer fractional boundary value problems
//!
//! ```text
//! D^{α,β} z(t) = f(t, z(t)),   t ∈ (a, b],
//! I^{1−γ} [c·z(a⁺) + d·z(b⁻)] = e,   γ = α + β(1 − α),
//! ```
//!
//! solved through the equivalent weakly singular integral equation on the
//! weighted space `C_{1−γ}[a, b]`, together with the constants that certify
//! existence (Schauder, Schaefer, Krasnosel'skii) and uniqueness.
//!
//! Modules, bottom-up:
//! - [`specfun`]: Gamma and Beta on the real line.
//! - [`expr`]: the expression language for `f(t, z)` and `η(t)`.
//! - [`grid`]: graded meshes and weighted grid functions.
//! - [`fracops`]: Riemann–Liouville integrals, numerical Hilfer derivatives.
//! - [`bvp`]: the integral operator, Picard iteration and residual checks.
//! - [`hypcheck`]: existence constants and theorem applicability.
//! - [`identities`]: self-checks of the fractional operators.

// `!(x > 0.0)` style guards are deliberate: they also reject NaN.
#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod bvp;
pub mod error;
pub mod expr;
pub mod fracops;
pub mod grid;
pub mod hypcheck;
pub mod identities;
pub mod quadrature;
pub mod specfun;

pub use bvp::{PicardOptions, ProblemSpec, SolveResult};
pub use error::{Error, Result};
pub use expr::{parse, Expr};
pub use fracops::{FracOrder, RlOperator};
pub use grid::{Grid, WeightedGridFunction};
pub use hypcheck::{HypothesisReport, ReportOptions};
