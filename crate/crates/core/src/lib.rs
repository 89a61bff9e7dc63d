//! Green's-function solver for the first-order linear equation with
//! reflection
//!
//! ```text
//! x'(t) + m x(-t) = h(t),   t ∈ [-T, T]
//! ```
//!
//! under periodic, antiperiodic, fixed-jump (`x(-T) - x(T) = λ`) and general
//! linear-functional (`F(x) = c`) boundary conditions, together with the
//! positivity constants for the functional problem and a numerical
//! verification harness for the kernels and solutions.
//!
//! ```
//! use reflectode::{BoundaryCondition, Expr, Measure, ProblemSpec, QuadConfig, solve};
//!
//! let h = Expr::parse("exp(t)").unwrap();
//! let bc = BoundaryCondition::Functional { measure: Measure::lebesgue(0.5).unwrap(), c: 1.0 };
//! let spec = ProblemSpec::new(1.0, 0.5, h, bc).unwrap();
//! let u = solve(&spec, &QuadConfig::default()).unwrap();
//! let a = (1.0 - 2.0 * 0.5f64.sinh()) / (2.0 * 0.5f64.sin());
//! assert!((u.evaluate(0.25).unwrap() - (0.25f64.cosh() + a * (0.25f64.cos() - 0.25f64.sin()))).abs() < 1e-8);
//! ```

// `!(x > 0.0)` style guards are used on purpose: they also reject NaN.
#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod error;
pub mod expr;
pub mod functional;
pub mod kernel;
pub mod positivity;
pub mod quad;
pub mod solver;
pub mod verify;

pub use error::{Error, Result};
pub use expr::Expr;
pub use functional::{Atom, Measure};
pub use kernel::{AntiperiodicKernel, DiagonalSide, KernelParams, PeriodicKernel, Region};
pub use positivity::{PositivityOptions, PositivityReport};
pub use quad::QuadConfig;
pub use solver::{solve, BoundaryCondition, Forcing, ProblemSpec, Solution};
pub use verify::{KernelKind, VerifyReport};
