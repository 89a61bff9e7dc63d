//! Solutions of `x'(t) + m x(-t) = h(t)` on `I = [-T, T]` from the
//! Green's-function representations.
//!
//! | condition              | solution                                   |
//! |------------------------|--------------------------------------------|
//! | `x(-T) = x(T)`         | `u = Ξ(h)`                                 |
//! | `x(-T) + x(T) = 0`     | `u = ∫ H̄(t, s) h(s) ds`                    |
//! | `x(-T) - x(T) = λ`     | `u = Ξ(h) + λ Ḡ(·, -T)`                    |
//! | `F(x) = c`             | as above with `λ = (c - F(Ξh)) / F(Ḡ(·,-T))` |
//!
//! where `Ξ(f)(t) = ∫ Ḡ(t, s) f(s) ds`. Every integral against a kernel row
//! is split at `s = ±t`.

use std::fmt;
use std::sync::Arc;

use rayon::prelude::*;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::expr::Expr;
use crate::functional::{Measure, EPS_GAP};
use crate::kernel::{AntiperiodicKernel, DiagonalSide, KernelParams, PeriodicKernel};
use crate::quad::{self, QuadConfig};

type ForcingFn = dyn Fn(f64) -> f64 + Send + Sync;

/// Right-hand side `h`, either parsed text or a native closure.
#[derive(Clone)]
pub enum Forcing {
    Expr(Expr),
    Native { label: String, f: Arc<ForcingFn> },
}

impl Forcing {
    pub fn native(label: impl Into<String>, f: impl Fn(f64) -> f64 + Send + Sync + 'static) -> Self {
        Forcing::Native {
            label: label.into(),
            f: Arc::new(f),
        }
    }

    pub fn zero() -> Self {
        Forcing::Expr(Expr::Num(0.0))
    }

    pub fn eval(&self, t: f64) -> Result<f64> {
        match self {
            Forcing::Expr(e) => Ok(e.eval(t)?),
            Forcing::Native { f, .. } => Ok(f(t)),
        }
    }

    /// `‖h‖₁` over `[-T, T]`.
    pub fn l1_norm(&self, half_length: f64, cfg: &QuadConfig) -> Result<f64> {
        quad::try_integrate_abs(|t| self.eval(t), -half_length, half_length, &[], cfg)
    }
}

impl From<Expr> for Forcing {
    fn from(e: Expr) -> Self {
        Forcing::Expr(e)
    }
}

impl fmt::Debug for Forcing {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Forcing::Expr(e) => write!(f, "Forcing({e})"),
            Forcing::Native { label, .. } => write!(f, "Forcing(<{label}>)"),
        }
    }
}

#[derive(Debug, Clone)]
pub enum BoundaryCondition {
    Periodic,
    Antiperiodic,
    /// `x(-T) - x(T) = λ`
    Lambda(f64),
    /// `F(x) = c`
    Functional {
        measure: Measure,
        c: f64,
    },
}

impl BoundaryCondition {
    pub fn name(&self) -> &'static str {
        match self {
            BoundaryCondition::Periodic => "periodic",
            BoundaryCondition::Antiperiodic => "antiperiodic",
            BoundaryCondition::Lambda(_) => "lambda",
            BoundaryCondition::Functional { .. } => "functional",
        }
    }
}

#[derive(Debug, Clone)]
pub struct ProblemSpec {
    pub params: KernelParams,
    pub h: Forcing,
    pub bc: BoundaryCondition,
    pub eps_gap: f64,
}

impl ProblemSpec {
    pub fn new(m: f64, half_length: f64, h: impl Into<Forcing>, bc: BoundaryCondition) -> Result<Self> {
        let params = KernelParams::new(m, half_length)?;
        if let BoundaryCondition::Functional { measure, c } = &bc {
            if measure.half_length() != half_length {
                return Err(Error::InvalidProblem(format!(
                    "measure is defined on [-{0}, {0}] but the problem on [-{half_length}, {half_length}]",
                    measure.half_length()
                )));
            }
            if !c.is_finite() {
                return Err(Error::InvalidProblem(format!("c must be finite, got {c}")));
            }
        }
        if let BoundaryCondition::Lambda(l) = bc {
            if !l.is_finite() {
                return Err(Error::InvalidProblem(format!("lambda must be finite, got {l}")));
            }
        }
        Ok(Self {
            params,
            h: h.into(),
            bc,
            eps_gap: EPS_GAP,
        })
    }

    pub fn m(&self) -> f64 {
        self.params.m
    }

    pub fn half_length(&self) -> f64 {
        self.params.half_length
    }

    /// Same problem with the functional target replaced by `c`.
    pub fn with_c(&self, c: f64) -> Result<Self> {
        match &self.bc {
            BoundaryCondition::Functional { measure, .. } => {
                let mut out = self.clone();
                out.bc = BoundaryCondition::Functional {
                    measure: measure.clone(),
                    c,
                };
                Ok(out)
            }
            other => Err(Error::InvalidProblem(format!(
                "expected a functional boundary condition, got {}",
                other.name()
            ))),
        }
    }

    pub fn measure(&self) -> Result<(&Measure, f64)> {
        match &self.bc {
            BoundaryCondition::Functional { measure, c } => Ok((measure, *c)),
            other => Err(Error::InvalidProblem(format!(
                "expected a functional boundary condition, got {}",
                other.name()
            ))),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct Diagnostics {
    pub abs_tol: f64,
    pub rel_tol: f64,
    /// `F(cos m·) - F(sin m·)` for functional conditions.
    pub gap: Option<f64>,
}

#[derive(Debug, Clone)]
enum Representation {
    Periodic(PeriodicKernel),
    Antiperiodic(AntiperiodicKernel),
}

/// Evaluable solution `u` on `[-T, T]`. Each evaluation runs one adaptive
/// quadrature; nothing is cached.
#[derive(Debug, Clone)]
pub struct Solution {
    repr: Representation,
    h: Forcing,
    cfg: QuadConfig,
    lambda: f64,
    pub lambda_used: Option<f64>,
    pub diagnostics: Diagnostics,
}

impl Solution {
    pub fn evaluate(&self, t: f64) -> Result<f64> {
        match &self.repr {
            Representation::Periodic(k) => {
                let particular = periodic_row_integral(k, &self.h, t, &self.cfg)?;
                if self.lambda == 0.0 {
                    Ok(particular)
                } else {
                    Ok(particular + self.lambda * k.at_minus_t(t)?)
                }
            }
            Representation::Antiperiodic(k) => antiperiodic_row_integral(k, &self.h, t, &self.cfg),
        }
    }

    pub fn half_length(&self) -> f64 {
        match &self.repr {
            Representation::Periodic(k) => k.params().half_length,
            Representation::Antiperiodic(k) => k.params().half_length,
        }
    }

    /// `u` at `t_i = -T + 2T i / n`, `i = 0..=n`, in order.
    pub fn grid(&self, n: usize) -> Result<Vec<(f64, f64)>> {
        let ts = uniform_grid(self.half_length(), n);
        ts.par_iter().map(|&t| self.evaluate(t).map(|u| (t, u))).collect()
    }
}

/// `t_i = -T + 2T i / n` for `i = 0..=n`, with the last point pinned to `T`.
pub fn uniform_grid(half_length: f64, n: usize) -> Vec<f64> {
    let n = n.max(1);
    (0..=n)
        .map(|i| {
            if i == n {
                half_length
            } else {
                -half_length + 2.0 * half_length * i as f64 / n as f64
            }
        })
        .collect()
}

fn row_breakpoints(t: f64) -> [f64; 2] {
    [-t.abs(), t.abs()]
}

fn periodic_row_integral(k: &PeriodicKernel, h: &Forcing, t: f64, cfg: &QuadConfig) -> Result<f64> {
    let big_t = k.params().half_length;
    let z = k.params().scale(t)?;
    quad::try_integrate(
        |s| {
            let y = (s / big_t).clamp(-1.0, 1.0);
            Ok(k.eval_scaled(z, y, DiagonalSide::Lower) * h.eval(s)?)
        },
        -big_t,
        big_t,
        &row_breakpoints(t),
        cfg,
    )
}

fn antiperiodic_row_integral(k: &AntiperiodicKernel, h: &Forcing, t: f64, cfg: &QuadConfig) -> Result<f64> {
    let big_t = k.params().half_length;
    let z = k.params().scale(t)?;
    quad::try_integrate(
        |s| {
            let y = (s / big_t).clamp(-1.0, 1.0);
            Ok(k.hbar_scaled(z, y, DiagonalSide::Lower) * h.eval(s)?)
        },
        -big_t,
        big_t,
        &row_breakpoints(t),
        cfg,
    )
}

/// `Ξ(h)(t) = ∫_I Ḡ(t, s) h(s) ds`.
pub fn xi(h: &Forcing, t: f64, p: &KernelParams, cfg: &QuadConfig) -> Result<f64> {
    let k = PeriodicKernel::new(*p)?;
    periodic_row_integral(&k, h, t, cfg)
}

fn periodic_solution(spec: &ProblemSpec, cfg: &QuadConfig, lambda: f64, gap: Option<f64>) -> Result<Solution> {
    cfg.validate()?;
    let k = PeriodicKernel::new(spec.params)?;
    Ok(Solution {
        repr: Representation::Periodic(k),
        h: spec.h.clone(),
        cfg: *cfg,
        lambda,
        lambda_used: match spec.bc {
            BoundaryCondition::Periodic => None,
            _ => Some(lambda),
        },
        diagnostics: Diagnostics {
            abs_tol: cfg.abs_tol,
            rel_tol: cfg.rel_tol,
            gap,
        },
    })
}

fn wrong_bc(expected: &str, spec: &ProblemSpec) -> Error {
    Error::InvalidProblem(format!(
        "expected a {expected} boundary condition, got {}",
        spec.bc.name()
    ))
}

pub fn solve_periodic(spec: &ProblemSpec, cfg: &QuadConfig) -> Result<Solution> {
    match spec.bc {
        BoundaryCondition::Periodic => periodic_solution(spec, cfg, 0.0, None),
        _ => Err(wrong_bc("periodic", spec)),
    }
}

pub fn solve_antiperiodic(spec: &ProblemSpec, cfg: &QuadConfig) -> Result<Solution> {
    if !matches!(spec.bc, BoundaryCondition::Antiperiodic) {
        return Err(wrong_bc("antiperiodic", spec));
    }
    cfg.validate()?;
    let k = AntiperiodicKernel::new(spec.params)?;
    Ok(Solution {
        repr: Representation::Antiperiodic(k),
        h: spec.h.clone(),
        cfg: *cfg,
        lambda: 0.0,
        lambda_used: None,
        diagnostics: Diagnostics {
            abs_tol: cfg.abs_tol,
            rel_tol: cfg.rel_tol,
            gap: None,
        },
    })
}

pub fn solve_lambda(spec: &ProblemSpec, cfg: &QuadConfig) -> Result<Solution> {
    match spec.bc {
        BoundaryCondition::Lambda(lambda) => periodic_solution(spec, cfg, lambda, None),
        _ => Err(wrong_bc("lambda", spec)),
    }
}

/// Scalars fixing the functional solution: `u = Ξh + λ Ḡ(·,-T)` with
/// `λ = (c - f_xi_h) / f_delta`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct FunctionalParts {
    /// `F(cos m·) - F(sin m·)`
    pub gap: f64,
    /// `F(Ḡ(·, -T)) = gap / (2 sin mT)`
    pub f_delta: f64,
    /// `F(Ξ(h))`
    pub f_xi_h: f64,
}

impl FunctionalParts {
    pub fn lambda(&self, c: f64) -> f64 {
        (c - self.f_xi_h) / self.f_delta
    }
}

pub fn functional_parts(spec: &ProblemSpec, cfg: &QuadConfig) -> Result<FunctionalParts> {
    let (measure, _) = spec.measure()?;
    cfg.validate()?;
    let k = PeriodicKernel::new(spec.params)?;
    let gap = measure.nonresonance_gap(&spec.params, cfg)?;
    if !(gap.abs() > spec.eps_gap) {
        return Err(Error::FunctionalResonance { gap, eps: spec.eps_gap });
    }
    let f_delta = gap / (2.0 * spec.params.alpha.sin());
    let outer = cfg.relaxed(10.0);
    let f_xi_h = measure.try_apply(|t| periodic_row_integral(&k, &spec.h, t, cfg), &outer, &[])?;
    Ok(FunctionalParts { gap, f_delta, f_xi_h })
}

pub fn solve_functional(spec: &ProblemSpec, cfg: &QuadConfig) -> Result<Solution> {
    let (_, c) = spec.measure().map_err(|_| wrong_bc("functional", spec))?;
    let parts = functional_parts(spec, cfg)?;
    let lambda = parts.lambda(c);
    log::debug!(
        "functional solve: gap = {:e}, F(G(.,-T)) = {:e}, F(Xi h) = {:e}, lambda = {:e}",
        parts.gap,
        parts.f_delta,
        parts.f_xi_h,
        lambda
    );
    periodic_solution(spec, cfg, lambda, Some(parts.gap))
}

pub fn solve(spec: &ProblemSpec, cfg: &QuadConfig) -> Result<Solution> {
    match spec.bc {
        BoundaryCondition::Periodic => solve_periodic(spec, cfg),
        BoundaryCondition::Antiperiodic => solve_antiperiodic(spec, cfg),
        BoundaryCondition::Lambda(_) => solve_lambda(spec, cfg),
        BoundaryCondition::Functional { .. } => solve_functional(spec, cfg),
    }
}
