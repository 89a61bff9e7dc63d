//! Sufficient conditions for positive solutions of the functional problem,
//! a grid-checked certificate, and a brute-force threshold oracle.

use std::cmp::Ordering;
use std::f64::consts::FRAC_PI_4;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::functional::Measure;
use crate::kernel::{kernel_sup, DiagonalSide, PeriodicKernel, EPS_GEOM};
use crate::quad::QuadConfig;
use crate::solver::{self, functional_parts, uniform_grid, ProblemSpec};

/// Safety margin added to grid suprema in [`SolutionBound`].
pub const SUP_MARGIN: f64 = 1e-6;

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct PositivityReport {
    pub alpha: f64,
    #[serde(rename = "M")]
    pub m_sup: f64,
    pub k1: Option<f64>,
    pub k2: Option<f64>,
    pub tv_mu: f64,
    pub h_norm1: f64,
    pub certified: bool,
    pub empirical_threshold: Option<f64>,
    pub min_u_on_grid: f64,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct PositivityOptions {
    /// Intervals of the certificate grid (`grid_n + 1` points).
    pub grid_n: usize,
    /// Intervals of the threshold-search grid.
    pub threshold_grid_n: usize,
    /// Bisection tolerance on `c`.
    pub c_tol: f64,
    pub with_threshold: bool,
}

impl Default for PositivityOptions {
    fn default() -> Self {
        Self {
            grid_n: 2000,
            threshold_grid_n: 4000,
            c_tol: 1e-8,
            with_threshold: false,
        }
    }
}

fn check_alpha(alpha: f64) -> Result<()> {
    if alpha > 0.0 && alpha < FRAC_PI_4 {
        Ok(())
    } else {
        Err(Error::Domain(format!("alpha = {alpha} is outside (0, pi/4)")))
    }
}

/// `k1 = 2 M |μ|(I) ‖h‖₁ / (1 - tan α)`.
pub fn k1_constant(alpha: f64, tv_mu: f64, h_norm1: f64) -> Result<f64> {
    check_alpha(alpha)?;
    if !(tv_mu >= 0.0 && h_norm1 >= 0.0) {
        return Err(Error::Domain(format!(
            "negative norm: |mu|(I) = {tv_mu}, |h|_1 = {h_norm1}"
        )));
    }
    Ok(2.0 * kernel_sup(alpha)? * tv_mu * h_norm1 / (1.0 - alpha.tan()))
}

/// `k2 = (1 + 2M/(cot α - 1)) ‖h‖₁ / m`, the sharper constant for `F = ∫_I`.
pub fn k2_constant(alpha: f64, h_norm1: f64, m: f64) -> Result<f64> {
    check_alpha(alpha)?;
    if !(m > 0.0) || !(h_norm1 >= 0.0) {
        return Err(Error::Domain(format!(
            "k2 needs m > 0 and |h|_1 >= 0, got m = {m}, |h|_1 = {h_norm1}"
        )));
    }
    let cot = 1.0 / alpha.tan();
    Ok((1.0 + 2.0 * kernel_sup(alpha)? / (cot - 1.0)) * h_norm1 / m)
}

/// `f(α) = (1 + sec α) / (2α (1 + csc α))`.
pub fn ratio_f(alpha: f64) -> Result<f64> {
    check_alpha(alpha)?;
    Ok((1.0 + 1.0 / alpha.cos()) / (2.0 * alpha * (1.0 + 1.0 / alpha.sin())))
}

/// Range of `Ḡ(t,-T)` over `I`: `((cot α - 1)/2, (cot α + 1)/2)`.
pub fn gbar_minus_t_extrema(alpha: f64) -> Result<(f64, f64)> {
    check_alpha(alpha)?;
    let cot = 1.0 / alpha.tan();
    Ok(((cot - 1.0) / 2.0, (cot + 1.0) / 2.0))
}

/// Compares `f(g_a)` with `f(g_b)` for `f` symmetric about its peak `p` and
/// decreasing away from it, knowing only the arguments.
pub fn midpoint_compare(peak: f64, g_a: f64, g_b: f64) -> Result<Ordering> {
    let mid = 0.5 * (g_a + g_b);
    for (name, v) in [("g_a", g_a), ("g_b", g_b), ("midpoint", mid)] {
        if (v - peak).abs() <= EPS_GEOM {
            return Err(Error::Inconclusive(format!(
                "{name} = {v} coincides with the peak {peak}"
            )));
        }
    }
    if g_a == g_b {
        return Ok(Ordering::Equal);
    }
    let (lo, hi) = (g_a.min(g_b), g_a.max(g_b));
    let a_is_lo = g_a < g_b;
    // ordering of f(lo) against f(hi)
    let lo_vs_hi = if hi < peak {
        Ordering::Less
    } else if lo > peak {
        Ordering::Greater
    } else if mid < peak {
        Ordering::Less
    } else {
        Ordering::Greater
    };
    Ok(if a_is_lo { lo_vs_hi } else { lo_vs_hi.reverse() })
}

/// Pointwise a-priori bound on `|u(t)|` for the functional problem:
/// `|c Ḡ(t,-T)/F(Ḡ(·,-T))| + (sup_s |Ḡ(t,s)| + |Ḡ(t,-T)/F(Ḡ(·,-T))| sup |Ḡ| |μ|(I)) ‖h‖₁`.
#[derive(Debug, Clone)]
pub struct SolutionBound {
    kernel: PeriodicKernel,
    c: f64,
    f_delta: f64,
    sup_all: f64,
    tv_mu: f64,
    h_norm1: f64,
}

impl SolutionBound {
    pub fn new(spec: &ProblemSpec, cfg: &QuadConfig) -> Result<Self> {
        let (measure, c) = spec.measure()?;
        let kernel = PeriodicKernel::new(spec.params)?;
        let f_delta = functional_delta(spec, measure, cfg)?;
        let grid: Vec<f64> = (0..=400).map(|i| -1.0 + 2.0 * i as f64 / 400.0).collect();
        let sup_all = grid
            .par_iter()
            .map(|&z| {
                grid.iter()
                    .map(|&y| {
                        kernel
                            .eval_scaled(z, y, DiagonalSide::Lower)
                            .abs()
                            .max(kernel.eval_scaled(z, y, DiagonalSide::Upper).abs())
                    })
                    .fold(0.0, f64::max)
            })
            .reduce(|| 0.0, f64::max)
            + SUP_MARGIN;
        Ok(Self {
            kernel,
            c,
            f_delta,
            sup_all,
            tv_mu: measure.total_variation(cfg)?,
            h_norm1: spec.h.l1_norm(spec.half_length(), cfg)?,
        })
    }

    fn row_sup(&self, t: f64) -> Result<f64> {
        let big_t = self.kernel.params().half_length;
        let mut sup = 0.0f64;
        for s in uniform_grid(big_t, 1000).into_iter().chain([-big_t, big_t]) {
            sup = sup.max(self.kernel.eval(t, s)?.abs());
        }
        for s in [t, -t] {
            for side in [DiagonalSide::Lower, DiagonalSide::Upper] {
                sup = sup.max(self.kernel.eval_sided(t, s, side)?.abs());
            }
        }
        Ok(sup + SUP_MARGIN)
    }

    pub fn at(&self, t: f64) -> Result<f64> {
        let ratio = (self.kernel.at_minus_t(t)? / self.f_delta).abs();
        Ok((self.c * ratio).abs() + (self.row_sup(t)? + ratio * self.sup_all * self.tv_mu) * self.h_norm1)
    }
}

pub fn solution_bound(t: f64, spec: &ProblemSpec, cfg: &QuadConfig) -> Result<f64> {
    SolutionBound::new(spec, cfg)?.at(t)
}

/// `F(Ḡ(·,-T)) = (F(cos m·) - F(sin m·)) / (2 sin α)`, guarded like the solver.
fn functional_delta(spec: &ProblemSpec, measure: &Measure, cfg: &QuadConfig) -> Result<f64> {
    let p = &spec.params;
    p.check_periodic()?;
    let gap = measure.nonresonance_gap(p, cfg)?;
    if !(gap.abs() > spec.eps_gap) {
        return Err(Error::FunctionalResonance { gap, eps: spec.eps_gap });
    }
    Ok(gap / (2.0 * p.alpha.sin()))
}

/// Checks the hypotheses of the certificate and returns `(measure, c, gap)`.
fn positivity_setup<'a>(spec: &'a ProblemSpec, cfg: &QuadConfig) -> Result<(&'a Measure, f64, f64)> {
    let (measure, c) = spec.measure()?;
    check_alpha(spec.params.alpha)?;
    let gap = measure.nonresonance_gap(&spec.params, cfg)?;
    if !(gap > 0.0) {
        return Err(Error::Orientation { gap });
    }
    Ok((measure, c, gap))
}

/// Computes the constants, decides the certificate and checks it against
/// the solution on a grid.
pub fn certify_positive(spec: &ProblemSpec, cfg: &QuadConfig, opts: &PositivityOptions) -> Result<PositivityReport> {
    let (measure, c, _) = positivity_setup(spec, cfg)?;
    let alpha = spec.params.alpha;
    let tv_mu = measure.total_variation(cfg)?;
    let h_norm1 = spec.h.l1_norm(spec.half_length(), cfg)?;
    let k1 = k1_constant(alpha, tv_mu, h_norm1)?;
    let k2 = if measure.is_lebesgue() {
        Some(k2_constant(alpha, h_norm1, spec.m())?)
    } else {
        None
    };
    let certified = c > k1 || k2.is_some_and(|k2| c > k2);

    let u = solver::solve_functional(spec, cfg)?;
    let min_u_on_grid = u
        .grid(opts.grid_n)?
        .into_iter()
        .map(|(_, v)| v)
        .fold(f64::INFINITY, f64::min);
    if certified && !(min_u_on_grid > 0.0) {
        return Err(Error::CertificateContradicted {
            c,
            min_u: min_u_on_grid,
        });
    }
    let empirical_threshold = if opts.with_threshold {
        Some(empirical_threshold(spec, cfg, opts)?)
    } else {
        None
    };
    Ok(PositivityReport {
        alpha,
        m_sup: kernel_sup(alpha)?,
        k1: Some(k1),
        k2,
        tv_mu,
        h_norm1,
        certified,
        empirical_threshold,
        min_u_on_grid,
    })
}

/// `u_c = Ξh + (c - F(Ξh))/F(Ḡ(·,-T)) · Ḡ(·,-T)`, tabulated once so that
/// `min u_c` is cheap for every `c`.
struct AffineFamily<'a> {
    spec: &'a ProblemSpec,
    cfg: &'a QuadConfig,
    kernel: PeriodicKernel,
    f_xi_h: f64,
    f_delta: f64,
    ts: Vec<f64>,
    xi: Vec<f64>,
    g: Vec<f64>,
}

impl<'a> AffineFamily<'a> {
    fn new(spec: &'a ProblemSpec, cfg: &'a QuadConfig, grid_n: usize) -> Result<Self> {
        let parts = functional_parts(spec, cfg)?;
        let kernel = PeriodicKernel::new(spec.params)?;
        let ts = uniform_grid(spec.half_length(), grid_n);
        let xi = ts
            .par_iter()
            .map(|&t| solver::xi(&spec.h, t, &spec.params, cfg))
            .collect::<Result<Vec<_>>>()?;
        let g = ts.iter().map(|&t| kernel.at_minus_t(t)).collect::<Result<Vec<_>>>()?;
        Ok(Self {
            spec,
            cfg,
            kernel,
            f_xi_h: parts.f_xi_h,
            f_delta: parts.f_delta,
            ts,
            xi,
            g,
        })
    }

    fn lambda(&self, c: f64) -> f64 {
        (c - self.f_xi_h) / self.f_delta
    }

    fn eval(&self, t: f64, lambda: f64) -> Result<f64> {
        Ok(solver::xi(&self.spec.h, t, &self.spec.params, self.cfg)? + lambda * self.kernel.at_minus_t(t)?)
    }

    /// Grid minimum of `u_c`, refined by golden-section search between the
    /// neighbours of the grid argmin.
    fn min_u(&self, c: f64) -> Result<f64> {
        let lambda = self.lambda(c);
        let (idx, grid_min) = self
            .xi
            .iter()
            .zip(&self.g)
            .map(|(x, g)| x + lambda * g)
            .enumerate()
            .fold(
                (0, f64::INFINITY),
                |best, (i, v)| if v < best.1 { (i, v) } else { best },
            );
        let mut a = self.ts[idx.saturating_sub(1)];
        let mut b = self.ts[(idx + 1).min(self.ts.len() - 1)];
        let inv_phi = (5f64.sqrt() - 1.0) / 2.0;
        let mut x1 = b - inv_phi * (b - a);
        let mut x2 = a + inv_phi * (b - a);
        let (mut f1, mut f2) = (self.eval(x1, lambda)?, self.eval(x2, lambda)?);
        let mut best = grid_min.min(f1).min(f2);
        while b - a > 1e-10 * self.spec.half_length() {
            if f1 < f2 {
                b = x2;
                x2 = x1;
                f2 = f1;
                x1 = b - inv_phi * (b - a);
                f1 = self.eval(x1, lambda)?;
                best = best.min(f1);
            } else {
                a = x1;
                x1 = x2;
                f1 = f2;
                x2 = a + inv_phi * (b - a);
                f2 = self.eval(x2, lambda)?;
                best = best.min(f2);
            }
        }
        Ok(best)
    }
}

/// Smallest `c` with `u_c >= 0` on `I`, by bisection on the affine family.
pub fn empirical_threshold(spec: &ProblemSpec, cfg: &QuadConfig, opts: &PositivityOptions) -> Result<f64> {
    spec.measure()?;
    let family = AffineFamily::new(spec, cfg, opts.threshold_grid_n)?;
    const LIMIT: f64 = 1e10;

    let mut hi = 1.0;
    while family.min_u(hi)? < 0.0 {
        hi *= 4.0;
        if hi > LIMIT {
            return Err(Error::ThresholdSearch(format!(
                "u_c stays negative somewhere for every c up to {LIMIT:e}"
            )));
        }
    }
    let mut lo = -1.0;
    while family.min_u(lo)? >= 0.0 {
        lo *= 4.0;
        if lo < -LIMIT {
            return Err(Error::ThresholdSearch(format!(
                "u_c stays nonnegative for every c down to {:e}",
                -LIMIT
            )));
        }
    }
    log::debug!("threshold bracket [{lo}, {hi}]");
    while hi - lo > opts.c_tol {
        let mid = 0.5 * (lo + hi);
        if family.min_u(mid)? >= 0.0 {
            hi = mid;
        } else {
            lo = mid;
        }
    }
    let below = hi - 1e-6;
    if family.min_u(below)? >= 0.0 {
        return Err(Error::ThresholdSearch(format!(
            "min u_c is not monotone in c: u is nonnegative at c = {below} below the bracket end {hi}"
        )));
    }
    Ok(hi)
}
