//! Closed-form Green's functions of `x'(t) + m x(-t) = h(t)` on `[-T, T]`.
//!
//! All kernels are evaluated in scaled coordinates `z = t/T`, `y = s/T` with
//! the single parameter `alpha = m T`:
//!
//! * [`PeriodicKernel`]: `Ḡ`, the Green's function of the periodic problem
//!   `x(-T) = x(T)`, defined when `sin(alpha) != 0`.
//! * [`AntiperiodicKernel`]: the oscillator kernel `H` of
//!   `x'' + m² x = 0` with antiperiodic conditions, and `H̄`, the Green's
//!   function of the antiperiodic problem `x(-T) + x(T) = 0`, defined when
//!   `cos(alpha) != 0`.
//!
//! `Ḡ` and `H̄` are piecewise analytic on the four triangles cut out of the
//! square by the diagonals `s = t` and `s = -t`; they jump by one across
//! `s = t`. On a diagonal the value is the one-sided limit selected by
//! [`DiagonalSide`].

use std::f64::consts::FRAC_PI_4;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Resonance guard on `|sin alpha|` (periodic) and `|cos alpha|` (antiperiodic).
pub const EPS_RES: f64 = 1e-9;
/// Distance in scaled coordinates below which a point counts as on a diagonal.
pub const EPS_GEOM: f64 = 1e-13;
/// `|m|` at or below this is treated as zero where a formula divides by `m`.
pub const EPS_M: f64 = 1e-12;

const DOMAIN_SLACK: f64 = 1e-12;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct KernelParams {
    pub m: f64,
    pub half_length: f64,
    pub alpha: f64,
    pub eps_res: f64,
}

impl KernelParams {
    pub fn new(m: f64, half_length: f64) -> Result<Self> {
        Self::with_eps_res(m, half_length, EPS_RES)
    }

    pub fn with_eps_res(m: f64, half_length: f64, eps_res: f64) -> Result<Self> {
        if !(half_length > 0.0 && half_length.is_finite()) {
            return Err(Error::Domain(format!(
                "T must be positive and finite, got {half_length}"
            )));
        }
        if !m.is_finite() {
            return Err(Error::Domain(format!("m must be finite, got {m}")));
        }
        if !(eps_res >= 0.0) {
            return Err(Error::Domain(format!("eps_res must be non-negative, got {eps_res}")));
        }
        Ok(Self {
            m,
            half_length,
            alpha: m * half_length,
            eps_res,
        })
    }

    pub fn check_periodic(&self) -> Result<()> {
        let s = self.alpha.sin();
        if s.abs() <= self.eps_res {
            return Err(Error::Resonance(format!(
                "periodic kernel undefined: |sin(mT)| = {:e} <= {:e} (m T = {} is a multiple of pi)",
                s.abs(),
                self.eps_res,
                self.alpha
            )));
        }
        Ok(())
    }

    pub fn check_antiperiodic(&self) -> Result<()> {
        let c = self.alpha.cos();
        if c.abs() <= self.eps_res {
            return Err(Error::Resonance(format!(
                "antiperiodic kernel undefined: |cos(mT)| = {:e} <= {:e} (m T = {} is an odd multiple of pi/2)",
                c.abs(),
                self.eps_res,
                self.alpha
            )));
        }
        Ok(())
    }

    /// Converts `t ∈ [-T, T]` to `z = t/T`, rejecting points outside the interval.
    pub fn scale(&self, t: f64) -> Result<f64> {
        let z = t / self.half_length;
        if z.is_nan() || z.abs() > 1.0 + DOMAIN_SLACK {
            return Err(Error::Domain(format!(
                "point {t} lies outside [-{T}, {T}]",
                T = self.half_length
            )));
        }
        Ok(z.clamp(-1.0, 1.0))
    }
}

/// Case of the piecewise formulas containing `(z, y)`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Region {
    /// `z > |y|`
    Above,
    /// `|z| < y`
    Right,
    /// `-|z| > y`
    Below,
    /// `z < -|y|`
    Left,
    /// `z = y` or `z = -y`
    Diag,
}

/// Which one-sided limit to take on a diagonal: `Lower` approaches from
/// `s < t` on `s = t` and from `s < -t` on `s = -t`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
pub enum DiagonalSide {
    #[default]
    Lower,
    Upper,
}

fn strict_region(z: f64, y: f64) -> Region {
    if z > y.abs() {
        Region::Above
    } else if z.abs() < y {
        Region::Right
    } else if -z.abs() > y {
        Region::Below
    } else if z < -y.abs() {
        Region::Left
    } else {
        Region::Diag
    }
}

fn on_diagonal(z: f64, y: f64) -> bool {
    (z - y).abs() <= EPS_GEOM || (z + y).abs() <= EPS_GEOM
}

pub fn classify_region(z: f64, y: f64) -> Result<Region> {
    if !(z.abs() <= 1.0 && y.abs() <= 1.0) {
        return Err(Error::Domain(format!("({z}, {y}) lies outside [-1, 1]²")));
    }
    if on_diagonal(z, y) {
        return Ok(Region::Diag);
    }
    Ok(strict_region(z, y))
}

/// Region whose formula gives the value at `(z, y)`, resolving diagonal
/// points by nudging `y` to the requested side.
fn resolve_region(z: f64, y: f64, side: DiagonalSide) -> Region {
    if !on_diagonal(z, y) {
        return strict_region(z, y);
    }
    let nudge = 8.0 * EPS_GEOM;
    let y = match side {
        DiagonalSide::Lower => y - nudge,
        DiagonalSide::Upper => y + nudge,
    };
    strict_region(z, y)
}

/// `sin(alpha) Ḡ(z, y)` on a given region.
fn gbar_numerator(region: Region, z: f64, y: f64, alpha: f64) -> f64 {
    let q = FRAC_PI_4;
    match region {
        Region::Above => (alpha * (1.0 - z) - q).cos() * (alpha * y - q).cos(),
        Region::Right => (alpha * z + q).cos() * (alpha * (y - 1.0) - q).cos(),
        Region::Below => (alpha * z + q).cos() * (alpha * (1.0 + y) - q).cos(),
        Region::Left => (alpha * (z + 1.0) + q).cos() * (alpha * y - q).cos(),
        Region::Diag => unreachable!("diagonal resolved before evaluation"),
    }
}

/// Green's function `Ḡ` of the periodic problem.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PeriodicKernel {
    params: KernelParams,
    sin_alpha: f64,
}

impl PeriodicKernel {
    pub fn new(params: KernelParams) -> Result<Self> {
        params.check_periodic()?;
        Ok(Self {
            params,
            sin_alpha: params.alpha.sin(),
        })
    }

    pub fn params(&self) -> &KernelParams {
        &self.params
    }

    pub fn eval(&self, t: f64, s: f64) -> Result<f64> {
        self.eval_sided(t, s, DiagonalSide::Lower)
    }

    pub fn eval_sided(&self, t: f64, s: f64, side: DiagonalSide) -> Result<f64> {
        let z = self.params.scale(t)?;
        let y = self.params.scale(s)?;
        Ok(self.eval_scaled(z, y, side))
    }

    /// `Ḡ(z, y)` for `z, y ∈ [-1, 1]`, unchecked.
    pub fn eval_scaled(&self, z: f64, y: f64, side: DiagonalSide) -> f64 {
        let region = resolve_region(z, y, side);
        gbar_numerator(region, z, y, self.params.alpha) / self.sin_alpha
    }

    /// `Ḡ(t, -T) = (cos mt - sin mt) / (2 sin mT)`.
    pub fn at_minus_t(&self, t: f64) -> Result<f64> {
        let z = self.params.scale(t)?;
        let mt = self.params.alpha * z;
        Ok((mt.cos() - mt.sin()) / (2.0 * self.sin_alpha))
    }
}

pub fn gbar(t: f64, s: f64, p: &KernelParams) -> Result<f64> {
    PeriodicKernel::new(*p)?.eval(t, s)
}

pub fn gbar_sided(t: f64, s: f64, p: &KernelParams, side: DiagonalSide) -> Result<f64> {
    PeriodicKernel::new(*p)?.eval_sided(t, s, side)
}

pub fn gbar_minus_t(t: f64, p: &KernelParams) -> Result<f64> {
    PeriodicKernel::new(*p)?.at_minus_t(t)
}

/// Oscillator kernel `H` and Green's function `H̄` for antiperiodic conditions.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct AntiperiodicKernel {
    params: KernelParams,
    cos_alpha: f64,
}

impl AntiperiodicKernel {
    pub fn new(params: KernelParams) -> Result<Self> {
        params.check_antiperiodic()?;
        Ok(Self {
            params,
            cos_alpha: params.alpha.cos(),
        })
    }

    pub fn params(&self) -> &KernelParams {
        &self.params
    }

    fn require_nonzero_m(&self) -> Result<()> {
        if self.params.m.abs() <= EPS_M {
            return Err(Error::Domain(format!(
                "H is undefined for m = {} (formula divides by m)",
                self.params.m
            )));
        }
        Ok(())
    }

    fn lower(z: f64, y: f64, side: DiagonalSide) -> bool {
        if (z - y).abs() <= EPS_GEOM {
            side == DiagonalSide::Lower
        } else {
            y < z
        }
    }

    pub fn h(&self, t: f64, s: f64) -> Result<f64> {
        self.require_nonzero_m()?;
        let (z, y) = (self.params.scale(t)?, self.params.scale(s)?);
        let a = self.params.alpha;
        let num = if Self::lower(z, y, DiagonalSide::Lower) {
            (a * (z - y - 1.0)).sin()
        } else {
            (a * (y - z - 1.0)).sin()
        };
        Ok(num / (2.0 * self.params.m * self.cos_alpha))
    }

    /// `∂H/∂t`, one-sided on `s = t`.
    pub fn h_dt(&self, t: f64, s: f64, side: DiagonalSide) -> Result<f64> {
        self.require_nonzero_m()?;
        let (z, y) = (self.params.scale(t)?, self.params.scale(s)?);
        let a = self.params.alpha;
        let num = if Self::lower(z, y, side) {
            (a * (z - y - 1.0)).cos()
        } else {
            -(a * (y - z - 1.0)).cos()
        };
        Ok(num / (2.0 * self.cos_alpha))
    }

    /// `∂H/∂s`, one-sided on `s = t`.
    pub fn h_ds(&self, t: f64, s: f64, side: DiagonalSide) -> Result<f64> {
        self.require_nonzero_m()?;
        let (z, y) = (self.params.scale(t)?, self.params.scale(s)?);
        let a = self.params.alpha;
        let num = if Self::lower(z, y, side) {
            -(a * (z - y - 1.0)).cos()
        } else {
            (a * (y - z - 1.0)).cos()
        };
        Ok(num / (2.0 * self.cos_alpha))
    }

    pub fn hbar(&self, t: f64, s: f64) -> Result<f64> {
        self.hbar_sided(t, s, DiagonalSide::Lower)
    }

    pub fn hbar_sided(&self, t: f64, s: f64, side: DiagonalSide) -> Result<f64> {
        let (z, y) = (self.params.scale(t)?, self.params.scale(s)?);
        Ok(self.hbar_scaled(z, y, side))
    }

    pub fn hbar_scaled(&self, z: f64, y: f64, side: DiagonalSide) -> f64 {
        let a = self.params.alpha;
        let num = match resolve_region(z, y, side) {
            Region::Above => (a * (-1.0 + y + z)).sin() + (a * (-1.0 - y + z)).cos(),
            Region::Right => (a * (-1.0 + y + z)).sin() - (a * (-1.0 + y - z)).cos(),
            Region::Below => (a * (-1.0 - y - z)).sin() + (a * (-1.0 - y + z)).cos(),
            Region::Left => (a * (-1.0 - y - z)).sin() - (a * (-1.0 + y - z)).cos(),
            Region::Diag => unreachable!("diagonal resolved before evaluation"),
        };
        num / (2.0 * self.cos_alpha)
    }

    /// `∂H̄/∂t` from the differentiated four-case formula.
    pub fn hbar_dt(&self, t: f64, s: f64, side: DiagonalSide) -> Result<f64> {
        let (z, y) = (self.params.scale(t)?, self.params.scale(s)?);
        let a = self.params.alpha;
        let num = match resolve_region(z, y, side) {
            Region::Above => (a * (-1.0 + y + z)).cos() - (a * (-1.0 - y + z)).sin(),
            Region::Right => (a * (-1.0 + y + z)).cos() - (a * (-1.0 + y - z)).sin(),
            Region::Below => -(a * (-1.0 - y - z)).cos() - (a * (-1.0 - y + z)).sin(),
            Region::Left => -(a * (-1.0 - y - z)).cos() - (a * (-1.0 + y - z)).sin(),
            Region::Diag => unreachable!("diagonal resolved before evaluation"),
        };
        Ok(self.params.m * num / (2.0 * self.cos_alpha))
    }
}

pub fn h_kernel(t: f64, s: f64, p: &KernelParams) -> Result<f64> {
    AntiperiodicKernel::new(*p)?.h(t, s)
}

pub fn hbar(t: f64, s: f64, p: &KernelParams) -> Result<f64> {
    AntiperiodicKernel::new(*p)?.hbar(t, s)
}

pub fn hbar_sided(t: f64, s: f64, p: &KernelParams, side: DiagonalSide) -> Result<f64> {
    AntiperiodicKernel::new(*p)?.hbar_sided(t, s, side)
}

fn check_alpha_range(alpha: f64) -> Result<()> {
    if !(alpha > 0.0 && alpha < FRAC_PI_4) {
        return Err(Error::Domain(format!("alpha = {alpha} must lie in (0, pi/4)")));
    }
    Ok(())
}

/// `Φ(y) = max_z Ḡ(z, y)` for `alpha ∈ (0, π/4)`.
pub fn phi_profile(y: f64, alpha: f64) -> Result<f64> {
    check_alpha_range(alpha)?;
    if !(y.abs() <= 1.0) {
        return Err(Error::Domain(format!("y = {y} outside [-1, 1]")));
    }
    let q = FRAC_PI_4;
    let num = if y >= 0.0 {
        (alpha * (y - 1.0) + q).cos() * (alpha * y - q).cos()
    } else {
        (alpha * y + q).cos() * (alpha * (y + 1.0) - q).cos()
    };
    Ok(num / alpha.sin())
}

/// `M = max Ḡ = (1 + csc alpha) / 2`, attained at `z = y = 1/2`.
pub fn kernel_sup(alpha: f64) -> Result<f64> {
    check_alpha_range(alpha)?;
    Ok(0.5 * (1.0 + 1.0 / alpha.sin()))
}
