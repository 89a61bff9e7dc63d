//! Boundary functionals `F(x) = ∫_I x w dt + Σ a_i x(t_i)`: a measure on
//! `I = [-T, T]` made of an integrable density and finitely many point atoms.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::expr::Expr;
use crate::kernel::KernelParams;
use crate::quad::{self, QuadConfig};

/// Default guard on `|F(cos m·) - F(sin m·)|`.
pub const EPS_GAP: f64 = 1e-9;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Atom {
    pub t: f64,
    pub a: f64,
}

#[derive(Debug, Clone, PartialEq)]
pub struct Measure {
    half_length: f64,
    density: Option<Expr>,
    atoms: Vec<Atom>,
}

impl Measure {
    pub fn new(half_length: f64, density: Option<Expr>, atoms: Vec<Atom>) -> Result<Self> {
        if !(half_length > 0.0 && half_length.is_finite()) {
            return Err(Error::Domain(format!("T must be positive, got {half_length}")));
        }
        for (i, atom) in atoms.iter().enumerate() {
            if !(atom.t.abs() <= half_length) || !atom.a.is_finite() {
                return Err(Error::InvalidProblem(format!(
                    "atom {i} at t = {} (weight {}) is not a finite point of [-{half_length}, {half_length}]",
                    atom.t, atom.a
                )));
            }
            if atoms[..i].iter().any(|other| other.t == atom.t) {
                return Err(Error::InvalidProblem(format!("duplicate atom location t = {}", atom.t)));
            }
        }
        Ok(Self {
            half_length,
            density,
            atoms,
        })
    }

    /// Lebesgue measure on `[-T, T]` (density 1, no atoms).
    pub fn lebesgue(half_length: f64) -> Result<Self> {
        Self::new(half_length, Some(Expr::Num(1.0)), Vec::new())
    }

    pub fn point(half_length: f64, t: f64, a: f64) -> Result<Self> {
        Self::new(half_length, None, vec![Atom { t, a }])
    }

    pub fn half_length(&self) -> f64 {
        self.half_length
    }

    pub fn density(&self) -> Option<&Expr> {
        self.density.as_ref()
    }

    pub fn atoms(&self) -> &[Atom] {
        &self.atoms
    }

    /// True when the measure is exactly `dt` on `I`.
    pub fn is_lebesgue(&self) -> bool {
        self.atoms.is_empty() && self.density.as_ref().and_then(Expr::constant_value) == Some(1.0)
    }

    fn weight(&self, t: f64) -> Result<f64> {
        match &self.density {
            Some(w) => Ok(w.eval(t)?),
            None => Ok(0.0),
        }
    }

    /// `F(x)` for a fallible `x`.
    pub fn try_apply<X>(&self, mut x: X, cfg: &QuadConfig, breakpoints: &[f64]) -> Result<f64>
    where
        X: FnMut(f64) -> Result<f64>,
    {
        let t_max = self.half_length;
        let mut total = match &self.density {
            Some(w) => {
                if let Some(c) = w.constant_value() {
                    c * quad::try_integrate(&mut x, -t_max, t_max, breakpoints, cfg)?
                } else {
                    quad::try_integrate(
                        |t| Ok::<f64, Error>(x(t)? * w.eval(t)?),
                        -t_max,
                        t_max,
                        breakpoints,
                        cfg,
                    )?
                }
            }
            None => 0.0,
        };
        for atom in &self.atoms {
            total += atom.a * x(atom.t)?;
        }
        Ok(total)
    }

    pub fn apply<X>(&self, x: X, cfg: &QuadConfig, breakpoints: &[f64]) -> Result<f64>
    where
        X: Fn(f64) -> f64,
    {
        self.try_apply(|t| Ok(x(t)), cfg, breakpoints)
    }

    /// `∫_I |w| + Σ |a_i|`, which is `|μ|(I)` for this representation.
    pub fn total_variation(&self, cfg: &QuadConfig) -> Result<f64> {
        let t_max = self.half_length;
        let continuous = match &self.density {
            Some(w) => match w.constant_value() {
                Some(c) => c.abs() * 2.0 * t_max,
                None => quad::try_integrate_abs(|t| self.weight(t), -t_max, t_max, &[], cfg)?,
            },
            None => 0.0,
        };
        Ok(continuous + self.atoms.iter().map(|a| a.a.abs()).sum::<f64>())
    }

    /// `F(cos m·) - F(sin m·)`; the functional problem is uniquely solvable
    /// when this is non-zero.
    pub fn nonresonance_gap(&self, p: &KernelParams, cfg: &QuadConfig) -> Result<f64> {
        let m = p.m;
        self.apply(|t| (m * t).cos() - (m * t).sin(), cfg, &[])
    }
}

pub fn apply<X: Fn(f64) -> f64>(f: &Measure, x: X, cfg: &QuadConfig, breakpoints: &[f64]) -> Result<f64> {
    f.apply(x, cfg, breakpoints)
}

pub fn total_variation_bound(f: &Measure, cfg: &QuadConfig) -> Result<f64> {
    f.total_variation(cfg)
}

pub fn nonresonance_gap(f: &Measure, p: &KernelParams, cfg: &QuadConfig) -> Result<f64> {
    f.nonresonance_gap(p, cfg)
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_abs_diff_eq;
    use proptest::prelude::*;

    fn cfg() -> QuadConfig {
        QuadConfig::default()
    }

    #[test]
    fn lebesgue_apply() {
        let f = Measure::lebesgue(0.5).unwrap();
        assert_abs_diff_eq!(
            f.apply(f64::cos, &cfg(), &[]).unwrap(),
            2.0 * 0.5f64.sin(),
            epsilon = 1e-8
        );
        assert_abs_diff_eq!(f.apply(|t| (1.7 * t).sin(), &cfg(), &[]).unwrap(), 0.0, epsilon = 1e-10);
        assert!(f.is_lebesgue());
    }

    #[test]
    fn atom_is_point_evaluation() {
        let f = Measure::point(0.5, 0.0, 1.0).unwrap();
        assert_eq!(f.apply(|t| t.cos() - t.sin(), &cfg(), &[]).unwrap(), 1.0);
        assert!(!f.is_lebesgue());
    }

    #[test]
    fn total_variation_examples() {
        assert_abs_diff_eq!(Measure::lebesgue(0.5).unwrap().total_variation(&cfg()).unwrap(), 1.0);
        let two_atoms = Measure::new(0.5, None, vec![Atom { t: -0.5, a: 1.0 }, Atom { t: 0.5, a: -1.0 }]).unwrap();
        assert_eq!(two_atoms.total_variation(&cfg()).unwrap(), 2.0);
        let odd = Measure::new(1.0, Some(Expr::parse("t").unwrap()), vec![]).unwrap();
        assert_abs_diff_eq!(odd.total_variation(&cfg()).unwrap(), 1.0, epsilon = 1e-10);
    }

    #[test]
    fn gap_examples() {
        let p = KernelParams::new(1.0, 0.5).unwrap();
        let leb = Measure::lebesgue(0.5).unwrap();
        assert_abs_diff_eq!(
            leb.nonresonance_gap(&p, &cfg()).unwrap(),
            0.958_851_077_208_406,
            epsilon = 1e-8
        );
        for m in [0.3, 1.0, 4.0] {
            let pm = KernelParams::new(m, 0.5).unwrap();
            assert_eq!(
                Measure::point(0.5, 0.0, 1.0)
                    .unwrap()
                    .nonresonance_gap(&pm, &cfg())
                    .unwrap(),
                1.0
            );
            let diff = Measure::new(0.5, None, vec![Atom { t: -0.5, a: 1.0 }, Atom { t: 0.5, a: -1.0 }]).unwrap();
            assert_abs_diff_eq!(
                diff.nonresonance_gap(&pm, &cfg()).unwrap(),
                2.0 * pm.alpha.sin(),
                epsilon = 1e-14
            );
        }
    }

    #[test]
    fn invalid_measures() {
        assert!(Measure::point(0.5, 0.6, 1.0).is_err());
        assert!(Measure::new(0.5, None, vec![Atom { t: 0.1, a: 1.0 }, Atom { t: 0.1, a: 2.0 }]).is_err());
        assert!(Measure::new(0.5, None, vec![Atom { t: 0.1, a: f64::NAN }]).is_err());
        assert!(Measure::lebesgue(0.0).is_err());
    }

    #[test]
    fn density_evaluation_error_propagates() {
        let f = Measure::new(0.5, Some(Expr::parse("log(t)").unwrap()), vec![]).unwrap();
        assert!(matches!(f.apply(|_| 1.0, &cfg(), &[]), Err(Error::Eval(_))));
    }

    fn trig_poly(coef: &[f64]) -> impl Fn(f64) -> f64 + '_ {
        move |t| {
            coef.iter()
                .enumerate()
                .map(|(k, c)| {
                    if k % 2 == 0 {
                        c * (k as f64 * t).cos()
                    } else {
                        c * (k as f64 * t).sin()
                    }
                })
                .sum()
        }
    }

    proptest! {
        #[test]
        fn apply_is_linear(
            x in prop::collection::vec(-2.0f64..2.0, 6),
            y in prop::collection::vec(-2.0f64..2.0, 6),
            a in -3.0f64..3.0,
            b in -3.0f64..3.0,
            t0 in -0.9f64..0.9,
            w0 in -2.0f64..2.0,
        ) {
            let f = Measure::new(
                0.9,
                Some(Expr::parse("1 + t*t - cos(3*t)").unwrap()),
                vec![Atom { t: t0, a: w0 }],
            ).unwrap();
            let (px, py) = (trig_poly(&x), trig_poly(&y));
            let lhs = f.apply(|t| a * px(t) + b * py(t), &cfg(), &[]).unwrap();
            let rhs = a * f.apply(&px, &cfg(), &[]).unwrap() + b * f.apply(&py, &cfg(), &[]).unwrap();
            prop_assert!((lhs - rhs).abs() < 1e-9);
        }

        #[test]
        fn bounded_by_total_variation(
            x in prop::collection::vec(-2.0f64..2.0, 6),
            t0 in -0.9f64..0.9,
            w0 in -2.0f64..2.0,
        ) {
            let f = Measure::new(0.9, Some(Expr::parse("sin(4*t) - 0.2").unwrap()), vec![Atom { t: t0, a: w0 }]).unwrap();
            let px = trig_poly(&x);
            let sup = (0..=2000).map(|i| px(-0.9 + 1.8 * i as f64 / 2000.0).abs()).fold(0.0, f64::max);
            let tv = f.total_variation(&cfg()).unwrap();
            // the grid sup undershoots the true sup by O(h²)
            prop_assert!(f.apply(&px, &cfg(), &[]).unwrap().abs() <= tv * sup * (1.0 + 1e-5) + 1e-8);
        }
    }
}
