//! JSON problem files.

use std::fs;
use std::path::Path;

use reflectode::{Atom, BoundaryCondition, Expr, Measure, ProblemSpec, QuadConfig};
use serde::Deserialize;

use crate::error::CliError;

#[derive(Debug, Clone, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ProblemFile {
    pub m: f64,
    #[serde(rename = "T")]
    pub half_length: f64,
    pub h: String,
    pub bc: BcFile,
    #[serde(default)]
    pub quad: Option<QuadFile>,
}

#[derive(Debug, Clone, Deserialize)]
#[serde(tag = "type", rename_all = "lowercase", deny_unknown_fields)]
pub enum BcFile {
    Periodic {},
    Antiperiodic {},
    Lambda {
        lambda: f64,
    },
    Functional {
        #[serde(rename = "F")]
        functional: MeasureFile,
        c: f64,
    },
}

#[derive(Debug, Clone, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct MeasureFile {
    #[serde(default)]
    pub density: Option<String>,
    #[serde(default)]
    pub atoms: Vec<AtomFile>,
}

#[derive(Debug, Clone, Copy, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct AtomFile {
    pub t: f64,
    pub a: f64,
}

#[derive(Debug, Clone, Copy, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct QuadFile {
    #[serde(default)]
    pub abs_tol: Option<f64>,
    #[serde(default)]
    pub rel_tol: Option<f64>,
}

/// Command-line values that override the file.
#[derive(Debug, Clone, Copy, Default)]
pub struct Overrides {
    pub abs_tol: Option<f64>,
    pub rel_tol: Option<f64>,
    pub c: Option<f64>,
    pub lambda: Option<f64>,
}

impl ProblemFile {
    pub fn from_json(text: &str) -> Result<Self, CliError> {
        serde_json::from_str(text).map_err(|e| CliError::Schema(format!("invalid problem file: {e}")))
    }

    pub fn load(path: &Path) -> Result<Self, CliError> {
        let text =
            fs::read_to_string(path).map_err(|e| CliError::Schema(format!("cannot read {}: {e}", path.display())))?;
        Self::from_json(&text)
    }

    pub fn quad_config(&self, o: &Overrides) -> Result<QuadConfig, CliError> {
        let d = QuadConfig::default();
        let file = self.quad.unwrap_or(QuadFile {
            abs_tol: None,
            rel_tol: None,
        });
        let abs_tol = o.abs_tol.or(file.abs_tol).unwrap_or(d.abs_tol);
        let rel_tol = o.rel_tol.or(file.rel_tol).unwrap_or(d.rel_tol);
        QuadConfig::new(abs_tol, rel_tol, d.max_depth).map_err(|e| CliError::Schema(format!("quad: {e}")))
    }

    fn expr(field: &str, text: &str) -> Result<Expr, CliError> {
        Expr::parse(text).map_err(|e| CliError::Schema(format!("{field}: {e}")))
    }

    pub fn to_spec(&self, o: &Overrides) -> Result<ProblemSpec, CliError> {
        let h = Self::expr("h", &self.h)?;
        let bc = match &self.bc {
            BcFile::Periodic {} | BcFile::Antiperiodic {} if o.lambda.is_some() || o.c.is_some() => {
                return Err(CliError::Schema(
                    "--c and --lambda need a lambda or functional condition".into(),
                ));
            }
            BcFile::Periodic {} => BoundaryCondition::Periodic,
            BcFile::Antiperiodic {} => BoundaryCondition::Antiperiodic,
            BcFile::Lambda { .. } if o.c.is_some() => {
                return Err(CliError::Schema("--c needs a functional condition".into()));
            }
            BcFile::Lambda { lambda } => BoundaryCondition::Lambda(o.lambda.unwrap_or(*lambda)),
            BcFile::Functional { .. } if o.lambda.is_some() => {
                return Err(CliError::Schema("--lambda needs a lambda condition".into()));
            }
            BcFile::Functional { functional, c } => {
                let density = functional
                    .density
                    .as_deref()
                    .map(|d| Self::expr("F.density", d))
                    .transpose()?;
                let atoms = functional.atoms.iter().map(|a| Atom { t: a.t, a: a.a }).collect();
                let measure = Measure::new(self.half_length, density, atoms)?;
                BoundaryCondition::Functional {
                    measure,
                    c: o.c.unwrap_or(*c),
                }
            }
        };
        Ok(ProblemSpec::new(self.m, self.half_length, h, bc)?)
    }
}
