//! Run configuration: the subcommand, the problem document and the
//! reproducibility settings of one invocation.
//!
//! A problem document is a TOML file; every key is optional and falls back
//! to the defaults below (`Kn = 0.1`, degree 2, 64 elements). Unknown keys
//! are rejected so that typos surface as configuration errors.
//!
//! ```toml
//! model = "bundled:eta10"   # or a path relative to this file
//! kn = 0.1
//! degree = 2
//! elements = 64
//!
//! [wall]                     # wall at x = 0, then x = 1
//! theta = [0.0, 0.0]
//! u_t = [[-0.5, 0.0], [0.5, 0.0]]
//!
//! [transient]
//! dt = 0.01
//! steps = 200
//! scheme = "implicit-euler"
//!
//! [converge]
//! ladder = [16, 32, 64, 128]
//!
//! [korn]
//! subdivisions = [2, 4]
//! degree = 2
//! ```

use std::path::{Path, PathBuf};

use serde::{Deserialize, Serialize};

use crate::catalog::bundled_source;
use crate::error::{R13Error, Result};
use crate::model_params::{load_model, MolecularModel};
use crate::slab::{Scheme, WallData};

/// Prefix selecting a bundled model instead of a file.
pub const BUNDLED_PREFIX: &str = "bundled:";

/// Subcommands.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Command {
    /// Thermodynamic discriminants, compared with the tabulated values.
    ValidateParams,
    /// Wall coefficients and their audits.
    DeriveBcs,
    /// Korn certificates and the conformal-Killing kernel.
    Korn,
    /// Steady slab solve.
    SolveSteady,
    /// Transient slab run.
    SolveTransient,
    /// Self-convergence study.
    Converge,
}

impl Command {
    /// Every subcommand.
    pub const ALL: [Command; 6] = [
        Command::ValidateParams,
        Command::DeriveBcs,
        Command::Korn,
        Command::SolveSteady,
        Command::SolveTransient,
        Command::Converge,
    ];

    /// Kebab-case name.
    pub fn name(&self) -> &'static str {
        match self {
            Command::ValidateParams => "validate-params",
            Command::DeriveBcs => "derive-bcs",
            Command::Korn => "korn",
            Command::SolveSteady => "solve-steady",
            Command::SolveTransient => "solve-transient",
            Command::Converge => "converge",
        }
    }
}

/// Time-stepping settings.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct TransientConfig {
    /// Time step.
    pub dt: f64,
    /// Number of steps.
    pub steps: usize,
    /// Time discretization.
    pub scheme: Scheme,
}

impl Default for TransientConfig {
    fn default() -> Self {
        TransientConfig { dt: 0.01, steps: 200, scheme: Scheme::ImplicitEuler }
    }
}

/// Convergence-study settings.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct ConvergeConfig {
    /// Element counts, strictly increasing.
    pub ladder: Vec<usize>,
}

impl Default for ConvergeConfig {
    fn default() -> Self {
        ConvergeConfig { ladder: vec![16, 32, 64, 128] }
    }
}

/// Korn-certificate settings.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct KornConfig {
    /// Cube subdivisions per axis, one certificate each.
    pub subdivisions: Vec<usize>,
    /// Element degree.
    pub degree: usize,
    /// Largest subdivision on which the stf-gradient kernel is computed.
    pub kernel_max_subdivisions: usize,
    /// Random conformal-Killing fields sampled for the vanishing check.
    pub ck_samples: usize,
}

impl Default for KornConfig {
    fn default() -> Self {
        KornConfig { subdivisions: vec![2, 4], degree: 2, kernel_max_subdivisions: 2, ck_samples: 100 }
    }
}

/// Problem document.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct ProblemConfig {
    /// Model reference: `bundled:<name>` or a file path (relative paths are
    /// resolved against the directory of the problem document).
    pub model: Option<String>,
    /// Knudsen number.
    pub kn: f64,
    /// Element degree of the slab discretization.
    pub degree: usize,
    /// Number of slab elements.
    pub elements: usize,
    /// Wall data.
    pub wall: WallData,
    /// Number of profile intervals written to the profile CSV.
    pub profile_points: usize,
    /// Transient settings.
    pub transient: TransientConfig,
    /// Convergence settings.
    pub converge: ConvergeConfig,
    /// Korn settings.
    pub korn: KornConfig,
}

impl Default for ProblemConfig {
    fn default() -> Self {
        ProblemConfig {
            model: None,
            kn: 0.1,
            degree: 2,
            elements: 64,
            wall: WallData::ZERO,
            profile_points: 200,
            transient: TransientConfig::default(),
            converge: ConvergeConfig::default(),
            korn: KornConfig::default(),
        }
    }
}

impl ProblemConfig {
    /// Parses a problem document.
    pub fn from_toml(text: &str) -> Result<Self> {
        let cfg: ProblemConfig =
            toml::from_str(text).map_err(|e| R13Error::Config(format!("problem document: {e}")))?;
        cfg.validate()?;
        Ok(cfg)
    }

    /// Range checks that do not need the model.
    pub fn validate(&self) -> Result<()> {
        let bad = |m: String| Err(R13Error::Config(m));
        if !(self.kn.is_finite() && self.kn > 0.0) {
            return bad(format!("kn must be positive and finite, got {}", self.kn));
        }
        if self.elements == 0 {
            return bad("elements must be at least 1".into());
        }
        if !(self.transient.dt.is_finite() && self.transient.dt > 0.0) {
            return bad(format!("transient.dt must be positive, got {}", self.transient.dt));
        }
        if self.profile_points == 0 {
            return bad("profile_points must be at least 1".into());
        }
        if self.korn.subdivisions.is_empty() || self.korn.subdivisions.contains(&0) {
            return bad("korn.subdivisions must be a nonempty list of positive integers".into());
        }
        self.wall.validate()
    }
}

/// Resolved inputs of one invocation.
#[derive(Debug, Clone, PartialEq)]
pub struct RunConfig {
    /// Subcommand.
    pub command: Command,
    /// Model reference overriding the problem document (`bundled:<name>`
    /// or a path).
    pub model: Option<String>,
    /// Problem document path; defaults apply when absent.
    pub config: Option<PathBuf>,
    /// Output directory.
    pub out: PathBuf,
    /// Seed of every random draw.
    pub seed: u64,
    /// Worker threads for dense eigensolves (1 = sequential and
    /// bit-reproducible).
    pub threads: usize,
}

/// A loaded input file: how it was referenced and its exact bytes.
#[derive(Debug, Clone, PartialEq)]
pub struct InputDocument {
    /// Reference as given (`bundled:<name>` or the path).
    pub reference: String,
    /// Text content.
    pub text: String,
}

/// Reads a text file, mapping failures to configuration errors.
pub fn read_text(path: &Path) -> Result<InputDocument> {
    let text = std::fs::read_to_string(path).map_err(|e| R13Error::Io {
        path: path.display().to_string(),
        source: e,
    })?;
    Ok(InputDocument { reference: path.display().to_string(), text })
}

/// Loads the problem document (or the defaults).
pub fn load_problem(config: Option<&Path>) -> Result<(ProblemConfig, Option<InputDocument>)> {
    match config {
        None => Ok((ProblemConfig::default(), None)),
        Some(p) => {
            let doc = read_text(p)?;
            Ok((ProblemConfig::from_toml(&doc.text)?, Some(doc)))
        }
    }
}

/// Resolves a model reference; `base` is the directory relative paths are
/// taken from.
pub fn load_model_reference(reference: &str, base: Option<&Path>) -> Result<(MolecularModel, InputDocument)> {
    let doc = if let Some(name) = reference.strip_prefix(BUNDLED_PREFIX) {
        InputDocument { reference: reference.to_string(), text: bundled_source(name)?.to_string() }
    } else {
        let p = Path::new(reference);
        let path = match base {
            Some(b) if p.is_relative() => b.join(p),
            _ => p.to_path_buf(),
        };
        let mut d = read_text(&path)?;
        d.reference = reference.to_string();
        d
    };
    Ok((load_model(&doc.text)?, doc))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn defaults_and_overrides() {
        let c = ProblemConfig::from_toml("kn = 0.2\n[wall]\ntheta = [0.1, 0.1]\n").unwrap();
        assert_eq!(c.kn, 0.2);
        assert_eq!(c.elements, 64);
        assert_eq!(c.wall.theta, [0.1, 0.1]);
        assert_eq!(c.transient.scheme, Scheme::ImplicitEuler);
        let c = ProblemConfig::from_toml("[transient]\nscheme = \"crank-nicolson\"\n").unwrap();
        assert_eq!(c.transient.scheme, Scheme::CrankNicolson);
    }

    #[test]
    fn config_errors_map_to_exit_code_2() {
        for bad in ["kn = -1.0", "elemnts = 3", "kn = \"x\"", "[korn]\nsubdivisions = []"] {
            assert_eq!(ProblemConfig::from_toml(bad).unwrap_err().exit_code(), 2, "{bad}");
        }
        assert_eq!(load_model_reference("bundled:nope", None).unwrap_err().exit_code(), 2);
        assert_eq!(load_model_reference("/nonexistent/model.toml", None).unwrap_err().exit_code(), 2);
    }

    #[test]
    fn bundled_reference_resolves() {
        let (m, doc) = load_model_reference("bundled:eta7", None).unwrap();
        assert_eq!(m.name, "eta7");
        assert!(doc.text.contains("eta = 7"));
    }
}
