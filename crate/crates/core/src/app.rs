//! Configuration-driven runs of every subcommand with reproducibility
//! manifests.
//!
//! [`run`] computes all outputs in memory, writes them to the output
//! directory and finishes with `manifest.json`. The manifest records:
//! - the SHA-256 of every input document;
//! - a combined inputs hash;
//! - the resolved problem settings, the seed and the thread count;
//! - the crate version;
//! - the SHA-256 of every output file.
//!
//! It deliberately carries no timestamps: identical inputs, seed and thread
//! count reproduce every file bit for bit when running sequentially
//! (`threads = 1`).
//!
//! Verification failures still write their outputs and the manifest and are
//! reported in [`RunSummary::failure`]. The error class selects the exit
//! code: a failed audit is a data inconsistency (3), a failed numerical
//! check is a solver failure (4).

use std::path::{Path, PathBuf};

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};
use sha2::{Digest, Sha256};

use crate::catalog::{agrees_to_significant_figures, bundled_source, TabulatedRow, BUNDLED_NAMES, TABULATED};
use crate::config::{load_model_reference, load_problem, Command, InputDocument, ProblemConfig, RunConfig, BUNDLED_PREFIX};
use crate::error::{R13Error, Result};
use crate::korn_verifier::{assemble_cube_forms, ck_vanishing_check, korn_constants, CkVanishingReport, CubeMesh, KornOptions, KornReport, CK_DIM};
use crate::model_params::{load_model, thermo_discriminants, ConstraintReport, ConstraintStatus, Eta, MolecularModel};
use crate::onsager_coefficients::{boundary_coefficients, coefficient_report, CoefficientReport};
use crate::slab::{
    assemble_blocks, convergence_study, profile, profile_csv, random_state, run_transient, solve_steady,
    ConvergenceReport, EnergyIdentity, Formulation, SlabMesh, SolveMonitors, WallData,
};

/// Environment variable overriding the default output directory.
pub const OUT_DIR_ENV: &str = "R13LAB_OUT";

/// Output directory used when neither `--out` nor the environment set one.
pub const DEFAULT_OUT_DIR: &str = "r13lab-out";

/// Name of the manifest written by every run.
pub const MANIFEST_FILE: &str = "manifest.json";

/// Tolerance of the coefficient positivity audit.
pub const PSD_TOL: f64 = 1e-12;

/// Relative tolerance of duplicate and alternative coefficient paths.
pub const CONSISTENCY_TOL: f64 = 1e-10;

/// Relative tolerance of the steady energy identity, scaled by `1 + E`.
pub const ENERGY_IDENTITY_TOL: f64 = 1e-8;

/// Energy-increase slack of implicit Euler, relative to the initial energy.
pub const IMPLICIT_EULER_SLACK: f64 = 1e-12;

/// Energy-increase slack of Crank–Nicolson, relative to the initial energy.
pub const CRANK_NICOLSON_SLACK: f64 = 1e-10;

/// Absolute tolerance on the drift of `∫ρ` during a transient run.
pub const MASS_DRIFT_TOL: f64 = 1e-10;

/// Upper bound accepted for the bulk dissipation `𝒲₁`.
pub const W1_TOL: f64 = 1e-12;

/// Significant figures required of tabulated discriminants.
pub const SIGNIFICANT_FIGURES: usize = 4;

/// Output directory precedence: explicit value, then [`OUT_DIR_ENV`], then
/// [`DEFAULT_OUT_DIR`].
pub fn resolve_out_dir(explicit: Option<PathBuf>) -> PathBuf {
    explicit
        .or_else(|| std::env::var_os(OUT_DIR_ENV).filter(|v| !v.is_empty()).map(PathBuf::from))
        .unwrap_or_else(|| PathBuf::from(DEFAULT_OUT_DIR))
}

/// Hex-encoded SHA-256.
pub fn sha256_hex(bytes: &[u8]) -> String {
    Sha256::digest(bytes).iter().map(|b| format!("{b:02x}")).collect()
}

/// One input document recorded in the manifest.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct InputRecord {
    /// `problem` or `model`.
    pub role: String,
    /// Reference as given.
    pub reference: String,
    /// SHA-256 of the content.
    pub sha256: String,
}

/// One output file recorded in the manifest.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct OutputRecord {
    /// File name inside the output directory.
    pub file: String,
    /// Size in bytes.
    pub bytes: usize,
    /// SHA-256 of the content.
    pub sha256: String,
}

/// Reproducibility manifest.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Manifest {
    /// Tool name.
    pub tool: String,
    /// Crate version.
    pub version: String,
    /// Subcommand.
    pub command: Command,
    /// Seed of every random draw.
    pub seed: u64,
    /// Worker threads.
    pub threads: usize,
    /// Input documents.
    pub inputs: Vec<InputRecord>,
    /// SHA-256 over the command, seed, input hashes and resolved problem.
    pub inputs_hash: String,
    /// Problem settings after defaults were applied.
    pub problem: ProblemConfig,
    /// Output files (excluding the manifest itself).
    pub outputs: Vec<OutputRecord>,
    /// `ok` or the failure message.
    pub status: String,
    /// Exit code the run maps to.
    pub exit_code: i32,
}

/// What a run produced.
#[derive(Debug)]
pub struct RunSummary {
    /// Output directory.
    pub out_dir: PathBuf,
    /// Manifest as written.
    pub manifest: Manifest,
    /// One-line human-readable results.
    pub lines: Vec<String>,
    /// First failed verification, if any (outputs are written regardless).
    pub failure: Option<R13Error>,
}

impl RunSummary {
    /// Process exit code of the run.
    pub fn exit_code(&self) -> i32 {
        self.failure.as_ref().map_or(0, R13Error::exit_code)
    }

    /// The summary, or the failure it carries.
    pub fn into_result(self) -> Result<RunSummary> {
        match self.failure {
            Some(e) => Err(e),
            None => Ok(self),
        }
    }
}

/// Outputs of a subcommand before they are written.
struct Outcome {
    files: Vec<(String, String)>,
    lines: Vec<String>,
    failure: Option<R13Error>,
}

impl Outcome {
    fn new() -> Self {
        Outcome { files: Vec::new(), lines: Vec::new(), failure: None }
    }

    fn file(&mut self, name: &str, content: String) {
        self.files.push((name.to_string(), content));
    }

    fn json<T: Serialize>(&mut self, name: &str, value: &T) -> Result<()> {
        let text = serde_json::to_string_pretty(value)
            .map_err(|e| R13Error::InvalidArgument(format!("cannot serialize {name}: {e}")))?;
        self.file(name, text + "\n");
        Ok(())
    }

    /// Records the first failure; later ones only add a line.
    fn fail(&mut self, err: R13Error) {
        self.lines.push(format!("FAILED: {err}"));
        if self.failure.is_none() {
            self.failure = Some(err);
        }
    }
}

/// Selects the dense-kernel parallelism: sequential for one thread, a
/// rayon pool otherwise.
pub fn configure_threads(threads: usize) -> Result<()> {
    if threads == 0 {
        return Err(R13Error::Config("--threads must be at least 1".into()));
    }
    let par = if threads == 1 { faer::Par::Seq } else { faer::Par::rayon(threads) };
    faer::set_global_parallelism(par);
    Ok(())
}

/// Runs one subcommand and writes its outputs and manifest.
///
/// Errors before any output exists (configuration, unreadable or invalid
/// models, failed solves) are returned directly; failed verifications are
/// carried in [`RunSummary::failure`] after everything is written.
pub fn run(cfg: &RunConfig) -> Result<RunSummary> {
    configure_threads(cfg.threads)?;
    let (problem, problem_doc) = load_problem(cfg.config.as_deref())?;
    let base = cfg.config.as_deref().and_then(Path::parent);
    let model_ref = cfg.model.clone().or_else(|| problem.model.clone());
    let mut inputs: Vec<InputDocument> = problem_doc.into_iter().collect();
    let models: Vec<MolecularModel> = match &model_ref {
        Some(r) => {
            let (m, doc) = load_model_reference(r, if cfg.model.is_some() { None } else { base })?;
            inputs.push(doc);
            vec![m]
        }
        None => Vec::new(),
    };

    let outcome = match cfg.command {
        Command::ValidateParams => validate_params(&catalog_if_empty(models, &mut inputs)?)?,
        Command::DeriveBcs => derive_bcs(&catalog_if_empty(models, &mut inputs)?)?,
        Command::Korn => korn(&problem, cfg.seed)?,
        Command::SolveSteady => solve_steady_cmd(single(&models, cfg.command)?, &problem)?,
        Command::SolveTransient => solve_transient_cmd(single(&models, cfg.command)?, &problem, cfg.seed)?,
        Command::Converge => converge(single(&models, cfg.command)?, &problem)?,
    };
    write_outputs(cfg, problem, &inputs, outcome)
}

fn single(models: &[MolecularModel], command: Command) -> Result<&MolecularModel> {
    models.first().ok_or_else(|| {
        R13Error::Config(format!(
            "`{}` needs a model: pass --model or set `model` in the problem document",
            command.name()
        ))
    })
}

/// Without an explicit model, parameter reports cover every bundled model.
fn catalog_if_empty(models: Vec<MolecularModel>, inputs: &mut Vec<InputDocument>) -> Result<Vec<MolecularModel>> {
    if !models.is_empty() {
        return Ok(models);
    }
    let mut out = Vec::new();
    for name in BUNDLED_NAMES {
        let text = bundled_source(name)?;
        inputs.push(InputDocument { reference: format!("{BUNDLED_PREFIX}{name}"), text: text.to_string() });
        out.push(load_model(text)?);
    }
    Ok(out)
}

fn write_outputs(cfg: &RunConfig, problem: ProblemConfig, inputs: &[InputDocument], outcome: Outcome) -> Result<RunSummary> {
    let dir = &cfg.out;
    std::fs::create_dir_all(dir).map_err(|e| R13Error::Io { path: dir.display().to_string(), source: e })?;
    let mut outputs = Vec::new();
    for (name, content) in &outcome.files {
        let path = dir.join(name);
        std::fs::write(&path, content).map_err(|e| R13Error::Io { path: path.display().to_string(), source: e })?;
        outputs.push(OutputRecord { file: name.clone(), bytes: content.len(), sha256: sha256_hex(content.as_bytes()) });
    }
    let inputs: Vec<InputRecord> = inputs
        .iter()
        .enumerate()
        .map(|(i, d)| InputRecord {
            role: if i == 0 && cfg.config.is_some() { "problem".into() } else { "model".into() },
            reference: d.reference.clone(),
            sha256: sha256_hex(d.text.as_bytes()),
        })
        .collect();
    let problem_json = serde_json::to_string(&problem)
        .map_err(|e| R13Error::InvalidArgument(format!("cannot serialize the problem: {e}")))?;
    let mut hasher = Sha256::new();
    hasher.update(cfg.command.name().as_bytes());
    hasher.update(cfg.seed.to_le_bytes());
    for r in &inputs {
        hasher.update(r.role.as_bytes());
        hasher.update(r.sha256.as_bytes());
    }
    hasher.update(problem_json.as_bytes());
    let inputs_hash = hasher.finalize().iter().map(|b| format!("{b:02x}")).collect();
    let (status, exit_code) = match &outcome.failure {
        None => ("ok".to_string(), 0),
        Some(e) => (e.to_string(), e.exit_code()),
    };
    let manifest = Manifest {
        tool: env!("CARGO_PKG_NAME").into(),
        version: env!("CARGO_PKG_VERSION").into(),
        command: cfg.command,
        seed: cfg.seed,
        threads: cfg.threads,
        inputs,
        inputs_hash,
        problem,
        outputs,
        status,
        exit_code,
    };
    let text = serde_json::to_string_pretty(&manifest)
        .map_err(|e| R13Error::InvalidArgument(format!("cannot serialize the manifest: {e}")))?;
    let path = dir.join(MANIFEST_FILE);
    std::fs::write(&path, text + "\n").map_err(|e| R13Error::Io { path: path.display().to_string(), source: e })?;
    Ok(RunSummary { out_dir: dir.clone(), manifest, lines: outcome.lines, failure: outcome.failure })
}

/// Discriminants of one model, compared with the tabulated row of the same
/// exponent when there is one.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ParameterEntry {
    /// Model name.
    pub model: String,
    /// Potential exponent.
    pub eta: Eta,
    /// Maxwell flag.
    pub maxwell: bool,
    /// Computed discriminants.
    pub constraints: ConstraintReport,
    /// Tabulated row compared against, if any.
    pub reference: Option<TabulatedRow>,
    /// `(z1, w1, z2, w2)` agree with the reference to four significant
    /// figures.
    pub matches_reference: Option<bool>,
    /// Names of the quantities that disagree with the reference.
    pub mismatched: Vec<String>,
}

/// Tabulated row for a model, matched by exponent (inverse-power models
/// only).
pub fn reference_row(model: &MolecularModel) -> Option<TabulatedRow> {
    if model.maxwell {
        return None;
    }
    TABULATED.iter().copied().find(|r| r.eta == model.eta)
}

/// Discriminant report of one model.
pub fn parameter_entry(model: &MolecularModel) -> ParameterEntry {
    let constraints = thermo_discriminants(model);
    let reference = reference_row(model);
    let mismatched: Vec<String> = reference
        .map(|r| {
            [
                ("z1", constraints.z1(), r.z1),
                ("w1", constraints.w1(), r.w1),
                ("z2", constraints.z2(), r.z2),
                ("w2", constraints.w2(), r.w2),
            ]
            .iter()
            .filter(|(_, a, b)| !agrees_to_significant_figures(*a, *b, SIGNIFICANT_FIGURES))
            .map(|(n, a, b)| format!("{n} = {a:.4e} (tabulated {b:.4e})"))
            .collect()
        })
        .unwrap_or_default();
    let matches_reference = reference.map(|_| mismatched.is_empty());
    ParameterEntry {
        model: model.name.clone(),
        eta: model.eta,
        maxwell: model.maxwell,
        constraints,
        reference,
        matches_reference,
        mismatched,
    }
}

fn validate_params(models: &[MolecularModel]) -> Result<Outcome> {
    let mut out = Outcome::new();
    let entries: Vec<ParameterEntry> = models.iter().map(parameter_entry).collect();
    let mut csv = String::from("model,eta,z1,w1,z2,w2,status1,status2,matches_reference\n");
    for e in &entries {
        let c = &e.constraints;
        csv.push_str(&format!(
            "{},{},{:.4e},{:.4},{:.4e},{:.4},{:?},{:?},{}\n",
            e.model,
            e.eta,
            c.z1(),
            c.w1(),
            c.z2(),
            c.w2(),
            c.pair1.status,
            c.pair2.status,
            e.matches_reference.map(|b| b.to_string()).unwrap_or_default()
        ));
        out.lines.push(format!(
            "{}: z1 = {:.4e}, w1 = {:.4}, z2 = {:.4e}, w2 = {:.4} ({:?}/{:?}){}",
            e.model,
            c.z1(),
            c.w1(),
            c.z2(),
            c.w2(),
            c.pair1.status,
            c.pair2.status,
            match e.matches_reference {
                Some(true) => ", matches the tabulated row",
                Some(false) => ", DIFFERS from the tabulated row: ",
                None => "",
            }
        ) + &e.mismatched.join(", "));
    }
    out.json("parameters.json", &entries)?;
    out.file("parameters.csv", csv);
    for e in &entries {
        let c = &e.constraints;
        if c.pair1.status == ConstraintStatus::Violated || c.pair2.status == ConstraintStatus::Violated {
            out.fail(R13Error::Inconsistent(format!("model `{}` violates a thermodynamic constraint", e.model)));
        }
        if e.matches_reference == Some(false) {
            out.fail(R13Error::Inconsistent(format!(
                "model `{}` does not reproduce the tabulated discriminants",
                e.model
            )));
        }
    }
    Ok(out)
}

fn derive_bcs(models: &[MolecularModel]) -> Result<Outcome> {
    let mut out = Outcome::new();
    let mut reports: Vec<CoefficientReport> = Vec::new();
    let mut csv = String::from("model");
    for i in 1..=8 {
        csv.push_str(&format!(",S{i}"));
    }
    csv.push_str(",R1,R2,R3,R4,T1,T2,T1_tilde,T2_tilde,psd_pass,consistent\n");
    for m in models {
        let rep = coefficient_report(m, PSD_TOL, CONSISTENCY_TOL)?;
        let c = &rep.coefficients;
        csv.push_str(&m.name);
        for v in c.s.iter().chain(&c.r).chain(&[c.t1, c.t2, c.t1_tilde, c.t2_tilde]) {
            csv.push_str(&format!(",{v:e}"));
        }
        csv.push_str(&format!(",{},{}\n", rep.psd.pass, rep.consistent));
        out.lines.push(format!(
            "{}: min S = {:.3e}, T gaps = ({:.1e}, {:.1e}), psd {}, consistent {}",
            m.name,
            c.s.iter().copied().fold(f64::INFINITY, f64::min),
            rep.duplicate_gaps[0],
            rep.duplicate_gaps[1],
            rep.psd.pass,
            rep.consistent
        ));
        reports.push(rep);
    }
    out.json("coefficients.json", &reports)?;
    out.file("coefficients.csv", csv);
    for r in &reports {
        if !r.consistent {
            out.fail(R13Error::Inconsistent(format!("wall coefficients of `{}` fail the audit", r.model)));
        }
    }
    Ok(out)
}

/// Korn certificates on a mesh sequence.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct KornSummary {
    /// One report per mesh.
    pub reports: Vec<KornReport>,
    /// Conformal-Killing sampling on the first mesh.
    pub ck: CkVanishingReport,
    /// `(max − min) / max` of the boundary-Korn constants.
    pub boundary_variation: f64,
    /// Every boundary-Korn constant is positive.
    pub boundary_positive: bool,
    /// Every computed stf-gradient kernel has dimension ten.
    pub kernel_dimension_ok: bool,
}

fn korn(problem: &ProblemConfig, seed: u64) -> Result<Outcome> {
    let mut out = Outcome::new();
    let kc = &problem.korn;
    let mut reports = Vec::new();
    for &n in &kc.subdivisions {
        let mesh = CubeMesh::new(n, kc.degree)?;
        let forms = assemble_cube_forms(&mesh)?;
        let opts = KornOptions { kernel: n <= kc.kernel_max_subdivisions, ..KornOptions::default() };
        let rep = korn_constants(&forms, &opts)?;
        out.lines.push(format!(
            "{n}^3 degree {}: boundary lambda_min = {:.6e}, classical lambda_min = {:.6e}, stf kernel dim = {}",
            kc.degree,
            rep.lambda_min_boundary,
            rep.lambda_min_classical,
            if opts.kernel { rep.stf_kernel_dim.to_string() } else { "-".into() }
        ));
        out.file(&format!("korn_tails_{n}.csv"), rep.tails_csv());
        reports.push((opts.kernel, rep));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let ck = ck_vanishing_check(&mut rng, kc.ck_samples, &CubeMesh::new(kc.subdivisions[0], kc.degree)?)?;
    let lambdas: Vec<f64> = reports.iter().map(|(_, r)| r.lambda_min_boundary).collect();
    let hi = lambdas.iter().copied().fold(f64::NEG_INFINITY, f64::max);
    let lo = lambdas.iter().copied().fold(f64::INFINITY, f64::min);
    let summary = KornSummary {
        boundary_variation: (hi - lo) / hi,
        boundary_positive: lambdas.iter().all(|&l| l > 0.0),
        kernel_dimension_ok: reports.iter().filter(|(k, _)| *k).all(|(_, r)| r.stf_kernel_dim == CK_DIM),
        reports: reports.into_iter().map(|(_, r)| r).collect(),
        ck,
    };
    out.lines.push(format!(
        "boundary constants vary by {:.1}% across meshes; conformal-Killing max |stf grad| = {:.2e}, min boundary norm = {:.3e}",
        100.0 * summary.boundary_variation,
        summary.ck.max_stf_gradient,
        summary.ck.min_boundary_norm
    ));
    out.json("korn.json", &summary)?;
    if !summary.boundary_positive {
        out.fail(R13Error::Solver("a boundary-Korn constant is not positive".into()));
    }
    if !summary.kernel_dimension_ok {
        out.fail(R13Error::Solver(format!("stf-gradient kernel dimension differs from {CK_DIM}")));
    }
    Ok(out)
}

/// Steady-solve report.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SteadyReport {
    /// Model name.
    pub model: String,
    /// Formulation used.
    pub formulation: Formulation,
    /// Knudsen number.
    pub kn: f64,
    /// Elements.
    pub elements: usize,
    /// Degree.
    pub degree: usize,
    /// Unknowns of the linear system.
    pub n_dofs: usize,
    /// Wall data.
    pub wall: WallData,
    /// Monitors of the solution.
    pub monitors: SolveMonitors,
    /// Energy identity.
    pub identity: EnergyIdentity,
    /// Zero-mean pressure multiplier.
    pub multiplier: Option<f64>,
}

fn solve_steady_cmd(model: &MolecularModel, problem: &ProblemConfig) -> Result<Outcome> {
    let mut out = Outcome::new();
    let coeffs = boundary_coefficients(model)?;
    let mesh = SlabMesh::new(problem.elements, problem.degree)?;
    let (asm, sol) = solve_steady(mesh, model, &coeffs, problem.kn, &problem.wall)?;
    let report = SteadyReport {
        model: model.name.clone(),
        formulation: asm.layout.formulation,
        kn: problem.kn,
        elements: problem.elements,
        degree: problem.degree,
        n_dofs: asm.n_dofs(),
        wall: problem.wall,
        monitors: sol.monitors,
        identity: sol.identity,
        multiplier: sol.state.multiplier(),
    };
    out.file("profile.csv", profile_csv(&profile(&sol.state, &asm, problem.profile_points)));
    out.json("steady.json", &report)?;
    let m = &sol.monitors;
    out.lines.push(format!(
        "{} ({:?}, {} dofs): residual {:.2e}, energy {:.6e}, W1 {:.6e}, I_bdry {:.6e}, identity defect {:.2e}",
        model.name, report.formulation, report.n_dofs, m.residual, m.energy, m.w1, m.i_bdry, sol.identity.defect
    ));
    if sol.identity.defect > ENERGY_IDENTITY_TOL * (1.0 + m.energy) {
        out.fail(R13Error::Solver(format!("energy identity defect {:e} exceeds tolerance", sol.identity.defect)));
    }
    Ok(out)
}

/// Transient-run report.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct TransientReport {
    /// Model name.
    pub model: String,
    /// Settings used.
    pub settings: crate::config::TransientConfig,
    /// Knudsen number.
    pub kn: f64,
    /// Elements.
    pub elements: usize,
    /// Degree.
    pub degree: usize,
    /// Initial energy.
    pub initial_energy: f64,
    /// Final energy.
    pub final_energy: f64,
    /// Largest energy increase between steps.
    pub max_energy_increase: f64,
    /// Allowed increase (`slack · E⁰`).
    pub energy_slack: f64,
    /// Largest `𝒲₁`.
    pub max_w1: f64,
    /// Smallest `I_bdry`.
    pub min_i_bdry: f64,
    /// Largest drift of `∫ρ`.
    pub max_mass_drift: f64,
}

fn solve_transient_cmd(model: &MolecularModel, problem: &ProblemConfig, seed: u64) -> Result<Outcome> {
    if !problem.wall.is_homogeneous() {
        return Err(R13Error::Config("transient runs need homogeneous wall data".into()));
    }
    let mut out = Outcome::new();
    let coeffs = boundary_coefficients(model)?;
    let mesh = SlabMesh::new(problem.elements, problem.degree)?;
    let asm = assemble_blocks(mesh, Formulation::Transient, model, &coeffs, problem.kn)?;
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let initial = random_state(&asm, &mut rng)?;
    let t = &problem.transient;
    let run = run_transient(&asm, &initial, t.dt, t.scheme, t.steps)?;
    let e0 = run.monitors[0].energy;
    let slack = match t.scheme {
        crate::slab::Scheme::ImplicitEuler => IMPLICIT_EULER_SLACK,
        crate::slab::Scheme::CrankNicolson => CRANK_NICOLSON_SLACK,
    };
    let report = TransientReport {
        model: model.name.clone(),
        settings: t.clone(),
        kn: problem.kn,
        elements: problem.elements,
        degree: problem.degree,
        initial_energy: e0,
        final_energy: run.monitors.last().map(|m| m.energy).unwrap_or(e0),
        max_energy_increase: run.max_energy_increase(),
        energy_slack: slack * e0,
        max_w1: run.max_w1(),
        min_i_bdry: run.min_i_bdry(),
        max_mass_drift: run.max_mass_drift(),
    };
    out.file("monitors.csv", run.monitors_csv());
    out.file("profile.csv", profile_csv(&profile(&run.final_state, &asm, problem.profile_points)));
    out.json("transient.json", &report)?;
    out.lines.push(format!(
        "{} {} steps of {:?}: energy {:.6e} -> {:.6e}, max increase {:.2e}, max W1 {:.2e}, min I_bdry {:.2e}, mass drift {:.2e}",
        model.name,
        t.steps,
        t.scheme,
        report.initial_energy,
        report.final_energy,
        report.max_energy_increase,
        report.max_w1,
        report.min_i_bdry,
        report.max_mass_drift
    ));
    if report.max_energy_increase > report.energy_slack {
        out.fail(R13Error::Solver("energy increased beyond the scheme slack".into()));
    }
    if report.max_w1 > W1_TOL || report.min_i_bdry < -IMPLICIT_EULER_SLACK * e0 {
        out.fail(R13Error::Solver("a dissipation monitor changed sign".into()));
    }
    if report.max_mass_drift > MASS_DRIFT_TOL {
        out.fail(R13Error::Solver(format!("mass drift {:e} exceeds {MASS_DRIFT_TOL:e}", report.max_mass_drift)));
    }
    Ok(out)
}

fn converge(model: &MolecularModel, problem: &ProblemConfig) -> Result<Outcome> {
    let mut out = Outcome::new();
    let coeffs = boundary_coefficients(model)?;
    let rep: ConvergenceReport =
        convergence_study(model, &coeffs, problem.kn, &problem.wall, problem.degree, &problem.converge.ladder)?;
    out.file("convergence.csv", rep.to_csv());
    out.json("convergence.json", &rep)?;
    for l in &rep.levels {
        out.lines.push(format!(
            "{:>5} elements: L2 error {:.4e}{}",
            l.n_elements,
            l.error,
            l.ratio.map(|r| format!(", ratio {r:.3}")).unwrap_or_default()
        ));
    }
    if !rep.monotone() {
        out.fail(R13Error::Solver("errors do not decrease monotonically".into()));
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::config::Command;

    fn cfg(command: Command, model: Option<&str>, config: Option<PathBuf>, out: &Path, seed: u64) -> RunConfig {
        RunConfig {
            command,
            model: model.map(String::from),
            config,
            out: out.to_path_buf(),
            seed,
            threads: 1,
        }
    }

    fn problem(dir: &Path, text: &str) -> PathBuf {
        let p = dir.join("problem.toml");
        std::fs::write(&p, text).unwrap();
        p
    }

    #[test]
    fn transient_runs_are_bit_identical() {
        let dir = tempfile::tempdir().unwrap();
        let p = problem(dir.path(), "elements = 4\n[transient]\nsteps = 5\n");
        let read = |sub: &str| {
            let out = dir.path().join(sub);
            let s = run(&cfg(Command::SolveTransient, Some("bundled:eta7"), Some(p.clone()), &out, 9)).unwrap();
            assert_eq!(s.exit_code(), 0);
            let mut files: Vec<(String, Vec<u8>)> = s
                .manifest
                .outputs
                .iter()
                .map(|o| (o.file.clone(), std::fs::read(out.join(&o.file)).unwrap()))
                .collect();
            files.push((MANIFEST_FILE.into(), std::fs::read(out.join(MANIFEST_FILE)).unwrap()));
            files
        };
        assert_eq!(read("a"), read("b"));
        let other = run(&cfg(Command::SolveTransient, Some("bundled:eta7"), Some(p), &dir.path().join("c"), 10)).unwrap();
        let first = std::fs::read(dir.path().join("a/monitors.csv")).unwrap();
        assert_ne!(first, std::fs::read(other.out_dir.join("monitors.csv")).unwrap());
    }

    #[test]
    fn manifest_records_inputs_and_outputs() {
        let dir = tempfile::tempdir().unwrap();
        let p = problem(dir.path(), "model = \"bundled:eta10\"\nelements = 4\n[wall]\ntheta = [0.2, 0.2]\n");
        let s = run(&cfg(Command::SolveSteady, None, Some(p), &dir.path().join("o"), 0)).unwrap();
        let m = &s.manifest;
        assert_eq!(m.command, Command::SolveSteady);
        assert_eq!(m.inputs.len(), 2);
        assert_eq!(m.inputs[0].role, "problem");
        assert_eq!(m.inputs[1].sha256, sha256_hex(bundled_source("eta10").unwrap().as_bytes()));
        let names: Vec<&str> = m.outputs.iter().map(|o| o.file.as_str()).collect();
        assert_eq!(names, ["profile.csv", "steady.json"]);
        let text = std::fs::read_to_string(s.out_dir.join(MANIFEST_FILE)).unwrap();
        let back: Manifest = serde_json::from_str(&text).unwrap();
        assert_eq!(&back, m);
        for o in &m.outputs {
            assert_eq!(o.sha256, sha256_hex(&std::fs::read(s.out_dir.join(&o.file)).unwrap()));
        }
    }

    #[test]
    fn equilibrium_profile_is_constant() {
        let dir = tempfile::tempdir().unwrap();
        let p = problem(dir.path(), "elements = 6\nprofile_points = 12\n[wall]\ntheta = [0.25, 0.25]\n");
        let s = run(&cfg(Command::SolveSteady, Some("bundled:maxwell"), Some(p), &dir.path().join("o"), 0)).unwrap();
        let csv = std::fs::read_to_string(s.out_dir.join("profile.csv")).unwrap();
        for line in csv.lines().skip(1) {
            let v: Vec<f64> = line.split(',').map(|x| x.parse().unwrap()).collect();
            assert!((v[2] - 0.25).abs() < 1e-10);
            assert!(v[3..].iter().filter(|x| x.abs() > 1e-10).count() <= 2, "{line}");
        }
    }

    #[test]
    fn failures_map_to_exit_codes() {
        let dir = tempfile::tempdir().unwrap();
        let out = dir.path().join("o");
        let no_model = run(&cfg(Command::SolveSteady, None, None, &out, 0)).unwrap_err();
        assert_eq!(no_model.exit_code(), 2);
        let bad = problem(dir.path(), "kn = 0.0\n");
        assert_eq!(run(&cfg(Command::Converge, Some("bundled:eta7"), Some(bad), &out, 0)).unwrap_err().exit_code(), 2);
        let mut threads = cfg(Command::Korn, None, None, &out, 0);
        threads.threads = 0;
        assert_eq!(run(&threads).unwrap_err().exit_code(), 2);

        // A model whose table breaks an audit is a data inconsistency.
        let mut m = crate::catalog::bundled_model("eta7").unwrap();
        m.m.scale_row(1, 1.5);
        let mpath = dir.path().join("broken.toml");
        std::fs::write(&mpath, m.to_toml_string()).unwrap();
        let s = run(&cfg(Command::DeriveBcs, Some(mpath.to_str().unwrap()), None, &out, 0));
        let code = match s {
            Ok(s) => s.exit_code(),
            Err(e) => e.exit_code(),
        };
        assert_eq!(code, 3);

        // Maxwell data with the non-strict constraints violated cannot use
        // the non-Maxwell solver.
        let mut nm = crate::catalog::bundled_model("maxwell").unwrap();
        nm.maxwell = false;
        let npath = dir.path().join("not_maxwell.toml");
        std::fs::write(&npath, nm.to_toml_string()).unwrap();
        let e = run(&cfg(Command::SolveSteady, Some(npath.to_str().unwrap()), None, &out, 0)).unwrap_err();
        assert_eq!(e.exit_code(), 3);
    }

    #[test]
    fn validate_params_reports_every_bundled_model() {
        let dir = tempfile::tempdir().unwrap();
        let s = run(&cfg(Command::ValidateParams, None, None, &dir.path().join("o"), 0)).unwrap();
        let entries: Vec<ParameterEntry> =
            serde_json::from_str(&std::fs::read_to_string(s.out_dir.join("parameters.json")).unwrap()).unwrap();
        assert_eq!(entries.len(), BUNDLED_NAMES.len());
        assert_eq!(entries.iter().filter(|e| e.reference.is_some()).count(), TABULATED.len());
        for e in entries.iter().filter(|e| e.eta != Eta::Finite(17.0) && e.reference.is_some()) {
            assert_eq!(e.matches_reference, Some(true), "{}", e.model);
        }
        assert_eq!(s.manifest.inputs.len(), BUNDLED_NAMES.len());
    }

    #[test]
    fn out_dir_precedence() {
        assert_eq!(resolve_out_dir(Some(PathBuf::from("x"))), PathBuf::from("x"));
    }
}
