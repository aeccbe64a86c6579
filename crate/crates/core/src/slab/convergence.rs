//! Self-convergence studies against a refined reference solution.

use serde::{Deserialize, Serialize};

use crate::error::{R13Error, Result};
use crate::model_params::MolecularModel;
use crate::onsager_coefficients::BoundaryCoeffs;
use crate::quadrature::gauss_legendre_on;
use crate::state_space::{STATE_COMPONENT_NAMES, STATE_DIM};

use super::mesh::{SlabMesh, WallData};
use super::state::DiscreteState;
use super::steady::solve_steady;

/// Refinement factor of the reference solution relative to the finest
/// ladder level.
pub const REFERENCE_FACTOR: usize = 4;

/// One mesh of the ladder.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ConvergenceLevel {
    /// Number of elements.
    pub n_elements: usize,
    /// Total `L²` error over all state components and the pressure.
    pub error: f64,
    /// Per-component `L²` errors (state components, then `p`).
    pub component_errors: Vec<f64>,
    /// `error(previous level) / error(this level)`.
    pub ratio: Option<f64>,
    /// Observed order `log(ratio) / log(refinement)`.
    pub rate: Option<f64>,
    /// Relative residual of the solve.
    pub residual: f64,
}

/// Error table of a study.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ConvergenceReport {
    /// Element degree.
    pub degree: usize,
    /// Elements of the reference mesh.
    pub reference_elements: usize,
    /// `L²` norm of the reference solution (same components).
    pub reference_norm: f64,
    /// Ladder levels, coarse to fine.
    pub levels: Vec<ConvergenceLevel>,
}

impl ConvergenceReport {
    /// Errors strictly decrease along the ladder.
    pub fn monotone(&self) -> bool {
        self.levels.windows(2).all(|w| w[1].error < w[0].error)
    }

    /// Smallest consecutive error ratio.
    pub fn min_ratio(&self) -> Option<f64> {
        self.levels.iter().filter_map(|l| l.ratio).reduce(f64::min)
    }

    /// Table as CSV text.
    pub fn to_csv(&self) -> String {
        let mut out = String::from("n_elements,error,ratio,rate,residual");
        for name in STATE_COMPONENT_NAMES {
            out.push_str(&format!(",err_{name}"));
        }
        out.push_str(",err_p\n");
        for l in &self.levels {
            let opt = |v: Option<f64>| v.map(|x| format!("{x:e}")).unwrap_or_default();
            out.push_str(&format!(
                "{},{:e},{},{},{:e}",
                l.n_elements,
                l.error,
                opt(l.ratio),
                opt(l.rate),
                l.residual
            ));
            for e in &l.component_errors {
                out.push_str(&format!(",{e:e}"));
            }
            out.push('\n');
        }
        out
    }
}

fn components(pf: &super::forms::PointFields) -> [f64; STATE_DIM + 1] {
    let mut c = [0.0; STATE_DIM + 1];
    c[..STATE_DIM].copy_from_slice(&pf.val.to_array());
    c[STATE_DIM] = pf.p;
    c
}

/// Per-component `L²` differences `a − b`, integrated on the finer mesh of
/// the two with a rule exact for the product of two piecewise polynomials.
pub fn l2_difference(a: &DiscreteState, b: &DiscreteState) -> Vec<f64> {
    let fine = if a.mesh().n_elements >= b.mesh().n_elements { a.mesh() } else { b.mesh() };
    let rule = gauss_legendre_on(fine.degree + 2, 0.0, 1.0).expect("positive point count");
    let mut acc = vec![0.0; STATE_DIM + 1];
    for e in 0..fine.n_elements {
        for (&t, &w) in rule.nodes.iter().zip(&rule.weights) {
            let x = fine.element_start(e) + t * fine.h();
            let ca = components(&a.fields_at_x(x));
            let cb = components(&b.fields_at_x(x));
            for i in 0..acc.len() {
                acc[i] += w * fine.h() * (ca[i] - cb[i]).powi(2);
            }
        }
    }
    acc.into_iter().map(f64::sqrt).collect()
}

/// Solves the problem on every ladder mesh and on a reference mesh with
/// `REFERENCE_FACTOR` times the finest element count, and tabulates the
/// `L²` errors and observed rates.
pub fn convergence_study(
    model: &MolecularModel,
    coeffs: &BoundaryCoeffs,
    kn: f64,
    wall: &WallData,
    degree: usize,
    ladder: &[usize],
) -> Result<ConvergenceReport> {
    if ladder.len() < 3 {
        return Err(R13Error::Config("a convergence study needs at least three meshes".into()));
    }
    if ladder.windows(2).any(|w| w[1] <= w[0]) {
        return Err(R13Error::Config("mesh ladder must be strictly increasing".into()));
    }
    let finest = *ladder.last().expect("nonempty");
    let ref_mesh = SlabMesh::new(finest * REFERENCE_FACTOR, degree)?;
    let (_, reference) = solve_steady(ref_mesh, model, coeffs, kn, wall)?;
    let zero = DiscreteState::zeros(reference.state.layout.clone());
    let reference_norm = l2_difference(&reference.state, &zero).iter().map(|v| v * v).sum::<f64>().sqrt();
    let mut levels: Vec<ConvergenceLevel> = Vec::new();
    for &n in ladder {
        let (_, sol) = solve_steady(SlabMesh::new(n, degree)?, model, coeffs, kn, wall)?;
        let component_errors = l2_difference(&sol.state, &reference.state);
        let error = component_errors.iter().map(|v| v * v).sum::<f64>().sqrt();
        let (ratio, rate) = match levels.last() {
            Some(prev) if error > 0.0 => {
                let r = prev.error / error;
                (Some(r), Some(r.ln() / (n as f64 / prev.n_elements as f64).ln()))
            }
            _ => (None, None),
        };
        levels.push(ConvergenceLevel {
            n_elements: n,
            error,
            component_errors,
            ratio,
            rate,
            residual: sol.monitors.residual,
        });
    }
    Ok(ConvergenceReport { degree, reference_elements: ref_mesh.n_elements, reference_norm, levels })
}
