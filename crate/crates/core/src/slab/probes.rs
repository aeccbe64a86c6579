//! Spectral probes of the discrete operators: coercivity of `𝒜₁` and the
//! inf-sup constant of the pressure coupling.

use faer::Mat;
use serde::{Deserialize, Serialize};

use crate::error::{R13Error, Result};
use crate::linalg::{generalized_eigenvalues, submatrix, whitened_singular_values};

use super::assembly::Assembly;
use super::forms::FormKind;
use super::mesh::{Comp, Formulation};

/// Eigenvalues below this (relative to the largest) count as near-null.
pub const NEAR_NULL_TOL: f64 = 1e-10;

/// Result of [`coercivity_probe`].
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CoercivityReport {
    /// Model name.
    pub model: String,
    /// Whether the model is Maxwell-specialized.
    pub maxwell: bool,
    /// Size of the discrete `T₁` space.
    pub n_dofs: usize,
    /// Smallest generalized eigenvalue of `sym(𝒜₁)` against the `H¹` Gram
    /// matrix.
    pub lambda_min: f64,
    /// Largest generalized eigenvalue.
    pub lambda_max: f64,
    /// The smallest few eigenvalues, ascending.
    pub lambda_tail: Vec<f64>,
    /// Number of eigenvalues below `NEAR_NULL_TOL · λ_max`.
    pub near_null: usize,
    /// `𝒜₁(S,S)` for an interior `θ` nodal bubble (zero wall trace).
    pub bubble_value: f64,
    /// `‖S‖²_{H¹}` of the same bubble.
    pub bubble_norm_sq: f64,
}

/// Smallest eigenvalues of the symmetric part of `𝒜₁` on the discrete `T₁`
/// space (every field except the pressure), normalized by the `H¹` Gram
/// matrix, plus the quadratic value of an interior temperature bubble.
///
/// Needs the non-Maxwell layout (continuous `θ`); Maxwell models may be
/// assembled on it for the contrast.
pub fn coercivity_probe(asm: &Assembly, tail_len: usize) -> Result<CoercivityReport> {
    if asm.layout.formulation != Formulation::NonMaxwell {
        return Err(R13Error::InvalidArgument("coercivity probe needs the non-Maxwell layout".into()));
    }
    let dofs = asm.layout.state_dofs();
    let a1 = asm.a1_matrix();
    let a = submatrix(&a1.to_dense(), &dofs, &dofs);
    let g = submatrix(&asm.h1.to_dense(), &dofs, &dofs);
    let ev = generalized_eigenvalues(&a, &g)?;
    let lambda_max = *ev.last().unwrap_or(&0.0);
    let near_null = ev.iter().filter(|v| v.abs() <= NEAR_NULL_TOL * lambda_max.abs()).count();

    let th = asm.layout.field_of(Comp::Theta).expect("theta field");
    let f = asm.layout.fields[th];
    let mut bubble = vec![0.0; asm.n_dofs()];
    bubble[f.offset + f.n / 2] = 1.0;
    let bubble_value = a1.bilinear(&bubble, &bubble);
    let bubble_norm_sq = asm.h1.bilinear(&bubble, &bubble);

    Ok(CoercivityReport {
        model: asm.model.name.clone(),
        maxwell: asm.model.maxwell,
        n_dofs: dofs.len(),
        lambda_min: ev[0],
        lambda_max,
        lambda_tail: ev.iter().take(tail_len).copied().collect(),
        near_null,
        bubble_value,
        bubble_norm_sq,
    })
}

/// Result of [`inf_sup_probe`].
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct InfSupReport {
    /// Number of pressure dofs.
    pub n_pressure: usize,
    /// Number of normal-velocity dofs.
    pub n_velocity: usize,
    /// Smallest singular value of `M_q^{−½} G M_v^{−½}` (the discrete
    /// inf-sup constant on zero-mean pressures).
    pub beta: f64,
    /// Largest singular value.
    pub sigma_max: f64,
}

/// Discrete inf-sup constant of `g(q, v) = (q, ∇·v)` between the pressure
/// space (`L²` norm) and the normal velocity space (`H¹` norm).
///
/// The normal velocity vanishes at both walls, so constants are the only
/// pressures without a partner; the rectangular coupling has one more row
/// than columns and every one of its singular values belongs to the
/// zero-mean complement.
pub fn inf_sup_probe(asm: &Assembly) -> Result<InfSupReport> {
    let l = &asm.layout;
    let pf = l
        .field_of(Comp::P)
        .ok_or_else(|| R13Error::InvalidArgument("inf-sup probe needs a steady layout".into()))?;
    let uf = l.field_of(Comp::U(0)).expect("normal velocity field");
    let p: Vec<usize> = (l.fields[pf].offset..l.fields[pf].offset + l.fields[pf].n).collect();
    let u: Vec<usize> = (l.fields[uf].offset..l.fields[uf].offset + l.fields[uf].n).collect();
    let g = submatrix(&asm.form(FormKind::G).to_dense(), &p, &u);
    let h1 = asm.h1.to_dense();
    let mq = submatrix(&h1, &p, &p);
    let mv = submatrix(&h1, &u, &u);
    let sv = whitened_singular_values(&g, &mq, &mv)?;
    let beta = sv.iter().copied().fold(f64::INFINITY, f64::min);
    let sigma_max = sv.iter().copied().fold(0.0, f64::max);
    Ok(InfSupReport { n_pressure: p.len(), n_velocity: u.len(), beta, sigma_max })
}

/// Dense `H¹` Gram matrix of the `T₁` space (exposed for examples).
pub fn t1_gram(asm: &Assembly) -> Mat<f64> {
    let dofs = asm.layout.state_dofs();
    submatrix(&asm.h1.to_dense(), &dofs, &dofs)
}
