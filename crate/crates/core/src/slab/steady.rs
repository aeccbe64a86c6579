//! Steady saddle-point solves for non-Maxwell and Maxwell molecules.

use serde::{Deserialize, Serialize};

use crate::error::{R13Error, Result};
use crate::linalg::{SparseLu, TripletBuilder};
use crate::model_params::{thermo_discriminants, MolecularModel};
use crate::onsager_coefficients::BoundaryCoeffs;

use super::assembly::{assemble_blocks, Assembly};
use super::mesh::{Formulation, Group, SlabMesh, WallData};
use super::state::{monitors, DiscreteState, SolveMonitors};

/// Relative residual required of every steady linear solve.
pub const STEADY_RESIDUAL_TOL: f64 = 1e-8;

/// Discrete energy identity `ℬ(U,U) − 𝓕(S) = I_bdry − 𝒲₁`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct EnergyIdentity {
    /// `ℬ(U,U)` from the assembled operator.
    pub bilinear: f64,
    /// `𝓕(S)` from the load vector.
    pub load: f64,
    /// `I_bdry − 𝒲₁` from the pointwise monitors.
    pub monitor_side: f64,
    /// `|ℬ(U,U) − 𝓕(S) − (I_bdry − 𝒲₁)|`.
    pub defect: f64,
}

/// Result of a steady solve.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SteadySolution {
    /// Discrete solution.
    pub state: DiscreteState,
    /// Monitors.
    pub monitors: SolveMonitors,
    /// Energy identity check.
    pub identity: EnergyIdentity,
}

/// Adds the zero-mean pressure multiplier row and column.
fn add_multiplier(k: &mut TripletBuilder, asm: &Assembly, col_sign: f64) {
    let m = asm.layout.multiplier.expect("steady layouts carry a multiplier");
    for (j, &w) in asm.pressure_mean.iter().enumerate() {
        if w != 0.0 {
            k.add(m, j, w);
            k.add(j, m, col_sign * w);
        }
    }
}

/// Negates the rows of the given groups (and the multiplier row entries
/// are left untouched).
fn negate_rows(k: &TripletBuilder, asm: &Assembly, groups: &[Group]) -> TripletBuilder {
    let mut flip = vec![false; asm.n_dofs()];
    for g in groups {
        for d in asm.group_dofs(*g) {
            flip[d] = true;
        }
    }
    let mut out = TripletBuilder::new(k.nrows(), k.ncols());
    for &(r, c, v) in k.entries() {
        out.add(r, c, if flip[r] { -v } else { v });
    }
    out
}

fn finish(asm: &Assembly, wall: &WallData, x: Vec<f64>, residual: f64) -> SteadySolution {
    let state = DiscreteState { layout: asm.layout.clone(), coeffs: x };
    let mut u = state.coeffs.clone();
    if let Some(m) = asm.layout.multiplier {
        u[m] = 0.0;
    }
    let bilinear = asm.steady_operator().bilinear(&u, &u);
    let load: f64 = asm.load_vectors(wall).total().iter().zip(&u).map(|(a, b)| a * b).sum();
    let mon = monitors(&state, asm, wall, residual);
    let monitor_side = mon.i_bdry - mon.w1;
    let identity = EnergyIdentity {
        bilinear,
        load,
        monitor_side,
        defect: (bilinear - load - monitor_side).abs(),
    };
    SteadySolution { state, monitors: mon, identity }
}

/// Solves the non-Maxwell saddle-point problem
/// `𝒜₁(S,R) + ℬ₁(R,p) = 𝓕₁(R)`, `ℬ₁(S,q) = 0` with `ℬ₁(S,q) = −g(q,u)` and
/// `𝓕₁ = L1 + L2 + L3 + L4`, plus the zero-mean pressure multiplier.
///
/// Requires strict thermodynamic constraints (coercivity of `𝒜₁`).
pub fn solve_steady_nonmaxwell(asm: &Assembly, wall: &WallData) -> Result<SteadySolution> {
    if asm.layout.formulation != Formulation::NonMaxwell {
        return Err(R13Error::InvalidArgument("non-Maxwell solve needs the non-Maxwell layout".into()));
    }
    wall.validate()?;
    let rep = thermo_discriminants(&asm.model);
    if !rep.all_strict() {
        return Err(R13Error::Inconsistent(format!(
            "model `{}` does not satisfy the strict constraints (z1 = {:e}, z2 = {:e}); use the Maxwell formulation",
            asm.model.name,
            rep.z1(),
            rep.z2()
        )));
    }
    let mut k = asm.steady_operator();
    add_multiplier(&mut k, asm, 1.0);
    let rhs = asm.load_vectors(wall).total();
    let lu = SparseLu::new(&k)?;
    let out = lu.solve(&rhs, STEADY_RESIDUAL_TOL)?;
    Ok(finish(asm, wall, out.x, out.relative_residual))
}

/// Solves the Maxwell grouped problem `𝒜₂(S,R) + ℬ₂(R,W) = 𝓕₂(R)`,
/// `ℬ₂(S,V) = 0` with `S = (σ, s, p)`, `W = (u, θ)`, `𝓕₂ = L1 + L3`.
///
/// The operator equals the non-Maxwell one with the `v`, `γ` and `q` rows
/// negated, which makes the block structure `[[𝒜₂, ℬ₂ᵀ], [ℬ₂, 0]]`.
pub fn solve_steady_maxwell(asm: &Assembly, wall: &WallData) -> Result<SteadySolution> {
    if asm.layout.formulation != Formulation::Maxwell {
        return Err(R13Error::InvalidArgument("Maxwell solve needs the Maxwell layout".into()));
    }
    wall.validate()?;
    let base = asm.steady_operator();
    let mut k = negate_rows(&base, asm, &[Group::U, Group::Theta, Group::P]);
    add_multiplier(&mut k, asm, -1.0);
    let loads = asm.load_vectors(wall);
    let rhs: Vec<f64> = (0..asm.n_dofs()).map(|i| loads.l1[i] + loads.l3[i]).collect();
    let lu = SparseLu::new(&k)?;
    let out = lu.solve(&rhs, STEADY_RESIDUAL_TOL)?;
    Ok(finish(asm, wall, out.x, out.relative_residual))
}

/// Assembles and solves with the formulation matching the model.
pub fn solve_steady(
    mesh: SlabMesh,
    model: &MolecularModel,
    coeffs: &BoundaryCoeffs,
    kn: f64,
    wall: &WallData,
) -> Result<(Assembly, SteadySolution)> {
    let formulation = if model.maxwell { Formulation::Maxwell } else { Formulation::NonMaxwell };
    let asm = assemble_blocks(mesh, formulation, model, coeffs, kn)?;
    let sol = match formulation {
        Formulation::Maxwell => solve_steady_maxwell(&asm, wall)?,
        _ => solve_steady_nonmaxwell(&asm, wall)?,
    };
    Ok((asm, sol))
}
