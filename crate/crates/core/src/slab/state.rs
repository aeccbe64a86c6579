//! Discrete states, pointwise evaluation and the energy/entropy monitors.

use serde::{Deserialize, Serialize};

use crate::state_space::{entropy_density, mass_inner, physical_fluxes, PhysicalFluxes, StateVector};

use super::assembly::{unit_fields, Assembly};
use super::forms::{boundary_quadratic, dissipation_density, loads, raw_wall_fluxes, PointFields, WallTrace};
use super::mesh::{Comp, DofLayout, Formulation, SlabMesh, WallData};

/// Nodal coefficients of every field of a layout.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct DiscreteState {
    /// Layout the coefficients refer to.
    pub layout: DofLayout,
    /// Coefficients (`layout.n_dofs` entries; the multiplier, when present,
    /// is the last one).
    pub coeffs: Vec<f64>,
}

impl DiscreteState {
    /// Zero state.
    pub fn zeros(layout: DofLayout) -> Self {
        let n = layout.n_dofs;
        DiscreteState { layout, coeffs: vec![0.0; n] }
    }

    /// Zero-mean pressure multiplier, when present.
    pub fn multiplier(&self) -> Option<f64> {
        self.layout.multiplier.map(|i| self.coeffs[i])
    }

    /// Raw field values and derivatives at `(element, t)`; the pressure slot
    /// carries `p` for steady layouts and `ρ + θ` for the transient one.
    pub fn raw_at(&self, e: usize, t: f64) -> PointFields {
        let l = &self.layout;
        let carries = l.density_carries_pressure();
        let mut val = StateVector::ZERO;
        let mut der = StateVector::ZERO;
        let mut p = 0.0;
        let mut cache: Vec<Option<(Vec<f64>, Vec<f64>)>> = vec![None, None, None];
        for ld in l.element_dofs(e) {
            let f = &l.fields[ld.field];
            let slot = f.kind as usize;
            if cache[slot].is_none() {
                cache[slot] = Some(l.basis(f.kind, t));
            }
            let (bv, bd) = cache[slot].as_ref().expect("filled above");
            let c = self.coeffs[ld.dof];
            let unit = unit_fields(f.comp, c * bv[ld.local], c * bd[ld.local], carries);
            val = val.axpby(1.0, &unit.val, 1.0);
            der = der.axpby(1.0, &unit.der, 1.0);
            p += unit.p;
        }
        PointFields::new(val, der, p)
    }

    /// Point fields with the density filled in: for steady layouts
    /// `ρ = p − θ`.
    pub fn fields_at(&self, e: usize, t: f64) -> PointFields {
        let mut pf = self.raw_at(e, t);
        if self.layout.formulation != Formulation::Transient {
            pf.val.rho = pf.p - pf.val.theta;
            pf.der.rho = 0.0;
        }
        pf
    }

    /// Point fields at position `x ∈ [0, 1]`.
    pub fn fields_at_x(&self, x: f64) -> PointFields {
        let (e, t) = self.layout.mesh.locate(x);
        self.fields_at(e, t)
    }

    /// Coefficient vector restricted to one component (nodal values).
    pub fn component(&self, comp: Comp) -> Option<&[f64]> {
        let fi = self.layout.field_of(comp)?;
        let f = &self.layout.fields[fi];
        Some(&self.coeffs[f.offset..f.offset + f.n])
    }

    /// Mesh.
    pub fn mesh(&self) -> SlabMesh {
        self.layout.mesh
    }

    /// `∫ g(fields) dx` by the element rule, which is exact for products of
    /// two discrete fields.
    pub fn integrate(&self, g: impl Fn(&PointFields) -> f64) -> f64 {
        let mesh = self.layout.mesh;
        let rule = mesh.reference_rule();
        let mut s = 0.0;
        for e in 0..mesh.n_elements {
            for (&t, &w) in rule.nodes.iter().zip(&rule.weights) {
                s += w * mesh.h() * g(&self.fields_at(e, t));
            }
        }
        s
    }

    /// Fields at the two walls.
    pub fn wall_fields(&self) -> [PointFields; 2] {
        let n = self.layout.mesh.n_elements;
        [self.fields_at(0, 0.0), self.fields_at(n - 1, 1.0)]
    }
}

/// Energy, dissipation and entropy diagnostics of a state.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SolveMonitors {
    /// `E = ½∫⟨U, MU⟩`.
    pub energy: f64,
    /// Bulk dissipation `𝒲₁ ≤ 0`.
    pub w1: f64,
    /// Boundary production `I_bdry = 𝒜_bdry(S,S) − 𝓕(S)`.
    pub i_bdry: f64,
    /// `𝒜_bdry(S,S)`.
    pub a_bdry: f64,
    /// Load functional on the state, `𝓕(S)`.
    pub load: f64,
    /// Unsubstituted `F1 − F2` from traces and normal derivatives.
    pub i_bdry_raw: f64,
    /// `∫H` with `H₀ = 0`.
    pub entropy: f64,
    /// `∫ρ`.
    pub mass: f64,
    /// `∫p` (steady layouts; `∫(ρ+θ)` otherwise).
    pub pressure_mean: f64,
    /// `‖p‖_{L²}` (same convention).
    pub pressure_norm: f64,
    /// Relative residual of the linear solve that produced the state.
    pub residual: f64,
}

/// Evaluates every monitor; `wall` is the data of the solve (homogeneous
/// for transient runs), `residual` the solve residual to record.
pub fn monitors(state: &DiscreteState, asm: &Assembly, wall: &WallData, residual: f64) -> SolveMonitors {
    let vc = &asm.volume;
    let energy = 0.5 * state.integrate(|f| mass_inner(&f.val, &f.val));
    let w1 = -state.integrate(|f| dissipation_density(f, vc));
    let entropy = state.integrate(|f| entropy_density(&f.val, 0.0));
    let mass = state.integrate(|f| f.val.rho);
    let pressure_mean = state.integrate(|f| f.p);
    let pressure_norm = state.integrate(|f| f.p * f.p).sqrt();
    let mut a_bdry = 0.0;
    let mut load = 0.0;
    let mut raw = 0.0;
    for (wi, pf) in state.wall_fields().iter().enumerate() {
        let frame = SlabMesh::wall_frame(wi);
        let tr = WallTrace::new(pf, &frame);
        a_bdry += boundary_quadratic(&tr, &asm.wall);
        let l = loads(&tr, wi, wall, &asm.wall, vc.k[5]);
        load += l.l1 + l.l2 + l.l3 + l.l4;
        let (f1, f2) = raw_wall_fluxes(pf, &frame, vc);
        raw += f1 - f2;
    }
    SolveMonitors {
        energy,
        w1,
        i_bdry: a_bdry - load,
        a_bdry,
        load,
        i_bdry_raw: raw,
        entropy,
        mass,
        pressure_mean,
        pressure_norm,
        residual,
    }
}

/// One row of a profile table.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ProfileRow {
    /// Position.
    pub x: f64,
    /// State `(ρ, θ, u, s̄, σ̄)`.
    pub state: StateVector,
    /// Pressure.
    pub p: f64,
    /// Physical stress and heat flux.
    pub fluxes: PhysicalFluxes,
}

/// Samples the state at `n_points + 1` equispaced positions (interior
/// interfaces are evaluated from the right element).
pub fn profile(state: &DiscreteState, asm: &Assembly, n_points: usize) -> Vec<ProfileRow> {
    let n = n_points.max(1);
    (0..=n)
        .map(|i| {
            let x = i as f64 / n as f64;
            let pf = state.fields_at_x(x);
            ProfileRow {
                x,
                state: pf.val,
                p: pf.p,
                fluxes: physical_fluxes(&pf.val, &pf.der, &asm.model, asm.volume.kn),
            }
        })
        .collect()
}

/// CSV header matching [`profile_csv`]: position, the state components,
/// the pressure, then the physical stress and heat flux.
pub fn profile_header() -> String {
    let mut cols = vec!["x".to_string()];
    cols.extend(crate::state_space::STATE_COMPONENT_NAMES.iter().map(|s| s.to_string()));
    cols.push("p".into());
    cols.extend(["stress11", "stress22", "stress12", "stress13", "stress23"].map(String::from));
    cols.extend(["heat_flux1", "heat_flux2", "heat_flux3"].map(String::from));
    cols.join(",")
}

/// Profile table as CSV text (full round-trip precision).
pub fn profile_csv(rows: &[ProfileRow]) -> String {
    let mut out = profile_header();
    out.push('\n');
    for r in rows {
        let mut v = vec![r.x];
        v.extend(r.state.to_array());
        v.push(r.p);
        v.extend(r.fluxes.sigma.c);
        v.extend(r.fluxes.s);
        out.push_str(&v.iter().map(|x| format!("{x:e}")).collect::<Vec<_>>().join(","));
        out.push('\n');
    }
    out
}
