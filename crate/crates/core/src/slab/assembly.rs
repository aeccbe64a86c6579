//! Assembly of the form matrices, load vectors and the composed operators.
//!
//! Every form `x` is assembled as a square matrix over the full layout with
//! `X[i][j] = x(φ_i, φ_j)`: `φ_i` fills the first argument, `φ_j` the second.
//! The composed operators are written with rows indexed by test functions
//! and columns by trial functions, so a form whose first argument is the
//! trial field enters transposed.

use std::collections::BTreeMap;

use crate::error::{R13Error, Result};
use crate::linalg::TripletBuilder;
use crate::model_params::MolecularModel;
use crate::onsager_coefficients::BoundaryCoeffs;
use crate::state_space::StateVector;

use super::forms::{
    boundary, loads, volume, FormKind, LoadValues, PointFields, VolumeCoefficients, WallCoefficients,
    WallTrace,
};
use super::mesh::{Comp, DofLayout, Formulation, Group, SlabMesh, WallData};

/// Tolerance below which a Maxwell wall coefficient counts as zero.
pub const MAXWELL_ZERO_TOL: f64 = 1e-10;

/// Point fields of a single basis function of component `comp` with value
/// `v` and derivative `d`.
pub fn unit_fields(comp: Comp, v: f64, d: f64, density_carries_pressure: bool) -> PointFields {
    let mut val = StateVector::ZERO;
    let mut der = StateVector::ZERO;
    let mut p = 0.0;
    match comp {
        Comp::Rho => {
            val.rho = v;
            der.rho = d;
            if density_carries_pressure {
                p = v;
            }
        }
        Comp::Theta => {
            val.theta = v;
            der.theta = d;
            if density_carries_pressure {
                p = v;
            }
        }
        Comp::U(i) => {
            val.u[i] = v;
            der.u[i] = d;
        }
        Comp::S(i) => {
            val.s_bar[i] = v;
            der.s_bar[i] = d;
        }
        Comp::Sigma(i) => {
            val.sigma_bar.c[i] = v;
            der.sigma_bar.c[i] = d;
        }
        Comp::P => p = v,
    }
    PointFields::new(val, der, p)
}

/// Whether a basis function of `comp` can be nonzero in the given argument
/// group of a form.
fn fills(group: Group, comp: Comp, layout: &DofLayout) -> bool {
    if group == Group::P && layout.density_carries_pressure() {
        return matches!(comp, Comp::Rho | Comp::Theta);
    }
    comp.group() == group
}

/// Basis functions active on one element at one point.
struct ElementPoint {
    dofs: Vec<usize>,
    comps: Vec<Comp>,
    fields: Vec<PointFields>,
}

fn element_point(layout: &DofLayout, e: usize, t: f64) -> ElementPoint {
    let local = layout.element_dofs(e);
    let mut cache: BTreeMap<u8, (Vec<f64>, Vec<f64>)> = BTreeMap::new();
    let carries = layout.density_carries_pressure();
    let mut out = ElementPoint { dofs: Vec::new(), comps: Vec::new(), fields: Vec::new() };
    for ld in local {
        let f = &layout.fields[ld.field];
        let key = f.kind as u8;
        let (v, d) = cache.entry(key).or_insert_with(|| layout.basis(f.kind, t));
        out.dofs.push(ld.dof);
        out.comps.push(f.comp);
        out.fields.push(unit_fields(f.comp, v[ld.local], d[ld.local], carries));
    }
    out
}

/// Matrices of every form plus the mass and `H¹` Gram matrices.
#[derive(Debug, Clone)]
pub struct Assembly {
    /// Degree-of-freedom layout.
    pub layout: DofLayout,
    /// Model the forms were assembled for.
    pub model: MolecularModel,
    /// Volume coefficients (including `Kn`).
    pub volume: VolumeCoefficients,
    /// Wall coefficients.
    pub wall: WallCoefficients,
    /// Form matrices (volume plus wall parts).
    pub forms: BTreeMap<FormKind, TripletBuilder>,
    /// Mass matrix of `⟨U, MU⟩` (state components only).
    pub mass: TripletBuilder,
    /// Unweighted `H¹` Gram matrix of all fields.
    pub h1: TripletBuilder,
    /// `∫φ_j` for pressure dofs (zero elsewhere).
    pub pressure_mean: Vec<f64>,
    /// `∫φ_j` for density dofs (zero elsewhere).
    pub density_mean: Vec<f64>,
    /// Wall traces of the basis functions touching each wall.
    pub wall_traces: [Vec<(usize, WallTrace)>; 2],
}

/// Assembles all forms of the layout's formulation.
///
/// For the Maxwell formulation the wall coefficients `R1, R4, S2, S4, T1,
/// T2` must vanish (they would take traces of `L²` fields); values below
/// [`MAXWELL_ZERO_TOL`] are set to exactly zero, larger ones are reported as
/// inconsistent data.
pub fn assemble_blocks(
    mesh: SlabMesh,
    formulation: Formulation,
    model: &MolecularModel,
    coeffs: &BoundaryCoeffs,
    kn: f64,
) -> Result<Assembly> {
    if !(kn.is_finite() && kn > 0.0) {
        return Err(R13Error::Config(format!("Knudsen number must be positive, got {kn}")));
    }
    model.validate()?;
    let mut wall = WallCoefficients::from_boundary(coeffs, model);
    if [wall.s.as_slice(), wall.r.as_slice(), &[wall.t1, wall.t2, wall.theta_load]]
        .concat()
        .iter()
        .any(|v| !v.is_finite())
    {
        return Err(R13Error::Inconsistent("wall coefficients are not finite".into()));
    }
    if formulation == Formulation::Maxwell {
        wall = maxwell_wall(wall, model)?;
    }
    let layout = DofLayout::new(mesh, formulation);
    let vc = VolumeCoefficients::new(model, kn);
    let n = layout.n_dofs;
    let mut forms: BTreeMap<FormKind, TripletBuilder> =
        FormKind::ALL.iter().map(|&k| (k, TripletBuilder::new(n, n))).collect();
    let mut mass = TripletBuilder::new(n, n);
    let mut h1 = TripletBuilder::new(n, n);
    let mut pressure_mean = vec![0.0; n];
    let mut density_mean = vec![0.0; n];
    let rule = mesh.reference_rule();
    let h = mesh.h();

    for e in 0..mesh.n_elements {
        for (&t, &w) in rule.nodes.iter().zip(&rule.weights) {
            let ep = element_point(&layout, e, t);
            let jw = w * h;
            let m = ep.dofs.len();
            for kind in FormKind::ALL {
                let (g1, g2) = kind.slots();
                let mat = forms.get_mut(&kind).expect("all forms present");
                for i in 0..m {
                    if !fills(g1, ep.comps[i], &layout) {
                        continue;
                    }
                    for j in 0..m {
                        if !fills(g2, ep.comps[j], &layout) {
                            continue;
                        }
                        mat.add(ep.dofs[i], ep.dofs[j], jw * volume(kind, &ep.fields[i], &ep.fields[j], &vc));
                    }
                }
            }
            for i in 0..m {
                for j in 0..m {
                    if ep.comps[i] == Comp::P || ep.comps[j] == Comp::P {
                        if ep.comps[i] == ep.comps[j] {
                            h1.add(ep.dofs[i], ep.dofs[j], jw * ep.fields[i].p * ep.fields[j].p);
                        }
                        continue;
                    }
                    let (a, b) = (&ep.fields[i], &ep.fields[j]);
                    mass.add(ep.dofs[i], ep.dofs[j], jw * crate::state_space::mass_inner(&a.val, &b.val));
                    h1.add(ep.dofs[i], ep.dofs[j], jw * super::forms::h1_density(a, b));
                }
                match ep.comps[i] {
                    Comp::P => pressure_mean[ep.dofs[i]] += jw * ep.fields[i].p,
                    Comp::Rho => density_mean[ep.dofs[i]] += jw * ep.fields[i].val.rho,
                    _ => {}
                }
            }
        }
    }

    let mut wall_traces: [Vec<(usize, WallTrace)>; 2] = [Vec::new(), Vec::new()];
    for (wi, traces) in wall_traces.iter_mut().enumerate() {
        let (e, t) = if wi == 0 { (0, 0.0) } else { (mesh.n_elements - 1, 1.0) };
        let frame = SlabMesh::wall_frame(wi);
        let ep = element_point(&layout, e, t);
        let tr: Vec<WallTrace> = ep.fields.iter().map(|f| WallTrace::new(f, &frame)).collect();
        let m = ep.dofs.len();
        for kind in FormKind::ALL {
            let (g1, g2) = kind.slots();
            let mat = forms.get_mut(&kind).expect("all forms present");
            for i in 0..m {
                if !fills(g1, ep.comps[i], &layout) {
                    continue;
                }
                for j in 0..m {
                    if fills(g2, ep.comps[j], &layout) {
                        mat.add(ep.dofs[i], ep.dofs[j], boundary(kind, &tr[i], &tr[j], &wall));
                    }
                }
            }
        }
        *traces = ep.dofs.iter().copied().zip(tr).collect();
    }

    Ok(Assembly {
        layout,
        model: model.clone(),
        volume: vc,
        wall,
        forms,
        mass,
        h1,
        pressure_mean,
        density_mean,
        wall_traces,
    })
}

fn maxwell_wall(mut w: WallCoefficients, model: &MolecularModel) -> Result<WallCoefficients> {
    if !model.maxwell {
        return Err(R13Error::Inconsistent(
            "the Maxwell formulation needs a Maxwell-specialized model".into(),
        ));
    }
    let scale = w.s.iter().chain(&w.r).map(|v| v.abs()).fold(1.0, f64::max);
    let named = [("R1", w.r[0]), ("R4", w.r[3]), ("S2", w.s[1]), ("S4", w.s[3]), ("T1", w.t1), ("T2", w.t2)];
    let bad: Vec<String> = named
        .iter()
        .filter(|(_, v)| v.abs() > MAXWELL_ZERO_TOL * scale)
        .map(|(n, v)| format!("{n} = {v:e}"))
        .collect();
    if !bad.is_empty() {
        return Err(R13Error::Inconsistent(format!(
            "Maxwell wall coefficients must vanish but {}",
            bad.join(", ")
        )));
    }
    w.r[0] = 0.0;
    w.r[3] = 0.0;
    w.s[1] = 0.0;
    w.s[3] = 0.0;
    w.t1 = 0.0;
    w.t2 = 0.0;
    w.theta_load = model.k[0];
    Ok(w)
}

/// Load vectors of the four functionals (one entry per dof).
#[derive(Debug, Clone, PartialEq)]
pub struct LoadVectors {
    /// `L1`.
    pub l1: Vec<f64>,
    /// `L2`.
    pub l2: Vec<f64>,
    /// `L3`.
    pub l3: Vec<f64>,
    /// `L4`.
    pub l4: Vec<f64>,
}

impl LoadVectors {
    /// `𝓕 = L1 + L2 + L3 + L4`.
    pub fn total(&self) -> Vec<f64> {
        (0..self.l1.len()).map(|i| self.l1[i] + self.l2[i] + self.l3[i] + self.l4[i]).collect()
    }
}

impl Assembly {
    /// Matrix of one form.
    pub fn form(&self, kind: FormKind) -> &TripletBuilder {
        &self.forms[&kind]
    }

    /// Number of unknowns.
    pub fn n_dofs(&self) -> usize {
        self.layout.n_dofs
    }

    /// Load vectors for the given wall data.
    pub fn load_vectors(&self, data: &WallData) -> LoadVectors {
        let n = self.n_dofs();
        let mut out = LoadVectors { l1: vec![0.0; n], l2: vec![0.0; n], l3: vec![0.0; n], l4: vec![0.0; n] };
        for (wi, traces) in self.wall_traces.iter().enumerate() {
            for (dof, tr) in traces {
                let LoadValues { l1, l2, l3, l4 } = loads(tr, wi, data, &self.wall, self.volume.k[5]);
                out.l1[*dof] += l1;
                out.l2[*dof] += l2;
                out.l3[*dof] += l3;
                out.l4[*dof] += l4;
            }
        }
        out
    }

    /// The `𝒜₁` operator (rows: test, columns: trial):
    ///
    /// `𝒜₁(S,R) = a(s̄,r̄) + j(r̄,u) + j(s̄,v) + f(u,v) − c(r̄,σ̄) − b(θ,r̄) + e(v,σ̄)
    /// + d(σ̄,τ̄) + z(γ,σ̄) + z(θ,τ̄) + h(θ,γ) + c(s̄,τ̄) + b(γ,s̄) − e(u,τ̄)`.
    pub fn a1_matrix(&self) -> TripletBuilder {
        use FormKind::*;
        let n = self.n_dofs();
        let mut k = TripletBuilder::new(n, n);
        let f = |x| self.form(x);
        k.extend_transposed(f(A), 1.0);
        k.extend_scaled(f(J), 1.0);
        k.extend_transposed(f(J), 1.0);
        k.extend_transposed(f(F), 1.0);
        k.extend_scaled(f(C), -1.0);
        k.extend_transposed(f(B), -1.0);
        k.extend_scaled(f(E), 1.0);
        k.extend_transposed(f(D), 1.0);
        k.extend_scaled(f(Z), 1.0);
        k.extend_transposed(f(Z), 1.0);
        k.extend_transposed(f(H), 1.0);
        k.extend_transposed(f(C), 1.0);
        k.extend_scaled(f(B), 1.0);
        k.extend_transposed(f(E), -1.0);
        k
    }

    /// The steady weak operator `ℬ` without the pressure multiplier:
    /// `𝒜₁(S,R) − g(p,v) − g(q,u)`.
    pub fn steady_operator(&self) -> TripletBuilder {
        let mut k = self.a1_matrix();
        k.extend_transposed(self.form(FormKind::G), -1.0);
        k.extend_scaled(self.form(FormKind::G), -1.0);
        k
    }

    /// The transient weak operator `L` with `UᵀLU = 𝒜₁(S,S)`:
    /// `𝒜₁ − (ρ+θ, ∇·v) + (∇·u, q) + (∇·u, γ)`.
    pub fn transient_operator(&self) -> Result<TripletBuilder> {
        if self.layout.formulation != Formulation::Transient {
            return Err(R13Error::InvalidArgument("transient operator needs the transient layout".into()));
        }
        let mut k = self.a1_matrix();
        k.extend_transposed(self.form(FormKind::G), -1.0);
        k.extend_scaled(self.form(FormKind::G), 1.0);
        Ok(k)
    }

    /// Global dofs of a field group.
    pub fn group_dofs(&self, group: Group) -> Vec<usize> {
        self.layout.group_dofs(group)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::model_params::{Eta, MTable, MolecularModel};
    use crate::onsager_coefficients::BoundaryCoeffs;

    fn unit_model() -> MolecularModel {
        MolecularModel::new("unit", Eta::Finite(7.0), [1.0; 11], 1.0, 1.0, MTable::zeros(), 1.0).unwrap()
    }

    fn coeffs() -> BoundaryCoeffs {
        BoundaryCoeffs::from_values([1.0, 2.0, 3.0, 4.0, 5.0, 6.0, 7.0, 8.0], [0.0; 4], 0.0, 0.0)
    }

    fn interpolate(asm: &Assembly, comp: Comp, f: impl Fn(f64) -> f64) -> Vec<f64> {
        let l = &asm.layout;
        let fi = l.field_of(comp).unwrap();
        let fs = l.fields[fi];
        let mut x = vec![0.0; l.n_dofs];
        for dof in fs.offset..fs.offset + fs.n {
            x[dof] = f(l.dof_position(fi, dof));
        }
        x
    }

    #[test]
    fn shear_velocity_f_form() {
        let mesh = SlabMesh::new(3, 2).unwrap();
        let asm = assemble_blocks(mesh, Formulation::NonMaxwell, &unit_model(), &coeffs(), 1.0).unwrap();
        let u = interpolate(&asm, Comp::U(1), |x| x);
        let f = asm.form(FormKind::F).bilinear(&u, &u);
        // volume 1/2, wall part S2 (0² + 1²)
        assert!((f - (0.5 + 2.0)).abs() < 1e-13, "{f}");
    }

    #[test]
    fn pressure_coupling_unit() {
        let mesh = SlabMesh::new(4, 2).unwrap();
        let asm = assemble_blocks(mesh, Formulation::NonMaxwell, &unit_model(), &coeffs(), 1.0).unwrap();
        let p = interpolate(&asm, Comp::P, |_| 1.0);
        let v = interpolate(&asm, Comp::U(0), |x| x * (1.0 - x));
        // ∫ (1 − 2x) = 0; with v = x(1-x) the coupling vanishes
        assert!(asm.form(FormKind::G).bilinear(&p, &v).abs() < 1e-14);
        let q = interpolate(&asm, Comp::P, |x| x);
        // ∫ x (1 − 2x) dx = 1/2 − 2/3
        let g = asm.form(FormKind::G).bilinear(&q, &v);
        assert!((g - (0.5 - 2.0 / 3.0)).abs() < 1e-14);
    }

    #[test]
    fn constant_heat_flux_wall_part() {
        let mesh = SlabMesh::new(2, 1).unwrap();
        let m = unit_model();
        let asm = assemble_blocks(mesh, Formulation::NonMaxwell, &m, &coeffs(), 1.0).unwrap();
        let bare = BoundaryCoeffs::from_values([0.0; 8], [0.0; 4], 0.0, 0.0);
        let vol = assemble_blocks(mesh, Formulation::NonMaxwell, &m, &bare, 1.0).unwrap();
        let mut s = vec![0.0; asm.n_dofs()];
        for (c, v) in [(Comp::S(0), 0.3), (Comp::S(1), -0.7), (Comp::S(2), 1.1)] {
            let x = interpolate(&asm, c, |_| v);
            for i in 0..s.len() {
                s[i] += x[i];
            }
        }
        let a = asm.form(FormKind::A).bilinear(&s, &s) - vol.form(FormKind::A).bilinear(&s, &s);
        // normal component weighted by S5, tangential ones by S1, at both walls
        let expect = 2.0 * (5.0 * 0.09 + 1.0 * (0.49 + 1.21));
        assert!((a - expect).abs() < 1e-13, "{a} vs {expect}");
    }

    #[test]
    fn transient_operator_energy_is_a1() {
        use rand::{Rng, SeedableRng};
        let mesh = SlabMesh::new(3, 2).unwrap();
        let asm = assemble_blocks(mesh, Formulation::Transient, &unit_model(), &coeffs(), 0.5).unwrap();
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(9);
        let u: Vec<f64> = (0..asm.n_dofs()).map(|_| rng.gen_range(-1.0..1.0)).collect();
        let l = asm.transient_operator().unwrap().bilinear(&u, &u);
        let a1 = asm.a1_matrix().bilinear(&u, &u);
        assert!((l - a1).abs() < 1e-12 * a1.abs());
    }
}
