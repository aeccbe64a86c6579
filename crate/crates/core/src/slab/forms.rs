//! Pointwise evaluation of the weak-form integrands.
//!
//! Every form is written in its three-dimensional definition. A field (or a
//! single basis function) is turned into [`PointFields`] at a point by the
//! slab gradient operators of [`crate::tensor_algebra`]; at the walls the
//! frame components are taken with the outward wall frame. No component
//! algebra is reduced by hand.

use serde::{Deserialize, Serialize};

use crate::model_params::MolecularModel;
use crate::onsager_coefficients::BoundaryCoeffs;
use crate::state_space::{mass_inner, StateVector};
use crate::tensor_algebra::{
    dot3, slab_grad_stf2, slab_grad_vec, tensor3_dot, tensor_components, vector_components, Frame,
    StfTensor3, TensorComponents, Tensor3, VectorComponents,
};

use super::mesh::{Group, WallData};

/// Field values, derivatives and derived differential quantities at a point.
#[derive(Debug, Clone, Copy)]
pub struct PointFields {
    /// Values of `(ρ, θ, u, s̄, σ̄)`.
    pub val: StateVector,
    /// `x`-derivatives of the same.
    pub der: StateVector,
    /// Pressure `p`.
    pub p: f64,
    /// `(∇u)_stf`.
    pub stf_du: StfTensor3,
    /// `∇·u`.
    pub div_u: f64,
    /// `(∇s̄)_stf`.
    pub stf_ds: StfTensor3,
    /// `∇·s̄`.
    pub div_s: f64,
    /// `(∇σ̄)_stf`.
    pub stf_dsigma: Tensor3,
    /// `∇·σ̄`.
    pub div_sigma: [f64; 3],
    /// `∇θ`.
    pub grad_theta: [f64; 3],
}

impl PointFields {
    /// Derived quantities from values and `x`-derivatives.
    pub fn new(val: StateVector, der: StateVector, p: f64) -> Self {
        let (gu, stf_du) = slab_grad_vec(&val.u, &der.u);
        let (gs, stf_ds) = slab_grad_vec(&val.s_bar, &der.s_bar);
        let gsig = slab_grad_stf2(&val.sigma_bar, &der.sigma_bar);
        PointFields {
            val,
            der,
            p,
            stf_du,
            div_u: gu[0][0] + gu[1][1] + gu[2][2],
            stf_ds,
            div_s: gs[0][0] + gs[1][1] + gs[2][2],
            stf_dsigma: gsig.stf,
            div_sigma: gsig.div,
            grad_theta: [der.theta, 0.0, 0.0],
        }
    }
}

/// Frame components of the traces at a wall.
#[derive(Debug, Clone, Copy)]
pub struct WallTrace {
    /// `θ`.
    pub theta: f64,
    /// `u` in the wall frame.
    pub u: VectorComponents,
    /// `s̄` in the wall frame.
    pub s: VectorComponents,
    /// `σ̄` in the wall frame.
    pub sigma: TensorComponents,
}

impl WallTrace {
    /// Traces of `pf` in `frame`.
    pub fn new(pf: &PointFields, frame: &Frame) -> Self {
        WallTrace {
            theta: pf.val.theta,
            u: vector_components(&pf.val.u, frame),
            s: vector_components(&pf.val.s_bar, frame),
            sigma: tensor_components(&pf.val.sigma_bar, frame),
        }
    }
}

/// The ten bilinear forms of the steady weak formulation.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub enum FormKind {
    /// `a(s̄, r̄)`.
    A,
    /// `b(θ, r̄)`.
    B,
    /// `c(r̄, σ̄)`.
    C,
    /// `d(σ̄, τ̄)`.
    D,
    /// `e(v, σ̄)`.
    E,
    /// `f(u, v)`.
    F,
    /// `g(p, v)`.
    G,
    /// `j(s̄, v)`.
    J,
    /// `z(θ, τ̄)`.
    Z,
    /// `h(θ, γ)`.
    H,
}

impl FormKind {
    /// All forms.
    pub const ALL: [FormKind; 10] = [
        FormKind::A,
        FormKind::B,
        FormKind::C,
        FormKind::D,
        FormKind::E,
        FormKind::F,
        FormKind::G,
        FormKind::J,
        FormKind::Z,
        FormKind::H,
    ];

    /// Field groups of the first and second argument.
    pub fn slots(&self) -> (Group, Group) {
        use Group::*;
        match self {
            FormKind::A => (S, S),
            FormKind::B => (Theta, S),
            FormKind::C => (S, Sigma),
            FormKind::D => (Sigma, Sigma),
            FormKind::E => (U, Sigma),
            FormKind::F => (U, U),
            FormKind::G => (P, U),
            FormKind::J => (S, U),
            FormKind::Z => (Theta, Sigma),
            FormKind::H => (Theta, Theta),
        }
    }

    /// Lower-case name.
    pub fn name(&self) -> &'static str {
        match self {
            FormKind::A => "a",
            FormKind::B => "b",
            FormKind::C => "c",
            FormKind::D => "d",
            FormKind::E => "e",
            FormKind::F => "f",
            FormKind::G => "g",
            FormKind::J => "j",
            FormKind::Z => "z",
            FormKind::H => "h",
        }
    }
}

/// Wall coefficients used by the forms and load functionals.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct WallCoefficients {
    /// `S1..S8`.
    pub s: [f64; 8],
    /// `R1..R4`.
    pub r: [f64; 4],
    /// `T1`.
    pub t1: f64,
    /// `T2`.
    pub t2: f64,
    /// `(2/5) C1 m11`, the temperature-jump load factor (equal to `k0 + R1`).
    pub theta_load: f64,
}

impl WallCoefficients {
    /// Extracts the coefficients the slab forms need.
    pub fn from_boundary(coeffs: &BoundaryCoeffs, model: &MolecularModel) -> Self {
        WallCoefficients {
            s: coeffs.s,
            r: coeffs.r,
            t1: coeffs.t1,
            t2: coeffs.t2,
            theta_load: coeffs.r[0] + model.k[0],
        }
    }

    /// `S_i` (1-based).
    pub fn si(&self, i: usize) -> f64 {
        self.s[i - 1]
    }

    /// `R_i` (1-based).
    pub fn ri(&self, i: usize) -> f64 {
        self.r[i - 1]
    }
}

/// Model parameters entering the volume integrands.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct VolumeCoefficients {
    /// `k0..k10`.
    pub k: [f64; 11],
    /// `l1`.
    pub l1: f64,
    /// `l2`.
    pub l2: f64,
    /// Knudsen number.
    pub kn: f64,
}

impl VolumeCoefficients {
    /// From a model and Knudsen number.
    pub fn new(model: &MolecularModel, kn: f64) -> Self {
        VolumeCoefficients { k: model.k, l1: model.l1, l2: model.l2, kn }
    }
}

fn vdot(a: &VectorComponents, b: &VectorComponents) -> f64 {
    a.t1 * b.t1 + a.t2 * b.t2
}

/// Volume integrand of `kind(x, y)` where `x` fills the first and `y` the
/// second argument.
pub fn volume(kind: FormKind, x: &PointFields, y: &PointFields, c: &VolumeCoefficients) -> f64 {
    let k = &c.k;
    let kn = c.kn;
    match kind {
        FormKind::A => {
            24.0 / 25.0 * k[7] * kn * x.stf_ds.dot(&y.stf_ds)
                + 0.8 * k[6] * kn * x.div_s * y.div_s
                + 4.0 * c.l1 / (15.0 * kn) * dot3(&x.val.s_bar, &y.val.s_bar)
        }
        FormKind::B => k[0] * x.val.theta * y.div_s,
        FormKind::C => -0.4 * k[8] * dot3(&x.val.s_bar, &y.div_sigma),
        FormKind::D => {
            k[9] * kn * tensor3_dot(&x.stf_dsigma, &y.stf_dsigma)
                + 0.5 * k[10] * kn * dot3(&x.div_sigma, &y.div_sigma)
                + c.l2 / (2.0 * kn) * x.val.sigma_bar.dot(&y.val.sigma_bar)
        }
        FormKind::E => k[5] * dot3(&x.val.u, &y.div_sigma),
        FormKind::F => k[3] * kn * x.stf_du.dot(&y.stf_du),
        FormKind::G => x.p * y.div_u,
        FormKind::J => k[4] * kn * x.stf_ds.dot(&y.stf_du),
        FormKind::Z => -1.5 * k[2] * kn * dot3(&x.grad_theta, &y.div_sigma),
        FormKind::H => 1.5 * k[1] * kn * dot3(&x.grad_theta, &y.grad_theta),
    }
}

/// Wall integrand of `kind(x, y)` from frame traces.
pub fn boundary(kind: FormKind, x: &WallTrace, y: &WallTrace, w: &WallCoefficients) -> f64 {
    match kind {
        FormKind::A => w.si(5) * x.s.n * y.s.n + w.si(1) * vdot(&x.s, &y.s),
        FormKind::B => w.ri(1) * x.theta * y.s.n,
        FormKind::C => {
            w.ri(2) * (x.s.t1 * y.sigma.nt1 + x.s.t2 * y.sigma.nt2) + w.ri(3) * x.s.n * y.sigma.nn
        }
        FormKind::D => {
            let (a, b) = (&x.sigma, &y.sigma);
            let tt = |s: &TensorComponents, i: usize| s.tt(i) + 0.5 * s.nn;
            w.si(3) * a.nn * b.nn
                + w.si(6) * (1..=2).map(|i| tt(a, i) * tt(b, i)).sum::<f64>()
                + w.si(7) * (a.nt1 * b.nt1 + a.nt2 * b.nt2)
                + w.si(8) * a.t1t2 * b.t1t2
        }
        FormKind::E => w.ri(4) * (y.sigma.nt1 * x.u.t1 + y.sigma.nt2 * x.u.t2),
        FormKind::F => w.si(2) * vdot(&x.u, &y.u),
        FormKind::G => 0.0,
        FormKind::J => w.t1 * vdot(&x.s, &y.u),
        FormKind::Z => w.t2 * x.theta * y.sigma.nn,
        FormKind::H => w.si(4) * x.theta * y.theta,
    }
}

/// The four load functionals at one wall, evaluated on a test trace.
#[derive(Debug, Clone, Copy, Default, PartialEq, Serialize, Deserialize)]
pub struct LoadValues {
    /// `L1(r̄) = −(2/5)C1 m11 θ^W r_n + T1 u^W_t·r_t`.
    pub l1: f64,
    /// `L2(γ) = S4 θ^W γ`.
    pub l2: f64,
    /// `L3(τ̄) = T2 θ^W τ_nn − (R4 + k5) u^W_t·τ_nt`.
    pub l3: f64,
    /// `L4(v) = S2 u^W_t·v_t`.
    pub l4: f64,
}

/// Load functionals at wall `wall` on the test trace `y`.
pub fn loads(y: &WallTrace, wall: usize, data: &WallData, w: &WallCoefficients, k5: f64) -> LoadValues {
    let th = data.theta[wall];
    let [ut1, ut2] = data.u_t[wall];
    LoadValues {
        l1: -w.theta_load * th * y.s.n + w.t1 * (ut1 * y.s.t1 + ut2 * y.s.t2),
        l2: w.si(4) * th * y.theta,
        l3: w.t2 * th * y.sigma.nn - (w.ri(4) + k5) * (ut1 * y.sigma.nt1 + ut2 * y.sigma.nt2),
        l4: w.si(2) * (ut1 * y.u.t1 + ut2 * y.u.t2),
    }
}

/// Negative of the pointwise bulk dissipation integrand, i.e. `−w₁` with
/// `𝒲₁ = ∫ w₁`:
///
/// `Kn[(3/2)k1|∇θ|² − 3k2 ∇θ·∇·σ̄ + ½k10|∇·σ̄|² + (4/5)k6|∇·s̄|²
/// + k3|(∇u)_stf|² + 2k4 (∇u)_stf:(∇s̄)_stf + (24/25)k7|(∇s̄)_stf|²
/// + k9|(∇σ̄)_stf|²] + (1/Kn)[(4/15)l1|s̄|² + ½l2|σ̄|²]`.
pub fn dissipation_density(x: &PointFields, c: &VolumeCoefficients) -> f64 {
    let k = &c.k;
    let kn = c.kn;
    let bulk = 1.5 * k[1] * dot3(&x.grad_theta, &x.grad_theta)
        - 3.0 * k[2] * dot3(&x.grad_theta, &x.div_sigma)
        + 0.5 * k[10] * dot3(&x.div_sigma, &x.div_sigma)
        + 0.8 * k[6] * x.div_s * x.div_s
        + k[3] * x.stf_du.norm_sq()
        + 2.0 * k[4] * x.stf_du.dot(&x.stf_ds)
        + 24.0 / 25.0 * k[7] * x.stf_ds.norm_sq()
        + k[9] * tensor3_dot(&x.stf_dsigma, &x.stf_dsigma);
    let relax = 4.0 / 15.0 * c.l1 * dot3(&x.val.s_bar, &x.val.s_bar) + 0.5 * c.l2 * x.val.sigma_bar.norm_sq();
    kn * bulk + relax / kn
}

/// Boundary quadratic form `𝒜_bdry(S, S)` at one wall:
///
/// `S1|s̄_t|² + S2|u_t|² + 2T1 s̄_t·u_t + S3σ̄_nn² + S4θ² + 2T2σ̄_nnθ
/// + S5 s̄_n² + S6 Σ_i(σ̄_titi + ½σ̄_nn)² + S7|σ̄_nt|² + S8σ̄_t1t2²`.
pub fn boundary_quadratic(x: &WallTrace, w: &WallCoefficients) -> f64 {
    let s = &x.sigma;
    let tt: f64 = (1..=2).map(|i| (s.tt(i) + 0.5 * s.nn).powi(2)).sum();
    w.si(1) * vdot(&x.s, &x.s)
        + w.si(2) * vdot(&x.u, &x.u)
        + 2.0 * w.t1 * vdot(&x.s, &x.u)
        + w.si(3) * s.nn * s.nn
        + w.si(4) * x.theta * x.theta
        + 2.0 * w.t2 * s.nn * x.theta
        + w.si(5) * x.s.n * x.s.n
        + w.si(6) * tt
        + w.si(7) * (s.nt1 * s.nt1 + s.nt2 * s.nt2)
        + w.si(8) * s.t1t2 * s.t1t2
}

/// Raw wall fluxes of the energy balance at one wall, `(F1, F2)` integrands
/// built from traces and normal derivatives:
///
/// `F1 = k0θs̄_n + k5σ̄_nt·u_t + (2/5)k8(σ̄_nt·s̄_t + σ̄_nn s̄_n)`,
/// `F2 = Kn[(3/2)k1θ∂_nθ − (3/2)k2θ n·(∇·σ̄) − (3/2)k2(σ̄n)·∇θ + k3u·((∇u)_stf n)
/// + k4u·((∇s̄)_stf n) + k4s̄·((∇u)_stf n) + (4/5)k6 s̄_n∇·s̄
/// + (24/25)k7 s̄·((∇s̄)_stf n) + k9σ̄:((∇σ̄)_stf n) + ½k10(σ̄n)·(∇·σ̄)]`.
pub fn raw_wall_fluxes(x: &PointFields, frame: &Frame, c: &VolumeCoefficients) -> (f64, f64) {
    let k = &c.k;
    let tr = WallTrace::new(x, frame);
    let n = frame.n;
    let f1 = k[0] * tr.theta * tr.s.n
        + k[5] * (tr.sigma.nt1 * tr.u.t1 + tr.sigma.nt2 * tr.u.t2)
        + 0.4 * k[8] * (tr.sigma.nt1 * tr.s.t1 + tr.sigma.nt2 * tr.s.t2 + tr.sigma.nn * tr.s.n);
    let sig_n = x.val.sigma_bar.apply(&n);
    let du_n = x.stf_du.apply(&n);
    let ds_n = x.stf_ds.apply(&n);
    let mut dsig_n = 0.0;
    let sig = x.val.sigma_bar.to_matrix();
    for i in 0..3 {
        for j in 0..3 {
            let t: f64 = (0..3).map(|l| x.stf_dsigma[i][j][l] * n[l]).sum();
            dsig_n += sig[i][j] * t;
        }
    }
    let f2 = c.kn
        * (1.5 * k[1] * tr.theta * dot3(&x.grad_theta, &n)
            - 1.5 * k[2] * tr.theta * dot3(&n, &x.div_sigma)
            - 1.5 * k[2] * dot3(&sig_n, &x.grad_theta)
            + k[3] * dot3(&x.val.u, &du_n)
            + k[4] * dot3(&x.val.u, &ds_n)
            + k[4] * dot3(&x.val.s_bar, &du_n)
            + 0.8 * k[6] * tr.s.n * x.div_s
            + 24.0 / 25.0 * k[7] * dot3(&x.val.s_bar, &ds_n)
            + k[9] * dsig_n
            + 0.5 * k[10] * dot3(&sig_n, &x.div_sigma));
    (f1, f2)
}

/// Mass-weighted inner product of the state parts.
pub fn mass_density(x: &PointFields, y: &PointFields) -> f64 {
    mass_inner(&x.val, &y.val)
}

/// Unweighted `H¹` inner product of all state components (values plus
/// `x`-derivatives, Frobenius product for the stress).
pub fn h1_density(x: &PointFields, y: &PointFields) -> f64 {
    let part = |a: &StateVector, b: &StateVector| {
        a.rho * b.rho
            + a.theta * b.theta
            + dot3(&a.u, &b.u)
            + dot3(&a.s_bar, &b.s_bar)
            + a.sigma_bar.dot(&b.sigma_bar)
    };
    part(&x.val, &y.val) + part(&x.der, &y.der) + x.p * y.p
}

#[cfg(test)]
mod tests {
    use super::*;

    fn coeffs() -> VolumeCoefficients {
        VolumeCoefficients { k: [1.0; 11], l1: 1.0, l2: 1.0, kn: 1.0 }
    }

    #[test]
    fn shear_velocity_stf_energy_is_half() {
        let mut der = StateVector::ZERO;
        der.u = [0.0, 1.0, 0.0];
        let pf = PointFields::new(StateVector::ZERO, der, 0.0);
        let v = volume(FormKind::F, &pf, &pf, &coeffs());
        assert!((v - 0.5).abs() < 1e-15);
    }

    #[test]
    fn pressure_divergence() {
        let mut der = StateVector::ZERO;
        der.u = [1.0, 0.0, 0.0];
        let v = PointFields::new(StateVector::ZERO, der, 0.0);
        let p = PointFields::new(StateVector::ZERO, StateVector::ZERO, 1.0);
        assert_eq!(volume(FormKind::G, &p, &v, &coeffs()), 1.0);
    }

    #[test]
    fn normal_components_flip_at_left_wall() {
        let mut val = StateVector::ZERO;
        val.s_bar = [2.0, 3.0, 4.0];
        let pf = PointFields::new(val, StateVector::ZERO, 0.0);
        let left = WallTrace::new(&pf, &super::super::mesh::SlabMesh::wall_frame(0));
        let right = WallTrace::new(&pf, &super::super::mesh::SlabMesh::wall_frame(1));
        assert_eq!(left.s.n, -2.0);
        assert_eq!(right.s.n, 2.0);
        assert_eq!(left.s.t1, 3.0);
    }

    #[test]
    fn dissipation_matches_diagonal_forms() {
        use rand::{Rng, SeedableRng};
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(3);
        let c = VolumeCoefficients {
            k: std::array::from_fn(|_| rng.gen_range(0.1..1.0)),
            l1: 0.7,
            l2: 1.3,
            kn: 0.2,
        };
        let val = StateVector::random(&mut rng);
        let der = StateVector::random(&mut rng);
        let x = PointFields::new(val, der, 0.0);
        let diag = volume(FormKind::A, &x, &x, &c)
            + 2.0 * volume(FormKind::J, &x, &x, &c)
            + volume(FormKind::F, &x, &x, &c)
            + volume(FormKind::D, &x, &x, &c)
            + 2.0 * volume(FormKind::Z, &x, &x, &c)
            + volume(FormKind::H, &x, &x, &c);
        assert!((diag - dissipation_density(&x, &c)).abs() < 1e-12 * diag.abs());
    }
}
