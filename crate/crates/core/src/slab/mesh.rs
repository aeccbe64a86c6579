//! Slab geometry, wall data, finite-element spaces and degree-of-freedom
//! layouts.
//!
//! The domain is the unit interval along axis 1. Every field is a function
//! of `x` only; elements are uniform. Three kinds of scalar spaces are used:
//! continuous `P_k`, continuous `P_k` with both wall values removed (the
//! essential condition `u_n = 0`), and discontinuous `P_{k−1}`.

use serde::{Deserialize, Serialize};

use crate::error::{R13Error, Result};
use crate::korn_verifier::lagrange_1d;
use crate::quadrature::{gauss_legendre_on, Rule1d};
use crate::tensor_algebra::Frame;

/// Largest supported element degree.
pub const MAX_DEGREE: usize = 4;

/// Uniform mesh of `[0, 1]` with the two wall frames.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SlabMesh {
    /// Number of elements.
    pub n_elements: usize,
    /// Polynomial degree `k` of the continuous spaces.
    pub degree: usize,
}

impl SlabMesh {
    /// Validated mesh.
    pub fn new(n_elements: usize, degree: usize) -> Result<Self> {
        if n_elements == 0 {
            return Err(R13Error::Config("mesh.n_elements must be at least 1".into()));
        }
        if degree == 0 || degree > MAX_DEGREE {
            return Err(R13Error::Config(format!("mesh.degree must lie in 1..={MAX_DEGREE}, got {degree}")));
        }
        Ok(SlabMesh { n_elements, degree })
    }

    /// Element width.
    pub fn h(&self) -> f64 {
        1.0 / self.n_elements as f64
    }

    /// Left end of element `e`.
    pub fn element_start(&self, e: usize) -> f64 {
        e as f64 * self.h()
    }

    /// Number of nodes of the continuous `P_k` space.
    pub fn n_nodes(&self) -> usize {
        self.n_elements * self.degree + 1
    }

    /// Position of continuous node `g`.
    pub fn node_position(&self, g: usize) -> f64 {
        g as f64 / (self.n_elements * self.degree) as f64
    }

    /// Element containing `x` (the right element at interior interfaces,
    /// the last element at `x = 1`) and the reference coordinate in `[0, 1]`.
    pub fn locate(&self, x: f64) -> (usize, f64) {
        let s = (x.clamp(0.0, 1.0) * self.n_elements as f64).floor() as usize;
        let e = s.min(self.n_elements - 1);
        (e, (x - self.element_start(e)) * self.n_elements as f64)
    }

    /// Gauss–Legendre rule on the reference element `[0, 1]` exact for
    /// polynomials of degree `2k + 1`.
    pub fn reference_rule(&self) -> Rule1d {
        gauss_legendre_on(self.degree + 1, 0.0, 1.0).expect("positive point count")
    }

    /// Wall frames: index 0 is `x = 0` (`n = −e₁`), index 1 is `x = 1`
    /// (`n = +e₁`); both use `t₁ = e₂`, `t₂ = e₃`.
    pub fn wall_frame(wall: usize) -> Frame {
        let sign = if wall == 0 { -1.0 } else { 1.0 };
        Frame::new([sign, 0.0, 0.0], [0.0, 1.0, 0.0], [0.0, 0.0, 1.0]).expect("orthonormal slab frame")
    }
}

/// Wall temperature and tangential wall velocity at both walls.
///
/// Index 0 is the wall at `x = 0`, index 1 the wall at `x = 1`; velocities
/// are given as `(u_t1, u_t2)` in the wall frame, so the normal component is
/// zero by construction.
#[derive(Debug, Clone, Copy, Default, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct WallData {
    /// `θ^W` per wall.
    pub theta: [f64; 2],
    /// `(u^W_t1, u^W_t2)` per wall.
    pub u_t: [[f64; 2]; 2],
}

impl WallData {
    /// Homogeneous data.
    pub const ZERO: WallData = WallData { theta: [0.0; 2], u_t: [[0.0; 2]; 2] };

    /// Uniform wall temperature, walls at rest.
    pub fn uniform_temperature(theta: f64) -> Self {
        WallData { theta: [theta; 2], u_t: [[0.0; 2]; 2] }
    }

    /// Plane Couette data: `u^W_t1 = −v/2` at `x = 0`, `+v/2` at `x = 1`.
    pub fn couette(v: f64) -> Self {
        WallData { theta: [0.0; 2], u_t: [[-0.5 * v, 0.0], [0.5 * v, 0.0]] }
    }

    /// Fourier data: wall temperatures `θ₀`, `θ₁`, walls at rest.
    pub fn fourier(theta0: f64, theta1: f64) -> Self {
        WallData { theta: [theta0, theta1], u_t: [[0.0; 2]; 2] }
    }

    /// True when every entry vanishes.
    pub fn is_homogeneous(&self) -> bool {
        self.theta.iter().chain(self.u_t.iter().flatten()).all(|&v| v == 0.0)
    }

    /// Rejects non-finite entries.
    pub fn validate(&self) -> Result<()> {
        if self.theta.iter().chain(self.u_t.iter().flatten()).all(|v| v.is_finite()) {
            Ok(())
        } else {
            Err(R13Error::Config("wall data must be finite".into()))
        }
    }
}

/// Scalar component of the slab state.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Comp {
    /// Density `ρ` (transient only).
    Rho,
    /// Temperature `θ`.
    Theta,
    /// Velocity component `u_i` (0-based).
    U(usize),
    /// Modified heat flux component `s̄_i` (0-based).
    S(usize),
    /// Modified stress component `σ̄` in canonical stf order (0-based).
    Sigma(usize),
    /// Pressure `p = ρ + θ` (steady only).
    P,
}

impl Comp {
    /// Short name used in output headers.
    pub fn name(&self) -> String {
        match self {
            Comp::Rho => "rho".into(),
            Comp::Theta => "theta".into(),
            Comp::U(i) => format!("u{}", i + 1),
            Comp::S(i) => format!("sbar{}", i + 1),
            Comp::Sigma(i) => format!("sigmabar_{}", ["11", "22", "12", "13", "23"][*i]),
            Comp::P => "p".into(),
        }
    }

    /// Field group of the component.
    pub fn group(&self) -> Group {
        match self {
            Comp::Rho => Group::Rho,
            Comp::Theta => Group::Theta,
            Comp::U(_) => Group::U,
            Comp::S(_) => Group::S,
            Comp::Sigma(_) => Group::Sigma,
            Comp::P => Group::P,
        }
    }
}

/// Field groups addressed by the bilinear forms.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Group {
    /// `ρ`.
    Rho,
    /// `θ`.
    Theta,
    /// `u`.
    U,
    /// `s̄`.
    S,
    /// `σ̄`.
    Sigma,
    /// `p`.
    P,
}

/// Kind of scalar finite-element space.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum SpaceKind {
    /// Continuous `P_k`.
    Continuous,
    /// Continuous `P_k` vanishing at both walls.
    ContinuousWallZero,
    /// Discontinuous `P_{k−1}`.
    Discontinuous,
}

/// Which variational problem a layout serves.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum Formulation {
    /// Steady, grouping `(s̄, u, σ̄, θ | p)` for non-Maxwell molecules.
    NonMaxwell,
    /// Steady, grouping `(σ, s, p | u, θ)` for Maxwell molecules.
    Maxwell,
    /// Time dependent, state `(ρ, θ, u, s̄, σ̄)`.
    Transient,
}

/// One scalar field inside a layout.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct FieldSpace {
    /// Component.
    pub comp: Comp,
    /// Space kind.
    pub kind: SpaceKind,
    /// First global dof.
    pub offset: usize,
    /// Number of dofs.
    pub n: usize,
}

/// A local basis function on an element.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct LocalDof {
    /// Global dof index.
    pub dof: usize,
    /// Index into [`DofLayout::fields`].
    pub field: usize,
    /// Local basis index within the field's element basis.
    pub local: usize,
}

/// Global numbering of all scalar fields of a formulation.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct DofLayout {
    /// Mesh.
    pub mesh: SlabMesh,
    /// Formulation.
    pub formulation: Formulation,
    /// Fields in numbering order.
    pub fields: Vec<FieldSpace>,
    /// Index of the zero-mean pressure multiplier, when present.
    pub multiplier: Option<usize>,
    /// Total number of unknowns (including the multiplier).
    pub n_dofs: usize,
}

impl DofLayout {
    /// Layout for a formulation.
    pub fn new(mesh: SlabMesh, formulation: Formulation) -> Self {
        use Comp::*;
        use SpaceKind::*;
        let mut spec: Vec<(Comp, SpaceKind)> = Vec::new();
        match formulation {
            Formulation::NonMaxwell => {
                spec.push((Theta, Continuous));
                spec.push((U(0), ContinuousWallZero));
                spec.push((U(1), Continuous));
                spec.push((U(2), Continuous));
            }
            Formulation::Maxwell => {
                spec.push((Theta, Discontinuous));
                spec.push((U(0), ContinuousWallZero));
                spec.push((U(1), Discontinuous));
                spec.push((U(2), Discontinuous));
            }
            Formulation::Transient => {
                spec.push((Rho, Discontinuous));
                spec.push((Theta, Continuous));
                spec.push((U(0), ContinuousWallZero));
                spec.push((U(1), Continuous));
                spec.push((U(2), Continuous));
            }
        }
        for i in 0..3 {
            spec.push((S(i), Continuous));
        }
        for i in 0..5 {
            spec.push((Sigma(i), Continuous));
        }
        if formulation != Formulation::Transient {
            spec.push((P, Discontinuous));
        }
        let mut offset = 0;
        let fields = spec
            .into_iter()
            .map(|(comp, kind)| {
                let n = Self::space_size(&mesh, kind);
                let f = FieldSpace { comp, kind, offset, n };
                offset += n;
                f
            })
            .collect();
        let multiplier = if formulation == Formulation::Transient {
            None
        } else {
            offset += 1;
            Some(offset - 1)
        };
        DofLayout { mesh, formulation, fields, multiplier, n_dofs: offset }
    }

    /// Number of dofs of a scalar space.
    pub fn space_size(mesh: &SlabMesh, kind: SpaceKind) -> usize {
        match kind {
            SpaceKind::Continuous => mesh.n_nodes(),
            SpaceKind::ContinuousWallZero => mesh.n_nodes() - 2,
            SpaceKind::Discontinuous => mesh.n_elements * mesh.degree,
        }
    }

    /// Polynomial degree of a space kind on this mesh.
    pub fn kind_degree(&self, kind: SpaceKind) -> usize {
        match kind {
            SpaceKind::Discontinuous => self.mesh.degree - 1,
            _ => self.mesh.degree,
        }
    }

    /// Field index of a component, if present.
    pub fn field_of(&self, comp: Comp) -> Option<usize> {
        self.fields.iter().position(|f| f.comp == comp)
    }

    /// Whether the θ and ρ basis functions also carry the pressure
    /// `p = ρ + θ` (transient formulation).
    pub fn density_carries_pressure(&self) -> bool {
        self.formulation == Formulation::Transient
    }

    /// Local dofs of element `e` across all fields.
    pub fn element_dofs(&self, e: usize) -> Vec<LocalDof> {
        let k = self.mesh.degree;
        let last = self.mesh.n_nodes() - 1;
        let mut out = Vec::new();
        for (fi, f) in self.fields.iter().enumerate() {
            match f.kind {
                SpaceKind::Continuous => {
                    for a in 0..=k {
                        out.push(LocalDof { dof: f.offset + e * k + a, field: fi, local: a });
                    }
                }
                SpaceKind::ContinuousWallZero => {
                    for a in 0..=k {
                        let g = e * k + a;
                        if g != 0 && g != last {
                            out.push(LocalDof { dof: f.offset + g - 1, field: fi, local: a });
                        }
                    }
                }
                SpaceKind::Discontinuous => {
                    for a in 0..k {
                        out.push(LocalDof { dof: f.offset + e * k + a, field: fi, local: a });
                    }
                }
            }
        }
        out
    }

    /// Values and physical derivatives of the element basis of `kind` at
    /// reference coordinate `t`.
    pub fn basis(&self, kind: SpaceKind, t: f64) -> (Vec<f64>, Vec<f64>) {
        let (v, d) = lagrange_1d(self.kind_degree(kind), t);
        let inv_h = self.mesh.n_elements as f64;
        (v, d.into_iter().map(|x| x * inv_h).collect())
    }

    /// Global dofs of a group, in numbering order.
    pub fn group_dofs(&self, group: Group) -> Vec<usize> {
        self.fields
            .iter()
            .filter(|f| f.comp.group() == group)
            .flat_map(|f| f.offset..f.offset + f.n)
            .collect()
    }

    /// Global dofs of every field except the pressure and the multiplier.
    pub fn state_dofs(&self) -> Vec<usize> {
        self.fields
            .iter()
            .filter(|f| f.comp != Comp::P)
            .flat_map(|f| f.offset..f.offset + f.n)
            .collect()
    }

    /// Nodal position of a dof (Lagrange node), used for output and for
    /// interpolation of initial data.
    pub fn dof_position(&self, field: usize, dof: usize) -> f64 {
        let f = &self.fields[field];
        let i = dof - f.offset;
        match f.kind {
            SpaceKind::Continuous => self.mesh.node_position(i),
            SpaceKind::ContinuousWallZero => self.mesh.node_position(i + 1),
            SpaceKind::Discontinuous => {
                let k = self.mesh.degree;
                let (e, a) = (i / k, i % k);
                let t = if k == 1 { 0.5 } else { a as f64 / (k - 1) as f64 };
                self.mesh.element_start(e) + t * self.mesh.h()
            }
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn layout_sizes() {
        let mesh = SlabMesh::new(4, 2).unwrap();
        let l = DofLayout::new(mesh, Formulation::NonMaxwell);
        // 12 continuous fields of 9 nodes, u1 with 7, p with 8, multiplier.
        assert_eq!(l.n_dofs, 11 * 9 + 7 + 8 + 1);
        let t = DofLayout::new(mesh, Formulation::Transient);
        assert_eq!(t.n_dofs, 8 + 11 * 9 + 7);
        assert!(t.multiplier.is_none());
    }

    #[test]
    fn wall_zero_dofs_skip_walls() {
        let mesh = SlabMesh::new(3, 1).unwrap();
        let l = DofLayout::new(mesh, Formulation::NonMaxwell);
        let u1 = l.field_of(Comp::U(0)).unwrap();
        let first: Vec<_> = l.element_dofs(0).into_iter().filter(|d| d.field == u1).collect();
        assert_eq!(first.len(), 1);
        assert_eq!(first[0].local, 1);
    }

    #[test]
    fn frames_point_outward() {
        assert_eq!(SlabMesh::wall_frame(0).n, [-1.0, 0.0, 0.0]);
        assert_eq!(SlabMesh::wall_frame(1).n, [1.0, 0.0, 0.0]);
    }

    #[test]
    fn locate_handles_ends() {
        let m = SlabMesh::new(4, 1).unwrap();
        assert_eq!(m.locate(1.0), (3, 1.0));
        assert_eq!(m.locate(0.0), (0, 0.0));
        let (e, t) = m.locate(0.3);
        assert_eq!(e, 1);
        assert!((t - 0.2).abs() < 1e-12);
    }
}
