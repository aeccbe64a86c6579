//! Symmetric trace-free (stf) tensor algebra in three dimensions.
//!
//! Second-order stf tensors are stored through five independent components
//! in the canonical order `(σ11, σ22, σ12, σ13, σ23)` with
//! `σ33 = −σ11 − σ22`. Third-order tensors are stored dense (27 entries);
//! the seven-component reduction of an stf third-order tensor is only an
//! output view.
//!
//! The slab helpers specialize gradients to fields that vary along the first
//! axis only (`∇ = e₁ ∂/∂x`), which is how every slab form is assembled.

use serde::{Deserialize, Serialize};

/// Dense 3×3 matrix, row-major: `m[i][j]`.
pub type Mat3 = [[f64; 3]; 3];

/// Dense third-order tensor: `t[i][j][k]`.
pub type Tensor3 = [[[f64; 3]; 3]; 3];

/// Names of the five canonical stf components, in storage order.
pub const STF_COMPONENT_NAMES: [&str; 5] = ["s11", "s22", "s12", "s13", "s23"];

/// A symmetric trace-free 3×3 tensor stored by its five canonical components.
#[derive(Debug, Clone, Copy, PartialEq, Default, Serialize, Deserialize)]
pub struct StfTensor3 {
    /// Components `(σ11, σ22, σ12, σ13, σ23)`.
    pub c: [f64; 5],
}

impl StfTensor3 {
    /// The zero tensor.
    pub const ZERO: StfTensor3 = StfTensor3 { c: [0.0; 5] };

    /// Builds a tensor from its canonical components.
    pub fn new(c: [f64; 5]) -> Self {
        StfTensor3 { c }
    }

    /// Unit tensor of the `k`-th canonical component (0-based).
    pub fn unit(k: usize) -> Self {
        let mut c = [0.0; 5];
        c[k] = 1.0;
        StfTensor3 { c }
    }

    /// Full symmetric matrix reconstruction.
    pub fn to_matrix(&self) -> Mat3 {
        let [s11, s22, s12, s13, s23] = self.c;
        [
            [s11, s12, s13],
            [s12, s22, s23],
            [s13, s23, -s11 - s22],
        ]
    }

    /// Reads the canonical components of a matrix assumed symmetric and
    /// trace-free (no projection is applied; see [`stf2`]).
    pub fn from_matrix_unchecked(m: &Mat3) -> Self {
        StfTensor3 {
            c: [m[0][0], m[1][1], m[0][1], m[0][2], m[1][2]],
        }
    }

    /// Frobenius inner product `σ : τ` of the full 3×3 reconstructions.
    pub fn dot(&self, other: &StfTensor3) -> f64 {
        let a = self.c;
        let b = other.c;
        let a33 = -a[0] - a[1];
        let b33 = -b[0] - b[1];
        a[0] * b[0] + a[1] * b[1] + a33 * b33 + 2.0 * (a[2] * b[2] + a[3] * b[3] + a[4] * b[4])
    }

    /// Squared Frobenius norm.
    pub fn norm_sq(&self) -> f64 {
        self.dot(self)
    }

    /// Trace of the reconstructed matrix (zero by construction).
    pub fn trace(&self) -> f64 {
        let m = self.to_matrix();
        m[0][0] + m[1][1] + m[2][2]
    }

    /// `σ n` for a vector `n`.
    pub fn apply(&self, n: &[f64; 3]) -> [f64; 3] {
        mat_vec(&self.to_matrix(), n)
    }

    /// Componentwise linear combination `a·self + b·other`.
    pub fn axpby(&self, a: f64, other: &StfTensor3, b: f64) -> StfTensor3 {
        let mut c = [0.0; 5];
        for (k, ck) in c.iter_mut().enumerate() {
            *ck = a * self.c[k] + b * other.c[k];
        }
        StfTensor3 { c }
    }

    /// Scales every component.
    pub fn scale(&self, a: f64) -> StfTensor3 {
        self.axpby(a, &StfTensor3::ZERO, 0.0)
    }
}

/// Orthonormal boundary-aligned frame `(n, t1, t2)`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Frame {
    /// Unit normal (outward at a wall).
    pub n: [f64; 3],
    /// First tangent.
    pub t1: [f64; 3],
    /// Second tangent.
    pub t2: [f64; 3],
}

impl Frame {
    /// Frame aligned with the coordinate axes: `n = e1, t1 = e2, t2 = e3`.
    pub fn identity() -> Self {
        Frame {
            n: [1.0, 0.0, 0.0],
            t1: [0.0, 1.0, 0.0],
            t2: [0.0, 0.0, 1.0],
        }
    }

    /// Builds a frame and checks pairwise orthonormality to `1e-14`.
    pub fn new(n: [f64; 3], t1: [f64; 3], t2: [f64; 3]) -> Option<Self> {
        let f = Frame { n, t1, t2 };
        if f.orthonormality_defect() <= 1e-14 {
            Some(f)
        } else {
            None
        }
    }

    /// Largest deviation of the Gram matrix of `(n, t1, t2)` from identity.
    pub fn orthonormality_defect(&self) -> f64 {
        let v = [self.n, self.t1, self.t2];
        let mut worst: f64 = 0.0;
        for i in 0..3 {
            for j in 0..3 {
                let target = if i == j { 1.0 } else { 0.0 };
                worst = worst.max((dot3(&v[i], &v[j]) - target).abs());
            }
        }
        worst
    }

    /// Tangent `t_i` for `i ∈ {0, 1}`.
    pub fn tangent(&self, i: usize) -> [f64; 3] {
        if i == 0 {
            self.t1
        } else {
            self.t2
        }
    }
}

/// Frame components of a vector.
#[derive(Debug, Clone, Copy, PartialEq, Default, Serialize, Deserialize)]
pub struct VectorComponents {
    /// `v · n`.
    pub n: f64,
    /// `v · t1`.
    pub t1: f64,
    /// `v · t2`.
    pub t2: f64,
}

impl VectorComponents {
    /// Tangential component `i ∈ {0, 1}`.
    pub fn t(&self, i: usize) -> f64 {
        if i == 0 {
            self.t1
        } else {
            self.t2
        }
    }
}

/// Frame components of a symmetric second-order tensor.
#[derive(Debug, Clone, Copy, PartialEq, Default, Serialize, Deserialize)]
pub struct TensorComponents {
    /// `n·σ·n`.
    pub nn: f64,
    /// `n·σ·t1`.
    pub nt1: f64,
    /// `n·σ·t2`.
    pub nt2: f64,
    /// `t1·σ·t1`.
    pub t1t1: f64,
    /// `t2·σ·t2`.
    pub t2t2: f64,
    /// `t1·σ·t2`.
    pub t1t2: f64,
}

impl TensorComponents {
    /// Normal-tangential component `i ∈ {0, 1}`.
    pub fn nt(&self, i: usize) -> f64 {
        if i == 0 {
            self.nt1
        } else {
            self.nt2
        }
    }

    /// Tangential diagonal component `i ∈ {0, 1}`.
    pub fn tt(&self, i: usize) -> f64 {
        if i == 0 {
            self.t1t1
        } else {
            self.t2t2
        }
    }
}

/// Euclidean inner product of 3-vectors.
pub fn dot3(a: &[f64; 3], b: &[f64; 3]) -> f64 {
    a[0] * b[0] + a[1] * b[1] + a[2] * b[2]
}

/// Matrix–vector product.
pub fn mat_vec(m: &Mat3, v: &[f64; 3]) -> [f64; 3] {
    let mut out = [0.0; 3];
    for (i, oi) in out.iter_mut().enumerate() {
        *oi = dot3(&m[i], v);
    }
    out
}

/// Frobenius inner product of two 3×3 matrices.
pub fn mat_dot(a: &Mat3, b: &Mat3) -> f64 {
    let mut s = 0.0;
    for i in 0..3 {
        for j in 0..3 {
            s += a[i][j] * b[i][j];
        }
    }
    s
}

/// Full contraction of two third-order tensors.
pub fn tensor3_dot(a: &Tensor3, b: &Tensor3) -> f64 {
    let mut s = 0.0;
    for i in 0..3 {
        for j in 0..3 {
            for k in 0..3 {
                s += a[i][j][k] * b[i][j][k];
            }
        }
    }
    s
}

/// Symmetric trace-free part of a second-order tensor:
/// `A_<ij> = A_(ij) − (1/3) A_kk δ_ij`.
pub fn stf2(a: &Mat3) -> StfTensor3 {
    let tr = (a[0][0] + a[1][1] + a[2][2]) / 3.0;
    let sym = |i: usize, j: usize| 0.5 * (a[i][j] + a[j][i]);
    StfTensor3 {
        c: [
            a[0][0] - tr,
            a[1][1] - tr,
            sym(0, 1),
            sym(0, 2),
            sym(1, 2),
        ],
    }
}

/// Full symmetrization `B_(ijk)` of a third-order tensor.
pub fn sym3(b: &Tensor3) -> Tensor3 {
    let mut out = [[[0.0; 3]; 3]; 3];
    for i in 0..3 {
        for j in 0..3 {
            for k in 0..3 {
                out[i][j][k] = (b[i][j][k]
                    + b[i][k][j]
                    + b[j][i][k]
                    + b[j][k][i]
                    + b[k][i][j]
                    + b[k][j][i])
                    / 6.0;
            }
        }
    }
    out
}

/// Symmetric trace-free part of a third-order tensor:
/// `B_<ijk> = B_(ijk) − (1/5)(B_(ill) δ_jk + B_(ljl) δ_ik + B_(llk) δ_ij)`.
pub fn stf3(b: &Tensor3) -> Tensor3 {
    let s = sym3(b);
    // For a fully symmetric tensor all single contractions coincide.
    let mut tr = [0.0; 3];
    for (i, ti) in tr.iter_mut().enumerate() {
        *ti = (0..3).map(|l| s[i][l][l]).sum();
    }
    let d = |a: usize, b: usize| if a == b { 1.0 } else { 0.0 };
    let mut out = [[[0.0; 3]; 3]; 3];
    for i in 0..3 {
        for j in 0..3 {
            for k in 0..3 {
                out[i][j][k] =
                    s[i][j][k] - (tr[i] * d(j, k) + tr[j] * d(i, k) + tr[k] * d(i, j)) / 5.0;
            }
        }
    }
    out
}

/// Seven independent components of an stf third-order tensor:
/// `(T111, T112, T113, T122, T123, T222, T223)`; the remaining entries follow
/// from symmetry and trace-freeness.
pub fn stf3_components(t: &Tensor3) -> [f64; 7] {
    [
        t[0][0][0], t[0][0][1], t[0][0][2], t[0][1][1], t[0][1][2], t[1][1][1], t[1][1][2],
    ]
}

/// Slab gradient of a vector field varying along axis 1 only.
///
/// Returns the full gradient `G_ij = ∂u_i/∂x_j` (column 1 holds the
/// derivatives, columns 2 and 3 vanish) together with its stf part.
pub fn slab_grad_vec(_values: &[f64; 3], derivs: &[f64; 3]) -> (Mat3, StfTensor3) {
    let g = [
        [derivs[0], 0.0, 0.0],
        [derivs[1], 0.0, 0.0],
        [derivs[2], 0.0, 0.0],
    ];
    let s = stf2(&g);
    (g, s)
}

/// Result of [`slab_grad_stf2`].
#[derive(Debug, Clone, Copy)]
pub struct SlabTensorGradient {
    /// `(∇σ)_ijk = ∂σ_ij/∂x δ_k1`.
    pub grad: Tensor3,
    /// stf part of the gradient.
    pub stf: Tensor3,
    /// Divergence `(∇·σ)_i = ∂σ_i1/∂x`.
    pub div: [f64; 3],
}

/// Slab gradient of an stf tensor field varying along axis 1 only.
pub fn slab_grad_stf2(_field: &StfTensor3, derivs: &StfTensor3) -> SlabTensorGradient {
    let dm = derivs.to_matrix();
    let mut grad = [[[0.0; 3]; 3]; 3];
    for i in 0..3 {
        for j in 0..3 {
            grad[i][j][0] = dm[i][j];
        }
    }
    let stf = stf3(&grad);
    let div = [dm[0][0], dm[1][0], dm[2][0]];
    SlabTensorGradient { grad, stf, div }
}

/// Frame components of a vector.
pub fn vector_components(v: &[f64; 3], f: &Frame) -> VectorComponents {
    VectorComponents {
        n: dot3(v, &f.n),
        t1: dot3(v, &f.t1),
        t2: dot3(v, &f.t2),
    }
}

/// Frame components of an stf tensor.
pub fn tensor_components(s: &StfTensor3, f: &Frame) -> TensorComponents {
    let m = s.to_matrix();
    let q = |a: &[f64; 3], b: &[f64; 3]| dot3(a, &mat_vec(&m, b));
    TensorComponents {
        nn: q(&f.n, &f.n),
        nt1: q(&f.n, &f.t1),
        nt2: q(&f.n, &f.t2),
        t1t1: q(&f.t1, &f.t1),
        t2t2: q(&f.t2, &f.t2),
        t1t2: q(&f.t1, &f.t2),
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn stf2_of_identity_vanishes() {
        let i3 = [[1.0, 0.0, 0.0], [0.0, 1.0, 0.0], [0.0, 0.0, 1.0]];
        assert!(stf2(&i3).c.iter().all(|v| v.abs() < 1e-15));
    }

    #[test]
    fn stf2_of_offdiagonal_unit() {
        let mut a = [[0.0; 3]; 3];
        a[0][1] = 1.0;
        let s = stf2(&a);
        assert_eq!(s.c, [0.0, 0.0, 0.5, 0.0, 0.0]);
        assert_eq!(s.trace(), 0.0);
    }

    #[test]
    fn stf2_of_diag_e1() {
        let mut a = [[0.0; 3]; 3];
        a[0][0] = 1.0;
        let m = stf2(&a).to_matrix();
        assert!((m[0][0] - 2.0 / 3.0).abs() < 1e-15);
        assert!((m[1][1] + 1.0 / 3.0).abs() < 1e-15);
        assert!((m[2][2] + 1.0 / 3.0).abs() < 1e-15);
    }

    #[test]
    fn stf3_single_entry_123() {
        let mut b = [[[0.0; 3]; 3]; 3];
        b[0][1][2] = 1.0;
        let t = stf3(&b);
        for p in [[0, 1, 2], [0, 2, 1], [1, 0, 2], [1, 2, 0], [2, 0, 1], [2, 1, 0]] {
            assert!((t[p[0]][p[1]][p[2]] - 1.0 / 6.0).abs() < 1e-15);
        }
        assert_eq!(t[0][0][0], 0.0);
    }

    #[test]
    fn slab_gradient_examples() {
        let (_, s) = slab_grad_vec(&[0.0, 0.0, 0.0], &[0.0, 1.0, 0.0]);
        assert_eq!(s.c, [0.0, 0.0, 0.5, 0.0, 0.0]);
        let (g, s) = slab_grad_vec(&[0.0; 3], &[1.0, 0.0, 0.0]);
        assert!((s.c[0] - 2.0 / 3.0).abs() < 1e-15 && (s.c[1] + 1.0 / 3.0).abs() < 1e-15);
        assert_eq!(g[0][0] + g[1][1] + g[2][2], 1.0);
        let r = slab_grad_stf2(&StfTensor3::ZERO, &StfTensor3::unit(2));
        assert_eq!(r.div, [0.0, 1.0, 0.0]);
        let z = slab_grad_stf2(&StfTensor3::ZERO, &StfTensor3::ZERO);
        assert!(tensor3_dot(&z.stf, &z.stf) == 0.0 && z.div == [0.0; 3]);
    }

    #[test]
    fn frame_component_examples() {
        let f = Frame::identity();
        let v = vector_components(&[1.0, 2.0, 3.0], &f);
        assert_eq!((v.n, v.t1, v.t2), (1.0, 2.0, 3.0));
        let mut a = [[0.0; 3]; 3];
        a[0][0] = 1.0;
        let c = tensor_components(&stf2(&a), &f);
        assert!((c.nn - 2.0 / 3.0).abs() < 1e-15);
        assert!((c.nn + c.t1t1 + c.t2t2).abs() < 1e-15);
    }

    mod properties {
        use super::*;
        use proptest::prelude::*;

        fn matrix() -> impl Strategy<Value = Mat3> {
            prop::array::uniform3(prop::array::uniform3(-5.0..5.0f64))
        }

        proptest! {
            #[test]
            fn stf2_is_a_traceless_projection(a in matrix()) {
                let s = stf2(&a);
                let m = s.to_matrix();
                prop_assert!((m[0][0] + m[1][1] + m[2][2]).abs() <= 1e-12);
                for i in 0..3 {
                    for j in 0..3 {
                        prop_assert_eq!(m[i][j], m[j][i]);
                    }
                }
                let again = stf2(&m);
                for k in 0..5 {
                    prop_assert!((again.c[k] - s.c[k]).abs() <= 1e-12);
                }
            }

            #[test]
            fn stf_dot_is_the_frobenius_product(a in matrix(), b in matrix()) {
                let (x, y) = (stf2(&a), stf2(&b));
                let f = mat_dot(&x.to_matrix(), &y.to_matrix());
                prop_assert!((x.dot(&y) - f).abs() <= 1e-10 * (1.0 + f.abs()));
            }
        }
    }

}
