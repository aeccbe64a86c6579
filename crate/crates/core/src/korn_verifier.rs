//! Finite-element certificates for the Korn-type inequalities on the unit
//! cube and for the conformal-Killing kernel of the stf gradient.
//!
//! Vector fields are discretized with continuous tensor-product Lagrange
//! elements of degree 1 or 2 on a uniform hexahedral mesh. Four Gram
//! matrices are assembled (`L²`, boundary `L²`, stf gradient, `H¹`) and the
//! inequalities are certified through the smallest generalized eigenvalues
//!
//! - classical: `(M + K) x = λ H x`,
//! - boundary:  `(B + K) x = λ H x`,
//!
//! while the kernel of `K` relative to `M` reproduces the ten-dimensional
//! conformal-Killing space
//! `u(x) = a + λx + Ax + 2(b·x)x − |x|² b` with `A` skew.

use rand::Rng;
use serde::{Deserialize, Serialize};

use crate::error::{R13Error, Result};
use crate::linalg::{generalized_eigenvalues, TripletBuilder};
use crate::quadrature::gauss_legendre_on;
use crate::tensor_algebra::{stf2, Mat3};

/// Dimension of the conformal-Killing space in three dimensions.
pub const CK_DIM: usize = 10;
/// Relative eigenvalue threshold separating the stf-gradient kernel.
pub const KERNEL_THRESHOLD: f64 = 1e-10;

/// Conformal-Killing field `a + λx + Ax + 2(b·x)x − |x|² b`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct CkField {
    /// Translation.
    pub a: [f64; 3],
    /// Dilation.
    pub lambda: f64,
    /// Skew rotation generator, stored by `(A12, A13, A23)`.
    pub rot: [f64; 3],
    /// Special conformal part.
    pub b: [f64; 3],
}

impl CkField {
    /// Zero field.
    pub const ZERO: CkField = CkField {
        a: [0.0; 3],
        lambda: 0.0,
        rot: [0.0; 3],
        b: [0.0; 3],
    };

    /// Skew matrix `A`.
    pub fn skew(&self) -> Mat3 {
        let [a12, a13, a23] = self.rot;
        [[0.0, a12, a13], [-a12, 0.0, a23], [-a13, -a23, 0.0]]
    }

    /// Field from its ten coefficients `(a, λ, A12, A13, A23, b)`.
    pub fn from_coefficients(c: &[f64; CK_DIM]) -> Self {
        CkField {
            a: [c[0], c[1], c[2]],
            lambda: c[3],
            rot: [c[4], c[5], c[6]],
            b: [c[7], c[8], c[9]],
        }
    }

    /// The ten coefficients.
    pub fn coefficients(&self) -> [f64; CK_DIM] {
        [
            self.a[0], self.a[1], self.a[2], self.lambda, self.rot[0], self.rot[1], self.rot[2], self.b[0],
            self.b[1], self.b[2],
        ]
    }

    /// Random field with coefficients uniform in `[−1, 1]`.
    pub fn random<R: Rng + ?Sized>(rng: &mut R) -> Self {
        let mut c = [0.0; CK_DIM];
        for v in c.iter_mut() {
            *v = rng.gen_range(-1.0..=1.0);
        }
        CkField::from_coefficients(&c)
    }

    /// Field scaled to unit coefficient norm (zero stays zero).
    pub fn normalized(&self) -> Self {
        let c = self.coefficients();
        let n = c.iter().map(|v| v * v).sum::<f64>().sqrt();
        if n == 0.0 {
            return *self;
        }
        let mut d = c;
        for v in d.iter_mut() {
            *v /= n;
        }
        CkField::from_coefficients(&d)
    }
}

/// Value of a conformal-Killing field at `x`.
pub fn ck_eval(f: &CkField, x: &[f64; 3]) -> [f64; 3] {
    let a = f.skew();
    let bx = f.b[0] * x[0] + f.b[1] * x[1] + f.b[2] * x[2];
    let xx = x[0] * x[0] + x[1] * x[1] + x[2] * x[2];
    let mut out = [0.0; 3];
    for i in 0..3 {
        let ax: f64 = (0..3).map(|j| a[i][j] * x[j]).sum();
        out[i] = f.a[i] + f.lambda * x[i] + ax + 2.0 * bx * x[i] - xx * f.b[i];
    }
    out
}

/// Analytic Jacobian `∂u_i/∂x_j` of a conformal-Killing field.
pub fn ck_jacobian(f: &CkField, x: &[f64; 3]) -> Mat3 {
    let a = f.skew();
    let bx = f.b[0] * x[0] + f.b[1] * x[1] + f.b[2] * x[2];
    let mut g = [[0.0; 3]; 3];
    for i in 0..3 {
        for j in 0..3 {
            let d = if i == j { 1.0 } else { 0.0 };
            g[i][j] = f.lambda * d + a[i][j] + 2.0 * f.b[j] * x[i] + 2.0 * bx * d - 2.0 * x[j] * f.b[i];
        }
    }
    g
}

/// Frobenius norm of `stf(∇u)` of a conformal-Killing field at `x`.
pub fn ck_stf_gradient_norm(f: &CkField, x: &[f64; 3]) -> f64 {
    stf2(&ck_jacobian(f, x)).norm_sq().sqrt()
}

/// Uniform hexahedral mesh of the unit cube with tensor-product Lagrange
/// elements.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CubeMesh {
    /// Elements per axis.
    pub subdivisions: usize,
    /// Element degree (1 or 2).
    pub degree: usize,
}

impl CubeMesh {
    /// Checked constructor.
    pub fn new(subdivisions: usize, degree: usize) -> Result<Self> {
        if subdivisions == 0 {
            return Err(R13Error::InvalidArgument("cube mesh needs at least one element per axis".into()));
        }
        if !(1..=2).contains(&degree) {
            return Err(R13Error::InvalidArgument(format!("element degree must be 1 or 2, got {degree}")));
        }
        Ok(CubeMesh { subdivisions, degree })
    }

    /// Nodes per axis.
    pub fn nodes_per_axis(&self) -> usize {
        self.subdivisions * self.degree + 1
    }

    /// Number of scalar nodes.
    pub fn n_nodes(&self) -> usize {
        self.nodes_per_axis().pow(3)
    }

    /// Number of vector degrees of freedom.
    pub fn n_dofs(&self) -> usize {
        3 * self.n_nodes()
    }

    /// Element edge length.
    pub fn h(&self) -> f64 {
        1.0 / self.subdivisions as f64
    }

    /// Coordinate of grid line `i` along an axis.
    pub fn coordinate(&self, i: usize) -> f64 {
        i as f64 / (self.subdivisions * self.degree) as f64
    }

    /// Global node index of grid position `(i, j, k)`.
    pub fn node(&self, i: usize, j: usize, k: usize) -> usize {
        let n = self.nodes_per_axis();
        i + n * (j + n * k)
    }

    /// Position of a node.
    pub fn node_position(&self, node: usize) -> [f64; 3] {
        let n = self.nodes_per_axis();
        [self.coordinate(node % n), self.coordinate((node / n) % n), self.coordinate(node / (n * n))]
    }

    /// Global nodes of element `(ex, ey, ez)` in local lexicographic order.
    pub fn element_nodes(&self, e: [usize; 3]) -> Vec<usize> {
        let p = self.degree;
        let mut out = Vec::with_capacity((p + 1).pow(3));
        for c in 0..=p {
            for b in 0..=p {
                for a in 0..=p {
                    out.push(self.node(e[0] * p + a, e[1] * p + b, e[2] * p + c));
                }
            }
        }
        out
    }

    /// Nodal interpolant of a vector field (exact for fields of degree at
    /// most `degree` in each variable).
    pub fn interpolate(&self, f: impl Fn(&[f64; 3]) -> [f64; 3]) -> Vec<f64> {
        let mut x = vec![0.0; self.n_dofs()];
        for node in 0..self.n_nodes() {
            let v = f(&self.node_position(node));
            for c in 0..3 {
                x[3 * node + c] = v[c];
            }
        }
        x
    }
}

/// Lagrange basis on equispaced nodes of `[0, 1]`: values and derivatives at
/// `t`.
pub fn lagrange_1d(degree: usize, t: f64) -> (Vec<f64>, Vec<f64>) {
    let nodes: Vec<f64> = (0..=degree).map(|a| a as f64 / degree as f64).collect();
    let mut v = vec![0.0; degree + 1];
    let mut d = vec![0.0; degree + 1];
    for a in 0..=degree {
        let mut val = 1.0;
        let mut der = 0.0;
        for b in 0..=degree {
            if b == a {
                continue;
            }
            let denom = nodes[a] - nodes[b];
            der = der * (t - nodes[b]) / denom + val / denom;
            val *= (t - nodes[b]) / denom;
        }
        v[a] = val;
        d[a] = der;
    }
    (v, d)
}

/// The four Gram matrices over vector nodal dofs (`dof = 3·node + comp`).
#[derive(Debug, Clone)]
pub struct CubeForms {
    /// Mesh used.
    pub mesh: CubeMesh,
    /// `∫ u·v`.
    pub l2: TripletBuilder,
    /// `∫_∂ u·v`.
    pub boundary: TripletBuilder,
    /// `∫ stf∇u : stf∇v`.
    pub stf: TripletBuilder,
    /// `∫ u·v + ∇u : ∇v`.
    pub h1: TripletBuilder,
}

/// Assembles the Gram matrices on a cube mesh.
pub fn assemble_cube_forms(mesh: &CubeMesh) -> Result<CubeForms> {
    let p = mesh.degree;
    let h = mesh.h();
    let nd = mesh.n_dofs();
    let rule = gauss_legendre_on(p + 1, 0.0, 1.0)?;
    let tab: Vec<(Vec<f64>, Vec<f64>)> = rule.nodes.iter().map(|&t| lagrange_1d(p, t)).collect();
    let nloc = (p + 1).pow(3);
    let jac = h * h * h;
    let mut l2 = TripletBuilder::new(nd, nd);
    let mut grad = TripletBuilder::new(nd, nd);
    let mut stf = TripletBuilder::new(nd, nd);
    let mut boundary = TripletBuilder::new(nd, nd);

    let ne = mesh.subdivisions;
    for ez in 0..ne {
        for ey in 0..ne {
            for ex in 0..ne {
                let nodes = mesh.element_nodes([ex, ey, ez]);
                let mut m_loc = vec![0.0; nloc * nloc];
                let mut g_loc = vec![0.0; nloc * nloc];
                let mut s_loc = vec![0.0; 9 * nloc * nloc];
                for (qz, wz) in rule.weights.iter().enumerate() {
                    for (qy, wy) in rule.weights.iter().enumerate() {
                        for (qx, wx) in rule.weights.iter().enumerate() {
                            let w = wx * wy * wz * jac;
                            let mut val = vec![0.0; nloc];
                            let mut gr = vec![[0.0; 3]; nloc];
                            let mut idx = 0;
                            for c in 0..=p {
                                for b in 0..=p {
                                    for a in 0..=p {
                                        let (vx, dx) = (&tab[qx].0[a], &tab[qx].1[a]);
                                        let (vy, dy) = (&tab[qy].0[b], &tab[qy].1[b]);
                                        let (vz, dz) = (&tab[qz].0[c], &tab[qz].1[c]);
                                        val[idx] = vx * vy * vz;
                                        gr[idx] = [dx * vy * vz / h, vx * dy * vz / h, vx * vy * dz / h];
                                        idx += 1;
                                    }
                                }
                            }
                            // stf∇ of the vector basis function φ_a e_c.
                            let mut stf_basis = vec![[crate::tensor_algebra::StfTensor3::ZERO; 3]; nloc];
                            for a in 0..nloc {
                                for c in 0..3 {
                                    let mut g = [[0.0; 3]; 3];
                                    g[c] = gr[a];
                                    stf_basis[a][c] = stf2(&g);
                                }
                            }
                            for a in 0..nloc {
                                for b in 0..nloc {
                                    m_loc[a * nloc + b] += w * val[a] * val[b];
                                    g_loc[a * nloc + b] += w
                                        * (gr[a][0] * gr[b][0] + gr[a][1] * gr[b][1] + gr[a][2] * gr[b][2]);
                                    for c in 0..3 {
                                        for d in 0..3 {
                                            s_loc[(a * nloc + b) * 9 + c * 3 + d] +=
                                                w * stf_basis[a][c].dot(&stf_basis[b][d]);
                                        }
                                    }
                                }
                            }
                        }
                    }
                }
                for a in 0..nloc {
                    for b in 0..nloc {
                        for c in 0..3 {
                            l2.add(3 * nodes[a] + c, 3 * nodes[b] + c, m_loc[a * nloc + b]);
                            grad.add(3 * nodes[a] + c, 3 * nodes[b] + c, g_loc[a * nloc + b]);
                            for d in 0..3 {
                                stf.add(3 * nodes[a] + c, 3 * nodes[b] + d, s_loc[(a * nloc + b) * 9 + c * 3 + d]);
                            }
                        }
                    }
                }
            }
        }
    }

    // Boundary faces: axis `ax` fixed at grid line 0 or the last one.
    let nface = (p + 1) * (p + 1);
    let last = mesh.nodes_per_axis() - 1;
    for ax in 0..3 {
        let (u_ax, v_ax) = ((ax + 1) % 3, (ax + 2) % 3);
        for &fixed in &[0usize, last] {
            for eu in 0..ne {
                for ev in 0..ne {
                    let mut fnodes = Vec::with_capacity(nface);
                    for b in 0..=p {
                        for a in 0..=p {
                            let mut pos = [0usize; 3];
                            pos[ax] = fixed;
                            pos[u_ax] = eu * p + a;
                            pos[v_ax] = ev * p + b;
                            fnodes.push(mesh.node(pos[0], pos[1], pos[2]));
                        }
                    }
                    let mut m_loc = vec![0.0; nface * nface];
                    for (qv, wv) in rule.weights.iter().enumerate() {
                        for (qu, wu) in rule.weights.iter().enumerate() {
                            let w = wu * wv * h * h;
                            let mut val = Vec::with_capacity(nface);
                            for b in 0..=p {
                                for a in 0..=p {
                                    val.push(tab[qu].0[a] * tab[qv].0[b]);
                                }
                            }
                            for a in 0..nface {
                                for b in 0..nface {
                                    m_loc[a * nface + b] += w * val[a] * val[b];
                                }
                            }
                        }
                    }
                    for a in 0..nface {
                        for b in 0..nface {
                            for c in 0..3 {
                                boundary.add(3 * fnodes[a] + c, 3 * fnodes[b] + c, m_loc[a * nface + b]);
                            }
                        }
                    }
                }
            }
        }
    }
    let mut h1 = l2.clone();
    h1.extend_scaled(&grad, 1.0);
    Ok(CubeForms {
        mesh: mesh.clone(),
        l2,
        boundary,
        stf,
        h1,
    })
}

/// Korn certificate on one mesh.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct KornReport {
    /// Mesh used.
    pub mesh: CubeMesh,
    /// Vector degrees of freedom.
    pub n_dofs: usize,
    /// Smallest eigenvalue of `(M + K) x = λ H x`.
    pub lambda_min_classical: f64,
    /// Smallest eigenvalue of `(B + K) x = λ H x`.
    pub lambda_min_boundary: f64,
    /// Number of eigenvalues of `K x = λ M x` below the kernel threshold.
    pub stf_kernel_dim: usize,
    /// Smallest eigenvalue above the kernel cluster, relative to the largest.
    pub kernel_gap: f64,
    /// Lowest eigenvalues of each pencil (classical, boundary, kernel).
    pub tails: KornTails,
}

/// Lowest eigenvalues of the three pencils.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct KornTails {
    /// `(M + K, H)`.
    pub classical: Vec<f64>,
    /// `(B + K, H)`.
    pub boundary: Vec<f64>,
    /// `(K, M)`.
    pub kernel: Vec<f64>,
}

impl KornReport {
    /// Eigenvalue tails as CSV (`index,classical,boundary,kernel`).
    pub fn tails_csv(&self) -> String {
        let mut s = String::from("index,classical,boundary,kernel\n");
        let n = self.tails.classical.len().max(self.tails.boundary.len()).max(self.tails.kernel.len());
        let fmt = |v: Option<&f64>| v.map(|x| format!("{x:.17e}")).unwrap_or_default();
        for i in 0..n {
            s.push_str(&format!(
                "{i},{},{},{}\n",
                fmt(self.tails.classical.get(i)),
                fmt(self.tails.boundary.get(i)),
                fmt(self.tails.kernel.get(i))
            ));
        }
        s
    }
}

/// Which pencils to solve.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct KornOptions {
    /// Solve `(M + K, H)`.
    pub classical: bool,
    /// Solve `(B + K, H)`.
    pub boundary: bool,
    /// Solve `(K, M)`.
    pub kernel: bool,
    /// Number of tail eigenvalues kept.
    pub tail_len: usize,
}

impl Default for KornOptions {
    fn default() -> Self {
        KornOptions {
            classical: true,
            boundary: true,
            kernel: true,
            tail_len: 16,
        }
    }
}

/// Korn constants and stf-gradient kernel dimension from assembled forms.
/// Pencils that are not requested report `NaN` (or zero kernel dimension).
pub fn korn_constants(forms: &CubeForms, opts: &KornOptions) -> Result<KornReport> {
    let m = forms.l2.to_dense();
    let k = forms.stf.to_dense();
    let tail = |v: &[f64]| v.iter().take(opts.tail_len).copied().collect::<Vec<_>>();
    let mut classical = vec![];
    let mut boundary = vec![];
    let mut kernel = vec![];
    let (mut lc, mut lb) = (f64::NAN, f64::NAN);
    let (mut kdim, mut gap) = (0usize, f64::NAN);
    if opts.classical || opts.boundary {
        let h = forms.h1.to_dense();
        if opts.classical {
            let ev = generalized_eigenvalues(&(&m + &k), &h)?;
            lc = ev[0];
            classical = tail(&ev);
        }
        if opts.boundary {
            let b = forms.boundary.to_dense();
            let ev = generalized_eigenvalues(&(&b + &k), &h)?;
            lb = ev[0];
            boundary = tail(&ev);
        }
    }
    if opts.kernel {
        let ev = generalized_eigenvalues(&k, &m)?;
        let top = ev.last().copied().unwrap_or(0.0).abs();
        kdim = ev.iter().filter(|&&v| v < KERNEL_THRESHOLD * top).count();
        gap = ev.get(kdim).map(|v| v / top).unwrap_or(f64::NAN);
        kernel = tail(&ev);
    }
    Ok(KornReport {
        mesh: forms.mesh.clone(),
        n_dofs: forms.mesh.n_dofs(),
        lambda_min_classical: lc,
        lambda_min_boundary: lb,
        stf_kernel_dim: kdim,
        kernel_gap: gap,
        tails: KornTails {
            classical,
            boundary,
            kernel,
        },
    })
}

/// Boundary norm study of conformal-Killing fields.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CkVanishingReport {
    /// Number of fields tested.
    pub samples: usize,
    /// Smallest boundary `L²` norm among unit-normalized nonzero fields.
    pub min_boundary_norm: f64,
    /// Largest analytic `|stf∇u|` seen at the sample points.
    pub max_stf_gradient: f64,
}

/// Squared boundary `L²` norm of a field over the six faces of the unit
/// cube, by tensor Gauss–Legendre quadrature on each face cell of the mesh.
pub fn boundary_norm_sq(f: &CkField, mesh: &CubeMesh) -> Result<f64> {
    let rule = gauss_legendre_on(3, 0.0, 1.0)?;
    let h = mesh.h();
    let n = mesh.subdivisions;
    let mut total = 0.0;
    for ax in 0..3 {
        let (u_ax, v_ax) = ((ax + 1) % 3, (ax + 2) % 3);
        for &side in &[0.0, 1.0] {
            for eu in 0..n {
                for ev in 0..n {
                    for (qu, wu) in rule.nodes.iter().zip(&rule.weights) {
                        for (qv, wv) in rule.nodes.iter().zip(&rule.weights) {
                            let mut x = [0.0; 3];
                            x[ax] = side;
                            x[u_ax] = (eu as f64 + qu) * h;
                            x[v_ax] = (ev as f64 + qv) * h;
                            let v = ck_eval(f, &x);
                            total += wu * wv * h * h * (v[0] * v[0] + v[1] * v[1] + v[2] * v[2]);
                        }
                    }
                }
            }
        }
    }
    Ok(total)
}

/// Checks numerically that no nonzero conformal-Killing field vanishes on
/// the boundary: the boundary norm of unit-normalized random fields stays
/// away from zero, and their analytic stf gradient vanishes.
pub fn ck_vanishing_check<R: Rng + ?Sized>(rng: &mut R, samples: usize, mesh: &CubeMesh) -> Result<CkVanishingReport> {
    let mut min_norm = f64::INFINITY;
    let mut max_stf: f64 = 0.0;
    for _ in 0..samples {
        let f = CkField::random(rng).normalized();
        min_norm = min_norm.min(boundary_norm_sq(&f, mesh)?.sqrt());
        for _ in 0..4 {
            let x = [rng.gen_range(0.0..1.0), rng.gen_range(0.0..1.0), rng.gen_range(0.0..1.0)];
            max_stf = max_stf.max(ck_stf_gradient_norm(&f, &x));
        }
    }
    Ok(CkVanishingReport {
        samples,
        min_boundary_norm: min_norm,
        max_stf_gradient: max_stf,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    #[test]
    fn ck_examples() {
        let f = CkField { a: [1.0, 2.0, 3.0], ..CkField::ZERO };
        assert_eq!(ck_eval(&f, &[0.3, 0.1, 0.9]), [1.0, 2.0, 3.0]);
        let g = CkField { b: [1.0, 0.0, 0.0], ..CkField::ZERO };
        assert_eq!(ck_eval(&g, &[1.0, 0.0, 0.0]), [1.0, 0.0, 0.0]);
        let mut rng = ChaCha8Rng::seed_from_u64(3);
        for _ in 0..20 {
            let f = CkField::random(&mut rng);
            let x = [rng.gen_range(-1.0..1.0), rng.gen_range(-1.0..1.0), rng.gen_range(-1.0..1.0)];
            assert!(ck_stf_gradient_norm(&f, &x) < 1e-13);
            // finite-difference check of the analytic Jacobian
            let j = ck_jacobian(&f, &x);
            let eps = 1e-6;
            for c in 0..3 {
                let mut xp = x;
                let mut xm = x;
                xp[c] += eps;
                xm[c] -= eps;
                let (up, um) = (ck_eval(&f, &xp), ck_eval(&f, &xm));
                for i in 0..3 {
                    assert!(((up[i] - um[i]) / (2.0 * eps) - j[i][c]).abs() < 1e-8);
                }
            }
        }
    }

    #[test]
    fn lagrange_partition_of_unity() {
        for p in 1..=2 {
            for &t in &[0.0, 0.2, 0.77, 1.0] {
                let (v, d) = lagrange_1d(p, t);
                assert!((v.iter().sum::<f64>() - 1.0).abs() < 1e-14);
                assert!(d.iter().sum::<f64>().abs() < 1e-13);
            }
        }
    }

    #[test]
    fn gram_matrix_examples() {
        let mesh = CubeMesh::new(2, 2).unwrap();
        let forms = assemble_cube_forms(&mesh).unwrap();
        let e1 = mesh.interpolate(|_| [1.0, 0.0, 0.0]);
        assert!((forms.l2.bilinear(&e1, &e1) - 1.0).abs() < 1e-13);
        assert!(forms.stf.bilinear(&e1, &e1).abs() < 1e-14);
        assert!((forms.boundary.bilinear(&e1, &e1) - 6.0).abs() < 1e-12);
        let rot = mesh.interpolate(|x| [x[1], -x[0], 0.0]);
        assert!(forms.stf.bilinear(&rot, &rot).abs() < 1e-13);
        let x1 = mesh.interpolate(|x| [x[0], 0.0, 0.0]);
        assert!((forms.stf.bilinear(&x1, &x1) - 2.0 / 3.0).abs() < 1e-13);
    }

    #[test]
    fn ck_boundary_norms() {
        let mesh = CubeMesh::new(2, 2).unwrap();
        assert_eq!(boundary_norm_sq(&CkField::ZERO, &mesh).unwrap(), 0.0);
        let f = CkField { a: [1.0, 0.0, 0.0], ..CkField::ZERO };
        assert!((boundary_norm_sq(&f, &mesh).unwrap() - 6.0).abs() < 1e-13);
    }
}
