//! Velocity-space moment basis, Gaussian-weighted quadrature and the
//! correspondence between truncated distributions and macroscopic states.
//!
//! The basis functions are `ψ^n_{i1…il}(ξ) = L̄_n^{(l+1/2)}(|ξ|²/2) ξ_<i1…il>`
//! with the normalized associated Laguerre polynomial
//!
//! `L̄_n^{(α)}(x) = sqrt(√π / (2^{l+1} n! Γ(n+l+3/2))) x^{−α} (d/dx − 1)^n x^{n+α}`,
//! `α = l + 1/2`,
//!
//! and all inner products are taken against the standard Maxwellian
//! `f_M(ξ) = (2π)^{−3/2} e^{−|ξ|²/2}`.

use std::path::Path;

use serde::Deserialize;

use crate::error::{R13Error, Result};
use crate::quadrature::{gauss_hermite_prob, gauss_laguerre, Rule1d};
use crate::state_space::StateVector;
use crate::tensor_algebra::{Frame, StfTensor3};

/// Γ(m + 1/2) computed exactly as `(2m−1)!! / 2^m · √π`.
pub fn gamma_half_integer(m: u32) -> f64 {
    let mut g = std::f64::consts::PI.sqrt();
    for j in 0..m {
        g *= j as f64 + 0.5;
    }
    g
}

fn factorial(n: u32) -> f64 {
    (1..=n).map(|k| k as f64).product()
}

fn binomial(n: u32, k: u32) -> f64 {
    (0..k).fold(1.0, |acc, j| acc * (n - j) as f64 / (j + 1) as f64)
}

/// Normalized associated Laguerre polynomial `L̄_n^{(l+1/2)}(x)`.
///
/// Evaluated from the expanded Rodrigues form
/// `x^{−α}(d/dx − 1)^n x^{n+α} = Σ_k C(n,k) (−1)^{n−k} (n+α)(n+α−1)⋯(n+α−k+1) x^{n−k}`.
pub fn normalized_laguerre(n: i32, l: i32, x: f64) -> Result<f64> {
    if n < 0 || l < 0 {
        return Err(R13Error::InvalidArgument(format!(
            "Laguerre indices must be nonnegative, got n={n}, l={l}"
        )));
    }
    let (n, l) = (n as u32, l as u32);
    let alpha = l as f64 + 0.5;
    let pref = (std::f64::consts::PI.sqrt()
        / (2f64.powi(l as i32 + 1) * factorial(n) * gamma_half_integer(n + l + 1)))
    .sqrt();
    let mut sum = 0.0;
    let mut falling = 1.0;
    for k in 0..=n {
        if k > 0 {
            falling *= n as f64 + alpha - (k - 1) as f64;
        }
        let sign = if (n - k) % 2 == 0 { 1.0 } else { -1.0 };
        sum += binomial(n, k) * sign * falling * x.powi((n - k) as i32);
    }
    Ok(pref * sum)
}

/// Index `(n, l, i1…il)` of a basis function; axis indices are 0-based.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct BasisIndex {
    /// Radial index.
    pub n: u32,
    /// Tensor order (0, 1 or 2).
    pub l: u32,
    /// Axis indices, one per tensor slot.
    pub components: Vec<usize>,
}

impl BasisIndex {
    /// Checked constructor.
    pub fn new(n: u32, l: u32, components: Vec<usize>) -> Result<Self> {
        if l > 2 {
            return Err(R13Error::InvalidArgument(format!("tensor order {l} not supported (max 2)")));
        }
        if components.len() != l as usize || components.iter().any(|&c| c > 2) {
            return Err(R13Error::InvalidArgument(format!(
                "basis index needs {l} axis indices in 0..3, got {components:?}"
            )));
        }
        Ok(BasisIndex { n, l, components })
    }

    /// Scalar index `ψ^n`.
    pub fn scalar(n: u32) -> Self {
        BasisIndex { n, l: 0, components: vec![] }
    }

    /// Vector index `ψ^n_i`.
    pub fn vector(n: u32, i: usize) -> Self {
        BasisIndex { n, l: 1, components: vec![i] }
    }

    /// Tensor index `ψ^n_ij`.
    pub fn tensor(n: u32, i: usize, j: usize) -> Self {
        BasisIndex { n, l: 2, components: vec![i, j] }
    }

    /// Total polynomial degree `2n + l`.
    pub fn degree(&self) -> usize {
        (2 * self.n + self.l) as usize
    }

    /// Every index with `n ≤ n_max` and `l ≤ 2`.
    pub fn enumerate(n_max: u32) -> Vec<BasisIndex> {
        let mut out = Vec::new();
        for n in 0..=n_max {
            out.push(BasisIndex::scalar(n));
            for i in 0..3 {
                out.push(BasisIndex::vector(n, i));
            }
            for i in 0..3 {
                for j in 0..3 {
                    out.push(BasisIndex::tensor(n, i, j));
                }
            }
        }
        out
    }
}

fn stf_monomial(l: u32, c: &[usize], xi: &[f64; 3]) -> f64 {
    match l {
        0 => 1.0,
        1 => xi[c[0]],
        _ => {
            let r2 = xi[0] * xi[0] + xi[1] * xi[1] + xi[2] * xi[2];
            let d = if c[0] == c[1] { r2 / 3.0 } else { 0.0 };
            xi[c[0]] * xi[c[1]] - d
        }
    }
}

/// Basis function value `ψ^n_{i…}(ξ)`.
pub fn psi_eval(idx: &BasisIndex, xi: &[f64; 3]) -> f64 {
    let r2 = xi[0] * xi[0] + xi[1] * xi[1] + xi[2] * xi[2];
    let lag = normalized_laguerre(idx.n as i32, idx.l as i32, 0.5 * r2).expect("valid index");
    lag * stf_monomial(idx.l, &idx.components, xi)
}

/// Analytic inner product `⟨ψ^n_A, ψ^m_B⟩` of two basis functions.
pub fn psi_inner_exact(a: &BasisIndex, b: &BasisIndex) -> f64 {
    if a.n != b.n || a.l != b.l {
        return 0.0;
    }
    let d = |i: usize, j: usize| if i == j { 1.0 } else { 0.0 };
    match a.l {
        0 => 1.0,
        1 => d(a.components[0], b.components[0]) / 3.0,
        _ => {
            let (i, j, k, l) = (a.components[0], a.components[1], b.components[0], b.components[1]);
            (d(i, k) * d(j, l) + d(i, l) * d(j, k) - 2.0 / 3.0 * d(i, j) * d(k, l)) / 15.0
        }
    }
}

/// Tensor-product Gauss–Hermite rule against the standard Maxwellian.
#[derive(Debug, Clone)]
pub struct VelocityQuadrature {
    /// Nodes `ξ_q`.
    pub nodes: Vec<[f64; 3]>,
    /// Weights summing to one.
    pub weights: Vec<f64>,
    /// Total polynomial degree integrated exactly.
    pub exact_degree: usize,
    /// One-dimensional rule underlying the tensor product.
    pub rule: Rule1d,
}

impl VelocityQuadrature {
    /// Tensor rule with `n` points per axis (exact to total degree `2n−1`).
    pub fn tensor_gauss_hermite(n: usize) -> Result<Self> {
        let rule = gauss_hermite_prob(n)?;
        let mut nodes = Vec::with_capacity(n * n * n);
        let mut weights = Vec::with_capacity(n * n * n);
        for a in 0..n {
            for b in 0..n {
                for c in 0..n {
                    nodes.push([rule.nodes[a], rule.nodes[b], rule.nodes[c]]);
                    weights.push(rule.weights[a] * rule.weights[b] * rule.weights[c]);
                }
            }
        }
        Ok(VelocityQuadrature {
            nodes,
            weights,
            exact_degree: 2 * n - 1,
            rule,
        })
    }

    /// Applies the rule to `f`.
    pub fn integrate(&self, f: impl Fn(&[f64; 3]) -> f64) -> f64 {
        self.nodes.iter().zip(&self.weights).map(|(x, &w)| w * f(x)).sum()
    }
}

/// Result of a quadrature-evaluated inner product.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct QuadratureValue {
    /// Computed value.
    pub value: f64,
    /// False when the declared integrand degree exceeds the rule's exactness.
    pub within_exactness: bool,
}

/// Weighted inner product `⟨f, g⟩ = Σ_q w_q f(ξ_q) g(ξ_q)`.
pub fn weighted_inner(
    f: impl Fn(&[f64; 3]) -> f64,
    g: impl Fn(&[f64; 3]) -> f64,
    quad: &VelocityQuadrature,
) -> f64 {
    quad.integrate(|x| f(x) * g(x))
}

/// Weighted inner product with an exactness flag for integrands of the
/// declared total degree.
pub fn weighted_inner_checked(
    f: impl Fn(&[f64; 3]) -> f64,
    g: impl Fn(&[f64; 3]) -> f64,
    product_degree: usize,
    quad: &VelocityQuadrature,
) -> QuadratureValue {
    QuadratureValue {
        value: weighted_inner(f, g, quad),
        within_exactness: product_degree <= quad.exact_degree,
    }
}

/// Coefficients of the closure functions
/// `φ_i¹ = Σ_{n≥1} c1[n−1] ψ_i^n` and `φ_ij⁰ = Σ_{n≥0} c2[n] ψ_ij^n`.
#[derive(Debug, Clone, PartialEq)]
pub struct PhiClosure {
    /// Heat-flux closure coefficients, starting at `n = 1`.
    pub c1: Vec<f64>,
    /// Stress closure coefficients, starting at `n = 0`.
    pub c2: Vec<f64>,
}

#[derive(Debug, Deserialize)]
struct RawClosure {
    truncation: Option<usize>,
    c1: Vec<f64>,
    c2: Vec<f64>,
}

/// Tolerance of the normalization check for externally supplied closures.
pub const CLOSURE_NORMALIZATION_TOL: f64 = 1e-6;

impl Default for PhiClosure {
    fn default() -> Self {
        PhiClosure::single_term()
    }
}

impl PhiClosure {
    /// Single-term closure `φ_i¹ = −√(15/2) ψ_i¹`, `φ_ij⁰ = √15 ψ_ij⁰`.
    pub fn single_term() -> Self {
        PhiClosure {
            c1: vec![-(7.5f64).sqrt()],
            c2: vec![15f64.sqrt()],
        }
    }

    /// Normalization sums `(Σ c1², Σ c2²)`; the targets are `(15/2, 15)`.
    pub fn normalization(&self) -> (f64, f64) {
        (
            self.c1.iter().map(|c| c * c).sum(),
            self.c2.iter().map(|c| c * c).sum(),
        )
    }

    /// Builds a closure from explicit coefficients and validates the
    /// normalization to [`CLOSURE_NORMALIZATION_TOL`].
    pub fn new(c1: Vec<f64>, c2: Vec<f64>) -> Result<Self> {
        if c1.is_empty() || c2.is_empty() {
            return Err(R13Error::Config("closure coefficient lists must be nonempty".into()));
        }
        let c = PhiClosure { c1, c2 };
        let (n1, n2) = c.normalization();
        if (n1 - 7.5).abs() > CLOSURE_NORMALIZATION_TOL {
            return Err(R13Error::Inconsistent(format!(
                "closure c1 normalization Σc1² = {n1}, expected 15/2 (residual {:e})",
                n1 - 7.5
            )));
        }
        if (n2 - 15.0).abs() > CLOSURE_NORMALIZATION_TOL {
            return Err(R13Error::Inconsistent(format!(
                "closure c2 normalization Σc2² = {n2}, expected 15 (residual {:e})",
                n2 - 15.0
            )));
        }
        Ok(c)
    }

    /// Parses a closure document with keys `c1`, `c2` and optional
    /// `truncation` (which must equal the list lengths).
    pub fn from_toml(text: &str) -> Result<Self> {
        let raw: RawClosure =
            toml::from_str(text).map_err(|e| R13Error::Config(format!("closure document: {e}")))?;
        if let Some(t) = raw.truncation {
            if t != raw.c1.len() || t != raw.c2.len() {
                return Err(R13Error::Config(format!(
                    "closure truncation {t} does not match list lengths ({}, {})",
                    raw.c1.len(),
                    raw.c2.len()
                )));
            }
        }
        PhiClosure::new(raw.c1, raw.c2)
    }

    /// Reads a closure document from disk.
    pub fn from_file(path: impl AsRef<Path>) -> Result<Self> {
        let path = path.as_ref();
        let text = std::fs::read_to_string(path).map_err(|e| R13Error::io(path.display().to_string(), e))?;
        PhiClosure::from_toml(&text)
    }

    /// Highest radial index used.
    pub fn max_n(&self) -> u32 {
        (self.c1.len() as u32).max(self.c2.len().saturating_sub(1) as u32)
    }

    /// `φ_i¹(ξ)`.
    pub fn phi1(&self, i: usize, xi: &[f64; 3]) -> f64 {
        self.c1
            .iter()
            .enumerate()
            .map(|(k, c)| c * psi_eval(&BasisIndex::vector(k as u32 + 1, i), xi))
            .sum()
    }

    /// `φ_ij⁰(ξ)`.
    pub fn phi0(&self, i: usize, j: usize, xi: &[f64; 3]) -> f64 {
        self.c2
            .iter()
            .enumerate()
            .map(|(k, c)| c * psi_eval(&BasisIndex::tensor(k as u32, i, j), xi))
            .sum()
    }
}

/// Truncated distribution
/// `f̃ = ρψ⁰ − √(3/2)θψ¹ + √3 u_iψ_i⁰ + (2/5)s̄_iφ_i¹ + (1/2)σ̄_ijφ_ij⁰`.
#[derive(Debug, Clone)]
pub struct TruncatedDistribution {
    /// Macroscopic coefficients.
    pub state: StateVector,
    /// Closure used for `φ`.
    pub closure: PhiClosure,
}

impl TruncatedDistribution {
    /// Value `f̃(ξ)`.
    pub fn eval(&self, xi: &[f64; 3]) -> f64 {
        let u = &self.state;
        let mut f = u.rho * psi_eval(&BasisIndex::scalar(0), xi)
            - 1.5f64.sqrt() * u.theta * psi_eval(&BasisIndex::scalar(1), xi);
        for i in 0..3 {
            f += 3f64.sqrt() * u.u[i] * psi_eval(&BasisIndex::vector(0, i), xi);
            f += 0.4 * u.s_bar[i] * self.closure.phi1(i, xi);
        }
        let s = u.sigma_bar.to_matrix();
        for i in 0..3 {
            for j in 0..3 {
                if s[i][j] != 0.0 {
                    f += 0.5 * s[i][j] * self.closure.phi0(i, j, xi);
                }
            }
        }
        f
    }

    /// Polynomial degree of `f̃`.
    pub fn degree(&self) -> usize {
        let d1 = 2 * self.closure.c1.len() + 1;
        let d2 = 2 * (self.closure.c2.len() - 1) + 2;
        d1.max(d2).max(2)
    }
}

/// Truncated distribution of a state.
pub fn tilde_f_from_state(u: &StateVector, closure: &PhiClosure) -> TruncatedDistribution {
    TruncatedDistribution {
        state: *u,
        closure: closure.clone(),
    }
}

/// Macroscopic moments of a velocity function:
/// `ρ=⟨ψ⁰,f⟩, u_i=√3⟨ψ_i⁰,f⟩, θ=−√(2/3)⟨ψ¹,f⟩, s̄_i=⟨φ_i¹,f⟩, σ̄_ij=⟨φ_ij⁰,f⟩`.
pub fn moment_extract(
    f: impl Fn(&[f64; 3]) -> f64,
    closure: &PhiClosure,
    quad: &VelocityQuadrature,
) -> StateVector {
    let mut acc = [0.0f64; 14];
    for (x, &w) in quad.nodes.iter().zip(&quad.weights) {
        let fv = w * f(x);
        if fv == 0.0 {
            continue;
        }
        acc[0] += fv * psi_eval(&BasisIndex::scalar(0), x);
        acc[1] += fv * psi_eval(&BasisIndex::scalar(1), x);
        for i in 0..3 {
            acc[2 + i] += fv * psi_eval(&BasisIndex::vector(0, i), x);
            acc[5 + i] += fv * closure.phi1(i, x);
        }
        acc[8] += fv * closure.phi0(0, 0, x);
        acc[9] += fv * closure.phi0(1, 1, x);
        acc[10] += fv * closure.phi0(0, 1, x);
        acc[11] += fv * closure.phi0(0, 2, x);
        acc[12] += fv * closure.phi0(1, 2, x);
    }
    StateVector {
        rho: acc[0],
        theta: -(2.0f64 / 3.0).sqrt() * acc[1],
        u: [3f64.sqrt() * acc[2], 3f64.sqrt() * acc[3], 3f64.sqrt() * acc[4]],
        s_bar: [acc[5], acc[6], acc[7]],
        sigma_bar: StfTensor3::new([acc[8], acc[9], acc[10], acc[11], acc[12]]),
    }
}

/// Kinetic energy `⟨f̃, f̃⟩` by quadrature.
pub fn kinetic_energy(u: &StateVector, closure: &PhiClosure, quad: &VelocityQuadrature) -> f64 {
    let f = tilde_f_from_state(u, closure);
    quad.integrate(|x| {
        let v = f.eval(x);
        v * v
    })
}

/// Half-space rule for `∫_{ξ_n > 0} ξ_n q(ξ) f_M(ξ) dξ` over the normal axis.
///
/// With `y = x²/2` the normal integral becomes
/// `(1/√(2π)) ∫₀^∞ q(√(2y)) e^{−y} dy`; the even part of `q` is a polynomial
/// in `y` (Gauss–Laguerre, `α = 0`) and the odd part is `√y` times one
/// (Gauss–Laguerre, `α = 1/2`). Both parts are integrated exactly for
/// polynomial `q` of degree below `2n`.
#[derive(Debug, Clone)]
pub struct HalfSpaceRule {
    even_nodes: Vec<f64>,
    even_weights: Vec<f64>,
    odd_nodes: Vec<f64>,
    odd_weights: Vec<f64>,
    transverse: Rule1d,
}

impl HalfSpaceRule {
    /// Rule with `n` points per Laguerre part and `m` Hermite points per
    /// tangential axis.
    pub fn new(n: usize, m: usize) -> Result<Self> {
        let inv = 1.0 / (2.0 * std::f64::consts::PI).sqrt();
        let even = gauss_laguerre(n, 0.0, 1.0)?;
        let odd = gauss_laguerre(n, 0.5, gamma_half_integer(1))?;
        Ok(HalfSpaceRule {
            even_nodes: even.nodes.iter().map(|y| (2.0 * y).sqrt()).collect(),
            even_weights: even.weights.iter().map(|w| w * inv).collect(),
            odd_nodes: odd.nodes.iter().map(|y| (2.0 * y).sqrt()).collect(),
            odd_weights: odd.nodes.iter().zip(&odd.weights).map(|(y, w)| w * inv / y.sqrt()).collect(),
            transverse: gauss_hermite_prob(m)?,
        })
    }

    /// `⟨(ξ·n)_+, q⟩` with the velocity decomposed in `frame`.
    pub fn positive_flux(&self, q: impl Fn(&[f64; 3]) -> f64, frame: &Frame) -> f64 {
        let point = |x: f64, y: f64, z: f64| {
            let mut p = [0.0; 3];
            for d in 0..3 {
                p[d] = x * frame.n[d] + y * frame.t1[d] + z * frame.t2[d];
            }
            p
        };
        let tr = &self.transverse;
        let mut total = 0.0;
        for (a, &wy) in tr.nodes.iter().zip(&tr.weights) {
            for (b, &wz) in tr.nodes.iter().zip(&tr.weights) {
                let w2 = wy * wz;
                let mut s = 0.0;
                for (&x, &w) in self.even_nodes.iter().zip(&self.even_weights) {
                    s += w * 0.5 * (q(&point(x, *a, *b)) + q(&point(-x, *a, *b)));
                }
                for (&x, &w) in self.odd_nodes.iter().zip(&self.odd_weights) {
                    s += w * 0.5 * (q(&point(x, *a, *b)) - q(&point(-x, *a, *b)));
                }
                total += w2 * s;
            }
        }
        total
    }
}

/// Wall density `ρ_W = √(2π)⟨(ξ·n)_+, f̃⟩ − θ_W/2` for the wall with outward
/// normal `frame.n`.
pub fn wall_density(
    u_at_wall: &StateVector,
    theta_w: f64,
    frame: &Frame,
    closure: &PhiClosure,
    rule: &HalfSpaceRule,
) -> f64 {
    let f = tilde_f_from_state(u_at_wall, closure);
    (2.0 * std::f64::consts::PI).sqrt() * rule.positive_flux(|x| f.eval(x), frame) - 0.5 * theta_w
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    #[test]
    fn laguerre_low_orders() {
        for &x in &[0.0, 0.3, 1.7, 4.0] {
            assert!((normalized_laguerre(0, 0, x).unwrap() - 1.0).abs() < 1e-15);
            let expect = (2.0f64 / 3.0).sqrt() * (1.5 - x);
            assert!((normalized_laguerre(1, 0, x).unwrap() - expect).abs() < 1e-14);
        }
        assert!(normalized_laguerre(-1, 0, 1.0).is_err());
        assert!(normalized_laguerre(0, -2, 1.0).is_err());
    }

    #[test]
    fn low_order_basis_functions() {
        let xi = [0.3, -1.2, 0.7];
        assert!((psi_eval(&BasisIndex::scalar(0), &xi) - 1.0).abs() < 1e-15);
        assert!((psi_eval(&BasisIndex::vector(0, 1), &xi) - xi[1] / 3f64.sqrt()).abs() < 1e-15);
        let r2: f64 = xi.iter().map(|v| v * v).sum();
        assert!((psi_eval(&BasisIndex::scalar(1), &xi) - (3.0 - r2) / 6f64.sqrt()).abs() < 1e-14);
    }

    #[test]
    fn laguerre_orthonormal_under_induced_weight() {
        // ∫ L̄_a L̄_b x^{l+1/2} e^{-x} dx = δ_ab · √π / 2^{l+1}
        for l in 0..3u32 {
            let r = gauss_laguerre(12, l as f64 + 0.5, gamma_half_integer(l + 1)).unwrap();
            for a in 0..4 {
                for b in 0..4 {
                    let v = r.integrate(|x| {
                        normalized_laguerre(a, l as i32, x).unwrap() * normalized_laguerre(b, l as i32, x).unwrap()
                    });
                    let expect = if a == b {
                        std::f64::consts::PI.sqrt() / 2f64.powi(l as i32 + 1)
                    } else {
                        0.0
                    };
                    assert!((v - expect).abs() < 1e-12, "l={l} a={a} b={b}: {v}");
                }
            }
        }
    }

    #[test]
    fn closure_normalization() {
        let c = PhiClosure::single_term();
        let (a, b) = c.normalization();
        assert!((a - 7.5).abs() < 1e-14 && (b - 15.0).abs() < 1e-14);
        assert!(PhiClosure::new(vec![1.0], vec![1.0]).is_err());
        let two = PhiClosure::from_toml("truncation = 2\nc1 = [-2.5, -1.118033988749895]\nc2 = [3.0, 2.449489742783178]")
            .unwrap();
        assert_eq!(two.c1.len(), 2);
    }

    #[test]
    fn round_trip_and_energy() {
        let quad = VelocityQuadrature::tensor_gauss_hermite(8).unwrap();
        let closure = PhiClosure::default();
        let mut rng = ChaCha8Rng::seed_from_u64(1);
        for _ in 0..5 {
            let u = StateVector::random(&mut rng);
            let f = tilde_f_from_state(&u, &closure);
            let back = moment_extract(|x| f.eval(x), &closure, &quad);
            let (a, b) = (u.to_array(), back.to_array());
            for i in 0..a.len() {
                assert!((a[i] - b[i]).abs() < 1e-12);
            }
            let e = kinetic_energy(&u, &closure, &quad);
            let m = crate::state_space::mass_inner(&u, &u);
            assert!((e - m).abs() < 1e-12 * m);
        }
    }

    #[test]
    fn wall_density_examples() {
        let rule = HalfSpaceRule::new(8, 8).unwrap();
        let closure = PhiClosure::default();
        let frame = Frame::new([-1.0, 0.0, 0.0], [0.0, 1.0, 0.0], [0.0, 0.0, 1.0]).unwrap();
        let mut u = StateVector::ZERO;
        u.rho = 1.0;
        assert!((wall_density(&u, 0.0, &frame, &closure, &rule) - 1.0).abs() < 1e-13);
        assert!((wall_density(&StateVector::ZERO, 2.0, &frame, &closure, &rule) + 1.0).abs() < 1e-15);
        let mut rng = ChaCha8Rng::seed_from_u64(2);
        let v = StateVector::random(&mut rng);
        let a = wall_density(&v, 0.0, &frame, &closure, &rule);
        let b = wall_density(&v.scale(2.5), 0.0, &frame, &closure, &rule);
        assert!((b - 2.5 * a).abs() < 1e-12);
    }
}
