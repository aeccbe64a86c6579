//! One-dimensional Gaussian quadrature rules built from three-term
//! recurrences.
//!
//! Nodes are the eigenvalues of the symmetric Jacobi matrix (Golub–Welsch),
//! polished by Newton steps on the orthonormal recurrence; weights use the
//! Christoffel formula `w_i = μ₀ / Σ_k p_k(x_i)²`, which is more accurate than
//! squaring eigenvector components.

use faer::{Mat, Side};

use crate::error::{R13Error, Result};

/// Nodes and weights of a one-dimensional rule.
#[derive(Debug, Clone, PartialEq)]
pub struct Rule1d {
    /// Nodes in increasing order.
    pub nodes: Vec<f64>,
    /// Positive weights.
    pub weights: Vec<f64>,
}

impl Rule1d {
    /// Applies the rule to `f`.
    pub fn integrate(&self, f: impl Fn(f64) -> f64) -> f64 {
        self.nodes.iter().zip(&self.weights).map(|(&x, &w)| w * f(x)).sum()
    }

    /// Number of points.
    pub fn len(&self) -> usize {
        self.nodes.len()
    }

    /// True for the empty rule.
    pub fn is_empty(&self) -> bool {
        self.nodes.is_empty()
    }
}

/// Orthonormal polynomial values `p_0..p_{n}` and the derivative of `p_n` at
/// `x` for the recurrence `b_{k+1} p_{k+1} = (x − a_k) p_k − b_k p_{k−1}`.
fn recurrence_eval(n: usize, x: f64, a: &dyn Fn(usize) -> f64, b: &dyn Fn(usize) -> f64) -> (Vec<f64>, f64) {
    let mut p = vec![0.0; n + 1];
    let mut dp = vec![0.0; n + 1];
    p[0] = 1.0;
    for k in 0..n {
        let pm = if k > 0 { p[k - 1] } else { 0.0 };
        let dpm = if k > 0 { dp[k - 1] } else { 0.0 };
        let bk = if k > 0 { b(k) } else { 0.0 };
        let bk1 = b(k + 1);
        p[k + 1] = ((x - a(k)) * p[k] - bk * pm) / bk1;
        dp[k + 1] = (p[k] + (x - a(k)) * dp[k] - bk * dpm) / bk1;
    }
    let d = dp[n];
    (p, d)
}

/// Gauss rule for the measure with recurrence coefficients `a_k` (diagonal)
/// and `b_k` (off-diagonal between `k−1` and `k`) and total mass `mu0`.
pub fn gauss_from_recurrence(
    n: usize,
    a: &dyn Fn(usize) -> f64,
    b: &dyn Fn(usize) -> f64,
    mu0: f64,
) -> Result<Rule1d> {
    if n == 0 {
        return Err(R13Error::InvalidArgument("quadrature needs at least one point".into()));
    }
    let j = Mat::<f64>::from_fn(n, n, |r, c| {
        if r == c {
            a(r)
        } else if r == c + 1 {
            b(r)
        } else if c == r + 1 {
            b(c)
        } else {
            0.0
        }
    });
    let mut nodes = j
        .self_adjoint_eigenvalues(Side::Lower)
        .map_err(|e| R13Error::Solver(format!("Jacobi eigensolve failed: {e:?}")))?;
    for x in nodes.iter_mut() {
        for _ in 0..8 {
            let (p, d) = recurrence_eval(n, *x, a, b);
            if d == 0.0 {
                break;
            }
            let step = p[n] / d;
            *x -= step;
            if step.abs() <= 1e-16 * (1.0 + x.abs()) {
                break;
            }
        }
    }
    let weights = nodes
        .iter()
        .map(|&x| {
            let (p, _) = recurrence_eval(n - 1, x, a, b);
            mu0 / p.iter().map(|v| v * v).sum::<f64>()
        })
        .collect();
    Ok(Rule1d { nodes, weights })
}

/// Gauss–Legendre rule on `[−1, 1]`.
pub fn gauss_legendre(n: usize) -> Result<Rule1d> {
    gauss_from_recurrence(
        n,
        &|_| 0.0,
        &|k| {
            let k = k as f64;
            k / (4.0 * k * k - 1.0).sqrt()
        },
        2.0,
    )
}

/// Gauss–Legendre rule mapped to `[lo, hi]`.
pub fn gauss_legendre_on(n: usize, lo: f64, hi: f64) -> Result<Rule1d> {
    let r = gauss_legendre(n)?;
    let h = 0.5 * (hi - lo);
    let m = 0.5 * (hi + lo);
    Ok(Rule1d {
        nodes: r.nodes.iter().map(|x| m + h * x).collect(),
        weights: r.weights.iter().map(|w| w * h).collect(),
    })
}

/// Probabilists' Gauss–Hermite rule for the standard normal density
/// (weights sum to one).
pub fn gauss_hermite_prob(n: usize) -> Result<Rule1d> {
    gauss_from_recurrence(n, &|_| 0.0, &|k| (k as f64).sqrt(), 1.0)
}

/// Generalized Gauss–Laguerre rule for the weight `y^α e^{−y}` on `(0, ∞)`
/// (weights sum to `Γ(α+1)`).
pub fn gauss_laguerre(n: usize, alpha: f64, gamma_alpha_plus_one: f64) -> Result<Rule1d> {
    if alpha <= -1.0 {
        return Err(R13Error::InvalidArgument(format!("Laguerre parameter must exceed −1, got {alpha}")));
    }
    gauss_from_recurrence(
        n,
        &|k| 2.0 * k as f64 + alpha + 1.0,
        &|k| {
            let k = k as f64;
            (k * (k + alpha)).sqrt()
        },
        gamma_alpha_plus_one,
    )
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn legendre_integrates_monomials() {
        let r = gauss_legendre(5).unwrap();
        for p in 0..10 {
            let exact = if p % 2 == 1 { 0.0 } else { 2.0 / (p as f64 + 1.0) };
            let got = r.integrate(|x| x.powi(p));
            assert!((got - exact).abs() < 1e-14, "degree {p}: {got}");
        }
    }

    #[test]
    fn hermite_moments() {
        let r = gauss_hermite_prob(10).unwrap();
        // E[x^{2k}] = (2k-1)!!
        let expect = [1.0, 1.0, 3.0, 15.0, 105.0, 945.0];
        for (k, e) in expect.iter().enumerate() {
            let got = r.integrate(|x| x.powi(2 * k as i32));
            assert!((got - e).abs() < 1e-11 * e, "moment {k}: {got}");
        }
        assert!(r.integrate(|x| x.powi(7)).abs() < 1e-12);
    }

    #[test]
    fn laguerre_moments() {
        let sqrt_pi = std::f64::consts::PI.sqrt();
        let r = gauss_laguerre(8, 0.5, 0.5 * sqrt_pi).unwrap();
        // ∫ y^{k+1/2} e^{-y} = Γ(k + 3/2)
        let mut g = 0.5 * sqrt_pi;
        for k in 0..10 {
            let got = r.integrate(|y| y.powi(k));
            assert!((got - g).abs() < 1e-12 * g, "moment {k}");
            g *= k as f64 + 1.5;
        }
    }
}
