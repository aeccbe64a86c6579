//! The macroscopic R13 state, its mass-weighted inner product, the
//! relaxation operator, the entropy density and the map to physical fluxes.
//!
//! A state is serialized in the canonical order
//! `ρ, θ, u1, u2, u3, s̄1, s̄2, s̄3, σ̄11, σ̄22, σ̄12, σ̄13, σ̄23`
//! (the stress uses the five canonical stf components, see
//! [`crate::tensor_algebra`]), giving 1 + 1 + 3 + 3 + 5 = 13 components.

use rand::Rng;
use serde::{Deserialize, Serialize};

use crate::error::{R13Error, Result};
use crate::model_params::MolecularModel;
use crate::tensor_algebra::{dot3, slab_grad_stf2, slab_grad_vec, StfTensor3};

/// Number of scalar components of a pointwise state.
pub const STATE_DIM: usize = 13;

/// Component names in canonical serialization order.
pub const STATE_COMPONENT_NAMES: [&str; STATE_DIM] = [
    "rho", "theta", "u1", "u2", "u3", "s1", "s2", "s3", "sigma11", "sigma22", "sigma12", "sigma13",
    "sigma23",
];

/// Pointwise macroscopic state `(ρ, θ, u, s̄, σ̄)`.
#[derive(Debug, Clone, Copy, PartialEq, Default, Serialize, Deserialize)]
pub struct StateVector {
    /// Density perturbation.
    pub rho: f64,
    /// Temperature perturbation.
    pub theta: f64,
    /// Velocity.
    pub u: [f64; 3],
    /// Modified heat flux.
    pub s_bar: [f64; 3],
    /// Modified stress.
    pub sigma_bar: StfTensor3,
}

impl StateVector {
    /// The zero state.
    pub const ZERO: StateVector = StateVector {
        rho: 0.0,
        theta: 0.0,
        u: [0.0; 3],
        s_bar: [0.0; 3],
        sigma_bar: StfTensor3::ZERO,
    };

    /// Canonical component array.
    pub fn to_array(&self) -> [f64; STATE_DIM] {
        let mut a = [0.0; STATE_DIM];
        a[0] = self.rho;
        a[1] = self.theta;
        a[2..5].copy_from_slice(&self.u);
        a[5..8].copy_from_slice(&self.s_bar);
        a[8..13].copy_from_slice(&self.sigma_bar.c);
        a
    }

    /// Inverse of [`StateVector::to_array`].
    pub fn from_array(a: &[f64; STATE_DIM]) -> Self {
        StateVector {
            rho: a[0],
            theta: a[1],
            u: [a[2], a[3], a[4]],
            s_bar: [a[5], a[6], a[7]],
            sigma_bar: StfTensor3::new([a[8], a[9], a[10], a[11], a[12]]),
        }
    }

    /// `a·self + b·other`.
    pub fn axpby(&self, a: f64, other: &StateVector, b: f64) -> StateVector {
        let x = self.to_array();
        let y = other.to_array();
        let mut z = [0.0; STATE_DIM];
        for i in 0..STATE_DIM {
            z[i] = a * x[i] + b * y[i];
        }
        StateVector::from_array(&z)
    }

    /// `a·self`.
    pub fn scale(&self, a: f64) -> StateVector {
        self.axpby(a, &StateVector::ZERO, 0.0)
    }

    /// Pseudo-random state with every canonical component uniform in
    /// `[−1, 1]`.
    pub fn random<R: Rng + ?Sized>(rng: &mut R) -> StateVector {
        let mut a = [0.0; STATE_DIM];
        for v in a.iter_mut() {
            *v = rng.gen_range(-1.0..=1.0);
        }
        StateVector::from_array(&a)
    }
}

/// Physical stress and heat flux reconstructed from the modified variables.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct PhysicalFluxes {
    /// Physical stress.
    pub sigma: StfTensor3,
    /// Physical heat flux.
    pub s: [f64; 3],
}

/// Mass-weighted inner product
/// `ρ₁ρ₂ + (3/2)θ₁θ₂ + u₁·u₂ + (2/5)s̄₁·s̄₂ + (1/2)σ̄₁:σ̄₂`.
pub fn mass_inner(a: &StateVector, b: &StateVector) -> f64 {
    a.rho * b.rho
        + 1.5 * a.theta * b.theta
        + dot3(&a.u, &b.u)
        + 0.4 * dot3(&a.s_bar, &b.s_bar)
        + 0.5 * a.sigma_bar.dot(&b.sigma_bar)
}

/// Diagonal weights of the mass matrix per canonical component.
///
/// The stress weights account for the Frobenius product of the full
/// symmetric matrix: `σ:τ = 2σ11τ11 + 2σ22τ22 + σ11τ22 + σ22τ11 + 2(σ12τ12 +
/// σ13τ13 + σ23τ23)`, so the stress block is not diagonal; see
/// [`stf_gram`].
pub const MASS_SCALAR_WEIGHTS: [f64; 8] = [1.0, 1.5, 1.0, 1.0, 1.0, 0.4, 0.4, 0.4];

/// Gram matrix of the Frobenius product in canonical stf components:
/// `σ:τ = Σ_ab G_ab σ_a τ_b`.
pub const fn stf_gram() -> [[f64; 5]; 5] {
    [
        [2.0, 1.0, 0.0, 0.0, 0.0],
        [1.0, 2.0, 0.0, 0.0, 0.0],
        [0.0, 0.0, 2.0, 0.0, 0.0],
        [0.0, 0.0, 0.0, 2.0, 0.0],
        [0.0, 0.0, 0.0, 0.0, 2.0],
    ]
}

/// Relaxation operator `S𝒰` in the mass-weighted convention:
/// zero on `(ρ, θ, u)`, `−(4 l1 / 15 Kn) s̄` and `−(l2 / 2 Kn) σ̄`.
pub fn relaxation_apply(u: &StateVector, model: &MolecularModel, kn: f64) -> Result<StateVector> {
    check_kn(kn)?;
    let cs = -4.0 * model.l1 / (15.0 * kn);
    let cp = -model.l2 / (2.0 * kn);
    Ok(StateVector {
        rho: 0.0,
        theta: 0.0,
        u: [0.0; 3],
        s_bar: u.s_bar.map(|v| cs * v),
        sigma_bar: u.sigma_bar.scale(cp),
    })
}

/// Relaxation in the evolution-equation normalization `M⁻¹S𝒰`:
/// `−(2 l1 / 3 Kn) s̄` and `−(l2 / Kn) σ̄`.
pub fn relaxation_damping(u: &StateVector, model: &MolecularModel, kn: f64) -> Result<StateVector> {
    check_kn(kn)?;
    let cs = -2.0 * model.l1 / (3.0 * kn);
    let cp = -model.l2 / kn;
    Ok(StateVector {
        rho: 0.0,
        theta: 0.0,
        u: [0.0; 3],
        s_bar: u.s_bar.map(|v| cs * v),
        sigma_bar: u.sigma_bar.scale(cp),
    })
}

fn check_kn(kn: f64) -> Result<()> {
    if !(kn.is_finite() && kn > 0.0) {
        return Err(R13Error::InvalidArgument(format!("Knudsen number must be positive, got {kn}")));
    }
    Ok(())
}

/// Entropy density `H₀ − ½ ⟨𝒰, M𝒰⟩`.
pub fn entropy_density(u: &StateVector, h0: f64) -> f64 {
    h0 - 0.5 * mass_inner(u, u)
}

/// Physical stress and heat flux from the modified variables and their
/// derivatives along the slab axis:
///
/// `σ = k5 σ̄ − k4 Kn (∇s̄)_stf − k3 Kn (∇u)_stf`,
/// `s = k0 s̄ − (3/2) k1 Kn ∇θ + (3/2) k2 Kn ∇·σ̄`.
pub fn physical_fluxes(
    values: &StateVector,
    derivs: &StateVector,
    model: &MolecularModel,
    kn: f64,
) -> PhysicalFluxes {
    let k = &model.k;
    let (_, stf_du) = slab_grad_vec(&values.u, &derivs.u);
    let (_, stf_ds) = slab_grad_vec(&values.s_bar, &derivs.s_bar);
    let sigma = values
        .sigma_bar
        .scale(k[5])
        .axpby(1.0, &stf_ds, -k[4] * kn)
        .axpby(1.0, &stf_du, -k[3] * kn);
    let div = slab_grad_stf2(&values.sigma_bar, &derivs.sigma_bar).div;
    let grad_theta = [derivs.theta, 0.0, 0.0];
    let mut s = [0.0; 3];
    for i in 0..3 {
        s[i] = k[0] * values.s_bar[i] - 1.5 * k[1] * kn * grad_theta[i] + 1.5 * k[2] * kn * div[i];
    }
    PhysicalFluxes { sigma, s }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::model_params::{Eta, MTable, MolecularModel};
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    fn model() -> MolecularModel {
        let k = [0.9, 0.1, 0.01, 0.2, 0.05, 0.8, 1.0, 1.0, 1.0, 1.0, 0.3];
        MolecularModel::new("t", Eta::Finite(7.0), k, 1.3, 0.7, MTable::zeros(), 1.0).unwrap()
    }

    #[test]
    fn mass_inner_examples() {
        let mut u = StateVector::ZERO;
        u.rho = 1.0;
        assert_eq!(mass_inner(&u, &u), 1.0);
        let mut t = StateVector::ZERO;
        t.theta = 1.0;
        assert_eq!(mass_inner(&t, &t), 1.5);
    }

    #[test]
    fn mass_inner_matches_stf_gram() {
        let mut rng = ChaCha8Rng::seed_from_u64(3);
        let a = StateVector::random(&mut rng);
        let b = StateVector::random(&mut rng);
        let g = stf_gram();
        let mut expect = 0.0;
        let (x, y) = (a.to_array(), b.to_array());
        for i in 0..8 {
            expect += MASS_SCALAR_WEIGHTS[i] * x[i] * y[i];
        }
        for p in 0..5 {
            for q in 0..5 {
                expect += 0.5 * g[p][q] * x[8 + p] * y[8 + q];
            }
        }
        assert!((mass_inner(&a, &b) - expect).abs() < 1e-14);
    }

    #[test]
    fn relaxation_forms() {
        let m = model();
        let mut rng = ChaCha8Rng::seed_from_u64(5);
        let u = StateVector::random(&mut rng);
        let d = relaxation_damping(&u, &m, 0.1).unwrap();
        for i in 0..3 {
            assert!((d.s_bar[i] + 2.0 * 1.3 / 0.3 * u.s_bar[i]).abs() < 1e-12);
        }
        let s = relaxation_apply(&u, &m, 0.1).unwrap();
        assert!(mass_inner(&u, &s) <= 0.0);
        assert!(relaxation_apply(&u, &m, 0.0).is_err());
    }

    #[test]
    fn entropy_density_examples() {
        let mut u = StateVector::ZERO;
        assert_eq!(entropy_density(&u, 2.5), 2.5);
        u.rho = 1.0;
        assert_eq!(entropy_density(&u, 0.0), -0.5);
    }

    #[test]
    fn maxwell_fluxes_are_identity() {
        let m = crate::model_params::maxwell_specialize(&model());
        let mut rng = ChaCha8Rng::seed_from_u64(9);
        let v = StateVector::random(&mut rng);
        let d = StateVector::random(&mut rng);
        let f = physical_fluxes(&v, &d, &m, 0.3);
        assert_eq!(f.s, v.s_bar);
        for i in 0..5 {
            assert!((f.sigma.c[i] - v.sigma_bar.c[i]).abs() < 1e-15);
        }
    }

    #[test]
    fn zero_derivatives_scale_fluxes() {
        let m = model();
        let mut rng = ChaCha8Rng::seed_from_u64(11);
        let v = StateVector::random(&mut rng);
        let f = physical_fluxes(&v, &StateVector::ZERO, &m, 0.3);
        for i in 0..3 {
            assert!((f.s[i] - 0.9 * v.s_bar[i]).abs() < 1e-15);
        }
        for i in 0..5 {
            assert!((f.sigma.c[i] - 0.8 * v.sigma_bar.c[i]).abs() < 1e-15);
        }
    }

    mod properties {
        use super::*;
        use proptest::prelude::*;

        fn state() -> impl Strategy<Value = StateVector> {
            prop::array::uniform13(-10.0..10.0f64).prop_map(|a| StateVector::from_array(&a))
        }

        proptest! {
            #[test]
            fn mass_inner_is_symmetric_and_bilinear(a in state(), b in state(), c in state(), s in -3.0..3.0f64) {
                let ab = mass_inner(&a, &b);
                prop_assert!((ab - mass_inner(&b, &a)).abs() <= 1e-12 * (1.0 + ab.abs()));
                let lhs = mass_inner(&a.axpby(s, &b, 1.0), &c);
                let rhs = s * mass_inner(&a, &c) + mass_inner(&b, &c);
                prop_assert!((lhs - rhs).abs() <= 1e-9, "{lhs} vs {rhs}");
            }

            #[test]
            fn mass_inner_is_positive_definite(a in state()) {
                let sq: f64 = a.to_array().iter().map(|x| x * x).sum();
                // Smallest weight: 2/5 on the heat flux, 1/2 on the stress
                // Gram matrix whose least eigenvalue is 1.
                prop_assert!(mass_inner(&a, &a) >= 0.4 * sq * (1.0 - 1e-12));
            }
        }
    }

}
