//! Orthonormality of the Hermite-Laguerre basis under Gauss-Hermite
//! quadrature, and agreement of the kinetic and macroscopic energies of
//! random states.
//!
//! Run with `cargo run --release --example kinetic_energy`.

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use r13lab::kinetic_basis::{kinetic_energy, psi_eval, psi_inner_exact, BasisIndex, PhiClosure, VelocityQuadrature};
use r13lab::state_space::{mass_inner, StateVector};

fn main() -> r13lab::Result<()> {
    let quad = VelocityQuadrature::tensor_gauss_hermite(10)?;
    let basis = BasisIndex::enumerate(3);
    let mut worst: f64 = 0.0;
    for a in &basis {
        for b in &basis {
            let q = quad.integrate(|x| psi_eval(a, x) * psi_eval(b, x));
            worst = worst.max((q - psi_inner_exact(a, b)).abs());
        }
    }
    println!("{} basis functions, largest Gram error {worst:.2e}", basis.len());

    let closure = PhiClosure::default();
    let mut rng = ChaCha8Rng::seed_from_u64(1);
    for _ in 0..5 {
        let u = StateVector::random(&mut rng);
        let k = kinetic_energy(&u, &closure, &quad);
        let m = mass_inner(&u, &u);
        println!("kinetic {k:.12}  macroscopic {m:.12}  relative gap {:.1e}", (k - m).abs() / m);
    }
    Ok(())
}
