//! Implicit-Euler decay of a seeded random state between resting walls at
//! the reference temperature; energy never increases and mass is conserved.
//!
//! Run with `cargo run --release --example transient_monitors`.

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use r13lab::catalog::bundled_model;
use r13lab::onsager_coefficients::boundary_coefficients;
use r13lab::slab::{assemble_blocks, random_state, run_transient, Formulation, Scheme, SlabMesh};

fn main() -> r13lab::Result<()> {
    let model = bundled_model("eta7")?;
    let coeffs = boundary_coefficients(&model)?;
    let asm = assemble_blocks(SlabMesh::new(16, 2)?, Formulation::Transient, &model, &coeffs, 0.1)?;
    let init = random_state(&asm, &mut ChaCha8Rng::seed_from_u64(7))?;
    let run = run_transient(&asm, &init, 0.01, Scheme::ImplicitEuler, 200)?;
    for (i, m) in run.monitors.iter().enumerate().step_by(25) {
        println!("step {i:3}: energy {:.6e}  boundary dissipation {:.3e}  mass {:+.3e}", m.energy, m.i_bdry, m.mass);
    }
    println!(
        "largest energy increase {:.2e}, largest mass drift {:.2e}, largest W1 {:.2e}",
        run.max_energy_increase(),
        run.max_mass_drift(),
        run.max_w1()
    );
    Ok(())
}
