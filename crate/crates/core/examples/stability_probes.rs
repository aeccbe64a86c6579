//! Discrete coercivity of the symmetric bilinear form and the inf-sup
//! constant of the pressure coupling; the Maxwell model shows the loss of
//! coercivity on temperature bubbles.
//!
//! Run with `cargo run --release --example stability_probes`.

use r13lab::catalog::bundled_model;
use r13lab::onsager_coefficients::boundary_coefficients;
use r13lab::slab::{assemble_blocks, coercivity_probe, inf_sup_probe, Formulation, SlabMesh};

fn main() -> r13lab::Result<()> {
    for name in ["eta7", "maxwell"] {
        let model = bundled_model(name)?;
        let coeffs = boundary_coefficients(&model)?;
        let asm = assemble_blocks(SlabMesh::new(16, 2)?, Formulation::NonMaxwell, &model, &coeffs, 0.1)?;
        let c = coercivity_probe(&asm, 4)?;
        println!(
            "{name}: lambda_min {:.3e}, near-null modes {}, bubble value {:.3e} (norm^2 {:.3e})",
            c.lambda_min, c.near_null, c.bubble_value, c.bubble_norm_sq
        );
        if !model.maxwell {
            let s = inf_sup_probe(&asm)?;
            println!("{name}: inf-sup beta {:.4} (largest singular value {:.4})", s.beta, s.sigma_max);
        }
    }
    Ok(())
}
