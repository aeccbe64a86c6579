//! Korn-type inequality certificates and the conformal-Killing kernel on
//! uniform cube meshes.
//!
//! Run with `cargo run --release --example korn_certificate`.

use std::time::Instant;

use r13lab::korn_verifier::{assemble_cube_forms, korn_constants, CubeMesh, KornOptions};

fn main() -> r13lab::Result<()> {
    for (n, p) in [(2, 2), (4, 1), (4, 2)] {
        let t = Instant::now();
        let mesh = CubeMesh::new(n, p)?;
        let forms = assemble_cube_forms(&mesh)?;
        let report = korn_constants(&forms, &KornOptions { kernel: n == 2, ..KornOptions::default() })?;
        println!(
            "{n}^3 mesh, degree {p}: {} dofs, lambda_min classical {:.6e}, boundary {:.6e}, stf kernel dim {} ({:.1?})",
            report.n_dofs,
            report.lambda_min_classical,
            report.lambda_min_boundary,
            report.stf_kernel_dim,
            t.elapsed()
        );
    }
    Ok(())
}
