//! Self-convergence of the Couette solution on a mesh ladder against a
//! refined reference.
//!
//! Run with `cargo run --release --example convergence`.

use r13lab::catalog::bundled_model;
use r13lab::onsager_coefficients::boundary_coefficients;
use r13lab::slab::{convergence_study, WallData};

fn main() -> r13lab::Result<()> {
    let model = bundled_model("eta10")?;
    let coeffs = boundary_coefficients(&model)?;
    let report = convergence_study(&model, &coeffs, 0.1, &WallData::couette(1.0), 2, &[16, 32, 64, 128])?;
    print!("{}", report.to_csv());
    println!("monotone: {}, smallest ratio: {:?}", report.monotone(), report.min_ratio());
    Ok(())
}
