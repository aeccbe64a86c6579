//! Steady Couette and Fourier flows between two walls; prints a coarse
//! profile and the energy balance of each solve.
//!
//! Run with `cargo run --release --example steady_profiles`.

use r13lab::catalog::bundled_model;
use r13lab::onsager_coefficients::boundary_coefficients;
use r13lab::slab::{profile, solve_steady, SlabMesh, WallData};

fn main() -> r13lab::Result<()> {
    let model = bundled_model("eta10")?;
    let coeffs = boundary_coefficients(&model)?;
    let cases = [("Couette, v = 1", WallData::couette(1.0)), ("Fourier, theta = -0.5 / 0.5", WallData::fourier(-0.5, 0.5))];
    for (label, wall) in cases {
        let (asm, sol) = solve_steady(SlabMesh::new(64, 2)?, &model, &coeffs, 0.1, &wall)?;
        println!("{label}: energy {:.6e}, dissipation-balance defect {:.1e}", sol.monitors.energy, sol.identity.defect);
        println!("       x      theta         u2     stress12  heat_flux1");
        for row in profile(&sol.state, &asm, 10) {
            println!(
                "  {:6.2} {:10.6} {:10.6} {:12.6} {:11.6}",
                row.x,
                row.state.theta,
                row.state.u[1],
                row.fluxes.sigma.c[2],
                row.fluxes.s[0]
            );
        }
    }
    Ok(())
}
