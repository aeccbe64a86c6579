//! Wall coefficients of every bundled model with their positivity and
//! consistency audits.
//!
//! Run with `cargo run --example derive_bcs`.

use r13lab::catalog::{bundled_model, BUNDLED_NAMES};
use r13lab::onsager_coefficients::coefficient_report;

fn main() -> r13lab::Result<()> {
    for name in BUNDLED_NAMES {
        let report = coefficient_report(&bundled_model(name)?, 1e-12, 1e-10)?;
        let c = &report.coefficients;
        let s: Vec<String> = (1..=8).map(|i| format!("{:.4}", c.s(i))).collect();
        let r: Vec<String> = (1..=4).map(|i| format!("{:.4}", c.r(i))).collect();
        println!("{name}: S = [{}], R = [{}]", s.join(", "), r.join(", "));
        println!(
            "    PSD: {}, duplicate gaps {:.1e}/{:.1e}, consistent: {}",
            report.psd.pass, report.duplicate_gaps[0], report.duplicate_gaps[1], report.consistent
        );
    }
    Ok(())
}
