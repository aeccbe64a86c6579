//! Thermodynamic discriminants of the bundled models next to the tabulated
//! reference values.
//!
//! Run with `cargo run --example validate_params`.

use r13lab::catalog::{agrees_to_significant_figures, bundled_model, BUNDLED_NAMES, TABULATED};
use r13lab::model_params::thermo_discriminants;

fn main() -> r13lab::Result<()> {
    for name in BUNDLED_NAMES {
        let model = bundled_model(name)?;
        let r = thermo_discriminants(&model);
        println!(
            "{name:8} z1 = {:.4e}  w1 = {:?}  z2 = {:.4e}  w2 = {:?}  strict: {}",
            r.z1(),
            r.pair1.w,
            r.z2(),
            r.pair2.w,
            r.all_strict()
        );
        if let Some(row) = TABULATED.iter().find(|t| t.eta == model.eta && !model.maxwell) {
            let ok = [(r.z1(), row.z1), (r.w1(), row.w1), (r.z2(), row.z2), (r.w2(), row.w2)]
                .map(|(a, b)| agrees_to_significant_figures(a, b, 4));
            println!("         table z1 = {:.4e}  w1 = {}  z2 = {:.4e}  w2 = {}  agree: {ok:?}", row.z1, row.w1, row.z2, row.w2);
        }
    }
    Ok(())
}
