//! Regenerates the bundled model files under `data/models/`.
//!
//! Run with `cargo run -p r13lab --example generate_models`; the catalog
//! test fails whenever a bundled file drifts from this output.

use std::path::Path;

use r13lab::catalog::{catalog_models, model_document, BUNDLED_NAMES};

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let dir = Path::new(env!("CARGO_MANIFEST_DIR")).join("data/models");
    for (model, name) in catalog_models()?.iter().zip(BUNDLED_NAMES) {
        let path = dir.join(format!("{name}.toml"));
        std::fs::write(&path, model_document(model))?;
        println!("wrote {}", path.display());
    }
    Ok(())
}
