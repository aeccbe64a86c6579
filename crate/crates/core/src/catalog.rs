//! Bundled molecular models and the tabulated reference values they are
//! built from.
//!
//! Only `k1, k2, k3, k4, k7, k10` are tabulated for the inverse-power
//! models. The remaining bulk coefficients `k0, k5, k6, k8, k9`, the
//! relaxation rates `l1, l2` and the accommodation coefficient `χ` take the
//! placeholder value 1, and the `m` table is synthesized by
//! [`consistent_table`] so that every wall-coefficient audit holds exactly.
//! Every bundled file says so in its header.

use crate::error::{R13Error, Result};
use crate::model_params::{load_model, maxwell_specialize, Eta, MTable, MolecularModel};
use crate::onsager_coefficients::{consistent_table, TableDesign};

/// One row of the reference table: tabulated coefficients and the two
/// discriminant pairs `(z1, w1)`, `(z2, w2)`.
#[derive(Debug, Clone, Copy, PartialEq, serde::Serialize, serde::Deserialize)]
pub struct TabulatedRow {
    /// Potential exponent.
    pub eta: Eta,
    /// `k1`.
    pub k1: f64,
    /// `k2`.
    pub k2: f64,
    /// `k10`.
    pub k10: f64,
    /// `z1 = k1 k10 − 3 k2²`.
    pub z1: f64,
    /// `w1 = 3 k2² / (k1 k10)`.
    pub w1: f64,
    /// `k3`.
    pub k3: f64,
    /// `k4`.
    pub k4: f64,
    /// `k7`.
    pub k7: f64,
    /// `z2 = 24 k3 k7 − 25 k4²`.
    pub z2: f64,
    /// `w2 = 25 k4² / (24 k3 k7)`.
    pub w2: f64,
}

/// Tabulated coefficients and discriminants (four significant figures).
pub const TABULATED: [TabulatedRow; 4] = [
    TabulatedRow {
        eta: Eta::Finite(7.0),
        k1: 3.0773e-3,
        k2: 1.2550e-5,
        k10: 2.8590e-7,
        z1: 4.0729e-10,
        w1: 0.5371,
        k3: 2.6072e-3,
        k4: 4.8885e-2,
        k7: 9.7119e-1,
        z2: 1.0265e-3,
        w2: 0.9831,
    },
    TabulatedRow {
        eta: Eta::Finite(10.0),
        k1: 8.7436e-3,
        k2: 4.5818e-5,
        k10: 1.1896e-6,
        z1: 4.1035e-9,
        w1: 0.6055,
        k3: 7.4080e-3,
        k4: 8.1805e-2,
        k7: 9.5624e-1,
        z2: 2.7104e-3,
        w2: 0.9841,
    },
    TabulatedRow {
        eta: Eta::Finite(17.0),
        k1: 1.6341e-2,
        k2: 1.0021e-4,
        k10: 2.8475e-6,
        z1: 1.5190e-8,
        w1: 0.6474,
        k3: 1.3840e-2,
        k4: 1.1124e-1,
        k7: 9.4576e-1,
        z2: 4.7852e-3,
        w2: 0.9848,
    },
    TabulatedRow {
        eta: Eta::INFINITY,
        k1: 3.0261e-2,
        k2: 2.0798e-4,
        k10: 6.3621e-6,
        z1: 6.2756e-8,
        w1: 0.6740,
        k3: 2.5607e-2,
        k4: 1.5056e-1,
        k7: 9.3584e-1,
        z2: 8.4295e-3,
        w2: 0.9853,
    },
];

/// Placeholder value of every untabulated parameter.
pub const PLACEHOLDER: f64 = 1.0;

/// File names of the bundled models, in catalog order.
pub const BUNDLED_NAMES: [&str; 5] = ["eta7", "eta10", "eta17", "eta_inf", "maxwell"];

const BUNDLED_SOURCES: [&str; 5] = [
    include_str!("../data/models/eta7.toml"),
    include_str!("../data/models/eta10.toml"),
    include_str!("../data/models/eta17.toml"),
    include_str!("../data/models/eta_inf.toml"),
    include_str!("../data/models/maxwell.toml"),
];

/// Bulk coefficients of a tabulated row with placeholders elsewhere.
pub fn tabulated_k(row: &TabulatedRow) -> [f64; 11] {
    let p = PLACEHOLDER;
    [p, row.k1, row.k2, row.k3, row.k4, p, p, row.k7, p, p, row.k10]
}

fn with_table(model: MolecularModel) -> Result<MolecularModel> {
    let m = consistent_table(&model, &TableDesign::default())?;
    let mut out = model;
    out.m = m;
    out.validate()?;
    Ok(out)
}

/// Builds the five catalog models from the tabulated rows.
pub fn catalog_models() -> Result<Vec<MolecularModel>> {
    let mut out = Vec::new();
    for (row, name) in TABULATED.iter().zip(BUNDLED_NAMES) {
        let base = MolecularModel::new(
            name,
            row.eta,
            tabulated_k(row),
            PLACEHOLDER,
            PLACEHOLDER,
            MTable::zeros(),
            PLACEHOLDER,
        )?;
        out.push(with_table(base)?);
    }
    let mut maxwell = maxwell_specialize(&out[3]);
    maxwell.name = BUNDLED_NAMES[4].to_string();
    maxwell.eta = Eta::Finite(5.0);
    out.push(with_table(maxwell)?);
    Ok(out)
}

/// Model document with the provenance header of a bundled file.
pub fn model_document(model: &MolecularModel) -> String {
    let origin = if model.maxwell {
        "Maxwell specialization of the eta = infinity model (k0 = k5 = 1, k1..k4 = 0)".to_string()
    } else {
        format!("k1, k2, k3, k4, k7, k10: tabulated values for eta = {}", model.eta)
    };
    format!(
        "# Generated by `cargo run -p r13lab --example generate_models`; do not edit by hand.\n\
         # {origin}.\n\
         # k0, k5, k6, k8, k9, l1, l2 and chi are placeholders (1.0): no tabulated values exist.\n\
         # The m table is synthetic: all proportionality ratios are exact and every\n\
         # duplicate and alternative wall-coefficient path agrees.\n\
         {}",
        model.to_toml_string()
    )
}

/// `a` agrees with the reference `b` to `digits` significant figures:
/// `|a − b| ≤ ½·10^(1−digits)·|b|` (relative `5e−4` for four figures).
pub fn agrees_to_significant_figures(a: f64, b: f64, digits: usize) -> bool {
    let tol = 0.5 * 10f64.powi(1 - digits as i32);
    a.is_finite() && b.is_finite() && (a - b).abs() <= tol * b.abs()
}

/// Source text of a bundled model file.
pub fn bundled_source(name: &str) -> Result<&'static str> {
    BUNDLED_NAMES
        .iter()
        .position(|n| *n == name)
        .map(|i| BUNDLED_SOURCES[i])
        .ok_or_else(|| {
            R13Error::Config(format!("unknown bundled model `{name}` (known: {})", BUNDLED_NAMES.join(", ")))
        })
}

/// Parses a bundled model.
pub fn bundled_model(name: &str) -> Result<MolecularModel> {
    load_model(bundled_source(name)?)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn bundled_files_match_the_generator() {
        let models = catalog_models().unwrap();
        for (m, name) in models.iter().zip(BUNDLED_NAMES) {
            assert_eq!(bundled_source(name).unwrap(), model_document(m), "{name} is stale");
            assert_eq!(&bundled_model(name).unwrap(), m);
        }
    }

    #[test]
    fn significant_figure_agreement() {
        assert!(agrees_to_significant_figures(4.0729257e-10, 4.0729e-10, 4));
        assert!(agrees_to_significant_figures(1.026497e-3, 1.0265e-3, 4));
        assert!(!agrees_to_significant_figures(1.6405e-8, 1.5190e-8, 4));
        assert!(!agrees_to_significant_figures(f64::NAN, 1.0, 4));
    }

    #[test]
    fn unknown_name_is_a_config_error() {
        assert_eq!(bundled_model("argon").unwrap_err().exit_code(), 2);
    }

    mod properties {
        use super::*;
        use proptest::prelude::*;

        proptest! {
            #[test]
            fn four_figures_means_relative_5e_minus_4(b in 1e-12..1e3f64, r in -0.99..0.99f64) {
                prop_assert!(agrees_to_significant_figures(b * (1.0 + 4.99e-4 * r), b, 4));
                prop_assert!(!agrees_to_significant_figures(b * (1.0 + 5.01e-4 * r.signum()), b, 4));
            }
        }
    }

}
