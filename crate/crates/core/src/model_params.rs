//! Molecular-model parameter sets: loading, validation, thermodynamic
//! discriminants and the Maxwell specialization.
//!
//! A model document is TOML with the following keys:
//!
//! ```toml
//! name = "eta7"            # free-form label
//! eta = 7.0                # interaction exponent, or the string "infinity"
//! chi = 1.0                # accommodation coefficient in (0, 1]
//! l1 = 1.0                 # relaxation coefficients, strictly positive
//! l2 = 1.0
//! k = [1.0, 3.0773e-3, ...] # eleven bulk coefficients k0..k10, all >= 0
//! maxwell = false          # optional flag, set by the Maxwell specialization
//!
//! [m]                      # wall coefficient table m_jk, rows 1..8, 9 columns each
//! row1 = [m11, m12, ..., m19]
//! ...
//! row8 = [m81, ..., m89]
//! ```
//!
//! Entries of the `m` table that do not occur in any wall condition are
//! carried along but never read.

use std::fmt;
use std::path::Path;

use serde::{Deserialize, Serialize};

use crate::error::{R13Error, Result};

/// Number of bulk coefficients `k0..k10`.
pub const N_K: usize = 11;
/// Rows of the wall coefficient table.
pub const M_ROWS: usize = 8;
/// Columns of the wall coefficient table.
pub const M_COLS: usize = 9;

/// Interaction exponent of the inverse-power-law potential.
///
/// The infinite exponent (hard spheres) is a label only and never enters
/// arithmetic.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum Eta {
    /// Finite exponent.
    Finite(f64),
    /// The sentinel string `"infinity"`.
    Label(EtaLabel),
}

/// Sentinel for the infinite exponent.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum EtaLabel {
    /// Hard-sphere limit.
    Infinity,
}

impl Eta {
    /// The infinite exponent.
    pub const INFINITY: Eta = Eta::Label(EtaLabel::Infinity);
}

impl fmt::Display for Eta {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Eta::Finite(v) => write!(f, "{v}"),
            Eta::Label(_) => write!(f, "infinity"),
        }
    }
}

/// Wall coefficient table `m_jk` (rows 1..8, columns 1..9).
#[derive(Debug, Clone, Copy, PartialEq, Default)]
pub struct MTable {
    entries: [[f64; M_COLS]; M_ROWS],
}

impl MTable {
    /// All-zero table.
    pub fn zeros() -> Self {
        MTable {
            entries: [[0.0; M_COLS]; M_ROWS],
        }
    }

    /// Entry `m_jk` with 1-based indices as written in the wall conditions.
    ///
    /// # Panics
    /// Panics if an index is out of range.
    pub fn get(&self, j: usize, k: usize) -> f64 {
        assert!((1..=M_ROWS).contains(&j) && (1..=M_COLS).contains(&k), "m_{j}{k} out of range");
        self.entries[j - 1][k - 1]
    }

    /// Sets entry `m_jk` (1-based).
    pub fn set(&mut self, j: usize, k: usize, value: f64) {
        assert!((1..=M_ROWS).contains(&j) && (1..=M_COLS).contains(&k), "m_{j}{k} out of range");
        self.entries[j - 1][k - 1] = value;
    }

    /// Row `j` (1-based) as a slice.
    pub fn row(&self, j: usize) -> &[f64; M_COLS] {
        &self.entries[j - 1]
    }

    /// Scales row `j` (1-based) by `factor`.
    pub fn scale_row(&mut self, j: usize, factor: f64) {
        for v in self.entries[j - 1].iter_mut() {
            *v *= factor;
        }
    }
}

/// All parameters of one gas model.
#[derive(Debug, Clone, PartialEq)]
pub struct MolecularModel {
    /// Free-form label.
    pub name: String,
    /// Interaction exponent.
    pub eta: Eta,
    /// Bulk coefficients `k0..k10`.
    pub k: [f64; N_K],
    /// Heat-flux relaxation coefficient.
    pub l1: f64,
    /// Stress relaxation coefficient.
    pub l2: f64,
    /// Wall coefficient table.
    pub m: MTable,
    /// Accommodation coefficient in `(0, 1]`.
    pub chi: f64,
    /// Modified accommodation factor `2χ/(2−χ)`.
    pub chi_tilde: f64,
    /// Set for Maxwell-specialized models.
    pub maxwell: bool,
}

/// Raw document layout; every field optional so that missing keys produce
/// named diagnostics.
#[derive(Debug, Deserialize, Serialize)]
struct RawModel {
    name: Option<String>,
    eta: Option<Eta>,
    chi: Option<f64>,
    l1: Option<f64>,
    l2: Option<f64>,
    k: Option<Vec<f64>>,
    maxwell: Option<bool>,
    m: Option<RawMTable>,
}

#[derive(Debug, Deserialize, Serialize)]
struct RawMTable {
    row1: Option<Vec<f64>>,
    row2: Option<Vec<f64>>,
    row3: Option<Vec<f64>>,
    row4: Option<Vec<f64>>,
    row5: Option<Vec<f64>>,
    row6: Option<Vec<f64>>,
    row7: Option<Vec<f64>>,
    row8: Option<Vec<f64>>,
}

/// Modified accommodation factor `2χ/(2−χ)`.
pub fn chi_tilde(chi: f64) -> f64 {
    2.0 * chi / (2.0 - chi)
}

impl MolecularModel {
    /// Builds a model from its parts and checks every invariant.
    pub fn new(
        name: impl Into<String>,
        eta: Eta,
        k: [f64; N_K],
        l1: f64,
        l2: f64,
        m: MTable,
        chi: f64,
    ) -> Result<Self> {
        let model = MolecularModel {
            name: name.into(),
            eta,
            k,
            l1,
            l2,
            m,
            chi,
            chi_tilde: chi_tilde(chi),
            maxwell: false,
        };
        model.validate()?;
        Ok(model)
    }

    /// Checks the parameter invariants: `k_i ≥ 0`, `l_j > 0`, `χ ∈ (0, 1]`,
    /// finite entries everywhere.
    pub fn validate(&self) -> Result<()> {
        for (i, &ki) in self.k.iter().enumerate() {
            if !ki.is_finite() {
                return Err(R13Error::field(format!("k[{i}]"), "must be finite"));
            }
            if ki < 0.0 {
                return Err(R13Error::field(format!("k[{i}]"), format!("k{i} must be nonnegative, got {ki}")));
            }
        }
        for (name, v) in [("l1", self.l1), ("l2", self.l2)] {
            if !(v.is_finite() && v > 0.0) {
                return Err(R13Error::field(name, format!("{name} must be positive, got {v}")));
            }
        }
        if !(self.chi.is_finite() && self.chi > 0.0 && self.chi <= 1.0) {
            return Err(R13Error::field("chi", format!("chi must lie in (0, 1], got {}", self.chi)));
        }
        if !(self.chi_tilde > 0.0) || self.chi_tilde != chi_tilde(self.chi) {
            return Err(R13Error::field("chi_tilde", "must equal 2 chi / (2 - chi)"));
        }
        for j in 1..=M_ROWS {
            for kk in 1..=M_COLS {
                if !self.m.get(j, kk).is_finite() {
                    return Err(R13Error::field(format!("m.row{j}[{}]", kk - 1), "must be finite"));
                }
            }
        }
        Ok(())
    }

    /// Bulk coefficient `k_i`.
    pub fn ki(&self, i: usize) -> f64 {
        self.k[i]
    }

    /// Serializes the model to the documented TOML layout.
    pub fn to_toml_string(&self) -> String {
        let mut out = String::new();
        out.push_str(&format!("name = {:?}\n", self.name));
        match self.eta {
            Eta::Finite(v) => out.push_str(&format!("eta = {v:?}\n")),
            Eta::Label(_) => out.push_str("eta = \"infinity\"\n"),
        }
        out.push_str(&format!("chi = {:?}\n", self.chi));
        out.push_str(&format!("l1 = {:?}\n", self.l1));
        out.push_str(&format!("l2 = {:?}\n", self.l2));
        out.push_str(&format!("maxwell = {}\n", self.maxwell));
        out.push_str("k = [");
        out.push_str(&self.k.iter().map(|v| format!("{v:?}")).collect::<Vec<_>>().join(", "));
        out.push_str("]\n\n[m]\n");
        for j in 1..=M_ROWS {
            let row = self.m.row(j).iter().map(|v| format!("{v:?}")).collect::<Vec<_>>().join(", ");
            out.push_str(&format!("row{j} = [{row}]\n"));
        }
        out
    }
}

/// Parses and validates a model document.
pub fn load_model(source: &str) -> Result<MolecularModel> {
    let raw: RawModel =
        toml::from_str(source).map_err(|e| R13Error::Config(format!("model document: {e}")))?;
    let missing = |f: &str| R13Error::Config(format!("model document: missing field `{f}`"));
    let eta = raw.eta.ok_or_else(|| missing("eta"))?;
    let chi = raw.chi.ok_or_else(|| missing("chi"))?;
    let l1 = raw.l1.ok_or_else(|| missing("l1"))?;
    let l2 = raw.l2.ok_or_else(|| missing("l2"))?;
    let kv = raw.k.ok_or_else(|| missing("k"))?;
    if kv.len() != N_K {
        return Err(R13Error::field("k", format!("expected {N_K} entries k0..k10, got {}", kv.len())));
    }
    let mut k = [0.0; N_K];
    k.copy_from_slice(&kv);
    let rm = raw.m.ok_or_else(|| missing("m"))?;
    let rows = [rm.row1, rm.row2, rm.row3, rm.row4, rm.row5, rm.row6, rm.row7, rm.row8];
    let mut m = MTable::zeros();
    for (j, row) in rows.into_iter().enumerate() {
        let row = row.ok_or_else(|| missing(&format!("m.row{}", j + 1)))?;
        if row.len() != M_COLS {
            return Err(R13Error::field(
                format!("m.row{}", j + 1),
                format!("expected {M_COLS} entries, got {}", row.len()),
            ));
        }
        for (c, v) in row.into_iter().enumerate() {
            m.set(j + 1, c + 1, v);
        }
    }
    let mut model = MolecularModel {
        name: raw.name.unwrap_or_default(),
        eta,
        k,
        l1,
        l2,
        m,
        chi,
        chi_tilde: chi_tilde(chi),
        maxwell: raw.maxwell.unwrap_or(false),
    };
    model.validate()?;
    if model.name.is_empty() {
        model.name = format!("eta={}", model.eta);
    }
    Ok(model)
}

/// Reads and parses a model document from disk.
pub fn load_model_file(path: impl AsRef<Path>) -> Result<MolecularModel> {
    let path = path.as_ref();
    let text = std::fs::read_to_string(path).map_err(|e| R13Error::io(path.display().to_string(), e))?;
    load_model(&text)
}

/// Classification of a discriminant pair.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum ConstraintStatus {
    /// `z > 0` and `w < 1`.
    Strict,
    /// `w = 1` up to rounding.
    Boundary,
    /// `w > 1`.
    Violated,
    /// The product in the denominator of `w` vanishes.
    Degenerate,
}

/// One discriminant pair `(z, w)`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct DiscriminantPair {
    /// Discriminant.
    pub z: f64,
    /// Ratio; `None` when degenerate.
    pub w: Option<f64>,
    /// Classification.
    pub status: ConstraintStatus,
}

/// Thermodynamic constraint report for the two coupled coefficient pairs.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ConstraintReport {
    /// `z1 = k1 k10 − 3 k2²`, `w1 = 3 k2² / (k1 k10)`.
    pub pair1: DiscriminantPair,
    /// `z2 = 24 k3 k7 − 25 k4²`, `w2 = 25 k4² / (24 k3 k7)`.
    pub pair2: DiscriminantPair,
}

impl ConstraintReport {
    /// `z1`.
    pub fn z1(&self) -> f64 {
        self.pair1.z
    }
    /// `z2`.
    pub fn z2(&self) -> f64 {
        self.pair2.z
    }
    /// `w1` (NaN when degenerate).
    pub fn w1(&self) -> f64 {
        self.pair1.w.unwrap_or(f64::NAN)
    }
    /// `w2` (NaN when degenerate).
    pub fn w2(&self) -> f64 {
        self.pair2.w.unwrap_or(f64::NAN)
    }
    /// Both pairs strict.
    pub fn all_strict(&self) -> bool {
        self.pair1.status == ConstraintStatus::Strict && self.pair2.status == ConstraintStatus::Strict
    }
    /// Neither pair violated (the non-strict constraints hold).
    pub fn none_violated(&self) -> bool {
        self.pair1.status != ConstraintStatus::Violated && self.pair2.status != ConstraintStatus::Violated
    }
}

fn classify(product: f64, z: f64, square_term: f64) -> DiscriminantPair {
    if product == 0.0 {
        return DiscriminantPair {
            z,
            w: None,
            status: ConstraintStatus::Degenerate,
        };
    }
    let w = square_term / product;
    let status = if (w - 1.0).abs() <= 1e-12 {
        ConstraintStatus::Boundary
    } else if w < 1.0 && z > 0.0 {
        ConstraintStatus::Strict
    } else {
        ConstraintStatus::Violated
    };
    DiscriminantPair { z, w: Some(w), status }
}

/// Thermodynamic discriminants of the coupled coefficient pairs.
pub fn thermo_discriminants(model: &MolecularModel) -> ConstraintReport {
    let k = &model.k;
    let p1 = k[1] * k[10];
    let q1 = 3.0 * k[2] * k[2];
    let p2 = 24.0 * k[3] * k[7];
    let q2 = 25.0 * k[4] * k[4];
    ConstraintReport {
        pair1: classify(p1, p1 - q1, q1),
        pair2: classify(p2, p2 - q2, q2),
    }
}

/// Maxwell-molecule specialization: `k0 = k5 = 1`, `k1 = k2 = k3 = k4 = 0`,
/// all other fields preserved and the model flagged as Maxwell.
pub fn maxwell_specialize(model: &MolecularModel) -> MolecularModel {
    let mut out = model.clone();
    out.k[0] = 1.0;
    out.k[5] = 1.0;
    for i in 1..=4 {
        out.k[i] = 0.0;
    }
    out.maxwell = true;
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    fn doc(l1: &str, chi: &str) -> String {
        let mut s = format!(
            "eta = 7.0\nchi = {chi}\nl1 = {l1}\nl2 = 1.0\nk = [1.0, 3.0773e-3, 1.2550e-5, 2.6072e-3, 4.8885e-2, 1.0, 1.0, 9.7119e-1, 1.0, 1.0, 2.8590e-7]\n[m]\n"
        );
        for j in 1..=8 {
            s.push_str(&format!("row{j} = [0,0,0,0,0,0,0,0,0]\n"));
        }
        s.replace("[0,0,0,0,0,0,0,0,0]", "[0.0,0.0,0.0,0.0,0.0,0.0,0.0,0.0,0.0]")
    }

    #[test]
    fn chi_one_gives_chi_tilde_two() {
        let m = load_model(&doc("1.0", "1.0")).unwrap();
        assert_eq!(m.chi_tilde, 2.0);
    }

    #[test]
    fn nonpositive_l1_is_rejected_with_field_name() {
        let err = load_model(&doc("0.0", "1.0")).unwrap_err();
        assert!(err.to_string().contains("l1 must be positive"), "{err}");
    }

    #[test]
    fn chi_out_of_range_is_rejected() {
        assert!(load_model(&doc("1.0", "1.5")).is_err());
        assert!(load_model(&doc("1.0", "0.0")).is_err());
    }

    #[test]
    fn missing_field_is_named() {
        let err = load_model("eta = 7.0\nchi = 1.0").unwrap_err();
        assert!(err.to_string().contains("l1"), "{err}");
    }

    #[test]
    fn k_values_echo_bit_exactly() {
        let m = load_model(&doc("1.0", "1.0")).unwrap();
        assert_eq!(m.k[1], 3.0773e-3);
        assert_eq!(m.k[10], 2.8590e-7);
    }

    #[test]
    fn maxwell_specialize_is_idempotent() {
        let m = load_model(&doc("1.0", "1.0")).unwrap();
        let a = maxwell_specialize(&m);
        let b = maxwell_specialize(&a);
        assert_eq!(a, b);
        assert_eq!(&a.k[1..5], &[0.0; 4]);
        assert_eq!((a.k[0], a.k[5]), (1.0, 1.0));
        let r = thermo_discriminants(&a);
        assert_eq!(r.pair1.status, ConstraintStatus::Degenerate);
        assert_eq!(r.pair2.status, ConstraintStatus::Degenerate);
        assert_eq!(r.z1(), 0.0);
    }

    #[test]
    fn toml_round_trip() {
        let m = load_model(&doc("1.0", "0.8")).unwrap();
        let back = load_model(&m.to_toml_string()).unwrap();
        assert_eq!(m, back);
    }
}
