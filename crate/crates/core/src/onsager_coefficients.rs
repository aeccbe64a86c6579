//! Weak-form wall coefficients derived from a molecular model, and the
//! audits of their positivity and internal consistency.
//!
//! The derivation proceeds in four stages:
//!
//! 1. proportionality constants `C1..C7`, each defined by up to three
//!    equivalent ratios of `k` and `m` entries;
//! 2. matching solves for `(α1, β1)`, `(α3, β3)` (2×2) and `(α2, β2)`
//!    (3×2 least squares);
//! 3. intermediate coefficients `A1..A3`, `B1..B3`;
//! 4. the final set `S1..S8`, `R1..R4`, `T1`, `T2`, together with the
//!    independently derived duplicates `T̃1`, `T̃2` and the alternative
//!    derivation paths of `R1..R4` and `S3`.
//!
//! [`consistent_table`] builds synthetic `m` tables in which every ratio is
//! exact and every duplicate agrees, so that the full pipeline can be
//! exercised without tabulated wall data.

use serde::{Deserialize, Serialize};

use crate::error::{R13Error, Result};
use crate::model_params::{MTable, MolecularModel};

/// Default relative tolerance on proportionality-constant ratios.
pub const RATIO_TOL: f64 = 1e-8;
/// Relative tolerance on the 3×2 least-squares residual.
pub const LSQ_TOL: f64 = 1e-8;
/// Largest admissible condition number of a 2×2 matching matrix.
pub const MAX_CONDITION: f64 = 1e12;

/// One proportionality constant with its consistency data.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Proportionality {
    /// Name (`C1`..`C7`).
    pub name: String,
    /// Value of the first defined ratio.
    pub value: f64,
    /// Every ratio, `None` where the denominator vanishes.
    pub ratios: Vec<Option<f64>>,
    /// Largest pairwise relative deviation among the defined ratios.
    pub residual: f64,
    /// True when some ratio was skipped because of a zero denominator.
    pub skipped: bool,
}

/// The constants `C1..C7`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ProportionalityConstants {
    /// `C1..C7` in order.
    pub c: Vec<Proportionality>,
}

impl ProportionalityConstants {
    /// Value of `C_i` (1-based).
    pub fn value(&self, i: usize) -> f64 {
        self.c[i - 1].value
    }

    /// Largest residual over all constants.
    pub fn max_residual(&self) -> f64 {
        self.c.iter().map(|p| p.residual).fold(0.0, f64::max)
    }

    /// Names of the constants whose residual exceeds `tol`.
    pub fn flagged(&self, tol: f64) -> Vec<String> {
        self.c.iter().filter(|p| p.residual > tol).map(|p| p.name.clone()).collect()
    }
}

fn relative_gap(a: f64, b: f64) -> f64 {
    let scale = a.abs().max(b.abs());
    if scale == 0.0 {
        0.0
    } else {
        (a - b).abs() / scale
    }
}

/// Evaluates a list of `numerator / denominator` ratios for one constant.
pub fn evaluate_ratios(name: &str, pairs: &[(f64, f64)]) -> Result<Proportionality> {
    let ratios: Vec<Option<f64>> = pairs
        .iter()
        .map(|&(n, d)| if d != 0.0 { Some(n / d) } else { None })
        .collect();
    let defined: Vec<f64> = ratios.iter().flatten().copied().collect();
    let value = *defined.first().ok_or_else(|| {
        R13Error::Inconsistent(format!("proportionality constant {name}: every defining ratio has a zero denominator"))
    })?;
    let mut residual: f64 = 0.0;
    for i in 0..defined.len() {
        for j in i + 1..defined.len() {
            residual = residual.max(relative_gap(defined[i], defined[j]));
        }
    }
    Ok(Proportionality {
        name: name.to_string(),
        value,
        skipped: ratios.iter().any(|r| r.is_none()),
        ratios,
        residual,
    })
}

/// Proportionality constants of a model.
pub fn proportionality_constants(model: &MolecularModel) -> Result<ProportionalityConstants> {
    let k = &model.k;
    let m = |j, c| model.m.get(j, c);
    let c = vec![
        evaluate_ratios(
            "C1",
            &[(2.5 * k[4], m(1, 5)), (2.0 * k[6], m(1, 3)), (2.4 * k[7], m(1, 4))],
        )?,
        evaluate_ratios("C2", &[(m(4, 3), m(3, 3)), (m(4, 4), m(3, 4)), (m(4, 5), m(3, 5))])?,
        evaluate_ratios("C3", &[(m(5, 3), m(3, 3)), (m(5, 4), m(3, 4)), (m(5, 5), m(3, 5))])?,
        evaluate_ratios("C4", &[(m(2, 3), m(1, 3)), (m(2, 4), m(1, 4)), (m(2, 5), m(1, 5))])?,
        evaluate_ratios("C5", &[(k[1], m(2, 7)), (k[2], m(2, 8))])?,
        evaluate_ratios("C6", &[(3.0 * k[2], m(3, 5)), (4.0 * k[9], m(3, 4)), (k[10], m(3, 3))])?,
        evaluate_ratios("C7", &[(m(6, 3), m(1, 3)), (m(6, 4), m(1, 4)), (m(6, 5), m(1, 5))])?,
    ];
    Ok(ProportionalityConstants { c })
}

/// Solves a 2×2 system, rejecting matrices with condition number above
/// [`MAX_CONDITION`].
pub fn solve2(a: [[f64; 2]; 2], rhs: [f64; 2]) -> Result<[f64; 2]> {
    let cond = condition2(a);
    if !(cond <= MAX_CONDITION) {
        return Err(R13Error::Solver(format!(
            "2x2 matching matrix {a:?} is singular or ill-conditioned (condition number {cond:e})"
        )));
    }
    let det = a[0][0] * a[1][1] - a[0][1] * a[1][0];
    Ok([
        (rhs[0] * a[1][1] - a[0][1] * rhs[1]) / det,
        (a[0][0] * rhs[1] - a[1][0] * rhs[0]) / det,
    ])
}

/// Spectral condition number of a 2×2 matrix (infinite when singular).
pub fn condition2(a: [[f64; 2]; 2]) -> f64 {
    let fro2 = a[0][0].powi(2) + a[0][1].powi(2) + a[1][0].powi(2) + a[1][1].powi(2);
    let det = (a[0][0] * a[1][1] - a[0][1] * a[1][0]).abs();
    if det == 0.0 {
        return f64::INFINITY;
    }
    // σ_max² + σ_min² = ‖A‖_F², σ_max σ_min = |det A|
    let disc = (fro2 * fro2 - 4.0 * det * det).max(0.0).sqrt();
    let smax = ((fro2 + disc) / 2.0).sqrt();
    let smin = det / smax;
    smax / smin
}

/// Solution of the matching systems.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct MatchingSolution {
    /// Heat-flux tangential matching.
    pub alpha1: f64,
    /// Heat-flux tangential matching.
    pub beta1: f64,
    /// Normal-normal stress matching (least squares).
    pub alpha2: f64,
    /// Normal-normal stress matching (least squares).
    pub beta2: f64,
    /// Momentum tangential matching.
    pub alpha3: f64,
    /// Momentum tangential matching.
    pub beta3: f64,
    /// Euclidean norm of the least-squares residual.
    pub lsq_residual: f64,
    /// Euclidean norm of the least-squares right-hand side.
    pub lsq_rhs_norm: f64,
}

impl MatchingSolution {
    /// Residual relative to the right-hand side (absolute when the
    /// right-hand side vanishes).
    pub fn relative_lsq_residual(&self) -> f64 {
        if self.lsq_rhs_norm > 0.0 {
            self.lsq_residual / self.lsq_rhs_norm
        } else {
            self.lsq_residual
        }
    }
}

/// Least-squares solution of a 3×2 system via the normal equations of an
/// orthogonalized basis (modified Gram–Schmidt).
pub fn lsq3x2(a: [[f64; 2]; 3], rhs: [f64; 3]) -> Result<([f64; 2], f64)> {
    let col = |j: usize| [a[0][j], a[1][j], a[2][j]];
    let dot = |x: [f64; 3], y: [f64; 3]| x[0] * y[0] + x[1] * y[1] + x[2] * y[2];
    let (c0, c1) = (col(0), col(1));
    let r00 = dot(c0, c0).sqrt();
    if r00 == 0.0 {
        return Err(R13Error::Solver("3x2 matching system has a zero first column".into()));
    }
    let q0 = [c0[0] / r00, c0[1] / r00, c0[2] / r00];
    let r01 = dot(q0, c1);
    let w = [c1[0] - r01 * q0[0], c1[1] - r01 * q0[1], c1[2] - r01 * q0[2]];
    let r11 = dot(w, w).sqrt();
    if !(r11 > 1e-12 * r00.max(dot(c1, c1).sqrt())) {
        return Err(R13Error::Solver("3x2 matching system has dependent columns".into()));
    }
    let q1 = [w[0] / r11, w[1] / r11, w[2] / r11];
    let y0 = dot(q0, rhs);
    let y1 = dot(q1, rhs);
    let x1 = y1 / r11;
    let x0 = (y0 - r01 * x1) / r00;
    let res: f64 = (0..3)
        .map(|i| {
            let r = a[i][0] * x0 + a[i][1] * x1 - rhs[i];
            r * r
        })
        .sum::<f64>()
        .sqrt();
    Ok(([x0, x1], res))
}

/// Matching solves for `(α1,β1)`, `(α3,β3)` and `(α2,β2)`.
pub fn matching_solve(model: &MolecularModel) -> Result<MatchingSolution> {
    let k = &model.k;
    let m = |j, c| model.m.get(j, c);
    let g = [[m(4, 7), m(5, 7)], [m(4, 8), m(5, 8)]];
    let [alpha1, beta1] = solve2(g, [k[4], 24.0 * k[7] / 25.0])?;
    let [alpha3, beta3] = solve2(g, [k[3], k[4]])?;
    let a = [[m(2, 7), -m(6, 9)], [0.0, -m(6, 7)], [-m(2, 8), -m(6, 8)]];
    let rhs = [1.5 * k[2], -1.5 * k[9], -0.5 * k[10]];
    let ([alpha2, beta2], lsq_residual) = lsq3x2(a, rhs)?;
    Ok(MatchingSolution {
        alpha1,
        beta1,
        alpha2,
        beta2,
        alpha3,
        beta3,
        lsq_residual,
        lsq_rhs_norm: (rhs[0] * rhs[0] + rhs[1] * rhs[1] + rhs[2] * rhs[2]).sqrt(),
    })
}

/// Intermediate coefficients of the momentum-balance derivation.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Intermediate {
    /// `A1..A3`.
    pub a: [f64; 3],
    /// `B1..B3`.
    pub b: [f64; 3],
}

/// `A1 = χ̃(m41 − C2 m31)`, `A2 = χ̃(−m42 − C2 m32)`, `A3 = −m46 + C2` and
/// the `B`'s with row 5 and `C3`.
pub fn intermediate_ab(model: &MolecularModel, c2: f64, c3: f64) -> Intermediate {
    let m = |j, c| model.m.get(j, c);
    let ct = model.chi_tilde;
    Intermediate {
        a: [ct * (m(4, 1) - c2 * m(3, 1)), ct * (-m(4, 2) - c2 * m(3, 2)), -m(4, 6) + c2],
        b: [ct * (m(5, 1) - c3 * m(3, 1)), ct * (-m(5, 2) - c3 * m(3, 2)), -m(5, 6) + c3],
    }
}

/// Alternative derivation paths, reported for consistency checking.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct AlternativePaths {
    /// `R1` from the energy balance: `(3/2)C5(C4 + m26)`.
    pub r1: f64,
    /// `R2` from the stress balance: `−C6 m32/2 + (2/5)k8`.
    pub r2: f64,
    /// `R3` from the normal-normal stress path: `Y3 + (2/5)k8`.
    pub r3: f64,
    /// `R4` from the momentum balance: `−(α3 A3 + β3 B3)`.
    pub r4: f64,
    /// `S3` from the normal-normal path: `Y2`.
    pub s3: f64,
}

/// The weak-form wall coefficients.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct BoundaryCoeffs {
    /// `S1..S8`.
    pub s: [f64; 8],
    /// `R1..R4`.
    pub r: [f64; 4],
    /// `T1`.
    pub t1: f64,
    /// `T2`.
    pub t2: f64,
    /// `T̃1` from the momentum-balance path.
    pub t1_tilde: f64,
    /// `T̃2 = Y1` from the normal-normal path.
    pub t2_tilde: f64,
    /// `Y1..Y3` of the normal-normal derivation.
    pub y: [f64; 3],
    /// Intermediate `A`, `B`.
    pub intermediate: Intermediate,
    /// Matching solution.
    pub matching: MatchingSolution,
    /// Proportionality constants.
    pub constants: ProportionalityConstants,
    /// Alternative paths.
    pub alternatives: AlternativePaths,
}

impl BoundaryCoeffs {
    /// `S_i` (1-based).
    pub fn s(&self, i: usize) -> f64 {
        self.s[i - 1]
    }

    /// `R_i` (1-based).
    pub fn r(&self, i: usize) -> f64 {
        self.r[i - 1]
    }

    /// Relative disagreements `(T1 vs T̃1, T2 vs T̃2)`.
    pub fn duplicate_gaps(&self) -> (f64, f64) {
        (relative_gap(self.t1, self.t1_tilde), relative_gap(self.t2, self.t2_tilde))
    }

    /// Relative disagreements of `R1..R4` and `S3` with their alternative
    /// paths.
    pub fn alternative_gaps(&self) -> [f64; 5] {
        let a = &self.alternatives;
        [
            relative_gap(self.r[0], a.r1),
            relative_gap(self.r[1], a.r2),
            relative_gap(self.r[2], a.r3),
            relative_gap(self.r[3], a.r4),
            relative_gap(self.s[2], a.s3),
        ]
    }

    /// Coefficients with every entry set to zero except where given; used by
    /// tests of the assembly code.
    pub fn from_values(s: [f64; 8], r: [f64; 4], t1: f64, t2: f64) -> Self {
        BoundaryCoeffs {
            s,
            r,
            t1,
            t2,
            t1_tilde: t1,
            t2_tilde: t2,
            y: [t2, s[2], 0.0],
            intermediate: Intermediate { a: [0.0; 3], b: [0.0; 3] },
            matching: MatchingSolution {
                alpha1: 0.0,
                beta1: 0.0,
                alpha2: 0.0,
                beta2: 0.0,
                alpha3: 0.0,
                beta3: 0.0,
                lsq_residual: 0.0,
                lsq_rhs_norm: 0.0,
            },
            constants: ProportionalityConstants { c: vec![] },
            alternatives: AlternativePaths {
                r1: r[0],
                r2: r[1],
                r3: r[2],
                r4: r[3],
                s3: s[2],
            },
        }
    }
}

/// Derives every wall coefficient of a model.
///
/// Fails when a proportionality constant has no defined ratio, a 2×2
/// matching matrix is singular, or the least-squares residual of the
/// normal-normal matching exceeds `LSQ_TOL` relative to its right-hand side.
pub fn boundary_coefficients(model: &MolecularModel) -> Result<BoundaryCoeffs> {
    let constants = proportionality_constants(model)?;
    let matching = matching_solve(model)?;
    if matching.relative_lsq_residual() > LSQ_TOL {
        return Err(R13Error::Inconsistent(format!(
            "normal-normal matching system is inconsistent: relative residual {:e} exceeds {LSQ_TOL:e}",
            matching.relative_lsq_residual()
        )));
    }
    let c = |i| constants.value(i);
    let (c1, c2, c3, c4, c5, c6, c7) = (c(1), c(2), c(3), c(4), c(5), c(6), c(7));
    let ab = intermediate_ab(model, c2, c3);
    let k = &model.k;
    let m = |j, cc| model.m.get(j, cc);
    let ct = model.chi_tilde;
    let MatchingSolution {
        alpha1: a1,
        beta1: b1,
        alpha2: a2,
        beta2: b2,
        alpha3: a3,
        beta3: b3,
        ..
    } = matching;

    let r1 = 0.4 * c1 * m(1, 1) - k[0];
    let r2 = a1 * (c2 - m(4, 6)) + b1 * (c3 - m(5, 6));
    let r3 = 0.4 * c1 * m(1, 2);
    let r4 = c6 * m(3, 1) / 2.0 - k[5];

    let s1 = ct * (a1 * (m(4, 2) + c2 * m(3, 2)) + b1 * (m(5, 2) + c3 * m(3, 2)));
    let s2 = ct * (a3 * (c2 * m(3, 1) - m(4, 1)) + b3 * (c3 * m(3, 1) - m(5, 1)));
    let s3 = ct * (a2 * (m(2, 2) + c4 * m(1, 2)) + b2 * (m(6, 2) + c7 * m(1, 2)));
    let s4 = 1.5 * c5 * ct * (m(2, 1) - c4 * m(1, 1));
    let s5 = 2.0 * c1 / (5.0 * ct);
    let s6 = k[9] * ct * m(7, 1);
    let s7 = c6 / (2.0 * ct);
    let s8 = 2.0 * k[9] * ct * m(8, 1);

    let t1 = ct * (a1 * (c2 * m(3, 1) - m(4, 1)) + b1 * (c3 * m(3, 1) - m(5, 1)));
    let t2 = -1.5 * c5 * ct * (m(2, 2) + c4 * m(1, 2));
    let t1_tilde = -(a3 * ab.a[1] + b3 * ab.b[1]);
    let y1 = a2 * ct * (c4 * m(1, 1) - m(2, 1)) + b2 * ct * (c7 * m(1, 1) - m(6, 1));
    let y2 = a2 * ct * (c4 * m(1, 2) + m(2, 2)) + b2 * ct * (c7 * m(1, 2) + m(6, 2));
    let y3 = -a2 * (m(2, 6) + c4) + b2 * (m(6, 6) - c7);

    let alternatives = AlternativePaths {
        r1: 1.5 * c5 * (c4 + m(2, 6)),
        r2: -c6 * m(3, 2) / 2.0 + 0.4 * k[8],
        r3: y3 + 0.4 * k[8],
        r4: -(a3 * ab.a[2] + b3 * ab.b[2]),
        s3: y2,
    };
    Ok(BoundaryCoeffs {
        s: [s1, s2, s3, s4, s5, s6, s7, s8],
        r: [r1, r2, r3, r4],
        t1,
        t2,
        t1_tilde,
        t2_tilde: y1,
        y: [y1, y2, y3],
        intermediate: ab,
        matching,
        constants,
        alternatives,
    })
}

/// Audit of one condition.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct AuditItem {
    /// Condition label.
    pub name: String,
    /// Margin (nonnegative when satisfied).
    pub margin: f64,
    /// Pass/fail against the tolerance.
    pub pass: bool,
}

/// Audit of a 2×2 wall block `[[S_a, T],[T, S_b]]`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct BlockAudit {
    /// Block label.
    pub name: String,
    /// Entries `[[S_a, T],[T, S_b]]`.
    pub matrix: [[f64; 2]; 2],
    /// Eigenvalues in ascending order.
    pub eigenvalues: [f64; 2],
    /// `S_a S_b − T²`.
    pub determinant_margin: f64,
    /// True when the smallest eigenvalue is at least `−tol`.
    pub pass: bool,
}

/// Positivity audit of a coefficient set.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PsdAudit {
    /// Tolerance used.
    pub tol: f64,
    /// `S_i ≥ −tol` for each `i`.
    pub s_items: Vec<AuditItem>,
    /// Tangential and normal 2×2 blocks.
    pub blocks: Vec<BlockAudit>,
    /// True when every item passes.
    pub pass: bool,
}

fn sym2_eigenvalues(a: f64, b: f64, c: f64) -> [f64; 2] {
    let mean = 0.5 * (a + c);
    let rad = (0.25 * (a - c) * (a - c) + b * b).sqrt();
    [mean - rad, mean + rad]
}

/// Checks `S_i ≥ −tol`, and that `[[S1,T1],[T1,S2]]` and `[[S3,T2],[T2,S4]]`
/// have smallest eigenvalue `≥ −tol`.
pub fn validate_boundary_psd(coeffs: &BoundaryCoeffs, tol: f64) -> PsdAudit {
    let s_items: Vec<AuditItem> = coeffs
        .s
        .iter()
        .enumerate()
        .map(|(i, &v)| AuditItem {
            name: format!("S{}", i + 1),
            margin: v,
            pass: v >= -tol,
        })
        .collect();
    let block = |name: &str, sa: f64, t: f64, sb: f64| {
        let eigenvalues = sym2_eigenvalues(sa, t, sb);
        BlockAudit {
            name: name.to_string(),
            matrix: [[sa, t], [t, sb]],
            eigenvalues,
            determinant_margin: sa * sb - t * t,
            pass: eigenvalues[0] >= -tol,
        }
    };
    let blocks = vec![
        block("tangential [[S1,T1],[T1,S2]]", coeffs.s[0], coeffs.t1, coeffs.s[1]),
        block("normal [[S3,T2],[T2,S4]]", coeffs.s[2], coeffs.t2, coeffs.s[3]),
    ];
    let pass = s_items.iter().all(|i| i.pass) && blocks.iter().all(|b| b.pass);
    PsdAudit {
        tol,
        s_items,
        blocks,
        pass,
    }
}

/// Full coefficient report: derived values, audits and consistency gaps.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CoefficientReport {
    /// Model label.
    pub model: String,
    /// Derived coefficients.
    pub coefficients: BoundaryCoeffs,
    /// Positivity audit.
    pub psd: PsdAudit,
    /// Relative gaps `(T1, T̃1)` and `(T2, T̃2)`.
    pub duplicate_gaps: [f64; 2],
    /// Relative gaps of `R1..R4` and `S3` with their alternative paths.
    pub alternative_gaps: [f64; 5],
    /// Constants whose ratio residual exceeds the tolerance.
    pub flagged_constants: Vec<String>,
    /// Tolerance applied to duplicates, alternatives and ratios.
    pub consistency_tol: f64,
    /// True when every audit passes.
    pub consistent: bool,
}

/// Derives and audits the coefficients of a model.
pub fn coefficient_report(model: &MolecularModel, psd_tol: f64, consistency_tol: f64) -> Result<CoefficientReport> {
    let coefficients = boundary_coefficients(model)?;
    let psd = validate_boundary_psd(&coefficients, psd_tol);
    let (g1, g2) = coefficients.duplicate_gaps();
    let alternative_gaps = coefficients.alternative_gaps();
    let flagged_constants = coefficients.constants.flagged(RATIO_TOL);
    let consistent = psd.pass
        && g1 <= consistency_tol
        && g2 <= consistency_tol
        && alternative_gaps.iter().all(|&g| g <= consistency_tol)
        && flagged_constants.is_empty();
    Ok(CoefficientReport {
        model: model.name.clone(),
        coefficients,
        psd,
        duplicate_gaps: [g1, g2],
        alternative_gaps,
        flagged_constants,
        consistency_tol,
        consistent,
    })
}

/// Free choices of the synthetic table generator.
///
/// The `C`'s, `(α2, β2)` and the four free `m` entries are chosen directly;
/// the two 2×2 wall blocks and `S6`, `S8` are prescribed as targets, and every
/// other entry of the table is solved for so that all ratios are exact and
/// all duplicate and alternative paths agree.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct TableDesign {
    /// Proportionality constants `C1, C2, C3, C4, C5, C6, C7`; `C5` is
    /// ignored (forced to zero) when `k1 = k2 = 0`.
    pub c: [f64; 7],
    /// Normal-normal matching solution `(α2, β2)`, `β2 ≠ 0`.
    pub alpha2_beta2: [f64; 2],
    /// Free entries `m11, m12, m31, m32` (for Maxwell models `m11` and `m31`
    /// are overridden so that `R1 = R4 = 0`).
    pub m11_m12_m31_m32: [f64; 4],
    /// Target `[S1, S2, T1]`.
    pub tangential: [f64; 3],
    /// Target `[S3, S4, T2]`.
    pub normal: [f64; 3],
    /// Target `[S6, S8]`.
    pub s6_s8: [f64; 2],
}

impl Default for TableDesign {
    fn default() -> Self {
        TableDesign {
            c: [1.0, 0.5, 0.25, 0.3, 0.5, 1.0, 0.2],
            alpha2_beta2: [0.4, 0.6],
            m11_m12_m31_m32: [2.0, 0.3, 1.5, 0.4],
            tangential: [0.8, 0.6, 0.2],
            normal: [0.7, 0.5, 0.15],
            s6_s8: [0.3, 0.4],
        }
    }
}

/// Builds an `m` table for which every proportionality ratio is exact, the
/// duplicates `T̃1`, `T̃2` equal `T1`, `T2`, and every alternative path of
/// `R1..R4` and `S3` agrees with the primary one.
///
/// Models with `k1 = k2 = k3 = k4 = 0` (the Maxwell limit) get `T1 = T2 =
/// S2 = S4 = 0` and `R1 = R4 = 0`, as the tangential momentum and heat
/// couplings vanish there.
pub fn consistent_table(model: &MolecularModel, design: &TableDesign) -> Result<MTable> {
    let k = &model.k;
    let ct = model.chi_tilde;
    let maxwell_like = k[1] == 0.0 && k[2] == 0.0 && k[3] == 0.0 && k[4] == 0.0;
    let [c1, c2, c3, c4, c5_design, c6, c7] = design.c;
    let c5 = if k[1] == 0.0 && k[2] == 0.0 { 0.0 } else { c5_design };
    let [alpha2, beta2] = if maxwell_like {
        [0.0, design.alpha2_beta2[1]]
    } else {
        design.alpha2_beta2
    };
    if beta2 == 0.0 || c1 == 0.0 || c6 == 0.0 {
        return Err(R13Error::InvalidArgument("table design needs nonzero C1, C6 and beta2".into()));
    }
    let [mut m11, m12, mut m31, m32] = design.m11_m12_m31_m32;
    if maxwell_like {
        m11 = 2.5 * k[0] / c1;
        m31 = 2.0 * k[5] / c6;
    }
    let mut t = MTable::zeros();
    t.set(1, 1, m11);
    t.set(1, 2, m12);
    t.set(3, 1, m31);
    t.set(3, 2, m32);
    // Proportionality constants.
    t.set(1, 5, 2.5 * k[4] / c1);
    t.set(1, 3, 2.0 * k[6] / c1);
    t.set(1, 4, 2.4 * k[7] / c1);
    t.set(3, 3, k[10] / c6);
    t.set(3, 4, 4.0 * k[9] / c6);
    t.set(3, 5, 3.0 * k[2] / c6);
    for col in 3..=5 {
        t.set(4, col, c2 * t.get(3, col));
        t.set(5, col, c3 * t.get(3, col));
        t.set(2, col, c4 * t.get(1, col));
        t.set(6, col, c7 * t.get(1, col));
    }
    if c5 != 0.0 {
        t.set(2, 7, k[1] / c5);
        t.set(2, 8, k[2] / c5);
    } else {
        t.set(2, 7, 1.0);
        t.set(2, 8, 1.0);
    }
    // Identity matching block.
    t.set(4, 7, 1.0);
    t.set(5, 8, 1.0);
    let a1 = [k[4], 24.0 * k[7] / 25.0];
    let a3 = [k[3], k[4]];
    let det_k = a1[0] * a3[1] - a1[1] * a3[0];

    // Tangential block: [a1; a3] · [Q P] = [[S1, T1], [T1, S2]] / χ̃.
    let [s1, s2, t1] = design.tangential;
    let (q, p) = if !maxwell_like {
        if det_k == 0.0 {
            return Err(R13Error::Inconsistent("tangential matching matrix is singular".into()));
        }
        let kk = [a1, a3];
        let qv = solve2(kk, [s1 / ct, t1 / ct])?;
        let pv = solve2(kk, [t1 / ct, s2 / ct])?;
        (qv, pv)
    } else {
        ([0.0, s1 / (ct * a1[1])], [0.0, 0.0])
    };
    t.set(4, 2, q[0] - c2 * m32);
    t.set(5, 2, q[1] - c3 * m32);
    t.set(4, 1, c2 * m31 - p[0]);
    t.set(5, 1, c3 * m31 - p[1]);

    // Normal-normal matching: choose m67, m68, m69 so that (α2, β2) solves
    // the 3×2 system exactly.
    let (m27, m28) = (t.get(2, 7), t.get(2, 8));
    t.set(6, 7, 1.5 * k[9] / beta2);
    t.set(6, 9, (alpha2 * m27 - 1.5 * k[2]) / beta2);
    t.set(6, 8, (0.5 * k[10] - alpha2 * m28) / beta2);

    // Normal block: [Uᵀ; Vᵀ] · [a2, e] = [[S3, T2], [T2, S4]] / χ̃ with
    // e = (−(3/2)C5, 0).
    let [s3, s4, t2] = design.normal;
    let (u, v) = if c5 != 0.0 {
        let e0 = -1.5 * c5;
        // Rows: U·a2 = S3, U·e = T2 ; V·a2 = T2, V·e = S4.
        let u0 = t2 / (ct * e0);
        let u1 = (s3 / ct - alpha2 * u0) / beta2;
        let v0 = s4 / (ct * e0);
        let v1 = (t2 / ct - alpha2 * v0) / beta2;
        ([u0, u1], [v0, v1])
    } else {
        ([0.0, (s3 / ct) / beta2], [0.0, 0.0])
    };
    t.set(2, 2, u[0] - c4 * m12);
    t.set(6, 2, u[1] - c7 * m12);
    t.set(2, 1, c4 * m11 - v[0]);
    t.set(6, 1, c7 * m11 - v[1]);

    let [s6, s8] = design.s6_s8;
    if k[9] > 0.0 {
        t.set(7, 1, s6 / (k[9] * ct));
        t.set(8, 1, s8 / (2.0 * k[9] * ct));
    } else {
        t.set(7, 1, 1.0);
        t.set(8, 1, 1.0);
    }

    // Alternative R paths.
    let r1 = 0.4 * c1 * m11 - k[0];
    if c5 != 0.0 {
        t.set(2, 6, r1 / (1.5 * c5) - c4);
    }
    let r2 = -c6 * m32 / 2.0 + 0.4 * k[8];
    let r4 = c6 * m31 / 2.0 - k[5];
    // [a1; a3] · (C2 − m46, C3 − m56) = (R2, −R4).
    let x = if !maxwell_like {
        solve2([a1, a3], [r2, -r4])?
    } else {
        [0.0, r2 / a1[1]]
    };
    t.set(4, 6, c2 - x[0]);
    t.set(5, 6, c3 - x[1]);
    let r3 = 0.4 * c1 * m12;
    let m26 = t.get(2, 6);
    t.set(6, 6, c7 + (r3 - 0.4 * k[8] + alpha2 * (m26 + c4)) / beta2);
    Ok(t)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::model_params::{maxwell_specialize, Eta};

    fn eta7() -> MolecularModel {
        let k = [1.0, 3.0773e-3, 1.2550e-5, 2.6072e-3, 4.8885e-2, 1.0, 1.0, 9.7119e-1, 1.0, 1.0, 2.8590e-7];
        let mut m = MolecularModel::new("eta7", Eta::Finite(7.0), k, 1.0, 1.0, MTable::zeros(), 1.0).unwrap();
        m.m = consistent_table(&m, &TableDesign::default()).unwrap();
        m
    }

    #[test]
    fn ratio_examples() {
        let p = evaluate_ratios("C2", &[(2.0, 1.0), (4.0, 2.0), (6.0, 3.0)]).unwrap();
        assert_eq!(p.value, 2.0);
        assert_eq!(p.residual, 0.0);
        let p = evaluate_ratios("C2", &[(2.0, 1.0), (2.002, 1.0)]).unwrap();
        assert!((p.residual - 0.002 / 2.002).abs() < 1e-15);
        let p = evaluate_ratios("C5", &[(0.0, 0.0), (1.0, 2.0)]).unwrap();
        assert!(p.skipped && p.value == 0.5);
        assert!(evaluate_ratios("C5", &[(1.0, 0.0), (0.0, 0.0)]).is_err());
    }

    #[test]
    fn identity_matching_block() {
        let mut model = eta7();
        let mut t = model.m;
        t.set(4, 7, 1.0);
        t.set(5, 7, 0.0);
        t.set(4, 8, 0.0);
        t.set(5, 8, 1.0);
        t.set(6, 7, 1.0);
        t.set(6, 8, 0.0);
        t.set(6, 9, 0.0);
        t.set(2, 7, 1.0);
        t.set(2, 8, 0.0);
        model.m = t;
        model.k[10] = 0.0;
        let s = matching_solve(&model).unwrap();
        let k = &model.k;
        assert_eq!((s.alpha1, s.beta1), (k[4], 24.0 * k[7] / 25.0));
        assert_eq!((s.alpha3, s.beta3), (k[3], k[4]));
        assert!((s.alpha2 - 1.5 * k[2]).abs() < 1e-18 && (s.beta2 - 1.5 * k[9]).abs() < 1e-15);
        assert!(s.lsq_residual < 1e-15);
    }

    #[test]
    fn singular_matching_rejected() {
        let mut model = eta7();
        model.m.set(4, 7, 1.0);
        model.m.set(5, 7, 2.0);
        model.m.set(4, 8, 2.0);
        model.m.set(5, 8, 4.0);
        assert!(matches!(matching_solve(&model), Err(R13Error::Solver(_))));
    }

    #[test]
    fn generated_table_is_consistent() {
        let model = eta7();
        let rep = coefficient_report(&model, 1e-12, 1e-10).unwrap();
        assert!(rep.consistent, "{rep:#?}");
        let c = &rep.coefficients;
        let d = TableDesign::default();
        assert!((c.s(1) - d.tangential[0]).abs() < 1e-12);
        assert!((c.s(2) - d.tangential[1]).abs() < 1e-12);
        assert!((c.t1 - d.tangential[2]).abs() < 1e-12);
        assert!((c.s(3) - d.normal[0]).abs() < 1e-12);
        assert!((c.s(4) - d.normal[1]).abs() < 1e-12);
        assert!((c.t2 - d.normal[2]).abs() < 1e-12);
        assert!((c.s(5) - 0.4 * d.c[0] / model.chi_tilde).abs() < 1e-15);
    }

    #[test]
    fn maxwell_table_has_vanishing_couplings() {
        let mut model = maxwell_specialize(&eta7());
        model.m = consistent_table(&model, &TableDesign::default()).unwrap();
        let rep = coefficient_report(&model, 1e-12, 1e-10).unwrap();
        assert!(rep.consistent, "{rep:#?}");
        let c = &rep.coefficients;
        for v in [c.r(1), c.r(4), c.s(2), c.s(4), c.t1, c.t2] {
            assert!(v.abs() < 1e-14, "{v}");
        }
        assert_eq!(c.matching.alpha3, 0.0);
        assert_eq!(c.matching.beta3, 0.0);
    }

    #[test]
    fn intermediate_scaling() {
        let mut model = eta7();
        let a = intermediate_ab(&model, 0.5, 0.25);
        model.chi = 2.0 / 3.0; // χ̃ = 1
        model.chi_tilde = 1.0;
        let b = intermediate_ab(&model, 0.5, 0.25);
        let mut c = model.clone();
        c.chi_tilde = 2.0;
        let d = intermediate_ab(&c, 0.5, 0.25);
        assert!((d.a[0] - 2.0 * b.a[0]).abs() < 1e-15 && (d.a[1] - 2.0 * b.a[1]).abs() < 1e-15);
        assert_eq!(d.a[2], b.a[2]);
        assert_eq!(a.a[2], b.a[2]);
    }

    #[test]
    fn psd_examples() {
        let c = BoundaryCoeffs::from_values([1.0, 1.0, 1.0, 1.0, 1.0, 1.0, 1.0, 1.0], [0.0; 4], 1.0, 0.0);
        let a = validate_boundary_psd(&c, 1e-12);
        assert!(a.pass);
        assert!((a.blocks[0].eigenvalues[0]).abs() < 1e-15 && (a.blocks[0].eigenvalues[1] - 2.0).abs() < 1e-15);
        let c = BoundaryCoeffs::from_values([1.0; 8], [0.0; 4], 1.1, 0.0);
        let a = validate_boundary_psd(&c, 1e-12);
        assert!(!a.pass);
        assert!((a.blocks[0].determinant_margin + 0.21).abs() < 1e-12);
        let mut s = [1.0; 8];
        s[5] = -1e-6;
        let a = validate_boundary_psd(&BoundaryCoeffs::from_values(s, [0.0; 4], 0.0, 0.0), 1e-12);
        assert!(!a.pass && !a.s_items[5].pass && a.s_items[5].name == "S6");
    }
}
