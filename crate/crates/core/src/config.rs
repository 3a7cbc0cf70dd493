//! Thresholds shared by the numeric decision procedures.

use serde::{Deserialize, Serialize};
use std::collections::BTreeMap;

/// Every tolerance used to grade a verdict. All reports echo this verbatim.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct LabConfig {
    /// Dyadic refinements used by the quotient-membership grid test.
    pub quotient_depth: u32,
    /// Allowed sup-ratio excess between consecutive refinements.
    pub quotient_tol: f64,
    /// Relative increase over the last quartile still counted as bounded.
    pub stabilize_tol: f64,
    /// Minimum R² for a growth fit to be trusted.
    pub min_r2: f64,
    /// Smallest fitted exponent read as genuine growth.
    pub min_growth_exponent: f64,
    /// Coefficients below this magnitude count as zero.
    pub coeff_zero_tol: f64,
    /// Bound on witness residuals.
    pub witness_residual: f64,
    /// Index range scanned by coefficient-vanishing tests, `|n| <= scan`.
    pub scan: i64,
    /// Hankel section sizes used by the BMOA test.
    pub section_sizes: Vec<usize>,
    /// Cesàro degrees used by the `H∞` test.
    pub cesaro_degrees: Vec<usize>,
    /// Samples used when a numeric quotient is turned into coefficients.
    pub quotient_dft_size: usize,
}

impl Default for LabConfig {
    fn default() -> Self {
        LabConfig {
            quotient_depth: 12,
            quotient_tol: 0.05,
            stabilize_tol: 0.02,
            min_r2: 0.9,
            min_growth_exponent: 0.1,
            coeff_zero_tol: 1e-12,
            witness_residual: 1e-8,
            scan: 4096,
            section_sizes: geometric_sizes(16, 512),
            cesaro_degrees: geometric_sizes(8, 1024),
            quotient_dft_size: 1 << 14,
        }
    }
}

impl LabConfig {
    pub fn thresholds(&self) -> BTreeMap<String, f64> {
        let mut m = BTreeMap::new();
        m.insert("quotient_depth".into(), self.quotient_depth as f64);
        m.insert("quotient_tol".into(), self.quotient_tol);
        m.insert("stabilize_tol".into(), self.stabilize_tol);
        m.insert("min_r2".into(), self.min_r2);
        m.insert("min_growth_exponent".into(), self.min_growth_exponent);
        m.insert("coeff_zero_tol".into(), self.coeff_zero_tol);
        m.insert("witness_residual".into(), self.witness_residual);
        m.insert("scan".into(), self.scan as f64);
        m
    }
}

/// `lo, 2lo, 4lo, …` up to and including `hi` (when `hi` is reached exactly).
pub fn geometric_sizes(lo: usize, hi: usize) -> Vec<usize> {
    let mut out = Vec::new();
    let mut n = lo.max(1);
    while n <= hi {
        out.push(n);
        n *= 2;
    }
    out
}
