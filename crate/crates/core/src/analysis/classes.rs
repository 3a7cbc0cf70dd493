//! Function-class testers: `L∞` sup estimates, `H∞`, BMOA and `H²`.

use super::growth::{growth_profile, GrowthClass, GrowthProfile};
use super::norm::matrix_norm;
use crate::config::LabConfig;
use crate::error::Result;
use crate::symbol::{Decay, FourierSymbol};
use crate::verdict::{Status, Verdict};
use crate::C64;
use nalgebra::DMatrix;
use rayon::prelude::*;
use rustfft::FftPlanner;
use std::f64::consts::PI;

#[derive(Clone, Debug, PartialEq)]
pub struct SupEstimate {
    pub value: f64,
    /// `(points, max)` for each dyadic grid.
    pub trace: Vec<(usize, f64)>,
}

/// Max of `|Φ|` over dyadic grids of `2^d` points, `d = 0..=depth`.
pub fn ess_sup_estimate(sym: &FourierSymbol, depth: u32) -> Result<SupEstimate> {
    let f = sym.evaluator()?;
    let finest = 1usize << depth;
    let vals: Vec<f64> = (0..finest)
        .into_par_iter()
        .map(|j| f(2.0 * PI * j as f64 / finest as f64).norm())
        .collect();
    let trace: Vec<(usize, f64)> = (0..=depth)
        .map(|d| {
            let stride = finest >> d;
            let m = vals.iter().step_by(stride).fold(0.0f64, |a, &b| a.max(b));
            (1usize << d, m)
        })
        .collect();
    Ok(SupEstimate {
        value: trace.last().unwrap().1,
        trace,
    })
}

/// Sup norms of the Cesàro means `σ_M` for each degree `M`.
pub fn cesaro_sups(sym: &FourierSymbol, degrees: &[usize]) -> Vec<f64> {
    degrees
        .par_iter()
        .map(|&m| {
            let g = (8 * (m + 1)).next_power_of_two().max(64);
            let mut buf = vec![C64::new(0.0, 0.0); g];
            for n in 0..=m {
                let w = 1.0 - n as f64 / (m + 1) as f64;
                buf[n] = sym.coeff(n as i64) * w;
            }
            FftPlanner::new().plan_fft_inverse(g).process(&mut buf);
            buf.iter().map(|c| c.norm()).fold(0.0, f64::max)
        })
        .collect()
}

fn finite_sup(sym: &FourierSymbol) -> Option<f64> {
    sym.as_laurent().map(|p| p.sup_norm())
}

fn grade_profile(
    mut verdict: Verdict,
    profile: &GrowthProfile,
    cfg: &LabConfig,
    what: &str,
) -> Verdict {
    verdict.push("tail_increase", profile.tail_increase);
    verdict.push("fit_r2", profile.r2);
    match profile.class {
        GrowthClass::Bounded => {
            verdict.status = Status::HoldsNumeric;
        }
        GrowthClass::Log { beta } => verdict.push("log_beta", beta),
        GrowthClass::Power { alpha } => verdict.push("power_alpha", alpha),
    }
    if !profile.is_bounded() {
        if profile.grows(cfg) {
            verdict.status = Status::FailsNumeric;
            verdict.reason = Some(format!("{what} grow: {}", profile.class_label()));
        } else {
            verdict.status = Status::Inconclusive;
            verdict.reason = Some(format!(
                "{what} neither stabilize nor fit a growth law ({}, R² = {:.3})",
                profile.class_label(),
                profile.r2
            ));
        }
    }
    verdict
}

/// Decides `sym ∈ H∞` from the sup norms of its Cesàro means.
pub fn hinf_test(sym: &FourierSymbol, degrees: &[usize], cfg: &LabConfig) -> Result<Verdict> {
    sym.require_analytic()?;
    if let Some(sup) = finite_sup(sym) {
        return Ok(Verdict::new(Status::HoldsExact).diag("sup", sup));
    }
    let sups = cesaro_sups(sym, degrees);
    let mut verdict = Verdict::new(Status::Inconclusive);
    for (m, s) in degrees.iter().zip(&sups) {
        verdict.push(format!("cesaro_sup_{m}"), *s);
    }
    let points: Vec<(f64, f64)> = degrees.iter().map(|&m| m as f64).zip(sups).collect();
    let profile = growth_profile(&points, cfg)?;
    Ok(grade_profile(verdict, &profile, cfg, "Cesàro sups"))
}

/// Norms of the Hankel sections `[c_{i+j}]` of the given sizes.
pub fn hankel_section_norms(sym: &FourierSymbol, sizes: &[usize]) -> Vec<f64> {
    let top = sizes.iter().copied().max().unwrap_or(0);
    let coeffs: Vec<C64> = (0..2 * top as i64).map(|n| sym.coeff(n)).collect();
    sizes
        .par_iter()
        .map(|&n| matrix_norm(&DMatrix::from_fn(n, n, |i, j| coeffs[i + j])))
        .collect()
}

/// BMOA membership through boundedness of the Hankel sections `[c_{i+j}]`.
///
/// When the profile creeps upward too slowly to classify, a declared
/// `|c_n| ≤ C/(n+1)` bound still certifies boundedness: the sections are then
/// dominated entrywise by `C` times the Hilbert matrix, whose norm is below `π`.
pub fn bmoa_section_test(sym: &FourierSymbol, sizes: &[usize], cfg: &LabConfig) -> Result<Verdict> {
    sym.require_analytic()?;
    if let Some(p) = sym.as_laurent() {
        let n = p.range().map_or(1, |(_, hi)| hi as usize + 1);
        let norm = hankel_section_norms(sym, &[n])[0];
        return Ok(Verdict::new(Status::HoldsExact).diag("hankel_norm", norm));
    }
    let norms = hankel_section_norms(sym, sizes);
    let mut verdict = Verdict::new(Status::Inconclusive);
    for (n, v) in sizes.iter().zip(&norms) {
        verdict.push(format!("section_norm_{n}"), *v);
    }
    let points: Vec<(f64, f64)> = sizes.iter().map(|&n| n as f64).zip(norms.iter().copied()).collect();
    let profile = growth_profile(&points, cfg)?;
    if !profile.is_bounded() {
        if let Decay::OneOverN { constant } = sym.decay() {
            let bound = PI * constant;
            if norms.iter().all(|&v| v <= bound) {
                verdict.status = Status::HoldsNumeric;
                verdict.push("tail_increase", profile.tail_increase);
                verdict.push("hilbert_majorant", bound);
                verdict.reason = Some(format!(
                    "coefficients bounded by {constant}/(n+1); sections dominated by {constant}·Hilbert matrix"
                ));
                return Ok(verdict);
            }
        }
    }
    Ok(grade_profile(verdict, &profile, cfg, "Hankel section norms"))
}

/// Running sup, by generation, of the mean oscillation over dyadic arcs.
pub fn bmo_oscillation_estimate(sym: &FourierSymbol, depth: u32) -> Result<Vec<f64>> {
    const PER_ARC: usize = 64;
    let f = sym.evaluator()?;
    let total = PER_ARC << depth;
    let vals: Vec<C64> = (0..total)
        .into_par_iter()
        .map(|j| f(2.0 * PI * (j as f64 + 0.5) / total as f64))
        .collect();
    let mut running = 0.0f64;
    let mut out = Vec::with_capacity(depth as usize + 1);
    for g in 0..=depth {
        let len = total >> g;
        for arc in vals.chunks(len) {
            let mean: C64 = arc.iter().sum::<C64>() / len as f64;
            let osc = arc.iter().map(|v| (v - mean).norm()).sum::<f64>() / len as f64;
            running = running.max(osc);
        }
        out.push(running);
    }
    Ok(out)
}

/// `√(Σ_{n=0}^{N} |c_n|²)`.
pub fn h2_partial_norm(sym: &FourierSymbol, n: usize) -> f64 {
    (0..=n as i64).map(|k| sym.coeff(k).norm_sqr()).sum::<f64>().sqrt()
}
