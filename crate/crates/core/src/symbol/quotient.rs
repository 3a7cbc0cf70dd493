//! Membership in `factor · L∞(T)` for the four factors vanishing at `z = ±1`.

use super::{CoeffKind, Decay, FourierSymbol, Laurent, Support};
use crate::analysis::fit::linear_fit;
use crate::config::LabConfig;
use crate::error::Result;
use crate::verdict::{Status, Verdict};
use crate::C64;
use rustfft::FftPlanner;
use serde::{Deserialize, Serialize};
use std::f64::consts::PI;
use std::fmt;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Factor {
    /// `1 − z̄²`
    OneMinusZbar2,
    /// `z − z̄`
    ZMinusZbar,
    /// `z̄ − z`
    ZbarMinusZ,
    /// `1 − z²`
    OneMinusZ2,
}

impl Factor {
    /// Every factor is `sign · z^k · (z² − 1)`; returns `(k, sign)`.
    fn normal_form(self) -> (i64, f64) {
        match self {
            Factor::OneMinusZbar2 => (-2, 1.0),
            Factor::ZMinusZbar => (-1, 1.0),
            Factor::ZbarMinusZ => (-1, -1.0),
            Factor::OneMinusZ2 => (0, -1.0),
        }
    }

    pub fn laurent(self) -> Laurent {
        let (k, s) = self.normal_form();
        Laurent::from_entries([(k + 2, C64::new(s, 0.0)), (k, C64::new(-s, 0.0))])
    }

    pub fn symbol(self) -> FourierSymbol {
        FourierSymbol::finite(self.laurent()).named(self.to_string())
    }

    pub fn eval(self, t: f64) -> C64 {
        let (k, s) = self.normal_form();
        let z = C64::from_polar(1.0, t);
        s * z.powi(k as i32) * (z * z - 1.0)
    }
}

impl fmt::Display for Factor {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Factor::OneMinusZbar2 => "1-zbar^2",
            Factor::ZMinusZbar => "z-zbar",
            Factor::ZbarMinusZ => "zbar-z",
            Factor::OneMinusZ2 => "1-z^2",
        })
    }
}

/// Decides whether `sym / factor` is essentially bounded.
///
/// Finite symbols vanishing at `±1` are divided exactly. Everything else is
/// graded by the growth of `sup |sym / factor|` over dyadic grids that avoid
/// `t ∈ {0, π}`; a bounded quotient is returned as a witness whose
/// coefficients come from a DFT of the sampled quotient.
pub fn factor_quotient(
    sym: &FourierSymbol,
    factor: Factor,
    cfg: &LabConfig,
) -> Result<(Option<FourierSymbol>, Verdict)> {
    if let Some(p) = sym.as_laurent() {
        let scale = p.l1_norm().max(1.0);
        let (at1, atm1) = p.values_at_pm_one();
        let tol = cfg.coeff_zero_tol * scale;
        if at1.norm() <= tol && atm1.norm() <= tol {
            let (q, _) = p.div_z2_minus_1();
            let (k, s) = factor.normal_form();
            let quotient = q.shift(-k).scale(C64::new(s, 0.0));
            let back = factor.laurent().mul(&quotient);
            let residual = back
                .add(&p.scale(C64::new(-1.0, 0.0)))
                .entries()
                .map(|(_, c)| c.norm())
                .fold(0.0, f64::max);
            if residual <= tol {
                let v = Verdict::new(Status::HoldsExact)
                    .diag("value_at_1", at1.norm())
                    .diag("value_at_minus_1", atm1.norm())
                    .diag("round_trip_residual", residual);
                let name = format!("{}/({factor})", sym.name());
                return Ok((Some(FourierSymbol::finite(quotient).named(name)), v));
            }
        }
    }
    numeric_quotient(sym, factor, cfg)
}

fn numeric_quotient(
    sym: &FourierSymbol,
    factor: Factor,
    cfg: &LabConfig,
) -> Result<(Option<FourierSymbol>, Verdict)> {
    let f = sym.evaluator()?;
    let depth = cfg.quotient_depth.max(2);
    let finest = 1usize << (depth + 3);
    let h = 2.0 * PI / finest as f64;
    let ratio: Vec<f64> = (0..finest)
        .map(|j| {
            if j == 0 || j == finest / 2 {
                0.0
            } else {
                let t = j as f64 * h;
                (f(t) / factor.eval(t)).norm()
            }
        })
        .collect();

    let mut verdict = Verdict::new(Status::Inconclusive);
    let mut sups = Vec::with_capacity(depth as usize);
    let mut spacings = Vec::with_capacity(depth as usize);
    for d in 1..=depth {
        let points = 1usize << (d + 3);
        let stride = finest / points;
        let sup = ratio.iter().step_by(stride).fold(0.0f64, |a, &b| a.max(b));
        verdict.push(format!("sup_level_{d}"), sup);
        sups.push(sup);
        spacings.push(2.0 * PI / points as f64);
    }

    if sups.iter().any(|s| !s.is_finite()) {
        verdict.reason = Some("quotient is not finite on the grid".into());
        verdict.status = Status::FailsNumeric;
        return Ok((None, verdict));
    }

    let ratios: Vec<f64> = sups
        .windows(2)
        .map(|w| if w[0] > 0.0 { w[1] / w[0] } else if w[1] > 0.0 { f64::INFINITY } else { 1.0 })
        .collect();
    let tail = (ratios.len() / 4).max(2).min(ratios.len());
    let stable = ratios[ratios.len() - tail..]
        .iter()
        .all(|&r| r <= 1.0 + cfg.quotient_tol);

    let half = sups.len() / 2;
    let positive: Vec<(f64, f64)> = spacings[half..]
        .iter()
        .zip(&sups[half..])
        .filter(|(_, &s)| s > 0.0)
        .map(|(&h, &s)| (-h.ln(), s.ln()))
        .collect();
    let fit = if positive.len() >= 3 {
        let (xs, ys): (Vec<f64>, Vec<f64>) = positive.into_iter().unzip();
        Some(linear_fit(&xs, &ys))
    } else {
        None
    };
    if let Some(fit) = &fit {
        verdict.push("growth_exponent", fit.slope);
        verdict.push("growth_r2", fit.r2);
    }
    verdict.push("final_sup", *sups.last().unwrap());

    if stable {
        verdict.status = Status::HoldsNumeric;
        let witness = dft_witness(sym, factor, f, cfg.quotient_dft_size);
        return Ok((Some(witness), verdict));
    }
    match fit {
        Some(fit) if fit.slope > cfg.min_growth_exponent && fit.r2 >= cfg.min_r2 => {
            verdict.status = Status::FailsNumeric;
            verdict.reason = Some(format!(
                "sup |sym/({factor})| grows like h^-{:.3} as the grid refines",
                fit.slope
            ));
        }
        _ => {
            verdict.reason = Some("sup neither stabilizes nor shows a clean power law".into());
        }
    }
    Ok((None, verdict))
}

fn dft_witness(
    sym: &FourierSymbol,
    factor: Factor,
    f: super::Evaluator,
    size: usize,
) -> FourierSymbol {
    let size = size.max(16);
    let mut buf: Vec<C64> = (0..size)
        .map(|j| {
            let t = 2.0 * PI * (j as f64 + 0.5) / size as f64;
            f(t) / factor.eval(t)
        })
        .collect();
    FftPlanner::new().plan_fft_forward(size).process(&mut buf);
    let half = (size / 4) as i64 - 1;
    let coeffs: Vec<C64> = (-half..=half)
        .map(|n| {
            let k = n.rem_euclid(size as i64) as usize;
            buf[k] * C64::from_polar(1.0, -PI * n as f64 / size as f64) / size as f64
        })
        .collect();
    let eval = f.clone();
    FourierSymbol::oracle(
        format!("{}/({factor})", sym.name()),
        move |n| coeffs[(n + half) as usize],
        Support::bounded(-half, half),
        Decay::Unknown,
    )
    .with_kind(CoeffKind::Float)
    .with_closed_form(move |t| {
        let d = factor.eval(t);
        if d.norm() < 1e-13 {
            // Removable point: average the two neighbours.
            let e = 1e-7;
            0.5 * (eval(t - e) / factor.eval(t - e) + eval(t + e) / factor.eval(t + e))
        } else {
            eval(t) / d
        }
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn c(re: f64) -> C64 {
        C64::new(re, 0.0)
    }

    #[test]
    fn factors_in_normal_form() {
        let want = [
            (Factor::OneMinusZbar2, vec![(0, c(1.0)), (-2, c(-1.0))]),
            (Factor::ZMinusZbar, vec![(1, c(1.0)), (-1, c(-1.0))]),
            (Factor::ZbarMinusZ, vec![(-1, c(1.0)), (1, c(-1.0))]),
            (Factor::OneMinusZ2, vec![(0, c(1.0)), (2, c(-1.0))]),
        ];
        for (f, e) in want {
            assert_eq!(f.laurent(), Laurent::from_entries(e), "{f}");
            let t = 0.7;
            assert!((f.laurent().eval_angle(t) - f.eval(t)).norm() < 1e-14);
        }
    }

    #[test]
    fn exact_examples() {
        let cfg = LabConfig::default();
        let s = Factor::OneMinusZbar2.symbol();
        let (q, v) = factor_quotient(&s, Factor::OneMinusZbar2, &cfg).unwrap();
        assert_eq!(v.status, Status::HoldsExact);
        assert_eq!(q.unwrap().as_laurent(), Some(&Laurent::monomial(0, c(1.0))));

        let s = Factor::OneMinusZ2.symbol();
        let (q, v) = factor_quotient(&s, Factor::ZbarMinusZ, &cfg).unwrap();
        assert_eq!(v.status, Status::HoldsExact);
        assert_eq!(q.unwrap().as_laurent(), Some(&Laurent::monomial(1, c(1.0))));
    }

    #[test]
    fn constant_fails_numerically() {
        let cfg = LabConfig::default();
        let one = FourierSymbol::constant(c(1.0));
        let (q, v) = factor_quotient(&one, Factor::OneMinusZbar2, &cfg).unwrap();
        assert!(q.is_none());
        assert_eq!(v.status, Status::FailsNumeric);
        let alpha = v.diagnostic("growth_exponent").unwrap();
        assert!((alpha - 1.0).abs() < 0.05, "{alpha}");
    }

    #[test]
    fn smooth_quotient_holds_numerically() {
        // (1 − z̄²)/(2 − z) is in the class with quotient 1/(2 − z).
        let cfg = LabConfig::default();
        let g = crate::symbol::builtin(&crate::symbol::Builtin::Cauchy { alpha: c(2.0) }).unwrap();
        let s = Factor::OneMinusZbar2.symbol().mul(&g, 0).unwrap();
        let (q, v) = factor_quotient(&s, Factor::OneMinusZbar2, &cfg).unwrap();
        assert_eq!(v.status, Status::HoldsNumeric);
        let q = q.unwrap();
        for n in 0..6 {
            assert!((q.coeff(n) - g.coeff(n)).norm() < 1e-10, "n = {n}");
        }
        assert!(q.coeff(-3).norm() < 1e-10);
    }

    #[test]
    fn unevaluable_is_rejected() {
        let cfg = LabConfig::default();
        let s = FourierSymbol::oracle("u", |_| c(0.0), Support::ALL, Decay::Unknown);
        assert!(factor_quotient(&s, Factor::ZMinusZbar, &cfg).is_err());
    }
}
