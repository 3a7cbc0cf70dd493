//! Built-in symbols.

use super::{CoeffKind, Decay, FourierSymbol, Laurent, Support};
use crate::error::{LabError, Result};
use crate::C64;
use std::f64::consts::PI;

#[derive(Clone, Debug, PartialEq)]
pub enum Builtin {
    Zero,
    One,
    Z,
    Zbar,
    /// `c · z^k`.
    Monomial { k: i64, c: C64 },
    /// `ψ(e^{it}) = i e^{-it} (π − t)` on `[0, 2π)`.
    Hilbert,
    /// `1 / (α − z)` with `|α| > 1`.
    Cauchy { alpha: C64 },
    LaurentPoly(Vec<(i64, C64)>),
    /// `(1 − z̄²) · θ(z̄)`.
    Family { theta: Box<Builtin> },
}

impl Builtin {
    pub fn name(&self) -> &'static str {
        match self {
            Builtin::Zero => "zero",
            Builtin::One => "one",
            Builtin::Z => "z",
            Builtin::Zbar => "zbar",
            Builtin::Monomial { .. } => "monomial",
            Builtin::Hilbert => "hilbert",
            Builtin::Cauchy { .. } => "cauchy",
            Builtin::LaurentPoly(_) => "laurent_poly",
            Builtin::Family { .. } => "family_1_minus_zbar2_theta",
        }
    }
}

pub fn builtin(b: &Builtin) -> Result<FourierSymbol> {
    let one = C64::new(1.0, 0.0);
    let sym = match b {
        Builtin::Zero => FourierSymbol::zero(),
        Builtin::One => FourierSymbol::constant(one).with_kind(CoeffKind::Rational),
        Builtin::Z => FourierSymbol::monomial(1, one).with_kind(CoeffKind::Rational),
        Builtin::Zbar => FourierSymbol::monomial(-1, one).with_kind(CoeffKind::Rational),
        Builtin::Monomial { k, c } => FourierSymbol::monomial(*k, *c),
        Builtin::Hilbert => hilbert(),
        Builtin::Cauchy { alpha } => cauchy(*alpha)?,
        Builtin::LaurentPoly(entries) => FourierSymbol::finite(Laurent::from_entries(entries.iter().copied())),
        Builtin::Family { theta } => {
            let theta = builtin(theta)?;
            let factor = FourierSymbol::from_entries([(0, one), (-2, -one)]);
            factor.mul(&theta.tilde(), 0)?
        }
    };
    Ok(sym.named(b.name()))
}

fn hilbert() -> FourierSymbol {
    let coeff = |n: i64| {
        if n == -1 {
            C64::new(0.0, 0.0)
        } else {
            C64::new(1.0 / (n + 1) as f64, 0.0)
        }
    };
    FourierSymbol::oracle("hilbert", coeff, Support::ALL, Decay::OneOverN { constant: 3.0 })
        .with_kind(CoeffKind::Rational)
        .with_closed_form(|t| {
            let t = t.rem_euclid(2.0 * PI);
            C64::new(0.0, 1.0) * C64::from_polar(1.0, -t) * (PI - t)
        })
        // P₊ψ = Σ zⁿ/(n+1) = −log(1 − z)/z on the circle, singular at t = 0.
        .with_plus_closed_form(|t| {
            let z = C64::from_polar(1.0, t);
            -(C64::new(1.0, 0.0) - z).ln() / z
        })
}

fn cauchy(alpha: C64) -> Result<FourierSymbol> {
    let r = alpha.norm();
    if !(r > 1.0) {
        return Err(LabError::InvalidParameter(format!(
            "cauchy requires |alpha| > 1, got |alpha| = {r}"
        )));
    }
    let inv = C64::new(1.0, 0.0) / alpha;
    let eval = move |t: f64| C64::new(1.0, 0.0) / (alpha - C64::from_polar(1.0, t));
    Ok(FourierSymbol::oracle(
        "cauchy",
        move |n| inv.powi(n as i32 + 1),
        Support { lo: Some(0), hi: None },
        Decay::AbsolutelySummable {
            constant: 1.0 / r,
            ratio: 1.0 / r,
        },
    )
    .with_closed_form(eval)
    .with_plus_closed_form(eval))
}
