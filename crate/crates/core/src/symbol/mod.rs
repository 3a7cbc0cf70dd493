//! Scalar `L∞(T)` symbols represented by their Fourier coefficients.
//!
//! A [`FourierSymbol`] is a coefficient oracle `n ↦ c_n` together with the
//! metadata needed to reason about it without sampling: the index range that
//! may be nonzero, a decay class with constants for tail bounds, and an
//! optional closed-form boundary evaluator.
//!
//! Finite symbols are stored as exact [`Laurent`] polynomials so that products,
//! reflections and factor divisions stay exact. Everything else is an oracle
//! closure.

mod catalog;
mod laurent;
mod quotient;
mod spec;

pub use catalog::{builtin, Builtin};
pub use laurent::Laurent;
pub use quotient::{factor_quotient, Factor};
pub use spec::{parse_symbol_source, SymbolSpec};

use crate::error::{LabError, Result};
use crate::C64;
use std::f64::consts::PI;
use std::fmt;
use std::sync::Arc;

pub type CoeffFn = Arc<dyn Fn(i64) -> C64 + Send + Sync>;
pub type Evaluator = Arc<dyn Fn(f64) -> C64 + Send + Sync>;

/// Inclusive index range outside of which every coefficient vanishes.
/// `None` on either side means unbounded in that direction.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct Support {
    pub lo: Option<i64>,
    pub hi: Option<i64>,
}

impl Support {
    pub const ALL: Support = Support { lo: None, hi: None };

    pub fn bounded(lo: i64, hi: i64) -> Self {
        Support {
            lo: Some(lo),
            hi: Some(hi),
        }
    }

    pub fn contains(&self, n: i64) -> bool {
        self.lo.map_or(true, |lo| n >= lo) && self.hi.map_or(true, |hi| n <= hi)
    }

    pub fn is_bounded(&self) -> bool {
        self.lo.is_some() && self.hi.is_some()
    }

    fn hull(a: Support, b: Support) -> Support {
        Support {
            lo: a.lo.zip(b.lo).map(|(x, y)| x.min(y)),
            hi: a.hi.zip(b.hi).map(|(x, y)| x.max(y)),
        }
    }

    fn sum(a: Support, b: Support) -> Support {
        Support {
            lo: a.lo.zip(b.lo).map(|(x, y)| x + y),
            hi: a.hi.zip(b.hi).map(|(x, y)| x + y),
        }
    }

    fn reflect(self) -> Support {
        Support {
            lo: self.hi.map(|h| -h),
            hi: self.lo.map(|l| -l),
        }
    }

    fn shift(self, k: i64) -> Support {
        Support {
            lo: self.lo.map(|l| l + k),
            hi: self.hi.map(|h| h + k),
        }
    }

    fn clip(self, lo: Option<i64>, hi: Option<i64>) -> Support {
        let lo = match (self.lo, lo) {
            (Some(a), Some(b)) => Some(a.max(b)),
            (a, b) => a.or(b),
        };
        let hi = match (self.hi, hi) {
            (Some(a), Some(b)) => Some(a.min(b)),
            (a, b) => a.or(b),
        };
        Support { lo, hi }
    }

    pub fn is_empty(&self) -> bool {
        matches!((self.lo, self.hi), (Some(l), Some(h)) if l > h)
    }
}

/// Decay class of the coefficient sequence, with the constants that make
/// tail bounds computable.
#[derive(Clone, Copy, Debug, PartialEq)]
pub enum Decay {
    Finite,
    /// `|c_n| ≤ constant · ratio^{|n|}` with `ratio < 1`.
    AbsolutelySummable { constant: f64, ratio: f64 },
    /// `|c_n| ≤ constant / (|n| + 1)`.
    OneOverN { constant: f64 },
    Unknown,
}

impl Decay {
    pub fn tag(&self) -> &'static str {
        match self {
            Decay::Finite => "finite",
            Decay::AbsolutelySummable { .. } => "absolutely_summable",
            Decay::OneOverN { .. } => "one_over_n",
            Decay::Unknown => "unknown",
        }
    }

    /// Bound on `Σ_{|n| > m} |c_n|`, when one is available.
    pub fn tail_bound(&self, m: u64) -> Option<f64> {
        match *self {
            Decay::Finite => Some(0.0),
            Decay::AbsolutelySummable { constant, ratio } => {
                Some(2.0 * constant * ratio.powf(m as f64 + 1.0) / (1.0 - ratio))
            }
            _ => None,
        }
    }

    fn weaker(a: Decay, b: Decay) -> Decay {
        use Decay::*;
        match (a, b) {
            (Unknown, _) | (_, Unknown) => Unknown,
            (Finite, x) | (x, Finite) => x,
            (
                AbsolutelySummable {
                    constant: c1,
                    ratio: r1,
                },
                AbsolutelySummable {
                    constant: c2,
                    ratio: r2,
                },
            ) => AbsolutelySummable {
                constant: c1 + c2,
                ratio: r1.max(r2),
            },
            (OneOverN { constant: c1 }, OneOverN { constant: c2 }) => OneOverN { constant: c1 + c2 },
            (OneOverN { constant: c1 }, AbsolutelySummable { constant: c2, ratio })
            | (AbsolutelySummable { constant: c2, ratio }, OneOverN { constant: c1 }) => {
                // r^n (n+1) is bounded by 1 / (e (-ln r)) + 1.
                let k = 1.0 + 1.0 / (std::f64::consts::E * -ratio.ln());
                OneOverN {
                    constant: c1 + c2 * k,
                }
            }
        }
    }

    fn scaled(self, s: f64) -> Decay {
        match self {
            Decay::AbsolutelySummable { constant, ratio } => Decay::AbsolutelySummable {
                constant: constant * s,
                ratio,
            },
            Decay::OneOverN { constant } => Decay::OneOverN {
                constant: constant * s,
            },
            d => d,
        }
    }
}

/// Whether the built-in coefficients are exact rationals (rounded once to
/// `f64`) or floating-point values from transcendental expressions.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum CoeffKind {
    Rational,
    Float,
}

#[derive(Clone)]
enum Repr {
    Finite(Arc<Laurent>),
    Oracle(CoeffFn),
}

/// A value of the symbol on the circle plus a bound on its truncation error.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Evaluation {
    pub value: C64,
    pub error_bound: f64,
}

/// Which Riesz projection to take.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Part {
    /// Indices `n ≥ 0`.
    Plus,
    /// Indices `n ≤ -1`.
    MinusStrict,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum DerivativeMode {
    /// `f ↦ f'`, i.e. `c_m ↦ (m+1) c_{m+1}`.
    FPrime,
    /// `f ↦ (z f)'`, i.e. `c_m ↦ (m+1) c_m`.
    ZfPrime,
}

#[derive(Clone)]
pub struct FourierSymbol {
    name: String,
    repr: Repr,
    support: Support,
    decay: Decay,
    kind: CoeffKind,
    closed_form: Option<Evaluator>,
    /// Closed form of the analytic part `P₊` when known.
    plus_closed_form: Option<Evaluator>,
    origin: Option<SymbolSpec>,
    /// Accumulated truncation error from bandwidth-limited products.
    truncation_error: f64,
}

impl fmt::Debug for FourierSymbol {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut d = f.debug_struct("FourierSymbol");
        d.field("name", &self.name)
            .field("support", &self.support)
            .field("decay", &self.decay);
        if let Repr::Finite(p) = &self.repr {
            d.field("coeffs", &p.entries().collect::<Vec<_>>());
        }
        d.finish()
    }
}

impl From<Laurent> for FourierSymbol {
    fn from(p: Laurent) -> Self {
        FourierSymbol::finite(p)
    }
}

impl FourierSymbol {
    pub fn finite(p: Laurent) -> Self {
        let support = match p.range() {
            Some((lo, hi)) => Support::bounded(lo, hi),
            None => Support::bounded(0, -1),
        };
        FourierSymbol {
            name: String::from("laurent"),
            repr: Repr::Finite(Arc::new(p)),
            support,
            decay: Decay::Finite,
            kind: CoeffKind::Float,
            closed_form: None,
            plus_closed_form: None,
            origin: None,
            truncation_error: 0.0,
        }
    }

    /// Symbol from a coefficient oracle. `support` and `decay` are trusted.
    pub fn oracle(
        name: impl Into<String>,
        coeffs: impl Fn(i64) -> C64 + Send + Sync + 'static,
        support: Support,
        decay: Decay,
    ) -> Self {
        FourierSymbol {
            name: name.into(),
            repr: Repr::Oracle(Arc::new(coeffs)),
            support,
            decay,
            kind: CoeffKind::Float,
            closed_form: None,
            plus_closed_form: None,
            origin: None,
            truncation_error: 0.0,
        }
    }

    pub fn zero() -> Self {
        FourierSymbol::finite(Laurent::zero()).named("zero")
    }

    pub fn constant(c: C64) -> Self {
        FourierSymbol::finite(Laurent::monomial(0, c))
    }

    /// `c · z^k`.
    pub fn monomial(k: i64, c: C64) -> Self {
        FourierSymbol::finite(Laurent::monomial(k, c))
    }

    pub fn from_entries(entries: impl IntoIterator<Item = (i64, C64)>) -> Self {
        FourierSymbol::finite(Laurent::from_entries(entries))
    }

    pub fn named(mut self, name: impl Into<String>) -> Self {
        self.name = name.into();
        self
    }

    pub fn with_closed_form(mut self, f: impl Fn(f64) -> C64 + Send + Sync + 'static) -> Self {
        self.closed_form = Some(Arc::new(f));
        self
    }

    pub fn with_plus_closed_form(
        mut self,
        f: impl Fn(f64) -> C64 + Send + Sync + 'static,
    ) -> Self {
        self.plus_closed_form = Some(Arc::new(f));
        self
    }

    pub fn with_kind(mut self, kind: CoeffKind) -> Self {
        self.kind = kind;
        self
    }

    pub(crate) fn with_origin(mut self, spec: SymbolSpec) -> Self {
        self.origin = Some(spec);
        self
    }

    pub fn name(&self) -> &str {
        &self.name
    }

    pub fn support(&self) -> Support {
        self.support
    }

    pub fn decay(&self) -> Decay {
        self.decay
    }

    pub fn kind(&self) -> CoeffKind {
        self.kind
    }

    pub fn truncation_error(&self) -> f64 {
        self.truncation_error
    }

    pub fn origin(&self) -> Option<&SymbolSpec> {
        self.origin.as_ref()
    }

    pub fn has_closed_form(&self) -> bool {
        self.closed_form.is_some()
    }

    pub fn as_laurent(&self) -> Option<&Laurent> {
        match &self.repr {
            Repr::Finite(p) => Some(p),
            Repr::Oracle(_) => None,
        }
    }

    pub fn is_finite(&self) -> bool {
        self.as_laurent().is_some()
    }

    pub fn is_zero_exact(&self) -> bool {
        self.as_laurent().is_some_and(|p| p.is_zero())
    }

    /// Analytic means every coefficient with negative index vanishes.
    pub fn is_analytic(&self) -> bool {
        self.support.is_empty() || self.support.lo.is_some_and(|lo| lo >= 0)
    }

    pub(crate) fn require_analytic(&self) -> Result<()> {
        if self.is_analytic() {
            Ok(())
        } else {
            Err(LabError::NonAnalytic {
                name: self.name.clone(),
                index: self.support.lo.unwrap_or(i64::MIN),
            })
        }
    }

    /// Largest `|n|` with a possibly nonzero coefficient, if bounded.
    pub fn bandwidth(&self) -> Option<i64> {
        match &self.repr {
            Repr::Finite(p) => Some(p.bandwidth()),
            Repr::Oracle(_) => {
                if self.support.is_empty() {
                    Some(0)
                } else {
                    let (lo, hi) = (self.support.lo?, self.support.hi?);
                    Some(lo.abs().max(hi.abs()))
                }
            }
        }
    }

    /// Fourier coefficient `c_n`; zero outside the support.
    pub fn coeff(&self, n: i64) -> C64 {
        if !self.support.contains(n) {
            return C64::new(0.0, 0.0);
        }
        match &self.repr {
            Repr::Finite(p) => p.coeff(n),
            Repr::Oracle(f) => f(n),
        }
    }

    /// Boundary value `Φ(e^{it})`.
    ///
    /// Uses the closed form when present, the exact sum for finite symbols,
    /// and otherwise a truncated Fourier sum whose tail bound is reported.
    pub fn eval(&self, t: f64) -> Result<Evaluation> {
        if let Some(f) = &self.closed_form {
            return Ok(Evaluation {
                value: f(t),
                error_bound: self.truncation_error,
            });
        }
        if let Repr::Finite(p) = &self.repr {
            return Ok(Evaluation {
                value: p.eval_angle(t),
                error_bound: 0.0,
            });
        }
        let m = self.summation_degree()?;
        let lo = self.support.lo.map_or(-(m as i64), |l| l.max(-(m as i64)));
        let hi = self.support.hi.map_or(m as i64, |h| h.min(m as i64));
        let value = (lo..=hi)
            .map(|n| self.coeff(n) * C64::from_polar(1.0, n as f64 * t))
            .sum();
        Ok(Evaluation {
            value,
            error_bound: if self.support.is_bounded() {
                self.truncation_error
            } else {
                self.decay.tail_bound(m).unwrap_or(f64::INFINITY) + self.truncation_error
            },
        })
    }

    /// Evaluator usable on grids; fails for symbols that cannot be certified.
    pub fn evaluator(&self) -> Result<Evaluator> {
        if let Some(f) = &self.closed_form {
            return Ok(f.clone());
        }
        if let Repr::Finite(p) = &self.repr {
            let p = p.clone();
            return Ok(Arc::new(move |t| p.eval_angle(t)));
        }
        let m = self.summation_degree()? as i64;
        let lo = self.support.lo.map_or(-m, |l| l.max(-m));
        let hi = self.support.hi.map_or(m, |h| h.min(m));
        let coeffs: Vec<(i64, C64)> = (lo..=hi).map(|n| (n, self.coeff(n))).collect();
        Ok(Arc::new(move |t| {
            coeffs
                .iter()
                .map(|(n, c)| c * C64::from_polar(1.0, *n as f64 * t))
                .sum()
        }))
    }

    pub fn is_evaluable(&self) -> bool {
        self.closed_form.is_some()
            || self.support.is_bounded()
            || matches!(self.decay, Decay::Finite | Decay::AbsolutelySummable { .. })
    }

    fn summation_degree(&self) -> Result<u64> {
        if self.support.is_bounded() {
            return Ok(self.bandwidth().unwrap_or(0) as u64);
        }
        match self.decay {
            Decay::Finite => Ok(self.bandwidth().unwrap_or(0) as u64),
            Decay::AbsolutelySummable { .. } => {
                let mut m = 8u64;
                while self.decay.tail_bound(m).unwrap() > 1e-15 && m < 1 << 20 {
                    m *= 2;
                }
                Ok(m)
            }
            _ => Err(LabError::Unevaluable(self.name.clone())),
        }
    }

    /// Coefficient window `[-m, m]` clipped to the support, as a polynomial.
    pub fn truncate(&self, m: i64) -> Laurent {
        if let Repr::Finite(p) = &self.repr {
            return p.restrict(-m, m);
        }
        let lo = self.support.lo.map_or(-m, |l| l.max(-m));
        let hi = self.support.hi.map_or(m, |h| h.min(m));
        Laurent::from_entries((lo..=hi).map(|n| (n, self.coeff(n))))
    }

    fn coeff_fn(&self) -> CoeffFn {
        match &self.repr {
            Repr::Finite(p) => {
                let p = p.clone();
                Arc::new(move |n| p.coeff(n))
            }
            Repr::Oracle(f) => {
                let f = f.clone();
                let support = self.support;
                Arc::new(move |n| {
                    if support.contains(n) {
                        f(n)
                    } else {
                        C64::new(0.0, 0.0)
                    }
                })
            }
        }
    }

    /// Closed-form evaluator if the symbol has one or is a polynomial.
    fn exact_evaluator(&self) -> Option<Evaluator> {
        if let Some(f) = &self.closed_form {
            return Some(f.clone());
        }
        match &self.repr {
            Repr::Finite(p) => {
                let p = p.clone();
                Some(Arc::new(move |t| p.eval_angle(t)))
            }
            Repr::Oracle(_) => None,
        }
    }

    pub fn add(&self, other: &FourierSymbol) -> FourierSymbol {
        if let (Repr::Finite(a), Repr::Finite(b)) = (&self.repr, &other.repr) {
            return FourierSymbol::finite(a.add(b));
        }
        let (f, g) = (self.coeff_fn(), other.coeff_fn());
        let mut out = FourierSymbol::oracle(
            format!("({} + {})", self.name, other.name),
            move |n| f(n) + g(n),
            Support::hull(self.support, other.support),
            Decay::weaker(self.decay, other.decay),
        );
        if let (Some(f), Some(g)) = (self.exact_evaluator(), other.exact_evaluator()) {
            out.closed_form = Some(Arc::new(move |t| f(t) + g(t)));
        }
        out.truncation_error = self.truncation_error + other.truncation_error;
        out
    }

    pub fn sub(&self, other: &FourierSymbol) -> FourierSymbol {
        self.add(&other.scale(C64::new(-1.0, 0.0)))
    }

    pub fn scale(&self, s: C64) -> FourierSymbol {
        if let Repr::Finite(p) = &self.repr {
            return FourierSymbol::finite(p.scale(s));
        }
        if s == C64::new(0.0, 0.0) {
            return FourierSymbol::zero();
        }
        let f = self.coeff_fn();
        let mut out = FourierSymbol::oracle(
            format!("{}·{}", fmt_c(s), self.name),
            move |n| s * f(n),
            self.support,
            self.decay.scaled(s.norm()),
        );
        if let Some(g) = &self.closed_form {
            let g = g.clone();
            out.closed_form = Some(Arc::new(move |t| s * g(t)));
        }
        if let Some(g) = &self.plus_closed_form {
            let g = g.clone();
            out.plus_closed_form = Some(Arc::new(move |t| s * g(t)));
        }
        out.truncation_error = self.truncation_error * s.norm();
        out
    }

    /// Multiplication by `z^k`: `c_n ↦ c_{n-k}`.
    pub fn shift_mul(&self, k: i64) -> FourierSymbol {
        if let Repr::Finite(p) = &self.repr {
            return FourierSymbol::finite(p.shift(k));
        }
        let f = self.coeff_fn();
        let decay = match self.decay {
            Decay::AbsolutelySummable { constant, ratio } => Decay::AbsolutelySummable {
                constant: constant * ratio.powi(-(k.abs() as i32)),
                ratio,
            },
            Decay::OneOverN { constant } => Decay::OneOverN {
                constant: constant * (1 + k.abs()) as f64,
            },
            d => d,
        };
        let mut out = FourierSymbol::oracle(
            format!("z^{k}·{}", self.name),
            move |n| f(n - k),
            self.support.shift(k),
            decay,
        );
        if let Some(g) = &self.closed_form {
            let g = g.clone();
            out.closed_form = Some(Arc::new(move |t| C64::from_polar(1.0, k as f64 * t) * g(t)));
        }
        out.truncation_error = self.truncation_error;
        out
    }

    /// Cauchy product. Exact when either factor is finite; otherwise both
    /// factors must be absolutely summable and the product is truncated to
    /// `|n| ≤ bandwidth` with its tail error recorded.
    pub fn mul(&self, other: &FourierSymbol, bandwidth: i64) -> Result<FourierSymbol> {
        match (&self.repr, &other.repr) {
            (Repr::Finite(a), Repr::Finite(b)) => Ok(FourierSymbol::finite(a.mul(b))),
            (Repr::Finite(a), Repr::Oracle(_)) => Ok(mul_finite(a, other)),
            (Repr::Oracle(_), Repr::Finite(b)) => Ok(mul_finite(b, self)),
            (Repr::Oracle(_), Repr::Oracle(_)) => {
                let summable = |d: Decay| matches!(d, Decay::AbsolutelySummable { .. });
                if !summable(self.decay) || !summable(other.decay) {
                    return Err(LabError::UnsupportedDecay {
                        op: "mul",
                        detail: format!(
                            "{} ({}) × {} ({})",
                            self.name,
                            self.decay.tag(),
                            other.name,
                            other.decay.tag()
                        ),
                    });
                }
                let ma = self.summation_degree()? as i64;
                let mb = other.summation_degree()? as i64;
                let inner = ma.max(mb) + bandwidth;
                let a = self.truncate(inner);
                let b = other.truncate(inner);
                let prod = a.mul(&b).restrict(-bandwidth, bandwidth);
                let tail = self.decay.tail_bound(bandwidth.max(0) as u64 / 2).unwrap()
                    * other.decay.tail_bound(0).unwrap()
                    + other.decay.tail_bound(bandwidth.max(0) as u64 / 2).unwrap()
                        * self.decay.tail_bound(0).unwrap();
                let mut out = FourierSymbol::finite(prod)
                    .named(format!("({} × {})[{bandwidth}]", self.name, other.name));
                out.truncation_error = tail + self.truncation_error + other.truncation_error;
                Ok(out)
            }
        }
    }

    /// `Φ̃(z) = Φ(z̄)`, i.e. `c_n ↦ c_{-n}`.
    pub fn tilde(&self) -> FourierSymbol {
        if let Repr::Finite(p) = &self.repr {
            return FourierSymbol::finite(p.reflect());
        }
        let f = self.coeff_fn();
        let mut out = FourierSymbol::oracle(
            format!("tilde({})", self.name),
            move |n| f(-n),
            self.support.reflect(),
            self.decay,
        );
        out.kind = self.kind;
        if let Some(g) = &self.closed_form {
            let g = g.clone();
            out.closed_form = Some(Arc::new(move |t| g(reflect_angle(t))));
        }
        out.truncation_error = self.truncation_error;
        out
    }

    /// Pointwise complex conjugate: `c_n ↦ conj(c_{-n})`.
    pub fn star(&self) -> FourierSymbol {
        if let Repr::Finite(p) = &self.repr {
            return FourierSymbol::finite(p.reflect().conj());
        }
        let f = self.coeff_fn();
        let mut out = FourierSymbol::oracle(
            format!("star({})", self.name),
            move |n| f(-n).conj(),
            self.support.reflect(),
            self.decay,
        );
        out.kind = self.kind;
        if let Some(g) = &self.closed_form {
            let g = g.clone();
            out.closed_form = Some(Arc::new(move |t| g(t).conj()));
        }
        out.truncation_error = self.truncation_error;
        out
    }

    pub fn riesz_project(&self, part: Part) -> FourierSymbol {
        let (lo, hi) = match part {
            Part::Plus => (Some(0), None),
            Part::MinusStrict => (None, Some(-1)),
        };
        if let Repr::Finite(p) = &self.repr {
            return FourierSymbol::finite(p.restrict(lo.unwrap_or(i64::MIN), hi.unwrap_or(i64::MAX)));
        }
        let support = self.support.clip(lo, hi);
        if support.is_empty() {
            return FourierSymbol::zero();
        }
        let f = self.coeff_fn();
        let tag = match part {
            Part::Plus => "P+",
            Part::MinusStrict => "P-",
        };
        let mut out = FourierSymbol::oracle(format!("{tag}({})", self.name), move |n| f(n), support, self.decay);
        out.kind = self.kind;
        out.closed_form = match part {
            Part::Plus => self.plus_closed_form.clone(),
            Part::MinusStrict => match (&self.closed_form, &self.plus_closed_form) {
                (Some(f), Some(g)) => {
                    let (f, g) = (f.clone(), g.clone());
                    Some(Arc::new(move |t| f(t) - g(t)) as Evaluator)
                }
                _ => None,
            },
        };
        if part == Part::Plus {
            out.plus_closed_form = out.closed_form.clone();
        }
        out
    }

    pub fn analytic_derivative(&self, mode: DerivativeMode) -> Result<FourierSymbol> {
        self.require_analytic()?;
        if let Repr::Finite(p) = &self.repr {
            let entries = p.entries().filter_map(|(n, c)| match mode {
                DerivativeMode::FPrime if n >= 1 => Some((n - 1, c * n as f64)),
                DerivativeMode::FPrime => None,
                DerivativeMode::ZfPrime => Some((n, c * (n + 1) as f64)),
            });
            return Ok(FourierSymbol::finite(Laurent::from_entries(entries)));
        }
        let f = self.coeff_fn();
        let decay = match self.decay {
            Decay::AbsolutelySummable { constant, ratio } => {
                // (m+2) r^{m+1} ≤ K (√r)^m with K = sup_m (m+2) r^{m/2+1}.
                let s = ratio.sqrt();
                let k = (0..100_000)
                    .map(|m| (m as f64 + 2.0) * ratio * s.powi(m))
                    .fold(0.0f64, f64::max);
                Decay::AbsolutelySummable {
                    constant: constant * k,
                    ratio: s,
                }
            }
            _ => Decay::Unknown,
        };
        let support = Support {
            lo: Some(0),
            hi: self.support.hi.map(|h| match mode {
                DerivativeMode::FPrime => h - 1,
                DerivativeMode::ZfPrime => h,
            }),
        };
        let (label, g): (&str, CoeffFn) = match mode {
            DerivativeMode::FPrime => ("d", Arc::new(move |m| f(m + 1) * (m + 1) as f64)),
            DerivativeMode::ZfPrime => ("dz", Arc::new(move |m| f(m) * (m + 1) as f64)),
        };
        let mut out = FourierSymbol::oracle(format!("{label}({})", self.name), move |m| g(m), support, decay);
        out.kind = self.kind;
        Ok(out)
    }

    /// Largest `|c_n|` over `|n| ≤ scan` together with its index.
    pub fn max_abs_coeff(&self, scan: i64) -> (i64, f64) {
        let lo = self.support.lo.map_or(-scan, |l| l.max(-scan));
        let hi = self.support.hi.map_or(scan, |h| h.min(scan));
        (lo..=hi)
            .map(|n| (n, self.coeff(n).norm()))
            .fold((0, 0.0), |acc, x| if x.1 > acc.1 { x } else { acc })
    }

    /// First index (by `|n|`, then sign) with `|c_n| > tol`, within `|n| ≤ scan`.
    pub fn first_nonzero(&self, scan: i64, tol: f64) -> Option<(i64, C64)> {
        (0..=scan)
            .flat_map(|k| if k == 0 { vec![0] } else { vec![k, -k] })
            .filter(|n| self.support.contains(*n))
            .map(|n| (n, self.coeff(n)))
            .find(|(_, c)| c.norm() > tol)
    }

    /// Serializable description: the origin spec when known, exact
    /// coefficients for finite symbols, and a coefficient window otherwise.
    pub fn to_spec(&self) -> SymbolSpec {
        if let Some(s) = &self.origin {
            return s.clone();
        }
        match &self.repr {
            Repr::Finite(p) => SymbolSpec::from_laurent(p, None),
            Repr::Oracle(_) => {
                let w = spec::WITNESS_WINDOW;
                SymbolSpec::from_laurent(&self.truncate(w), Some((-w, w)))
            }
        }
    }
}

fn mul_finite(p: &Laurent, other: &FourierSymbol) -> FourierSymbol {
    let entries: Vec<(i64, C64)> = p.entries().collect();
    let g = other.coeff_fn();
    let decay = match other.decay {
        Decay::AbsolutelySummable { constant, ratio } => Decay::AbsolutelySummable {
            constant: constant
                * entries
                    .iter()
                    .map(|(m, c)| c.norm() * ratio.powi(-(m.abs() as i32)))
                    .sum::<f64>(),
            ratio,
        },
        Decay::OneOverN { constant } => Decay::OneOverN {
            constant: constant
                * entries
                    .iter()
                    .map(|(m, c)| c.norm() * (1 + m.abs()) as f64)
                    .sum::<f64>(),
        },
        d => d,
    };
    let support = match p.range() {
        None => return FourierSymbol::zero(),
        Some((lo, hi)) => Support::sum(Support::bounded(lo, hi), other.support),
    };
    let e2 = entries.clone();
    let mut out = FourierSymbol::oracle(
        format!("(poly × {})", other.name),
        move |n| e2.iter().map(|(m, c)| c * g(n - m)).sum(),
        support,
        decay,
    );
    if let Some(f) = &other.closed_form {
        let f = f.clone();
        let q = p.clone();
        out.closed_form = Some(Arc::new(move |t| q.eval_angle(t) * f(t)));
    }
    out.truncation_error = other.truncation_error * p.l1_norm();
    out
}

/// `t ↦ 2π − t` folded back into `[0, 2π)`.
pub fn reflect_angle(t: f64) -> f64 {
    let r = (2.0 * PI - t).rem_euclid(2.0 * PI);
    if r >= 2.0 * PI {
        0.0
    } else {
        r
    }
}

fn fmt_c(c: C64) -> String {
    if c.im == 0.0 {
        format!("{}", c.re)
    } else {
        format!("({}{:+}i)", c.re, c.im)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn c(re: f64, im: f64) -> C64 {
        C64::new(re, im)
    }

    fn z() -> FourierSymbol {
        FourierSymbol::monomial(1, c(1.0, 0.0))
    }

    fn zbar() -> FourierSymbol {
        FourierSymbol::monomial(-1, c(1.0, 0.0))
    }

    #[test]
    fn monomial_support() {
        assert_eq!(z().coeff(0), c(0.0, 0.0));
        assert_eq!(z().coeff(1), c(1.0, 0.0));
    }

    #[test]
    fn eval_cosine() {
        let s = z().add(&zbar());
        assert!((s.eval(0.0).unwrap().value - c(2.0, 0.0)).norm() < 1e-15);
    }

    #[test]
    fn algebra_examples() {
        let one = FourierSymbol::constant(c(1.0, 0.0));
        assert_eq!(one.shift_mul(1).as_laurent(), z().as_laurent());

        let f = FourierSymbol::from_entries([(0, c(1.0, 0.0)), (-2, c(-1.0, 0.0))]);
        assert_eq!(f.mul(&one, 0).unwrap().as_laurent(), f.as_laurent());

        // (z - z̄) z̄ = 1 - z̄²
        let zmz = z().sub(&zbar());
        let prod = zmz.mul(&zbar(), 0).unwrap();
        assert_eq!(prod.as_laurent(), f.as_laurent());
    }

    #[test]
    fn tilde_and_star_examples() {
        assert_eq!(z().tilde().as_laurent(), zbar().as_laurent());
        let one = FourierSymbol::constant(c(1.0, 0.0));
        assert_eq!(one.tilde().as_laurent(), one.as_laurent());

        let iz = FourierSymbol::monomial(1, c(0.0, 1.0));
        assert_eq!(
            iz.star().as_laurent(),
            FourierSymbol::monomial(-1, c(0.0, -1.0)).as_laurent()
        );
        let phi = FourierSymbol::from_entries([(-1, c(1.0, 0.0)), (-3, c(-1.0, 0.0))]);
        let want = FourierSymbol::from_entries([(1, c(1.0, 0.0)), (3, c(-1.0, 0.0))]);
        assert_eq!(phi.star().as_laurent(), want.as_laurent());
    }

    #[test]
    fn riesz_partition_of_trinomial() {
        let s = FourierSymbol::from_entries([(1, c(1.0, 0.0)), (0, c(1.0, 0.0)), (-1, c(1.0, 0.0))]);
        let p = s.riesz_project(Part::Plus);
        let m = s.riesz_project(Part::MinusStrict);
        assert_eq!(p.add(&m).as_laurent(), s.as_laurent());
        assert!(zbar().riesz_project(Part::Plus).is_zero_exact());
    }

    #[test]
    fn derivative_of_constant() {
        let one = FourierSymbol::constant(c(1.0, 0.0));
        assert!(one
            .analytic_derivative(DerivativeMode::FPrime)
            .unwrap()
            .is_zero_exact());
        let zf = one.analytic_derivative(DerivativeMode::ZfPrime).unwrap();
        assert_eq!(zf.as_laurent(), one.as_laurent());
        assert!(matches!(
            zbar().analytic_derivative(DerivativeMode::FPrime),
            Err(LabError::NonAnalytic { .. })
        ));
    }

    #[test]
    fn unevaluable_without_decay() {
        let s = FourierSymbol::oracle("bad", |_| c(1.0, 0.0), Support::ALL, Decay::Unknown);
        assert!(matches!(s.eval(0.3), Err(LabError::Unevaluable(_))));
        let t = s.clone();
        assert!(s.mul(&t, 8).is_err());
    }

    #[test]
    fn summable_eval_reports_tail() {
        let s = builtin(&Builtin::Cauchy { alpha: c(2.0, 0.0) }).unwrap();
        let (support, decay) = (s.support(), s.decay());
        let plain = FourierSymbol::oracle("g", move |n| s.coeff(n), support, decay);
        let e = plain.eval(1.0).unwrap();
        let want = C64::new(1.0, 0.0) / (c(2.0, 0.0) - C64::from_polar(1.0, 1.0));
        assert!((e.value - want).norm() < 1e-13);
        assert!(e.error_bound < 1e-14);
    }

    #[test]
    fn reflect_angle_folds() {
        assert_eq!(reflect_angle(0.0), 0.0);
        assert!((reflect_angle(PI / 2.0) - 1.5 * PI).abs() < 1e-15);
    }
}
