//! Scalar decision procedures for similarity of `[[Y, X], [0, Z]]` to a
//! contraction, one per diagonal pair and off-diagonal kind.

use crate::analysis::{bmoa_section_test, growth_profile, hinf_test};
use crate::config::LabConfig;
use crate::error::Result;
use crate::opmat::{DiagPair, FoguelCase, OffKind};
use crate::symbol::{factor_quotient, Decay, DerivativeMode, Factor, FourierSymbol, Laurent, Part, Support, SymbolSpec};
use crate::verdict::{Status, Verdict};
use crate::C64;
use serde::Serialize;
use std::collections::BTreeMap;

#[derive(Clone, Debug)]
pub struct CharacterizationReport {
    pub case: FoguelCase,
    pub verdict: Verdict,
    /// Named witness symbols, populated when the verdict holds.
    pub witnesses: Vec<(String, FourierSymbol)>,
    /// Sub-test verdicts in evaluation order.
    pub trace: Vec<(String, Verdict)>,
    /// Set when the decision rests on a criterion quoted from outside.
    pub external_criterion: bool,
    pub thresholds: BTreeMap<String, f64>,
}

#[derive(Serialize)]
struct TraceJson<'a> {
    name: &'a str,
    #[serde(flatten)]
    verdict: &'a Verdict,
}

#[derive(Serialize)]
struct ReportJson<'a> {
    case: FoguelCase,
    status: Status,
    diagnostics: &'a [(String, f64)],
    #[serde(skip_serializing_if = "Option::is_none")]
    reason: Option<&'a str>,
    witnesses: BTreeMap<&'a str, SymbolSpec>,
    trace: Vec<TraceJson<'a>>,
    external_criterion: bool,
    thresholds: &'a BTreeMap<String, f64>,
}

impl CharacterizationReport {
    fn new(case: FoguelCase, cfg: &LabConfig) -> Self {
        CharacterizationReport {
            case,
            verdict: Verdict::new(Status::HoldsExact),
            witnesses: Vec::new(),
            trace: Vec::new(),
            external_criterion: case.is_external(),
            thresholds: cfg.thresholds(),
        }
    }

    pub fn status(&self) -> Status {
        self.verdict.status
    }

    pub fn witness(&self, name: &str) -> Option<&FourierSymbol> {
        self.witnesses.iter().find(|(n, _)| n == name).map(|(_, s)| s)
    }

    fn sub(&mut self, name: &str, v: Verdict) {
        self.verdict.status = self.verdict.status.and(v.status);
        if self.verdict.reason.is_none() && !v.status.holds() {
            self.verdict.reason = v.reason.as_ref().map(|r| format!("{name}: {r}"));
            if self.verdict.reason.is_none() {
                self.verdict.reason = Some(format!("{name}: {}", v.status));
            }
        }
        self.trace.push((name.to_string(), v));
    }

    fn witness_add(&mut self, name: &str, sym: FourierSymbol) {
        self.witnesses.push((name.to_string(), sym));
    }

    pub fn to_json(&self) -> serde_json::Value {
        let r = ReportJson {
            case: self.case,
            status: self.verdict.status,
            diagnostics: &self.verdict.diagnostics,
            reason: self.verdict.reason.as_deref(),
            witnesses: self
                .witnesses
                .iter()
                .map(|(n, s)| (n.as_str(), s.to_spec()))
                .collect(),
            trace: self
                .trace
                .iter()
                .map(|(n, v)| TraceJson { name: n, verdict: v })
                .collect(),
            external_criterion: self.external_criterion,
            thresholds: &self.thresholds,
        };
        serde_json::to_value(r).expect("report serializes")
    }
}

fn one() -> C64 {
    C64::new(1.0, 0.0)
}

/// `Φ ∈ (1 − z̄²)L∞` and `(Φ* + Φ̃*)/(1 − z²) ∈ H∞ + conj(zH∞)`.
pub fn check_toeplitz_s_sstar(sym: &FourierSymbol, cfg: &LabConfig) -> Result<CharacterizationReport> {
    let mut rep = CharacterizationReport::new(FoguelCase::new(DiagPair::SSstar, OffKind::Toeplitz), cfg);
    let (theta, va) = factor_quotient(sym, Factor::OneMinusZbar2, cfg)?;
    rep.sub("quotient_1-zbar^2", va);
    let Some(theta) = theta else {
        return Ok(rep);
    };

    let sum = sym.star().add(&sym.tilde().star());
    let (q, vq) = factor_quotient(&sum, Factor::OneMinusZ2, cfg)?;
    rep.sub("quotient_1-z^2", vq);
    let Some(q) = q else {
        return Ok(rep);
    };
    let plus = q.riesz_project(Part::Plus);
    let minus = q.riesz_project(Part::MinusStrict);
    rep.sub("hinf_plus", hinf_test(&plus, &cfg.cesaro_degrees, cfg)?);
    rep.sub("hinf_conj_minus", hinf_test(&minus.star(), &cfg.cesaro_degrees, cfg)?);

    if rep.status().holds() {
        let omega = theta.shift_mul(-2).scale(-one());
        rep.witness_add("Theta", theta);
        rep.witness_add("Omega", omega);
        rep.witness_add("Q", q);
        rep.witness_add("Psi", plus);
    }
    Ok(rep)
}

/// `(P₊φ)′ ∈ BMOA` and `(z P₊φ)′ ∈ H∞`.
pub fn check_hankel_s_sstar(sym: &FourierSymbol, cfg: &LabConfig) -> Result<CharacterizationReport> {
    let mut rep = CharacterizationReport::new(FoguelCase::new(DiagPair::SSstar, OffKind::Hankel), cfg);
    let f = sym.riesz_project(Part::Plus);
    let fp = f.analytic_derivative(DerivativeMode::FPrime)?;
    let zfp = f.analytic_derivative(DerivativeMode::ZfPrime)?;
    rep.sub("bmoa_f_prime", bmoa_section_test(&fp, &cfg.section_sizes, cfg)?);
    rep.sub("hinf_zf_prime", hinf_test(&zfp, &cfg.cesaro_degrees, cfg)?);
    if rep.status().holds() {
        // A*e₀ has coefficients conj((n+1) c_n).
        rep.witness_add("Psi", zfp.tilde().star().named("conj coeffs of (zf)'"));
        rep.witness_add("f", f);
    }
    Ok(rep)
}

/// `T_Φ` case with diagonal `(S, S)`: similar to a contraction iff `Φ = 0`.
pub fn check_toeplitz_s_s(sym: &FourierSymbol, cfg: &LabConfig) -> Result<CharacterizationReport> {
    let mut rep = CharacterizationReport::new(FoguelCase::new(DiagPair::SS, OffKind::Toeplitz), cfg);
    rep.sub("vanishing", vanishing(sym, cfg));
    Ok(rep)
}

fn vanishing(sym: &FourierSymbol, cfg: &LabConfig) -> Verdict {
    let tol = cfg.coeff_zero_tol;
    let scan = match sym.as_laurent() {
        Some(p) => p.bandwidth(),
        None => cfg.scan,
    };
    if let Some((n, c)) = sym.first_nonzero(scan, tol) {
        return Verdict::with_reason(Status::FailsExact, format!("coefficient c_{n} = {c} is nonzero"))
            .diag("first_nonzero_index", n as f64)
            .diag("first_nonzero_abs", c.norm());
    }
    if sym.is_finite() {
        return Verdict::new(Status::HoldsExact).diag("max_abs_coeff", sym.max_abs_coeff(scan).1);
    }
    match crate::analysis::ess_sup_estimate(sym, 12) {
        Ok(e) if e.value <= tol => Verdict::new(Status::HoldsExact)
            .diag("scanned", scan as f64)
            .diag("ess_sup", e.value),
        Ok(e) => Verdict::with_reason(
            Status::FailsNumeric,
            "coefficients vanish on the scanned window but the boundary function does not",
        )
        .diag("ess_sup", e.value),
        Err(_) => Verdict::with_reason(
            Status::Inconclusive,
            "coefficients vanish on the scanned window; symbol cannot be evaluated",
        )
        .diag("scanned", scan as f64),
    }
}

/// Tail sums `ω_m = Σ_{j≥0} c_{m+1+2j}` solving `ω_m − ω_{m+2} = c_{m+1}`.
enum Tails {
    Finite(Laurent),
    Summable(FourierSymbol),
    Divergent(Verdict),
    Unknown(Verdict),
}

fn tail_sums(sym: &FourierSymbol, cfg: &LabConfig) -> Result<Tails> {
    let hi = sym.support().hi;
    if sym.is_finite() || hi.is_some() {
        let hi = hi.unwrap_or(-1);
        let c: Vec<C64> = (0..=hi.max(0) + 2).map(|n| sym.coeff(n)).collect();
        let mut omega = vec![C64::new(0.0, 0.0); c.len() + 2];
        for m in (0..c.len()).rev() {
            let next = if m + 1 < c.len() { c[m + 1] } else { C64::new(0.0, 0.0) };
            omega[m] = next + omega[m + 2];
        }
        return Ok(Tails::Finite(Laurent::new(0, omega)));
    }
    match sym.decay() {
        Decay::AbsolutelySummable { .. } => {
            let mut m = 8u64;
            while sym.decay().tail_bound(m).unwrap() > 1e-17 && m < 1 << 20 {
                m *= 2;
            }
            let terms = m as i64;
            let s = sym.clone();
            let decay = sym.decay();
            let omega = FourierSymbol::oracle(
                format!("omega({})", sym.name()),
                move |k| (0..terms).map(|j| s.coeff(k + 1 + 2 * j)).sum(),
                Support { lo: Some(0), hi: None },
                match decay {
                    Decay::AbsolutelySummable { constant, ratio } => Decay::AbsolutelySummable {
                        constant: constant * ratio / (1.0 - ratio * ratio),
                        ratio,
                    },
                    d => d,
                },
            );
            Ok(Tails::Summable(omega))
        }
        _ => {
            // Look for divergence of the two parity tails via partial sums.
            let mut worst: Option<Verdict> = None;
            for parity in [1i64, 2] {
                let mut pts = Vec::new();
                let mut acc = C64::new(0.0, 0.0);
                let mut j = 0i64;
                for k in 4..=16 {
                    let upto = 1i64 << k;
                    while j < upto {
                        acc += sym.coeff(parity + 2 * j);
                        j += 1;
                    }
                    pts.push((upto as f64, acc.norm()));
                }
                let profile = growth_profile(&pts, cfg)?;
                if profile.grows(cfg) {
                    let v = Verdict::with_reason(
                        Status::FailsNumeric,
                        format!(
                            "tail series Σ c_(m+1+2j) diverges for m = {}: partial sums {}",
                            parity - 1,
                            profile.class_label()
                        ),
                    )
                    .diag(format!("partial_sum_{}", pts.last().unwrap().0), pts.last().unwrap().1)
                    .diag("fit_r2", profile.r2);
                    worst = Some(v);
                    break;
                }
            }
            Ok(match worst {
                Some(v) => Tails::Divergent(v),
                None => Tails::Unknown(Verdict::with_reason(
                    Status::Inconclusive,
                    "tail sums may converge but the decay class gives no bound",
                )),
            })
        }
    }
}

/// `Φ ∈ (z − z̄)L∞ + conj(zH∞)`, decided through the forced analytic part `Ω`.
pub fn check_hankel_s_s(sym: &FourierSymbol, cfg: &LabConfig) -> Result<CharacterizationReport> {
    let mut rep = CharacterizationReport::new(FoguelCase::new(DiagPair::SS, OffKind::Hankel), cfg);
    let omega = match tail_sums(sym, cfg)? {
        Tails::Finite(p) => {
            rep.sub("tail_sums", Verdict::new(Status::HoldsExact).diag("omega_len", p.range().map_or(0, |r| r.1 + 1) as f64));
            FourierSymbol::finite(p)
        }
        Tails::Summable(o) => {
            rep.sub("tail_sums", Verdict::new(Status::HoldsNumeric));
            rep.sub("hankel_omega", bmoa_section_test(&o, &cfg.section_sizes, cfg)?);
            o
        }
        Tails::Divergent(v) | Tails::Unknown(v) => {
            rep.sub("tail_sums", v);
            return Ok(rep);
        }
    };
    let factor = FourierSymbol::from_entries([(0, one()), (-2, -one())]);
    let psi_hat = factor.mul(&omega, 0)?.sub(&sym.shift_mul(-1));
    let omega_dec = omega.sub(&psi_hat);

    // Ψ̂ must be anti-analytic: its coefficients at n ≥ 0 cancel by construction.
    let window = 64;
    let leak = (0..=window).map(|n| psi_hat.coeff(n).norm()).fold(0.0, f64::max);
    let zm = FourierSymbol::from_entries([(1, one()), (-1, -one())]);
    let decomposition = zm.mul(&omega_dec, 0)?.sub(&psi_hat.shift_mul(-1));
    let resid = (-window..=window)
        .map(|n| (decomposition.coeff(n) - sym.coeff(n)).norm())
        .fold(0.0, f64::max);
    let exact = sym.is_finite();
    let tol = if exact { cfg.coeff_zero_tol } else { cfg.witness_residual };
    let status = match (leak.max(resid) <= tol, exact) {
        (true, true) => Status::HoldsExact,
        (true, false) => Status::HoldsNumeric,
        (false, _) => Status::Inconclusive,
    };
    rep.sub(
        "decomposition",
        Verdict::new(status)
            .diag("analytic_leak", leak)
            .diag("decomposition_residual", resid),
    );
    if !exact {
        rep.sub("hinf_conj_psi_hat", hinf_test(&psi_hat.riesz_project(Part::MinusStrict).star(), &cfg.cesaro_degrees, cfg)?);
    }
    if rep.status().holds() {
        let theta = omega_dec.tilde().shift_mul(-2).scale(-one());
        rep.witness_add("Omega", omega);
        rep.witness_add("Psi_hat", psi_hat);
        rep.witness_add("Omega_dec", omega_dec);
        rep.witness_add("Theta", theta);
    }
    Ok(rep)
}

/// `T_Φ` case with diagonal `(S*, S)`: `Φ ∈ (z̄ − z)L∞`.
pub fn check_toeplitz_sstar_s(sym: &FourierSymbol, cfg: &LabConfig) -> Result<CharacterizationReport> {
    let mut rep = CharacterizationReport::new(FoguelCase::new(DiagPair::SstarS, OffKind::Toeplitz), cfg);
    let (theta, v) = factor_quotient(sym, Factor::ZbarMinusZ, cfg)?;
    rep.sub("quotient_zbar-z", v);
    if let (true, Some(theta)) = (rep.status().holds(), theta) {
        rep.witness_add("Theta", theta);
    }
    Ok(rep)
}

/// Diagonal `(S*, S*)`, reduced to the `(S, S)` case.
pub fn check_star_star(sym: &FourierSymbol, kind: OffKind, cfg: &LabConfig) -> Result<CharacterizationReport> {
    let mut rep = match kind {
        OffKind::Toeplitz => check_toeplitz_s_s(&sym.star(), cfg)?,
        OffKind::Hankel => check_hankel_s_s(sym, cfg)?,
    };
    rep.case = FoguelCase::new(DiagPair::SstarSstar, kind);
    Ok(rep)
}

/// Hankel case with diagonal `(S*, S)`: `(P₊φ)′ ∈ BMOA`. The criterion is
/// quoted rather than derived, and the report says so.
pub fn check_hankel_sstar_s_scalar(sym: &FourierSymbol, cfg: &LabConfig) -> Result<CharacterizationReport> {
    let mut rep = CharacterizationReport::new(FoguelCase::new(DiagPair::SstarS, OffKind::Hankel), cfg);
    let f = sym.riesz_project(Part::Plus);
    let fp = f.analytic_derivative(DerivativeMode::FPrime)?;
    rep.sub("bmoa_f_prime", bmoa_section_test(&fp, &cfg.section_sizes, cfg)?);
    rep.external_criterion = true;
    if rep.status().holds() {
        rep.witness_add("f_prime", fp);
    }
    Ok(rep)
}

/// Routes to the checker for `case`. Symbols that cannot be evaluated become
/// inconclusive reports rather than errors.
pub fn dispatch(case: FoguelCase, sym: &FourierSymbol, cfg: &LabConfig) -> CharacterizationReport {
    let result = match (case.pair, case.kind) {
        (DiagPair::SSstar, OffKind::Toeplitz) => check_toeplitz_s_sstar(sym, cfg),
        (DiagPair::SSstar, OffKind::Hankel) => check_hankel_s_sstar(sym, cfg),
        (DiagPair::SS, OffKind::Toeplitz) => check_toeplitz_s_s(sym, cfg),
        (DiagPair::SS, OffKind::Hankel) => check_hankel_s_s(sym, cfg),
        (DiagPair::SstarS, OffKind::Toeplitz) => check_toeplitz_sstar_s(sym, cfg),
        (DiagPair::SstarS, OffKind::Hankel) => check_hankel_sstar_s_scalar(sym, cfg),
        (DiagPair::SstarSstar, kind) => check_star_star(sym, kind, cfg),
    };
    match result {
        Ok(r) => r,
        Err(e) => {
            let mut rep = CharacterizationReport::new(case, cfg);
            rep.verdict = Verdict::with_reason(Status::Inconclusive, e.to_string());
            rep
        }
    }
}

/// Convenience for callers holding only a token.
pub fn dispatch_token(token: &str, sym: &FourierSymbol, cfg: &LabConfig) -> Result<CharacterizationReport> {
    let case: FoguelCase = token.parse()?;
    Ok(dispatch(case, sym, cfg))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::symbol::{builtin, Builtin};

    fn c(re: f64) -> C64 {
        C64::new(re, 0.0)
    }

    fn cfg() -> LabConfig {
        LabConfig::default()
    }

    fn family_z() -> FourierSymbol {
        builtin(&Builtin::Family {
            theta: Box::new(Builtin::Z),
        })
        .unwrap()
    }

    #[test]
    fn toeplitz_s_sstar_examples() {
        let r = check_toeplitz_s_sstar(&family_z(), &cfg()).unwrap();
        assert_eq!(r.status(), Status::HoldsExact, "{:?}", r.verdict);
        let q = r.witness("Q").unwrap().as_laurent().unwrap().clone();
        assert_eq!(q, Laurent::from_entries([(1, c(1.0)), (-3, c(-1.0))]));
        assert_eq!(
            r.witness("Theta").unwrap().as_laurent().unwrap(),
            &Laurent::monomial(-1, c(1.0))
        );

        let r = check_toeplitz_s_sstar(&FourierSymbol::zero(), &cfg()).unwrap();
        assert_eq!(r.status(), Status::HoldsExact);
        let r = check_toeplitz_s_sstar(&FourierSymbol::constant(c(1.0)), &cfg()).unwrap();
        assert_eq!(r.status(), Status::FailsNumeric);
    }

    #[test]
    fn hankel_s_sstar_examples() {
        let p = FourierSymbol::from_entries([(0, c(1.0)), (3, c(-2.0)), (-2, c(5.0))]);
        assert_eq!(check_hankel_s_sstar(&p, &cfg()).unwrap().status(), Status::HoldsExact);
        let g = builtin(&Builtin::Cauchy { alpha: c(2.0) }).unwrap();
        assert!(check_hankel_s_sstar(&g, &cfg()).unwrap().status().holds());
        let h = builtin(&Builtin::Hilbert).unwrap();
        assert!(check_hankel_s_sstar(&h, &cfg()).unwrap().status().fails());
    }

    #[test]
    fn toeplitz_s_s_examples() {
        assert_eq!(check_toeplitz_s_s(&FourierSymbol::zero(), &cfg()).unwrap().status(), Status::HoldsExact);
        let r = check_toeplitz_s_s(&FourierSymbol::monomial(1, c(1.0)), &cfg()).unwrap();
        assert_eq!(r.status(), Status::FailsExact);
        assert_eq!(r.trace[0].1.diagnostic("first_nonzero_index"), Some(1.0));
        let tiny = FourierSymbol::monomial(1, c(1e-15));
        assert_eq!(check_toeplitz_s_s(&tiny, &cfg()).unwrap().status(), Status::HoldsExact);
        let h = builtin(&Builtin::Hilbert).unwrap();
        assert_eq!(check_toeplitz_s_s(&h, &cfg()).unwrap().status(), Status::FailsExact);
    }

    #[test]
    fn hankel_s_s_examples() {
        let r = check_hankel_s_s(&FourierSymbol::constant(c(1.0)), &cfg()).unwrap();
        assert_eq!(r.status(), Status::HoldsExact);
        assert!(r.witness("Omega").unwrap().is_zero_exact());
        assert_eq!(r.witness("Psi_hat").unwrap().as_laurent().unwrap(), &Laurent::monomial(-1, c(-1.0)));
        assert_eq!(r.witness("Theta").unwrap().as_laurent().unwrap(), &Laurent::monomial(-1, c(-1.0)));

        let r = check_hankel_s_s(&FourierSymbol::monomial(1, c(1.0)), &cfg()).unwrap();
        assert_eq!(r.status(), Status::HoldsExact);
        assert_eq!(r.witness("Omega").unwrap().as_laurent().unwrap(), &Laurent::monomial(0, c(1.0)));
        assert_eq!(
            r.witness("Omega_dec").unwrap().as_laurent().unwrap(),
            &Laurent::from_entries([(0, c(1.0)), (-2, c(1.0))])
        );

        let h = builtin(&Builtin::Hilbert).unwrap();
        let r = check_hankel_s_s(&h, &cfg()).unwrap();
        assert!(r.status().fails(), "{:?}", r.verdict);

        let g = builtin(&Builtin::Cauchy { alpha: c(2.0) }).unwrap();
        let r = check_hankel_s_s(&g, &cfg()).unwrap();
        assert_eq!(r.status(), Status::HoldsNumeric, "{:?}", r.trace);
    }

    #[test]
    fn toeplitz_sstar_s_examples() {
        let s = Factor::ZbarMinusZ.symbol();
        let r = check_toeplitz_sstar_s(&s, &cfg()).unwrap();
        assert_eq!(r.status(), Status::HoldsExact);
        assert_eq!(r.witness("Theta").unwrap().as_laurent().unwrap(), &Laurent::monomial(0, c(1.0)));
        let r = check_toeplitz_sstar_s(&Factor::OneMinusZ2.symbol(), &cfg()).unwrap();
        assert_eq!(r.witness("Theta").unwrap().as_laurent().unwrap(), &Laurent::monomial(1, c(1.0)));
        let r = check_toeplitz_sstar_s(&FourierSymbol::constant(c(1.0)), &cfg()).unwrap();
        assert_eq!(r.status(), Status::FailsNumeric);
    }

    #[test]
    fn star_star_and_external() {
        let r = check_star_star(&FourierSymbol::zero(), OffKind::Toeplitz, &cfg()).unwrap();
        assert_eq!(r.status(), Status::HoldsExact);
        let r = check_star_star(&FourierSymbol::monomial(-1, c(1.0)), OffKind::Toeplitz, &cfg()).unwrap();
        assert_eq!(r.status(), Status::FailsExact);
        let r = check_star_star(&FourierSymbol::constant(c(1.0)), OffKind::Hankel, &cfg()).unwrap();
        assert!(r.status().holds());
        assert_eq!(r.case.token(), "h:s*,s*");

        let h = builtin(&Builtin::Hilbert).unwrap();
        let r = dispatch("h:s*,s".parse().unwrap(), &h, &cfg());
        assert!(r.external_criterion);
        assert!(r.status().fails());
        let r = dispatch("h:s*,s".parse().unwrap(), &FourierSymbol::zero(), &cfg());
        assert_eq!(r.status(), Status::HoldsExact);
    }

    #[test]
    fn unevaluable_becomes_inconclusive() {
        let s = FourierSymbol::oracle("u", |_| c(1.0), Support::ALL, Decay::Unknown);
        let r = dispatch("t:s*,s".parse().unwrap(), &s, &cfg());
        assert_eq!(r.status(), Status::Inconclusive);
        assert!(r.verdict.reason.unwrap().contains("cannot be evaluated"));
    }

    #[test]
    fn report_json_shape() {
        let r = dispatch("t:s*,s".parse().unwrap(), &Factor::ZbarMinusZ.symbol(), &cfg());
        let j = r.to_json();
        assert_eq!(j["case"], "t:s*,s");
        assert_eq!(j["status"], "holds_exact");
        assert_eq!(j["witnesses"]["Theta"]["kind"], "coeffs");
        assert!(j["thresholds"]["coeff_zero_tol"].is_number());
    }
}
