use foguel_core::analysis::{ess_sup_estimate, h2_partial_norm, hinf_test, op_norm};
use foguel_core::characterize::{check_star_star, check_toeplitz_s_s, dispatch};
use foguel_core::intertwine::{certify, sylvester_dense, sylvester_lsq};
use foguel_core::opmat::{
    basic_section, foguel_section, hankel_section, interior_max_abs, toeplitz_section, top_right, xn_section,
    BasicKind, DiagPair, OffKind,
};
use foguel_core::symbol::{builtin, factor_quotient, Builtin, Factor, FourierSymbol, Laurent, Part};
use foguel_core::{FoguelCase, LabConfig, Status, C64};
use proptest::prelude::*;

fn coeff() -> impl Strategy<Value = C64> {
    (-1.0..1.0f64, -1.0..1.0f64).prop_map(|(re, im)| C64::new(re, im))
}

fn laurent(lo: i64, hi: i64) -> impl Strategy<Value = Laurent> {
    prop::collection::vec((lo..=hi, coeff()), 0..8).prop_map(Laurent::from_entries)
}

fn finite(lo: i64, hi: i64) -> impl Strategy<Value = FourierSymbol> {
    laurent(lo, hi).prop_map(FourierSymbol::finite)
}

fn nonzero_finite(lo: i64, hi: i64) -> impl Strategy<Value = FourierSymbol> {
    (lo..=hi, coeff(), finite(lo, hi)).prop_filter_map("zero symbol", |(k, c, s)| {
        let s = s.add(&FourierSymbol::monomial(k, c));
        (!s.is_zero_exact()).then_some(s)
    })
}

fn catalog() -> Vec<FourierSymbol> {
    [
        Builtin::Zero,
        Builtin::One,
        Builtin::Z,
        Builtin::Zbar,
        Builtin::Hilbert,
        Builtin::Cauchy { alpha: C64::new(2.0, 0.5) },
        Builtin::Monomial { k: -3, c: C64::new(0.0, 2.0) },
        Builtin::Family { theta: Box::new(Builtin::Z) },
    ]
    .iter()
    .map(|b| builtin(b).unwrap())
    .collect()
}

fn same_coeffs(a: &FourierSymbol, b: &FourierSymbol, window: i64) -> bool {
    (-window..=window).all(|n| (a.coeff(n) - b.coeff(n)).norm() == 0.0)
}

fn cfg() -> LabConfig {
    LabConfig::default()
}

#[test]
fn involutions_on_catalog() {
    for s in catalog() {
        assert!(same_coeffs(&s.tilde().tilde(), &s, 64), "{}", s.name());
        assert!(same_coeffs(&s.star().star(), &s, 64), "{}", s.name());
        assert!(same_coeffs(&s.star().tilde(), &s.tilde().star(), 64), "{}", s.name());
    }
}

#[test]
fn hilbert_coefficients_follow_entry_rule() {
    let h = builtin(&Builtin::Hilbert).unwrap();
    for n in 0..=10_000i64 {
        assert_eq!(h.coeff(n), C64::new(1.0 / (n as f64 + 1.0), 0.0), "n = {n}");
    }
    let sec = hankel_section(&h, 12);
    for i in 0..12 {
        for j in 0..12 {
            assert_eq!(sec.entry(i, j).re, 1.0 / (i + j + 1) as f64);
        }
    }
}

#[test]
fn op_norm_is_monotone_in_section_size() {
    let syms = [
        builtin(&Builtin::Hilbert).unwrap(),
        builtin(&Builtin::Cauchy { alpha: C64::new(1.5, 0.0) }).unwrap(),
        FourierSymbol::from_entries([(-2, C64::new(1.0, 1.0)), (0, C64::new(-0.5, 0.0)), (3, C64::new(0.2, -2.0))]),
    ];
    for s in &syms {
        for kind in [OffKind::Toeplitz, OffKind::Hankel] {
            let norms: Vec<f64> = [8, 32, 128, 512].iter().map(|&n| op_norm(&kind.section(s, n))).collect();
            assert!(norms.windows(2).all(|w| w[1] >= w[0] - 1e-12), "{} {kind:?} {norms:?}", s.name());
        }
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(128))]

    #[test]
    fn tilde_and_star_are_commuting_involutions(s in finite(-12, 12)) {
        prop_assert!(same_coeffs(&s.tilde().tilde(), &s, 16));
        prop_assert!(same_coeffs(&s.star().star(), &s, 16));
        prop_assert!(same_coeffs(&s.star().tilde(), &s.tilde().star(), 16));
    }

    #[test]
    fn eval_matches_fourier_sum(p in laurent(-10, 10)) {
        let s = FourierSymbol::finite(p.clone());
        for k in 0..64 {
            let t = 2.0 * std::f64::consts::PI * k as f64 / 64.0;
            let direct: C64 = p.entries().map(|(n, c)| c * C64::from_polar(1.0, n as f64 * t)).sum();
            prop_assert!((s.eval(t).unwrap().value - direct).norm() <= 1e-12);
        }
    }

    #[test]
    fn riesz_parts_partition_coefficients(s in finite(-10, 10)) {
        let plus = s.riesz_project(Part::Plus);
        let minus = s.riesz_project(Part::MinusStrict);
        for n in -12..=12i64 {
            prop_assert_eq!(plus.coeff(n) + minus.coeff(n), s.coeff(n));
            if n < 0 { prop_assert_eq!(plus.coeff(n), C64::new(0.0, 0.0)); }
            else { prop_assert_eq!(minus.coeff(n), C64::new(0.0, 0.0)); }
        }
    }

    #[test]
    fn exact_quotient_round_trips(q in laurent(-6, 6), which in 0usize..4) {
        let factor = [Factor::OneMinusZbar2, Factor::ZMinusZbar, Factor::ZbarMinusZ, Factor::OneMinusZ2][which];
        let sym = FourierSymbol::finite(factor.laurent().mul(&q));
        let (quot, v) = factor_quotient(&sym, factor, &cfg()).unwrap();
        prop_assert_eq!(v.status, Status::HoldsExact);
        let back = factor.laurent().mul(quot.unwrap().as_laurent().unwrap());
        for n in -12..=12i64 {
            prop_assert!((back.coeff(n) - sym.coeff(n)).norm() <= 1e-12);
        }
    }

    #[test]
    fn toeplitz_and_hankel_brackets(s in finite(-8, 8), n in 4usize..40) {
        let sh = basic_section(BasicKind::Shift, n);
        let st = basic_section(BasicKind::Backshift, n);
        let t = toeplitz_section(&s, n);
        prop_assert!(interior_max_abs(&st.mul(&t).mul(&sh), &t, 1).unwrap() <= 1e-14);
        let h = hankel_section(&s, n);
        prop_assert!(interior_max_abs(&st.mul(&h), &h.mul(&sh), 1).unwrap() <= 1e-14);
    }

    #[test]
    fn hankel_ignores_negative_coefficients(s in finite(-8, 8), junk in laurent(-8, -1), n in 1usize..24) {
        let perturbed = s.add(&FourierSymbol::finite(junk));
        prop_assert_eq!(hankel_section(&s, n).data, hankel_section(&perturbed, n).data);
    }

    #[test]
    fn h2_partial_norm_is_nondecreasing(s in finite(-4, 30)) {
        let v: Vec<f64> = (0..32).map(|n| h2_partial_norm(&s, n)).collect();
        prop_assert!(v.windows(2).all(|w| w[1] >= w[0]));
    }

    #[test]
    fn toeplitz_s_s_is_scale_invariant(s in finite(-6, 6), re in 0.1..5.0f64, im in -5.0..5.0f64) {
        let a = check_toeplitz_s_s(&s, &cfg()).unwrap().status();
        let b = check_toeplitz_s_s(&s.scale(C64::new(re, im)), &cfg()).unwrap().status();
        prop_assert_eq!(a, b);
        prop_assert_eq!(a == Status::HoldsExact, s.is_zero_exact());
    }

    #[test]
    fn star_star_delegates_to_s_s(s in finite(-6, 6)) {
        let a = check_star_star(&s, OffKind::Toeplitz, &cfg()).unwrap().status();
        let b = check_toeplitz_s_s(&s.star(), &cfg()).unwrap().status();
        prop_assert_eq!(a, b);
    }

    #[test]
    fn case_tokens_round_trip(i in 0usize..8) {
        let case = FoguelCase::all().nth(i).unwrap();
        prop_assert_eq!(case.token().parse::<FoguelCase>().unwrap(), case);
        let j = serde_json::to_string(&case).unwrap();
        prop_assert_eq!(serde_json::from_str::<FoguelCase>(&j).unwrap(), case);
    }

    #[test]
    fn status_conjunction_is_a_meet(a in 0usize..5, b in 0usize..5, c in 0usize..5) {
        let all = [Status::FailsExact, Status::FailsNumeric, Status::Inconclusive, Status::HoldsNumeric, Status::HoldsExact];
        let (a, b, c) = (all[a], all[b], all[c]);
        prop_assert_eq!(a.and(b), b.and(a));
        prop_assert_eq!(a.and(b).and(c), a.and(b.and(c)));
        prop_assert_eq!(a.and(a), a);
        prop_assert_eq!(a.and(Status::HoldsExact), a);
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(24))]

    #[test]
    fn power_formula_matches_xn(s in finite(-6, 6), n in 1usize..10, hankel in any::<bool>(), ss in any::<bool>()) {
        let kind = if hankel { OffKind::Hankel } else { OffKind::Toeplitz };
        let pair = if ss { DiagPair::SS } else { DiagPair::SSstar };
        let size = 24;
        let m = foguel_section(FoguelCase::new(pair, kind), &s, size + n);
        let block = top_right(&m.pow(n as u32));
        let want = xn_section(pair, kind, &s, n, size).unwrap();
        let got = block.leading(size);
        let diff = (&got - &want.data).iter().map(|d| d.norm()).fold(0.0, f64::max);
        prop_assert!(diff <= 1e-12, "diff {}", diff);
    }

    #[test]
    fn hinf_value_tracks_grid_sup(s in nonzero_finite(0, 12)) {
        let v = hinf_test(&s, &cfg().cesaro_degrees, &cfg()).unwrap();
        prop_assert!(v.status.holds());
        let sup = v.diagnostic("sup").unwrap();
        let grid = ess_sup_estimate(&s, 12).unwrap().value;
        prop_assert!(grid <= sup * (1.0 + 1e-12));
        prop_assert!(sup <= grid * 1.02);
    }

    #[test]
    fn chain_sylvester_matches_dense(s in finite(-4, 4), n in 1usize..6, p in 0usize..4, hankel in any::<bool>()) {
        let pair = DiagPair::ALL[p];
        let x = if hankel { hankel_section(&s, n) } else { toeplitz_section(&s, n) };
        let fast = sylvester_lsq(pair, &x);
        let dense = sylvester_dense(pair, &x);
        let diff = (&fast.padded - &dense.padded).iter().map(|d| d.norm()).fold(0.0, f64::max);
        prop_assert!(diff <= 1e-9, "diff {}", diff);
    }

    #[test]
    fn holds_verdicts_come_with_valid_certificates(s in finite(-5, 5), which in 0usize..3) {
        let (case, sym) = match which {
            0 => ("h:s,s*", s.clone()),
            1 => ("h:s,s", s.clone()),
            _ => ("t:s*,s", FourierSymbol::finite(Factor::ZbarMinusZ.laurent().mul(s.as_laurent().unwrap()))),
        };
        let case: FoguelCase = case.parse().unwrap();
        prop_assert!(dispatch(case, &sym, &cfg()).status().holds());
        let (_, cert) = certify(case, &sym, 256, &cfg()).unwrap();
        let cert = cert.unwrap();
        prop_assert!(cert.max_residual() <= 1e-8, "{:?}", cert.residuals);
        prop_assert!(cert.qn_within_bound());
    }
}
