use foguel_core::analysis::growth_profile;
use foguel_core::corpus::{corpus_list, CorpusEntry, Expectation};
use foguel_core::intertwine::{power_bound_profile, sylvester_profile};
use foguel_core::opmat::{half_octave_grid, xn_norm_profile, DiagPair};
use foguel_core::LabConfig;

fn entries(pairs: &[DiagPair]) -> Vec<CorpusEntry> {
    corpus_list().into_iter().filter(|e| pairs.contains(&e.case.pair)).collect()
}

fn check_profile(e: &CorpusEntry, points: &[(f64, f64)], what: &str) {
    let cfg = LabConfig::default();
    let g = growth_profile(points, &cfg).unwrap();
    match e.expected {
        Expectation::Holds => assert!(g.is_bounded(), "{what} {} {}: {}", e.name, e.case, g.class_label()),
        Expectation::Fails => assert!(g.grows(&cfg), "{what} {} {}: {}", e.name, e.case, g.class_label()),
        Expectation::Inconclusive => {}
    }
}

#[test]
fn xn_profiles_corroborate_corpus_verdicts() {
    let ns = half_octave_grid(128);
    for e in entries(&[DiagPair::SSstar, DiagPair::SS]) {
        let sym = e.symbol.to_symbol().unwrap();
        let p = xn_norm_profile(e.case.pair, e.case.kind, &sym, 512, &ns).unwrap();
        let pts: Vec<(f64, f64)> = p.iter().map(|&(n, v)| (n as f64, v)).collect();
        check_profile(&e, &pts, "X_n");
    }
}

#[test]
fn sylvester_profiles_corroborate_corpus_verdicts() {
    let sizes = [16, 32, 64, 128, 256, 512];
    for e in entries(&[DiagPair::SS, DiagPair::SstarS, DiagPair::SstarSstar]) {
        let sym = e.symbol.to_symbol().unwrap();
        let p = sylvester_profile(e.case, &sym, &sizes);
        let pts: Vec<(f64, f64)> = p.iter().map(|&(n, v, _)| (n as f64, v)).collect();
        if e.expected == Expectation::Holds {
            // Exact solutions exist, so the least-squares residual vanishes.
            assert!(p.iter().all(|r| r.2 <= 1e-8), "{} {}: {p:?}", e.name, e.case);
        }
        check_profile(&e, &pts, "Sylvester");
    }
}

#[test]
fn powers_respect_the_sqrt3_bound() {
    for e in entries(&[DiagPair::SSstar]) {
        if e.expected != Expectation::Holds {
            continue;
        }
        let sym = e.symbol.to_symbol().unwrap();
        for r in power_bound_profile(e.case.kind, &sym, 128, 64).unwrap() {
            assert!(r.power_norm <= r.bound + 0.02, "{} {}: {r:?}", e.name, e.case);
        }
    }
}
