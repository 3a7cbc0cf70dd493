//! Built-in table of symbols and cases with their expected verdicts.

use crate::characterize::dispatch;
use crate::config::LabConfig;
use crate::error::Result;
use crate::opmat::FoguelCase;
use crate::symbol::SymbolSpec;
use crate::verdict::Status;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};
use std::path::Path;

const BUILTIN: &str = include_str!("../data/corpus.json");

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Expectation {
    Holds,
    Fails,
    Inconclusive,
}

impl Expectation {
    pub fn matches(self, s: Status) -> bool {
        match self {
            Expectation::Holds => s.holds(),
            Expectation::Fails => s.fails(),
            Expectation::Inconclusive => s == Status::Inconclusive,
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Source {
    Literature,
    Trivial,
    Derived,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Provenance {
    pub source: Source,
    /// Citation or the oracle behind the expectation.
    pub note: String,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct CorpusEntry {
    pub name: String,
    pub symbol: SymbolSpec,
    pub case: FoguelCase,
    pub expected: Expectation,
    pub provenance: Provenance,
}

#[derive(Serialize, Deserialize)]
struct CorpusFile {
    entries: Vec<CorpusEntry>,
}

pub fn parse_corpus(text: &str) -> Result<Vec<CorpusEntry>> {
    Ok(serde_json::from_str::<CorpusFile>(text)?.entries)
}

pub fn corpus_list() -> Vec<CorpusEntry> {
    parse_corpus(BUILTIN).expect("built-in corpus parses")
}

pub fn load_corpus(path: &Path) -> Result<Vec<CorpusEntry>> {
    parse_corpus(&std::fs::read_to_string(path)?)
}

pub fn lookup(name: &str, case: FoguelCase) -> Option<CorpusEntry> {
    corpus_list().into_iter().find(|e| e.name == name && e.case == case)
}

#[derive(Clone, Debug, Serialize)]
pub struct CorpusRow {
    pub name: String,
    pub case: FoguelCase,
    pub expected: Expectation,
    pub status: Status,
    pub matches: bool,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub reason: Option<String>,
}

#[derive(Clone, Debug, Serialize)]
pub struct CorpusSummary {
    pub rows: Vec<CorpusRow>,
    pub mismatches: usize,
}

impl CorpusSummary {
    pub fn mismatched(&self) -> impl Iterator<Item = &CorpusRow> {
        self.rows.iter().filter(|r| !r.matches)
    }
}

/// Runs every entry; rows come back in table order.
pub fn corpus_run(entries: &[CorpusEntry], cfg: &LabConfig) -> CorpusSummary {
    let rows: Vec<CorpusRow> = entries
        .par_iter()
        .map(|e| {
            let (status, reason) = match e.symbol.to_symbol() {
                Ok(sym) => {
                    let rep = dispatch(e.case, &sym, cfg);
                    (rep.status(), rep.verdict.reason.clone())
                }
                Err(err) => (Status::Inconclusive, Some(err.to_string())),
            };
            CorpusRow {
                name: e.name.clone(),
                case: e.case,
                expected: e.expected,
                status,
                matches: e.expected.matches(status),
                reason,
            }
        })
        .collect();
    let mismatches = rows.iter().filter(|r| !r.matches).count();
    CorpusSummary { rows, mismatches }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn builtin_corpus_covers_required_rows() {
        let c = corpus_list();
        let want = [
            ("hilbert", "h:s,s*", Expectation::Fails),
            ("hilbert", "h:s*,s", Expectation::Fails),
            ("cauchy2", "h:s,s*", Expectation::Holds),
            ("family_z", "t:s,s*", Expectation::Holds),
            ("z", "t:s,s", Expectation::Fails),
            ("one", "h:s,s", Expectation::Holds),
            ("zbar_minus_z", "t:s*,s", Expectation::Holds),
        ];
        for (name, case, exp) in want {
            let e = lookup(name, case.parse().unwrap()).unwrap_or_else(|| panic!("{name} {case}"));
            assert_eq!(e.expected, exp);
        }
        for case in FoguelCase::all() {
            assert_eq!(lookup("zero", case).unwrap().expected, Expectation::Holds);
        }
        assert!(c.iter().all(|e| !e.provenance.note.is_empty()));
    }

    #[test]
    fn forced_wrong_expectation_is_reported() {
        let mut e = lookup("zero", "t:s,s".parse().unwrap()).unwrap();
        e.expected = Expectation::Fails;
        let s = corpus_run(&[e], &LabConfig::default());
        assert_eq!(s.mismatches, 1);
        let s = corpus_run(&[], &LabConfig::default());
        assert!(s.rows.is_empty());
        assert_eq!(s.mismatches, 0);
    }
}
