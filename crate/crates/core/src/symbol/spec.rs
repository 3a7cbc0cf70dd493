//! Symbol sources: JSON documents and `builtin:NAME?k=v&…` strings.

use super::{builtin, Builtin, FourierSymbol, Laurent};
use crate::error::{LabError, Result};
use crate::C64;
use serde::{Deserialize, Serialize};
use serde_json::Value;
use std::collections::BTreeMap;
use std::path::Path;

/// Coefficient window exported for oracle symbols without an origin.
pub(crate) const WITNESS_WINDOW: i64 = 64;

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum SymbolSpec {
    Coeffs {
        entries: Vec<(i64, f64, f64)>,
        /// Present when the entries are a truncation of an infinite series.
        #[serde(skip_serializing_if = "Option::is_none", default)]
        window: Option<(i64, i64)>,
    },
    Builtin {
        name: String,
        #[serde(default)]
        params: BTreeMap<String, Value>,
    },
}

impl SymbolSpec {
    pub fn builtin(name: &str) -> Self {
        SymbolSpec::Builtin {
            name: name.to_string(),
            params: BTreeMap::new(),
        }
    }

    pub fn with_param(mut self, key: &str, value: impl Into<Value>) -> Self {
        if let SymbolSpec::Builtin { params, .. } = &mut self {
            params.insert(key.to_string(), value.into());
        }
        self
    }

    pub(crate) fn from_laurent(p: &Laurent, window: Option<(i64, i64)>) -> Self {
        SymbolSpec::Coeffs {
            entries: p.entries().map(|(n, c)| (n, c.re, c.im)).collect(),
            window,
        }
    }

    pub fn to_symbol(&self) -> Result<FourierSymbol> {
        match self {
            SymbolSpec::Coeffs { entries, .. } => Ok(FourierSymbol::from_entries(
                entries.iter().map(|&(n, re, im)| (n, C64::new(re, im))),
            )
            .with_origin(self.clone())),
            SymbolSpec::Builtin { name, params } => {
                let params: BTreeMap<String, String> = params
                    .iter()
                    .map(|(k, v)| (k.clone(), value_to_string(v)))
                    .collect();
                let b = parse_builtin(name, &params)?;
                Ok(builtin(&b)?.with_origin(self.clone()))
            }
        }
    }

    /// Parses `builtin:NAME?k=v&…` or `file:PATH`.
    pub fn parse_source(source: &str) -> Result<Self> {
        if let Some(rest) = source.strip_prefix("builtin:") {
            let (name, query) = rest.split_once('?').unwrap_or((rest, ""));
            let mut spec = SymbolSpec::builtin(name);
            for pair in query.split('&').filter(|s| !s.is_empty()) {
                let (k, v) = pair
                    .split_once('=')
                    .ok_or_else(|| LabError::Parse(format!("expected key=value, got `{pair}`")))?;
                spec = spec.with_param(k, v);
            }
            // Validate eagerly so typos surface as parse errors.
            spec.to_symbol()?;
            Ok(spec)
        } else if let Some(path) = source.strip_prefix("file:") {
            SymbolSpec::from_file(Path::new(path))
        } else {
            Err(LabError::Parse(format!(
                "symbol source must start with `builtin:` or `file:`, got `{source}`"
            )))
        }
    }

    pub fn from_file(path: &Path) -> Result<Self> {
        let text = std::fs::read_to_string(path)?;
        let spec: SymbolSpec = serde_json::from_str(&text)?;
        Ok(spec)
    }
}

pub fn parse_symbol_source(source: &str) -> Result<FourierSymbol> {
    SymbolSpec::parse_source(source)?.to_symbol()
}

fn value_to_string(v: &Value) -> String {
    match v {
        Value::String(s) => s.clone(),
        other => other.to_string(),
    }
}

fn parse_f64(params: &BTreeMap<String, String>, key: &str, default: Option<f64>) -> Result<f64> {
    match params.get(key) {
        Some(s) => s
            .trim()
            .parse()
            .map_err(|_| LabError::Parse(format!("parameter `{key}`: not a number: `{s}`"))),
        None => default.ok_or_else(|| LabError::Parse(format!("missing parameter `{key}`"))),
    }
}

/// `n:re[:im],n:re[:im],…`
fn parse_entries(s: &str) -> Result<Vec<(i64, C64)>> {
    s.split(',')
        .filter(|t| !t.trim().is_empty())
        .map(|t| {
            let parts: Vec<&str> = t.trim().split(':').collect();
            let bad = || LabError::Parse(format!("bad coefficient entry `{t}`, want n:re[:im]"));
            if parts.len() < 2 || parts.len() > 3 {
                return Err(bad());
            }
            let n: i64 = parts[0].parse().map_err(|_| bad())?;
            let re: f64 = parts[1].parse().map_err(|_| bad())?;
            let im: f64 = match parts.get(2) {
                Some(p) => p.parse().map_err(|_| bad())?,
                None => 0.0,
            };
            Ok((n, C64::new(re, im)))
        })
        .collect()
}

fn parse_builtin(name: &str, params: &BTreeMap<String, String>) -> Result<Builtin> {
    let allowed: &[&str] = match name {
        "zero" | "one" | "z" | "zbar" | "hilbert" => &[],
        "monomial" => &["k", "re", "im"],
        "cauchy" => &["alpha", "alpha_im"],
        "laurent_poly" => &["coeffs"],
        "family_1_minus_zbar2_theta" => &["theta", "theta_coeffs"],
        _ => return Err(LabError::Parse(format!("unknown builtin `{name}`"))),
    };
    if let Some(k) = params.keys().find(|k| !allowed.contains(&k.as_str())) {
        return Err(LabError::Parse(format!("builtin `{name}` takes no parameter `{k}`")));
    }
    Ok(match name {
        "zero" => Builtin::Zero,
        "one" => Builtin::One,
        "z" => Builtin::Z,
        "zbar" => Builtin::Zbar,
        "hilbert" => Builtin::Hilbert,
        "monomial" => Builtin::Monomial {
            k: parse_f64(params, "k", None)? as i64,
            c: C64::new(
                parse_f64(params, "re", Some(1.0))?,
                parse_f64(params, "im", Some(0.0))?,
            ),
        },
        "cauchy" => Builtin::Cauchy {
            alpha: C64::new(
                parse_f64(params, "alpha", None)?,
                parse_f64(params, "alpha_im", Some(0.0))?,
            ),
        },
        "laurent_poly" => Builtin::LaurentPoly(parse_entries(
            params
                .get("coeffs")
                .ok_or_else(|| LabError::Parse("missing parameter `coeffs`".into()))?,
        )?),
        _ => {
            let theta = match (params.get("theta"), params.get("theta_coeffs")) {
                (Some(_), Some(_)) => {
                    return Err(LabError::Parse("give either `theta` or `theta_coeffs`".into()))
                }
                (None, Some(c)) => Builtin::LaurentPoly(parse_entries(c)?),
                (Some(t), None) => parse_builtin(t, &BTreeMap::new())?,
                (None, None) => Builtin::Z,
            };
            Builtin::Family {
                theta: Box::new(theta),
            }
        }
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parses_builtin_sources() {
        let h = parse_symbol_source("builtin:hilbert").unwrap();
        assert_eq!(h.coeff(1), C64::new(0.5, 0.0));
        let c = parse_symbol_source("builtin:cauchy?alpha=2").unwrap();
        assert!((c.coeff(0) - C64::new(0.5, 0.0)).norm() < 1e-16);
        let p = parse_symbol_source("builtin:laurent_poly?coeffs=0:1,-2:-1").unwrap();
        assert_eq!(p.coeff(-2), C64::new(-1.0, 0.0));
        let f = parse_symbol_source("builtin:family_1_minus_zbar2_theta?theta=z").unwrap();
        assert_eq!(f.coeff(-3), C64::new(-1.0, 0.0));
        let m = parse_symbol_source("builtin:monomial?k=-2&re=0&im=3").unwrap();
        assert_eq!(m.coeff(-2), C64::new(0.0, 3.0));
    }

    #[test]
    fn rejects_bad_sources() {
        assert!(parse_symbol_source("builtin:nope").is_err());
        assert!(parse_symbol_source("builtin:cauchy?alpha=0.5").is_err());
        assert!(parse_symbol_source("builtin:hilbert?x=1").is_err());
        assert!(parse_symbol_source("hilbert").is_err());
        assert!(parse_symbol_source("file:/nonexistent/phi.json").is_err());
    }

    #[test]
    fn json_round_trip() {
        let text = r#"{"kind":"coeffs","entries":[[-1,1,0],[1,-1,0]]}"#;
        let spec: SymbolSpec = serde_json::from_str(text).unwrap();
        let s = spec.to_symbol().unwrap();
        assert_eq!(s.coeff(1), C64::new(-1.0, 0.0));
        let back = serde_json::to_string(&s.to_spec()).unwrap();
        assert_eq!(serde_json::from_str::<SymbolSpec>(&back).unwrap(), spec);

        let text = r#"{"kind":"builtin","name":"cauchy","params":{"alpha":3}}"#;
        let spec: SymbolSpec = serde_json::from_str(text).unwrap();
        let s = spec.to_symbol().unwrap();
        assert!((s.coeff(0) - C64::new(1.0 / 3.0, 0.0)).norm() < 1e-16);
    }
}
