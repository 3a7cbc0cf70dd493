//! Growth classification of monotone-ish sequences `(k, v_k)`.

use super::fit::linear_fit;
use crate::config::LabConfig;
use crate::error::{LabError, Result};
use serde::{Deserialize, Serialize};
use std::io::Write;

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
#[serde(tag = "class", rename_all = "snake_case")]
pub enum GrowthClass {
    Bounded,
    /// `v ~ (log k)^beta`.
    Log { beta: f64 },
    /// `v ~ k^alpha`.
    Power { alpha: f64 },
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct GrowthProfile {
    pub points: Vec<(f64, f64)>,
    pub class: GrowthClass,
    /// R² of the chosen fit (1 for bounded profiles).
    pub r2: f64,
    /// Relative increase over the last quartile.
    pub tail_increase: f64,
}

impl GrowthProfile {
    pub fn is_bounded(&self) -> bool {
        self.class == GrowthClass::Bounded
    }

    /// Fitted exponent for the non-bounded classes.
    pub fn exponent(&self) -> Option<f64> {
        match self.class {
            GrowthClass::Bounded => None,
            GrowthClass::Log { beta } => Some(beta),
            GrowthClass::Power { alpha } => Some(alpha),
        }
    }

    /// Unbounded with a trustworthy fit.
    pub fn grows(&self, cfg: &LabConfig) -> bool {
        !self.is_bounded()
            && self.r2 >= cfg.min_r2
            && self.exponent().is_some_and(|e| e > cfg.min_growth_exponent)
    }

    pub fn class_label(&self) -> String {
        match self.class {
            GrowthClass::Bounded => "bounded".into(),
            GrowthClass::Log { beta } => format!("log(beta={beta:.3})"),
            GrowthClass::Power { alpha } => format!("power(alpha={alpha:.3})"),
        }
    }

    /// CSV with the given header followed by one `k,value` row per point and
    /// a trailing comment line carrying the fitted class.
    pub fn write_csv<W: Write>(&self, mut w: W, header: (&str, &str)) -> std::io::Result<()> {
        writeln!(w, "{},{}", header.0, header.1)?;
        for (k, v) in &self.points {
            writeln!(w, "{k},{v}")?;
        }
        writeln!(w, "# class={} r2={:.6}", self.class_label(), self.r2)
    }
}

pub fn growth_profile(points: &[(f64, f64)], cfg: &LabConfig) -> Result<GrowthProfile> {
    if points.len() < 6 {
        return Err(LabError::TooFewPoints {
            needed: 6,
            got: points.len(),
        });
    }
    if points.windows(2).any(|w| w[1].0 <= w[0].0) {
        return Err(LabError::InvalidParameter(
            "profile indices must be strictly increasing".into(),
        ));
    }
    if points.iter().any(|p| !(p.1 >= 0.0) || !p.1.is_finite()) {
        return Err(LabError::InvalidParameter(
            "profile values must be finite and nonnegative".into(),
        ));
    }
    let n = points.len();
    let start = (3 * n / 4).min(n - 2);
    let base = points[start].1;
    let top = points[start..].iter().map(|p| p.1).fold(0.0, f64::max);
    let tail_increase = if base > 0.0 {
        top / base - 1.0
    } else if top > 0.0 {
        f64::INFINITY
    } else {
        0.0
    };
    let mut profile = GrowthProfile {
        points: points.to_vec(),
        class: GrowthClass::Bounded,
        r2: 1.0,
        tail_increase,
    };
    if tail_increase <= cfg.stabilize_tol {
        return Ok(profile);
    }

    let pos: Vec<(f64, f64)> = points.iter().copied().filter(|p| p.1 > 0.0 && p.0 > 0.0).collect();
    let mut best: Option<(GrowthClass, f64)> = None;
    if pos.len() >= 3 {
        let xs: Vec<f64> = pos.iter().map(|p| p.0.ln()).collect();
        let ys: Vec<f64> = pos.iter().map(|p| p.1.ln()).collect();
        let f = linear_fit(&xs, &ys);
        best = Some((GrowthClass::Power { alpha: f.slope }, f.r2));
    }
    let logs: Vec<(f64, f64)> = pos.iter().copied().filter(|p| p.0 >= 2.0).collect();
    if logs.len() >= 3 {
        let xs: Vec<f64> = logs.iter().map(|p| p.0.ln().ln()).collect();
        let ys: Vec<f64> = logs.iter().map(|p| p.1.ln()).collect();
        let f = linear_fit(&xs, &ys);
        if best.map_or(true, |(_, r2)| f.r2 > r2) {
            best = Some((GrowthClass::Log { beta: f.slope }, f.r2));
        }
    }
    if let Some((class, r2)) = best {
        profile.class = class;
        profile.r2 = r2;
    } else {
        profile.class = GrowthClass::Power { alpha: f64::NAN };
        profile.r2 = 0.0;
    }
    Ok(profile)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn pts(f: impl Fn(f64) -> f64) -> Vec<(f64, f64)> {
        (0..8).map(|i| 2f64.powi(i + 2)).map(|k| (k, f(k))).collect()
    }

    #[test]
    fn constant_is_bounded() {
        let p = growth_profile(&pts(|_| 1.0), &LabConfig::default()).unwrap();
        assert!(p.is_bounded());
    }

    #[test]
    fn linear_is_power_one() {
        let p = growth_profile(&pts(|k| k), &LabConfig::default()).unwrap();
        match p.class {
            GrowthClass::Power { alpha } => assert!((alpha - 1.0).abs() < 0.05),
            c => panic!("{c:?}"),
        }
    }

    #[test]
    fn logarithmic_is_log() {
        let p = growth_profile(&pts(|k| k.ln()), &LabConfig::default()).unwrap();
        match p.class {
            GrowthClass::Log { beta } => assert!((beta - 1.0).abs() < 0.05),
            c => panic!("{c:?}"),
        }
        assert!(p.grows(&LabConfig::default()));
    }

    #[test]
    fn rejects_short_or_unsorted() {
        let cfg = LabConfig::default();
        assert!(matches!(
            growth_profile(&pts(|k| k)[..5], &cfg),
            Err(LabError::TooFewPoints { needed: 6, got: 5 })
        ));
        let mut p = pts(|k| k);
        p.swap(1, 2);
        assert!(growth_profile(&p, &cfg).is_err());
    }

    #[test]
    fn csv_has_header_and_class() {
        let p = growth_profile(&pts(|_| 2.0), &LabConfig::default()).unwrap();
        let mut buf = Vec::new();
        p.write_csv(&mut buf, ("n", "norm")).unwrap();
        let s = String::from_utf8(buf).unwrap();
        assert!(s.starts_with("n,norm\n4,2\n"));
        assert!(s.trim_end().ends_with("class=bounded r2=1.000000"));
    }
}
