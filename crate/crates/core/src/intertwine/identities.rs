//! Algebraic identities between Toeplitz and Hankel sections.

use crate::error::{LabError, Result};
use crate::opmat::{basic_section, hankel_section, interior_residual, toeplitz_section, BasicKind, OperatorSection};
use crate::symbol::FourierSymbol;
use crate::C64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::Serialize;

fn bandwidth(sym: &FourierSymbol, what: &str) -> Result<usize> {
    sym.bandwidth().map(|b| b as usize).ok_or_else(|| {
        LabError::InvalidParameter(format!("{what} must have finite bandwidth"))
    })
}

/// Interior residual of one of the two product identities:
///
/// 1. `T_{ΦΨ} − T_Φ T_Ψ = H_{z̄Φ} H_{z̄Ψ̃}`
/// 2. `H_{z̄Φ̃Ψ̃} = H_{z̄Φ̃} T_Ψ + T_{Φ̃} H_{z̄Ψ̃}`
///
/// evaluated with margin `2d`, `d` the larger bandwidth.
pub fn verify_th_id(which: u8, phi: &FourierSymbol, psi: &FourierSymbol, n: usize) -> Result<f64> {
    let d = bandwidth(phi, "Φ")?.max(bandwidth(psi, "Ψ")?);
    let margin = 2 * d;
    if margin >= n {
        return Err(LabError::InvalidParameter(format!(
            "section size {n} leaves no interior at margin {margin}"
        )));
    }
    let prod = phi.mul(psi, 0)?;
    let psi_t = psi.tilde();
    match which {
        1 => {
            let lhs = toeplitz_section(&prod, n).sub(&toeplitz_section(phi, n).mul(&toeplitz_section(psi, n)));
            let rhs = hankel_section(&phi.shift_mul(-1), n).mul(&hankel_section(&psi_t.shift_mul(-1), n));
            interior_residual(&lhs, &rhs, margin)
        }
        2 => {
            let phi_t = phi.tilde();
            let lhs = hankel_section(&prod.tilde().shift_mul(-1), n);
            let rhs = hankel_section(&phi_t.shift_mul(-1), n)
                .mul(&toeplitz_section(psi, n))
                .add(&toeplitz_section(&phi_t, n).mul(&hankel_section(&psi_t.shift_mul(-1), n)));
            interior_residual(&lhs, &rhs, margin)
        }
        _ => Err(LabError::InvalidParameter(format!("identity {which} is not 1 or 2"))),
    }
}

/// Defects of the Toeplitz-plus-Hankel characterization, on `(N − margin)²`.
#[derive(Clone, Debug, Default, Serialize)]
pub struct TphReport {
    /// Departure of `AS − S*A` from constant diagonals.
    pub toeplitz_defect: f64,
    /// Departure of `S*AS − A` from constant antidiagonals.
    pub hankel_defect: f64,
    /// Spectral norm of `AS + S*²AS − S*A − S*AS²`.
    pub four_term: f64,
    pub margin: usize,
}

impl TphReport {
    pub fn max(&self) -> f64 {
        self.toeplitz_defect.max(self.hankel_defect).max(self.four_term)
    }
}

pub fn verify_tph_criteria(a: &OperatorSection, margin: usize) -> Result<TphReport> {
    let n = a.size();
    let margin = margin.max(3);
    if margin + 1 >= n {
        return Err(LabError::InvalidParameter(format!(
            "section size {n} leaves no interior at margin {margin}"
        )));
    }
    let s = basic_section(BasicKind::Shift, n);
    let st = basic_section(BasicKind::Backshift, n);
    let comm = a.mul(&s).sub(&st.mul(a));
    let sas = st.mul(a).mul(&s).sub(a);
    let m = n - margin;
    let mut toeplitz_defect = 0.0f64;
    let mut hankel_defect = 0.0f64;
    for i in 0..m - 1 {
        for j in 0..m - 1 {
            toeplitz_defect = toeplitz_defect.max((comm.entry(i + 1, j + 1) - comm.entry(i, j)).norm());
            hankel_defect = hankel_defect.max((sas.entry(i + 1, j) - sas.entry(i, j + 1)).norm());
        }
    }
    let st2 = st.mul(&st);
    let lhs = a.mul(&s).add(&st2.mul(a).mul(&s));
    let rhs = st.mul(a).add(&st.mul(a).mul(&s).mul(&s));
    Ok(TphReport {
        toeplitz_defect,
        hankel_defect,
        four_term: interior_residual(&lhs, &rhs, margin)?,
        margin,
    })
}

/// Maximum residuals over a seeded batch of random symbol pairs.
#[derive(Clone, Debug, Serialize)]
pub struct IdentitySuiteReport {
    pub seed: u64,
    pub trials: usize,
    pub section_size: usize,
    pub max_bandwidth: i64,
    pub th_id_1: f64,
    pub th_id_2: f64,
    pub tph_toeplitz: f64,
    pub tph_hankel: f64,
    pub tph_four_term: f64,
}

impl IdentitySuiteReport {
    pub fn max_residual(&self) -> f64 {
        [self.th_id_1, self.th_id_2, self.tph_toeplitz, self.tph_hankel, self.tph_four_term]
            .into_iter()
            .fold(0.0, f64::max)
    }
}

/// Random Laurent polynomial supported in `[−d, d]` for some `d ≤ max_bw`.
pub fn random_laurent(rng: &mut impl Rng, max_bw: i64) -> FourierSymbol {
    let d = rng.gen_range(0..=max_bw);
    let lo = rng.gen_range(-d..=0);
    let hi = rng.gen_range(0..=d);
    FourierSymbol::from_entries((lo..=hi).map(|k| {
        (k, C64::new(rng.gen_range(-1.0..1.0), rng.gen_range(-1.0..1.0)))
    }))
}

pub fn identity_suite(seed: u64, trials: usize, n: usize, max_bw: i64) -> Result<IdentitySuiteReport> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let pairs: Vec<(FourierSymbol, FourierSymbol)> = (0..trials)
        .map(|_| (random_laurent(&mut rng, max_bw), random_laurent(&mut rng, max_bw)))
        .collect();
    let rows: Vec<[f64; 5]> = pairs
        .par_iter()
        .map(|(phi, psi)| {
            let t1 = verify_th_id(1, phi, psi, n)?;
            let t2 = verify_th_id(2, phi, psi, n)?;
            let a = toeplitz_section(phi, n).add(&hankel_section(psi, n));
            let d = phi.bandwidth().unwrap_or(0).max(psi.bandwidth().unwrap_or(0)) as usize;
            let tph = verify_tph_criteria(&a, d + 3)?;
            Ok([t1, t2, tph.toeplitz_defect, tph.hankel_defect, tph.four_term])
        })
        .collect::<Result<_>>()?;
    let col = |k: usize| rows.iter().map(|r| r[k]).fold(0.0, f64::max);
    Ok(IdentitySuiteReport {
        seed,
        trials,
        section_size: n,
        max_bandwidth: max_bw,
        th_id_1: col(0),
        th_id_2: col(1),
        tph_toeplitz: col(2),
        tph_hankel: col(3),
        tph_four_term: col(4),
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn c(re: f64) -> C64 {
        C64::new(re, 0.0)
    }

    #[test]
    fn th_id_examples() {
        let z = FourierSymbol::monomial(1, c(1.0));
        let zb = FourierSymbol::monomial(-1, c(1.0));
        assert_eq!(verify_th_id(1, &z, &z, 16).unwrap(), 0.0);
        assert!(verify_th_id(1, &zb, &z, 16).unwrap() < 1e-15);
        assert_eq!(verify_th_id(1, &FourierSymbol::zero(), &FourierSymbol::zero(), 8).unwrap(), 0.0);
        assert!(verify_th_id(3, &z, &z, 8).is_err());
        let h = crate::symbol::builtin(&crate::symbol::Builtin::Hilbert).unwrap();
        assert!(verify_th_id(1, &h, &z, 8).is_err());
    }

    #[test]
    fn th_id_detects_wrong_side() {
        // T_{z̄ z} − T_z̄ T_z vanishes, but T_{z z̄} − T_z T_z̄ = P_E does not.
        let z = FourierSymbol::monomial(1, c(1.0));
        let zb = FourierSymbol::monomial(-1, c(1.0));
        let lhs = toeplitz_section(&FourierSymbol::constant(c(1.0)), 8)
            .sub(&toeplitz_section(&z, 8).mul(&toeplitz_section(&zb, 8)));
        assert!((lhs.entry(0, 0) - c(1.0)).norm() < 1e-15);
        assert!(verify_th_id(1, &z, &zb, 8).unwrap() < 1e-15);
    }

    #[test]
    fn tph_examples() {
        let z = FourierSymbol::monomial(1, c(1.0));
        let r = verify_tph_criteria(&toeplitz_section(&z, 16), 3).unwrap();
        assert_eq!(r.toeplitz_defect, 0.0);
        let r = verify_tph_criteria(&basic_section(BasicKind::ProjectionE, 16), 3).unwrap();
        assert_eq!(r.hankel_defect, 0.0);
        let r = verify_tph_criteria(&OperatorSection::zeros(16), 3).unwrap();
        assert_eq!(r.max(), 0.0);
        // A diagonal that is not Toeplitz plus Hankel fails (2).
        let d = basic_section(BasicKind::DiffShift, 16);
        assert!(verify_tph_criteria(&d, 3).unwrap().toeplitz_defect > 0.5);
    }

    #[test]
    fn suite_is_seeded() {
        let a = identity_suite(7, 10, 40, 8).unwrap();
        let b = identity_suite(7, 10, 40, 8).unwrap();
        assert_eq!(a.max_residual(), b.max_residual());
        assert!(a.max_residual() < 1e-10, "{a:?}");
    }
}
