//! Spectral norms of sections.

use crate::opmat::OperatorSection;
use crate::C64;
use nalgebra::{DMatrix, DVector};

/// Sections up to this size use a full singular value decomposition.
pub const DENSE_SVD_LIMIT: usize = 1024;

/// Largest singular value.
///
/// Purely real sections take the real decomposition, which is several times
/// faster. Above [`DENSE_SVD_LIMIT`] a power iteration on `A*A` from a fixed
/// start vector is used instead.
pub fn op_norm(section: &OperatorSection) -> f64 {
    matrix_norm(&section.data)
}

pub fn matrix_norm(a: &DMatrix<C64>) -> f64 {
    if a.is_empty() {
        return 0.0;
    }
    if a.iter().all(|c| c.norm() == 0.0) {
        return 0.0;
    }
    let real = a.iter().all(|c| c.im == 0.0);
    let big = a.nrows().max(a.ncols()) > DENSE_SVD_LIMIT;
    match (real, big) {
        (true, false) => {
            let r = a.map(|c| c.re);
            r.singular_values().max()
        }
        (false, false) => a.clone().singular_values().max(),
        (true, true) => power_iteration_real(&a.map(|c| c.re)),
        (false, true) => power_iteration(a),
    }
}

fn start_vector(n: usize) -> Vec<f64> {
    // Deterministic and not orthogonal to any structured singular vector
    // we care about.
    (0..n).map(|i| 1.0 + 0.5 * ((i as f64) * 0.618_033_988_75).fract()).collect()
}

fn power_iteration_real(a: &DMatrix<f64>) -> f64 {
    let mut v = DVector::from_vec(start_vector(a.ncols()));
    v /= v.norm();
    let mut last = 0.0;
    for _ in 0..20_000 {
        let w = a.tr_mul(&(a * &v));
        let rq = v.dot(&w);
        let nw = w.norm();
        if nw == 0.0 {
            return 0.0;
        }
        v = w / nw;
        if (rq - last).abs() <= 1e-12 * rq.abs() {
            return rq.sqrt();
        }
        last = rq;
    }
    last.sqrt()
}

fn power_iteration(a: &DMatrix<C64>) -> f64 {
    let mut v = DVector::from_iterator(
        a.ncols(),
        start_vector(a.ncols()).into_iter().map(|x| C64::new(x, 0.0)),
    );
    v /= C64::new(v.norm(), 0.0);
    let mut last = 0.0;
    for _ in 0..20_000 {
        let w = a.ad_mul(&(a * &v));
        let rq = v.dotc(&w).re;
        let nw = w.norm();
        if nw == 0.0 {
            return 0.0;
        }
        v = w / C64::new(nw, 0.0);
        if (rq - last).abs() <= 1e-12 * rq.abs() {
            return rq.sqrt();
        }
        last = rq;
    }
    last.sqrt()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::opmat::{basic_section, BasicKind};

    #[test]
    fn examples() {
        assert!((op_norm(&basic_section(BasicKind::Shift, 9)) - 1.0).abs() < 1e-14);
        assert_eq!(op_norm(&OperatorSection::zeros(5)), 0.0);
        let h = OperatorSection::from_fn(2, |i, j| C64::new(1.0 / (i + j + 1) as f64, 0.0));
        let want = (4.0 / 3.0 + (16.0f64 / 9.0 - 1.0 / 3.0).sqrt()) / 2.0;
        assert!((op_norm(&h) - want).abs() < 1e-12);
        assert!((want - 1.2676).abs() < 1e-3);
    }

    #[test]
    fn power_iteration_matches_svd() {
        let a = DMatrix::from_fn(40, 40, |i, j| {
            C64::new(1.0 / (i + j + 1) as f64, ((i * 7 + j * 3) % 5) as f64 * 0.01)
        });
        let svd = a.clone().singular_values().max();
        assert!((power_iteration(&a) - svd).abs() < 1e-9);
        let r = a.map(|c| c.re);
        assert!((power_iteration_real(&r) - r.singular_values().max()).abs() < 1e-9);
    }
}
