//! Finite Laurent polynomials `Σ_{n=lo}^{hi} c_n zⁿ` on the unit circle.

use crate::C64;
use std::f64::consts::PI;

#[derive(Clone, Debug, PartialEq)]
pub struct Laurent {
    lo: i64,
    coeffs: Vec<C64>,
}

impl Laurent {
    pub fn zero() -> Self {
        Laurent {
            lo: 0,
            coeffs: Vec::new(),
        }
    }

    pub fn monomial(k: i64, c: C64) -> Self {
        Laurent::new(k, vec![c])
    }

    /// Builds from coefficients starting at index `lo`; trailing and leading
    /// exact zeros are trimmed.
    pub fn new(lo: i64, coeffs: Vec<C64>) -> Self {
        let mut l = Laurent { lo, coeffs };
        l.trim();
        l
    }

    pub fn from_entries(entries: impl IntoIterator<Item = (i64, C64)>) -> Self {
        let entries: Vec<(i64, C64)> = entries.into_iter().collect();
        if entries.is_empty() {
            return Laurent::zero();
        }
        let lo = entries.iter().map(|e| e.0).min().unwrap();
        let hi = entries.iter().map(|e| e.0).max().unwrap();
        let mut coeffs = vec![C64::new(0.0, 0.0); (hi - lo + 1) as usize];
        for (n, c) in entries {
            coeffs[(n - lo) as usize] += c;
        }
        Laurent::new(lo, coeffs)
    }

    fn trim(&mut self) {
        while self.coeffs.last().is_some_and(|c| *c == C64::new(0.0, 0.0)) {
            self.coeffs.pop();
        }
        let lead = self
            .coeffs
            .iter()
            .take_while(|c| **c == C64::new(0.0, 0.0))
            .count();
        if lead == self.coeffs.len() {
            self.coeffs.clear();
            self.lo = 0;
        } else if lead > 0 {
            self.coeffs.drain(..lead);
            self.lo += lead as i64;
        }
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    /// `(lo, hi)` of the nonzero range, `None` for the zero polynomial.
    pub fn range(&self) -> Option<(i64, i64)> {
        if self.is_zero() {
            None
        } else {
            Some((self.lo, self.lo + self.coeffs.len() as i64 - 1))
        }
    }

    pub fn coeff(&self, n: i64) -> C64 {
        let k = n - self.lo;
        if k < 0 || k >= self.coeffs.len() as i64 {
            C64::new(0.0, 0.0)
        } else {
            self.coeffs[k as usize]
        }
    }

    pub fn entries(&self) -> impl Iterator<Item = (i64, C64)> + '_ {
        self.coeffs
            .iter()
            .enumerate()
            .filter(|(_, c)| **c != C64::new(0.0, 0.0))
            .map(move |(k, c)| (self.lo + k as i64, *c))
    }

    pub fn bandwidth(&self) -> i64 {
        match self.range() {
            None => 0,
            Some((lo, hi)) => lo.abs().max(hi.abs()),
        }
    }

    pub fn l1_norm(&self) -> f64 {
        self.coeffs.iter().map(|c| c.norm()).sum()
    }

    pub fn eval_point(&self, z: C64) -> C64 {
        // Horner in z, then scale by z^lo.
        let mut acc = C64::new(0.0, 0.0);
        for c in self.coeffs.iter().rev() {
            acc = acc * z + c;
        }
        acc * z.powi(self.lo as i32)
    }

    pub fn eval_angle(&self, t: f64) -> C64 {
        self.entries()
            .map(|(n, c)| c * C64::from_polar(1.0, n as f64 * t))
            .sum()
    }

    pub fn add(&self, other: &Laurent) -> Laurent {
        match (self.range(), other.range()) {
            (None, _) => other.clone(),
            (_, None) => self.clone(),
            (Some((a, b)), Some((c, d))) => {
                let lo = a.min(c);
                let hi = b.max(d);
                Laurent::new(
                    lo,
                    (lo..=hi).map(|n| self.coeff(n) + other.coeff(n)).collect(),
                )
            }
        }
    }

    pub fn scale(&self, s: C64) -> Laurent {
        Laurent::new(self.lo, self.coeffs.iter().map(|c| c * s).collect())
    }

    pub fn shift(&self, k: i64) -> Laurent {
        Laurent::new(self.lo + k, self.coeffs.clone())
    }

    pub fn mul(&self, other: &Laurent) -> Laurent {
        if self.is_zero() || other.is_zero() {
            return Laurent::zero();
        }
        let mut out = vec![C64::new(0.0, 0.0); self.coeffs.len() + other.coeffs.len() - 1];
        for (i, a) in self.coeffs.iter().enumerate() {
            for (j, b) in other.coeffs.iter().enumerate() {
                out[i + j] += a * b;
            }
        }
        Laurent::new(self.lo + other.lo, out)
    }

    /// `c_n ↦ c_{-n}`.
    pub fn reflect(&self) -> Laurent {
        match self.range() {
            None => Laurent::zero(),
            Some((_, hi)) => Laurent::new(-hi, self.coeffs.iter().rev().copied().collect()),
        }
    }

    pub fn conj(&self) -> Laurent {
        Laurent::new(self.lo, self.coeffs.iter().map(|c| c.conj()).collect())
    }

    pub fn restrict(&self, lo: i64, hi: i64) -> Laurent {
        Laurent::from_entries(self.entries().filter(|(n, _)| *n >= lo && *n <= hi))
    }

    /// Value at `z = 1` and at `z = -1`.
    pub fn values_at_pm_one(&self) -> (C64, C64) {
        let plus = self.coeffs.iter().sum();
        let minus = self
            .entries()
            .map(|(n, c)| if n.rem_euclid(2) == 0 { c } else { -c })
            .sum();
        (plus, minus)
    }

    /// Divides by `z² − 1`, returning quotient and the remainder `r₀ + r₁z`
    /// (both relative to the factored-out power `z^lo`).
    ///
    /// With `self = z^lo P(z)`, this returns `(z^lo Q, (r₀, r₁))` where
    /// `P = (z² − 1) Q + r₀ + r₁ z`.
    pub fn div_z2_minus_1(&self) -> (Laurent, (C64, C64)) {
        let zero = C64::new(0.0, 0.0);
        if self.coeffs.len() < 3 {
            return (
                Laurent::zero(),
                (
                    self.coeffs.first().copied().unwrap_or(zero),
                    self.coeffs.get(1).copied().unwrap_or(zero),
                ),
            );
        }
        let p = &self.coeffs;
        let d = p.len() - 1;
        let mut q = vec![zero; d - 1];
        // p_j = q_{j-2} - q_j, solved top-down.
        for j in (2..=d).rev() {
            let above = if j <= d - 2 { q[j] } else { zero };
            q[j - 2] = p[j] + above;
        }
        let r0 = p[0] + q[0];
        let r1 = p[1] + q.get(1).copied().unwrap_or(zero);
        (Laurent::new(self.lo, q), (r0, r1))
    }

    /// Max of `|p(e^{it})|` over a dense grid followed by golden-section
    /// refinement around the best grid points.
    pub fn sup_norm(&self) -> f64 {
        if self.is_zero() {
            return 0.0;
        }
        let width = (self.coeffs.len() as usize).max(1);
        let grid = (64 * width).clamp(4096, 1 << 16);
        let h = 2.0 * PI / grid as f64;
        let mut vals: Vec<(f64, f64)> = (0..grid)
            .map(|k| {
                let t = k as f64 * h;
                (t, self.eval_angle(t).norm())
            })
            .collect();
        vals.sort_by(|a, b| b.1.total_cmp(&a.1));
        let mut best = vals[0].1;
        for &(t0, _) in vals.iter().take(8) {
            let (mut a, mut b) = (t0 - h, t0 + h);
            let g = 0.5 * (5f64.sqrt() - 1.0);
            let f = |t: f64| self.eval_angle(t).norm();
            let mut c = b - g * (b - a);
            let mut d = a + g * (b - a);
            let (mut fc, mut fd) = (f(c), f(d));
            for _ in 0..80 {
                if fc > fd {
                    b = d;
                    d = c;
                    fd = fc;
                    c = b - g * (b - a);
                    fc = f(c);
                } else {
                    a = c;
                    c = d;
                    fc = fd;
                    d = a + g * (b - a);
                    fd = f(d);
                }
            }
            best = best.max(fc).max(fd);
        }
        best
    }
}
