//! Finite sections of Toeplitz, Hankel and shift-type operators on `H²`, and
//! the block operators `[[Y, X], [0, Z]]` built from them.
//!
//! Entry `(i, j)` of a section is `⟨T z^j, z^i⟩`, so `T_Φ(i, j) = c_{i−j}` and
//! `H_Φ(i, j) = c_{i+j}`.

use crate::analysis::op_norm;
use crate::error::{LabError, Result};
use crate::symbol::FourierSymbol;
use crate::C64;
use nalgebra::DMatrix;
use serde::{Deserialize, Serialize};
use std::fmt;
use std::io::Write;
use std::str::FromStr;

/// Spill value for operators whose rows or columns reach arbitrarily far.
pub const UNBOUNDED: usize = usize::MAX;

#[derive(Clone, Debug, PartialEq)]
pub struct OperatorSection {
    pub data: DMatrix<C64>,
    /// Entries with `i, j < N − exact_margin` agree with the infinite operator.
    pub exact_margin: usize,
    /// How far past its own index a row or column of the infinite operator
    /// can reach. Products lose this many trailing rows/columns of exactness.
    pub spill: usize,
}

fn zero() -> C64 {
    C64::new(0.0, 0.0)
}

fn one() -> C64 {
    C64::new(1.0, 0.0)
}

impl OperatorSection {
    pub fn new(data: DMatrix<C64>, exact_margin: usize, spill: usize) -> Self {
        assert_eq!(data.nrows(), data.ncols(), "sections are square");
        OperatorSection {
            data,
            exact_margin,
            spill,
        }
    }

    pub fn zeros(n: usize) -> Self {
        OperatorSection::new(DMatrix::zeros(n, n), 0, 0)
    }

    pub fn identity(n: usize) -> Self {
        OperatorSection::new(DMatrix::identity(n, n), 0, 0)
    }

    pub fn from_fn(n: usize, f: impl FnMut(usize, usize) -> C64) -> Self {
        OperatorSection::new(DMatrix::from_fn(n, n, f), 0, 0)
    }

    pub fn size(&self) -> usize {
        self.data.nrows()
    }

    pub fn entry(&self, i: usize, j: usize) -> C64 {
        self.data[(i, j)]
    }

    fn check_size(&self, other: &OperatorSection) -> Result<()> {
        if self.size() != other.size() {
            return Err(LabError::SizeMismatch(format!(
                "{} vs {}",
                self.size(),
                other.size()
            )));
        }
        Ok(())
    }

    pub fn mul(&self, other: &OperatorSection) -> OperatorSection {
        let n = self.size();
        let lost = self.spill.min(other.spill);
        let margin = self
            .exact_margin
            .saturating_add(other.exact_margin)
            .saturating_add(lost)
            .min(n);
        OperatorSection::new(
            &self.data * &other.data,
            margin,
            self.spill.saturating_add(other.spill),
        )
    }

    pub fn add(&self, other: &OperatorSection) -> OperatorSection {
        OperatorSection::new(
            &self.data + &other.data,
            self.exact_margin.max(other.exact_margin),
            self.spill.max(other.spill),
        )
    }

    pub fn sub(&self, other: &OperatorSection) -> OperatorSection {
        OperatorSection::new(
            &self.data - &other.data,
            self.exact_margin.max(other.exact_margin),
            self.spill.max(other.spill),
        )
    }

    pub fn scale(&self, s: C64) -> OperatorSection {
        OperatorSection::new(&self.data * s, self.exact_margin, self.spill)
    }

    pub fn adjoint(&self) -> OperatorSection {
        OperatorSection::new(self.data.adjoint(), self.exact_margin, self.spill)
    }

    pub fn pow(&self, k: u32) -> OperatorSection {
        let mut out = OperatorSection::identity(self.size());
        let mut base = self.clone();
        let mut k = k;
        while k > 0 {
            if k & 1 == 1 {
                out = out.mul(&base);
            }
            k >>= 1;
            if k > 0 {
                base = base.mul(&base);
            }
        }
        out
    }

    /// Top-left `m × m` block.
    pub fn leading(&self, m: usize) -> DMatrix<C64> {
        self.data.view((0, 0), (m, m)).into_owned()
    }

    pub fn max_abs_entry(&self) -> f64 {
        self.data.iter().map(|c| c.norm()).fold(0.0, f64::max)
    }

    /// Row-major CSV, each cell written as two columns `re,im`.
    pub fn write_csv<W: Write>(&self, mut w: W) -> std::io::Result<()> {
        for i in 0..self.size() {
            let row: Vec<String> = (0..self.size())
                .map(|j| {
                    let c = self.data[(i, j)];
                    format!("{},{}", c.re, c.im)
                })
                .collect();
            writeln!(w, "{}", row.join(","))?;
        }
        Ok(())
    }
}

/// Coefficients `c_lo, …, c_hi` of a symbol as a dense vector.
fn coeff_range(sym: &FourierSymbol, lo: i64, hi: i64) -> Vec<C64> {
    (lo..=hi).map(|n| sym.coeff(n)).collect()
}

fn toeplitz_spill(sym: &FourierSymbol) -> usize {
    let s = sym.support();
    match (s.lo, s.hi) {
        _ if s.is_empty() => 0,
        (Some(lo), Some(hi)) => (-lo).max(hi).max(0) as usize,
        _ => UNBOUNDED,
    }
}

pub fn toeplitz_section(sym: &FourierSymbol, n: usize) -> OperatorSection {
    let m = n as i64 - 1;
    let c = coeff_range(sym, -m, m);
    let data = DMatrix::from_fn(n, n, |i, j| c[(i as i64 - j as i64 + m) as usize]);
    OperatorSection::new(data, 0, toeplitz_spill(sym))
}

pub fn hankel_section(sym: &FourierSymbol, n: usize) -> OperatorSection {
    let c = coeff_range(sym, 0, 2 * n as i64 - 2);
    let data = DMatrix::from_fn(n, n, |i, j| c[i + j]);
    let s = sym.support();
    let spill = match s.hi {
        _ if s.is_empty() => 0,
        Some(hi) if hi < n as i64 => 0,
        _ => UNBOUNDED,
    };
    OperatorSection::new(data, 0, spill)
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum BasicKind {
    Shift,
    Backshift,
    ProjectionE,
    /// Compression of the flip `J` to `H²`: only the constant survives.
    Flip,
    /// `D zⁿ = n z^{n−1}`.
    Diff,
    /// `D S`, the diagonal `(n + 1)`.
    DiffShift,
}

impl BasicKind {
    pub fn label(self) -> &'static str {
        match self {
            BasicKind::Shift => "S",
            BasicKind::Backshift => "S*",
            BasicKind::ProjectionE => "P_E",
            BasicKind::Flip => "J",
            BasicKind::Diff => "D",
            BasicKind::DiffShift => "DS",
        }
    }
}

pub fn basic_section(kind: BasicKind, n: usize) -> OperatorSection {
    let data = match kind {
        BasicKind::Shift => DMatrix::from_fn(n, n, |i, j| if i == j + 1 { one() } else { zero() }),
        BasicKind::Backshift => DMatrix::from_fn(n, n, |i, j| if j == i + 1 { one() } else { zero() }),
        BasicKind::ProjectionE | BasicKind::Flip => {
            DMatrix::from_fn(n, n, |i, j| if i == 0 && j == 0 { one() } else { zero() })
        }
        BasicKind::Diff => DMatrix::from_fn(n, n, |i, j| {
            if j == i + 1 {
                C64::new(j as f64, 0.0)
            } else {
                zero()
            }
        }),
        BasicKind::DiffShift => DMatrix::from_fn(n, n, |i, j| {
            if i == j {
                C64::new((i + 1) as f64, 0.0)
            } else {
                zero()
            }
        }),
    };
    let spill = match kind {
        BasicKind::Shift | BasicKind::Backshift | BasicKind::Diff => 1,
        _ => 0,
    };
    OperatorSection::new(data, 0, spill)
}

/// Diagonal pair `(Y, Z)` of a block operator `[[Y, X], [0, Z]]`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum DiagPair {
    #[serde(rename = "s,s*")]
    SSstar,
    #[serde(rename = "s,s")]
    SS,
    #[serde(rename = "s*,s")]
    SstarS,
    #[serde(rename = "s*,s*")]
    SstarSstar,
}

impl DiagPair {
    pub const ALL: [DiagPair; 4] = [
        DiagPair::SSstar,
        DiagPair::SS,
        DiagPair::SstarS,
        DiagPair::SstarSstar,
    ];

    pub fn y(self) -> BasicKind {
        match self {
            DiagPair::SSstar | DiagPair::SS => BasicKind::Shift,
            _ => BasicKind::Backshift,
        }
    }

    pub fn z(self) -> BasicKind {
        match self {
            DiagPair::SSstar | DiagPair::SstarSstar => BasicKind::Backshift,
            _ => BasicKind::Shift,
        }
    }

    pub fn token(self) -> &'static str {
        match self {
            DiagPair::SSstar => "s,s*",
            DiagPair::SS => "s,s",
            DiagPair::SstarS => "s*,s",
            DiagPair::SstarSstar => "s*,s*",
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum OffKind {
    Toeplitz,
    Hankel,
}

impl OffKind {
    /// Operator name used in residual labels.
    pub fn label(self) -> &'static str {
        match self {
            OffKind::Toeplitz => "T_Phi",
            OffKind::Hankel => "H_Phi",
        }
    }

    pub fn section(self, sym: &FourierSymbol, n: usize) -> OperatorSection {
        match self {
            OffKind::Toeplitz => toeplitz_section(sym, n),
            OffKind::Hankel => hankel_section(sym, n),
        }
    }

    /// Entry `(i, j)` of the infinite operator.
    fn index(self, i: usize, j: usize) -> i64 {
        match self {
            OffKind::Toeplitz => i as i64 - j as i64,
            OffKind::Hankel => (i + j) as i64,
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct FoguelCase {
    pub pair: DiagPair,
    pub kind: OffKind,
}

impl FoguelCase {
    pub fn new(pair: DiagPair, kind: OffKind) -> Self {
        FoguelCase { pair, kind }
    }

    pub fn all() -> impl Iterator<Item = FoguelCase> {
        [OffKind::Toeplitz, OffKind::Hankel]
            .into_iter()
            .flat_map(|k| DiagPair::ALL.into_iter().map(move |p| FoguelCase::new(p, k)))
    }

    /// The Hankel case with diagonal `(S*, S)` relies on an external scalar
    /// criterion rather than one proved here.
    pub fn is_external(self) -> bool {
        self.pair == DiagPair::SstarS && self.kind == OffKind::Hankel
    }

    pub fn token(self) -> String {
        let k = match self.kind {
            OffKind::Toeplitz => 't',
            OffKind::Hankel => 'h',
        };
        format!("{k}:{}", self.pair.token())
    }
}

impl fmt::Display for FoguelCase {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.token())
    }
}

impl FromStr for FoguelCase {
    type Err = LabError;

    fn from_str(s: &str) -> Result<Self> {
        let bad = || {
            LabError::Parse(format!(
                "unknown case `{s}`; expected one of t|h followed by :s,s* :s,s :s*,s :s*,s*"
            ))
        };
        let (k, p) = s.trim().split_once(':').ok_or_else(bad)?;
        let kind = match k {
            "t" => OffKind::Toeplitz,
            "h" => OffKind::Hankel,
            _ => return Err(bad()),
        };
        let pair = DiagPair::ALL
            .into_iter()
            .find(|d| d.token() == p.replace(' ', ""))
            .ok_or_else(bad)?;
        Ok(FoguelCase { pair, kind })
    }
}

impl Serialize for FoguelCase {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        s.serialize_str(&self.token())
    }
}

impl<'de> Deserialize<'de> for FoguelCase {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        let s = String::deserialize(d)?;
        s.parse().map_err(serde::de::Error::custom)
    }
}

/// `2N × 2N` section of `[[Y, X], [0, Z]]`.
pub fn foguel_section(case: FoguelCase, sym: &FourierSymbol, n: usize) -> OperatorSection {
    let y = basic_section(case.pair.y(), n);
    let z = basic_section(case.pair.z(), n);
    let x = case.kind.section(sym, n);
    let mut data = DMatrix::zeros(2 * n, 2 * n);
    data.view_mut((0, 0), (n, n)).copy_from(&y.data);
    data.view_mut((0, n), (n, n)).copy_from(&x.data);
    data.view_mut((n, n), (n, n)).copy_from(&z.data);
    OperatorSection::new(data, 0, x.spill.max(1))
}

/// Top-right `N × N` block of a `2N × 2N` section.
pub fn top_right(m: &OperatorSection) -> OperatorSection {
    let n = m.size() / 2;
    OperatorSection::new(m.data.view((0, n), (n, n)).into_owned(), m.exact_margin, m.spill)
}

/// Dense lookup of the infinite off-diagonal operator on the index window
/// `rows × cols`.
struct OffTable {
    kind: OffKind,
    lo: i64,
    coeffs: Vec<C64>,
}

impl OffTable {
    fn new(kind: OffKind, sym: &FourierSymbol, rows: usize, cols: usize) -> Self {
        let (lo, hi) = match kind {
            OffKind::Toeplitz => (-(cols as i64) + 1, rows as i64 - 1),
            OffKind::Hankel => (0, (rows + cols) as i64 - 2),
        };
        OffTable {
            kind,
            lo,
            coeffs: coeff_range(sym, lo, hi),
        }
    }

    fn get(&self, i: usize, j: usize) -> C64 {
        self.coeffs[(self.kind.index(i, j) - self.lo) as usize]
    }
}

/// Iterates the exact sections of `X_1, X_2, …` for the top-right block of
/// the `n`-th power.
///
/// For `(S, S*)`, `X_{n+1} = S X_n + X S*ⁿ`; every index stays inside the
/// section. For `(S, S)`, `X_{n+1} = S X_n + X Sⁿ`, and the entries of `X Sⁿ`
/// are read from the coefficients directly so no truncation enters.
pub struct XnIter {
    pair: DiagPair,
    table: OffTable,
    size: usize,
    n: usize,
    current: DMatrix<C64>,
    spill: usize,
}

impl XnIter {
    pub fn new(pair: DiagPair, kind: OffKind, sym: &FourierSymbol, size: usize, nmax: usize) -> Result<Self> {
        if !matches!(pair, DiagPair::SSstar | DiagPair::SS) {
            return Err(LabError::UnsupportedCase(format!(
                "X_n is defined for diagonal pairs (s,s*) and (s,s), not ({})",
                pair.token()
            )));
        }
        let cols = size + nmax.max(1);
        Ok(XnIter {
            pair,
            table: OffTable::new(kind, sym, size, cols),
            size,
            n: 0,
            current: DMatrix::zeros(size, size),
            spill: kind.section(sym, 1).spill,
        })
    }

    fn x_times_power(&self, k: usize) -> DMatrix<C64> {
        let n = self.size;
        match self.pair {
            DiagPair::SSstar => DMatrix::from_fn(n, n, |p, q| {
                if q >= k {
                    self.table.get(p, q - k)
                } else {
                    zero()
                }
            }),
            _ => DMatrix::from_fn(n, n, |p, q| self.table.get(p, q + k)),
        }
    }
}

impl Iterator for XnIter {
    type Item = (usize, OperatorSection);

    fn next(&mut self) -> Option<Self::Item> {
        let n = self.size;
        let term = self.x_times_power(self.n);
        let mut next = DMatrix::zeros(n, n);
        if self.n > 0 {
            next.view_mut((1, 0), (n - 1, n))
                .copy_from(&self.current.view((0, 0), (n - 1, n)));
        }
        next += term;
        self.current = next;
        self.n += 1;
        Some((self.n, OperatorSection::new(self.current.clone(), 0, self.spill)))
    }
}

/// Exact section of `X_n`, the top-right block of `[[Y, X], [0, Z]]ⁿ`.
pub fn xn_section(
    pair: DiagPair,
    kind: OffKind,
    sym: &FourierSymbol,
    n: usize,
    size: usize,
) -> Result<OperatorSection> {
    if n == 0 {
        return Err(LabError::InvalidParameter("X_n needs n >= 1".into()));
    }
    let mut it = XnIter::new(pair, kind, sym, size, n)?;
    Ok(it.nth(n - 1).unwrap().1)
}

/// `1, 2, 3, 4, 6, 8, 11, …`: rounded powers of `√2` up to `nmax`, always
/// ending at `nmax`.
pub fn half_octave_grid(nmax: usize) -> Vec<usize> {
    let mut out: Vec<usize> = Vec::new();
    let mut k = 0;
    loop {
        let n = 2f64.powf(k as f64 / 2.0).round() as usize;
        if n > nmax {
            break;
        }
        if out.last() != Some(&n) {
            out.push(n);
        }
        k += 1;
    }
    if out.last() != Some(&nmax) && nmax > 0 {
        out.push(nmax);
    }
    out
}

/// Section norms `‖X_n‖` for each `n` in the increasing list `ns`.
pub fn xn_norm_profile(
    pair: DiagPair,
    kind: OffKind,
    sym: &FourierSymbol,
    size: usize,
    ns: &[usize],
) -> Result<Vec<(usize, f64)>> {
    if ns.is_empty() {
        return Ok(Vec::new());
    }
    if ns[0] == 0 || ns.windows(2).any(|w| w[1] <= w[0]) {
        return Err(LabError::InvalidParameter(
            "powers must be positive and strictly increasing".into(),
        ));
    }
    let nmax = *ns.last().unwrap();
    let mut out = Vec::with_capacity(ns.len());
    let mut want = ns.iter().peekable();
    for (n, x) in XnIter::new(pair, kind, sym, size, nmax)?.take(nmax) {
        if want.peek() == Some(&&n) {
            want.next();
            out.push((n, op_norm(&x)));
        }
    }
    Ok(out)
}

/// Spectral norm of `A − B` on the top-left `(N − margin)²` block.
pub fn interior_residual(a: &OperatorSection, b: &OperatorSection, margin: usize) -> Result<f64> {
    a.check_size(b)?;
    let n = a.size();
    if margin >= n {
        return Err(LabError::InvalidParameter(format!(
            "margin {margin} leaves no interior in a section of size {n}"
        )));
    }
    let m = n - margin;
    let d = a.leading(m) - b.leading(m);
    Ok(op_norm(&OperatorSection::new(d, 0, 0)))
}

/// Largest entrywise deviation on the top-left `(N − margin)²` block.
pub fn interior_max_abs(a: &OperatorSection, b: &OperatorSection, margin: usize) -> Result<f64> {
    a.check_size(b)?;
    let m = a.size().saturating_sub(margin);
    let d = a.leading(m) - b.leading(m);
    Ok(d.iter().map(|c| c.norm()).fold(0.0, f64::max))
}
