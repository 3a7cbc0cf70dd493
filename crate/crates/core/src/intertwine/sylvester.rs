//! Minimum-norm least-squares solutions of `Y A − A Z = X` on finite sections.
//!
//! The unknown is taken on an `(N+1) × (N+1)` window and the equations on the
//! `N × N` block, so every equation is a compression of the infinite identity
//! rather than of its truncated shifts. With shift-type `Y` and `Z` each
//! equation touches at most two unknowns along one diagonal (or antidiagonal),
//! and each unknown sits in at most two equations. The system therefore splits
//! into independent paths, each solved exactly in linear time.

use crate::analysis::matrix_norm;
use crate::opmat::{BasicKind, DiagPair, OperatorSection};
use crate::C64;
use nalgebra::{DMatrix, DVector};

#[derive(Clone, Debug)]
pub struct SylvesterSolution {
    /// Leading `N × N` block of the solution.
    pub a: OperatorSection,
    /// Full `(N+1) × (N+1)` solution.
    pub padded: DMatrix<C64>,
    /// Spectral norm of `Y A − A Z − X` over the equation block.
    pub residual: f64,
    /// Spectral norm of the padded solution.
    pub min_norm: f64,
}

/// One equation: `Σ coef · A[idx] = rhs` with at most two terms.
struct Equation {
    terms: [(usize, f64); 2],
    len: usize,
    rhs: C64,
}

fn equations(pair: DiagPair, x: &DMatrix<C64>) -> Vec<Equation> {
    let n = x.nrows();
    let w = n + 1;
    let idx = |i: usize, j: usize| i * w + j;
    let mut out = Vec::with_capacity(n * n);
    for i in 0..n {
        for j in 0..n {
            let mut terms = [(0usize, 0.0f64); 2];
            let mut len = 0;
            // Y A
            let ya = match pair.y() {
                BasicKind::Shift => (i >= 1).then(|| idx(i - 1, j)),
                _ => Some(idx(i + 1, j)),
            };
            // A Z
            let az = match pair.z() {
                BasicKind::Shift => Some(idx(i, j + 1)),
                _ => (j >= 1).then(|| idx(i, j - 1)),
            };
            if let Some(k) = ya {
                terms[len] = (k, 1.0);
                len += 1;
            }
            if let Some(k) = az {
                terms[len] = (k, -1.0);
                len += 1;
            }
            out.push(Equation {
                terms,
                len,
                rhs: x[(i, j)],
            });
        }
    }
    out
}

fn apply(pair: DiagPair, a: &DMatrix<C64>, n: usize) -> DMatrix<C64> {
    let get = |i: isize, j: isize| {
        if i < 0 || j < 0 {
            C64::new(0.0, 0.0)
        } else {
            a[(i as usize, j as usize)]
        }
    };
    DMatrix::from_fn(n, n, |i, j| {
        let (i, j) = (i as isize, j as isize);
        let ya = match pair.y() {
            BasicKind::Shift => get(i - 1, j),
            _ => get(i + 1, j),
        };
        let az = match pair.z() {
            BasicKind::Shift => get(i, j + 1),
            _ => get(i, j - 1),
        };
        ya - az
    })
}

/// Solves `Y A − A Z = X` in the minimum-norm least-squares sense.
pub fn sylvester_lsq(pair: DiagPair, x: &OperatorSection) -> SylvesterSolution {
    let n = x.size();
    let w = n + 1;
    let eqs = equations(pair, &x.data);
    let unknowns = w * w;

    // Incidence: for each unknown, the equations it appears in.
    let mut incident: Vec<Vec<usize>> = vec![Vec::new(); unknowns];
    for (e, eq) in eqs.iter().enumerate() {
        for t in &eq.terms[..eq.len] {
            incident[t.0].push(e);
        }
    }
    let mut sol = vec![C64::new(0.0, 0.0); unknowns];
    let mut seen = vec![false; unknowns];
    for start in 0..unknowns {
        if seen[start] || incident[start].is_empty() {
            continue;
        }
        // Collect the component and walk it as a path from an endpoint.
        let comp = component(start, &eqs, &incident, &mut seen);
        let path = order_path(&comp, &eqs, &incident);
        let values = solve_path(&path, &eqs, &incident);
        for (k, v) in path.iter().zip(values) {
            sol[*k] = v;
        }
    }
    let padded = DMatrix::from_fn(w, w, |i, j| sol[i * w + j]);
    finish(pair, x, padded)
}

fn finish(pair: DiagPair, x: &OperatorSection, padded: DMatrix<C64>) -> SylvesterSolution {
    let n = x.size();
    let residual = matrix_norm(&(apply(pair, &padded, n) - &x.data));
    let min_norm = matrix_norm(&padded);
    SylvesterSolution {
        a: OperatorSection::new(padded.view((0, 0), (n, n)).into_owned(), 1, 1),
        padded,
        residual,
        min_norm,
    }
}

fn component(start: usize, eqs: &[Equation], incident: &[Vec<usize>], seen: &mut [bool]) -> Vec<usize> {
    let mut stack = vec![start];
    let mut comp = Vec::new();
    seen[start] = true;
    while let Some(u) = stack.pop() {
        comp.push(u);
        for &e in &incident[u] {
            for t in &eqs[e].terms[..eqs[e].len] {
                if !seen[t.0] {
                    seen[t.0] = true;
                    stack.push(t.0);
                }
            }
        }
    }
    comp
}

fn neighbours(u: usize, eqs: &[Equation], incident: &[Vec<usize>]) -> Vec<usize> {
    incident[u]
        .iter()
        .filter(|&&e| eqs[e].len == 2)
        .map(|&e| {
            let t = &eqs[e].terms;
            if t[0].0 == u {
                t[1].0
            } else {
                t[0].0
            }
        })
        .collect()
}

fn order_path(comp: &[usize], eqs: &[Equation], incident: &[Vec<usize>]) -> Vec<usize> {
    let start = comp
        .iter()
        .copied()
        .find(|&u| neighbours(u, eqs, incident).len() <= 1)
        .expect("shift-type Sylvester systems decompose into paths");
    let mut path = vec![start];
    let mut prev = usize::MAX;
    let mut cur = start;
    loop {
        let next = neighbours(cur, eqs, incident).into_iter().find(|&v| v != prev);
        match next {
            Some(v) => {
                prev = cur;
                cur = v;
                path.push(v);
            }
            None => break,
        }
    }
    debug_assert_eq!(path.len(), comp.len());
    path
}

/// Least squares on a path `x_0 - x_1 - … - x_m`; minimum norm when the
/// system has a one-dimensional null space.
fn solve_path(path: &[usize], eqs: &[Equation], incident: &[Vec<usize>]) -> Vec<C64> {
    let m = path.len();
    let pos = |u: usize| path.iter().position(|&p| p == u).unwrap();
    // Normal equations MᴴM x = Mᴴ r, tridiagonal in path order.
    let mut diag = vec![0.0f64; m];
    let mut off = vec![0.0f64; m.saturating_sub(1)];
    let mut rhs = vec![C64::new(0.0, 0.0); m];
    let mut used = std::collections::BTreeSet::new();
    let mut grounded = false;
    for &u in path {
        used.extend(incident[u].iter().copied());
    }
    let lookup: std::collections::HashMap<usize, usize> = path.iter().enumerate().map(|(k, &u)| (u, k)).collect();
    let _ = pos;
    let mut edge: Vec<Option<(f64, f64, C64)>> = vec![None; m.saturating_sub(1)];
    for &e in &used {
        let eq = &eqs[e];
        if eq.len == 1 {
            grounded = true;
        }
        let ts: Vec<(usize, f64)> = eq.terms[..eq.len].iter().map(|&(u, c)| (lookup[&u], c)).collect();
        for &(k, c) in &ts {
            diag[k] += c * c;
            rhs[k] += eq.rhs * c;
        }
        if ts.len() == 2 {
            let (k0, c0) = ts[0];
            let (k1, c1) = ts[1];
            let (lo, clo, hi, chi) = if k0 < k1 { (k0, c0, k1, c1) } else { (k1, c1, k0, c0) };
            debug_assert_eq!(hi, lo + 1);
            off[lo] += clo * chi;
            edge[lo] = Some((clo, chi, eq.rhs));
        }
    }

    if grounded {
        thomas(&diag, &off, &rhs)
    } else {
        // Exactly solvable up to the null vector; propagate, then project.
        let mut x = vec![C64::new(0.0, 0.0); m];
        let mut v = vec![0.0f64; m];
        v[0] = 1.0;
        for k in 0..m - 1 {
            let (a, b, r) = edge[k].expect("path edges are equations");
            x[k + 1] = (r - x[k] * a) / b;
            v[k + 1] = -a * v[k] / b;
        }
        let vv: f64 = v.iter().map(|t| t * t).sum();
        let vx: C64 = v.iter().zip(&x).map(|(a, b)| b * *a).sum();
        let s = vx / vv;
        x.iter().zip(&v).map(|(xi, vi)| xi - s * *vi).collect()
    }
}

/// Symmetric tridiagonal solve with real matrix and complex right side.
fn thomas(diag: &[f64], off: &[f64], rhs: &[C64]) -> Vec<C64> {
    let m = diag.len();
    let mut c = vec![0.0f64; m];
    let mut d = vec![C64::new(0.0, 0.0); m];
    let mut denom = diag[0];
    c[0] = if m > 1 { off[0] / denom } else { 0.0 };
    d[0] = rhs[0] / denom;
    for k in 1..m {
        denom = diag[k] - off[k - 1] * c[k - 1];
        if k < m - 1 {
            c[k] = off[k] / denom;
        }
        d[k] = (rhs[k] - d[k - 1] * off[k - 1]) / denom;
    }
    let mut x = d;
    for k in (0..m - 1).rev() {
        let next = x[k + 1];
        x[k] -= next * c[k];
    }
    x
}

/// Dense pseudo-inverse solve of the same system; for cross-checking on
/// small sizes only.
pub fn sylvester_dense(pair: DiagPair, x: &OperatorSection) -> SylvesterSolution {
    let n = x.size();
    let w = n + 1;
    let eqs = equations(pair, &x.data);
    let mut m = DMatrix::<f64>::zeros(eqs.len(), w * w);
    let mut r = DVector::<C64>::zeros(eqs.len());
    for (e, eq) in eqs.iter().enumerate() {
        for &(k, c) in &eq.terms[..eq.len] {
            m[(e, k)] += c;
        }
        r[e] = eq.rhs;
    }
    let pinv = m
        .svd(true, true)
        .pseudo_inverse(1e-10)
        .expect("svd with both factors");
    let pinv = pinv.map(|v| C64::new(v, 0.0));
    let sol = pinv * r;
    let padded = DMatrix::from_fn(w, w, |i, j| sol[i * w + j]);
    finish(pair, x, padded)
}
