//! Exact linear algebra over the rationals.
//!
//! Dense elimination is fraction-free: rows are scaled to primitive integer
//! vectors, eliminated by integer cross-multiplication and re-normalized by
//! their content after every step. Pivoting always takes the first nonzero
//! entry, so reduced forms and kernel bases are reproducible.

use std::collections::BTreeMap;
use std::fmt;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};

use crate::error::{Error, Result};
use crate::rational::{denominator_lcm, Rational};

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct RationalMatrix {
    rows: usize,
    cols: usize,
    data: Vec<Rational>,
}

impl RationalMatrix {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        Self { rows, cols, data: vec![Rational::zero(); rows * cols] }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = Self::zeros(n, n);
        for i in 0..n {
            m.set(i, i, Rational::one());
        }
        m
    }

    pub fn from_rows(rows: Vec<Vec<Rational>>) -> Result<Self> {
        let cols = rows.first().map_or(0, Vec::len);
        let mut data = Vec::with_capacity(rows.len() * cols);
        for row in &rows {
            if row.len() != cols {
                return Err(Error::DimensionMismatch { expected: cols, found: row.len() });
            }
            data.extend(row.iter().cloned());
        }
        Ok(Self { rows: rows.len(), cols, data })
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn get(&self, r: usize, c: usize) -> &Rational {
        &self.data[r * self.cols + c]
    }

    pub fn set(&mut self, r: usize, c: usize, v: Rational) {
        self.data[r * self.cols + c] = v;
    }

    pub fn row(&self, r: usize) -> &[Rational] {
        &self.data[r * self.cols..(r + 1) * self.cols]
    }

    pub fn transpose(&self) -> Self {
        let mut t = Self::zeros(self.cols, self.rows);
        for r in 0..self.rows {
            for c in 0..self.cols {
                t.set(c, r, self.get(r, c).clone());
            }
        }
        t
    }

    pub fn is_symmetric(&self) -> bool {
        self.rows == self.cols && (0..self.rows).all(|r| (r + 1..self.cols).all(|c| self.get(r, c) == self.get(c, r)))
    }

    pub fn rank(&self) -> usize {
        row_reduce(self).rank
    }
}

impl fmt::Display for RationalMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for r in 0..self.rows {
            let cells: Vec<String> = self.row(r).iter().map(crate::rational::fmt_rational).collect();
            writeln!(f, "[{}]", cells.join(", "))?;
        }
        Ok(())
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct RowReduction {
    pub reduced: RationalMatrix,
    pub rank: usize,
    pub pivots: Vec<usize>,
}

fn primitive(row: &mut [BigInt]) {
    let g = row.iter().fold(BigInt::zero(), |acc, x| acc.gcd(x));
    if !g.is_zero() && !g.is_one() {
        for x in row.iter_mut() {
            *x /= &g;
        }
    }
}

/// Reduced row echelon form, rank and pivot columns.
pub fn row_reduce(m: &RationalMatrix) -> RowReduction {
    let (rows, cols) = (m.rows, m.cols);
    let mut work: Vec<Vec<BigInt>> = (0..rows)
        .map(|r| {
            let row = m.row(r);
            let l = denominator_lcm(row);
            let mut ints: Vec<BigInt> =
                row.iter().map(|x| (x * Rational::from_integer(l.clone())).to_integer()).collect();
            primitive(&mut ints);
            ints
        })
        .collect();
    let mut pivots = Vec::new();
    let mut next = 0;
    for c in 0..cols {
        if next == rows {
            break;
        }
        let Some(p) = (next..rows).find(|&r| !work[r][c].is_zero()) else {
            continue;
        };
        work.swap(next, p);
        let (head, tail) = work.split_at_mut(next + 1);
        let pivot_row = &head[next];
        for row in tail.iter_mut() {
            if row[c].is_zero() {
                continue;
            }
            let a = pivot_row[c].clone();
            let b = row[c].clone();
            for k in c..cols {
                row[k] = &row[k] * &a - &pivot_row[k] * &b;
            }
            primitive(row);
        }
        pivots.push(c);
        next += 1;
    }
    // Back substitution, still fraction-free.
    for (i, &c) in pivots.iter().enumerate().rev() {
        let (head, tail) = work.split_at_mut(i);
        let pivot_row = &tail[0];
        for row in head.iter_mut() {
            if row[c].is_zero() {
                continue;
            }
            let a = pivot_row[c].clone();
            let b = row[c].clone();
            for k in 0..cols {
                row[k] = &row[k] * &a - &pivot_row[k] * &b;
            }
            primitive(row);
        }
    }
    let mut reduced = RationalMatrix::zeros(rows, cols);
    for (i, &c) in pivots.iter().enumerate() {
        let lead = work[i][c].clone();
        for (k, x) in work[i].iter().enumerate() {
            if !x.is_zero() {
                reduced.set(i, k, Rational::new(x.clone(), lead.clone()));
            }
        }
    }
    RowReduction { reduced, rank: pivots.len(), pivots }
}

/// A basis of `{x : m x = 0}`, one vector per free column (that entry is 1).
pub fn null_space(m: &RationalMatrix) -> Vec<Vec<Rational>> {
    let red = row_reduce(m);
    let pivot_set: Vec<Option<usize>> = {
        let mut v = vec![None; m.cols];
        for (i, &c) in red.pivots.iter().enumerate() {
            v[c] = Some(i);
        }
        v
    };
    (0..m.cols)
        .filter(|&c| pivot_set[c].is_none())
        .map(|free| {
            let mut x = vec![Rational::zero(); m.cols];
            x[free] = Rational::one();
            for (i, &pc) in red.pivots.iter().enumerate() {
                x[pc] = -red.reduced.get(i, free).clone();
            }
            x
        })
        .collect()
}

/// Coefficients `c` with `Σ c_i basis_i = target`, or `None` if `target` is
/// outside the span.
pub fn member_of_span(target: &[Rational], basis: &[Vec<Rational>]) -> Result<Option<Vec<Rational>>> {
    for b in basis {
        if b.len() != target.len() {
            return Err(Error::DimensionMismatch { expected: target.len(), found: b.len() });
        }
    }
    if target.iter().all(Zero::is_zero) {
        return Ok(Some(vec![Rational::zero(); basis.len()]));
    }
    if basis.is_empty() {
        return Ok(None);
    }
    // Augmented system [B^T | target].
    let n = basis.len();
    let mut aug = RationalMatrix::zeros(target.len(), n + 1);
    for (j, b) in basis.iter().enumerate() {
        for (i, x) in b.iter().enumerate() {
            aug.set(i, j, x.clone());
        }
    }
    for (i, x) in target.iter().enumerate() {
        aug.set(i, n, x.clone());
    }
    let red = row_reduce(&aug);
    if red.pivots.contains(&n) {
        return Ok(None);
    }
    let mut coeffs = vec![Rational::zero(); n];
    for (i, &c) in red.pivots.iter().enumerate() {
        coeffs[c] = red.reduced.get(i, n).clone();
    }
    Ok(Some(coeffs))
}

/// Incrementally maintained echelon basis of sparse vectors indexed by `K`.
///
/// Each stored row has its smallest key as pivot, normalized to 1.
#[derive(Clone, Debug)]
pub struct SparseEchelon<K: Ord + Clone> {
    rows: Vec<BTreeMap<K, Rational>>,
    pivot_of: BTreeMap<K, usize>,
}

impl<K: Ord + Clone> Default for SparseEchelon<K> {
    fn default() -> Self {
        Self { rows: Vec::new(), pivot_of: BTreeMap::new() }
    }
}

impl<K: Ord + Clone> SparseEchelon<K> {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn rank(&self) -> usize {
        self.rows.len()
    }

    pub fn rows(&self) -> &[BTreeMap<K, Rational>] {
        &self.rows
    }

    /// Residue of `v` modulo the current span.
    pub fn reduce(&self, mut v: BTreeMap<K, Rational>) -> BTreeMap<K, Rational> {
        let mut cursor: Option<K> = None;
        loop {
            let next = match &cursor {
                None => v.keys().find(|k| self.pivot_of.contains_key(*k)).cloned(),
                Some(c) => v
                    .range((std::ops::Bound::Excluded(c.clone()), std::ops::Bound::Unbounded))
                    .map(|(k, _)| k)
                    .find(|k| self.pivot_of.contains_key(*k))
                    .cloned(),
            };
            let Some(key) = next else { break };
            let factor = v[&key].clone();
            for (k, x) in &self.rows[self.pivot_of[&key]] {
                let entry = v.entry(k.clone()).or_insert_with(Rational::zero);
                *entry -= x * &factor;
                if entry.is_zero() {
                    v.remove(k);
                }
            }
            cursor = Some(key);
        }
        v
    }

    pub fn contains(&self, v: BTreeMap<K, Rational>) -> bool {
        self.reduce(v).is_empty()
    }

    /// Adds `v` to the span; returns whether it was independent.
    pub fn insert(&mut self, v: BTreeMap<K, Rational>) -> bool {
        let mut residue = self.reduce(v);
        let Some((pivot, lead)) = residue.iter().next().map(|(k, x)| (k.clone(), x.clone())) else {
            return false;
        };
        if !lead.is_one() {
            let inv = lead.recip();
            for x in residue.values_mut() {
                *x *= &inv;
            }
        }
        self.pivot_of.insert(pivot, self.rows.len());
        self.rows.push(residue);
        true
    }
}

/// Absolute-value ordering helper for tests of pivot growth.
pub fn max_abs_entry(m: &RationalMatrix) -> Rational {
    m.data.iter().map(|x| x.abs()).max().unwrap_or_else(Rational::zero)
}
