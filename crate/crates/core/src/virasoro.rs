//! Virasoro Verma modules and their Shapovalov forms.
//!
//! States are combinations of ordered monomials `L(-λ_1)···L(-λ_k)v` with
//! `λ_1 >= ... >= λ_k >= 1`. Positive modes are moved to the right with
//! `[L(m),L(n)] = (m-n)L(m+n) + (m³-m)/12 c δ_{m+n,0}`.

use std::collections::{BTreeMap, HashMap};

use num_traits::{One, Zero};
use rayon::prelude::*;

use crate::linalg::RationalMatrix;
use crate::rational::{qi, Rational};

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct VirasoroParams {
    pub c: Rational,
    pub hwt: Rational,
}

impl VirasoroParams {
    pub fn new(c: Rational, hwt: Rational) -> Self {
        Self { c, hwt }
    }
}

/// Partitions of `level` with parts `>= min_part`, parts decreasing.
/// `min_part = 2` gives the vacuum quotient by `L(-1)v`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PartitionBasis {
    pub level: u32,
    pub min_part: u32,
    pub parts: Vec<Vec<u32>>,
}

impl PartitionBasis {
    pub fn new(level: u32, min_part: u32) -> Self {
        Self { level, min_part, parts: partitions(level, min_part) }
    }

    pub fn len(&self) -> usize {
        self.parts.len()
    }

    pub fn is_empty(&self) -> bool {
        self.parts.is_empty()
    }
}

/// Partitions of `n` into parts `>= min_part`, in reverse lexicographic
/// order (`[n]` first).
pub fn partitions(n: u32, min_part: u32) -> Vec<Vec<u32>> {
    fn go(rest: u32, max: u32, min: u32, cur: &mut Vec<u32>, out: &mut Vec<Vec<u32>>) {
        if rest == 0 {
            out.push(cur.clone());
            return;
        }
        for p in (min..=rest.min(max)).rev() {
            cur.push(p);
            go(rest - p, p, min, cur, out);
            cur.pop();
        }
    }
    let mut out = Vec::new();
    go(n, n, min_part.max(1), &mut Vec::new(), &mut out);
    out
}

type State = BTreeMap<Vec<u32>, Rational>;

fn add_into(acc: &mut State, s: &State, c: &Rational) {
    if c.is_zero() {
        return;
    }
    for (w, x) in s {
        let e = acc.entry(w.clone()).or_insert_with(Rational::zero);
        *e += x * c;
        if e.is_zero() {
            acc.remove(w);
        }
    }
}

/// Action of Virasoro modes on a highest-weight module, with memoization.
/// With `kill_l_minus_1` the module is the quotient by `L(-1)v`.
pub struct VermaModule {
    params: VirasoroParams,
    kill_l_minus_1: bool,
    memo: HashMap<(i64, Vec<u32>), State>,
}

impl VermaModule {
    pub fn new(params: VirasoroParams, kill_l_minus_1: bool) -> Self {
        Self { params, kill_l_minus_1, memo: HashMap::new() }
    }

    /// `L(m)` applied to the ordered monomial `word`.
    pub fn apply(&mut self, m: i64, word: &[u32]) -> State {
        if let Some(s) = self.memo.get(&(m, word.to_vec())) {
            return s.clone();
        }
        let out = self.apply_uncached(m, word);
        self.memo.insert((m, word.to_vec()), out.clone());
        out
    }

    fn apply_uncached(&mut self, m: i64, word: &[u32]) -> State {
        let mut out = State::new();
        let Some((&p, rest)) = word.split_first() else {
            match m.cmp(&0) {
                std::cmp::Ordering::Greater => {}
                std::cmp::Ordering::Equal => {
                    if !self.params.hwt.is_zero() {
                        out.insert(Vec::new(), self.params.hwt.clone());
                    }
                }
                std::cmp::Ordering::Less => {
                    if !(m == -1 && self.kill_l_minus_1) {
                        out.insert(vec![(-m) as u32], Rational::one());
                    }
                }
            }
            return out;
        };
        let p = p as i64;
        if m <= -p {
            let mut w = vec![(-m) as u32];
            w.extend_from_slice(word);
            out.insert(w, Rational::one());
            return out;
        }
        // L(m) L(-p) R = L(-p) L(m) R + (m+p) L(m-p) R + δ_{m,p} (m³-m)/12 c R
        let inner = self.apply(m, rest);
        for (w, x) in &inner {
            let moved = self.apply(-p, w);
            add_into(&mut out, &moved, x);
        }
        if m + p != 0 {
            let s = self.apply(m - p, rest);
            add_into(&mut out, &s, &qi(m + p));
        }
        if m == p {
            let central = qi(m * m * m - m) / qi(12) * &self.params.c;
            let mut r = State::new();
            r.insert(rest.to_vec(), Rational::one());
            add_into(&mut out, &r, &central);
        }
        out
    }

    /// `<L_{-λ}v, L_{-μ}v>`: the `v`-coefficient of `L(λ_k)···L(λ_1) L_{-μ} v`.
    pub fn pairing(&mut self, lambda: &[u32], mu: &[u32]) -> Rational {
        let mut state = State::new();
        state.insert(mu.to_vec(), Rational::one());
        for &part in lambda {
            let mut next = State::new();
            for (w, x) in &state {
                let img = self.apply(part as i64, w);
                add_into(&mut next, &img, x);
            }
            state = next;
            if state.is_empty() {
                break;
            }
        }
        state.get(&Vec::new()).cloned().unwrap_or_else(Rational::zero)
    }
}

/// Gram matrix of the Shapovalov form on `basis`.
pub fn gram_on(params: &VirasoroParams, basis: &PartitionBasis) -> RationalMatrix {
    let mut module = VermaModule::new(params.clone(), basis.min_part >= 2);
    let n = basis.len();
    let mut m = RationalMatrix::zeros(n, n);
    for i in 0..n {
        for j in 0..n {
            m.set(i, j, module.pairing(&basis.parts[i], &basis.parts[j]));
        }
    }
    m
}

/// Shapovalov Gram matrix of the full Verma module at level `n`.
pub fn shapovalov_gram(params: &VirasoroParams, n: u32) -> RationalMatrix {
    gram_on(params, &PartitionBasis::new(n, 1))
}

/// `dim L(c, 0)_n` for `n <= cutoff`, as ranks of the form on the quotient
/// by `L(-1)v`.
pub fn simple_vacuum_dims(c: &Rational, cutoff: u32) -> Vec<usize> {
    let params = VirasoroParams::new(c.clone(), Rational::zero());
    (0..=cutoff).into_par_iter().map(|n| gram_on(&params, &PartitionBasis::new(n, 2)).rank()).collect()
}

/// The same dimensions from the full Verma module at `h = 0`, whose radical
/// already contains `L(-1)v`.
pub fn simple_vacuum_dims_from_verma(c: &Rational, cutoff: u32) -> Vec<usize> {
    let params = VirasoroParams::new(c.clone(), Rational::zero());
    (0..=cutoff).into_par_iter().map(|n| shapovalov_gram(&params, n).rank()).collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rational::q;

    #[test]
    fn partition_enumeration() {
        assert_eq!(partitions(4, 1), vec![vec![4], vec![3, 1], vec![2, 2], vec![2, 1, 1], vec![1, 1, 1, 1]]);
        assert_eq!(partitions(0, 2), vec![Vec::<u32>::new()]);
        assert_eq!(partitions(5, 2), vec![vec![5], vec![3, 2]]);
    }

    #[test]
    fn gram_examples() {
        let p = VirasoroParams::new(qi(-7), qi(0));
        assert_eq!(shapovalov_gram(&p, 0), RationalMatrix::identity(1));
        assert_eq!(shapovalov_gram(&p, 1), RationalMatrix::zeros(1, 1));
        let g2 = shapovalov_gram(&p, 2);
        assert_eq!(g2.get(0, 0), &q(-7, 2));
        assert_eq!(g2.rank(), 1);
        // generic h at level 2: [[4h + c/2, 6h], [6h, 4h(2h+1)]]
        let h = q(1, 3);
        let g = shapovalov_gram(&VirasoroParams::new(q(1, 2), h.clone()), 2);
        assert_eq!(g.get(0, 0), &(qi(4) * &h + q(1, 4)));
        assert_eq!(g.get(0, 1), &(qi(6) * &h));
        assert_eq!(g.get(1, 1), &(qi(4) * &h * (qi(2) * &h + qi(1))));
    }

    #[test]
    fn gram_is_symmetric() {
        let p = VirasoroParams::new(q(-22, 5), q(-1, 5));
        for n in 0..=6 {
            assert!(shapovalov_gram(&p, n).is_symmetric());
        }
    }

    #[test]
    fn vacuum_dims_at_c_minus_7() {
        assert_eq!(simple_vacuum_dims(&qi(-7), 0), vec![1]);
        let d = simple_vacuum_dims(&qi(-7), 8);
        assert_eq!(&d[..3], &[1, 0, 1]);
        assert_eq!(d, simple_vacuum_dims_from_verma(&qi(-7), 8));
    }

    #[test]
    fn generic_central_charge_has_no_extra_null_vectors() {
        let d = simple_vacuum_dims(&q(1, 3), 6);
        let p: Vec<usize> = (0..=6).map(|n| partitions(n, 1).len()).collect();
        for n in 0..=6usize {
            let below = if n == 0 { 0 } else { p[n - 1] };
            assert_eq!(d[n], p[n] - below);
        }
    }

    #[test]
    fn rank_does_not_depend_on_basis_order() {
        let p = VirasoroParams::new(qi(-7), qi(0));
        for n in 2..=7 {
            let mut basis = PartitionBasis::new(n, 2);
            let r = gram_on(&p, &basis).rank();
            basis.parts.reverse();
            let half = basis.parts.len() / 2;
            basis.parts.rotate_left(half);
            assert_eq!(gram_on(&p, &basis).rank(), r);
        }
    }
}
