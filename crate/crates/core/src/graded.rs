//! Subspaces of `V_L~` graded by (L(0)-weight, charge).

use std::collections::BTreeMap;

use crate::error::{Error, Result};
use crate::fock::{FockElement, Monomial};
use crate::lattice::LatticeVector;
use crate::linalg::{member_of_span, SparseEchelon};
use crate::rational::{fmt_rational, Rational};

/// `(weight, charge)`.
pub type Grade = (Rational, Rational);

/// Coordinate of a state in the monomial basis.
pub type BasisKey = (LatticeVector, Monomial);

pub type SparseVector = BTreeMap<BasisKey, Rational>;

pub fn to_sparse(x: &FockElement) -> SparseVector {
    x.terms().map(|(m, mu, c)| ((mu.clone(), m.clone()), c.clone())).collect()
}

pub fn from_sparse(v: &SparseVector) -> FockElement {
    let mut out = FockElement::zero();
    for ((mu, m), c) in v {
        out.add_term(m.clone(), mu.clone(), c.clone());
    }
    out
}

#[derive(Clone, Debug, Default)]
struct Block {
    basis: Vec<FockElement>,
    echelon: SparseEchelon<BasisKey>,
}

/// A graded subspace, stored blockwise with an echelon basis per grade.
///
/// `basis` keeps the vectors in insertion order; the echelon form is used
/// for membership and independence tests.
#[derive(Clone, Debug, Default)]
pub struct GradedSubspace {
    pub label: String,
    blocks: BTreeMap<Grade, Block>,
}

impl GradedSubspace {
    pub fn new(label: impl Into<String>) -> Self {
        Self { label: label.into(), blocks: BTreeMap::new() }
    }

    /// Adds a homogeneous vector; returns whether it enlarged the space.
    pub fn insert(&mut self, x: FockElement) -> Result<bool> {
        let comps = x.graded_components();
        if comps.len() > 1 {
            let mut keys = comps.keys();
            let a = keys.next().unwrap();
            let b = keys.next().unwrap();
            return Err(Error::NonHomogeneous(
                format!("({}, {})", fmt_rational(&a.0), fmt_rational(&a.1)),
                format!("({}, {})", fmt_rational(&b.0), fmt_rational(&b.1)),
            ));
        }
        let Some((grade, _)) = comps.into_iter().next() else {
            return Ok(false);
        };
        Ok(self.insert_graded(grade, x))
    }

    pub(crate) fn insert_graded(&mut self, grade: Grade, x: FockElement) -> bool {
        let block = self.blocks.entry(grade).or_default();
        if block.echelon.insert(to_sparse(&x)) {
            block.basis.push(x);
            true
        } else {
            false
        }
    }

    /// Registers a grade with dimension zero so it shows up in tables.
    pub fn touch(&mut self, grade: Grade) {
        self.blocks.entry(grade).or_default();
    }

    pub fn dim(&self, weight: &Rational, charge: &Rational) -> usize {
        self.blocks.get(&(weight.clone(), charge.clone())).map_or(0, |b| b.basis.len())
    }

    /// Total dimension at a weight, summed over charges.
    pub fn dim_at_weight(&self, weight: &Rational) -> usize {
        self.blocks.iter().filter(|((w, _), _)| w == weight).map(|(_, b)| b.basis.len()).sum()
    }

    pub fn total_dim(&self) -> usize {
        self.blocks.values().map(|b| b.basis.len()).sum()
    }

    pub fn dims(&self) -> Vec<(Grade, usize)> {
        self.blocks.iter().map(|(g, b)| (g.clone(), b.basis.len())).collect()
    }

    pub fn grades(&self) -> impl Iterator<Item = &Grade> {
        self.blocks.keys()
    }

    pub fn basis(&self, weight: &Rational, charge: &Rational) -> &[FockElement] {
        self.blocks.get(&(weight.clone(), charge.clone())).map_or(&[], |b| &b.basis)
    }

    /// Whether every graded component of `x` lies in the subspace.
    pub fn contains(&self, x: &FockElement) -> bool {
        x.graded_components().into_iter().all(|(g, comp)| match self.blocks.get(&g) {
            Some(b) => b.echelon.contains(to_sparse(&comp)),
            None => false,
        })
    }

    /// Coefficients of `x` in the stored basis of its block, `None` if `x`
    /// is outside. `x` must be homogeneous.
    pub fn coordinates(&self, x: &FockElement) -> Result<Option<Vec<Rational>>> {
        let comps = x.graded_components();
        if comps.len() > 1 {
            return Err(Error::NonHomogeneous("several grades".into(), format!("{}", comps.len())));
        }
        let Some((grade, _)) = comps.into_iter().next() else {
            return Ok(Some(Vec::new()));
        };
        let Some(block) = self.blocks.get(&grade) else {
            return Ok(None);
        };
        let mut keys: BTreeMap<BasisKey, usize> = BTreeMap::new();
        for b in block.basis.iter().chain(std::iter::once(x)) {
            for (m, mu, _) in b.terms() {
                let n = keys.len();
                keys.entry((mu.clone(), m.clone())).or_insert(n);
            }
        }
        let dense = |y: &FockElement| {
            let mut v = vec![Rational::from_integer(0.into()); keys.len()];
            for (m, mu, c) in y.terms() {
                v[keys[&(mu.clone(), m.clone())]] = c.clone();
            }
            v
        };
        let basis: Vec<Vec<Rational>> = block.basis.iter().map(dense).collect();
        member_of_span(&dense(x), &basis)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fock::parse_element;
    use crate::rational::qi;

    #[test]
    fn insert_and_membership() {
        let mut s = GradedSubspace::new("test");
        let a = parse_element("1*g[-1]:E[0,0]").unwrap();
        let b = parse_element("1*d[-1]:E[0,0]").unwrap();
        assert!(s.insert(a.clone()).unwrap());
        assert!(!s.insert(a.scale(&qi(3))).unwrap());
        assert!(s.insert(&a + &b).unwrap());
        assert_eq!(s.dim(&qi(1), &qi(0)), 2);
        assert!(s.contains(&b));
        assert_eq!(s.coordinates(&b).unwrap(), Some(vec![qi(-1), qi(1)]));
        assert!(!s.contains(&parse_element("1*g[-2]:E[0,0]").unwrap()));
        let mixed = parse_element("1*g[-1]:E[0,0] + 1*g[-2]:E[0,0]").unwrap();
        assert!(s.insert(mixed).is_err());
    }

    #[test]
    fn sparse_roundtrip() {
        let x = parse_element("-4*g[-1]g[-1]:E[-3,3] + 2/3*g[-2]:E[-3,3] + 1*:E[0,0]").unwrap();
        assert_eq!(from_sparse(&to_sparse(&x)), x);
    }
}
