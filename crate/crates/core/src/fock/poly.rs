//! Heisenberg polynomials: the `S(h^-)` part of a Fock state.

use std::collections::BTreeMap;
use std::fmt;

use num_traits::{One, Zero};

use crate::lattice::LatticeVector;
use crate::rational::{q, qi, Rational};

/// Basis label of a creation factor.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Direction {
    Gamma,
    Delta,
}

impl Direction {
    pub fn vector(self) -> LatticeVector {
        match self {
            Direction::Gamma => LatticeVector::gamma(),
            Direction::Delta => LatticeVector::delta(),
        }
    }

    /// `<α, b>` for the basis vector `b` of this direction.
    pub fn pair_with(self, alpha: &LatticeVector) -> Rational {
        match self {
            Direction::Gamma => &alpha.g * q(1, 6),
            Direction::Delta => &alpha.d * q(-1, 6),
        }
    }

    pub fn symbol(self) -> char {
        match self {
            Direction::Gamma => 'g',
            Direction::Delta => 'd',
        }
    }
}

/// The creation mode `b(-level)` for a basis direction `b`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct HeisenbergFactor {
    pub dir: Direction,
    pub level: u32,
}

impl HeisenbergFactor {
    pub fn new(dir: Direction, level: u32) -> Self {
        assert!(level >= 1, "creation factors have level >= 1");
        Self { dir, level }
    }

    pub fn gamma(level: u32) -> Self {
        Self::new(Direction::Gamma, level)
    }

    pub fn delta(level: u32) -> Self {
        Self::new(Direction::Delta, level)
    }
}

impl fmt::Display for HeisenbergFactor {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}[-{}]", self.dir.symbol(), self.level)
    }
}

/// A multiset of creation factors, kept sorted (γ before δ, then by level).
#[derive(Clone, Debug, Default, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Monomial(Vec<HeisenbergFactor>);

impl Monomial {
    pub fn one() -> Self {
        Self(Vec::new())
    }

    pub fn from_factors(mut factors: Vec<HeisenbergFactor>) -> Self {
        factors.sort_unstable();
        Self(factors)
    }

    pub fn factors(&self) -> &[HeisenbergFactor] {
        &self.0
    }

    pub fn is_one(&self) -> bool {
        self.0.is_empty()
    }

    /// Sum of levels.
    pub fn degree(&self) -> u32 {
        self.0.iter().map(|f| f.level).sum()
    }

    pub fn max_level(&self) -> u32 {
        self.0.iter().map(|f| f.level).max().unwrap_or(0)
    }

    pub fn times(&self, factor: HeisenbergFactor) -> Self {
        let mut out = self.0.clone();
        let at = out.partition_point(|f| *f <= factor);
        out.insert(at, factor);
        Self(out)
    }

    pub fn mul(&self, other: &Monomial) -> Self {
        let mut out = Vec::with_capacity(self.0.len() + other.0.len());
        let (mut i, mut j) = (0, 0);
        while i < self.0.len() && j < other.0.len() {
            if self.0[i] <= other.0[j] {
                out.push(self.0[i]);
                i += 1;
            } else {
                out.push(other.0[j]);
                j += 1;
            }
        }
        out.extend_from_slice(&self.0[i..]);
        out.extend_from_slice(&other.0[j..]);
        Self(out)
    }

    pub fn multiplicity(&self, factor: HeisenbergFactor) -> usize {
        self.0.iter().filter(|f| **f == factor).count()
    }

    /// Removes one copy of `factor`; `None` if absent.
    pub fn without(&self, factor: HeisenbergFactor) -> Option<Self> {
        let at = self.0.iter().position(|f| *f == factor)?;
        let mut out = self.0.clone();
        out.remove(at);
        Some(Self(out))
    }

    /// Distinct factors with their multiplicities.
    pub fn grouped(&self) -> Vec<(HeisenbergFactor, usize)> {
        let mut out: Vec<(HeisenbergFactor, usize)> = Vec::new();
        for f in &self.0 {
            match out.last_mut() {
                Some((g, k)) if g == f => *k += 1,
                _ => out.push((*f, 1)),
            }
        }
        out
    }
}

impl fmt::Display for Monomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for factor in &self.0 {
            write!(f, "{factor}")?;
        }
        Ok(())
    }
}

/// A finite linear combination of monomials with no zero coefficients.
#[derive(Clone, Debug, Default, PartialEq, Eq, Hash)]
pub struct Poly(BTreeMap<Monomial, Rational>);

impl Poly {
    pub fn zero() -> Self {
        Self(BTreeMap::new())
    }

    pub fn one() -> Self {
        Self::monomial(Monomial::one(), Rational::one())
    }

    pub fn monomial(m: Monomial, c: Rational) -> Self {
        let mut p = Self::zero();
        p.add_term(m, c);
        p
    }

    /// The linear form `α(-level) = α_γ γ(-level) + α_δ δ(-level)`.
    pub fn linear(alpha: &LatticeVector, level: u32) -> Self {
        let mut p = Self::zero();
        p.add_term(Monomial::one().times(HeisenbergFactor::gamma(level)), alpha.g.clone());
        p.add_term(Monomial::one().times(HeisenbergFactor::delta(level)), alpha.d.clone());
        p
    }

    pub fn is_zero(&self) -> bool {
        self.0.is_empty()
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn iter(&self) -> impl Iterator<Item = (&Monomial, &Rational)> {
        self.0.iter()
    }

    pub fn coefficient(&self, m: &Monomial) -> Rational {
        self.0.get(m).cloned().unwrap_or_else(Rational::zero)
    }

    pub fn add_term(&mut self, m: Monomial, c: Rational) {
        if c.is_zero() {
            return;
        }
        match self.0.entry(m) {
            std::collections::btree_map::Entry::Vacant(e) => {
                e.insert(c);
            }
            std::collections::btree_map::Entry::Occupied(mut e) => {
                *e.get_mut() += c;
                if e.get().is_zero() {
                    e.remove();
                }
            }
        }
    }

    pub fn add_assign_scaled(&mut self, other: &Poly, c: &Rational) {
        if c.is_zero() {
            return;
        }
        for (m, v) in &other.0 {
            self.add_term(m.clone(), v * c);
        }
    }

    pub fn add_assign(&mut self, other: &Poly) {
        for (m, v) in &other.0 {
            self.add_term(m.clone(), v.clone());
        }
    }

    pub fn scale(&self, c: &Rational) -> Poly {
        if c.is_zero() {
            return Poly::zero();
        }
        Poly(self.0.iter().map(|(m, v)| (m.clone(), v * c)).collect())
    }

    pub fn mul(&self, other: &Poly) -> Poly {
        let mut out = Poly::zero();
        for (m1, c1) in &self.0 {
            for (m2, c2) in &other.0 {
                out.add_term(m1.mul(m2), c1 * c2);
            }
        }
        out
    }

    /// Multiplies every monomial by `c · factor`.
    pub fn mul_factor(&self, factor: HeisenbergFactor, c: &Rational) -> Poly {
        if c.is_zero() {
            return Poly::zero();
        }
        Poly(self.0.iter().map(|(m, v)| (m.times(factor), v * c)).collect())
    }

    /// Multiplication by the creation operator `α(-level)`.
    pub fn mul_creation(&self, alpha: &LatticeVector, level: u32) -> Poly {
        let mut out = self.mul_factor(HeisenbergFactor::gamma(level), &alpha.g);
        out.add_assign(&self.mul_factor(HeisenbergFactor::delta(level), &alpha.d));
        out
    }

    /// The annihilation operator `α(n)`, `n >= 1`, acting as the derivation
    /// determined by `[α(n), b(-m)] = n<α,b> δ_{n,m}`.
    pub fn annihilate(&self, alpha: &LatticeVector, n: u32) -> Poly {
        let weights = [
            (Direction::Gamma, Direction::Gamma.pair_with(alpha) * qi(n as i64)),
            (Direction::Delta, Direction::Delta.pair_with(alpha) * qi(n as i64)),
        ];
        let mut out = Poly::zero();
        for (m, c) in &self.0 {
            for (dir, w) in &weights {
                if w.is_zero() {
                    continue;
                }
                let factor = HeisenbergFactor::new(*dir, n);
                let k = m.multiplicity(factor);
                if k == 0 {
                    continue;
                }
                let reduced = m.without(factor).expect("factor present");
                out.add_term(reduced, c * w * qi(k as i64));
            }
        }
        out
    }

    /// Maximum degree over the monomials (0 for the zero polynomial).
    pub fn degree(&self) -> u32 {
        self.0.keys().map(Monomial::degree).max().unwrap_or(0)
    }

    pub fn max_level(&self) -> u32 {
        self.0.keys().map(Monomial::max_level).max().unwrap_or(0)
    }

    /// Splits into homogeneous components by degree.
    pub fn by_degree(&self) -> BTreeMap<u32, Poly> {
        let mut out: BTreeMap<u32, Poly> = BTreeMap::new();
        for (m, c) in &self.0 {
            out.entry(m.degree()).or_default().add_term(m.clone(), c.clone());
        }
        out
    }
}

impl FromIterator<(Monomial, Rational)> for Poly {
    fn from_iter<I: IntoIterator<Item = (Monomial, Rational)>>(iter: I) -> Self {
        let mut p = Poly::zero();
        for (m, c) in iter {
            p.add_term(m, c);
        }
        p
    }
}
