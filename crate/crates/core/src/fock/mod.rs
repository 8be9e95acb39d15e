//! States of `V_L~ = M(1) ⊗ C[L~]`.
//!
//! A [`FockElement`] is a finite combination of terms `P ⊗ e^μ`, where `P` is
//! a Heisenberg monomial and `μ` a sector in the rational span of the
//! lattice. Terms are grouped by sector; zero coefficients are never stored,
//! so structural equality is equality of states.

mod grammar;
mod poly;

use std::collections::BTreeMap;
use std::fmt;
use std::ops::{Add, Neg, Sub};

use num_traits::{One, Zero};

pub use grammar::parse_element;
pub use poly::{Direction, HeisenbergFactor, Monomial, Poly};

use crate::error::{Error, Result};
use crate::lattice::{norm, pair, LatticeVector};
use crate::rational::{fmt_rational, qi, Rational};

/// L(0)-weight of `P ⊗ e^μ`: `deg P + <μ,μ>/2 + <2γ, μ>`.
///
/// The linear term comes from the `-2γ(-2)` part of the conformal vector.
pub fn sector_weight(mu: &LatticeVector) -> Rational {
    norm(mu) / qi(2) + pair(&LatticeVector::ints(2, 0), mu)
}

/// `h(0)` eigenvalue of a sector, `<4δ, μ>`.
pub fn sector_charge(mu: &LatticeVector) -> Rational {
    pair(&LatticeVector::ints(0, 4), mu)
}

pub fn l0_weight(monomial: &Monomial, mu: &LatticeVector) -> Rational {
    qi(monomial.degree() as i64) + sector_weight(mu)
}

pub fn charge(mu: &LatticeVector) -> Rational {
    sector_charge(mu)
}

#[derive(Clone, Debug, Default, PartialEq, Eq, Hash)]
pub struct FockElement {
    sectors: BTreeMap<LatticeVector, Poly>,
}

impl FockElement {
    pub fn zero() -> Self {
        Self::default()
    }

    /// The vacuum `1 ⊗ e^0`.
    pub fn vacuum() -> Self {
        Self::exp(LatticeVector::zero())
    }

    /// The group-algebra element `e^μ`.
    pub fn exp(mu: LatticeVector) -> Self {
        Self::from_poly(mu, Poly::one())
    }

    pub fn from_poly(mu: LatticeVector, p: Poly) -> Self {
        let mut out = Self::zero();
        out.add_poly(mu, &p);
        out
    }

    pub fn term(factors: Vec<HeisenbergFactor>, mu: LatticeVector, c: Rational) -> Self {
        Self::from_poly(mu, Poly::monomial(Monomial::from_factors(factors), c))
    }

    /// Builds an element from unsorted raw term lists, merging like terms.
    pub fn from_raw_terms(terms: Vec<(Vec<HeisenbergFactor>, LatticeVector, Rational)>) -> Self {
        let mut out = Self::zero();
        for (factors, mu, c) in terms {
            out.add_term(Monomial::from_factors(factors), mu, c);
        }
        out
    }

    /// Identity on canonical values; kept as an explicit operation so callers
    /// can state where canonical form is relied upon.
    pub fn canonicalize(&self) -> Self {
        let mut out = Self::zero();
        for (m, mu, c) in self.terms() {
            out.add_term(m.clone(), mu.clone(), c.clone());
        }
        out
    }

    pub fn is_zero(&self) -> bool {
        self.sectors.is_empty()
    }

    pub fn num_terms(&self) -> usize {
        self.sectors.values().map(Poly::len).sum()
    }

    pub fn sectors(&self) -> impl Iterator<Item = (&LatticeVector, &Poly)> {
        self.sectors.iter()
    }

    pub fn sector(&self, mu: &LatticeVector) -> Option<&Poly> {
        self.sectors.get(mu)
    }

    pub fn terms(&self) -> impl Iterator<Item = (&Monomial, &LatticeVector, &Rational)> {
        self.sectors.iter().flat_map(|(mu, p)| p.iter().map(move |(m, c)| (m, mu, c)))
    }

    pub fn coefficient(&self, m: &Monomial, mu: &LatticeVector) -> Rational {
        self.sectors.get(mu).map(|p| p.coefficient(m)).unwrap_or_else(Rational::zero)
    }

    pub fn add_term(&mut self, m: Monomial, mu: LatticeVector, c: Rational) {
        if c.is_zero() {
            return;
        }
        let entry = self.sectors.entry(mu.clone()).or_default();
        entry.add_term(m, c);
        if entry.is_zero() {
            self.sectors.remove(&mu);
        }
    }

    pub fn add_poly(&mut self, mu: LatticeVector, p: &Poly) {
        self.add_poly_scaled(mu, p, &Rational::one());
    }

    pub fn add_poly_scaled(&mut self, mu: LatticeVector, p: &Poly, c: &Rational) {
        if p.is_zero() || c.is_zero() {
            return;
        }
        let entry = self.sectors.entry(mu.clone()).or_default();
        entry.add_assign_scaled(p, c);
        if entry.is_zero() {
            self.sectors.remove(&mu);
        }
    }

    pub fn add_assign_scaled(&mut self, other: &FockElement, c: &Rational) {
        for (mu, p) in &other.sectors {
            self.add_poly_scaled(mu.clone(), p, c);
        }
    }

    pub fn add_assign(&mut self, other: &FockElement) {
        self.add_assign_scaled(other, &Rational::one());
    }

    pub fn scale(&self, c: &Rational) -> Self {
        if c.is_zero() {
            return Self::zero();
        }
        Self { sectors: self.sectors.iter().map(|(mu, p)| (mu.clone(), p.scale(c))).collect() }
    }

    /// Multiplies the Heisenberg part of every term by `p` (a creation
    /// operator polynomial).
    pub fn mul_poly(&self, p: &Poly) -> Self {
        let mut out = Self::zero();
        for (mu, q) in &self.sectors {
            out.add_poly(mu.clone(), &q.mul(p));
        }
        out
    }

    /// Maximum polynomial degree over all terms.
    pub fn degree(&self) -> u32 {
        self.sectors.values().map(Poly::degree).max().unwrap_or(0)
    }

    /// The common L(0)-weight of all terms, `None` for the zero element.
    pub fn homogeneous_weight(&self) -> Result<Option<Rational>> {
        let mut found: Option<Rational> = None;
        for (m, mu, _) in self.terms() {
            let w = l0_weight(m, mu);
            match &found {
                None => found = Some(w),
                Some(prev) if *prev != w => return Err(Error::NonHomogeneous(fmt_rational(prev), fmt_rational(&w))),
                _ => {}
            }
        }
        Ok(found)
    }

    /// The common charge of all terms, if there is one.
    pub fn homogeneous_charge(&self) -> Option<Rational> {
        let mut charges = self.sectors.keys().map(sector_charge);
        let first = charges.next()?;
        charges.all(|c| c == first).then_some(first)
    }

    /// Splits into components of fixed (weight, charge).
    pub fn graded_components(&self) -> BTreeMap<(Rational, Rational), FockElement> {
        let mut out: BTreeMap<(Rational, Rational), FockElement> = BTreeMap::new();
        for (m, mu, c) in self.terms() {
            out.entry((l0_weight(m, mu), sector_charge(mu))).or_default().add_term(m.clone(), mu.clone(), c.clone());
        }
        out
    }

    /// The Heisenberg mode `α(n)`: creation for `n < 0`, multiplication by
    /// `<α, μ>` for `n = 0`, contraction for `n > 0`.
    pub fn heisenberg_mode(&self, alpha: &LatticeVector, n: i64) -> Self {
        let mut out = Self::zero();
        for (mu, p) in &self.sectors {
            let image = match n.cmp(&0) {
                std::cmp::Ordering::Less => p.mul_creation(alpha, (-n) as u32),
                std::cmp::Ordering::Equal => p.scale(&pair(alpha, mu)),
                std::cmp::Ordering::Greater => p.annihilate(alpha, n as u32),
            };
            out.add_poly(mu.clone(), &image);
        }
        out
    }
}

impl Add for &FockElement {
    type Output = FockElement;
    fn add(self, rhs: &FockElement) -> FockElement {
        let mut out = self.clone();
        out.add_assign(rhs);
        out
    }
}

impl Add for FockElement {
    type Output = FockElement;
    fn add(mut self, rhs: FockElement) -> FockElement {
        self.add_assign(&rhs);
        self
    }
}

impl Sub for &FockElement {
    type Output = FockElement;
    fn sub(self, rhs: &FockElement) -> FockElement {
        let mut out = self.clone();
        out.add_assign_scaled(rhs, &-Rational::one());
        out
    }
}

impl Sub for FockElement {
    type Output = FockElement;
    fn sub(self, rhs: FockElement) -> FockElement {
        &self - &rhs
    }
}

impl Neg for &FockElement {
    type Output = FockElement;
    fn neg(self) -> FockElement {
        self.scale(&-Rational::one())
    }
}

impl Neg for FockElement {
    type Output = FockElement;
    fn neg(self) -> FockElement {
        -&self
    }
}

impl fmt::Display for FockElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&grammar::serialize(self))
    }
}
