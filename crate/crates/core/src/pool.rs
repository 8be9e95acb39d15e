//! Seeded random states for property checks.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::fock::{Direction, FockElement, Poly};
use crate::lattice::LatticeVector;
use crate::rational::{q, Rational};
use crate::screening::monomials;

/// Shape of the random states.
#[derive(Clone, Debug)]
pub struct PoolSpec {
    /// Sectors `aγ + bδ` with `|a|, |b| <= sector_bound` and `a ≡ b (mod 2)`.
    pub sector_bound: i64,
    pub max_degree: u32,
    pub max_terms: usize,
}

impl Default for PoolSpec {
    fn default() -> Self {
        Self { sector_bound: 4, max_degree: 2, max_terms: 3 }
    }
}

fn random_coefficient(rng: &mut ChaCha8Rng) -> Rational {
    loop {
        let n: i64 = rng.random_range(-5..=5);
        if n != 0 {
            return q(n, rng.random_range(1..=3));
        }
    }
}

/// One homogeneous state of `V_L`: a fixed sector, a fixed degree.
pub fn random_state(rng: &mut ChaCha8Rng, shape: &PoolSpec) -> FockElement {
    let b = shape.sector_bound;
    let (a, d) = loop {
        let a = rng.random_range(-b..=b);
        let d = rng.random_range(-b..=b);
        if (a - d).rem_euclid(2) == 0 {
            break (a, d);
        }
    };
    let deg = rng.random_range(0..=shape.max_degree);
    let basis = monomials(deg, &[Direction::Gamma, Direction::Delta]);
    let terms = rng.random_range(1..=shape.max_terms.min(basis.len()));
    let mut poly = Poly::zero();
    for _ in 0..terms {
        let m = basis[rng.random_range(0..basis.len())].clone();
        poly.add_term(m, random_coefficient(rng));
    }
    if poly.is_zero() {
        poly = Poly::one();
    }
    FockElement::from_poly(LatticeVector::ints(a, d), poly)
}

/// `size` states from the seed; the same seed always gives the same pool.
pub fn random_pool(seed: u64, size: usize, shape: &PoolSpec) -> Vec<FockElement> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    (0..size).map(|_| random_state(&mut rng, shape)).collect()
}
