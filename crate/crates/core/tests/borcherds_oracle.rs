//! Modes of dressed exponentials, recomputed by the iterate formula
//! `(a_m b)_n = Σ_j (-1)^j C(m,j) (a_{m-j} b_{n+j} - (-1)^m b_{m+n-j} a_j)`
//! with `a = α(-1)1`, peeling one Heisenberg factor at a time.

use proptest::prelude::*;
use voalab_core::fock::{Direction, HeisenbergFactor};
use voalab_core::lattice::pair;
use voalab_core::rational::{binomial, qi};
use voalab_core::vertex::{exp_mode, general_mode, VertexEngine};
use voalab_core::{FockElement, LatticeVector, Rational};

fn oracle(factors: &[HeisenbergFactor], beta: &LatticeVector, s: &Rational, v: &FockElement) -> FockElement {
    let Some((first, rest)) = factors.split_first() else {
        return exp_mode(beta, s, v);
    };
    let u_rest = FockElement::term(rest.to_vec(), beta.clone(), qi(1));
    let alpha = first.dir.vector();
    let m = -(first.level as i64);
    let sign_m = if m % 2 == 0 { qi(1) } else { qi(-1) };
    let mut out = FockElement::zero();
    // first sum: b_{n+j} v vanishes beyond the truncation bound
    if let Some(bound) = VertexEngine::standard().mode_upper_bound(&u_rest, v) {
        let mut j = 0i64;
        while s + qi(j) <= bound {
            let c = binomial(m, j as u64) * if j % 2 == 0 { qi(1) } else { qi(-1) };
            let inner = oracle(rest, beta, &(s + qi(j)), v);
            out.add_assign_scaled(&inner.heisenberg_mode(&alpha, m - j), &c);
            j += 1;
        }
    }
    // second sum: a_j v vanishes above the top creation level of v
    let top = v.terms().map(|(mon, _, _)| mon.factors().iter().map(|f| f.level).max().unwrap_or(0)).max().unwrap_or(0);
    for j in 0..=top as i64 {
        let c = binomial(m, j as u64) * if j % 2 == 0 { qi(1) } else { qi(-1) } * &sign_m;
        let aj = v.heisenberg_mode(&alpha, j);
        if aj.is_zero() {
            continue;
        }
        out.add_assign_scaled(&oracle(rest, beta, &(qi(m) + s - qi(j)), &aj), &(-c));
    }
    out
}

fn factor() -> impl Strategy<Value = HeisenbergFactor> {
    (prop::bool::ANY, 1u32..=3)
        .prop_map(|(g, l)| HeisenbergFactor::new(if g { Direction::Gamma } else { Direction::Delta }, l))
}

fn sector() -> impl Strategy<Value = LatticeVector> {
    (-3i64..=3, -3i64..=3).prop_filter_map("L parity", |(a, b)| ((a - b) % 2 == 0).then(|| LatticeVector::ints(a, b)))
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn general_mode_matches_iterate_formula(
        u_factors in prop::collection::vec(factor(), 0..=2),
        beta in sector(),
        v_factors in prop::collection::vec(factor(), 0..=2),
        mu in sector(),
        t in -4i64..=3,
    ) {
        let u = FockElement::term(u_factors.clone(), beta.clone(), qi(1));
        let v = FockElement::term(v_factors, mu.clone(), qi(1));
        let s = qi(t) - pair(&beta, &mu);
        let fast = general_mode(&u, &s, &v).unwrap();
        let slow = oracle(&u_factors, &beta, &s, &v);
        prop_assert_eq!(fast, slow);
    }
}

#[test]
fn iterate_formula_reproduces_known_values() {
    // h = 4d(-1)1 acting on e^{3(g-d)} with h(0) = 2
    let e = FockElement::exp(LatticeVector::ints(3, -3));
    let d1 = HeisenbergFactor::new(Direction::Delta, 1);
    let h0 = oracle(&[d1], &LatticeVector::zero(), &qi(0), &e).scale(&qi(4));
    assert_eq!(h0, e.scale(&qi(2)));
}
