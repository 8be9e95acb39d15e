//! Screening operators `Q = e^{-6γ}_0`, `Q̃ = e^{2γ}_0` and the graded
//! kernels they cut out.

use std::collections::BTreeMap;

use num_traits::Zero;
use rayon::prelude::*;

use crate::affine::{graded_span, Generator, SpanExhausted, SpanOptions};
use crate::error::Result;
use crate::fock::{l0_weight, sector_charge, Direction, FockElement, HeisenbergFactor, Monomial, Poly};
use crate::graded::{to_sparse, BasisKey, Grade, GradedSubspace};
use crate::lattice::LatticeVector;
use crate::linalg::{null_space, RationalMatrix};
use crate::rational::{fmt_rational, qi, Rational};
use crate::report::{Check, DimEntry, GradedReport};
use crate::vertex::{exp_mode, mode};

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum ScreeningOp {
    /// `e^{-6γ}_0`
    Q,
    /// `e^{2γ}_0`
    QTilde,
}

impl ScreeningOp {
    pub fn exponent(self) -> LatticeVector {
        match self {
            ScreeningOp::Q => LatticeVector::ints(-6, 0),
            ScreeningOp::QTilde => LatticeVector::ints(2, 0),
        }
    }

    pub fn name(self) -> &'static str {
        match self {
            ScreeningOp::Q => "Q",
            ScreeningOp::QTilde => "Qt",
        }
    }
}

pub fn apply_screening(op: ScreeningOp, v: &FockElement) -> FockElement {
    exp_mode(&op.exponent(), &Rational::zero(), v)
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Ambient {
    /// `M(1)`: both bosons, sector 0.
    M1,
    /// `M_γ(1)`
    MGamma,
    /// `M_δ(1)`
    MDelta,
    /// `V_{Zγ}`: γ-boson on the sectors `jγ`.
    VZGamma,
}

impl Ambient {
    fn directions(self) -> &'static [Direction] {
        match self {
            Ambient::M1 => &[Direction::Gamma, Direction::Delta],
            Ambient::MGamma | Ambient::VZGamma => &[Direction::Gamma],
            Ambient::MDelta => &[Direction::Delta],
        }
    }

    pub fn name(self) -> &'static str {
        match self {
            Ambient::M1 => "M(1)",
            Ambient::MGamma => "M_g(1)",
            Ambient::MDelta => "M_d(1)",
            Ambient::VZGamma => "V_Zg",
        }
    }

    /// Sectors with some state of weight `<= cutoff`.
    fn sectors(self, cutoff: i64) -> Vec<LatticeVector> {
        match self {
            Ambient::VZGamma => {
                // weight of e^{jγ} is ((j+2)^2 - 4)/12
                let bound = ((12 * cutoff + 4) as f64).sqrt().floor() as i64;
                (-bound - 2..=bound - 2).map(|j| LatticeVector::ints(j, 0)).collect()
            }
            _ => vec![LatticeVector::zero()],
        }
    }

    /// Monomial basis grouped by grade, up to `cutoff`.
    pub fn basis(self, cutoff: i64) -> BTreeMap<Grade, Vec<FockElement>> {
        let mut out: BTreeMap<Grade, Vec<FockElement>> = BTreeMap::new();
        for mu in self.sectors(cutoff) {
            let base = l0_weight(&Monomial::one(), &mu);
            if base > qi(cutoff) {
                continue;
            }
            let room = (qi(cutoff) - &base).floor().to_integer();
            let room: u32 = room.try_into().unwrap_or(0);
            for deg in 0..=room {
                for m in monomials(deg, self.directions()) {
                    let grade = (&base + qi(deg as i64), sector_charge(&mu));
                    out.entry(grade)
                        .or_default()
                        .push(FockElement::from_poly(mu.clone(), Poly::monomial(m, Rational::from_integer(1.into()))));
                }
            }
        }
        out
    }
}

/// All monomials of total degree `deg` in the given directions, in
/// canonical order.
pub fn monomials(deg: u32, dirs: &[Direction]) -> Vec<Monomial> {
    let mut factors: Vec<HeisenbergFactor> = Vec::new();
    for level in 1..=deg {
        for &d in dirs {
            factors.push(HeisenbergFactor::new(d, level));
        }
    }
    let mut out = Vec::new();
    fn go(
        rest: u32,
        from: usize,
        factors: &[HeisenbergFactor],
        cur: &mut Vec<HeisenbergFactor>,
        out: &mut Vec<Monomial>,
    ) {
        if rest == 0 {
            out.push(Monomial::from_factors(cur.clone()));
            return;
        }
        for i in from..factors.len() {
            let f = factors[i];
            if f.level > rest {
                break;
            }
            cur.push(f);
            go(rest - f.level, i, factors, cur, out);
            cur.pop();
        }
    }
    go(deg, 0, &factors, &mut Vec::new(), &mut out);
    out.sort();
    out
}

/// Number of partitions of `n`.
pub fn partition_count(n: u32) -> usize {
    monomials(n, &[Direction::Delta]).len()
}

/// Common kernel of several linear maps on one block. `images[j][i]` is the
/// image of `sources[j]` under the `i`-th map.
pub fn block_kernel(sources: &[FockElement], images: &[Vec<FockElement>]) -> Vec<FockElement> {
    let mut keys: BTreeMap<(usize, BasisKey), usize> = BTreeMap::new();
    for per_map in images {
        for (i, img) in per_map.iter().enumerate() {
            for (k, _) in to_sparse(img) {
                let n = keys.len();
                keys.entry((i, k)).or_insert(n);
            }
        }
    }
    let mut m = RationalMatrix::zeros(keys.len(), sources.len());
    for (j, per_map) in images.iter().enumerate() {
        for (i, img) in per_map.iter().enumerate() {
            for (k, c) in to_sparse(img) {
                m.set(keys[&(i, k)], j, c);
            }
        }
    }
    null_space(&m)
        .into_iter()
        .map(|x| {
            let mut v = FockElement::zero();
            for (src, c) in sources.iter().zip(&x) {
                v.add_assign_scaled(src, c);
            }
            v
        })
        .collect()
}

/// Kernel of `op` on `ambient`, per grade up to `weight_cutoff`.
pub fn kernel_graded(op: ScreeningOp, ambient: Ambient, weight_cutoff: i64) -> GradedSubspace {
    let blocks: Vec<(Grade, Vec<FockElement>)> = ambient.basis(weight_cutoff).into_iter().collect();
    let kernels: Vec<(Grade, Vec<FockElement>)> = blocks
        .into_par_iter()
        .map(|(grade, sources)| {
            let images: Vec<Vec<FockElement>> = sources.iter().map(|s| vec![apply_screening(op, s)]).collect();
            (grade, block_kernel(&sources, &images))
        })
        .collect();
    let mut out = GradedSubspace::new(format!("Ker_{} {}", ambient.name(), op.name()));
    for (grade, vecs) in kernels {
        out.touch(grade.clone());
        for v in vecs {
            out.insert_graded(grade.clone(), v);
        }
    }
    out
}

/// `[Q, Q̃] v = 0` on every `M(1)` basis state up to `weight_cutoff`, plus the
/// nilpotency and generator checks.
pub fn commute_q_qtilde(weight_cutoff: i64) -> GradedReport {
    let mut report = GradedReport::new("screening");
    let states: Vec<FockElement> = Ambient::M1.basis(weight_cutoff).into_values().flatten().collect();
    let failures: Vec<String> = states
        .par_iter()
        .filter_map(|v| {
            let a = apply_screening(ScreeningOp::Q, &apply_screening(ScreeningOp::QTilde, v));
            let b = apply_screening(ScreeningOp::QTilde, &apply_screening(ScreeningOp::Q, v));
            let d = &a - &b;
            (!d.is_zero()).then(|| format!("{v} -> {d}"))
        })
        .collect();
    report.push(Check::with_witness(
        format!("[Q,Qt]v = 0 on {} M(1) states of weight <= {weight_cutoff}", states.len()),
        failures.is_empty(),
        failures.first().cloned().unwrap_or_else(|| "0".into()),
    ));
    for (label, mu) in
        [("Q^2 e^{3(g+d)} = 0", LatticeVector::ints(3, 3)), ("Q^2 e^{3(g-d)} = 0", LatticeVector::ints(3, -3))]
    {
        let x = FockElement::exp(mu);
        let once = apply_screening(ScreeningOp::Q, &x);
        let twice = apply_screening(ScreeningOp::Q, &once);
        report.push(Check::with_witness(label, twice.is_zero(), twice.to_string()));
    }
    let gens = crate::affine::AffineGenerators::standard();
    for g in Generator::ALL {
        let img = apply_screening(ScreeningOp::QTilde, gens.get(g));
        report.push(Check::with_witness(format!("Qt {} = 0", g.symbol()), img.is_zero(), img.to_string()));
    }
    report
}

/// `ω^γ = 3γ(-1)² - 2γ(-2)`, central charge -7.
pub fn omega_gamma() -> FockElement {
    crate::fock::parse_element("3*g[-1]g[-1]:E[0,0] + -2*g[-2]:E[0,0]").unwrap()
}

/// `H = Q e^{6γ}`.
pub fn w_generator() -> FockElement {
    apply_screening(ScreeningOp::Q, &FockElement::exp(LatticeVector::ints(6, 0)))
}

/// Primarity of `H` and the chain placing it in the charge-0 vacuum block.
/// An exhausted span budget ends the report with a failing `resource` check.
pub fn w_generator_checks(max_basis: usize) -> Result<GradedReport> {
    let mut report = GradedReport::new("w25");
    let h = w_generator();
    let og = omega_gamma();
    let l0 = mode(&og, 1, &h);
    let d = &l0 - &h.scale(&qi(5));
    report.push(Check::with_witness("Lg(0)H = 5H", d.is_zero(), d.to_string()));
    for n in 1..=5 {
        let x = mode(&og, n + 1, &h);
        report.push(Check::with_witness(format!("Lg({n})H = 0"), x.is_zero(), x.to_string()));
    }
    let qt = apply_screening(ScreeningOp::QTilde, &h);
    report.push(Check::with_witness("Qt H = 0", qt.is_zero(), qt.to_string()));

    let gens = crate::affine::AffineGenerators::standard();
    let v = mode(&gens.e, -4, &gens.f).scale(&qi(-9));
    let q_e = apply_screening(ScreeningOp::Q, &FockElement::exp(LatticeVector::ints(3, 3)));
    let rhs = exp_mode(&LatticeVector::ints(3, -3), &qi(-4), &q_e).scale(&qi(2));
    let d = &v - &rhs;
    report.push(Check::with_witness("-9 e(-4)f = 2 e^{3g-3d}_{-4} Q e^{3(g+d)}", d.is_zero(), d.to_string()));
    let chain = apply_screening(ScreeningOp::Q, &(&v - &h));
    report.push(Check::with_witness("Q(v - Q e^{6g}) = 0", chain.is_zero(), chain.to_string()));

    let opts = SpanOptions { max_basis, ..SpanOptions::vacuum_charge(qi(0)) };
    let span = match graded_span(&FockElement::vacuum(), &qi(5), &opts) {
        Ok(span) => span,
        Err(e) => {
            report.push(Check::with_witness("resource", false, e.message));
            return Ok(report);
        }
    };
    let coords = span.coordinates(&h)?;
    report.push(Check::with_witness(
        "H lies in the weight-5 charge-0 block of U(g)1",
        coords.is_some(),
        match &coords {
            Some(c) => format!("{} basis coefficients", c.iter().filter(|x| !x.is_zero()).count()),
            None => "not in span".into(),
        },
    ));
    report.dims.push(DimEntry::new(Some("span"), &qi(5), &qi(0), span.dim(&qi(5), &qi(0))));
    Ok(report)
}

/// Dimension comparison for the Heisenberg coset of the vacuum module.
#[derive(Clone, Debug)]
pub struct CosetTables {
    pub span: Vec<usize>,
    pub ker_m1: Vec<usize>,
    pub ker_mgamma: Vec<usize>,
    pub product: Vec<usize>,
    pub coset: Vec<usize>,
}

fn coset_tables(
    weight_cutoff: i64,
    max_basis: usize,
) -> std::result::Result<(CosetTables, GradedSubspace), SpanExhausted> {
    let opts = SpanOptions { max_basis, ..SpanOptions::vacuum_charge(qi(0)) };
    let span = graded_span(&FockElement::vacuum(), &qi(weight_cutoff), &opts)?;
    let zero = qi(0);
    let ker_m1 = kernel_graded(ScreeningOp::QTilde, Ambient::M1, weight_cutoff);
    let ker_g = kernel_graded(ScreeningOp::QTilde, Ambient::MGamma, weight_cutoff);
    let range = 0..=weight_cutoff;
    let kg: Vec<usize> = range.clone().map(|n| ker_g.dim(&qi(n), &zero)).collect();
    let product =
        range.clone().map(|n| (0..=n).map(|k| kg[k as usize] * partition_count((n - k) as u32)).sum()).collect();
    let h_dir = LatticeVector::ints(0, 4);
    let coset = range
        .clone()
        .map(|n| {
            let basis = span.basis(&qi(n), &zero);
            if basis.is_empty() {
                return 0;
            }
            // h(0) is zero on charge 0
            let images: Vec<Vec<FockElement>> =
                basis.iter().map(|b| (1..=n).map(|m| b.heisenberg_mode(&h_dir, m)).collect()).collect();
            block_kernel(basis, &images).len()
        })
        .collect();
    let tables = CosetTables {
        span: range.clone().map(|n| span.dim(&qi(n), &zero)).collect(),
        ker_m1: range.clone().map(|n| ker_m1.dim(&qi(n), &zero)).collect(),
        ker_mgamma: kg,
        product,
        coset,
    };
    Ok((tables, span))
}

/// Compares, weight by weight, the charge-0 vacuum block with `Ker_{M(1)} Q̃`,
/// with the tensor product count, and the `h`-coset with `Ker_{M_γ(1)} Q̃`.
/// Dimension agreement is desk-scale evidence, not a proof.
pub fn coset_dimension_compare(weight_cutoff: i64, max_basis: usize) -> GradedReport {
    let mut report = GradedReport::new("coset");
    let (t, _) = match coset_tables(weight_cutoff, max_basis) {
        Ok(x) => x,
        Err(e) => {
            report.push(Check::with_witness("resource", false, e.message.clone()));
            for ((w, c), d) in e.partial.dims() {
                if c.is_zero() {
                    report.dims.push(DimEntry::new(Some("span (partial)"), &w, &c, d));
                }
            }
            return report;
        }
    };
    for n in 0..=weight_cutoff as usize {
        let w = qi(n as i64);
        report.check(
            format!(
                "weight {n}: span {} = Ker_M(1) Qt {} = sum_k Ker_Mg Qt(k) p(n-k) {}",
                t.span[n], t.ker_m1[n], t.product[n]
            ),
            t.span[n] == t.ker_m1[n] && t.ker_m1[n] == t.product[n],
        );
        report.check(
            format!("weight {n}: h-coset {} = Ker_Mg Qt {}", t.coset[n], t.ker_mgamma[n]),
            t.coset[n] == t.ker_mgamma[n],
        );
        for (table, d) in [
            ("span", t.span[n]),
            ("ker-M1-Qt", t.ker_m1[n]),
            ("ker-Mg-Qt x M_d", t.product[n]),
            ("h-coset", t.coset[n]),
            ("ker-Mg-Qt", t.ker_mgamma[n]),
        ] {
            report.dims.push(DimEntry::new(Some(table), &w, &qi(0), d));
        }
    }
    report.note("dimension equalities are desk-scale evidence for the isomorphisms, not proofs");
    report
}

/// Kernel dimensions at integer weights of a single-boson ambient.
pub fn kernel_dims(op: ScreeningOp, ambient: Ambient, weight_cutoff: i64) -> Vec<usize> {
    let k = kernel_graded(op, ambient, weight_cutoff);
    (0..=weight_cutoff).map(|n| k.dim(&qi(n), &qi(0))).collect()
}

/// Grade labels of a kernel in text form, for tables with rational weights.
pub fn grade_labels(space: &GradedSubspace) -> Vec<(String, String, usize)> {
    space.dims().into_iter().map(|((w, c), d)| (fmt_rational(&w), fmt_rational(&c), d)).collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fock::parse_element;
    use crate::rational::q;

    #[test]
    fn monomial_counts() {
        assert_eq!(monomials(0, &[Direction::Gamma]).len(), 1);
        let p: Vec<usize> = (0..=8).map(partition_count).collect();
        assert_eq!(p, vec![1, 1, 2, 3, 5, 7, 11, 15, 22]);
        let two: Vec<usize> = (0..=8).map(|n| monomials(n, &[Direction::Gamma, Direction::Delta]).len()).collect();
        assert_eq!(two, vec![1, 2, 5, 10, 20, 36, 65, 110, 185]);
    }

    #[test]
    fn screening_examples() {
        assert!(apply_screening(ScreeningOp::Q, &FockElement::vacuum()).is_zero());
        let g1 = parse_element("1*g[-1]:E[0,0]").unwrap();
        assert_eq!(apply_screening(ScreeningOp::Q, &g1), FockElement::exp(LatticeVector::ints(-6, 0)));
        let h = w_generator();
        assert_eq!(h.degree(), 5);
        assert!(h.sectors().all(|(mu, _)| mu.is_zero()));
        // non-integral pairing: e^{2γ}_0 on e^{γ} vanishes
        assert!(apply_screening(ScreeningOp::QTilde, &FockElement::exp(LatticeVector::ints(1, 0))).is_zero());
    }

    #[test]
    fn small_kernels() {
        let k = kernel_graded(ScreeningOp::Q, Ambient::MGamma, 2);
        assert_eq!(k.dim(&qi(0), &qi(0)), 1);
        assert_eq!(k.dim(&qi(1), &qi(0)), 0);
        assert_eq!(k.dim(&qi(2), &qi(0)), 1);
        assert!(k.contains(&omega_gamma()));
        assert_eq!(kernel_dims(ScreeningOp::QTilde, Ambient::MDelta, 4), vec![1, 1, 2, 3, 5]);
    }

    #[test]
    fn commutator_on_small_states() {
        let v = parse_element("1*g[-1]d[-1]:E[0,0]").unwrap();
        let a = apply_screening(ScreeningOp::Q, &apply_screening(ScreeningOp::QTilde, &v));
        let b = apply_screening(ScreeningOp::QTilde, &apply_screening(ScreeningOp::Q, &v));
        assert_eq!(a, b);
        assert!(commute_q_qtilde(3).passed());
    }

    #[test]
    fn rational_weights_in_the_gamma_lattice() {
        let k = kernel_graded(ScreeningOp::QTilde, Ambient::VZGamma, 1);
        // e^{-γ} and e^{-3γ} both sit at weight -1/4
        assert!(k.grades().any(|(w, _)| *w == q(-1, 4)));
        assert!(k.grades().all(|(w, _)| *w <= qi(1)));
    }

    #[test]
    fn coset_small_cutoff() {
        let r = coset_dimension_compare(3, 10_000);
        assert!(r.passed(), "{r}");
    }
}
