//! The affine `sl_2` action of level `-4/3` on `V_L`.
//!
//! Generators are realized as lattice states; an affine mode `x(n)` acts as
//! the vertex operator mode `x_n`.

use std::collections::{BTreeMap, VecDeque};
use std::fmt;
use std::sync::OnceLock;

use num_traits::{One, Signed, Zero};

use crate::error::{Error, Result};
use crate::fock::{parse_element, FockElement};
use crate::graded::{Grade, GradedSubspace};
use crate::lattice::LatticeVector;
use crate::rational::{fmt_rational, q, qi, Rational};
use crate::report::{Check, GradedReport};
use crate::vertex::{exp_mode, mode};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Generator {
    E,
    H,
    F,
}

impl Generator {
    pub const ALL: [Generator; 3] = [Generator::E, Generator::H, Generator::F];

    pub fn symbol(self) -> char {
        match self {
            Generator::E => 'e',
            Generator::H => 'h',
            Generator::F => 'f',
        }
    }

    /// `h(0)` eigenvalue.
    pub fn charge(self) -> i64 {
        match self {
            Generator::E => 2,
            Generator::H => 0,
            Generator::F => -2,
        }
    }
}

impl std::str::FromStr for Generator {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        match s {
            "e" => Ok(Generator::E),
            "h" => Ok(Generator::H),
            "f" => Ok(Generator::F),
            _ => Err(Error::Syntax { pos: 0, msg: format!("unknown generator `{s}`") }),
        }
    }
}

#[derive(Clone, Debug)]
pub struct AffineGenerators {
    pub e: FockElement,
    pub h: FockElement,
    pub f: FockElement,
    pub level: Rational,
}

pub fn e_root() -> LatticeVector {
    LatticeVector::ints(3, -3)
}

impl AffineGenerators {
    pub fn standard() -> &'static AffineGenerators {
        static GENS: OnceLock<AffineGenerators> = OnceLock::new();
        GENS.get_or_init(|| AffineGenerators {
            e: FockElement::exp(e_root()),
            h: parse_element("4*d[-1]:E[0,0]").unwrap(),
            f: parse_element("-4*g[-1]g[-1]:E[-3,3] + 2/3*g[-2]:E[-3,3]").unwrap(),
            level: q(-4, 3),
        })
    }

    pub fn get(&self, g: Generator) -> &FockElement {
        match g {
            Generator::E => &self.e,
            Generator::H => &self.h,
            Generator::F => &self.f,
        }
    }

    /// `x(n) v`. `e` and `h` use their direct lattice and Heisenberg forms;
    /// they agree with the general vertex operator mode.
    pub fn act(&self, g: Generator, n: i64, v: &FockElement) -> FockElement {
        match g {
            Generator::E => exp_mode(&e_root(), &qi(n), v),
            Generator::H => v.heisenberg_mode(&LatticeVector::ints(0, 4), n),
            Generator::F => mode(&self.f, n, v),
        }
    }
}

pub fn act(g: Generator, n: i64, v: &FockElement) -> FockElement {
    AffineGenerators::standard().act(g, n, v)
}

pub fn level() -> Rational {
    q(-4, 3)
}

pub type Letter = (Generator, i64);

/// A formal linear combination of words in the affine modes. The empty word
/// is the identity; words act right to left.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct UEnvWord {
    terms: BTreeMap<Vec<Letter>, Rational>,
}

impl UEnvWord {
    pub fn zero() -> Self {
        Self::default()
    }

    pub fn scalar(c: Rational) -> Self {
        let mut w = Self::zero();
        w.add_term(Vec::new(), c);
        w
    }

    pub fn identity() -> Self {
        Self::scalar(Rational::one())
    }

    pub fn letter(g: Generator, n: i64) -> Self {
        Self::word(&[(g, n)])
    }

    pub fn word(letters: &[Letter]) -> Self {
        let mut w = Self::zero();
        w.add_term(letters.to_vec(), Rational::one());
        w
    }

    pub fn add_term(&mut self, word: Vec<Letter>, c: Rational) {
        if c.is_zero() {
            return;
        }
        let entry = self.terms.entry(word.clone()).or_insert_with(Rational::zero);
        *entry += c;
        if entry.is_zero() {
            self.terms.remove(&word);
        }
    }

    pub fn terms(&self) -> impl Iterator<Item = (&Vec<Letter>, &Rational)> {
        self.terms.iter()
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn scale(&self, c: &Rational) -> Self {
        let mut out = Self::zero();
        for (w, x) in &self.terms {
            out.add_term(w.clone(), x * c);
        }
        out
    }

    pub fn add(&self, other: &UEnvWord) -> Self {
        let mut out = self.clone();
        for (w, x) in &other.terms {
            out.add_term(w.clone(), x.clone());
        }
        out
    }

    /// `self · other`: `other` acts first.
    pub fn mul(&self, other: &UEnvWord) -> Self {
        let mut out = Self::zero();
        for (w1, x1) in &self.terms {
            for (w2, x2) in &other.terms {
                let mut w = w1.clone();
                w.extend_from_slice(w2);
                out.add_term(w, x1 * x2);
            }
        }
        out
    }
}

impl fmt::Display for UEnvWord {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return write!(f, "0");
        }
        let parts: Vec<String> = self
            .terms
            .iter()
            .map(|(w, c)| {
                let letters: String = w.iter().map(|(g, n)| format!("{}({n})", g.symbol())).collect();
                let letters = if letters.is_empty() { "1".to_string() } else { letters };
                if c.is_one() {
                    letters
                } else {
                    format!("{}*{letters}", fmt_rational(c))
                }
            })
            .collect();
        write!(f, "{}", parts.join(" + "))
    }
}

pub fn eval_word(w: &UEnvWord, v: &FockElement) -> FockElement {
    let gens = AffineGenerators::standard();
    let mut out = FockElement::zero();
    for (word, c) in w.terms() {
        let mut x = v.clone();
        for &(g, n) in word.iter().rev() {
            if x.is_zero() {
                break;
            }
            x = gens.act(g, n, &x);
        }
        out.add_assign_scaled(&x, c);
    }
    out
}

/// `(3/4)(e(-1)f(-1) + f(-1)e(-1) + (1/2)h(-1)^2)`.
pub fn sugawara_word() -> UEnvWord {
    use Generator::*;
    UEnvWord::word(&[(E, -1), (F, -1)])
        .add(&UEnvWord::word(&[(F, -1), (E, -1)]))
        .add(&UEnvWord::word(&[(H, -1), (H, -1)]).scale(&q(1, 2)))
        .scale(&q(3, 4))
}

/// `e(-1)φ + (1/3)e(-3) - (1/2)h(-1)e(-2) + (1/2)h(-2)e(-1)`.
pub fn singular_word() -> UEnvWord {
    use Generator::*;
    UEnvWord::letter(E, -1)
        .mul(&sugawara_word())
        .add(&UEnvWord::letter(E, -3).scale(&q(1, 3)))
        .add(&UEnvWord::word(&[(H, -1), (E, -2)]).scale(&q(-1, 2)))
        .add(&UEnvWord::word(&[(H, -2), (E, -1)]).scale(&q(1, 2)))
}

/// `3γ(-1)² - 2γ(-2) - 3δ(-1)²`, central charge -6.
pub fn conformal_vector() -> FockElement {
    parse_element("3*g[-1]g[-1]:E[0,0] + -2*g[-2]:E[0,0] + -3*d[-1]d[-1]:E[0,0]").unwrap()
}

pub fn sugawara_vector() -> FockElement {
    eval_word(&sugawara_word(), &FockElement::vacuum())
}

pub fn singular_image() -> FockElement {
    eval_word(&singular_word(), &FockElement::vacuum())
}

/// Named pieces of the expansion of `f_sing·1`, with `e = e^{3(γ-δ)}`.
pub fn singular_expansion() -> Vec<(&'static str, FockElement)> {
    let vac = FockElement::vacuum();
    let e = FockElement::exp(e_root());
    let omega = conformal_vector();
    let e_omega = act(Generator::E, -1, &omega);
    let e3 = act(Generator::E, -3, &vac);
    let d = LatticeVector::delta();
    let d1_e2 = act(Generator::E, -2, &vac).heisenberg_mode(&d, -1);
    let d2_e = e.heisenberg_mode(&d, -2);
    let gd = LatticeVector::ints(1, -1);
    let gd_sq_e = e.heisenberg_mode(&gd, -1).heisenberg_mode(&gd, -1);
    let omega_e = omega.sectors().fold(FockElement::zero(), |mut acc, (_, p)| {
        acc.add_poly(e_root(), p);
        acc
    });
    let d_gd_e = e.heisenberg_mode(&gd, -1).heisenberg_mode(&d, -1);
    let mut combined = e3.scale(&q(4, 3));
    combined.add_assign_scaled(&gd_sq_e, &qi(-9));
    combined.add_assign_scaled(&d_gd_e, &qi(-6));
    combined.add_assign_scaled(&d2_e, &qi(2));
    combined.add_assign(&omega_e);
    let mut sum = e_omega.clone();
    sum.add_assign_scaled(&e3, &q(1, 3));
    sum.add_assign_scaled(&d1_e2, &qi(-2));
    sum.add_assign_scaled(&d2_e, &qi(2));
    vec![
        ("e(-1)w", e_omega),
        ("e(-3)1", e3),
        ("d(-1)e(-2)1", d1_e2),
        ("d(-2)e", d2_e),
        ("(g(-1)-d(-1))^2 e", gd_sq_e),
        ("w(x)e", omega_e),
        ("expanded sum", sum),
        ("collected form", combined),
    ]
}

/// `π_s`: `e(n) -> e(n-s)`, `f(n) -> f(n+s)`, `h(n) -> h(n) - s k δ_{n,0}`.
pub fn spectral_flow_word(s: i64, w: &UEnvWord) -> UEnvWord {
    let shift = -qi(s) * level();
    let mut out = UEnvWord::zero();
    for (word, c) in w.terms() {
        let mut acc = UEnvWord::scalar(c.clone());
        for &(g, n) in word {
            let image = match g {
                Generator::E => UEnvWord::letter(g, n - s),
                Generator::F => UEnvWord::letter(g, n + s),
                Generator::H if n == 0 => UEnvWord::letter(g, 0).add(&UEnvWord::scalar(shift.clone())),
                Generator::H => UEnvWord::letter(g, n),
            };
            acc = acc.mul(&image);
        }
        out = out.add(&acc);
    }
    out
}

/// A state multiplied by a power of `z`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ZTerm {
    pub power: Rational,
    pub state: FockElement,
}

#[derive(Clone, Debug)]
pub struct DeltaRow {
    pub generator: Generator,
    pub computed: Vec<ZTerm>,
    pub expected: Vec<ZTerm>,
}

impl DeltaRow {
    pub fn matches(&self) -> bool {
        self.computed == self.expected
    }
}

fn collect_zterms(map: BTreeMap<Rational, FockElement>) -> Vec<ZTerm> {
    map.into_iter().filter(|(_, x)| !x.is_zero()).map(|(power, state)| ZTerm { power, state }).collect()
}

/// `Δ_s(z) x` for a state `x` of definite charge, with
/// `Δ_s(z) = z^{H(0)} exp(Σ_{n≥1} H(n)/(-n) (-z)^{-n})`, `H = -(s/2) h`.
pub fn delta_action(s: i64, x: &FockElement) -> Vec<ZTerm> {
    let hs = q(-s, 2);
    let h_dir = LatticeVector::ints(0, 4);
    let mut result: BTreeMap<i64, FockElement> = BTreeMap::new();
    let mut term: BTreeMap<i64, FockElement> = BTreeMap::from([(0, x.clone())]);
    let mut j = 0i64;
    while !term.is_empty() {
        for (p, st) in &term {
            result.entry(*p).or_default().add_assign(st);
        }
        j += 1;
        let mut next: BTreeMap<i64, FockElement> = BTreeMap::new();
        for (p, st) in &term {
            for n in 1..=(st.degree() as i64) {
                let image = st.heisenberg_mode(&h_dir, n);
                if image.is_zero() {
                    continue;
                }
                // (-1)^{n+1}/n · (s-scaled) / j
                let sign = if n % 2 == 0 { -1 } else { 1 };
                let c = &hs * q(sign, n) * q(1, j);
                next.entry(p - n).or_default().add_assign_scaled(&image, &c);
            }
        }
        next.retain(|_, v| !v.is_zero());
        term = next;
    }
    let mut out: BTreeMap<Rational, FockElement> = BTreeMap::new();
    for (p, st) in result {
        for (mu, poly) in st.sectors() {
            let zero_mode = &hs * crate::fock::sector_charge(mu);
            let mut piece = FockElement::zero();
            piece.add_poly(mu.clone(), poly);
            out.entry(qi(p) + zero_mode).or_default().add_assign(&piece);
        }
    }
    collect_zterms(out)
}

/// `Δ_s(z)` on `e(-1)1`, `f(-1)1`, `h(-1)1` with the expected images
/// `z^{-s} e`, `z^{s} f`, `h - s k z^{-1} 1`.
pub fn delta_action_on_generators(s: i64) -> Vec<DeltaRow> {
    let gens = AffineGenerators::standard();
    Generator::ALL
        .iter()
        .map(|&g| {
            let x = gens.get(g).clone();
            let mut expected = BTreeMap::new();
            match g {
                Generator::E => {
                    expected.insert(qi(-s), x.clone());
                }
                Generator::F => {
                    expected.insert(qi(s), x.clone());
                }
                Generator::H => {
                    expected.insert(qi(0), x.clone());
                    expected.insert(qi(-1), FockElement::vacuum().scale(&(-qi(s) * level())));
                }
            }
            DeltaRow { generator: g, computed: delta_action(s, &x), expected: collect_zterms(expected) }
        })
        .collect()
}

/// Highest-weight data `a0 Λ0 + a1 Λ1` at level `a0 + a1 = -4/3`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ModuleLabel {
    pub a0: Rational,
    pub a1: Rational,
    pub flow: Option<i64>,
}

impl ModuleLabel {
    pub fn new(a0: Rational, a1: Rational, flow: Option<i64>) -> Result<Self> {
        if &a0 + &a1 != level() {
            return Err(Error::Config(format!(
                "labels {} and {} do not sum to the level -4/3",
                fmt_rational(&a0),
                fmt_rational(&a1)
            )));
        }
        Ok(Self { a0, a1, flow })
    }

    pub fn vacuum() -> Self {
        Self { a0: q(-4, 3), a1: qi(0), flow: None }
    }

    pub fn middle() -> Self {
        Self { a0: q(-2, 3), a1: q(-2, 3), flow: None }
    }

    pub fn top() -> Self {
        Self { a0: qi(0), a1: q(-4, 3), flow: None }
    }

    /// `h(0)` eigenvalue of the highest-weight vector.
    pub fn top_charge(&self) -> Rational {
        self.a1.clone()
    }
}

impl fmt::Display for ModuleLabel {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let base = format!("L({}*L0 + {}*L1)", fmt_rational(&self.a0), fmt_rational(&self.a1));
        match self.flow {
            Some(s) => write!(f, "pi_{s}({base})"),
            None => write!(f, "{base}"),
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Variant {
    VacuumType,
    MiddleType,
}

impl Variant {
    /// The test vector `e^{2sδ}` or `e^{-γ+(2s+1)δ}`.
    pub fn vector(self, s: i64) -> FockElement {
        match self {
            Variant::VacuumType => FockElement::exp(LatticeVector::ints(0, 2 * s)),
            Variant::MiddleType => FockElement::exp(LatticeVector::ints(-1, 2 * s + 1)),
        }
    }

    pub fn label(self) -> ModuleLabel {
        match self {
            Variant::VacuumType => ModuleLabel::vacuum(),
            Variant::MiddleType => ModuleLabel::middle(),
        }
    }

    /// Expected `h(0)` eigenvalue on the flowed test vector.
    pub fn eigenvalue(self, s: i64) -> Rational {
        self.label().top_charge() + qi(s) * level()
    }

    fn f_offset(self) -> i64 {
        match self {
            Variant::VacuumType => 0,
            Variant::MiddleType => 1,
        }
    }

    fn tag(self) -> &'static str {
        match self {
            Variant::VacuumType => "vacuum",
            Variant::MiddleType => "middle",
        }
    }
}

/// Checks `e(n-s)v = 0`, `f(n+s+o)v = 0` and `h(n)v = δ_{n,0} λ v` for
/// `0 <= n <= mode_cutoff`, where `o` is 0 or 1 by variant.
pub fn hw_check(v: &FockElement, s: i64, variant: Variant, mode_cutoff: u32) -> GradedReport {
    let mut report = GradedReport::new("modules");
    let lambda = variant.eigenvalue(s);
    let tag = variant.tag();
    for n in 0..=mode_cutoff as i64 {
        let ev = act(Generator::E, n - s, v);
        report.push(Check::with_witness(format!("{tag} s={s}: e({})v = 0", n - s), ev.is_zero(), ev.to_string()));
        let fm = n + s + variant.f_offset();
        let fv = act(Generator::F, fm, v);
        report.push(Check::with_witness(format!("{tag} s={s}: f({fm})v = 0"), fv.is_zero(), fv.to_string()));
        let hv = act(Generator::H, n, v);
        let expected = if n == 0 { v.scale(&lambda) } else { FockElement::zero() };
        let defect = &hv - &expected;
        let name = if n == 0 {
            format!("{tag} s={s}: h(0)v = {}v", fmt_rational(&lambda))
        } else {
            format!("{tag} s={s}: h({n})v = 0")
        };
        report.push(Check::with_witness(name, defect.is_zero(), defect.to_string()));
    }
    report
}

/// Controls for [`graded_span`].
#[derive(Clone, Debug)]
pub struct SpanOptions {
    /// Also apply `e(0)` and `f(0)`. Needed for general seeds; for seeds
    /// annihilated by `g ⊗ C[t]` the negative modes already span.
    pub zero_modes: bool,
    /// Drop states whose charge cannot return to this value within the cutoff.
    /// Only sound without zero modes.
    pub target_charge: Option<Rational>,
    /// Maximum number of basis vectors before giving up.
    pub max_basis: usize,
}

impl Default for SpanOptions {
    fn default() -> Self {
        Self { zero_modes: true, target_charge: None, max_basis: 50_000 }
    }
}

impl SpanOptions {
    /// Options for the vacuum module restricted to one charge.
    pub fn vacuum_charge(charge: Rational) -> Self {
        Self { zero_modes: false, target_charge: Some(charge), ..Self::default() }
    }
}

/// The span computation ran out of budget; `partial` holds what was found.
#[derive(Clone, Debug)]
pub struct SpanExhausted {
    pub partial: GradedSubspace,
    pub message: String,
}

impl From<SpanExhausted> for Error {
    fn from(e: SpanExhausted) -> Self {
        Error::Resource(e.message)
    }
}

/// `U(ĝ)·seed` truncated at `weight_cutoff`, built breadth-first by weight,
/// applying h-modes, then e-modes, then f-modes to each new basis vector.
pub fn graded_span(
    seed: &FockElement,
    weight_cutoff: &Rational,
    opts: &SpanOptions,
) -> std::result::Result<GradedSubspace, SpanExhausted> {
    let mut space = GradedSubspace::new("span");
    let mut queue: BTreeMap<Rational, VecDeque<FockElement>> = BTreeMap::new();
    let exhausted = |space: GradedSubspace, max: usize| SpanExhausted {
        partial: space,
        message: format!("span exceeded {max} basis vectors"),
    };
    let reachable = |grade: &Grade| -> bool {
        if &grade.0 > weight_cutoff {
            return false;
        }
        match &opts.target_charge {
            Some(t) => {
                let steps = (&grade.1 - t).abs() / qi(2);
                &grade.0 + steps <= *weight_cutoff
            }
            None => true,
        }
    };
    for (grade, comp) in seed.graded_components() {
        if reachable(&grade) && space.insert_graded(grade.clone(), comp.clone()) {
            queue.entry(grade.0).or_default().push_back(comp);
        }
    }
    while let Some(mut entry) = queue.first_entry() {
        let Some(v) = entry.get_mut().pop_front() else {
            entry.remove();
            continue;
        };
        let w = entry.key().clone();
        let room = (weight_cutoff - &w).floor().to_integer();
        let room: i64 = room.try_into().unwrap_or(i64::MAX);
        for g in [Generator::H, Generator::E, Generator::F] {
            let start = if opts.zero_modes && g != Generator::H { 0 } else { 1 };
            for n in start..=room {
                let image = act(g, -n, &v);
                for (grade, comp) in image.graded_components() {
                    if !reachable(&grade) {
                        continue;
                    }
                    if space.insert_graded(grade.clone(), comp.clone()) {
                        if space.total_dim() > opts.max_basis {
                            return Err(exhausted(space, opts.max_basis));
                        }
                        queue.entry(grade.0).or_default().push_back(comp);
                    }
                }
            }
        }
    }
    Ok(space)
}

/// Rows `(a, b, i, a_i b, expected)` of the OPE table of the generators
/// for `0 <= i <= 2`: `a_0 b = [a,b]`, `a_1 b = k(a,b)1`, higher vanish.
pub fn ope_table() -> Vec<(Generator, Generator, i64, FockElement, FockElement)> {
    use Generator::*;
    let gens = AffineGenerators::standard();
    let bracket = |a: Generator, b: Generator| -> FockElement {
        match (a, b) {
            (E, F) => gens.h.clone(),
            (F, E) => -&gens.h,
            (H, E) => gens.e.scale(&qi(2)),
            (E, H) => gens.e.scale(&qi(-2)),
            (H, F) => gens.f.scale(&qi(-2)),
            (F, H) => gens.f.scale(&qi(2)),
            _ => FockElement::zero(),
        }
    };
    let form = |a: Generator, b: Generator| -> Rational {
        match (a, b) {
            (E, F) | (F, E) => qi(1),
            (H, H) => qi(2),
            _ => qi(0),
        }
    };
    let mut rows = Vec::new();
    for a in Generator::ALL {
        for b in Generator::ALL {
            for i in 0..=2 {
                let computed = mode(gens.get(a), i, gens.get(b));
                let expected = match i {
                    0 => bracket(a, b),
                    1 => FockElement::vacuum().scale(&(level() * form(a, b))),
                    _ => FockElement::zero(),
                };
                rows.push((a, b, i, computed, expected));
            }
        }
    }
    rows
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::vertex::general_mode;

    #[test]
    fn act_agrees_with_general_mode() {
        let gens = AffineGenerators::standard();
        let states = [
            FockElement::vacuum(),
            gens.f.clone(),
            parse_element("1*g[-2]d[-1]:E[1,1]").unwrap(),
            parse_element("2*d[-1]:E[-2,4]").unwrap(),
        ];
        for g in Generator::ALL {
            for n in -3..=3 {
                for v in &states {
                    assert_eq!(act(g, n, v), general_mode(gens.get(g), &qi(n), v).unwrap(), "{g:?}({n})");
                }
            }
        }
    }

    #[test]
    fn eval_word_examples() {
        let gens = AffineGenerators::standard();
        assert_eq!(eval_word(&UEnvWord::letter(Generator::H, 0), &gens.e), gens.e.scale(&qi(2)));
        assert_eq!(eval_word(&UEnvWord::identity(), &gens.f), gens.f);
        assert_eq!(eval_word(&UEnvWord::letter(Generator::E, 0), &gens.f), gens.h);
        assert!(eval_word(&singular_word(), &FockElement::zero()).is_zero());
    }

    #[test]
    fn sugawara_and_singular_vector() {
        assert_eq!(sugawara_vector(), conformal_vector());
        assert!(singular_image().is_zero());
        let parts: BTreeMap<_, _> = singular_expansion().into_iter().collect();
        assert!(parts["expanded sum"].is_zero());
        assert!(parts["collected form"].is_zero());
    }

    #[test]
    fn ope_table_matches_brackets() {
        for (a, b, i, computed, expected) in ope_table() {
            assert_eq!(computed, expected, "{a:?}_{i} {b:?}");
        }
    }

    #[test]
    fn spectral_flow_relabels_modes() {
        let w = UEnvWord::letter(Generator::E, 0);
        assert_eq!(spectral_flow_word(1, &w), UEnvWord::letter(Generator::E, -1));
        let mixed = UEnvWord::word(&[(Generator::E, 2), (Generator::H, 0), (Generator::F, -1)]);
        assert_eq!(spectral_flow_word(0, &mixed), mixed);
        for s in -3..=3 {
            for t in -3..=3 {
                for g in Generator::ALL {
                    for n in -2..=2 {
                        let w = UEnvWord::letter(g, n);
                        assert_eq!(spectral_flow_word(s, &spectral_flow_word(t, &w)), spectral_flow_word(s + t, &w));
                    }
                }
            }
        }
        let h0 = spectral_flow_word(2, &UEnvWord::letter(Generator::H, 0));
        assert_eq!(h0, UEnvWord::letter(Generator::H, 0).add(&UEnvWord::scalar(q(8, 3))));
    }

    #[test]
    fn delta_action_matches_expected() {
        for s in -3..=3 {
            for row in delta_action_on_generators(s) {
                assert!(row.matches(), "s={s} {:?}: {:?}", row.generator, row.computed);
            }
        }
        for row in delta_action_on_generators(0) {
            assert_eq!(
                row.computed,
                vec![ZTerm { power: qi(0), state: AffineGenerators::standard().get(row.generator).clone() }]
            );
        }
    }

    #[test]
    fn highest_weight_vectors() {
        for s in -3..=3 {
            for variant in [Variant::VacuumType, Variant::MiddleType] {
                let r = hw_check(&variant.vector(s), s, variant, 8);
                assert!(r.passed(), "{:?}", r.failures().collect::<Vec<_>>());
            }
        }
        assert!(hw_check(&FockElement::vacuum(), 0, Variant::VacuumType, 4).passed());
        // a wrong flow index is detected
        assert!(!hw_check(&Variant::VacuumType.vector(1), 2, Variant::VacuumType, 2).passed());
    }

    #[test]
    fn module_labels() {
        assert!(ModuleLabel::new(q(-1, 3), qi(-1), None).is_ok());
        assert!(ModuleLabel::new(qi(0), qi(0), None).is_err());
        assert_eq!(ModuleLabel::middle().to_string(), "L(-2/3*L0 + -2/3*L1)");
    }

    #[test]
    fn vacuum_span_small_weights() {
        let span = graded_span(&FockElement::vacuum(), &qi(2), &SpanOptions::default()).unwrap();
        assert_eq!(span.dim(&qi(0), &qi(0)), 1);
        assert_eq!(span.dim(&qi(1), &qi(0)), 1);
        assert_eq!(span.dim(&qi(1), &qi(2)), 1);
        assert_eq!(span.dim(&qi(1), &qi(-2)), 1);
        let pruned = graded_span(&FockElement::vacuum(), &qi(2), &SpanOptions::vacuum_charge(qi(0))).unwrap();
        assert_eq!(pruned.dim(&qi(2), &qi(0)), span.dim(&qi(2), &qi(0)));
        assert_eq!(graded_span(&FockElement::zero(), &qi(3), &SpanOptions::default()).unwrap().total_dim(), 0);
    }

    #[test]
    fn span_of_a_non_highest_weight_top_runs_out_of_budget() {
        let seed = FockElement::exp(LatticeVector::ints(-2, 0));
        for g in Generator::ALL {
            for n in 1..=8 {
                assert!(act(g, n, &seed).is_zero());
            }
        }
        assert!(!act(Generator::E, 0, &seed).is_zero());
        assert!(!act(Generator::F, 0, &seed).is_zero());
        let opts = SpanOptions { max_basis: 40, ..SpanOptions::default() };
        let err = graded_span(&seed, &q(-1, 3), &opts).unwrap_err();
        assert!(err.partial.total_dim() > 40);
        assert!(err.partial.dim(&q(-1, 3), &qi(0)) == 1);
    }
}
