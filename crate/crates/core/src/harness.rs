//! Named verification suites and their configuration.

use std::fmt;
use std::str::FromStr;
use std::time::Instant;

use num_traits::Zero;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::affine::{
    act, conformal_vector, delta_action_on_generators, hw_check, singular_expansion, singular_image,
    spectral_flow_word, sugawara_vector, AffineGenerators, Generator, UEnvWord, Variant,
};
use crate::error::{Error, Result};
use crate::fock::{parse_element, FockElement};
use crate::lattice::{pair, LatticeVector};
use crate::pool::{random_pool, PoolSpec};
use crate::rational::{fmt_rational, parse_rational, q, qi, Rational};
use crate::report::{Check, DimEntry, GradedReport};
use crate::screening::{
    apply_screening, commute_q_qtilde, coset_dimension_compare, kernel_graded, omega_gamma, w_generator,
    w_generator_checks, Ambient, ScreeningOp,
};
use crate::vertex::{commutator_defect, exp_mode, mode, VertexEngine};
use crate::virasoro::{simple_vacuum_dims, simple_vacuum_dims_from_verma};

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum OutputFormat {
    #[default]
    Text,
    Json,
}

impl FromStr for OutputFormat {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        match s {
            "text" => Ok(OutputFormat::Text),
            "json" => Ok(OutputFormat::Json),
            _ => Err(Error::Config(format!("unknown output format `{s}`"))),
        }
    }
}

/// Suite parameters. Every field has a default, so a config file may set
/// any subset.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct SuiteConfig {
    /// Weight cutoff for spans and the coset comparison.
    pub weight_cutoff: i64,
    /// Largest mode index `n` in annihilation and OPE checks.
    pub mode_cutoff: u32,
    /// Spectral flow indices run over `-s_range..=s_range`.
    pub s_range: i64,
    /// Weight cutoff for single-boson kernels and `[Q, Q̃]`.
    pub kernel_cutoff: i64,
    pub output_format: OutputFormat,
    pub random_seed: u64,
    pub pool_size: usize,
    /// Basis vectors allowed in a span before it reports exhaustion.
    pub max_basis: usize,
    pub parallel: bool,
}

impl Default for SuiteConfig {
    fn default() -> Self {
        Self {
            weight_cutoff: 6,
            mode_cutoff: 8,
            s_range: 3,
            kernel_cutoff: 8,
            output_format: OutputFormat::Text,
            random_seed: 20_240_917,
            pool_size: 20,
            max_basis: 50_000,
            parallel: false,
        }
    }
}

impl SuiteConfig {
    pub fn validate(&self) -> Result<()> {
        if self.weight_cutoff < 0 || self.kernel_cutoff < 0 || self.s_range < 0 {
            return Err(Error::Config("cutoffs and s_range must be non-negative".into()));
        }
        if self.pool_size == 0 {
            return Err(Error::Config("pool_size must be positive".into()));
        }
        Ok(())
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Suite {
    OpeTable,
    SingularVector,
    Sugawara,
    Modules,
    SpectralFlow,
    Screening,
    W25,
    Coset,
    OracleCross,
    Properties,
}

impl Suite {
    pub const ALL: [Suite; 10] = [
        Suite::OpeTable,
        Suite::SingularVector,
        Suite::Sugawara,
        Suite::Modules,
        Suite::SpectralFlow,
        Suite::Screening,
        Suite::W25,
        Suite::Coset,
        Suite::OracleCross,
        Suite::Properties,
    ];

    pub fn name(self) -> &'static str {
        match self {
            Suite::OpeTable => "ope-table",
            Suite::SingularVector => "singular-vector",
            Suite::Sugawara => "sugawara",
            Suite::Modules => "modules",
            Suite::SpectralFlow => "spectral-flow",
            Suite::Screening => "screening",
            Suite::W25 => "w25",
            Suite::Coset => "coset",
            Suite::OracleCross => "oracle-cross",
            Suite::Properties => "properties",
        }
    }
}

impl fmt::Display for Suite {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for Suite {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        Suite::ALL.into_iter().find(|x| x.name() == s).ok_or_else(|| Error::UnknownSuite(s.to_string()))
    }
}

/// The two constructions of `f` agree. Run before every suite.
pub fn self_test() -> std::result::Result<(), String> {
    let cross = apply_screening(ScreeningOp::Q, &FockElement::exp(LatticeVector::ints(3, 3))).scale(&q(-2, 9));
    let f = &AffineGenerators::standard().f;
    if &cross == f {
        Ok(())
    } else {
        Err(format!("-(2/9) Q e^{{3(g+d)}} = {cross}, expected {f}"))
    }
}

/// Runs one suite by name.
pub fn run_suite(name: &str, cfg: &SuiteConfig) -> Result<GradedReport> {
    let suite: Suite = name.parse()?;
    cfg.validate()?;
    Ok(run(suite, cfg))
}

/// Runs several suites, in parallel if configured; reports come back in
/// input order.
pub fn run_suites(suites: &[Suite], cfg: &SuiteConfig) -> Vec<GradedReport> {
    if cfg.parallel {
        suites.par_iter().map(|s| run(*s, cfg)).collect()
    } else {
        suites.iter().map(|s| run(*s, cfg)).collect()
    }
}

pub fn run(suite: Suite, cfg: &SuiteConfig) -> GradedReport {
    let start = Instant::now();
    let mut report = match self_test() {
        Err(msg) => {
            let mut r = GradedReport::new(suite.name());
            r.push(Check::with_witness("self-test", false, msg));
            r
        }
        Ok(()) => match suite {
            Suite::OpeTable => ope_table_suite(cfg),
            Suite::SingularVector => singular_vector_suite(),
            Suite::Sugawara => sugawara_suite(),
            Suite::Modules => modules_suite(cfg),
            Suite::SpectralFlow => spectral_flow_suite(cfg),
            Suite::Screening => {
                let mut r = commute_q_qtilde(cfg.kernel_cutoff);
                r.suite = suite.name().into();
                r
            }
            Suite::W25 => match w_generator_checks(cfg.max_basis) {
                Ok(r) => r,
                Err(e) => {
                    let mut r = GradedReport::new("w25");
                    r.push(Check::with_witness("resource", false, e.to_string()));
                    r
                }
            },
            Suite::Coset => coset_dimension_compare(cfg.weight_cutoff, cfg.max_basis),
            Suite::OracleCross => oracle_cross_suite(cfg),
            Suite::Properties => properties_suite(cfg),
        },
    };
    report.suite = suite.name().into();
    report.timing_ms = Some(start.elapsed().as_millis() as u64);
    report
}

fn zero_check(report: &mut GradedReport, name: String, x: &FockElement) {
    report.push(Check::with_witness(name, x.is_zero(), x.to_string()));
}

fn eq_check(report: &mut GradedReport, name: String, lhs: &FockElement, rhs: &FockElement) {
    let d = lhs - rhs;
    report.push(Check::with_witness(name, d.is_zero(), d.to_string()));
}

fn ope_table_suite(cfg: &SuiteConfig) -> GradedReport {
    let mut r = GradedReport::new("ope-table");
    let g = AffineGenerators::standard();
    let vac = FockElement::vacuum();
    let top = cfg.mode_cutoff as i64;
    for n in 0..=top {
        zero_check(&mut r, format!("e({n})e = 0"), &mode(&g.e, n, &g.e));
    }
    for n in 0..=top {
        zero_check(&mut r, format!("f({n})f = 0"), &mode(&g.f, n, &g.f));
    }
    for n in std::iter::once(0).chain(2..=top) {
        zero_check(&mut r, format!("h({n})h = 0"), &mode(&g.h, n, &g.h));
    }
    eq_check(&mut r, "h(1)h = -8/3 1".into(), &mode(&g.h, 1, &g.h), &vac.scale(&q(-8, 3)));
    eq_check(&mut r, "h(0)e = 2e".into(), &mode(&g.h, 0, &g.e), &g.e.scale(&qi(2)));
    eq_check(&mut r, "h(0)f = -2f".into(), &mode(&g.h, 0, &g.f), &g.f.scale(&qi(-2)));
    for n in 2..=top {
        zero_check(&mut r, format!("e({n})f = 0"), &mode(&g.e, n, &g.f));
    }
    eq_check(&mut r, "e(1)f = -4/3 1".into(), &mode(&g.e, 1, &g.f), &vac.scale(&q(-4, 3)));
    eq_check(&mut r, "e(0)f = h".into(), &mode(&g.e, 0, &g.f), &g.h);
    let cross = apply_screening(ScreeningOp::Q, &FockElement::exp(LatticeVector::ints(3, 3))).scale(&q(-2, 9));
    eq_check(&mut r, "f = -(2/9) Q e^{3(g+d)}".into(), &cross, &g.f);
    r
}

fn singular_vector_suite() -> GradedReport {
    let mut r = GradedReport::new("singular-vector");
    zero_check(&mut r, "f_sing 1 = 0".into(), &singular_image());
    for (label, x) in singular_expansion() {
        r.note(format!("{label} = {x}"));
    }
    r
}

fn sugawara_suite() -> GradedReport {
    let mut r = GradedReport::new("sugawara");
    let omega = conformal_vector();
    let vac = FockElement::vacuum();
    eq_check(&mut r, "phi 1 = w".into(), &sugawara_vector(), &omega);
    eq_check(&mut r, "w_3 w = -3 1 (c = -6)".into(), &mode(&omega, 3, &omega), &vac.scale(&qi(-3)));
    let og = omega_gamma();
    eq_check(&mut r, "wg_3 wg = -7/2 1 (c = -7)".into(), &mode(&og, 3, &og), &vac.scale(&q(-7, 2)));
    zero_check(&mut r, "L(0)1 = 0".into(), &mode(&omega, 1, &vac));
    zero_check(&mut r, "L(1)1 = 0".into(), &mode(&omega, 2, &vac));
    eq_check(&mut r, "w_{-1}1 = w".into(), &mode(&omega, -1, &vac), &omega);
    eq_check(&mut r, "L(0)w = 2w".into(), &mode(&omega, 1, &omega), &omega.scale(&qi(2)));
    zero_check(&mut r, "L(1)w = 0".into(), &mode(&omega, 2, &omega));
    let g = AffineGenerators::standard();
    for gen in Generator::ALL {
        let x = g.get(gen);
        for n in 0..=4 {
            let lhs = mode(&omega, n + 1, x);
            let rhs = if n == 0 { x.clone() } else { FockElement::zero() };
            eq_check(
                &mut r,
                format!("L({n}){} = {}", gen.symbol(), if n == 0 { gen.symbol().to_string() } else { "0".into() }),
                &lhs,
                &rhs,
            );
        }
    }
    r
}

fn modules_suite(cfg: &SuiteConfig) -> GradedReport {
    let mut r = GradedReport::new("modules");
    for variant in [Variant::VacuumType, Variant::MiddleType] {
        for s in -cfg.s_range..=cfg.s_range {
            r.absorb(hw_check(&variant.vector(s), s, variant, cfg.mode_cutoff));
        }
        r.note(format!("{:?} vectors flow from {}", variant, variant.label()));
    }
    let seed = FockElement::exp(LatticeVector::ints(-2, 0));
    for gen in Generator::ALL {
        for n in 1..=cfg.mode_cutoff as i64 {
            zero_check(&mut r, format!("{}({n})e^{{-2g}} = 0", gen.symbol()), &act(gen, n, &seed));
        }
    }
    for gen in [Generator::E, Generator::F] {
        let x = act(gen, 0, &seed);
        r.push(Check::with_witness(format!("{}(0)e^{{-2g}} != 0", gen.symbol()), !x.is_zero(), x.to_string()));
    }
    r.note("annihilation is checked up to the mode cutoff; vanishing beyond it follows from the truncation bound u_s v = 0 for s > deg u + deg v - <beta,mu> - 1, which is property-tested");
    r
}

fn spectral_flow_suite(cfg: &SuiteConfig) -> GradedReport {
    let mut r = GradedReport::new("spectral-flow");
    for s in -cfg.s_range..=cfg.s_range {
        for row in delta_action_on_generators(s) {
            let text: Vec<String> =
                row.computed.iter().map(|t| format!("z^{} ({})", fmt_rational(&t.power), t.state)).collect();
            r.push(Check::with_witness(
                format!("Delta_{s}(z) {}(-1)1", row.generator.symbol()),
                row.matches(),
                text.join(" + "),
            ));
        }
    }
    let mut ok = true;
    let mut witness = String::from("none");
    for s in -cfg.s_range..=cfg.s_range {
        for t in -cfg.s_range..=cfg.s_range {
            for gen in Generator::ALL {
                for n in -cfg.s_range..=cfg.s_range {
                    let w = UEnvWord::letter(gen, n);
                    let lhs = spectral_flow_word(s, &spectral_flow_word(t, &w));
                    let rhs = spectral_flow_word(s + t, &w);
                    if lhs != rhs && ok {
                        ok = false;
                        witness = format!("s={s} t={t} {w}: {lhs} vs {rhs}");
                    }
                }
            }
        }
    }
    r.push(Check::with_witness(
        format!("pi_s pi_t = pi_(s+t) on generator words, |s|,|t| <= {}", cfg.s_range),
        ok,
        witness,
    ));
    r
}

fn oracle_cross_suite(cfg: &SuiteConfig) -> GradedReport {
    let mut r = GradedReport::new("oracle-cross");
    let cutoff = cfg.kernel_cutoff;
    let ker = kernel_graded(ScreeningOp::Q, Ambient::MGamma, cutoff);
    let c = qi(-7);
    let oracle = simple_vacuum_dims(&c, cutoff as u32);
    let verma = simple_vacuum_dims_from_verma(&c, cutoff as u32);
    let zero = Rational::zero();
    for n in 0..=cutoff {
        let k = ker.dim(&qi(n), &zero);
        let o = oracle[n as usize];
        r.check(format!("weight {n}: Ker_Mg Q {k} = L^Vir(-7,0) {o}"), k == o && o == verma[n as usize]);
        r.dims.push(DimEntry::new(Some("ker-Mg-Q"), &qi(n), &zero, k));
        r.dims.push(DimEntry::new(Some("vir(-7) quotient"), &qi(n), &zero, o));
        r.dims.push(DimEntry::new(Some("vir(-7) verma"), &qi(n), &zero, verma[n as usize]));
    }
    if cutoff >= 2 {
        r.check("wg spans Ker_Mg Q at weight 2", ker.contains(&omega_gamma()));
    }
    let og = omega_gamma();
    let mut closed = true;
    let mut witness = String::from("0");
    for n in 0..=cutoff {
        for x in ker.basis(&qi(n), &zero) {
            for k in -2i64..=2 {
                if n - k > cutoff {
                    continue;
                }
                let y = mode(&og, k + 1, x);
                if closed && !ker.contains(&y) {
                    closed = false;
                    witness = format!("Lg({k}) {x}");
                }
            }
        }
    }
    r.push(Check::with_witness(format!("Lg(n), |n| <= 2, preserves Ker_Mg Q up to weight {cutoff}"), closed, witness));
    r.note("dimension equalities are desk-scale evidence for the isomorphism, not a proof");
    r
}

/// First nonzero defect in `items`, rendered, or `None`.
fn first_failure<T: Sync>(items: &[T], f: impl Fn(&T) -> Option<String> + Sync + Send) -> Option<String> {
    items.par_iter().map(f).find_first(Option::is_some).flatten()
}

fn properties_suite(cfg: &SuiteConfig) -> GradedReport {
    let mut r = GradedReport::new("properties");
    let pool = random_pool(cfg.random_seed, cfg.pool_size, &PoolSpec::default());
    let n = pool.len();
    let push = |r: &mut GradedReport, name: String, fail: Option<String>| {
        let ok = fail.is_none();
        r.push(Check::with_witness(name, ok, fail.unwrap_or_else(|| "0".into())));
    };
    let dirs = [LatticeVector::gamma(), LatticeVector::delta()];

    let fail = first_failure(&pool, |v| {
        for a in &dirs {
            for b in &dirs {
                for m in -3i64..=3 {
                    for k in -3i64..=3 {
                        let lhs = &v.heisenberg_mode(b, k).heisenberg_mode(a, m)
                            - &v.heisenberg_mode(a, m).heisenberg_mode(b, k);
                        let c = if m + k == 0 { qi(m) * pair(a, b) } else { Rational::zero() };
                        let d = &lhs - &v.scale(&c);
                        if !d.is_zero() {
                            return Some(format!("[{a}({m}), {b}({k})] on {v}: {d}"));
                        }
                    }
                }
            }
        }
        None
    });
    push(&mut r, format!("Heisenberg relation on {n} states"), fail);

    let gens = AffineGenerators::standard();
    let fail = first_failure(&pool, |v| {
        for a in Generator::ALL {
            for b in Generator::ALL {
                for m in -3i64..=3 {
                    for k in -3i64..=3 {
                        let d = commutator_defect(gens.get(a), m, gens.get(b), k, v);
                        if !d.is_zero() {
                            return Some(format!("{}({m}) {}({k}) on {v}: {d}", a.symbol(), b.symbol()));
                        }
                    }
                }
            }
        }
        None
    });
    push(&mut r, format!("commutator defect vanishes for e, f, h on {n} states"), fail);

    let omega = conformal_vector();
    let fields: Vec<(&str, FockElement)> = vec![
        ("e", gens.e.clone()),
        ("f", gens.f.clone()),
        ("h", gens.h.clone()),
        ("w", omega.clone()),
        ("e^{-6g}", FockElement::exp(LatticeVector::ints(-6, 0))),
    ];
    let fail = first_failure(&pool, |v| {
        let wv = v.homogeneous_weight().ok().flatten()?;
        let cv = v.homogeneous_charge()?;
        for (label, u) in &fields {
            let wu = u.homogeneous_weight().ok().flatten()?;
            let cu = u.homogeneous_charge()?;
            for s in -3i64..=3 {
                let x = mode(u, s, v);
                if x.is_zero() {
                    continue;
                }
                let expected_w = &wu + &wv - qi(s) - qi(1);
                let expected_c = &cu + &cv;
                if x.homogeneous_weight().ok().flatten() != Some(expected_w)
                    || x.homogeneous_charge() != Some(expected_c)
                {
                    return Some(format!("{label}_{s} on {v}"));
                }
            }
        }
        None
    });
    push(&mut r, format!("weight and charge conservation on {n} states"), fail);

    let fail = first_failure(&pool, |v| {
        let h0 = act(Generator::H, 0, v);
        for m in 1i64..=3 {
            let lhs =
                &act(Generator::E, m, &act(Generator::F, -m, v)) - &act(Generator::F, -m, &act(Generator::E, m, v));
            let d = &(&lhs - &h0) - &v.scale(&(qi(m) * q(-4, 3)));
            if !d.is_zero() {
                return Some(format!("m={m} on {v}: {d}"));
            }
        }
        None
    });
    push(&mut r, format!("[e(m), f(-m)] - h(0) = -4/3 m on {n} states"), fail);

    let fail = first_failure(&pool, |v| {
        let l = |k: i64, x: &FockElement| mode(&omega, k + 1, x);
        for m in -3i64..=3 {
            for k in -3i64..=3 {
                let lhs = &l(m, &l(k, v)) - &l(k, &l(m, v));
                let mut rhs = l(m + k, v).scale(&qi(m - k));
                if m + k == 0 {
                    rhs.add_assign_scaled(v, &(qi(m * m * m - m) / qi(12) * qi(-6)));
                }
                let d = &lhs - &rhs;
                if !d.is_zero() {
                    return Some(format!("L({m}), L({k}) on {v}: {d}"));
                }
            }
        }
        None
    });
    push(&mut r, format!("Virasoro bracket with c = -6 on {n} states"), fail);

    let relations = affine_relations(1);
    let fail = first_failure(&pool, |v| {
        for s in -1i64..=1 {
            for (label, rel) in &relations {
                let x = crate::affine::eval_word(&spectral_flow_word(s, rel), v);
                if !x.is_zero() {
                    return Some(format!("pi_{s}({label}) on {v}: {x}"));
                }
            }
        }
        None
    });
    push(&mut r, format!("spectral-flowed affine relations, |s|, |m|, |n| <= 1, on {n} states"), fail);

    let fail = first_failure(&pool, |v| {
        for (label, u) in &fields {
            let bound = VertexEngine::standard().mode_upper_bound(u, v)?;
            let top = bound.floor().to_integer();
            let top: i64 = top.try_into().ok()?;
            for s in top + 1..=top + 3 {
                let x = mode(u, s, v);
                if !x.is_zero() {
                    return Some(format!("{label}_{s} on {v} beyond bound {}", fmt_rational(&bound)));
                }
            }
        }
        None
    });
    push(&mut r, format!("truncation bound on {n} states"), fail);
    r.note(format!("pool seed {}, {} states", cfg.random_seed, n));
    r
}

/// `[x(m), y(n)] - [x,y](m+n) - m k (x,y) δ_{m+n,0}` as words, `|m|,|n| <= range`.
pub fn affine_relations(range: i64) -> Vec<(String, UEnvWord)> {
    use Generator::*;
    let bracket = |a: Generator, b: Generator| -> Option<(Generator, Rational)> {
        match (a, b) {
            (E, F) => Some((H, qi(1))),
            (F, E) => Some((H, qi(-1))),
            (H, E) => Some((E, qi(2))),
            (E, H) => Some((E, qi(-2))),
            (H, F) => Some((F, qi(-2))),
            (F, H) => Some((F, qi(2))),
            _ => None,
        }
    };
    let form = |a: Generator, b: Generator| -> Rational {
        match (a, b) {
            (E, F) | (F, E) => qi(1),
            (H, H) => qi(2),
            _ => qi(0),
        }
    };
    let mut out = Vec::new();
    for a in Generator::ALL {
        for b in Generator::ALL {
            for m in -range..=range {
                for n in -range..=range {
                    let mut w =
                        UEnvWord::word(&[(a, m), (b, n)]).add(&UEnvWord::word(&[(b, n), (a, m)]).scale(&qi(-1)));
                    if let Some((c, x)) = bracket(a, b) {
                        w = w.add(&UEnvWord::letter(c, m + n).scale(&-x));
                    }
                    if m + n == 0 {
                        w = w.add(&UEnvWord::scalar(-(qi(m) * q(-4, 3) * form(a, b))));
                    }
                    out.push((format!("[{}({m}), {}({n})]", a.symbol(), b.symbol()), w));
                }
            }
        }
    }
    out
}

/// Dimension tables for the `dims` command.
pub fn dims_report(cfg: &SuiteConfig) -> GradedReport {
    let mut r = coset_dimension_compare(cfg.weight_cutoff, cfg.max_basis);
    r.suite = "dims".into();
    r.checks.clear();
    let zero = Rational::zero();
    for (table, op, amb) in [("ker-Mg-Q", ScreeningOp::Q, Ambient::MGamma), ("ker-M1-Q", ScreeningOp::Q, Ambient::M1)] {
        let k = kernel_graded(op, amb, cfg.kernel_cutoff);
        for n in 0..=cfg.kernel_cutoff {
            r.dims.push(DimEntry::new(Some(table), &qi(n), &zero, k.dim(&qi(n), &zero)));
        }
    }
    for (n, d) in simple_vacuum_dims(&qi(-7), cfg.kernel_cutoff as u32).into_iter().enumerate() {
        r.dims.push(DimEntry::new(Some("vir(-7)"), &qi(n as i64), &zero, d));
    }
    r
}

/// Operations accepted by the `eval` command.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum EvalOp {
    /// `expMode:<vector>,<mode>`
    ExpMode(LatticeVector, Rational),
    /// `mode:<element>,<n>`: the element's mode applied to the input.
    Mode(FockElement, i64),
    /// `heisenberg:<vector>,<n>`
    Heisenberg(LatticeVector, i64),
    /// `affine:<e|f|h>,<n>`
    Affine(Generator, i64),
    /// `screening:<Q|Qt>`
    Screening(ScreeningOp),
    /// `weight`: L(0)-weight and charge of a homogeneous input.
    Weight,
}

impl FromStr for EvalOp {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        let bad = |msg: &str| Error::Syntax { pos: 0, msg: format!("{msg} in operation `{s}`") };
        if s == "weight" {
            return Ok(EvalOp::Weight);
        }
        let (head, args) = s.split_once(':').ok_or_else(|| bad("expected `name:args`"))?;
        let int = |t: &str| t.trim().parse::<i64>().map_err(|_| bad("expected an integer mode"));
        match head {
            "screening" => match args.trim() {
                "Q" => Ok(EvalOp::Screening(ScreeningOp::Q)),
                "Qt" => Ok(EvalOp::Screening(ScreeningOp::QTilde)),
                _ => Err(bad("expected Q or Qt")),
            },
            _ => {
                let (left, right) = args.rsplit_once(',').ok_or_else(|| bad("expected `,`"))?;
                match head {
                    "expMode" => Ok(EvalOp::ExpMode(
                        left.parse()?,
                        parse_rational(right.trim()).ok_or_else(|| bad("expected a rational mode"))?,
                    )),
                    "mode" => Ok(EvalOp::Mode(parse_element(left)?, int(right)?)),
                    "heisenberg" => Ok(EvalOp::Heisenberg(left.parse()?, int(right)?)),
                    "affine" => Ok(EvalOp::Affine(left.trim().parse()?, int(right)?)),
                    _ => Err(bad("unknown operation")),
                }
            }
        }
    }
}

/// Applies `op` to `v`, rendering the result in the element grammar.
pub fn eval(op: &EvalOp, v: &FockElement) -> Result<String> {
    let out = match op {
        EvalOp::ExpMode(alpha, s) => exp_mode(alpha, s, v),
        EvalOp::Mode(u, n) => crate::vertex::general_mode(u, &qi(*n), v)?,
        EvalOp::Heisenberg(alpha, n) => v.heisenberg_mode(alpha, *n),
        EvalOp::Affine(g, n) => act(*g, *n, v),
        EvalOp::Screening(op) => apply_screening(*op, v),
        EvalOp::Weight => {
            let w = v.homogeneous_weight()?;
            let c = v.homogeneous_charge();
            return Ok(format!(
                "weight {} charge {}",
                w.map_or("none".into(), |w| fmt_rational(&w)),
                c.map_or("mixed".into(), |c| fmt_rational(&c))
            ));
        }
    };
    Ok(out.to_string())
}

/// `H = Q e^{6γ}` in the element grammar.
pub fn w_generator_text() -> String {
    w_generator().to_string()
}
