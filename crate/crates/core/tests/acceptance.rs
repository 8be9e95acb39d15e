//! Acceptance criteria, one line per criterion. Runs without the libtest
//! harness so the lines always print.

use std::process::ExitCode;
use std::time::{Duration, Instant};

use voalab_core::affine::{
    act, conformal_vector, delta_action_on_generators, hw_check, singular_expansion, singular_image,
    spectral_flow_word, sugawara_vector, AffineGenerators, Generator, UEnvWord, Variant,
};
use voalab_core::harness::run;
use voalab_core::rational::{q, qi};
use voalab_core::screening::{apply_screening, kernel_graded, omega_gamma, Ambient, ScreeningOp};
use voalab_core::vertex::{exp_mode, mode};
use voalab_core::virasoro::simple_vacuum_dims;
use voalab_core::{parse_element, FockElement, LatticeVector, Rational, Suite, SuiteConfig};

type Outcome = Result<(), String>;
type Criterion = (&'static str, u64, Box<dyn Fn() -> Outcome>);

fn el(text: &str) -> FockElement {
    parse_element(text).unwrap_or_else(|e| panic!("{text}: {e}"))
}

fn expect_eq(label: &str, lhs: &FockElement, rhs: &FockElement) -> Outcome {
    let d = lhs - rhs;
    if d.is_zero() {
        Ok(())
    } else {
        Err(format!("{label}: difference {d}"))
    }
}

fn expect_zero(label: &str, x: &FockElement) -> Outcome {
    expect_eq(label, x, &FockElement::zero())
}

fn suite_passes(suite: Suite, cfg: &SuiteConfig) -> Outcome {
    let r = run(suite, cfg);
    let first = r.failures().next().map(|c| format!("{}: {}", c.name, c.witness.as_deref().unwrap_or("")));
    first.map_or(Ok(()), Err)
}

fn ope_table() -> Outcome {
    let g = AffineGenerators::standard();
    let vac = FockElement::vacuum();
    for n in 0..=8 {
        expect_zero(&format!("e({n})e"), &mode(&g.e, n, &g.e))?;
        expect_zero(&format!("f({n})f"), &mode(&g.f, n, &g.f))?;
        if n != 1 {
            expect_zero(&format!("h({n})h"), &mode(&g.h, n, &g.h))?;
        }
        if n >= 2 {
            expect_zero(&format!("e({n})f"), &mode(&g.e, n, &g.f))?;
        }
    }
    expect_eq("h(1)h", &mode(&g.h, 1, &g.h), &vac.scale(&q(-8, 3)))?;
    expect_eq("h(0)e", &mode(&g.h, 0, &g.e), &g.e.scale(&qi(2)))?;
    expect_eq("h(0)f", &mode(&g.h, 0, &g.f), &g.f.scale(&qi(-2)))?;
    expect_eq("e(1)f", &mode(&g.e, 1, &g.f), &vac.scale(&q(-4, 3)))?;
    expect_eq("e(0)f", &mode(&g.e, 0, &g.f), &g.h)
}

fn cross_construction() -> Outcome {
    let q_e = exp_mode(&LatticeVector::ints(-6, 0), &qi(0), &FockElement::exp(LatticeVector::ints(3, 3)));
    let explicit = el("-4*g[-1]g[-1]:E[-3,3] + 2/3*g[-2]:E[-3,3]");
    expect_eq("-(2/9) Q e^{3(g+d)}", &q_e.scale(&q(-2, 9)), &explicit)?;
    expect_eq("f", &AffineGenerators::standard().f, &explicit)
}

fn singular_vector() -> Outcome {
    expect_zero("f_sing 1", &singular_image())?;
    let parts: std::collections::BTreeMap<_, _> = singular_expansion().into_iter().collect();
    let vac = FockElement::vacuum();
    // first displayed line: the word applied to 1
    let mut line1 = act(Generator::E, -1, &conformal_vector());
    line1.add_assign_scaled(&act(Generator::E, -3, &vac), &q(1, 3));
    line1.add_assign_scaled(&act(Generator::H, -1, &act(Generator::E, -2, &vac)), &q(-1, 2));
    line1.add_assign_scaled(&act(Generator::H, -2, &act(Generator::E, -1, &vac)), &q(1, 2));
    expect_eq("first line", &line1, &singular_image())?;
    // second line: h(-n) acts as 4d(-n)
    let ee = |s: i64, v: &FockElement| exp_mode(&LatticeVector::ints(3, -3), &qi(s), v);
    let mut line2 = ee(-1, &conformal_vector());
    line2.add_assign_scaled(&ee(-3, &vac), &q(1, 3));
    line2.add_assign_scaled(&ee(-2, &vac).heisenberg_mode(&LatticeVector::delta(), -1), &qi(-2));
    line2.add_assign_scaled(&el("1*d[-2]:E[3,-3]"), &qi(2));
    expect_eq("second line", &line2, &line1)?;
    // third line
    let mut line3 = ee(-3, &vac).scale(&q(4, 3));
    line3.add_assign_scaled(&el("1*g[-1]g[-1]:E[3,-3] + -2*g[-1]d[-1]:E[3,-3] + 1*d[-1]d[-1]:E[3,-3]"), &qi(-9));
    line3.add_assign_scaled(&el("1*g[-1]d[-1]:E[3,-3] + -1*d[-1]d[-1]:E[3,-3]"), &qi(-6));
    line3.add_assign_scaled(&el("1*d[-2]:E[3,-3]"), &qi(2));
    line3.add_assign(&el("3*g[-1]g[-1]:E[3,-3] + -2*g[-2]:E[3,-3] + -3*d[-1]d[-1]:E[3,-3]"));
    expect_eq("third line", &line3, &line2)?;
    expect_eq("collected form", &parts["collected form"], &line3)?;
    expect_eq("expanded sum", &parts["expanded sum"], &line2)?;
    // fourth line: (4/3) e_{-3} 1 rewritten as a polynomial on e
    let poly =
        el("9*g[-1]g[-1]:E[3,-3] + -18*g[-1]d[-1]:E[3,-3] + 9*d[-1]d[-1]:E[3,-3] + 3*g[-2]:E[3,-3] + -3*d[-2]:E[3,-3]");
    expect_eq("fourth line", &ee(-3, &vac).scale(&q(4, 3)), &poly.scale(&q(2, 3)))?;
    Ok(())
}

fn sugawara() -> Outcome {
    let omega = el("3*g[-1]g[-1]:E[0,0] + -2*g[-2]:E[0,0] + -3*d[-1]d[-1]:E[0,0]");
    expect_eq("phi 1", &sugawara_vector(), &omega)?;
    expect_eq("w", &conformal_vector(), &omega)?;
    let vac = FockElement::vacuum();
    expect_eq("w_3 w", &mode(&omega, 3, &omega), &vac.scale(&qi(-3)))?;
    let og = omega_gamma();
    expect_eq("wg", &og, &el("3*g[-1]g[-1]:E[0,0] + -2*g[-2]:E[0,0]"))?;
    expect_eq("wg_3 wg", &mode(&og, 3, &og), &vac.scale(&q(-7, 2)))
}

fn modules() -> Outcome {
    for s in -3..=3i64 {
        let v = FockElement::exp(LatticeVector::ints(0, 2 * s));
        let w = FockElement::exp(LatticeVector::ints(-1, 2 * s + 1));
        expect_eq("vacuum-type vector", &Variant::VacuumType.vector(s), &v)?;
        expect_eq("middle-type vector", &Variant::MiddleType.vector(s), &w)?;
        expect_eq(&format!("h(0)v_{s}"), &act(Generator::H, 0, &v), &v.scale(&(q(-4, 3) * qi(s))))?;
        expect_eq(&format!("h(0)v'_{s}"), &act(Generator::H, 0, &w), &w.scale(&(q(-2, 3) - q(4, 3) * qi(s))))?;
        for (variant, x) in [(Variant::VacuumType, &v), (Variant::MiddleType, &w)] {
            let r = hw_check(x, s, variant, 8);
            let first = r.failures().next().map(|c| c.name.clone());
            if let Some(name) = first {
                return Err(format!("s={s} {variant:?}: {name}"));
            }
        }
    }
    Ok(())
}

fn spectral_flow() -> Outcome {
    for s in -3..=3 {
        for row in delta_action_on_generators(s) {
            if !row.matches() {
                return Err(format!("Delta_{s} on {}", row.generator.symbol()));
            }
        }
    }
    for s in -3..=3 {
        for t in -3..=3 {
            for g in Generator::ALL {
                for n in -4..=4 {
                    let w = UEnvWord::letter(g, n);
                    if spectral_flow_word(s, &spectral_flow_word(t, &w)) != spectral_flow_word(s + t, &w) {
                        return Err(format!("pi_{s} pi_{t} on {}({n})", g.symbol()));
                    }
                }
            }
        }
    }
    Ok(())
}

fn screening() -> Outcome {
    let qop = |v: &FockElement| apply_screening(ScreeningOp::Q, v);
    let qt = |v: &FockElement| apply_screening(ScreeningOp::QTilde, v);
    let mut count = 0;
    for states in Ambient::M1.basis(8).values() {
        for v in states {
            expect_zero(&format!("[Q,Qt] {v}"), &(&qop(&qt(v)) - &qt(&qop(v))))?;
            count += 1;
        }
    }
    if count == 0 {
        return Err("empty M(1) basis".into());
    }
    expect_zero("Q^2 e^{3(g+d)}", &qop(&qop(&FockElement::exp(LatticeVector::ints(3, 3)))))?;
    expect_zero("Q^2 e^{3(g-d)}", &qop(&qop(&FockElement::exp(LatticeVector::ints(3, -3)))))?;
    let g = AffineGenerators::standard();
    for gen in Generator::ALL {
        expect_zero(&format!("Qt {}", gen.symbol()), &qt(g.get(gen)))?;
    }
    Ok(())
}

fn oracle_cross() -> Outcome {
    let ker = kernel_graded(ScreeningOp::Q, Ambient::MGamma, 8);
    let oracle = simple_vacuum_dims(&qi(-7), 8);
    for n in 0..=8i64 {
        let k = ker.dim(&qi(n), &Rational::from_integer(0.into()));
        if k != oracle[n as usize] {
            return Err(format!("weight {n}: kernel {k}, oracle {}", oracle[n as usize]));
        }
    }
    Ok(())
}

fn coset(cfg: &SuiteConfig) -> Outcome {
    let r = run(Suite::Coset, cfg);
    let first = r.failures().next().map(|c| c.name.clone());
    if let Some(name) = first {
        return Err(name);
    }
    for n in 0..=6 {
        let w = n.to_string();
        let get = |t: &str| {
            r.dims.iter().find(|d| d.table.as_deref() == Some(t) && d.weight == w && d.charge == "0").map(|d| d.dim)
        };
        let (a, b, c) = (get("span"), get("ker-M1-Qt"), get("ker-Mg-Qt x M_d"));
        if a.is_none() || a != b || b != c {
            return Err(format!("weight {n}: {a:?} {b:?} {c:?}"));
        }
    }
    Ok(())
}

fn example_module() -> Outcome {
    let v = FockElement::exp(LatticeVector::ints(-2, 0));
    for g in Generator::ALL {
        for n in 1..=8 {
            expect_zero(&format!("{}({n})e^{{-2g}}", g.symbol()), &act(g, n, &v))?;
        }
    }
    for g in [Generator::E, Generator::F] {
        if act(g, 0, &v).is_zero() {
            return Err(format!("{}(0)e^{{-2g}} vanishes", g.symbol()));
        }
    }
    Ok(())
}

fn main() -> ExitCode {
    let cfg = SuiteConfig::default();
    let criteria: Vec<Criterion> = vec![
        ("OPE table", 5, Box::new(ope_table)),
        ("cross-construction of f", 1, Box::new(cross_construction)),
        ("singular vector", 5, Box::new(singular_vector)),
        ("Sugawara and central charges", 2, Box::new(sugawara)),
        ("highest-weight modules, |s| <= 3", 30, Box::new(modules)),
        ("spectral flow", 1, Box::new(spectral_flow)),
        ("screening commutation", 60, Box::new(screening)),
        ("W(2,5) generator", 60, Box::new(move || suite_passes(Suite::W25, &SuiteConfig::default()))),
        ("Virasoro oracle cross-check", 120, Box::new(oracle_cross)),
        ("coset dimensions", 600, Box::new(move || coset(&SuiteConfig::default()))),
        ("property suites", 120, Box::new(move || suite_passes(Suite::Properties, &cfg))),
        ("example module e^{-2g}", 5, Box::new(example_module)),
    ];
    let mut failed = 0;
    for (i, (name, limit, check)) in criteria.iter().enumerate() {
        let start = Instant::now();
        let outcome = check();
        let elapsed = start.elapsed();
        let outcome = outcome.and_then(|()| {
            if elapsed <= Duration::from_secs(*limit) {
                Ok(())
            } else {
                Err(format!("took {elapsed:.1?}, limit {limit} s"))
            }
        });
        match outcome {
            Ok(()) => println!("criterion {:>2} PASS {name} ({elapsed:.2?})", i + 1),
            Err(msg) => {
                failed += 1;
                println!("criterion {:>2} FAIL {name} ({elapsed:.2?}): {msg}", i + 1);
            }
        }
    }
    println!("{} of {} criteria passed", criteria.len() - failed, criteria.len());
    if failed == 0 {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}
