//! Acceptance suite. Every criterion is decided by exact comparison with
//! zero; one line per criterion is printed and any failure exits nonzero.

use std::path::PathBuf;
use std::time::Instant;

use varbi::brst::nilpotency_check;
use varbi::checks::{self, Check};
use varbi::frontend::parse_model;
use varbi::symmetry::{divergence_symmetry_test, noether_current, DivergenceTest};
use varbi::variational::{euler_components, euler_lagrange, triviality_test, Triviality};
use varbi::Form;
use varbi_cli::run;

const SEED: u64 = 20_240_611;

struct Verdict {
    passed: bool,
    details: Vec<String>,
}

impl From<Check> for Verdict {
    fn from(c: Check) -> Self {
        Verdict {
            passed: c.passed(),
            details: c.failures.iter().map(|f| format!("{}: {}", c.name, f)).collect(),
        }
    }
}

fn join(parts: Vec<Verdict>) -> Verdict {
    Verdict {
        passed: parts.iter().all(|v| v.passed),
        details: parts.into_iter().flat_map(|v| v.details).collect(),
    }
}

fn expect(what: &str, ok: bool) -> Verdict {
    Verdict {
        passed: ok,
        details: if ok { Vec::new() } else { vec![what.to_string()] },
    }
}

fn model(name: &str) -> String {
    let p: PathBuf = [env!("CARGO_MANIFEST_DIR"), "..", "..", "models", name].iter().collect();
    p.to_string_lossy().into_owned()
}

const FREE: &str = "base 1; even y;
lagrangian L = 1/2 * y_{1}^2 * dx1;
symmetry E even { y = y_{1}; }
";

fn noether_example() -> Verdict {
    let m = parse_model(FREE).expect("model parses");
    let l = m.lagrangian("L").unwrap();
    let e = m.symmetry("E").unwrap();
    let half = m.expr("1/2 * y_{1}^2").unwrap();
    let mut parts = Vec::new();
    match divergence_symmetry_test(&e, &l, 3) {
        Ok(DivergenceTest::Yes { sigma }) => {
            parts.push(expect("L_v L = d_H sigma", e.lie(&l.form()) == sigma.d_h(1)));
            parts.push(expect("sigma = 1/2 y_1^2", sigma == half));
        }
        other => parts.push(expect(&format!("divergence test gave {:?}", other), false)),
    }
    match noether_current(&e, &l, Some(&half)) {
        Ok(nc) => {
            parts.push(expect("J = 1/2 y_1^2", nc.current == half));
            let dh = nc.current.d_h(1);
            parts.push(expect("d_H J = y_1 y_11 dx", dh == m.expr("y_{1} * y_{1,1} * dx1").unwrap()));
            let field = *euler_components(&l).keys().next().unwrap();
            let big_e = euler_components(&l)[&field].clone();
            let theta = e.characteristic_of(field);
            let rhs = Form::function(-(&theta * &big_e)).wedge(&Form::dx(1));
            parts.push(expect("d_H J = theta (-E) dx", dh == rhs));
            parts.push(expect("off-shell residual", nc.residual.is_zero()));
        }
        Err(err) => parts.push(expect(&format!("noether_current failed: {}", err), false)),
    }
    join(parts)
}

fn brst() -> Verdict {
    let su2 = parse_model(&std::fs::read_to_string(model("su2.vb")).unwrap()).unwrap();
    let b = su2.brst.as_ref().unwrap();
    let nil = nilpotency_check(&b.build(), &b.fields()).unwrap();
    join(vec![
        expect("su(2) file is nilpotent", nil.nilpotent && nil.residuals.iter().all(|(_, r)| r.is_zero())),
        checks::brst_operator(SEED, 100).into(),
    ])
}

fn even_candidate() -> Verdict {
    let m = parse_model("base 1; even y; symmetry V even { y = y; }").unwrap();
    let v = m.symmetry("V").unwrap();
    let nil = nilpotency_check(&v, &m.universe.field_ids()).unwrap();
    let y = m.expr("y").unwrap().function_part();
    join(vec![
        expect("L_v(v^y) = y", nil.residuals.len() == 1 && nil.residuals[0].1 == y),
        expect("not nilpotent", !nil.nilpotent),
        expect("flagged as even", !nil.odd && nil.note().is_some()),
    ])
}

fn dh_and_triviality() -> Verdict {
    let m = parse_model(
        "base 1; even y;
         lagrangian T = (y_{1}^2 + y * y_{1,1}) * dx1;
         lagrangian L = 1/2 * y_{1}^2 * dx1;",
    )
    .unwrap();
    let t = m.lagrangian("T").unwrap();
    let l = m.lagrangian("L").unwrap();
    let trivial = match triviality_test(&t, 3) {
        Triviality::Trivial { xi, base } => xi.d_h(1) == t.form() && base.is_zero(),
        _ => false,
    };
    let nontrivial = match triviality_test(&l, 3) {
        Triviality::Nontrivial { obstruction } => obstruction == euler_lagrange(&l) && !obstruction.is_zero(),
        _ => false,
    };
    join(vec![
        checks::dh_soundness(SEED, 100).into(),
        expect("(y_1^2 + y y_11) dx is trivial", trivial),
        expect("1/2 y_1^2 dx is not trivial", nontrivial),
    ])
}

fn parser_and_cli() -> Verdict {
    let free = model("free_scalar.vb");
    let el = run(["varbi", "el", &free, "--lagrangian", "L"]);
    let nil = run(["varbi", "nilpotent", &model("su2.vb")]);
    let dh = run(["varbi", "dh-solve", &free, "--form", "F", "--bound", "3"]);
    join(vec![
        checks::round_trip(SEED, 100).into(),
        expect(
            "el prints the Euler-Lagrange form and exits 0",
            el.code == 0 && el.stdout.lines().any(|l| l.ends_with("= - y_{1,1} * theta(y) ^ dx1")),
        ),
        expect(
            "nilpotent su2.vb exits 0 with zero residuals",
            nil.code == 0 && nil.stdout.lines().filter(|l| l.starts_with("residual")).all(|l| l.ends_with("= 0")),
        ),
        expect(
            "dh-solve on an unsolvable density exits 1 with the obstruction",
            dh.code == 1 && dh.stdout.contains("obstruction = "),
        ),
    ])
}

type Criterion = (&'static str, Box<dyn Fn() -> Verdict>);

fn main() {
    let criteria: Vec<Criterion> = vec![
        ("commutation of total derivatives", Box::new(|| checks::commutation(SEED, 200).into())),
        ("bicomplex identities", Box::new(|| checks::bicomplex(SEED, 200).into())),
        ("variational complex", Box::new(|| checks::variational(SEED, 100).into())),
        ("decomposition dL = δL - d_H Ξ", Box::new(|| checks::decomposition(SEED, 100).into())),
        ("first variational formula", Box::new(|| checks::first_variation(SEED, 100).into())),
        ("Noether current of the free scalar", Box::new(noether_example)),
        ("BRST nilpotency and s", Box::new(brst)),
        ("even candidates are flagged", Box::new(even_candidate)),
        ("descent round trip", Box::new(|| checks::descent(SEED, 50).into())),
        ("d_H solver soundness and triviality", Box::new(dh_and_triviality)),
        ("parser round trip and CLI exit codes", Box::new(parser_and_cli)),
    ];
    let mut failed = 0;
    for (i, (name, run)) in criteria.iter().enumerate() {
        let start = Instant::now();
        let v = run();
        let status = if v.passed { "pass" } else { "FAIL" };
        println!("criterion {:>2} {:<40} {} ({:.2?})", i + 1, name, status, start.elapsed());
        for d in v.details.iter().take(10) {
            println!("    {}", d);
        }
        if !v.passed {
            failed += 1;
        }
    }
    println!("{} of {} criteria passed", criteria.len() - failed, criteria.len());
    if failed > 0 {
        std::process::exit(1);
    }
}
