use std::collections::BTreeMap;
use std::str::FromStr;

use varbi::brst::{
    descent_solve, descent_verify, dh_solve, iterated_cocycle_check, nilpotency_check, s_operator, Cocycle,
    DhOutcome,
};
use varbi::checks;
use varbi::frontend::{parse_model, render_poly, render_symmetry, ItemKind, ModelFile, Report, Verdict};
use varbi::symmetry::{
    contact_preservation_check, divergence_symmetry_test, el_symmetry_defect, first_variational_residual,
    noether_current, DivergenceTest,
};
use varbi::variational::{check_decomposition, euler_lagrange, lepagean, rho, triviality_test, Triviality};
use varbi::{Error, FieldId, Form, Generator, GradedPoly, Jet, Lagrangian, MultiIndex, Rational, SuperSymmetry};

use crate::{Command, Failure, Model, Reported, WithForm, WithLagrangian, WithSymmetry};

fn load(m: &Model) -> Result<ModelFile, Failure> {
    let text = std::fs::read_to_string(&m.model).map_err(|e| Failure::Missing(m.model.clone(), e.to_string()))?;
    parse_model(&text).map_err(|e| match e {
        Error::Parse { .. } => Failure::ParseIn(m.model.clone(), e),
        other => Failure::Engine(other),
    })
}

fn expr(model: &ModelFile, flag: &'static str, text: &str) -> Result<Form, Failure> {
    model.expr(text).map_err(|e| match e {
        Error::Parse { .. } => Failure::ParseArg(flag, e),
        other => Failure::Engine(other),
    })
}

fn lagrangian_of(model: &ModelFile, text: &str) -> Result<Lagrangian, Failure> {
    Ok(Lagrangian::from_form(&expr(model, "lagrangian", text)?, model.n())?)
}

fn function_of(model: &ModelFile, flag: &'static str, text: &str) -> Result<GradedPoly, Failure> {
    let f = expr(model, flag, text)?;
    match f.bidegree() {
        None | Some((0, 0)) => Ok(f.function_part()),
        Some(b) => Err(Failure::Usage(format!("`{}` has bidegree {:?}, expected a function", text, b))),
    }
}

fn single_generator(model: &ModelFile, flag: &'static str, text: &str) -> Result<Generator, Failure> {
    let p = function_of(model, flag, text)?;
    let mut terms = p.terms().iter();
    if let (Some((m, c)), None) = (terms.next(), terms.next()) {
        if m.degree() == 1 && *c == Rational::from_integer(1.into()) {
            if let Some(g) = m.generators().next() {
                return Ok(g);
            }
        }
    }
    Err(Failure::Usage(format!("`{}` is not a single generator", text)))
}

fn symmetry_of(model: &ModelFile, name: Option<&str>) -> Result<(SuperSymmetry, Vec<FieldId>, String), Failure> {
    if let Some(name) = name {
        return Ok((model.symmetry(name)?, model.universe.field_ids(), name.to_string()));
    }
    let declared = model.names(|k| matches!(k, ItemKind::Symmetry(_)));
    if declared.len() == 1 {
        let name = declared[0];
        return Ok((model.symmetry(name)?, model.universe.field_ids(), name.to_string()));
    }
    if let Some(b) = &model.brst {
        return Ok((b.build(), b.fields(), "brst".into()));
    }
    Err(Failure::Usage(if declared.is_empty() {
        "the model declares no symmetry".into()
    } else {
        format!("several symmetries declared ({}); pass --symmetry", declared.join(", "))
    }))
}

fn residual(r: &mut Report, model: &ModelFile, key: &str, f: &Form) {
    r.residual(key, model.render(f), f.is_zero());
}

pub(crate) fn dispatch(cmd: Command) -> (bool, Reported) {
    match cmd {
        Command::Selfcheck { seed, cases, json } => (json, Ok(selfcheck(seed, cases))),
        Command::Fmt(m) => (m.json, fmt(&m)),
        Command::Calc { m, expr } => (m.json, calc(&m, &expr)),
        Command::Partial { f, wrt } => (f.m.json, partial(&f, &wrt)),
        Command::Total { f, index } => (f.m.json, total(&f, &index)),
        Command::Evaluate { f, at } => (f.m.json, evaluate(&f, &at)),
        Command::D(f) => (f.m.json, exterior_d(&f)),
        Command::Split(f) => (f.m.json, split(&f)),
        Command::Project { f, k, m } => (f.m.json, project(&f, k, m)),
        Command::Interior { s, form } => (s.m.json, interior(&s, &form)),
        Command::Lie { s, form } => (s.m.json, lie(&s, &form)),
        Command::Rho(f) => (f.m.json, rho_cmd(&f)),
        Command::El(l) => (l.m.json, el(&l)),
        Command::Lepage(l) => (l.m.json, lepage(&l)),
        Command::Decompose(l) => (l.m.json, decompose(&l)),
        Command::Trivial(l) => (l.m.json, trivial(&l)),
        Command::Prolong { s, jet } => (s.m.json, prolong(&s, &jet)),
        Command::Contact { s, order } => (s.m.json, contact(&s, order)),
        Command::CheckFvf { s, lagrangian } => (s.m.json, check_fvf(&s, &lagrangian)),
        Command::Noether { s, lagrangian, sigma } => (s.m.json, noether(&s, &lagrangian, sigma.as_deref())),
        Command::DivSym { s, lagrangian } => (s.m.json, div_sym(&s, &lagrangian)),
        Command::Defect { s, lagrangian } => (s.m.json, defect(&s, &lagrangian)),
        Command::BrstBuild(m) => (m.json, brst_build(&m)),
        Command::Nilpotent(s) => (s.m.json, nilpotent(&s)),
        Command::S { s, form } => (s.m.json, s_cmd(&s, &form)),
        Command::DhSolve(f) => (f.m.json, dh(&f)),
        Command::Descent { s, form } => (s.m.json, descent(&s, &form)),
        Command::Cocycle { s, form } => (s.m.json, cocycle(&s, &form)),
    }
}

fn selfcheck(seed: u64, cases: usize) -> Report {
    let mut r = Report::new("selfcheck");
    r.input("seed", seed.to_string()).input("cases", cases.to_string());
    for c in checks::all(seed, cases) {
        r.residual(c.name, c.failures.len().to_string(), c.passed());
        for f in &c.failures {
            r.note(format!("{}: {}", c.name, f));
        }
    }
    r
}

fn fmt(m: &Model) -> Reported {
    let model = load(m)?;
    let mut r = Report::new("fmt");
    r.input("base", model.n().to_string());
    for f in model.universe.fields() {
        r.input("field", f.label());
    }
    for item in &model.items {
        let text = match &item.kind {
            ItemKind::Lagrangian(l) => model.render(&l.form()),
            ItemKind::Form(f) => model.render(f),
            ItemKind::Symmetry(s) => render_symmetry(&model.universe, &item.name, s),
        };
        r.result(&item.name, text);
    }
    Ok(r)
}

fn calc(m: &Model, text: &str) -> Reported {
    let model = load(m)?;
    let f = expr(&model, "expr", text)?;
    let mut r = Report::new("calc");
    r.input("expr", text).result("value", model.render(&f));
    Ok(r)
}

fn partial(f: &WithForm, wrt: &str) -> Reported {
    let model = load(&f.m)?;
    let p = function_of(&model, "form", &f.form)?;
    let g = single_generator(&model, "wrt", wrt)?;
    let mut r = Report::new("partial");
    r.input("function", render_poly(&model.universe, &p))
        .input("wrt", model.universe.generator_label(&g))
        .result("derivative", render_poly(&model.universe, &p.partial(&g)));
    Ok(r)
}

fn total(f: &WithForm, index: &[u8]) -> Reported {
    let model = load(&f.m)?;
    let p = function_of(&model, "form", &f.form)?;
    if let Some(bad) = index.iter().find(|&&d| d == 0 || d > model.n()) {
        return Err(Failure::Usage(format!("direction {} out of range 1..={}", bad, model.n())));
    }
    let out = match index {
        [d] => p.total_derivative(*d),
        _ => p.total_derivative_multi(&MultiIndex::new(index.iter().copied())),
    };
    let mut r = Report::new("total");
    r.input("function", render_poly(&model.universe, &p))
        .input("index", format!("{:?}", MultiIndex::new(index.iter().copied()).entries()))
        .result("derivative", render_poly(&model.universe, &out));
    Ok(r)
}

fn evaluate(f: &WithForm, at: &[String]) -> Reported {
    let model = load(&f.m)?;
    let p = function_of(&model, "form", &f.form)?;
    let mut point = BTreeMap::new();
    let mut r = Report::new("evaluate");
    r.input("function", render_poly(&model.universe, &p));
    for a in at {
        let (key, value) = a
            .split_once('=')
            .ok_or_else(|| Failure::Usage(format!("`{}` is not GENERATOR=RATIONAL", a)))?;
        let g = single_generator(&model, "at", key.trim())?;
        let v = Rational::from_str(value.trim())
            .map_err(|_| Failure::Usage(format!("`{}` is not a rational", value.trim())))?;
        r.input(model.universe.generator_label(&g), v.to_string());
        point.insert(g, v);
    }
    let out = p.evaluate(&point).map_err(|e| match e {
        Error::UnboundGenerator(_) => Failure::Usage("some even generator has no value; pass --at for it".into()),
        other => Failure::Engine(other),
    })?;
    r.result("value", render_poly(&model.universe, &out));
    Ok(r)
}

fn exterior_d(f: &WithForm) -> Reported {
    let model = load(&f.m)?;
    let phi = expr(&model, "form", &f.form)?;
    let mut r = Report::new("d");
    r.input("form", model.render(&phi)).result("d", model.render(&phi.d(model.n())));
    Ok(r)
}

fn split(f: &WithForm) -> Reported {
    let model = load(&f.m)?;
    let phi = expr(&model, "form", &f.form)?;
    let (dh, dv) = phi.split_d(model.n());
    let mut r = Report::new("split");
    r.input("form", model.render(&phi))
        .result("d_H", model.render(&dh))
        .result("d_V", model.render(&dv));
    Ok(r)
}

fn project(f: &WithForm, k: usize, m: usize) -> Reported {
    let model = load(&f.m)?;
    let phi = expr(&model, "form", &f.form)?;
    let mut r = Report::new("project");
    r.input("form", model.render(&phi))
        .input("bidegree", format!("({}, {})", k, m))
        .result("projection", model.render(&phi.project(k, m)));
    Ok(r)
}

fn interior(s: &WithSymmetry, form: &str) -> Reported {
    let model = load(&s.m)?;
    let (sym, _, name) = symmetry_of(&model, s.symmetry.as_deref())?;
    let phi = expr(&model, "form", form)?;
    let mut r = Report::new("interior");
    r.input("symmetry", name)
        .input("form", model.render(&phi))
        .result("interior", model.render(&phi.interior(&sym)?));
    Ok(r)
}

fn lie(s: &WithSymmetry, form: &str) -> Reported {
    let model = load(&s.m)?;
    let (sym, _, name) = symmetry_of(&model, s.symmetry.as_deref())?;
    let phi = expr(&model, "form", form)?;
    let mut r = Report::new("lie");
    r.input("symmetry", name)
        .input("form", model.render(&phi))
        .result("lie", model.render(&phi.lie_derivative(&sym, model.n())));
    Ok(r)
}

fn rho_cmd(f: &WithForm) -> Reported {
    let model = load(&f.m)?;
    let phi = expr(&model, "form", &f.form)?;
    let mut r = Report::new("rho");
    r.input("form", model.render(&phi)).result("rho", model.render(&rho(&phi, model.n())?));
    Ok(r)
}

fn el(l: &WithLagrangian) -> Reported {
    let model = load(&l.m)?;
    let lag = lagrangian_of(&model, &l.lagrangian)?;
    let mut r = Report::new("el");
    r.input("lagrangian", model.render(&lag.form()))
        .result("euler_lagrange", model.render(&euler_lagrange(&lag)));
    Ok(r)
}

fn lepage(l: &WithLagrangian) -> Reported {
    let model = load(&l.m)?;
    let lag = lagrangian_of(&model, &l.lagrangian)?;
    let lp = lepagean(&lag);
    let mut r = Report::new("lepage");
    r.input("lagrangian", model.render(&lag.form()))
        .result("xi", model.render(&lp.xi))
        .result("xi_l", model.render(&lp.xi_l))
        .note("free functions in the Lepagean equivalent are set to zero");
    Ok(r)
}

fn decompose(l: &WithLagrangian) -> Reported {
    let model = load(&l.m)?;
    let lag = lagrangian_of(&model, &l.lagrangian)?;
    let mut r = Report::new("decompose");
    r.input("lagrangian", model.render(&lag.form()));
    residual(&mut r, &model, "dL - delta L + d_H xi", &check_decomposition(&lag));
    Ok(r)
}

fn trivial(l: &WithLagrangian) -> Reported {
    let model = load(&l.m)?;
    let lag = lagrangian_of(&model, &l.lagrangian)?;
    let mut r = Report::new("trivial");
    r.input("lagrangian", model.render(&lag.form()));
    r.bound = Some(l.m.bound);
    match triviality_test(&lag, l.m.bound) {
        Triviality::Trivial { xi, base } => {
            r.result("class", "trivial").result("xi", model.render(&xi)).result("base", model.render(&base));
            residual(&mut r, &model, "L - d_H xi - base", &(&(&lag.form() - &xi.d_h(model.n())) - &base));
        }
        Triviality::Nontrivial { obstruction } => {
            r.result("class", "nontrivial").result("obstruction", model.render(&obstruction));
            r.verdict(Verdict::Obstruction);
        }
        Triviality::Undecided { bound } => {
            r.result("class", "undecided").note(format!("undecided at bound {}", bound));
            r.verdict(Verdict::Undecided);
        }
    }
    Ok(r)
}

fn prolong(s: &WithSymmetry, jet: &str) -> Reported {
    let model = load(&s.m)?;
    let (sym, _, name) = symmetry_of(&model, s.symmetry.as_deref())?;
    let j: Jet = match single_generator(&model, "jet", jet)? {
        Generator::Jet(j) => j,
        Generator::Base(_) => return Err(Failure::Usage(format!("`{}` is a base coordinate, not a jet", jet))),
    };
    let mut r = Report::new("prolong");
    r.input("symmetry", name)
        .input("jet", model.universe.jet_label(&j))
        .result("component", render_poly(&model.universe, &sym.prolong(&j)));
    Ok(r)
}

fn contact(s: &WithSymmetry, order: usize) -> Reported {
    let model = load(&s.m)?;
    let (sym, fields, name) = symmetry_of(&model, s.symmetry.as_deref())?;
    let mut r = Report::new("contact");
    r.input("symmetry", name).input("order", order.to_string());
    for (jet, res) in contact_preservation_check(&sym, &fields, order) {
        residual(&mut r, &model, &format!("h(L_v theta({}))", model.universe.jet_label(&jet)), &res);
    }
    Ok(r)
}

fn check_fvf(s: &WithSymmetry, lagrangian: &str) -> Reported {
    let model = load(&s.m)?;
    let (sym, _, name) = symmetry_of(&model, s.symmetry.as_deref())?;
    let lag = lagrangian_of(&model, lagrangian)?;
    let mut r = Report::new("check-fvf");
    r.input("symmetry", name).input("lagrangian", model.render(&lag.form()));
    residual(&mut r, &model, "first variational formula", &first_variational_residual(&sym, &lag));
    Ok(r)
}

fn noether(s: &WithSymmetry, lagrangian: &str, sigma: Option<&str>) -> Reported {
    let model = load(&s.m)?;
    let (sym, _, name) = symmetry_of(&model, s.symmetry.as_deref())?;
    let lag = lagrangian_of(&model, lagrangian)?;
    let sigma = sigma.map(|t| expr(&model, "sigma", t)).transpose()?;
    let mut r = Report::new("noether");
    r.input("symmetry", name).input("lagrangian", model.render(&lag.form()));
    if let Some(sg) = &sigma {
        r.input("sigma", model.render(sg));
    }
    let nc = noether_current(&sym, &lag, sigma.as_ref()).map_err(|e| match e {
        Error::DivergenceMismatch(_) => {
            let diff = &sym.lie(&lag.form()) - &sigma.clone().unwrap_or_default().d_h(model.n());
            Failure::Engine(Error::DivergenceMismatch(model.render(&diff)))
        }
        other => Failure::Engine(other),
    })?;
    r.result("current", model.render(&nc.current))
        .result("d_H current", model.render(&nc.current.d_h(model.n())));
    residual(&mut r, &model, "d_H J + v _| delta L", &nc.residual);
    Ok(r)
}

fn div_sym(s: &WithSymmetry, lagrangian: &str) -> Reported {
    let model = load(&s.m)?;
    let (sym, _, name) = symmetry_of(&model, s.symmetry.as_deref())?;
    let lag = lagrangian_of(&model, lagrangian)?;
    let mut r = Report::new("div-sym");
    r.input("symmetry", name).input("lagrangian", model.render(&lag.form()));
    r.bound = Some(s.m.bound);
    match divergence_symmetry_test(&sym, &lag, s.m.bound)? {
        DivergenceTest::Yes { sigma } => {
            r.result("divergence symmetry", "yes").result("sigma", model.render(&sigma));
            let lie = sym.lie(&lag.form());
            residual(&mut r, &model, "L_v L - d_H sigma", &(&lie - &sigma.d_h(model.n())));
            r.note("sigma is unique only up to d_H-closed forms");
        }
        DivergenceTest::No { obstruction } => {
            r.result("divergence symmetry", "no").result("obstruction", model.render(&obstruction));
            r.verdict(Verdict::Obstruction);
        }
        DivergenceTest::Undecided { bound } => {
            r.note(format!("undecided at bound {}", bound)).verdict(Verdict::Undecided);
        }
    }
    Ok(r)
}

fn defect(s: &WithSymmetry, lagrangian: &str) -> Reported {
    let model = load(&s.m)?;
    let (sym, _, name) = symmetry_of(&model, s.symmetry.as_deref())?;
    let lag = lagrangian_of(&model, lagrangian)?;
    let d = el_symmetry_defect(&sym, &lag)?;
    let mut r = Report::new("defect");
    r.input("symmetry", name)
        .input("lagrangian", model.render(&lag.form()))
        .result("defect", model.render(&d.defect))
        .result("correction", model.render(&d.correction))
        .result("higher", model.render(&d.higher));
    residual(&mut r, &model, "defect - correction - higher", &d.residual);
    Ok(r)
}

fn brst_build(m: &Model) -> Reported {
    let model = load(m)?;
    let b = model
        .brst
        .as_ref()
        .ok_or_else(|| Failure::Usage("the model declares no structure constants".into()))?;
    let mut r = Report::new("brst-build");
    r.input("dimension", b.constants.dim().to_string())
        .result("symmetry", render_symmetry(&model.universe, "brst", &b.build()));
    Ok(r)
}

fn nilpotent(s: &WithSymmetry) -> Reported {
    let model = load(&s.m)?;
    let (sym, fields, name) = symmetry_of(&model, s.symmetry.as_deref())?;
    let nil = nilpotency_check(&sym, &fields)?;
    let mut r = Report::new("nilpotent");
    r.input("symmetry", name).input("parity", if nil.odd { "odd" } else { "even" });
    for (f, res) in &nil.residuals {
        r.residual(
            format!("L_v(v^{})", model.universe.field_label(*f)),
            render_poly(&model.universe, res),
            res.is_zero(),
        );
    }
    if let Some(note) = nil.note() {
        r.note(note).verdict(Verdict::Nonzero);
    }
    r.result("nilpotent", nil.nilpotent.to_string());
    Ok(r)
}

fn s_cmd(s: &WithSymmetry, form: &str) -> Reported {
    let model = load(&s.m)?;
    let (sym, _, name) = symmetry_of(&model, s.symmetry.as_deref())?;
    let phi = expr(&model, "form", form)?;
    let mut r = Report::new("s");
    r.input("symmetry", name)
        .input("form", model.render(&phi))
        .result("s", model.render(&s_operator(&sym, &phi)?));
    Ok(r)
}

fn dh(f: &WithForm) -> Reported {
    let model = load(&f.m)?;
    let phi = expr(&model, "form", &f.form)?;
    let n = model.n();
    let mut r = Report::new("dh-solve");
    r.input("form", model.render(&phi));
    r.bound = Some(f.m.bound);
    match dh_solve(&phi, n, f.m.bound)? {
        DhOutcome::Solved { sigma, level } => {
            r.result("sigma", model.render(&sigma)).result("level", level.to_string());
            residual(&mut r, &model, "d_H sigma - form", &(&sigma.d_h(n) - &phi));
        }
        DhOutcome::Obstruction { reason, witness } => {
            r.result("obstruction", model.render(&witness)).note(reason);
            r.verdict(Verdict::Obstruction);
        }
        DhOutcome::Undecided { bound } => {
            r.note(format!("undecided at bound {}", bound)).verdict(Verdict::Undecided);
        }
    }
    Ok(r)
}

fn descent(s: &WithSymmetry, form: &str) -> Reported {
    let model = load(&s.m)?;
    let (sym, _, name) = symmetry_of(&model, s.symmetry.as_deref())?;
    let phi = expr(&model, "form", form)?;
    let out = descent_solve(&sym, &phi, s.m.bound)?;
    let mut r = Report::new("descent");
    r.input("symmetry", name).input("form", model.render(&phi));
    r.bound = Some(s.m.bound);
    for k in (0..=model.n() as usize).rev() {
        r.result(format!("phi_{}", k), model.render(&out.chain.forms[k]));
        r.result(format!("rhs_{}", k), model.render(&out.chain.rhs[k]));
    }
    for (k, res) in descent_verify(&sym, &out.chain)? {
        residual(&mut r, &model, &format!("rung {}", k), &res);
    }
    r.result("reached", out.reached.to_string());
    if let Some(d) = &out.diagnostic {
        r.note(d.clone());
        r.verdict(if d.starts_with("undecided") {
            Verdict::Undecided
        } else {
            Verdict::Obstruction
        });
    }
    Ok(r)
}

fn cocycle(s: &WithSymmetry, form: &str) -> Reported {
    let model = load(&s.m)?;
    let (sym, _, name) = symmetry_of(&model, s.symmetry.as_deref())?;
    let phi = expr(&model, "form", form)?;
    let mut r = Report::new("cocycle");
    r.input("symmetry", name).input("form", model.render(&phi));
    r.bound = Some(s.m.bound);
    match iterated_cocycle_check(&sym, &model.universe, &phi, s.m.bound)? {
        Cocycle::Exact { xi, sigma } => {
            r.result("class", "exact").result("xi", model.render(&xi)).result("sigma", model.render(&sigma));
            let back = &s_operator(&sym, &xi)? + &sigma.d_h(model.n());
            residual(&mut r, &model, "s xi + d_H sigma - form", &(&back - &phi));
        }
        Cocycle::Closed { reason } => {
            r.result("class", "closed").note(reason);
        }
        Cocycle::Neither { reason, witness } => {
            r.result("class", "neither").result("witness", model.render(&witness)).note(reason);
            r.verdict(Verdict::Obstruction);
        }
        Cocycle::Undecided { closed, bound } => {
            r.result("class", "undecided").result("closed", closed.to_string());
            r.note(format!("undecided at bound {}", bound)).verdict(Verdict::Undecided);
        }
    }
    Ok(r)
}
