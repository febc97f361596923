//! Canonical text for polynomials, forms and symmetries, readable back by the
//! parser.

use num_traits::{One, Signed};

use crate::forms::{Covector, Form};
use crate::kernel::{GradedPoly, Jet, Monomial, Rational, Universe};
use crate::symmetry::SuperSymmetry;

fn theta_label(u: &Universe, j: &Jet) -> String {
    if j.index.is_empty() {
        format!("theta({})", u.field_label(j.field))
    } else {
        format!("theta({},{})", u.field_label(j.field), j.index)
    }
}

fn covector_label(u: &Universe, e: &Covector) -> String {
    match e {
        Covector::Dx(d) => format!("dx{}", d),
        Covector::Theta(j) => theta_label(u, j),
    }
}

fn monomial_factors(u: &Universe, m: &Monomial) -> Vec<String> {
    let mut out = Vec::new();
    for (g, e) in m.even_factors() {
        let label = u.generator_label(g);
        out.push(if *e == 1 { label } else { format!("{}^{}", label, e) });
    }
    for j in m.odd_factors() {
        out.push(u.jet_label(j));
    }
    out
}

/// One signed term: the coefficient, the function factors joined by ` * `, and
/// the covectors joined by ` ^ `.
fn term(u: &Universe, c: &Rational, m: &Monomial, covectors: &[Covector]) -> (bool, String) {
    let mut parts = monomial_factors(u, m);
    let abs = c.abs();
    if !abs.is_one() || (parts.is_empty() && covectors.is_empty()) {
        parts.insert(0, abs.to_string());
    }
    let mut text = parts.join(" * ");
    if !covectors.is_empty() {
        let cov: Vec<String> = covectors.iter().map(|e| covector_label(u, e)).collect();
        if !text.is_empty() {
            text.push_str(" * ");
        }
        text.push_str(&cov.join(" ^ "));
    }
    (c.is_negative(), text)
}

fn join(terms: Vec<(bool, String)>) -> String {
    if terms.is_empty() {
        return "0".into();
    }
    let mut out = String::new();
    for (i, (neg, t)) in terms.into_iter().enumerate() {
        match (i, neg) {
            (0, false) => {}
            (0, true) => out.push_str("- "),
            (_, false) => out.push_str(" + "),
            (_, true) => out.push_str(" - "),
        }
        out.push_str(&t);
    }
    out
}

pub fn render_poly(u: &Universe, p: &GradedPoly) -> String {
    join(p.terms().iter().map(|(m, c)| term(u, c, m, &[])).collect())
}

pub fn render_form(u: &Universe, f: &Form) -> String {
    let mut terms = Vec::new();
    for (w, coeff) in f.terms() {
        for (m, c) in coeff.terms() {
            terms.push(term(u, c, m, w));
        }
    }
    join(terms)
}

/// The `symmetry NAME parity { ... };` statement for `s`.
pub fn render_symmetry(u: &Universe, name: &str, s: &SuperSymmetry) -> String {
    let parity = if s.parity().is_odd() { "odd" } else { "even" };
    let mut out = format!("symmetry {} {} {{", name, parity);
    for (d, b) in s.base().iter().enumerate() {
        if !b.is_zero() {
            out.push_str(&format!(" dx{} = {};", d + 1, render_poly(u, b)));
        }
    }
    for (f, t) in s.characteristic() {
        if !t.is_zero() {
            out.push_str(&format!(" {} = {};", u.field_label(*f), render_poly(u, t)));
        }
    }
    out.push_str(" };");
    out
}
