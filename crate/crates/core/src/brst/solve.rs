//! Bounded inversion of the horizontal differential on polynomial forms.
//!
//! A horizontal form is split into classes by the field content of its
//! coefficients and by the weights `w_λ = (λ-count in jet indices) - (x^λ
//! degree) - [dx^λ present]`, both preserved by `d_H`. Each class is solved
//! independently with an ansatz of the same class whose jet order grows with
//! the escalation level.

use std::collections::BTreeMap;

use crate::brst::linsolve::{combine, solve_combination};
use crate::error::{Error, Result};
use crate::forms::{Covector, Form};
use crate::kernel::{Dir, FieldId, Generator, GradedPoly, Jet, Monomial, MultiIndex};
use crate::variational::{euler_lagrange, Lagrangian};

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum DhOutcome {
    /// `d_H σ = φ`, found at escalation level `level`.
    Solved { sigma: Form, level: usize },
    /// `φ` is provably not `d_H`-exact; `witness` is `δφ` or `d_H φ`.
    Obstruction { reason: String, witness: Form },
    Undecided { bound: usize },
}

#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord)]
pub(crate) struct Grade {
    fields: Vec<(FieldId, u32)>,
    weight: Vec<i64>,
}

pub(crate) fn grade(m: &Monomial, wedge: &[Covector], n: Dir) -> Grade {
    let mut fields: BTreeMap<FieldId, u32> = BTreeMap::new();
    let mut weight = vec![0i64; n as usize];
    let mut add_jet = |j: &Jet, e: u32, weight: &mut Vec<i64>| {
        *fields.entry(j.field).or_default() += e;
        for &d in j.index.entries() {
            weight[d as usize - 1] += e as i64;
        }
    };
    for (g, e) in m.even_factors() {
        match g {
            Generator::Base(d) => weight[*d as usize - 1] -= *e as i64,
            Generator::Jet(j) => add_jet(j, *e, &mut weight),
        }
    }
    for j in m.odd_factors() {
        add_jet(j, 1, &mut weight);
    }
    for e in wedge {
        if let Covector::Dx(d) = e {
            weight[*d as usize - 1] -= 1;
        }
    }
    Grade {
        fields: fields.into_iter().collect(),
        weight,
    }
}

pub(crate) fn split_by_grade(form: &Form, n: Dir) -> BTreeMap<Grade, Form> {
    let mut out: BTreeMap<Grade, Form> = BTreeMap::new();
    for (w, f) in form.terms() {
        for (m, c) in f.terms() {
            let g = grade(m, w, n);
            out.entry(g)
                .or_default()
                .add_term(w.clone(), &GradedPoly::term(c.clone(), m.clone()));
        }
    }
    out
}

fn subsets(n: Dir, size: usize) -> Vec<Vec<Dir>> {
    fn go(start: Dir, n: Dir, size: usize, cur: &mut Vec<Dir>, out: &mut Vec<Vec<Dir>>) {
        if cur.len() == size {
            out.push(cur.clone());
            return;
        }
        for d in start..=n {
            cur.push(d);
            go(d + 1, n, size, cur, out);
            cur.pop();
        }
    }
    let mut out = Vec::new();
    go(1, n, size, &mut Vec::new(), &mut out);
    out
}

/// Choices of `k` multi-indices from `pool` (with repetition for even fields).
fn index_choices(pool: &[MultiIndex], k: usize, repeat: bool) -> Vec<Vec<MultiIndex>> {
    fn go(
        pool: &[MultiIndex],
        start: usize,
        k: usize,
        repeat: bool,
        cur: &mut Vec<MultiIndex>,
        out: &mut Vec<Vec<MultiIndex>>,
    ) {
        if cur.len() == k {
            out.push(cur.clone());
            return;
        }
        for i in start..pool.len() {
            cur.push(pool[i].clone());
            go(pool, if repeat { i } else { i + 1 }, k, repeat, cur, out);
            cur.pop();
        }
    }
    let mut out = Vec::new();
    go(pool, 0, k, repeat, &mut Vec::new(), &mut out);
    out
}

/// Field-content monomials of the class, as jet lists with their direction
/// counts.
fn jet_products(g: &Grade, n: Dir, order: usize) -> Vec<(GradedPoly, Vec<i64>)> {
    let pool = MultiIndex::all_up_to(n, order);
    let mut acc: Vec<(GradedPoly, Vec<i64>)> = vec![(GradedPoly::one(), vec![0; n as usize])];
    for &(field, k) in &g.fields {
        let choices = index_choices(&pool, k as usize, !field.parity.is_odd());
        let mut next = Vec::new();
        for (p, counts) in &acc {
            for ch in &choices {
                let mut q = p.clone();
                let mut cs = counts.clone();
                for mi in ch {
                    q = &q * &GradedPoly::jet(Jet::new(field, mi.clone()));
                    for &d in mi.entries() {
                        cs[d as usize - 1] += 1;
                    }
                }
                if !q.is_zero() {
                    next.push((q, cs));
                }
            }
        }
        acc = next;
    }
    acc
}

fn ansatz(g: &Grade, n: Dir, slot: usize, order: usize, xcap: usize) -> Vec<Form> {
    let products = jet_products(g, n, order);
    let mut out = Vec::new();
    for s in subsets(n, slot) {
        for (p, counts) in &products {
            let mut xs = Vec::with_capacity(n as usize);
            let mut ok = true;
            for lam in 1..=n {
                let i = lam as usize - 1;
                let x = counts[i] - g.weight[i] - s.contains(&lam) as i64;
                if x < 0 {
                    ok = false;
                    break;
                }
                xs.push(x);
            }
            if !ok || xs.iter().sum::<i64>() as usize > xcap {
                continue;
            }
            let mut f = p.clone();
            for (i, &x) in xs.iter().enumerate() {
                for _ in 0..x {
                    f = &f * &GradedPoly::base(i as Dir + 1);
                }
            }
            out.push(Form::monomial(f, s.iter().copied().map(Covector::Dx).collect()));
        }
    }
    out
}

fn x_degree(form: &Form) -> usize {
    form.terms()
        .values()
        .flat_map(|f| f.terms().keys())
        .map(|m| m.x_degree() as usize)
        .max()
        .unwrap_or(0)
}

/// Solves `d_H σ = φ` for a `(0, m)` form, `1 ≤ m ≤ n`, escalating the ansatz
/// through levels `0..=bound`.
pub fn dh_solve(phi: &Form, n: Dir, bound: usize) -> Result<DhOutcome> {
    let m = match phi.bidegree() {
        Some((0, m)) => m,
        other => {
            return Err(Error::Bidegree {
                expected: "(0, m)".into(),
                found: format!("{:?}", other),
            })
        }
    };
    if phi.is_zero() {
        return Ok(DhOutcome::Solved {
            sigma: Form::zero(),
            level: 0,
        });
    }
    if m == 0 || m > n as usize {
        return Err(Error::Bidegree {
            expected: format!("(0, m) with 1 <= m <= {}", n),
            found: format!("(0, {})", m),
        });
    }
    if m == n as usize {
        let el = euler_lagrange(&Lagrangian::from_form(phi, n)?);
        if !el.is_zero() {
            return Ok(DhOutcome::Obstruction {
                reason: "variational derivative is nonzero".into(),
                witness: el,
            });
        }
    } else {
        let dh = phi.d_h(n);
        if !dh.is_zero() {
            return Ok(DhOutcome::Obstruction {
                reason: "not d_H-closed".into(),
                witness: dh,
            });
        }
    }
    let base_order = phi.jet_order().max(1) - 1;
    let base_x = x_degree(phi) + 1;
    let mut sigma = Form::zero();
    let mut used = 0;
    'class: for (g, part) in split_by_grade(phi, n) {
        for level in 0..=bound {
            let basis = ansatz(&g, n, m - 1, base_order + level, base_x + level);
            let images: Vec<Form> = basis.iter().map(|b| b.d_h(n)).collect();
            if let Some(x) = solve_combination(&images, &part) {
                sigma += &combine(&basis, &x);
                used = used.max(level);
                continue 'class;
            }
        }
        return Ok(DhOutcome::Undecided { bound });
    }
    if sigma.d_h(n) != *phi {
        return Ok(DhOutcome::Undecided { bound });
    }
    Ok(DhOutcome::Solved { sigma, level: used })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::kernel::rat;

    fn y(idx: &[Dir]) -> GradedPoly {
        GradedPoly::jet(Jet::new(FieldId::even(0), MultiIndex::new(idx.iter().copied())))
    }

    #[test]
    fn derivative_of_field() {
        let phi = Form::monomial(y(&[1]), vec![Covector::Dx(1)]);
        match dh_solve(&phi, 1, 2).unwrap() {
            DhOutcome::Solved { sigma, .. } => assert_eq!(sigma, Form::function(y(&[]))),
            other => panic!("{:?}", other),
        }
    }

    #[test]
    fn jet_free_density_is_obstructed() {
        let phi = Form::monomial(y(&[]), vec![Covector::Dx(1)]);
        assert!(matches!(
            dh_solve(&phi, 1, 2).unwrap(),
            DhOutcome::Obstruction { .. }
        ));
    }

    #[test]
    fn zero_and_base_forms() {
        assert_eq!(
            dh_solve(&Form::zero(), 2, 0).unwrap(),
            DhOutcome::Solved {
                sigma: Form::zero(),
                level: 0
            }
        );
        match dh_solve(&Form::dx(1), 2, 1).unwrap() {
            DhOutcome::Solved { sigma, .. } => assert_eq!(sigma, Form::function(GradedPoly::base(1))),
            other => panic!("{:?}", other),
        }
        // a constant top form
        let top = Form::omega(2).scale(&rat(3));
        match dh_solve(&top, 2, 1).unwrap() {
            DhOutcome::Solved { sigma, .. } => assert_eq!(sigma.d_h(2), top),
            other => panic!("{:?}", other),
        }
    }

    #[test]
    fn mixed_top_form() {
        // d_H of y y_1 ω_1 + x2 y_2 ω_2 on n = 2
        let sigma = &Form::omega_lambda(2, 1).mul_function(&(&y(&[]) * &y(&[1])))
            + &Form::omega_lambda(2, 2).mul_function(&(&GradedPoly::base(2) * &y(&[2])));
        let phi = sigma.d_h(2);
        match dh_solve(&phi, 2, 2).unwrap() {
            DhOutcome::Solved { sigma: s, .. } => assert_eq!(s.d_h(2), phi),
            other => panic!("{:?}", other),
        }
    }
}
