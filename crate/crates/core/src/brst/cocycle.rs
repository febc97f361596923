//! Iterated cocycles of the `(s_υ, d_H)` bicomplex: `φ` is closed when
//! `d_H φ = 0` and `s_υ φ` is `d_H`-exact, and exact when
//! `φ = s_υ ξ + d_H σ` with `d_H ξ = 0`.

use std::collections::BTreeSet;

use crate::brst::linsolve::{combine, solve_combination};
use crate::brst::s_operator;
use crate::brst::solve::{dh_solve, DhOutcome};
use crate::error::{Error, Result};
use crate::forms::Form;
use crate::kernel::{Dir, Generator, GradedPoly, Jet, MultiIndex, Universe};
use crate::symmetry::SuperSymmetry;
use crate::variational::{euler_lagrange, Lagrangian};

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Cocycle {
    Neither { reason: String, witness: Form },
    /// Closed and provably not exact.
    Closed { reason: String },
    Exact { xi: Form, sigma: Form },
    Undecided { closed: bool, bound: usize },
}

fn delta(form: &Form, n: Dir) -> Result<Form> {
    Ok(euler_lagrange(&Lagrangian::from_form(form, n)?))
}

fn generator_weight(u: &Universe, g: &Generator) -> Vec<i64> {
    let n = u.n as usize;
    match g {
        Generator::Base(d) => {
            let mut w = vec![0; n];
            w[*d as usize - 1] = -1;
            w
        }
        Generator::Jet(j) => {
            let mut w = u.weight(j.field);
            for &d in j.index.entries() {
                w[d as usize - 1] += 1;
            }
            w
        }
    }
}

fn monomial_weights(u: &Universe, p: &GradedPoly) -> BTreeSet<Vec<i64>> {
    p.terms()
        .keys()
        .map(|m| {
            let mut w = vec![0; u.n as usize];
            for (g, e) in m.even_factors() {
                for (a, b) in w.iter_mut().zip(generator_weight(u, g)) {
                    *a += b * *e as i64;
                }
            }
            for j in m.odd_factors() {
                for (a, b) in w.iter_mut().zip(generator_weight(u, &Generator::Jet(j.clone()))) {
                    *a += b;
                }
            }
            w
        })
        .collect()
}

/// `υ` maps every field to a combination of its own weight.
fn preserves_weight(sym: &SuperSymmetry, u: &Universe) -> bool {
    sym.characteristic().iter().all(|(f, t)| {
        let ws = monomial_weights(u, t);
        ws.is_empty() || (ws.len() == 1 && ws.contains(&u.weight(*f)))
    })
}

/// Monomials of the given charge, jet order `≤ order`, degree `≤ degree` and
/// x-degree `≤ xcap`.
fn charged_monomials(
    u: &Universe,
    charge: i64,
    order: usize,
    degree: usize,
    xcap: usize,
) -> Vec<GradedPoly> {
    let mut pool: Vec<Generator> = (1..=u.n).map(Generator::Base).collect();
    for f in u.field_ids() {
        for mi in MultiIndex::all_up_to(u.n, order) {
            pool.push(Generator::Jet(Jet::new(f, mi)));
        }
    }
    let charge_of = |g: &Generator| g.jet().map(|j| u.charge(j.field)).unwrap_or(0);
    let nonneg = pool.iter().all(|g| charge_of(g) >= 0);
    let mut out = Vec::new();
    #[allow(clippy::too_many_arguments)]
    fn go(
        pool: &[Generator],
        start: usize,
        cur: GradedPoly,
        left: usize,
        xs: usize,
        ch: i64,
        target: i64,
        nonneg: bool,
        xcap: usize,
        charge_of: &dyn Fn(&Generator) -> i64,
        out: &mut Vec<GradedPoly>,
    ) {
        if ch == target {
            out.push(cur.clone());
        }
        if left == 0 || (nonneg && ch > target) {
            return;
        }
        for i in start..pool.len() {
            let g = &pool[i];
            let is_x = matches!(g, Generator::Base(_));
            if is_x && xs >= xcap {
                continue;
            }
            let next = &cur * &GradedPoly::generator(g.clone());
            if next.is_zero() {
                continue;
            }
            go(
                pool,
                i,
                next,
                left - 1,
                xs + is_x as usize,
                ch + charge_of(g),
                target,
                nonneg,
                xcap,
                charge_of,
                out,
            );
        }
    }
    go(
        &pool,
        0,
        GradedPoly::one(),
        degree,
        0,
        0,
        charge,
        nonneg,
        xcap,
        &charge_of,
        &mut out,
    );
    out
}

fn max_x_degree(form: &Form) -> usize {
    form.terms()
        .values()
        .flat_map(|f| f.terms().keys())
        .map(|m| m.x_degree() as usize)
        .max()
        .unwrap_or(0)
}

fn max_degree(form: &Form) -> usize {
    form.terms().values().map(|f| f.degree() as usize).max().unwrap_or(0)
}

/// Classifies a horizontal form of homogeneous degree and charge.
pub fn iterated_cocycle_check(
    sym: &SuperSymmetry,
    universe: &Universe,
    phi: &Form,
    bound: usize,
) -> Result<Cocycle> {
    let n = sym.n();
    let m = match phi.bidegree() {
        Some((0, m)) => m,
        other => {
            return Err(Error::Bidegree {
                expected: "(0, m)".into(),
                found: format!("{:?}", other),
            })
        }
    };
    let mut charges = BTreeSet::new();
    for f in phi.terms().values() {
        match universe.poly_charge(f) {
            Some(c) => {
                charges.insert(c);
            }
            None => return Err(Error::Unsupported("form is not homogeneous in charge".into())),
        }
    }
    if charges.len() > 1 {
        return Err(Error::Unsupported("form is not homogeneous in charge".into()));
    }
    let charge = charges.into_iter().next().unwrap_or(0);
    if phi.is_zero() {
        return Ok(Cocycle::Exact {
            xi: Form::zero(),
            sigma: Form::zero(),
        });
    }
    let s_phi = s_operator(sym, phi)?;
    if m < n as usize {
        let dh = phi.d_h(n);
        if !dh.is_zero() {
            return Ok(Cocycle::Neither {
                reason: "d_H φ is nonzero".into(),
                witness: dh,
            });
        }
        if m == 0 {
            if !s_phi.is_zero() {
                return Ok(Cocycle::Neither {
                    reason: "s φ is nonzero in degree 0".into(),
                    witness: s_phi,
                });
            }
            return Ok(Cocycle::Closed {
                reason: "a nonzero constant is never d_H- or s-exact".into(),
            });
        }
        return Ok(match dh_solve(phi, n, bound)? {
            DhOutcome::Solved { sigma, .. } => Cocycle::Exact {
                xi: Form::zero(),
                sigma,
            },
            DhOutcome::Obstruction { reason, witness } => Cocycle::Neither { reason, witness },
            DhOutcome::Undecided { bound } => Cocycle::Undecided { closed: true, bound },
        });
    }
    let obstruction = delta(&s_phi, n)?;
    if !obstruction.is_zero() {
        return Ok(Cocycle::Neither {
            reason: "s φ is not d_H-exact".into(),
            witness: obstruction,
        });
    }
    let target = delta(phi, n)?;
    let filter = preserves_weight(sym, universe);
    let mut wanted = BTreeSet::new();
    for f in phi.terms().values() {
        for w in monomial_weights(universe, f) {
            wanted.insert(w);
        }
    }
    let omega = Form::omega(n);
    let order = phi.jet_order();
    for level in 0..=bound {
        let mut basis: Vec<Form> = Vec::new();
        for mono in charged_monomials(
            universe,
            charge - 1,
            order + level,
            max_degree(phi) + level,
            max_x_degree(phi) + level,
        ) {
            if filter && !monomial_weights(universe, &mono).is_subset(&wanted) {
                continue;
            }
            basis.push(omega.mul_function(&mono));
        }
        let mut images = Vec::with_capacity(basis.len());
        for b in &basis {
            images.push(delta(&s_operator(sym, b)?, n)?);
        }
        let Some(x) = solve_combination(&images, &target) else {
            continue;
        };
        let xi = combine(&basis, &x);
        let rest = phi - &s_operator(sym, &xi)?;
        match dh_solve(&rest, n, bound)? {
            DhOutcome::Solved { sigma, .. } => return Ok(Cocycle::Exact { xi, sigma }),
            DhOutcome::Obstruction { .. } | DhOutcome::Undecided { .. } => continue,
        }
    }
    Ok(Cocycle::Undecided {
        closed: true,
        bound,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::brst::{BrstModel, StructureConstants};
    use crate::random::{self, PolyShape};

    #[test]
    fn constants_are_closed_not_exact() {
        let (m, univ) = BrstModel::standalone(1, StructureConstants::levi_civita());
        let out = iterated_cocycle_check(&m.build(), &univ, &Form::one(), 2).unwrap();
        assert!(matches!(out, Cocycle::Closed { .. }));
    }

    #[test]
    fn base_one_form_is_exact() {
        let (m, univ) = BrstModel::standalone(2, StructureConstants::abelian(1));
        match iterated_cocycle_check(&m.build(), &univ, &Form::dx(1), 2).unwrap() {
            Cocycle::Exact { xi, sigma } => {
                assert!(xi.is_zero());
                assert_eq!(sigma.d_h(2), Form::dx(1));
            }
            other => panic!("{:?}", other),
        }
    }

    #[test]
    fn constructed_top_forms_are_exact() {
        let (m, univ) = BrstModel::standalone(1, StructureConstants::levi_civita());
        let u = m.build();
        let shape = PolyShape {
            max_order: 1,
            max_degree: 2,
            max_terms: 2,
            ..PolyShape::default()
        };
        let mut r = random::rng(21);
        for _ in 0..4 {
            let xi = random::charged_horizontal(&mut r, &univ, &shape, 1, 0);
            let sigma = random::charged_horizontal(&mut r, &univ, &shape, 0, 1);
            let phi = &s_operator(&u, &xi).unwrap() + &sigma.d_h(1);
            if phi.is_zero() {
                continue;
            }
            match iterated_cocycle_check(&u, &univ, &phi, 2).unwrap() {
                Cocycle::Exact { xi, sigma } => {
                    let back = &s_operator(&u, &xi).unwrap() + &sigma.d_h(1);
                    assert_eq!(back, phi);
                }
                other => panic!("{:?}", other),
            }
        }
    }
}
