//! The variational column: the projector `ρ`, the Euler–Lagrange operator
//! `δ = ρ ∘ d`, the Lepagean form `Ξ` and variational triviality.

use std::collections::{BTreeMap, BTreeSet};

use crate::brst::solve::{dh_solve, DhOutcome};
use crate::error::{Error, Result};
use crate::forms::{CoordinateVector, Covector, Form};
use crate::kernel::{rat, Dir, FieldId, Generator, GradedPoly, Jet, MultiIndex, Rational};

/// Lagrangian `L = 𝓛 ω` on an `n`-dimensional base.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Lagrangian {
    pub n: Dir,
    pub density: GradedPoly,
}

impl Lagrangian {
    pub fn new(n: Dir, density: GradedPoly) -> Self {
        Lagrangian { n, density }
    }

    pub fn form(&self) -> Form {
        Form::omega(self.n).mul_function(&self.density)
    }

    /// Reads a `(0, n)`-form as a Lagrangian.
    pub fn from_form(form: &Form, n: Dir) -> Result<Self> {
        expect_bidegree(form, 0, n as usize)?;
        let omega: Vec<Covector> = (1..=n).map(Covector::Dx).collect();
        Ok(Lagrangian::new(n, form.coefficient(&omega)))
    }

    pub fn jet_order(&self) -> usize {
        self.density.jet_order()
    }

    /// Fields whose jets occur in the density.
    pub fn fields(&self) -> BTreeSet<FieldId> {
        self.density
            .generators()
            .into_iter()
            .filter_map(|g| g.jet().map(|j| j.field))
            .collect()
    }
}

pub(crate) fn expect_bidegree(form: &Form, k: usize, m: usize) -> Result<()> {
    for (kk, mm) in form.degrees() {
        if (kk, mm) != (k, m) {
            return Err(Error::Bidegree {
                expected: format!("({}, {})", k, m),
                found: format!("({}, {})", kk, mm),
            });
        }
    }
    Ok(())
}

fn contact_jets(form: &Form) -> BTreeSet<Jet> {
    form.terms()
        .keys()
        .flat_map(|w| w.iter())
        .filter_map(|e| match e {
            Covector::Theta(j) => Some(j.clone()),
            Covector::Dx(_) => None,
        })
        .collect()
}

/// `ρ̄(φ) = Σ (-1)^{|Λ|} θ^A ∧ d_Λ(∂^Λ_A ⌋ φ)`.
fn rho_bar(form: &Form) -> Form {
    let mut out = Form::zero();
    for jet in contact_jets(form) {
        let inner = form.contract(&CoordinateVector(jet.clone()));
        let mut moved = inner;
        for &d in jet.index.entries() {
            moved = moved.total_derivative(d);
        }
        let piece = Form::theta(Jet::order0(jet.field)).wedge(&moved);
        if jet.order() % 2 == 1 {
            out -= &piece;
        } else {
            out += &piece;
        }
    }
    out
}

/// The projector `ρ = Σ_{k>0} (1/k) ρ̄ ∘ h_k` on forms of horizontal degree `n`.
pub fn rho(form: &Form, n: Dir) -> Result<Form> {
    let mut by_k: BTreeMap<usize, Form> = BTreeMap::new();
    for (k, m) in form.degrees() {
        if m != n as usize || k == 0 {
            return Err(Error::Bidegree {
                expected: format!("(k > 0, {})", n),
                found: format!("({}, {})", k, m),
            });
        }
        by_k.insert(k, form.project(k, m));
    }
    let mut out = Form::zero();
    for (k, part) in by_k {
        out += &rho_bar(&part).scale(&Rational::new(1.into(), (k as i64).into()));
    }
    Ok(out)
}

/// `δL = ρ(dL)`.
pub fn euler_lagrange(l: &Lagrangian) -> Form {
    let dl = l.form().d(l.n);
    rho(&dl, l.n).expect("dL has bidegree (1, n)")
}

/// `E_A = Σ_Λ (-1)^{|Λ|} d_Λ(∂^Λ_A 𝓛)` for each field in the density, so
/// that `δL = Σ θ^A ∧ E_A ω`.
pub fn euler_components(l: &Lagrangian) -> BTreeMap<FieldId, GradedPoly> {
    let mut out: BTreeMap<FieldId, GradedPoly> = BTreeMap::new();
    for g in l.density.generators() {
        let Generator::Jet(j) = &g else { continue };
        let term = l.density.partial(&g).total_derivative_multi(&j.index);
        let entry = out.entry(j.field).or_default();
        if j.order() % 2 == 1 {
            *entry -= &term;
        } else {
            *entry += &term;
        }
    }
    out.retain(|_, p| !p.is_zero());
    out
}

/// Lepagean data: `Ξ` with all free functions set to zero, and `Ξ_L = Ξ + L`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Lepagean {
    pub xi: Form,
    pub xi_l: Form,
}

/// Builds `Ξ = Σ θ^A_Λ ∧ F^{λΛ}_A ω_λ` from the recursion
/// `F^Λ_A = ∂^Λ_A 𝓛 - d_λ F^{λΛ}_A` over symmetric multi-indices.
pub fn lepagean(l: &Lagrangian) -> Lepagean {
    let n = l.n;
    let r = l.jet_order();
    let indices = MultiIndex::all_up_to(n, r);
    let mut xi = Form::zero();
    for field in l.fields() {
        // F over multisets, normalized by the number of orderings
        let mut f: BTreeMap<MultiIndex, GradedPoly> = BTreeMap::new();
        for mi in indices.iter().rev() {
            let gen = Generator::Jet(Jet::new(field, mi.clone()));
            let weight = Rational::new(1.into(), (mi.orderings() as i64).into());
            let mut value = l.density.partial(&gen).scale(&weight);
            if mi.len() < r {
                for dir in 1..=n {
                    if let Some(up) = f.get(&mi.append(dir)) {
                        value -= &up.total_derivative(dir);
                    }
                }
            }
            f.insert(mi.clone(), value);
        }
        for mi in indices.iter().filter(|mi| mi.len() < r) {
            let theta = Form::theta(Jet::new(field, mi.clone()));
            let count = rat(mi.orderings() as i64);
            for dir in 1..=n {
                let coeff = f[&mi.append(dir)].scale(&count);
                if coeff.is_zero() {
                    continue;
                }
                xi += &theta
                    .wedge(&Form::function(coeff))
                    .wedge(&Form::omega_lambda(n, dir));
            }
        }
    }
    let xi_l = &xi + &l.form();
    Lepagean { xi, xi_l }
}

/// `dL - δL + d_H Ξ`, zero whenever the decomposition holds.
pub fn check_decomposition(l: &Lagrangian) -> Form {
    let dl = l.form().d(l.n);
    let el = euler_lagrange(l);
    let xi = lepagean(l).xi;
    &(&dl - &el) + &xi.d_h(l.n)
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Triviality {
    /// `L = base + d_H ξ`; the base part is zero on `ℝⁿ`.
    Trivial { xi: Form, base: Form },
    Nontrivial { obstruction: Form },
    Undecided { bound: usize },
}

pub fn triviality_test(l: &Lagrangian, bound: usize) -> Triviality {
    let el = euler_lagrange(l);
    if !el.is_zero() {
        return Triviality::Nontrivial { obstruction: el };
    }
    match dh_solve(&l.form(), l.n, bound) {
        Ok(DhOutcome::Solved { sigma, .. }) => Triviality::Trivial {
            xi: sigma,
            base: Form::zero(),
        },
        Ok(DhOutcome::Obstruction { witness, .. }) => Triviality::Nontrivial { obstruction: witness },
        Ok(DhOutcome::Undecided { .. }) | Err(_) => Triviality::Undecided { bound },
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::kernel::{ratio, Universe};

    fn y(idx: &[Dir]) -> GradedPoly {
        GradedPoly::jet(Jet::new(FieldId::even(0), MultiIndex::new(idx.iter().copied())))
    }

    fn theta(idx: &[Dir]) -> Form {
        Form::theta(Jet::new(FieldId::even(0), MultiIndex::new(idx.iter().copied())))
    }

    fn free() -> Lagrangian {
        Lagrangian::new(1, (&y(&[1]) * &y(&[1])).scale(&ratio(1, 2)))
    }

    #[test]
    fn free_scalar_euler_lagrange() {
        let el = euler_lagrange(&free());
        let expected = theta(&[]).wedge(&Form::dx(1)).mul_function(&-y(&[1, 1]));
        assert_eq!(el, expected);
    }

    #[test]
    fn jet_free_density() {
        let l = Lagrangian::new(2, y(&[]));
        assert_eq!(euler_lagrange(&l), theta(&[]).wedge(&Form::omega(2)));
        assert!(lepagean(&l).xi.is_zero());
    }

    #[test]
    fn rho_integrates_by_parts() {
        // ρ(y θ_1 ∧ dx) = -y_1 θ ∧ dx
        let f = theta(&[1]).wedge(&Form::dx(1)).mul_function(&y(&[]));
        let expected = theta(&[]).wedge(&Form::dx(1)).mul_function(&-y(&[1]));
        assert_eq!(rho(&f, 1).unwrap(), expected);
        let x = GradedPoly::base(1);
        let g = theta(&[]).wedge(&Form::dx(1)).mul_function(&x);
        assert_eq!(rho(&g, 1).unwrap(), g);
        assert!(rho(&Form::dx(1), 1).is_err());
    }

    #[test]
    fn free_scalar_lepagean() {
        let lep = lepagean(&free());
        assert_eq!(lep.xi, theta(&[]).mul_function(&y(&[1])));
        assert!(check_decomposition(&free()).is_zero());
    }

    #[test]
    fn first_order_lepagean_is_poincare_cartan() {
        // 𝓛 = y_1 y_2 + x1 y^2 on n = 2
        let dens = &(&y(&[1]) * &y(&[2])) + &(&GradedPoly::base(1) * &(&y(&[]) * &y(&[])));
        let l = Lagrangian::new(2, dens.clone());
        let mut expected = Form::zero();
        for lam in 1..=2 {
            let g = Generator::Jet(Jet::new(FieldId::even(0), MultiIndex::new([lam])));
            expected += &theta(&[])
                .wedge(&Form::function(dens.partial(&g)))
                .wedge(&Form::omega_lambda(2, lam));
        }
        assert_eq!(lepagean(&l).xi, expected);
        assert!(check_decomposition(&l).is_zero());
    }

    #[test]
    fn second_order_decomposition() {
        // 𝓛 = y_{11} y_{12} + y y_{22} on n = 2
        let dens = &(&y(&[1, 1]) * &y(&[1, 2])) + &(&y(&[]) * &y(&[2, 2]));
        assert!(check_decomposition(&Lagrangian::new(2, dens)).is_zero());
    }

    #[test]
    fn components_match_rho() {
        let u = Universe::standard(2, 1, 1);
        let c = |idx: &[Dir]| GradedPoly::jet(Jet::new(FieldId::odd(0), MultiIndex::new(idx.iter().copied())));
        let dens = &(&(&c(&[1]) * &c(&[2])) * &y(&[])) + &(&y(&[1, 2]) * &y(&[1]));
        let l = Lagrangian::new(u.n, dens);
        let mut expected = Form::zero();
        for (f, e) in euler_components(&l) {
            expected += &Form::theta(Jet::order0(f))
                .wedge(&Form::function(e))
                .wedge(&Form::omega(u.n));
        }
        assert_eq!(euler_lagrange(&l), expected);
    }
}
