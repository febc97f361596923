//! Generalized (super)symmetries: prolongation, contact preservation, the
//! first variational formula, Noether currents and the divergence and defect
//! relations.

use std::collections::{BTreeMap, HashMap};
use std::sync::RwLock;

use crate::brst::solve::{dh_solve, DhOutcome};
use crate::error::{Error, Result};
use crate::forms::{Contraction, Covector, Form};
use crate::kernel::{
    Derivation, Dir, FieldId, Generator, GradedPoly, Jet, MultiIndex, Parity,
};
use crate::variational::{euler_components, euler_lagrange, lepagean, Lagrangian};

/// A graded derivation determined by its base components `υ^λ` and its
/// characteristic `ϑ^A = υ^A - υ^μ s^A_μ`, prolonged on demand.
pub struct SuperSymmetry {
    n: Dir,
    parity: Parity,
    base: Vec<GradedPoly>,
    characteristic: BTreeMap<FieldId, GradedPoly>,
    perturbation: BTreeMap<Jet, GradedPoly>,
    cache: RwLock<HashMap<Jet, GradedPoly>>,
}

impl Clone for SuperSymmetry {
    fn clone(&self) -> Self {
        SuperSymmetry {
            n: self.n,
            parity: self.parity,
            base: self.base.clone(),
            characteristic: self.characteristic.clone(),
            perturbation: self.perturbation.clone(),
            cache: RwLock::new(self.cache.read().map(|c| c.clone()).unwrap_or_default()),
        }
    }
}

impl std::fmt::Debug for SuperSymmetry {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.debug_struct("SuperSymmetry")
            .field("n", &self.n)
            .field("parity", &self.parity)
            .field("base", &self.base)
            .field("characteristic", &self.characteristic)
            .finish()
    }
}

impl PartialEq for SuperSymmetry {
    fn eq(&self, other: &Self) -> bool {
        self.n == other.n
            && self.parity == other.parity
            && self.base == other.base
            && self.characteristic == other.characteristic
            && self.perturbation == other.perturbation
    }
}

impl SuperSymmetry {
    /// Symmetry with the given base components (`base[λ-1] = υ^λ`) and
    /// characteristic. Checks the parity of every component.
    pub fn new(
        n: Dir,
        parity: Parity,
        base: Vec<GradedPoly>,
        characteristic: BTreeMap<FieldId, GradedPoly>,
    ) -> Result<Self> {
        let mut base = base;
        base.resize(n as usize, GradedPoly::zero());
        for (i, b) in base.iter().enumerate() {
            if !b.is_zero() && b.parity() != Some(parity) {
                return Err(Error::Parity(format!(
                    "base component {} must have the parity of the symmetry",
                    i + 1
                )));
            }
        }
        for (f, t) in &characteristic {
            if !t.is_zero() && t.parity() != Some(parity + f.parity) {
                let what = if parity.is_odd() {
                    "an odd symmetry must flip the parity of"
                } else {
                    "an even symmetry must preserve the parity of"
                };
                return Err(Error::Parity(format!(
                    "{} {:?} field {}",
                    what, f.parity, f.index
                )));
            }
        }
        let characteristic = characteristic
            .into_iter()
            .filter(|(_, p)| !p.is_zero())
            .collect();
        Ok(SuperSymmetry {
            n,
            parity,
            base,
            characteristic,
            perturbation: BTreeMap::new(),
            cache: RwLock::new(HashMap::new()),
        })
    }

    pub fn vertical(
        n: Dir,
        parity: Parity,
        characteristic: BTreeMap<FieldId, GradedPoly>,
    ) -> Result<Self> {
        SuperSymmetry::new(n, parity, Vec::new(), characteristic)
    }

    /// From a plain derivation: `ϑ^A = υ^A - υ^μ s^A_μ` for every listed field.
    pub fn from_derivation(d: &Derivation, n: Dir, fields: &[FieldId]) -> Result<Self> {
        if let Some(msg) = d.parity_violation() {
            return Err(Error::Parity(msg));
        }
        let base: Vec<GradedPoly> = (1..=n).map(|l| d.base_component(l)).collect();
        let mut chars = BTreeMap::new();
        for &f in fields {
            let mut t = d.field_component(f);
            for (mu, b) in base.iter().enumerate() {
                if b.is_zero() {
                    continue;
                }
                let s = GradedPoly::jet(Jet::new(f, MultiIndex::new([mu as Dir + 1])));
                t -= &(b * &s);
            }
            chars.insert(f, t);
        }
        SuperSymmetry::new(n, d.parity, base, chars)
    }

    /// Returns a copy whose prolonged component on `jet` is shifted by `delta`.
    pub fn perturbed(&self, jet: Jet, delta: GradedPoly) -> Self {
        let mut out = self.clone();
        out.perturbation.insert(jet, delta);
        out
    }

    pub fn n(&self) -> Dir {
        self.n
    }

    pub fn parity(&self) -> Parity {
        self.parity
    }

    pub fn base(&self) -> &[GradedPoly] {
        &self.base
    }

    pub fn characteristic(&self) -> &BTreeMap<FieldId, GradedPoly> {
        &self.characteristic
    }

    pub fn characteristic_of(&self, f: FieldId) -> GradedPoly {
        self.characteristic.get(&f).cloned().unwrap_or_default()
    }

    pub fn is_vertical(&self) -> bool {
        self.base.iter().all(GradedPoly::is_zero)
    }

    /// Base components depend on the base coordinates only.
    pub fn is_projectable(&self) -> bool {
        self.base
            .iter()
            .all(|b| b.generators().iter().all(|g| matches!(g, Generator::Base(_))))
    }

    pub fn vertical_part(&self) -> Self {
        let mut out = self.clone();
        out.base = vec![GradedPoly::zero(); self.n as usize];
        out
    }

    /// `υ_H = υ^λ d_λ`.
    pub fn horizontal_part(&self) -> Self {
        let mut out = self.clone();
        out.characteristic.clear();
        out.perturbation.clear();
        out.cache = RwLock::new(HashMap::new());
        out
    }

    /// `d_Λ ϑ^A`, memoized.
    pub fn characteristic_derivative(&self, jet: &Jet) -> GradedPoly {
        if let Ok(cache) = self.cache.read() {
            if let Some(p) = cache.get(jet) {
                return p.clone();
            }
        }
        let value = match jet.index.entries().split_last() {
            None => self.characteristic_of(jet.field),
            Some((&last, rest)) => {
                let lower = Jet::new(jet.field, MultiIndex::new(rest.iter().copied()));
                self.characteristic_derivative(&lower).total_derivative(last)
            }
        };
        if let Ok(mut cache) = self.cache.write() {
            cache.insert(jet.clone(), value.clone());
        }
        value
    }

    /// `υ⌋θ^A_Λ = υ^A_Λ - υ^λ s^A_{λ+Λ}`.
    fn theta_component(&self, jet: &Jet) -> GradedPoly {
        let mut out = self.characteristic_derivative(jet);
        if let Some(p) = self.perturbation.get(jet) {
            out += p;
        }
        out
    }

    /// Prolonged component `υ^A_Λ = d_Λ ϑ^A + υ^μ s^A_{μ+Λ}`. The base
    /// component stands on the left so that `υ⌋dx^μ = υ^μ` and the Cartan
    /// formula gives `L_υ f = υ(f)` also when both factors are odd.
    pub fn prolong(&self, jet: &Jet) -> GradedPoly {
        let mut out = self.theta_component(jet);
        for (mu, b) in self.base.iter().enumerate() {
            if !b.is_zero() {
                out += &(b * &GradedPoly::jet(jet.prolong(mu as Dir + 1)));
            }
        }
        out
    }

    /// The prolonged derivation acting on a function.
    pub fn apply(&self, f: &GradedPoly) -> GradedPoly {
        f.apply_derivation(self.parity, |g| match g {
            Generator::Base(d) => self.base[*d as usize - 1].clone(),
            Generator::Jet(j) => self.prolong(j),
        })
    }

    pub fn lie(&self, form: &Form) -> Form {
        form.lie_derivative(self, self.n)
    }

    /// Largest jet order of the components.
    pub fn jet_order(&self) -> usize {
        self.base
            .iter()
            .chain(self.characteristic.values())
            .map(GradedPoly::jet_order)
            .max()
            .unwrap_or(0)
    }

    fn require_vertical(&self) -> Result<()> {
        if self.is_vertical() {
            return Ok(());
        }
        if !self.is_projectable() {
            return Err(Error::NotProjectable(
                "base components depend on jets, so no divergence condition can hold".into(),
            ));
        }
        Err(Error::NotVertical(
            "base components are nonzero; pass the vertical part".into(),
        ))
    }
}

impl Contraction for SuperSymmetry {
    fn parity(&self) -> Parity {
        self.parity
    }

    fn contract_covector(&self, e: &Covector) -> GradedPoly {
        match e {
            Covector::Dx(d) => self.base[*d as usize - 1].clone(),
            Covector::Theta(j) => self.theta_component(j),
        }
    }
}

/// Residuals `h_{0,1}(L_υ θ^A_Λ)` for every listed field and `|Λ| ≤ r`; all
/// vanish exactly when `υ` preserves the contact ideal.
pub fn contact_preservation_check(
    u: &SuperSymmetry,
    fields: &[FieldId],
    r: usize,
) -> Vec<(Jet, Form)> {
    let mut out = Vec::new();
    for &f in fields {
        for mi in MultiIndex::all_up_to(u.n, r) {
            let jet = Jet::new(f, mi);
            let l = u.lie(&Form::theta(jet.clone()));
            out.push((jet, l.project(0, 1)));
        }
    }
    out
}

/// `L_υ L - [υ_V⌋δL + d_H(h₀(υ⌋Ξ_L)) + d_V(υ_H⌋ω) ∧ 𝓛]`.
pub fn first_variational_residual(u: &SuperSymmetry, l: &Lagrangian) -> Form {
    let n = l.n;
    let lhs = u.lie(&l.form());
    let el = euler_lagrange(l);
    let xi_l = lepagean(l).xi_l;
    let mut rhs = el.contract(&u.vertical_part());
    rhs += &xi_l.contract(u).project(0, n as usize - 1).d_h(n);
    let uh_omega = Form::omega(n).contract(&u.horizontal_part());
    rhs += &uh_omega.d_v().wedge(&Form::function(l.density.clone()));
    &lhs - &rhs
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct NoetherCurrent {
    pub current: Form,
    /// `d_H J + υ⌋δL`, an off-shell identity.
    pub residual: Form,
}

/// `J = h₀(υ⌋Ξ_L) - σ` for a vertical divergence symmetry with
/// `L_υ L = d_H σ` (`σ = 0` when omitted).
pub fn noether_current(
    u: &SuperSymmetry,
    l: &Lagrangian,
    sigma: Option<&Form>,
) -> Result<NoetherCurrent> {
    u.require_vertical()?;
    let n = l.n;
    let sigma = sigma.cloned().unwrap_or_default();
    let mismatch = &u.lie(&l.form()) - &sigma.d_h(n);
    if !mismatch.is_zero() {
        return Err(Error::DivergenceMismatch(format!("{:?}", mismatch)));
    }
    let xi_l = lepagean(l).xi_l;
    let current = &xi_l.contract(u).project(0, n as usize - 1) - &sigma;
    let residual = &current.d_h(n) + &euler_lagrange(l).contract(u);
    Ok(NoetherCurrent { current, residual })
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum DivergenceTest {
    Yes { sigma: Form },
    No { obstruction: Form },
    Undecided { bound: usize },
}

/// Decides whether `L_υ L = d_H σ` for some `σ`.
pub fn divergence_symmetry_test(
    u: &SuperSymmetry,
    l: &Lagrangian,
    bound: usize,
) -> Result<DivergenceTest> {
    u.require_vertical()?;
    let lie = u.lie(&l.form());
    let obstruction = euler_lagrange(&Lagrangian::from_form(&lie, l.n)?);
    if !obstruction.is_zero() {
        return Ok(DivergenceTest::No { obstruction });
    }
    Ok(match dh_solve(&lie, l.n, bound)? {
        DhOutcome::Solved { sigma, .. } => DivergenceTest::Yes { sigma },
        DhOutcome::Obstruction { witness, .. } => DivergenceTest::No {
            obstruction: witness,
        },
        DhOutcome::Undecided { bound } => DivergenceTest::Undecided { bound },
    })
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Defect {
    /// `δ(L_υ L) - L_υ δL`.
    pub defect: Form,
    /// `Σ_{|Λ|>0} (-1)^{|Λ|} d_Λ(∂^Λ_k ϑ^i E_i) θ^k ∧ ω`.
    pub correction: Form,
    /// `-Σ_{|Λ|>0} E_i ∂^Λ_k ϑ^i θ^k_Λ ∧ ω`.
    pub higher: Form,
    /// `defect - correction - higher`.
    pub residual: Form,
}

/// Compares `δ(L_υ L)` with `L_υ δL` for a vertical even symmetry of an even
/// Lagrangian.
pub fn el_symmetry_defect(u: &SuperSymmetry, l: &Lagrangian) -> Result<Defect> {
    u.require_vertical()?;
    if u.parity.is_odd() {
        return Err(Error::Unsupported("the defect relation is stated for even symmetries".into()));
    }
    let odd_field = l
        .fields()
        .into_iter()
        .chain(u.characteristic.keys().copied())
        .any(|f| f.parity.is_odd());
    if odd_field {
        return Err(Error::Unsupported("the defect relation is stated for even fields".into()));
    }
    let n = l.n;
    let omega = Form::omega(n);
    let lie_l = Lagrangian::from_form(&u.lie(&l.form()), n)?;
    let defect = &euler_lagrange(&lie_l) - &u.lie(&euler_lagrange(l));
    let e = euler_components(l);
    let mut correction = Form::zero();
    let mut higher = Form::zero();
    for (i, theta_i) in &u.characteristic {
        let Some(e_i) = e.get(i) else { continue };
        for g in theta_i.generators() {
            let Generator::Jet(j) = &g else { continue };
            if j.order() == 0 {
                continue;
            }
            let dtheta = theta_i.partial(&g);
            let prod = &dtheta * e_i;
            let moved = prod.total_derivative_multi(&j.index);
            let piece = Form::theta(Jet::order0(j.field))
                .mul_function(&moved)
                .wedge(&omega);
            if j.order() % 2 == 1 {
                correction -= &piece;
            } else {
                correction += &piece;
            }
            higher -= &Form::theta(j.clone()).mul_function(&prod).wedge(&omega);
        }
    }
    let residual = &(&defect - &correction) - &higher;
    Ok(Defect {
        defect,
        correction,
        higher,
        residual,
    })
}
