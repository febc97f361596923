//! Bigraded exterior forms in the adapted basis `(dx^λ, θ^A_Λ)`.
//!
//! A term `f · e₁∧…∧e_k` keeps its function coefficient on the left. Two basis
//! covectors exchange with the sign `(-1)^{1 + [a][b]}`, so `dx` and the contact
//! covectors of even fields anticommute and square to zero, while contact
//! covectors of odd fields commute and may repeat.

use std::collections::BTreeMap;
use std::fmt;
use std::ops::{Add, AddAssign, Neg, Sub, SubAssign};

use crate::error::{Error, Result};
use crate::kernel::{rat, Dir, Generator, GradedPoly, Jet, Parity, Rational};

#[derive(Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Covector {
    Theta(Jet),
    Dx(Dir),
}

impl Covector {
    /// Grassmann parity, not counting the form degree.
    pub fn parity(&self) -> Parity {
        match self {
            Covector::Theta(j) => j.parity(),
            Covector::Dx(_) => Parity::Even,
        }
    }

    /// `true` when `a ∧ b = -(b ∧ a)`.
    fn anticommutes(&self, other: &Covector) -> bool {
        !self.parity().both_odd(other.parity())
    }

    fn repeatable(&self) -> bool {
        self.parity().is_odd()
    }
}

impl fmt::Debug for Covector {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Covector::Theta(j) => write!(f, "θ({:?})", j),
            Covector::Dx(d) => write!(f, "dx{}", d),
        }
    }
}

pub type Wedge = Vec<Covector>;

fn wedge_parity(w: &[Covector]) -> Parity {
    Parity::from_count(w.iter().filter(|e| e.parity().is_odd()).count())
}

/// Merges two canonical wedge monomials. Returns the sign flag and the result,
/// or `None` when a non-repeatable covector would occur twice.
fn merge(a: &[Covector], b: &[Covector]) -> Option<(bool, Wedge)> {
    let mut out = Vec::with_capacity(a.len() + b.len());
    let mut negative = false;
    let (mut i, mut j) = (0, 0);
    while i < a.len() || j < b.len() {
        if j == b.len() || (i < a.len() && a[i] <= b[j]) {
            if j < b.len() && a[i] == b[j] && !a[i].repeatable() {
                return None;
            }
            out.push(a[i].clone());
            i += 1;
        } else {
            // b[j] jumps over a[i..]
            for x in &a[i..] {
                if x.anticommutes(&b[j]) {
                    negative = !negative;
                }
            }
            out.push(b[j].clone());
            j += 1;
        }
    }
    Some((negative, out))
}

/// Exterior form: a finite sum of `f · E` with `E` a canonical wedge monomial.
#[derive(Clone, PartialEq, Eq, Hash, Default)]
pub struct Form {
    terms: BTreeMap<Wedge, GradedPoly>,
}

impl Form {
    pub fn zero() -> Self {
        Form::default()
    }

    pub fn function(f: GradedPoly) -> Self {
        Form::monomial(f, Vec::new())
    }

    pub fn one() -> Self {
        Form::function(GradedPoly::one())
    }

    /// `f · E` for an already canonical `E`.
    pub fn monomial(f: GradedPoly, wedge: Wedge) -> Self {
        let mut terms = BTreeMap::new();
        if !f.is_zero() {
            terms.insert(wedge, f);
        }
        Form { terms }
    }

    pub fn covector(e: Covector) -> Self {
        Form::monomial(GradedPoly::one(), vec![e])
    }

    pub fn dx(dir: Dir) -> Self {
        Form::covector(Covector::Dx(dir))
    }

    pub fn theta(jet: Jet) -> Self {
        Form::covector(Covector::Theta(jet))
    }

    /// `ω = dx¹ ∧ … ∧ dxⁿ`.
    pub fn omega(n: Dir) -> Self {
        Form::monomial(GradedPoly::one(), (1..=n).map(Covector::Dx).collect())
    }

    /// `ω_λ = ∂_λ ⌋ ω`, so that `dx^λ ∧ ω_λ = ω`.
    pub fn omega_lambda(n: Dir, dir: Dir) -> Self {
        let sign = if (dir - 1) % 2 == 1 { rat(-1) } else { rat(1) };
        Form::monomial(
            GradedPoly::constant(sign),
            (1..=n).filter(|&d| d != dir).map(Covector::Dx).collect(),
        )
    }

    /// Wedge of covectors in the given (not necessarily canonical) order.
    pub fn product_of(covectors: &[Covector]) -> Self {
        covectors
            .iter()
            .fold(Form::one(), |acc, e| acc.wedge(&Form::covector(e.clone())))
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn terms(&self) -> &BTreeMap<Wedge, GradedPoly> {
        &self.terms
    }

    pub fn coefficient(&self, wedge: &[Covector]) -> GradedPoly {
        self.terms.get(wedge).cloned().unwrap_or_default()
    }

    pub fn add_term(&mut self, wedge: Wedge, f: &GradedPoly) {
        if f.is_zero() {
            return;
        }
        let entry = self.terms.entry(wedge).or_default();
        *entry += f;
        if entry.is_zero() {
            self.terms.retain(|_, v| !v.is_zero());
        }
    }

    fn add_signed(&mut self, negative: bool, wedge: Wedge, f: &GradedPoly) {
        if negative {
            self.add_term(wedge, &-f);
        } else {
            self.add_term(wedge, f);
        }
    }

    pub fn scale(&self, c: &Rational) -> Form {
        let mut out = Form::zero();
        for (w, f) in &self.terms {
            out.add_term(w.clone(), &f.scale(c));
        }
        out
    }

    /// `f ∧ φ` for a function `f`.
    pub fn mul_function(&self, f: &GradedPoly) -> Form {
        let mut out = Form::zero();
        for (w, g) in &self.terms {
            out.add_term(w.clone(), &(f * g));
        }
        out
    }

    /// Graded wedge product: `(f A) ∧ (g B) = (-1)^{[A][g]} f g (A ∧ B)`.
    pub fn wedge(&self, other: &Form) -> Form {
        let mut out = Form::zero();
        for (a, f) in &self.terms {
            let pa = wedge_parity(a);
            for (b, g) in &other.terms {
                let Some((negative, w)) = merge(a, b) else {
                    continue;
                };
                let (g_even, g_odd) = g.split_parity();
                let mut coeff = f * &g_even;
                if pa.is_odd() {
                    coeff -= &(f * &g_odd);
                } else {
                    coeff += &(f * &g_odd);
                }
                out.add_signed(negative, w, &coeff);
            }
        }
        out
    }

    /// `(contact degree, horizontal degree)` of a wedge monomial.
    pub fn bidegree_of(w: &[Covector]) -> (usize, usize) {
        let m = w.iter().filter(|e| matches!(e, Covector::Dx(_))).count();
        (w.len() - m, m)
    }

    /// Common bidegree of all terms; `None` if mixed. Zero reports `(0, 0)`.
    pub fn bidegree(&self) -> Option<(usize, usize)> {
        let mut it = self.terms.keys().map(|w| Form::bidegree_of(w));
        let first = it.next().unwrap_or((0, 0));
        it.all(|b| b == first).then_some(first)
    }

    pub fn degrees(&self) -> Vec<(usize, usize)> {
        let mut v: Vec<_> = self.terms.keys().map(|w| Form::bidegree_of(w)).collect();
        v.sort();
        v.dedup();
        v
    }

    /// The `(k, m)`-homogeneous part.
    pub fn project(&self, k: usize, m: usize) -> Form {
        Form {
            terms: self
                .terms
                .iter()
                .filter(|(w, _)| Form::bidegree_of(w) == (k, m))
                .map(|(w, f)| (w.clone(), f.clone()))
                .collect(),
        }
    }

    /// The 0-form part as a function.
    pub fn function_part(&self) -> GradedPoly {
        self.coefficient(&[])
    }

    pub fn jet_order(&self) -> usize {
        self.terms
            .iter()
            .map(|(w, f)| {
                let theta = w
                    .iter()
                    .filter_map(|e| match e {
                        Covector::Theta(j) => Some(j.order()),
                        Covector::Dx(_) => None,
                    })
                    .max()
                    .unwrap_or(0);
                theta.max(f.jet_order())
            })
            .max()
            .unwrap_or(0)
    }

    /// Grassmann parity of every term, if homogeneous.
    pub fn parity(&self) -> Option<Parity> {
        let mut out: Option<Parity> = None;
        for (w, f) in &self.terms {
            let pf = f.parity()?;
            let p = pf + wedge_parity(w);
            match out {
                None => out = Some(p),
                Some(q) if q != p => return None,
                _ => {}
            }
        }
        Some(out.unwrap_or(Parity::Even))
    }

    /// Applies `map` to every coefficient.
    pub fn map_coefficients<F: FnMut(&GradedPoly) -> GradedPoly>(&self, mut map: F) -> Form {
        let mut out = Form::zero();
        for (w, f) in &self.terms {
            out.add_term(w.clone(), &map(f));
        }
        out
    }

    /// Exterior differential, built from the differentials of the generators
    /// `dx^λ`, `ds_Λ = θ_Λ + s_{λ+Λ} dx^λ`, `dθ_Λ = dx^λ ∧ θ_{λ+Λ}`.
    pub fn d(&self, n: Dir) -> Form {
        let mut out = Form::zero();
        for (w, f) in &self.terms {
            let tail = Form::monomial(GradedPoly::one(), w.clone());
            let mut df = Form::zero();
            for g in f.generators() {
                let dg = generator_differential(&g, n);
                df += &dg.wedge(&Form::function(f.partial(&g)));
            }
            out += &df.wedge(&tail);
            // f ∧ d(e₁∧…∧e_k) with sign (-1)^{i} for the i-th slot
            for (i, e) in w.iter().enumerate() {
                let de = covector_differential(e, n);
                if de.is_zero() {
                    continue;
                }
                let head = Form::monomial(f.clone(), w[..i].to_vec());
                let rest = Form::monomial(GradedPoly::one(), w[i + 1..].to_vec());
                let piece = head.wedge(&de).wedge(&rest);
                if i % 2 == 1 {
                    out -= &piece;
                } else {
                    out += &piece;
                }
            }
        }
        out
    }

    /// Action of the total derivative `d_λ` on a form: coefficients by the
    /// total derivative, `θ_Λ ↦ θ_{λ+Λ}`, `dx ↦ 0`.
    pub fn total_derivative(&self, dir: Dir) -> Form {
        let mut out = Form::zero();
        for (w, f) in &self.terms {
            out.add_term(w.clone(), &f.total_derivative(dir));
            for (i, e) in w.iter().enumerate() {
                if let Covector::Theta(j) = e {
                    let lifted = Covector::Theta(j.prolong(dir));
                    let mut seq: Vec<Covector> = w.clone();
                    seq[i] = lifted;
                    out += &Form::product_of(&seq).mul_function(f);
                }
            }
        }
        out
    }

    /// `d_H φ = dx^λ ∧ d_λ φ`.
    pub fn d_h(&self, n: Dir) -> Form {
        let mut out = Form::zero();
        for dir in 1..=n {
            out += &Form::dx(dir).wedge(&self.total_derivative(dir));
        }
        out
    }

    /// `d_V φ = θ^A_Λ ∧ ∂^Λ_A φ`.
    pub fn d_v(&self) -> Form {
        let mut out = Form::zero();
        for (w, f) in &self.terms {
            let tail = Form::monomial(GradedPoly::one(), w.clone());
            for g in f.generators() {
                if let Generator::Jet(j) = &g {
                    let piece = Form::theta(j.clone())
                        .wedge(&Form::function(f.partial(&g)))
                        .wedge(&tail);
                    out += &piece;
                }
            }
        }
        out
    }

    pub fn split_d(&self, n: Dir) -> (Form, Form) {
        (self.d_h(n), self.d_v())
    }

    /// Interior product with a graded vector `u`. Contracting a form with a
    /// nonzero 0-form part is an error.
    pub fn interior<C: Contraction + ?Sized>(&self, u: &C) -> Result<Form> {
        if !self.function_part().is_zero() {
            return Err(Error::ContractZeroForm);
        }
        Ok(self.contract(u))
    }

    /// Interior product treating the 0-form part as contributing nothing.
    pub fn contract<C: Contraction + ?Sized>(&self, u: &C) -> Form {
        let pu = u.parity();
        let mut cache: BTreeMap<Covector, GradedPoly> = BTreeMap::new();
        let mut out = Form::zero();
        for (w, f) in &self.terms {
            // u⌋(f E) = (-1)^{[f][u]} f (u⌋E) for each parity piece of f
            let (f_even, f_odd) = f.split_parity();
            let f_signed = if pu.is_odd() { &f_even - &f_odd } else { f.clone() };
            let mut prefix_sign = false;
            for (j, e) in w.iter().enumerate() {
                let g = cache
                    .entry(e.clone())
                    .or_insert_with(|| u.contract_covector(e))
                    .clone();
                if !g.is_zero() {
                    // move g to the left past e_0..e_{j-1}: (-1)^{p_i [g]}
                    let (g_even, g_odd) = g.split_parity();
                    let head_odd = wedge_parity(&w[..j]).is_odd();
                    let moved = if head_odd { &g_even - &g_odd } else { g };
                    let mut rest = w.clone();
                    rest.remove(j);
                    let coeff = &f_signed * &moved;
                    out.add_signed(prefix_sign, rest, &coeff);
                }
                // passing e_j: (-1)^{1 + [e_j][u]}
                if !(e.parity().both_odd(pu)) {
                    prefix_sign = !prefix_sign;
                }
            }
        }
        out
    }

    /// Lie derivative `L_u φ = u⌋dφ + d(u⌋φ)`.
    pub fn lie_derivative<C: Contraction + ?Sized>(&self, u: &C, n: Dir) -> Form {
        let mut out = self.d(n).contract(u);
        out += &self.contract(u).d(n);
        out
    }
}

/// `dg` for a function generator.
pub fn generator_differential(g: &Generator, n: Dir) -> Form {
    match g {
        Generator::Base(d) => Form::dx(*d),
        Generator::Jet(j) => {
            let mut out = Form::theta(j.clone());
            for dir in 1..=n {
                out += &Form::monomial(GradedPoly::jet(j.prolong(dir)), vec![Covector::Dx(dir)]);
            }
            out
        }
    }
}

fn covector_differential(e: &Covector, n: Dir) -> Form {
    match e {
        Covector::Dx(_) => Form::zero(),
        Covector::Theta(j) => {
            let mut out = Form::zero();
            for dir in 1..=n {
                out += &Form::dx(dir).wedge(&Form::theta(j.prolong(dir)));
            }
            out
        }
    }
}

/// A graded vector field that can be contracted with the basis covectors.
pub trait Contraction {
    fn parity(&self) -> Parity;
    fn contract_covector(&self, e: &Covector) -> GradedPoly;
}

/// The coordinate vector `∂^Λ_A` dual to `dy^A_Λ`: contracts `θ^A_Λ` to 1 and
/// everything else to 0.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CoordinateVector(pub Jet);

impl Contraction for CoordinateVector {
    fn parity(&self) -> Parity {
        self.0.parity()
    }

    fn contract_covector(&self, e: &Covector) -> GradedPoly {
        match e {
            Covector::Theta(j) if *j == self.0 => GradedPoly::one(),
            _ => GradedPoly::zero(),
        }
    }
}

/// The vector dual to `dx^λ` in the adapted basis, used for `ω_λ = ∂_λ⌋ω`.
/// It annihilates every contact covector, so on functions it acts as `d_λ`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct BaseVector(pub Dir);

impl Contraction for BaseVector {
    fn parity(&self) -> Parity {
        Parity::Even
    }

    fn contract_covector(&self, e: &Covector) -> GradedPoly {
        match e {
            Covector::Dx(d) if *d == self.0 => GradedPoly::one(),
            _ => GradedPoly::zero(),
        }
    }
}

impl fmt::Debug for Form {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return f.write_str("0");
        }
        for (i, (w, c)) in self.terms.iter().enumerate() {
            if i > 0 {
                f.write_str(" + ")?;
            }
            write!(f, "({:?})", c)?;
            for e in w {
                write!(f, "∧{:?}", e)?;
            }
        }
        Ok(())
    }
}

impl AddAssign<&Form> for Form {
    fn add_assign(&mut self, rhs: &Form) {
        for (w, f) in &rhs.terms {
            self.add_term(w.clone(), f);
        }
    }
}

impl SubAssign<&Form> for Form {
    fn sub_assign(&mut self, rhs: &Form) {
        for (w, f) in &rhs.terms {
            self.add_term(w.clone(), &-f);
        }
    }
}

impl Add for &Form {
    type Output = Form;
    fn add(self, rhs: &Form) -> Form {
        let mut out = self.clone();
        out += rhs;
        out
    }
}

impl Sub for &Form {
    type Output = Form;
    fn sub(self, rhs: &Form) -> Form {
        let mut out = self.clone();
        out -= rhs;
        out
    }
}

impl Add for Form {
    type Output = Form;
    fn add(mut self, rhs: Form) -> Form {
        self += &rhs;
        self
    }
}

impl Sub for Form {
    type Output = Form;
    fn sub(mut self, rhs: Form) -> Form {
        self -= &rhs;
        self
    }
}

impl Neg for &Form {
    type Output = Form;
    fn neg(self) -> Form {
        self.scale(&rat(-1))
    }
}

impl Neg for Form {
    type Output = Form;
    fn neg(self) -> Form {
        -&self
    }
}

impl From<GradedPoly> for Form {
    fn from(f: GradedPoly) -> Self {
        Form::function(f)
    }
}
