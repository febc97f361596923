//! Exact graded-commutative polynomials in base coordinates, even jets and
//! odd jets.
//!
//! A [`Monomial`] is a product of even generators with multiplicities times an
//! ordered, duplicate-free list of odd jets. The odd list is kept sorted by the
//! global generator order; the sign of the reordering lives in the coefficient,
//! so two equal polynomials always have identical term maps.

use std::collections::{BTreeMap, BTreeSet};
use std::fmt;
use std::ops::{Add, AddAssign, Mul, Neg, Sub, SubAssign};

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

use super::generator::{Generator, Jet, Parity};
use super::multi_index::{Dir, MultiIndex};
use crate::error::Error;

pub type Rational = BigRational;

pub fn rat(n: i64) -> Rational {
    Rational::from_integer(BigInt::from(n))
}

pub fn ratio(n: i64, d: i64) -> Rational {
    Rational::new(BigInt::from(n), BigInt::from(d))
}

/// Sign of the permutation that merges two sorted odd lists, or `None` when
/// they share a generator.
fn merge_sign<T: Ord>(a: &[T], b: &[T]) -> Option<bool> {
    // negative iff the number of pairs (x in a, y in b) with x > y is odd
    let mut inversions = 0usize;
    let mut j = 0usize;
    for x in a {
        while j < b.len() && b[j] < *x {
            j += 1;
        }
        if j < b.len() && b[j] == *x {
            return None;
        }
        inversions += j;
    }
    Some(inversions % 2 == 1)
}

#[derive(Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Default)]
pub struct Monomial {
    even: Vec<(Generator, u32)>,
    odd: Vec<Jet>,
}

impl Monomial {
    pub fn one() -> Self {
        Monomial::default()
    }

    pub fn of(g: Generator) -> Self {
        match g {
            Generator::Jet(j) if j.parity().is_odd() => Monomial {
                even: Vec::new(),
                odd: vec![j],
            },
            g => Monomial {
                even: vec![(g, 1)],
                odd: Vec::new(),
            },
        }
    }

    pub fn is_one(&self) -> bool {
        self.even.is_empty() && self.odd.is_empty()
    }

    pub fn even_factors(&self) -> &[(Generator, u32)] {
        &self.even
    }

    pub fn odd_factors(&self) -> &[Jet] {
        &self.odd
    }

    pub fn parity(&self) -> Parity {
        Parity::from_count(self.odd.len())
    }

    pub fn jet_order(&self) -> usize {
        self.generators()
            .filter_map(|g| g.jet().map(Jet::order))
            .max()
            .unwrap_or(0)
    }

    /// Total degree counting every generator, base coordinates included.
    pub fn degree(&self) -> u32 {
        self.even.iter().map(|(_, e)| *e).sum::<u32>() + self.odd.len() as u32
    }

    pub fn x_degree(&self) -> u32 {
        self.even
            .iter()
            .filter(|(g, _)| matches!(g, Generator::Base(_)))
            .map(|(_, e)| *e)
            .sum()
    }

    pub fn generators(&self) -> impl Iterator<Item = Generator> + '_ {
        self.even
            .iter()
            .map(|(g, _)| g.clone())
            .chain(self.odd.iter().cloned().map(Generator::Jet))
    }

    /// Graded-commutative product; the flag is `true` when the product
    /// carries a minus sign. `None` when an odd generator would repeat.
    pub fn mul(&self, other: &Monomial) -> Option<(bool, Monomial)> {
        let negative = merge_sign(&self.odd, &other.odd)?;
        let mut odd = Vec::with_capacity(self.odd.len() + other.odd.len());
        odd.extend(self.odd.iter().cloned());
        odd.extend(other.odd.iter().cloned());
        odd.sort();
        let mut even: Vec<(Generator, u32)> = Vec::with_capacity(self.even.len() + other.even.len());
        let (mut i, mut j) = (0, 0);
        while i < self.even.len() || j < other.even.len() {
            if j == other.even.len()
                || (i < self.even.len() && self.even[i].0 < other.even[j].0)
            {
                even.push(self.even[i].clone());
                i += 1;
            } else if i == self.even.len() || other.even[j].0 < self.even[i].0 {
                even.push(other.even[j].clone());
                j += 1;
            } else {
                even.push((self.even[i].0.clone(), self.even[i].1 + other.even[j].1));
                i += 1;
                j += 1;
            }
        }
        Some((negative, Monomial { even, odd }))
    }

    /// Left partial derivative. For an odd generator the factor is first moved
    /// to the front of the odd block and then removed.
    pub fn left_partial(&self, g: &Generator) -> Option<(Rational, Monomial)> {
        if g.parity().is_odd() {
            let jet = g.jet().expect("odd generators are jets");
            let pos = self.odd.iter().position(|c| c == jet)?;
            let mut odd = self.odd.clone();
            odd.remove(pos);
            let sign = if pos % 2 == 1 { rat(-1) } else { rat(1) };
            Some((
                sign,
                Monomial {
                    even: self.even.clone(),
                    odd,
                },
            ))
        } else {
            let pos = self.even.iter().position(|(h, _)| h == g)?;
            let mut even = self.even.clone();
            let e = even[pos].1;
            if e == 1 {
                even.remove(pos);
            } else {
                even[pos].1 = e - 1;
            }
            Some((
                rat(e as i64),
                Monomial {
                    even,
                    odd: self.odd.clone(),
                },
            ))
        }
    }

    /// Monomial with the odd factor at `pos` replaced by `jet`, re-sorted.
    fn replace_odd(&self, pos: usize, jet: Jet) -> Option<(bool, Monomial)> {
        let mut rest = self.odd.clone();
        rest.remove(pos);
        if rest.contains(&jet) {
            return None;
        }
        // sign of moving the new factor from `pos` to its sorted slot
        let target = rest.partition_point(|c| *c < jet);
        let negative = (pos as isize - target as isize).unsigned_abs() % 2 == 1;
        rest.insert(target, jet);
        Some((
            negative,
            Monomial {
                even: self.even.clone(),
                odd: rest,
            },
        ))
    }

    fn without_even(&self, pos: usize) -> Monomial {
        let mut even = self.even.clone();
        if even[pos].1 == 1 {
            even.remove(pos);
        } else {
            even[pos].1 -= 1;
        }
        Monomial {
            even,
            odd: self.odd.clone(),
        }
    }
}

impl fmt::Debug for Monomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_one() {
            return f.write_str("1");
        }
        let mut first = true;
        for (g, e) in &self.even {
            if !first {
                f.write_str("*")?;
            }
            first = false;
            write!(f, "{:?}", g)?;
            if *e > 1 {
                write!(f, "^{}", e)?;
            }
        }
        for c in &self.odd {
            if !first {
                f.write_str("*")?;
            }
            first = false;
            write!(f, "{:?}", c)?;
        }
        Ok(())
    }
}

/// Element of the graded function ring: a finite sum of monomials with nonzero
/// rational coefficients.
#[derive(Clone, PartialEq, Eq, Hash, Default)]
pub struct GradedPoly {
    terms: BTreeMap<Monomial, Rational>,
}

impl GradedPoly {
    pub fn zero() -> Self {
        GradedPoly::default()
    }

    pub fn one() -> Self {
        GradedPoly::constant(rat(1))
    }

    pub fn constant(c: Rational) -> Self {
        GradedPoly::term(c, Monomial::one())
    }

    pub fn term(c: Rational, m: Monomial) -> Self {
        let mut terms = BTreeMap::new();
        if !c.is_zero() {
            terms.insert(m, c);
        }
        GradedPoly { terms }
    }

    pub fn generator(g: Generator) -> Self {
        GradedPoly::term(rat(1), Monomial::of(g))
    }

    pub fn base(dir: Dir) -> Self {
        GradedPoly::generator(Generator::Base(dir))
    }

    pub fn jet(j: Jet) -> Self {
        GradedPoly::generator(Generator::Jet(j))
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn terms(&self) -> &BTreeMap<Monomial, Rational> {
        &self.terms
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn add_term(&mut self, c: Rational, m: Monomial) {
        if c.is_zero() {
            return;
        }
        match self.terms.entry(m) {
            std::collections::btree_map::Entry::Vacant(v) => {
                v.insert(c);
            }
            std::collections::btree_map::Entry::Occupied(mut o) => {
                *o.get_mut() += c;
                if o.get().is_zero() {
                    o.remove();
                }
            }
        }
    }

    /// Rebuild from arbitrary (possibly repeated or zero) terms.
    pub fn from_terms<I: IntoIterator<Item = (Monomial, Rational)>>(it: I) -> Self {
        let mut p = GradedPoly::zero();
        for (m, c) in it {
            p.add_term(c, m);
        }
        p
    }

    pub fn scale(&self, c: &Rational) -> Self {
        if c.is_zero() {
            return GradedPoly::zero();
        }
        GradedPoly {
            terms: self.terms.iter().map(|(m, k)| (m.clone(), k * c)).collect(),
        }
    }

    /// Constant coefficient if the polynomial is a pure number.
    pub fn as_constant(&self) -> Option<Rational> {
        match self.terms.len() {
            0 => Some(Rational::zero()),
            1 => {
                let (m, c) = self.terms.iter().next().unwrap();
                m.is_one().then(|| c.clone())
            }
            _ => None,
        }
    }

    /// The parity, if every term has the same one. Zero counts as even.
    pub fn parity(&self) -> Option<Parity> {
        let mut it = self.terms.keys().map(Monomial::parity);
        let first = match it.next() {
            None => return Some(Parity::Even),
            Some(p) => p,
        };
        it.all(|p| p == first).then_some(first)
    }

    pub fn split_parity(&self) -> (GradedPoly, GradedPoly) {
        let mut even = GradedPoly::zero();
        let mut odd = GradedPoly::zero();
        for (m, c) in &self.terms {
            let target = if m.parity().is_odd() { &mut odd } else { &mut even };
            target.terms.insert(m.clone(), c.clone());
        }
        (even, odd)
    }

    pub fn jet_order(&self) -> usize {
        self.terms.keys().map(Monomial::jet_order).max().unwrap_or(0)
    }

    pub fn degree(&self) -> u32 {
        self.terms.keys().map(Monomial::degree).max().unwrap_or(0)
    }

    pub fn generators(&self) -> BTreeSet<Generator> {
        self.terms.keys().flat_map(|m| m.generators()).collect()
    }

    pub fn mul_monomial(&self, c: &Rational, m: &Monomial) -> GradedPoly {
        let mut out = GradedPoly::zero();
        for (a, ka) in &self.terms {
            if let Some((neg, prod)) = a.mul(m) {
                let k = ka * c;
                out.add_term(if neg { -k } else { k }, prod);
            }
        }
        out
    }

    fn monomial_mul(c: &Rational, m: &Monomial, p: &GradedPoly) -> GradedPoly {
        let mut out = GradedPoly::zero();
        for (b, kb) in &p.terms {
            if let Some((neg, prod)) = m.mul(b) {
                let k = c * kb;
                out.add_term(if neg { -k } else { k }, prod);
            }
        }
        out
    }

    /// Left graded partial derivative `∂_g`.
    pub fn partial(&self, g: &Generator) -> GradedPoly {
        let mut out = GradedPoly::zero();
        for (m, c) in &self.terms {
            if let Some((k, rest)) = m.left_partial(g) {
                out.add_term(c * k, rest);
            }
        }
        out
    }

    /// Total derivative `d_λ = ∂_λ + Σ s^A_{λ+Λ} ∂^Λ_A`.
    pub fn total_derivative(&self, dir: Dir) -> GradedPoly {
        let mut out = GradedPoly::zero();
        for (m, c) in &self.terms {
            for (pos, (g, e)) in m.even.iter().enumerate() {
                let rest = m.without_even(pos);
                let k = c * rat(*e as i64);
                match g {
                    Generator::Base(d) => {
                        if *d == dir {
                            out.add_term(k, rest);
                        }
                    }
                    Generator::Jet(j) => {
                        let next = Monomial::of(Generator::Jet(j.prolong(dir)));
                        let (neg, prod) = rest.mul(&next).expect("even factor");
                        out.add_term(if neg { -k } else { k }, prod);
                    }
                }
            }
            for (pos, j) in m.odd.iter().enumerate() {
                if let Some((neg, prod)) = m.replace_odd(pos, j.prolong(dir)) {
                    out.add_term(if neg { -c.clone() } else { c.clone() }, prod);
                }
            }
        }
        out
    }

    /// `d_Λ`, the composition of total derivatives along `Λ`.
    pub fn total_derivative_multi(&self, index: &MultiIndex) -> GradedPoly {
        let mut p = self.clone();
        for &d in index.entries() {
            p = p.total_derivative(d);
        }
        p
    }

    /// Applies the graded derivation of parity `parity` that sends each
    /// generator `g` to `image(g)`, acting from the left:
    /// `D(ab) = D(a) b + (-1)^{[D][a]} a D(b)`.
    pub fn apply_derivation<F>(&self, parity: Parity, mut image: F) -> GradedPoly
    where
        F: FnMut(&Generator) -> GradedPoly,
    {
        let mut cache: BTreeMap<Generator, GradedPoly> = BTreeMap::new();
        let mut image_of = |g: &Generator| -> GradedPoly {
            cache.entry(g.clone()).or_insert_with(|| image(g)).clone()
        };
        let mut out = GradedPoly::zero();
        for (m, c) in &self.terms {
            let odd_block = Monomial {
                even: Vec::new(),
                odd: m.odd.clone(),
            };
            for (pos, (g, e)) in m.even.iter().enumerate() {
                let img = image_of(g);
                if img.is_zero() {
                    continue;
                }
                let rest_even = Monomial {
                    even: m.without_even(pos).even,
                    odd: Vec::new(),
                };
                let k = c * rat(*e as i64);
                let left = GradedPoly::monomial_mul(&k, &rest_even, &img);
                out += &left.mul_monomial(&rat(1), &odd_block);
            }
            let even_block = Monomial {
                even: m.even.clone(),
                odd: Vec::new(),
            };
            for (pos, j) in m.odd.iter().enumerate() {
                let img = image_of(&Generator::Jet(j.clone()));
                if img.is_zero() {
                    continue;
                }
                let prefix = Monomial {
                    even: Vec::new(),
                    odd: m.odd[..pos].to_vec(),
                };
                let suffix = Monomial {
                    even: Vec::new(),
                    odd: m.odd[pos + 1..].to_vec(),
                };
                let negative = parity.is_odd() && pos % 2 == 1;
                let (_, head) = even_block.mul(&prefix).expect("disjoint");
                let k = if negative { -c.clone() } else { c.clone() };
                let left = GradedPoly::monomial_mul(&k, &head, &img);
                out += &left.mul_monomial(&rat(1), &suffix);
            }
        }
        out
    }

    /// Substitutes rationals for every even generator. Odd generators stay
    /// symbolic, so the result lies in the exterior algebra on them.
    pub fn evaluate(&self, point: &BTreeMap<Generator, Rational>) -> Result<GradedPoly, Error> {
        let mut out = GradedPoly::zero();
        for (m, c) in &self.terms {
            let mut k = c.clone();
            for (g, e) in &m.even {
                let v = point
                    .get(g)
                    .ok_or_else(|| Error::UnboundGenerator(format!("{:?}", g)))?;
                k *= num_traits::pow(v.clone(), *e as usize);
            }
            out.add_term(
                k,
                Monomial {
                    even: Vec::new(),
                    odd: m.odd.clone(),
                },
            );
        }
        Ok(out)
    }

    /// Largest absolute numerator/denominator, a rough size measure.
    pub fn height(&self) -> BigInt {
        self.terms
            .values()
            .map(|c| c.numer().abs().max(c.denom().abs()))
            .max()
            .unwrap_or_else(BigInt::zero)
    }
}

impl fmt::Debug for GradedPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return f.write_str("0");
        }
        for (i, (m, c)) in self.terms.iter().enumerate() {
            if i > 0 {
                f.write_str(" + ")?;
            }
            if c.is_one() && !m.is_one() {
                write!(f, "{:?}", m)?;
            } else if m.is_one() {
                write!(f, "{}", c)?;
            } else {
                write!(f, "{}*{:?}", c, m)?;
            }
        }
        Ok(())
    }
}

impl AddAssign<&GradedPoly> for GradedPoly {
    fn add_assign(&mut self, rhs: &GradedPoly) {
        for (m, c) in &rhs.terms {
            self.add_term(c.clone(), m.clone());
        }
    }
}

impl SubAssign<&GradedPoly> for GradedPoly {
    fn sub_assign(&mut self, rhs: &GradedPoly) {
        for (m, c) in &rhs.terms {
            self.add_term(-c.clone(), m.clone());
        }
    }
}

impl Add for &GradedPoly {
    type Output = GradedPoly;
    fn add(self, rhs: &GradedPoly) -> GradedPoly {
        let mut out = self.clone();
        out += rhs;
        out
    }
}

impl Add for GradedPoly {
    type Output = GradedPoly;
    fn add(mut self, rhs: GradedPoly) -> GradedPoly {
        self += &rhs;
        self
    }
}

impl Sub for &GradedPoly {
    type Output = GradedPoly;
    fn sub(self, rhs: &GradedPoly) -> GradedPoly {
        let mut out = self.clone();
        out -= rhs;
        out
    }
}

impl Sub for GradedPoly {
    type Output = GradedPoly;
    fn sub(mut self, rhs: GradedPoly) -> GradedPoly {
        self -= &rhs;
        self
    }
}

impl Neg for &GradedPoly {
    type Output = GradedPoly;
    fn neg(self) -> GradedPoly {
        GradedPoly {
            terms: self.terms.iter().map(|(m, c)| (m.clone(), -c)).collect(),
        }
    }
}

impl Neg for GradedPoly {
    type Output = GradedPoly;
    fn neg(self) -> GradedPoly {
        -&self
    }
}

impl Mul for &GradedPoly {
    type Output = GradedPoly;
    fn mul(self, rhs: &GradedPoly) -> GradedPoly {
        let mut out = GradedPoly::zero();
        for (a, ka) in &self.terms {
            for (b, kb) in &rhs.terms {
                if let Some((neg, prod)) = a.mul(b) {
                    let k = ka * kb;
                    out.add_term(if neg { -k } else { k }, prod);
                }
            }
        }
        out
    }
}

impl Mul for GradedPoly {
    type Output = GradedPoly;
    fn mul(self, rhs: GradedPoly) -> GradedPoly {
        &self * &rhs
    }
}

impl From<Rational> for GradedPoly {
    fn from(c: Rational) -> Self {
        GradedPoly::constant(c)
    }
}
