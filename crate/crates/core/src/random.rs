//! Seeded generators of random polynomials, forms and symmetries for the
//! property suites and the `selfcheck` command.

use std::collections::BTreeMap;

use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::forms::{Covector, Form};
use crate::kernel::{ratio, Dir, FieldId, Generator, GradedPoly, Jet, MultiIndex, Parity, Rational, Universe};
use crate::symmetry::SuperSymmetry;

pub type Rng64 = ChaCha8Rng;

pub fn rng(seed: u64) -> Rng64 {
    ChaCha8Rng::seed_from_u64(seed)
}

#[derive(Clone, Debug)]
pub struct PolyShape {
    pub max_order: usize,
    pub max_degree: usize,
    pub max_terms: usize,
    pub base: bool,
    pub parity: Option<Parity>,
}

impl Default for PolyShape {
    fn default() -> Self {
        PolyShape {
            max_order: 2,
            max_degree: 3,
            max_terms: 4,
            base: true,
            parity: None,
        }
    }
}

pub fn coefficient(rng: &mut Rng64) -> Rational {
    let mut num = rng.gen_range(-4i64..=4);
    if num == 0 {
        num = 1;
    }
    ratio(num, rng.gen_range(1i64..=3))
}

fn jet_pool(u: &Universe, fields: &[FieldId], max_order: usize) -> Vec<Jet> {
    let indices = MultiIndex::all_up_to(u.n, max_order);
    let mut out = Vec::new();
    for &f in fields {
        for mi in &indices {
            out.push(Jet::new(f, mi.clone()));
        }
    }
    out
}

fn generator_pool(u: &Universe, shape: &PolyShape) -> Vec<Generator> {
    let mut pool: Vec<Generator> = Vec::new();
    if shape.base {
        pool.extend((1..=u.n).map(Generator::Base));
    }
    pool.extend(
        jet_pool(u, &u.field_ids(), shape.max_order)
            .into_iter()
            .map(Generator::Jet),
    );
    pool
}

/// Random polynomial. With a parity requested, terms of the wrong parity are
/// dropped or fixed up by an extra odd factor when one is available.
pub fn poly(rng: &mut Rng64, u: &Universe, shape: &PolyShape) -> GradedPoly {
    let pool = generator_pool(u, shape);
    let odd: Vec<Generator> = pool.iter().filter(|g| g.parity().is_odd()).cloned().collect();
    let mut out = GradedPoly::zero();
    let terms = rng.gen_range(1..=shape.max_terms.max(1));
    for _ in 0..terms {
        let deg = rng.gen_range(0..=shape.max_degree);
        let mut m = GradedPoly::constant(coefficient(rng));
        for _ in 0..deg {
            if let Some(g) = pool.choose(rng) {
                m = &m * &GradedPoly::generator(g.clone());
            }
        }
        if let Some(want) = shape.parity {
            let (even, odd_part) = m.split_parity();
            m = if want.is_odd() { odd_part } else { even };
            if m.is_zero() && want.is_odd() {
                if let Some(g) = odd.choose(rng) {
                    m = &GradedPoly::constant(coefficient(rng)) * &GradedPoly::generator(g.clone());
                }
            }
            if m.is_zero() && !want.is_odd() {
                m = GradedPoly::constant(coefficient(rng));
            }
        }
        out += &m;
    }
    out
}

/// Random form of bidegree `(k, m)` with coefficient jet order and contact
/// covector order bounded by `shape.max_order`.
pub fn form(rng: &mut Rng64, u: &Universe, shape: &PolyShape, k: usize, m: usize) -> Form {
    let thetas = jet_pool(u, &u.field_ids(), shape.max_order);
    let dirs: Vec<Dir> = (1..=u.n).collect();
    let mut out = Form::zero();
    if m > u.n as usize || (k > 0 && thetas.is_empty()) {
        return out;
    }
    let coeff_shape = PolyShape {
        parity: None,
        ..shape.clone()
    };
    for _ in 0..rng.gen_range(1..=3) {
        let mut word: Vec<Covector> = Vec::new();
        for _ in 0..k {
            word.push(Covector::Theta(thetas.choose(rng).unwrap().clone()));
        }
        let mut ds: Vec<Dir> = dirs.clone();
        ds.shuffle(rng);
        word.extend(ds.into_iter().take(m).map(Covector::Dx));
        let f = poly(rng, u, &coeff_shape);
        let term = Form::function(f).wedge(&Form::product_of(&word));
        out += &term;
    }
    out
}

/// Random horizontal form of degree `m` whose coefficients have the given
/// charge, built from monomials in the universe's fields.
pub fn charged_horizontal(
    rng: &mut Rng64,
    u: &Universe,
    shape: &PolyShape,
    m: usize,
    charge: i64,
) -> Form {
    let mut out = Form::zero();
    let dirs: Vec<Dir> = (1..=u.n).collect();
    for _ in 0..rng.gen_range(1..=3) {
        let mut f = GradedPoly::zero();
        for _ in 0..8 {
            let p = poly(rng, u, shape);
            for (mono, c) in p.terms() {
                if u.monomial_charge(mono) == charge {
                    f.add_term(c.clone(), mono.clone());
                }
            }
            if !f.is_zero() {
                break;
            }
        }
        let mut ds = dirs.clone();
        ds.shuffle(rng);
        let word: Vec<Covector> = ds.into_iter().take(m).map(Covector::Dx).collect();
        out += &Form::function(f).wedge(&Form::product_of(&word));
    }
    out
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum BaseKind {
    Vertical,
    /// Base components depending on `x` only.
    Projectable,
    /// Base components depending on jets as well.
    General,
}

/// Random symmetry of the requested parity. Components have parity
/// `[υ] + [field]`; unlisted fields get a zero characteristic.
pub fn symmetry(
    rng: &mut Rng64,
    u: &Universe,
    shape: &PolyShape,
    parity: Parity,
    kind: BaseKind,
) -> SuperSymmetry {
    let mut chars = BTreeMap::new();
    for f in u.field_ids() {
        if rng.gen_bool(0.2) {
            continue;
        }
        let s = PolyShape {
            parity: Some(parity + f.parity),
            ..shape.clone()
        };
        chars.insert(f, poly(rng, u, &s));
    }
    let mut base = Vec::new();
    for _ in 0..u.n {
        let b = match kind {
            BaseKind::Vertical => GradedPoly::zero(),
            BaseKind::Projectable if parity.is_odd() => GradedPoly::zero(),
            BaseKind::Projectable => {
                let only_x = Universe::new(u.n);
                poly(rng, &only_x, &PolyShape { max_degree: 2, ..shape.clone() })
            }
            BaseKind::General => poly(
                rng,
                u,
                &PolyShape {
                    parity: Some(parity),
                    max_degree: 2,
                    max_terms: 2,
                    ..shape.clone()
                },
            ),
        };
        base.push(b);
    }
    SuperSymmetry::new(u.n, parity, base, chars).expect("random components have matching parity")
}
