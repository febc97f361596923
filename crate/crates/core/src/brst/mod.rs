//! BRST models, the operator `s_υ`, the bounded `d_H` solver, descent chains
//! and iterated cocycles.

pub mod cocycle;
pub mod descent;
pub mod linsolve;
pub mod model;
pub mod solve;

pub use cocycle::{iterated_cocycle_check, Cocycle};
pub use descent::{descent_solve, descent_verify, DescentChain, DescentOutcome};
pub use model::{BrstModel, StructureConstants};
pub use solve::{dh_solve, DhOutcome};

use crate::error::{Error, Result};
use crate::forms::{Covector, Form};
use crate::kernel::{FieldId, GradedPoly};
use crate::symmetry::SuperSymmetry;

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Nilpotency {
    /// `L_υ(υ^A)` per field.
    pub residuals: Vec<(FieldId, GradedPoly)>,
    pub odd: bool,
    pub nilpotent: bool,
}

impl Nilpotency {
    pub fn note(&self) -> Option<&'static str> {
        if self.odd {
            None
        } else {
            Some("an even symmetry is never nilpotent: nilpotent supersymmetries are necessarily odd")
        }
    }
}

/// `L_υ(υ^A)` for every listed field; all vanish iff `υ` is nilpotent.
pub fn nilpotency_check(u: &SuperSymmetry, fields: &[FieldId]) -> Result<Nilpotency> {
    if !u.is_vertical() {
        return Err(Error::NotVertical("nilpotency is defined for vertical symmetries".into()));
    }
    let residuals: Vec<(FieldId, GradedPoly)> = fields
        .iter()
        .map(|&f| (f, u.apply(&u.characteristic_of(f))))
        .collect();
    let odd = u.parity().is_odd();
    let zero = residuals.iter().all(|(_, r)| r.is_zero());
    Ok(Nilpotency {
        residuals,
        odd,
        nilpotent: odd && zero,
    })
}

/// `s_υ φ = (-1)^{|φ|} L_υ φ` on horizontal forms.
pub fn s_operator(u: &SuperSymmetry, phi: &Form) -> Result<Form> {
    if !u.is_vertical() {
        return Err(Error::NotVertical("s is defined for vertical symmetries".into()));
    }
    let mut out = Form::zero();
    for (w, f) in phi.terms() {
        if w.iter().any(|e| matches!(e, Covector::Theta(_))) {
            return Err(Error::Bidegree {
                expected: "(0, m)".into(),
                found: format!("contact degree {}", Form::bidegree_of(w).0),
            });
        }
        let v = u.apply(f);
        let v = if w.len() % 2 == 1 { -v } else { v };
        out.add_term(w.clone(), &v);
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use std::collections::BTreeMap;

    use super::*;
    use crate::kernel::{rat, Jet, MultiIndex, Parity, Universe};
    use crate::random::{self, PolyShape};

    fn assert_nilpotent(u: &SuperSymmetry, fields: &[FieldId]) {
        let r = nilpotency_check(u, fields).unwrap();
        assert!(r.nilpotent, "{:?}", r.residuals);
        assert!(r.note().is_none());
    }

    #[test]
    fn brst_models_are_nilpotent() {
        let (m, _) = BrstModel::standalone(2, StructureConstants::levi_civita());
        assert_nilpotent(&m.build(), &m.fields());
        let (m, _) = BrstModel::standalone(2, StructureConstants::abelian(3));
        assert_nilpotent(&m.build(), &m.fields());
        let mut r = random::rng(11);
        for _ in 0..3 {
            let (m, _) = BrstModel::standalone(2, StructureConstants::random_class_a(&mut r));
            assert_nilpotent(&m.build(), &m.fields());
        }
    }

    #[test]
    fn odd_translation_is_nilpotent() {
        let u = Universe::standard(2, 0, 2);
        let ids = u.field_ids();
        let x = |d| GradedPoly::base(d);
        let mut chars = BTreeMap::new();
        chars.insert(ids[0], &(&x(1) * &x(2)) + &GradedPoly::constant(rat(3)));
        chars.insert(ids[1], &x(1) * &x(1));
        let sym = SuperSymmetry::vertical(2, Parity::Odd, chars).unwrap();
        assert_nilpotent(&sym, &ids);
        assert_eq!(
            sym.prolong(&Jet::new(ids[0], MultiIndex::new([1]))),
            x(2)
        );
    }

    #[test]
    fn even_candidate_is_flagged() {
        let u = Universe::standard(1, 1, 0);
        let y = u.field_ids()[0];
        let mut chars = BTreeMap::new();
        chars.insert(y, GradedPoly::jet(Jet::order0(y)));
        let sym = SuperSymmetry::vertical(1, Parity::Even, chars).unwrap();
        let r = nilpotency_check(&sym, &[y]).unwrap();
        assert!(!r.nilpotent);
        assert!(!r.odd);
        assert_eq!(r.residuals, vec![(y, GradedPoly::jet(Jet::order0(y)))]);
        assert!(r.note().is_some());
    }

    #[test]
    fn s_of_single_potential() {
        let (m, _) = BrstModel::standalone(1, StructureConstants::abelian(1));
        let u = m.build();
        let a1 = Form::function(GradedPoly::jet(Jet::new(m.gauge(1, 1), MultiIndex::new([1]))));
        let c11 = GradedPoly::jet(Jet::new(m.ghost(1), MultiIndex::new([1, 1])));
        assert_eq!(s_operator(&u, &a1).unwrap(), Form::function(c11));
    }

    #[test]
    fn s_squares_to_zero_and_anticommutes_with_dh() {
        let (m, univ) = BrstModel::standalone(2, StructureConstants::levi_civita());
        let u = m.build();
        let mut r = random::rng(5);
        let shape = PolyShape {
            max_order: 1,
            max_degree: 2,
            max_terms: 3,
            ..PolyShape::default()
        };
        for k in 0..6 {
            let phi = random::form(&mut r, &univ, &shape, 0, k % 3);
            let s = s_operator(&u, &phi).unwrap();
            assert!(s_operator(&u, &s).unwrap().is_zero());
            let anti = &s_operator(&u, &phi.d_h(2)).unwrap() + &s.d_h(2);
            assert!(anti.is_zero(), "{:?}", anti);
        }
    }

    #[test]
    fn s_rejects_contact_forms() {
        let (m, _) = BrstModel::standalone(1, StructureConstants::abelian(1));
        let theta = Form::theta(Jet::order0(m.ghost(1)));
        assert!(s_operator(&m.build(), &theta).is_err());
    }

    #[test]
    fn s_raises_charge() {
        let (m, univ) = BrstModel::standalone(1, StructureConstants::levi_civita());
        let u = m.build();
        let mut r = random::rng(8);
        let shape = PolyShape {
            max_order: 1,
            max_degree: 3,
            ..PolyShape::default()
        };
        for charge in 0..=2 {
            let phi = random::charged_horizontal(&mut r, &univ, &shape, 1, charge);
            let s = s_operator(&u, &phi).unwrap();
            for f in s.terms().values() {
                assert_eq!(univ.poly_charge(f), Some(charge + 1));
            }
        }
    }
}
