use std::collections::BTreeMap;

use proptest::prelude::*;
use rand::Rng;
use varbi::random::{self, BaseKind, PolyShape, Rng64};
use varbi::symmetry::{
    contact_preservation_check, divergence_symmetry_test, el_symmetry_defect, first_variational_residual,
    noether_current, DivergenceTest,
};
use varbi::variational::lepagean;
use varbi::{Dir, Error, GradedPoly, Jet, Lagrangian, MultiIndex, Parity, SuperSymmetry, Universe};

const N: Dir = 2;

fn shape() -> PolyShape {
    PolyShape {
        max_order: 1,
        max_degree: 3,
        max_terms: 3,
        ..PolyShape::default()
    }
}

fn lagrangian(r: &mut Rng64, u: &Universe, order: usize) -> Lagrangian {
    let s = PolyShape {
        max_order: order,
        parity: Some(Parity::Even),
        ..shape()
    };
    Lagrangian::new(u.n, random::poly(r, u, &s))
}

fn kind_of(i: usize) -> BaseKind {
    [BaseKind::Vertical, BaseKind::Projectable, BaseKind::General][i]
}

fn parity_of(odd: bool) -> Parity {
    if odd {
        Parity::Odd
    } else {
        Parity::Even
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(24))]

    #[test]
    fn first_variational_formula_holds(seed in any::<u64>(), kind in 0usize..3, odd in any::<bool>()) {
        let u = Universe::standard(N, 1, 1);
        let mut r = random::rng(seed);
        let sym = random::symmetry(&mut r, &u, &shape(), parity_of(odd), kind_of(kind));
        let order = r.gen_range(1..=2);
        let l = lagrangian(&mut r, &u, order);
        let residual = first_variational_residual(&sym, &l);
        prop_assert!(residual.is_zero(), "{:?}", residual);
    }

    #[test]
    fn prolongations_preserve_the_contact_ideal(seed in any::<u64>(), kind in 0usize..3, odd in any::<bool>()) {
        let u = Universe::standard(N, 1, 1);
        let mut r = random::rng(seed);
        let sym = random::symmetry(&mut r, &u, &shape(), parity_of(odd), kind_of(kind));
        for (jet, res) in contact_preservation_check(&sym, &u.field_ids(), 2) {
            prop_assert!(res.is_zero(), "{:?}: {:?}", jet, res);
        }
    }

    #[test]
    fn symmetry_and_vertical_part_share_the_current(seed in any::<u64>(), odd in any::<bool>()) {
        let u = Universe::standard(N, 1, 1);
        let mut r = random::rng(seed);
        let sym = random::symmetry(&mut r, &u, &shape(), parity_of(odd), BaseKind::General);
        let l = lagrangian(&mut r, &u, 2);
        let xi_l = lepagean(&l).xi_l;
        let full = xi_l.contract(&sym).project(0, N as usize - 1);
        let split = &xi_l.contract(&sym.vertical_part()) + &l.form().contract(&sym.horizontal_part());
        prop_assert_eq!(full.d_h(N), split.d_h(N));
    }

    #[test]
    fn translations_give_conserved_currents(seed in any::<u64>(), dir in 1u8..=2) {
        let u = Universe::standard(N, 1, 1);
        let mut r = random::rng(seed);
        let s = PolyShape {
            base: false,
            max_terms: 2,
            parity: Some(Parity::Even),
            ..shape()
        };
        let l = Lagrangian::new(N, random::poly(&mut r, &u, &s));
        let chars: BTreeMap<_, _> = u
            .field_ids()
            .into_iter()
            .map(|f| (f, GradedPoly::jet(Jet::new(f, MultiIndex::new([dir])))))
            .collect();
        let sym = SuperSymmetry::vertical(N, Parity::Even, chars).unwrap();
        match divergence_symmetry_test(&sym, &l, 3).unwrap() {
            DivergenceTest::Yes { sigma } => {
                let current = noether_current(&sym, &l, Some(&sigma)).unwrap();
                prop_assert!(current.residual.is_zero(), "{:?}", current.residual);
            }
            other => prop_assert!(false, "{:?}", other),
        }
    }

    #[test]
    fn defect_relation_holds(seed in any::<u64>()) {
        let u = Universe::standard(N, 2, 0);
        let mut r = random::rng(seed);
        let sym = random::symmetry(&mut r, &u, &shape(), Parity::Even, BaseKind::Vertical);
        let l = lagrangian(&mut r, &u, 1);
        let d = el_symmetry_defect(&sym, &l).unwrap();
        prop_assert!(d.residual.is_zero(), "{:?}", d.residual);
    }
}

#[test]
fn divergence_test_rejects_non_projectable_symmetries() {
    let u = Universe::standard(1, 1, 0);
    let y = u.field_ids()[0];
    let sym = SuperSymmetry::new(1, Parity::Even, vec![GradedPoly::jet(Jet::order0(y))], BTreeMap::new()).unwrap();
    let l = Lagrangian::new(1, GradedPoly::jet(Jet::new(y, MultiIndex::new([1]))));
    assert!(matches!(
        divergence_symmetry_test(&sym, &l, 2),
        Err(Error::NotProjectable(_))
    ));
}
