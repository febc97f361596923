use proptest::prelude::*;
use rand::Rng;
use varbi::brst::{
    descent_solve, descent_verify, dh_solve, iterated_cocycle_check, nilpotency_check, s_operator, BrstModel,
    Cocycle, DhOutcome, StructureConstants,
};
use varbi::random::{self, PolyShape};
use varbi::variational::euler_lagrange;
use varbi::{Dir, Lagrangian, Universe};

fn shape() -> PolyShape {
    PolyShape {
        max_order: 1,
        max_degree: 2,
        max_terms: 2,
        ..PolyShape::default()
    }
}

fn su2(n: Dir) -> (BrstModel, Universe) {
    BrstModel::standalone(n, StructureConstants::levi_civita())
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(16))]

    #[test]
    fn brst_models_are_nilpotent(seed in any::<u64>(), k in 1usize..=3) {
        let mut r = random::rng(seed);
        for constants in [StructureConstants::abelian(k), StructureConstants::random_class_a(&mut r)] {
            let (m, _) = BrstModel::standalone(2, constants);
            let check = nilpotency_check(&m.build(), &m.fields()).unwrap();
            prop_assert!(check.nilpotent, "{:?}", check.residuals);
        }
    }

    #[test]
    fn s_is_a_differential_anticommuting_with_dh(seed in any::<u64>(), charge in 0i64..=2) {
        let n = 2;
        let (m, u) = su2(n);
        let sym = m.build();
        let mut r = random::rng(seed);
        let deg = r.gen_range(0..=n as usize);
        let s = PolyShape { max_order: 2, ..shape() };
        let phi = random::charged_horizontal(&mut r, &u, &s, deg, charge);
        let s_phi = s_operator(&sym, &phi).unwrap();
        prop_assert!(s_operator(&sym, &s_phi).unwrap().is_zero());
        let anti = &s_operator(&sym, &phi.d_h(n)).unwrap() + &s_phi.d_h(n);
        prop_assert!(anti.is_zero(), "{:?}", anti);
        for f in s_phi.terms().values() {
            prop_assert_eq!(u.poly_charge(f), Some(charge + 1));
        }
    }

    #[test]
    fn dh_solve_is_sound(seed in any::<u64>(), n in 1u8..=2) {
        let u = Universe::standard(n, 1, 1);
        let mut r = random::rng(seed);
        let m = r.gen_range(1..=n as usize);
        let phi = if r.gen_bool(0.5) {
            random::form(&mut r, &u, &shape(), 0, m - 1).d_h(n)
        } else {
            random::form(&mut r, &u, &shape(), 0, m)
        };
        match dh_solve(&phi, n, 2).unwrap() {
            DhOutcome::Solved { sigma, .. } => prop_assert_eq!(sigma.d_h(n), phi),
            DhOutcome::Obstruction { .. } if m == n as usize => {
                let l = Lagrangian::from_form(&phi, n).unwrap();
                prop_assert!(!euler_lagrange(&l).is_zero());
            }
            DhOutcome::Obstruction { witness, .. } => prop_assert!(!witness.is_zero()),
            DhOutcome::Undecided { .. } => {}
        }
    }

    #[test]
    fn descent_round_trip(seed in any::<u64>()) {
        let (m, u) = su2(1);
        let sym = m.build();
        let mut r = random::rng(seed);
        let xi = random::charged_horizontal(&mut r, &u, &shape(), 1, 0);
        let sigma = random::charged_horizontal(&mut r, &u, &shape(), 0, 1);
        let phi = &s_operator(&sym, &xi).unwrap() + &sigma.d_h(1);
        let out = descent_solve(&sym, &phi, 3).unwrap();
        prop_assert!(out.complete(), "{:?}", out.diagnostic);
        for (k, res) in descent_verify(&sym, &out.chain).unwrap() {
            prop_assert!(res.is_zero(), "rung {}: {:?}", k, res);
        }
    }

    #[test]
    fn descent_round_trip_in_two_dimensions(seed in any::<u64>()) {
        let (m, u) = BrstModel::standalone(2, StructureConstants::abelian(1));
        let sym = m.build();
        let mut r = random::rng(seed);
        let xi = random::charged_horizontal(&mut r, &u, &shape(), 2, 0);
        let sigma = random::charged_horizontal(&mut r, &u, &shape(), 1, 1);
        let phi = &s_operator(&sym, &xi).unwrap() + &sigma.d_h(2);
        let out = descent_solve(&sym, &phi, 3).unwrap();
        prop_assert!(out.complete(), "{:?}", out.diagnostic);
        for (k, res) in descent_verify(&sym, &out.chain).unwrap() {
            prop_assert!(res.is_zero(), "rung {}: {:?}", k, res);
        }
    }

    #[test]
    fn constructed_cocycles_are_exact(seed in any::<u64>()) {
        let (m, u) = su2(1);
        let sym = m.build();
        let mut r = random::rng(seed);
        let xi = random::charged_horizontal(&mut r, &u, &shape(), 1, 0);
        let sigma = random::charged_horizontal(&mut r, &u, &shape(), 0, 1);
        let phi = &s_operator(&sym, &xi).unwrap() + &sigma.d_h(1);
        if !phi.is_zero() {
            match iterated_cocycle_check(&sym, &u, &phi, 2).unwrap() {
                Cocycle::Exact { xi, sigma } => {
                    prop_assert_eq!(&s_operator(&sym, &xi).unwrap() + &sigma.d_h(1), phi);
                }
                other => prop_assert!(false, "{:?}", other),
            }
        }
    }
}
