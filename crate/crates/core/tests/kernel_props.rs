use std::collections::BTreeMap;

use proptest::prelude::*;
use rand::Rng;
use varbi::random::{self, PolyShape};
use varbi::{rat, Generator, GradedPoly, Jet, MultiIndex, Parity, Universe};

fn universe() -> Universe {
    Universe::standard(3, 2, 2)
}

fn shape() -> PolyShape {
    PolyShape {
        max_order: 3,
        max_degree: 3,
        max_terms: 4,
        ..PolyShape::default()
    }
}

fn parity_of(p: &GradedPoly) -> Parity {
    p.parity().unwrap_or(Parity::Even)
}

fn homogeneous(rng: &mut random::Rng64, u: &Universe) -> GradedPoly {
    let parity = if rng.gen_bool(0.5) { Parity::Odd } else { Parity::Even };
    random::poly(rng, u, &PolyShape { parity: Some(parity), ..shape() })
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(48))]

    #[test]
    fn total_derivatives_commute(seed in any::<u64>()) {
        let u = universe();
        let mut r = random::rng(seed);
        let p = random::poly(&mut r, &u, &shape());
        for l in 1..=3 {
            for m in (l + 1)..=3 {
                let a = p.total_derivative(m).total_derivative(l);
                let b = p.total_derivative(l).total_derivative(m);
                prop_assert_eq!(a, b);
            }
        }
    }

    #[test]
    fn multiplication_is_associative_and_graded_commutative(seed in any::<u64>()) {
        let u = universe();
        let mut r = random::rng(seed);
        let a = homogeneous(&mut r, &u);
        let b = homogeneous(&mut r, &u);
        let c = homogeneous(&mut r, &u);
        prop_assert_eq!(&(&a * &b) * &c, &a * &(&b * &c));
        let ab = &a * &b;
        let ba = &b * &a;
        if parity_of(&a).both_odd(parity_of(&b)) {
            prop_assert_eq!(ab, -ba);
        } else {
            prop_assert_eq!(ab, ba);
        }
    }

    #[test]
    fn total_derivative_obeys_leibniz(seed in any::<u64>()) {
        let u = universe();
        let mut r = random::rng(seed);
        let a = homogeneous(&mut r, &u);
        let b = homogeneous(&mut r, &u);
        for l in 1..=3 {
            let lhs = (&a * &b).total_derivative(l);
            let rhs = &(&a.total_derivative(l) * &b) + &(&a * &b.total_derivative(l));
            prop_assert_eq!(lhs, rhs);
        }
    }

    #[test]
    fn partial_derivatives_obey_graded_leibniz(seed in any::<u64>()) {
        let u = universe();
        let mut r = random::rng(seed);
        let a = homogeneous(&mut r, &u);
        let b = homogeneous(&mut r, &u);
        let gens: Vec<Generator> = (&a * &b).generators().into_iter().collect();
        for g in gens {
            let sign = if g.parity().both_odd(parity_of(&a)) { -a.clone() } else { a.clone() };
            let rhs = &(&a.partial(&g) * &b) + &(&sign * &b.partial(&g));
            prop_assert_eq!((&a * &b).partial(&g), rhs);
        }
    }

    #[test]
    fn total_derivative_agrees_with_chain_rule(seed in any::<u64>()) {
        let u = universe();
        let mut r = random::rng(seed);
        let p = random::poly(&mut r, &u, &shape());
        for l in 1..=3 {
            let mut expected = p.partial(&Generator::Base(l));
            for g in p.generators() {
                if let Generator::Jet(j) = &g {
                    expected += &(&GradedPoly::jet(j.prolong(l)) * &p.partial(&g));
                }
            }
            prop_assert_eq!(p.total_derivative(l), expected);
        }
    }

    #[test]
    fn evaluation_is_a_ring_map_on_even_generators(seed in any::<u64>()) {
        let u = Universe::standard(2, 2, 0);
        let mut r = random::rng(seed);
        let s = PolyShape { max_order: 2, ..shape() };
        let a = random::poly(&mut r, &u, &s);
        let b = random::poly(&mut r, &u, &s);
        let mut point = BTreeMap::new();
        for g in (&a * &b).generators().into_iter().chain(a.generators()).chain(b.generators()) {
            point.entry(g).or_insert_with(|| random::coefficient(&mut r));
        }
        let ea = a.evaluate(&point).unwrap();
        let eb = b.evaluate(&point).unwrap();
        prop_assert_eq!((&a * &b).evaluate(&point).unwrap(), &ea * &eb);
        prop_assert_eq!((&a + &b).evaluate(&point).unwrap(), &ea + &eb);
    }
}

#[test]
fn repeated_total_derivative_examples() {
    let y = Jet::order0(varbi::FieldId::even(1));
    let p = GradedPoly::jet(y.clone());
    assert_eq!(
        p.total_derivative(1).total_derivative(1),
        GradedPoly::jet(Jet::new(y.field, MultiIndex::new([1, 1])))
    );
    let square = &p * &p;
    let two_y_y1 = (&p * &GradedPoly::jet(y.prolong(1))).scale(&rat(2));
    assert_eq!(square.total_derivative(1), two_y_y1);
}

#[test]
fn odd_square_vanishes() {
    let c = GradedPoly::jet(Jet::order0(varbi::FieldId::odd(1)));
    assert!((&c * &c).is_zero());
    let c1 = c.total_derivative(1);
    assert_eq!(&c * &c1, -(&c1 * &c));
}
