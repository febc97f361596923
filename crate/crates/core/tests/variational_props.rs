use num_traits::{One, Zero};
use proptest::prelude::*;
use rand::Rng;
use varbi::random::{self, PolyShape, Rng64};
use varbi::variational::{
    check_decomposition, euler_components, euler_lagrange, lepagean, rho, triviality_test, Triviality,
};
use varbi::{rat, ratio, Dir, FieldId, Form, Generator, GradedPoly, Jet, Lagrangian, MultiIndex, Parity, Rational, Universe};

const N: Dir = 2;

fn shape() -> PolyShape {
    PolyShape {
        max_order: 2,
        max_degree: 3,
        max_terms: 3,
        ..PolyShape::default()
    }
}

fn density(r: &mut Rng64, u: &Universe) -> GradedPoly {
    random::poly(r, u, &PolyShape { parity: Some(Parity::Even), ..shape() })
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(24))]

    #[test]
    fn rho_is_a_projector_killing_dh(seed in any::<u64>()) {
        let u = Universe::standard(N, 1, 1);
        let mut r = random::rng(seed);
        let k = r.gen_range(1..=2);
        let phi = random::form(&mut r, &u, &shape(), k, N as usize);
        if !phi.is_zero() {
            let once = rho(&phi, N).unwrap();
            if !once.is_zero() {
                prop_assert_eq!(rho(&once, N).unwrap(), once);
            }
        }
        let sigma = random::form(&mut r, &u, &shape(), k, N as usize - 1);
        let exact = sigma.d_h(N);
        if !exact.is_zero() {
            prop_assert!(rho(&exact, N).unwrap().is_zero());
        }
    }

    #[test]
    fn euler_lagrange_kills_total_divergences(seed in any::<u64>()) {
        let u = Universe::standard(N, 1, 1);
        let mut r = random::rng(seed);
        let sigma = random::form(&mut r, &u, &shape(), 0, N as usize - 1);
        let l = Lagrangian::from_form(&sigma.d_h(N), N).unwrap();
        prop_assert!(euler_lagrange(&l).is_zero());
    }

    #[test]
    fn decomposition_holds(seed in any::<u64>(), kind in 0usize..3) {
        let u = match kind {
            0 => Universe::standard(N, 2, 0),
            1 => Universe::standard(N, 0, 2),
            _ => Universe::standard(N, 1, 1),
        };
        let mut r = random::rng(seed);
        let l = Lagrangian::new(N, density(&mut r, &u));
        prop_assert!(check_decomposition(&l).is_zero());
        let lep = lepagean(&l);
        prop_assert_eq!(&lep.xi_l, &(&lep.xi + &l.form()));
    }

    #[test]
    fn components_match_the_source_form(seed in any::<u64>()) {
        let u = Universe::standard(N, 1, 1);
        let mut r = random::rng(seed);
        let l = Lagrangian::new(N, density(&mut r, &u));
        let mut expected = Form::zero();
        for (f, e) in euler_components(&l) {
            expected += &Form::theta(Jet::order0(f)).wedge(&Form::function(e)).wedge(&Form::omega(N));
        }
        prop_assert_eq!(euler_lagrange(&l), expected);
    }

    #[test]
    fn euler_lagrange_matches_the_first_variation(seed in any::<u64>()) {
        let u = Universe::standard(1, 1, 0);
        let mut r = random::rng(seed);
        let l = Lagrangian::new(1, random::poly(&mut r, &u, &shape()));
        let e = euler_components(&l).remove(&FieldId::even(0)).unwrap_or_default();
        let section: Vec<Rational> = (0..4).map(|_| random::coefficient(&mut r)).collect();
        for shift in 0..3 {
            let mut eta = bump(5);
            eta = mul(&eta, &monomial(shift));
            let lhs = integrate(&first_variation(&l.density, &section, &eta));
            let rhs = integrate(&mul(&eta, &substitute(&e, &section)));
            prop_assert_eq!(lhs, rhs);
        }
    }
}

// Univariate polynomials in x as coefficient vectors, for the oracle above.
type UPoly = Vec<Rational>;

fn add(a: &UPoly, b: &UPoly) -> UPoly {
    let mut out = vec![Rational::zero(); a.len().max(b.len())];
    for (i, c) in a.iter().enumerate() {
        out[i] += c;
    }
    for (i, c) in b.iter().enumerate() {
        out[i] += c;
    }
    out
}

fn mul(a: &UPoly, b: &UPoly) -> UPoly {
    if a.is_empty() || b.is_empty() {
        return Vec::new();
    }
    let mut out = vec![Rational::zero(); a.len() + b.len() - 1];
    for (i, x) in a.iter().enumerate() {
        for (j, y) in b.iter().enumerate() {
            out[i + j] += x * y;
        }
    }
    out
}

fn derivative(a: &UPoly, k: usize) -> UPoly {
    let mut out = a.clone();
    for _ in 0..k {
        out = out
            .iter()
            .enumerate()
            .skip(1)
            .map(|(i, c)| c * rat(i as i64))
            .collect();
    }
    out
}

fn monomial(k: usize) -> UPoly {
    let mut out = vec![Rational::zero(); k + 1];
    out[k] = Rational::one();
    out
}

/// `x^k (1 - x)^k`, vanishing to order `k` at both ends of `[0, 1]`.
fn bump(k: usize) -> UPoly {
    let mut out = vec![Rational::one()];
    for _ in 0..k {
        out = mul(&out, &vec![rat(0), rat(1)]);
        out = mul(&out, &vec![rat(1), rat(-1)]);
    }
    out
}

fn integrate(a: &UPoly) -> Rational {
    a.iter()
        .enumerate()
        .map(|(i, c)| c * ratio(1, i as i64 + 1))
        .fold(Rational::zero(), |s, t| s + t)
}

fn factor(g: &Generator, section: &UPoly) -> UPoly {
    match g {
        Generator::Base(_) => monomial(1),
        Generator::Jet(j) => derivative(section, j.order()),
    }
}

fn substitute(p: &GradedPoly, section: &UPoly) -> UPoly {
    let mut out = Vec::new();
    for (m, c) in p.terms() {
        let mut t = vec![c.clone()];
        for (g, e) in m.even_factors() {
            for _ in 0..*e {
                t = mul(&t, &factor(g, section));
            }
        }
        out = add(&out, &t);
    }
    out
}

/// `d/dε L(j(p + ε η))` at `ε = 0`, by the product rule on every factor.
fn first_variation(l: &GradedPoly, section: &UPoly, eta: &UPoly) -> UPoly {
    let mut out = Vec::new();
    for (m, c) in l.terms() {
        let factors = m.even_factors();
        for (pos, (g, e)) in factors.iter().enumerate() {
            let Generator::Jet(j) = g else { continue };
            let mut t = vec![c * rat(*e as i64)];
            t = mul(&t, &derivative(eta, j.order()));
            for _ in 1..*e {
                t = mul(&t, &factor(g, section));
            }
            for (other, (h, k)) in factors.iter().enumerate() {
                if other != pos {
                    for _ in 0..*k {
                        t = mul(&t, &factor(h, section));
                    }
                }
            }
            out = add(&out, &t);
        }
    }
    out
}

fn y(index: &[Dir]) -> GradedPoly {
    GradedPoly::jet(Jet::new(FieldId::even(0), MultiIndex::new(index.iter().copied())))
}

#[test]
fn free_scalar_examples() {
    let l = Lagrangian::new(1, (&y(&[1]) * &y(&[1])).scale(&ratio(1, 2)));
    let theta = Form::theta(Jet::order0(FieldId::even(0)));
    assert_eq!(euler_lagrange(&l), -theta.mul_function(&y(&[1, 1])).wedge(&Form::dx(1)));
    assert_eq!(lepagean(&l).xi, theta.mul_function(&y(&[1])));
    let jet_free = Lagrangian::new(1, y(&[]));
    assert_eq!(euler_lagrange(&jet_free), theta.wedge(&Form::dx(1)));
    let th1 = Form::theta(Jet::new(FieldId::even(0), MultiIndex::new([1])));
    let phi = th1.mul_function(&y(&[])).wedge(&Form::dx(1));
    assert_eq!(rho(&phi, 1).unwrap(), -theta.mul_function(&y(&[1])).wedge(&Form::dx(1)));
}

#[test]
fn triviality_examples() {
    let exact = Lagrangian::new(1, &(&y(&[1]) * &y(&[1])) + &(&y(&[]) * &y(&[1, 1])));
    match triviality_test(&exact, 3) {
        Triviality::Trivial { xi, .. } => assert_eq!(xi.d_h(1), exact.form()),
        other => panic!("{:?}", other),
    }
    let free = Lagrangian::new(1, (&y(&[1]) * &y(&[1])).scale(&ratio(1, 2)));
    match triviality_test(&free, 3) {
        Triviality::Nontrivial { obstruction } => assert_eq!(obstruction, euler_lagrange(&free)),
        other => panic!("{:?}", other),
    }
    assert!(matches!(
        triviality_test(&Lagrangian::new(1, GradedPoly::zero()), 3),
        Triviality::Trivial { .. }
    ));
}
