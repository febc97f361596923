//! Fixtures for the benchmarks in `benches/`.

use varbi::brst::{s_operator, BrstModel, StructureConstants};
use varbi::random::{self, PolyShape};
use varbi::{Form, GradedPoly, Lagrangian, SuperSymmetry, Universe};

pub const SEED: u64 = 7;

pub fn shape(order: usize, degree: usize) -> PolyShape {
    PolyShape {
        max_order: order,
        max_degree: degree,
        max_terms: 4,
        ..PolyShape::default()
    }
}

pub fn polys(count: usize) -> (Universe, Vec<GradedPoly>) {
    let u = Universe::standard(3, 2, 1);
    let mut r = random::rng(SEED);
    let ps = (0..count).map(|_| random::poly(&mut r, &u, &shape(3, 3))).collect();
    (u, ps)
}

pub fn forms(count: usize) -> (Universe, Vec<Form>) {
    let u = Universe::standard(3, 1, 1);
    let mut r = random::rng(SEED);
    let fs = (0..count)
        .map(|i| random::form(&mut r, &u, &shape(2, 2), i % 3, i % 4))
        .collect();
    (u, fs)
}

pub fn lagrangians(count: usize) -> Vec<Lagrangian> {
    let u = Universe::standard(2, 1, 1);
    let mut r = random::rng(SEED);
    let s = PolyShape {
        parity: Some(varbi::Parity::Even),
        ..shape(2, 3)
    };
    (0..count).map(|_| Lagrangian::new(2, random::poly(&mut r, &u, &s))).collect()
}

/// The su(2) BRST symmetry over `n` directions with its universe.
pub fn su2(n: varbi::Dir) -> (BrstModel, Universe, SuperSymmetry) {
    let (m, u) = BrstModel::standalone(n, StructureConstants::levi_civita());
    let s = m.build();
    (m, u, s)
}

/// Top forms `s ξ + d_H σ` for the descent benchmark.
pub fn descent_inputs(count: usize) -> (SuperSymmetry, Vec<Form>) {
    let (_, u, s) = su2(1);
    let mut r = random::rng(SEED);
    let sh = shape(1, 2);
    let inputs = (0..count)
        .map(|_| {
            let xi = random::charged_horizontal(&mut r, &u, &sh, 1, 0);
            let sigma = random::charged_horizontal(&mut r, &u, &sh, 0, 1);
            &s_operator(&s, &xi).unwrap() + &sigma.d_h(1)
        })
        .collect();
    (s, inputs)
}
