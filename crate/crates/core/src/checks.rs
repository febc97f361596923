//! Seeded randomized identity checks, shared by the `selfcheck` command and
//! the acceptance suite. Every comparison is exact.

use rand::Rng;

use crate::brst::{
    descent_solve, descent_verify, dh_solve, nilpotency_check, s_operator, BrstModel, DhOutcome,
    StructureConstants,
};
use crate::forms::Form;
use crate::frontend::{parse_model, render_form};
use crate::kernel::{Dir, Parity, Universe};
use crate::random::{self, BaseKind, PolyShape, Rng64};
use crate::symmetry::first_variational_residual;
use crate::variational::{check_decomposition, euler_lagrange, rho, Lagrangian};

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Check {
    pub name: &'static str,
    pub cases: usize,
    /// One line per failed case, naming the case and the identity.
    pub failures: Vec<String>,
}

impl Check {
    fn new(name: &'static str, cases: usize) -> Self {
        Check {
            name,
            cases,
            failures: Vec::new(),
        }
    }

    fn expect(&mut self, case: usize, what: &str, ok: bool) {
        if !ok {
            self.failures.push(format!("case {}: {}", case, what));
        }
    }

    pub fn passed(&self) -> bool {
        self.failures.is_empty()
    }
}

fn case_rng(seed: u64, case: usize) -> Rng64 {
    random::rng(seed ^ (case as u64).wrapping_mul(0x9e37_79b9_7f4a_7c15))
}

fn h0(f: &Form, n: Dir) -> Form {
    let mut out = Form::zero();
    for m in 0..=n as usize {
        out += &f.project(0, m);
    }
    out
}

/// `[d_λ, d_μ] = 0` on random polynomials over three base directions, jet
/// order and degree at most 3.
pub fn commutation(seed: u64, cases: usize) -> Check {
    let mut c = Check::new("commutation", cases);
    let u = Universe::standard(3, 2, 1);
    let shape = PolyShape {
        max_order: 3,
        max_degree: 3,
        max_terms: 4,
        ..PolyShape::default()
    };
    for i in 0..cases {
        let mut r = case_rng(seed, i);
        let p = random::poly(&mut r, &u, &shape);
        for l in 1..=3 {
            for m in (l + 1)..=3 {
                let ok = p.total_derivative(l).total_derivative(m) == p.total_derivative(m).total_derivative(l);
                c.expect(i, &format!("[d_{}, d_{}]", l, m), ok);
            }
        }
    }
    c
}

/// `d² = d_H² = d_V² = 0`, `d_H d_V + d_V d_H = 0`, `h₀∘d = d_H∘h₀`.
pub fn bicomplex(seed: u64, cases: usize) -> Check {
    let mut c = Check::new("bicomplex", cases);
    let n = 3;
    let u = Universe::standard(n, 1, 1);
    let shape = PolyShape {
        max_order: 2,
        max_degree: 2,
        max_terms: 3,
        ..PolyShape::default()
    };
    for i in 0..cases {
        let mut r = case_rng(seed, i);
        let k = r.gen_range(0..=2);
        let m = r.gen_range(0..=n as usize);
        let phi = random::form(&mut r, &u, &shape, k, m);
        let (dh, dv) = phi.split_d(n);
        c.expect(i, "d^2", phi.d(n).d(n).is_zero());
        c.expect(i, "d_H^2", dh.d_h(n).is_zero());
        c.expect(i, "d_V^2", dv.d_v().is_zero());
        c.expect(i, "d_H d_V + d_V d_H", (&dv.d_h(n) + &dh.d_v()).is_zero());
        c.expect(i, "d = d_H + d_V", phi.d(n) == &dh + &dv);
        c.expect(i, "h0 d = d_H h0", h0(&phi.d(n), n) == h0(&phi, n).d_h(n));
    }
    c
}

/// `ρ∘d_H = 0` on random `(1, n-1)`-forms and `δ(d_H σ) = 0` on random
/// `(0, n-1)`-forms, with `ρ∘ρ = ρ` on the way.
pub fn variational(seed: u64, cases: usize) -> Check {
    let mut c = Check::new("variational", cases);
    let n: Dir = 2;
    let u = Universe::standard(n, 1, 1);
    let shape = PolyShape {
        max_order: 2,
        max_degree: 3,
        max_terms: 3,
        ..PolyShape::default()
    };
    for i in 0..cases {
        let mut r = case_rng(seed, i);
        let sigma1 = random::form(&mut r, &u, &shape, 1, n as usize - 1);
        let image = sigma1.d_h(n);
        if !image.is_zero() {
            c.expect(i, "rho d_H", rho(&image, n).map(|f| f.is_zero()).unwrap_or(false));
        }
        let sigma0 = random::form(&mut r, &u, &shape, 0, n as usize - 1);
        let l = Lagrangian::from_form(&sigma0.d_h(n), n);
        c.expect(i, "delta d_H", l.map(|l| euler_lagrange(&l).is_zero()).unwrap_or(false));
        let phi = random::form(&mut r, &u, &shape, 1, n as usize);
        if let Ok(once) = rho(&phi, n) {
            if !once.is_zero() {
                c.expect(i, "rho rho", rho(&once, n).map(|t| t == once).unwrap_or(false));
            }
        }
    }
    c
}

/// `dL - δL + d_H Ξ = 0` for Lagrangians cycling through even, odd and mixed
/// field content, jet order at most 2.
pub fn decomposition(seed: u64, cases: usize) -> Check {
    let mut c = Check::new("decomposition", cases);
    let n: Dir = 2;
    let universes = [
        Universe::standard(n, 2, 0),
        Universe::standard(n, 0, 2),
        Universe::standard(n, 1, 1),
    ];
    let shape = PolyShape {
        max_order: 2,
        max_degree: 3,
        max_terms: 3,
        parity: Some(Parity::Even),
        ..PolyShape::default()
    };
    for i in 0..cases {
        let mut r = case_rng(seed, i);
        let l = Lagrangian::new(n, random::poly(&mut r, &universes[i % 3], &shape));
        c.expect(i, "dL - dL_EL + d_H Xi", check_decomposition(&l).is_zero());
    }
    c
}

/// The first variational formula for symmetries cycling through vertical,
/// projectable and non-projectable base parts, even and odd.
pub fn first_variation(seed: u64, cases: usize) -> Check {
    let mut c = Check::new("first-variation", cases);
    let n: Dir = 2;
    let u = Universe::standard(n, 1, 1);
    let shape = PolyShape {
        max_order: 1,
        max_degree: 3,
        max_terms: 3,
        ..PolyShape::default()
    };
    let kinds = [BaseKind::Vertical, BaseKind::Projectable, BaseKind::General];
    for i in 0..cases {
        let mut r = case_rng(seed, i);
        let parity = if (i / 3) % 2 == 1 { Parity::Odd } else { Parity::Even };
        let sym = random::symmetry(&mut r, &u, &shape, parity, kinds[i % 3]);
        let order = r.gen_range(1..=2);
        let ls = PolyShape {
            max_order: order,
            parity: Some(Parity::Even),
            ..shape.clone()
        };
        let l = Lagrangian::new(n, random::poly(&mut r, &u, &ls));
        c.expect(i, "first variational formula", first_variational_residual(&sym, &l).is_zero());
    }
    c
}

/// Nilpotency of the su(2) BRST symmetry, then `s² = 0`,
/// `s d_H + d_H s = 0` and the charge shift on random horizontal forms.
pub fn brst_operator(seed: u64, cases: usize) -> Check {
    let mut c = Check::new("brst-operator", cases);
    let n: Dir = 2;
    let (model, u) = BrstModel::standalone(n, StructureConstants::levi_civita());
    let sym = model.build();
    let nil = nilpotency_check(&sym, &model.fields()).map(|r| r.nilpotent).unwrap_or(false);
    c.expect(0, "su(2) nilpotency", nil);
    let shape = PolyShape {
        max_order: 2,
        max_degree: 2,
        max_terms: 2,
        ..PolyShape::default()
    };
    for i in 0..cases {
        let mut r = case_rng(seed, i);
        let deg = r.gen_range(0..=n as usize);
        let charge = (i % 3) as i64;
        let phi = random::charged_horizontal(&mut r, &u, &shape, deg, charge);
        let (Ok(s), Ok(s_dh)) = (s_operator(&sym, &phi), s_operator(&sym, &phi.d_h(n))) else {
            c.expect(i, "s defined", false);
            continue;
        };
        c.expect(i, "s^2", s_operator(&sym, &s).map(|f| f.is_zero()).unwrap_or(false));
        c.expect(i, "s d_H + d_H s", (&s_dh + &s.d_h(n)).is_zero());
        let graded = s.terms().values().all(|f| u.poly_charge(f) == Some(charge + 1));
        c.expect(i, "charge", graded);
    }
    c
}

/// Descent chains from constructed inputs `s ξ + d_H σ`, alternating between
/// su(2) over one direction and u(1) over two; every returned chain must
/// verify, and a perturbed rung must be the only nonzero residual.
pub fn descent(seed: u64, cases: usize) -> Check {
    let mut c = Check::new("descent", cases);
    let models = [
        BrstModel::standalone(1, StructureConstants::levi_civita()),
        BrstModel::standalone(2, StructureConstants::abelian(1)),
    ];
    let shape = PolyShape {
        max_order: 1,
        max_degree: 2,
        max_terms: 2,
        ..PolyShape::default()
    };
    for i in 0..cases {
        let mut r = case_rng(seed, i);
        let (model, u) = &models[i % 2];
        let n = u.n;
        let sym = model.build();
        let xi = random::charged_horizontal(&mut r, u, &shape, n as usize, 0);
        let sigma = random::charged_horizontal(&mut r, u, &shape, n as usize - 1, 1);
        let Ok(s_xi) = s_operator(&sym, &xi) else {
            c.expect(i, "s defined", false);
            continue;
        };
        let phi = &s_xi + &sigma.d_h(n);
        let out = match descent_solve(&sym, &phi, 3) {
            Ok(o) => o,
            Err(e) => {
                c.expect(i, &format!("descent error {}", e), false);
                continue;
            }
        };
        c.expect(i, "chain complete", out.complete());
        let residuals = descent_verify(&sym, &out.chain).unwrap_or_default();
        c.expect(i, "chain verifies", residuals.iter().all(|(_, f)| f.is_zero()));
        let rung = r.gen_range(0..=n as usize);
        let mut broken = out.chain.clone();
        broken.rhs[rung] = &broken.rhs[rung] + &Form::function(crate::kernel::GradedPoly::one());
        let hit: Vec<usize> = descent_verify(&sym, &broken)
            .unwrap_or_default()
            .into_iter()
            .filter(|(_, f)| !f.is_zero())
            .map(|(k, _)| k)
            .collect();
        c.expect(i, "perturbation localized", hit == vec![rung]);
    }
    c
}

/// Every witness returned by the `d_H` solver re-verifies, and every top-degree
/// obstruction has a nonzero Euler-Lagrange form.
pub fn dh_soundness(seed: u64, cases: usize) -> Check {
    let mut c = Check::new("dh-solve", cases);
    let shape = PolyShape {
        max_order: 1,
        max_degree: 2,
        max_terms: 2,
        ..PolyShape::default()
    };
    for i in 0..cases {
        let mut r = case_rng(seed, i);
        let n: Dir = 1 + (i % 2) as Dir;
        let u = Universe::standard(n, 1, 1);
        let m = r.gen_range(1..=n as usize);
        let phi = if r.gen_bool(0.5) {
            random::form(&mut r, &u, &shape, 0, m - 1).d_h(n)
        } else {
            random::form(&mut r, &u, &shape, 0, m)
        };
        match dh_solve(&phi, n, 2) {
            Ok(DhOutcome::Solved { sigma, .. }) => c.expect(i, "witness", sigma.d_h(n) == phi),
            Ok(DhOutcome::Obstruction { witness, .. }) => {
                if m == n as usize {
                    let el = Lagrangian::from_form(&phi, n).map(|l| euler_lagrange(&l));
                    c.expect(i, "obstruction has nonzero EL", matches!(el, Ok(e) if !e.is_zero()));
                } else {
                    c.expect(i, "obstruction witness", !witness.is_zero());
                }
            }
            Ok(DhOutcome::Undecided { .. }) => {}
            Err(e) => c.expect(i, &format!("solver error {}", e), false),
        }
    }
    c
}

const ROUND_TRIP_MODEL: &str = "base 2; even y; odd c charge 1; structure levi_civita(3);";

/// `parse(render(φ)) = φ` on random forms over a model with plain and
/// indexed fields.
pub fn round_trip(seed: u64, cases: usize) -> Check {
    let mut c = Check::new("round-trip", cases);
    let model = parse_model(ROUND_TRIP_MODEL).expect("built-in model parses");
    let shape = PolyShape {
        max_order: 2,
        max_degree: 3,
        max_terms: 3,
        ..PolyShape::default()
    };
    for i in 0..cases {
        let mut r = case_rng(seed, i);
        let k = r.gen_range(0..=2);
        let m = r.gen_range(0..=2);
        let f = random::form(&mut r, &model.universe, &shape, k, m);
        let text = render_form(&model.universe, &f);
        let back = model.expr(&text);
        c.expect(i, &format!("round trip of `{}`", text), back.as_ref() == Ok(&f));
    }
    c
}

/// Every suite at the given size.
pub fn all(seed: u64, cases: usize) -> Vec<Check> {
    vec![
        commutation(seed, cases),
        bicomplex(seed, cases),
        variational(seed, cases),
        decomposition(seed, cases),
        first_variation(seed, cases),
        brst_operator(seed, cases),
        descent(seed, cases),
        dh_soundness(seed, cases),
        round_trip(seed, cases),
    ]
}

#[cfg(test)]
mod tests {
    #[test]
    fn small_runs_pass() {
        for c in super::all(1, 6) {
            assert!(c.passed(), "{}: {:?}", c.name, c.failures);
        }
    }
}
