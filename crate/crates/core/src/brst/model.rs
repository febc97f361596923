//! Gauge/ghost models with Lie algebra structure constants, and the BRST
//! supersymmetry they define.

use std::collections::BTreeMap;

use num_traits::Zero;
use rand::Rng;

use crate::error::{Error, Result};
use crate::kernel::{rat, ratio, Dir, FieldId, GradedPoly, Jet, MultiIndex, Parity, Rational, Universe};
use crate::random::Rng64;
use crate::symmetry::SuperSymmetry;

/// Structure constants `c^r_{pq}` of a Lie algebra, 1-based and sparse.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct StructureConstants {
    dim: usize,
    table: BTreeMap<(usize, usize, usize), Rational>,
}

impl StructureConstants {
    /// Builds the table from entries `c[r,p,q]`. A missing `c[r,q,p]` is
    /// filled in by antisymmetry; an inconsistent pair is rejected, as is a
    /// table violating the Jacobi identity.
    pub fn new(dim: usize, entries: &[((usize, usize, usize), Rational)]) -> Result<Self> {
        let mut table: BTreeMap<(usize, usize, usize), Rational> = BTreeMap::new();
        for ((r, p, q), v) in entries {
            for &i in &[*r, *p, *q] {
                if i == 0 || i > dim {
                    return Err(Error::Structure(format!(
                        "index {} out of range 1..={}",
                        i, dim
                    )));
                }
            }
            if v.is_zero() {
                continue;
            }
            if p == q {
                return Err(Error::Structure(format!(
                    "c[{},{},{}] must vanish by antisymmetry",
                    r, p, q
                )));
            }
            table.insert((*r, *p, *q), v.clone());
        }
        let keys: Vec<_> = table.keys().copied().collect();
        for (r, p, q) in keys {
            let v = table[&(r, p, q)].clone();
            match table.get(&(r, q, p)) {
                None => {
                    table.insert((r, q, p), -v);
                }
                Some(w) if *w != -v.clone() => {
                    return Err(Error::Structure(format!(
                        "c[{},{},{}] and c[{},{},{}] are not antisymmetric",
                        r, p, q, r, q, p
                    )));
                }
                _ => {}
            }
        }
        let s = StructureConstants { dim, table };
        if let Some((p, q, t, r)) = s.jacobi_violation() {
            return Err(Error::Structure(format!(
                "Jacobi identity fails for (p,q,s) = ({},{},{}) in component {}",
                p, q, t, r
            )));
        }
        Ok(s)
    }

    pub fn abelian(dim: usize) -> Self {
        StructureConstants {
            dim,
            table: BTreeMap::new(),
        }
    }

    /// `c^r_{pq} = ε_{rpq}` on three generators.
    pub fn levi_civita() -> Self {
        let mut entries = Vec::new();
        for (r, p, q) in [(1, 2, 3), (2, 3, 1), (3, 1, 2)] {
            entries.push(((r, p, q), rat(1)));
        }
        StructureConstants::new(3, &entries).expect("su(2) satisfies Jacobi")
    }

    /// A random three-dimensional table `c^r_{pq} = ε_{pqk} N_{kr}` with `N`
    /// a symmetric integer matrix.
    #[allow(clippy::needless_range_loop)]
    pub fn random_class_a(rng: &mut Rng64) -> Self {
        let mut nm = [[0i64; 3]; 3];
        for i in 0..3 {
            for j in i..3 {
                let v = rng.gen_range(-2i64..=2);
                nm[i][j] = v;
                nm[j][i] = v;
            }
        }
        let mut entries = Vec::new();
        for (p, q, k) in [(0, 1, 2), (1, 2, 0), (2, 0, 1)] {
            for (r, &v) in nm[k].iter().enumerate() {
                if v != 0 {
                    entries.push(((r + 1, p + 1, q + 1), rat(v)));
                }
            }
        }
        StructureConstants::new(3, &entries).expect("class A tables satisfy Jacobi")
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn get(&self, r: usize, p: usize, q: usize) -> Rational {
        self.table.get(&(r, p, q)).cloned().unwrap_or_else(Rational::zero)
    }

    pub fn entries(&self) -> &BTreeMap<(usize, usize, usize), Rational> {
        &self.table
    }

    pub fn is_abelian(&self) -> bool {
        self.table.is_empty()
    }

    /// First `(p, q, s, r)` with `Σ_m c^m_{pq} c^r_{ms} + cyclic ≠ 0`.
    pub fn jacobi_violation(&self) -> Option<(usize, usize, usize, usize)> {
        let d = self.dim;
        for p in 1..=d {
            for q in 1..=d {
                for s in 1..=d {
                    for r in 1..=d {
                        let mut sum = Rational::zero();
                        for m in 1..=d {
                            sum += self.get(m, p, q) * self.get(r, m, s);
                            sum += self.get(m, q, s) * self.get(r, m, p);
                            sum += self.get(m, s, p) * self.get(r, m, q);
                        }
                        if !sum.is_zero() {
                            return Some((p, q, s, r));
                        }
                    }
                }
            }
        }
        None
    }
}

/// Gauge potentials `a^r_λ` (even) and ghosts `C^r` (odd, charge 1) over an
/// `n`-dimensional base.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct BrstModel {
    pub n: Dir,
    pub constants: StructureConstants,
    gauge: Vec<Vec<FieldId>>,
    ghosts: Vec<FieldId>,
}

impl BrstModel {
    /// Declares the gauge and ghost families in `universe`. The potential
    /// `a^r_λ` carries the intrinsic weight `e_λ`.
    pub fn install(
        universe: &mut Universe,
        constants: StructureConstants,
        gauge_name: &str,
        ghost_name: &str,
    ) -> Result<Self> {
        let n = universe.n;
        let dim = constants.dim();
        if universe.has_family(gauge_name) || universe.has_family(ghost_name) {
            return Err(Error::Structure("gauge or ghost name already declared".into()));
        }
        let mut gauge = Vec::with_capacity(dim);
        for r in 1..=dim {
            let mut row = Vec::with_capacity(n as usize);
            for lam in 1..=n {
                let id = universe.add_even(gauge_name, vec![r as u32, lam as u32]);
                let mut w = vec![0; n as usize];
                w[lam as usize - 1] = 1;
                universe.set_weight(id, w);
                row.push(id);
            }
            gauge.push(row);
        }
        let ghosts = (1..=dim)
            .map(|r| universe.add_odd(ghost_name, vec![r as u32], 1))
            .collect();
        Ok(BrstModel {
            n,
            constants,
            gauge,
            ghosts,
        })
    }

    /// Model together with a fresh universe holding only its fields.
    pub fn standalone(n: Dir, constants: StructureConstants) -> (Self, Universe) {
        let mut u = Universe::new(n);
        let m = BrstModel::install(&mut u, constants, "a", "C").expect("fresh universe");
        (m, u)
    }

    pub fn gauge(&self, r: usize, lam: Dir) -> FieldId {
        self.gauge[r - 1][lam as usize - 1]
    }

    pub fn ghost(&self, r: usize) -> FieldId {
        self.ghosts[r - 1]
    }

    pub fn fields(&self) -> Vec<FieldId> {
        self.gauge
            .iter()
            .flatten()
            .copied()
            .chain(self.ghosts.iter().copied())
            .collect()
    }

    fn ghost_jet(&self, r: usize, index: MultiIndex) -> GradedPoly {
        GradedPoly::jet(Jet::new(self.ghost(r), index))
    }

    /// `υ^r_λ = C^r_λ + c^r_{pq} a^p_λ C^q` and `υ^r = -½ c^r_{pq} C^p C^q`.
    pub fn build(&self) -> SuperSymmetry {
        let dim = self.constants.dim();
        let mut chars: BTreeMap<FieldId, GradedPoly> = BTreeMap::new();
        for r in 1..=dim {
            for lam in 1..=self.n {
                let mut v = self.ghost_jet(r, MultiIndex::new([lam]));
                for p in 1..=dim {
                    for q in 1..=dim {
                        let c = self.constants.get(r, p, q);
                        if c.is_zero() {
                            continue;
                        }
                        let a = GradedPoly::jet(Jet::order0(self.gauge(p, lam)));
                        v += &(&a * &self.ghost_jet(q, MultiIndex::empty())).scale(&c);
                    }
                }
                chars.insert(self.gauge(r, lam), v);
            }
            let mut g = GradedPoly::zero();
            for p in 1..=dim {
                for q in 1..=dim {
                    let c = self.constants.get(r, p, q);
                    if c.is_zero() {
                        continue;
                    }
                    let cc = &self.ghost_jet(p, MultiIndex::empty()) * &self.ghost_jet(q, MultiIndex::empty());
                    g += &cc.scale(&(c * ratio(-1, 2)));
                }
            }
            chars.insert(self.ghost(r), g);
        }
        SuperSymmetry::vertical(self.n, Parity::Odd, chars).expect("BRST components have the right parity")
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::random::rng;

    #[test]
    fn su2_components() {
        let (m, _) = BrstModel::standalone(2, StructureConstants::levi_civita());
        let u = m.build();
        let a = |r, l| GradedPoly::jet(Jet::order0(m.gauge(r, l)));
        let c = |r| GradedPoly::jet(Jet::order0(m.ghost(r)));
        let c_l = |r, l: Dir| GradedPoly::jet(Jet::new(m.ghost(r), MultiIndex::new([l])));
        for lam in 1..=2 {
            let expected = &(&c_l(1, lam) + &(&a(2, lam) * &c(3))) - &(&a(3, lam) * &c(2));
            assert_eq!(u.characteristic_of(m.gauge(1, lam)), expected);
        }
        assert_eq!(u.characteristic_of(m.ghost(1)), -(&c(2) * &c(3)));
    }

    #[test]
    fn abelian_components() {
        let (m, _) = BrstModel::standalone(1, StructureConstants::abelian(2));
        let u = m.build();
        for r in 1..=2 {
            assert_eq!(
                u.characteristic_of(m.gauge(r, 1)),
                GradedPoly::jet(Jet::new(m.ghost(r), MultiIndex::new([1])))
            );
            assert!(u.characteristic_of(m.ghost(r)).is_zero());
        }
    }

    #[test]
    fn rejects_bad_tables() {
        assert!(StructureConstants::new(2, &[((1, 1, 1), rat(1))]).is_err());
        assert!(StructureConstants::new(2, &[((1, 1, 2), rat(1)), ((1, 2, 1), rat(1))]).is_err());
        assert!(StructureConstants::new(2, &[((3, 1, 2), rat(1))]).is_err());
        // [e1,e2] = e1, [e2,e3] = e1 breaks Jacobi in three dimensions
        let bad = StructureConstants::new(3, &[((1, 1, 2), rat(1)), ((1, 2, 3), rat(1)), ((2, 1, 3), rat(1))]);
        assert!(bad.is_err());
    }

    #[test]
    fn random_tables_satisfy_jacobi() {
        let mut r = rng(7);
        for _ in 0..20 {
            let s = StructureConstants::random_class_a(&mut r);
            assert!(s.jacobi_violation().is_none());
        }
    }
}
