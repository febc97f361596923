//! Sparse exact Gauss–Jordan elimination over the rationals.

use std::collections::BTreeMap;

use num_traits::Zero;

use crate::forms::{Covector, Form};
use crate::kernel::{Monomial, Rational};

pub type Row = BTreeMap<usize, Rational>;

/// Incrementally reduced linear system. Pivots are always the smallest
/// remaining column, so the result depends only on the input order.
#[derive(Clone, Debug, Default)]
pub struct Elimination {
    pivots: BTreeMap<usize, (Row, Rational)>,
    inconsistent: bool,
}

fn axpy(target: &mut Row, rhs: &mut Rational, factor: &Rational, row: &Row, row_rhs: &Rational) {
    for (c, v) in row {
        let entry = target.entry(*c).or_insert_with(Rational::zero);
        *entry -= factor * v;
        if entry.is_zero() {
            target.remove(c);
        }
    }
    *rhs -= factor * row_rhs;
}

impl Elimination {
    pub fn new() -> Self {
        Elimination::default()
    }

    pub fn push(&mut self, mut row: Row, mut rhs: Rational) {
        row.retain(|_, v| !v.is_zero());
        let cols: Vec<usize> = row.keys().copied().collect();
        for c in cols {
            let Some(factor) = row.get(&c).cloned() else { continue };
            if let Some((prow, prhs)) = self.pivots.get(&c) {
                axpy(&mut row, &mut rhs, &factor, prow, prhs);
            }
        }
        let Some((&p, lead)) = row.iter().next() else {
            if !rhs.is_zero() {
                self.inconsistent = true;
            }
            return;
        };
        let inv = lead.recip();
        for v in row.values_mut() {
            *v *= &inv;
        }
        rhs *= &inv;
        for (prow, prhs) in self.pivots.values_mut() {
            if let Some(f) = prow.get(&p).cloned() {
                axpy(prow, prhs, &f, &row, &rhs);
            }
        }
        self.pivots.insert(p, (row, rhs));
    }

    pub fn is_consistent(&self) -> bool {
        !self.inconsistent
    }

    pub fn rank(&self) -> usize {
        self.pivots.len()
    }

    /// A solution with every free variable set to zero.
    pub fn solution(&self, vars: usize) -> Option<Vec<Rational>> {
        if self.inconsistent {
            return None;
        }
        let mut x = vec![Rational::zero(); vars];
        for (p, (_, rhs)) in &self.pivots {
            x[*p] = rhs.clone();
        }
        Some(x)
    }
}

/// Finds rational `x` with `Σ x_i images[i] = target`, if any.
pub fn solve_combination(images: &[Form], target: &Form) -> Option<Vec<Rational>> {
    let mut rows: BTreeMap<(Vec<Covector>, Monomial), (Row, Rational)> = BTreeMap::new();
    for (i, img) in images.iter().enumerate() {
        for (w, f) in img.terms() {
            for (m, c) in f.terms() {
                let entry = rows
                    .entry((w.clone(), m.clone()))
                    .or_insert_with(|| (Row::new(), Rational::zero()));
                entry.0.insert(i, c.clone());
            }
        }
    }
    for (w, f) in target.terms() {
        for (m, c) in f.terms() {
            let entry = rows
                .entry((w.clone(), m.clone()))
                .or_insert_with(|| (Row::new(), Rational::zero()));
            entry.1 = c.clone();
        }
    }
    let mut elim = Elimination::new();
    for (_, (row, rhs)) in rows {
        elim.push(row, rhs);
        if !elim.is_consistent() {
            return None;
        }
    }
    elim.solution(images.len())
}

/// `Σ x_i forms[i]`.
pub fn combine(forms: &[Form], x: &[Rational]) -> Form {
    let mut out = Form::zero();
    for (f, c) in forms.iter().zip(x) {
        if !c.is_zero() {
            out += &f.scale(c);
        }
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::kernel::{rat, ratio};

    fn row(entries: &[(usize, i64)]) -> Row {
        entries.iter().map(|&(c, v)| (c, rat(v))).collect()
    }

    #[test]
    fn solves_small_system() {
        // x + y = 3, x - y = 1
        let mut e = Elimination::new();
        e.push(row(&[(0, 1), (1, 1)]), rat(3));
        e.push(row(&[(0, 1), (1, -1)]), rat(1));
        assert_eq!(e.solution(2).unwrap(), vec![rat(2), rat(1)]);
    }

    #[test]
    fn detects_inconsistency() {
        let mut e = Elimination::new();
        e.push(row(&[(0, 2), (1, 2)]), rat(1));
        e.push(row(&[(0, 1), (1, 1)]), rat(1));
        assert!(!e.is_consistent());
        assert!(e.solution(2).is_none());
    }

    #[test]
    fn free_variables_are_zero() {
        let mut e = Elimination::new();
        e.push(row(&[(0, 3), (2, 1)]), rat(1));
        assert_eq!(e.solution(3).unwrap(), vec![ratio(1, 3), rat(0), rat(0)]);
        assert_eq!(e.rank(), 1);
    }
}
