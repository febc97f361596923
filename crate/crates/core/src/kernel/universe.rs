use std::fmt::Write;

use super::generator::{FieldId, Generator, Jet, Parity};
use super::multi_index::Dir;
use super::poly::{GradedPoly, Monomial};

/// Declared field: a name, an optional family subscript such as `a[2,1]`, and
/// its charge (ghost number for odd fields).
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FieldInfo {
    pub id: FieldId,
    pub name: String,
    pub subscript: Vec<u32>,
    pub charge: i64,
    /// Intrinsic direction weight; empty means zero.
    pub weight: Vec<i64>,
}

impl FieldInfo {
    pub fn label(&self) -> String {
        if self.subscript.is_empty() {
            return self.name.clone();
        }
        let parts: Vec<String> = self.subscript.iter().map(u32::to_string).collect();
        format!("{}[{}]", self.name, parts.join(","))
    }
}

/// Base dimension together with the declared even and odd fields.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Universe {
    pub n: Dir,
    fields: Vec<FieldInfo>,
}

impl Universe {
    pub fn new(n: Dir) -> Self {
        Universe {
            n,
            fields: Vec::new(),
        }
    }

    /// `n` directions with even fields `y, u, v, …` and odd fields `c, b, e, …`.
    pub fn standard(n: Dir, even: usize, odd: usize) -> Self {
        const EVEN: [&str; 4] = ["y", "u", "v", "w"];
        const ODD: [&str; 4] = ["c", "b", "e", "f"];
        let mut u = Universe::new(n);
        for i in 0..even {
            u.add_even(EVEN[i % 4], if i < 4 { vec![] } else { vec![i as u32] });
        }
        for a in 0..odd {
            u.add_odd(ODD[a % 4], if a < 4 { vec![] } else { vec![a as u32] }, 1);
        }
        u
    }

    pub fn add_even(&mut self, name: &str, subscript: Vec<u32>) -> FieldId {
        let id = FieldId::even(self.count(Parity::Even) as u16);
        self.fields.push(FieldInfo {
            id,
            name: name.to_string(),
            subscript,
            charge: 0,
            weight: Vec::new(),
        });
        id
    }

    pub fn add_odd(&mut self, name: &str, subscript: Vec<u32>, charge: i64) -> FieldId {
        let id = FieldId::odd(self.count(Parity::Odd) as u16);
        self.fields.push(FieldInfo {
            id,
            name: name.to_string(),
            subscript,
            charge,
            weight: Vec::new(),
        });
        id
    }

    pub fn count(&self, parity: Parity) -> usize {
        self.fields.iter().filter(|f| f.id.parity == parity).count()
    }

    pub fn fields(&self) -> &[FieldInfo] {
        &self.fields
    }

    pub fn field_ids(&self) -> Vec<FieldId> {
        self.fields.iter().map(|f| f.id).collect()
    }

    pub fn info(&self, id: FieldId) -> Option<&FieldInfo> {
        self.fields.iter().find(|f| f.id == id)
    }

    pub fn lookup(&self, name: &str, subscript: &[u32]) -> Option<FieldId> {
        self.fields
            .iter()
            .find(|f| f.name == name && f.subscript == subscript)
            .map(|f| f.id)
    }

    pub fn has_family(&self, name: &str) -> bool {
        self.fields.iter().any(|f| f.name == name)
    }

    pub fn set_weight(&mut self, id: FieldId, weight: Vec<i64>) {
        if let Some(f) = self.fields.iter_mut().find(|f| f.id == id) {
            f.weight = weight;
        }
    }

    pub fn set_charge(&mut self, id: FieldId, charge: i64) {
        if let Some(f) = self.fields.iter_mut().find(|f| f.id == id) {
            f.charge = charge;
        }
    }

    /// Intrinsic weight of a field, padded to length `n`.
    pub fn weight(&self, id: FieldId) -> Vec<i64> {
        let mut w = self.info(id).map(|f| f.weight.clone()).unwrap_or_default();
        w.resize(self.n as usize, 0);
        w
    }

    pub fn charge(&self, id: FieldId) -> i64 {
        self.info(id).map(|f| f.charge).unwrap_or(0)
    }

    pub fn monomial_charge(&self, m: &Monomial) -> i64 {
        let even: i64 = m
            .even_factors()
            .iter()
            .filter_map(|(g, e)| g.jet().map(|j| self.charge(j.field) * *e as i64))
            .sum();
        even + m.odd_factors().iter().map(|j| self.charge(j.field)).sum::<i64>()
    }

    /// Charge of a polynomial, if homogeneous.
    pub fn poly_charge(&self, p: &GradedPoly) -> Option<i64> {
        let mut it = p.terms().keys().map(|m| self.monomial_charge(m));
        let first = it.next().unwrap_or(0);
        it.all(|c| c == first).then_some(first)
    }

    pub fn field_label(&self, id: FieldId) -> String {
        match self.info(id) {
            Some(f) => f.label(),
            None => format!("{}{}", if id.parity.is_odd() { "c" } else { "y" }, id.index),
        }
    }

    pub fn jet_label(&self, j: &Jet) -> String {
        let mut s = self.field_label(j.field);
        if !j.index.is_empty() {
            s.push('_');
            let _ = write!(s, "{}", j.index);
        }
        s
    }

    pub fn generator_label(&self, g: &Generator) -> String {
        match g {
            Generator::Base(d) => format!("x{}", d),
            Generator::Jet(j) => self.jet_label(j),
        }
    }
}
