use std::collections::BTreeMap;

use super::generator::{FieldId, Parity};
use super::multi_index::Dir;
use super::poly::GradedPoly;

/// Plain (unprolonged) graded derivation `υ^λ ∂_λ + υ^A ∂_A`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Derivation {
    pub parity: Parity,
    pub base: BTreeMap<Dir, GradedPoly>,
    pub fields: BTreeMap<FieldId, GradedPoly>,
}

impl Derivation {
    pub fn new(parity: Parity) -> Self {
        Derivation {
            parity,
            base: BTreeMap::new(),
            fields: BTreeMap::new(),
        }
    }

    pub fn with_base(mut self, dir: Dir, p: GradedPoly) -> Self {
        self.base.insert(dir, p);
        self
    }

    pub fn with_field(mut self, field: FieldId, p: GradedPoly) -> Self {
        self.fields.insert(field, p);
        self
    }

    pub fn base_component(&self, dir: Dir) -> GradedPoly {
        self.base.get(&dir).cloned().unwrap_or_default()
    }

    pub fn field_component(&self, field: FieldId) -> GradedPoly {
        self.fields.get(&field).cloned().unwrap_or_default()
    }

    /// Checks that every component has parity `[υ] + [generator]`. Returns
    /// a description of the first offending component.
    pub fn parity_violation(&self) -> Option<String> {
        for (d, p) in &self.base {
            if !p.is_zero() && p.parity() != Some(self.parity) {
                return Some(format!("base component {} has the wrong parity", d));
            }
        }
        for (f, p) in &self.fields {
            if !p.is_zero() && p.parity() != Some(self.parity + f.parity) {
                return Some(format!(
                    "component on {:?} field {} has the wrong parity",
                    f.parity, f.index
                ));
            }
        }
        None
    }
}
