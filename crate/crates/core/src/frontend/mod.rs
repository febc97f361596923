//! Text front end: the model-file language, canonical rendering and reports.

pub mod lexer;
pub mod parser;
pub mod render;
pub mod report;

pub use parser::{parse_expr, parse_model};
pub use render::{render_form, render_poly, render_symmetry};
pub use report::{Entry, Report, Verdict, SCHEMA};

use crate::brst::BrstModel;
use crate::error::{Error, Result};
use crate::forms::Form;
use crate::kernel::Universe;
use crate::symmetry::SuperSymmetry;
use crate::variational::Lagrangian;

#[derive(Clone, Debug, PartialEq)]
pub enum ItemKind {
    Lagrangian(Lagrangian),
    Form(Form),
    Symmetry(SuperSymmetry),
}

#[derive(Clone, Debug, PartialEq)]
pub struct Item {
    pub name: String,
    pub kind: ItemKind,
    pub line: usize,
}

/// A parsed model: the declared fields, an optional gauge model and the named
/// items in declaration order.
#[derive(Clone, Debug, PartialEq)]
pub struct ModelFile {
    pub version: u32,
    pub universe: Universe,
    pub brst: Option<BrstModel>,
    pub items: Vec<Item>,
}

impl ModelFile {
    pub fn n(&self) -> crate::kernel::Dir {
        self.universe.n
    }

    pub fn item(&self, name: &str) -> Result<&Item> {
        self.items
            .iter()
            .find(|i| i.name == name)
            .ok_or_else(|| Error::UnknownName(name.into()))
    }

    /// A Lagrangian item, or a form item of bidegree `(0, n)`.
    pub fn lagrangian(&self, name: &str) -> Result<Lagrangian> {
        match &self.item(name)?.kind {
            ItemKind::Lagrangian(l) => Ok(l.clone()),
            ItemKind::Form(f) => Lagrangian::from_form(f, self.n()),
            ItemKind::Symmetry(_) => Err(Error::Unsupported(format!("`{}` is a symmetry", name))),
        }
    }

    pub fn form(&self, name: &str) -> Result<Form> {
        match &self.item(name)?.kind {
            ItemKind::Lagrangian(l) => Ok(l.form()),
            ItemKind::Form(f) => Ok(f.clone()),
            ItemKind::Symmetry(_) => Err(Error::Unsupported(format!("`{}` is a symmetry", name))),
        }
    }

    pub fn symmetry(&self, name: &str) -> Result<SuperSymmetry> {
        match &self.item(name)?.kind {
            ItemKind::Symmetry(s) => Ok(s.clone()),
            _ => Err(Error::Unsupported(format!("`{}` is not a symmetry", name))),
        }
    }

    /// Names of the items of one kind, in declaration order.
    pub fn names(&self, pick: fn(&ItemKind) -> bool) -> Vec<&str> {
        self.items
            .iter()
            .filter(|i| pick(&i.kind))
            .map(|i| i.name.as_str())
            .collect()
    }

    /// Parses an expression in the context of this model.
    pub fn expr(&self, text: &str) -> Result<Form> {
        parse_expr(text, &self.universe, &self.items)
    }

    pub fn render(&self, f: &Form) -> String {
        render_form(&self.universe, f)
    }
}
