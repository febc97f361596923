use std::fmt;
use std::ops::Add;

use serde::Serialize;

use super::multi_index::{Dir, MultiIndex};

/// Grassmann parity.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Parity {
    Even,
    Odd,
}

impl Parity {
    pub fn is_odd(self) -> bool {
        self == Parity::Odd
    }

    pub fn flip(self) -> Parity {
        match self {
            Parity::Even => Parity::Odd,
            Parity::Odd => Parity::Even,
        }
    }

    pub fn from_count(count: usize) -> Parity {
        if count % 2 == 1 {
            Parity::Odd
        } else {
            Parity::Even
        }
    }

    /// `true` when `(-1)^(self * other)` is negative.
    pub fn both_odd(self, other: Parity) -> bool {
        self.is_odd() && other.is_odd()
    }
}

impl Add for Parity {
    type Output = Parity;
    fn add(self, rhs: Parity) -> Parity {
        if self == rhs {
            Parity::Even
        } else {
            Parity::Odd
        }
    }
}

/// Identifies a field: even fields `y^i` and odd fields `c^a` live in
/// separate index spaces.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct FieldId {
    pub parity: Parity,
    pub index: u16,
}

impl FieldId {
    pub fn even(index: u16) -> Self {
        FieldId {
            parity: Parity::Even,
            index,
        }
    }

    pub fn odd(index: u16) -> Self {
        FieldId {
            parity: Parity::Odd,
            index,
        }
    }
}

/// Jet coordinate `s^A_Λ`.
#[derive(Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Jet {
    pub field: FieldId,
    pub index: MultiIndex,
}

impl Jet {
    pub fn new(field: FieldId, index: MultiIndex) -> Self {
        Jet { field, index }
    }

    pub fn order0(field: FieldId) -> Self {
        Jet {
            field,
            index: MultiIndex::empty(),
        }
    }

    pub fn parity(&self) -> Parity {
        self.field.parity
    }

    pub fn order(&self) -> usize {
        self.index.len()
    }

    /// `s^A_{λ+Λ}`.
    pub fn prolong(&self, dir: Dir) -> Jet {
        Jet {
            field: self.field,
            index: self.index.append(dir),
        }
    }
}

impl fmt::Debug for Jet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let letter = if self.field.parity.is_odd() { 'c' } else { 'y' };
        write!(f, "{}{}", letter, self.field.index)?;
        if !self.index.is_empty() {
            write!(f, "_{}", self.index)?;
        }
        Ok(())
    }
}

/// A generator of the graded function ring: base coordinate `x^λ` or a jet.
///
/// The derived order puts base coordinates first, then even jets, then odd
/// jets, each ordered by field and multi-index.
#[derive(Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Generator {
    Base(Dir),
    Jet(Jet),
}

impl Generator {
    pub fn parity(&self) -> Parity {
        match self {
            Generator::Base(_) => Parity::Even,
            Generator::Jet(j) => j.parity(),
        }
    }

    pub fn jet(&self) -> Option<&Jet> {
        match self {
            Generator::Jet(j) => Some(j),
            Generator::Base(_) => None,
        }
    }
}

impl From<Jet> for Generator {
    fn from(j: Jet) -> Self {
        Generator::Jet(j)
    }
}

impl fmt::Debug for Generator {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Generator::Base(d) => write!(f, "x{}", d),
            Generator::Jet(j) => write!(f, "{:?}", j),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parities() {
        assert_eq!(Generator::Base(1).parity(), Parity::Even);
        assert_eq!(
            Generator::Jet(Jet::order0(FieldId::even(0))).parity(),
            Parity::Even
        );
        assert_eq!(
            Generator::Jet(Jet::order0(FieldId::odd(0))).parity(),
            Parity::Odd
        );
        assert_eq!(Parity::Odd + Parity::Odd, Parity::Even);
    }

    #[test]
    fn generator_order_is_kind_field_index() {
        let x = Generator::Base(2);
        let y = Generator::Jet(Jet::order0(FieldId::even(0)));
        let y1 = Generator::Jet(Jet::new(FieldId::even(0), MultiIndex::new([1])));
        let u = Generator::Jet(Jet::order0(FieldId::even(1)));
        let c = Generator::Jet(Jet::order0(FieldId::odd(0)));
        let mut v = vec![c.clone(), u.clone(), y1.clone(), y.clone(), x.clone()];
        v.sort();
        assert_eq!(v, vec![x, y, y1, u, c]);
    }
}
