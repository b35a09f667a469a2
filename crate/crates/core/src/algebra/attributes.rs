//! Three-valued inference of unitality, nuclearity and stable finiteness.

use std::fmt;

use serde::{Deserialize, Serialize};

use super::AlgExpr;

/// Kleene truth value.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Tri {
    True,
    False,
    Unknown,
}

impl Tri {
    pub fn and(self, other: Tri) -> Tri {
        match (self, other) {
            (Tri::False, _) | (_, Tri::False) => Tri::False,
            (Tri::True, Tri::True) => Tri::True,
            _ => Tri::Unknown,
        }
    }

    /// Information order: `Unknown` lies below both definite values.
    pub fn refines(self, other: Tri) -> bool {
        other == Tri::Unknown || self == other
    }
}

impl From<bool> for Tri {
    fn from(b: bool) -> Tri {
        if b {
            Tri::True
        } else {
            Tri::False
        }
    }
}

impl fmt::Display for Tri {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Tri::True => "true",
            Tri::False => "false",
            Tri::Unknown => "unknown",
        })
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct AttributeReport {
    pub unital: Tri,
    pub nuclear: Tri,
    pub stably_finite: Tri,
}

impl AttributeReport {
    const fn new(unital: Tri, nuclear: Tri, stably_finite: Tri) -> Self {
        AttributeReport { unital, nuclear, stably_finite }
    }

    fn and(self, other: Self) -> Self {
        AttributeReport::new(
            self.unital.and(other.unital),
            self.nuclear.and(other.nuclear),
            self.stably_finite.and(other.stably_finite),
        )
    }

    /// Attributes of the suspension of an algebra with these attributes.
    pub fn suspend(self) -> Self {
        let sf = if self.stably_finite == Tri::True { Tri::True } else { Tri::Unknown };
        AttributeReport::new(Tri::False, self.nuclear, sf)
    }

    /// Attributes of the unitization of an algebra with these attributes.
    pub fn unitize(self) -> Self {
        AttributeReport::new(Tri::True, self.nuclear, self.stably_finite)
    }

    /// Attributes of a countable direct sum whose summands satisfy `self`.
    pub fn countable_sum(self) -> Self {
        AttributeReport::new(Tri::False, self.nuclear, self.stably_finite)
    }
}

impl fmt::Display for AttributeReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "unital={} nuclear={} stably_finite={}", self.unital, self.nuclear, self.stably_finite)
    }
}

pub fn infer_attributes(e: &AlgExpr) -> AttributeReport {
    use Tri::*;
    match e {
        AlgExpr::C => AttributeReport::new(True, True, True),
        AlgExpr::Zero => AttributeReport::new(False, True, True),
        // purely infinite, so never stably finite
        AlgExpr::Cuntz(_) => AttributeReport::new(True, True, False),
        AlgExpr::BS(_) => AttributeReport::new(True, True, True),
        AlgExpr::Susp(x) => infer_attributes(x).suspend(),
        AlgExpr::Unit(x) => infer_attributes(x).unitize(),
        AlgExpr::Sum(a, b) => infer_attributes(a).and(infer_attributes(b)),
        // both branches occur for some set R, so the answer must hold for either
        AlgExpr::BigOplus { in_r, otherwise, .. } => {
            infer_attributes(in_r).and(infer_attributes(otherwise)).countable_sum()
        }
    }
}
