//! A small language for C*-algebra constructions: the atoms `C`, `Zero`,
//! Cuntz algebras `O(k)` and Baumslag-Solitar group algebras `BS(1, n)`,
//! closed under suspension `S`, unitization `U`, binary direct sums and a
//! conditional direct sum over an index `n` that branches on `n in R`.

mod attributes;
mod parser;

use std::fmt;

pub use attributes::{infer_attributes, AttributeReport, Tri};
pub use parser::{parse, parse_definitions, Definitions};

use crate::primes::nth_prime;

/// A generator count: a literal or `prime(index) + offset`.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub enum Arity {
    Literal(u64),
    PrimeShift { index: String, offset: u64 },
}

impl Arity {
    /// Value under an assignment of index variables (innermost binding last).
    pub fn value(&self, env: &[(String, u64)]) -> Option<u64> {
        match self {
            Arity::Literal(k) => Some(*k),
            Arity::PrimeShift { index, offset } => {
                let n = env.iter().rev().find(|(name, _)| name == index)?.1;
                Some(nth_prime(n as usize) + offset)
            }
        }
    }
}

impl fmt::Display for Arity {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Arity::Literal(k) => write!(f, "{k}"),
            Arity::PrimeShift { index, offset } => write!(f, "prime({index})+{offset}"),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub enum AlgExpr {
    /// The complex numbers.
    C,
    Zero,
    /// Cuntz algebra on `k >= 2` generators.
    Cuntz(Arity),
    /// Full group C*-algebra of `BS(1, n)`, `n >= 2`.
    BS(Arity),
    Susp(Box<AlgExpr>),
    Unit(Box<AlgExpr>),
    Sum(Box<AlgExpr>, Box<AlgExpr>),
    /// `(+)_n (in_r if n in R else otherwise)`.
    BigOplus { index: String, in_r: Box<AlgExpr>, otherwise: Box<AlgExpr> },
}

impl AlgExpr {
    pub fn susp(e: AlgExpr) -> AlgExpr {
        AlgExpr::Susp(Box::new(e))
    }

    pub fn unit(e: AlgExpr) -> AlgExpr {
        AlgExpr::Unit(Box::new(e))
    }

    pub fn sum(a: AlgExpr, b: AlgExpr) -> AlgExpr {
        AlgExpr::Sum(Box::new(a), Box::new(b))
    }

    pub fn big_oplus(index: impl Into<String>, in_r: AlgExpr, otherwise: AlgExpr) -> AlgExpr {
        AlgExpr::BigOplus { index: index.into(), in_r: Box::new(in_r), otherwise: Box::new(otherwise) }
    }

    pub fn cuntz(k: u64) -> AlgExpr {
        AlgExpr::Cuntz(Arity::Literal(k))
    }

    pub fn bs(n: u64) -> AlgExpr {
        AlgExpr::BS(Arity::Literal(n))
    }

    pub fn contains_big_oplus(&self) -> bool {
        match self {
            AlgExpr::BigOplus { .. } => true,
            AlgExpr::Susp(e) | AlgExpr::Unit(e) => e.contains_big_oplus(),
            AlgExpr::Sum(a, b) => a.contains_big_oplus() || b.contains_big_oplus(),
            _ => false,
        }
    }

    pub fn depth(&self) -> usize {
        match self {
            AlgExpr::C | AlgExpr::Zero | AlgExpr::Cuntz(_) | AlgExpr::BS(_) => 0,
            AlgExpr::Susp(e) | AlgExpr::Unit(e) => 1 + e.depth(),
            AlgExpr::Sum(a, b) => 1 + a.depth().max(b.depth()),
            AlgExpr::BigOplus { in_r, otherwise, .. } => 1 + in_r.depth().max(otherwise.depth()),
        }
    }

    /// Canonical concrete syntax; `parse(&e.pretty())` returns `e`.
    pub fn pretty(&self) -> String {
        self.to_string()
    }
}

impl fmt::Display for AlgExpr {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            AlgExpr::C => f.write_str("C"),
            AlgExpr::Zero => f.write_str("Zero"),
            AlgExpr::Cuntz(k) => write!(f, "O({k})"),
            AlgExpr::BS(n) => write!(f, "BS(1, {n})"),
            AlgExpr::Susp(e) => write!(f, "S({e})"),
            AlgExpr::Unit(e) => write!(f, "U({e})"),
            // sums associate to the left, so a right-nested sum needs parentheses
            AlgExpr::Sum(a, b) => match **b {
                AlgExpr::Sum(..) => write!(f, "{a} + ({b})"),
                _ => write!(f, "{a} + {b}"),
            },
            AlgExpr::BigOplus { index, in_r, otherwise } => {
                write!(f, "bigoplus {index} {{ R -> {in_r} ; _ -> {otherwise} }}")
            }
        }
    }
}

/// A broken invariant of an [`AlgExpr`].
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Violation(pub String);

impl fmt::Display for Violation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.0)
    }
}

/// Every invariant violation in `e`; empty iff `e` is well formed.
pub fn validate(e: &AlgExpr) -> Vec<Violation> {
    let mut out = Vec::new();
    validate_in(e, None, &mut out);
    out
}

fn check_arity(kind: &str, arity: &Arity, scope: Option<&str>, out: &mut Vec<Violation>) {
    match arity {
        Arity::Literal(k) if *k < 2 => out.push(Violation(format!("{kind} index must be ≥ 2, got {k}"))),
        Arity::Literal(_) => {}
        Arity::PrimeShift { index, .. } => match scope {
            None => out.push(Violation(format!("index `{index}` is not bound by any bigoplus"))),
            Some(bound) if bound != index => {
                out.push(Violation(format!("branch references foreign index `{index}` inside bigoplus over `{bound}`")))
            }
            Some(_) => {}
        },
    }
}

fn validate_in(e: &AlgExpr, scope: Option<&str>, out: &mut Vec<Violation>) {
    match e {
        AlgExpr::C | AlgExpr::Zero => {}
        AlgExpr::Cuntz(k) => check_arity("Cuntz", k, scope, out),
        AlgExpr::BS(n) => check_arity("BS", n, scope, out),
        AlgExpr::Susp(x) | AlgExpr::Unit(x) => validate_in(x, scope, out),
        AlgExpr::Sum(a, b) => {
            validate_in(a, scope, out);
            validate_in(b, scope, out);
        }
        AlgExpr::BigOplus { index, in_r, otherwise } => {
            validate_in(in_r, Some(index), out);
            validate_in(otherwise, Some(index), out);
        }
    }
}
