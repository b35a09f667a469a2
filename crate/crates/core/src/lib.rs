//! Exact abelian-group arithmetic, stage enumerations of c.e. sets, the group
//! `G = (+)_n G_n` with its word problem, a small DSL for C*-algebra
//! constructions and a compositional calculus for their K-groups.

pub mod abelian;
pub mod algebra;
pub mod enumeration;
pub mod error;
pub mod group_g;
pub mod ktheory;
pub mod primes;
pub mod stagewise;

pub use abelian::{group_from_relations, smith_normal_form, AbelianGroup, GroupElement, IntMatrix, Order, PrimePower};
pub use enumeration::{CESet, Semidecision};
pub use error::{Error, ParseError, Result};
pub use primes::nth_prime;
pub use algebra::{infer_attributes, parse, parse_definitions, validate, AlgExpr, Arity, AttributeReport, Definitions, Tri};
pub use ktheory::{k_groups_concrete, k_groups_symbolic, paper_suite, torsion_report, AtomMode, KPair, TorsionReport};
pub use stagewise::{MockNormOracle, NormValue, PointValue, StarPolynomial};
