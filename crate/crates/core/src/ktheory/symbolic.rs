//! K-groups as conditional families indexed by `n`, before `R` and the cutoff
//! are fixed.

use std::fmt;

use serde::Serialize;

use super::{atom_torsion, c_atom, ensure_valid, AtomMode, KPair, Side};
use crate::abelian::AbelianGroup;
use crate::algebra::{AlgExpr, Arity};
use crate::enumeration::CESet;
use crate::error::Result;

/// A fixed group plus cyclic summands `Z/(prime(index) + offset - 1)` that
/// depend on an enclosing index.
#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize)]
pub struct SymGroup {
    pub fixed: AbelianGroup,
    pub shifted: Vec<(String, u64)>,
}

impl SymGroup {
    fn constant(g: AbelianGroup) -> SymGroup {
        SymGroup { fixed: g, shifted: Vec::new() }
    }

    fn of_arity(arity: &Arity) -> SymGroup {
        match arity {
            Arity::Literal(_) => SymGroup::constant(atom_torsion(arity, &[])),
            Arity::PrimeShift { index, offset } => {
                SymGroup { fixed: AbelianGroup::trivial(), shifted: vec![(index.clone(), *offset)] }
            }
        }
    }

    fn sum(&self, other: &SymGroup) -> SymGroup {
        let mut shifted = self.shifted.clone();
        shifted.extend(other.shifted.iter().cloned());
        SymGroup { fixed: self.fixed.direct_sum(&other.fixed), shifted }
    }

    fn at(&self, env: &[(String, u64)]) -> AbelianGroup {
        self.shifted.iter().fold(self.fixed.clone(), |g, (index, offset)| {
            let arity = Arity::PrimeShift { index: index.clone(), offset: *offset };
            g.direct_sum(&atom_torsion(&arity, env))
        })
    }
}

impl fmt::Display for SymGroup {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut parts = Vec::new();
        if !self.fixed.is_trivial() || self.shifted.is_empty() {
            parts.push(self.fixed.to_string());
        }
        for (index, offset) in &self.shifted {
            parts.push(match offset {
                0 => format!("Z/(p_{index}-1)"),
                1 => format!("Z/p_{index}"),
                k => format!("Z/(p_{index}+{})", k - 1),
            });
        }
        f.write_str(&parts.join(" (+) "))
    }
}

#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize)]
pub struct SymPair {
    pub k0: SymGroup,
    pub k1: SymGroup,
}

impl fmt::Display for SymPair {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({}, {})", self.k0, self.k1)
    }
}

/// `(+)_index (in_r if index in R else otherwise)`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Family {
    pub index: String,
    pub in_r: ConditionalKDescription,
    pub otherwise: ConditionalKDescription,
}

/// A constant pair plus a direct sum of conditional families.
#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize)]
pub struct ConditionalKDescription {
    pub constant: SymPair,
    pub families: Vec<Family>,
}

impl ConditionalKDescription {
    fn constant(pair: KPair) -> Self {
        let constant = SymPair { k0: SymGroup::constant(pair.k0), k1: SymGroup::constant(pair.k1) };
        ConditionalKDescription { constant, families: Vec::new() }
    }

    fn sum(mut self, other: Self) -> Self {
        self.constant =
            SymPair { k0: self.constant.k0.sum(&other.constant.k0), k1: self.constant.k1.sum(&other.constant.k1) };
        self.families.extend(other.families);
        self
    }

    fn swap(self) -> Self {
        ConditionalKDescription {
            constant: SymPair { k0: self.constant.k1, k1: self.constant.k0 },
            families: self
                .families
                .into_iter()
                .map(|f| Family { index: f.index, in_r: f.in_r.swap(), otherwise: f.otherwise.swap() })
                .collect(),
        }
    }

    fn unitize(mut self) -> Self {
        self.constant.k0 = self.constant.k0.sum(&SymGroup::constant(AbelianGroup::free(1)));
        self
    }

    /// Evaluates at an explicit `R` with every family truncated to `n < cutoff`.
    pub fn specialize(&self, r: &CESet, cutoff: u64) -> Result<KPair> {
        self.specialize_in(r, cutoff, &mut Vec::new())
    }

    fn specialize_in(&self, r: &CESet, cutoff: u64, env: &mut Vec<(String, u64)>) -> Result<KPair> {
        let mut total = KPair::new(self.constant.k0.at(env), self.constant.k1.at(env));
        for family in &self.families {
            for n in 0..cutoff {
                let branch = if r.limit_contains(n)? { &family.in_r } else { &family.otherwise };
                env.push((family.index.clone(), n));
                let k = branch.specialize_in(r, cutoff, env);
                env.pop();
                total = total.direct_sum(&k?);
            }
        }
        Ok(total)
    }

    /// Whether `side` contains a summand of the form `Z/(prime(n) + c)`.
    pub fn carries_prime_torsion(&self, side: Side) -> bool {
        let own = match side {
            Side::K0 => &self.constant.k0,
            Side::K1 => &self.constant.k1,
        };
        !own.shifted.is_empty()
            || self.families.iter().any(|f| f.in_r.carries_prime_torsion(side) || f.otherwise.carries_prime_torsion(side))
    }
}

impl fmt::Display for ConditionalKDescription {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut parts = Vec::new();
        if self.families.is_empty() || self.constant != SymPair::default() {
            parts.push(self.constant.to_string());
        }
        for fam in &self.families {
            parts.push(format!(
                "(+)_{} [{} in R -> {} ; else -> {}]",
                fam.index, fam.index, fam.in_r, fam.otherwise
            ));
        }
        f.write_str(&parts.join(" (+) "))
    }
}

/// Symbolic K-groups of `e`; `C` atoms in `R` branches follow `mode`.
pub fn k_groups_symbolic(e: &AlgExpr, mode: AtomMode) -> Result<ConditionalKDescription> {
    ensure_valid(e)?;
    Ok(symbolic(e, mode, false))
}

fn symbolic(e: &AlgExpr, mode: AtomMode, in_r_branch: bool) -> ConditionalKDescription {
    match e {
        AlgExpr::C => ConditionalKDescription::constant(c_atom(in_r_branch, mode)),
        AlgExpr::Zero => ConditionalKDescription::default(),
        AlgExpr::Cuntz(k) => ConditionalKDescription {
            constant: SymPair { k0: SymGroup::of_arity(k), k1: SymGroup::default() },
            families: Vec::new(),
        },
        AlgExpr::BS(n) => ConditionalKDescription {
            constant: SymPair {
                k0: SymGroup::constant(AbelianGroup::free(1)),
                k1: SymGroup::constant(AbelianGroup::free(1)).sum(&SymGroup::of_arity(n)),
            },
            families: Vec::new(),
        },
        AlgExpr::Susp(x) => symbolic(x, mode, in_r_branch).swap(),
        AlgExpr::Unit(x) => symbolic(x, mode, in_r_branch).unitize(),
        AlgExpr::Sum(a, b) => symbolic(a, mode, in_r_branch).sum(symbolic(b, mode, in_r_branch)),
        AlgExpr::BigOplus { index, in_r, otherwise } => ConditionalKDescription {
            constant: SymPair::default(),
            families: vec![Family {
                index: index.clone(),
                in_r: symbolic(in_r, mode, true),
                otherwise: symbolic(otherwise, mode, false),
            }],
        },
    }
}
