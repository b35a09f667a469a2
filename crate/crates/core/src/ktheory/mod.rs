//! K-groups of [`AlgExpr`] values by the compositional rule table.
//!
//! | algebra        | K0                 | K1                   |
//! |----------------|--------------------|----------------------|
//! | `C`            | Z (or 0, see [`AtomMode`]) | 0            |
//! | `Zero`         | 0                  | 0                    |
//! | `O(k)`         | Z/(k-1)            | 0                    |
//! | `BS(1, n)`     | Z                  | Z (+) Z/(n-1)        |
//! | `S(a)`         | K1(a)              | K0(a)                |
//! | `U(a)`         | K0(a) (+) Z        | K1(a)                |
//! | `a + b`, `bigoplus` | componentwise direct sum, `bigoplus` truncated to `n < cutoff` |

mod symbolic;

use std::collections::BTreeSet;
use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

pub use symbolic::{k_groups_symbolic, ConditionalKDescription, Family, SymGroup, SymPair};

use crate::abelian::AbelianGroup;
use crate::algebra::{infer_attributes, parse_definitions, validate, AlgExpr, Arity, AttributeReport, Definitions};
use crate::enumeration::CESet;
use crate::error::{Error, Result};
use crate::primes::nth_prime;

/// The definitions file for the seven algebras `B, S(B), A, D, B', A', E`.
pub const PAPER_DEFINITIONS: &str = include_str!("../../defs/paper.kc");

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct KPair {
    pub k0: AbelianGroup,
    pub k1: AbelianGroup,
}

impl KPair {
    pub fn new(k0: AbelianGroup, k1: AbelianGroup) -> KPair {
        KPair { k0, k1 }
    }

    pub fn zero() -> KPair {
        KPair::new(AbelianGroup::trivial(), AbelianGroup::trivial())
    }

    pub fn direct_sum(&self, other: &KPair) -> KPair {
        KPair::new(self.k0.direct_sum(&other.k0), self.k1.direct_sum(&other.k1))
    }

    pub fn swap(self) -> KPair {
        KPair::new(self.k1, self.k0)
    }

    pub fn unitize(self) -> KPair {
        KPair::new(self.k0.direct_sum(&AbelianGroup::free(1)), self.k1)
    }
}

impl fmt::Display for KPair {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "K0 = {}, K1 = {}", self.k0, self.k1)
    }
}

/// How a `C` atom in the `R` branch of a `bigoplus` is evaluated.
///
/// `C` gives the standard K-theory of the complex numbers, `(Z, 0)`. `Zero`
/// replaces it by the zero algebra, `(0, 0)`, which makes `K0(B)` exactly the
/// torsion group rather than torsion plus one free summand per element of
/// `R`. Atoms outside an `R` branch always evaluate to `(Z, 0)`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub enum AtomMode {
    C,
    Zero,
}

impl FromStr for AtomMode {
    type Err = String;

    fn from_str(s: &str) -> std::result::Result<AtomMode, String> {
        match s {
            "C" | "c" => Ok(AtomMode::C),
            "Zero" | "zero" => Ok(AtomMode::Zero),
            other => Err(format!("unknown atom mode `{other}` (expected C or Zero)")),
        }
    }
}

impl fmt::Display for AtomMode {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            AtomMode::C => "C",
            AtomMode::Zero => "Zero",
        })
    }
}

pub(crate) fn ensure_valid(e: &AlgExpr) -> Result<()> {
    let violations = validate(e);
    if violations.is_empty() {
        Ok(())
    } else {
        Err(Error::Invalid(violations.into_iter().map(|v| v.0).collect()))
    }
}

/// Modulus `k - 1` of the torsion contributed by `O(k)` or `BS(1, k)`.
pub(crate) fn atom_torsion(arity: &Arity, env: &[(String, u64)]) -> AbelianGroup {
    // validated expressions only reach here with bound indices
    let k = arity.value(env).expect("index bound by validation");
    AbelianGroup::cyclic(k - 1)
}

pub(crate) fn c_atom(in_r_branch: bool, mode: AtomMode) -> KPair {
    if in_r_branch && mode == AtomMode::Zero {
        KPair::zero()
    } else {
        KPair::new(AbelianGroup::free(1), AbelianGroup::trivial())
    }
}

/// `(K0(e), K1(e))` with every `bigoplus` truncated to indices `n < cutoff`.
pub fn k_groups_concrete(e: &AlgExpr, r: &CESet, cutoff: u64, mode: AtomMode) -> Result<KPair> {
    ensure_valid(e)?;
    if !r.is_explicit() {
        return Err(Error::NotExplicit);
    }
    let mut env = Vec::new();
    concrete(e, r, cutoff, mode, &mut env, false)
}

fn concrete(
    e: &AlgExpr,
    r: &CESet,
    cutoff: u64,
    mode: AtomMode,
    env: &mut Vec<(String, u64)>,
    in_r_branch: bool,
) -> Result<KPair> {
    Ok(match e {
        AlgExpr::C => c_atom(in_r_branch, mode),
        AlgExpr::Zero => KPair::zero(),
        AlgExpr::Cuntz(k) => KPair::new(atom_torsion(k, env), AbelianGroup::trivial()),
        AlgExpr::BS(n) => KPair::new(AbelianGroup::free(1), AbelianGroup::free(1).direct_sum(&atom_torsion(n, env))),
        AlgExpr::Susp(x) => concrete(x, r, cutoff, mode, env, in_r_branch)?.swap(),
        AlgExpr::Unit(x) => concrete(x, r, cutoff, mode, env, in_r_branch)?.unitize(),
        AlgExpr::Sum(a, b) => {
            let ka = concrete(a, r, cutoff, mode, env, in_r_branch)?;
            ka.direct_sum(&concrete(b, r, cutoff, mode, env, in_r_branch)?)
        }
        AlgExpr::BigOplus { index, in_r, otherwise } => {
            let mut total = KPair::zero();
            for n in 0..cutoff {
                let member = r.limit_contains(n)?;
                env.push((index.clone(), n));
                let branch = if member { in_r } else { otherwise };
                let k = concrete(branch, r, cutoff, mode, env, member);
                env.pop();
                total = total.direct_sum(&k?);
            }
            total
        }
    })
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub enum Side {
    K0,
    K1,
}

impl fmt::Display for Side {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Side::K0 => "K0",
            Side::K1 => "K1",
        })
    }
}

/// Outcome of comparing the torsion primes of a K-group with `R`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub enum TorsionReport {
    /// Nothing in the expression depends on `R` through `prime(n)`.
    NotApplicable,
    /// Every checked side has torsion primes exactly `{p_n : n < cutoff, n not in R}`.
    Pass { sides: Vec<Side>, primes: BTreeSet<u64> },
    /// `prime` is missing from or extra to the checked side.
    Fail { side: Side, prime: u64, expected: BTreeSet<u64>, found: BTreeSet<u64> },
}

impl TorsionReport {
    pub fn passed(&self) -> bool {
        matches!(self, TorsionReport::Pass { .. })
    }
}

impl fmt::Display for TorsionReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let list = |s: &BTreeSet<u64>| s.iter().map(u64::to_string).collect::<Vec<_>>().join(", ");
        match self {
            TorsionReport::NotApplicable => f.write_str("not applicable"),
            TorsionReport::Pass { sides, primes } => {
                let sides: Vec<String> = sides.iter().map(Side::to_string).collect();
                write!(f, "pass ({}): primes {{{}}}", sides.join(", "), list(primes))
            }
            TorsionReport::Fail { side, prime, expected, found } => write!(
                f,
                "fail on {side}: offending prime {prime}; expected {{{}}}, found {{{}}}",
                list(expected),
                list(found)
            ),
        }
    }
}

/// Checks that the torsion primes of `K0` and/or `K1` are exactly
/// `{p_n : n < cutoff, n not in R}`.
///
/// Only the sides that carry prime-indexed torsion in the symbolic description
/// are checked; the other side is expected to be torsion-free or unrelated.
pub fn torsion_report(e: &AlgExpr, r: &CESet, cutoff: u64, mode: AtomMode) -> Result<TorsionReport> {
    let pair = k_groups_concrete(e, r, cutoff, mode)?;
    let description = k_groups_symbolic(e, mode)?;
    let sides: Vec<Side> = [Side::K0, Side::K1].into_iter().filter(|&s| description.carries_prime_torsion(s)).collect();
    if sides.is_empty() {
        return Ok(TorsionReport::NotApplicable);
    }
    let mut expected = BTreeSet::new();
    for n in 0..cutoff {
        if !r.limit_contains(n)? {
            expected.insert(nth_prime(n as usize));
        }
    }
    for &side in &sides {
        let group = match side {
            Side::K0 => &pair.k0,
            Side::K1 => &pair.k1,
        };
        let found = group.torsion_primes();
        if let Some(&prime) = expected.symmetric_difference(&found).next() {
            return Ok(TorsionReport::Fail { side, prime, expected, found });
        }
    }
    Ok(TorsionReport::Pass { sides, primes: expected })
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct SuiteRow {
    /// Display name, e.g. `C` for the suspension `S(B)`.
    pub label: String,
    /// Name of the binding in the definitions file.
    pub binding: String,
    pub pair: KPair,
    pub attributes: AttributeReport,
}

const SUITE: [(&str, &str); 7] =
    [("B", "B"), ("C", "SB"), ("A", "A"), ("D", "D"), ("B'", "B'"), ("A'", "A'"), ("E", "E")];

/// The suite expressions `(label, binding, expression)` taken from `defs`.
pub fn suite_expressions(defs: &Definitions) -> Result<Vec<(String, String, AlgExpr)>> {
    SUITE
        .iter()
        .map(|&(label, binding)| {
            let e = defs.get(binding).ok_or_else(|| Error::UnknownBinding(binding.to_string()))?;
            Ok((label.to_string(), binding.to_string(), e.clone()))
        })
        .collect()
}

/// The suite expressions from [`PAPER_DEFINITIONS`].
pub fn paper_expressions() -> Vec<(String, String, AlgExpr)> {
    let defs = parse_definitions(PAPER_DEFINITIONS).expect("shipped definitions parse");
    suite_expressions(&defs).expect("shipped definitions bind the whole suite")
}

/// K-groups and attributes of `B, C = S(B), A, D, B', A', E` as bound in `defs`.
pub fn suite_from_definitions(defs: &Definitions, r: &CESet, cutoff: u64, mode: AtomMode) -> Result<Vec<SuiteRow>> {
    suite_expressions(defs)?
        .into_iter()
        .map(|(label, binding, e)| {
            Ok(SuiteRow {
                label,
                binding,
                pair: k_groups_concrete(&e, r, cutoff, mode)?,
                attributes: infer_attributes(&e),
            })
        })
        .collect()
}

/// [`suite_from_definitions`] on the shipped definitions.
pub fn paper_suite(r: &CESet, cutoff: u64, mode: AtomMode) -> Result<Vec<SuiteRow>> {
    let defs = parse_definitions(PAPER_DEFINITIONS).expect("shipped definitions parse");
    suite_from_definitions(&defs, r, cutoff, mode)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebra::parse;

    fn fixture() -> CESet {
        "1@2,3@5".parse().unwrap()
    }

    fn t() -> AbelianGroup {
        AbelianGroup::from_invariants(0, &[2, 5, 11])
    }

    fn eval(src: &str, mode: AtomMode) -> KPair {
        k_groups_concrete(&parse(src).unwrap(), &fixture(), 5, mode).unwrap()
    }

    #[test]
    fn atoms() {
        assert_eq!(eval("O(2)", AtomMode::C), KPair::zero());
        assert_eq!(eval("O(5)", AtomMode::C), KPair::new(AbelianGroup::cyclic(4), AbelianGroup::trivial()));
        assert_eq!(eval("BS(1, 7)", AtomMode::C).k1, AbelianGroup::from_invariants(1, &[6]));
        assert_eq!(eval("C", AtomMode::Zero), KPair::new(AbelianGroup::free(1), AbelianGroup::trivial()));
        assert_eq!(eval("U(Zero)", AtomMode::C), eval("C", AtomMode::C));
    }

    #[test]
    fn b_and_d_examples() {
        let b = "bigoplus n { R -> C ; _ -> O(prime(n)+1) }";
        assert_eq!(eval(b, AtomMode::Zero), KPair::new(t(), AbelianGroup::trivial()));
        assert_eq!(eval(b, AtomMode::C).k0, AbelianGroup::free(2).direct_sum(&t()));
        let d = eval(&format!("U({b} + S({b}))"), AtomMode::Zero);
        assert_eq!(d, KPair::new(AbelianGroup::free(1).direct_sum(&t()), t()));
    }

    #[test]
    fn suite_rows() {
        let rows = paper_suite(&fixture(), 5, AtomMode::Zero).unwrap();
        let got: Vec<(&str, KPair)> = rows.iter().map(|r| (r.label.as_str(), r.pair.clone())).collect();
        let z = AbelianGroup::free;
        let zt = |r| z(r).direct_sum(&t());
        let expected = vec![
            ("B", KPair::new(t(), z(0))),
            ("C", KPair::new(z(0), t())),
            ("A", KPair::new(t(), t())),
            ("D", KPair::new(zt(1), t())),
            ("B'", KPair::new(z(3), zt(3))),
            ("A'", KPair::new(zt(4), z(3))),
            ("E", KPair::new(zt(7), zt(6))),
        ];
        assert_eq!(got, expected);
    }

    #[test]
    fn torsion_report_examples() {
        let defs = parse_definitions(PAPER_DEFINITIONS).unwrap();
        let r = fixture();
        match torsion_report(defs.get("D").unwrap(), &r, 5, AtomMode::Zero).unwrap() {
            TorsionReport::Pass { sides, primes } => {
                assert_eq!(sides, vec![Side::K0, Side::K1]);
                assert_eq!(primes, BTreeSet::from([2, 5, 11]));
            }
            other => panic!("{other:?}"),
        }
        let c = torsion_report(defs.get("SB").unwrap(), &r, 5, AtomMode::Zero).unwrap();
        assert_eq!(c, TorsionReport::Pass { sides: vec![Side::K1], primes: BTreeSet::from([2, 5, 11]) });
        assert_eq!(torsion_report(&AlgExpr::cuntz(4), &r, 5, AtomMode::C).unwrap(), TorsionReport::NotApplicable);
        let off = parse("bigoplus n { R -> C ; _ -> O(prime(n)+2) }").unwrap();
        assert!(matches!(
            torsion_report(&off, &r, 5, AtomMode::C).unwrap(),
            TorsionReport::Fail { side: Side::K0, prime: 3, .. }
        ));
    }

    #[test]
    fn rejects_machine_and_invalid() {
        assert_eq!(k_groups_concrete(&AlgExpr::C, &CESet::MachineHalting, 3, AtomMode::C), Err(Error::NotExplicit));
        let bad = k_groups_concrete(&AlgExpr::bs(1), &fixture(), 3, AtomMode::C);
        assert!(matches!(bad, Err(Error::Invalid(v)) if v.len() == 1));
    }

    #[test]
    fn atom_mode_syntax() {
        assert_eq!("Zero".parse::<AtomMode>().unwrap(), AtomMode::Zero);
        assert_eq!("C".parse::<AtomMode>().unwrap(), AtomMode::C);
        assert!("X".parse::<AtomMode>().is_err());
    }
}
