//! The group `G = (+)_n G_n` with `G_n = 0` for `n` in `R` and `G_n = Z/p_n`
//! otherwise, its word problem, and the reduction that decides `R` from a
//! decidable zero test.
//!
//! Elements are finitely supported integer vectors; they are not reduced
//! unless asked, since reduction needs to know `R`.

use std::collections::BTreeMap;
use std::fmt;

use num_bigint::{BigInt, BigUint};
use num_integer::Integer;
use num_traits::{One, Signed, ToPrimitive, Zero};

use crate::enumeration::{CESet, Semidecision};
use crate::error::{Error, Result};
use crate::primes::nth_prime;

#[derive(Clone, Debug, Default, PartialEq, Eq, Hash)]
pub struct GElement {
    support: BTreeMap<u64, BigInt>,
}

impl GElement {
    pub fn zero() -> Self {
        GElement::default()
    }

    /// The generator `e_n`.
    pub fn generator(n: u64) -> Self {
        GElement::from_terms([(n, BigInt::one())])
    }

    pub fn from_terms<I, C>(terms: I) -> Self
    where
        I: IntoIterator<Item = (u64, C)>,
        C: Into<BigInt>,
    {
        let mut x = GElement::zero();
        for (n, c) in terms {
            x.add_term(n, c.into());
        }
        x
    }

    fn add_term(&mut self, n: u64, c: BigInt) {
        let slot = self.support.entry(n).or_default();
        *slot += c;
        if slot.is_zero() {
            self.support.remove(&n);
        }
    }

    /// Nonzero coefficients by index.
    pub fn support(&self) -> &BTreeMap<u64, BigInt> {
        &self.support
    }

    pub fn coefficient(&self, n: u64) -> BigInt {
        self.support.get(&n).cloned().unwrap_or_default()
    }

    /// True for the zero vector of coefficients (not the zero of `G`).
    pub fn is_trivial_word(&self) -> bool {
        self.support.is_empty()
    }

    pub fn add(&self, other: &GElement) -> GElement {
        let mut out = self.clone();
        for (&n, c) in &other.support {
            out.add_term(n, c.clone());
        }
        out
    }

    pub fn scale(&self, d: &BigInt) -> GElement {
        if d.is_zero() {
            return GElement::zero();
        }
        GElement { support: self.support.iter().map(|(&n, c)| (n, c * d)).collect() }
    }
}

impl fmt::Display for GElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.support.is_empty() {
            return f.write_str("0");
        }
        let terms: Vec<String> = self
            .support
            .iter()
            .map(|(n, c)| if c.is_one() { format!("e_{n}") } else { format!("{c}*e_{n}") })
            .collect();
        f.write_str(&terms.join(" + "))
    }
}

/// Zero test with full knowledge of `R` (a computable presentation of `G`).
#[derive(Clone, Debug)]
pub struct OmniscientOracle {
    r: CESet,
}

impl OmniscientOracle {
    pub fn new(r: CESet) -> Result<Self> {
        if !r.is_explicit() {
            return Err(Error::NotExplicit);
        }
        Ok(OmniscientOracle { r })
    }

    pub fn set(&self) -> &CESet {
        &self.r
    }

    fn in_r(&self, n: u64) -> bool {
        self.r.limit_contains(n).expect("explicit by construction")
    }

    pub fn word_is_zero(&self, x: &GElement) -> bool {
        x.support.iter().all(|(&n, c)| self.in_r(n) || c.is_multiple_of(&prime_at(n)))
    }

    /// Least `d >= 1` with `d*x = 0`, searched incrementally: the running
    /// multiple `d*x` is kept coordinatewise in `G_n` and zero-tested at
    /// every `d`.
    pub fn order_of(&self, x: &GElement) -> u64 {
        let mut coords: Vec<(u64, u64)> = x
            .support
            .iter()
            .filter(|(&n, _)| !self.in_r(n))
            .map(|(&n, c)| {
                let p = nth_prime(n as usize);
                let residue = c.mod_floor(&BigInt::from(p)).to_u64().expect("residue below p");
                (p, residue)
            })
            .collect();
        let step = coords.clone();
        let mut d = 1;
        while coords.iter().any(|&(_, c)| c != 0) {
            for ((p, acc), &(_, c)) in coords.iter_mut().zip(&step) {
                *acc = (*acc + c) % *p;
            }
            d += 1;
        }
        d
    }

    /// Canonical representative: coefficients reduced into `[0, p_n)`, `R`-indices erased.
    pub fn normalize(&self, x: &GElement) -> GElement {
        GElement::from_terms(
            x.support.iter().filter(|(&n, _)| !self.in_r(n)).map(|(&n, c)| (n, c.mod_floor(&prime_at(n)))),
        )
    }
}

/// Zero test that only sees the stages `R_s` (a c.e. presentation of `G`).
#[derive(Clone, Debug)]
pub struct StagedOracle {
    r: CESet,
}

impl StagedOracle {
    pub fn new(r: CESet) -> Self {
        StagedOracle { r }
    }

    /// `Yes` once every index whose coefficient is not a multiple of `p_n`
    /// has been enumerated into `R` by stage `fuel`.
    pub fn word_is_zero_staged(&self, x: &GElement, fuel: u64) -> Semidecision {
        let zero = x.support.iter().all(|(&n, c)| c.is_multiple_of(&prime_at(n)) || self.r.in_stage(n, fuel));
        if zero {
            Semidecision::Yes
        } else {
            Semidecision::Unknown
        }
    }
}

#[derive(Clone, Debug)]
pub enum WordOracle {
    Omniscient(OmniscientOracle),
    Staged(StagedOracle),
}

impl WordOracle {
    /// Zero test under a stage budget; the omniscient oracle ignores the budget.
    pub fn zero_test(&self, x: &GElement, fuel: u64) -> Semidecision {
        match self {
            WordOracle::Omniscient(o) if o.word_is_zero(x) => Semidecision::Yes,
            WordOracle::Omniscient(_) => Semidecision::Unknown,
            WordOracle::Staged(o) => o.word_is_zero_staged(x, fuel),
        }
    }
}

fn prime_at(n: u64) -> BigInt {
    BigInt::from(nth_prime(n as usize))
}

// --- element numbering -------------------------------------------------------
//
// Even indices 2t walk a sparse numbering that reaches e_n after O(n^2)
// steps; odd indices 2t+1 walk a dense numbering by boxes
// {-B..B}^{[0,B)} that reaches small dense vectors early. Both are
// surjective, so their interleaving is too.

fn pair(x: &BigUint, y: &BigUint) -> BigUint {
    let s = x + y;
    (&s * (&s + 1u32)) / 2u32 + y
}

fn unpair(z: &BigUint) -> (BigUint, BigUint) {
    let w = ((z * 8u32 + 1u32).sqrt() - 1u32) / 2u32;
    let t = (&w * (&w + 1u32)) / 2u32;
    let y = z - t;
    let x = &w - &y;
    (x, y)
}

fn nonzero_from_code(code: &BigUint) -> BigInt {
    let (half, odd) = code.div_rem(&BigUint::from(2u32));
    let magnitude = BigInt::from(half + 1u32);
    if odd.is_zero() {
        magnitude
    } else {
        -magnitude
    }
}

fn code_from_nonzero(c: &BigInt) -> BigUint {
    let base = (c.magnitude() - 1u32) * 2u32;
    if c.is_negative() {
        base + 1u32
    } else {
        base
    }
}

// i = 0 is zero; otherwise i - 1 = <gap, <code, rest>> places a nonzero
// coefficient at `gap` followed by element `rest` shifted past it.
fn sparse_decode(i: &BigUint) -> GElement {
    let mut terms = Vec::new();
    let mut idx = i.clone();
    let mut offset = BigUint::zero();
    while !idx.is_zero() {
        let (gap, w) = unpair(&(&idx - 1u32));
        let (code, rest) = unpair(&w);
        let position = &offset + &gap;
        terms.push((position.to_u64().expect("support index fits in u64"), nonzero_from_code(&code)));
        offset = position + 1u32;
        idx = rest;
    }
    GElement::from_terms(terms)
}

fn sparse_encode(x: &GElement) -> BigUint {
    let terms: Vec<(u64, &BigInt)> = x.support.iter().map(|(&n, c)| (n, c)).collect();
    let mut idx = BigUint::zero();
    for (j, &(n, c)) in terms.iter().enumerate().rev() {
        let start = if j == 0 { 0 } else { terms[j - 1].0 + 1 };
        let gap = BigUint::from(n - start);
        idx = pair(&gap, &pair(&code_from_nonzero(c), &idx)) + 1u32;
    }
    idx
}

fn box_size(b: u64) -> BigUint {
    BigUint::from(2 * b + 1).pow(b as u32)
}

fn dense_decode(j: &BigUint) -> GElement {
    let mut b = 0u64;
    let mut below = BigUint::zero();
    loop {
        let size = box_size(b);
        if *j < &below + &size {
            break;
        }
        below += size;
        b += 1;
    }
    let radix = BigUint::from(2 * b + 1);
    let mut offset = j - below;
    let mut terms = Vec::new();
    for n in 0..b {
        let (q, digit) = offset.div_rem(&radix);
        terms.push((n, BigInt::from(digit) - BigInt::from(b)));
        offset = q;
    }
    GElement::from_terms(terms)
}

fn dense_encode(x: &GElement) -> BigUint {
    let width = x.support.keys().next_back().map_or(0, |&n| n + 1);
    let height = x.support.values().map(|c| c.magnitude().to_u64().expect("coefficient fits in u64")).max().unwrap_or(0);
    let b = width.max(height);
    let below: BigUint = (0..b).map(box_size).sum();
    let radix = BigUint::from(2 * b + 1);
    let mut offset = BigUint::zero();
    for n in (0..b).rev() {
        let digit = (x.coefficient(n) + BigInt::from(b)).to_biguint().expect("digit in range");
        offset = offset * &radix + digit;
    }
    below + offset
}

/// The `i`-th element in a fixed surjective numbering of finitely supported vectors.
pub fn enumerate_elements(i: &BigUint) -> GElement {
    let (t, parity) = i.div_rem(&BigUint::from(2u32));
    if parity.is_zero() {
        sparse_decode(&t)
    } else {
        dense_decode(&t)
    }
}

pub fn enumerate_elements_u64(i: u64) -> GElement {
    enumerate_elements(&BigUint::from(i))
}

/// Least index at which [`enumerate_elements`] produces `x`'s coefficient vector.
pub fn element_index(x: &GElement) -> BigUint {
    let sparse = sparse_encode(x) * 2u32;
    // dense indices blow up quickly with the support's extent; only try small boxes
    let dense_fits = x.support.keys().next_back().map_or(true, |&n| n < 64)
        && x.support.values().all(|c| c.magnitude() < &BigUint::from(64u32));
    if dense_fits {
        let dense = dense_encode(x) * 2u32 + 1u32;
        sparse.min(dense)
    } else {
        sparse
    }
}

// --- the reduction -------------------------------------------------------------

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Witness {
    /// `n` was seen in `R_stage`.
    Stage(u64),
    /// An element whose order is divisible by `p_n`.
    Element { index: u64, element: GElement, order: u64 },
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct MembershipVerdict {
    pub member: bool,
    pub witness: Witness,
    /// Dovetailing rounds consumed, counting the deciding one.
    pub rounds: u64,
}

pub const DEFAULT_ROUND_LIMIT: u64 = 10_000_000;

/// Decides `n in R` by dovetailing two semidecisions: watching the stages
/// of `r` for `n`, and walking all elements of `G` computing their orders
/// through the oracle's zero test until one has order divisible by `p_n`.
/// Each round runs one stage, then one element.
pub fn decide_membership_via_presentation(n: u64, oracle: &OmniscientOracle, r: &CESet) -> Result<MembershipVerdict> {
    decide_membership_with_limit(n, oracle, r, DEFAULT_ROUND_LIMIT)
}

pub fn decide_membership_with_limit(
    n: u64,
    oracle: &OmniscientOracle,
    r: &CESet,
    max_rounds: u64,
) -> Result<MembershipVerdict> {
    let p = nth_prime(n as usize);
    for round in 0..max_rounds {
        if r.in_stage(n, round) {
            return Ok(MembershipVerdict { member: true, witness: Witness::Stage(round), rounds: round + 1 });
        }
        let x = enumerate_elements_u64(round);
        let order = oracle.order_of(&x);
        if order % p == 0 {
            let witness = Witness::Element { index: round, element: x, order };
            return Ok(MembershipVerdict { member: false, witness, rounds: round + 1 });
        }
    }
    Err(Error::FuelExhausted(max_rounds))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn fixture() -> CESet {
        "1@2,3@5".parse().unwrap()
    }

    fn omni() -> OmniscientOracle {
        OmniscientOracle::new(fixture()).unwrap()
    }

    #[test]
    fn word_problem_examples() {
        let o = omni();
        assert!(o.word_is_zero(&GElement::generator(1)));
        assert!(!o.word_is_zero(&GElement::generator(0)));
        assert!(o.word_is_zero(&GElement::from_terms([(0, 2)])));
    }

    #[test]
    fn staged_examples() {
        let o = StagedOracle::new(fixture());
        assert_eq!(o.word_is_zero_staged(&GElement::generator(1), 1), Semidecision::Unknown);
        assert_eq!(o.word_is_zero_staged(&GElement::generator(1), 2), Semidecision::Yes);
        assert_eq!(o.word_is_zero_staged(&GElement::from_terms([(0, 2)]), 0), Semidecision::Yes);
    }

    #[test]
    fn order_examples() {
        let o = omni();
        assert_eq!(o.order_of(&GElement::zero()), 1);
        assert_eq!(o.order_of(&GElement::generator(0)), 2);
        assert_eq!(o.order_of(&GElement::from_terms([(0, 1), (2, 1)])), 10);
        assert_eq!(o.order_of(&GElement::from_terms([(0, 1), (1, 7), (2, -4)])), 10);
    }

    #[test]
    fn omniscient_requires_explicit() {
        assert!(matches!(OmniscientOracle::new(CESet::MachineHalting), Err(Error::NotExplicit)));
    }

    #[test]
    fn normalize_reduces_and_erases() {
        let o = omni();
        let x = GElement::from_terms([(0, 3), (1, 5), (2, -1)]);
        assert_eq!(o.normalize(&x), GElement::from_terms([(0, 1), (2, 4)]));
    }

    #[test]
    fn pairing_inverts() {
        for z in 0..2000u32 {
            let z = BigUint::from(z);
            let (x, y) = unpair(&z);
            assert_eq!(pair(&x, &y), z);
        }
    }

    #[test]
    fn numbering_starts_at_zero() {
        assert_eq!(enumerate_elements_u64(0), GElement::zero());
        assert_eq!(enumerate_elements_u64(2), GElement::generator(0));
    }

    #[test]
    fn generators_appear_quadratically_early() {
        for n in 0..40u64 {
            let idx = element_index(&GElement::generator(n)).to_u64().unwrap();
            assert!(idx <= n * (n + 1) + 2, "e_{n} at {idx}");
            assert_eq!(enumerate_elements_u64(idx), GElement::generator(n));
        }
    }

    #[test]
    fn reduction_examples() {
        let r = fixture();
        let o = omni();
        let v = decide_membership_via_presentation(1, &o, &r).unwrap();
        assert!(v.member);
        assert_eq!(v.witness, Witness::Stage(2));

        let v = decide_membership_via_presentation(0, &o, &r).unwrap();
        assert!(!v.member);
        match v.witness {
            Witness::Element { element, order, .. } => {
                assert_eq!(element, GElement::generator(0));
                assert_eq!(order, 2);
            }
            other => panic!("unexpected witness {other:?}"),
        }

        let empty = CESet::empty();
        let v = decide_membership_via_presentation(7, &OmniscientOracle::new(empty.clone()).unwrap(), &empty).unwrap();
        assert!(!v.member);
    }

    #[test]
    fn mismatched_sets_exhaust_fuel() {
        // oracle thinks 2 is in R, enumeration never lists it
        let o = OmniscientOracle::new("2@0".parse().unwrap()).unwrap();
        let r = CESet::empty();
        assert!(matches!(decide_membership_with_limit(2, &o, &r, 500), Err(Error::FuelExhausted(500))));
    }
}
