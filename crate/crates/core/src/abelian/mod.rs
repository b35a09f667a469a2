//! Finitely generated abelian groups in primary canonical form.
//!
//! A group is stored as `Z^r (+) Z/q_1 (+) ... (+) Z/q_t` where every `q_i`
//! is a prime power and the list is sorted by `(prime, exponent)`. Because
//! the form is canonical, `==` on [`AbelianGroup`] is isomorphism.

mod matrix;

use std::collections::BTreeSet;
use std::fmt;

use num_bigint::{BigInt, BigUint};
use num_integer::Integer;
use num_traits::{One, Zero};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::primes::{factor_big, factor_u64};

pub use matrix::{group_from_relations, smith_normal_form, IntMatrix};

/// A cyclic factor `Z/p^e` with `e >= 1`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub struct PrimePower {
    pub prime: u64,
    pub exponent: u32,
}

impl PrimePower {
    pub fn modulus(&self) -> BigUint {
        BigUint::from(self.prime).pow(self.exponent)
    }
}

impl fmt::Display for PrimePower {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Z/{}", self.modulus())
    }
}

#[derive(Clone, Debug, Default, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(try_from = "RawGroup", into = "RawGroup")]
pub struct AbelianGroup {
    free_rank: u64,
    torsion: Vec<PrimePower>,
}

#[derive(Serialize, Deserialize)]
struct RawGroup {
    free_rank: u64,
    torsion: Vec<PrimePower>,
}

impl From<AbelianGroup> for RawGroup {
    fn from(g: AbelianGroup) -> Self {
        RawGroup { free_rank: g.free_rank, torsion: g.torsion }
    }
}

impl TryFrom<RawGroup> for AbelianGroup {
    type Error = String;

    fn try_from(raw: RawGroup) -> std::result::Result<Self, String> {
        for pp in &raw.torsion {
            if pp.exponent == 0 || !crate::primes::is_prime(pp.prime) {
                return Err(format!("{}^{} is not a prime power >= 2", pp.prime, pp.exponent));
            }
        }
        Ok(AbelianGroup::from_prime_powers(raw.free_rank, raw.torsion))
    }
}

impl AbelianGroup {
    pub fn trivial() -> Self {
        AbelianGroup { free_rank: 0, torsion: Vec::new() }
    }

    /// `Z^rank`.
    pub fn free(rank: u64) -> Self {
        AbelianGroup { free_rank: rank, torsion: Vec::new() }
    }

    /// `Z/m`; `m == 0` gives `Z` and `m == 1` the trivial group.
    pub fn cyclic(m: u64) -> Self {
        Self::from_invariants(0, &[m])
    }

    /// Builds `Z^free_rank (+) Z/m_1 (+) ...` from arbitrary cyclic orders.
    /// Zero moduli contribute free summands; ones are dropped.
    pub fn from_invariants(free_rank: u64, moduli: &[u64]) -> Self {
        let mut rank = free_rank;
        let mut torsion = Vec::new();
        for &m in moduli {
            if m == 0 {
                rank += 1;
                continue;
            }
            torsion.extend(factor_u64(m).into_iter().map(|(prime, exponent)| PrimePower { prime, exponent }));
        }
        Self::from_prime_powers(rank, torsion)
    }

    /// Same as [`AbelianGroup::from_invariants`] for unbounded moduli.
    pub fn from_big_invariants(free_rank: u64, moduli: &[BigUint]) -> Result<Self> {
        let mut rank = free_rank;
        let mut torsion = Vec::new();
        for m in moduli {
            if m.is_zero() {
                rank += 1;
                continue;
            }
            torsion.extend(factor_big(m)?.into_iter().map(|(prime, exponent)| PrimePower { prime, exponent }));
        }
        Ok(Self::from_prime_powers(rank, torsion))
    }

    /// Caller guarantees each entry is a genuine prime power.
    pub fn from_prime_powers(free_rank: u64, mut torsion: Vec<PrimePower>) -> Self {
        torsion.sort_unstable();
        AbelianGroup { free_rank, torsion }
    }

    pub fn free_rank(&self) -> u64 {
        self.free_rank
    }

    pub fn torsion(&self) -> &[PrimePower] {
        &self.torsion
    }

    /// Number of cyclic factors, i.e. the length of a [`GroupElement`].
    pub fn num_factors(&self) -> usize {
        self.free_rank as usize + self.torsion.len()
    }

    pub fn is_trivial(&self) -> bool {
        self.free_rank == 0 && self.torsion.is_empty()
    }

    pub fn is_torsion(&self) -> bool {
        self.free_rank == 0
    }

    /// Group order, `None` when infinite.
    pub fn order(&self) -> Option<BigUint> {
        self.is_torsion().then(|| self.torsion.iter().map(PrimePower::modulus).product())
    }

    /// Least common multiple of all element orders, `None` when infinite.
    pub fn exponent(&self) -> Option<BigUint> {
        self.is_torsion()
            .then(|| self.torsion.iter().fold(BigUint::one(), |acc, pp| acc.lcm(&pp.modulus())))
    }

    pub fn direct_sum(&self, other: &AbelianGroup) -> AbelianGroup {
        let mut torsion = self.torsion.clone();
        torsion.extend_from_slice(&other.torsion);
        Self::from_prime_powers(self.free_rank + other.free_rank, torsion)
    }

    pub fn is_isomorphic(&self, other: &AbelianGroup) -> bool {
        self == other
    }

    /// Builds an element, reducing torsion coordinates into `[0, modulus)`.
    /// Free coordinates come first, then one coordinate per torsion factor.
    pub fn element(&self, coordinates: Vec<BigInt>) -> Result<GroupElement> {
        if coordinates.len() != self.num_factors() {
            return Err(Error::ShapeMismatch { expected: self.num_factors(), found: coordinates.len() });
        }
        let free = self.free_rank as usize;
        let coordinates = coordinates
            .into_iter()
            .enumerate()
            .map(|(i, c)| if i < free { c } else { c.mod_floor(&self.torsion[i - free].modulus().into()) })
            .collect();
        Ok(GroupElement { coordinates })
    }

    pub fn zero_element(&self) -> GroupElement {
        GroupElement { coordinates: vec![BigInt::zero(); self.num_factors()] }
    }

    pub fn element_order(&self, x: &GroupElement) -> Result<Order> {
        if x.coordinates.len() != self.num_factors() {
            return Err(Error::ShapeMismatch { expected: self.num_factors(), found: x.coordinates.len() });
        }
        let free = self.free_rank as usize;
        if x.coordinates[..free].iter().any(|c| !c.is_zero()) {
            return Ok(Order::Infinite);
        }
        let mut order = BigUint::one();
        for (pp, c) in self.torsion.iter().zip(&x.coordinates[free..]) {
            let m = pp.modulus();
            let c = c.mod_floor(&BigInt::from(m.clone())).magnitude().clone();
            order = order.lcm(&(&m / m.gcd(&c)));
        }
        Ok(Order::Finite(order))
    }

    /// True iff some element has finite order exactly `m`: for each
    /// `p^e || m` a factor `Z/p^f` with `f >= e` must exist.
    pub fn has_element_of_order(&self, m: u64) -> bool {
        assert!(m >= 1, "orders are positive");
        factor_u64(m)
            .into_iter()
            .all(|(p, e)| self.torsion.iter().any(|pp| pp.prime == p && pp.exponent >= e))
    }

    pub fn torsion_primes(&self) -> BTreeSet<u64> {
        self.torsion.iter().map(|pp| pp.prime).collect()
    }
}

impl fmt::Display for AbelianGroup {
    /// `Z^r (+) Z/a (+) Z/b`, with `Z` for rank one and `0` for the trivial group.
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_trivial() {
            return f.write_str("0");
        }
        let mut parts = Vec::new();
        match self.free_rank {
            0 => {}
            1 => parts.push("Z".to_string()),
            r => parts.push(format!("Z^{r}")),
        }
        parts.extend(self.torsion.iter().map(|pp| pp.to_string()));
        f.write_str(&parts.join(" (+) "))
    }
}

/// Coordinates with respect to an [`AbelianGroup`]'s factor list.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct GroupElement {
    coordinates: Vec<BigInt>,
}

impl GroupElement {
    pub fn coordinates(&self) -> &[BigInt] {
        &self.coordinates
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub enum Order {
    Finite(BigUint),
    Infinite,
}

impl Order {
    pub fn finite(d: u64) -> Order {
        Order::Finite(BigUint::from(d))
    }
}

impl fmt::Display for Order {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Order::Finite(d) => write!(f, "{d}"),
            Order::Infinite => f.write_str("infinite"),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn el(g: &AbelianGroup, coords: &[i64]) -> GroupElement {
        g.element(coords.iter().map(|&c| BigInt::from(c)).collect()).unwrap()
    }

    /// All elements of a finite group given by its cyclic moduli.
    fn all_elements(moduli: &[u64]) -> Vec<Vec<u64>> {
        moduli.iter().fold(vec![vec![]], |acc, &m| {
            acc.into_iter()
                .flat_map(|prefix| {
                    (0..m).map(move |c| {
                        let mut v = prefix.clone();
                        v.push(c);
                        v
                    })
                })
                .collect()
        })
    }

    /// Smallest d >= 1 with d*x = 0, by iterated addition.
    fn brute_order(moduli: &[u64], x: &[u64]) -> u64 {
        let mut acc = x.to_vec();
        let mut d = 1;
        while acc.iter().any(|&c| c != 0) {
            for (a, (&xi, &m)) in acc.iter_mut().zip(x.iter().zip(moduli)) {
                *a = (*a + xi) % m;
            }
            d += 1;
        }
        d
    }

    fn moduli_of(g: &AbelianGroup) -> Vec<u64> {
        g.torsion().iter().map(|pp| pp.prime.pow(pp.exponent)).collect()
    }

    /// Brute-force isomorphism test for small finite groups: look for a
    /// bijective homomorphism Z/a_1 (+) ... -> target defined on generators.
    fn brute_isomorphic(source: &[u64], target: &[u64]) -> bool {
        let n_src: u64 = source.iter().product();
        let n_tgt: u64 = target.iter().product();
        if n_src != n_tgt {
            return false;
        }
        let targets = all_elements(target);
        let add = |a: &[u64], b: &[u64]| -> Vec<u64> {
            a.iter().zip(b).zip(target).map(|((x, y), m)| (x + y) % m).collect()
        };
        let scale = |a: &[u64], k: u64| -> Vec<u64> {
            a.iter().zip(target).map(|(x, m)| (x * k) % m).collect()
        };
        // images of the generators; each must have order dividing its modulus
        let mut choice = vec![0usize; source.len()];
        loop {
            let images: Vec<&Vec<u64>> = choice.iter().map(|&i| &targets[i]).collect();
            let well_defined = images.iter().zip(source).all(|(img, &m)| scale(img, m).iter().all(|&c| c == 0));
            if well_defined {
                let mut seen = std::collections::HashSet::new();
                for x in all_elements(source) {
                    let mut y = vec![0; target.len()];
                    for (img, &k) in images.iter().zip(&x) {
                        y = add(&y, &scale(img, k));
                    }
                    seen.insert(y);
                }
                if seen.len() as u64 == n_tgt {
                    return true;
                }
            }
            let mut i = 0;
            loop {
                if i == choice.len() {
                    return false;
                }
                choice[i] += 1;
                if choice[i] < targets.len() {
                    break;
                }
                choice[i] = 0;
                i += 1;
            }
        }
    }

    #[test]
    fn direct_sum_examples() {
        assert_eq!(AbelianGroup::free(1).direct_sum(&AbelianGroup::trivial()), AbelianGroup::free(1));
        let s = AbelianGroup::cyclic(2).direct_sum(&AbelianGroup::cyclic(5));
        assert_eq!(s.to_string(), "Z/2 (+) Z/5");
        let s = AbelianGroup::cyclic(6).direct_sum(&AbelianGroup::free(1));
        assert_eq!(s.free_rank(), 1);
        assert_eq!(s.torsion_primes(), BTreeSet::from([2, 3]));
        assert!(brute_isomorphic(&[6], &moduli_of(&AbelianGroup::cyclic(6))));
    }

    #[test]
    fn isomorphism_examples() {
        let z6 = AbelianGroup::cyclic(6);
        let z2z3 = AbelianGroup::from_invariants(0, &[2, 3]);
        assert!(z6.is_isomorphic(&z2z3));
        assert!(brute_isomorphic(&[6], &[2, 3]));
        assert!(AbelianGroup::free(1).is_isomorphic(&AbelianGroup::from_invariants(1, &[1])));
        let z4 = AbelianGroup::cyclic(4);
        let z2z2 = AbelianGroup::from_invariants(0, &[2, 2]);
        assert!(!z4.is_isomorphic(&z2z2));
        assert!(!brute_isomorphic(&[4], &[2, 2]));
    }

    #[test]
    fn canonical_form_agrees_with_brute_isomorphism() {
        let shapes: &[&[u64]] = &[&[4], &[2, 2], &[12], &[2, 6], &[3, 4], &[2, 2, 3], &[8], &[2, 4], &[9], &[3, 3]];
        for a in shapes {
            for b in shapes {
                let ga = AbelianGroup::from_invariants(0, a);
                let gb = AbelianGroup::from_invariants(0, b);
                assert_eq!(ga.is_isomorphic(&gb), brute_isomorphic(a, b), "{a:?} vs {b:?}");
            }
        }
    }

    #[test]
    fn element_order_examples() {
        let g = AbelianGroup::from_invariants(0, &[2, 5]);
        assert_eq!(g.element_order(&g.zero_element()).unwrap(), Order::finite(1));
        assert_eq!(g.element_order(&el(&g, &[1, 2])).unwrap(), Order::finite(10));
        assert_eq!(brute_order(&[2, 5], &[1, 2]), 10);
        let h = AbelianGroup::from_invariants(1, &[2]);
        assert_eq!(h.element_order(&el(&h, &[1, 0])).unwrap(), Order::Infinite);
        let bad = GroupElement { coordinates: vec![BigInt::one()] };
        assert!(matches!(g.element_order(&bad), Err(Error::ShapeMismatch { expected: 2, found: 1 })));
    }

    #[test]
    fn element_construction_reduces() {
        let g = AbelianGroup::from_invariants(1, &[4]);
        let x = el(&g, &[-7, -1]);
        assert_eq!(x.coordinates(), &[BigInt::from(-7), BigInt::from(3)]);
        assert!(g.element(vec![BigInt::one()]).is_err());
    }

    #[test]
    fn has_element_of_order_examples() {
        assert!(!AbelianGroup::free(1).has_element_of_order(2));
        assert!(AbelianGroup::cyclic(4).has_element_of_order(2));
        assert!(AbelianGroup::cyclic(6).has_element_of_order(3));
        assert!(AbelianGroup::free(3).has_element_of_order(1));
    }

    #[test]
    fn torsion_primes_examples() {
        assert!(AbelianGroup::free(5).torsion_primes().is_empty());
        let g = AbelianGroup::from_invariants(1, &[12]);
        assert_eq!(g.torsion_primes(), BTreeSet::from([2, 3]));
        let brute: BTreeSet<u64> = all_elements(&[12])
            .iter()
            .map(|x| brute_order(&[12], x))
            .flat_map(|d| factor_u64(d).into_iter().map(|(p, _)| p))
            .collect();
        assert_eq!(brute, BTreeSet::from([2, 3]));
        let g = AbelianGroup::from_invariants(0, &[2, 5, 11]);
        assert_eq!(g.torsion_primes(), BTreeSet::from([2, 5, 11]));
    }

    /// Every abelian group of order `n` given as a list of cyclic moduli,
    /// via partitions of the exponent of each prime.
    fn groups_of_order(n: u64) -> Vec<Vec<u64>> {
        fn partitions(e: u32, max: u32) -> Vec<Vec<u32>> {
            if e == 0 {
                return vec![vec![]];
            }
            (1..=e.min(max))
                .rev()
                .flat_map(|first| {
                    partitions(e - first, first).into_iter().map(move |mut rest| {
                        rest.insert(0, first);
                        rest
                    })
                })
                .collect()
        }
        factor_u64(n).into_iter().fold(vec![vec![]], |acc, (p, e)| {
            acc.into_iter()
                .flat_map(|prefix| {
                    partitions(e, e).into_iter().map(move |part| {
                        let mut v = prefix.clone();
                        v.extend(part.iter().map(|&k| p.pow(k)));
                        v
                    })
                })
                .collect()
        })
    }

    #[test]
    fn has_element_of_order_matches_enumeration_up_to_200() {
        for n in 1..=200u64 {
            for moduli in groups_of_order(n) {
                let g = AbelianGroup::from_invariants(0, &moduli);
                let orders: BTreeSet<u64> =
                    all_elements(&moduli).iter().map(|x| brute_order(&moduli, x)).collect();
                for m in 1..=n + 1 {
                    assert_eq!(g.has_element_of_order(m), orders.contains(&m), "{moduli:?}, m={m}");
                }
            }
        }
    }

    #[test]
    fn display_forms() {
        assert_eq!(AbelianGroup::trivial().to_string(), "0");
        assert_eq!(AbelianGroup::free(1).to_string(), "Z");
        assert_eq!(AbelianGroup::from_invariants(3, &[2, 2, 9]).to_string(), "Z^3 (+) Z/2 (+) Z/2 (+) Z/9");
    }

    #[test]
    fn serde_rejects_non_prime_powers() {
        let raw = RawGroup { free_rank: 0, torsion: vec![PrimePower { prime: 6, exponent: 1 }] };
        assert!(AbelianGroup::try_from(raw).is_err());
    }
}
