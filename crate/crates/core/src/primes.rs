//! Prime indexing and integer factorization.
//!
//! Primes are 0-indexed: `nth_prime(0) == 2`. The table behind [`nth_prime`]
//! is grown on demand by re-sieving with a doubled bound and shared across
//! threads.

use std::sync::{Mutex, OnceLock};

use num_bigint::BigUint;
use num_integer::Integer;
use num_traits::{One, ToPrimitive, Zero};

use crate::error::{Error, Result};

fn table() -> &'static Mutex<Vec<u64>> {
    static PRIMES: OnceLock<Mutex<Vec<u64>>> = OnceLock::new();
    PRIMES.get_or_init(|| Mutex::new(sieve(1 << 12)))
}

fn sieve(bound: usize) -> Vec<u64> {
    let mut composite = vec![false; bound + 1];
    let mut primes = Vec::new();
    for i in 2..=bound {
        if !composite[i] {
            primes.push(i as u64);
            let mut j = i * i;
            while j <= bound {
                composite[j] = true;
                j += i;
            }
        }
    }
    primes
}

/// The `n`-th prime in ascending order, starting from `p_0 = 2`.
pub fn nth_prime(n: usize) -> u64 {
    let mut primes = table().lock().unwrap_or_else(|e| e.into_inner());
    while primes.len() <= n {
        let bound = (*primes.last().unwrap_or(&2) as usize).max(16) * 2;
        *primes = sieve(bound);
    }
    primes[n]
}

/// The first `count` primes.
pub fn first_primes(count: usize) -> Vec<u64> {
    if count == 0 {
        return Vec::new();
    }
    nth_prime(count - 1);
    let primes = table().lock().unwrap_or_else(|e| e.into_inner());
    primes[..count].to_vec()
}

fn mul_mod(a: u64, b: u64, m: u64) -> u64 {
    ((a as u128 * b as u128) % m as u128) as u64
}

fn pow_mod(mut base: u64, mut exp: u64, m: u64) -> u64 {
    let mut acc = 1 % m;
    base %= m;
    while exp > 0 {
        if exp & 1 == 1 {
            acc = mul_mod(acc, base, m);
        }
        base = mul_mod(base, base, m);
        exp >>= 1;
    }
    acc
}

/// Deterministic Miller-Rabin for 64-bit integers.
pub fn is_prime(n: u64) -> bool {
    const WITNESSES: [u64; 12] = [2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37];
    if n < 2 {
        return false;
    }
    for &p in &WITNESSES {
        if n % p == 0 {
            return n == p;
        }
    }
    let mut d = n - 1;
    let mut r = 0;
    while d % 2 == 0 {
        d /= 2;
        r += 1;
    }
    'witness: for &a in &WITNESSES {
        let mut x = pow_mod(a, d, n);
        if x == 1 || x == n - 1 {
            continue;
        }
        for _ in 1..r {
            x = mul_mod(x, x, n);
            if x == n - 1 {
                continue 'witness;
            }
        }
        return false;
    }
    true
}

// Pollard's rho with Brent-free Floyd cycle detection; `n` is odd and composite.
fn rho(n: u64) -> u64 {
    let mut c = 1u64;
    loop {
        let f = |x: u64| (mul_mod(x, x, n) + c) % n;
        let (mut x, mut y, mut d) = (2u64, 2u64, 1u64);
        while d == 1 {
            x = f(x);
            y = f(f(y));
            d = x.abs_diff(y).gcd(&n);
        }
        if d != n {
            return d;
        }
        c += 1;
    }
}

fn push_factor(n: u64, out: &mut Vec<u64>) {
    if n == 1 {
        return;
    }
    if is_prime(n) {
        out.push(n);
        return;
    }
    let d = rho(n);
    push_factor(d, out);
    push_factor(n / d, out);
}

/// Prime factorization of a 64-bit integer as ascending `(prime, exponent)` pairs.
pub fn factor_u64(mut n: u64) -> Vec<(u64, u32)> {
    let mut primes = Vec::new();
    for p in [2u64, 3, 5, 7, 11, 13] {
        while n % p == 0 {
            primes.push(p);
            n /= p;
        }
    }
    push_factor(n, &mut primes);
    collect_powers(primes)
}

fn collect_powers(mut primes: Vec<u64>) -> Vec<(u64, u32)> {
    primes.sort_unstable();
    let mut out: Vec<(u64, u32)> = Vec::new();
    for p in primes {
        match out.last_mut() {
            Some((q, e)) if *q == p => *e += 1,
            _ => out.push((p, 1)),
        }
    }
    out
}

/// Prime factorization of an arbitrary positive integer. Small primes are
/// stripped by trial division; the cofactor must then fit in 64 bits.
pub fn factor_big(n: &BigUint) -> Result<Vec<(u64, u32)>> {
    assert!(!n.is_zero(), "cannot factor zero");
    if let Some(small) = n.to_u64() {
        return Ok(factor_u64(small));
    }
    let mut rest = n.clone();
    let mut primes = Vec::new();
    for p in first_primes(1229) {
        let big_p = BigUint::from(p);
        loop {
            let (q, r) = rest.div_rem(&big_p);
            if !r.is_zero() {
                break;
            }
            primes.push(p);
            rest = q;
        }
        if rest.is_one() {
            break;
        }
    }
    match rest.to_u64() {
        Some(small) => {
            let mut powers = collect_powers(primes);
            for (p, e) in factor_u64(small) {
                powers.push((p, e));
            }
            Ok(collect_powers(
                powers
                    .into_iter()
                    .flat_map(|(p, e)| std::iter::repeat(p).take(e as usize))
                    .collect(),
            ))
        }
        None => Err(Error::FactorTooLarge(n.to_string())),
    }
}
