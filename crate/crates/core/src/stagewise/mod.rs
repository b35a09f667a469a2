//! The stage-wise schedule of special points `p_{k,s}` for one index `n`, and
//! the norm sequence `t_s` built from it against a mock norm oracle.
//!
//! For `s >= k`: `p_{k,s} = q_k` while `n` is outside `R_s`, `0` once `n` has
//! entered after stage `k`, and `1` if `n` was already in `R_k`.

mod poly;

use std::cmp::Ordering;
use std::fmt;
use std::str::FromStr;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Pow, Signed, Zero};

pub use poly::{GaussianRational, StarPolynomial};

use crate::enumeration::CESet;
use crate::error::{Error, Result};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum PointValue {
    Undefined,
    /// The `k`-th special point of the standard presentation.
    Q(u64),
    Zero,
    One,
}

impl PointValue {
    /// Table symbol: `·`, `q`, `0` or `1`.
    pub fn symbol(&self) -> char {
        match self {
            PointValue::Undefined => '·',
            PointValue::Q(_) => 'q',
            PointValue::Zero => '0',
            PointValue::One => '1',
        }
    }
}

impl fmt::Display for PointValue {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            PointValue::Undefined => f.write_str("undefined"),
            PointValue::Q(k) => write!(f, "q_{k}"),
            PointValue::Zero => f.write_str("0"),
            PointValue::One => f.write_str("1"),
        }
    }
}

pub fn p_value(n: u64, k: u64, s: u64, r: &CESet) -> PointValue {
    if s < k {
        PointValue::Undefined
    } else if !r.in_stage(n, s) {
        PointValue::Q(k)
    } else if !r.in_stage(n, k) {
        PointValue::Zero
    } else {
        PointValue::One
    }
}

/// The eventual value of `p_{k,s}` as `s` grows.
pub fn p_limit(n: u64, k: u64, r: &CESet) -> Result<PointValue> {
    Ok(match r.entry_stage(n)? {
        None => PointValue::Q(k),
        Some(sigma) if k < sigma => PointValue::Zero,
        Some(_) => PointValue::One,
    })
}

/// An exact nonnegative real `sqrt(square)`.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct NormValue {
    square: BigRational,
}

impl NormValue {
    pub fn from_square(square: BigRational) -> NormValue {
        assert!(!square.is_negative(), "norm squares are nonnegative");
        NormValue { square }
    }

    pub fn from_rational(q: &BigRational) -> NormValue {
        NormValue { square: q * q }
    }

    pub fn from_int(n: i64) -> NormValue {
        NormValue::from_rational(&BigRational::from_integer(BigInt::from(n)))
    }

    pub fn square(&self) -> &BigRational {
        &self.square
    }

    /// The value itself when it is rational.
    pub fn as_rational(&self) -> Option<BigRational> {
        let root = |x: &BigInt| {
            let r = x.sqrt();
            (&r * &r == *x).then_some(r)
        };
        Some(BigRational::new(root(self.square.numer())?, root(self.square.denom())?))
    }

    /// Nearest `f64`, for display only.
    pub fn to_f64(&self) -> f64 {
        use num_traits::ToPrimitive;
        self.square.to_f64().unwrap_or(f64::INFINITY).sqrt()
    }
}

impl Ord for NormValue {
    fn cmp(&self, other: &Self) -> Ordering {
        self.square.cmp(&other.square)
    }
}

impl PartialOrd for NormValue {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl fmt::Display for NormValue {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self.as_rational() {
            Some(q) => write!(f, "{q}"),
            None => write!(f, "sqrt({})", self.square),
        }
    }
}

/// `|rho(v)|` at an assignment of each variable to 0 or 1.
pub fn scalar_eval(rho: &StarPolynomial, assignment: &[bool]) -> Result<NormValue> {
    let values: Vec<GaussianRational> = assignment.iter().map(|&b| GaussianRational::from_int(b as i64)).collect();
    Ok(NormValue::from_square(rho.complex_eval(&values)?.norm_squared()))
}

/// The nonincreasing sequence `r_s = limit + scale * ratio^s`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct MockNormOracle {
    limit: BigRational,
    scale: BigRational,
    ratio: BigRational,
}

impl MockNormOracle {
    pub fn new(limit: BigRational, scale: BigRational, ratio: BigRational) -> Result<MockNormOracle> {
        if limit.is_negative() {
            return Err(Error::InvalidOracle("limit must be nonnegative".into()));
        }
        if scale.is_negative() {
            return Err(Error::InvalidOracle("scale must be nonnegative".into()));
        }
        if ratio.is_negative() || ratio > BigRational::one() || (ratio.is_one() && !scale.is_zero()) {
            return Err(Error::InvalidOracle("ratio must lie in [0, 1) (or scale be 0)".into()));
        }
        Ok(MockNormOracle { limit, scale, ratio })
    }

    /// The constant sequence at `value`.
    pub fn constant(value: BigRational) -> Result<MockNormOracle> {
        MockNormOracle::new(value, BigRational::zero(), BigRational::zero())
    }

    pub fn limit(&self) -> &BigRational {
        &self.limit
    }

    pub fn r(&self, s: u64) -> BigRational {
        if self.scale.is_zero() {
            return self.limit.clone();
        }
        let power: BigRational = Pow::pow(&self.ratio, s);
        &self.limit + &self.scale * power
    }
}

impl FromStr for MockNormOracle {
    type Err = Error;

    /// `LIMIT:SCALE:RATIO`, e.g. `2:1:1/2` for `2 + 2^-s`.
    fn from_str(s: &str) -> Result<MockNormOracle> {
        let parts: Vec<&str> = s.split(':').collect();
        if parts.len() != 3 {
            return Err(Error::InvalidOracle(format!("`{s}` is not LIMIT:SCALE:RATIO")));
        }
        let q = |t: &str| {
            t.trim().parse::<BigRational>().map_err(|_| Error::InvalidOracle(format!("`{t}` is not a rational")))
        };
        MockNormOracle::new(q(parts[0])?, q(parts[1])?, q(parts[2])?)
    }
}

impl fmt::Display for MockNormOracle {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}:{}:{}", self.limit, self.scale, self.ratio)
    }
}

/// First stage at which `n` appears, searching stages `0..=s`.
fn entry_by(n: u64, s: u64, r: &CESet) -> Option<u64> {
    match r.entry_stage(n) {
        Ok(sigma) => sigma.filter(|&sigma| sigma <= s),
        Err(_) => (0..=s).find(|&t| r.in_stage(n, t)),
    }
}

/// `t_s`: the oracle value while `n` is outside `R_s`, and afterwards
/// `|rho(v)|` with `v_j = 0` for `j < sigma(n)` and `v_j = 1` from `sigma(n)` on.
pub fn t_value(rho: &StarPolynomial, s: u64, oracle: &MockNormOracle, n: u64, r: &CESet) -> Result<NormValue> {
    let m = rho.degree_index();
    if s < m as u64 {
        return Err(Error::StageBeforeDegree { stage: s, degree: m });
    }
    match entry_by(n, s, r) {
        None => Ok(NormValue::from_rational(&oracle.r(s))),
        Some(sigma) => {
            let v: Vec<bool> = (0..=m as u64).map(|j| j >= sigma).collect();
            scalar_eval(rho, &v)
        }
    }
}

/// `(s, t_s)` for `s = m ..= horizon`.
pub fn t_sequence(
    rho: &StarPolynomial,
    oracle: &MockNormOracle,
    n: u64,
    r: &CESet,
    horizon: u64,
) -> Result<Vec<(u64, NormValue)>> {
    let m = rho.degree_index() as u64;
    (m..=horizon).map(|s| Ok((s, t_value(rho, s, oracle, n, r)?))).collect()
}

/// Stages `s` up to `horizon` with `t_s > t_{s-1}`; empty when the
/// sequence is nonincreasing on that range.
pub fn monotonicity_report(
    rho: &StarPolynomial,
    oracle: &MockNormOracle,
    n: u64,
    r: &CESet,
    horizon: u64,
) -> Result<Vec<u64>> {
    let seq = t_sequence(rho, oracle, n, r, horizon)?;
    Ok(seq.windows(2).filter(|w| w[1].1 > w[0].1).map(|w| w[1].0).collect())
}
