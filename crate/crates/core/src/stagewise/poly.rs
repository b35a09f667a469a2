//! Rational *-polynomials over the Gaussian rationals.

use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};
use std::str::FromStr;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

use crate::error::{Error, Result};

/// `re + im i` with exact rational parts.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Default)]
pub struct GaussianRational {
    pub re: BigRational,
    pub im: BigRational,
}

impl GaussianRational {
    pub fn new(re: BigRational, im: BigRational) -> Self {
        GaussianRational { re, im }
    }

    pub fn real(re: BigRational) -> Self {
        GaussianRational { re, im: BigRational::zero() }
    }

    pub fn from_int(n: i64) -> Self {
        Self::real(BigRational::from_integer(BigInt::from(n)))
    }

    pub fn i() -> Self {
        Self::new(BigRational::zero(), BigRational::one())
    }

    pub fn conj(&self) -> Self {
        Self::new(self.re.clone(), -self.im.clone())
    }

    /// `|z|^2 = re^2 + im^2`.
    pub fn norm_squared(&self) -> BigRational {
        &self.re * &self.re + &self.im * &self.im
    }

    pub fn is_zero(&self) -> bool {
        self.re.is_zero() && self.im.is_zero()
    }
}

impl Add for GaussianRational {
    type Output = Self;
    fn add(self, o: Self) -> Self {
        Self::new(self.re + o.re, self.im + o.im)
    }
}

impl Sub for GaussianRational {
    type Output = Self;
    fn sub(self, o: Self) -> Self {
        Self::new(self.re - o.re, self.im - o.im)
    }
}

impl Neg for GaussianRational {
    type Output = Self;
    fn neg(self) -> Self {
        Self::new(-self.re, -self.im)
    }
}

impl Mul for GaussianRational {
    type Output = Self;
    fn mul(self, o: Self) -> Self {
        Self::new(&self.re * &o.re - &self.im * &o.im, &self.re * &o.im + &self.im * &o.re)
    }
}

impl fmt::Display for GaussianRational {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match (self.re.is_zero(), self.im.is_zero()) {
            (_, true) => write!(f, "{}", self.re),
            (true, false) => write!(f, "{}i", self.im),
            (false, false) => {
                let sign = if self.im.is_negative() { "-" } else { "+" };
                write!(f, "({} {sign} {}i)", self.re, self.im.abs())
            }
        }
    }
}

/// A noncommutative *-polynomial in `x_0, x_1, ...`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum StarPolynomial {
    Var(usize),
    Const(GaussianRational),
    Adj(Box<StarPolynomial>),
    Add(Box<StarPolynomial>, Box<StarPolynomial>),
    Mul(Box<StarPolynomial>, Box<StarPolynomial>),
    Scale(GaussianRational, Box<StarPolynomial>),
}

impl StarPolynomial {
    pub fn var(j: usize) -> Self {
        StarPolynomial::Var(j)
    }

    pub fn one() -> Self {
        StarPolynomial::Const(GaussianRational::from_int(1))
    }

    pub fn constant(c: GaussianRational) -> Self {
        StarPolynomial::Const(c)
    }

    pub fn adj(p: Self) -> Self {
        StarPolynomial::Adj(Box::new(p))
    }

    pub fn add(a: Self, b: Self) -> Self {
        StarPolynomial::Add(Box::new(a), Box::new(b))
    }

    pub fn mul(a: Self, b: Self) -> Self {
        StarPolynomial::Mul(Box::new(a), Box::new(b))
    }

    pub fn scale(c: GaussianRational, p: Self) -> Self {
        StarPolynomial::Scale(c, Box::new(p))
    }

    /// Highest variable index occurring, if any.
    pub fn max_var(&self) -> Option<usize> {
        match self {
            StarPolynomial::Var(j) => Some(*j),
            StarPolynomial::Const(_) => None,
            StarPolynomial::Adj(p) | StarPolynomial::Scale(_, p) => p.max_var(),
            StarPolynomial::Add(a, b) | StarPolynomial::Mul(a, b) => a.max_var().max(b.max_var()),
        }
    }

    /// The index `m` of the last variable, 0 for constants.
    pub fn degree_index(&self) -> usize {
        self.max_var().unwrap_or(0)
    }

    /// Value at complex scalars, with the adjoint acting as conjugation.
    pub fn complex_eval(&self, values: &[GaussianRational]) -> Result<GaussianRational> {
        Ok(match self {
            StarPolynomial::Var(j) => values.get(*j).cloned().ok_or(Error::UnassignedVariable(*j))?,
            StarPolynomial::Const(c) => c.clone(),
            StarPolynomial::Adj(p) => p.complex_eval(values)?.conj(),
            StarPolynomial::Add(a, b) => a.complex_eval(values)? + b.complex_eval(values)?,
            StarPolynomial::Mul(a, b) => a.complex_eval(values)? * b.complex_eval(values)?,
            StarPolynomial::Scale(c, p) => c.clone() * p.complex_eval(values)?,
        })
    }
}

impl fmt::Display for StarPolynomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            StarPolynomial::Var(j) => write!(f, "x{j}"),
            StarPolynomial::Const(c) => write!(f, "{c}"),
            StarPolynomial::Adj(p) => write!(f, "({p})^*"),
            StarPolynomial::Add(a, b) => write!(f, "({a} + {b})"),
            StarPolynomial::Mul(a, b) => write!(f, "({a} * {b})"),
            StarPolynomial::Scale(c, p) => write!(f, "{c}({p})"),
        }
    }
}

#[derive(Clone, Debug, PartialEq)]
enum PTok {
    Num(BigInt),
    Var(usize),
    I,
    Sym(char),
    Adjoint,
}

fn lex_poly(src: &str) -> Result<Vec<PTok>> {
    let chars: Vec<char> = src.chars().collect();
    let mut out = Vec::new();
    let mut i = 0;
    while i < chars.len() {
        let c = chars[i];
        match c {
            c if c.is_whitespace() => i += 1,
            '0'..='9' => {
                let start = i;
                while i < chars.len() && chars[i].is_ascii_digit() {
                    i += 1;
                }
                let digits: String = chars[start..i].iter().collect();
                out.push(PTok::Num(digits.parse().expect("ascii digits")));
            }
            'x' => {
                let start = i + 1;
                i = start;
                while i < chars.len() && chars[i].is_ascii_digit() {
                    i += 1;
                }
                let digits: String = chars[start..i].iter().collect();
                let j = digits
                    .parse()
                    .map_err(|_| Error::PolynomialSyntax(format!("variable at offset {start} lacks an index")))?;
                out.push(PTok::Var(j));
            }
            'i' => {
                out.push(PTok::I);
                i += 1;
            }
            '^' if chars.get(i + 1) == Some(&'*') => {
                out.push(PTok::Adjoint);
                i += 2;
            }
            '+' | '-' | '*' | '/' | '(' | ')' => {
                out.push(PTok::Sym(c));
                i += 1;
            }
            other => return Err(Error::PolynomialSyntax(format!("unexpected character `{other}`"))),
        }
    }
    Ok(out)
}

struct PolyParser {
    toks: Vec<PTok>,
    at: usize,
}

impl PolyParser {
    fn peek(&self) -> Option<&PTok> {
        self.toks.get(self.at)
    }

    fn starts_factor(&self, offset: usize) -> bool {
        matches!(self.toks.get(self.at + offset), Some(PTok::Num(_) | PTok::Var(_) | PTok::I | PTok::Sym('(')))
    }

    fn expr(&mut self) -> Result<StarPolynomial> {
        let mut p = self.term()?;
        loop {
            match self.peek() {
                Some(PTok::Sym('+')) => {
                    self.at += 1;
                    p = StarPolynomial::add(p, self.term()?);
                }
                Some(PTok::Sym('-')) => {
                    self.at += 1;
                    let rhs = self.term()?;
                    p = StarPolynomial::add(p, StarPolynomial::scale(GaussianRational::from_int(-1), rhs));
                }
                _ => return Ok(p),
            }
        }
    }

    fn term(&mut self) -> Result<StarPolynomial> {
        let mut p = self.unary()?;
        loop {
            if self.peek() == Some(&PTok::Sym('*')) && self.starts_factor(1) {
                self.at += 1;
            } else if !self.starts_factor(0) {
                return Ok(p);
            }
            // `a * b` and juxtaposition `(1+i)x0` both multiply
            p = StarPolynomial::mul(p, self.unary()?);
        }
    }

    fn unary(&mut self) -> Result<StarPolynomial> {
        if self.peek() == Some(&PTok::Sym('-')) {
            self.at += 1;
            return Ok(StarPolynomial::scale(GaussianRational::from_int(-1), self.unary()?));
        }
        let mut p = self.atom()?;
        loop {
            match self.peek() {
                Some(PTok::Adjoint) => self.at += 1,
                // a trailing `*` not followed by a factor is the adjoint
                Some(PTok::Sym('*')) if !self.starts_factor(1) => self.at += 1,
                _ => return Ok(p),
            }
            p = StarPolynomial::adj(p);
        }
    }

    fn atom(&mut self) -> Result<StarPolynomial> {
        let tok = self.peek().cloned();
        self.at += 1;
        match tok {
            Some(PTok::Var(j)) => Ok(StarPolynomial::Var(j)),
            Some(PTok::I) => Ok(StarPolynomial::Const(GaussianRational::i())),
            Some(PTok::Num(n)) => {
                let mut q = BigRational::from_integer(n);
                if self.peek() == Some(&PTok::Sym('/')) {
                    self.at += 1;
                    match self.peek().cloned() {
                        Some(PTok::Num(d)) if !d.is_zero() => {
                            self.at += 1;
                            q /= BigRational::from_integer(d);
                        }
                        _ => return Err(Error::PolynomialSyntax("expected a nonzero denominator".into())),
                    }
                }
                Ok(StarPolynomial::Const(GaussianRational::real(q)))
            }
            Some(PTok::Sym('(')) => {
                let p = self.expr()?;
                if self.peek() != Some(&PTok::Sym(')')) {
                    return Err(Error::PolynomialSyntax("expected `)`".into()));
                }
                self.at += 1;
                Ok(p)
            }
            Some(other) => Err(Error::PolynomialSyntax(format!("unexpected token {other:?}"))),
            None => Err(Error::PolynomialSyntax("unexpected end of input".into())),
        }
    }
}

impl FromStr for StarPolynomial {
    type Err = Error;

    /// Syntax: `x0`, `x1`, ...; rationals `3/4`; `i`; `+ - *`; adjoint as
    /// postfix `^*` or a bare trailing `*` (`x0 - x0*`); juxtaposition multiplies.
    fn from_str(s: &str) -> Result<StarPolynomial> {
        let mut p = PolyParser { toks: lex_poly(s)?, at: 0 };
        let e = p.expr()?;
        if p.at != p.toks.len() {
            return Err(Error::PolynomialSyntax(format!("trailing input at token {}", p.at)));
        }
        Ok(e)
    }
}
