//! Exact homogeneous polynomials in `x0, x1, x2` over the rationals.
//!
//! Terms are kept in a `BTreeMap` keyed by [`Monomial`], whose `Ord` is
//! graded-lex with `x0 > x1 > x2`. The canonical (printing, basis) order is
//! *descending*, so `x0^d` always comes first.

use std::cmp::Ordering;
use std::collections::BTreeMap;
use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};
use std::str::FromStr;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

use crate::error::{Error, Result};

/// Exact rational coefficient. `BigRational` is always kept in lowest terms
/// with a positive denominator.
pub type Coefficient = BigRational;

/// Builds a coefficient from a small numerator and denominator.
pub fn rat(num: i64, den: i64) -> Coefficient {
    BigRational::new(BigInt::from(num), BigInt::from(den))
}

/// Builds an integral coefficient.
pub fn int(value: i64) -> Coefficient {
    BigRational::from_integer(BigInt::from(value))
}

/// A monomial `x0^e0 * x1^e1 * x2^e2`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct Monomial(pub [u32; 3]);

impl Monomial {
    pub const ONE: Monomial = Monomial([0, 0, 0]);

    pub fn new(e0: u32, e1: u32, e2: u32) -> Self {
        Monomial([e0, e1, e2])
    }

    /// The monomial `x_i`.
    pub fn var(i: usize) -> Self {
        let mut e = [0; 3];
        e[i] = 1;
        Monomial(e)
    }

    pub fn degree(&self) -> u32 {
        self.0.iter().sum()
    }

    pub fn exponents(&self) -> [u32; 3] {
        self.0
    }

    pub fn mul(&self, other: &Monomial) -> Monomial {
        Monomial([
            self.0[0] + other.0[0],
            self.0[1] + other.0[1],
            self.0[2] + other.0[2],
        ])
    }

    /// Position of this monomial in the canonical (descending graded-lex)
    /// listing of all monomials of its degree.
    pub fn rank_in_degree(&self) -> usize {
        let d = self.degree() as usize;
        let k = d - self.0[0] as usize;
        k * (k + 1) / 2 + (k - self.0[1] as usize)
    }

    /// Number of monomials of total degree `d` in three variables.
    pub fn count(d: u32) -> usize {
        let d = d as usize;
        (d + 1) * (d + 2) / 2
    }
}

impl Ord for Monomial {
    fn cmp(&self, other: &Self) -> Ordering {
        self.degree()
            .cmp(&other.degree())
            .then_with(|| self.0.cmp(&other.0))
    }
}

impl PartialOrd for Monomial {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl fmt::Display for Monomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut first = true;
        for (i, &e) in self.0.iter().enumerate() {
            if e == 0 {
                continue;
            }
            if !first {
                f.write_str("*")?;
            }
            first = false;
            if e == 1 {
                write!(f, "x{i}")?;
            } else {
                write!(f, "x{i}^{e}")?;
            }
        }
        if first {
            f.write_str("1")?;
        }
        Ok(())
    }
}

/// A homogeneous polynomial of a fixed degree. The zero polynomial keeps its
/// degree tag so graded code never has to special-case it.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct HomogeneousPoly {
    degree: u32,
    terms: BTreeMap<Monomial, Coefficient>,
}

impl HomogeneousPoly {
    pub fn zero(degree: u32) -> Self {
        HomogeneousPoly {
            degree,
            terms: BTreeMap::new(),
        }
    }

    pub fn one() -> Self {
        Self::constant(Coefficient::one())
    }

    pub fn constant(c: Coefficient) -> Self {
        Self::term(c, Monomial::ONE)
    }

    pub fn term(c: Coefficient, m: Monomial) -> Self {
        let mut p = Self::zero(m.degree());
        if !c.is_zero() {
            p.terms.insert(m, c);
        }
        p
    }

    /// The linear form `x_i`.
    pub fn var(i: usize) -> Self {
        Self::term(Coefficient::one(), Monomial::var(i))
    }

    /// Collects `(coefficient, monomial)` pairs into a polynomial of the given
    /// degree, summing like terms and dropping zeros.
    pub fn from_terms<I>(degree: u32, terms: I) -> Result<Self>
    where
        I: IntoIterator<Item = (Coefficient, Monomial)>,
    {
        let mut p = Self::zero(degree);
        for (c, m) in terms {
            if m.degree() != degree {
                return Err(Error::DegreeMismatch {
                    expected: degree,
                    found: m.degree(),
                });
            }
            p.add_term(m, c);
        }
        Ok(p)
    }

    pub fn degree(&self) -> u32 {
        self.degree
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn num_terms(&self) -> usize {
        self.terms.len()
    }

    /// Coefficient of `m`, zero if absent.
    pub fn coeff(&self, m: &Monomial) -> Coefficient {
        self.terms.get(m).cloned().unwrap_or_else(Coefficient::zero)
    }

    /// Terms in canonical order (largest monomial first).
    pub fn terms(&self) -> impl DoubleEndedIterator<Item = (&Monomial, &Coefficient)> + '_ {
        self.terms.iter().rev()
    }

    /// Same polynomial, relabelled with another degree. Only valid for zero.
    pub fn with_degree(mut self, degree: u32) -> Result<Self> {
        if !self.is_zero() && degree != self.degree {
            return Err(Error::DegreeMismatch {
                expected: degree,
                found: self.degree,
            });
        }
        self.degree = degree;
        Ok(self)
    }

    fn add_term(&mut self, m: Monomial, c: Coefficient) {
        if c.is_zero() {
            return;
        }
        use std::collections::btree_map::Entry;
        match self.terms.entry(m) {
            Entry::Vacant(v) => {
                v.insert(c);
            }
            Entry::Occupied(mut o) => {
                *o.get_mut() += c;
                if o.get().is_zero() {
                    o.remove();
                }
            }
        }
    }

    /// Sum of two polynomials of equal degree. A zero operand adopts the
    /// other operand's degree.
    pub fn try_add(&self, other: &Self) -> Result<Self> {
        let degree = self.sum_degree(other)?;
        let mut out = self.clone();
        out.degree = degree;
        for (m, c) in &other.terms {
            out.add_term(*m, c.clone());
        }
        Ok(out)
    }

    pub fn try_sub(&self, other: &Self) -> Result<Self> {
        self.try_add(&-other)
    }

    fn sum_degree(&self, other: &Self) -> Result<u32> {
        if self.degree == other.degree || other.is_zero() {
            Ok(self.degree)
        } else if self.is_zero() {
            Ok(other.degree)
        } else {
            Err(Error::DegreeMismatch {
                expected: self.degree,
                found: other.degree,
            })
        }
    }

    pub fn scale(&self, c: &Coefficient) -> Self {
        if c.is_zero() {
            return Self::zero(self.degree);
        }
        HomogeneousPoly {
            degree: self.degree,
            terms: self
                .terms
                .iter()
                .map(|(m, a)| (*m, a * c))
                .collect(),
        }
    }

    pub fn mul_poly(&self, other: &Self) -> Self {
        let mut out = Self::zero(self.degree + other.degree);
        for (m1, c1) in &self.terms {
            for (m2, c2) in &other.terms {
                out.add_term(m1.mul(m2), c1 * c2);
            }
        }
        out
    }

    pub fn mul_monomial(&self, m: &Monomial) -> Self {
        HomogeneousPoly {
            degree: self.degree + m.degree(),
            terms: self.terms.iter().map(|(k, c)| (k.mul(m), c.clone())).collect(),
        }
    }

    pub fn pow(&self, e: u32) -> Self {
        (0..e).fold(Self::one(), |acc, _| acc.mul_poly(self))
    }

    /// `∂p/∂x_i`. Degree drops by one; constants map to the degree-0 zero.
    pub fn partial(&self, i: usize) -> Self {
        let mut out = Self::zero(self.degree.saturating_sub(1));
        for (m, c) in &self.terms {
            let e = m.0[i];
            if e == 0 {
                continue;
            }
            let mut d = *m;
            d.0[i] -= 1;
            out.add_term(d, c * BigInt::from(e));
        }
        out
    }

    /// Multiplies every coefficient by the least common multiple of the
    /// denominators; returns the scaled polynomial's integer coefficients and
    /// the multiplier.
    pub fn clear_denominators(&self) -> (Vec<(Monomial, BigInt)>, BigInt) {
        let lcm = self
            .terms
            .values()
            .fold(BigInt::one(), |acc, c| num_integer::lcm(acc, c.denom().clone()));
        let terms = self
            .terms
            .iter()
            .map(|(m, c)| (*m, (c * &lcm).to_integer()))
            .collect();
        (terms, lcm)
    }

    /// Checks the representation invariants: no zero coefficients, every
    /// monomial of the stated degree, coefficients in lowest terms.
    pub fn audit(&self) -> bool {
        self.terms.iter().all(|(m, c)| {
            m.degree() == self.degree
                && !c.is_zero()
                && c.denom().is_positive()
                && num_integer::Integer::gcd(c.numer(), c.denom()).is_one()
        })
    }
}

impl Neg for &HomogeneousPoly {
    type Output = HomogeneousPoly;
    fn neg(self) -> HomogeneousPoly {
        HomogeneousPoly {
            degree: self.degree,
            terms: self.terms.iter().map(|(m, c)| (*m, -c)).collect(),
        }
    }
}

impl Neg for HomogeneousPoly {
    type Output = HomogeneousPoly;
    fn neg(self) -> HomogeneousPoly {
        -&self
    }
}

// The operator forms panic on degree mismatch; use `try_add`/`try_sub` where
// the degrees come from untrusted input.
impl Add for &HomogeneousPoly {
    type Output = HomogeneousPoly;
    fn add(self, rhs: &HomogeneousPoly) -> HomogeneousPoly {
        self.try_add(rhs).expect("adding polynomials of different degrees")
    }
}

impl Sub for &HomogeneousPoly {
    type Output = HomogeneousPoly;
    fn sub(self, rhs: &HomogeneousPoly) -> HomogeneousPoly {
        self.try_sub(rhs).expect("subtracting polynomials of different degrees")
    }
}

impl Mul for &HomogeneousPoly {
    type Output = HomogeneousPoly;
    fn mul(self, rhs: &HomogeneousPoly) -> HomogeneousPoly {
        self.mul_poly(rhs)
    }
}

macro_rules! forward_owned {
    ($tr:ident, $m:ident) => {
        impl $tr for HomogeneousPoly {
            type Output = HomogeneousPoly;
            fn $m(self, rhs: HomogeneousPoly) -> HomogeneousPoly {
                (&self).$m(&rhs)
            }
        }
        impl $tr<&HomogeneousPoly> for HomogeneousPoly {
            type Output = HomogeneousPoly;
            fn $m(self, rhs: &HomogeneousPoly) -> HomogeneousPoly {
                (&self).$m(rhs)
            }
        }
    };
}
forward_owned!(Add, add);
forward_owned!(Sub, sub);
forward_owned!(Mul, mul);

impl fmt::Display for HomogeneousPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&crate::parse::format_poly(self))
    }
}

impl FromStr for HomogeneousPoly {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        crate::parse::parse_poly(s, None)
    }
}

/// Product of a sequence of polynomials; the empty product is `1`.
pub fn product<'a, I>(factors: I) -> HomogeneousPoly
where
    I: IntoIterator<Item = &'a HomogeneousPoly>,
{
    factors
        .into_iter()
        .fold(HomogeneousPoly::one(), |acc, p| acc.mul_poly(p))
}
