//! Exact arithmetic in `Q[sqrt(mu)]`.

use std::cmp::Ordering;
use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use num_bigint::BigInt;
use num_integer::Roots;
use num_rational::BigRational;
use num_traits::{One, Zero};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::interval::{parse_rational, Interval};

/// `rational + radical * sqrt(radicand)`.
///
/// When the radicand is a perfect square the radical part is folded into
/// the rational part, so `radical` is always zero in that case.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct QuadReal {
    rational: BigRational,
    radical: BigRational,
    radicand: u64,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum QuadOp {
    Add,
    Sub,
    Mul,
}

fn perfect_sqrt(mu: u64) -> Option<u64> {
    let s = mu.sqrt();
    (s * s == mu).then_some(s)
}

impl QuadReal {
    pub fn new(rational: BigRational, radical: BigRational, radicand: u64) -> Self {
        let mut x = QuadReal {
            rational,
            radical,
            radicand,
        };
        x.normalize();
        x
    }

    pub fn from_rational(q: BigRational, radicand: u64) -> Self {
        QuadReal::new(q, BigRational::zero(), radicand)
    }

    pub fn from_int(n: i64, radicand: u64) -> Self {
        QuadReal::from_rational(BigRational::from_integer(n.into()), radicand)
    }

    pub fn zero(radicand: u64) -> Self {
        QuadReal::from_int(0, radicand)
    }

    pub fn one(radicand: u64) -> Self {
        QuadReal::from_int(1, radicand)
    }

    /// `sqrt(radicand)` itself.
    pub fn sqrt_of(radicand: u64) -> Self {
        QuadReal::new(BigRational::zero(), BigRational::one(), radicand)
    }

    fn normalize(&mut self) {
        if let Some(s) = perfect_sqrt(self.radicand) {
            if !self.radical.is_zero() {
                let folded = &self.radical * BigRational::from_integer(BigInt::from(s));
                self.rational += folded;
                self.radical = BigRational::zero();
            }
        }
    }

    pub fn rational_part(&self) -> &BigRational {
        &self.rational
    }

    pub fn radical_part(&self) -> &BigRational {
        &self.radical
    }

    pub fn radicand(&self) -> u64 {
        self.radicand
    }

    pub fn is_rational(&self) -> bool {
        self.radical.is_zero()
    }

    pub fn is_zero(&self) -> bool {
        self.rational.is_zero() && self.radical.is_zero()
    }

    pub fn as_rational(&self) -> Option<&BigRational> {
        self.is_rational().then_some(&self.rational)
    }

    pub fn conjugate(&self) -> QuadReal {
        QuadReal {
            rational: self.rational.clone(),
            radical: -&self.radical,
            radicand: self.radicand,
        }
    }

    fn check(&self, other: &QuadReal) -> Result<()> {
        if self.radicand == other.radicand {
            Ok(())
        } else {
            Err(Error::RadicandMismatch(self.radicand, other.radicand))
        }
    }

    /// Exact sum, difference or product. Fails when the radicands differ.
    pub fn arith(&self, other: &QuadReal, op: QuadOp) -> Result<QuadReal> {
        self.check(other)?;
        let mu = self.radicand;
        let (rational, radical) = match op {
            QuadOp::Add => (&self.rational + &other.rational, &self.radical + &other.radical),
            QuadOp::Sub => (&self.rational - &other.rational, &self.radical - &other.radical),
            QuadOp::Mul => {
                let mu_q = BigRational::from_integer(BigInt::from(mu));
                (
                    &self.rational * &other.rational + &self.radical * &other.radical * mu_q,
                    &self.rational * &other.radical + &self.radical * &other.rational,
                )
            }
        };
        Ok(QuadReal::new(rational, radical, mu))
    }

    /// Exact sign, decided by comparing `a^2` against `b^2 mu` when the
    /// two parts disagree in sign.
    pub fn signum(&self) -> Ordering {
        let sa = self.rational.cmp(&BigRational::zero());
        let sb = self.radical.cmp(&BigRational::zero());
        if sb == Ordering::Equal || self.radicand == 0 {
            return sa;
        }
        if sa == Ordering::Equal || sa == sb {
            return sb;
        }
        let a2 = &self.rational * &self.rational;
        let b2mu = &self.radical * &self.radical * BigRational::from_integer(BigInt::from(self.radicand));
        match a2.cmp(&b2mu) {
            Ordering::Greater => sa,
            Ordering::Less => sb,
            Ordering::Equal => Ordering::Equal,
        }
    }

    /// Exact ordering of `self` against a rational.
    pub fn compare_rational(&self, r: &BigRational) -> Ordering {
        QuadReal {
            rational: &self.rational - r,
            radical: self.radical.clone(),
            radicand: self.radicand,
        }
        .signum()
    }

    pub fn compare(&self, other: &QuadReal) -> Result<Ordering> {
        Ok(self.arith(other, QuadOp::Sub)?.signum())
    }

    pub fn abs(&self) -> QuadReal {
        if self.signum() == Ordering::Less {
            -self
        } else {
            self.clone()
        }
    }

    /// Certified enclosure with `hi - lo <= 2^-bits * max(1, |value|)`.
    pub fn to_interval(&self, bits: u64) -> Interval {
        let base = Interval::point(self.rational.clone());
        if self.radical.is_zero() {
            return base;
        }
        let mut work = bits + 4;
        loop {
            let root = Interval::point(BigRational::from_integer(BigInt::from(self.radicand))).sqrt(work);
            let value = &base + &root.scale(&self.radical);
            if value.has_relative_width(bits) {
                return value;
            }
            work += 32;
        }
    }
}

impl Add for &QuadReal {
    type Output = QuadReal;

    /// Panics on radicand mismatch; use [`QuadReal::arith`] for a fallible version.
    fn add(self, rhs: &QuadReal) -> QuadReal {
        self.arith(rhs, QuadOp::Add).expect("radicand mismatch")
    }
}

impl Sub for &QuadReal {
    type Output = QuadReal;
    fn sub(self, rhs: &QuadReal) -> QuadReal {
        self.arith(rhs, QuadOp::Sub).expect("radicand mismatch")
    }
}

impl Mul for &QuadReal {
    type Output = QuadReal;
    fn mul(self, rhs: &QuadReal) -> QuadReal {
        self.arith(rhs, QuadOp::Mul).expect("radicand mismatch")
    }
}

impl Neg for &QuadReal {
    type Output = QuadReal;
    fn neg(self) -> QuadReal {
        QuadReal {
            rational: -&self.rational,
            radical: -&self.radical,
            radicand: self.radicand,
        }
    }
}

impl fmt::Display for QuadReal {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.radical.is_zero() {
            return write!(f, "{}", self.rational);
        }
        let root = format!("sqrt({})", self.radicand);
        let coef = if self.radical.is_one() {
            root
        } else if (-&self.radical).is_one() {
            format!("-{root}")
        } else {
            format!("{}*{root}", self.radical)
        };
        if self.rational.is_zero() {
            write!(f, "{coef}")
        } else if let Some(magnitude) = coef.strip_prefix('-') {
            write!(f, "{} - {magnitude}", self.rational)
        } else {
            write!(f, "{} + {coef}", self.rational)
        }
    }
}

#[derive(Serialize, Deserialize)]
struct QuadRealJson {
    a: String,
    b: String,
    mu: u64,
}

impl Serialize for QuadReal {
    fn serialize<S: serde::Serializer>(&self, serializer: S) -> std::result::Result<S::Ok, S::Error> {
        QuadRealJson {
            a: self.rational.to_string(),
            b: self.radical.to_string(),
            mu: self.radicand,
        }
        .serialize(serializer)
    }
}

impl<'de> Deserialize<'de> for QuadReal {
    fn deserialize<D: serde::Deserializer<'de>>(deserializer: D) -> std::result::Result<Self, D::Error> {
        let raw = QuadRealJson::deserialize(deserializer)?;
        let parse = |s: &str| {
            parse_rational(s).ok_or_else(|| serde::de::Error::custom(Error::InvalidRational(s.to_string())))
        };
        Ok(QuadReal::new(parse(&raw.a)?, parse(&raw.b)?, raw.mu))
    }
}
