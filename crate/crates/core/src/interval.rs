//! Closed intervals with exact rational endpoints.
//!
//! Every operation returns an interval that contains the exact image of
//! its inputs. Irrational functions (square and cube roots, logarithm)
//! round outward to dyadic endpoints at a caller-chosen precision.

use std::cmp::Ordering;
use std::collections::HashMap;
use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};
use std::sync::{Mutex, OnceLock};

use num_bigint::{BigInt, Sign};
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Interval {
    lo: BigRational,
    hi: BigRational,
}

pub(crate) fn pow2(bits: u64) -> BigInt {
    BigInt::one() << bits
}

fn floor_scaled(q: &BigRational, bits: u64) -> BigInt {
    (q.numer() << bits).div_floor(q.denom())
}

fn ceil_scaled(q: &BigRational, bits: u64) -> BigInt {
    (q.numer() << bits).div_ceil(q.denom())
}

fn dyadic(n: BigInt, bits: u64) -> BigRational {
    BigRational::new(n, pow2(bits))
}

/// Largest integer whose square is at most `n` (n >= 0).
fn isqrt_floor(n: &BigInt) -> BigInt {
    n.sqrt()
}

fn isqrt_ceil(n: &BigInt) -> BigInt {
    let s = n.sqrt();
    if &s * &s == *n {
        s
    } else {
        s + 1
    }
}

/// Floor of the real cube root, any sign.
fn icbrt_floor(n: &BigInt) -> BigInt {
    if n.is_negative() {
        -icbrt_ceil(&-n)
    } else {
        n.cbrt()
    }
}

fn icbrt_ceil(n: &BigInt) -> BigInt {
    if n.is_negative() {
        -icbrt_floor(&-n)
    } else {
        let r = n.cbrt();
        if &r * &r * &r == *n {
            r
        } else {
            r + 1
        }
    }
}

fn sqrt_lower(q: &BigRational, bits: u64) -> BigRational {
    dyadic(isqrt_floor(&floor_scaled(q, 2 * bits)), bits)
}

fn sqrt_upper(q: &BigRational, bits: u64) -> BigRational {
    dyadic(isqrt_ceil(&ceil_scaled(q, 2 * bits)), bits)
}

fn cbrt_lower(q: &BigRational, bits: u64) -> BigRational {
    dyadic(icbrt_floor(&floor_scaled(q, 3 * bits)), bits)
}

fn cbrt_upper(q: &BigRational, bits: u64) -> BigRational {
    dyadic(icbrt_ceil(&ceil_scaled(q, 3 * bits)), bits)
}

/// Bounds on `2^w * atanh(t)` for rational `0 <= t <= 1/3`, from the odd
/// power series with truncation tail bounded by the geometric factor 9/8.
fn atanh_scaled(t: &BigRational, w: u64) -> (BigInt, BigInt) {
    debug_assert!(!t.is_negative() && *t <= BigRational::new(1.into(), 3.into()));
    let t2 = t * t;

    let mut lower = BigInt::zero();
    let mut p = floor_scaled(t, w);
    let p2 = floor_scaled(&t2, w);
    let mut n = 0u64;
    while !p.is_zero() {
        lower += &p / (2 * n + 1);
        p = (&p * &p2) >> w;
        n += 1;
    }

    let mut upper = BigInt::zero();
    let mut q = ceil_scaled(t, w);
    let q2 = ceil_scaled(&t2, w);
    let sixteen = BigInt::from(16);
    let mut n = 0u64;
    loop {
        if q <= sixteen {
            let d = 8 * (2 * n + 1);
            upper += (&q * 9u32 + (d - 1)) / d;
            break;
        }
        let d = 2 * n + 1;
        upper += (&q + (d - 1)) / d;
        // ceil(q q2 / 2^w)
        q = -((-(&q * &q2)) >> w);
        n += 1;
    }
    (lower, upper)
}

/// `2^w ln 2` bounds, memoized per working precision.
fn ln2_scaled(w: u64) -> (BigInt, BigInt) {
    static CACHE: OnceLock<Mutex<HashMap<u64, (BigInt, BigInt)>>> = OnceLock::new();
    let cache = CACHE.get_or_init(|| Mutex::new(HashMap::new()));
    if let Some(hit) = cache.lock().unwrap().get(&w) {
        return hit.clone();
    }
    let (lo, hi) = atanh_scaled(&BigRational::new(1.into(), 3.into()), w);
    let pair = (lo << 1, hi << 1);
    cache.lock().unwrap().insert(w, pair.clone());
    pair
}

/// Certified bounds on `ln q` for rational `q > 0`, as dyadics with
/// denominator `2^bits`.
fn ln_bounds(q: &BigRational, bits: u64) -> (BigRational, BigRational) {
    assert!(q.is_positive(), "logarithm of a non-positive number");
    if q.is_one() {
        return (BigRational::zero(), BigRational::zero());
    }
    // q = 2^k m with 2/3 <= m < 4/3, so |t| <= 1/5 below
    let (num, den) = (q.numer(), q.denom());
    let mut k = num.bits() as i64 - den.bits() as i64;
    let reduced = |k: i64| -> (BigInt, BigInt) {
        if k >= 0 {
            (num.clone(), den << (k as u64))
        } else {
            (num << ((-k) as u64), den.clone())
        }
    };
    let (mut n, mut d) = reduced(k);
    // now 1/2 < m < 2; shift until 3n < 4d and 3n >= 2d
    while BigInt::from(3) * &n >= BigInt::from(4) * &d {
        k += 1;
        (n, d) = reduced(k);
    }
    while BigInt::from(3) * &n < BigInt::from(2) * &d {
        k -= 1;
        (n, d) = reduced(k);
    }
    let t = BigRational::new(&n - &d, &n + &d);
    let k_bits = 64 - k.unsigned_abs().leading_zeros() as u64;
    let w = bits + 8 + k_bits;
    let (at_lo, at_hi) = if t.is_negative() {
        let (lo, hi) = atanh_scaled(&-&t, w);
        (-hi, -lo)
    } else {
        atanh_scaled(&t, w)
    };
    let (l2_lo, l2_hi) = ln2_scaled(w);
    let kb = BigInt::from(k);
    let (k_lo, k_hi) = if k >= 0 {
        (&kb * &l2_lo, &kb * &l2_hi)
    } else {
        (&kb * &l2_hi, &kb * &l2_lo)
    };
    let lo: BigInt = k_lo + (at_lo << 1);
    let hi: BigInt = k_hi + (at_hi << 1);
    // drop from 2^-w to 2^-bits, rounding outward
    let shift = w - bits;
    let lo = lo >> shift;
    let hi = -((-hi) >> shift);
    (dyadic(lo, bits), dyadic(hi, bits))
}

impl Interval {
    pub fn new(lo: BigRational, hi: BigRational) -> Self {
        assert!(lo <= hi, "interval endpoints out of order");
        Interval { lo, hi }
    }

    pub fn point(q: BigRational) -> Self {
        Interval { lo: q.clone(), hi: q }
    }

    pub fn from_int(n: i64) -> Self {
        Interval::point(BigRational::from_integer(n.into()))
    }

    pub fn from_ratio(n: i64, d: i64) -> Self {
        Interval::point(BigRational::new(n.into(), d.into()))
    }

    pub fn lo(&self) -> &BigRational {
        &self.lo
    }

    pub fn hi(&self) -> &BigRational {
        &self.hi
    }

    pub fn width(&self) -> BigRational {
        &self.hi - &self.lo
    }

    pub fn midpoint(&self) -> BigRational {
        (&self.lo + &self.hi) / BigRational::from_integer(2.into())
    }

    pub fn is_point(&self) -> bool {
        self.lo == self.hi
    }

    /// Largest absolute value of any point in the interval.
    pub fn magnitude(&self) -> BigRational {
        self.lo.abs().max(self.hi.abs())
    }

    pub fn contains(&self, q: &BigRational) -> bool {
        &self.lo <= q && q <= &self.hi
    }

    pub fn contains_interval(&self, other: &Interval) -> bool {
        self.lo <= other.lo && other.hi <= self.hi
    }

    /// True when the interval lies strictly inside the open interval `(a, b)`.
    pub fn within_open(&self, a: &BigRational, b: &BigRational) -> bool {
        a < &self.lo && &self.hi < b
    }

    pub fn overlaps(&self, other: &Interval) -> bool {
        self.lo <= other.hi && other.lo <= self.hi
    }

    pub fn intersect(&self, other: &Interval) -> Option<Interval> {
        let lo = (&self.lo).max(&other.lo).clone();
        let hi = (&self.hi).min(&other.hi).clone();
        (lo <= hi).then_some(Interval { lo, hi })
    }

    /// `Less` if entirely below `q`, `Greater` if entirely above, `None`
    /// if `q` is inside.
    pub fn compare_point(&self, q: &BigRational) -> Option<Ordering> {
        if &self.hi < q {
            Some(Ordering::Less)
        } else if &self.lo > q {
            Some(Ordering::Greater)
        } else if self.is_point() {
            Some(Ordering::Equal)
        } else {
            None
        }
    }

    /// True when every point is strictly less than every point of `other`.
    pub fn certainly_less(&self, other: &Interval) -> bool {
        self.hi < other.lo
    }

    pub fn abs(&self) -> Interval {
        if !self.lo.is_negative() {
            self.clone()
        } else if !self.hi.is_positive() {
            -self
        } else {
            Interval {
                lo: BigRational::zero(),
                hi: self.magnitude(),
            }
        }
    }

    pub fn scale(&self, q: &BigRational) -> Interval {
        let a = &self.lo * q;
        let b = &self.hi * q;
        if a <= b {
            Interval { lo: a, hi: b }
        } else {
            Interval { lo: b, hi: a }
        }
    }

    pub fn recip(&self) -> Interval {
        assert!(
            self.lo.is_positive() || self.hi.is_negative(),
            "reciprocal of an interval containing zero"
        );
        Interval {
            lo: self.hi.recip(),
            hi: self.lo.recip(),
        }
    }

    pub fn div(&self, other: &Interval) -> Interval {
        self * &other.recip()
    }

    /// Widens to dyadic endpoints with denominator `2^bits`.
    pub fn round_out(&self, bits: u64) -> Interval {
        Interval {
            lo: dyadic(floor_scaled(&self.lo, bits), bits),
            hi: dyadic(ceil_scaled(&self.hi, bits), bits),
        }
    }

    /// Enclosure of the square root; requires `lo >= 0`.
    pub fn sqrt(&self, bits: u64) -> Interval {
        assert!(!self.lo.is_negative(), "square root of a negative interval");
        Interval {
            lo: sqrt_lower(&self.lo, bits),
            hi: sqrt_upper(&self.hi, bits),
        }
    }

    /// Enclosure of the real cube root.
    pub fn cbrt(&self, bits: u64) -> Interval {
        Interval {
            lo: cbrt_lower(&self.lo, bits),
            hi: cbrt_upper(&self.hi, bits),
        }
    }

    /// Enclosure of the natural logarithm; requires `lo > 0`. The outward
    /// rounding adds at most `2^-bits` to each side.
    pub fn ln(&self, bits: u64) -> Interval {
        if self.is_point() {
            let (lo, hi) = ln_bounds(&self.lo, bits);
            return Interval { lo, hi };
        }
        let (lo, _) = ln_bounds(&self.lo, bits);
        let (_, hi) = ln_bounds(&self.hi, bits);
        Interval { lo, hi }
    }

    pub fn to_f64(&self) -> f64 {
        self.midpoint().to_f64().unwrap_or(f64::NAN)
    }

    pub fn lo_f64(&self) -> f64 {
        self.lo.to_f64().unwrap_or(f64::NAN)
    }

    pub fn hi_f64(&self) -> f64 {
        self.hi.to_f64().unwrap_or(f64::NAN)
    }

    /// Lower endpoint rounded down to `digits` decimals.
    pub fn lo_decimal(&self, digits: u32) -> String {
        decimal(&self.lo, digits, false)
    }

    /// Upper endpoint rounded up to `digits` decimals.
    pub fn hi_decimal(&self, digits: u32) -> String {
        decimal(&self.hi, digits, true)
    }

    /// True when `width <= 2^-bits * max(1, |value|)`.
    pub fn has_relative_width(&self, bits: u64) -> bool {
        let scale = self.magnitude().max(BigRational::one());
        self.width() * BigRational::from_integer(pow2(bits)) <= scale
    }
}

/// Decimal rendering of `q`, rounded toward -inf (`up = false`) or +inf.
pub fn decimal(q: &BigRational, digits: u32, up: bool) -> String {
    let scale = BigInt::from(10u32).pow(digits);
    let scaled = q * BigRational::from_integer(scale.clone());
    let n = if up { scaled.ceil() } else { scaled.floor() }.to_integer();
    let negative = n.sign() == Sign::Minus;
    let (int_part, frac_part) = n.abs().div_rem(&scale);
    let mut s = String::new();
    if negative {
        s.push('-');
    }
    s.push_str(&int_part.to_string());
    if digits > 0 {
        let frac = frac_part.to_string();
        s.push('.');
        for _ in frac.len()..digits as usize {
            s.push('0');
        }
        s.push_str(&frac);
    }
    s
}

/// Parses a decimal (`-1.25`, `3`, `1e-12`) or fraction (`7/3`) string
/// exactly.
pub fn parse_rational(s: &str) -> Option<BigRational> {
    let s = s.trim();
    if let Some((n, d)) = s.split_once('/') {
        let n: BigInt = n.trim().parse().ok()?;
        let d: BigInt = d.trim().parse().ok()?;
        if d.is_zero() {
            return None;
        }
        return Some(BigRational::new(n, d));
    }
    let (negative, body) = match s.strip_prefix('-') {
        Some(rest) => (true, rest),
        None => (false, s.strip_prefix('+').unwrap_or(s)),
    };
    let (body, exponent) = match body.split_once(['e', 'E']) {
        Some((m, e)) => (m, e.parse::<i32>().ok()?),
        None => (body, 0),
    };
    let (int_part, frac_part) = body.split_once('.').unwrap_or((body, ""));
    if int_part.is_empty() && frac_part.is_empty() {
        return None;
    }
    if !int_part.chars().chain(frac_part.chars()).all(|c| c.is_ascii_digit()) {
        return None;
    }
    let digits = format!("{int_part}{frac_part}");
    let n: BigInt = digits.parse().ok()?;
    let d = BigInt::from(10u32).pow(frac_part.len() as u32);
    let ten = BigInt::from(10u32).pow(exponent.unsigned_abs());
    let q = if exponent >= 0 {
        BigRational::new(n * ten, d)
    } else {
        BigRational::new(n, d * ten)
    };
    Some(if negative { -q } else { q })
}

impl Add for &Interval {
    type Output = Interval;
    fn add(self, rhs: &Interval) -> Interval {
        Interval {
            lo: &self.lo + &rhs.lo,
            hi: &self.hi + &rhs.hi,
        }
    }
}

impl Sub for &Interval {
    type Output = Interval;
    fn sub(self, rhs: &Interval) -> Interval {
        Interval {
            lo: &self.lo - &rhs.hi,
            hi: &self.hi - &rhs.lo,
        }
    }
}

impl Mul for &Interval {
    type Output = Interval;
    fn mul(self, rhs: &Interval) -> Interval {
        let products = [
            &self.lo * &rhs.lo,
            &self.lo * &rhs.hi,
            &self.hi * &rhs.lo,
            &self.hi * &rhs.hi,
        ];
        let lo = products.iter().min().unwrap().clone();
        let hi = products.iter().max().unwrap().clone();
        Interval { lo, hi }
    }
}

impl Neg for &Interval {
    type Output = Interval;
    fn neg(self) -> Interval {
        Interval {
            lo: -&self.hi,
            hi: -&self.lo,
        }
    }
}

impl Neg for Interval {
    type Output = Interval;
    fn neg(self) -> Interval {
        -&self
    }
}

impl fmt::Display for Interval {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "[{}, {}]", self.lo_decimal(15), self.hi_decimal(15))
    }
}
