//! The representation of the two-multitwist group into `PSL(2, R)`.
//!
//! `a` maps to `[[1, sqrt(mu)], [0, 1]]` and `b` to `[[1, 0], [-sqrt(mu), 1]]`,
//! where `mu` is the Perron-Frobenius eigenvalue of `N N^t` for the
//! intersection matrix `N` of the two multicurves. Words whose image is
//! hyperbolic are pseudo-Anosov, with dilatation the spectral radius of
//! the image.

use std::cmp::Ordering;
use std::fmt;

use num_rational::BigRational;
use num_traits::{One, Signed, Zero};
use serde::ser::SerializeStruct;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::interval::Interval;
use crate::quad::QuadReal;
use crate::word::{Letter, Word};

/// A 2x2 matrix over `Q[sqrt(mu)]` with determinant one.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct TwistMatrix {
    entries: [[QuadReal; 2]; 2],
    mu: u64,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum IsometryClass {
    Identity,
    Elliptic,
    Parabolic,
    Hyperbolic,
}

impl fmt::Display for IsometryClass {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let s = match self {
            IsometryClass::Identity => "identity",
            IsometryClass::Elliptic => "elliptic",
            IsometryClass::Parabolic => "parabolic",
            IsometryClass::Hyperbolic => "hyperbolic",
        };
        f.write_str(s)
    }
}

impl TwistMatrix {
    pub fn identity(mu: u64) -> Self {
        TwistMatrix {
            entries: [
                [QuadReal::one(mu), QuadReal::zero(mu)],
                [QuadReal::zero(mu), QuadReal::one(mu)],
            ],
            mu,
        }
    }

    fn from_entries(entries: [[QuadReal; 2]; 2], mu: u64) -> Self {
        TwistMatrix { entries, mu }
    }

    /// Image of a single letter.
    pub fn of_letter(letter: Letter, mu: u64) -> Self {
        let root = QuadReal::sqrt_of(mu);
        let one = QuadReal::one(mu);
        let zero = QuadReal::zero(mu);
        let entries = match letter {
            Letter::A => [[one.clone(), root], [zero, one]],
            Letter::AInv => [[one.clone(), -&root], [zero, one]],
            Letter::B => [[one.clone(), zero], [-&root, one]],
            Letter::BInv => [[one.clone(), zero], [root, one]],
        };
        TwistMatrix::from_entries(entries, mu)
    }

    pub fn mu(&self) -> u64 {
        self.mu
    }

    pub fn entry(&self, row: usize, col: usize) -> &QuadReal {
        &self.entries[row][col]
    }

    pub fn mul(&self, other: &TwistMatrix) -> TwistMatrix {
        let e = &self.entries;
        let o = &other.entries;
        let cell = |i: usize, j: usize| &(&e[i][0] * &o[0][j]) + &(&e[i][1] * &o[1][j]);
        TwistMatrix::from_entries([[cell(0, 0), cell(0, 1)], [cell(1, 0), cell(1, 1)]], self.mu)
    }

    pub fn trace(&self) -> QuadReal {
        &self.entries[0][0] + &self.entries[1][1]
    }

    pub fn determinant(&self) -> QuadReal {
        let e = &self.entries;
        &(&e[0][0] * &e[1][1]) - &(&e[0][1] * &e[1][0])
    }

    /// True for `Id` and `-Id`, the identity of `PSL(2, R)`.
    pub fn is_projective_identity(&self) -> bool {
        let e = &self.entries;
        e[0][1].is_zero() && e[1][0].is_zero() && e[0][0] == e[1][1] && {
            let d = e[0][0].abs();
            d == QuadReal::one(self.mu)
        }
    }
}

impl Serialize for TwistMatrix {
    fn serialize<S: serde::Serializer>(&self, serializer: S) -> std::result::Result<S::Ok, S::Error> {
        self.entries.serialize(serializer)
    }
}

fn check_mu(mu: u64) -> Result<()> {
    if mu == 0 {
        Err(Error::InvalidParameter("mu must be >= 1".into()))
    } else {
        Ok(())
    }
}

/// Images of `a` and `b`.
pub fn generator_images(mu: u64) -> Result<(TwistMatrix, TwistMatrix)> {
    check_mu(mu)?;
    Ok((
        TwistMatrix::of_letter(Letter::A, mu),
        TwistMatrix::of_letter(Letter::B, mu),
    ))
}

/// Product of the letter images, left to right.
pub fn evaluate(word: &Word, mu: u64) -> Result<TwistMatrix> {
    check_mu(mu)?;
    let images: Vec<TwistMatrix> = Letter::ALL.iter().map(|&l| TwistMatrix::of_letter(l, mu)).collect();
    Ok(word
        .letters()
        .iter()
        .fold(TwistMatrix::identity(mu), |acc, l| acc.mul(&images[l.index()])))
}

/// Classification of a determinant-one matrix by `|trace|`, decided exactly.
pub fn classify(m: &TwistMatrix) -> IsometryClass {
    if m.is_projective_identity() {
        return IsometryClass::Identity;
    }
    let two = BigRational::from_integer(2.into());
    match m.trace().abs().compare_rational(&two) {
        Ordering::Less => IsometryClass::Elliptic,
        Ordering::Equal => IsometryClass::Parabolic,
        Ordering::Greater => IsometryClass::Hyperbolic,
    }
}

#[derive(Debug, Clone)]
pub struct DilatationReport {
    pub word: Word,
    pub mu: u64,
    pub matrix: TwistMatrix,
    pub trace: QuadReal,
    pub class: IsometryClass,
    /// Certified enclosure of the dilatation; present iff hyperbolic.
    pub lambda: Option<Interval>,
    pub log_lambda: Option<Interval>,
    /// `(1, -|trace|, 1)`, the minimal polynomial `x^2 - |t| x + 1` of the
    /// dilatation, when the trace is rational.
    pub char_poly: Option<[BigRational; 3]>,
    pub precision_bits: u64,
}

impl DilatationReport {
    pub fn is_pseudo_anosov(&self) -> bool {
        self.class == IsometryClass::Hyperbolic
    }

    /// Checks `lambda + 1/lambda` against `|trace|` in interval arithmetic.
    pub fn reciprocal_identity_holds(&self) -> bool {
        match &self.lambda {
            Some(l) => {
                let sum = l + &l.recip();
                let t = self.trace.abs().to_interval(self.precision_bits + 8);
                sum.overlaps(&t)
            }
            None => true,
        }
    }
}

/// Bounds `(|t| + sqrt(t^2 - 4)) / 2` and its logarithm to relative width
/// `2^-bits`.
fn certified_dilatation(trace: &QuadReal, bits: u64) -> (Interval, Interval) {
    let t_abs = trace.abs();
    let disc = &(&t_abs * &t_abs) - &QuadReal::from_int(4, trace.radicand());
    let half = BigRational::new(1.into(), 2.into());
    let mut work = bits + 16;
    loop {
        let d = disc.to_interval(work);
        let d = if d.lo().is_negative() {
            Interval::new(BigRational::zero(), d.hi().clone())
        } else {
            d
        };
        let lambda = (&t_abs.to_interval(work) + &d.sqrt(work)).scale(&half);
        let log_lambda = lambda.ln(work);
        if lambda.has_relative_width(bits) && log_lambda.has_relative_width(bits) {
            return (lambda, log_lambda);
        }
        work += 64;
    }
}

/// Full report for one word. Non-hyperbolic images carry no dilatation.
pub fn dilatation(word: &Word, mu: u64, precision_bits: u64) -> Result<DilatationReport> {
    if precision_bits == 0 {
        return Err(Error::InvalidParameter("precision must be >= 1 bit".into()));
    }
    let matrix = evaluate(word, mu)?;
    let trace = matrix.trace();
    let class = classify(&matrix);
    let (lambda, log_lambda) = if class == IsometryClass::Hyperbolic {
        let (l, ll) = certified_dilatation(&trace, precision_bits);
        (Some(l), Some(ll))
    } else {
        (None, None)
    };
    let char_poly = trace
        .as_rational()
        .map(|t| [BigRational::one(), -t.abs(), BigRational::one()]);
    Ok(DilatationReport {
        word: word.clone(),
        mu,
        matrix,
        trace,
        class,
        lambda,
        log_lambda,
        char_poly,
        precision_bits,
    })
}

/// Number of decimals printed for certified endpoints.
pub const REPORT_DIGITS: u32 = 20;

pub(crate) fn interval_pair(iv: &Interval) -> [String; 2] {
    [iv.lo_decimal(REPORT_DIGITS), iv.hi_decimal(REPORT_DIGITS)]
}

impl Serialize for DilatationReport {
    fn serialize<S: serde::Serializer>(&self, serializer: S) -> std::result::Result<S::Ok, S::Error> {
        let mut s = serializer.serialize_struct("DilatationReport", 8)?;
        s.serialize_field("word", &self.word)?;
        s.serialize_field("mu", &self.mu)?;
        s.serialize_field("trace", &self.trace)?;
        s.serialize_field("class", &self.class)?;
        s.serialize_field("lambda", &self.lambda.as_ref().map(interval_pair))?;
        s.serialize_field("log_lambda", &self.log_lambda.as_ref().map(interval_pair))?;
        s.serialize_field(
            "char_poly",
            &self
                .char_poly
                .as_ref()
                .map(|c| c.iter().map(|x| x.to_string()).collect::<Vec<_>>()),
        )?;
        s.serialize_field("matrix", &self.matrix)?;
        s.end()
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::word::cyclically_reduced_words;
    use proptest::prelude::*;

    fn w(s: &str) -> Word {
        s.parse().unwrap()
    }

    fn q(n: i64, d: i64) -> BigRational {
        BigRational::new(n.into(), d.into())
    }

    // Independent oracle: plain integer 2x2 products with an integer root.
    fn int_trace(word: &str, root: i128) -> i128 {
        let mut m = [[1i128, 0], [0, 1]];
        for c in word.chars() {
            let g = match c {
                'a' => [[1, root], [0, 1]],
                'A' => [[1, -root], [0, 1]],
                'b' => [[1, 0], [-root, 1]],
                'B' => [[1, 0], [root, 1]],
                _ => unreachable!(),
            };
            m = [
                [m[0][0] * g[0][0] + m[0][1] * g[1][0], m[0][0] * g[0][1] + m[0][1] * g[1][1]],
                [m[1][0] * g[0][0] + m[1][1] * g[1][0], m[1][0] * g[0][1] + m[1][1] * g[1][1]],
            ];
        }
        m[0][0] + m[1][1]
    }

    #[test]
    fn generator_image_entries() {
        let (a, b) = generator_images(64).unwrap();
        assert_eq!(a.entry(0, 1), &QuadReal::from_int(8, 64));
        assert_eq!(b.entry(1, 0), &QuadReal::from_int(-8, 64));
        let (a, b) = generator_images(16).unwrap();
        assert_eq!(a.entry(0, 1), &QuadReal::from_int(4, 16));
        assert_eq!(b.entry(1, 0), &QuadReal::from_int(-4, 16));
        let (a, b) = generator_images(2).unwrap();
        assert_eq!(a.entry(0, 1), &QuadReal::sqrt_of(2));
        assert_eq!(b.entry(1, 0), &-&QuadReal::sqrt_of(2));
        assert!(generator_images(0).is_err());
    }

    #[test]
    fn evaluate_examples() {
        let m = evaluate(&w("ab"), 64).unwrap();
        let expect = [[-63, 8], [-8, 1]];
        for i in 0..2 {
            for j in 0..2 {
                assert_eq!(m.entry(i, j), &QuadReal::from_int(expect[i][j], 64));
            }
        }
        assert_eq!(m.trace(), QuadReal::from_int(-62, 64));
        assert_eq!(m.determinant(), QuadReal::one(64));

        let id = evaluate(&Word::identity(), 7).unwrap();
        assert_eq!(id, TwistMatrix::identity(7));
        assert_eq!(id.trace(), QuadReal::from_int(2, 7));

        assert_eq!(int_trace("abAB", 8), 4098);
        assert_eq!(evaluate(&w("abAB"), 64).unwrap().trace(), QuadReal::from_int(4098, 64));
    }

    #[test]
    fn integer_oracle_agrees_on_short_words() {
        for len in 1..=6 {
            for word in cyclically_reduced_words(len) {
                let s = word.to_string();
                for (mu, root) in [(16u64, 4i128), (64, 8), (1, 1), (4, 2)] {
                    let t = evaluate(&word, mu).unwrap().trace();
                    assert_eq!(t, QuadReal::from_int(int_trace(&s, root) as i64, mu), "{s} mu={mu}");
                }
            }
        }
    }

    #[test]
    fn classify_examples() {
        assert_eq!(classify(&evaluate(&w("ab"), 64).unwrap()), IsometryClass::Hyperbolic);
        assert_eq!(classify(&evaluate(&w("a"), 64).unwrap()), IsometryClass::Parabolic);
        assert_eq!(classify(&TwistMatrix::identity(64)), IsometryClass::Identity);
        // mu = 1: trace(ab) = 2 - 1 = 1
        assert_eq!(classify(&evaluate(&w("ab"), 1).unwrap()), IsometryClass::Elliptic);
        // mu = 2: trace(ab) = 0
        assert_eq!(classify(&evaluate(&w("ab"), 2).unwrap()), IsometryClass::Elliptic);
        // mu = 4: trace(ab) = -2, not +-Id
        assert_eq!(classify(&evaluate(&w("ab"), 4).unwrap()), IsometryClass::Parabolic);
        // mu = 1: (ab)^6 = Id in SL2(Z) since ab has order 6
        assert_eq!(classify(&evaluate(&w("ababab"), 1).unwrap()), IsometryClass::Identity);
        assert_eq!(classify(&evaluate(&w("abab"), 2).unwrap()), IsometryClass::Identity);
    }

    #[test]
    fn dilatation_examples() {
        let r = dilatation(&w("ab"), 64, 60).unwrap();
        assert_eq!(r.trace, QuadReal::from_int(-62, 64));
        let ll = r.log_lambda.as_ref().unwrap();
        assert!(ll.within_open(&q(41268, 10000), &q(41269, 10000)));
        assert!(ll.hi() < &q(4127, 1000));
        // 31 + sqrt(960)
        let l = r.lambda.as_ref().unwrap();
        assert!(l.within_open(&q(6198386, 100000), &q(6198387, 100000)));
        assert_eq!(r.char_poly.as_ref().unwrap(), &[q(1, 1), q(-62, 1), q(1, 1)]);
        assert!(r.reciprocal_identity_holds());

        let r = dilatation(&w("ab"), 16, 60).unwrap();
        assert_eq!(r.trace, QuadReal::from_int(-14, 16));
        let ll = r.log_lambda.unwrap();
        // 7 + sqrt(48): log = 2.633915793...
        assert!(ll.within_open(&q(263391, 100000), &q(263392, 100000)));
        assert!(ll.hi() < &q(2634, 1000));

        let r = dilatation(&w("b"), 64, 60).unwrap();
        assert_eq!(r.class, IsometryClass::Parabolic);
        assert!(r.lambda.is_none() && r.log_lambda.is_none());
    }

    #[test]
    fn dilatation_width_meets_precision() {
        for bits in [10u64, 30, 60, 120] {
            let r = dilatation(&w("aBBa"), 2, bits).unwrap();
            assert!(r.lambda.as_ref().unwrap().has_relative_width(bits));
            assert!(r.log_lambda.as_ref().unwrap().has_relative_width(bits));
        }
    }

    #[test]
    fn dilatation_at_non_square_mu() {
        // mu = 2: aB = [[1,sqrt2],[0,1]][[1,0],[sqrt2,1]] = [[3, sqrt2],[sqrt2, 1]], trace 4
        let r = dilatation(&w("aB"), 2, 60).unwrap();
        assert_eq!(r.trace, QuadReal::from_int(4, 2));
        // mu = 3: "aab" has trace 2 - 2*3 = -4; "aaB" has trace 8
        let r = dilatation(&w("abb"), 3, 60).unwrap();
        assert_eq!(r.trace, QuadReal::from_int(-4, 3));
        let r = dilatation(&w("aab"), 2, 60).unwrap();
        assert_eq!(r.trace, QuadReal::from_int(-2, 2));
        assert_eq!(r.class, IsometryClass::Parabolic);
    }

    // det = 1 for every reduced word of length <= 10, built incrementally.
    #[test]
    fn determinant_is_one_exhaustive() {
        fn walk(m: &TwistMatrix, last: Option<Letter>, depth: usize, images: &[TwistMatrix], one: &QuadReal) {
            assert_eq!(&m.determinant(), one);
            if depth == 0 {
                return;
            }
            for l in Letter::ALL {
                if last == Some(l.inverse()) {
                    continue;
                }
                walk(&m.mul(&images[l.index()]), Some(l), depth - 1, images, one);
            }
        }
        for mu in [2u64, 16, 64] {
            let images: Vec<_> = Letter::ALL.iter().map(|&l| TwistMatrix::of_letter(l, mu)).collect();
            walk(&TwistMatrix::identity(mu), None, 10, &images, &QuadReal::one(mu));
        }
    }

    #[test]
    fn trace_symmetries_exhaustive() {
        for mu in [2u64, 64] {
            for len in 1..=8 {
                for word in cyclically_reduced_words(len) {
                    let t = evaluate(&word, mu).unwrap().trace();
                    for k in 1..len {
                        assert_eq!(evaluate(&word.rotate(k), mu).unwrap().trace(), t, "{word} rot {k}");
                    }
                    assert_eq!(evaluate(&word.inverse(), mu).unwrap().trace(), t);
                    assert_eq!(evaluate(&word.swap_generators(), mu).unwrap().trace(), t);
                }
            }
        }
    }

    fn arb_cyc_word() -> impl Strategy<Value = Word> {
        proptest::collection::vec(0usize..4, 1..=8)
            .prop_map(|v| crate::word::reduce(v.into_iter().map(|i| Letter::ALL[i])).cyclic_reduce())
            .prop_filter("nonempty", |w| !w.is_empty())
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(64))]

        #[test]
        fn power_law(word in arb_cyc_word(), mu in prop_oneof![Just(2u64), Just(5), Just(16), Just(64)]) {
            let base = dilatation(&word, mu, 60).unwrap();
            prop_assume!(base.is_pseudo_anosov());
            let ll = base.log_lambda.unwrap();
            for n in 1..=4u32 {
                let r = dilatation(&word.pow(n), mu, 60).unwrap();
                prop_assert!(r.is_pseudo_anosov());
                let lln = r.log_lambda.unwrap();
                let expect = ll.scale(&BigRational::from_integer(n.into()));
                let slack = lln.width() + expect.width();
                let diff = (lln.midpoint() - expect.midpoint()).abs();
                prop_assert!(diff <= slack, "n = {}", n);
            }
        }

        #[test]
        fn lambda_times_inverse_is_one(word in arb_cyc_word(), mu in 1u64..100) {
            let r = dilatation(&word, mu, 60).unwrap();
            prop_assert_eq!(r.lambda.is_some(), r.class == IsometryClass::Hyperbolic);
            if let Some(l) = &r.lambda {
                let one = l * &l.recip();
                prop_assert!(one.contains(&BigRational::one()));
                prop_assert!(r.reciprocal_identity_holds());
            }
        }
    }
}
