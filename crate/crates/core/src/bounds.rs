//! Closed-form bounds on log-dilatations, curve-complex translation
//! lengths and intersection numbers, each returned as a certified interval.

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed};
use serde::ser::SerializeStruct;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::families::IntersectionFamily;
use crate::interval::Interval;
use crate::quad::QuadReal;
use crate::thurston::{dilatation, interval_pair};
use crate::word::{Letter, Word};

/// Working precision for every bound; far below the `1e-12` relative width
/// the results promise.
pub const BOUND_BITS: u64 = 96;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Direction {
    LowerBoundOnLogDilatation,
    UpperBoundOnLogDilatation,
    UpperBoundOnTauC,
    LowerBoundOnIntersection,
}

#[derive(Debug, Clone, PartialEq)]
pub struct BoundResult {
    pub name: &'static str,
    pub value: Interval,
    pub direction: Direction,
    /// Which branch of a case split produced the value, when there is one.
    pub binding_case: Option<String>,
    pub validity_note: String,
}

impl Serialize for BoundResult {
    fn serialize<S: serde::Serializer>(&self, serializer: S) -> std::result::Result<S::Ok, S::Error> {
        let mut s = serializer.serialize_struct("BoundResult", 5)?;
        s.serialize_field("name", self.name)?;
        s.serialize_field("bound", &interval_pair(&self.value))?;
        s.serialize_field("direction", &self.direction)?;
        s.serialize_field("binding_case", &self.binding_case)?;
        s.serialize_field("validity_note", &self.validity_note)?;
        s.end()
    }
}

fn ratio(n: u64, d: u64) -> BigRational {
    BigRational::new(BigInt::from(n), BigInt::from(d))
}

fn ln_ratio(n: u64, d: u64) -> Interval {
    Interval::point(ratio(n, d)).ln(BOUND_BITS)
}

fn invalid(msg: String) -> Error {
    Error::InvalidParameter(msg)
}

/// `log(2 + sqrt 3)`.
pub fn log_two_plus_root_three() -> Interval {
    QuadReal::new(BigRational::from_integer(2.into()), BigRational::one(), 3)
        .to_interval(BOUND_BITS + 8)
        .ln(BOUND_BITS)
}

/// `log(n/2)/j`, valid when `i(c, f^j(c)) >= n >= 3` for every curve `c`.
pub fn surgery_lower(n: u64, j: u32) -> Result<BoundResult> {
    if n < 3 {
        return Err(invalid(format!("surgery bound needs n >= 3, got {n}")));
    }
    if !(1..=2).contains(&j) {
        return Err(invalid(format!("surgery bound takes power j in {{1, 2}}, got {j}")));
    }
    let value = ln_ratio(n, 2).scale(&ratio(1, j as u64));
    Ok(BoundResult {
        name: "surgery_lower",
        value,
        direction: Direction::LowerBoundOnLogDilatation,
        binding_case: None,
        validity_note: format!("pseudo-Anosov f with i(c, f^{j}(c)) >= {n} for every curve c"),
    })
}

/// `log(n/4)` on punctured surfaces, valid when `i(c, f(c)) >= n >= 5`.
pub fn punctured_surgery_lower(n: u64) -> Result<BoundResult> {
    if n < 5 {
        return Err(invalid(format!("punctured surgery bound needs n >= 5, got {n}")));
    }
    Ok(BoundResult {
        name: "punctured_surgery_lower",
        value: ln_ratio(n, 4),
        direction: Direction::LowerBoundOnLogDilatation,
        binding_case: None,
        validity_note: format!("pseudo-Anosov f of a punctured surface with i(c, f(c)) >= {n} for every curve c"),
    })
}

/// The real root of `x^3 + 2x^2 + x - 6`, enclosed once from the Cardano
/// formula and once by exact sign bisection.
#[derive(Debug, Clone, PartialEq)]
pub struct CubicRoot {
    pub cardano: Interval,
    pub bisection: Interval,
}

impl CubicRoot {
    pub fn agree(&self) -> bool {
        self.cardano.overlaps(&self.bisection)
    }

    /// Intersection of the two enclosures.
    pub fn value(&self) -> Interval {
        self.cardano
            .intersect(&self.bisection)
            .expect("cardano and bisection enclosures are disjoint")
    }
}

/// `-2/3 + (cbrt(82 - 9 sqrt 83) + cbrt(82 + 9 sqrt 83)) / 3`.
pub fn cardano_root(bits: u64) -> Interval {
    let mut work = bits + 8;
    loop {
        let root83 = Interval::from_int(83).sqrt(work);
        let nine = BigRational::from_integer(9.into());
        let eighty_two = Interval::from_int(82);
        let minus = (&eighty_two - &root83.scale(&nine)).cbrt(work);
        let plus = (&eighty_two + &root83.scale(&nine)).cbrt(work);
        let value = &(&minus + &plus).scale(&ratio(1, 3)) - &Interval::from_ratio(2, 3);
        if value.width() * BigRational::from_integer(crate::interval::pow2(bits)) <= BigRational::one() {
            return value;
        }
        work += 16;
    }
}

/// Bisection on `[1, 2]` with exact rational sign tests.
/// Sign-bisection on `[1, 2]` over dyadics `m / 2^bits`, evaluating
/// `2^{3 bits} p(m / 2^bits)` in integers.
pub fn bisection_root(bits: u64) -> Interval {
    let one = crate::interval::pow2(bits);
    let scaled_cubic = |m: &BigInt| -> BigInt {
        let m2 = m * m;
        &m2 * m + ((&m2 << 1) * &one) + m * &one * &one - BigInt::from(6) * &one * &one * &one
    };
    let mut lo = one.clone();
    let mut hi = &one << 1;
    debug_assert!(scaled_cubic(&lo).is_negative() && scaled_cubic(&hi).is_positive());
    let dyadic = |m: BigInt| BigRational::new(m, one.clone());
    while &hi - &lo > BigInt::one() {
        let mid: BigInt = (&lo + &hi) >> 1;
        match scaled_cubic(&mid).sign() {
            num_bigint::Sign::Minus => lo = mid,
            num_bigint::Sign::Plus => hi = mid,
            num_bigint::Sign::NoSign => return Interval::point(dyadic(mid)),
        }
    }
    Interval::new(dyadic(lo), dyadic(hi))
}

pub fn torelli_cubic_root(bits: u64) -> Result<CubicRoot> {
    if bits == 0 {
        return Err(invalid("precision must be >= 1 bit".into()));
    }
    Ok(CubicRoot {
        cardano: cardano_root(bits),
        bisection: bisection_root(bits),
    })
}

/// Case 1 of the Torelli lower bound: `lambda > sqrt 2`.
pub fn torelli_case_one() -> BoundResult {
    BoundResult {
        name: "torelli_case_one",
        value: ln_ratio(2, 1).scale(&ratio(1, 2)),
        direction: Direction::LowerBoundOnLogDilatation,
        binding_case: Some("case 1: lambda > sqrt(2)".into()),
        validity_note: "pseudo-Anosov f in the Torelli group whose shortest curve is nonseparating with i(c, f^2(c)) >= 4".into(),
    }
}

/// Case 2 of the Torelli lower bound: `lambda^3 + 2 lambda^2 + lambda - 6 > 0`.
pub fn torelli_case_two() -> BoundResult {
    let root = torelli_cubic_root(BOUND_BITS + 8).expect("positive precision").value();
    BoundResult {
        name: "torelli_case_two",
        value: root.ln(BOUND_BITS),
        direction: Direction::LowerBoundOnLogDilatation,
        binding_case: Some("case 2: lambda^3 + 2 lambda^2 + lambda - 6 > 0".into()),
        validity_note: "pseudo-Anosov f in the Torelli group whose shortest curve c has i(c, f(c)) = 2 up to the separating-curve argument".into(),
    }
}

/// Enclosure of `min(a, b)` for enclosures of `a` and `b`; the case label
/// follows the certainly smaller one.
fn min_case(a: BoundResult, b: BoundResult) -> (Interval, Option<String>) {
    let lo = a.value.lo().min(b.value.lo()).clone();
    let hi = a.value.hi().min(b.value.hi()).clone();
    let case = if a.value.certainly_less(&b.value) {
        a.binding_case
    } else if b.value.certainly_less(&a.value) {
        b.binding_case
    } else {
        Some("undecided".into())
    };
    (Interval::new(lo, hi), case)
}

/// `min(log sqrt 2, log r)` with `r` the cubic root.
pub fn torelli_lower() -> BoundResult {
    let (value, binding_case) = min_case(torelli_case_one(), torelli_case_two());
    BoundResult {
        name: "torelli_lower",
        value,
        direction: Direction::LowerBoundOnLogDilatation,
        binding_case,
        validity_note: "every pseudo-Anosov element of the Torelli group of a closed surface of genus >= 2".into(),
    }
}

/// Level-`r` congruence subgroups. For `r >= 4` the Torelli argument
/// applies verbatim; for `r = 3` the first case uses `f^2` and the surgery
/// bound with `n = 3`.
pub fn congruence_lower(r: u64) -> Result<BoundResult> {
    if r < 3 {
        return Err(invalid(format!("congruence bound needs level r >= 3, got {r}")));
    }
    let note = format!("every pseudo-Anosov element of the level-{r} congruence subgroup, genus >= 2");
    if r >= 4 {
        return Ok(BoundResult {
            name: "congruence_lower",
            validity_note: note,
            ..torelli_lower()
        });
    }
    let mut case_one = surgery_lower(3, 2)?;
    case_one.binding_case = Some("case 1: i(c, f^2(c)) >= 3, log(3/2)/2".into());
    let (value, binding_case) = min_case(case_one, torelli_case_two());
    Ok(BoundResult {
        name: "congruence_lower",
        value,
        direction: Direction::LowerBoundOnLogDilatation,
        binding_case,
        validity_note: note,
    })
}

/// `log(p/4)` for the Brunnian subgroup with `p >= 5` punctures.
pub fn brunnian_lower(p: u64) -> Result<BoundResult> {
    if p < 5 {
        return Err(invalid(format!("brunnian bound needs p >= 5 punctures, got {p}")));
    }
    Ok(BoundResult {
        name: "brunnian_lower",
        value: ln_ratio(p, 4),
        direction: Direction::LowerBoundOnLogDilatation,
        binding_case: None,
        validity_note: format!("every pseudo-Anosov Brunnian mapping class of a surface with {p} punctures"),
    })
}

/// Filling curves on a closed genus-`g` surface meet at least `2g - 1` times.
pub fn filling_intersection_lower(g: u64) -> Result<u64> {
    if g < 2 {
        return Err(invalid(format!("filling bound needs genus >= 2, got {g}")));
    }
    Ok(2 * g - 1)
}

fn ln_g_minus_half(g: u64) -> Interval {
    ln_ratio(2 * g - 1, 2)
}

/// `tau_C(f) < 4 log(lambda) / log(g - 1/2)`, valid when
/// `lambda(f) <= g - 1/2`. The hypothesis is checked against the enclosure;
/// an input that straddles the threshold is rejected as uncertified.
pub fn tau_cc_upper(g: u64, log_lambda: &Interval) -> Result<BoundResult> {
    if g < 2 {
        return Err(invalid(format!("curve complex bound needs genus >= 2, got {g}")));
    }
    if !log_lambda.lo().is_positive() {
        return Err(invalid("log dilatation must be positive".into()));
    }
    let threshold = ln_g_minus_half(g);
    if !log_lambda.certainly_less(&threshold) && log_lambda.hi() > threshold.lo() {
        return Err(Error::Hypothesis(format!(
            "lambda must be <= g - 1/2 = {}/2 (log {}), got log lambda in {}",
            2 * g - 1,
            threshold,
            log_lambda
        )));
    }
    let value = log_lambda.scale(&ratio(4, 1)).div(&threshold);
    Ok(BoundResult {
        name: "tau_cc_upper",
        value,
        direction: Direction::UpperBoundOnTauC,
        binding_case: None,
        validity_note: format!("pseudo-Anosov f on the closed surface of genus {g} with lambda(f) <= g - 1/2"),
    })
}

/// `4 log(2 + sqrt 3) / (g log(g - 1/2))` for `g >= 3`.
pub fn tau_cc_infs_upper(g: u64) -> Result<BoundResult> {
    if g < 3 {
        return Err(invalid(format!("curve complex infimum bound needs genus >= 3, got {g}")));
    }
    let denom = ln_g_minus_half(g).scale(&ratio(g, 1));
    let value = log_two_plus_root_three().scale(&ratio(4, 1)).div(&denom);
    Ok(BoundResult {
        name: "tau_cc_infs_upper",
        value,
        direction: Direction::UpperBoundOnTauC,
        binding_case: None,
        validity_note: format!("infimum of tau_C over pseudo-Anosov classes, genus {g}"),
    })
}

/// `log(2 + sqrt 3)/g`, the smallest known log-dilatation in genus `g`.
pub fn hk_upper(g: u64) -> Result<BoundResult> {
    if g < 2 {
        return Err(invalid(format!("genus must be >= 2, got {g}")));
    }
    Ok(BoundResult {
        name: "hk_upper",
        value: log_two_plus_root_three().scale(&ratio(1, g)),
        direction: Direction::UpperBoundOnLogDilatation,
        binding_case: None,
        validity_note: format!("minimal log-dilatation on the closed surface of genus {g}"),
    })
}

/// `m(k) = log(B(k)/2)` for a caller-supplied intersection bound `B(k) >= 3`.
pub fn m_of_k(b_value: u64) -> Result<BoundResult> {
    if b_value < 3 {
        return Err(invalid(format!("B(k) must be >= 3, got {b_value}")));
    }
    Ok(BoundResult {
        name: "m_of_k",
        value: ln_ratio(b_value, 2),
        direction: Direction::LowerBoundOnLogDilatation,
        binding_case: None,
        validity_note: format!("pseudo-Anosov f in N_k with i(c, f(c)) >= B(k) = {b_value} for every curve c"),
    })
}

/// Upper bound from the product of the two multitwists of a built-in
/// family, evaluated through the twist representation.
pub fn multitwist_upper(family: &IntersectionFamily) -> Result<BoundResult> {
    let mu = family
        .mu()
        .ok_or_else(|| invalid("custom families carry no radicand".into()))?;
    let word = Word::from_reduced(vec![Letter::A, Letter::B]);
    let report = dilatation(&word, mu, BOUND_BITS)?;
    let value = report
        .log_lambda
        .ok_or_else(|| invalid(format!("ab is not hyperbolic at mu = {mu}")))?;
    let genus = family.genus.map_or_else(String::new, |g| format!(", genus {g}"));
    Ok(BoundResult {
        name: "multitwist_upper",
        value,
        direction: Direction::UpperBoundOnLogDilatation,
        binding_case: None,
        validity_note: format!("log dilatation of T_A T_B for the {} family (mu = {mu}{genus})", family.kind),
    })
}
