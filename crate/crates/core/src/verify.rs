//! The table behind `verify-paper`: every published constant recomputed
//! and checked against its printed bracket.

use std::time::{Duration, Instant};

use num_rational::BigRational;
use num_traits::{One, Zero};
use serde::Serialize;

use crate::bounds::{
    congruence_lower, punctured_surgery_lower, brunnian_lower, surgery_lower, tau_cc_infs_upper, tau_cc_upper,
    torelli_cubic_root, BOUND_BITS,
};
use crate::error::Error;
use crate::families::{braid_family, collatz_wielandt, nnt, pf_eigenvalue, torelli_family, IntMatrix};
use crate::interval::{parse_rational, Interval};
use crate::johnson::{coset_equal, lantern_check, quotient_rank, tau_bounding_pair, wedge3, HomologyClass};
use crate::quad::QuadReal;
use crate::search::{lcs_table, min_dilatation_search, orbit_representative, symmetry_orbit};
use crate::thurston::{dilatation, evaluate, IsometryClass};
use crate::word::{cyclically_reduced_words, reduce, Letter, Word};

#[derive(Debug, Clone, Serialize)]
pub struct Check {
    pub id: u32,
    pub title: &'static str,
    pub passed: bool,
    pub detail: String,
    #[serde(skip)]
    pub elapsed: Duration,
}

fn q(s: &str) -> BigRational {
    parse_rational(s).expect("literal rational")
}

fn within(iv: &Interval, lo: &str, hi: &str) -> bool {
    iv.within_open(&q(lo), &q(hi))
}

fn width_at_most(iv: &Interval, bound: &str) -> bool {
    iv.width() <= q(bound)
}

fn word(s: &str) -> Word {
    s.parse().expect("literal word")
}

type Outcome = (bool, String);

fn trace_identity() -> Outcome {
    let m = evaluate(&word("ab"), 64).expect("mu > 0");
    let ok = m.trace() == QuadReal::from_int(-62, 64) && m.determinant() == QuadReal::from_int(1, 64);
    (ok, format!("trace {}, det {}", m.trace(), m.determinant()))
}

fn upper_bound(mu: u64, trace: i64, lo: &str, hi: &str, cap: &str) -> Outcome {
    let r = dilatation(&word("ab"), mu, 60).expect("valid word");
    let Some(ll) = r.log_lambda.as_ref() else {
        return (false, "not hyperbolic".into());
    };
    let poly_ok = r
        .char_poly
        .as_ref()
        .is_some_and(|c| c[0].is_one() && c[1] == BigRational::from_integer((-trace.abs()).into()) && c[2].is_one());
    let ok = r.trace == QuadReal::from_int(trace, mu)
        && within(ll, lo, hi)
        && ll.hi() < &q(cap)
        && width_at_most(ll, "1e-9")
        && poly_ok;
    (ok, format!("trace {}, log lambda {}", r.trace, ll))
}

fn pf_certificate() -> Outcome {
    let mut bad = Vec::new();
    let tol = q("1e-12");
    for g in 2..=64u32 {
        for (family, expect) in [(torelli_family(g), 64), (braid_family(g), 16)] {
            let f = family.expect("valid genus");
            match pf_eigenvalue(&nnt(&f), &tol) {
                Ok(pf) if pf.exact_integer() == Some(expect) && pf.eigenvector.iter().all(One::is_one) => {}
                _ => bad.push(format!("{} g={g}", f.kind)),
            }
        }
    }
    (bad.is_empty(), if bad.is_empty() { "torelli 64 and braid 16 for g in 2..64".into() } else { bad.join(", ") })
}

fn torelli_lower_bracket() -> Outcome {
    let root = torelli_cubic_root(40).expect("positive precision");
    let log = root.value().ln(BOUND_BITS);
    let ok = within(&root.cardano, "1.21878", "1.21879")
        && within(&root.bisection, "1.21878", "1.21879")
        && root.agree()
        && width_at_most(&root.value(), "1e-9")
        && within(&log, "0.19785", "0.19786")
        && log.lo() > &q("0.197");
    (ok, format!("root {}, log {}", root.value(), log))
}

fn johnson_congruence() -> Outcome {
    let (Ok(k), Ok(p), Ok(c)) = (surgery_lower(4, 1), surgery_lower(3, 2), congruence_lower(3)) else {
        return (false, "bound rejected its parameters".into());
    };
    let ln2 = Interval::from_int(2).ln(BOUND_BITS);
    let ok = k.value.overlaps(&ln2)
        && within(&k.value, "0.693", "0.694")
        && within(&p.value, "0.20273", "0.20274")
        && c.value.lo() > &q("0.197");
    (ok, format!("log 2 = {}, log(3/2)/2 = {}, level 3 = {}", k.value, p.value, c.value))
}

fn brunnian() -> Outcome {
    let mut ok = true;
    for p in 5..=100u64 {
        let (Ok(b), Ok(s)) = (brunnian_lower(p), punctured_surgery_lower(p)) else {
            return (false, format!("p = {p} rejected"));
        };
        let exact = Interval::point(BigRational::new(p.into(), 4.into())).ln(BOUND_BITS);
        ok &= b.value == s.value && b.value.overlaps(&exact);
    }
    let five = brunnian_lower(5).expect("p = 5").value;
    ok &= within(&five, "0.22314", "0.22315");
    (ok, format!("p = 5 gives {five}"))
}

fn curve_complex() -> Outcome {
    let infs = tau_cc_infs_upper(3).expect("g = 3");
    let rejected = matches!(tau_cc_upper(2, &Interval::from_int(1)), Err(Error::Hypothesis(_)));
    let ok = within(&infs.value, "1.91624", "1.91625") && rejected;
    (
        ok,
        format!(
            "g = 3 infimum bound {}, hypothesis enforced at g = 2: {rejected}",
            infs.value
        ),
    )
}

/// All cyclically reduced words up to `max_length` attaining the least
/// hyperbolic `|trace|`, by direct integer products.
fn brute_force_minima(max_length: usize, root: i128) -> (i128, Vec<Word>) {
    let mut best = i128::MAX;
    let mut words = Vec::new();
    for len in 1..=max_length {
        for w in cyclically_reduced_words(len) {
            let mut m = [[1i128, 0], [0, 1]];
            for l in w.letters() {
                let g = match l {
                    Letter::A => [[1, root], [0, 1]],
                    Letter::AInv => [[1, -root], [0, 1]],
                    Letter::B => [[1, 0], [-root, 1]],
                    Letter::BInv => [[1, 0], [root, 1]],
                };
                m = [
                    [m[0][0] * g[0][0] + m[0][1] * g[1][0], m[0][0] * g[0][1] + m[0][1] * g[1][1]],
                    [m[1][0] * g[0][0] + m[1][1] * g[1][0], m[1][0] * g[0][1] + m[1][1] * g[1][1]],
                ];
            }
            let t = (m[0][0] + m[1][1]).abs();
            if t > 2 && t < best {
                best = t;
                words.clear();
            }
            if t == best {
                words.push(w);
            }
        }
    }
    (best, words)
}

fn minimality(jobs: Option<usize>) -> Outcome {
    let (Ok(report), Ok(single)) = (min_dilatation_search(8, 64, jobs, 60), min_dilatation_search(8, 64, Some(1), 60))
    else {
        return (false, "search failed".into());
    };
    let (t, words) = brute_force_minima(8, 8);
    let brute_unique = words.iter().all(|w| orbit_representative(w) == word("ab"));
    let same = serde_json::to_string(&report).ok() == serde_json::to_string(&single).ok();
    let ok = report.all_minima == vec![word("ab")]
        && report.min_abs_trace() == QuadReal::from_int(t as i64, 64)
        && t == 62
        && brute_unique
        && same;
    (
        ok,
        format!(
            "{} classes, minimum {:?} with |trace| {}; brute force {} words all in the ab orbit: {brute_unique}",
            report.classes_examined,
            report.all_minima.iter().map(ToString::to_string).collect::<Vec<_>>(),
            report.min_abs_trace(),
            words.len()
        ),
    )
}

fn lcs() -> Outcome {
    let Ok(rows) = lcs_table(8, 64, 60) else {
        return (false, "table failed".into());
    };
    let ok = rows.len() == 8
        && rows.iter().all(|r| {
            r.word_length == 1 << r.k
                && r.class == IsometryClass::Hyperbolic
                && r.log_dilatation.as_ref().is_some_and(|l| l.lo() > &BigRational::zero())
        })
        && rows[1].trace == QuadReal::from_int(4098, 64);
    let last = rows
        .last()
        .and_then(|r| r.log_dilatation.as_ref())
        .map_or_else(|| "missing".into(), ToString::to_string);
    (ok, format!("k = 2 trace {}, k = 8 log lambda {last}", rows[1].trace))
}

fn johnson_tau() -> Outcome {
    let lantern = lantern_check(3).unwrap_or(false) && lantern_check(4).unwrap_or(false);
    let ranks_ok = (2..=4usize).all(|g| {
        let n = 2 * g;
        quotient_rank(g).ok() == Some(n * (n - 1) * (n - 2) / 6 - n)
    });
    let g = 3;
    let (x, y) = (|i| HomologyClass::x(g, i), |i| HomologyClass::y(g, i));
    let base = tau_bounding_pair(g, &[(x(2), y(2)), (x(3), y(3))], &x(1));
    let mixed = tau_bounding_pair(g, &[(x(2).add(&x(3)), y(2)), (x(3), y(3).add(&y(2).scale(-1)))], &x(1));
    let basis_ok = match (base, mixed) {
        (Ok(a), Ok(b)) => coset_equal(&a, &b).unwrap_or(false),
        _ => false,
    };
    (
        lantern && ranks_ok && basis_ok,
        format!("lantern {lantern}, quotient ranks {ranks_ok}, basis independence {basis_ok}"),
    )
}

/// Fast versions of the module invariants; the unit tests run the full
/// exhaustive and randomized sweeps.
pub fn property_spot_checks() -> (bool, String) {
    let mut failures = Vec::new();

    // free reduction is idempotent on every letter sequence of length 8
    let ok = (0..4u32.pow(8)).all(|code| {
        let raw: Vec<Letter> = (0..8).map(|i| Letter::ALL[((code >> (2 * i)) & 3) as usize]).collect();
        let once = reduce(raw);
        reduce(once.letters().iter().copied()) == once
    });
    if !ok {
        failures.push("reduce idempotence");
    }

    // det = 1 and trace invariance under the orbit symmetries
    for mu in [2u64, 64] {
        for len in 1..=6 {
            for w in cyclically_reduced_words(len) {
                let m = evaluate(&w, mu).expect("mu > 0");
                if m.determinant() != QuadReal::from_int(1, mu) {
                    failures.push("determinant");
                }
                let t = m.trace();
                if symmetry_orbit(&w).iter().any(|v| evaluate(v, mu).expect("mu > 0").trace() != t) {
                    failures.push("trace symmetry");
                }
            }
        }
    }

    // Collatz-Wielandt brackets contain the eigenvalue (5 + sqrt 33)/2
    let m: IntMatrix = vec![vec![1, 2], vec![3, 4]];
    let exact = QuadReal::new(q("5/2"), q("1/2"), 33).to_interval(80);
    for v in [[1, 1], [2, 3], [1, 5], [7, 2]] {
        let (lo, hi) = collatz_wielandt(&m, &v.map(Into::into));
        if !(Interval::new(lo, hi).contains_interval(&exact)) {
            failures.push("collatz-wielandt");
        }
    }

    // wedge alternation on a fixed triple
    let g = 3;
    let h1 = HomologyClass::parse("x1+2y2-x3", g).expect("class");
    let h2 = HomologyClass::parse("y1-3x2+y3", g).expect("class");
    let h3 = HomologyClass::parse("x2+y2+2x3", g).expect("class");
    let base = wedge3(&h1, &h2, &h3).expect("same genus");
    if wedge3(&h2, &h1, &h3).expect("same genus") != base.neg() || wedge3(&h2, &h3, &h1).expect("same genus") != base {
        failures.push("wedge alternation");
    }

    failures.dedup();
    (
        failures.is_empty(),
        if failures.is_empty() { "spot checks pass".into() } else { failures.join(", ") },
    )
}

fn timed(id: u32, title: &'static str, f: impl FnOnce() -> Outcome) -> Check {
    let start = Instant::now();
    let (passed, detail) = f();
    Check {
        id,
        title,
        passed,
        detail,
        elapsed: start.elapsed(),
    }
}

/// Runs every row. `jobs` is forwarded to the exhaustive search.
pub fn paper_checks(jobs: Option<usize>) -> Vec<Check> {
    vec![
        timed(1, "trace of T_A T_B at mu = 64 is -62", trace_identity),
        timed(2, "Torelli upper bound log lambda < 4.127", || upper_bound(64, -62, "4.1268", "4.1269", "4.127")),
        timed(3, "braid upper bound log lambda < 2.634", || upper_bound(16, -14, "2.6339", "2.6340", "2.634")),
        timed(4, "Perron-Frobenius eigenvalues 64 and 16", pf_certificate),
        timed(5, "Torelli lower bound .197 from the cubic root", torelli_lower_bracket),
        timed(6, "Johnson .693 and congruence .202 constants", johnson_congruence),
        timed(7, "Brunnian and punctured bound log(p/4)", brunnian),
        timed(8, "curve complex translation length bounds", curve_complex),
        timed(9, "ab is the minimal class up to length 8", || minimality(jobs)),
        timed(10, "lower central series table", lcs),
        timed(11, "Johnson homomorphism of bounding pairs", johnson_tau),
        timed(12, "module invariants", property_spot_checks),
    ]
}

pub fn checks_text(checks: &[Check]) -> String {
    let mut out = String::new();
    for c in checks {
        let status = if c.passed { "PASS" } else { "FAIL" };
        out.push_str(&format!("{:>2}  {status}  {}: {}\n", c.id, c.title, c.detail));
    }
    let passed = checks.iter().filter(|c| c.passed).count();
    out.push_str(&format!("{passed}/{} rows pass\n", checks.len()));
    out
}

pub fn checks_csv(checks: &[Check]) -> String {
    let mut out = String::from("id,status,title\n");
    for c in checks {
        out.push_str(&format!("{},{},{}\n", c.id, if c.passed { "pass" } else { "fail" }, c.title));
    }
    out
}
