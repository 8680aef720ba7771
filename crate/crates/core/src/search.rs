//! Exhaustive search for the smallest dilatation among short words in the
//! two multitwists, and the table of nested-commutator dilatations.

use std::cmp::Ordering;

use rayon::prelude::*;
use serde::ser::SerializeStruct;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::interval::Interval;
use crate::quad::QuadReal;
use crate::thurston::{classify, dilatation, evaluate, interval_pair, DilatationReport, IsometryClass};
use crate::word::{cyclically_reduced_words, nested_commutator, Word};

/// Every word in the orbit of `w` under rotation, inversion and the
/// generator swap.
pub fn symmetry_orbit(w: &Word) -> Vec<Word> {
    let mut out = Vec::with_capacity(4 * w.len().max(1));
    for base in [w.clone(), w.swap_generators()] {
        for v in [base.inverse(), base] {
            for k in 0..v.len().max(1) {
                out.push(v.rotate(k));
            }
        }
    }
    out
}

/// The lexicographically least member of the orbit of `w`.
pub fn orbit_representative(w: &Word) -> Word {
    symmetry_orbit(w).into_iter().min().expect("orbit is never empty")
}

fn is_representative(w: &Word) -> bool {
    symmetry_orbit(w).iter().all(|v| w <= v)
}

/// One representative per orbit of cyclically reduced words of length at
/// most `max_length`, ordered by length then letters.
pub fn enumerate_classes(max_length: usize) -> Result<Vec<Word>> {
    if max_length == 0 {
        return Err(Error::InvalidParameter("max_length must be >= 1".into()));
    }
    Ok((1..=max_length)
        .flat_map(|len| {
            cyclically_reduced_words(len)
                .into_par_iter()
                .filter(is_representative)
                .collect::<Vec<_>>()
        })
        .collect())
}

#[derive(Debug, Clone)]
pub struct SearchReport {
    pub mu: u64,
    pub max_length: usize,
    pub classes_examined: usize,
    pub hyperbolic_classes: usize,
    pub minimum: DilatationReport,
    /// Every representative attaining the minimal `|trace|`, ordered by
    /// length then letters.
    pub all_minima: Vec<Word>,
}

impl SearchReport {
    pub fn min_abs_trace(&self) -> QuadReal {
        self.minimum.trace.abs()
    }
}

impl Serialize for SearchReport {
    fn serialize<S: serde::Serializer>(&self, serializer: S) -> std::result::Result<S::Ok, S::Error> {
        let mut s = serializer.serialize_struct("SearchReport", 7)?;
        s.serialize_field("mu", &self.mu)?;
        s.serialize_field("max_length", &self.max_length)?;
        s.serialize_field("classes_examined", &self.classes_examined)?;
        s.serialize_field("hyperbolic_classes", &self.hyperbolic_classes)?;
        s.serialize_field(
            "minimality",
            &format!("minimal among classes of length <= {}", self.max_length),
        )?;
        s.serialize_field("minimum", &self.minimum)?;
        s.serialize_field("all_minima", &self.all_minima)?;
        s.end()
    }
}

/// Running minimum over hyperbolic classes.
#[derive(Debug, Clone)]
struct Best {
    hyperbolic: usize,
    minimum: Option<(QuadReal, Vec<Word>)>,
}

impl Best {
    fn empty() -> Self {
        Best {
            hyperbolic: 0,
            minimum: None,
        }
    }

    fn single(w: &Word, mu: u64) -> Result<Self> {
        let m = evaluate(w, mu)?;
        if classify(&m) != IsometryClass::Hyperbolic {
            return Ok(Best::empty());
        }
        Ok(Best {
            hyperbolic: 1,
            minimum: Some((m.trace().abs(), vec![w.clone()])),
        })
    }

    fn merge(self, other: Best) -> Best {
        let hyperbolic = self.hyperbolic + other.hyperbolic;
        let minimum = match (self.minimum, other.minimum) {
            (None, m) | (m, None) => m,
            (Some((t1, mut w1)), Some((t2, w2))) => match t1.compare(&t2).expect("same radicand") {
                Ordering::Less => Some((t1, w1)),
                Ordering::Greater => Some((t2, w2)),
                Ordering::Equal => {
                    w1.extend(w2);
                    w1.sort_by(|a, b| a.len().cmp(&b.len()).then_with(|| a.cmp(b)));
                    Some((t1, w1))
                }
            },
        };
        Best { hyperbolic, minimum }
    }
}

fn search_in_pool(classes: &[Word], mu: u64) -> Result<Best> {
    classes
        .par_iter()
        .map(|w| Best::single(w, mu))
        .try_reduce(Best::empty, |a, b| Ok(a.merge(b)))
}

/// Minimizes `|trace|` over hyperbolic classes of length at most
/// `max_length`. `jobs` caps the worker count; results do not depend on it.
pub fn min_dilatation_search(max_length: usize, mu: u64, jobs: Option<usize>, precision_bits: u64) -> Result<SearchReport> {
    if max_length < 2 {
        return Err(Error::InvalidParameter(format!("max_length must be >= 2, got {max_length}")));
    }
    if mu == 0 {
        return Err(Error::InvalidParameter("mu must be >= 1".into()));
    }
    let run = || -> Result<(usize, Best)> {
        let classes = enumerate_classes(max_length)?;
        let best = search_in_pool(&classes, mu)?;
        Ok((classes.len(), best))
    };
    let (classes_examined, best) = match jobs {
        Some(n) => rayon::ThreadPoolBuilder::new()
            .num_threads(n.max(1))
            .build()
            .map_err(|e| Error::InvalidParameter(e.to_string()))?
            .install(run)?,
        None => run()?,
    };
    let Some((_, all_minima)) = best.minimum else {
        return Err(Error::NoHyperbolicClass { max_length, mu });
    };
    let minimum = dilatation(&all_minima[0], mu, precision_bits)?;
    Ok(SearchReport {
        mu,
        max_length,
        classes_examined,
        hyperbolic_classes: best.hyperbolic,
        minimum,
        all_minima,
    })
}

/// One row of the lower-central-series table: the nested commutator of
/// depth `k` and its certified log-dilatation.
#[derive(Debug, Clone)]
pub struct LcsRow {
    pub k: u32,
    pub word: Word,
    pub word_length: usize,
    pub trace: QuadReal,
    pub class: IsometryClass,
    pub log_dilatation: Option<Interval>,
}

impl Serialize for LcsRow {
    fn serialize<S: serde::Serializer>(&self, serializer: S) -> std::result::Result<S::Ok, S::Error> {
        let mut s = serializer.serialize_struct("LcsRow", 6)?;
        s.serialize_field("k", &self.k)?;
        s.serialize_field("word", &self.word)?;
        s.serialize_field("word_length", &self.word_length)?;
        s.serialize_field("trace", &self.trace)?;
        s.serialize_field("class", &self.class)?;
        s.serialize_field("log_lambda", &self.log_dilatation.as_ref().map(interval_pair))?;
        s.end()
    }
}

pub fn lcs_table(k_max: u32, mu: u64, precision_bits: u64) -> Result<Vec<LcsRow>> {
    if k_max == 0 {
        return Err(Error::InvalidParameter("k_max must be >= 1".into()));
    }
    (1..=k_max)
        .map(|k| {
            let word = nested_commutator(k)?;
            let report = dilatation(&word, mu, precision_bits)?;
            Ok(LcsRow {
                k,
                word_length: word.len(),
                word,
                trace: report.trace,
                class: report.class,
                log_dilatation: report.log_lambda,
            })
        })
        .collect()
}

pub fn lcs_csv(rows: &[LcsRow]) -> String {
    let mut out = String::from("k,word,length,trace,log_lambda_lo,log_lambda_hi\n");
    for r in rows {
        let [lo, hi] = r
            .log_dilatation
            .as_ref()
            .map(interval_pair)
            .unwrap_or_else(|| [String::new(), String::new()]);
        out.push_str(&format!("{},{},{},{},{},{}\n", r.k, r.word, r.word_length, r.trace, lo, hi));
    }
    out
}
