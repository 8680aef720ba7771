//! Intersection matrices of the genus-parametrized multicurve pairs and
//! Perron-Frobenius certificates for `N N^t`.

use std::fmt;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive};
use serde::Serialize;

use crate::error::{Error, Result};

pub type IntMatrix = Vec<Vec<i64>>;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum FamilyKind {
    /// Separating curves on the closed surface of genus g (lifts of the
    /// sphere curves through the hyperelliptic cover).
    TorelliSeparating,
    /// The sphere curves themselves, read as a pure braid on 2g+1 strands.
    BraidSphere,
    Custom,
}

impl fmt::Display for FamilyKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            FamilyKind::TorelliSeparating => "torelli",
            FamilyKind::BraidSphere => "braid",
            FamilyKind::Custom => "custom",
        })
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct IntersectionFamily {
    pub kind: FamilyKind,
    /// Genus for the built-in families.
    pub genus: Option<u32>,
    /// `N[i][j]` is the intersection number of `a_i` and `b_j`.
    pub matrix: IntMatrix,
}

impl IntersectionFamily {
    pub fn size(&self) -> usize {
        self.matrix.len()
    }

    /// The radicand fed to the twist representation: 64 for the Torelli
    /// family and 16 for the braid family.
    pub fn mu(&self) -> Option<u64> {
        match self.kind {
            FamilyKind::TorelliSeparating => Some(64),
            FamilyKind::BraidSphere => Some(16),
            FamilyKind::Custom => None,
        }
    }

    pub fn custom(matrix: IntMatrix) -> Result<Self> {
        check_square(&matrix)?;
        if matrix.iter().flatten().any(|&x| x < 0) {
            return Err(Error::NegativeEntry);
        }
        Ok(IntersectionFamily {
            kind: FamilyKind::Custom,
            genus: None,
            matrix,
        })
    }
}

/// Nonzero pattern `N[i][i] = N[i][i-1] = weight` with indices mod
/// `m = ceil(g/2)`; for `m = 1` the two entries coincide.
fn cyclic_pattern(g: u32, weight: i64) -> IntMatrix {
    let m = g.div_ceil(2) as usize;
    let mut n = vec![vec![0i64; m]; m];
    for (i, row) in n.iter_mut().enumerate() {
        row[i] += weight;
        row[(i + m - 1) % m] += weight;
    }
    n
}

pub fn torelli_family(g: u32) -> Result<IntersectionFamily> {
    if g < 2 {
        return Err(Error::InvalidParameter(format!("torelli family needs genus >= 2, got {g}")));
    }
    Ok(IntersectionFamily {
        kind: FamilyKind::TorelliSeparating,
        genus: Some(g),
        matrix: cyclic_pattern(g, 4),
    })
}

/// Same curves on the sphere before the double cover: all intersection
/// numbers halve.
pub fn braid_family(g: u32) -> Result<IntersectionFamily> {
    if g < 1 {
        return Err(Error::InvalidParameter("braid family needs genus >= 1".into()));
    }
    Ok(IntersectionFamily {
        kind: FamilyKind::BraidSphere,
        genus: Some(g),
        matrix: cyclic_pattern(g, 2),
    })
}

pub fn nnt(f: &IntersectionFamily) -> IntMatrix {
    let n = &f.matrix;
    let m = n.len();
    let cols = n.first().map_or(0, Vec::len);
    (0..m)
        .map(|i| (0..m).map(|j| (0..cols).map(|k| n[i][k] * n[j][k]).sum()).collect())
        .collect()
}

fn check_square(m: &IntMatrix) -> Result<()> {
    let rows = m.len();
    for row in m {
        if row.len() != rows {
            return Err(Error::NotSquare { rows, cols: row.len() });
        }
    }
    if rows == 0 {
        return Err(Error::NotSquare { rows: 0, cols: 0 });
    }
    Ok(())
}

/// Strong connectivity of the support graph.
pub fn is_irreducible(m: &IntMatrix) -> bool {
    let n = m.len();
    let reach = |forward: bool| {
        let mut seen = vec![false; n];
        let mut stack = vec![0usize];
        seen[0] = true;
        while let Some(i) = stack.pop() {
            for j in 0..n {
                let edge = if forward { m[i][j] } else { m[j][i] };
                if edge != 0 && !seen[j] {
                    seen[j] = true;
                    stack.push(j);
                }
            }
        }
        seen.into_iter().all(|s| s)
    };
    n > 0 && reach(true) && reach(false)
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct PfResult {
    #[serde(serialize_with = "ser_rational")]
    pub value_lower: BigRational,
    #[serde(serialize_with = "ser_rational")]
    pub value_upper: BigRational,
    #[serde(serialize_with = "ser_rational_vec")]
    pub eigenvector: Vec<BigRational>,
    pub exact: bool,
    pub iterations: usize,
}

fn ser_rational<S: serde::Serializer>(q: &BigRational, s: S) -> std::result::Result<S::Ok, S::Error> {
    s.collect_str(q)
}

fn ser_rational_vec<S: serde::Serializer>(v: &[BigRational], s: S) -> std::result::Result<S::Ok, S::Error> {
    s.collect_seq(v.iter().map(|q| q.to_string()))
}

impl PfResult {
    pub fn width(&self) -> BigRational {
        &self.value_upper - &self.value_lower
    }

    /// The eigenvalue when it is an exact integer.
    pub fn exact_integer(&self) -> Option<i64> {
        (self.exact && self.value_lower.is_integer())
            .then(|| self.value_lower.to_integer().to_i64())
            .flatten()
    }
}

/// Collatz-Wielandt bracket `[min (Mv)_i / v_i, max (Mv)_i / v_i]` for a
/// positive vector `v`.
pub fn collatz_wielandt(m: &IntMatrix, v: &[BigInt]) -> (BigRational, BigRational) {
    let ratios: Vec<BigRational> = m
        .iter()
        .zip(v)
        .map(|(row, vi)| {
            let mv: BigInt = row.iter().zip(v).map(|(&a, x)| BigInt::from(a) * x).sum();
            BigRational::new(mv, vi.clone())
        })
        .collect();
    let lo = ratios.iter().min().unwrap().clone();
    let hi = ratios.iter().max().unwrap().clone();
    (lo, hi)
}

/// Power iteration with `M + I` (primitive whenever `M` is irreducible)
/// from the all-ones vector, carrying a running intersection of
/// Collatz-Wielandt brackets.
#[derive(Debug, Clone)]
pub struct PowerIteration {
    matrix: IntMatrix,
    vector: Vec<BigInt>,
    lower: BigRational,
    upper: BigRational,
    keep_bits: u64,
    steps: usize,
}

impl PowerIteration {
    pub fn new(m: &IntMatrix, keep_bits: u64) -> Result<Self> {
        validate(m)?;
        let vector = vec![BigInt::one(); m.len()];
        let (lower, upper) = collatz_wielandt(m, &vector);
        Ok(PowerIteration {
            matrix: m.clone(),
            vector,
            lower,
            upper,
            keep_bits,
            steps: 0,
        })
    }

    pub fn bracket(&self) -> (&BigRational, &BigRational) {
        (&self.lower, &self.upper)
    }

    pub fn vector(&self) -> &[BigInt] {
        &self.vector
    }

    pub fn steps(&self) -> usize {
        self.steps
    }

    pub fn step(&mut self) {
        let m = &self.matrix;
        let v = &self.vector;
        let mut next: Vec<BigInt> = m
            .iter()
            .zip(v)
            .map(|(row, vi)| row.iter().zip(v).map(|(&a, x)| BigInt::from(a) * x).sum::<BigInt>() + vi)
            .collect();
        // Any positive vector certifies a bracket, so truncation is safe.
        let max_bits = next.iter().map(|x| x.bits()).max().unwrap_or(0);
        if max_bits > self.keep_bits {
            let shift = max_bits - self.keep_bits;
            for x in next.iter_mut() {
                *x = (&*x >> shift).max(BigInt::one());
            }
        }
        let (lo, hi) = collatz_wielandt(m, &next);
        if lo > self.lower {
            self.lower = lo;
        }
        if hi < self.upper {
            self.upper = hi;
        }
        self.vector = next;
        self.steps += 1;
    }
}

fn validate(m: &IntMatrix) -> Result<()> {
    check_square(m)?;
    if m.iter().flatten().any(|&x| x < 0) {
        return Err(Error::NegativeEntry);
    }
    if !is_irreducible(m) {
        return Err(Error::Reducible);
    }
    Ok(())
}

pub const MAX_PF_ITERATIONS: usize = 100_000;

/// Perron-Frobenius eigenvalue of a nonnegative irreducible integer matrix,
/// bracketed to width at most `tol`.
///
/// Equal row sums short-circuit to the exact value with the all-ones
/// eigenvector; that certificate holds for any nonnegative matrix, so
/// irreducibility is only required on the iterative path.
pub fn pf_eigenvalue(m: &IntMatrix, tol: &BigRational) -> Result<PfResult> {
    check_square(m)?;
    if m.iter().flatten().any(|&x| x < 0) {
        return Err(Error::NegativeEntry);
    }
    if !tol.is_positive() {
        return Err(Error::InvalidParameter("tolerance must be positive".into()));
    }
    let sums: Vec<i64> = m.iter().map(|row| row.iter().sum()).collect();
    if sums.iter().all(|&s| s == sums[0]) {
        let value = BigRational::from_integer(sums[0].into());
        return Ok(PfResult {
            value_lower: value.clone(),
            value_upper: value,
            eigenvector: vec![BigRational::one(); m.len()],
            exact: true,
            iterations: 0,
        });
    }
    let tol_bits = (tol.denom().bits() as i64 - tol.numer().bits() as i64).max(0) as u64;
    let mut it = PowerIteration::new(m, tol_bits + 64)?;
    while &it.upper - &it.lower > *tol {
        if it.steps >= MAX_PF_ITERATIONS {
            return Err(Error::NotConverged(it.steps));
        }
        it.step();
    }
    let top = it.vector.iter().max().cloned().unwrap_or_else(BigInt::one);
    let eigenvector = it
        .vector
        .iter()
        .map(|x| BigRational::new(x.clone(), top.clone()))
        .collect();
    let exact = it.lower == it.upper;
    Ok(PfResult {
        value_lower: it.lower,
        value_upper: it.upper,
        eigenvector,
        exact,
        iterations: it.steps,
    })
}

/// Integer square root when `x` is a perfect square.
pub fn exact_sqrt(x: i64) -> Option<i64> {
    if x < 0 {
        return None;
    }
    let r = (x as f64).sqrt().round() as i64;
    (r - 1..=r + 1).find(|&s| s >= 0 && s * s == x)
}

/// Rows as comma-separated integers, one line per row.
pub fn matrix_csv(m: &IntMatrix) -> String {
    let mut out = String::new();
    for row in m {
        let line: Vec<String> = row.iter().map(i64::to_string).collect();
        out.push_str(&line.join(","));
        out.push('\n');
    }
    out
}

/// Parses `"4,0;0,4"` style matrices.
pub fn parse_matrix(s: &str) -> Result<IntMatrix> {
    s.split(';')
        .map(|row| {
            row.split(',')
                .map(|x| {
                    x.trim()
                        .parse::<i64>()
                        .map_err(|_| Error::InvalidParameter(format!("bad matrix entry {x:?}")))
                })
                .collect()
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::quad::QuadReal;
    use proptest::prelude::*;
    use std::cmp::Ordering;

    fn q(n: i64, d: i64) -> BigRational {
        BigRational::new(n.into(), d.into())
    }

    #[test]
    fn torelli_examples() {
        assert_eq!(torelli_family(5).unwrap().matrix, vec![vec![4, 0, 4], vec![4, 4, 0], vec![0, 4, 4]]);
        assert_eq!(torelli_family(2).unwrap().matrix, vec![vec![8]]);
        assert_eq!(torelli_family(4).unwrap().matrix, vec![vec![4, 4], vec![4, 4]]);
        assert_eq!(torelli_family(3).unwrap().size(), 2);
        assert!(torelli_family(1).is_err());
    }

    #[test]
    fn braid_examples() {
        assert_eq!(braid_family(5).unwrap().matrix, vec![vec![2, 0, 2], vec![2, 2, 0], vec![0, 2, 2]]);
        assert_eq!(braid_family(4).unwrap().matrix, vec![vec![2, 2], vec![2, 2]]);
        assert_eq!(braid_family(2).unwrap().matrix, vec![vec![4]]);
        assert_eq!(braid_family(1).unwrap().matrix, vec![vec![4]]);
        assert!(braid_family(0).is_err());
    }

    #[test]
    fn built_in_pattern_invariant() {
        for g in 2..=40 {
            for (f, w) in [(torelli_family(g).unwrap(), 4), (braid_family(g).unwrap(), 2)] {
                let m = f.size();
                for (i, row) in f.matrix.iter().enumerate() {
                    if m == 1 {
                        assert_eq!(row, &vec![2 * w]);
                    } else if m == 2 {
                        assert_eq!(row, &vec![w, w]);
                    } else {
                        assert_eq!(row.iter().filter(|&&x| x != 0).count(), 2);
                        assert_eq!(row[i], w);
                        assert_eq!(row[(i + m - 1) % m], w);
                    }
                }
            }
        }
    }

    #[test]
    fn nnt_examples() {
        assert_eq!(
            nnt(&torelli_family(5).unwrap()),
            vec![vec![32, 16, 16], vec![16, 32, 16], vec![16, 16, 32]]
        );
        assert_eq!(nnt(&torelli_family(2).unwrap()), vec![vec![64]]);
        assert_eq!(nnt(&braid_family(5).unwrap()), vec![vec![8, 4, 4], vec![4, 8, 4], vec![4, 4, 8]]);
        // 32 on the diagonal, 16 for cyclic neighbours, 0 otherwise
        let m = nnt(&torelli_family(13).unwrap());
        let size = m.len();
        for i in 0..size {
            for j in 0..size {
                let d = (i as i64 - j as i64).rem_euclid(size as i64);
                let expect = match d {
                    0 => 32,
                    1 => 16,
                    d if d == size as i64 - 1 => 16,
                    _ => 0,
                };
                assert_eq!(m[i][j], expect);
            }
        }
    }

    #[test]
    fn pf_examples() {
        let tol = q(1, 1_000_000_000);
        let r = pf_eigenvalue(&nnt(&torelli_family(5).unwrap()), &tol).unwrap();
        assert!(r.exact);
        assert_eq!(r.exact_integer(), Some(64));
        assert!(r.eigenvector.iter().all(|x| x.is_one()));

        let id = vec![vec![1, 0, 0], vec![0, 1, 0], vec![0, 0, 1]];
        let r = pf_eigenvalue(&id, &tol).unwrap();
        assert_eq!(r.exact_integer(), Some(1));
        assert!(r.exact);

        let r = pf_eigenvalue(&vec![vec![2, 1], vec![1, 1]], &tol).unwrap();
        assert!(r.width() <= tol);
        // (3 + sqrt 5) / 2
        let root = QuadReal::new(q(3, 2), q(1, 2), 5);
        assert_ne!(root.compare_rational(&r.value_lower), Ordering::Less);
        assert_ne!(root.compare_rational(&r.value_upper), Ordering::Greater);
        assert!(r.eigenvector.iter().all(|x| x.is_positive()));
    }

    #[test]
    fn permutation_matrix_has_eigenvalue_one() {
        let p = vec![vec![0, 1, 0], vec![0, 0, 1], vec![1, 0, 0]];
        let r = pf_eigenvalue(&p, &q(1, 1000)).unwrap();
        assert_eq!(r.exact_integer(), Some(1));
    }

    #[test]
    fn pf_errors() {
        let tol = q(1, 1000);
        assert!(matches!(pf_eigenvalue(&vec![vec![1, 2]], &tol), Err(Error::NotSquare { .. })));
        assert_eq!(pf_eigenvalue(&vec![vec![1, -1], vec![1, 1]], &tol), Err(Error::NegativeEntry));
        assert_eq!(pf_eigenvalue(&vec![vec![1, 1], vec![0, 1]], &tol), Err(Error::Reducible));
    }

    #[test]
    fn periodic_irreducible_matrix_converges() {
        // eigenvalue sqrt(2), period 2
        let m = vec![vec![0, 2], vec![1, 0]];
        let r = pf_eigenvalue(&m, &q(1, 1_000_000_000_000)).unwrap();
        let root = QuadReal::sqrt_of(2);
        assert_ne!(root.compare_rational(&r.value_lower), Ordering::Less);
        assert_ne!(root.compare_rational(&r.value_upper), Ordering::Greater);
    }

    #[test]
    fn built_in_families_have_exact_pf() {
        let tol = q(1, 1_000_000);
        for g in 2..=64 {
            let r = pf_eigenvalue(&nnt(&torelli_family(g).unwrap()), &tol).unwrap();
            assert_eq!(r.exact_integer(), Some(64), "torelli g={g}");
            assert_eq!(torelli_family(g).unwrap().mu(), Some(64));
            assert_eq!(exact_sqrt(64), Some(8));
        }
        for g in 1..=64 {
            let r = pf_eigenvalue(&nnt(&braid_family(g).unwrap()), &tol).unwrap();
            assert_eq!(r.exact_integer(), Some(16), "braid g={g}");
            assert_eq!(braid_family(g).unwrap().mu(), Some(16));
            assert_eq!(exact_sqrt(16), Some(4));
        }
    }

    #[test]
    fn matrix_text_formats() {
        let m = parse_matrix("4,0;0, 4").unwrap();
        assert_eq!(m, vec![vec![4, 0], vec![0, 4]]);
        assert_eq!(matrix_csv(&m), "4,0\n0,4\n");
        assert!(parse_matrix("1,x").is_err());
    }

    // Independent floating-point power iteration.
    fn f64_pf(m: &IntMatrix) -> f64 {
        let n = m.len();
        let mut v = vec![1.0f64; n];
        let mut lambda = 0.0;
        for _ in 0..5000 {
            let w: Vec<f64> = (0..n).map(|i| (0..n).map(|j| m[i][j] as f64 * v[j]).sum()).collect();
            let norm = w.iter().cloned().fold(0.0, f64::max);
            lambda = norm / v.iter().cloned().fold(0.0, f64::max);
            v = w.iter().map(|x| x / norm).collect();
        }
        lambda
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(100))]

        #[test]
        fn collatz_wielandt_soundness(entries in proptest::collection::vec(1i64..=20, 25)) {
            let m: IntMatrix = entries.chunks(5).map(<[i64]>::to_vec).collect();
            let limit = f64_pf(&m);
            let mut it = PowerIteration::new(&m, 128).unwrap();
            let (mut lo, mut hi) = (it.bracket().0.clone(), it.bracket().1.clone());
            for _ in 0..40 {
                it.step();
                let (l, h) = it.bracket();
                prop_assert!(l >= &lo && h <= &hi);
                lo = l.clone();
                hi = h.clone();
                let slack = 1e-9 * limit;
                prop_assert!(lo.to_f64().unwrap() <= limit + slack);
                prop_assert!(hi.to_f64().unwrap() >= limit - slack);
            }
            prop_assert!((&hi - &lo).to_f64().unwrap() < 1e-6 * limit);
        }
    }
}
