//! The Johnson homomorphism target `Λ³H / (ω ∧ H)` for `H = Z^{2g}` and the
//! closed formula for bounding-pair maps.
//!
//! Homology classes use the symplectic basis `x1, y1, ..., xg, yg` with
//! `ω(x_i, y_i) = 1`. Elements of `Λ³H` are integer vectors over the
//! lexicographically ordered triples `e_i ∧ e_j ∧ e_k`, `i < j < k`, in the
//! basis order above. Cosets are compared through a canonical
//! representative reduced against the Hermite normal form of `ω ∧ H`.

use std::collections::HashMap;
use std::fmt;
use std::sync::{Arc, Mutex, OnceLock};

use serde::ser::SerializeStruct;
use serde::Serialize;

use crate::error::{Error, Result};

#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct HomologyClass {
    coords: Vec<i64>,
}

fn basis_name(index: usize) -> String {
    let handle = index / 2 + 1;
    if index.is_multiple_of(2) {
        format!("x{handle}")
    } else {
        format!("y{handle}")
    }
}

impl HomologyClass {
    pub fn zero(genus: usize) -> Self {
        HomologyClass {
            coords: vec![0; 2 * genus],
        }
    }

    pub fn from_coords(coords: Vec<i64>) -> Result<Self> {
        if !coords.len().is_multiple_of(2) {
            return Err(Error::InvalidClass(format!("{} coordinates", coords.len())));
        }
        Ok(HomologyClass { coords })
    }

    /// `x_i` (1-based handle index).
    pub fn x(genus: usize, i: usize) -> Self {
        let mut c = HomologyClass::zero(genus);
        c.coords[2 * (i - 1)] = 1;
        c
    }

    pub fn y(genus: usize, i: usize) -> Self {
        let mut c = HomologyClass::zero(genus);
        c.coords[2 * (i - 1) + 1] = 1;
        c
    }

    pub fn genus(&self) -> usize {
        self.coords.len() / 2
    }

    pub fn coords(&self) -> &[i64] {
        &self.coords
    }

    pub fn is_zero(&self) -> bool {
        self.coords.iter().all(|&c| c == 0)
    }

    pub fn add(&self, other: &HomologyClass) -> HomologyClass {
        HomologyClass {
            coords: self.coords.iter().zip(&other.coords).map(|(a, b)| a + b).collect(),
        }
    }

    pub fn scale(&self, k: i64) -> HomologyClass {
        HomologyClass {
            coords: self.coords.iter().map(|a| a * k).collect(),
        }
    }

    /// Algebraic intersection `ω(self, other)`.
    pub fn omega(&self, other: &HomologyClass) -> i64 {
        self.coords
            .chunks(2)
            .zip(other.coords.chunks(2))
            .map(|(p, q)| p[0] * q[1] - p[1] * q[0])
            .sum()
    }

    /// Parses `x1`, `-y2`, `x1+2y3-x2` or `0` at the given genus.
    pub fn parse(s: &str, genus: usize) -> Result<Self> {
        let bad = || Error::InvalidClass(s.to_string());
        let mut coords = vec![0i64; 2 * genus];
        let compact: String = s.chars().filter(|c| !c.is_whitespace()).collect();
        if compact.is_empty() {
            return Err(bad());
        }
        if compact == "0" {
            return Ok(HomologyClass { coords });
        }
        let mut terms = Vec::new();
        let mut start = 0;
        for (i, c) in compact.char_indices() {
            if (c == '+' || c == '-') && i > start {
                terms.push(&compact[start..i]);
                start = i;
            }
        }
        terms.push(&compact[start..]);
        for term in terms {
            let (sign, body) = match term.as_bytes().first() {
                Some(b'-') => (-1, &term[1..]),
                Some(b'+') => (1, &term[1..]),
                _ => (1, term),
            };
            let pos = body.find(['x', 'y']).ok_or_else(bad)?;
            let coef: i64 = if pos == 0 {
                1
            } else {
                body[..pos].parse().map_err(|_| bad())?
            };
            let handle: usize = body[pos + 1..].parse().map_err(|_| bad())?;
            if handle == 0 || handle > genus {
                return Err(bad());
            }
            let offset = if body.as_bytes()[pos] == b'x' { 0 } else { 1 };
            coords[2 * (handle - 1) + offset] += sign * coef;
        }
        Ok(HomologyClass { coords })
    }
}

impl fmt::Display for HomologyClass {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return f.write_str("0");
        }
        let mut first = true;
        for (i, &c) in self.coords.iter().enumerate() {
            if c == 0 {
                continue;
            }
            let name = basis_name(i);
            let sign = if c < 0 { "-" } else if first { "" } else { "+" };
            let mag = c.unsigned_abs();
            if mag == 1 {
                write!(f, "{sign}{name}")?;
            } else {
                write!(f, "{sign}{mag}{name}")?;
            }
            first = false;
        }
        Ok(())
    }
}

/// Lexicographic triples `(i, j, k)`, `i < j < k < 2g`.
pub fn triples(genus: usize) -> Vec<[usize; 3]> {
    let n = 2 * genus;
    let mut out = Vec::new();
    for i in 0..n {
        for j in i + 1..n {
            for k in j + 1..n {
                out.push([i, j, k]);
            }
        }
    }
    out
}

fn binomial3(n: usize) -> usize {
    if n < 3 {
        0
    } else {
        n * (n - 1) * (n - 2) / 6
    }
}

/// An element of `Λ³H` in the triple basis.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Wedge3 {
    genus: usize,
    coeffs: Vec<i64>,
}

impl Wedge3 {
    pub fn zero(genus: usize) -> Self {
        Wedge3 {
            genus,
            coeffs: vec![0; binomial3(2 * genus)],
        }
    }

    pub fn genus(&self) -> usize {
        self.genus
    }

    pub fn coeffs(&self) -> &[i64] {
        &self.coeffs
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.iter().all(|&c| c == 0)
    }

    pub fn add(&self, other: &Wedge3) -> Result<Wedge3> {
        if self.genus != other.genus {
            return Err(Error::GenusMismatch(self.genus, other.genus));
        }
        Ok(Wedge3 {
            genus: self.genus,
            coeffs: self.coeffs.iter().zip(&other.coeffs).map(|(a, b)| a + b).collect(),
        })
    }

    pub fn neg(&self) -> Wedge3 {
        Wedge3 {
            genus: self.genus,
            coeffs: self.coeffs.iter().map(|c| -c).collect(),
        }
    }

    /// Nonzero terms as `("x1^x2^y2", coefficient)`, in triple order.
    pub fn terms(&self) -> Vec<(String, i64)> {
        triples(self.genus)
            .into_iter()
            .zip(&self.coeffs)
            .filter(|(_, &c)| c != 0)
            .map(|(t, &c)| {
                let name = t.iter().map(|&i| basis_name(i)).collect::<Vec<_>>().join("^");
                (name, c)
            })
            .collect()
    }
}

impl fmt::Display for Wedge3 {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let terms = self.terms();
        if terms.is_empty() {
            return f.write_str("0");
        }
        for (n, (name, c)) in terms.iter().enumerate() {
            let sign = if *c < 0 { "-" } else if n == 0 { "" } else { "+" };
            let mag = c.unsigned_abs();
            if mag == 1 {
                write!(f, "{sign}{name}")?;
            } else {
                write!(f, "{sign}{mag}*{name}")?;
            }
        }
        Ok(())
    }
}

fn det3(m: [[i64; 3]; 3]) -> i64 {
    m[0][0] * (m[1][1] * m[2][2] - m[1][2] * m[2][1]) - m[0][1] * (m[1][0] * m[2][2] - m[1][2] * m[2][0])
        + m[0][2] * (m[1][0] * m[2][1] - m[1][1] * m[2][0])
}

/// `h1 ∧ h2 ∧ h3`: the coefficient of each basis triple is the 3x3 minor
/// on those coordinates.
pub fn wedge3(h1: &HomologyClass, h2: &HomologyClass, h3: &HomologyClass) -> Result<Wedge3> {
    let genus = h1.genus();
    for h in [h2, h3] {
        if h.genus() != genus {
            return Err(Error::GenusMismatch(genus, h.genus()));
        }
    }
    let coeffs = triples(genus)
        .into_iter()
        .map(|[i, j, k]| {
            let row = |h: &HomologyClass| [h.coords[i], h.coords[j], h.coords[k]];
            det3([row(h1), row(h2), row(h3)])
        })
        .collect();
    Ok(Wedge3 { genus, coeffs })
}

/// `ω ∧ e` for every basis vector `e` of `H`, in basis order.
pub fn omega_wedge_basis(genus: usize) -> Result<Vec<Wedge3>> {
    if genus < 2 {
        return Err(Error::InvalidParameter(format!("omega wedge H needs genus >= 2, got {genus}")));
    }
    let mut out = Vec::with_capacity(2 * genus);
    for m in 0..2 * genus {
        let mut e = HomologyClass::zero(genus);
        e.coords[m] = 1;
        let mut acc = Wedge3::zero(genus);
        for i in 1..=genus {
            let term = wedge3(&HomologyClass::x(genus, i), &HomologyClass::y(genus, i), &e)?;
            acc = acc.add(&term)?;
        }
        out.push(acc);
    }
    Ok(out)
}

/// A row-style Hermite normal form: echelon rows with positive pivots and
/// entries above each pivot reduced into `[0, pivot)`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Lattice {
    dim: usize,
    rows: Vec<Vec<i64>>,
    pivots: Vec<usize>,
}

impl Lattice {
    pub fn from_generators(dim: usize, generators: &[Vec<i64>]) -> Lattice {
        let mut work: Vec<Vec<i128>> = generators
            .iter()
            .map(|g| g.iter().map(|&x| x as i128).collect())
            .collect();
        let mut rows: Vec<Vec<i128>> = Vec::new();
        let mut pivots = Vec::new();
        for col in 0..dim {
            loop {
                // smallest nonzero |entry| in this column among the remaining rows
                let best = work
                    .iter()
                    .enumerate()
                    .filter(|(_, r)| r[col] != 0)
                    .min_by_key(|(_, r)| r[col].abs())
                    .map(|(i, _)| i);
                let Some(bi) = best else { break };
                let pivot_row = work.swap_remove(bi);
                let p = pivot_row[col];
                let mut done = true;
                for r in work.iter_mut() {
                    if r[col] != 0 {
                        let q = r[col].div_euclid(p);
                        for (x, y) in r.iter_mut().zip(&pivot_row) {
                            *x -= q * y;
                        }
                        if r[col] != 0 {
                            done = false;
                        }
                    }
                }
                if done {
                    let sign = p.signum();
                    rows.push(pivot_row.into_iter().map(|x| x * sign).collect());
                    pivots.push(col);
                    break;
                }
                work.push(pivot_row);
            }
            work.retain(|r| r.iter().any(|&x| x != 0));
        }
        // reduce above pivots
        for i in 0..rows.len() {
            let col = pivots[i];
            let p = rows[i][col];
            for k in 0..i {
                let q = rows[k][col].div_euclid(p);
                if q != 0 {
                    let pivot_row = rows[i].clone();
                    for (x, y) in rows[k].iter_mut().zip(&pivot_row) {
                        *x -= q * y;
                    }
                }
            }
        }
        Lattice {
            dim,
            rows: rows
                .into_iter()
                .map(|r| r.into_iter().map(|x| i64::try_from(x).expect("HNF entry overflow")).collect())
                .collect(),
            pivots,
        }
    }

    pub fn rank(&self) -> usize {
        self.rows.len()
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn rows(&self) -> &[Vec<i64>] {
        &self.rows
    }

    /// Canonical representative of `v + L`: each pivot coordinate lands in
    /// `[0, pivot)`.
    pub fn reduce(&self, v: &[i64]) -> Vec<i64> {
        let mut out = v.to_vec();
        for (row, &col) in self.rows.iter().zip(&self.pivots) {
            let q = out[col].div_euclid(row[col]);
            if q != 0 {
                for (x, y) in out.iter_mut().zip(row) {
                    *x -= q * y;
                }
            }
        }
        out
    }

    pub fn contains(&self, v: &[i64]) -> bool {
        self.reduce(v).iter().all(|&x| x == 0)
    }

    /// Product of the pivots when the lattice has full rank: the order of
    /// the finite quotient.
    pub fn index(&self) -> Option<i64> {
        (self.rank() == self.dim).then(|| self.rows.iter().zip(&self.pivots).map(|(r, &c)| r[c]).product())
    }
}

fn lattice_cache() -> &'static Mutex<HashMap<usize, Arc<Lattice>>> {
    static CACHE: OnceLock<Mutex<HashMap<usize, Arc<Lattice>>>> = OnceLock::new();
    CACHE.get_or_init(|| Mutex::new(HashMap::new()))
}

/// The normal form of `ω ∧ H`, built once per genus.
pub fn omega_lattice(genus: usize) -> Result<Arc<Lattice>> {
    if let Some(l) = lattice_cache().lock().unwrap().get(&genus) {
        return Ok(Arc::clone(l));
    }
    let gens: Vec<Vec<i64>> = omega_wedge_basis(genus)?.into_iter().map(|w| w.coeffs).collect();
    let lattice = Arc::new(Lattice::from_generators(binomial3(2 * genus), &gens));
    lattice_cache()
        .lock()
        .unwrap()
        .entry(genus)
        .or_insert_with(|| Arc::clone(&lattice));
    Ok(lattice)
}

/// Rank of `Λ³H / (ω ∧ H)` as an abelian group.
pub fn quotient_rank(genus: usize) -> Result<usize> {
    let l = omega_lattice(genus)?;
    Ok(l.dim() - l.rank())
}

/// An element of `Λ³H / (ω ∧ H)`, stored by its canonical representative.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Wedge3Coset {
    representative: Wedge3,
}

impl Wedge3Coset {
    pub fn new(w: &Wedge3) -> Result<Self> {
        let lattice = omega_lattice(w.genus)?;
        Ok(Wedge3Coset {
            representative: Wedge3 {
                genus: w.genus,
                coeffs: lattice.reduce(&w.coeffs),
            },
        })
    }

    pub fn genus(&self) -> usize {
        self.representative.genus
    }

    pub fn representative(&self) -> &Wedge3 {
        &self.representative
    }

    pub fn is_zero(&self) -> bool {
        self.representative.is_zero()
    }

    pub fn add(&self, other: &Wedge3Coset) -> Result<Wedge3Coset> {
        Wedge3Coset::new(&self.representative.add(&other.representative)?)
    }

    pub fn neg(&self) -> Result<Wedge3Coset> {
        Wedge3Coset::new(&self.representative.neg())
    }
}

impl fmt::Display for Wedge3Coset {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "[{}]", self.representative)
    }
}

impl Serialize for Wedge3Coset {
    fn serialize<S: serde::Serializer>(&self, serializer: S) -> std::result::Result<S::Ok, S::Error> {
        let mut s = serializer.serialize_struct("Wedge3Coset", 3)?;
        s.serialize_field("genus", &self.genus())?;
        s.serialize_field("is_zero", &self.is_zero())?;
        s.serialize_field("representative", &self.representative.terms())?;
        s.end()
    }
}

pub fn coset_equal(u: &Wedge3Coset, v: &Wedge3Coset) -> Result<bool> {
    if u.genus() != v.genus() {
        return Err(Error::GenusMismatch(u.genus(), v.genus()));
    }
    Ok(u == v)
}

/// A symplectic pair `(u_i, v_i)` of a bounding-pair region.
pub type SymplecticPair = (HomologyClass, HomologyClass);

fn check_symplectic(genus: usize, pairs: &[SymplecticPair], a: &HomologyClass) -> Result<()> {
    for (u, v) in pairs {
        for h in [u, v] {
            if h.genus() != genus {
                return Err(Error::GenusMismatch(genus, h.genus()));
            }
            if h.omega(a) != 0 {
                return Err(Error::NotSymplectic(format!("{h} pairs nontrivially with {a}")));
            }
        }
    }
    for (i, (ui, vi)) in pairs.iter().enumerate() {
        for (j, (uj, vj)) in pairs.iter().enumerate() {
            let expect = i64::from(i == j);
            if ui.omega(vj) != expect {
                return Err(Error::NotSymplectic(format!("ω({ui}, {vj}) = {}, expected {expect}", ui.omega(vj))));
            }
            if i != j && (ui.omega(uj) != 0 || vi.omega(vj) != 0) {
                return Err(Error::NotSymplectic(format!("pairs {i} and {j} are not orthogonal")));
            }
        }
    }
    Ok(())
}

/// `τ(T_a T_b^{-1}) = (Σ u_i ∧ v_i) ∧ [a]` for a bounding pair whose far
/// side carries the symplectic pairs `(u_i, v_i)`, with `[a]` oriented so
/// that side lies to its left.
pub fn tau_bounding_pair(genus: usize, pairs: &[SymplecticPair], a: &HomologyClass) -> Result<Wedge3Coset> {
    if a.genus() != genus {
        return Err(Error::GenusMismatch(genus, a.genus()));
    }
    check_symplectic(genus, pairs, a)?;
    let mut acc = Wedge3::zero(genus);
    for (u, v) in pairs {
        acc = acc.add(&wedge3(u, v, a)?)?;
    }
    Wedge3Coset::new(&acc)
}

/// The two bounding-pair images in the lantern argument for homologous
/// curves meeting twice.
#[derive(Debug, Clone, Serialize)]
pub struct LanternFixture {
    pub genus: usize,
    /// `τ(T_z T_d^{-1})`
    pub tau_zd: Wedge3Coset,
    /// `τ(T_d T_w^{-1}) = -τ(T_w T_d^{-1})`
    pub tau_dw: Wedge3Coset,
    pub differ: bool,
}

/// Fixture: `[d] = x1`; the region cut off by `{z, d}` carries `(x2, y2)`
/// and lies to the left of `d`; the region cut off by `{w, d}` carries
/// `(x3, y3)` and lies to the right of `d`, so its bounding class is `-x1`.
/// Handles beyond the third sit in the region between `z` and `w`.
pub fn lantern_fixture(genus: usize) -> Result<LanternFixture> {
    if genus < 3 {
        return Err(Error::InvalidParameter(format!("lantern fixture needs genus >= 3, got {genus}")));
    }
    let x = |i| HomologyClass::x(genus, i);
    let y = |i| HomologyClass::y(genus, i);
    let d = x(1);
    let tau_zd = tau_bounding_pair(genus, &[(x(2), y(2))], &d)?;
    let tau_wd = tau_bounding_pair(genus, &[(x(3), y(3))], &d.scale(-1))?;
    let tau_dw = tau_wd.neg()?;
    let differ = !coset_equal(&tau_zd, &tau_dw)?;
    Ok(LanternFixture {
        genus,
        tau_zd,
        tau_dw,
        differ,
    })
}

/// True when `τ(T_z T_d^{-1}) ≠ τ(T_d T_w^{-1})` for the canonical fixture.
pub fn lantern_check(genus: usize) -> Result<bool> {
    Ok(lantern_fixture(genus)?.differ)
}

/// Parses `"x2,y2;x3,y3"` into symplectic pairs.
pub fn parse_pairs(s: &str, genus: usize) -> Result<Vec<SymplecticPair>> {
    if s.trim().is_empty() {
        return Ok(Vec::new());
    }
    s.split(';')
        .map(|pair| {
            let (u, v) = pair
                .split_once(',')
                .ok_or_else(|| Error::InvalidClass(pair.to_string()))?;
            Ok((HomologyClass::parse(u, genus)?, HomologyClass::parse(v, genus)?))
        })
        .collect()
}
