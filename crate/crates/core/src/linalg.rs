//! Exact vectors, matrices and canonical subspaces.
//!
//! A `Subspace` always stores its basis in reduced row echelon form with
//! zero rows removed, so structural equality decides subspace equality and
//! a total order on subspaces falls out of the flattened basis entries.

use std::cmp::Ordering;
use std::fmt;

use itertools::Itertools;

use crate::error::{Error, Result};
use crate::field::{FieldSpec, Scalar};

/// Default ceiling on the number of canonical matrices an enumeration is
/// allowed to visit.
pub const DEFAULT_ENUMERATION_CAP: u128 = 1_000_000;

// ---------------------------------------------------------------------------
// Vector

#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Vector {
    spec: FieldSpec,
    coords: Vec<Scalar>,
}

impl Vector {
    pub fn new(spec: FieldSpec, coords: Vec<Scalar>) -> Self {
        debug_assert!(coords.iter().all(|c| c.spec() == spec));
        Vector { spec, coords }
    }

    pub fn from_i64(spec: FieldSpec, coords: &[i64]) -> Self {
        Vector::new(spec, coords.iter().map(|&v| Scalar::from_i64(spec, v)).collect())
    }

    pub fn zero(spec: FieldSpec, n: usize) -> Self {
        Vector::new(spec, vec![spec.zero(); n])
    }

    /// The i-th natural basis vector of K^n.
    pub fn unit(spec: FieldSpec, n: usize, i: usize) -> Self {
        let mut v = Vector::zero(spec, n);
        v.coords[i] = spec.one();
        v
    }

    pub fn spec(&self) -> FieldSpec {
        self.spec
    }

    pub fn len(&self) -> usize {
        self.coords.len()
    }

    pub fn is_empty(&self) -> bool {
        self.coords.is_empty()
    }

    pub fn coord(&self, i: usize) -> &Scalar {
        &self.coords[i]
    }

    pub fn coords(&self) -> &[Scalar] {
        &self.coords
    }

    pub fn set_coord(&mut self, i: usize, v: Scalar) {
        debug_assert_eq!(v.spec(), self.spec);
        self.coords[i] = v;
    }

    pub fn is_zero(&self) -> bool {
        self.coords.iter().all(Scalar::is_zero)
    }

    /// Indices of the nonzero coordinates.
    pub fn support(&self) -> Vec<usize> {
        (0..self.len()).filter(|&i| !self.coords[i].is_zero()).collect()
    }

    pub fn add(&self, other: &Vector) -> Vector {
        assert_eq!(self.len(), other.len(), "vector length mismatch");
        Vector::new(
            self.spec,
            self.coords
                .iter()
                .zip(&other.coords)
                .map(|(a, b)| a.add(b).expect("same field"))
                .collect(),
        )
    }

    pub fn sub(&self, other: &Vector) -> Vector {
        self.add(&other.neg())
    }

    pub fn neg(&self) -> Vector {
        Vector::new(self.spec, self.coords.iter().map(Scalar::neg).collect())
    }

    pub fn scale(&self, c: &Scalar) -> Vector {
        Vector::new(
            self.spec,
            self.coords.iter().map(|a| a.mul(c).expect("same field")).collect(),
        )
    }

    /// Renders the vector as a combination of natural basis vectors,
    /// e.g. `e1+e2`, `e1-e2`, `(1/2)e3`. The zero vector prints as `0`.
    pub fn basis_combo_string(&self) -> String {
        let mut out = String::new();
        for i in self.support() {
            let c = &self.coords[i];
            let rendered = c.to_string();
            if out.is_empty() {
                if c.is_one() {
                    out.push_str(&format!("e{}", i + 1));
                } else if rendered == "-1" {
                    out.push_str(&format!("-e{}", i + 1));
                } else if rendered.contains('/') {
                    out.push_str(&format!("({rendered})e{}", i + 1));
                } else {
                    out.push_str(&format!("{rendered}e{}", i + 1));
                }
            } else if c.is_one() {
                out.push_str(&format!("+e{}", i + 1));
            } else if rendered == "-1" {
                out.push_str(&format!("-e{}", i + 1));
            } else if rendered.contains('/') {
                out.push_str(&format!("+({rendered})e{}", i + 1));
            } else if rendered.starts_with('-') {
                out.push_str(&format!("{rendered}e{}", i + 1));
            } else {
                out.push_str(&format!("+{rendered}e{}", i + 1));
            }
        }
        if out.is_empty() {
            out.push('0');
        }
        out
    }
}

impl fmt::Display for Vector {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.basis_combo_string())
    }
}

// ---------------------------------------------------------------------------
// Matrix

#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Matrix {
    spec: FieldSpec,
    rows: usize,
    cols: usize,
    data: Vec<Scalar>,
}

impl Matrix {
    pub fn new(spec: FieldSpec, rows: usize, cols: usize, data: Vec<Scalar>) -> Self {
        assert_eq!(data.len(), rows * cols, "matrix shape mismatch");
        debug_assert!(data.iter().all(|c| c.spec() == spec));
        Matrix { spec, rows, cols, data }
    }

    pub fn zeros(spec: FieldSpec, rows: usize, cols: usize) -> Self {
        Matrix::new(spec, rows, cols, vec![spec.zero(); rows * cols])
    }

    pub fn identity(spec: FieldSpec, n: usize) -> Self {
        let mut m = Matrix::zeros(spec, n, n);
        for i in 0..n {
            m.set(i, i, spec.one());
        }
        m
    }

    pub fn from_rows(spec: FieldSpec, rows: Vec<Vector>) -> Self {
        let nrows = rows.len();
        let cols = rows.first().map_or(0, Vector::len);
        assert!(rows.iter().all(|r| r.len() == cols), "ragged rows");
        let data = rows.into_iter().flat_map(|r| r.coords).collect();
        Matrix::new(spec, nrows, cols, data)
    }

    pub fn from_i64_rows(spec: FieldSpec, rows: &[Vec<i64>]) -> Self {
        let vecs = rows.iter().map(|r| Vector::from_i64(spec, r)).collect();
        Matrix::from_rows(spec, vecs)
    }

    pub fn spec(&self) -> FieldSpec {
        self.spec
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn get(&self, i: usize, j: usize) -> &Scalar {
        &self.data[i * self.cols + j]
    }

    pub fn set(&mut self, i: usize, j: usize, v: Scalar) {
        debug_assert_eq!(v.spec(), self.spec);
        self.data[i * self.cols + j] = v;
    }

    pub fn row(&self, i: usize) -> Vector {
        Vector::new(self.spec, self.data[i * self.cols..(i + 1) * self.cols].to_vec())
    }

    pub fn row_vectors(&self) -> Vec<Vector> {
        (0..self.rows).map(|i| self.row(i)).collect()
    }

    pub fn transpose(&self) -> Matrix {
        let mut out = Matrix::zeros(self.spec, self.cols, self.rows);
        for i in 0..self.rows {
            for j in 0..self.cols {
                out.set(j, i, self.get(i, j).clone());
            }
        }
        out
    }

    pub fn is_zero(&self) -> bool {
        self.data.iter().all(Scalar::is_zero)
    }

    /// Vertical concatenation.
    pub fn stack(&self, other: &Matrix) -> Matrix {
        assert_eq!(self.cols, other.cols, "stack width mismatch");
        let mut data = self.data.clone();
        data.extend_from_slice(&other.data);
        Matrix::new(self.spec, self.rows + other.rows, self.cols, data)
    }

    /// Reduced row echelon form with zero rows removed; the row space is
    /// preserved.
    pub fn rref(&self) -> Matrix {
        let mut m = self.clone();
        let mut pivot_row = 0usize;
        for col in 0..m.cols {
            if pivot_row == m.rows {
                break;
            }
            let Some(src) = (pivot_row..m.rows).find(|&r| !m.get(r, col).is_zero()) else {
                continue;
            };
            m.swap_rows(pivot_row, src);
            let inv = m.get(pivot_row, col).inv().expect("pivot nonzero");
            m.scale_row(pivot_row, &inv);
            for r in 0..m.rows {
                if r != pivot_row && !m.get(r, col).is_zero() {
                    let factor = m.get(r, col).clone();
                    m.sub_scaled_row(r, pivot_row, &factor);
                }
            }
            pivot_row += 1;
        }
        let data = m.data[..pivot_row * m.cols].to_vec();
        Matrix::new(m.spec, pivot_row, m.cols, data)
    }

    pub fn rank(&self) -> usize {
        self.rref().rows
    }

    /// Right null space `{ v : M v = 0 }` as a canonical subspace of K^cols.
    pub fn kernel(&self) -> Subspace {
        let r = self.rref();
        let pivots = r.pivot_columns();
        let mut basis = Vec::new();
        let pivot_set: Vec<bool> = {
            let mut s = vec![false; r.cols];
            for &c in &pivots {
                s[c] = true;
            }
            s
        };
        for free in (0..r.cols).filter(|&c| !pivot_set[c]) {
            let mut v = Vector::zero(self.spec, r.cols);
            v.set_coord(free, self.spec.one());
            for (i, &pc) in pivots.iter().enumerate() {
                v.set_coord(pc, r.get(i, free).neg());
            }
            basis.push(v);
        }
        Subspace::span(self.spec, r.cols, &basis).expect("kernel vectors fit ambient")
    }

    /// Pivot column of each row; meaningful on RREF matrices.
    pub fn pivot_columns(&self) -> Vec<usize> {
        (0..self.rows)
            .map(|i| (0..self.cols).find(|&j| !self.get(i, j).is_zero()).expect("no zero rows"))
            .collect()
    }

    fn swap_rows(&mut self, a: usize, b: usize) {
        if a == b {
            return;
        }
        for j in 0..self.cols {
            self.data.swap(a * self.cols + j, b * self.cols + j);
        }
    }

    fn scale_row(&mut self, r: usize, c: &Scalar) {
        for j in 0..self.cols {
            let v = self.get(r, j).mul(c).expect("same field");
            self.set(r, j, v);
        }
    }

    /// row_r -= c * row_src
    fn sub_scaled_row(&mut self, r: usize, src: usize, c: &Scalar) {
        for j in 0..self.cols {
            let delta = self.get(src, j).mul(c).expect("same field");
            let v = self.get(r, j).sub(&delta).expect("same field");
            self.set(r, j, v);
        }
    }
}

impl fmt::Display for Matrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for i in 0..self.rows {
            let row = (0..self.cols).map(|j| self.get(i, j).to_string()).join(" ");
            writeln!(f, "[{row}]")?;
        }
        Ok(())
    }
}

// ---------------------------------------------------------------------------
// Subspace

/// A linear subspace of K^n in canonical form: the stored basis is the RREF
/// of any spanning set, so two values are equal iff they are the same
/// subspace.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Subspace {
    ambient: usize,
    basis: Matrix,
}

impl Subspace {
    pub fn span(spec: FieldSpec, ambient: usize, vectors: &[Vector]) -> Result<Subspace> {
        for v in vectors {
            if v.len() != ambient {
                return Err(Error::DimensionMismatch { expected: ambient, got: v.len() });
            }
            if v.spec() != spec {
                return Err(Error::MixedField);
            }
        }
        let m = Matrix::from_rows(spec, vectors.to_vec());
        let m = if vectors.is_empty() {
            Matrix::zeros(spec, 0, ambient)
        } else {
            m
        };
        Ok(Subspace { ambient, basis: m.rref() })
    }

    /// Wraps a matrix that is already in RREF with no zero rows.
    pub(crate) fn from_rref(basis: Matrix) -> Subspace {
        Subspace { ambient: basis.cols(), basis }
    }

    pub fn zero(spec: FieldSpec, ambient: usize) -> Subspace {
        Subspace { ambient, basis: Matrix::zeros(spec, 0, ambient) }
    }

    pub fn full(spec: FieldSpec, ambient: usize) -> Subspace {
        Subspace { ambient, basis: Matrix::identity(spec, ambient) }
    }

    pub fn spec(&self) -> FieldSpec {
        self.basis.spec()
    }

    pub fn ambient(&self) -> usize {
        self.ambient
    }

    pub fn dim(&self) -> usize {
        self.basis.rows()
    }

    pub fn is_zero(&self) -> bool {
        self.dim() == 0
    }

    pub fn is_full(&self) -> bool {
        self.dim() == self.ambient
    }

    pub fn basis(&self) -> &Matrix {
        &self.basis
    }

    pub fn basis_vectors(&self) -> Vec<Vector> {
        self.basis.row_vectors()
    }

    /// True iff the subspace is spanned by natural basis vectors, i.e. every
    /// RREF row is a standard unit vector.
    pub fn is_coordinate_subspace(&self) -> bool {
        self.basis_vectors().iter().all(|r| r.support().len() == 1)
    }

    fn check_ambient(&self, other: &Subspace) -> Result<()> {
        if self.ambient == other.ambient && self.spec() == other.spec() {
            Ok(())
        } else {
            Err(Error::DimensionMismatch { expected: self.ambient, got: other.ambient })
        }
    }

    pub fn member(&self, v: &Vector) -> Result<bool> {
        if v.len() != self.ambient {
            return Err(Error::DimensionMismatch { expected: self.ambient, got: v.len() });
        }
        Ok(self.reduce(v).is_zero())
    }

    /// Reduces `v` modulo the basis rows; the remainder is zero exactly for
    /// members.
    pub fn reduce(&self, v: &Vector) -> Vector {
        let mut rem = v.clone();
        for (i, pc) in self.basis.pivot_columns().into_iter().enumerate() {
            let c = rem.coord(pc).clone();
            if !c.is_zero() {
                rem = rem.sub(&self.basis.row(i).scale(&c));
            }
        }
        rem
    }

    pub fn contains(&self, other: &Subspace) -> Result<bool> {
        self.check_ambient(other)?;
        for v in other.basis_vectors() {
            if !self.member(&v)? {
                return Ok(false);
            }
        }
        Ok(true)
    }

    pub fn sum(&self, other: &Subspace) -> Result<Subspace> {
        self.check_ambient(other)?;
        Ok(Subspace::from_rref(self.basis.stack(&other.basis).rref()))
    }

    /// Intersection via the kernel of the stacked coefficient system: a
    /// vector lies in both spans iff some coefficient pair (a, b) solves
    /// `a . basis(self) = b . basis(other)`.
    pub fn intersect(&self, other: &Subspace) -> Result<Subspace> {
        self.check_ambient(other)?;
        if self.is_zero() || other.is_zero() {
            return Ok(Subspace::zero(self.spec(), self.ambient));
        }
        let k = self.dim();
        let l = other.dim();
        // Columns: the unknowns (a_1..a_k, b_1..b_l); rows: the n coordinate
        // equations of a.U - b.V = 0.
        let mut system = Matrix::zeros(self.spec(), self.ambient, k + l);
        for j in 0..k {
            for c in 0..self.ambient {
                system.set(c, j, self.basis.get(j, c).clone());
            }
        }
        for j in 0..l {
            for c in 0..self.ambient {
                system.set(c, k + j, other.basis.get(j, c).neg());
            }
        }
        let coeffs = system.kernel();
        let mut vectors = Vec::with_capacity(coeffs.dim());
        for w in coeffs.basis_vectors() {
            let mut v = Vector::zero(self.spec(), self.ambient);
            for j in 0..k {
                v = v.add(&self.basis.row(j).scale(w.coord(j)));
            }
            vectors.push(v);
        }
        Subspace::span(self.spec(), self.ambient, &vectors)
    }

    pub fn basis_strings(&self) -> Vec<String> {
        self.basis_vectors().iter().map(Vector::basis_combo_string).collect()
    }
}

impl fmt::Display for Subspace {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return write!(f, "0");
        }
        write!(f, "span{{{}}}", self.basis_strings().join(", "))
    }
}

impl PartialOrd for Subspace {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

/// Deterministic global ordering: dimension first, then lexicographic on the
/// flattened RREF entries.
impl Ord for Subspace {
    fn cmp(&self, other: &Self) -> Ordering {
        self.ambient
            .cmp(&other.ambient)
            .then_with(|| self.dim().cmp(&other.dim()))
            .then_with(|| {
                for i in 0..self.dim() {
                    for j in 0..self.ambient {
                        let ord = self.basis.get(i, j).cmp(other.basis.get(i, j));
                        if ord != Ordering::Equal {
                            return ord;
                        }
                    }
                }
                Ordering::Equal
            })
    }
}

// ---------------------------------------------------------------------------
// Subspace enumeration over prime fields

/// Number of k-dimensional subspaces of F_p^n (the Gaussian binomial),
/// saturating at u128::MAX.
pub fn gaussian_binomial(p: u64, n: usize, k: usize) -> u128 {
    if k > n {
        return 0;
    }
    // G(n, k) = G(n-1, k-1) + p^k G(n-1, k)
    let mut prev: Vec<u128> = vec![1];
    for row in 1..=n {
        let mut cur = vec![1u128; row + 1];
        for kk in 1..row {
            let pk = (p as u128).checked_pow(kk as u32).unwrap_or(u128::MAX);
            cur[kk] = prev[kk - 1].saturating_add(pk.saturating_mul(prev[kk]));
        }
        prev = cur;
    }
    prev[k]
}

/// Total number of subspaces the enumeration would visit.
pub fn subspace_count(p: u64, n: usize, dim_filter: Option<usize>) -> u128 {
    match dim_filter {
        Some(k) => gaussian_binomial(p, n, k),
        None => (0..=n).fold(0u128, |acc, k| acc.saturating_add(gaussian_binomial(p, n, k))),
    }
}

/// Streams every subspace of F_p^n exactly once by enumerating canonical
/// RREF matrices: choose pivot columns, then fill the free entries.
pub fn all_subspaces(
    spec: FieldSpec,
    n: usize,
    dim_filter: Option<usize>,
    cap: u128,
) -> Result<impl Iterator<Item = Subspace>> {
    let FieldSpec::PrimeField { p } = spec else {
        return Err(Error::InfiniteField);
    };
    let needed = subspace_count(p, n, dim_filter);
    if needed > cap {
        return Err(Error::EnumerationCapExceeded { needed, cap });
    }
    let dims: Vec<usize> = match dim_filter {
        Some(k) if k <= n => vec![k],
        Some(_) => vec![],
        None => (0..=n).collect(),
    };
    let iter = dims.into_iter().flat_map(move |k| {
        (0..n).combinations(k).flat_map(move |pivots| {
            // Free entries sit to the right of their row's pivot, outside
            // the pivot columns.
            let mut free = Vec::new();
            for (row, &pc) in pivots.iter().enumerate() {
                for col in pc + 1..n {
                    if !pivots.contains(&col) {
                        free.push((row, col));
                    }
                }
            }
            let total: u128 = (p as u128).pow(free.len() as u32);
            let pivots = pivots.clone();
            (0..total).map(move |index| {
                let mut m = Matrix::zeros(spec, k, n);
                for (row, &pc) in pivots.iter().enumerate() {
                    m.set(row, pc, spec.one());
                }
                let mut rest = index;
                for &(row, col) in &free {
                    let digit = (rest % p as u128) as i64;
                    rest /= p as u128;
                    m.set(row, col, Scalar::from_i64(spec, digit));
                }
                Subspace::from_rref(m)
            })
        })
    });
    Ok(iter)
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::collections::HashSet;

    fn gf(p: u64) -> FieldSpec {
        FieldSpec::gf(p).unwrap()
    }

    #[test]
    fn rref_rank_one_collapse() {
        let q = FieldSpec::Rationals;
        let m = Matrix::from_i64_rows(q, &[vec![2, 4], vec![1, 2]]);
        let r = m.rref();
        assert_eq!(r.rows(), 1);
        assert_eq!(r.row(0), Vector::from_i64(q, &[1, 2]));
    }

    #[test]
    fn rref_identity_fixed() {
        let q = FieldSpec::Rationals;
        let id = Matrix::identity(q, 3);
        assert_eq!(id.rref(), id);
    }

    #[test]
    fn rref_zero_matrix_empties() {
        let q = FieldSpec::Rationals;
        assert_eq!(Matrix::zeros(q, 3, 3).rref().rows(), 0);
    }

    #[test]
    fn span_examples() {
        let f = gf(5);
        let empty = Subspace::span(f, 3, &[]).unwrap();
        assert_eq!(empty.dim(), 0);

        let s = Subspace::span(
            f,
            3,
            &[Vector::from_i64(f, &[1, 1, 0]), Vector::from_i64(f, &[1, -1, 0])],
        )
        .unwrap();
        assert_eq!(s.dim(), 2);
        assert_eq!(
            s,
            Subspace::span(f, 3, &[Vector::from_i64(f, &[1, 0, 0]), Vector::from_i64(f, &[0, 1, 0])])
                .unwrap()
        );

        let line = Subspace::span(
            f,
            3,
            &[Vector::from_i64(f, &[1, 1, 0]), Vector::from_i64(f, &[2, 2, 0])],
        )
        .unwrap();
        assert_eq!(line.dim(), 1);
        assert_eq!(line.basis().row(0), Vector::from_i64(f, &[1, 1, 0]));
    }

    #[test]
    fn span_rejects_wrong_length() {
        let f = gf(5);
        let err = Subspace::span(f, 3, &[Vector::from_i64(f, &[1, 2])]);
        assert!(matches!(err, Err(Error::DimensionMismatch { .. })));
    }

    #[test]
    fn sum_and_intersection() {
        let q = FieldSpec::Rationals;
        let e1 = Subspace::span(q, 3, &[Vector::from_i64(q, &[1, 0, 0])]).unwrap();
        let e2 = Subspace::span(q, 3, &[Vector::from_i64(q, &[0, 1, 0])]).unwrap();
        let sum = e1.sum(&e2).unwrap();
        assert_eq!(sum.dim(), 2);

        let u = Subspace::span(
            q,
            3,
            &[Vector::from_i64(q, &[1, 0, 0]), Vector::from_i64(q, &[0, 1, 0])],
        )
        .unwrap();
        let v = Subspace::span(
            q,
            3,
            &[Vector::from_i64(q, &[0, 1, 0]), Vector::from_i64(q, &[0, 0, 1])],
        )
        .unwrap();
        let meet = u.intersect(&v).unwrap();
        assert_eq!(meet, e2);
    }

    #[test]
    fn member_matches_span_growth() {
        let f = gf(3);
        let u = Subspace::span(
            f,
            3,
            &[Vector::from_i64(f, &[1, 2, 0]), Vector::from_i64(f, &[0, 0, 1])],
        )
        .unwrap();
        let inside = Vector::from_i64(f, &[2, 1, 1]);
        let outside = Vector::from_i64(f, &[1, 0, 0]);
        assert!(u.member(&inside).unwrap());
        assert!(!u.member(&outside).unwrap());
    }

    #[test]
    fn grassmann_identity_on_random_pairs() {
        // dim(U+V) + dim(U∩V) = dim U + dim V over GF(3), many pairs.
        let f = gf(3);
        let subs: Vec<Subspace> =
            all_subspaces(f, 3, None, DEFAULT_ENUMERATION_CAP).unwrap().collect();
        let mut checked = 0;
        for (i, u) in subs.iter().enumerate() {
            for v in subs.iter().skip(i) {
                let s = u.sum(v).unwrap();
                let m = u.intersect(v).unwrap();
                assert_eq!(s.dim() + m.dim(), u.dim() + v.dim());
                assert!(s.contains(u).unwrap() && s.contains(v).unwrap());
                assert!(u.contains(&m).unwrap() && v.contains(&m).unwrap());
                checked += 1;
            }
        }
        assert!(checked >= 200);
    }

    #[test]
    fn enumeration_counts_match_recurrence() {
        // Independent oracle: the Gaussian binomial via the product formula.
        fn product_formula(p: u128, n: u64, k: u64) -> u128 {
            let mut num = 1u128;
            let mut den = 1u128;
            for i in 0..k {
                num *= p.pow((n - i) as u32) - 1;
                den *= p.pow((i + 1) as u32) - 1;
            }
            num / den
        }
        for (p, n) in [(2u64, 3usize), (2, 4), (3, 3), (3, 4), (5, 3)] {
            let f = gf(p);
            let all: Vec<Subspace> = all_subspaces(f, n, None, DEFAULT_ENUMERATION_CAP)
                .unwrap()
                .collect();
            let expected: u128 =
                (0..=n).map(|k| product_formula(p as u128, n as u64, k as u64)).sum();
            assert_eq!(all.len() as u128, expected, "p={p} n={n}");
            let unique: HashSet<_> = all.iter().cloned().collect();
            assert_eq!(unique.len(), all.len(), "duplicates for p={p} n={n}");
            for k in 0..=n {
                assert_eq!(
                    gaussian_binomial(p, n, k),
                    product_formula(p as u128, n as u64, k as u64)
                );
            }
        }
    }

    #[test]
    fn enumeration_examples() {
        // GF(3), n=2: one zero subspace, four lines, one plane.
        let f = gf(3);
        let all: Vec<Subspace> = all_subspaces(f, 2, None, DEFAULT_ENUMERATION_CAP)
            .unwrap()
            .collect();
        assert_eq!(all.len(), 6);
        assert_eq!(all.iter().filter(|s| s.dim() == 1).count(), 4);

        assert_eq!(
            all_subspaces(gf(5), 1, None, DEFAULT_ENUMERATION_CAP).unwrap().count(),
            2
        );
        assert_eq!(
            all_subspaces(gf(2), 3, Some(1), DEFAULT_ENUMERATION_CAP).unwrap().count(),
            7
        );
    }

    #[test]
    fn enumeration_cap_and_field_guards() {
        assert!(matches!(
            all_subspaces(FieldSpec::Rationals, 2, None, DEFAULT_ENUMERATION_CAP).map(|_| ()),
            Err(Error::InfiniteField)
        ));
        assert!(matches!(
            all_subspaces(gf(3), 4, None, 10).map(|_| ()),
            Err(Error::EnumerationCapExceeded { .. })
        ));
    }

    #[test]
    fn span_is_idempotent_on_enumerated_subspaces() {
        let f = gf(3);
        for s in all_subspaces(f, 3, None, DEFAULT_ENUMERATION_CAP).unwrap() {
            let again = Subspace::span(f, 3, &s.basis_vectors()).unwrap();
            assert_eq!(again, s);
        }
    }

    #[test]
    fn kernel_of_singular_matrix() {
        let q = FieldSpec::Rationals;
        let m = Matrix::from_i64_rows(q, &[vec![1, 2, 3], vec![2, 4, 6], vec![0, 0, 1]]);
        let k = m.kernel();
        assert_eq!(k.dim(), 1);
        assert!(k.member(&Vector::from_i64(q, &[-2, 1, 0])).unwrap());
    }

    #[test]
    fn deterministic_ordering() {
        let f = gf(3);
        let mut subs: Vec<Subspace> =
            all_subspaces(f, 2, None, DEFAULT_ENUMERATION_CAP).unwrap().collect();
        subs.sort();
        let dims: Vec<usize> = subs.iter().map(Subspace::dim).collect();
        let mut sorted_dims = dims.clone();
        sorted_dims.sort();
        assert_eq!(dims, sorted_dims);
    }
}
