//! Dense exact linear algebra: row reduction, kernels, and subspaces kept in
//! reduced row echelon form.
//!
//! A [`Subspace`] is always stored as the RREF of a spanning set, so two
//! subspaces are equal exactly when their stored bases are equal.

use itertools::Itertools;
use thiserror::Error;

use crate::field::{FieldElem, FieldSpec};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum LinalgError {
    #[error("ambient dimensions differ ({left} vs {right})")]
    AmbientMismatch { left: usize, right: usize },
    #[error("subspace enumeration needs a finite field")]
    InfiniteField,
    #[error("dimension {k} out of range for ambient dimension {n}")]
    DimensionOutOfRange { n: usize, k: usize },
    #[error("ragged or mis-sized matrix data")]
    Shape,
    #[error("matrix is singular")]
    Singular,
}

/// A dense row-major matrix over an exact field.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Matrix {
    rows: usize,
    cols: usize,
    data: Vec<FieldElem>,
    field: FieldSpec,
}

impl Matrix {
    pub fn zeros(field: &FieldSpec, rows: usize, cols: usize) -> Self {
        Matrix {
            rows,
            cols,
            data: vec![field.zero(); rows * cols],
            field: field.clone(),
        }
    }

    pub fn identity(field: &FieldSpec, n: usize) -> Self {
        let mut m = Self::zeros(field, n, n);
        for i in 0..n {
            m.set(i, i, field.one());
        }
        m
    }

    /// Builds a `rows.len() × cols` matrix; every row must have length `cols`.
    pub fn from_rows(
        field: &FieldSpec,
        cols: usize,
        rows: Vec<Vec<FieldElem>>,
    ) -> Result<Self, LinalgError> {
        if rows.iter().any(|r| r.len() != cols) {
            return Err(LinalgError::Shape);
        }
        let n = rows.len();
        Ok(Matrix {
            rows: n,
            cols,
            data: rows.into_iter().flatten().collect(),
            field: field.clone(),
        })
    }

    /// Convenience constructor from small integers.
    pub fn from_i64(field: &FieldSpec, rows: &[&[i64]]) -> Result<Self, LinalgError> {
        let cols = rows.first().map_or(0, |r| r.len());
        let data = rows
            .iter()
            .map(|r| r.iter().map(|&x| field.from_i64(x)).collect())
            .collect();
        Self::from_rows(field, cols, data)
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn field(&self) -> &FieldSpec {
        &self.field
    }

    pub fn get(&self, r: usize, c: usize) -> &FieldElem {
        &self.data[r * self.cols + c]
    }

    pub fn set(&mut self, r: usize, c: usize, v: FieldElem) {
        self.data[r * self.cols + c] = v;
    }

    pub fn row(&self, r: usize) -> &[FieldElem] {
        &self.data[r * self.cols..(r + 1) * self.cols]
    }

    pub fn row_vecs(&self) -> impl Iterator<Item = &[FieldElem]> {
        (0..self.rows).map(move |r| self.row(r))
    }

    pub fn column(&self, c: usize) -> Vec<FieldElem> {
        (0..self.rows).map(|r| self.get(r, c).clone()).collect()
    }

    pub fn transpose(&self) -> Matrix {
        let mut t = Matrix::zeros(&self.field, self.cols, self.rows);
        for r in 0..self.rows {
            for c in 0..self.cols {
                t.set(c, r, self.get(r, c).clone());
            }
        }
        t
    }

    pub fn mul(&self, other: &Matrix) -> Matrix {
        assert_eq!(self.cols, other.rows, "matrix shapes do not compose");
        let f = &self.field;
        let mut out = Matrix::zeros(f, self.rows, other.cols);
        for i in 0..self.rows {
            for k in 0..self.cols {
                let a = self.get(i, k);
                if f.is_zero(a) {
                    continue;
                }
                for j in 0..other.cols {
                    let v = f.mul_add(a, other.get(k, j), out.get(i, j));
                    out.set(i, j, v);
                }
            }
        }
        out
    }

    /// `self · v` for a column vector `v`.
    pub fn mul_vec(&self, v: &[FieldElem]) -> Vec<FieldElem> {
        assert_eq!(self.cols, v.len());
        let f = &self.field;
        (0..self.rows)
            .map(|i| {
                let mut acc = f.zero();
                for (a, b) in self.row(i).iter().zip(v) {
                    acc = f.mul_add(a, b, &acc);
                }
                acc
            })
            .collect()
    }

    pub fn is_zero(&self) -> bool {
        self.data.iter().all(|x| self.field.is_zero(x))
    }

    pub fn add(&self, other: &Matrix) -> Matrix {
        assert_eq!((self.rows, self.cols), (other.rows, other.cols));
        let f = &self.field;
        Matrix {
            rows: self.rows,
            cols: self.cols,
            data: self
                .data
                .iter()
                .zip(&other.data)
                .map(|(a, b)| f.add(a, b))
                .collect(),
            field: f.clone(),
        }
    }

    pub fn scale(&self, c: &FieldElem) -> Matrix {
        let f = &self.field;
        Matrix {
            rows: self.rows,
            cols: self.cols,
            data: self.data.iter().map(|a| f.mul(a, c)).collect(),
            field: f.clone(),
        }
    }

    pub fn pow(&self, mut e: u32) -> Matrix {
        assert_eq!(self.rows, self.cols);
        let mut acc = Matrix::identity(&self.field, self.rows);
        let mut base = self.clone();
        while e > 0 {
            if e & 1 == 1 {
                acc = acc.mul(&base);
            }
            base = base.mul(&base);
            e >>= 1;
        }
        acc
    }

    /// Reduced row echelon form, rank and pivot columns.
    pub fn rref(&self) -> (Matrix, usize, Vec<usize>) {
        let mut m = self.clone();
        let pivots = rref_in_place(&mut m);
        let rank = pivots.len();
        (m, rank, pivots)
    }

    pub fn rank(&self) -> usize {
        self.rref().1
    }

    pub fn inverse(&self) -> Result<Matrix, LinalgError> {
        if self.rows != self.cols {
            return Err(LinalgError::Shape);
        }
        let n = self.rows;
        let f = &self.field;
        let mut aug = Matrix::zeros(f, n, 2 * n);
        for r in 0..n {
            for c in 0..n {
                aug.set(r, c, self.get(r, c).clone());
            }
            aug.set(r, n + r, f.one());
        }
        let pivots = rref_in_place(&mut aug);
        if pivots.len() < n || pivots[n - 1] >= n {
            return Err(LinalgError::Singular);
        }
        let mut inv = Matrix::zeros(f, n, n);
        for r in 0..n {
            for c in 0..n {
                inv.set(r, c, aug.get(r, n + c).clone());
            }
        }
        Ok(inv)
    }

    /// Drops zero rows.
    fn nonzero_rows(mut self) -> Matrix {
        let keep: Vec<usize> = (0..self.rows)
            .filter(|&r| self.row(r).iter().any(|x| !self.field.is_zero(x)))
            .collect();
        let mut data = Vec::with_capacity(keep.len() * self.cols);
        for &r in &keep {
            data.extend_from_slice(self.row(r));
        }
        self.data = data;
        self.rows = keep.len();
        self
    }
}

fn rref_in_place(m: &mut Matrix) -> Vec<usize> {
    let f = m.field.clone();
    let (rows, cols) = (m.rows, m.cols);
    let mut pivots = Vec::new();
    let mut r = 0;
    for c in 0..cols {
        if r == rows {
            break;
        }
        let Some(p) = (r..rows).find(|&i| !f.is_zero(m.get(i, c))) else {
            continue;
        };
        if p != r {
            for j in 0..cols {
                m.data.swap(p * cols + j, r * cols + j);
            }
        }
        let inv = f.inv(m.get(r, c)).expect("pivot is nonzero");
        for j in c..cols {
            let v = f.mul(m.get(r, j), &inv);
            m.set(r, j, v);
        }
        for i in 0..rows {
            if i == r {
                continue;
            }
            let factor = m.get(i, c).clone();
            if f.is_zero(&factor) {
                continue;
            }
            let neg = f.neg(&factor);
            for j in c..cols {
                let v = f.mul_add(&neg, m.get(r, j), m.get(i, j));
                m.set(i, j, v);
            }
        }
        pivots.push(c);
        r += 1;
    }
    pivots
}

/// RREF, rank and pivots of `m`.
pub fn rref_rank(m: &Matrix) -> (Matrix, usize, Vec<usize>) {
    m.rref()
}

/// Null space `{v : m v = 0}` as a subspace of `F^cols`.
pub fn kernel(m: &Matrix) -> Subspace {
    let f = m.field();
    let n = m.cols();
    let (r, rank, pivots) = m.rref();
    let free: Vec<usize> = (0..n).filter(|c| !pivots.contains(c)).collect();
    let mut basis = Vec::with_capacity(free.len());
    for &fc in &free {
        let mut v = vec![f.zero(); n];
        v[fc] = f.one();
        for (i, &pc) in pivots.iter().enumerate().take(rank) {
            v[pc] = f.neg(r.get(i, fc));
        }
        basis.push(v);
    }
    Subspace::span(f, n, basis)
}

/// A subspace of `F^n`, stored as the RREF of a basis.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Subspace {
    ambient: usize,
    basis: Matrix,
    pivots: Vec<usize>,
}

/// What [`subspace_combine`] should compute.
#[derive(Debug, Clone)]
pub enum CombineMode {
    Sum,
    Intersect,
    ContainsVector(Vec<FieldElem>),
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Combined {
    Subspace(Subspace),
    Contains(bool),
}

/// `U + V`, `U ∩ V`, or membership of a vector in `U`.
pub fn subspace_combine(
    u: &Subspace,
    v: Option<&Subspace>,
    mode: CombineMode,
) -> Result<Combined, LinalgError> {
    match mode {
        CombineMode::Sum => Ok(Combined::Subspace(u.sum(v.ok_or(LinalgError::Shape)?)?)),
        CombineMode::Intersect => Ok(Combined::Subspace(
            u.intersect(v.ok_or(LinalgError::Shape)?)?,
        )),
        CombineMode::ContainsVector(x) => {
            if x.len() != u.ambient {
                return Err(LinalgError::AmbientMismatch {
                    left: u.ambient,
                    right: x.len(),
                });
            }
            Ok(Combined::Contains(u.contains_vector(&x)))
        }
    }
}

impl Subspace {
    pub fn zero(field: &FieldSpec, n: usize) -> Self {
        Subspace {
            ambient: n,
            basis: Matrix::zeros(field, 0, n),
            pivots: Vec::new(),
        }
    }

    pub fn whole(field: &FieldSpec, n: usize) -> Self {
        Subspace {
            ambient: n,
            basis: Matrix::identity(field, n),
            pivots: (0..n).collect(),
        }
    }

    /// Span of arbitrary vectors of length `n`.
    pub fn span(field: &FieldSpec, n: usize, vectors: Vec<Vec<FieldElem>>) -> Self {
        let m = Matrix::from_rows(field, n, vectors).expect("vectors of ambient length");
        Self::from_matrix(m)
    }

    /// Row space of `m`.
    pub fn from_matrix(m: Matrix) -> Self {
        let n = m.cols();
        let (r, _, pivots) = m.rref();
        Subspace {
            ambient: n,
            basis: r.nonzero_rows(),
            pivots,
        }
    }

    /// Span of the standard basis vectors `e_i`, `i ∈ idx` (0-based).
    pub fn coordinate(field: &FieldSpec, n: usize, idx: &[usize]) -> Self {
        let vecs = idx
            .iter()
            .map(|&i| {
                let mut v = vec![field.zero(); n];
                v[i] = field.one();
                v
            })
            .collect();
        Self::span(field, n, vecs)
    }

    /// Wraps a matrix already known to be in RREF with no zero rows.
    pub(crate) fn from_rref_unchecked(basis: Matrix, pivots: Vec<usize>) -> Self {
        debug_assert_eq!(basis.rows(), pivots.len());
        Subspace {
            ambient: basis.cols(),
            basis,
            pivots,
        }
    }

    pub fn dim(&self) -> usize {
        self.pivots.len()
    }

    pub fn ambient_dim(&self) -> usize {
        self.ambient
    }

    pub fn field(&self) -> &FieldSpec {
        self.basis.field()
    }

    pub fn basis(&self) -> &Matrix {
        &self.basis
    }

    pub fn basis_vectors(&self) -> impl Iterator<Item = &[FieldElem]> {
        self.basis.row_vecs()
    }

    pub fn pivots(&self) -> &[usize] {
        &self.pivots
    }

    pub fn is_zero(&self) -> bool {
        self.dim() == 0
    }

    pub fn is_whole(&self) -> bool {
        self.dim() == self.ambient
    }

    /// Coordinates not used as pivots, in increasing order.
    pub fn non_pivots(&self) -> Vec<usize> {
        (0..self.ambient)
            .filter(|c| !self.pivots.contains(c))
            .collect()
    }

    /// Residue of `v` modulo the subspace: eliminates every pivot coordinate.
    pub fn reduce(&self, v: &[FieldElem]) -> Vec<FieldElem> {
        let f = self.field();
        let mut out = v.to_vec();
        for (i, &p) in self.pivots.iter().enumerate() {
            if f.is_zero(&out[p]) {
                continue;
            }
            let c = f.neg(&out[p]);
            for (j, b) in self.basis.row(i).iter().enumerate().skip(p) {
                out[j] = f.mul_add(&c, b, &out[j]);
            }
        }
        out
    }

    pub fn contains_vector(&self, v: &[FieldElem]) -> bool {
        let f = self.field();
        self.reduce(v).iter().all(|x| f.is_zero(x))
    }

    pub fn contains(&self, other: &Subspace) -> bool {
        other.basis_vectors().all(|v| self.contains_vector(v))
    }

    fn check_ambient(&self, other: &Subspace) -> Result<(), LinalgError> {
        if self.ambient != other.ambient {
            return Err(LinalgError::AmbientMismatch {
                left: self.ambient,
                right: other.ambient,
            });
        }
        Ok(())
    }

    pub fn sum(&self, other: &Subspace) -> Result<Subspace, LinalgError> {
        self.check_ambient(other)?;
        let rows = self
            .basis_vectors()
            .chain(other.basis_vectors())
            .map(|r| r.to_vec())
            .collect();
        Ok(Subspace::span(self.field(), self.ambient, rows))
    }

    pub fn intersect(&self, other: &Subspace) -> Result<Subspace, LinalgError> {
        self.check_ambient(other)?;
        // x = Σ a_i u_i = Σ b_j v_j: kernel of [Uᵀ | −Vᵀ], then map back through U.
        let f = self.field();
        let (k1, k2) = (self.dim(), other.dim());
        if k1 == 0 || k2 == 0 {
            return Ok(Subspace::zero(f, self.ambient));
        }
        let mut m = Matrix::zeros(f, self.ambient, k1 + k2);
        for c in 0..self.ambient {
            for i in 0..k1 {
                m.set(c, i, self.basis.get(i, c).clone());
            }
            for j in 0..k2 {
                m.set(c, k1 + j, f.neg(other.basis.get(j, c)));
            }
        }
        let ker = kernel(&m);
        let vecs = ker
            .basis_vectors()
            .map(|coef| {
                let mut v = vec![f.zero(); self.ambient];
                for (i, a) in coef[..k1].iter().enumerate() {
                    if f.is_zero(a) {
                        continue;
                    }
                    for (c, x) in self.basis.row(i).iter().enumerate() {
                        v[c] = f.mul_add(a, x, &v[c]);
                    }
                }
                v
            })
            .collect();
        Ok(Subspace::span(f, self.ambient, vecs))
    }

    /// Image under a linear map given as an `n × n` matrix acting on columns.
    pub fn image_under(&self, m: &Matrix) -> Subspace {
        let rows = self.basis_vectors().map(|v| m.mul_vec(v)).collect();
        Subspace::span(self.field(), m.rows(), rows)
    }
}

/// Number of k-dimensional subspaces of `F_q^n`.
pub fn gaussian_binomial(n: usize, k: usize, q: u128) -> u128 {
    if k > n {
        return 0;
    }
    let mut num: u128 = 1;
    let mut den: u128 = 1;
    for i in 0..k {
        num *= q.pow((n - i) as u32) - 1;
        den *= q.pow((i + 1) as u32) - 1;
    }
    num / den
}

/// Pivot patterns of k-subspaces of `F^n` in lexicographic order.
pub fn pivot_patterns(n: usize, k: usize) -> impl Iterator<Item = Vec<usize>> {
    (0..n).combinations(k)
}

/// Positions `(row, col)` that are free in an RREF matrix with these pivots,
/// in row-major order.
pub fn free_positions(n: usize, pivots: &[usize]) -> Vec<(usize, usize)> {
    let mut out = Vec::new();
    for (i, &p) in pivots.iter().enumerate() {
        for c in p + 1..n {
            if !pivots.contains(&c) {
                out.push((i, c));
            }
        }
    }
    out
}

/// Lazily enumerates every k-dimensional subspace of `F^n` over a finite field.
///
/// Order: pivot patterns lexicographically, then the free entries read in
/// row-major order as an odometer whose last entry moves fastest.
pub fn enumerate_subspaces(
    n: usize,
    k: usize,
    field: &FieldSpec,
) -> Result<SubspaceIter, LinalgError> {
    if k > n {
        return Err(LinalgError::DimensionOutOfRange { n, k });
    }
    let q = field.order().ok_or(LinalgError::InfiniteField)?;
    Ok(SubspaceIter {
        field: field.clone(),
        n,
        q,
        patterns: Box::new(pivot_patterns(n, k)),
        current: None,
    })
}

/// Every subspace with the given pivot pattern, in odometer order.
pub fn enumerate_pattern(
    n: usize,
    pivots: Vec<usize>,
    field: &FieldSpec,
) -> Result<SubspaceIter, LinalgError> {
    let q = field.order().ok_or(LinalgError::InfiniteField)?;
    let free = free_positions(n, &pivots);
    Ok(SubspaceIter {
        field: field.clone(),
        n,
        q,
        patterns: Box::new(std::iter::empty()),
        current: Some(PatternState {
            odometer: vec![0; free.len()],
            free,
            pivots,
            done: false,
        }),
    })
}

struct PatternState {
    pivots: Vec<usize>,
    free: Vec<(usize, usize)>,
    odometer: Vec<u64>,
    done: bool,
}

pub struct SubspaceIter {
    field: FieldSpec,
    n: usize,
    q: u64,
    patterns: Box<dyn Iterator<Item = Vec<usize>> + Send>,
    current: Option<PatternState>,
}

impl Iterator for SubspaceIter {
    type Item = Subspace;

    fn next(&mut self) -> Option<Subspace> {
        loop {
            if let Some(st) = &mut self.current {
                if !st.done {
                    let f = &self.field;
                    let mut m = Matrix::zeros(f, st.pivots.len(), self.n);
                    for (i, &p) in st.pivots.iter().enumerate() {
                        m.set(i, p, f.one());
                    }
                    for (&(r, c), &x) in st.free.iter().zip(&st.odometer) {
                        m.set(r, c, f.nth_element(x));
                    }
                    // advance: last position fastest
                    st.done = true;
                    for d in st.odometer.iter_mut().rev() {
                        *d += 1;
                        if *d < self.q {
                            st.done = false;
                            break;
                        }
                        *d = 0;
                    }
                    return Some(Subspace::from_rref_unchecked(m, st.pivots.clone()));
                }
            }
            let pivots = self.patterns.next()?;
            let free = free_positions(self.n, &pivots);
            self.current = Some(PatternState {
                odometer: vec![0; free.len()],
                free,
                pivots,
                done: false,
            });
        }
    }
}
