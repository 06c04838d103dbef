//! Poisson algebras given by structure constants.
//!
//! The commutative product is stored through `e_i · e_j = Σ λ_ij^k e_k` for
//! `i ≤ j` and the bracket through `[e_i, e_j] = Σ μ_ij^k e_k` for `i < j`;
//! the missing halves follow from symmetry and antisymmetry. Internally both
//! tables are expanded to all ordered pairs for fast evaluation.
//!
//! Indices are 0-based in this API. The document format and user-facing
//! reports use 1-based labels `e₁, …, eₙ`.

mod operators;
mod series;

use std::collections::BTreeMap;
use std::fmt;

use serde::Serialize;
use thiserror::Error;

use crate::field::{FieldElem, FieldSpec};
use crate::linalg::{LinalgError, Matrix, Subspace};

pub use operators::{fitting_decomposition, AdjointKind, FittingDecomposition, SubspaceClass};
pub use series::{SeriesResult, SolvabilityClass};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum AlgebraError {
    #[error("basis index {index} out of range for dimension {dim}")]
    IndexOutOfRange { index: usize, dim: usize },
    #[error("bracket entry [e{0}, e{0}] must vanish")]
    BracketDiagonal(usize),
    #[error(transparent)]
    Linalg(#[from] LinalgError),
    #[error("subspace is not a subalgebra")]
    NotASubalgebra,
    #[error("subspace is not an ideal")]
    NotAnIdeal,
    #[error("operator family does not commute")]
    NonCommutingFamily,
    #[error("operator family is empty")]
    EmptyFamily,
    #[error("lower central series formulas disagree at term {0}")]
    FormulaMismatch(usize),
    #[error("no one-dimensional subalgebra found by the available strategies")]
    NotFound,
    #[error("field mismatch between algebra and argument")]
    FieldMismatch,
}

/// Which multiplication(s) a subspace-level operation uses.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum ProductKind {
    Dot,
    Bracket,
    Both,
}

impl ProductKind {
    fn dot(self) -> bool {
        matches!(self, ProductKind::Dot | ProductKind::Both)
    }

    fn bracket(self) -> bool {
        matches!(self, ProductKind::Bracket | ProductKind::Both)
    }
}

/// One structure-constant entry `(i, j, k, c)`: the product of `e_i` and
/// `e_j` has coefficient `c` on `e_k`.
pub type Entry = (usize, usize, usize, FieldElem);

type Table = Vec<Vec<(usize, FieldElem)>>;

#[derive(Debug, Clone)]
pub struct PoissonAlgebra {
    dim: usize,
    field: FieldSpec,
    // n·n tables indexed by i·n + j, each a sparse list of (k, coefficient)
    dot: Table,
    bracket: Table,
    validated: bool,
}

// Equality compares the structure, not whether validation has run.
impl PartialEq for PoissonAlgebra {
    fn eq(&self, other: &Self) -> bool {
        self.dim == other.dim
            && self.field == other.field
            && self.dot == other.dot
            && self.bracket == other.bracket
    }
}

impl Eq for PoissonAlgebra {}

impl PoissonAlgebra {
    /// Builds an algebra from 0-based entries. Dot entries with `i > j` are
    /// read as `(j, i)`; bracket entries with `i > j` are read as `(j, i)`
    /// with negated coefficient. Repeated entries are summed.
    pub fn new(
        field: &FieldSpec,
        dim: usize,
        dot: Vec<Entry>,
        bracket: Vec<Entry>,
    ) -> Result<Self, AlgebraError> {
        let mut d: BTreeMap<(usize, usize, usize), FieldElem> = BTreeMap::new();
        let mut b: BTreeMap<(usize, usize, usize), FieldElem> = BTreeMap::new();
        let check = |x: usize| {
            if x >= dim {
                Err(AlgebraError::IndexOutOfRange { index: x + 1, dim })
            } else {
                Ok(())
            }
        };
        for (i, j, k, c) in dot {
            check(i)?;
            check(j)?;
            check(k)?;
            let key = (i.min(j), i.max(j), k);
            let cur = d.remove(&key).unwrap_or_else(|| field.zero());
            d.insert(key, field.add(&cur, &c));
        }
        for (i, j, k, c) in bracket {
            check(i)?;
            check(j)?;
            check(k)?;
            if i == j {
                if field.is_zero(&c) {
                    continue;
                }
                return Err(AlgebraError::BracketDiagonal(i + 1));
            }
            let (key, c) = if i < j {
                ((i, j, k), c)
            } else {
                ((j, i, k), field.neg(&c))
            };
            let cur = b.remove(&key).unwrap_or_else(|| field.zero());
            b.insert(key, field.add(&cur, &c));
        }
        let mut dt: Table = vec![Vec::new(); dim * dim];
        let mut bt: Table = vec![Vec::new(); dim * dim];
        for ((i, j, k), c) in d {
            if field.is_zero(&c) {
                continue;
            }
            dt[i * dim + j].push((k, c.clone()));
            if i != j {
                dt[j * dim + i].push((k, c));
            }
        }
        for ((i, j, k), c) in b {
            if field.is_zero(&c) {
                continue;
            }
            bt[j * dim + i].push((k, field.neg(&c)));
            bt[i * dim + j].push((k, c));
        }
        Ok(PoissonAlgebra {
            dim,
            field: field.clone(),
            dot: dt,
            bracket: bt,
            validated: false,
        })
    }

    /// Builds an algebra from 1-based integer entries, the way products are
    /// usually written by hand: `(1, 1, 2, 1)` means `e₁·e₁ = e₂`.
    pub fn from_int_table(
        field: &FieldSpec,
        dim: usize,
        dot: &[(usize, usize, usize, i64)],
        bracket: &[(usize, usize, usize, i64)],
    ) -> Result<Self, AlgebraError> {
        let conv = |t: &[(usize, usize, usize, i64)]| -> Result<Vec<Entry>, AlgebraError> {
            t.iter()
                .map(|&(i, j, k, c)| {
                    if i == 0 || j == 0 || k == 0 {
                        return Err(AlgebraError::IndexOutOfRange { index: 0, dim });
                    }
                    Ok((i - 1, j - 1, k - 1, field.from_i64(c)))
                })
                .collect()
        };
        Self::new(field, dim, conv(dot)?, conv(bracket)?)
    }

    /// The algebra of dimension `dim` with both products zero.
    pub fn zero(field: &FieldSpec, dim: usize) -> Self {
        Self::new(field, dim, Vec::new(), Vec::new()).expect("empty tables are valid")
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn field(&self) -> &FieldSpec {
        &self.field
    }

    pub fn is_validated(&self) -> bool {
        self.validated
    }

    /// Runs [`PoissonAlgebra::validate`] and marks the algebra as validated on success.
    pub fn into_validated(mut self) -> Result<Self, Box<AxiomReport>> {
        let report = self.validate();
        if !report.ok() {
            return Err(Box::new(report));
        }
        self.validated = true;
        Ok(self)
    }

    /// Canonical dot entries `(i ≤ j, k)`, sorted.
    pub fn dot_entries(&self) -> Vec<Entry> {
        self.entries(&self.dot, |i, j| i <= j)
    }

    /// Canonical bracket entries `(i < j, k)`, sorted.
    pub fn bracket_entries(&self) -> Vec<Entry> {
        self.entries(&self.bracket, |i, j| i < j)
    }

    fn entries(&self, t: &Table, keep: impl Fn(usize, usize) -> bool) -> Vec<Entry> {
        let n = self.dim;
        let mut out = Vec::new();
        for i in 0..n {
            for j in 0..n {
                if keep(i, j) {
                    for (k, c) in &t[i * n + j] {
                        out.push((i, j, *k, c.clone()));
                    }
                }
            }
        }
        out
    }

    pub fn dot_is_zero(&self) -> bool {
        self.dot.iter().all(Vec::is_empty)
    }

    pub fn bracket_is_zero(&self) -> bool {
        self.bracket.iter().all(Vec::is_empty)
    }

    /// The same space with the bracket forgotten.
    pub fn associative_part(&self) -> Self {
        let mut a = self.clone();
        a.bracket = vec![Vec::new(); self.dim * self.dim];
        a
    }

    /// The same space with the commutative product forgotten.
    pub fn lie_part(&self) -> Self {
        let mut a = self.clone();
        a.dot = vec![Vec::new(); self.dim * self.dim];
        a
    }

    /// `self ⊕ other` with the basis of `other` appended.
    pub fn direct_sum(&self, other: &PoissonAlgebra) -> Self {
        let n = self.dim;
        let shift = |es: Vec<Entry>| es.into_iter().map(|(i, j, k, c)| (i + n, j + n, k + n, c));
        let dot = self
            .dot_entries()
            .into_iter()
            .chain(shift(other.dot_entries()))
            .collect();
        let bracket = self
            .bracket_entries()
            .into_iter()
            .chain(shift(other.bracket_entries()))
            .collect();
        Self::new(&self.field, n + other.dim, dot, bracket).expect("indices in range")
    }

    pub fn basis_vector(&self, i: usize) -> Vec<FieldElem> {
        let mut v = vec![self.field.zero(); self.dim];
        v[i] = self.field.one();
        v
    }

    fn apply(&self, t: &Table, x: &[FieldElem], y: &[FieldElem]) -> Vec<FieldElem> {
        let f = &self.field;
        let n = self.dim;
        let mut out = vec![f.zero(); n];
        for (i, xi) in x.iter().enumerate() {
            if f.is_zero(xi) {
                continue;
            }
            for (j, yj) in y.iter().enumerate() {
                let row = &t[i * n + j];
                if row.is_empty() || f.is_zero(yj) {
                    continue;
                }
                let s = f.mul(xi, yj);
                for (k, c) in row {
                    out[*k] = f.mul_add(&s, c, &out[*k]);
                }
            }
        }
        out
    }

    /// `x · y` in coordinates.
    pub fn dot(&self, x: &[FieldElem], y: &[FieldElem]) -> Vec<FieldElem> {
        self.apply(&self.dot, x, y)
    }

    /// `[x, y]` in coordinates.
    pub fn bracket(&self, x: &[FieldElem], y: &[FieldElem]) -> Vec<FieldElem> {
        self.apply(&self.bracket, x, y)
    }

    /// Sparse `e_i · e_j`.
    pub fn dot_basis(&self, i: usize, j: usize) -> &[(usize, FieldElem)] {
        &self.dot[i * self.dim + j]
    }

    /// Sparse `[e_i, e_j]`.
    pub fn bracket_basis(&self, i: usize, j: usize) -> &[(usize, FieldElem)] {
        &self.bracket[i * self.dim + j]
    }

    /// The products of `x` and `y` selected by `kind`, dot first.
    pub fn products(
        &self,
        kind: ProductKind,
        x: &[FieldElem],
        y: &[FieldElem],
    ) -> Vec<Vec<FieldElem>> {
        let mut out = Vec::with_capacity(2);
        if kind.dot() {
            out.push(self.dot(x, y));
        }
        if kind.bracket() {
            out.push(self.bracket(x, y));
        }
        out
    }

    fn dense(&self, sparse: &[(usize, FieldElem)]) -> Vec<FieldElem> {
        let mut v = vec![self.field.zero(); self.dim];
        for (k, c) in sparse {
            v[*k] = c.clone();
        }
        v
    }

    /// Checks associativity, Jacobi and the Leibniz rule on every ordered
    /// basis triple. Commutativity and antisymmetry hold by construction.
    ///
    /// Jacobi is tested in the form `[[x,y],z] + [[y,z],x] + [[z,x],y] = 0`.
    pub fn validate(&self) -> AxiomReport {
        let n = self.dim;
        let f = &self.field;
        let e: Vec<Vec<FieldElem>> = (0..n).map(|i| self.basis_vector(i)).collect();
        let dotb: Vec<Vec<FieldElem>> = (0..n * n).map(|p| self.dense(&self.dot[p])).collect();
        let brb: Vec<Vec<FieldElem>> = (0..n * n).map(|p| self.dense(&self.bracket[p])).collect();
        let mut report = AxiomReport {
            commutative_ok: true,
            associative_ok: true,
            antisymmetric_ok: true,
            jacobi_ok: true,
            leibniz_ok: true,
            first_failure: None,
        };
        let add = |a: &[FieldElem], b: &[FieldElem]| -> Vec<FieldElem> {
            a.iter().zip(b).map(|(x, y)| f.add(x, y)).collect()
        };
        for i in 0..n {
            for j in 0..n {
                for k in 0..n {
                    let mut failures = Vec::new();
                    // (e_i e_j) e_k = e_i (e_j e_k)
                    let l = self.dot(&dotb[i * n + j], &e[k]);
                    let r = self.dot(&e[i], &dotb[j * n + k]);
                    if l != r {
                        report.associative_ok = false;
                        failures.push((Axiom::Associativity, l, r));
                    }
                    let l = add(
                        &add(
                            &self.bracket(&brb[i * n + j], &e[k]),
                            &self.bracket(&brb[j * n + k], &e[i]),
                        ),
                        &self.bracket(&brb[k * n + i], &e[j]),
                    );
                    let zero = vec![f.zero(); n];
                    if l != zero {
                        report.jacobi_ok = false;
                        failures.push((Axiom::Jacobi, l, zero));
                    }
                    // [e_i e_j, e_k] = [e_i, e_k] e_j + e_i [e_j, e_k]
                    let l = self.bracket(&dotb[i * n + j], &e[k]);
                    let r = add(
                        &self.dot(&brb[i * n + k], &e[j]),
                        &self.dot(&e[i], &brb[j * n + k]),
                    );
                    if l != r {
                        report.leibniz_ok = false;
                        failures.push((Axiom::Leibniz, l, r));
                    }
                    if report.first_failure.is_none() {
                        if let Some((axiom, left, right)) = failures.into_iter().next() {
                            report.first_failure = Some(AxiomFailure {
                                axiom,
                                triple: [i + 1, j + 1, k + 1],
                                left,
                                right,
                            });
                        }
                    }
                }
            }
        }
        report
    }

    /// The same algebra in the basis `f_a = Σ_i t[i][a] e_i` (columns of `t`).
    pub fn transport(&self, t: &Matrix) -> Result<Self, AlgebraError> {
        let n = self.dim;
        if t.rows() != n || t.cols() != n {
            return Err(LinalgError::Shape.into());
        }
        let tinv = t.inverse()?;
        let cols: Vec<Vec<FieldElem>> = (0..n).map(|a| t.column(a)).collect();
        let mut dot = Vec::new();
        let mut bracket = Vec::new();
        for a in 0..n {
            for b in a..n {
                let d = tinv.mul_vec(&self.dot(&cols[a], &cols[b]));
                dot.extend(d.into_iter().enumerate().map(|(k, c)| (a, b, k, c)));
                if a < b {
                    let br = tinv.mul_vec(&self.bracket(&cols[a], &cols[b]));
                    bracket.extend(br.into_iter().enumerate().map(|(k, c)| (a, b, k, c)));
                }
            }
        }
        let mut out = Self::new(&self.field, n, dot, bracket)?;
        out.validated = self.validated;
        Ok(out)
    }

    pub fn whole(&self) -> Subspace {
        Subspace::whole(&self.field, self.dim)
    }

    fn check_ambient(&self, u: &Subspace) -> Result<(), AlgebraError> {
        if u.ambient_dim() != self.dim {
            return Err(LinalgError::AmbientMismatch {
                left: self.dim,
                right: u.ambient_dim(),
            }
            .into());
        }
        Ok(())
    }

    /// Span of all products of basis vectors of `u` with basis vectors of `v`.
    pub fn product_space(
        &self,
        u: &Subspace,
        v: &Subspace,
        kind: ProductKind,
    ) -> Result<Subspace, AlgebraError> {
        self.check_ambient(u)?;
        self.check_ambient(v)?;
        let mut rows = Vec::new();
        for x in u.basis_vectors() {
            for y in v.basis_vectors() {
                rows.extend(self.products(kind, x, y));
            }
        }
        Ok(Subspace::span(&self.field, self.dim, rows))
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Axiom {
    Associativity,
    Jacobi,
    Leibniz,
}

/// The first failing identity; `triple` uses 1-based basis labels.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct AxiomFailure {
    pub axiom: Axiom,
    pub triple: [usize; 3],
    pub left: Vec<FieldElem>,
    pub right: Vec<FieldElem>,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct AxiomReport {
    pub commutative_ok: bool,
    pub associative_ok: bool,
    pub antisymmetric_ok: bool,
    pub jacobi_ok: bool,
    pub leibniz_ok: bool,
    pub first_failure: Option<AxiomFailure>,
}

impl AxiomReport {
    pub fn ok(&self) -> bool {
        self.commutative_ok
            && self.associative_ok
            && self.antisymmetric_ok
            && self.jacobi_ok
            && self.leibniz_ok
    }
}

impl fmt::Display for AxiomReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let flag = |b: bool| if b { "ok" } else { "FAIL" };
        write!(
            f,
            "commutative {}, associative {}, antisymmetric {}, jacobi {}, leibniz {}",
            flag(self.commutative_ok),
            flag(self.associative_ok),
            flag(self.antisymmetric_ok),
            flag(self.jacobi_ok),
            flag(self.leibniz_ok)
        )?;
        if let Some(fail) = &self.first_failure {
            let [i, j, k] = fail.triple;
            write!(f, "; first failure: {:?} at (e{i}, e{j}, e{k})", fail.axiom)?;
        }
        Ok(())
    }
}

pub(crate) fn is_zero_vec(f: &FieldSpec, v: &[FieldElem]) -> bool {
    v.iter().all(|x| f.is_zero(x))
}

#[cfg(test)]
pub(crate) mod tests {
    use super::*;

    pub fn vec_of(f: &FieldSpec, xs: &[i64]) -> Vec<FieldElem> {
        xs.iter().map(|&x| f.from_i64(x)).collect()
    }

    pub fn p3_14(f: &FieldSpec) -> PoissonAlgebra {
        PoissonAlgebra::from_int_table(f, 3, &[(1, 1, 2, 1)], &[(1, 3, 3, 1)]).unwrap()
    }

    pub fn p3_18(f: &FieldSpec) -> PoissonAlgebra {
        PoissonAlgebra::from_int_table(
            f,
            3,
            &[(1, 1, 1, 1), (1, 2, 2, 1), (1, 3, 3, 1)],
            &[(2, 3, 2, 1)],
        )
        .unwrap()
    }

    pub fn p3_20(f: &FieldSpec) -> PoissonAlgebra {
        PoissonAlgebra::from_int_table(f, 3, &[(1, 1, 1, 1)], &[(2, 3, 2, 1)]).unwrap()
    }

    pub fn p4_7(f: &FieldSpec) -> PoissonAlgebra {
        PoissonAlgebra::from_int_table(f, 4, &[(1, 1, 4, 1)], &[(2, 3, 4, 1)]).unwrap()
    }

    pub fn p4_14(f: &FieldSpec) -> PoissonAlgebra {
        PoissonAlgebra::from_int_table(f, 4, &[(1, 1, 2, 1), (1, 2, 4, 1)], &[(1, 3, 4, 1)])
            .unwrap()
    }

    #[test]
    fn validate_examples() {
        let f = FieldSpec::Prime(5);
        assert!(p4_7(&f).validate().ok());

        let bad = PoissonAlgebra::from_int_table(&f, 2, &[(1, 1, 1, 1)], &[(1, 2, 1, 1)]).unwrap();
        let r = bad.validate();
        assert!(!r.leibniz_ok && r.associative_ok && r.jacobi_ok);
        let fail = r.first_failure.unwrap();
        assert_eq!(fail.axiom, Axiom::Leibniz);
        assert_eq!(fail.triple, [1, 1, 2]);
        assert_eq!(fail.left, vec_of(&f, &[1, 0]));
        assert_eq!(fail.right, vec_of(&f, &[2, 0]));

        let q = FieldSpec::Rationals;
        let nj =
            PoissonAlgebra::from_int_table(&q, 3, &[], &[(1, 2, 3, 1), (2, 3, 1, 1), (3, 1, 1, 1)])
                .unwrap();
        let r = nj.validate();
        assert!(!r.jacobi_ok);
        let fail = r.first_failure.unwrap();
        assert_eq!(fail.axiom, Axiom::Jacobi);
        // Jacobi vanishes on triples with a repeated index
        assert_eq!(fail.triple, [1, 2, 3]);
        assert_eq!(fail.left, vec_of(&q, &[0, 0, 1]));
    }

    #[test]
    fn storage_conventions() {
        let f = FieldSpec::Prime(7);
        let a = PoissonAlgebra::from_int_table(&f, 3, &[(2, 1, 3, 1)], &[(3, 1, 1, 1)]).unwrap();
        assert_eq!(a.dot_entries(), vec![(0, 1, 2, f.one())]);
        assert_eq!(a.bracket_entries(), vec![(0, 2, 0, f.from_i64(-1))]);
        assert!(matches!(
            PoissonAlgebra::from_int_table(&f, 2, &[], &[(1, 1, 2, 1)]),
            Err(AlgebraError::BracketDiagonal(1))
        ));
        assert!(matches!(
            PoissonAlgebra::from_int_table(&f, 3, &[(1, 5, 2, 1)], &[]),
            Err(AlgebraError::IndexOutOfRange { index: 5, dim: 3 })
        ));
    }

    #[test]
    fn product_space_examples() {
        let f = FieldSpec::Prime(5);
        let a = p3_14(&f);
        let w = a.whole();
        assert_eq!(
            a.product_space(&w, &w, ProductKind::Both).unwrap(),
            Subspace::coordinate(&f, 3, &[1, 2])
        );
        let z = PoissonAlgebra::zero(&f, 3);
        assert!(z
            .product_space(&w, &w, ProductKind::Both)
            .unwrap()
            .is_zero());
        let b = p3_20(&f);
        let u = Subspace::coordinate(&f, 3, &[1, 2]);
        assert!(b.product_space(&u, &u, ProductKind::Dot).unwrap().is_zero());
        assert!(matches!(
            a.product_space(&Subspace::whole(&f, 2), &w, ProductKind::Dot),
            Err(AlgebraError::Linalg(LinalgError::AmbientMismatch { .. }))
        ));
    }

    #[test]
    fn transport_identity_and_validity() {
        let f = FieldSpec::Prime(5);
        let a = p3_14(&f);
        assert_eq!(a.transport(&Matrix::identity(&f, 3)).unwrap(), a);
        let t = Matrix::from_i64(&f, &[&[1, 2, 0], &[0, 1, 3], &[4, 0, 2]]).unwrap();
        assert!(a.transport(&t).unwrap().validate().ok());
    }
}
