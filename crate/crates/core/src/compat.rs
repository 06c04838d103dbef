//! Commutative products compatible with a given Lie bracket.
//!
//! The Leibniz rule is linear in the unknown dot tensor, so the compatible
//! products form a subspace. Associativity is quadratic and is filtered by
//! enumerating that subspace over a finite field.

use rayon::prelude::*;
use thiserror::Error;

use crate::field::{FieldElem, FieldSpec};
use crate::linalg::{kernel, Matrix, Subspace};
use crate::poisson::{AlgebraError, AxiomReport, Entry, PoissonAlgebra};

pub const DEFAULT_BUDGET: u64 = 1_000_000;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum CompatError {
    #[error("the bracket is not a Lie bracket: {0}")]
    JacobiFails(Box<AxiomReport>),
    #[error("{points} points exceed the enumeration budget of {budget}")]
    BudgetExceeded { points: u128, budget: u64 },
    #[error("enumeration needs a finite field")]
    InfiniteField,
    #[error(transparent)]
    Algebra(#[from] AlgebraError),
}

/// Solutions of the Leibniz constraints for a fixed bracket.
///
/// Coordinates index the unknowns `e_i·e_j → e_k` with `i ≤ j`, ordered
/// lexicographically by `(i, j, k)`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ProductSpace {
    pub lie: PoissonAlgebra,
    /// Canonical (reduced echelon) basis of the solution space.
    pub basis: Vec<Vec<FieldElem>>,
}

impl ProductSpace {
    pub fn dimension(&self) -> usize {
        self.basis.len()
    }

    /// The unknown `(i, j, k)` behind each coordinate, 0-based.
    pub fn unknowns(&self) -> Vec<(usize, usize, usize)> {
        unknowns(self.lie.dim())
    }

    /// The dot tensor with the given coordinates (one per unknown).
    pub fn tensor(&self, coords: &[FieldElem]) -> Vec<Entry> {
        let f = self.lie.field();
        self.unknowns()
            .into_iter()
            .zip(coords)
            .filter(|(_, c)| !f.is_zero(c))
            .map(|((i, j, k), c)| (i, j, k, c.clone()))
            .collect()
    }

    pub fn basis_tensors(&self) -> Vec<Vec<Entry>> {
        self.basis.iter().map(|b| self.tensor(b)).collect()
    }

    /// The algebra with the given dot coordinates and the fixed bracket.
    pub fn algebra(&self, coords: &[FieldElem]) -> PoissonAlgebra {
        let n = self.lie.dim();
        PoissonAlgebra::new(
            self.lie.field(),
            n,
            self.tensor(coords),
            self.lie.bracket_entries(),
        )
        .expect("indices in range")
    }

    /// Whether a dot tensor (0-based entries, either index order) lies in the span.
    pub fn contains_tensor(&self, dot: &[Entry]) -> bool {
        let f = self.lie.field();
        let n = self.lie.dim();
        let mut v = vec![f.zero(); unknown_count(n)];
        for (i, j, k, c) in dot {
            let (i, j) = if i <= j { (*i, *j) } else { (*j, *i) };
            let idx = unknown_index(n, i, j, *k);
            v[idx] = f.add(&v[idx], c);
        }
        let sub = Subspace::span(f, v.len(), self.basis.clone());
        sub.contains_vector(&v)
    }
}

fn unknown_count(n: usize) -> usize {
    n * (n + 1) / 2 * n
}

fn pair_index(n: usize, i: usize, j: usize) -> usize {
    // pairs (i, j) with i ≤ j in lex order
    i * n - i * (i + 1) / 2 + j
}

fn unknown_index(n: usize, i: usize, j: usize, k: usize) -> usize {
    pair_index(n, i, j) * n + k
}

fn unknowns(n: usize) -> Vec<(usize, usize, usize)> {
    let mut out = Vec::with_capacity(unknown_count(n));
    for i in 0..n {
        for j in i..n {
            for k in 0..n {
                out.push((i, j, k));
            }
        }
    }
    out
}

fn sym(n: usize, i: usize, j: usize, k: usize) -> usize {
    if i <= j {
        unknown_index(n, i, j, k)
    } else {
        unknown_index(n, j, i, k)
    }
}

/// Solves `[x_i·x_j, x_k] = [x_i,x_k]·x_j + x_i·[x_j,x_k]` for the dot tensor.
pub fn leibniz_space(lie_alg: &PoissonAlgebra) -> Result<ProductSpace, CompatError> {
    let lie = lie_alg.lie_part();
    let report = lie.validate();
    if !(report.antisymmetric_ok && report.jacobi_ok) {
        return Err(CompatError::JacobiFails(Box::new(report)));
    }
    let f = lie.field().clone();
    let n = lie.dim();
    let m = unknown_count(n);
    let mut rows = Vec::new();
    for i in 0..n {
        for j in i..n {
            for k in 0..n {
                let mut eq = vec![vec![f.zero(); m]; n];
                let mut bump = |l: usize, u: usize, c: &FieldElem, neg: bool| {
                    let c = if neg { f.neg(c) } else { c.clone() };
                    eq[l][u] = f.add(&eq[l][u], &c);
                };
                // [e_i·e_j, e_k]
                for mm in 0..n {
                    for (l, c) in lie.bracket_basis(mm, k) {
                        bump(*l, sym(n, i, j, mm), c, false);
                    }
                }
                // [e_i,e_k]·e_j
                for (mm, c) in lie.bracket_basis(i, k) {
                    for l in 0..n {
                        bump(l, sym(n, *mm, j, l), c, true);
                    }
                }
                // e_i·[e_j,e_k]
                for (mm, c) in lie.bracket_basis(j, k) {
                    for l in 0..n {
                        bump(l, sym(n, i, *mm, l), c, true);
                    }
                }
                rows.extend(eq.into_iter().filter(|r| r.iter().any(|c| !f.is_zero(c))));
            }
        }
    }
    let basis = if rows.is_empty() {
        (0..m)
            .map(|u| {
                let mut v = vec![f.zero(); m];
                v[u] = f.one();
                v
            })
            .collect()
    } else {
        let sys = Matrix::from_rows(&f, m, rows).expect("rows have m columns");
        kernel(&sys)
            .basis_vectors()
            .map(<[FieldElem]>::to_vec)
            .collect()
    };
    Ok(ProductSpace { lie, basis })
}

/// All Poisson algebras with the given bracket over a finite field, sorted
/// by their dot entries.
pub fn poisson_structures_on(
    lie_alg: &PoissonAlgebra,
    budget: u64,
) -> Result<Vec<PoissonAlgebra>, CompatError> {
    let space = leibniz_space(lie_alg)?;
    let f = space.lie.field().clone();
    let q = f.order().ok_or(CompatError::InfiniteField)?;
    let d = space.dimension() as u32;
    let points = (q as u128).checked_pow(d).unwrap_or(u128::MAX);
    if points > budget as u128 {
        return Err(CompatError::BudgetExceeded { points, budget });
    }
    let n = space.lie.dim();
    let m = unknown_count(n);
    let mut found: Vec<PoissonAlgebra> = (0..points as u64)
        .into_par_iter()
        .filter_map(|idx| {
            let coeffs = digits(&f, q, d as usize, idx);
            let mut v = vec![f.zero(); m];
            for (c, b) in coeffs.iter().zip(&space.basis) {
                if f.is_zero(c) {
                    continue;
                }
                for (slot, x) in v.iter_mut().zip(b) {
                    if !f.is_zero(x) {
                        *slot = f.mul_add(c, x, slot);
                    }
                }
            }
            is_associative(&f, n, &dense(&f, n, &v)).then(|| space.algebra(&v))
        })
        .collect();
    found.sort_by_cached_key(PoissonAlgebra::dot_entries);
    for a in &mut found {
        *a = std::mem::replace(a, PoissonAlgebra::zero(&f, 0))
            .into_validated()
            .map_err(CompatError::JacobiFails)?;
    }
    Ok(found)
}

fn digits(f: &FieldSpec, q: u64, d: usize, mut idx: u64) -> Vec<FieldElem> {
    // first coordinate varies slowest
    let mut out = vec![f.zero(); d];
    for slot in out.iter_mut().rev() {
        *slot = f.nth_element(idx % q);
        idx /= q;
    }
    out
}

/// Dense `t[(i*n + j)*n + k]` from coordinates in unknown order.
fn dense(f: &FieldSpec, n: usize, coords: &[FieldElem]) -> Vec<FieldElem> {
    let mut t = vec![f.zero(); n * n * n];
    for (u, (i, j, k)) in unknowns(n).into_iter().enumerate() {
        t[(i * n + j) * n + k] = coords[u].clone();
        t[(j * n + i) * n + k] = coords[u].clone();
    }
    t
}

fn is_associative(f: &FieldSpec, n: usize, t: &[FieldElem]) -> bool {
    let at = |i: usize, j: usize, k: usize| &t[(i * n + j) * n + k];
    for i in 0..n {
        for j in 0..n {
            for k in 0..n {
                for l in 0..n {
                    let mut lhs = f.zero();
                    let mut rhs = f.zero();
                    for m in 0..n {
                        let a = at(i, j, m);
                        if !f.is_zero(a) {
                            lhs = f.mul_add(a, at(m, k, l), &lhs);
                        }
                        let b = at(j, k, m);
                        if !f.is_zero(b) {
                            rhs = f.mul_add(b, at(i, m, l), &rhs);
                        }
                    }
                    if lhs != rhs {
                        return false;
                    }
                }
            }
        }
    }
    true
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::catalog::{heisenberg, model_filiform};

    #[test]
    fn zero_bracket_gives_full_symmetric_space() {
        let f = FieldSpec::Prime(3);
        for n in 1..=4 {
            let s = leibniz_space(&PoissonAlgebra::zero(&f, n)).unwrap();
            assert_eq!(s.dimension(), n * n * (n + 1) / 2);
        }
    }

    #[test]
    fn known_members() {
        let f = FieldSpec::Prime(5);
        let s = leibniz_space(&model_filiform(&f, 4, &[f.zero(), f.zero(), f.zero()])).unwrap();
        assert!(s.contains_tensor(&[(0, 0, 3, f.one())]));
        assert!(!s.contains_tensor(&[(0, 0, 2, f.one())]));
        let h = leibniz_space(&heisenberg(&f)).unwrap();
        assert!(h.contains_tensor(&[(0, 1, 2, f.one())]));
        for t in h.basis_tensors() {
            let a = PoissonAlgebra::new(&f, 3, t, h.lie.bracket_entries()).unwrap();
            assert!(a.validate().leibniz_ok);
        }
    }

    #[test]
    fn one_dimensional_over_gf2() {
        let f = FieldSpec::Prime(2);
        let all = poisson_structures_on(&PoissonAlgebra::zero(&f, 1), DEFAULT_BUDGET).unwrap();
        assert_eq!(all.len(), 2);
        assert!(all[0].dot_is_zero());
        assert_eq!(all[1].dot_entries(), vec![(0, 0, 0, f.one())]);
    }

    #[test]
    fn rejects_non_lie_and_large_spaces() {
        let f = FieldSpec::Prime(3);
        // [e1,e2] = e1, [e2,e3] = e2, [e1,e3] = e3 fails Jacobi
        let bad = PoissonAlgebra::new(
            &f,
            3,
            Vec::new(),
            vec![(0, 1, 0, f.one()), (1, 2, 1, f.one()), (0, 2, 2, f.one())],
        )
        .unwrap();
        assert!(matches!(
            leibniz_space(&bad),
            Err(CompatError::JacobiFails(_))
        ));
        assert!(matches!(
            poisson_structures_on(&PoissonAlgebra::zero(&f, 3), 1000),
            Err(CompatError::BudgetExceeded { .. })
        ));
        let q = FieldSpec::Rationals;
        assert_eq!(
            poisson_structures_on(&PoissonAlgebra::zero(&q, 1), 10),
            Err(CompatError::InfiniteField)
        );
    }

    #[test]
    fn heisenberg_over_gf2() {
        let f = FieldSpec::Prime(2);
        let all = poisson_structures_on(&heisenberg(&f), DEFAULT_BUDGET).unwrap();
        assert!(all.iter().all(|a| a.validate().ok()));
        assert!(all
            .iter()
            .any(|a| a.dot_entries() == vec![(0, 1, 2, f.one())]));
        assert!(all
            .windows(2)
            .all(|w| w[0].dot_entries() < w[1].dot_entries()));
    }

    #[test]
    fn model_filiform_family_over_gf3() {
        let f = FieldSpec::Prime(3);
        for n in [4, 5] {
            let z = f.zero();
            let all = poisson_structures_on(
                &model_filiform(&f, n, &[z.clone(), z.clone(), z]),
                DEFAULT_BUDGET,
            )
            .unwrap();
            assert_eq!(all.len(), 27);
            for a in &all {
                assert!(a
                    .dot_entries()
                    .iter()
                    .all(|&(i, j, k, _)| k == n - 1 && matches!((i, j), (0, 0) | (0, 1) | (1, 1))));
            }
        }
    }
}
