//! Subspace predicates, normalizers, centers, adjoint maps, Fitting
//! decomposition, one-dimensional subalgebras and quotients.

use serde::Serialize;

use super::{is_zero_vec, AlgebraError, PoissonAlgebra, ProductKind};
use crate::field::FieldElem;
use crate::linalg::{enumerate_subspaces, kernel, Matrix, Subspace};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct SubspaceClass {
    pub subalgebra: bool,
    pub ideal: bool,
    pub abelian: bool,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct FittingDecomposition {
    /// Joint generalized kernel.
    pub v0: Subspace,
    /// Sum of the stable images.
    pub v1: Subspace,
}

/// Which adjoint map to build.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum AdjointKind {
    /// `P_x : y ↦ x·y`
    Dot,
    /// `Q_x : y ↦ [x, y]`
    Bracket,
}

impl PoissonAlgebra {
    /// Subalgebra, ideal and abelian flags for both products together.
    pub fn classify_subspace(&self, u: &Subspace) -> Result<SubspaceClass, AlgebraError> {
        self.classify_with(u, ProductKind::Both)
    }

    /// As [`PoissonAlgebra::classify_subspace`] but for the selected product(s) only.
    pub fn classify_with(
        &self,
        u: &Subspace,
        kind: ProductKind,
    ) -> Result<SubspaceClass, AlgebraError> {
        self.check_ambient(u)?;
        let f = &self.field;
        let basis: Vec<&[FieldElem]> = u.basis_vectors().collect();
        let mut subalgebra = true;
        let mut abelian = true;
        for (a, x) in basis.iter().enumerate() {
            for y in &basis[a..] {
                for p in self.products(kind, x, y) {
                    if !is_zero_vec(f, &p) {
                        abelian = false;
                        if !u.contains_vector(&p) {
                            subalgebra = false;
                        }
                    }
                }
            }
        }
        let ideal = subalgebra
            && basis.iter().all(|x| {
                (0..self.dim).all(|j| {
                    let e = self.basis_vector(j);
                    self.products(kind, x, &e)
                        .iter()
                        .all(|p| u.contains_vector(p))
                })
            });
        Ok(SubspaceClass {
            subalgebra,
            ideal,
            abelian,
        })
    }

    /// `N(u) = {x : x·u ⊆ u, [x, u] ⊆ u}`.
    pub fn normalizer(&self, u: &Subspace) -> Result<Subspace, AlgebraError> {
        self.normalizer_with(u, ProductKind::Both)
    }

    pub fn normalizer_with(
        &self,
        u: &Subspace,
        kind: ProductKind,
    ) -> Result<Subspace, AlgebraError> {
        if !self.classify_with(u, kind)?.subalgebra {
            return Err(AlgebraError::NotASubalgebra);
        }
        let n = self.dim;
        let e: Vec<Vec<FieldElem>> = (0..n).map(|i| self.basis_vector(i)).collect();
        // one block of n rows per (basis vector of u, product): x ↦ (x * b) mod u
        let mut rows: Vec<Vec<FieldElem>> = Vec::new();
        for b in u.basis_vectors() {
            let kinds = [ProductKind::Dot, ProductKind::Bracket];
            for k in kinds
                .into_iter()
                .filter(|k| kind == ProductKind::Both || kind == *k)
            {
                let cols: Vec<Vec<FieldElem>> = e
                    .iter()
                    .map(|x| u.reduce(&self.products(k, x, b)[0]))
                    .collect();
                for r in 0..n {
                    rows.push(cols.iter().map(|c| c[r].clone()).collect());
                }
            }
        }
        if rows.is_empty() {
            return Ok(self.whole());
        }
        Ok(kernel(&Matrix::from_rows(&self.field, n, rows)?))
    }

    /// `(C(P_L), Ann(P))`: the center of the Lie part and the annihilator.
    pub fn central_structures(&self) -> (Subspace, Subspace) {
        (
            self.annihilator_of(ProductKind::Bracket),
            self.annihilator_of(ProductKind::Both),
        )
    }

    /// `{x : x * P = 0}` for the selected product(s).
    pub fn annihilator_of(&self, kind: ProductKind) -> Subspace {
        let n = self.dim;
        let f = &self.field;
        let mut rows = Vec::new();
        for (use_it, table) in [(kind.dot(), &self.dot), (kind.bracket(), &self.bracket)] {
            if !use_it {
                continue;
            }
            for j in 0..n {
                // row (j, k): x ↦ coefficient of e_k in x * e_j
                let mut block = vec![vec![f.zero(); n]; n];
                for (i, col) in (0..n).map(|i| (i, &table[i * n + j])) {
                    for (k, c) in col {
                        block[*k][i] = c.clone();
                    }
                }
                rows.extend(block);
            }
        }
        if rows.is_empty() {
            return self.whole();
        }
        kernel(&Matrix::from_rows(f, n, rows).expect("rows have length n"))
    }

    /// Matrix of `P_x` or `Q_x`; column `j` holds `x * e_j`.
    pub fn adjoint_matrix(&self, x: &[FieldElem], kind: AdjointKind) -> Matrix {
        let n = self.dim;
        let mut m = Matrix::zeros(&self.field, n, n);
        for j in 0..n {
            let e = self.basis_vector(j);
            let col = match kind {
                AdjointKind::Dot => self.dot(x, &e),
                AdjointKind::Bracket => self.bracket(x, &e),
            };
            for (i, c) in col.into_iter().enumerate() {
                m.set(i, j, c);
            }
        }
        m
    }

    /// Fitting decomposition for a pairwise commuting family of operators:
    /// `v0 = ∩ ker φⁿ` and `v1 = Σ im φⁿ` with `n` the dimension.
    pub fn fitting_decomposition(
        &self,
        generators: &[Matrix],
    ) -> Result<FittingDecomposition, AlgebraError> {
        fitting_decomposition(&self.field, self.dim, generators)
    }

    /// A nonzero `x` with `x·x ∈ span(x)`, so `span(x)` is a subalgebra.
    ///
    /// If the commutative product is nilpotent this is the first basis
    /// vector of `Ann(P)` when nonzero, else of the dot-annihilator.
    /// Otherwise lines are searched in canonical order: exhaustively over a
    /// finite field, over vectors with entries in {-1, 0, 1} otherwise.
    pub fn find_one_dim_subalgebra(&self) -> Result<Vec<FieldElem>, AlgebraError> {
        if self.dim == 0 {
            return Err(AlgebraError::NotFound);
        }
        if self.associative_part().is_nilpotent() {
            for kind in [ProductKind::Both, ProductKind::Dot] {
                let ann = self.annihilator_of(kind);
                if !ann.is_zero() {
                    return Ok(ann.basis().row(0).to_vec());
                }
            }
        }
        let spans_square = |x: &[FieldElem]| {
            let sq = self.dot(x, x);
            Subspace::span(&self.field, self.dim, vec![x.to_vec()]).contains_vector(&sq)
        };
        if self.field.is_finite() {
            let lines = enumerate_subspaces(self.dim, 1, &self.field)?;
            for line in lines {
                let x = line.basis().row(0);
                if spans_square(x) {
                    return Ok(x.to_vec());
                }
            }
            return Err(AlgebraError::NotFound);
        }
        let f = &self.field;
        let digits = [f.zero(), f.one(), f.from_i64(-1)];
        for lead in 0..self.dim {
            let free = self.dim - lead - 1;
            for code in 0..3u64.pow(free as u32) {
                let mut x = vec![f.zero(); self.dim];
                x[lead] = f.one();
                let mut c = code;
                for slot in x[lead + 1..].iter_mut().rev() {
                    *slot = digits[(c % 3) as usize].clone();
                    c /= 3;
                }
                if spans_square(&x) {
                    return Ok(x);
                }
            }
        }
        Err(AlgebraError::NotFound)
    }

    /// `P / I` on the basis of non-pivot coordinates of the ideal.
    pub fn quotient_algebra(&self, ideal: &Subspace) -> Result<PoissonAlgebra, AlgebraError> {
        if !self.classify_subspace(ideal)?.ideal {
            return Err(AlgebraError::NotAnIdeal);
        }
        let comp = ideal.non_pivots();
        let m = comp.len();
        let e: Vec<Vec<FieldElem>> = comp.iter().map(|&i| self.basis_vector(i)).collect();
        let project = |v: Vec<FieldElem>| -> Vec<FieldElem> {
            let r = ideal.reduce(&v);
            comp.iter().map(|&c| r[c].clone()).collect()
        };
        let mut dot = Vec::new();
        let mut bracket = Vec::new();
        for a in 0..m {
            for b in a..m {
                let d = project(self.dot(&e[a], &e[b]));
                dot.extend(d.into_iter().enumerate().map(|(k, c)| (a, b, k, c)));
                if a < b {
                    let br = project(self.bracket(&e[a], &e[b]));
                    bracket.extend(br.into_iter().enumerate().map(|(k, c)| (a, b, k, c)));
                }
            }
        }
        let mut q = PoissonAlgebra::new(&self.field, m, dot, bracket)?;
        q.validated = self.validated;
        Ok(q)
    }
}

/// Fitting decomposition of `F^n` for a pairwise commuting operator family.
pub fn fitting_decomposition(
    field: &crate::field::FieldSpec,
    n: usize,
    generators: &[Matrix],
) -> Result<FittingDecomposition, AlgebraError> {
    if generators.is_empty() {
        return Err(AlgebraError::EmptyFamily);
    }
    for (a, g) in generators.iter().enumerate() {
        if g.rows() != n || g.cols() != n {
            return Err(crate::linalg::LinalgError::Shape.into());
        }
        for h in &generators[a + 1..] {
            if g.mul(h) != h.mul(g) {
                return Err(AlgebraError::NonCommutingFamily);
            }
        }
    }
    let mut v0 = Subspace::whole(field, n);
    let mut v1 = Subspace::zero(field, n);
    for g in generators {
        let p = g.pow(n as u32);
        v0 = v0.intersect(&kernel(&p))?;
        v1 = v1.sum(&Subspace::from_matrix(p.transpose()))?;
    }
    Ok(FittingDecomposition { v0, v1 })
}

#[cfg(test)]
mod tests {
    use super::super::tests::*;
    use super::*;
    use crate::field::FieldSpec;
    use crate::linalg::LinalgError;

    #[test]
    fn classify_examples() {
        let f = FieldSpec::Prime(5);
        let a = p3_18(&f);
        let c = a
            .classify_subspace(&Subspace::coordinate(&f, 3, &[1]))
            .unwrap();
        assert!(c.subalgebra && c.ideal && c.abelian);
        let w = a.classify_subspace(&a.whole()).unwrap();
        assert!(w.subalgebra && w.ideal);
        let b = p3_20(&f);
        let c = b
            .classify_subspace(&Subspace::coordinate(&f, 3, &[2]))
            .unwrap();
        assert!(c.subalgebra && c.abelian && !c.ideal);
    }

    #[test]
    fn normalizer_examples() {
        let f = FieldSpec::Prime(5);
        let b = p3_20(&f);
        assert_eq!(
            b.normalizer(&Subspace::coordinate(&f, 3, &[2])).unwrap(),
            Subspace::coordinate(&f, 3, &[0, 2])
        );
        let a = p4_7(&f);
        assert_eq!(
            a.normalizer(&Subspace::coordinate(&f, 4, &[1])).unwrap(),
            Subspace::coordinate(&f, 4, &[0, 1, 3])
        );
        assert!(a
            .normalizer(&Subspace::coordinate(&f, 4, &[3]))
            .unwrap()
            .is_whole());
        // span(e1) is not closed: e1·e1 = e4
        assert_eq!(
            a.normalizer(&Subspace::coordinate(&f, 4, &[0])),
            Err(AlgebraError::NotASubalgebra)
        );
    }

    #[test]
    fn central_structure_examples() {
        let f = FieldSpec::Prime(5);
        let (c, ann) = p4_7(&f).central_structures();
        assert_eq!(c, Subspace::coordinate(&f, 4, &[0, 3]));
        assert_eq!(ann, Subspace::coordinate(&f, 4, &[3]));
        let (c, ann) = PoissonAlgebra::zero(&f, 3).central_structures();
        assert!(c.is_whole() && ann.is_whole());
        // q3([[1,0],[0,-1]]) ⊕ F: [h,x]=x, [h,y]=-y, [x,y]=h
        let q = PoissonAlgebra::from_int_table(
            &f,
            4,
            &[],
            &[(1, 2, 2, 1), (1, 3, 3, -1), (2, 3, 1, 1)],
        )
        .unwrap();
        assert_eq!(q.central_structures().0, Subspace::coordinate(&f, 4, &[3]));
    }

    #[test]
    fn adjoint_examples() {
        let f = FieldSpec::Rationals;
        let a = p3_14(&f);
        let q = a.adjoint_matrix(&a.basis_vector(0), AdjointKind::Bracket);
        assert_eq!(
            q,
            Matrix::from_i64(&f, &[&[0, 0, 0], &[0, 0, 0], &[0, 0, 1]]).unwrap()
        );
        let b = p4_14(&f);
        let p = b.adjoint_matrix(&b.basis_vector(0), AdjointKind::Dot);
        assert_eq!(p.get(1, 0), &f.one());
        assert_eq!(p.get(3, 1), &f.one());
        assert!(!p.pow(2).is_zero() && p.pow(3).is_zero());
        let z = PoissonAlgebra::zero(&f, 2);
        assert!(z
            .adjoint_matrix(&vec_of(&f, &[1, 1]), AdjointKind::Dot)
            .is_zero());
    }

    #[test]
    fn fitting_examples() {
        let f = FieldSpec::Rationals;
        let a = p3_14(&f);
        let q = a.adjoint_matrix(&a.basis_vector(0), AdjointKind::Bracket);
        let d = a.fitting_decomposition(&[q]).unwrap();
        assert_eq!(d.v0, Subspace::coordinate(&f, 3, &[0, 1]));
        assert_eq!(d.v1, Subspace::coordinate(&f, 3, &[2]));

        let b = p4_14(&f);
        let p = b.adjoint_matrix(&b.basis_vector(0), AdjointKind::Dot);
        let d = b.fitting_decomposition(&[p]).unwrap();
        assert!(d.v0.is_whole() && d.v1.is_zero());

        let x = Matrix::from_i64(&f, &[&[0, 1], &[0, 0]]).unwrap();
        let y = Matrix::from_i64(&f, &[&[0, 0], &[1, 0]]).unwrap();
        assert_eq!(
            fitting_decomposition(&f, 2, &[x, y]),
            Err(AlgebraError::NonCommutingFamily)
        );
    }

    #[test]
    fn one_dim_subalgebra_examples() {
        let f = FieldSpec::Prime(5);
        assert_eq!(
            p3_18(&f).find_one_dim_subalgebra().unwrap(),
            vec_of(&f, &[1, 0, 0])
        );
        assert_eq!(
            p4_7(&f).find_one_dim_subalgebra().unwrap(),
            vec_of(&f, &[0, 0, 0, 1])
        );
        assert_eq!(
            PoissonAlgebra::zero(&f, 3)
                .find_one_dim_subalgebra()
                .unwrap(),
            vec_of(&f, &[1, 0, 0])
        );
        let q = FieldSpec::Rationals;
        assert_eq!(
            p3_18(&q).find_one_dim_subalgebra().unwrap(),
            vec_of(&q, &[1, 0, 0])
        );
    }

    #[test]
    fn quotient_examples() {
        let f = FieldSpec::Prime(5);
        let a = p4_7(&f);
        let q = a
            .quotient_algebra(&Subspace::coordinate(&f, 4, &[3]))
            .unwrap();
        assert_eq!(q, PoissonAlgebra::zero(&f, 3));
        assert_eq!(a.quotient_algebra(&a.whole()).unwrap().dim(), 0);
        assert_eq!(
            p3_20(&f).quotient_algebra(&Subspace::coordinate(&f, 3, &[2])),
            Err(AlgebraError::NotAnIdeal)
        );
        let b = p3_14(&f);
        let q = b
            .quotient_algebra(&Subspace::coordinate(&f, 3, &[2]))
            .unwrap();
        assert!(q.validate().ok());
        assert_eq!(q.dot_entries(), vec![(0, 0, 1, f.one())]);
        assert!(matches!(
            b.quotient_algebra(&Subspace::whole(&f, 2)),
            Err(AlgebraError::Linalg(LinalgError::AmbientMismatch { .. }))
        ));
    }
}
