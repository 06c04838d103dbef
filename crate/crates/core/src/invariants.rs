//! The six abelian-subspace invariants α, β, α_A, β_A, α_L, β_L.
//!
//! Over a finite field they are computed exactly by a pruned walk over RREF
//! representatives. Over any field, a [`Certificate`] checks that an explicit
//! subspace is an abelian subalgebra or ideal, which gives a lower bound.
//!
//! # Search
//!
//! For a fixed pivot pattern `p_0 < … < p_{k-1}` the candidate rows are
//! `r_i = e_{p_i} + Σ x_c e_c` over the free columns `c`. Row `i` is chosen
//! after rows `0..i`, and must satisfy the linear conditions `r_j * r_i = 0`
//! for `j < i`. Those are solved with the variables in reverse order, so each
//! pivot variable depends only on free variables with a smaller index and
//! walking the free variables in lex order walks the solutions in lex order.
//! Hence the first complete hit is the canonical (least) witness for the
//! pattern. Ideal searches also discard a partial basis as soon as some
//! product `r_j * e_c` cannot lie in any completion.

use std::sync::atomic::{AtomicU64, Ordering};

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::Serialize;
use thiserror::Error;

use crate::field::{FieldElem, FieldSpec};
use crate::linalg::{pivot_patterns, LinalgError, Matrix, Subspace};
use crate::poisson::{AdjointKind, AlgebraError, PoissonAlgebra, ProductKind};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum InvariantError {
    #[error("exact invariants need a finite field; use witness certificates instead")]
    InfiniteField,
    #[error("basis change matrix is singular")]
    SingularTransform,
    #[error("ordering inequality violated: {0}")]
    OrderingViolated(String),
    #[error("internal witness check failed for {0}")]
    WitnessRejected(&'static str),
    #[error(transparent)]
    Algebra(#[from] AlgebraError),
}

impl From<LinalgError> for InvariantError {
    fn from(e: LinalgError) -> Self {
        InvariantError::Algebra(e.into())
    }
}

static PROFILES_COMPUTED: AtomicU64 = AtomicU64::new(0);
static ORDERING_VIOLATIONS: AtomicU64 = AtomicU64::new(0);

/// `(profiles computed, ordering violations)` since process start.
pub fn profile_counters() -> (u64, u64) {
    (
        PROFILES_COMPUTED.load(Ordering::Relaxed),
        ORDERING_VIOLATIONS.load(Ordering::Relaxed),
    )
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Invariant {
    Alpha,
    Beta,
    AlphaA,
    BetaA,
    AlphaL,
    BetaL,
}

impl Invariant {
    pub const ALL: [Invariant; 6] = [
        Invariant::Alpha,
        Invariant::Beta,
        Invariant::AlphaA,
        Invariant::BetaA,
        Invariant::AlphaL,
        Invariant::BetaL,
    ];

    pub fn kind(self) -> ProductKind {
        match self {
            Invariant::Alpha | Invariant::Beta => ProductKind::Both,
            Invariant::AlphaA | Invariant::BetaA => ProductKind::Dot,
            Invariant::AlphaL | Invariant::BetaL => ProductKind::Bracket,
        }
    }

    pub fn is_ideal(self) -> bool {
        matches!(self, Invariant::Beta | Invariant::BetaA | Invariant::BetaL)
    }

    pub fn name(self) -> &'static str {
        match self {
            Invariant::Alpha => "alpha",
            Invariant::Beta => "beta",
            Invariant::AlphaA => "alpha_a",
            Invariant::BetaA => "beta_a",
            Invariant::AlphaL => "alpha_l",
            Invariant::BetaL => "beta_l",
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Method {
    Enumeration,
    CertifiedWitness,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct InvariantProfile {
    pub field: FieldSpec,
    pub dim: usize,
    /// Values in the order of [`Invariant::ALL`].
    pub values: [usize; 6],
    /// One canonical witness per invariant, same order.
    pub witnesses: Vec<Subspace>,
    pub method: Method,
    /// Codimension-one cross-check; `None` when its hypothesis is not met.
    pub codim1_check: Option<bool>,
    /// Nilpotent codimension-two cross-check; `None` when not applicable.
    pub nilpotent_codim2_check: Option<bool>,
}

impl InvariantProfile {
    pub fn get(&self, inv: Invariant) -> usize {
        self.values[inv as usize]
    }

    pub fn witness(&self, inv: Invariant) -> &Subspace {
        &self.witnesses[inv as usize]
    }

    pub fn alpha(&self) -> usize {
        self.get(Invariant::Alpha)
    }

    pub fn beta(&self) -> usize {
        self.get(Invariant::Beta)
    }

    /// The seven inequalities between the invariants, as `(label, holds)`.
    pub fn ordering_checks(&self) -> [(&'static str, bool); 7] {
        let [a, b, aa, ba, al, bl] = self.values;
        [
            ("beta <= alpha", b <= a),
            ("alpha <= alpha_a", a <= aa),
            ("alpha <= alpha_l", a <= al),
            ("beta <= beta_a", b <= ba),
            ("beta <= beta_l", b <= bl),
            ("beta_a <= alpha_a", ba <= aa),
            ("beta_l <= alpha_l", bl <= al),
        ]
    }
}

/// Exact invariant profile over a finite field.
pub fn invariant_profile(alg: &PoissonAlgebra) -> Result<InvariantProfile, InvariantError> {
    if !alg.field().is_finite() {
        return Err(InvariantError::InfiniteField);
    }
    let n = alg.dim();
    let (alpha_a, w_aa) = max_abelian(alg, ProductKind::Dot, false, n)?;
    let (alpha_l, w_al) = max_abelian(alg, ProductKind::Bracket, false, n)?;
    let (alpha, w_a) = max_abelian(alg, ProductKind::Both, false, alpha_a.min(alpha_l))?;
    let (beta, w_b) = max_abelian(alg, ProductKind::Both, true, alpha)?;
    let (beta_a, w_ba) = max_abelian(alg, ProductKind::Dot, true, alpha_a)?;
    let (beta_l, w_bl) = max_abelian(alg, ProductKind::Bracket, true, alpha_l)?;
    let witnesses = vec![w_a, w_b, w_aa, w_ba, w_al, w_bl];
    for (inv, w) in Invariant::ALL.iter().zip(&witnesses) {
        let c = alg.classify_with(w, inv.kind())?;
        if !c.abelian || (inv.is_ideal() && !c.ideal) {
            return Err(InvariantError::WitnessRejected(inv.name()));
        }
    }
    let mut profile = InvariantProfile {
        field: alg.field().clone(),
        dim: n,
        values: [alpha, beta, alpha_a, beta_a, alpha_l, beta_l],
        witnesses,
        method: Method::Enumeration,
        codim1_check: None,
        nilpotent_codim2_check: None,
    };
    PROFILES_COMPUTED.fetch_add(1, Ordering::Relaxed);
    if let Some((label, _)) = profile.ordering_checks().iter().find(|(_, ok)| !ok) {
        ORDERING_VIOLATIONS.fetch_add(1, Ordering::Relaxed);
        return Err(InvariantError::OrderingViolated(label.to_string()));
    }
    if n >= 1 && alpha == n - 1 && !alg.dot_is_zero() && !alg.bracket_is_zero() {
        let ideal = alg
            .classify_subspace(profile.witness(Invariant::Alpha))?
            .ideal;
        profile.codim1_check = Some(beta == n - 1 && ideal);
    }
    if n >= 2 && alpha == n - 2 && alg.is_nilpotent() {
        profile.nilpotent_codim2_check = Some(beta == n - 2);
    }
    Ok(profile)
}

/// Largest `k ≤ upper` with an abelian subspace (ideal if requested) for
/// `kind`, and its canonical witness.
pub fn max_abelian(
    alg: &PoissonAlgebra,
    kind: ProductKind,
    require_ideal: bool,
    upper: usize,
) -> Result<(usize, Subspace), InvariantError> {
    for k in (1..=upper.min(alg.dim())).rev() {
        if let Some(w) = find_abelian(alg, k, kind, require_ideal)? {
            return Ok((k, w));
        }
    }
    Ok((0, Subspace::zero(alg.field(), alg.dim())))
}

/// First abelian (Poisson) subspace of dimension `k` in canonical order,
/// optionally required to be an ideal.
pub fn find_abelian_of_dim(
    alg: &PoissonAlgebra,
    k: usize,
    require_ideal: bool,
) -> Result<Option<Subspace>, InvariantError> {
    find_abelian(alg, k, ProductKind::Both, require_ideal)
}

/// As [`find_abelian_of_dim`] for the selected product(s).
pub fn find_abelian(
    alg: &PoissonAlgebra,
    k: usize,
    kind: ProductKind,
    require_ideal: bool,
) -> Result<Option<Subspace>, InvariantError> {
    let q = alg.field().order().ok_or(InvariantError::InfiniteField)?;
    let n = alg.dim();
    if k > n {
        return Ok(None);
    }
    if k == 0 {
        return Ok(Some(Subspace::zero(alg.field(), n)));
    }
    let search = Search {
        alg,
        kind,
        ideal: require_ideal,
        n,
        elems: (0..q).map(|i| alg.field().nth_element(i)).collect(),
    };
    let patterns: Vec<Vec<usize>> = pivot_patterns(n, k).collect();
    Ok(patterns.par_iter().find_map_first(|p| search.run(p)))
}

struct Search<'a> {
    alg: &'a PoissonAlgebra,
    kind: ProductKind,
    ideal: bool,
    n: usize,
    elems: Vec<FieldElem>,
}

/// A chosen row with its adjoint matrices (`r * e_c` in column `c`).
struct Row {
    v: Vec<FieldElem>,
    adj: Vec<Matrix>,
}

impl Search<'_> {
    fn field(&self) -> &FieldSpec {
        self.alg.field()
    }

    fn adjoints(&self, v: &[FieldElem]) -> Vec<Matrix> {
        let mut out = Vec::with_capacity(2);
        if matches!(self.kind, ProductKind::Dot | ProductKind::Both) {
            out.push(self.alg.adjoint_matrix(v, AdjointKind::Dot));
        }
        if matches!(self.kind, ProductKind::Bracket | ProductKind::Both) {
            out.push(self.alg.adjoint_matrix(v, AdjointKind::Bracket));
        }
        out
    }

    fn run(&self, pivots: &[usize]) -> Option<Subspace> {
        let mut rows = Vec::with_capacity(pivots.len());
        if !self.dfs(pivots, &mut rows) {
            return None;
        }
        let f = self.field();
        let data = rows.into_iter().map(|r| r.v).collect();
        let basis = Matrix::from_rows(f, self.n, data).expect("rows of ambient length");
        debug_assert_eq!(Subspace::from_matrix(basis.clone()).pivots(), pivots);
        Some(Subspace::from_matrix(basis))
    }

    fn dfs(&self, pivots: &[usize], rows: &mut Vec<Row>) -> bool {
        let i = rows.len();
        if i == pivots.len() {
            return true;
        }
        let f = self.field();
        let n = self.n;
        let p = pivots[i];
        let free: Vec<usize> = (p + 1..n).filter(|c| !pivots.contains(c)).collect();
        let m = free.len();

        // Constraints r_j * (e_p + Σ x_c e_c) = 0, one equation per output
        // coordinate. Unknowns are stored in reverse: column t is free[m-1-t].
        let mut eqs: Vec<Vec<FieldElem>> = Vec::new();
        for row in rows.iter() {
            for adj in &row.adj {
                for out in 0..n {
                    let mut eq: Vec<FieldElem> = (0..m)
                        .map(|t| adj.get(out, free[m - 1 - t]).clone())
                        .collect();
                    eq.push(f.neg(adj.get(out, p)));
                    if eq.iter().any(|x| !f.is_zero(x)) {
                        eqs.push(eq);
                    }
                }
            }
        }
        let Some(sol) = AffineSolutions::new(f, m, eqs) else {
            return false;
        };
        let q = self.elems.len() as u64;
        let d = sol.free_vars.len();
        let mut odo = vec![0u64; d];
        loop {
            let x = sol.evaluate(f, &odo, &self.elems);
            let mut v = vec![f.zero(); n];
            v[p] = f.one();
            for (idx, &c) in free.iter().enumerate() {
                v[c] = x[idx].clone();
            }
            if self.row_ok(&v) {
                let adj = self.adjoints(&v);
                rows.push(Row { v, adj });
                if (!self.ideal || self.ideal_prefix_ok(pivots, rows)) && self.dfs(pivots, rows) {
                    return true;
                }
                rows.pop();
            }
            // odometer over free variables in increasing index order, last fastest
            let mut pos = d;
            loop {
                if pos == 0 {
                    return false;
                }
                pos -= 1;
                odo[pos] += 1;
                if odo[pos] < q {
                    break;
                }
                odo[pos] = 0;
            }
        }
    }

    /// The self-product `v·v` must vanish; `[v, v] = 0` always.
    fn row_ok(&self, v: &[FieldElem]) -> bool {
        if !matches!(self.kind, ProductKind::Dot | ProductKind::Both) {
            return true;
        }
        self.alg.dot(v, v).iter().all(|x| self.field().is_zero(x))
    }

    /// Every `r_j * e_c` must reduce, modulo the chosen rows, to something
    /// supported on the columns still available to later rows.
    fn ideal_prefix_ok(&self, pivots: &[usize], rows: &[Row]) -> bool {
        let f = self.field();
        let n = self.n;
        let i = rows.len() - 1;
        let limit = pivots.get(i + 1).copied().unwrap_or(n);
        for row in rows {
            for adj in &row.adj {
                for c in 0..n {
                    let mut w: Vec<FieldElem> = (0..n).map(|o| adj.get(o, c).clone()).collect();
                    for (t, r) in rows.iter().enumerate() {
                        let coef = w[pivots[t]].clone();
                        if f.is_zero(&coef) {
                            continue;
                        }
                        let neg = f.neg(&coef);
                        for (o, x) in r.v.iter().enumerate() {
                            w[o] = f.mul_add(&neg, x, &w[o]);
                        }
                    }
                    if w[..limit].iter().any(|x| !f.is_zero(x)) {
                        return false;
                    }
                }
            }
        }
        true
    }
}

/// Solutions of an affine system in reversed-variable echelon form.
struct AffineSolutions {
    m: usize,
    /// Original variable indices that are free, increasing.
    free_vars: Vec<usize>,
    /// For each pivot variable (original index): constant and coefficients
    /// on the free variables it depends on.
    pivot_exprs: Vec<(usize, FieldElem, Vec<(usize, FieldElem)>)>,
}

impl AffineSolutions {
    fn new(f: &FieldSpec, m: usize, eqs: Vec<Vec<FieldElem>>) -> Option<Self> {
        if eqs.is_empty() {
            return Some(AffineSolutions {
                m,
                free_vars: (0..m).collect(),
                pivot_exprs: Vec::new(),
            });
        }
        let mat = Matrix::from_rows(f, m + 1, eqs).expect("equation width");
        let (r, _, pivots) = mat.rref();
        if pivots.last() == Some(&m) {
            return None;
        }
        let orig = |t: usize| m - 1 - t;
        let pivot_set: Vec<usize> = pivots.clone();
        let free_vars: Vec<usize> = {
            let mut v: Vec<usize> = (0..m)
                .filter(|t| !pivot_set.contains(t))
                .map(orig)
                .collect();
            v.sort_unstable();
            v
        };
        let pivot_exprs = pivots
            .iter()
            .enumerate()
            .map(|(row, &t)| {
                let deps = (t + 1..m)
                    .filter(|u| !pivot_set.contains(u))
                    .filter(|&u| !f.is_zero(r.get(row, u)))
                    .map(|u| (orig(u), f.neg(r.get(row, u))))
                    .collect();
                (orig(t), r.get(row, m).clone(), deps)
            })
            .collect();
        Some(AffineSolutions {
            m,
            free_vars,
            pivot_exprs,
        })
    }

    /// The solution whose free variables take `elems[odo[..]]`.
    fn evaluate(&self, f: &FieldSpec, odo: &[u64], elems: &[FieldElem]) -> Vec<FieldElem> {
        let mut x = vec![f.zero(); self.m];
        for (&var, &idx) in self.free_vars.iter().zip(odo) {
            x[var] = elems[idx as usize].clone();
        }
        for (var, c, deps) in &self.pivot_exprs {
            let mut acc = c.clone();
            for (u, coef) in deps {
                acc = f.mul_add(coef, &x[*u], &acc);
            }
            x[*var] = acc;
        }
        x
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Claim {
    AbelianSubalgebra,
    AbelianIdeal,
}

/// A product that breaks a claim: `left * right = value`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct FailingProduct {
    pub kind: AdjointKind,
    pub left: Vec<FieldElem>,
    pub right: Vec<FieldElem>,
    pub value: Vec<FieldElem>,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Verdict {
    Accepted,
    Rejected(FailingProduct),
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Certificate {
    pub subspace: Subspace,
    pub claim: Claim,
    /// Which products the claim refers to: Poisson, dot only or Lie only.
    pub scope: ProductKind,
    pub verdict: Option<Verdict>,
}

impl Certificate {
    pub fn new(subspace: Subspace, claim: Claim, scope: ProductKind) -> Self {
        Certificate {
            subspace,
            claim,
            scope,
            verdict: None,
        }
    }

    pub fn accepted(&self) -> bool {
        self.verdict == Some(Verdict::Accepted)
    }
}

/// Evaluates the claim exactly. Abelian-ness is checked first over pairs of
/// basis vectors; then, for ideals, `e_j * u` for every ambient `e_j` and
/// basis vector `u`, dot before bracket.
pub fn verify_witness(alg: &PoissonAlgebra, mut cert: Certificate) -> Certificate {
    let f = alg.field();
    let u = &cert.subspace;
    let kinds: Vec<AdjointKind> = match cert.scope {
        ProductKind::Dot => vec![AdjointKind::Dot],
        ProductKind::Bracket => vec![AdjointKind::Bracket],
        ProductKind::Both => vec![AdjointKind::Dot, AdjointKind::Bracket],
    };
    let mul = |k: AdjointKind, x: &[FieldElem], y: &[FieldElem]| match k {
        AdjointKind::Dot => alg.dot(x, y),
        AdjointKind::Bracket => alg.bracket(x, y),
    };
    let basis: Vec<Vec<FieldElem>> = u.basis_vectors().map(<[FieldElem]>::to_vec).collect();
    let mut failure = None;
    'abelian: for (a, x) in basis.iter().enumerate() {
        for y in &basis[a..] {
            for &k in &kinds {
                let v = mul(k, x, y);
                if v.iter().any(|c| !f.is_zero(c)) {
                    failure = Some(FailingProduct {
                        kind: k,
                        left: x.clone(),
                        right: y.clone(),
                        value: v,
                    });
                    break 'abelian;
                }
            }
        }
    }
    if failure.is_none() && cert.claim == Claim::AbelianIdeal {
        'ideal: for j in 0..alg.dim() {
            let e = alg.basis_vector(j);
            for x in &basis {
                for &k in &kinds {
                    let v = mul(k, &e, x);
                    if !u.contains_vector(&v) {
                        failure = Some(FailingProduct {
                            kind: k,
                            left: e.clone(),
                            right: x.clone(),
                            value: v,
                        });
                        break 'ideal;
                    }
                }
            }
        }
    }
    cert.verdict = Some(match failure {
        None => Verdict::Accepted,
        Some(fp) => Verdict::Rejected(fp),
    });
    cert
}

/// The algebra in the basis given by the columns of `t`.
pub fn change_basis(alg: &PoissonAlgebra, t: &Matrix) -> Result<PoissonAlgebra, InvariantError> {
    match alg.transport(t) {
        Err(AlgebraError::Linalg(LinalgError::Singular)) => Err(InvariantError::SingularTransform),
        other => Ok(other?),
    }
}

/// Applies a uniformly random invertible basis change drawn from `seed`.
pub fn random_basis_change(
    alg: &PoissonAlgebra,
    seed: u64,
) -> Result<PoissonAlgebra, InvariantError> {
    let f = alg.field();
    let q = f.order().ok_or(InvariantError::InfiniteField)?;
    let n = alg.dim();
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    loop {
        let rows = (0..n)
            .map(|_| {
                (0..n)
                    .map(|_| f.nth_element(rng.random_range(0..q)))
                    .collect()
            })
            .collect();
        let t = Matrix::from_rows(f, n, rows)?;
        if t.rank() == n {
            return change_basis(alg, &t);
        }
    }
}

/// A chain `0 ⊂ L₁ ⊂ … ⊂ Lₙ` of ideals of the Lie part with `dim Lᵢ = i`,
/// if one exists.
pub fn is_supersolvable_lie(alg: &PoissonAlgebra) -> Result<Option<Vec<Subspace>>, InvariantError> {
    if !alg.field().is_finite() {
        return Err(InvariantError::InfiniteField);
    }
    Ok(supersolvable_chain(&alg.lie_part()))
}

fn supersolvable_chain(lie: &PoissonAlgebra) -> Option<Vec<Subspace>> {
    let n = lie.dim();
    let f = lie.field();
    if n == 0 {
        return Some(Vec::new());
    }
    for line in crate::linalg::enumerate_subspaces(n, 1, f).ok()? {
        if !lie.classify_with(&line, ProductKind::Bracket).ok()?.ideal {
            continue;
        }
        let quotient = lie.quotient_algebra(&line).ok()?;
        let Some(sub) = supersolvable_chain(&quotient) else {
            continue;
        };
        // lift the quotient chain through the complement coordinates
        let comp = line.non_pivots();
        let mut chain = vec![line.clone()];
        for s in sub {
            let mut vecs: Vec<Vec<FieldElem>> =
                line.basis_vectors().map(<[FieldElem]>::to_vec).collect();
            for v in s.basis_vectors() {
                let mut lifted = vec![f.zero(); n];
                for (c, x) in comp.iter().zip(v) {
                    lifted[*c] = x.clone();
                }
                vecs.push(lifted);
            }
            chain.push(Subspace::span(f, n, vecs));
        }
        return Some(chain);
    }
    None
}

#[cfg(test)]
mod tests {
    use super::*;

    fn alg(
        f: &FieldSpec,
        n: usize,
        dot: &[(usize, usize, usize, i64)],
        br: &[(usize, usize, usize, i64)],
    ) -> PoissonAlgebra {
        PoissonAlgebra::from_int_table(f, n, dot, br).unwrap()
    }

    fn p3_14(f: &FieldSpec) -> PoissonAlgebra {
        alg(f, 3, &[(1, 1, 2, 1)], &[(1, 3, 3, 1)])
    }

    fn p3_18(f: &FieldSpec) -> PoissonAlgebra {
        alg(
            f,
            3,
            &[(1, 1, 1, 1), (1, 2, 2, 1), (1, 3, 3, 1)],
            &[(2, 3, 2, 1)],
        )
    }

    fn p3_20(f: &FieldSpec) -> PoissonAlgebra {
        alg(f, 3, &[(1, 1, 1, 1)], &[(2, 3, 2, 1)])
    }

    #[test]
    fn profile_examples() {
        let f = FieldSpec::Prime(5);
        assert_eq!(
            invariant_profile(&p3_18(&f)).unwrap().values,
            [1, 1, 2, 2, 2, 2]
        );
        let p4_12 = alg(
            &f,
            4,
            &[(1, 1, 2, 1), (1, 2, 4, 1), (3, 3, 4, 1)],
            &[(1, 3, 4, 1)],
        );
        assert_eq!(
            invariant_profile(&p4_12).unwrap().values,
            [2, 2, 2, 2, 3, 3]
        );
        assert_eq!(
            invariant_profile(&PoissonAlgebra::zero(&f, 3))
                .unwrap()
                .values,
            [3; 6]
        );
        assert_eq!(
            invariant_profile(&PoissonAlgebra::zero(&FieldSpec::Rationals, 2)),
            Err(InvariantError::InfiniteField)
        );
    }

    #[test]
    fn find_abelian_examples() {
        let f = FieldSpec::Prime(5);
        assert_eq!(
            find_abelian_of_dim(&p3_14(&f), 2, true).unwrap(),
            Some(Subspace::coordinate(&f, 3, &[1, 2]))
        );
        assert_eq!(find_abelian_of_dim(&p3_18(&f), 2, false).unwrap(), None);
        assert_eq!(
            find_abelian_of_dim(&p3_18(&f), 1, false).unwrap(),
            Some(Subspace::coordinate(&f, 3, &[1]))
        );
    }

    #[test]
    fn certificate_examples() {
        let f = FieldSpec::Prime(5);
        let c = verify_witness(
            &p3_20(&f),
            Certificate::new(
                Subspace::coordinate(&f, 3, &[2]),
                Claim::AbelianIdeal,
                ProductKind::Both,
            ),
        );
        let Some(Verdict::Rejected(fp)) = c.verdict else {
            panic!("expected rejection");
        };
        assert_eq!(fp.kind, AdjointKind::Bracket);
        let e = |i: usize| p3_20(&f).basis_vector(i);
        assert_eq!((fp.left, fp.right, fp.value), (e(1), e(2), e(1)));

        let z = verify_witness(
            &p3_20(&f),
            Certificate::new(
                Subspace::zero(&f, 3),
                Claim::AbelianIdeal,
                ProductKind::Both,
            ),
        );
        assert!(z.accepted());
    }

    #[test]
    fn basis_changes() {
        let f = FieldSpec::Prime(5);
        let a = p3_14(&f);
        assert_eq!(change_basis(&a, &Matrix::identity(&f, 3)).unwrap(), a);
        let sing = Matrix::from_i64(&f, &[&[1, 2, 0], &[2, 4, 0], &[0, 0, 1]]).unwrap();
        assert_eq!(
            change_basis(&a, &sing),
            Err(InvariantError::SingularTransform)
        );
        let b = random_basis_change(&a, 7).unwrap();
        assert!(b.validate().ok());
        assert_eq!(b, random_basis_change(&a, 7).unwrap());
        assert_eq!(
            invariant_profile(&b).unwrap().values,
            invariant_profile(&a).unwrap().values
        );
    }

    #[test]
    fn supersolvable_examples() {
        // oscillator Lie part, n = 1, λ = 1: basis e_{-1}, e_0, e_1, ê_1
        let osc = |f: &FieldSpec| alg(f, 4, &[], &[(1, 3, 4, 1), (1, 4, 3, -1), (3, 4, 2, 1)]);
        assert!(is_supersolvable_lie(&osc(&FieldSpec::Prime(7)))
            .unwrap()
            .is_none());
        let chain = is_supersolvable_lie(&osc(&FieldSpec::Prime(5)))
            .unwrap()
            .unwrap();
        assert_eq!(
            chain.iter().map(Subspace::dim).collect::<Vec<_>>(),
            vec![1, 2, 3, 4]
        );
        assert_eq!(
            chain[0],
            Subspace::coordinate(&FieldSpec::Prime(5), 4, &[1])
        );
        assert!(
            is_supersolvable_lie(&PoissonAlgebra::zero(&FieldSpec::Prime(3), 3))
                .unwrap()
                .is_some()
        );
    }

    #[test]
    fn affine_solutions_are_lex_ordered() {
        let f = FieldSpec::Prime(3);
        // x0 + x2 = 1 with columns stored reversed: [x2, x1, x0 | rhs]
        let eqs = vec![vec![f.one(), f.zero(), f.one(), f.one()]];
        let s = AffineSolutions::new(&f, 3, eqs).unwrap();
        let elems = f.elements().unwrap();
        let mut sols = Vec::new();
        for a in 0..3 {
            for b in 0..3 {
                sols.push(s.evaluate(&f, &[a, b], &elems));
            }
        }
        let mut sorted = sols.clone();
        sorted.sort();
        assert_eq!(sols, sorted);
        assert!(sols.iter().all(|x| f.add(&x[0], &x[2]) == f.one()));
    }
}
