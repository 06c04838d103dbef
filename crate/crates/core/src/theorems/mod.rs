//! Executable checks of structural statements about Poisson algebras, and
//! reproduction of the invariant tables for dimensions three and four.
//!
//! Each check evaluates a hypothesis and a conclusion on a set of concrete
//! instances. An instance whose hypothesis cannot be realized over the given
//! field is skipped, never failed.

mod checks;
pub mod tables;

use rayon::prelude::*;
use serde::Serialize;
use thiserror::Error;

use crate::catalog::{self, CatalogError, Params};
use crate::compat::CompatError;
use crate::field::FieldSpec;
use crate::invariants::InvariantError;
use crate::linalg::{enumerate_subspaces, gaussian_binomial, Subspace};
use crate::poisson::{AlgebraError, PoissonAlgebra};

pub use tables::{
    default_t_values, reproduce_table, CellDiff, GoldenRow, RowOutcome, TRange, TableReport,
    TABLE1, TABLE2,
};

pub const DEFAULT_BUDGET: u64 = 1_000_000;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum TheoremError {
    #[error("unknown check `{0}`")]
    UnknownCheck(String),
    #[error("{needed} subspaces exceed the enumeration budget of {budget}")]
    BudgetExceeded { needed: u128, budget: u64 },
    #[error(transparent)]
    Invariant(#[from] InvariantError),
    #[error(transparent)]
    Catalog(#[from] CatalogError),
    #[error(transparent)]
    Compat(#[from] CompatError),
    #[error(transparent)]
    Algebra(#[from] AlgebraError),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Verdict {
    Pass,
    Fail,
    Skipped,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct InstanceResult {
    pub algebra: String,
    pub field: String,
    pub hypothesis_met: bool,
    pub conclusion_holds: bool,
    /// The unrealizable hypothesis, for skipped instances.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub skipped: Option<String>,
    pub evidence: Vec<String>,
}

impl InstanceResult {
    pub fn new(algebra: impl Into<String>, field: &FieldSpec) -> Self {
        InstanceResult {
            algebra: algebra.into(),
            field: field.descriptor(),
            hypothesis_met: false,
            conclusion_holds: true,
            skipped: None,
            evidence: Vec::new(),
        }
    }

    pub fn skip(algebra: impl Into<String>, field: &FieldSpec, reason: impl Into<String>) -> Self {
        InstanceResult {
            skipped: Some(reason.into()),
            ..Self::new(algebra, field)
        }
    }

    pub fn failed(&self) -> bool {
        self.hypothesis_met && !self.conclusion_holds
    }

    fn note(&mut self, s: impl Into<String>) {
        self.evidence.push(s.into());
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct CheckReport {
    pub check_id: String,
    pub verdict: Verdict,
    pub instances: Vec<InstanceResult>,
    /// Statement parts not covered by the instances, if any.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub coverage: Option<String>,
}

impl CheckReport {
    pub fn from_instances(
        check_id: &str,
        instances: Vec<InstanceResult>,
        coverage: Option<&str>,
    ) -> Self {
        let verdict = if instances.iter().any(InstanceResult::failed) {
            Verdict::Fail
        } else if instances.iter().all(|i| i.skipped.is_some()) {
            Verdict::Skipped
        } else {
            Verdict::Pass
        };
        CheckReport {
            check_id: check_id.to_string(),
            verdict,
            instances,
            coverage: coverage.map(str::to_string),
        }
    }

    pub fn hypotheses_met(&self) -> usize {
        self.instances.iter().filter(|i| i.hypothesis_met).count()
    }
}

#[derive(Debug, Clone)]
pub struct RunOptions {
    /// Fields to run on; `None` uses each check's default set.
    pub fields: Option<Vec<FieldSpec>>,
    /// Cap on the number of subspaces any exhaustive step may enumerate.
    pub budget: u64,
}

impl Default for RunOptions {
    fn default() -> Self {
        RunOptions {
            fields: None,
            budget: DEFAULT_BUDGET,
        }
    }
}

/// The check identifiers, in suite order.
pub const CHECK_IDS: [&str; 16] = [
    "normalizer_growth",
    "normalizer_subalg",
    "maximal_lie_ideal_promotes",
    "onedim_exists",
    "maximal_ideal_codim1",
    "codim1_solvable",
    "assoc_alpha_eq_beta",
    "codim1_ideal",
    "nilpotent_codim2",
    "q3_simple",
    "codim2_structure",
    "osc_complex",
    "osc_real",
    "filiform_ceilings",
    "model_filiform_family",
    "model_filiform_cases",
];

pub fn run_check(check_id: &str, opts: &RunOptions) -> Result<CheckReport, TheoremError> {
    checks::run(check_id, opts)
}

pub fn run_all(opts: &RunOptions) -> Result<Vec<CheckReport>, TheoremError> {
    CHECK_IDS.iter().map(|id| run_check(id, opts)).collect()
}

pub(crate) fn prime_fields(ps: &[u64]) -> Vec<FieldSpec> {
    ps.iter().map(|&p| FieldSpec::Prime(p)).collect()
}

/// A named algebra used as a check instance.
#[derive(Debug, Clone)]
pub struct Instance {
    pub id: String,
    pub algebra: PoissonAlgebra,
}

fn build(name: &str, kv: &[(&str, &str)], f: &FieldSpec) -> Option<Instance> {
    let params: Params = kv
        .iter()
        .map(|(k, v)| (k.to_string(), v.to_string()))
        .collect();
    let built = catalog::catalog_build(name, &params, f).ok()?;
    let id = if built.params.is_empty() {
        built.name.clone()
    } else {
        let ps: Vec<String> = built
            .params
            .iter()
            .map(|(k, v)| format!("{k}={v}"))
            .collect();
        format!("{}[{}]", built.name, ps.join(","))
    };
    Some(Instance {
        id,
        algebra: built.algebra,
    })
}

fn dedup(mut v: Vec<Instance>) -> Vec<Instance> {
    let mut seen = std::collections::BTreeSet::new();
    v.retain(|i| seen.insert(i.id.clone()));
    v
}

/// Table 1 and Table 2 algebras; parameterized rows at `t ∈ {0, 1, 2}` where
/// admissible and distinct in the field.
pub fn table_instances(f: &FieldSpec) -> Vec<Instance> {
    let mut out = Vec::new();
    for name in catalog::TABLE1_NAMES.iter().chain(catalog::TABLE2_NAMES) {
        for t in ["0", "1", "2"] {
            out.extend(build(name, &[("t", t)], f).or_else(|| build(name, &[], f)));
        }
    }
    dedup(out)
}

/// Further catalog members of small dimension.
pub fn extra_instances(f: &FieldSpec) -> Vec<Instance> {
    let specs: &[(&str, &[(&str, &str)])] = &[
        ("heisenberg", &[]),
        ("sl2", &[]),
        ("L1", &[("gamma", "0")]),
        ("L1", &[("gamma", "1")]),
        ("p_n", &[("n", "4"), ("gamma", "0")]),
        ("p_n", &[("n", "4"), ("gamma", "1")]),
        ("p_n", &[("n", "5"), ("gamma", "1")]),
        ("q3", &[("lambda", "1,0;0,-1")]),
        ("q3", &[("lambda", "0,1;0,0")]),
        ("q3", &[("lambda", "0,1;2,0"), ("k", "1")]),
        ("q3", &[("lambda", "0,1;3,0"), ("k", "1")]),
        ("zero", &[("n", "3")]),
        ("P0", &[("n", "4")]),
        ("P1.1", &[("n", "4")]),
        ("P1.2", &[("n", "4")]),
        ("P1.3", &[("n", "4")]),
        ("P1.4", &[("n", "4")]),
        ("P1.5", &[("n", "4")]),
        ("P1.2", &[("n", "5")]),
        ("P1.5", &[("n", "5")]),
        ("Lmodel", &[("n", "4")]),
        ("Lmodel_poisson", &[("n", "4"), ("l1", "1"), ("l3", "1")]),
        ("Lmodel_poisson", &[("n", "4"), ("l2", "1")]),
        ("Lmodel_poisson", &[("n", "5"), ("l3", "1")]),
        ("osc", &[("lambda", "1")]),
        ("osc_poisson", &[("lambda", "1"), ("mu", "1")]),
    ];
    let mut out: Vec<Instance> = specs.iter().filter_map(|(n, kv)| build(n, kv, f)).collect();
    // e₁e₁ = e₁ on a plane, and the plane with [e₁,e₂] = e₂: trivial algebras
    // that sit just outside several hypotheses
    let idem = PoissonAlgebra::from_int_table(f, 2, &[(1, 1, 1, 1)], &[]).expect("valid table");
    out.push(Instance {
        id: "idempotent_plane".into(),
        algebra: idem,
    });
    let aff = PoissonAlgebra::from_int_table(f, 2, &[], &[(1, 2, 2, 1)]).expect("valid table");
    out.push(Instance {
        id: "affine_plane".into(),
        algebra: aff,
    });
    dedup(out)
}

/// Tables plus extras, restricted to `dim ≤ max_dim`.
pub fn catalog_instances(f: &FieldSpec, max_dim: usize) -> Vec<Instance> {
    let mut v = table_instances(f);
    v.extend(extra_instances(f));
    v.retain(|i| i.algebra.dim() <= max_dim);
    v
}

/// Number of subspaces of every dimension in `F_q^n`.
pub(crate) fn subspace_count(n: usize, q: u64, dims: impl Iterator<Item = usize>) -> u128 {
    dims.map(|k| gaussian_binomial(n, k, q as u128)).sum()
}

/// All subspaces of the given dimensions, guarded by the budget.
pub(crate) fn subspaces(
    f: &FieldSpec,
    n: usize,
    dims: impl Iterator<Item = usize> + Clone,
    budget: u64,
) -> Result<Vec<Subspace>, TheoremError> {
    let q = f.order().expect("finite field");
    let needed = subspace_count(n, q, dims.clone());
    if needed > budget as u128 {
        return Err(TheoremError::BudgetExceeded { needed, budget });
    }
    let mut out = Vec::with_capacity(needed as usize);
    for k in dims {
        out.extend(enumerate_subspaces(n, k, f).map_err(AlgebraError::from)?);
    }
    Ok(out)
}

/// Runs `f` on every instance in parallel, keeping input order.
pub(crate) fn per_instance<F>(
    instances: &[Instance],
    f: F,
) -> Result<Vec<InstanceResult>, TheoremError>
where
    F: Fn(&Instance) -> Result<InstanceResult, TheoremError> + Sync + Send,
{
    instances.par_iter().map(f).collect()
}
