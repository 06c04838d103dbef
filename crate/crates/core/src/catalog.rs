//! Named algebras and parameterized families.
//!
//! Every constructor returns a validated algebra. Parameters are given as
//! text (`"t" => "2"`, `"lambda" => "1,2"`, `"lambda" => "0,1;3,0"`) and are
//! read as elements of the target field, so integer literals are reduced
//! modulo the characteristic.
//!
//! The oscillator family uses the basis order `e₋₁, e₀, e₁, ê₁, …, eₙ, êₙ`;
//! [`CatalogAlgebra::labels`] records it.

use std::collections::BTreeMap;

use serde::Serialize;
use thiserror::Error;

use crate::field::{FieldElem, FieldSpec};
use crate::linalg::{kernel, Matrix};
use crate::poisson::{Entry, PoissonAlgebra};

pub type Params = BTreeMap<String, String>;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum CatalogError {
    #[error("unknown catalog entry `{0}`")]
    UnknownName(String),
    #[error("bad parameters: {0}")]
    BadParams(String),
    #[error("q3 requires a trace-zero matrix")]
    NotLie,
}

fn bad(msg: impl Into<String>) -> CatalogError {
    CatalogError::BadParams(msg.into())
}

/// A catalog instantiation with its provenance.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CatalogAlgebra {
    pub name: String,
    pub params: Params,
    pub algebra: PoissonAlgebra,
    /// Basis labels, one per coordinate.
    pub labels: Vec<String>,
    pub notes: Vec<String>,
}

#[derive(Debug, Clone, Serialize)]
pub struct ParamInfo {
    pub name: &'static str,
    pub default: Option<&'static str>,
    pub doc: &'static str,
}

#[derive(Debug, Clone, Serialize)]
pub struct CatalogEntry {
    pub name: &'static str,
    pub dim: &'static str,
    pub pure_lie: bool,
    pub params: Vec<ParamInfo>,
    pub description: &'static str,
}

const T_PARAM: ParamInfo = ParamInfo {
    name: "t",
    default: Some("1"),
    doc: "table parameter (scalar)",
};

const N_PARAM: ParamInfo = ParamInfo {
    name: "n",
    default: None,
    doc: "dimension or family size (integer)",
};

// (name, dot, bracket) with 1-based entries; `T` marks a coefficient equal to t.
const T: i64 = i64::MIN;

type Table = (
    &'static str,
    usize,
    &'static [(usize, usize, usize, i64)],
    &'static [(usize, usize, usize, i64)],
);

const TABLE_ALGEBRAS: &[Table] = &[
    ("P3.14", 3, &[(1, 1, 2, 1)], &[(1, 3, 3, 1)]),
    ("P3.15", 3, &[(1, 1, 2, 1)], &[(1, 3, 2, 1)]),
    ("P3.16", 3, &[(1, 2, 3, 1)], &[(1, 2, 3, T)]),
    (
        "P3.18",
        3,
        &[(1, 1, 1, 1), (1, 2, 2, 1), (1, 3, 3, 1)],
        &[(2, 3, 2, 1)],
    ),
    ("P3.20", 3, &[(1, 1, 1, 1)], &[(2, 3, 2, 1)]),
    ("P4.7", 4, &[(1, 1, 4, 1)], &[(2, 3, 4, 1)]),
    ("P4.8", 4, &[(1, 1, 4, 1), (2, 2, 4, 1)], &[(1, 3, 4, 1)]),
    (
        "P4.9",
        4,
        &[(1, 1, 4, 1), (2, 2, 4, -1)],
        &[(1, 3, 4, 1), (2, 3, 4, 1)],
    ),
    (
        "P4.10",
        4,
        &[(1, 2, 4, 1), (3, 3, 4, 1)],
        &[(1, 3, 4, 1), (2, 3, 4, T)],
    ),
    (
        "P4.12",
        4,
        &[(1, 1, 2, 1), (1, 2, 4, 1), (3, 3, 4, 1)],
        &[(1, 3, 4, 1)],
    ),
    ("P4.14", 4, &[(1, 1, 2, 1), (1, 2, 4, 1)], &[(1, 3, 4, 1)]),
    (
        "P4.15",
        4,
        &[(1, 1, 4, 1), (2, 2, 4, 1)],
        &[(1, 2, 3, 1), (1, 3, 4, 1)],
    ),
    ("P4.16", 4, &[(2, 2, 4, 1)], &[(1, 2, 3, 1), (1, 3, 4, 1)]),
    ("P4.17", 4, &[(1, 1, 4, 1)], &[(1, 2, 3, 1), (1, 3, 4, 1)]),
    ("P4.18", 4, &[(1, 2, 4, 1)], &[(1, 2, 3, 1), (1, 3, 4, 1)]),
    ("P4.21", 4, &[(1, 1, 4, 1), (1, 2, 3, T)], &[(1, 2, 3, 1)]),
    ("P4.22", 4, &[(1, 1, 4, 1), (2, 2, 3, 1)], &[(1, 2, 3, 1)]),
    ("P4.25", 4, &[(1, 2, 4, 1)], &[(1, 2, 3, 1)]),
    (
        "P4.26",
        4,
        &[(1, 1, 3, 1), (2, 2, 3, T), (1, 2, 4, 1)],
        &[(1, 2, 3, 1)],
    ),
];

const PARAMETERIZED: &[&str] = &["P3.16", "P4.10", "P4.21", "P4.26"];

/// Names of the Table 1 rows, in table order.
pub const TABLE1_NAMES: &[&str] = &["P3.14", "P3.15", "P3.16", "P3.18", "P3.20"];

/// Names of the Table 2 algebras, in table order.
pub const TABLE2_NAMES: &[&str] = &[
    "P4.7", "P4.8", "P4.9", "P4.10", "P4.12", "P4.14", "P4.15", "P4.16", "P4.17", "P4.18", "P4.21",
    "P4.22", "P4.25", "P4.26",
];

pub fn catalog_entries() -> Vec<CatalogEntry> {
    let mut out: Vec<CatalogEntry> = TABLE_ALGEBRAS
        .iter()
        .map(|(name, dim, _, _)| CatalogEntry {
            name,
            dim: if *dim == 3 { "3" } else { "4" },
            pure_lie: false,
            params: if PARAMETERIZED.contains(name) {
                vec![T_PARAM]
            } else {
                Vec::new()
            },
            description: if name.starts_with("P3") {
                "three-dimensional Poisson algebra"
            } else {
                "four-dimensional nilpotent Poisson algebra"
            },
        })
        .collect();
    let p = |name, default, doc| ParamInfo { name, default, doc };
    let fam = |name, dim, pure_lie, params, description| CatalogEntry {
        name,
        dim,
        pure_lie,
        params,
        description,
    };
    out.extend([
        fam(
            "osc",
            "2n+2",
            true,
            vec![p("lambda", None, "sequence λ₁,…,λₙ")],
            "oscillator Lie algebra",
        ),
        fam(
            "osc_poisson",
            "2n+2",
            false,
            vec![
                p("lambda", None, "sequence λ₁,…,λₙ"),
                p("mu", Some("0"), "scalar μ in e₋₁∘e₋₁ = μe₀"),
            ],
            "Poisson structure on the oscillator algebra",
        ),
        fam(
            "P0",
            "n",
            false,
            vec![N_PARAM],
            "null-filiform commutative algebra, zero bracket",
        ),
        fam(
            "P1.1",
            "n",
            false,
            vec![N_PARAM],
            "filiform commutative algebra, zero bracket",
        ),
        fam(
            "P1.2",
            "n",
            false,
            vec![N_PARAM],
            "filiform with [e₁,eₙ] = eₙ",
        ),
        fam(
            "P1.3",
            "n",
            false,
            vec![N_PARAM],
            "filiform with [e₁,eₙ] = eₙ₋₁",
        ),
        fam(
            "P1.4",
            "n",
            false,
            vec![N_PARAM],
            "filiform with eₙeₙ = eₙ₋₁",
        ),
        fam(
            "P1.5",
            "n",
            false,
            vec![N_PARAM],
            "filiform with eₙeₙ = eₙ₋₁ and [e₁,eₙ] = eₙ₋₁",
        ),
        fam(
            "Lmodel",
            "n",
            true,
            vec![N_PARAM],
            "model filiform Lie algebra [x₀,xᵢ] = xᵢ₊₁",
        ),
        fam(
            "Lmodel_poisson",
            "n",
            false,
            vec![
                N_PARAM,
                p("l1", Some("0"), "coefficient of x₀x₀"),
                p("l2", Some("0"), "coefficient of x₀x₁"),
                p("l3", Some("0"), "coefficient of x₁x₁"),
            ],
            "Poisson structure on the model filiform algebra",
        ),
        fam(
            "L1",
            "3",
            true,
            vec![p("gamma", Some("0"), "scalar γ")],
            "three-dimensional simple Lie algebra L₁(γ)",
        ),
        fam(
            "p_n",
            "n",
            false,
            vec![N_PARAM, p("gamma", Some("0"), "scalar γ")],
            "p₄(γ) plus an (n−4)-dimensional zero summand",
        ),
        fam(
            "q3",
            "3+k",
            true,
            vec![
                p("lambda", None, "2×2 matrix a,b;c,d with trace 0"),
                p("k", Some("0"), "central summand dimension"),
            ],
            "Lie algebra q₃(λ), optionally plus a central summand",
        ),
        fam(
            "q4",
            "4",
            true,
            vec![p("lambda", None, "2×2 matrix"), p("mu", None, "2×2 matrix")],
            "Lie algebra q₄(λ, μ), characteristic 2 only",
        ),
        fam(
            "heisenberg",
            "3",
            true,
            Vec::new(),
            "Heisenberg algebra [e₁,e₂] = e₃",
        ),
        fam(
            "sl2",
            "3",
            true,
            Vec::new(),
            "sl₂ with [h,e] = 2e, [h,f] = −2f, [e,f] = h",
        ),
        fam("zero", "n", false, vec![N_PARAM], "both products zero"),
    ]);
    out
}

fn get_param<'a>(params: &'a Params, key: &str) -> Option<&'a str> {
    params.get(key).map(String::as_str)
}

fn scalar(
    f: &FieldSpec,
    params: &Params,
    key: &str,
    default: Option<&str>,
) -> Result<FieldElem, CatalogError> {
    let text = get_param(params, key)
        .or(default)
        .ok_or_else(|| bad(format!("missing parameter `{key}`")))?;
    f.parse_elem(text).map_err(|e| bad(format!("{key}: {e}")))
}

fn integer(params: &Params, key: &str, default: Option<usize>) -> Result<usize, CatalogError> {
    match get_param(params, key) {
        Some(t) => t
            .trim()
            .parse()
            .map_err(|_| bad(format!("{key} must be a nonnegative integer"))),
        None => default.ok_or_else(|| bad(format!("missing parameter `{key}`"))),
    }
}

fn sequence(f: &FieldSpec, params: &Params, key: &str) -> Result<Vec<FieldElem>, CatalogError> {
    let text = get_param(params, key).ok_or_else(|| bad(format!("missing parameter `{key}`")))?;
    text.split(',')
        .map(|t| f.parse_elem(t).map_err(|e| bad(format!("{key}: {e}"))))
        .collect()
}

fn matrix2(f: &FieldSpec, params: &Params, key: &str) -> Result<[[FieldElem; 2]; 2], CatalogError> {
    let text = get_param(params, key).ok_or_else(|| bad(format!("missing parameter `{key}`")))?;
    let rows: Vec<Vec<FieldElem>> = text
        .split(';')
        .map(|r| {
            r.split(',')
                .map(|t| f.parse_elem(t).map_err(|e| bad(format!("{key}: {e}"))))
                .collect()
        })
        .collect::<Result<_, _>>()?;
    match rows.as_slice() {
        [a, b] if a.len() == 2 && b.len() == 2 => {
            Ok([[a[0].clone(), a[1].clone()], [b[0].clone(), b[1].clone()]])
        }
        _ => Err(bad(format!("{key} must be a 2×2 matrix `a,b;c,d`"))),
    }
}

fn allowed(params: &Params, keys: &[&str]) -> Result<(), CatalogError> {
    match params.keys().find(|k| !keys.contains(&k.as_str())) {
        Some(k) => Err(bad(format!("unexpected parameter `{k}`"))),
        None => Ok(()),
    }
}

fn int_entries(f: &FieldSpec, t: &FieldElem, table: &[(usize, usize, usize, i64)]) -> Vec<Entry> {
    table
        .iter()
        .map(|&(i, j, k, c)| {
            (
                i - 1,
                j - 1,
                k - 1,
                if c == T { t.clone() } else { f.from_i64(c) },
            )
        })
        .collect()
}

fn finish(
    name: &str,
    params: Params,
    alg: PoissonAlgebra,
    labels: Vec<String>,
    notes: Vec<String>,
) -> Result<CatalogAlgebra, CatalogError> {
    let algebra = alg.into_validated().map_err(|r| {
        bad(format!(
            "{name} with these parameters is not a Poisson algebra: {r}"
        ))
    })?;
    Ok(CatalogAlgebra {
        name: name.to_string(),
        params,
        algebra,
        labels,
        notes,
    })
}

fn e_labels(n: usize) -> Vec<String> {
    (1..=n).map(|i| format!("e{i}")).collect()
}

/// Builds a catalog algebra by name.
pub fn catalog_build(
    name: &str,
    params: &Params,
    field: &FieldSpec,
) -> Result<CatalogAlgebra, CatalogError> {
    let f = field;
    if let Some((nm, dim, dot, br)) = TABLE_ALGEBRAS.iter().find(|t| t.0 == name) {
        let parameterized = PARAMETERIZED.contains(nm);
        allowed(params, if parameterized { &["t"] } else { &[] })?;
        let t = scalar(f, params, "t", Some("1"))?;
        if *nm == "P3.16" && f.is_zero(&t) {
            return Err(bad("P3.16 needs t ≠ 0"));
        }
        let mut used = Params::new();
        if parameterized {
            used.insert("t".into(), f.format_elem(&t));
        }
        let alg = PoissonAlgebra::new(f, *dim, int_entries(f, &t, dot), int_entries(f, &t, br))
            .map_err(|e| bad(e.to_string()))?;
        return finish(nm, used, alg, e_labels(*dim), Vec::new());
    }
    match name {
        "osc" | "osc_poisson" => {
            let is_poisson = name == "osc_poisson";
            allowed(
                params,
                if is_poisson {
                    &["lambda", "mu"]
                } else {
                    &["lambda"]
                },
            )?;
            let lambda = sequence(f, params, "lambda")?;
            let mu = if is_poisson {
                scalar(f, params, "mu", Some("0"))?
            } else {
                f.zero()
            };
            let mut notes = Vec::new();
            oscillator_admissible(f, &lambda, &mut notes)?;
            let mut used = Params::new();
            used.insert(
                "lambda".into(),
                lambda
                    .iter()
                    .map(|x| f.format_elem(x))
                    .collect::<Vec<_>>()
                    .join(","),
            );
            if is_poisson {
                used.insert("mu".into(), f.format_elem(&mu));
            }
            let (alg, labels) = oscillator(f, &lambda, &mu);
            finish(name, used, alg, labels, notes)
        }
        "P0" | "P1.1" | "P1.2" | "P1.3" | "P1.4" | "P1.5" => {
            allowed(params, &["n"])?;
            let n = integer(params, "n", None)?;
            let min = if name == "P0" { 1 } else { 3 };
            if n < min {
                return Err(bad(format!("{name} needs n ≥ {min}")));
            }
            let alg = filiform(f, name, n);
            finish(name, single("n", n), alg, e_labels(n), Vec::new())
        }
        "Lmodel" | "Lmodel_poisson" => {
            let is_poisson = name == "Lmodel_poisson";
            allowed(
                params,
                if is_poisson {
                    &["n", "l1", "l2", "l3"]
                } else {
                    &["n"]
                },
            )?;
            let n = integer(params, "n", None)?;
            if n < 3 {
                return Err(bad("the model filiform algebra needs n ≥ 3"));
            }
            let mut used = single("n", n);
            let ls = if is_poisson {
                let ls = [
                    scalar(f, params, "l1", Some("0"))?,
                    scalar(f, params, "l2", Some("0"))?,
                    scalar(f, params, "l3", Some("0"))?,
                ];
                for (k, v) in ["l1", "l2", "l3"].iter().zip(&ls) {
                    used.insert(k.to_string(), f.format_elem(v));
                }
                ls
            } else {
                [f.zero(), f.zero(), f.zero()]
            };
            let labels = (0..n).map(|i| format!("x{i}")).collect();
            finish(name, used, model_filiform(f, n, &ls), labels, Vec::new())
        }
        "L1" => {
            allowed(params, &["gamma"])?;
            let g = scalar(f, params, "gamma", Some("0"))?;
            let used = single_elem(f, "gamma", &g);
            finish(name, used, l1(f, &g), e_labels(3), Vec::new())
        }
        "p_n" => {
            allowed(params, &["n", "gamma"])?;
            let n = integer(params, "n", Some(4))?;
            if n < 4 {
                return Err(bad("p_n needs n ≥ 4"));
            }
            let g = scalar(f, params, "gamma", Some("0"))?;
            let mut used = single_elem(f, "gamma", &g);
            used.insert("n".into(), n.to_string());
            finish(name, used, p_n(f, n, &g), e_labels(n), Vec::new())
        }
        "q3" => {
            allowed(params, &["lambda", "k"])?;
            let lam = matrix2(f, params, "lambda")?;
            let k = integer(params, "k", Some(0))?;
            if !f.is_zero(&f.add(&lam[0][0], &lam[1][1])) {
                return Err(CatalogError::NotLie);
            }
            let mut used = Params::new();
            used.insert("lambda".into(), fmt_matrix(f, &lam));
            used.insert("k".into(), k.to_string());
            let mut labels = vec!["h".to_string(), "x".into(), "y".into()];
            labels.extend((1..=k).map(|i| format!("a{i}")));
            finish(name, used, q3(f, &lam, k), labels, Vec::new())
        }
        "q4" => {
            allowed(params, &["lambda", "mu"])?;
            if f.characteristic() != 2 {
                return Err(bad("q4 is only defined in characteristic 2"));
            }
            let lam = matrix2(f, params, "lambda")?;
            let mu = matrix2(f, params, "mu")?;
            let mut used = Params::new();
            used.insert("lambda".into(), fmt_matrix(f, &lam));
            used.insert("mu".into(), fmt_matrix(f, &mu));
            let labels = vec!["h".to_string(), "a".into(), "x".into(), "y".into()];
            finish(name, used, q4(f, &lam, &mu), labels, Vec::new())
        }
        "heisenberg" => {
            allowed(params, &[])?;
            finish(name, Params::new(), heisenberg(f), e_labels(3), Vec::new())
        }
        "sl2" => {
            allowed(params, &[])?;
            finish(
                name,
                Params::new(),
                sl2(f),
                vec!["h".into(), "e".into(), "f".into()],
                Vec::new(),
            )
        }
        "zero" => {
            allowed(params, &["n"])?;
            let n = integer(params, "n", None)?;
            finish(
                name,
                single("n", n),
                PoissonAlgebra::zero(f, n),
                e_labels(n),
                Vec::new(),
            )
        }
        _ => Err(CatalogError::UnknownName(name.to_string())),
    }
}

fn single(k: &str, n: usize) -> Params {
    let mut p = Params::new();
    p.insert(k.into(), n.to_string());
    p
}

fn single_elem(f: &FieldSpec, k: &str, v: &FieldElem) -> Params {
    let mut p = Params::new();
    p.insert(k.into(), f.format_elem(v));
    p
}

fn fmt_matrix(f: &FieldSpec, m: &[[FieldElem; 2]; 2]) -> String {
    m.iter()
        .map(|r| {
            r.iter()
                .map(|x| f.format_elem(x))
                .collect::<Vec<_>>()
                .join(",")
        })
        .collect::<Vec<_>>()
        .join(";")
}

/// Shorthand for table algebras with the default parameter.
pub fn named(name: &str, field: &FieldSpec) -> Result<PoissonAlgebra, CatalogError> {
    Ok(catalog_build(name, &Params::new(), field)?.algebra)
}

/// A table algebra with its parameter `t` set.
pub fn named_with_t(name: &str, t: i64, field: &FieldSpec) -> Result<PoissonAlgebra, CatalogError> {
    let mut p = Params::new();
    p.insert("t".into(), t.to_string());
    Ok(catalog_build(name, &p, field)?.algebra)
}

fn oscillator_admissible(
    f: &FieldSpec,
    lambda: &[FieldElem],
    notes: &mut Vec<String>,
) -> Result<(), CatalogError> {
    if lambda.is_empty() {
        return Err(bad("lambda must be nonempty"));
    }
    if f.is_finite() {
        if lambda.iter().any(|x| f.is_zero(x)) {
            return Err(bad("oscillator parameters must be nonzero"));
        }
        notes.push("order-free instantiation".into());
        return Ok(());
    }
    // over ℚ or ℚ(√d): λ must be rational with 0 < λ₁ ≤ … ≤ λₙ
    let rational: Vec<&num_rational::BigRational> = lambda
        .iter()
        .map(|x| match x {
            FieldElem::Rational(r) => Some(r),
            FieldElem::Quadratic(ab) => match (&ab.0, &ab.1) {
                (FieldElem::Rational(a), FieldElem::Rational(b))
                    if num_traits::Zero::is_zero(b) =>
                {
                    Some(a)
                }
                _ => None,
            },
            FieldElem::Residue(_) => None,
        })
        .collect::<Option<_>>()
        .ok_or_else(|| bad("oscillator parameters must be rational"))?;
    let positive = rational.iter().all(|r| num_traits::Signed::is_positive(*r));
    let sorted = rational.windows(2).all(|w| w[0] <= w[1]);
    if !positive || !sorted {
        return Err(bad("oscillator needs 0 < λ₁ ≤ … ≤ λₙ"));
    }
    Ok(())
}

/// Oscillator algebra with `e₋₁∘e₋₁ = μ e₀` (μ = 0 gives the Lie algebra).
pub fn oscillator(
    f: &FieldSpec,
    lambda: &[FieldElem],
    mu: &FieldElem,
) -> (PoissonAlgebra, Vec<String>) {
    let n = lambda.len();
    let dim = 2 * n + 2;
    let (em1, e0) = (0, 1);
    let e = |i: usize| 2 * i;
    let eh = |i: usize| 2 * i + 1;
    let mut br = Vec::new();
    for (i, l) in (1..=n).zip(lambda) {
        br.push((em1, e(i), eh(i), l.clone()));
        br.push((em1, eh(i), e(i), f.neg(l)));
        br.push((e(i), eh(i), e0, f.one()));
    }
    let dot = vec![(em1, em1, e0, mu.clone())];
    let mut labels = vec!["e_-1".to_string(), "e_0".into()];
    for i in 1..=n {
        labels.push(format!("e_{i}"));
        labels.push(format!("ê_{i}"));
    }
    (
        PoissonAlgebra::new(f, dim, dot, br).expect("indices in range"),
        labels,
    )
}

/// `P0(n)` and `P1.1(n)` … `P1.5(n)`.
pub fn filiform(f: &FieldSpec, name: &str, n: usize) -> PoissonAlgebra {
    let top = if name == "P0" { n } else { n - 1 };
    let mut dot = Vec::new();
    for i in 1..=n {
        for j in i..=n {
            if i + j >= 2 && i + j <= top {
                dot.push((i - 1, j - 1, i + j - 1, f.one()));
            }
        }
    }
    let mut br = Vec::new();
    match name {
        "P1.2" => br.push((0, n - 1, n - 1, f.one())),
        "P1.3" => br.push((0, n - 1, n - 2, f.one())),
        "P1.4" => dot.push((n - 1, n - 1, n - 2, f.one())),
        "P1.5" => {
            dot.push((n - 1, n - 1, n - 2, f.one()));
            br.push((0, n - 1, n - 2, f.one()));
        }
        _ => {}
    }
    PoissonAlgebra::new(f, n, dot, br).expect("indices in range")
}

/// Model filiform `Lⁿ` with `x₀x₀ = l₁x_{n-1}`, `x₀x₁ = l₂x_{n-1}`, `x₁x₁ = l₃x_{n-1}`.
pub fn model_filiform(f: &FieldSpec, n: usize, ls: &[FieldElem; 3]) -> PoissonAlgebra {
    let br = (1..=n - 2).map(|i| (0, i, i + 1, f.one())).collect();
    let dot = vec![
        (0, 0, n - 1, ls[0].clone()),
        (0, 1, n - 1, ls[1].clone()),
        (1, 1, n - 1, ls[2].clone()),
    ];
    PoissonAlgebra::new(f, n, dot, br).expect("indices in range")
}

/// `L₁(γ)`: `[e₁,e₂] = e₂`, `[e₁,e₃] = γe₂ − e₃`, `[e₂,e₃] = e₁`.
pub fn l1(f: &FieldSpec, gamma: &FieldElem) -> PoissonAlgebra {
    PoissonAlgebra::new(f, 3, Vec::new(), l1_bracket(f, gamma)).expect("indices in range")
}

fn l1_bracket(f: &FieldSpec, gamma: &FieldElem) -> Vec<Entry> {
    vec![
        (0, 1, 1, f.one()),
        (0, 2, 1, gamma.clone()),
        (0, 2, 2, f.from_i64(-1)),
        (1, 2, 0, f.one()),
    ]
}

/// `p₄(γ) ⊕ F^{n−4}`: `L₁(γ)` bracket with `e₁e₁ = e₂e₃ = e₄`, `e₃e₃ = γe₄`.
pub fn p_n(f: &FieldSpec, n: usize, gamma: &FieldElem) -> PoissonAlgebra {
    let dot = vec![
        (0, 0, 3, f.one()),
        (1, 2, 3, f.one()),
        (2, 2, 3, gamma.clone()),
    ];
    PoissonAlgebra::new(f, n, dot, l1_bracket(f, gamma)).expect("indices in range")
}

/// `q₃(λ) ⊕ F^k` on the basis `h, x, y, a₁, …, a_k`.
pub fn q3(f: &FieldSpec, lam: &[[FieldElem; 2]; 2], k: usize) -> PoissonAlgebra {
    let (h, x, y) = (0, 1, 2);
    let br = vec![
        (h, x, x, lam[0][0].clone()),
        (h, x, y, lam[0][1].clone()),
        (h, y, x, lam[1][0].clone()),
        (h, y, y, lam[1][1].clone()),
        (x, y, h, f.one()),
    ];
    PoissonAlgebra::new(f, 3 + k, Vec::new(), br).expect("indices in range")
}

/// `q₄(λ, μ)` on the basis `h, a, x, y`.
pub fn q4(f: &FieldSpec, lam: &[[FieldElem; 2]; 2], mu: &[[FieldElem; 2]; 2]) -> PoissonAlgebra {
    let (h, a, x, y) = (0, 1, 2, 3);
    let br = vec![
        (h, x, x, lam[0][0].clone()),
        (h, x, y, lam[0][1].clone()),
        (h, y, x, lam[1][0].clone()),
        (h, y, y, lam[1][1].clone()),
        (a, x, x, mu[0][0].clone()),
        (a, x, y, mu[0][1].clone()),
        (a, y, x, mu[1][0].clone()),
        (a, y, y, mu[1][1].clone()),
        (x, y, h, f.one()),
    ];
    PoissonAlgebra::new(f, 4, Vec::new(), br).expect("indices in range")
}

pub fn heisenberg(f: &FieldSpec) -> PoissonAlgebra {
    PoissonAlgebra::new(f, 3, Vec::new(), vec![(0, 1, 2, f.one())]).expect("indices in range")
}

pub fn sl2(f: &FieldSpec) -> PoissonAlgebra {
    let br = vec![
        (0, 1, 1, f.from_i64(2)),
        (0, 2, 2, f.from_i64(-2)),
        (1, 2, 0, f.one()),
    ];
    PoissonAlgebra::new(f, 3, Vec::new(), br).expect("indices in range")
}

/// For trace-zero `λ` with `det λ ≠ 0` and a root of `t² + det λ` in the
/// field, a basis change `T` (new basis in the columns) with
/// `q₃(λ).transport(T) = L₁(γ)`, together with `γ`.
///
/// When `det λ = 0` the algebra is solvable and never isomorphic to `L₁(γ)`,
/// so `None` is returned as in the irreducible case.
pub fn q3_normalize(
    lam: &[[FieldElem; 2]; 2],
    f: &FieldSpec,
) -> Result<Option<(Matrix, FieldElem)>, CatalogError> {
    if !f.is_zero(&f.add(&lam[0][0], &lam[1][1])) {
        return Err(CatalogError::NotLie);
    }
    let det = f.sub(
        &f.mul(&lam[0][0], &lam[1][1]),
        &f.mul(&lam[0][1], &lam[1][0]),
    );
    if f.is_zero(&det) {
        return Ok(None);
    }
    let Some(r) = f.sqrt(&f.neg(&det)) else {
        return Ok(None);
    };
    // ad_h on span(x, y) in (x, y) coordinates is λᵀ
    let adh = Matrix::from_rows(
        f,
        2,
        vec![
            vec![lam[0][0].clone(), lam[1][0].clone()],
            vec![lam[0][1].clone(), lam[1][1].clone()],
        ],
    )
    .expect("2×2");
    let shifted = adh.add(&Matrix::identity(f, 2).scale(&f.neg(&r)));
    let eig = kernel(&shifted);
    let v2: Vec<FieldElem> = eig.basis().row(0).to_vec();
    // a second vector completing v2 to a basis of span(x, y)
    let v3: Vec<FieldElem> = if f.is_zero(&v2[1]) {
        vec![f.zero(), f.one()]
    } else {
        vec![f.one(), f.zero()]
    };
    let rinv = f.inv(&r).expect("r ≠ 0");
    // [E₁, v3] = r⁻¹ ad_h v3 = a v2 − v3
    let img = adh
        .mul_vec(&v3)
        .iter()
        .map(|c| f.mul(c, &rinv))
        .collect::<Vec<_>>();
    let pivot = if f.is_zero(&v2[0]) { 1 } else { 0 };
    // img + v3 = a v2
    let a = f
        .div(&f.add(&img[pivot], &v3[pivot]), &v2[pivot])
        .expect("pivot ≠ 0");
    // [v2, v3] = κ h with κ = det(v2, v3)
    let kappa = f.sub(&f.mul(&v2[0], &v3[1]), &f.mul(&v2[1], &v3[0]));
    let s = f.inv(&f.mul(&kappa, &r)).expect("κ r ≠ 0");
    let gamma = f.mul(&s, &a);
    let cols = [
        vec![rinv.clone(), f.zero(), f.zero()],
        vec![f.zero(), v2[0].clone(), v2[1].clone()],
        vec![f.zero(), f.mul(&s, &v3[0]), f.mul(&s, &v3[1])],
    ];
    let t = Matrix::from_rows(f, 3, cols.to_vec())
        .expect("3×3")
        .transpose();
    Ok(Some((t, gamma)))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn params(kv: &[(&str, &str)]) -> Params {
        kv.iter()
            .map(|(k, v)| (k.to_string(), v.to_string()))
            .collect()
    }

    fn m2(f: &FieldSpec, a: [[i64; 2]; 2]) -> [[FieldElem; 2]; 2] {
        a.map(|r| r.map(|x| f.from_i64(x)))
    }

    #[test]
    fn build_examples() {
        let f5 = FieldSpec::Prime(5);
        let p = catalog_build("P3.18", &Params::new(), &f5).unwrap();
        assert_eq!(p.algebra.dim(), 3);
        assert_eq!(p.algebra.dot_entries().len(), 3);
        assert_eq!(p.algebra.bracket_entries(), vec![(1, 2, 1, f5.one())]);

        let q = FieldSpec::Rationals;
        let o = catalog_build("osc_poisson", &params(&[("lambda", "1"), ("mu", "2")]), &q).unwrap();
        assert_eq!(o.algebra.dim(), 4);
        assert_eq!(o.algebra.dot_entries(), vec![(0, 0, 1, q.from_i64(2))]);
        assert_eq!(o.labels, vec!["e_-1", "e_0", "e_1", "ê_1"]);

        let f7 = FieldSpec::Prime(7);
        let q3 = catalog_build("q3", &params(&[("lambda", "0,1;3,0")]), &f7).unwrap();
        assert!(q3.algebra.is_validated() && q3.algebra.dot_is_zero());
    }

    #[test]
    fn bad_params() {
        let q = FieldSpec::Rationals;
        let f5 = FieldSpec::Prime(5);
        assert!(matches!(
            catalog_build("osc", &params(&[("lambda", "2,1")]), &q),
            Err(CatalogError::BadParams(_))
        ));
        assert!(matches!(
            catalog_build("osc", &params(&[("lambda", "-1")]), &q),
            Err(CatalogError::BadParams(_))
        ));
        assert!(matches!(
            catalog_build("P3.16", &params(&[("t", "5")]), &f5),
            Err(CatalogError::BadParams(_))
        ));
        assert!(matches!(
            catalog_build(
                "q4",
                &params(&[("lambda", "1,0;0,1"), ("mu", "0,1;1,0")]),
                &f5
            ),
            Err(CatalogError::BadParams(_))
        ));
        assert_eq!(
            catalog_build("q3", &params(&[("lambda", "1,0;0,1")]), &f5),
            Err(CatalogError::NotLie)
        );
        assert!(matches!(
            catalog_build("P9.9", &Params::new(), &f5),
            Err(CatalogError::UnknownName(_))
        ));
        let ok = catalog_build("osc", &params(&[("lambda", "3,1")]), &f5).unwrap();
        assert_eq!(ok.notes, vec!["order-free instantiation"]);
    }

    #[test]
    fn every_entry_builds() {
        let fields = [
            FieldSpec::Prime(2),
            FieldSpec::Prime(3),
            FieldSpec::Prime(5),
            FieldSpec::Rationals,
        ];
        for f in &fields {
            for e in catalog_entries() {
                let p = match e.name {
                    "osc" | "osc_poisson" if f.characteristic() == 2 => {
                        params(&[("lambda", "1,1")])
                    }
                    "osc" | "osc_poisson" => params(&[("lambda", "1,2")]),
                    "q3" => params(&[("lambda", "0,1;1,0"), ("k", "1")]),
                    "q4" => continue,
                    "P0" | "P1.1" | "P1.2" | "P1.3" | "P1.4" | "P1.5" | "Lmodel" | "zero" => {
                        params(&[("n", "5")])
                    }
                    "Lmodel_poisson" => {
                        params(&[("n", "5"), ("l1", "1"), ("l2", "1"), ("l3", "1")])
                    }
                    _ => Params::new(),
                };
                let built = catalog_build(e.name, &p, f)
                    .unwrap_or_else(|err| panic!("{} over {f}: {err}", e.name));
                assert!(built.algebra.validate().ok());
            }
        }
        // Jacobi on (a, x, y) forces trace μ = 0
        let f2 = FieldSpec::Prime(2);
        let q4 = catalog_build(
            "q4",
            &params(&[("lambda", "1,0;0,1"), ("mu", "0,1;1,0")]),
            &f2,
        )
        .unwrap();
        assert_eq!(q4.algebra.dim(), 4);
        assert!(catalog_build(
            "q4",
            &params(&[("lambda", "1,0;0,1"), ("mu", "0,1;1,1")]),
            &f2
        )
        .is_err());
    }

    #[test]
    fn q3_normalize_examples() {
        let q = FieldSpec::Rationals;
        let (t, g) = q3_normalize(&m2(&q, [[1, 0], [0, -1]]), &q)
            .unwrap()
            .unwrap();
        assert_eq!(t, Matrix::identity(&q, 3));
        assert!(q.is_zero(&g));
        assert_eq!(q3_normalize(&m2(&q, [[0, 1], [-1, 0]]), &q).unwrap(), None);

        let f5 = FieldSpec::Prime(5);
        let lam = m2(&f5, [[0, 1], [-1, 0]]);
        let (t, g) = q3_normalize(&lam, &f5).unwrap().unwrap();
        assert_eq!(q3(&f5, &lam, 0).transport(&t).unwrap(), l1(&f5, &g));
        assert_eq!(
            q3_normalize(&m2(&f5, [[1, 0], [0, 1]]), &f5),
            Err(CatalogError::NotLie)
        );
    }

    #[test]
    fn q3_normalize_is_exact_everywhere_it_applies() {
        for p in [2u64, 3, 5, 7] {
            let f = FieldSpec::Prime(p);
            for a in 0..p as i64 {
                for b in 0..p as i64 {
                    for c in 0..p as i64 {
                        let lam = m2(&f, [[a, b], [c, -a]]);
                        if let Some((t, g)) = q3_normalize(&lam, &f).unwrap() {
                            assert_eq!(
                                q3(&f, &lam, 0).transport(&t).unwrap(),
                                l1(&f, &g),
                                "p={p} λ={lam:?}"
                            );
                        }
                    }
                }
            }
        }
    }

    #[test]
    fn p4_gamma_is_p4_zero_off_characteristic_two() {
        for p in [3u64, 5, 7] {
            let f = FieldSpec::Prime(p);
            for g in 0..p as i64 {
                let gamma = f.from_i64(g);
                let half_g = f.div(&gamma, &f.from_i64(2)).unwrap();
                // E₁ = e₁, E₂ = e₂, E₃ = −(γ/2)e₂ + e₃, E₄ = e₄
                let mut t = Matrix::identity(&f, 4);
                t.set(1, 2, f.neg(&half_g));
                let moved = p_n(&f, 4, &gamma).transport(&t).unwrap();
                assert_eq!(moved, p_n(&f, 4, &f.zero()), "p={p} γ={g}");
            }
        }
    }
}
