//! JSON documents for algebras, and report serialization.
//!
//! A document lists structure constants with 1-based indices:
//!
//! ```json
//! {
//!   "format_version": 1,
//!   "field": "fp:5",
//!   "dim": 3,
//!   "dot": [[1, 1, 2, 1]],
//!   "bracket": [[1, 3, 3, 1]]
//! }
//! ```
//!
//! Coefficients are integers over prime fields, `"a/b"` strings over ℚ and
//! `"a+b*s"` strings over quadratic extensions.

use std::collections::{BTreeMap, BTreeSet};
use std::fmt::Write as _;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::catalog::CatalogAlgebra;
use crate::field::{FieldElem, FieldSpec};
use crate::invariants::{Invariant, InvariantProfile, Method};
use crate::linalg::Subspace;
use crate::poisson::{Axiom, AxiomReport, Entry, PoissonAlgebra, SeriesResult};

pub const FORMAT_VERSION: u32 = 1;
pub const SCHEMA_VERSION: u32 = 1;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum IoError {
    #[error("malformed document: {0}")]
    Malformed(String),
    #[error("index {index} out of range 1..={dim} in {table} entry {entry}")]
    IndexOutOfRange {
        table: &'static str,
        entry: usize,
        index: usize,
        dim: usize,
    },
    #[error("axioms fail: {0}")]
    AxiomFailure(Box<AxiomReport>),
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum Coeff {
    Int(i64),
    Text(String),
}

pub type DocEntry = (usize, usize, usize, Coeff);

#[derive(Debug, Clone, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Metadata {
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub name: Option<String>,
    #[serde(default, skip_serializing_if = "BTreeMap::is_empty")]
    pub params: BTreeMap<String, String>,
    /// Basis labels in document order, e.g. `e_-1, e_0, …` for oscillators.
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub labels: Vec<String>,
}

impl From<&CatalogAlgebra> for Metadata {
    fn from(c: &CatalogAlgebra) -> Self {
        Metadata {
            name: Some(c.name.clone()),
            params: c.params.clone(),
            labels: c.labels.clone(),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct AlgebraDocument {
    pub format_version: u32,
    pub field: String,
    pub dim: usize,
    pub dot: Vec<DocEntry>,
    pub bracket: Vec<DocEntry>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub metadata: Option<Metadata>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum EmitFormat {
    /// A bare algebra document.
    Document,
    /// The document wrapped in a versioned report envelope.
    Embedded,
}

fn coeff(f: &FieldSpec, c: &FieldElem) -> Coeff {
    match (c, f.quadratic_parts()) {
        (FieldElem::Residue(r), _) => Coeff::Int(*r as i64),
        // always the full `a+b*s` form, even when b = 0
        (FieldElem::Quadratic(x), Some((base, _))) => {
            let b = base.format_elem(&x.1);
            let b = if b.starts_with('-') {
                b
            } else {
                format!("+{b}")
            };
            Coeff::Text(format!("{}{b}*s", base.format_elem(&x.0)))
        }
        _ => Coeff::Text(f.format_elem(c)),
    }
}

pub fn to_document(alg: &PoissonAlgebra, metadata: Option<Metadata>) -> AlgebraDocument {
    let f = alg.field();
    let conv = |es: Vec<Entry>| -> Vec<DocEntry> {
        es.into_iter()
            .map(|(i, j, k, c)| (i + 1, j + 1, k + 1, coeff(f, &c)))
            .collect()
    };
    AlgebraDocument {
        format_version: FORMAT_VERSION,
        field: f.descriptor(),
        dim: alg.dim(),
        dot: conv(alg.dot_entries()),
        bracket: conv(alg.bracket_entries()),
        metadata,
    }
}

fn entry_line(e: &DocEntry) -> String {
    serde_json::to_string(e)
        .expect("entries serialize")
        .replace(',', ", ")
}

fn entries_json(out: &mut String, key: &str, es: &[DocEntry], last: bool) {
    let sep = if last { "" } else { "," };
    if es.is_empty() {
        let _ = writeln!(out, "  \"{key}\": []{sep}");
        return;
    }
    let _ = writeln!(out, "  \"{key}\": [");
    for (n, e) in es.iter().enumerate() {
        let comma = if n + 1 < es.len() { "," } else { "" };
        let _ = writeln!(out, "    {}{comma}", entry_line(e));
    }
    let _ = writeln!(out, "  ]{sep}");
}

/// Canonical text of a document: one entry per line, entries sorted,
/// newline-terminated.
pub fn document_text(doc: &AlgebraDocument) -> String {
    let mut out = String::from("{\n");
    let _ = writeln!(out, "  \"format_version\": {},", doc.format_version);
    let _ = writeln!(
        out,
        "  \"field\": {},",
        serde_json::to_string(&doc.field).expect("string")
    );
    let _ = writeln!(out, "  \"dim\": {},", doc.dim);
    entries_json(&mut out, "dot", &doc.dot, false);
    let has_meta = doc.metadata.is_some();
    entries_json(&mut out, "bracket", &doc.bracket, !has_meta);
    if let Some(m) = &doc.metadata {
        let _ = writeln!(
            out,
            "  \"metadata\": {}",
            serde_json::to_string(m).expect("metadata serializes")
        );
    }
    out.push_str("}\n");
    out
}

pub fn emit_algebra(
    alg: &PoissonAlgebra,
    metadata: Option<Metadata>,
    format: EmitFormat,
) -> String {
    let doc = to_document(alg, metadata);
    match format {
        EmitFormat::Document => document_text(&doc),
        EmitFormat::Embedded => report_json("algebra", &doc),
    }
}

pub fn parse_document(text: &str) -> Result<AlgebraDocument, IoError> {
    let doc: AlgebraDocument =
        serde_json::from_str(text).map_err(|e| IoError::Malformed(e.to_string()))?;
    if doc.format_version != FORMAT_VERSION {
        return Err(IoError::Malformed(format!(
            "unsupported format_version {}",
            doc.format_version
        )));
    }
    Ok(doc)
}

fn parse_coeff(f: &FieldSpec, c: &Coeff) -> Result<FieldElem, IoError> {
    match c {
        Coeff::Int(n) => Ok(f.from_i64(*n)),
        Coeff::Text(s) => f
            .parse_elem(s)
            .map_err(|e| IoError::Malformed(e.to_string())),
    }
}

fn convert(
    f: &FieldSpec,
    dim: usize,
    table: &'static str,
    es: &[DocEntry],
    strict: bool,
) -> Result<Vec<Entry>, IoError> {
    let mut seen = BTreeSet::new();
    let mut out = Vec::with_capacity(es.len());
    for (n, (i, j, k, c)) in es.iter().enumerate() {
        for &index in [i, j, k] {
            if index == 0 || index > dim {
                return Err(IoError::IndexOutOfRange {
                    table,
                    entry: n + 1,
                    index,
                    dim,
                });
            }
        }
        if i > j || (strict && i == j) {
            let rel = if strict { "<" } else { "≤" };
            return Err(IoError::Malformed(format!(
                "{table} entry {}: need i {rel} j, got [{i}, {j}, {k}]",
                n + 1
            )));
        }
        if !seen.insert((i, j, k)) {
            return Err(IoError::Malformed(format!(
                "{table} entry {}: duplicate [{i}, {j}, {k}]",
                n + 1
            )));
        }
        out.push((i - 1, j - 1, k - 1, parse_coeff(f, c)?));
    }
    Ok(out)
}

/// Builds the algebra a document describes; `validate = false` skips the
/// axiom check.
pub fn document_to_algebra(
    doc: &AlgebraDocument,
    validate: bool,
) -> Result<PoissonAlgebra, IoError> {
    let f = FieldSpec::parse(&doc.field).map_err(|e| IoError::Malformed(e.to_string()))?;
    let dot = convert(&f, doc.dim, "dot", &doc.dot, false)?;
    let bracket = convert(&f, doc.dim, "bracket", &doc.bracket, true)?;
    let alg = PoissonAlgebra::new(&f, doc.dim, dot, bracket)
        .map_err(|e| IoError::Malformed(e.to_string()))?;
    if validate {
        alg.into_validated().map_err(IoError::AxiomFailure)
    } else {
        Ok(alg)
    }
}

pub fn parse_algebra(text: &str, validate: bool) -> Result<PoissonAlgebra, IoError> {
    document_to_algebra(&parse_document(text)?, validate)
}

/// Parses `"1,0,0;0,1,0"` as the span of the given rows.
pub fn parse_subspace(text: &str, f: &FieldSpec, dim: usize) -> Result<Subspace, IoError> {
    let mut rows = Vec::new();
    for row in text.split(';').map(str::trim).filter(|r| !r.is_empty()) {
        let v: Vec<FieldElem> = row
            .split(',')
            .map(|x| {
                f.parse_elem(x)
                    .map_err(|e| IoError::Malformed(e.to_string()))
            })
            .collect::<Result<_, _>>()?;
        if v.len() != dim {
            return Err(IoError::Malformed(format!(
                "vector `{row}` has {} coordinates, expected {dim}",
                v.len()
            )));
        }
        rows.push(v);
    }
    Ok(Subspace::span(f, dim, rows))
}

// ---- reports ----

#[derive(Debug, Serialize)]
struct Envelope<'a, T: Serialize> {
    schema_version: u32,
    kind: &'a str,
    data: &'a T,
}

/// Pretty JSON `{schema_version, kind, data}`, newline-terminated.
pub fn report_json<T: Serialize>(kind: &str, data: &T) -> String {
    let env = Envelope {
        schema_version: SCHEMA_VERSION,
        kind,
        data,
    };
    let mut s = serde_json::to_string_pretty(&env).expect("reports serialize");
    s.push('\n');
    s
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct SubspaceReport {
    pub dim: usize,
    pub ambient_dim: usize,
    pub basis: Vec<Vec<String>>,
}

impl From<&Subspace> for SubspaceReport {
    fn from(s: &Subspace) -> Self {
        let f = s.field();
        SubspaceReport {
            dim: s.dim(),
            ambient_dim: s.ambient_dim(),
            basis: s
                .basis_vectors()
                .map(|v| v.iter().map(|x| f.format_elem(x)).collect())
                .collect(),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct FailureReport {
    pub axiom: Axiom,
    pub triple: [usize; 3],
    pub left: Vec<String>,
    pub right: Vec<String>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct AxiomReportJson {
    pub ok: bool,
    pub commutative: bool,
    pub associative: bool,
    pub antisymmetric: bool,
    pub jacobi: bool,
    pub leibniz: bool,
    pub first_failure: Option<FailureReport>,
}

impl AxiomReportJson {
    pub fn new(r: &AxiomReport, f: &FieldSpec) -> Self {
        let fmt = |v: &[FieldElem]| v.iter().map(|x| f.format_elem(x)).collect();
        AxiomReportJson {
            ok: r.ok(),
            commutative: r.commutative_ok,
            associative: r.associative_ok,
            antisymmetric: r.antisymmetric_ok,
            jacobi: r.jacobi_ok,
            leibniz: r.leibniz_ok,
            first_failure: r.first_failure.as_ref().map(|x| FailureReport {
                axiom: x.axiom,
                triple: x.triple,
                left: fmt(&x.left),
                right: fmt(&x.right),
            }),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct ProfileReport {
    pub field: String,
    pub dim: usize,
    pub values: BTreeMap<&'static str, usize>,
    pub witnesses: BTreeMap<&'static str, SubspaceReport>,
    pub method: Method,
    pub codim1_check: Option<bool>,
    pub nilpotent_codim2_check: Option<bool>,
    pub ordering_checks: BTreeMap<&'static str, bool>,
}

impl From<&InvariantProfile> for ProfileReport {
    fn from(p: &InvariantProfile) -> Self {
        ProfileReport {
            field: p.field.descriptor(),
            dim: p.dim,
            values: Invariant::ALL
                .iter()
                .map(|&i| (i.name(), p.get(i)))
                .collect(),
            witnesses: Invariant::ALL
                .iter()
                .map(|&i| (i.name(), p.witness(i).into()))
                .collect(),
            method: p.method,
            codim1_check: p.codim1_check,
            nilpotent_codim2_check: p.nilpotent_codim2_check,
            ordering_checks: p.ordering_checks().into_iter().collect(),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct SeriesReport {
    pub dims: Vec<usize>,
    pub stabilized: bool,
    pub steps: usize,
    pub reaches_zero: bool,
    pub terms: Vec<SubspaceReport>,
}

impl From<&SeriesResult> for SeriesReport {
    fn from(s: &SeriesResult) -> Self {
        SeriesReport {
            dims: s.dims(),
            stabilized: s.stabilized,
            steps: s.steps,
            reaches_zero: s.reaches_zero(),
            terms: s.terms.iter().map(SubspaceReport::from).collect(),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::catalog::{catalog_build, Params};

    const P3_14: &str = r#"{"format_version": 1, "field": "fp:5", "dim": 3,
        "dot": [[1, 1, 2, 1]], "bracket": [[1, 3, 3, 1]]}"#;

    #[test]
    fn parses_p3_14() {
        let a = parse_algebra(P3_14, true).unwrap();
        assert!(a.is_validated());
        let b = catalog_build("P3.14", &Params::new(), &FieldSpec::Prime(5))
            .unwrap()
            .algebra;
        assert_eq!(a, b);
    }

    #[test]
    fn rejects_bad_documents() {
        let bad_index = P3_14.replace("[[1, 1, 2, 1]]", "[[1, 5, 2, 1]]");
        assert!(matches!(
            parse_algebra(&bad_index, true),
            Err(IoError::IndexOutOfRange { index: 5, .. })
        ));
        let unordered = P3_14.replace("[[1, 3, 3, 1]]", "[[3, 1, 3, 1]]");
        assert!(matches!(
            parse_algebra(&unordered, true),
            Err(IoError::Malformed(_))
        ));
        let diagonal = P3_14.replace("[[1, 3, 3, 1]]", "[[2, 2, 3, 1]]");
        assert!(matches!(
            parse_algebra(&diagonal, true),
            Err(IoError::Malformed(_))
        ));
        assert!(matches!(
            parse_algebra("{", true),
            Err(IoError::Malformed(_))
        ));
        assert!(matches!(
            parse_algebra(&P3_14.replace("\"fp:5\"", "\"fp:6\""), true),
            Err(IoError::Malformed(_))
        ));
        // e1·e1 = e1 with [e1, e2] = e2 breaks Leibniz
        let broken = P3_14
            .replace("[[1, 1, 2, 1]]", "[[1, 1, 1, 1]]")
            .replace("[[1, 3, 3, 1]]", "[[1, 2, 2, 1]]");
        match parse_algebra(&broken, true) {
            Err(IoError::AxiomFailure(r)) => assert!(!r.leibniz_ok),
            other => panic!("{other:?}"),
        }
        assert!(parse_algebra(&broken, false).is_ok());
    }

    #[test]
    fn emission_shapes() {
        let f = FieldSpec::Prime(5);
        let c = catalog_build("P4.7", &Params::new(), &f).unwrap();
        let doc = to_document(&c.algebra, None);
        assert_eq!(doc.dot.len() + doc.bracket.len(), 2);
        let z = to_document(&PoissonAlgebra::zero(&f, 3), None);
        assert!(z.dot.is_empty() && z.bracket.is_empty());
        let text = emit_algebra(&c.algebra, Some((&c).into()), EmitFormat::Document);
        assert!(text.ends_with("}\n"));
        assert_eq!(document_text(&parse_document(&text).unwrap()), text);
        let env: serde_json::Value =
            serde_json::from_str(&emit_algebra(&c.algebra, None, EmitFormat::Embedded)).unwrap();
        assert_eq!(env["schema_version"], 1);
        assert_eq!(env["data"]["dim"], 4);
    }

    #[test]
    fn coefficient_styles() {
        let q = FieldSpec::Rationals;
        let a = PoissonAlgebra::new(
            &q,
            2,
            vec![(0, 0, 1, q.parse_elem("-3/2").unwrap())],
            vec![],
        )
        .unwrap();
        let text = emit_algebra(&a, None, EmitFormat::Document);
        assert!(text.contains("\"-3/2\""), "{text}");
        assert_eq!(parse_algebra(&text, true).unwrap(), a);
        let qi = FieldSpec::parse("qext:q:-1").unwrap();
        let a = PoissonAlgebra::new(
            &qi,
            2,
            vec![(0, 0, 1, qi.parse_elem("1/2-3*s").unwrap())],
            vec![],
        )
        .unwrap();
        let text = emit_algebra(&a, None, EmitFormat::Document);
        assert!(text.contains("\"1/2-3*s\""), "{text}");
        assert_eq!(parse_algebra(&text, true).unwrap(), a);
        let a = PoissonAlgebra::new(&qi, 2, vec![(0, 0, 1, qi.from_i64(2))], vec![]).unwrap();
        assert!(emit_algebra(&a, None, EmitFormat::Document).contains("\"2+0*s\""));
    }

    #[test]
    fn subspace_literals() {
        let f = FieldSpec::Prime(3);
        let s = parse_subspace("1,0,0; 0,1,2", &f, 3).unwrap();
        assert_eq!(s.dim(), 2);
        assert!(parse_subspace("1,0", &f, 3).is_err());
    }
}
