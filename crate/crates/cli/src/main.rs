//! `poisson-lab`: validate algebras, compute invariants, run the theorem
//! checks and reproduce the invariant tables.
//!
//! Exit codes: 0 on success, 1 when an axiom or check fails, 2 on bad input.

use std::fs;
use std::io::Read;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};
use serde_json::json;

use poisson_lab::catalog::{catalog_build, catalog_entries, Params};
use poisson_lab::compat::{leibniz_space, poisson_structures_on, DEFAULT_BUDGET};
use poisson_lab::invariants::{
    invariant_profile, random_basis_change, Invariant, InvariantProfile,
};
use poisson_lab::io::{
    emit_algebra, parse_algebra, parse_subspace, report_json, to_document, AxiomReportJson,
    EmitFormat, Metadata, ProfileReport, SeriesReport, SubspaceReport,
};
use poisson_lab::theorems::{
    reproduce_table, run_all, run_check, CheckReport, RunOptions, Verdict, CHECK_IDS,
};
use poisson_lab::{FieldSpec, PoissonAlgebra};

#[derive(Parser)]
#[command(
    name = "poisson-lab",
    version,
    about = "Exact computations with finite-dimensional Poisson algebras"
)]
struct Cli {
    /// Field descriptor: `q`, `fp:P`, `qext:q:D`, `qext:fp:P:D`.
    #[arg(long, global = true)]
    field: Option<String>,
    /// Worker threads (0 = all cores).
    #[arg(long, global = true, env = "POISSON_LAB_THREADS")]
    threads: Option<usize>,
    /// Seed for randomized steps.
    #[arg(long, global = true, default_value_t = 0)]
    seed: u64,
    /// Emit machine-readable JSON.
    #[arg(long, global = true)]
    json: bool,
    #[command(subcommand)]
    command: Command,
}

#[derive(Args)]
struct Input {
    /// Algebra document, or `-` for stdin.
    file: String,
    /// Skip the axiom check when loading.
    #[arg(long)]
    no_validate: bool,
}

#[derive(Subcommand)]
enum Command {
    /// Check the Poisson axioms.
    Validate {
        /// Algebra document, or `-` for stdin.
        file: String,
    },
    /// Compute α, β, α_A, β_A, α_L, β_L with witnesses.
    Invariants {
        #[command(flatten)]
        input: Input,
        /// Also recompute after this many seeded random basis changes.
        #[arg(long, default_value_t = 0)]
        basis_changes: u32,
    },
    /// Derived series and lower central series.
    Series {
        #[command(flatten)]
        input: Input,
    },
    /// Normalizer of a subalgebra given as `;`-separated rows.
    Normalizer {
        #[command(flatten)]
        input: Input,
        #[arg(long)]
        subspace: String,
    },
    /// Named algebras and families.
    Catalog {
        #[command(subcommand)]
        action: CatalogAction,
    },
    /// All Poisson structures on a Lie algebra over a finite field.
    Compat {
        /// Document whose bracket is used; its product is ignored.
        #[arg(long)]
        lie: String,
        #[arg(long, default_value_t = DEFAULT_BUDGET)]
        budget: u64,
    },
    /// Structural checks.
    Theorems {
        #[command(subcommand)]
        action: TheoremAction,
    },
    /// Reproduce an invariant table.
    Tables {
        #[arg(long, value_parser = clap::value_parser!(u8).range(1..=2))]
        which: u8,
        /// Comma-separated field descriptors.
        #[arg(long, value_delimiter = ',', default_value = "fp:5")]
        fields: Vec<String>,
        /// Parameter values for parameterized rows.
        #[arg(long, value_delimiter = ',', allow_negative_numbers = true)]
        t: Option<Vec<i64>>,
    },
}

#[derive(Subcommand)]
enum CatalogAction {
    /// List entries and their parameters.
    List,
    /// Print an entry as a document.
    Emit {
        name: String,
        /// `key=value`, repeatable.
        #[arg(long = "param")]
        params: Vec<String>,
    },
}

#[derive(Args)]
struct SuiteArgs {
    /// Comma-separated field descriptors; each check has its own default.
    #[arg(long, value_delimiter = ',')]
    fields: Option<Vec<String>>,
    #[arg(long, default_value_t = poisson_lab::theorems::DEFAULT_BUDGET)]
    budget: u64,
}

#[derive(Subcommand)]
enum TheoremAction {
    /// Run one check.
    Run {
        check_id: String,
        #[command(flatten)]
        args: SuiteArgs,
    },
    /// Run every check.
    All {
        #[command(flatten)]
        args: SuiteArgs,
    },
    /// List check identifiers.
    List,
}

/// A reportable failure with its exit code.
struct Failure {
    code: u8,
    msg: String,
}

fn usage(msg: impl ToString) -> Failure {
    Failure {
        code: 2,
        msg: msg.to_string(),
    }
}

type Outcome = Result<bool, Failure>;

fn main() -> ExitCode {
    let cli = Cli::parse();
    if let Some(n) = cli.threads {
        if let Err(e) = rayon::ThreadPoolBuilder::new()
            .num_threads(n)
            .build_global()
        {
            eprintln!("error: {e}");
            return ExitCode::from(2);
        }
    }
    match run(&cli) {
        Ok(true) => ExitCode::SUCCESS,
        Ok(false) => ExitCode::from(1),
        Err(f) => {
            eprintln!("error: {}", f.msg);
            ExitCode::from(f.code)
        }
    }
}

fn read_input(path: &str) -> Result<String, Failure> {
    if path == "-" {
        let mut s = String::new();
        std::io::stdin().read_to_string(&mut s).map_err(usage)?;
        Ok(s)
    } else {
        fs::read_to_string(path).map_err(|e| usage(format!("{path}: {e}")))
    }
}

fn load(input: &Input) -> Result<PoissonAlgebra, Failure> {
    let text = read_input(&input.file)?;
    parse_algebra(&text, !input.no_validate).map_err(|e| match e {
        poisson_lab::io::IoError::AxiomFailure(_) => Failure {
            code: 1,
            msg: e.to_string(),
        },
        _ => usage(e),
    })
}

fn field_list(items: &[String]) -> Result<Vec<FieldSpec>, Failure> {
    items
        .iter()
        .map(|s| FieldSpec::parse(s.trim()).map_err(usage))
        .collect()
}

fn run(cli: &Cli) -> Outcome {
    match &cli.command {
        Command::Validate { file } => {
            let text = read_input(file)?;
            let alg = parse_algebra(&text, false).map_err(usage)?;
            let report = alg.validate();
            if cli.json {
                print!(
                    "{}",
                    report_json("axiom_report", &AxiomReportJson::new(&report, alg.field()))
                );
            } else {
                println!("{report}");
            }
            Ok(report.ok())
        }
        Command::Invariants {
            input,
            basis_changes,
        } => {
            let alg = load(input)?;
            let p = invariant_profile(&alg).map_err(usage)?;
            let mut stable = true;
            for i in 0..*basis_changes {
                let moved =
                    random_basis_change(&alg, cli.seed.wrapping_add(i as u64)).map_err(usage)?;
                stable &= invariant_profile(&moved).map_err(usage)?.values == p.values;
            }
            if cli.json {
                print!(
                    "{}",
                    report_json("invariant_profile", &ProfileReport::from(&p))
                );
            } else {
                print_profile(&p);
                if *basis_changes > 0 {
                    println!("unchanged under {basis_changes} random basis changes: {stable}");
                }
            }
            Ok(stable)
        }
        Command::Series { input } => {
            let alg = load(input)?;
            let derived = alg.derived_series();
            let lower = alg.lower_central_series().map_err(usage)?;
            if cli.json {
                let data = json!({
                    "derived": SeriesReport::from(&derived),
                    "lower_central": SeriesReport::from(&lower),
                    "solvable": derived.reaches_zero(),
                    "nilpotent": lower.reaches_zero(),
                });
                print!("{}", report_json("series", &data));
            } else {
                println!(
                    "derived series dims {:?}, solvable: {}",
                    derived.dims(),
                    derived.reaches_zero()
                );
                println!(
                    "lower central series dims {:?}, nilpotent: {}",
                    lower.dims(),
                    lower.reaches_zero()
                );
            }
            Ok(true)
        }
        Command::Normalizer { input, subspace } => {
            let alg = load(input)?;
            let u = parse_subspace(subspace, alg.field(), alg.dim()).map_err(usage)?;
            let n = alg.normalizer(&u).map_err(usage)?;
            let class = alg.classify_subspace(&n).map_err(usage)?;
            if cli.json {
                let data = json!({ "subspace": SubspaceReport::from(&u), "normalizer": SubspaceReport::from(&n), "class": class });
                print!("{}", report_json("normalizer", &data));
            } else {
                println!("N(A) has dimension {} (A has {})", n.dim(), u.dim());
                for row in SubspaceReport::from(&n).basis {
                    println!("  ({})", row.join(", "));
                }
            }
            Ok(true)
        }
        Command::Catalog {
            action: CatalogAction::List,
        } => {
            let entries = catalog_entries();
            if cli.json {
                print!("{}", report_json("catalog", &entries));
            } else {
                for e in entries {
                    let ps: Vec<&str> = e.params.iter().map(|p| p.name).collect();
                    println!(
                        "{:<16} dim {:<8} {:<24} {}",
                        e.name,
                        e.dim,
                        ps.join(","),
                        e.description
                    );
                }
            }
            Ok(true)
        }
        Command::Catalog {
            action: CatalogAction::Emit { name, params },
        } => {
            let f = FieldSpec::parse(cli.field.as_deref().unwrap_or("fp:5")).map_err(usage)?;
            let mut ps = Params::new();
            for kv in params {
                let (k, v) = kv
                    .split_once('=')
                    .ok_or_else(|| usage(format!("expected key=value, got `{kv}`")))?;
                ps.insert(k.trim().to_string(), v.trim().to_string());
            }
            let c = catalog_build(name, &ps, &f).map_err(usage)?;
            let format = if cli.json {
                EmitFormat::Embedded
            } else {
                EmitFormat::Document
            };
            print!(
                "{}",
                emit_algebra(&c.algebra, Some(Metadata::from(&c)), format)
            );
            for note in &c.notes {
                eprintln!("note: {note}");
            }
            Ok(true)
        }
        Command::Compat { lie, budget } => {
            let text = read_input(lie)?;
            let alg = parse_algebra(&text, false).map_err(usage)?.lie_part();
            let space = leibniz_space(&alg).map_err(usage)?;
            let sols = poisson_structures_on(&alg, *budget).map_err(usage)?;
            if cli.json {
                let docs: Vec<_> = sols.iter().map(|a| to_document(a, None)).collect();
                let data = json!({ "leibniz_dimension": space.dimension(), "count": sols.len(), "solutions": docs });
                print!("{}", report_json("compat", &data));
            } else {
                println!("Leibniz solution space: dimension {}", space.dimension());
                println!("{} compatible associative products", sols.len());
                for a in &sols {
                    let f = a.field();
                    let es: Vec<String> = a
                        .dot_entries()
                        .iter()
                        .map(|(i, j, k, c)| {
                            format!("e{}e{} = {}·e{}", i + 1, j + 1, f.format_elem(c), k + 1)
                        })
                        .collect();
                    println!(
                        "  {}",
                        if es.is_empty() {
                            "zero".to_string()
                        } else {
                            es.join(", ")
                        }
                    );
                }
            }
            Ok(true)
        }
        Command::Theorems { action } => run_theorems(cli, action),
        Command::Tables { which, fields, t } => {
            let fs = field_list(fields)?;
            let report = reproduce_table(*which, &fs, t.as_deref()).map_err(usage)?;
            if cli.json {
                print!("{}", report_json("table", &report));
            } else {
                for r in &report.rows {
                    let t = r.t.map_or("-".to_string(), |t| t.to_string());
                    let status = if r.diffs.is_empty() {
                        "ok".to_string()
                    } else {
                        let d: Vec<String> = r
                            .diffs
                            .iter()
                            .map(|d| format!("{} {}≠{}", d.column, d.computed, d.expected))
                            .collect();
                        format!("DIFF {}", d.join(", "))
                    };
                    println!(
                        "{:<14} {:<8} t={:<3} {:?}  {status}",
                        r.row, r.field, t, r.computed
                    );
                }
                println!(
                    "table {}: {}/{} cells match",
                    report.table, report.matching_cells, report.cells
                );
            }
            Ok(report.all_match())
        }
    }
}

fn print_profile(p: &InvariantProfile) {
    println!("field {}, dimension {}", p.field.descriptor(), p.dim);
    for inv in Invariant::ALL {
        let w = SubspaceReport::from(p.witness(inv));
        let rows: Vec<String> = w
            .basis
            .iter()
            .map(|r| format!("({})", r.join(",")))
            .collect();
        println!(
            "  {:<8} = {}  witness span[{}]",
            inv.name(),
            p.get(inv),
            rows.join(" ")
        );
    }
}

fn suite_options(cli: &Cli, args: &SuiteArgs) -> Result<RunOptions, Failure> {
    let fields = match (&args.fields, &cli.field) {
        (Some(fs), _) => Some(field_list(fs)?),
        (None, Some(f)) => Some(field_list(std::slice::from_ref(f))?),
        (None, None) => None,
    };
    Ok(RunOptions {
        fields,
        budget: args.budget,
    })
}

fn print_check(r: &CheckReport) {
    let skipped = r.instances.iter().filter(|i| i.skipped.is_some()).count();
    let verdict = match r.verdict {
        Verdict::Pass => "PASS",
        Verdict::Fail => "FAIL",
        Verdict::Skipped => "SKIPPED",
    };
    println!(
        "{:<28} {verdict:<7} {} instances, {} with hypothesis met, {skipped} skipped",
        r.check_id,
        r.instances.len(),
        r.hypotheses_met()
    );
    for i in r.instances.iter().filter(|i| i.failed()) {
        println!(
            "    failed: {} over {}: {}",
            i.algebra,
            i.field,
            i.evidence.join("; ")
        );
    }
    if let Some(c) = &r.coverage {
        println!("    coverage: {c}");
    }
}

fn run_theorems(cli: &Cli, action: &TheoremAction) -> Outcome {
    let reports = match action {
        TheoremAction::List => {
            for id in CHECK_IDS {
                println!("{id}");
            }
            return Ok(true);
        }
        TheoremAction::Run { check_id, args } => {
            vec![run_check(check_id, &suite_options(cli, args)?).map_err(usage)?]
        }
        TheoremAction::All { args } => run_all(&suite_options(cli, args)?).map_err(usage)?,
    };
    if cli.json {
        print!("{}", report_json("check_reports", &reports));
    } else {
        reports.iter().for_each(print_check);
    }
    Ok(reports.iter().all(|r| r.verdict != Verdict::Fail))
}
