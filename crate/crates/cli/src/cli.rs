//! Argument parsing and command dispatch.

use std::path::PathBuf;
use std::time::Instant;

use clap::{Parser, Subcommand, ValueEnum};
use serde_json::{json, Map, Value};
use trace_kit_core::fixpt::{
    self, lefschetz, reidemeister_trace, rt_augment, rt_project_pi0, FixptError, DEFAULT_BOUND,
};
use trace_kit_core::gpdrep::{rep_lefschetz, rep_total_trace, RepError};
use trace_kit_core::matbicat::{
    fam_fib_trace, fam_tot_trace, fingpd_conj_classes, fingpd_fib_trace, fingpd_fib_transfer, hattori_stallings,
    set_transfer, verify_fibtrace4, verify_totaltr,
};
use trace_kit_core::Exec;

use crate::doc::{InputDocument, InputError};
use crate::generate::{generate, Kind, Size};
use crate::output::{component_label, formal_sum, int, ints, reidemeister, word_label};
use crate::verify::{self, Settings, Suite};

pub const EXIT_OK: i32 = 0;
pub const EXIT_VERIFY: i32 = 1;
pub const EXIT_INPUT: i32 = 2;

#[derive(Debug, Parser)]
#[command(name = "trace-kit", version, about = "Fixed-point invariants and traces of free groupoid endomorphisms")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,

    /// Length bound for twisted-conjugacy witness searches.
    #[arg(long, global = true, env = "TRACE_KIT_BOUND", default_value_t = DEFAULT_BOUND)]
    pub bound: usize,

    #[arg(long, global = true, default_value_t = 0)]
    pub seed: u64,

    /// Instances per randomized suite.
    #[arg(long, global = true, default_value_t = 100)]
    pub instances: usize,

    #[arg(long, global = true, value_enum, default_value_t = Suite::All)]
    pub suite: Suite,

    #[arg(long, global = true, value_enum, default_value_t = Format::Json)]
    pub format: Format,

    /// Evaluate instances on one thread.
    #[arg(long, global = true)]
    pub sequential: bool,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Json,
    Pretty,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Lefschetz number of a free groupoid endofunctor.
    Lefschetz { files: Vec<PathBuf> },
    /// Transfer, as a sum over connected components.
    Transfer { files: Vec<PathBuf> },
    /// Reidemeister trace with its classification.
    Reidemeister { files: Vec<PathBuf> },
    /// Total trace of an endomorphism of a free groupoid representation.
    RepTrace { files: Vec<PathBuf> },
    /// Hattori–Stallings traces of matrices over a group ring.
    HattoriStallings { files: Vec<PathBuf> },
    /// Traces in the matrix bicategory and over finite groupoids.
    Matrix {
        #[command(subcommand)]
        op: MatrixOp,
    },
    /// Run randomized suites, or re-run one suite's check on witness files.
    Verify { files: Vec<PathBuf> },
    /// Print a random instance document.
    Generate {
        #[arg(long, value_enum)]
        kind: Kind,
        #[arg(long)]
        max_objects: Option<usize>,
        #[arg(long)]
        max_generators: Option<usize>,
        #[arg(long)]
        max_word_length: Option<usize>,
        #[arg(long)]
        max_rank: Option<usize>,
    },
}

#[derive(Debug, Subcommand)]
pub enum MatrixOp {
    /// Fiberwise traces of a family, or per conjugacy class over a finite groupoid.
    Trace { files: Vec<PathBuf> },
    /// Total trace of a family.
    Total { files: Vec<PathBuf> },
    /// Set transfer of an endomap, or fiberwise transfers over a finite groupoid.
    Transfer { files: Vec<PathBuf> },
    /// Check the fiberwise trace square and the total trace triangle.
    Verify { files: Vec<PathBuf> },
}

/// Result of one invocation: exit code and the text for each stream.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Outcome {
    pub code: i32,
    pub stdout: String,
    pub stderr: String,
}

enum Failure {
    Input(String),
    Verify(String),
}

impl From<InputError> for Failure {
    fn from(e: InputError) -> Self {
        Failure::Input(e.to_string())
    }
}

impl From<FixptError> for Failure {
    fn from(e: FixptError) -> Self {
        match e {
            FixptError::RouteMismatch { .. } => Failure::Verify(e.to_string()),
            _ => Failure::Input(e.to_string()),
        }
    }
}

impl From<RepError> for Failure {
    fn from(e: RepError) -> Self {
        match e {
            RepError::RouteMismatch { .. } => Failure::Verify(e.to_string()),
            _ => Failure::Input(e.to_string()),
        }
    }
}

fn input(e: impl std::fmt::Display) -> Failure {
    Failure::Input(e.to_string())
}

struct Document {
    value: Value,
    code: i32,
}

impl Document {
    fn ok(value: Value) -> Self {
        Document { value, code: EXIT_OK }
    }
}

pub fn run(cli: &Cli) -> Outcome {
    let started = Instant::now();
    let result = dispatch(cli);
    let elapsed = format!("wall time: {:.3}s\n", started.elapsed().as_secs_f64());
    match result {
        Ok(doc) => Outcome {
            code: doc.code,
            stdout: render(&doc.value, cli.format),
            stderr: elapsed,
        },
        Err(Failure::Input(msg)) => Outcome {
            code: EXIT_INPUT,
            stdout: String::new(),
            stderr: format!("input error: {msg}\n"),
        },
        Err(Failure::Verify(msg)) => Outcome {
            code: EXIT_VERIFY,
            stdout: String::new(),
            stderr: format!("verification failure: {msg}\n"),
        },
    }
}

pub fn render(v: &Value, format: Format) -> String {
    let mut s = match format {
        Format::Json => serde_json::to_string(v),
        Format::Pretty => serde_json::to_string_pretty(v),
    }
    .expect("values serialize");
    s.push('\n');
    s
}

fn read(path: &PathBuf) -> Result<InputDocument, Failure> {
    let text = std::fs::read_to_string(path).map_err(|e| Failure::Input(format!("{}: {e}", path.display())))?;
    InputDocument::parse(&text).map_err(|e| Failure::Input(format!("{}: {e}", path.display())))
}

/// Applies `f` to each file; several files give an array of documents and
/// the worst exit code.
fn per_file(files: &[PathBuf], f: impl Fn(&InputDocument) -> Result<Document, Failure>) -> Result<Document, Failure> {
    if files.is_empty() {
        return Err(Failure::Input("no input files".into()));
    }
    let mut docs = Vec::with_capacity(files.len());
    for path in files {
        docs.push(f(&read(path)?)?);
    }
    if docs.len() == 1 {
        return Ok(docs.pop().expect("one document"));
    }
    let code = docs.iter().map(|d| d.code).max().unwrap_or(EXIT_OK);
    Ok(Document {
        value: Value::Array(docs.into_iter().map(|d| d.value).collect()),
        code,
    })
}

fn dispatch(cli: &Cli) -> Result<Document, Failure> {
    match &cli.command {
        Command::Lefschetz { files } => per_file(files, |doc| {
            let g = doc.graph()?;
            let phi = doc.endo(&g)?;
            Ok(Document::ok(json!({ "lefschetz": int(&lefschetz(&g, &phi)?) })))
        }),
        Command::Transfer { files } => per_file(files, |doc| {
            let g = doc.graph()?;
            let phi = doc.endo(&g)?;
            let t = fixpt::transfer(&g, &phi)?;
            Ok(Document::ok(json!({ "transfer": formal_sum(&t, |c| component_label(&g, *c)) })))
        }),
        Command::Reidemeister { files } => per_file(files, |doc| {
            let g = doc.graph()?;
            let phi = doc.endo(&g)?;
            let rt = reidemeister_trace(&g, &phi, cli.bound)?;
            let l = lefschetz(&g, &phi)?;
            let t = fixpt::transfer(&g, &phi)?;
            if rt_augment(&rt) != l || rt_project_pi0(&g, &rt) != t {
                return Err(Failure::Verify(format!(
                    "Reidemeister trace augments to {} and projects to {:?}; Lefschetz {l}, transfer {t:?}",
                    rt_augment(&rt),
                    rt_project_pi0(&g, &rt)
                )));
            }
            Ok(Document::ok(reidemeister(&g, &rt, &t, &l)))
        }),
        Command::RepTrace { files } => per_file(files, |doc| {
            let g = doc.graph()?;
            let m = doc.rep(&g)?;
            let f = doc.rep_endo(&g, &m)?;
            let total = rep_total_trace(&g, &m, &f)?;
            let l = rep_lefschetz(&g, &m, &f)?;
            if total.augmentation() != l {
                return Err(Failure::Verify(format!(
                    "total trace augments to {} but the hocolim Lefschetz number is {l}",
                    total.augmentation()
                )));
            }
            Ok(Document::ok(json!({
                "rep_total_trace": formal_sum(&total, |w| word_label(&g, w)),
                "lefschetz": int(&l),
            })))
        }),
        Command::HattoriStallings { files } => per_file(files, |doc| {
            let g = doc.group()?;
            let classes = g.conj_classes();
            let label = |c: &usize| g.labels()[classes[*c][0]].clone();
            let traces: Vec<Value> = doc
                .group_ring_matrices(&g)?
                .iter()
                .map(|m| match hattori_stallings(&g, m) {
                    Ok(t) => formal_sum(&t, label),
                    Err(_) => Value::Null,
                })
                .collect();
            Ok(Document::ok(json!({ "hattori_stallings": traces })))
        }),
        Command::Matrix { op } => matrix(op),
        Command::Verify { files } => verify_command(cli, files),
        Command::Generate {
            kind,
            max_objects,
            max_generators,
            max_word_length,
            max_rank,
        } => {
            let d = kind.default_size();
            let size = Size {
                objects: max_objects.unwrap_or(d.objects),
                generators: max_generators.unwrap_or(d.generators),
                word_length: max_word_length.unwrap_or(d.word_length),
                rank: max_rank.unwrap_or(d.rank),
            };
            let doc = generate(*kind, cli.seed, 0, &size);
            Ok(Document::ok(serde_json::to_value(&doc).expect("documents serialize")))
        }
    }
}

fn matrix(op: &MatrixOp) -> Result<Document, Failure> {
    match op {
        MatrixOp::Trace { files } => per_file(files, |doc| {
            if doc.finite_groupoid.is_some() {
                let (a, m, f) = doc.finite_groupoid()?;
                let values = fingpd_fib_trace(&a, &m, &f).map_err(input)?;
                let mut out = Map::new();
                for (class, v) in fingpd_conj_classes(&a).iter().zip(&values) {
                    out.insert(a.name(class[0]).to_string(), int(v));
                }
                return Ok(Document::ok(json!({ "fiberwise_trace": out })));
            }
            let f = doc.family()?;
            let mut out = Map::new();
            for (label, v) in f.base().labels().iter().zip(&fam_fib_trace(&f).per_fiber) {
                out.insert(label.clone(), int(v));
            }
            Ok(Document::ok(json!({ "fiberwise_trace": out })))
        }),
        MatrixOp::Total { files } => per_file(files, |doc| {
            let f = doc.family()?;
            let labels = f.base().labels();
            Ok(Document::ok(json!({ "total_trace": formal_sum(&fam_tot_trace(&f), |a| labels[*a].clone()) })))
        }),
        MatrixOp::Transfer { files } => per_file(files, |doc| {
            if doc.finite_groupoid.is_some() {
                let (a, m, f) = doc.finite_groupoid()?;
                let sums = fingpd_fib_transfer(&a, &m, &f).map_err(input)?;
                let mut out = Map::new();
                for (class, s) in fingpd_conj_classes(&a).iter().zip(&sums) {
                    out.insert(a.name(class[0]).to_string(), formal_sum(s, |i| i.to_string()));
                }
                return Ok(Document::ok(json!({ "fiberwise_transfer": out })));
            }
            let (set, phi) = doc.set_map()?;
            let labels = set.labels();
            Ok(Document::ok(json!({ "set_transfer": formal_sum(&set_transfer(&phi), |a| labels[*a].clone()) })))
        }),
        MatrixOp::Verify { files } => per_file(files, |doc| {
            let f = doc.family()?;
            let square = verify_fibtrace4(&f, None).map_err(input)?;
            let triangle = verify_totaltr(&f, None);
            let pass = square.pass && triangle.pass;
            Ok(Document {
                value: json!({
                    "pass": pass,
                    "fiberwise_square": {
                        "pass": square.pass,
                        "bicategorical": ints(&square.top_right),
                        "fiberwise": ints(&square.left_bottom),
                    },
                    "total_triangle": {
                        "pass": triangle.pass,
                        "augmented_total": int(&triangle.augmented_total),
                        "fiberwise_total": int(&triangle.fiberwise_total),
                    },
                }),
                code: if pass { EXIT_OK } else { EXIT_VERIFY },
            })
        }),
    }
}

fn verify_command(cli: &Cli, files: &[PathBuf]) -> Result<Document, Failure> {
    let settings = Settings {
        seed: cli.seed,
        instances: cli.instances,
        bound: cli.bound,
        exec: if cli.sequential { Exec::Sequential } else { Exec::Parallel },
    };
    if !files.is_empty() {
        if cli.suite == Suite::All {
            return Err(Failure::Input("re-running witnesses needs a single --suite".into()));
        }
        return per_file(files, |doc| {
            let outcome = verify::check(cli.suite, doc, cli.bound);
            Ok(Document {
                value: json!({
                    "suite": cli.suite.name(),
                    "pass": outcome.is_ok(),
                    "message": outcome.as_ref().err(),
                }),
                code: if outcome.is_ok() { EXIT_OK } else { EXIT_VERIFY },
            })
        });
    }
    let reports = verify::run(cli.suite, &settings);
    let pass = reports.iter().all(|r| r.pass());
    let value = json!({
        "command": "verify",
        "suite": cli.suite.name(),
        "seed": cli.seed,
        "instances": cli.instances,
        "bound": cli.bound,
        "pass": pass,
        "suites": serde_json::to_value(&reports).expect("reports serialize"),
    });
    Ok(Document {
        value,
        code: if pass { EXIT_OK } else { EXIT_VERIFY },
    })
}
