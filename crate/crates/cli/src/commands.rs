use std::collections::BTreeMap;
use std::ffi::OsString;
use std::io::Read;

use clap::{Args, Parser, Subcommand, ValueEnum};
use contraction_core::contraction::{
    bijection_table, contract, mackey_data, schmid_check_with, support, BijectionRow,
};
use contraction_core::families::rees_lambda0_family;
use contraction_core::intertwine::{
    alpha_limits, composition_defect, composition_defect_at, equivariance_defect, finite_rank_image,
    AlphaSequence,
};
use contraction_core::ladder::{bracket_defect, casimir_defect_with, weight_step_violations};
use contraction_core::{FamilySpec, GaussRational, LadderFamily, Scalar, Sign, Window};
use num_traits::Zero;
use rayon::prelude::*;
use serde_json::{json, Value};

use crate::dsl::{parse_module_doc, parse_spec, Diagnostic};
use crate::report::{Invariant, Report};

/// Environment variable read when `verify` gets no `--jobs`.
pub const JOBS_ENV: &str = "CONTRACTION_JOBS";

/// Exit status and captured output of one invocation.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Outcome {
    pub code: i32,
    pub stdout: String,
    pub stderr: String,
}

#[derive(thiserror::Error, Debug)]
enum CliError {
    #[error("{0}")]
    Usage(String),
    #[error("{source_name}:{diag}")]
    Doc { source_name: String, diag: Diagnostic },
    #[error(transparent)]
    Engine(#[from] contraction_core::Error),
}

#[derive(Parser, Debug)]
#[command(name = "contraction", version, about = "Exact verifier for contraction families of sl(2) modules")]
struct Cli {
    /// Output format.
    #[arg(long, value_enum, default_value_t = Format::Text, global = true)]
    format: Format,
    #[command(subcommand)]
    command: Command,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
enum Format {
    Json,
    Text,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Coefficient table of a family over a window.
    Family {
        #[command(flatten)]
        source: SourceArgs,
        #[arg(long, default_value_t = 10)]
        window: u32,
        /// Specialize at this value of t first.
        #[arg(long, value_parser = parse_gauss_arg, allow_hyphen_values = true)]
        t: Option<GaussRational>,
    },
    /// Bracket, Casimir and (for principal series) intertwiner suites over a
    /// parameter grid. List values with commas: `--l 2i,1+i --k 0,1`.
    Verify {
        #[command(flatten)]
        source: SourceArgs,
        #[arg(long, default_value_t = 20)]
        window: u32,
        /// Worker threads; defaults to CONTRACTION_JOBS, then the core count.
        #[arg(long)]
        jobs: Option<usize>,
    },
    /// The t = 0 module, its support in s*, quotient and Mackey datum.
    Contract {
        #[command(flatten)]
        source: SourceArgs,
        #[arg(long, default_value_t = 20)]
        window: u32,
    },
    /// Normalized intertwiner coefficients, their t -> 0 limits and the
    /// composition check.
    Intertwine {
        #[arg(long, value_parser = parse_gauss_arg, allow_hyphen_values = true)]
        l: GaussRational,
        #[arg(long, default_value_t = 0, value_parser = clap::value_parser!(u8).range(0..=1))]
        k: u8,
        #[arg(long, default_value_t = 10)]
        window: u32,
        /// Also evaluate at this value of t.
        #[arg(long, value_parser = parse_gauss_arg, allow_hyphen_values = true)]
        t: Option<GaussRational>,
    },
    /// Correspondence between t = 1 labels and Mackey data.
    Bijection {
        #[arg(long, value_enum)]
        preset: Option<Preset>,
        /// A family header such as "principal l=2*i k=0"; repeatable.
        #[arg(long = "spec")]
        specs: Vec<String>,
    },
    /// Splitting of the odd l = 0 Rees family into the two limits of
    /// discrete series.
    Schmid {
        /// Compare rungs 0..=window of each half.
        #[arg(long, default_value_t = 40)]
        window: u32,
    },
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
enum Preset {
    TemperedSample,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
enum Kind {
    Principal,
    Discrete,
    #[value(name = "rees_lambda0")]
    ReesLambda0,
    #[value(name = "minimal_ktype")]
    MinimalKtype,
    #[value(name = "finite_dim")]
    FiniteDim,
}

/// A family given by flags or by a document.
#[derive(Args, Debug, Clone)]
struct SourceArgs {
    #[arg(long, value_enum)]
    family: Option<Kind>,
    #[arg(long, value_delimiter = ',', value_parser = parse_gauss_arg, allow_hyphen_values = true)]
    l: Vec<GaussRational>,
    #[arg(long, value_delimiter = ',', value_parser = clap::value_parser!(u8).range(0..=1))]
    k: Vec<u8>,
    #[arg(long, value_delimiter = ',')]
    n: Vec<u32>,
    #[arg(long, value_delimiter = ',', value_parser = parse_sign_arg, allow_hyphen_values = true)]
    sign: Vec<Sign>,
    #[arg(long, value_delimiter = ',')]
    dim: Vec<u32>,
    /// Module document path, or `-` for stdin.
    #[arg(long, conflicts_with = "family")]
    doc: Option<String>,
}

fn parse_gauss_arg(s: &str) -> Result<GaussRational, String> {
    s.parse().map_err(|e: contraction_core::Error| e.to_string())
}

fn parse_sign_arg(s: &str) -> Result<Sign, String> {
    Sign::parse(s).map_err(|e| e.to_string())
}

struct Cell {
    label: String,
    spec: Option<FamilySpec>,
    family: LadderFamily,
}

fn join<T: ToString>(v: &[T]) -> String {
    v.iter().map(ToString::to_string).collect::<Vec<_>>().join(",")
}

impl SourceArgs {
    fn parameters(&self, out: &mut BTreeMap<String, String>) {
        if let Some(kind) = self.family {
            out.insert("family".into(), kind.to_possible_value().unwrap().get_name().to_string());
        }
        let lists = [
            ("l", join(&self.l)),
            ("k", join(&self.k)),
            ("n", join(&self.n)),
            ("sign", join(&self.sign)),
            ("dim", join(&self.dim)),
        ];
        for (key, value) in lists {
            if !value.is_empty() {
                out.insert(key.into(), value);
            }
        }
        if let Some(doc) = &self.doc {
            out.insert("doc".into(), doc.clone());
        }
    }

    fn cells(&self, stdin: Option<&str>) -> Result<Vec<Cell>, CliError> {
        if let Some(path) = &self.doc {
            let given = [
                ("--l", self.l.is_empty()),
                ("--k", self.k.is_empty()),
                ("--n", self.n.is_empty()),
                ("--sign", self.sign.is_empty()),
                ("--dim", self.dim.is_empty()),
            ];
            if let Some((flag, _)) = given.iter().find(|(_, empty)| !empty) {
                return Err(CliError::Usage(format!("{flag} cannot be combined with --doc")));
            }
            let text = read_doc(path, stdin)?;
            let doc = parse_module_doc(&text).map_err(|diag| CliError::Doc {
                source_name: if path == "-" { "<stdin>".into() } else { path.clone() },
                diag,
            })?;
            let label = match doc.spec() {
                Some(spec) => spec.to_string(),
                None => "custom".to_string(),
            };
            return Ok(vec![Cell {
                label,
                spec: doc.spec().cloned(),
                family: doc.family().clone(),
            }]);
        }
        let kind = self
            .family
            .ok_or_else(|| CliError::Usage("either --family or --doc is required".into()))?;
        let ks = if self.k.is_empty() { vec![0] } else { self.k.clone() };
        let forbid = |flag: &str, empty: bool| {
            if empty {
                Ok(())
            } else {
                Err(CliError::Usage(format!("{flag} does not apply to this family")))
            }
        };
        let require = |flag: &str, empty: bool| {
            if empty {
                Err(CliError::Usage(format!("{flag} is required for this family")))
            } else {
                Ok(())
            }
        };
        let mut specs = Vec::new();
        match kind {
            Kind::Principal | Kind::MinimalKtype => {
                require("--l", self.l.is_empty())?;
                forbid("--n", self.n.is_empty())?;
                forbid("--sign", self.sign.is_empty())?;
                forbid("--dim", self.dim.is_empty())?;
                for l in &self.l {
                    for &k in &ks {
                        let l = l.clone();
                        specs.push(if kind == Kind::Principal {
                            FamilySpec::Principal { l, k }
                        } else {
                            FamilySpec::MinimalKtype { l, k }
                        });
                    }
                }
            }
            Kind::Discrete => {
                require("--n", self.n.is_empty())?;
                require("--sign", self.sign.is_empty())?;
                forbid("--l", self.l.is_empty())?;
                forbid("--k", self.k.is_empty())?;
                forbid("--dim", self.dim.is_empty())?;
                for &n in &self.n {
                    for &sign in &self.sign {
                        specs.push(FamilySpec::Discrete { n, sign });
                    }
                }
            }
            Kind::ReesLambda0 => {
                forbid("--l", self.l.is_empty())?;
                forbid("--n", self.n.is_empty())?;
                forbid("--sign", self.sign.is_empty())?;
                forbid("--dim", self.dim.is_empty())?;
                specs.extend(ks.iter().map(|&k| FamilySpec::ReesLambda0 { k }));
            }
            Kind::FiniteDim => {
                require("--dim", self.dim.is_empty())?;
                forbid("--l", self.l.is_empty())?;
                forbid("--n", self.n.is_empty())?;
                forbid("--sign", self.sign.is_empty())?;
                for &dim in &self.dim {
                    for &k in &ks {
                        specs.push(FamilySpec::FiniteDim { dim, k });
                    }
                }
            }
        }
        specs
            .into_iter()
            .map(|spec| {
                Ok(Cell {
                    label: spec.to_string(),
                    family: spec.build()?,
                    spec: Some(spec),
                })
            })
            .collect()
    }

    fn single(&self, stdin: Option<&str>) -> Result<Cell, CliError> {
        let mut cells = self.cells(stdin)?;
        if cells.len() != 1 {
            return Err(CliError::Usage(format!(
                "this command takes one family, the flags describe {}; use `verify` for grids",
                cells.len()
            )));
        }
        Ok(cells.remove(0))
    }
}

fn read_doc(path: &str, stdin: Option<&str>) -> Result<String, CliError> {
    if path == "-" {
        if let Some(text) = stdin {
            return Ok(text.to_string());
        }
        let mut text = String::new();
        std::io::stdin()
            .read_to_string(&mut text)
            .map_err(|e| CliError::Usage(format!("cannot read stdin: {e}")))?;
        return Ok(text);
    }
    std::fs::read_to_string(path).map_err(|e| CliError::Usage(format!("cannot read {path}: {e}")))
}

fn window_of(fam: &LadderFamily, radius: u32) -> Window {
    fam.indices().clip(&Window::radius(i64::from(radius)))
}

/// Runs the CLI on `argv` (program name first), reading `--doc -` from the
/// process's stdin.
pub fn run<I, T>(argv: I) -> Outcome
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    run_with_stdin(argv, None)
}

/// As [`run`], with `--doc -` reading `stdin` instead when it is given.
pub fn run_with_stdin<I, T>(argv: I, stdin: Option<&str>) -> Outcome
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(argv) {
        Ok(cli) => cli,
        Err(e) => {
            let text = e.render().to_string();
            return match e.kind() {
                clap::error::ErrorKind::DisplayHelp | clap::error::ErrorKind::DisplayVersion => Outcome {
                    code: 0,
                    stdout: text,
                    stderr: String::new(),
                },
                _ => Outcome {
                    code: 2,
                    stdout: String::new(),
                    stderr: text,
                },
            };
        }
    };
    match execute(&cli.command, stdin) {
        Err(e) => Outcome {
            code: 2,
            stdout: String::new(),
            stderr: format!("error: {e}\n"),
        },
        Ok(report) => {
            let stdout = match cli.format {
                Format::Json => report.to_json(),
                Format::Text => report.to_text(),
            };
            let stderr: String = report
                .failures()
                .map(|f| format!("failed invariant: {} ({})\n", f.name, f.detail))
                .collect();
            Outcome {
                code: if report.passed() { 0 } else { 1 },
                stdout,
                stderr,
            }
        }
    }
}

fn execute(command: &Command, stdin: Option<&str>) -> Result<Report, CliError> {
    match command {
        Command::Family { source, window, t } => family_cmd(source, *window, t.as_ref(), stdin),
        Command::Verify { source, window, jobs } => verify_cmd(source, *window, *jobs, stdin),
        Command::Contract { source, window } => contract_cmd(source, *window, stdin),
        Command::Intertwine { l, k, window, t } => intertwine_cmd(l, *k, *window, t.as_ref()),
        Command::Bijection { preset, specs } => bijection_cmd(*preset, specs),
        Command::Schmid { window } => schmid_cmd(*window),
    }
}

fn family_cmd(source: &SourceArgs, radius: u32, t: Option<&GaussRational>, stdin: Option<&str>) -> Result<Report, CliError> {
    let cell = source.single(stdin)?;
    let mut params = BTreeMap::new();
    source.parameters(&mut params);
    params.insert("window".into(), radius.to_string());
    let fam = match t {
        Some(at) => {
            params.insert("t".into(), at.to_string());
            cell.family.specialize(at)?
        }
        None => cell.family,
    };
    let w = window_of(&fam, radius);
    let rows: Vec<Value> = w
        .iter()
        .map(|p| {
            json!({
                "p": p.to_string(),
                "weight": fam.weight(p).to_string(),
                "raise": fam.raise(p).to_string(),
                "lower": fam.lower(p).to_string(),
            })
        })
        .collect();
    let result = json!({
        "family": fam.describe(),
        "window": w.to_string(),
        "rows": rows,
    });
    let invariants = vec![Invariant::empty("weight_step", &weight_step_violations(&fam, &w))];
    Ok(Report::new("family", params, result, invariants))
}

/// The Casimir eigenvalue to check against: the documented value for
/// built-ins, the value on the first basis vector for custom families.
fn casimir_reference(cell: &Cell, w: &Window) -> Result<Scalar, contraction_core::Error> {
    if let Some(spec) = &cell.spec {
        return Ok(spec.casimir_eigenvalue());
    }
    let first = Window::new(w.lo, w.lo);
    Ok(casimir_defect_with(&cell.family, &Scalar::zero(), &first)?
        .into_iter()
        .next()
        .map(|(_, c)| c)
        .unwrap_or_default())
}

fn verify_cell(cell: &Cell, radius: u32) -> Result<(Value, Vec<Invariant>), contraction_core::Error> {
    let fam = &cell.family;
    let w = window_of(fam, radius);
    let name = |what: &str| format!("{}: {what}", cell.label);
    let mut invariants = vec![
        Invariant::empty(name("brackets"), &bracket_defect(fam, &w)?),
        Invariant::empty(name("casimir"), &casimir_defect_with(fam, &casimir_reference(cell, &w)?, &w)?),
        Invariant::empty(name("weight_step"), &weight_step_violations(fam, &w)),
    ];
    if let Some(FamilySpec::Principal { l, k }) = &cell.spec {
        invariants.push(Invariant::empty(name("equivariance"), &equivariance_defect(l, *k, &w)?));
        invariants.push(Invariant::empty(name("composition"), &composition_defect(l, *k, &w)?));
    }
    let summary = json!({
        "family": cell.label,
        "window": w.to_string(),
        "passed": invariants.iter().all(|i| i.passed),
    });
    Ok((summary, invariants))
}

fn worker_count(jobs: Option<usize>) -> Result<Option<usize>, CliError> {
    if let Some(n) = jobs {
        return if n == 0 {
            Err(CliError::Usage("--jobs must be at least 1".into()))
        } else {
            Ok(Some(n))
        };
    }
    match std::env::var(JOBS_ENV) {
        Ok(v) => v
            .parse::<usize>()
            .ok()
            .filter(|&n| n > 0)
            .map(Some)
            .ok_or_else(|| CliError::Usage(format!("{JOBS_ENV}={v:?} is not a positive integer"))),
        Err(_) => Ok(None),
    }
}

fn verify_cmd(source: &SourceArgs, radius: u32, jobs: Option<usize>, stdin: Option<&str>) -> Result<Report, CliError> {
    let cells = source.cells(stdin)?;
    let mut params = BTreeMap::new();
    source.parameters(&mut params);
    params.insert("window".into(), radius.to_string());
    let mut builder = rayon::ThreadPoolBuilder::new();
    if let Some(n) = worker_count(jobs)? {
        builder = builder.num_threads(n);
    }
    let pool = builder
        .build()
        .map_err(|e| CliError::Usage(format!("cannot start workers: {e}")))?;
    // Cells are independent; collect keeps the grid order.
    let results: Vec<_> = pool.install(|| cells.par_iter().map(|c| verify_cell(c, radius)).collect());
    let mut summaries = Vec::new();
    let mut invariants = Vec::new();
    for r in results {
        let (summary, inv) = r?;
        summaries.push(summary);
        invariants.extend(inv);
    }
    Ok(Report::new("verify", params, json!({ "cells": summaries }), invariants))
}

fn contract_cmd(source: &SourceArgs, radius: u32, stdin: Option<&str>) -> Result<Report, CliError> {
    let cell = source.single(stdin)?;
    let mut params = BTreeMap::new();
    source.parameters(&mut params);
    params.insert("window".into(), radius.to_string());
    let c0 = contract(&cell.family)?;
    let w = window_of(&c0, radius);
    let supp = support(&c0, &w)?;
    let data = mackey_data(&c0, &w)?;
    // At t = 0 the bracket residuals must vanish: [E,F] = 0 there.
    let zero = GaussRational::zero();
    let residual_at_zero: Vec<_> = bracket_defect(&c0, &w)?
        .into_iter()
        .filter(|d| d.residual.eval_at(&zero).map_or(true, |v| !v.is_zero()))
        .collect();
    let invariants = vec![
        Invariant::empty("brackets_at_t0", &residual_at_zero),
        Invariant::new(
            "quotient_nonempty",
            !data.is_empty(),
            format!("{} irreducible summand(s)", data.len()),
        ),
    ];
    let result = json!({
        "family": cell.label,
        "contracted": c0.describe(),
        "window": w.to_string(),
        "support": supp.to_string(),
        "equation": supp.equation(),
        "min_closed_orbit": supp.min_closed_orbit(),
        "mackey_data": data,
    });
    Ok(Report::new("contract", params, result, invariants))
}

fn intertwine_cmd(l: &GaussRational, k: u8, radius: u32, t: Option<&GaussRational>) -> Result<Report, CliError> {
    let w = Window::radius(i64::from(radius));
    let mut params = BTreeMap::from([
        ("l".to_string(), l.to_string()),
        ("k".to_string(), k.to_string()),
        ("window".to_string(), radius.to_string()),
    ]);
    let seq = AlphaSequence::new(l, k, &w)?;
    let limits = alpha_limits(l, k, &w);
    let rows: Vec<Value> = seq
        .values()
        .map(|(p, a)| {
            let mut row = serde_json::Map::new();
            row.insert("p".into(), p.to_string().into());
            row.insert("alpha".into(), a.to_string().into());
            let limit = match &limits {
                Ok(map) => map[&p].to_string(),
                Err(_) => "-".to_string(),
            };
            row.insert("limit".into(), limit.into());
            if let Some(at) = t {
                let v = a.eval_at(at).map_or("pole".to_string(), |v| v.to_string());
                row.insert("at_t".into(), v.into());
            }
            Value::Object(row)
        })
        .collect();
    let mut invariants = vec![
        Invariant::empty("recursion", &seq.recursion_violations()?),
        Invariant::empty("equivariance", &equivariance_defect(l, k, &w)?),
        Invariant::empty("composition", &composition_defect(l, k, &w)?),
        match &limits {
            Ok(_) => Invariant::new("limits_alternate", true, "alpha_p -> (-1)^p as t -> 0"),
            Err(e) => Invariant::new("limits_alternate", false, e.to_string()),
        },
    ];
    let mut result = serde_json::Map::new();
    result.insert("alpha".into(), Value::Array(rows));
    if let Some(n) = l.to_i64().filter(|&n| n >= 1 && (n + i64::from(k)) % 2 == 1) {
        let image = finite_rank_image(n, k, &w)?;
        invariants.push(Invariant::new(
            "finite_rank",
            image.len() as i64 == n,
            format!("{} nonzero coefficient(s) at t=1, expected {n}", image.len()),
        ));
        let image: Vec<String> = image.iter().map(ToString::to_string).collect();
        result.insert("finite_rank_image".into(), json!(image));
    }
    if let Some(at) = t {
        params.insert("t".into(), at.to_string());
        result.insert("composition_at_t".into(), serde_json::to_value(composition_defect_at(l, k, &w, at)?).unwrap());
    }
    Ok(Report::new("intertwine", params, Value::Object(result), invariants))
}

/// Limits and discrete series up to `n = 3`, both `l = 0` Rees families and
/// principal series on the unitary axis.
pub fn tempered_sample() -> Vec<FamilySpec> {
    let mut specs = Vec::new();
    for n in 0..=3 {
        for sign in [Sign::Plus, Sign::Minus] {
            specs.push(FamilySpec::Discrete { n, sign });
        }
    }
    specs.push(FamilySpec::ReesLambda0 { k: 0 });
    specs.push(FamilySpec::ReesLambda0 { k: 1 });
    for l in ["i", "2*i", "3/2*i", "-5/3*i", "1/2*i"] {
        for k in 0..=1 {
            specs.push(FamilySpec::Principal {
                l: l.parse().expect("preset values parse"),
                k,
            });
        }
    }
    specs
}

fn row_json(row: &BijectionRow) -> Value {
    let labels: Vec<&str> = row.data.iter().map(|d| d.label.as_str()).collect();
    let supports: Vec<String> = row.data.iter().map(|d| d.support.to_string()).collect();
    json!({
        "spec": row.spec.to_string(),
        "group_label": row.group_label,
        "irreducible": row.irreducible,
        "datum": labels.join(" + "),
        "support": supports.join(" + "),
    })
}

fn bijection_cmd(preset: Option<Preset>, spec_texts: &[String]) -> Result<Report, CliError> {
    let mut params = BTreeMap::new();
    let mut specs = Vec::new();
    if preset == Some(Preset::TemperedSample) {
        params.insert("preset".into(), "tempered-sample".into());
        specs.extend(tempered_sample());
    }
    for (idx, text) in spec_texts.iter().enumerate() {
        let spec = parse_spec(text).map_err(|diag| CliError::Doc {
            source_name: format!("--spec #{}", idx + 1),
            diag,
        })?;
        specs.push(spec);
    }
    if specs.is_empty() {
        return Err(CliError::Usage("bijection needs --preset or at least one --spec".into()));
    }
    if !spec_texts.is_empty() {
        params.insert("spec".into(), spec_texts.join("; "));
    }
    let table = bijection_table(&specs)?;
    let rows: Vec<Value> = table.rows.iter().map(row_json).collect();
    let invariants = vec![Invariant::empty("injective", &table.collisions)];
    let result = json!({
        "rows": rows,
        "collisions": table.collisions,
    });
    Ok(Report::new("bijection", params, result, invariants))
}

fn schmid_cmd(radius: u32) -> Result<Report, CliError> {
    let rees = rees_lambda0_family(1)?;
    let outcome = schmid_check_with(&rees, &Window::new(0, i64::from(radius)))?;
    let params = BTreeMap::from([("window".to_string(), radius.to_string())]);
    let invariants = vec![Invariant::new(
        "schmid_split",
        outcome.holds,
        format!(
            "lower half ~ D+_0: {}, upper half ~ D-_0: {}",
            outcome.lower_half_matches_plus, outcome.upper_half_matches_minus
        ),
    )];
    let result = serde_json::to_value(&outcome).unwrap();
    Ok(Report::new("schmid", params, result, invariants))
}
