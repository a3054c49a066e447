//! Command-line front end.
//!
//! Every subcommand writes a table as CSV (preceded by `#` header lines) or
//! JSON. The header records the resolved flag set, including defaults and
//! the master seed, so an artifact can be regenerated from its header.
//!
//! Exit codes: 0 success, 1 a verification found a violated bound, 2 usage
//! or input error.

use std::ffi::OsString;
use std::fs;
use std::io::Write;
use std::path::PathBuf;
use std::str::FromStr;

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde::Serialize;
use serde_json::{json, Map, Value};

use crate::bounds::{
    chain_lower_bound, known_max_lower_bound, nb_identity_sum, p_star, v_series,
    y_game_solve, y_game_threshold_value, YGameSpec,
};
use crate::error::{Error, Result};
use crate::exact::{exact_success_rule, exact_success_tau, optimal_value};
use crate::format::{fmt_num, round_sig};
use crate::generators::{make_family, FamilySpec};
use crate::montecarlo::{estimate_success_labeled, split_seed, PosetInfo};
use crate::poset::{parse_poset, write_poset, Poset};
use crate::strategy::StoppingRule;
use crate::verify::{conjecture_scan, min_gap, verify_theorems};

pub const EXIT_OK: i32 = 0;
pub const EXIT_VIOLATION: i32 = 1;
pub const EXIT_USAGE: i32 = 2;

#[derive(Parser, Debug)]
#[command(name = "poset-secretary", version, about = "Secretary problem on partially ordered sets")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand, Debug, Serialize)]
enum Command {
    /// Write a poset family in the text format.
    Generate(GenerateArgs),
    /// Monte Carlo estimate of a rule's success probability.
    Simulate(SimulateArgs),
    /// Exact success probability of a rule.
    Exact(ExactArgs),
    /// Optimal success probability by backward induction.
    Optimal(OptimalArgs),
    /// Closed-form bounds and series.
    Bounds(BoundsArgs),
    /// Solve the independent-payoff comparison game.
    Ygame(YgameArgs),
    /// Exhaustive bound checks on all posets up to a size.
    VerifyTheorems(ScanArgs),
    /// Smallest margin of τ_k(p_k) over p_k on all posets up to a size.
    ConjectureScan(ScanArgs),
}

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, ValueEnum, Serialize)]
#[serde(rename_all = "lowercase")]
enum Format {
    #[default]
    Csv,
    Json,
}

#[derive(Args, Debug, Serialize)]
struct OutputArgs {
    /// Output format.
    #[arg(long, value_enum, default_value_t = Format::Csv)]
    format: Format,
    /// Output path (standard output when omitted).
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum, Serialize)]
#[serde(rename_all = "snake_case")]
#[value(rename_all = "snake_case")]
enum FamilyKind {
    DisjointChains,
    Linear,
    Antichain,
    BinaryTree,
    Twins,
    Random,
}

#[derive(Args, Debug, Serialize)]
struct GenerateArgs {
    #[arg(long, value_enum)]
    family: FamilyKind,
    /// Number of chains (disjoint_chains).
    #[arg(long)]
    k: Option<usize>,
    /// Chain length (disjoint_chains).
    #[arg(long)]
    x: Option<usize>,
    /// Element count (linear, antichain, random).
    #[arg(long)]
    n: Option<usize>,
    /// Tree depth (binary_tree).
    #[arg(long)]
    depth: Option<usize>,
    /// Level count (twins).
    #[arg(long)]
    levels: Option<usize>,
    /// Relation density (random).
    #[arg(long)]
    density: Option<f64>,
    /// Seed (random).
    #[arg(long, default_value_t = 0)]
    seed: u64,
    /// Output path (standard output when omitted).
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum, Serialize)]
#[serde(rename_all = "snake_case")]
#[value(rename_all = "snake_case")]
enum RuleKind {
    TauK,
    Threshold,
}

/// `--p` value: a number, `auto` (p_k) or `auto-universal` (e^{-1/k}).
#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
#[serde(rename_all = "kebab-case")]
enum PChoice {
    Value(f64),
    Auto,
    AutoUniversal,
}

impl FromStr for PChoice {
    type Err = String;

    fn from_str(s: &str) -> std::result::Result<Self, String> {
        match s {
            "auto" => Ok(PChoice::Auto),
            "auto-universal" => Ok(PChoice::AutoUniversal),
            _ => s
                .parse::<f64>()
                .map(PChoice::Value)
                .map_err(|_| format!("expected a probability, `auto` or `auto-universal`, got {s:?}")),
        }
    }
}

impl PChoice {
    fn resolve(self, k: usize) -> f64 {
        match self {
            PChoice::Value(p) => p,
            PChoice::Auto => p_star(k),
            PChoice::AutoUniversal => (-1.0 / k as f64).exp(),
        }
    }
}

/// Inclusive grid `start:end:step`.
#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
struct Grid {
    start: f64,
    end: f64,
    step: f64,
}

impl FromStr for Grid {
    type Err = String;

    fn from_str(s: &str) -> std::result::Result<Self, String> {
        let parts: Vec<f64> = s
            .split(':')
            .map(|x| x.trim().parse::<f64>())
            .collect::<std::result::Result<_, _>>()
            .map_err(|_| format!("grid {s:?} must look like start:end:step"))?;
        match parts[..] {
            [start, end, step] if step > 0.0 && end >= start => Ok(Grid { start, end, step }),
            _ => Err(format!("grid {s:?} needs start <= end and a positive step")),
        }
    }
}

impl Grid {
    fn values(&self) -> Vec<f64> {
        let count = ((self.end - self.start) / self.step + 1e-9).floor() as usize + 1;
        (0..count).map(|i| self.start + i as f64 * self.step).collect()
    }
}

#[derive(Args, Debug, Serialize)]
struct RuleArgs {
    #[arg(long, value_enum, default_value_t = RuleKind::TauK)]
    rule: RuleKind,
    /// Maximal-element allowance for tau_k (defaults to the poset's count).
    #[arg(long)]
    k: Option<usize>,
    /// Warm-up probability for tau_k: a number, `auto` or `auto-universal`.
    #[arg(long, default_value = "auto")]
    p: PChoice,
    /// Threshold position for the classical rule.
    #[arg(long)]
    r: Option<usize>,
}

#[derive(Args, Debug, Serialize)]
struct SimulateArgs {
    /// Poset file, or a family descriptor such as `disjoint_chains(k=2,x=2)`.
    #[arg(long)]
    poset: String,
    #[command(flatten)]
    rule: RuleArgs,
    /// Sweep tau_k over this p grid instead of a single `--p`.
    #[arg(long)]
    p_grid: Option<Grid>,
    #[arg(long, default_value_t = 100_000)]
    trials: u64,
    /// Master seed.
    #[arg(long, default_value_t = 0)]
    seed: u64,
    /// Worker threads (all available cores when omitted).
    #[arg(long)]
    threads: Option<usize>,
    #[command(flatten)]
    output: OutputArgs,
}

#[derive(Args, Debug, Serialize)]
struct ExactArgs {
    #[arg(long)]
    poset: String,
    #[command(flatten)]
    rule: RuleArgs,
    #[command(flatten)]
    output: OutputArgs,
}

#[derive(Args, Debug, Serialize)]
struct OptimalArgs {
    #[arg(long)]
    poset: String,
    /// Also write the optimal-rule table as JSON to this path.
    #[arg(long)]
    table: Option<PathBuf>,
    #[command(flatten)]
    output: OutputArgs,
}

#[derive(Args, Debug, Serialize)]
struct BoundsArgs {
    #[arg(long, default_value_t = 1)]
    k: usize,
    /// Single probability (`auto` = p_k, `auto-universal` = e^{-1/k}).
    #[arg(long, conflicts_with = "p_grid")]
    p: Option<PChoice>,
    /// Inclusive grid start:end:step.
    #[arg(long)]
    p_grid: Option<Grid>,
    #[command(flatten)]
    output: OutputArgs,
}

#[derive(Args, Debug, Serialize)]
struct YgameArgs {
    #[arg(long)]
    k: usize,
    #[arg(long)]
    ell: usize,
    #[arg(long)]
    m: usize,
    /// List the value of every segment threshold instead of the summary.
    #[arg(long)]
    curve: bool,
    #[command(flatten)]
    output: OutputArgs,
}

#[derive(Args, Debug, Serialize)]
struct ScanArgs {
    #[arg(long, default_value_t = 5)]
    max_n: usize,
    #[command(flatten)]
    output: OutputArgs,
}

#[derive(Clone, Debug)]
enum Cell {
    Str(String),
    Int(u64),
    Num(f64),
    Bool(bool),
}

impl Cell {
    fn csv(&self) -> String {
        match self {
            Cell::Str(s) => s.clone(),
            Cell::Int(i) => i.to_string(),
            Cell::Num(x) => fmt_num(*x),
            Cell::Bool(b) => b.to_string(),
        }
    }

    fn json(&self) -> Value {
        match self {
            Cell::Str(s) => json!(s),
            Cell::Int(i) => json!(i),
            Cell::Num(x) => json!(round_sig(*x)),
            Cell::Bool(b) => json!(b),
        }
    }
}

fn s(x: impl ToString) -> Cell {
    Cell::Str(x.to_string())
}

fn int(x: impl TryInto<u64>) -> Cell {
    Cell::Int(x.try_into().unwrap_or(u64::MAX))
}

struct Table {
    columns: Vec<&'static str>,
    rows: Vec<Vec<Cell>>,
    notes: Vec<String>,
}

impl Table {
    fn new(columns: &[&'static str]) -> Self {
        Table {
            columns: columns.to_vec(),
            rows: Vec::new(),
            notes: Vec::new(),
        }
    }

    fn push(&mut self, row: Vec<Cell>) {
        debug_assert_eq!(row.len(), self.columns.len());
        self.rows.push(row);
    }

    fn render(&self, header: &Value, format: Format) -> String {
        match format {
            Format::Csv => {
                let mut out = String::new();
                out.push_str(&format!("# poset-secretary {}\n", env!("CARGO_PKG_VERSION")));
                out.push_str(&format!("# command: {}\n", header["command"].as_str().unwrap_or("")));
                out.push_str(&format!("# flags: {}\n", header["flags"]));
                if let Some(seed) = header.get("seed") {
                    out.push_str(&format!("# seed: {seed}\n"));
                }
                for note in &self.notes {
                    out.push_str(&format!("# {note}\n"));
                }
                let mut w = csv_writer();
                w.write_record(&self.columns).expect("in-memory write");
                for row in &self.rows {
                    w.write_record(row.iter().map(Cell::csv)).expect("in-memory write");
                }
                out.push_str(&String::from_utf8(w.into_inner().expect("flush")).expect("utf8"));
                out
            }
            Format::Json => {
                let rows: Vec<Value> = self
                    .rows
                    .iter()
                    .map(|row| {
                        let obj: Map<String, Value> = self
                            .columns
                            .iter()
                            .zip(row)
                            .map(|(c, v)| (c.to_string(), v.json()))
                            .collect();
                        Value::Object(obj)
                    })
                    .collect();
                let doc = json!({ "header": header, "notes": self.notes, "rows": rows });
                serde_json::to_string_pretty(&doc).expect("serializable") + "\n"
            }
        }
    }
}

fn csv_writer() -> CsvWriter {
    CsvWriter { buf: Vec::new() }
}

/// Minimal RFC 4180 writer: quotes fields containing commas, quotes or newlines.
struct CsvWriter {
    buf: Vec<u8>,
}

impl CsvWriter {
    fn write_record<I, T>(&mut self, fields: I) -> std::io::Result<()>
    where
        I: IntoIterator<Item = T>,
        T: AsRef<str>,
    {
        for (i, f) in fields.into_iter().enumerate() {
            if i > 0 {
                self.buf.push(b',');
            }
            let f = f.as_ref();
            if f.contains([',', '"', '\n', '\r']) {
                write!(self.buf, "\"{}\"", f.replace('"', "\"\""))?;
            } else {
                self.buf.extend_from_slice(f.as_bytes());
            }
        }
        self.buf.push(b'\n');
        Ok(())
    }

    fn into_inner(self) -> std::io::Result<Vec<u8>> {
        Ok(self.buf)
    }
}

/// Parses `argv` (program name first), runs the subcommand and returns the
/// process exit code.
pub fn dispatch<I, T>(argv: I, out: &mut dyn Write, err: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(argv) {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { EXIT_USAGE } else { EXIT_OK };
            let rendered = e.render().to_string();
            if e.use_stderr() {
                let _ = err.write_all(rendered.as_bytes());
            } else {
                let _ = out.write_all(rendered.as_bytes());
            }
            return code;
        }
    };
    match run(&cli.command, out, err) {
        Ok(code) => code,
        Err(e) => {
            let _ = writeln!(err, "error: {e}");
            EXIT_USAGE
        }
    }
}

fn header(command: &Command, seed: Option<u64>) -> Value {
    let full = serde_json::to_value(command).expect("serializable");
    let (name, flags) = match full {
        Value::Object(mut map) if map.len() == 1 => {
            let (k, v) = map.iter_mut().next().map(|(k, v)| (k.clone(), v.take())).unwrap();
            (k, v)
        }
        other => ("unknown".to_string(), other),
    };
    let mut h = json!({ "command": kebab(&name), "flags": flags });
    if let Some(seed) = seed {
        h["seed"] = json!(seed);
    }
    h
}

fn kebab(name: &str) -> String {
    let mut out = String::new();
    for (i, c) in name.chars().enumerate() {
        if c.is_ascii_uppercase() {
            if i > 0 {
                out.push('-');
            }
            out.push(c.to_ascii_lowercase());
        } else {
            out.push(c);
        }
    }
    out
}

fn emit(text: &str, path: Option<&PathBuf>, out: &mut dyn Write) -> Result<()> {
    match path {
        Some(p) => fs::write(p, text).map_err(|e| Error::Param(format!("writing {}: {e}", p.display()))),
        None => out
            .write_all(text.as_bytes())
            .map_err(|e| Error::Param(format!("writing output: {e}"))),
    }
}

/// Loads `--poset`: an existing file in the text format, otherwise a family
/// descriptor.
fn load_poset(source: &str) -> Result<(Poset, String)> {
    let path = PathBuf::from(source);
    if path.is_file() {
        let text = fs::read_to_string(&path)
            .map_err(|e| Error::Param(format!("reading {source}: {e}")))?;
        let poset = parse_poset(&text)?;
        let name = path
            .file_name()
            .map(|f| f.to_string_lossy().into_owned())
            .unwrap_or_else(|| source.to_string());
        return Ok((poset, name));
    }
    match source.parse::<FamilySpec>() {
        Ok(spec) => Ok((make_family(&spec)?, spec.to_string())),
        Err(_) => Err(Error::Param(format!(
            "{source:?} is neither a readable poset file nor a family descriptor"
        ))),
    }
}

fn resolve_rule(args: &RuleArgs, poset: &Poset, p_override: Option<f64>) -> Result<StoppingRule> {
    match args.rule {
        RuleKind::TauK => {
            let k = args.k.unwrap_or_else(|| poset.maximal_elements().len());
            let p = p_override.unwrap_or_else(|| args.p.resolve(k.max(1)));
            crate::strategy::make_tau_k(poset.len(), k, p)
        }
        RuleKind::Threshold => {
            let r = args
                .r
                .ok_or_else(|| Error::Param("--r is required for the threshold rule".into()))?;
            crate::strategy::make_classical_threshold(poset.len(), r)
        }
    }
}

fn run(command: &Command, out: &mut dyn Write, err: &mut dyn Write) -> Result<i32> {
    match command {
        Command::Generate(a) => {
            let spec = family_from_args(a)?;
            let poset = make_family(&spec)?;
            let h = header(command, None);
            let comment = format!(
                "poset-secretary {} generate\nfamily: {spec}\nflags: {}",
                env!("CARGO_PKG_VERSION"),
                h["flags"]
            );
            emit(&write_poset(&poset, Some(&comment)), a.out.as_ref(), out)?;
            Ok(EXIT_OK)
        }
        Command::Simulate(a) => {
            let (poset, name) = load_poset(&a.poset)?;
            let info = PosetInfo::new(name, &poset);
            let rules: Vec<StoppingRule> = match (&a.p_grid, a.rule.rule) {
                (Some(grid), RuleKind::TauK) => grid
                    .values()
                    .into_iter()
                    .map(|p| resolve_rule(&a.rule, &poset, Some(p)))
                    .collect::<Result<_>>()?,
                (Some(_), RuleKind::Threshold) => {
                    return Err(Error::Param("--p-grid applies to tau_k only".into()))
                }
                (None, _) => vec![resolve_rule(&a.rule, &poset, None)?],
            };
            let mut table = Table::new(&[
                "poset", "n", "k_max", "width", "rule", "trials", "successes", "estimate",
                "ci_low", "ci_high", "seed",
            ]);
            for (i, rule) in rules.iter().enumerate() {
                let seed = if rules.len() == 1 { a.seed } else { split_seed(a.seed, i as u64) };
                let r = estimate_success_labeled(&poset, &info, rule, a.trials, seed, a.threads)?;
                table.push(vec![
                    s(&r.poset),
                    int(r.n),
                    int(r.k_max),
                    int(r.width),
                    s(&r.rule),
                    int(r.trials),
                    int(r.successes),
                    Cell::Num(r.estimate),
                    Cell::Num(r.ci_low),
                    Cell::Num(r.ci_high),
                    int(r.seed),
                ]);
            }
            let text = table.render(&header(command, Some(a.seed)), a.output.format);
            emit(&text, a.output.out.as_ref(), out)?;
            Ok(EXIT_OK)
        }
        Command::Exact(a) => {
            let (poset, name) = load_poset(&a.poset)?;
            let rule = resolve_rule(&a.rule, &poset, None)?;
            let result = match rule {
                StoppingRule::TauK { k, p } => exact_success_tau(&poset, k, p)?,
                _ => exact_success_rule(&poset, &rule)?,
            };
            let mut table = Table::new(&["poset", "n", "rule", "method", "value", "work"]);
            table.push(vec![
                s(name),
                int(poset.len()),
                s(&rule),
                s(serde_json::to_value(result.method).expect("enum").as_str().unwrap_or("")),
                Cell::Num(result.value),
                int(result.work),
            ]);
            emit(&table.render(&header(command, None), a.output.format), a.output.out.as_ref(), out)?;
            Ok(EXIT_OK)
        }
        Command::Optimal(a) => {
            let (poset, name) = load_poset(&a.poset)?;
            let solution = optimal_value(&poset)?;
            if let Some(path) = &a.table {
                let doc = serde_json::to_string(&solution.table()).expect("serializable");
                fs::write(path, doc)
                    .map_err(|e| Error::Param(format!("writing {}: {e}", path.display())))?;
            }
            let stops = solution.nodes.iter().filter(|n| n.stop()).count();
            let mut table = Table::new(&["poset", "n", "method", "value", "states", "stop_states"]);
            table.push(vec![
                s(name),
                int(poset.len()),
                s("backward-induction"),
                Cell::Num(solution.result.value),
                int(solution.nodes.len()),
                int(stops),
            ]);
            emit(&table.render(&header(command, None), a.output.format), a.output.out.as_ref(), out)?;
            Ok(EXIT_OK)
        }
        Command::Bounds(a) => {
            let ps: Vec<f64> = match (&a.p, &a.p_grid) {
                (Some(p), _) => vec![p.resolve(a.k.max(1))],
                (None, Some(g)) => g.values(),
                (None, None) => vec![p_star(a.k.max(1))],
            };
            let mut table = Table::new(&["k", "p", "formula", "value"]);
            if a.k == 0 {
                return Err(Error::Param("k must be at least 1".into()));
            }
            table.push(vec![int(a.k), Cell::Num(p_star(a.k)), s("p_star"), Cell::Num(p_star(a.k))]);
            for p in ps {
                let known = known_max_lower_bound(a.k, p)?;
                let v = v_series(a.k, p)?;
                let (nb, _) = nb_identity_sum(a.k, p)?;
                let rows = [
                    ("chain_lower_bound", chain_lower_bound(a.k, p)?),
                    ("known_max_lower_bound", known.bound),
                    ("conditional_win_bound", known.conditional),
                    ("max_rejection_factor", known.rejection_factor),
                    ("v_series_closed", v.closed_form),
                    ("v_series_truncated", v.truncated_series),
                    ("nb_identity_sum", nb),
                    ("nb_identity_limit", p.powi(-(a.k as i32))),
                ];
                for (formula, value) in rows {
                    table.push(vec![int(a.k), Cell::Num(p), s(formula), Cell::Num(value)]);
                }
            }
            emit(&table.render(&header(command, None), a.output.format), a.output.out.as_ref(), out)?;
            Ok(EXIT_OK)
        }
        Command::Ygame(a) => {
            let spec = YGameSpec::new(a.k, a.ell, a.m)?;
            let sol = y_game_solve(&spec)?;
            let table = if a.curve {
                let mut t = Table::new(&["u", "threshold_value"]);
                for u in 0..spec.m {
                    t.push(vec![int(u), Cell::Num(y_game_threshold_value(&spec, u)?)]);
                }
                t
            } else {
                let mut t = Table::new(&[
                    "k", "ell", "m", "n", "skip", "u_star", "u_star_over_m", "value",
                    "threshold_value",
                ]);
                t.push(vec![
                    int(a.k),
                    int(a.ell),
                    int(a.m),
                    int(spec.horizon()),
                    int(sol.skip),
                    int(sol.u_star),
                    Cell::Num(sol.u_star as f64 / spec.m as f64),
                    Cell::Num(sol.value),
                    Cell::Num(y_game_threshold_value(&spec, sol.u_star)?),
                ]);
                t
            };
            emit(&table.render(&header(command, None), a.output.format), a.output.out.as_ref(), out)?;
            Ok(EXIT_OK)
        }
        Command::VerifyTheorems(a) => {
            let rows = verify_theorems(a.max_n)?;
            let mut table = Table::new(&[
                "poset", "n", "k_max", "width", "check", "p", "value", "bound", "pass",
            ]);
            let failures = rows.iter().filter(|r| !r.pass).count();
            for r in &rows {
                table.push(vec![
                    s(&r.poset),
                    int(r.n),
                    int(r.k_max),
                    int(r.width),
                    s(r.check.name()),
                    Cell::Num(r.p),
                    Cell::Num(r.value),
                    Cell::Num(r.bound),
                    Cell::Bool(r.pass),
                ]);
            }
            table.notes.push(format!("checks: {}, failures: {failures}", rows.len()));
            emit(&table.render(&header(command, None), a.output.format), a.output.out.as_ref(), out)?;
            let _ = writeln!(err, "{} checks, {failures} failures", rows.len());
            Ok(if failures == 0 { EXIT_OK } else { EXIT_VIOLATION })
        }
        Command::ConjectureScan(a) => {
            let rows = conjecture_scan(a.max_n)?;
            let mut table = Table::new(&["poset", "n", "k_max", "width", "p", "value", "gap"]);
            for r in &rows {
                table.push(vec![
                    s(&r.poset),
                    int(r.n),
                    int(r.k_max),
                    int(r.width),
                    Cell::Num(r.p),
                    Cell::Num(r.value),
                    Cell::Num(r.gap),
                ]);
            }
            if let Some(m) = min_gap(&rows) {
                table
                    .notes
                    .push(format!("min gap {} on {} (k = {})", fmt_num(m.gap), m.poset, m.k_max));
            }
            emit(&table.render(&header(command, None), a.output.format), a.output.out.as_ref(), out)?;
            Ok(EXIT_OK)
        }
    }
}

fn family_from_args(a: &GenerateArgs) -> Result<FamilySpec> {
    let need = |v: Option<usize>, flag: &str| {
        v.ok_or_else(|| Error::Spec(format!("--{flag} is required for this family")))
    };
    let spec = match a.family {
        FamilyKind::DisjointChains => FamilySpec::DisjointChains {
            k: need(a.k, "k")?,
            x: need(a.x, "x")?,
        },
        FamilyKind::Linear => FamilySpec::Linear { n: need(a.n, "n")? },
        FamilyKind::Antichain => FamilySpec::Antichain { n: need(a.n, "n")? },
        FamilyKind::BinaryTree => FamilySpec::BinaryTree { depth: need(a.depth, "depth")? },
        FamilyKind::Twins => FamilySpec::Twins { levels: need(a.levels, "levels")? },
        FamilyKind::Random => FamilySpec::Random {
            n: need(a.n, "n")?,
            density: a
                .density
                .ok_or_else(|| Error::Spec("--density is required for this family".into()))?,
            seed: a.seed,
        },
    };
    spec.validate()?;
    Ok(spec)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn run_args(args: &[&str]) -> (i32, String, String) {
        let mut out = Vec::new();
        let mut err = Vec::new();
        let argv = std::iter::once("poset-secretary").chain(args.iter().copied());
        let code = dispatch(argv, &mut out, &mut err);
        (code, String::from_utf8(out).unwrap(), String::from_utf8(err).unwrap())
    }

    #[test]
    fn grid_values() {
        let g: Grid = "0.1:0.9:0.1".parse().unwrap();
        assert_eq!(g.values().len(), 9);
        let g: Grid = "0.01:0.99:0.01".parse().unwrap();
        assert_eq!(g.values().len(), 99);
        assert!("0.5:0.1:0.1".parse::<Grid>().is_err());
        assert!("1:2".parse::<Grid>().is_err());
    }

    #[test]
    fn p_choice() {
        assert_eq!("auto".parse::<PChoice>().unwrap().resolve(2), 0.5);
        let u = "auto-universal".parse::<PChoice>().unwrap().resolve(2);
        assert!((u - (-0.5f64).exp()).abs() < 1e-15);
        assert!("abc".parse::<PChoice>().is_err());
    }

    #[test]
    fn usage_error_exit_code() {
        let (code, _, err) = run_args(&["bounds", "--bogus"]);
        assert_eq!(code, EXIT_USAGE);
        assert!(!err.is_empty());
        let (code, _, _) = run_args(&["nonsense"]);
        assert_eq!(code, EXIT_USAGE);
    }

    #[test]
    fn header_records_flags_and_seed() {
        let (code, out, _) = run_args(&[
            "simulate", "--poset", "linear(n=3)", "--rule", "threshold", "--r", "2", "--trials",
            "100", "--seed", "5",
        ]);
        assert_eq!(code, 0);
        assert!(out.contains("# command: simulate"));
        assert!(out.contains("# seed: 5"));
        assert!(out.contains("\"trials\":100"));
    }

    #[test]
    fn kebab_case_names() {
        assert_eq!(kebab("VerifyTheorems"), "verify-theorems");
        assert_eq!(kebab("Ygame"), "ygame");
    }
}
