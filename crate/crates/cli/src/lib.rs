//! Argument handling and output formatting for the `kcalc` binary.

use std::io::Write;
use std::path::PathBuf;

use clap::{Args, Parser, Subcommand};
use serde::{Deserialize, Serialize};

use kcalc::algebra::{infer_attributes, parse_definitions, AlgExpr, AttributeReport, Definitions};
use kcalc::group_g::{decide_membership_via_presentation, OmniscientOracle, Witness};
use kcalc::ktheory::{
    k_groups_concrete, k_groups_symbolic, paper_suite, suite_from_definitions, torsion_report, AtomMode, PAPER_DEFINITIONS,
};
use kcalc::stagewise::{monotonicity_report, p_limit, p_value, t_sequence, MockNormOracle, StarPolynomial};
use kcalc::{smith_normal_form, AbelianGroup, CESet, Error, IntMatrix};

#[derive(Parser, Debug)]
#[command(name = "kcalc", version, about = "K-groups, word problems and stage tables for c.e. constructions")]
pub struct Cli {
    /// Line-delimited JSON instead of text.
    #[arg(long, global = true)]
    json: bool,
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// K-groups and attributes of one expression.
    Eval(EvalArgs),
    /// Decide `n in R` from the word problem of G.
    Reduce(ReduceArgs),
    /// Table of special points p_{k,s} for one index.
    Stages(StagesArgs),
    /// Norm sequence t_s against a mock oracle, with increases marked.
    Tseq(TseqArgs),
    /// Invariant factors of an integer matrix.
    Snf(SnfArgs),
    /// K-groups of B, C, A, D, B', A', E.
    PaperSuite(SuiteArgs),
}

#[derive(Args, Debug)]
struct SetArg {
    /// `n@stage` pairs separated by commas, `none`, or `machine`.
    #[arg(long = "R", value_name = "SPEC|machine", default_value = "none")]
    r: String,
}

#[derive(Args, Debug)]
struct EvalArgs {
    /// Definitions file (the shipped one when omitted).
    #[arg(short = 'f', value_name = "FILE")]
    file: Option<PathBuf>,
    /// Binding to evaluate (the file's final expression when omitted).
    #[arg(long, value_name = "IDENT")]
    name: Option<String>,
    #[command(flatten)]
    set: SetArg,
    #[arg(long, value_name = "N", default_value_t = 5)]
    cutoff: u64,
    #[arg(long, value_name = "C|Zero", default_value = "C")]
    atoms: AtomMode,
    /// Also print the conditional family description.
    #[arg(long)]
    symbolic: bool,
    /// Also compare torsion primes with R.
    #[arg(long)]
    torsion: bool,
}

#[derive(Args, Debug)]
struct ReduceArgs {
    #[command(flatten)]
    set: SetArg,
    #[arg(long, value_name = "N")]
    n: u64,
}

#[derive(Args, Debug)]
struct StagesArgs {
    #[command(flatten)]
    set: SetArg,
    #[arg(long, value_name = "N")]
    n: u64,
    #[arg(long = "k-max", value_name = "K", default_value_t = 10)]
    k_max: u64,
    #[arg(long = "s-max", value_name = "S", default_value_t = 20)]
    s_max: u64,
}

#[derive(Args, Debug)]
struct TseqArgs {
    #[command(flatten)]
    set: SetArg,
    #[arg(long, value_name = "N")]
    n: u64,
    /// Rational *-polynomial, e.g. `x0 + 2` or `(1+i)x0 * x1^*`.
    #[arg(long, value_name = "POLY")]
    rho: String,
    /// `LIMIT:SCALE:RATIO` for r_s = LIMIT + SCALE * RATIO^s.
    #[arg(long, value_name = "L:S:R", default_value = "2:1:1/2")]
    oracle: String,
    #[arg(long, value_name = "H", default_value_t = 20)]
    horizon: u64,
}

#[derive(Args, Debug)]
struct SnfArgs {
    /// Row-major entries, rows separated by `;`, e.g. "2 0; 0 3".
    #[arg(long, value_name = "STR")]
    matrix: String,
}

#[derive(Args, Debug)]
struct SuiteArgs {
    #[arg(short = 'f', value_name = "FILE")]
    file: Option<PathBuf>,
    #[command(flatten)]
    set: SetArg,
    #[arg(long, value_name = "N", default_value_t = 5)]
    cutoff: u64,
    #[arg(long, value_name = "C|Zero", default_value = "Zero")]
    atoms: AtomMode,
}

/// One algebra's K-groups, as emitted by `eval --json` and `paper-suite --json`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct KRecord {
    pub name: String,
    pub k0: AbelianGroup,
    pub k1: AbelianGroup,
    pub attributes: AttributeReport,
    pub mode: AtomMode,
    pub cutoff: u64,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "lowercase")]
pub enum WitnessRecord {
    Stage { stage: u64 },
    Element { index: u64, element: String, order: u64 },
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ReduceRecord {
    pub n: u64,
    pub member: bool,
    pub witness: WitnessRecord,
    pub rounds: u64,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct StageRow {
    pub n: u64,
    pub k: u64,
    /// One symbol per stage `s = 0..=s_max`: `·`, `q`, `0` or `1`.
    pub row: String,
    /// Eventual value, or `None` for the machine backend.
    pub limit: Option<String>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct TRecord {
    pub s: u64,
    /// Exact value, e.g. `17/8` or `sqrt(2)`.
    pub t: String,
    /// `t_s^2` as a rational.
    pub t_squared: String,
    pub increase: bool,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct SnfRecord {
    pub invariant_factors: Vec<String>,
}

enum Failure {
    Usage(String),
    Domain(String),
}

impl From<Error> for Failure {
    fn from(e: Error) -> Failure {
        Failure::Domain(e.to_string())
    }
}

impl From<std::io::Error> for Failure {
    fn from(e: std::io::Error) -> Failure {
        Failure::Domain(format!("i/o error: {e}"))
    }
}

/// Runs one invocation; returns the process exit code (0 ok, 1 domain error, 2 usage error).
pub fn run<I, T>(args: I, out: &mut impl Write, err: &mut impl Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { 2 } else { 0 };
            let text = e.render().to_string();
            let _ = if code == 0 { write!(out, "{text}") } else { write!(err, "{text}") };
            return code;
        }
    };
    match dispatch(&cli, out) {
        Ok(()) => 0,
        Err(Failure::Usage(msg)) => {
            let _ = writeln!(err, "error: {msg}");
            2
        }
        Err(Failure::Domain(msg)) => {
            let _ = writeln!(err, "error: {msg}");
            1
        }
    }
}

fn parse_set(arg: &SetArg) -> Result<CESet, Failure> {
    arg.r.parse().map_err(|e: Error| Failure::Usage(format!("--R: {e}")))
}

fn load_definitions(file: &Option<PathBuf>) -> Result<Definitions, Failure> {
    let text = match file {
        Some(path) => std::fs::read_to_string(path)
            .map_err(|e| Failure::Usage(format!("-f {}: {e}", path.display())))?,
        None => PAPER_DEFINITIONS.to_string(),
    };
    parse_definitions(&text).map_err(|e| Failure::Domain(e.to_string()))
}

fn json_line(out: &mut impl Write, value: &impl Serialize) -> Result<(), Failure> {
    let line = serde_json::to_string(value).map_err(|e| Failure::Domain(e.to_string()))?;
    writeln!(out, "{line}")?;
    Ok(())
}

fn dispatch(cli: &Cli, out: &mut impl Write) -> Result<(), Failure> {
    match &cli.command {
        Command::Eval(a) => eval(a, cli.json, out),
        Command::Reduce(a) => reduce(a, cli.json, out),
        Command::Stages(a) => stages(a, cli.json, out),
        Command::Tseq(a) => tseq(a, cli.json, out),
        Command::Snf(a) => snf(a, cli.json, out),
        Command::PaperSuite(a) => suite(a, cli.json, out),
    }
}

fn eval(a: &EvalArgs, json: bool, out: &mut impl Write) -> Result<(), Failure> {
    let r = parse_set(&a.set)?;
    let defs = load_definitions(&a.file)?;
    let (name, e): (String, &AlgExpr) = match &a.name {
        Some(n) => (n.clone(), defs.get(n).ok_or_else(|| Failure::Usage(format!("--name: no binding named `{n}`")))?),
        None => ("main".to_string(), &defs.main),
    };
    let pair = k_groups_concrete(e, &r, a.cutoff, a.atoms)?;
    let attributes = infer_attributes(e);
    if json {
        let record = KRecord { name, k0: pair.k0, k1: pair.k1, attributes, mode: a.atoms, cutoff: a.cutoff };
        return json_line(out, &record);
    }
    writeln!(out, "K₀ = {}", pair.k0)?;
    writeln!(out, "K₁ = {}", pair.k1)?;
    writeln!(out, "{attributes}")?;
    if a.symbolic {
        writeln!(out, "symbolic: {}", k_groups_symbolic(e, a.atoms)?)?;
    }
    if a.torsion {
        writeln!(out, "torsion: {}", torsion_report(e, &r, a.cutoff, a.atoms)?)?;
    }
    Ok(())
}

fn reduce(a: &ReduceArgs, json: bool, out: &mut impl Write) -> Result<(), Failure> {
    let r = parse_set(&a.set)?;
    let oracle = OmniscientOracle::new(r.clone())?;
    let verdict = decide_membership_via_presentation(a.n, &oracle, &r)?;
    let witness = match &verdict.witness {
        Witness::Stage(s) => WitnessRecord::Stage { stage: *s },
        Witness::Element { index, element, order } => {
            WitnessRecord::Element { index: *index, element: element.to_string(), order: *order }
        }
    };
    if json {
        return json_line(out, &ReduceRecord { n: a.n, member: verdict.member, witness, rounds: verdict.rounds });
    }
    let rel = if verdict.member { "∈" } else { "∉" };
    match witness {
        WitnessRecord::Stage { stage } => writeln!(out, "{} {rel} R; witness: stage {stage}", a.n)?,
        WitnessRecord::Element { order, .. } => writeln!(out, "{} {rel} R; witness: element of order {order}", a.n)?,
    }
    Ok(())
}

fn stages(a: &StagesArgs, json: bool, out: &mut impl Write) -> Result<(), Failure> {
    let r = parse_set(&a.set)?;
    let rows: Vec<StageRow> = (0..=a.k_max)
        .map(|k| StageRow {
            n: a.n,
            k,
            row: (0..=a.s_max).map(|s| p_value(a.n, k, s, &r).symbol()).collect(),
            limit: p_limit(a.n, k, &r).ok().map(|v| v.to_string()),
        })
        .collect();
    if json {
        for row in &rows {
            json_line(out, row)?;
        }
        return Ok(());
    }
    let width = a.k_max.to_string().len().max(1);
    let header: String = (0..=a.s_max).map(|s| char::from(b'0' + (s % 10) as u8)).collect();
    writeln!(out, "p_{{k,s}} for n = {}, R = {r}", a.n)?;
    writeln!(out, "{:>width$}  {header}", "k\\s", width = width.max(3))?;
    for row in rows {
        let limit = row.limit.map(|l| format!("  -> {l}")).unwrap_or_default();
        writeln!(out, "{:>width$}  {}{limit}", row.k, row.row, width = width.max(3))?;
    }
    Ok(())
}

fn tseq(a: &TseqArgs, json: bool, out: &mut impl Write) -> Result<(), Failure> {
    let r = parse_set(&a.set)?;
    let rho: StarPolynomial = a.rho.parse().map_err(|e: Error| Failure::Usage(format!("--rho: {e}")))?;
    let oracle: MockNormOracle = a.oracle.parse().map_err(|e: Error| Failure::Usage(format!("--oracle: {e}")))?;
    let seq = t_sequence(&rho, &oracle, a.n, &r, a.horizon)?;
    let increases = monotonicity_report(&rho, &oracle, a.n, &r, a.horizon)?;
    let records: Vec<TRecord> = seq
        .iter()
        .map(|(s, t)| TRecord {
            s: *s,
            t: t.to_string(),
            t_squared: t.square().to_string(),
            increase: increases.contains(s),
        })
        .collect();
    if json {
        for rec in &records {
            json_line(out, rec)?;
        }
        return Ok(());
    }
    writeln!(out, "t_s for rho = {}, n = {}, R = {r}, r_s = {oracle}", a.rho, a.n)?;
    for (rec, (_, t)) in records.iter().zip(&seq) {
        let mark = if rec.increase { "  <- increase" } else { "" };
        writeln!(out, "{:>4}  {:<20} {:.6}{mark}", rec.s, rec.t, t.to_f64())?;
    }
    if increases.is_empty() {
        writeln!(out, "nonincreasing on the whole range")?;
    } else {
        let list: Vec<String> = increases.iter().map(u64::to_string).collect();
        writeln!(out, "increases at s = {}", list.join(", "))?;
    }
    Ok(())
}

fn snf(a: &SnfArgs, json: bool, out: &mut impl Write) -> Result<(), Failure> {
    let m: IntMatrix = a.matrix.parse().map_err(|e: Error| Failure::Usage(format!("--matrix: {e}")))?;
    let d: Vec<String> = smith_normal_form(&m).iter().map(|x| x.to_string()).collect();
    if json {
        return json_line(out, &SnfRecord { invariant_factors: d });
    }
    writeln!(out, "{}", d.join(" "))?;
    Ok(())
}

fn suite(a: &SuiteArgs, json: bool, out: &mut impl Write) -> Result<(), Failure> {
    let r = parse_set(&a.set)?;
    let rows = match &a.file {
        Some(_) => suite_from_definitions(&load_definitions(&a.file)?, &r, a.cutoff, a.atoms)?,
        None => paper_suite(&r, a.cutoff, a.atoms)?,
    };
    if !json {
        writeln!(out, "R = {r}, cutoff = {}, atoms = {}", a.cutoff, a.atoms)?;
    }
    for row in rows {
        if json {
            let record = KRecord {
                name: row.label,
                k0: row.pair.k0,
                k1: row.pair.k1,
                attributes: row.attributes,
                mode: a.atoms,
                cutoff: a.cutoff,
            };
            json_line(out, &record)?;
        } else {
            writeln!(out, "{:<3} K₀ = {}", row.label, row.pair.k0)?;
            writeln!(out, "    K₁ = {}", row.pair.k1)?;
            writeln!(out, "    {}", row.attributes)?;
        }
    }
    Ok(())
}
