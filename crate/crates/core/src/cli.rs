//! The `qstr` command line.
//!
//! Exit codes: 0 for success (and a consistent network, or a set that
//! passes `check`), 1 for an inconsistent network or a failed check, 2 for
//! usage and data errors.

use std::ffi::OsString;
use std::io::Write;
use std::path::{Path, PathBuf};
use std::sync::Arc;

use clap::{Args, Parser, Subcommand, ValueEnum};

use crate::calculi;
use crate::calculus::Calculus;
use crate::error::{Error, Result};
use crate::network::{
    enforce_pc, extract_scenario_distributive, random_qcn, realize_solution, solve_backtrack, Qcn, Scenario,
    SolveOutcome,
};
use crate::relset::RelationSet;
use crate::sparse::{
    enforce_ppc, run_bench, solve_elimination, triangulate, write_bench_csv, BenchConfig, ConstraintGraph,
    EliminationOrder, Heuristic,
};
use crate::subalgebra::{
    closure, closure_cap_from_env, enumerate_maximal_distributive, is_distributive, is_helly, named_subalgebra,
};

pub const EXIT_OK: i32 = 0;
pub const EXIT_NEGATIVE: i32 = 1;
pub const EXIT_ERROR: i32 = 2;

#[derive(Debug, Parser)]
#[command(name = "qstr", version, about = "Qualitative constraint reasoning")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Decide consistency of a network file.
    Solve(SolveArgs),
    /// Print the closure of a set of relations.
    Closure(ClosureArgs),
    /// Enumerate the maximal distributive subalgebras of a calculus.
    Maximal(MaximalArgs),
    /// Test a relation set for distributivity or the Helly property.
    Check(CheckArgs),
    /// Generate a random network.
    Gen(GenArgs),
    /// Compare PC, PPC and variable elimination on random networks.
    Bench(BenchArgs),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Method {
    Pc,
    Ppc,
    Ve,
    Backtrack,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum HeuristicArg {
    MinFill,
    MinDegree,
}

impl From<HeuristicArg> for Heuristic {
    fn from(h: HeuristicArg) -> Self {
        match h {
            HeuristicArg::MinFill => Heuristic::MinFill,
            HeuristicArg::MinDegree => Heuristic::MinDegree,
        }
    }
}

#[derive(Debug, Args)]
pub struct SolveArgs {
    pub file: PathBuf,
    #[arg(long, value_enum, default_value = "pc")]
    pub method: Method,
    /// Print a scenario when consistent.
    #[arg(long)]
    pub scenario: bool,
    /// Print coordinates for a scenario (PA, IA, CRA, RA).
    #[arg(long)]
    pub realize: bool,
    /// Subalgebra the entries belong to; enables direct scenario extraction.
    #[arg(long)]
    pub subalgebra: Option<String>,
    #[arg(long, value_enum, default_value = "min-fill")]
    pub heuristic: HeuristicArg,
}

#[derive(Debug, Args)]
pub struct ClosureArgs {
    #[arg(long)]
    pub calculus: String,
    /// One relation per line; omitted means the atoms alone.
    #[arg(long)]
    pub seed_file: Option<PathBuf>,
    /// Overrides QSTR_CLOSURE_CAP.
    #[arg(long)]
    pub cap: Option<usize>,
}

#[derive(Debug, Args)]
pub struct MaximalArgs {
    #[arg(long)]
    pub calculus: String,
    /// Directory for the `<calculus>_max<k>.txt` listings.
    #[arg(long, default_value = ".")]
    pub out_dir: PathBuf,
}

#[derive(Debug, Args)]
pub struct CheckArgs {
    #[arg(long, conflicts_with = "helly", required_unless_present = "helly")]
    pub distributive: bool,
    #[arg(long)]
    pub helly: bool,
    /// Defaults to the file's `calculus:` line.
    #[arg(long)]
    pub calculus: Option<String>,
    pub set_file: PathBuf,
}

#[derive(Debug, Args)]
pub struct GenArgs {
    #[arg(long)]
    pub calculus: String,
    #[arg(long)]
    pub n: usize,
    #[arg(long)]
    pub density: f64,
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
    /// Label pool; defaults to ALL, or BHAT for calculi with more than 13
    /// atoms.
    #[arg(long)]
    pub pool: Option<String>,
    #[arg(long)]
    pub out: Option<PathBuf>,
}

#[derive(Debug, Args)]
pub struct BenchArgs {
    #[arg(long)]
    pub calculus: String,
    #[arg(long)]
    pub pool: String,
    #[arg(long = "n", value_delimiter = ',', required = true)]
    pub sizes: Vec<usize>,
    #[arg(long = "density", value_delimiter = ',', required = true)]
    pub densities: Vec<f64>,
    #[arg(long, default_value_t = 10)]
    pub reps: usize,
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
    #[arg(long, value_enum, default_value = "min-fill")]
    pub heuristic: HeuristicArg,
    /// CSV destination; stdout when omitted.
    #[arg(long)]
    pub out: Option<PathBuf>,
}

/// Parses `args` (including the program name) and runs the command.
pub fn run<I, T>(args: I, out: &mut dyn Write, err: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(c) => c,
        Err(e) => {
            let code = if e.use_stderr() { EXIT_ERROR } else { EXIT_OK };
            let text = e.render().to_string();
            let _ = if code == EXIT_OK { out.write_all(text.as_bytes()) } else { err.write_all(text.as_bytes()) };
            return code;
        }
    };
    match dispatch(&cli.command, out) {
        Ok(code) => code,
        // reader went away, e.g. `qstr solve ... | head`
        Err(Error::Io(e)) if e.kind() == std::io::ErrorKind::BrokenPipe => EXIT_OK,
        Err(e) => {
            let _ = writeln!(err, "error: {e}");
            EXIT_ERROR
        }
    }
}

fn dispatch(cmd: &Command, out: &mut dyn Write) -> Result<i32> {
    match cmd {
        Command::Solve(a) => cmd_solve(a, out),
        Command::Closure(a) => cmd_closure(a, out),
        Command::Maximal(a) => cmd_maximal(a, out),
        Command::Check(a) => cmd_check(a, out),
        Command::Gen(a) => cmd_gen(a, out),
        Command::Bench(a) => cmd_bench(a, out),
    }
}

fn read(path: &Path) -> Result<String> {
    std::fs::read_to_string(path)
        .map_err(|e| Error::Io(std::io::Error::new(e.kind(), format!("{}: {e}", path.display()))))
}

pub fn cmd_solve(a: &SolveArgs, out: &mut dyn Write) -> Result<i32> {
    let q = Qcn::parse(&read(&a.file)?)?;
    let calc = q.calculus().clone();
    if a.realize && !matches!(calc.name(), "PA" | "IA" | "CRA" | "RA") {
        return Err(Error::UnsupportedCalculus(calc.name().to_string()));
    }
    let pool = a.subalgebra.as_deref().map(|s| named_subalgebra(&calc, s)).transpose()?;
    let mut scenario: Option<Scenario> = None;
    let outcome: SolveOutcome = match a.method {
        Method::Pc => enforce_pc(&q),
        Method::Ppc => enforce_ppc(&q, &triangulate(&ConstraintGraph::of_network(&q), a.heuristic.into()))?,
        Method::Backtrack => {
            let o = solve_backtrack(&q);
            scenario = o.scenario.clone();
            o
        }
        Method::Ve => {
            let order = EliminationOrder::MinDegree;
            if (a.scenario || a.realize) && pool.as_ref().is_some_and(|p| q.entries_in(p)) {
                let (e, s) = solve_elimination(&q, &order)?;
                scenario = s;
                e.outcome
            } else {
                crate::sparse::eliminate_variables(&q, &order)?.outcome
            }
        }
    };
    writeln!(out, "verdict: {}", outcome.verdict)?;
    writeln!(
        out,
        "refinements: {}  queue: {}  time: {:.3} ms",
        outcome.stats.refinements,
        outcome.stats.queue_ops,
        outcome.stats.wall.as_secs_f64() * 1e3
    )?;
    if !outcome.is_consistent() {
        return Ok(EXIT_NEGATIVE);
    }
    if a.scenario || a.realize {
        let s = match scenario {
            Some(s) => s,
            None => scenario_for(&q, pool.as_ref())?,
        };
        if a.scenario {
            writeln!(out, "scenario:")?;
            write!(out, "{}", s.as_qcn().to_text())?;
        }
        if a.realize {
            writeln!(out, "realization:")?;
            write!(out, "{}", realize_solution(&s)?.to_text())?;
        }
    }
    Ok(EXIT_OK)
}

/// Direct extraction when every PC-refined entry lies in `pool`, search
/// otherwise.
fn scenario_for(q: &Qcn, pool: Option<&RelationSet>) -> Result<Scenario> {
    let pc = enforce_pc(q);
    if let (Some(r), Some(p)) = (&pc.refined, pool) {
        if r.entries_in(p) {
            return extract_scenario_distributive(r, Some(p));
        }
    }
    solve_backtrack(q)
        .scenario
        .ok_or_else(|| Error::ConstructionFailure("path consistency and search disagree".into()))
}

pub fn cmd_closure(a: &ClosureArgs, out: &mut dyn Write) -> Result<i32> {
    let calc = calculi::by_name(&a.calculus)?;
    let seed = match &a.seed_file {
        Some(p) => RelationSet::parse(&calc, &read(p)?)?,
        None => RelationSet::new(),
    };
    let cap = match a.cap {
        Some(c) => c,
        None => closure_cap_from_env()?,
    };
    let set = closure(&calc, &seed, Some(cap))?;
    write!(out, "{}", set.to_canonical(&calc))?;
    Ok(EXIT_OK)
}

pub fn cmd_maximal(a: &MaximalArgs, out: &mut dyn Write) -> Result<i32> {
    let calc = calculi::by_name(&a.calculus)?;
    let maximal = enumerate_maximal_distributive(&calc)?;
    std::fs::create_dir_all(&a.out_dir)?;
    let mut sizes = Vec::new();
    for (k, m) in maximal.iter().enumerate() {
        let path = a.out_dir.join(format!("{}_max{k}.txt", calc.name().to_ascii_lowercase()));
        std::fs::write(&path, m.to_canonical(&calc))?;
        writeln!(out, "{}: {} relations", path.display(), m.len())?;
        sizes.push(m.len().to_string());
    }
    writeln!(out, "count: {}", maximal.len())?;
    writeln!(out, "sizes: {}", sizes.join(" "))?;
    Ok(EXIT_OK)
}

/// The calculus named by the first `calculus:` line, if any.
fn header_calculus(text: &str) -> Option<&str> {
    text.lines().map(|l| l.split('#').next().unwrap_or("").trim()).find_map(|l| {
        l.get(..9)
            .filter(|p| p.eq_ignore_ascii_case("calculus:"))
            .map(|_| l[9..].trim())
    })
}

fn calculus_for(flag: Option<&str>, text: &str) -> Result<Arc<Calculus>> {
    match flag.or_else(|| header_calculus(text)) {
        Some(name) => calculi::by_name(name),
        None => Err(Error::InvalidArgument("no --calculus given and no `calculus:` line in the file".into())),
    }
}

pub fn cmd_check(a: &CheckArgs, out: &mut dyn Write) -> Result<i32> {
    let text = read(&a.set_file)?;
    let calc = calculus_for(a.calculus.as_deref(), &text)?;
    let set = RelationSet::parse(&calc, &text)?;
    let fmt = |r: &crate::Relation| format!("{{{}}}", calc.format_relation(r));
    if a.distributive {
        let d = is_distributive(&calc, &set)?;
        writeln!(out, "distributive: {}", if d.holds { "yes" } else { "no" })?;
        if let Some(w) = d.witness {
            writeln!(out, "witness: {}", w.describe(&calc))?;
        }
        Ok(if d.holds { EXIT_OK } else { EXIT_NEGATIVE })
    } else {
        let h = is_helly(&set);
        writeln!(out, "helly: {}", if h.holds { "yes" } else { "no" })?;
        if let Some([x, y, z]) = h.witness {
            writeln!(out, "witness: {} {} {}", fmt(&x), fmt(&y), fmt(&z))?;
        }
        Ok(if h.holds { EXIT_OK } else { EXIT_NEGATIVE })
    }
}

pub fn cmd_gen(a: &GenArgs, out: &mut dyn Write) -> Result<i32> {
    let calc = calculi::by_name(&a.calculus)?;
    let pool_name = a
        .pool
        .clone()
        .unwrap_or_else(|| if calc.atom_count() <= 13 { "ALL" } else { "BHAT" }.to_string());
    let pool = named_subalgebra(&calc, &pool_name)?;
    let q = random_qcn(&calc, a.n, a.density, &pool, a.seed)?;
    let text = format!(
        "# generated: n={} density={} pool={} seed={}\n{}",
        a.n,
        a.density,
        pool_name,
        a.seed,
        q.to_text()
    );
    match &a.out {
        Some(p) => std::fs::write(p, text)?,
        None => out.write_all(text.as_bytes())?,
    }
    Ok(EXIT_OK)
}

pub fn cmd_bench(a: &BenchArgs, out: &mut dyn Write) -> Result<i32> {
    let cfg = BenchConfig {
        calculus: a.calculus.clone(),
        pool: a.pool.clone(),
        sizes: a.sizes.clone(),
        densities: a.densities.clone(),
        repetitions: a.reps,
        seed: a.seed,
        heuristic: a.heuristic.into(),
    };
    let rows = run_bench(&cfg)?;
    match &a.out {
        Some(p) => {
            write_bench_csv(&rows, std::fs::File::create(p)?)?;
            writeln!(out, "{} rows written to {}; all verdicts agree", rows.len(), p.display())?;
        }
        None => write_bench_csv(&rows, out)?,
    }
    Ok(EXIT_OK)
}
