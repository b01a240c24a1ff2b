//! Command-line front end. JSON goes to standard output, a one-line human
//! summary to standard error.
//!
//! Exit codes: 0 pass, 1 verified failure, 2 usage or parse error,
//! 3 numerical non-convergence, 4 resource guard.

use std::collections::BTreeMap;
use std::ffi::OsString;
use std::fs;
use std::path::{Path, PathBuf};

use clap::{Args, Parser, Subcommand};
use serde::Serialize;
use serde_json::json;

use crate::berge::{enumerate_berge_with, is_berge, write_catalog, BergeCatalog};
use crate::error::{Error, Result};
use crate::hgraph::{
    construct_graph, expansion, parse_graph, parse_uhg, suspension, write_graph, write_uhg, GraphFamily,
};
use crate::spectral::{p_spectral_radius, SolverOptions, AUTO};
use crate::verify::{Outcome, ScenarioParams, ScenarioRegistry};

pub const EXIT_PASS: i32 = 0;
pub const EXIT_FAIL: i32 = 1;
pub const EXIT_USAGE: i32 = 2;
pub const EXIT_NONCONVERGED: i32 = 3;
pub const EXIT_GUARD: i32 = 4;

#[derive(Parser, Debug)]
#[command(
    name = "berge-spectral",
    version,
    about = "p-spectral radii of uniform hypergraphs and Berge extremal checks"
)]
pub struct Cli {
    #[command(flatten)]
    pub common: Common,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Args, Debug, Clone)]
pub struct Common {
    /// Seed for every random choice.
    #[arg(long, global = true, default_value_t = 0)]
    pub seed: u64,
    /// Eigen-residual tolerance for convergence.
    #[arg(long, global = true, default_value_t = 1e-10)]
    pub tol: f64,
    /// Multistart count per connected component.
    #[arg(long, global = true, default_value_t = 64)]
    pub restarts: usize,
    /// Values closer than this count as ties.
    #[arg(long, global = true, default_value_t = 1e-7)]
    pub tie_eps: f64,
    #[arg(long, global = true, default_value_t = 100_000)]
    pub max_iters: usize,
    /// Ascent strategy name, or `auto`.
    #[arg(long, global = true, default_value = AUTO)]
    pub method: String,
    /// Compact single-line JSON instead of pretty-printed.
    #[arg(long, global = true)]
    pub json: bool,
    /// Worker threads; output does not depend on it.
    #[arg(long, global = true)]
    pub jobs: Option<usize>,
}

impl Common {
    pub fn solver_options(&self) -> SolverOptions {
        SolverOptions {
            tol: self.tol,
            restarts: self.restarts,
            max_iters: self.max_iters,
            seed: self.seed,
            tie_eps: self.tie_eps,
            method: self.method.clone(),
        }
    }
}

#[derive(Subcommand, Debug)]
pub enum Command {
    /// p-spectral radius of a `.uhg` hypergraph or `.g` graph file.
    Lambda {
        file: PathBuf,
        #[arg(long)]
        p: f64,
    },
    /// Berge catalog of a named base graph, optionally written to disk.
    Enumerate {
        #[arg(long)]
        family: String,
        #[arg(long)]
        k: usize,
        #[arg(long, default_value_t = 3)]
        r: usize,
        #[arg(long, default_value_t = 1)]
        extra: usize,
        #[arg(long)]
        out: Option<PathBuf>,
        /// Enumerate even beyond the raw-space guard.
        #[arg(long)]
        force: bool,
        /// Rewrite the golden count after the consistency gate passes.
        #[arg(long)]
        update_golden: bool,
        #[arg(long, default_value = "golden/counts.json")]
        golden: PathBuf,
    },
    /// Run a named verification scenario.
    Verify {
        scenario: String,
        #[arg(long)]
        k: Option<usize>,
        #[arg(long)]
        p: Option<f64>,
        #[arg(long, value_delimiter = ',')]
        p_grid: Option<Vec<f64>>,
        #[arg(long)]
        samples: Option<usize>,
        #[arg(long)]
        family: Option<String>,
        /// Report `wall_ms` as 0 so repeated runs compare byte for byte.
        #[arg(long)]
        no_timing: bool,
    },
    /// Print a named graph, optionally suspended or expanded.
    Construct {
        family: String,
        params: Vec<usize>,
        /// Add this many vertices to every edge.
        #[arg(long, conflicts_with = "expand")]
        suspend: Option<usize>,
        /// Expand to this rank with private new vertices.
        #[arg(long)]
        expand: Option<usize>,
        /// Print a plain graph as a rank-2 `.uhg`.
        #[arg(long)]
        uhg: bool,
    },
    /// List the registered scenarios.
    Scenarios,
}

/// Parses `args` (program name first), runs the command, and returns the
/// exit code.
pub fn run_from<I, T>(args: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { EXIT_USAGE } else { EXIT_PASS };
            let _ = e.print();
            return code;
        }
    };
    let jobs = cli.common.jobs;
    let work = move || match execute(&cli) {
        Ok(code) => code,
        Err(e) => {
            eprintln!("error: {e}");
            exit_code(&e)
        }
    };
    match jobs {
        None => work(),
        Some(n) => match rayon::ThreadPoolBuilder::new().num_threads(n.max(1)).build() {
            Ok(pool) => pool.install(work),
            Err(e) => {
                eprintln!("error: cannot start {n} workers: {e}");
                EXIT_USAGE
            }
        },
    }
}

pub fn exit_code(e: &Error) -> i32 {
    match e {
        Error::ResourceGuard(_) => EXIT_GUARD,
        _ => EXIT_USAGE,
    }
}

fn emit(value: &impl Serialize, compact: bool) -> Result<()> {
    let text = if compact { serde_json::to_string(value)? } else { serde_json::to_string_pretty(value)? };
    println!("{text}");
    Ok(())
}

fn execute(cli: &Cli) -> Result<i32> {
    let opts = cli.common.solver_options();
    let compact = cli.common.json;
    match &cli.command {
        Command::Lambda { file, p } => cmd_lambda(file, *p, &opts, compact),
        Command::Enumerate { family, k, r, extra, out, force, update_golden, golden } => {
            cmd_enumerate(family, *k, *r, *extra, out.as_deref(), *force, *update_golden, golden, compact)
        }
        Command::Verify { scenario, k, p, p_grid, samples, family, no_timing } => {
            let params =
                ScenarioParams { k: *k, p: *p, p_grid: p_grid.clone(), samples: *samples, family: family.clone() };
            cmd_verify(scenario, &params, &opts, *no_timing, compact)
        }
        Command::Construct { family, params, suspend, expand, uhg } => {
            cmd_construct(family, params, *suspend, *expand, *uhg)
        }
        Command::Scenarios => {
            let reg = ScenarioRegistry::with_defaults();
            let list: Vec<_> = reg
                .names()
                .into_iter()
                .map(|n| json!({"name": n, "summary": reg.get(n).map(|s| s.summary()).unwrap_or_default()}))
                .collect();
            emit(&list, compact)?;
            Ok(EXIT_PASS)
        }
    }
}

pub fn cmd_lambda(file: &Path, p: f64, opts: &SolverOptions, compact: bool) -> Result<i32> {
    let text = fs::read_to_string(file)?;
    let h = match file.extension().and_then(|e| e.to_str()) {
        Some("g") => parse_graph(&text)?.to_hypergraph(),
        _ => parse_uhg(&text)?,
    };
    let est = p_spectral_radius(&h, p, opts)?;
    emit(&est, compact)?;
    eprintln!(
        "lambda^({p}) = {} ({}, residual {:e}, {} restarts)",
        est.lambda,
        if est.converged { "converged" } else { "NOT converged" },
        est.residual,
        est.restarts_used
    );
    Ok(if est.converged { EXIT_PASS } else { EXIT_NONCONVERGED })
}

fn golden_key(family: &str, k: usize, r: usize, extra: usize) -> String {
    format!("{family}-{k}-r{r}-extra{extra}")
}

fn read_golden(path: &Path) -> Result<BTreeMap<String, usize>> {
    if !path.exists() {
        return Ok(BTreeMap::new());
    }
    Ok(serde_json::from_str(&fs::read_to_string(path)?)?)
}

/// Every entry embeds into the base, and a single-worker re-run yields the
/// same keys in the same order.
fn golden_gate(cat: &BergeCatalog, force: bool) -> Result<bool> {
    let embeds = cat.entries.iter().all(|e| is_berge(&e.hypergraph, &cat.base).is_some());
    let pool = rayon::ThreadPoolBuilder::new()
        .num_threads(1)
        .build()
        .map_err(|e| Error::InvalidStructure(format!("cannot start a worker: {e}")))?;
    let again = pool.install(|| enumerate_berge_with(&cat.base, cat.rank, cat.extra, force))?;
    let same = again.entries.iter().map(|e| &e.key).eq(cat.entries.iter().map(|e| &e.key));
    Ok(embeds && same)
}

#[allow(clippy::too_many_arguments)]
pub fn cmd_enumerate(
    family: &str,
    k: usize,
    r: usize,
    extra: usize,
    out: Option<&Path>,
    force: bool,
    update_golden: bool,
    golden_path: &Path,
    compact: bool,
) -> Result<i32> {
    let fam: GraphFamily = family.parse()?;
    let g = construct_graph(&fam, &[k])?;
    let cat = enumerate_berge_with(&g, r, extra, force)?;
    let key = golden_key(family, k, r, extra);
    let mut golden = read_golden(golden_path)?;
    let count = cat.entries.len();
    let mut code = EXIT_PASS;
    if update_golden {
        if golden_gate(&cat, force)? {
            golden.insert(key.clone(), count);
            if let Some(dir) = golden_path.parent().filter(|d| !d.as_os_str().is_empty()) {
                fs::create_dir_all(dir)?;
            }
            fs::write(golden_path, serde_json::to_string_pretty(&golden)? + "\n")?;
        } else {
            eprintln!("golden gate failed; {} left unchanged", golden_path.display());
            code = EXIT_FAIL;
        }
    }
    let recorded = golden.get(&key).copied();
    if recorded.is_some_and(|want| want != count) {
        code = EXIT_FAIL;
    }
    if let Some(dir) = out {
        write_catalog(&cat, dir, recorded)?;
    }
    emit(
        &json!({
            "base": family,
            "k": k,
            "r": r,
            "extra": extra,
            "count": count,
            "raw_assignments": cat.raw_assignments,
            "golden": recorded,
            "golden_match": recorded.map(|want| want == count),
            "diagnostic": cat.diagnostic,
        }),
        compact,
    )?;
    eprintln!("{key}: {count} classes{}", recorded.map(|w| format!(" (golden {w})")).unwrap_or_default());
    Ok(code)
}

pub fn cmd_verify(
    scenario: &str,
    params: &ScenarioParams,
    opts: &SolverOptions,
    no_timing: bool,
    compact: bool,
) -> Result<i32> {
    let mut report = ScenarioRegistry::with_defaults().run(scenario, params, opts)?;
    if no_timing {
        report = report.without_timing();
    }
    emit(&report, compact)?;
    let failed: Vec<_> = report.failed_checks().collect();
    eprintln!(
        "{scenario}: {:?} ({} checks, {} failed, {} ms)",
        report.outcome,
        report.checks.len(),
        failed.len(),
        report.wall_ms
    );
    for c in &failed {
        eprintln!("  failed: {} ({} {:?} {} with tol {})", c.name, c.lhs, c.relation, c.rhs, c.tol);
    }
    Ok(if report.outcome == Outcome::Fail { EXIT_FAIL } else { EXIT_PASS })
}

pub fn cmd_construct(
    family: &str,
    params: &[usize],
    suspend: Option<usize>,
    expand: Option<usize>,
    uhg: bool,
) -> Result<i32> {
    let g = construct_graph(&family.parse()?, params)?;
    let text = match (suspend, expand) {
        (Some(t), _) => write_uhg(&suspension(&g.to_hypergraph(), t)?),
        (None, Some(r)) => write_uhg(&expansion(&g, r)?),
        (None, None) if uhg => write_uhg(&g.to_hypergraph()),
        (None, None) => write_graph(&g),
    };
    print!("{text}");
    Ok(EXIT_PASS)
}
