//! Harnesses that combine enumeration, solving and the edge operations into
//! self-auditing reports. Every asserted claim is stored as a [`Check`]
//! holding the two compared numbers, so the outcome can be recomputed from
//! the report alone.

mod extremal;
mod identities;
mod sample;
mod shifting;

use std::collections::BTreeMap;
use std::sync::Arc;
use std::time::Instant;

use serde::{Deserialize, Serialize};
use serde_json::Value;

use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::hgraph::{construct_graph, GraphFamily, UniformHypergraph};
use crate::spectral::{oracle_spectral_radius, p_spectral_radius, SolverOptions, SpectralEstimate};

pub use extremal::{
    star_crossover_scan, verify_cycle_theorem, verify_expansion_minimum, verify_path_theorem, verify_star_theorem,
    verify_star_theorem_with, DEFAULT_STAR_SAMPLES,
};
pub use identities::{verify_p_monotonicity, verify_suspension_lemma};
pub use sample::{random_connected_graph, random_connected_hypergraph, random_tree, random_unicyclic};
pub use shifting::{verify_merge_lemma, verify_move_edge_lemma, verify_path_exchange};

/// Instances with at most this many vertices are re-solved by the oracle.
pub const ORACLE_CHECK_MAX_N: usize = 6;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Outcome {
    Pass,
    Fail,
    /// Nothing asserted; the numbers are recorded only.
    Recorded,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Mode {
    Exhaustive,
    Structural,
    Sampled,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub enum Relation {
    #[serde(rename = "<=")]
    Le,
    #[serde(rename = ">=")]
    Ge,
    #[serde(rename = "<")]
    Lt,
    #[serde(rename = ">")]
    Gt,
    /// `|lhs - rhs| <= tol`.
    #[serde(rename = "~")]
    Near,
}

impl Relation {
    /// Non-strict relations allow `tol` of slack; strict ones demand a gap
    /// larger than `tol`.
    pub fn holds(self, lhs: f64, rhs: f64, tol: f64) -> bool {
        match self {
            Relation::Le => lhs <= rhs + tol,
            Relation::Ge => lhs >= rhs - tol,
            Relation::Lt => lhs < rhs - tol,
            Relation::Gt => lhs > rhs + tol,
            Relation::Near => (lhs - rhs).abs() <= tol,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Check {
    pub name: String,
    pub lhs: f64,
    pub relation: Relation,
    pub rhs: f64,
    pub tol: f64,
    /// Recorded checks never affect the outcome.
    pub asserted: bool,
    pub passed: bool,
}

impl Check {
    pub fn new(name: impl Into<String>, lhs: f64, relation: Relation, rhs: f64, tol: f64) -> Self {
        Check { name: name.into(), lhs, relation, rhs, tol, asserted: true, passed: relation.holds(lhs, rhs, tol) }
    }

    pub fn recorded(self) -> Self {
        Check { asserted: false, ..self }
    }

    /// A yes/no fact stored as `1 ~ 1` or `0 ~ 1`.
    pub fn flag(name: impl Into<String>, value: bool) -> Self {
        Check::new(name, if value { 1.0 } else { 0.0 }, Relation::Near, 1.0, 0.0)
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Tolerances {
    pub tol: f64,
    pub tie_eps: f64,
    pub restarts: usize,
    pub max_iters: usize,
    pub method: String,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct VerificationReport {
    pub scenario: String,
    pub params: BTreeMap<String, Value>,
    pub outcome: Outcome,
    pub winner_key: Option<String>,
    pub winner_name: Option<String>,
    pub lambda_max: Option<f64>,
    pub runner_up: Option<f64>,
    /// `lambda_max - runner_up`, reported on pass as well.
    pub margin: Option<f64>,
    /// Keys within `tie_eps` of the maximum, the winner included.
    pub ties: Vec<String>,
    pub tolerances: Tolerances,
    pub seed: u64,
    pub wall_ms: u64,
    pub mode: Mode,
    pub checks: Vec<Check>,
    pub notes: Vec<String>,
    pub table: Vec<Value>,
}

impl VerificationReport {
    pub(crate) fn new(scenario: &str, mode: Mode, opts: &SolverOptions) -> Self {
        VerificationReport {
            scenario: scenario.to_string(),
            params: BTreeMap::new(),
            outcome: Outcome::Recorded,
            winner_key: None,
            winner_name: None,
            lambda_max: None,
            runner_up: None,
            margin: None,
            ties: Vec::new(),
            tolerances: Tolerances {
                tol: opts.tol,
                tie_eps: opts.tie_eps,
                restarts: opts.restarts,
                max_iters: opts.max_iters,
                method: opts.method.clone(),
            },
            seed: opts.seed,
            wall_ms: 0,
            mode,
            checks: Vec::new(),
            notes: Vec::new(),
            table: Vec::new(),
        }
    }

    pub(crate) fn param(&mut self, name: &str, value: impl Serialize) {
        self.params.insert(name.to_string(), serde_json::to_value(value).expect("parameter serializes"));
    }

    pub(crate) fn check(&mut self, check: Check) {
        self.checks.push(check);
    }

    pub(crate) fn finish(mut self, started: Instant) -> Self {
        self.wall_ms = started.elapsed().as_millis() as u64;
        self.outcome = self.audit();
        self
    }

    /// Recomputes the outcome from the stored check numbers.
    pub fn audit(&self) -> Outcome {
        let asserted: Vec<&Check> = self.checks.iter().filter(|c| c.asserted).collect();
        if asserted.is_empty() {
            Outcome::Recorded
        } else if asserted.iter().all(|c| c.relation.holds(c.lhs, c.rhs, c.tol)) {
            Outcome::Pass
        } else {
            Outcome::Fail
        }
    }

    /// True when every stored `passed` flag and the outcome agree with the
    /// numbers.
    pub fn is_consistent(&self) -> bool {
        self.outcome == self.audit() && self.checks.iter().all(|c| c.passed == c.relation.holds(c.lhs, c.rhs, c.tol))
    }

    pub fn failed_checks(&self) -> impl Iterator<Item = &Check> {
        self.checks.iter().filter(|c| c.asserted && !c.passed)
    }

    /// Copy with the wall time zeroed, for byte comparisons between runs.
    pub fn without_timing(&self) -> Self {
        VerificationReport { wall_ms: 0, ..self.clone() }
    }
}

/// Named inputs shared by all scenarios; each scenario reads the ones it
/// needs and falls back to its defaults.
#[derive(Clone, Debug, Default, PartialEq, Serialize, Deserialize)]
pub struct ScenarioParams {
    pub k: Option<usize>,
    pub p: Option<f64>,
    /// A p-grid or p-set; a single `p` overrides it.
    pub p_grid: Option<Vec<f64>>,
    pub samples: Option<usize>,
    /// Graph family name for scenarios on an arbitrary base graph.
    pub family: Option<String>,
}

impl ScenarioParams {
    fn grid_or(&self, default: &[f64]) -> Vec<f64> {
        match (self.p, &self.p_grid) {
            (Some(p), _) => vec![p],
            (None, Some(g)) => g.clone(),
            (None, None) => default.to_vec(),
        }
    }
}

pub trait Scenario: Send + Sync {
    fn name(&self) -> &'static str;
    fn summary(&self) -> &'static str;
    fn run(&self, params: &ScenarioParams, opts: &SolverOptions) -> Result<VerificationReport>;
}

type Runner = fn(&ScenarioParams, &SolverOptions) -> Result<VerificationReport>;

struct FnScenario {
    name: &'static str,
    summary: &'static str,
    run: Runner,
}

impl Scenario for FnScenario {
    fn name(&self) -> &'static str {
        self.name
    }

    fn summary(&self) -> &'static str {
        self.summary
    }

    fn run(&self, params: &ScenarioParams, opts: &SolverOptions) -> Result<VerificationReport> {
        (self.run)(params, opts)
    }
}

pub const SUSPENSION_GRID: [f64; 5] = [1.0, 1.5, 2.0, 3.0, 5.0];
pub const MONOTONICITY_GRID: [f64; 8] = [1.0, 1.5, 2.0, 3.0, 4.5, 6.0, 9.0, 12.0];
pub const SHIFTING_P_SET: [f64; 4] = [1.0, 2.0, 3.0, 5.0];
pub const CROSSOVER_P_SET: [f64; 3] = [1.2, 1.5, 1.8];
pub const DEFAULT_SAMPLES: usize = 64;

fn run_path(s: &ScenarioParams, o: &SolverOptions) -> Result<VerificationReport> {
    verify_path_theorem(s.k.unwrap_or(6), s.p.unwrap_or(3.0), o)
}

fn run_cycle(s: &ScenarioParams, o: &SolverOptions) -> Result<VerificationReport> {
    verify_cycle_theorem(s.k.unwrap_or(6), s.p.unwrap_or(3.0), o)
}

fn run_star(s: &ScenarioParams, o: &SolverOptions) -> Result<VerificationReport> {
    verify_star_theorem_with(s.k.unwrap_or(11), s.p.unwrap_or(2.0), s.samples.unwrap_or(DEFAULT_STAR_SAMPLES), o)
}

fn run_crossover(s: &ScenarioParams, o: &SolverOptions) -> Result<VerificationReport> {
    star_crossover_scan(&s.grid_or(&CROSSOVER_P_SET), s.k.unwrap_or(40), o)
}

fn run_suspension(s: &ScenarioParams, o: &SolverOptions) -> Result<VerificationReport> {
    verify_suspension_lemma(s.samples.unwrap_or(DEFAULT_SAMPLES), &s.grid_or(&SUSPENSION_GRID), o)
}

fn run_monotonicity(s: &ScenarioParams, o: &SolverOptions) -> Result<VerificationReport> {
    verify_p_monotonicity(s.samples.unwrap_or(DEFAULT_SAMPLES), &s.grid_or(&MONOTONICITY_GRID), o)
}

fn run_move(s: &ScenarioParams, o: &SolverOptions) -> Result<VerificationReport> {
    verify_move_edge_lemma(s.samples.unwrap_or(DEFAULT_SAMPLES), &s.grid_or(&SHIFTING_P_SET), o)
}

fn run_merge(s: &ScenarioParams, o: &SolverOptions) -> Result<VerificationReport> {
    verify_merge_lemma(s.samples.unwrap_or(DEFAULT_SAMPLES), &s.grid_or(&SHIFTING_P_SET), o)
}

fn run_exchange(s: &ScenarioParams, o: &SolverOptions) -> Result<VerificationReport> {
    verify_path_exchange(s.samples.unwrap_or(DEFAULT_SAMPLES), &s.grid_or(&SHIFTING_P_SET), o)
}

fn run_expansion(s: &ScenarioParams, o: &SolverOptions) -> Result<VerificationReport> {
    let family: GraphFamily = s.family.as_deref().unwrap_or("path").parse()?;
    let g = construct_graph(&family, &[s.k.unwrap_or(4)])?;
    verify_expansion_minimum(&g, s.p.unwrap_or(3.0), o)
}

pub struct ScenarioRegistry {
    scenarios: Vec<Arc<dyn Scenario>>,
}

impl Default for ScenarioRegistry {
    fn default() -> Self {
        Self::with_defaults()
    }
}

impl ScenarioRegistry {
    pub fn empty() -> Self {
        ScenarioRegistry { scenarios: Vec::new() }
    }

    pub fn with_defaults() -> Self {
        let builtin: [(&'static str, &'static str, Runner); 10] = [
            ("path", "Berge-P_k catalog maximum vs the suspended Delta_1 (k, p)", run_path),
            ("cycle", "Berge-C_k catalog maximum vs the suspended Delta_2 (k, p)", run_cycle),
            ("star", "Berge-S_k maximum: exhaustive for k <= 7, structural above (k, p, samples)", run_star),
            (
                "star-crossover",
                "S_k vs S_(k-1)^+ scan for 1 < p < 2, not asserted (k = largest k, p-grid)",
                run_crossover,
            ),
            (
                "suspension",
                "lambda(H * K_1) = factor * lambda(H) and witness restriction (samples, p-grid)",
                run_suspension,
            ),
            ("monotonicity", "(lambda / (r m))^p nonincreasing in p (samples, p-grid)", run_monotonicity),
            ("move-edges", "moving edges toward the heavier vertex never lowers lambda (samples, p-grid)", run_move),
            ("merge", "merging a vertex with disjoint link never lowers lambda (samples, p-grid)", run_merge),
            ("path-exchange", "balancing two pendant paths raises lambda (samples, p-grid)", run_exchange),
            ("expansion", "the expansion minimizes lambda over the bounded catalog (family, k, p)", run_expansion),
        ];
        let mut reg = Self::empty();
        for (name, summary, run) in builtin {
            reg.register(Arc::new(FnScenario { name, summary, run }));
        }
        reg
    }

    /// Replaces any scenario with the same name.
    pub fn register(&mut self, scenario: Arc<dyn Scenario>) {
        self.scenarios.retain(|s| s.name() != scenario.name());
        self.scenarios.push(scenario);
    }

    pub fn names(&self) -> Vec<&'static str> {
        self.scenarios.iter().map(|s| s.name()).collect()
    }

    pub fn get(&self, name: &str) -> Result<Arc<dyn Scenario>> {
        self.scenarios
            .iter()
            .find(|s| s.name() == name)
            .cloned()
            .ok_or_else(|| Error::UnknownScenario(name.to_string()))
    }

    pub fn run(&self, name: &str, params: &ScenarioParams, opts: &SolverOptions) -> Result<VerificationReport> {
        self.get(name)?.run(params, opts)
    }
}

fn check_p(p: f64) -> Result<()> {
    if !(p >= 1.0 && p.is_finite()) {
        return Err(Error::param(format!("p must be >= 1, got {p}")));
    }
    Ok(())
}

fn solve_many(hs: &[UniformHypergraph], p: f64, opts: &SolverOptions) -> Result<Vec<SpectralEstimate>> {
    hs.par_iter().map(|h| p_spectral_radius(h, p, opts)).collect()
}

/// Instance count and largest `|lambda - oracle|` over the instances small
/// enough for the oracle.
fn oracle_sweep(items: &[(&UniformHypergraph, f64)], p: f64) -> Result<(usize, f64)> {
    let devs: Vec<f64> = items
        .par_iter()
        .filter(|(h, _)| h.n() <= ORACLE_CHECK_MAX_N)
        .map(|(h, lambda)| Ok((oracle_spectral_radius(h, p)? - lambda).abs()))
        .collect::<Result<_>>()?;
    Ok((devs.len(), devs.iter().copied().fold(0.0, f64::max)))
}

fn nonconverged_check(report: &mut VerificationReport, label: &str, bad: usize) {
    report.check(Check::new(format!("{label}: non-converged solves"), bad as f64, Relation::Le, 0.0, 0.0));
}

/// Sorts `(key, lambda)` by decreasing value, then key, and fills the
/// winner, runner-up, margin and tie fields.
fn fill_ranking(report: &mut VerificationReport, mut ranked: Vec<(String, f64)>, tie_eps: f64) {
    ranked.sort_by(|a, b| b.1.total_cmp(&a.1).then_with(|| a.0.cmp(&b.0)));
    let Some((key, top)) = ranked.first().cloned() else {
        return;
    };
    report.winner_key = Some(key);
    report.lambda_max = Some(top);
    if let Some((_, second)) = ranked.get(1) {
        report.runner_up = Some(*second);
        report.margin = Some(top - second);
    }
    report.ties = ranked.iter().take_while(|(_, l)| *l >= top - tie_eps).map(|(k, _)| k.clone()).collect();
}
