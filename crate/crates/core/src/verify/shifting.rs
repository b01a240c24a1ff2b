//! Random-instance suites for the edge-shifting operations: each legal
//! instance compares `lambda` before and after one operation.

use std::time::Instant;

use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde_json::json;

use super::sample::{random_connected_graph, random_connected_hypergraph};
use super::{check_p, nonconverged_check, oracle_sweep, Check, Mode, Relation, VerificationReport};
use crate::error::{Error, Result};
use crate::hgraph::{attach_two_paths, is_isomorphic, Graph, UniformHypergraph};
use crate::spectral::{derive_seed, p_spectral_radius, SolverOptions};
use crate::transforms::{merge_vertex, move_edges, path_exchange, EdgeMoveSpec, PendantTails};

/// Draws per instance before it counts as illegal.
const ATTEMPTS: usize = 10;

struct Comparison {
    before: UniformHypergraph,
    after: UniformHypergraph,
    lambda_before: f64,
    lambda_after: f64,
    converged: bool,
}

fn check_set(p_set: &[f64]) -> Result<()> {
    if p_set.is_empty() {
        return Err(Error::param("empty p-set"));
    }
    p_set.iter().try_for_each(|&p| check_p(p))
}

fn rng_for(seed: u64, i: usize, salt: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(derive_seed(derive_seed(seed, i as u64), salt))
}

fn compare(before: UniformHypergraph, after: UniformHypergraph, p: f64, opts: &SolverOptions) -> Result<Comparison> {
    let a = p_spectral_radius(&before, p, opts)?;
    let b = p_spectral_radius(&after, p, opts)?;
    Ok(Comparison {
        before,
        after,
        lambda_before: a.lambda,
        lambda_after: b.lambda,
        converged: a.converged && b.converged,
    })
}

/// Adds the per-p checks: strict claims need every difference above
/// `tie_eps`, weak ones allow `tie_eps` below zero.
fn summarize(
    report: &mut VerificationReport,
    p: f64,
    strict: bool,
    comps: &[Option<Comparison>],
    tie: f64,
) -> Result<usize> {
    let legal: Vec<&Comparison> = comps.iter().flatten().collect();
    let diffs: Vec<f64> = legal.iter().map(|c| c.lambda_after - c.lambda_before).collect();
    let smallest = diffs.iter().copied().fold(f64::INFINITY, f64::min);
    let (relation, claim) = if strict { (Relation::Gt, "strict") } else { (Relation::Ge, "weak") };
    let held = diffs.iter().filter(|&&d| relation.holds(d, 0.0, tie)).count();
    report.check(Check::new(format!("p = {p}: legal instances"), legal.len() as f64, Relation::Ge, 1.0, 0.0));
    if !legal.is_empty() {
        report.check(Check::new(format!("p = {p}: smallest change in lambda ({claim})"), smallest, relation, 0.0, tie));
    }
    let items: Vec<(&UniformHypergraph, f64)> =
        legal.iter().flat_map(|c| [(&c.before, c.lambda_before), (&c.after, c.lambda_after)]).collect();
    let (count, dev) = oracle_sweep(&items, p)?;
    report.check(Check::new(format!("p = {p}: oracle agrees on {count} instances"), dev, Relation::Le, 0.0, tie));
    report.table.push(json!({
        "p": p,
        "claim": claim,
        "legal": legal.len(),
        "skipped": comps.len() - legal.len(),
        "held": held,
        "smallest_change": if legal.is_empty() { None } else { Some(smallest) },
    }));
    Ok(legal.iter().filter(|c| !c.converged).count())
}

fn shifting_instance(seed: u64, i: usize, min_n: usize) -> Result<UniformHypergraph> {
    let mut rng = rng_for(seed, i, 0);
    let n = rng.gen_range(min_n..=7);
    random_connected_hypergraph(3, n, 3, &mut rng)
}

/// A legal move toward a vertex at least as heavy under `x`, or `None`.
fn pick_move<R: Rng>(h: &UniformHypergraph, x: &[f64], rng: &mut R) -> Option<UniformHypergraph> {
    let n = h.n();
    let mut pairs: Vec<(usize, usize, Vec<usize>)> = (0..n)
        .flat_map(|to| (0..n).map(move |from| (to, from)))
        .filter(|&(to, from)| to != from && x[to] >= x[from])
        .filter_map(|(to, from)| {
            let movable: Vec<usize> =
                (0..h.m()).filter(|&j| h.edges()[j].contains(&from) && !h.edges()[j].contains(&to)).collect();
            (!movable.is_empty()).then_some((to, from, movable))
        })
        .collect();
    pairs.shuffle(rng);
    for (to, from, movable) in pairs.into_iter().take(ATTEMPTS) {
        let size = rng.gen_range(1..=movable.len());
        let edges: Vec<usize> = movable.choose_multiple(rng, size).copied().collect();
        if let Ok(out) = move_edges(h, &EdgeMoveSpec { edges, from, to }) {
            return Some(out);
        }
    }
    None
}

/// Moving edges from `v` to `u` with `x_u >= x_v` for the solver's witness
/// `x`: never lowers `lambda`, and raises it for `p > r - 1 = 2`.
pub fn verify_move_edge_lemma(samples: usize, p_set: &[f64], opts: &SolverOptions) -> Result<VerificationReport> {
    let started = Instant::now();
    check_set(p_set)?;
    let mut report = VerificationReport::new("move-edges", Mode::Sampled, opts);
    report.param("samples", samples);
    report.param("p_set", p_set);
    let instances: Vec<UniformHypergraph> =
        (0..samples).map(|i| shifting_instance(opts.seed, i, 4)).collect::<Result<_>>()?;
    let mut bad = 0;
    for (j, &p) in p_set.iter().enumerate() {
        let comps: Vec<Option<Comparison>> = instances
            .par_iter()
            .enumerate()
            .map(|(i, h)| {
                let est = p_spectral_radius(h, p, opts)?;
                let mut rng = rng_for(opts.seed, i, j as u64 + 1);
                match pick_move(h, est.witness.entries(), &mut rng) {
                    None => Ok(None),
                    Some(after) => {
                        let lambda_after = p_spectral_radius(&after, p, opts)?;
                        Ok(Some(Comparison {
                            before: h.clone(),
                            lambda_before: est.lambda,
                            lambda_after: lambda_after.lambda,
                            converged: est.converged && lambda_after.converged,
                            after,
                        }))
                    }
                }
            })
            .collect::<Result<_>>()?;
        bad += summarize(&mut report, p, p > 2.0, &comps, opts.tie_eps)?;
    }
    nonconverged_check(&mut report, "all", bad);
    if let Some(h) = instances.first() {
        let same = move_edges(h, &EdgeMoveSpec { edges: vec![], from: 0, to: 1 })?;
        report.check(Check::flag("empty move is a no-op", &same == h));
    }
    Ok(report.finish(started))
}

/// A legal merge of a random vertex pair, redrawing the hypergraph up to
/// `ATTEMPTS` times.
fn merge_instance(seed: u64, i: usize) -> Result<Option<(UniformHypergraph, UniformHypergraph)>> {
    for attempt in 0..ATTEMPTS {
        let mut rng = rng_for(seed, i, attempt as u64);
        let n = rng.gen_range(5..=7);
        let h = random_connected_hypergraph(3, n, 2, &mut rng)?;
        let merges: Vec<UniformHypergraph> = (0..n)
            .flat_map(|u| (0..n).map(move |v| (u, v)))
            .filter(|&(u, v)| u != v)
            .filter_map(|(u, v)| merge_vertex(&h, u, v).ok())
            .collect();
        if let Some(out) = merges.choose(&mut rng) {
            return Ok(Some((h, out.clone())));
        }
    }
    Ok(None)
}

/// Deleting `u` and re-attaching its link at `v`, with no common edge and
/// disjoint links: never lowers `lambda`, and raises it for `p > 2`.
pub fn verify_merge_lemma(samples: usize, p_set: &[f64], opts: &SolverOptions) -> Result<VerificationReport> {
    let started = Instant::now();
    check_set(p_set)?;
    let mut report = VerificationReport::new("merge", Mode::Sampled, opts);
    report.param("samples", samples);
    report.param("p_set", p_set);
    let pairs: Vec<Option<(UniformHypergraph, UniformHypergraph)>> =
        (0..samples).map(|i| merge_instance(opts.seed, i)).collect::<Result<_>>()?;
    let mut bad = 0;
    for &p in p_set {
        let comps: Vec<Option<Comparison>> = pairs
            .par_iter()
            .map(|pair| pair.as_ref().map(|(h, out)| compare(h.clone(), out.clone(), p, opts)).transpose())
            .collect::<Result<_>>()?;
        bad += summarize(&mut report, p, p > 2.0, &comps, opts.tie_eps)?;
    }
    nonconverged_check(&mut report, "all", bad);
    Ok(report.finish(started))
}

/// `G(u; k+1, s-1)` and its exchange, with the check that the exchange is
/// `G(u; k, s)`.
fn exchange_instance(seed: u64, i: usize) -> Result<(Graph, Graph, bool)> {
    let mut rng = rng_for(seed, i, 0);
    let n0 = rng.gen_range(3..=4);
    let base = random_connected_graph(n0, 2, &mut rng)?;
    let root = rng.gen_range(0..n0);
    let (k, s) = *[(1, 1), (2, 1), (3, 1), (2, 2)].choose(&mut rng).expect("nonempty");
    let before = attach_two_paths(&base, root, k + 1, s - 1)?;
    let tails = PendantTails { root, a: (n0..n0 + k + 1).collect(), b: (n0 + k + 1..n0 + k + s).collect() };
    let after = path_exchange(&before, &tails)?;
    let expected = attach_two_paths(&base, root, k, s)?;
    let matches = is_isomorphic(&after.to_hypergraph(), &expected.to_hypergraph());
    Ok((before, after, matches))
}

/// Balancing two pendant paths at a vertex, `(k+1, s-1) -> (k, s)` with
/// `k >= s >= 1`, raises `lambda` of the graph for `p > 1`; at `p = 1` only
/// the weak inequality is checked.
pub fn verify_path_exchange(samples: usize, p_set: &[f64], opts: &SolverOptions) -> Result<VerificationReport> {
    let started = Instant::now();
    check_set(p_set)?;
    let mut report = VerificationReport::new("path-exchange", Mode::Sampled, opts);
    report.param("samples", samples);
    report.param("p_set", p_set);
    let instances: Vec<(Graph, Graph, bool)> =
        (0..samples).map(|i| exchange_instance(opts.seed, i)).collect::<Result<_>>()?;
    let mismatched = instances.iter().filter(|t| !t.2).count();
    report.check(Check::new("exchanges not isomorphic to G(u; k, s)", mismatched as f64, Relation::Le, 0.0, 0.0));
    let mut bad = 0;
    for &p in p_set {
        let comps: Vec<Option<Comparison>> = instances
            .par_iter()
            .map(|(before, after, _)| compare(before.to_hypergraph(), after.to_hypergraph(), p, opts).map(Some))
            .collect::<Result<_>>()?;
        bad += summarize(&mut report, p, p > 1.0, &comps, opts.tie_eps)?;
    }
    nonconverged_check(&mut report, "all", bad);
    Ok(report.finish(started))
}
