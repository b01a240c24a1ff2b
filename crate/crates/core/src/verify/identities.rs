//! Identities checked on random small hypergraphs: the suspension factor
//! with its witness restriction, and monotonicity of `(lambda / (r m))^p`.

use std::time::Instant;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde_json::json;

use super::sample::random_connected_hypergraph;
use super::{check_p, nonconverged_check, oracle_sweep, Check, Mode, Relation, VerificationReport};
use crate::error::{Error, Result};
use crate::hgraph::{construct_graph, suspension, GraphFamily, UniformHypergraph};
use crate::spectral::{
    derive_seed, eigen_residual, lambda_p_monotone_scan, p_spectral_radius, star_lambda, suspension_factor,
    SolverOptions,
};

const IDENTITY_TOL: f64 = 1e-7;
const MONOTONE_SLACK: f64 = 1e-9;
const CONSTANT_TOL: f64 = 1e-12;

fn check_grid(grid: &[f64]) -> Result<()> {
    if grid.is_empty() {
        return Err(Error::param("empty p-grid"));
    }
    grid.iter().try_for_each(|&p| check_p(p))
}

/// Instance `i`: rank alternating 2, 3 and `n <= 6`.
fn suspension_instance(seed: u64, i: usize) -> Result<UniformHypergraph> {
    let mut rng = ChaCha8Rng::seed_from_u64(derive_seed(seed, i as u64));
    let r = 2 + i % 2;
    let n = rng.gen_range(r..=6);
    random_connected_hypergraph(r, n, 3, &mut rng)
}

struct SuspensionRow {
    rel_err: f64,
    restriction_residual: f64,
    restriction_norm_err: f64,
    nonconverged: usize,
}

pub fn verify_suspension_lemma(samples: usize, p_grid: &[f64], opts: &SolverOptions) -> Result<VerificationReport> {
    let started = Instant::now();
    check_grid(p_grid)?;
    let mut report = VerificationReport::new("suspension", Mode::Sampled, opts);
    report.param("samples", samples);
    report.param("p_grid", p_grid);
    let instances: Vec<UniformHypergraph> =
        (0..samples).map(|i| suspension_instance(opts.seed, i)).collect::<Result<_>>()?;
    let mut bad = 0;
    for &p in p_grid {
        let factor_of = |r: usize| suspension_factor(r, p);
        let rows: Vec<(SuspensionRow, f64)> = instances
            .par_iter()
            .map(|h| {
                let r = h.rank();
                let core = p_spectral_radius(h, p, opts)?;
                let sus_h = suspension(h, 1)?;
                let sus = p_spectral_radius(&sus_h, p, opts)?;
                let predicted = factor_of(r) * core.lambda;
                let rel_err = (sus.lambda - predicted).abs() / sus.lambda.max(1.0);
                let scale = (1.0 + 1.0 / r as f64).powf(1.0 / p);
                let y: Vec<f64> = sus.witness.entries()[..h.n()].iter().map(|v| scale * v).collect();
                let norm = y.iter().map(|v| v.powf(p)).sum::<f64>().powf(1.0 / p);
                let restriction_residual = eigen_residual(h, p, core.lambda, &y)? / core.lambda.max(1.0);
                let row = SuspensionRow {
                    rel_err,
                    restriction_residual,
                    restriction_norm_err: (norm - 1.0).abs(),
                    nonconverged: usize::from(!core.converged) + usize::from(!sus.converged),
                };
                Ok((row, core.lambda))
            })
            .collect::<Result<_>>()?;
        let worst = |f: fn(&SuspensionRow) -> f64| rows.iter().map(|(r, _)| f(r)).fold(0.0, f64::max);
        let rel = worst(|r| r.rel_err);
        let res = worst(|r| r.restriction_residual);
        let norm = worst(|r| r.restriction_norm_err);
        bad += rows.iter().map(|(r, _)| r.nonconverged).sum::<usize>();
        report.check(Check::new(
            format!("p = {p}: relative error of the factor identity"),
            rel,
            Relation::Le,
            0.0,
            IDENTITY_TOL,
        ));
        report.check(Check::new(
            format!("p = {p}: restricted witness residual on the core"),
            res,
            Relation::Le,
            0.0,
            IDENTITY_TOL,
        ));
        report.check(Check::new(
            format!("p = {p}: restricted witness norm error"),
            norm,
            Relation::Le,
            0.0,
            IDENTITY_TOL,
        ));
        let items: Vec<(&UniformHypergraph, f64)> = instances.iter().zip(&rows).map(|(h, (_, l))| (h, *l)).collect();
        let (count, dev) = oracle_sweep(&items, p)?;
        report.check(Check::new(
            format!("p = {p}: oracle agrees on {count} cores"),
            dev,
            Relation::Le,
            0.0,
            opts.tie_eps,
        ));

        // K_2 * K_1 is a single 3-edge
        let k2 = construct_graph(&GraphFamily::Path, &[2])?.to_hypergraph();
        let single = p_spectral_radius(&suspension(&k2, 1)?, p, opts)?.lambda;
        let want = 3f64.powf(1.0 - 3.0 / p);
        report.check(Check::new(
            format!("p = {p}: K_2 * K_1 equals 3^(1 - 3/p)"),
            single,
            Relation::Near,
            want,
            IDENTITY_TOL,
        ));
        report.table.push(json!({
            "p": p,
            "instances": rows.len(),
            "max_relative_error": rel,
            "max_restriction_residual": res,
            "oracle_instances": count,
            "max_oracle_deviation": dev,
        }));
    }
    nonconverged_check(&mut report, "all", bad);
    let k3 = construct_graph(&GraphFamily::Complete, &[3])?.to_hypergraph();
    let chain = p_spectral_radius(&suspension(&k3, 1)?, 1.0, opts)?.lambda;
    report.check(Check::new("K_3 * K_1 at p = 1 equals 4/27", chain, Relation::Near, 4.0 / 27.0, IDENTITY_TOL));
    Ok(report.finish(started))
}

/// Largest step up along a sequence; negative when strictly decreasing.
fn largest_increase(values: &[f64]) -> f64 {
    values.windows(2).map(|w| w[1] - w[0]).fold(f64::NEG_INFINITY, f64::max)
}

pub fn verify_p_monotonicity(samples: usize, p_grid: &[f64], opts: &SolverOptions) -> Result<VerificationReport> {
    let started = Instant::now();
    check_grid(p_grid)?;
    if p_grid.len() < 2 {
        return Err(Error::param("monotonicity needs at least two grid points"));
    }
    let mut report = VerificationReport::new("monotonicity", Mode::Sampled, opts);
    report.param("samples", samples);
    report.param("p_grid", p_grid);
    let instances: Vec<UniformHypergraph> = (0..samples)
        .map(|i| {
            let mut rng = ChaCha8Rng::seed_from_u64(derive_seed(opts.seed, i as u64));
            let n = rng.gen_range(4..=7);
            random_connected_hypergraph(3, n, 4, &mut rng)
        })
        .collect::<Result<_>>()?;
    let scans: Vec<Vec<_>> =
        instances.par_iter().map(|h| lambda_p_monotone_scan(h, p_grid, opts)).collect::<Result<_>>()?;
    let rises: Vec<f64> =
        scans.iter().map(|s| largest_increase(&s.iter().map(|pt| pt.normalized).collect::<Vec<_>>())).collect();
    let worst = rises.iter().copied().fold(f64::NEG_INFINITY, f64::max);
    let bad = scans.iter().flatten().filter(|pt| !pt.converged).count();
    nonconverged_check(&mut report, "random scans", bad);
    report.check(Check::new(
        "random 3-graphs: largest increase along the grid",
        worst,
        Relation::Le,
        0.0,
        MONOTONE_SLACK,
    ));
    for (j, &p) in p_grid.iter().enumerate() {
        let items: Vec<(&UniformHypergraph, f64)> =
            instances.iter().zip(&scans).map(|(h, s)| (h, s[j].lambda)).collect();
        let (count, dev) = oracle_sweep(&items, p)?;
        report.check(Check::new(
            format!("p = {p}: oracle agrees on {count} instances"),
            dev,
            Relation::Le,
            0.0,
            opts.tie_eps,
        ));
    }

    let edge = UniformHypergraph::new(3, 3, vec![vec![0, 1, 2]])?;
    let flat: Vec<f64> = lambda_p_monotone_scan(&edge, p_grid, opts)?.iter().map(|pt| pt.normalized).collect();
    let spread = flat.iter().map(|v| (v - flat[0]).abs()).fold(0.0, f64::max);
    report.check(Check::new("single edge: spread of the constant sequence", spread, Relation::Le, 0.0, CONSTANT_TOL));

    let closed: Vec<f64> = p_grid.iter().map(|&p| (star_lambda(10, p) / 18.0).powf(p)).collect();
    report.check(Check::new(
        "S_10 closed form: largest increase",
        largest_increase(&closed),
        Relation::Le,
        0.0,
        MONOTONE_SLACK,
    ));
    let s10 = construct_graph(&GraphFamily::Star, &[10])?.to_hypergraph();
    let solved: Vec<f64> = lambda_p_monotone_scan(&s10, p_grid, opts)?.iter().map(|pt| pt.normalized).collect();
    report.check(Check::new(
        "S_10 solver: largest increase",
        largest_increase(&solved),
        Relation::Le,
        0.0,
        MONOTONE_SLACK,
    ));

    for (h, (scan, rise)) in instances.iter().zip(scans.iter().zip(&rises)).take(8) {
        report.table.push(json!({
            "n": h.n(),
            "m": h.m(),
            "normalized": scan.iter().map(|pt| pt.normalized).collect::<Vec<_>>(),
            "largest_increase": rise,
        }));
    }
    Ok(report.finish(started))
}
