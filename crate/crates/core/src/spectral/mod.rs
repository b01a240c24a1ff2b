//! The p-spectral radius: the maximum of the polynomial form
//! `P_H(x) = r * sum_e prod_{i in e} x_i` over nonnegative `x` with unit
//! p-norm, with stationarity conditions `g_i / r = lambda x_i^(p-1)` on the
//! support of a maximizer (`g` the gradient of `P_H`).

mod closed_form;
mod fixed_point;
mod oracle;
mod polish;
mod problem;
mod projected;
mod simplex;
mod strategy;

use rayon::prelude::*;
use serde::{Deserialize, Serialize, Serializer};

use crate::error::{Error, Result};
use crate::hgraph::UniformHypergraph;

pub use closed_form::{motzkin_straus_lambda1, star_lambda, star_plus_lambda_p2, suspension_factor};
pub use fixed_point::FixedPoint;
pub use oracle::{oracle_spectral_radius, ORACLE_MAX_VERTICES};
pub use problem::Problem;
pub use projected::ProjectedGradient;
pub use simplex::SimplexSupport;
pub use strategy::{
    auto_name, default_starts, derive_seed, Ascent, AscentStrategy, StartPoint, StrategyRegistry, AUTO,
};

use polish::Candidate;
use problem::{form_gradient, form_value, pow_pm1};

/// Nonnegative weights on the unit p-sphere.
#[derive(Clone, Debug, PartialEq, Deserialize)]
pub struct WeightVector {
    entries: Vec<f64>,
    p: f64,
}

impl WeightVector {
    /// Scales nonnegative `entries` to unit p-norm.
    pub fn normalized(mut entries: Vec<f64>, p: f64) -> Result<Self> {
        if p < 1.0 || !p.is_finite() {
            return Err(Error::param(format!("p must be >= 1, got {p}")));
        }
        if entries.iter().any(|v| !(v.is_finite() && *v >= 0.0)) {
            return Err(Error::param("weights must be finite and nonnegative"));
        }
        if !problem::normalize(&mut entries, p) {
            return Err(Error::param("weights are all zero"));
        }
        Ok(WeightVector { entries, p })
    }

    pub fn empty(p: f64) -> Self {
        WeightVector { entries: Vec::new(), p }
    }

    pub fn entries(&self) -> &[f64] {
        &self.entries
    }

    pub fn p(&self) -> f64 {
        self.p
    }

    pub fn norm(&self) -> f64 {
        problem::p_norm(&self.entries, self.p)
    }
}

/// Serialized as the bare entry list.
impl Serialize for WeightVector {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        self.entries.serialize(s)
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct SolverOptions {
    pub tol: f64,
    pub restarts: usize,
    pub max_iters: usize,
    pub seed: u64,
    pub tie_eps: f64,
    /// Registered strategy name, or `auto`.
    pub method: String,
}

impl Default for SolverOptions {
    fn default() -> Self {
        SolverOptions { tol: 1e-10, restarts: 64, max_iters: 100_000, seed: 0, tie_eps: 1e-7, method: AUTO.to_string() }
    }
}

impl SolverOptions {
    pub fn with_seed(seed: u64) -> Self {
        SolverOptions { seed, ..Self::default() }
    }

    pub fn with_restarts(&self, restarts: usize) -> Self {
        SolverOptions { restarts, ..self.clone() }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct SpectralEstimate {
    pub lambda: f64,
    pub p: f64,
    pub residual: f64,
    pub witness: WeightVector,
    pub iterations: usize,
    pub restarts_used: usize,
    pub converged: bool,
    pub seed: u64,
}

fn check_len(h: &UniformHypergraph, x: &[f64]) -> Result<()> {
    if x.len() != h.n() {
        return Err(Error::LengthMismatch { expected: h.n(), got: x.len() });
    }
    Ok(())
}

pub fn polynomial_form(h: &UniformHypergraph, x: &[f64]) -> Result<f64> {
    check_len(h, x)?;
    Ok(form_value(h.rank(), h.edges(), x))
}

pub fn gradient(h: &UniformHypergraph, x: &[f64]) -> Result<Vec<f64>> {
    check_len(h, x)?;
    let mut out = vec![0.0; h.n()];
    form_gradient(h.rank(), h.edges(), x, &mut out);
    Ok(out)
}

/// `max_{x_i > 0} |g_i(x) / r - lambda x_i^(p-1)|`.
pub fn eigen_residual(h: &UniformHypergraph, p: f64, lambda: f64, x: &[f64]) -> Result<f64> {
    let g = gradient(h, x)?;
    let r = h.rank() as f64;
    Ok(x.iter()
        .zip(&g)
        .filter(|(xi, _)| **xi > 0.0)
        .map(|(&xi, &gi)| (gi / r - lambda * pow_pm1(xi, p)).abs())
        .fold(0.0, f64::max))
}

pub fn p_spectral_radius(h: &UniformHypergraph, p: f64, opts: &SolverOptions) -> Result<SpectralEstimate> {
    let strategy = StrategyRegistry::with_defaults().select(&opts.method, h.rank(), p)?;
    p_spectral_radius_with(h, p, opts, strategy.as_ref())
}

/// Solves each connected component separately and combines them: for
/// `p <= r` all weight goes to the best component, for `p > r` the optimal
/// split gives component `c` the share `lambda_c^(p/(p-r))` of `|x|_p^p`.
pub fn p_spectral_radius_with(
    h: &UniformHypergraph,
    p: f64,
    opts: &SolverOptions,
    strategy: &dyn AscentStrategy,
) -> Result<SpectralEstimate> {
    if !(p >= 1.0 && p.is_finite()) {
        return Err(Error::param(format!("p must be >= 1, got {p}")));
    }
    if !strategy.applicable(h.rank(), p) {
        return Err(Error::param(format!(
            "strategy `{}` does not apply at rank {}, p = {p}",
            strategy.name(),
            h.rank()
        )));
    }
    if h.m() == 0 {
        return Ok(SpectralEstimate {
            lambda: 0.0,
            p,
            residual: 0.0,
            witness: WeightVector::empty(p),
            iterations: 0,
            restarts_used: 0,
            converged: true,
            seed: opts.seed,
        });
    }
    let comps = components(h, p);
    let mut solved = Vec::with_capacity(comps.len());
    let mut restarts_used = 0;
    for (verts, problem) in &comps {
        let (best, used) = solve_component(problem, opts, strategy);
        restarts_used += used;
        solved.push((verts, best));
    }
    let r = h.rank() as f64;
    let mut witness = vec![0.0; h.n()];
    if p > r {
        let shares: Vec<f64> = solved.iter().map(|(_, c)| c.lambda.powf(p / (p - r))).collect();
        let total: f64 = shares.iter().sum();
        for ((verts, c), s) in solved.iter().zip(&shares) {
            let scale = (s / total).powf(1.0 / p);
            for (local, &v) in verts.iter().enumerate() {
                witness[v] = scale * c.x[local];
            }
        }
    } else {
        let mut pick = 0;
        for (i, (_, c)) in solved.iter().enumerate() {
            if c.lambda > solved[pick].1.lambda {
                pick = i;
            }
        }
        let (verts, c) = &solved[pick];
        for (local, &v) in verts.iter().enumerate() {
            witness[v] = c.x[local];
        }
    }
    problem::normalize(&mut witness, p);
    let lambda = polynomial_form(h, &witness)?;
    let residual = eigen_residual(h, p, lambda, &witness)?;
    Ok(SpectralEstimate {
        lambda,
        p,
        residual,
        witness: WeightVector { entries: witness, p },
        iterations: solved.iter().map(|(_, c)| c.iterations).sum(),
        restarts_used,
        converged: residual <= opts.tol && solved.iter().all(|(_, c)| c.converged),
        seed: opts.seed,
    })
}

/// Connected components with at least one edge, each relabeled onto
/// `0..len` in increasing vertex order.
fn components(h: &UniformHypergraph, p: f64) -> Vec<(Vec<usize>, Problem)> {
    let n = h.n();
    let mut parent: Vec<usize> = (0..n).collect();
    fn find(parent: &mut [usize], mut v: usize) -> usize {
        while parent[v] != v {
            parent[v] = parent[parent[v]];
            v = parent[v];
        }
        v
    }
    for e in h.edges() {
        let a = find(&mut parent, e[0]);
        for &v in &e[1..] {
            let b = find(&mut parent, v);
            parent[b] = a;
        }
    }
    let deg = h.degrees();
    let mut groups: Vec<(usize, Vec<usize>)> = Vec::new();
    for v in (0..n).filter(|&v| deg[v] > 0) {
        let root = find(&mut parent, v);
        match groups.iter_mut().find(|(r, _)| *r == root) {
            Some((_, g)) => g.push(v),
            None => groups.push((root, vec![v])),
        }
    }
    groups
        .into_iter()
        .map(|(root, verts)| {
            let mut local = vec![usize::MAX; n];
            for (i, &v) in verts.iter().enumerate() {
                local[v] = i;
            }
            let edges = h
                .edges()
                .iter()
                .filter(|e| find(&mut parent, e[0]) == root)
                .map(|e| e.iter().map(|&v| local[v]).collect())
                .collect();
            let problem = Problem::new(h.rank(), verts.len(), p, edges);
            (verts, problem)
        })
        .collect()
}

/// Runs all restarts (concurrently when a worker pool is available) and
/// keeps the largest value; within `1e-12` relative a converged result is
/// preferred, then the lowest restart index.
fn solve_component(problem: &Problem, opts: &SolverOptions, strategy: &dyn AscentStrategy) -> (Candidate, usize) {
    let starts = strategy.starts(problem, opts);
    let results: Vec<Candidate> = starts
        .par_iter()
        .map(|s| {
            let x0 = s.realize(problem);
            let asc = strategy.ascend(problem, x0, opts);
            polish::finish(problem, asc.x, asc.iterations, opts)
        })
        .collect();
    let used = results.len();
    let mut best: Option<Candidate> = None;
    for c in results {
        let replace = match &best {
            None => true,
            Some(b) => {
                let slack = 1e-12 * b.lambda.max(1.0);
                c.lambda > b.lambda + slack || (c.lambda >= b.lambda - slack && c.converged && !b.converged)
            }
        };
        if replace {
            best = Some(c);
        }
    }
    (best.expect("at least one start"), used)
}

/// One point of a p-scan: `normalized = (lambda / (r m))^p`.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ScanPoint {
    pub p: f64,
    pub lambda: f64,
    pub normalized: f64,
    pub converged: bool,
}

pub fn lambda_p_monotone_scan(h: &UniformHypergraph, p_grid: &[f64], opts: &SolverOptions) -> Result<Vec<ScanPoint>> {
    if p_grid.windows(2).any(|w| w[0] >= w[1]) {
        return Err(Error::param("p grid must be strictly ascending"));
    }
    if h.m() == 0 {
        return Err(Error::param("scan of an empty hypergraph"));
    }
    let scale = (h.rank() * h.m()) as f64;
    p_grid
        .iter()
        .map(|&p| {
            let est = p_spectral_radius(h, p, opts)?;
            Ok(ScanPoint { p, lambda: est.lambda, normalized: (est.lambda / scale).powf(p), converged: est.converged })
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::hgraph::{construct_graph, suspension, GraphFamily};

    fn graph(f: GraphFamily, k: usize) -> UniformHypergraph {
        construct_graph(&f, &[k]).unwrap().to_hypergraph()
    }

    fn opts() -> SolverOptions {
        SolverOptions::with_seed(11)
    }

    #[test]
    fn form_and_gradient_examples() {
        let h = UniformHypergraph::new(3, 3, vec![vec![0, 1, 2]]).unwrap();
        let third = [1.0 / 3.0; 3];
        assert!((polynomial_form(&h, &third).unwrap() - 1.0 / 9.0).abs() < 1e-15);
        assert_eq!(polynomial_form(&h, &[0.0; 3]).unwrap(), 0.0);
        assert_eq!(gradient(&h, &[2.0, 3.0, 5.0]).unwrap(), vec![45.0, 30.0, 18.0]);
        assert!(matches!(polynomial_form(&h, &[1.0]), Err(Error::LengthMismatch { .. })));
        assert!(matches!(gradient(&h, &[1.0; 4]), Err(Error::LengthMismatch { .. })));
        let k3 = graph(GraphFamily::Complete, 3);
        assert!((polynomial_form(&k3, &third).unwrap() - 2.0 / 3.0).abs() < 1e-15);
        let star = graph(GraphFamily::Star, 5);
        let g = gradient(&star, &[1.0; 5]).unwrap();
        assert_eq!(g, vec![8.0, 2.0, 2.0, 2.0, 2.0]);
    }

    #[test]
    fn star_eigenpair_has_zero_residual() {
        for n in [3usize, 7, 10] {
            let star = graph(GraphFamily::Star, n);
            let mut x = vec![1.0 / (2.0 * (n - 1) as f64).sqrt(); n];
            x[0] = 0.5f64.sqrt();
            let lambda = ((n - 1) as f64).sqrt();
            assert!(eigen_residual(&star, 2.0, lambda, &x).unwrap() < 1e-12);
        }
    }

    #[test]
    fn single_edge_every_p() {
        for r in 2..=5 {
            let h = UniformHypergraph::new(r, r, vec![(0..r).collect()]).unwrap();
            for p in [1.0, 1.5, 2.0, 3.0, 4.5] {
                let est = p_spectral_radius(&h, p, &opts()).unwrap();
                let rf = r as f64;
                assert!((est.lambda - rf.powf(1.0 - rf / p)).abs() < 1e-10, "r={r} p={p}");
                assert!(est.converged, "r={r} p={p} {est:?}");
                for &v in est.witness.entries() {
                    assert!((v - rf.powf(-1.0 / p)).abs() < 1e-8);
                }
            }
        }
    }

    #[test]
    fn star_ten_at_two() {
        let est = p_spectral_radius(&graph(GraphFamily::Star, 10), 2.0, &opts()).unwrap();
        assert!((est.lambda - 3.0).abs() < 1e-9);
        assert!(est.converged && est.residual <= 1e-10);
        assert!((est.witness.norm() - 1.0).abs() < 1e-12);
    }

    #[test]
    fn star_plus_suspension_at_one() {
        for k in [6, 8] {
            let core = graph(GraphFamily::StarPlus, k - 1);
            let h = suspension(&core, 1).unwrap();
            let est = p_spectral_radius(&h, 1.0, &opts()).unwrap();
            assert!((est.lambda - 4.0 / 27.0).abs() < 1e-7, "k={k} {}", est.lambda);
            assert!(est.converged);
        }
    }

    #[test]
    fn perturbed_witness_is_flagged() {
        let star = graph(GraphFamily::Star, 6);
        let est = p_spectral_radius(&star, 2.0, &opts()).unwrap();
        let mut x = est.witness.entries().to_vec();
        x[2] += 0.01;
        let w = WeightVector::normalized(x, 2.0).unwrap();
        let lam = polynomial_form(&star, w.entries()).unwrap();
        assert!(eigen_residual(&star, 2.0, lam, w.entries()).unwrap() > 1e-10);
    }

    #[test]
    fn empty_and_disconnected() {
        let e = UniformHypergraph::new(3, 4, Vec::<Vec<usize>>::new()).unwrap();
        let est = p_spectral_radius(&e, 2.0, &opts()).unwrap();
        assert_eq!(est.lambda, 0.0);
        assert!(est.witness.entries().is_empty());
        // two disjoint edges: p <= r concentrates, p > r splits evenly
        let two = UniformHypergraph::new(2, 5, vec![vec![0, 1], vec![2, 3]]).unwrap();
        let est = p_spectral_radius(&two, 1.5, &opts()).unwrap();
        assert!((est.lambda - 2f64.powf(1.0 - 2.0 / 1.5)).abs() < 1e-10);
        let est = p_spectral_radius(&two, 4.0, &opts()).unwrap();
        let one = 2f64.powf(0.5);
        let want = (2.0 * one.powf(2.0)).powf(0.5);
        assert!((est.lambda - want).abs() < 1e-10, "{}", est.lambda);
        assert!(est.converged);
    }

    #[test]
    fn monotone_scan_single_edge_is_constant() {
        let h = UniformHypergraph::new(3, 3, vec![vec![0, 1, 2]]).unwrap();
        let scan = lambda_p_monotone_scan(&h, &[1.0, 2.0, 3.0, 6.0], &opts()).unwrap();
        for pt in scan {
            assert!((pt.normalized - 1.0 / 27.0).abs() < 1e-12, "{pt:?}");
        }
        assert!(lambda_p_monotone_scan(&h, &[2.0, 1.0], &opts()).is_err());
    }

    #[test]
    fn estimate_json_fields() {
        let h = UniformHypergraph::new(3, 3, vec![vec![0, 1, 2]]).unwrap();
        let est = p_spectral_radius(&h, 3.0, &opts()).unwrap();
        let v: serde_json::Value = serde_json::to_value(&est).unwrap();
        for key in ["lambda", "p", "residual", "witness", "iterations", "restarts_used", "converged", "seed"] {
            assert!(v.get(key).is_some(), "{key}");
        }
        assert_eq!(v["witness"].as_array().unwrap().len(), 3);
    }
}
