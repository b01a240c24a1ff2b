//! Newton refinement of the eigenequations on a fixed support, and the
//! acceptance tests applied to every ascent result.

use nalgebra::{DMatrix, DVector};

use super::problem::{pow_pm1, Problem};
use super::SolverOptions;

/// A polished local maximum of one restart.
#[derive(Clone, Debug)]
pub(crate) struct Candidate {
    pub x: Vec<f64>,
    pub lambda: f64,
    pub residual: f64,
    pub converged: bool,
    pub iterations: usize,
}

/// Support thresholds (relative to the largest entry) tried in order.
const THRESHOLDS: [f64; 3] = [1e-10, 1e-7, 1e-4];

pub(crate) fn finish(problem: &Problem, x: Vec<f64>, iterations: usize, opts: &SolverOptions) -> Candidate {
    let raw = evaluate(problem, x.clone(), iterations, opts);
    let floor = raw.lambda - 1e-12 * raw.lambda.max(1.0);
    let top = x.iter().copied().fold(0.0, f64::max);
    let mut best = raw;
    for thr in THRESHOLDS {
        let mut y = x.clone();
        y.iter_mut().filter(|v| **v <= thr * top).for_each(|v| *v = 0.0);
        if !problem.normalize(&mut y) {
            continue;
        }
        newton(problem, &mut y);
        let c = evaluate(problem, y, iterations, opts);
        if c.lambda >= floor && better(&c, &best) {
            best = c;
        }
        if best.converged {
            break;
        }
    }
    best
}

/// Converged beats unconverged; then the larger value; then the smaller
/// residual.
fn better(a: &Candidate, b: &Candidate) -> bool {
    if a.converged != b.converged {
        return a.converged;
    }
    if a.lambda != b.lambda {
        return a.lambda > b.lambda;
    }
    a.residual < b.residual
}

pub(crate) fn evaluate(problem: &Problem, x: Vec<f64>, iterations: usize, opts: &SolverOptions) -> Candidate {
    let p = problem.p();
    let r = problem.rank() as f64;
    let mut g = vec![0.0; x.len()];
    problem.gradient(&x, &mut g);
    let lambda = problem.value(&x);
    let residual = problem.residual(&x, &g, lambda);
    let kkt = x.iter().zip(&g).filter(|(xi, _)| **xi == 0.0).all(|(_, &gi)| {
        let bound = if p == 1.0 { lambda } else { 0.0 };
        gi / r <= bound + opts.tol
    });
    let positive = p <= r - 1.0 || x.iter().all(|&v| v > 1e-12);
    Candidate { converged: residual <= opts.tol && kkt && positive, x, lambda, residual, iterations }
}

/// Newton's method on `g_S / r = lambda x_S^(p-1)`, `sum x_S^p = 1` over the
/// positive entries of `x`. Steps are halved until the residual decreases
/// with the iterate staying positive. The least-squares solve tolerates
/// singular systems (maximizers that are not isolated).
pub(crate) fn newton(problem: &Problem, x: &mut [f64]) {
    let p = problem.p();
    let support: Vec<usize> = (0..x.len()).filter(|&i| x[i] > 0.0).collect();
    let k = support.len();
    if k == 0 {
        return;
    }
    let mut lambda = problem.value(x);
    let mut g = vec![0.0; x.len()];
    let mut f = system(problem, x, &support, lambda, &mut g);
    for _ in 0..40 {
        let norm = f.amax();
        if norm < 1e-15 * lambda.max(1.0) {
            break;
        }
        let h = problem.scaled_hessian(x, &support);
        let mut j = DMatrix::zeros(k + 1, k + 1);
        for a in 0..k {
            let xa = x[support[a]];
            for b in 0..k {
                j[(a, b)] = h[(a, b)];
            }
            if p != 1.0 {
                j[(a, a)] -= lambda * (p - 1.0) * xa.powf(p - 2.0);
            }
            j[(a, k)] = -pow_pm1(xa, p);
            j[(k, a)] = p * pow_pm1(xa, p);
        }
        let Ok(step) = j.svd(true, true).solve(&(-&f), 1e-13) else {
            break;
        };
        let mut alpha = 1.0;
        let mut improved = false;
        let mut trial = x.to_vec();
        for _ in 0..12 {
            let mut ok = true;
            for a in 0..k {
                let v = x[support[a]] + alpha * step[a];
                if v <= 0.0 || !v.is_finite() {
                    ok = false;
                    break;
                }
                trial[support[a]] = v;
            }
            if ok {
                let trial_lambda = lambda + alpha * step[k];
                let tf = system(problem, &trial, &support, trial_lambda, &mut g);
                if tf.amax() < norm {
                    x.copy_from_slice(&trial);
                    lambda = trial_lambda;
                    f = tf;
                    improved = true;
                    break;
                }
            }
            alpha *= 0.5;
        }
        if !improved {
            break;
        }
    }
    problem.normalize(x);
}

fn system(problem: &Problem, x: &[f64], support: &[usize], lambda: f64, g: &mut [f64]) -> DVector<f64> {
    let p = problem.p();
    let r = problem.rank() as f64;
    problem.gradient(x, g);
    let k = support.len();
    let mut f = DVector::zeros(k + 1);
    let mut norm = 0.0;
    for (a, &i) in support.iter().enumerate() {
        f[a] = g[i] / r - lambda * pow_pm1(x[i], p);
        norm += if p == 1.0 { x[i] } else { x[i].powf(p) };
    }
    f[k] = norm - 1.0;
    f
}
