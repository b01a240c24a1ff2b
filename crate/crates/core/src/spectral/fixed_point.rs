use super::problem::Problem;
use super::strategy::{Ascent, AscentStrategy, Stall, HANDOFF};
use super::SolverOptions;

/// Multiplicative update `x_i <- (g_i / r)^(1/(p-1))`, damped in log space.
///
/// At a local maximum the undamped map has Jacobian eigenvalues in
/// `[-(r-1)/(p-1), 1]`, so it oscillates for `r-1 < p < r`. Mixing with
/// weight `theta` moves the bottom of that range to
/// `1 - theta (p+r-2)/(p-1)`, which stays above -1 for the chosen theta.
pub struct FixedPoint;

impl FixedPoint {
    pub fn damping(rank: usize, p: f64) -> f64 {
        (1.5 * (p - 1.0) / (p + rank as f64 - 2.0)).min(1.0)
    }
}

impl AscentStrategy for FixedPoint {
    fn name(&self) -> &'static str {
        "fixed-point"
    }

    fn applicable(&self, _rank: usize, p: f64) -> bool {
        p > 1.0
    }

    fn ascend(&self, problem: &Problem, mut x: Vec<f64>, opts: &SolverOptions) -> Ascent {
        let p = problem.p();
        let r = problem.rank() as f64;
        let theta = Self::damping(problem.rank(), p);
        let gain = theta / (p - 1.0);
        let mut g = vec![0.0; x.len()];
        let mut logs = vec![f64::NEG_INFINITY; x.len()];
        let mut stall = Stall::new();
        for it in 0..opts.max_iters {
            let lambda = problem.gradient_and_value(&x, &mut g);
            if problem.residual(&x, &g, lambda) <= HANDOFF * lambda.max(1.0) || stall.stalled(lambda) {
                return Ascent { x, iterations: it };
            }
            let mut top = f64::NEG_INFINITY;
            for i in 0..x.len() {
                logs[i] = if x[i] > 0.0 && g[i] > 0.0 {
                    (1.0 - theta) * x[i].ln() + gain * (g[i] / r).ln()
                } else {
                    f64::NEG_INFINITY
                };
                top = top.max(logs[i]);
            }
            if top == f64::NEG_INFINITY {
                return Ascent { x, iterations: it };
            }
            for i in 0..x.len() {
                x[i] = (logs[i] - top).exp();
            }
            problem.normalize(&mut x);
        }
        Ascent { x, iterations: opts.max_iters }
    }
}
