use super::problem::{pow_pm1, Problem};
use super::strategy::{Ascent, AscentStrategy, Stall, HANDOFF};
use super::SolverOptions;

/// Gradient ascent on the nonnegative p-sphere: step along
/// `d = g/r - P(x) x^(p-1)`, clamp at zero, renormalize. The derivative of
/// `P` along this path at step 0 is `r |d|^2`, which drives the Armijo test.
pub struct ProjectedGradient;

impl AscentStrategy for ProjectedGradient {
    fn name(&self) -> &'static str {
        "projected-gradient"
    }

    fn applicable(&self, _rank: usize, p: f64) -> bool {
        p >= 1.0
    }

    fn ascend(&self, problem: &Problem, mut x: Vec<f64>, opts: &SolverOptions) -> Ascent {
        let p = problem.p();
        let r = problem.rank() as f64;
        let n = x.len();
        let mut g = vec![0.0; n];
        let mut d = vec![0.0; n];
        let mut y = vec![0.0; n];
        let mut eta = 1.0;
        let mut stall = Stall::new();
        for it in 0..opts.max_iters {
            let lambda = problem.gradient_and_value(&x, &mut g);
            let mut worst: f64 = 0.0;
            let mut sq = 0.0;
            for i in 0..n {
                d[i] = g[i] / r - lambda * if x[i] > 0.0 { pow_pm1(x[i], p) } else { pow_pm1(0.0, p) };
                let proj = if x[i] > 0.0 { d[i] } else { d[i].max(0.0) };
                worst = worst.max(proj.abs());
                sq += proj * proj;
            }
            if worst <= HANDOFF * lambda.max(1.0) || stall.stalled(lambda) {
                return Ascent { x, iterations: it };
            }
            let mut accepted = false;
            while eta > 1e-18 {
                for i in 0..n {
                    y[i] = (x[i] + eta * d[i]).max(0.0);
                }
                if problem.normalize(&mut y) && problem.value(&y) >= lambda + 1e-4 * eta * r * sq {
                    accepted = true;
                    break;
                }
                eta *= 0.5;
            }
            if !accepted {
                return Ascent { x, iterations: it };
            }
            std::mem::swap(&mut x, &mut y);
            eta = (eta * 2.0).min(1e6);
        }
        Ascent { x, iterations: opts.max_iters }
    }
}
