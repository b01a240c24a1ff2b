//! Brute-force reference for small hypergraphs, sharing no code with the
//! solver: every vertex subset is tried as a support and iterated from its
//! uniform point with `x <- normalize((x * g)^(1/p))`, then a handful of
//! random full-support starts are added.
//!
//! The update is locally stable at maxima for `p > r - 2` and monotone at
//! `p = 1`; otherwise it is damped in log space by `p / (p + r - 2)`.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::error::{Error, Result};
use crate::hgraph::UniformHypergraph;

pub const ORACLE_MAX_VERTICES: usize = 8;

const RANDOM_STARTS: usize = 16;
const MAX_SWEEPS: usize = 60_000;

pub fn oracle_spectral_radius(h: &UniformHypergraph, p: f64) -> Result<f64> {
    let n = h.n();
    if n > ORACLE_MAX_VERTICES {
        return Err(Error::param(format!("oracle needs n <= {ORACLE_MAX_VERTICES}, got {n}")));
    }
    if !(p >= 1.0 && p.is_finite()) {
        return Err(Error::param(format!("p must be >= 1, got {p}")));
    }
    let r = h.rank();
    let edges: Vec<u32> = h.edges().iter().map(|e| e.iter().fold(0u32, |m, &v| m | (1 << v))).collect();
    if edges.is_empty() {
        return Ok(0.0);
    }
    let theta = if p == 1.0 || p > r as f64 - 2.0 { 1.0 } else { p / (p + r as f64 - 2.0) };
    let it = Iteration { n, r, p, theta, edges: &edges };
    let mut best: f64 = 0.0;
    for mask in 1u32..(1 << n) {
        let inside: Vec<u32> = edges.iter().copied().filter(|&e| e & !mask == 0).collect();
        let covered = inside.iter().fold(0u32, |m, &e| m | e);
        // every support vertex must lie in an edge of the induced part
        if inside.is_empty() || covered != mask {
            continue;
        }
        let x: Vec<f64> = (0..n).map(|v| if mask >> v & 1 == 1 { 1.0 } else { 0.0 }).collect();
        best = best.max(it.run(x));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(0x5EED_0AC1E);
    for _ in 0..RANDOM_STARTS {
        let x: Vec<f64> = (0..n).map(|_| rng.gen_range(0.01..1.0)).collect();
        best = best.max(it.run(x));
    }
    Ok(best)
}

struct Iteration<'a> {
    n: usize,
    r: usize,
    p: f64,
    theta: f64,
    edges: &'a [u32],
}

impl Iteration<'_> {
    fn scale(&self, x: &mut [f64]) {
        let s: f64 = x.iter().map(|v| v.powf(self.p)).sum::<f64>().powf(1.0 / self.p);
        x.iter_mut().for_each(|v| *v /= s);
    }

    /// Terms `prod_{u in e} x_u` and `sum_{e ∋ v} prod_{u in e, u != v} x_u`.
    fn terms(&self, x: &[f64], partial: &mut [f64]) -> f64 {
        partial.iter_mut().for_each(|v| *v = 0.0);
        let mut total = 0.0;
        for &e in self.edges {
            let mut full = 1.0;
            for v in 0..self.n {
                if e >> v & 1 == 1 {
                    full *= x[v];
                }
            }
            total += full;
            for v in 0..self.n {
                if e >> v & 1 == 1 {
                    let mut rest = 1.0;
                    for u in 0..self.n {
                        if u != v && e >> u & 1 == 1 {
                            rest *= x[u];
                        }
                    }
                    partial[v] += rest;
                }
            }
        }
        self.r as f64 * total
    }

    fn run(&self, mut x: Vec<f64>) -> f64 {
        self.scale(&mut x);
        let mut partial = vec![0.0; self.n];
        let mut value = self.terms(&x, &mut partial);
        let mut checkpoint = value;
        let mut last_gain = f64::INFINITY;
        for sweep in 1..=MAX_SWEEPS {
            let mut next: Vec<f64> = x
                .iter()
                .zip(&partial)
                .map(|(&xi, &gi)| {
                    let target = (xi * gi).powf(1.0 / self.p);
                    if self.theta == 1.0 || xi == 0.0 {
                        target
                    } else {
                        xi.powf(1.0 - self.theta) * target.powf(self.theta)
                    }
                })
                .collect();
            if next.iter().all(|&v| v == 0.0) {
                return value;
            }
            self.scale(&mut next);
            let moved = next.iter().zip(&x).map(|(a, b)| (a - b).abs()).fold(0.0, f64::max);
            x = next;
            value = value.max(self.terms(&x, &mut partial));
            if moved < 1e-11 {
                break;
            }
            // stop once the gains, extrapolated geometrically, are negligible
            if sweep % 500 == 0 {
                let gain = value - checkpoint;
                let q = (gain / last_gain).min(0.999);
                if gain <= 0.0 || gain / (1.0 - q) <= 2e-9 * value.max(1.0) {
                    break;
                }
                last_gain = gain;
                checkpoint = value;
            }
        }
        value
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::hgraph::{construct_graph, GraphFamily};

    #[test]
    fn single_edge_closed_form() {
        let h = UniformHypergraph::new(3, 3, vec![vec![0, 1, 2]]).unwrap();
        assert!((oracle_spectral_radius(&h, 3.0).unwrap() - 1.0).abs() < 1e-12);
        for p in [1.0, 2.0, 5.0] {
            let want = 3f64.powf(1.0 - 3.0 / p);
            assert!((oracle_spectral_radius(&h, p).unwrap() - want).abs() < 1e-12);
        }
    }

    #[test]
    fn triangle_at_p1_is_two_thirds() {
        let k3 = construct_graph(&GraphFamily::Complete, &[3]).unwrap().to_hypergraph();
        assert!((oracle_spectral_radius(&k3, 1.0).unwrap() - 2.0 / 3.0).abs() < 1e-12);
    }

    #[test]
    fn refuses_large_inputs() {
        let h = UniformHypergraph::new(2, 9, vec![vec![0, 1]]).unwrap();
        assert!(oracle_spectral_radius(&h, 2.0).is_err());
    }
}
