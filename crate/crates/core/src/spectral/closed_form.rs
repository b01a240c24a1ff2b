use crate::hgraph::{clique_number, Graph};

/// `lambda^(p)(S_n) = 2^(1-2/p) (n-1)^(1-1/p)` for the star on `n` vertices.
pub fn star_lambda(n: usize, p: f64) -> f64 {
    2f64.powf(1.0 - 2.0 / p) * ((n - 1) as f64).powf(1.0 - 1.0 / p)
}

/// `lambda^(2)` of the star on `n - 1` vertices plus one leaf edge: the
/// largest root of `x^3 - x^2 - (n-2) x + n - 4`.
pub fn star_plus_lambda_p2(n: usize) -> f64 {
    let nf = n as f64;
    let f = |x: f64| ((x - 1.0) * x - (nf - 2.0)) * x + nf - 4.0;
    let df = |x: f64| (3.0 * x - 2.0) * x - (nf - 2.0);
    // f is increasing beyond its larger critical point and positive at n
    let mut lo = (1.0 + (3.0 * nf - 5.0).sqrt()) / 3.0;
    let mut hi = nf.max(lo + 1.0);
    let mut x = hi;
    for _ in 0..200 {
        let fx = f(x);
        if fx == 0.0 {
            return x;
        }
        if fx > 0.0 {
            hi = x;
        } else {
            lo = x;
        }
        let newton = x - fx / df(x);
        x = if newton > lo && newton < hi { newton } else { 0.5 * (lo + hi) };
        if hi - lo < 1e-15 * hi {
            break;
        }
    }
    // settle on the float neighbor with the smallest |f|
    let mut best = x;
    for _ in 0..4 {
        for y in [best.next_down(), best.next_up()] {
            if f(y).abs() < f(best).abs() {
                best = y;
            }
        }
    }
    best
}

/// `(r+1)^(1-(r+1)/p) / r^(1-r/p)`: the ratio `lambda(H * K_1) / lambda(H)`
/// for an `r`-graph `H`.
pub fn suspension_factor(r: usize, p: f64) -> f64 {
    let r = r as f64;
    (r + 1.0).powf(1.0 - (r + 1.0) / p) / r.powf(1.0 - r / p)
}

/// `lambda^(1)(G) = 1 - 1/omega(G)`; zero without edges.
pub fn motzkin_straus_lambda1(g: &Graph) -> f64 {
    if g.m() == 0 {
        return 0.0;
    }
    1.0 - 1.0 / clique_number(g) as f64
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::hgraph::{construct_graph, GraphFamily};

    #[test]
    fn star_values() {
        assert!((star_lambda(10, 2.0) - 3.0).abs() < 1e-15);
        for n in 2..20 {
            assert!((star_lambda(n, 1.0) - 0.5).abs() < 1e-15);
        }
        let want = 2f64.sqrt() * 4f64.powf(0.75);
        assert!((star_lambda(5, 4.0) - want).abs() < 1e-14);
    }

    #[test]
    fn star_plus_cubic_root() {
        assert_eq!(star_plus_lambda_p2(10), 3.0);
        assert!(star_plus_lambda_p2(11) < 10f64.sqrt());
        for n in 5..40 {
            let x = star_plus_lambda_p2(n);
            let nf = n as f64;
            let f = x * x * x - x * x - (nf - 2.0) * x + nf - 4.0;
            assert!(f.abs() < 1e-9 * nf, "n={n} f={f}");
        }
    }

    #[test]
    fn suspension_factor_values() {
        assert!((suspension_factor(2, 1.0) - 2.0 / 9.0).abs() < 1e-15);
        assert!((suspension_factor(2, 2.0) - 3f64.powf(-0.5)).abs() < 1e-15);
        for p in [1.0, 1.5, 2.0, 3.0, 7.0] {
            let lhs = suspension_factor(2, p) * 2f64.powf(1.0 - 2.0 / p);
            assert!((lhs - 3f64.powf(1.0 - 3.0 / p)).abs() < 1e-14);
        }
    }

    #[test]
    fn motzkin_straus_examples() {
        let k3 = construct_graph(&GraphFamily::Complete, &[3]).unwrap();
        assert!((motzkin_straus_lambda1(&k3) - 2.0 / 3.0).abs() < 1e-15);
        let c6 = construct_graph(&GraphFamily::Cycle, &[6]).unwrap();
        assert_eq!(motzkin_straus_lambda1(&c6), 0.5);
        assert_eq!(motzkin_straus_lambda1(&Graph::empty(1)), 0.0);
        let chain = suspension_factor(2, 1.0) * motzkin_straus_lambda1(&k3);
        assert!((chain - 4.0 / 27.0).abs() < 1e-15);
    }
}
