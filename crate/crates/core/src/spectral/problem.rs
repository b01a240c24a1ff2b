use nalgebra::DMatrix;

/// `r * sum_e prod_{i in e} x_i`.
pub(crate) fn form_value(r: usize, edges: &[Vec<usize>], x: &[f64]) -> f64 {
    let sum: f64 = edges.iter().map(|e| e.iter().map(|&v| x[v]).product::<f64>()).sum();
    r as f64 * sum
}

/// `out[i] = r * sum_{e ∋ i} prod_{j in e, j != i} x_j`.
pub(crate) fn form_gradient(r: usize, edges: &[Vec<usize>], x: &[f64], out: &mut [f64]) {
    out.iter_mut().for_each(|g| *g = 0.0);
    for e in edges {
        for (a, &i) in e.iter().enumerate() {
            let mut prod = 1.0;
            for (b, &j) in e.iter().enumerate() {
                if a != b {
                    prod *= x[j];
                }
            }
            out[i] += prod;
        }
    }
    let rf = r as f64;
    out.iter_mut().for_each(|g| *g *= rf);
}

pub(crate) fn p_norm(x: &[f64], p: f64) -> f64 {
    if p == 1.0 {
        x.iter().sum()
    } else {
        x.iter().map(|v| v.powf(p)).sum::<f64>().powf(1.0 / p)
    }
}

/// Scales `x` onto the unit p-sphere; false if `x` is zero.
pub(crate) fn normalize(x: &mut [f64], p: f64) -> bool {
    let norm = p_norm(x, p);
    if !(norm > 0.0 && norm.is_finite()) {
        return false;
    }
    x.iter_mut().for_each(|v| *v /= norm);
    true
}

/// `x^(p-1)` with the conventions used by the eigenequations (`0^0 = 1`).
#[inline]
pub(crate) fn pow_pm1(x: f64, p: f64) -> f64 {
    if p == 1.0 {
        1.0
    } else {
        x.powf(p - 1.0)
    }
}

/// A connected hypergraph posed on its own compact vertex set, with the
/// exponent fixed. The input handed to every ascent strategy.
#[derive(Clone, Debug)]
pub struct Problem {
    r: usize,
    n: usize,
    p: f64,
    edges: Vec<Vec<usize>>,
}

impl Problem {
    /// `edges` must be `r`-sets over `0..n`.
    pub fn new(r: usize, n: usize, p: f64, edges: Vec<Vec<usize>>) -> Self {
        debug_assert!(edges.iter().all(|e| e.len() == r && e.iter().all(|&v| v < n)));
        Problem { r, n, p, edges }
    }

    pub fn rank(&self) -> usize {
        self.r
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn p(&self) -> f64 {
        self.p
    }

    pub fn edges(&self) -> &[Vec<usize>] {
        &self.edges
    }

    pub fn value(&self, x: &[f64]) -> f64 {
        form_value(self.r, &self.edges, x)
    }

    pub fn gradient(&self, x: &[f64], out: &mut [f64]) {
        form_gradient(self.r, &self.edges, x, out);
    }

    /// Fills the gradient and returns `P(x)` via the Euler identity.
    pub fn gradient_and_value(&self, x: &[f64], out: &mut [f64]) -> f64 {
        self.gradient(x, out);
        x.iter().zip(out.iter()).map(|(a, b)| a * b).sum::<f64>() / self.r as f64
    }

    /// Max eigenequation violation over the support of `x`.
    pub fn residual(&self, x: &[f64], grad: &[f64], lambda: f64) -> f64 {
        let r = self.r as f64;
        x.iter()
            .zip(grad)
            .filter(|(xi, _)| **xi > 0.0)
            .map(|(&xi, &gi)| (gi / r - lambda * pow_pm1(xi, self.p)).abs())
            .fold(0.0, f64::max)
    }

    pub fn normalize(&self, x: &mut [f64]) -> bool {
        normalize(x, self.p)
    }

    /// `d(g_i / r) / d x_j` for `i, j` in `support`; zero diagonal.
    pub(crate) fn scaled_hessian(&self, x: &[f64], support: &[usize]) -> DMatrix<f64> {
        let k = support.len();
        let mut pos = vec![usize::MAX; self.n];
        for (a, &v) in support.iter().enumerate() {
            pos[v] = a;
        }
        let mut h = DMatrix::zeros(k, k);
        for e in &self.edges {
            for (a, &i) in e.iter().enumerate() {
                if pos[i] == usize::MAX {
                    continue;
                }
                for (b, &j) in e.iter().enumerate().skip(a + 1) {
                    if pos[j] == usize::MAX {
                        continue;
                    }
                    let mut prod = 1.0;
                    for (c, &w) in e.iter().enumerate() {
                        if c != a && c != b {
                            prod *= x[w];
                        }
                    }
                    h[(pos[i], pos[j])] += prod;
                    h[(pos[j], pos[i])] += prod;
                }
            }
        }
        h
    }
}
