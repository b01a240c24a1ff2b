//! Seeded random instances. All draws go through the caller's generator,
//! so an instance is a function of its seed alone.

use rand::seq::SliceRandom;
use rand::Rng;

use crate::error::{Error, Result};
use crate::hgraph::{Graph, UniformHypergraph};

/// Connected `r`-graph on `n` vertices: a spanning sequence of edges, each
/// meeting the covered part and adding new vertices, then up to `extra`
/// further distinct edges.
pub fn random_connected_hypergraph<R: Rng>(r: usize, n: usize, extra: usize, rng: &mut R) -> Result<UniformHypergraph> {
    if r < 2 || n < r {
        return Err(Error::param(format!("need 2 <= r <= n, got r = {r}, n = {n}")));
    }
    let mut order: Vec<usize> = (0..n).collect();
    order.shuffle(rng);
    let mut edges: Vec<Vec<usize>> = vec![order[..r].to_vec()];
    let mut covered = r;
    while covered < n {
        let fresh = rng.gen_range(1..=(r - 1).min(n - covered));
        let old = r - fresh;
        let mut e: Vec<usize> = order[..covered].choose_multiple(rng, old).copied().collect();
        e.extend_from_slice(&order[covered..covered + fresh]);
        covered += fresh;
        edges.push(e);
    }
    for e in &mut edges {
        e.sort_unstable();
    }
    let target = edges.len() + rng.gen_range(0..=extra);
    for _ in 0..50 {
        if edges.len() >= target {
            break;
        }
        let mut e: Vec<usize> = rand::seq::index::sample(rng, n, r).into_vec();
        e.sort_unstable();
        if !edges.contains(&e) {
            edges.push(e);
        }
    }
    UniformHypergraph::new(r, n, edges)
}

/// Uniform labeled tree via a Prüfer sequence.
pub fn random_tree<R: Rng>(n: usize, rng: &mut R) -> Result<Graph> {
    if n < 2 {
        return Err(Error::param("a random tree needs at least 2 vertices"));
    }
    let seq: Vec<usize> = (0..n - 2).map(|_| rng.gen_range(0..n)).collect();
    let mut degree = vec![1usize; n];
    for &v in &seq {
        degree[v] += 1;
    }
    let mut edges = Vec::with_capacity(n - 1);
    for &v in &seq {
        let leaf = (0..n).find(|&u| degree[u] == 1).expect("a leaf remains");
        edges.push((leaf, v));
        degree[leaf] -= 1;
        degree[v] -= 1;
    }
    let rest: Vec<usize> = (0..n).filter(|&u| degree[u] == 1).collect();
    edges.push((rest[0], rest[1]));
    Graph::new(n, edges)
}

/// Random tree plus one random non-edge.
pub fn random_unicyclic<R: Rng>(n: usize, rng: &mut R) -> Result<Graph> {
    if n < 3 {
        return Err(Error::param("a unicyclic graph needs at least 3 vertices"));
    }
    let tree = random_tree(n, rng)?;
    let missing: Vec<(usize, usize)> =
        (0..n).flat_map(|a| (a + 1..n).map(move |b| (a, b))).filter(|&(a, b)| !tree.has_edge(a, b)).collect();
    let &(a, b) = missing.choose(rng).expect("a tree on >= 3 vertices misses an edge");
    tree.with_edge(a, b)
}

/// Random tree plus up to `extra` random non-edges.
pub fn random_connected_graph<R: Rng>(n: usize, extra: usize, rng: &mut R) -> Result<Graph> {
    let mut g = random_tree(n, rng)?;
    for _ in 0..rng.gen_range(0..=extra) {
        let (a, b) = (rng.gen_range(0..n), rng.gen_range(0..n));
        if a != b && !g.has_edge(a, b) {
            g = g.with_edge(a, b)?;
        }
    }
    Ok(g)
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    #[test]
    fn instances_have_the_promised_shape() {
        let mut rng = ChaCha8Rng::seed_from_u64(3);
        for i in 0..200 {
            let r = 2 + i % 3;
            let n = r + i % 5;
            let h = random_connected_hypergraph(r, n, 3, &mut rng).unwrap();
            assert!(h.is_connected() && h.n() == n, "{h:?}");
            let t = random_tree(2 + i % 9, &mut rng).unwrap();
            assert!(t.is_connected() && t.m() == t.n() - 1);
            let u = random_unicyclic(3 + i % 9, &mut rng).unwrap();
            assert!(u.is_connected() && u.m() == u.n());
        }
    }

    #[test]
    fn same_seed_same_instance() {
        let a = random_connected_hypergraph(3, 7, 3, &mut ChaCha8Rng::seed_from_u64(9)).unwrap();
        let b = random_connected_hypergraph(3, 7, 3, &mut ChaCha8Rng::seed_from_u64(9)).unwrap();
        assert_eq!(a, b);
    }
}
