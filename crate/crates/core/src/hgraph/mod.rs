//! Simple graphs, uniform hypergraphs and the constructions built on them.
//!
//! Both types are immutable once built. Vertices are `0..n`; edges are
//! normalized on construction (graph pairs as `(min, max)`, hyperedges
//! sorted ascending, the hyperedge list sorted lexicographically) so that
//! structural equality is labeled equality.

mod canon;
mod families;
mod io;
mod stats;

use std::collections::{HashSet, VecDeque};

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

pub use canon::{canonical_form, is_isomorphic, CanonicalForm};
pub use families::{attach_two_paths, construct_graph, GraphFamily};
pub use io::{parse_graph, parse_uhg, write_graph, write_uhg};
pub use stats::{clique_number, graph_stats, Extent, GraphStats};

/// Labeled simple graph. Edge order is preserved (it fixes enumeration order).
#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct Graph {
    n: usize,
    edges: Vec<(usize, usize)>,
}

impl Graph {
    pub fn new(n: usize, edges: impl IntoIterator<Item = (usize, usize)>) -> Result<Self> {
        let mut seen = HashSet::new();
        let mut out = Vec::new();
        for (a, b) in edges {
            if a == b {
                return Err(Error::InvalidStructure(format!("loop at vertex {a}")));
            }
            if a >= n || b >= n {
                return Err(Error::InvalidStructure(format!("edge ({a}, {b}) out of range for {n} vertices")));
            }
            let e = (a.min(b), a.max(b));
            if !seen.insert(e) {
                return Err(Error::InvalidStructure(format!("duplicate edge {e:?}")));
            }
            out.push(e);
        }
        Ok(Graph { n, edges: out })
    }

    pub fn empty(n: usize) -> Self {
        Graph { n, edges: Vec::new() }
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn m(&self) -> usize {
        self.edges.len()
    }

    pub fn edges(&self) -> &[(usize, usize)] {
        &self.edges
    }

    pub fn has_edge(&self, a: usize, b: usize) -> bool {
        let e = (a.min(b), a.max(b));
        self.edges.contains(&e)
    }

    pub fn adjacency(&self) -> Vec<Vec<usize>> {
        let mut adj = vec![Vec::new(); self.n];
        for &(a, b) in &self.edges {
            adj[a].push(b);
            adj[b].push(a);
        }
        for list in &mut adj {
            list.sort_unstable();
        }
        adj
    }

    pub fn degree(&self, v: usize) -> usize {
        self.edges.iter().filter(|&&(a, b)| a == v || b == v).count()
    }

    pub fn is_connected(&self) -> bool {
        if self.n == 0 {
            return true;
        }
        let adj = self.adjacency();
        let mut seen = vec![false; self.n];
        let mut queue = VecDeque::from([0]);
        seen[0] = true;
        let mut count = 1;
        while let Some(v) = queue.pop_front() {
            for &w in &adj[v] {
                if !seen[w] {
                    seen[w] = true;
                    count += 1;
                    queue.push_back(w);
                }
            }
        }
        count == self.n
    }

    /// Returns a copy with one more edge.
    pub fn with_edge(&self, a: usize, b: usize) -> Result<Graph> {
        Graph::new(self.n, self.edges.iter().copied().chain([(a, b)]))
    }

    /// Rank-2 hypergraph with the same vertices and edges.
    pub fn to_hypergraph(&self) -> UniformHypergraph {
        UniformHypergraph::new(2, self.n, self.edges.iter().map(|&(a, b)| vec![a, b]))
            .expect("a simple graph is a valid 2-graph")
    }
}

/// Rank-`r` hypergraph with pairwise distinct edges.
///
/// Rank 1 is accepted so that the link of a vertex in a 2-graph is
/// representable; everything spectral expects rank at least 2.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct UniformHypergraph {
    rank: usize,
    n: usize,
    edges: Vec<Vec<usize>>,
}

impl UniformHypergraph {
    pub fn new(rank: usize, n: usize, edges: impl IntoIterator<Item = Vec<usize>>) -> Result<Self> {
        if rank == 0 {
            return Err(Error::param("rank must be positive"));
        }
        let mut out: Vec<Vec<usize>> = Vec::new();
        for mut e in edges {
            if e.len() != rank {
                return Err(Error::InvalidStructure(format!("edge {e:?} does not have {rank} vertices")));
            }
            e.sort_unstable();
            if e.windows(2).any(|w| w[0] == w[1]) {
                return Err(Error::InvalidStructure(format!("edge {e:?} repeats a vertex")));
            }
            if e.last().is_some_and(|&v| v >= n) {
                return Err(Error::InvalidStructure(format!("edge {e:?} out of range for {n} vertices")));
            }
            out.push(e);
        }
        out.sort_unstable();
        if let Some(w) = out.windows(2).find(|w| w[0] == w[1]) {
            return Err(Error::MultipleEdge(w[0].clone()));
        }
        Ok(UniformHypergraph { rank, n, edges: out })
    }

    pub fn rank(&self) -> usize {
        self.rank
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn m(&self) -> usize {
        self.edges.len()
    }

    pub fn edges(&self) -> &[Vec<usize>] {
        &self.edges
    }

    pub fn contains_edge(&self, edge: &[usize]) -> bool {
        let mut e = edge.to_vec();
        e.sort_unstable();
        self.edges.binary_search(&e).is_ok()
    }

    pub fn degrees(&self) -> Vec<usize> {
        let mut deg = vec![0; self.n];
        for e in &self.edges {
            for &v in e {
                deg[v] += 1;
            }
        }
        deg
    }

    /// Vertex-to-incident-edge-indices table.
    pub fn incidence(&self) -> Vec<Vec<usize>> {
        let mut inc = vec![Vec::new(); self.n];
        for (i, e) in self.edges.iter().enumerate() {
            for &v in e {
                inc[v].push(i);
            }
        }
        inc
    }

    /// True when every vertex lies in one component of the incidence structure
    /// (so a hypergraph with an isolated vertex and `n > 1` is disconnected).
    pub fn is_connected(&self) -> bool {
        if self.n <= 1 {
            return true;
        }
        let mut parent: Vec<usize> = (0..self.n).collect();
        fn find(parent: &mut [usize], mut v: usize) -> usize {
            while parent[v] != v {
                parent[v] = parent[parent[v]];
                v = parent[v];
            }
            v
        }
        for e in &self.edges {
            for w in e.windows(2) {
                let (a, b) = (find(&mut parent, w[0]), find(&mut parent, w[1]));
                if a != b {
                    parent[a] = b;
                }
            }
        }
        let root = find(&mut parent, 0);
        (1..self.n).all(|v| find(&mut parent, v) == root)
    }

    /// Removes isolated vertices, relabeling the rest in increasing order.
    /// Returns the stripped hypergraph and the old label of each new vertex.
    pub fn strip_isolated(&self) -> (UniformHypergraph, Vec<usize>) {
        let deg = self.degrees();
        let kept: Vec<usize> = (0..self.n).filter(|&v| deg[v] > 0).collect();
        let mut relabel = vec![usize::MAX; self.n];
        for (new, &old) in kept.iter().enumerate() {
            relabel[old] = new;
        }
        let edges = self.edges.iter().map(|e| e.iter().map(|&v| relabel[v]).collect());
        let h = UniformHypergraph::new(self.rank, kept.len(), edges).expect("relabeling preserves validity");
        (h, kept)
    }

    /// Same edges on `n + extra` vertices.
    pub fn with_isolated(&self, extra: usize) -> UniformHypergraph {
        UniformHypergraph { rank: self.rank, n: self.n + extra, edges: self.edges.clone() }
    }

    /// Applies a vertex relabeling `perm[old] = new` onto `n_new` vertices.
    pub fn relabel(&self, perm: &[usize], n_new: usize) -> Result<UniformHypergraph> {
        if perm.len() != self.n {
            return Err(Error::LengthMismatch { expected: self.n, got: perm.len() });
        }
        UniformHypergraph::new(self.rank, n_new, self.edges.iter().map(|e| e.iter().map(|&v| perm[v]).collect()))
    }

    /// Interprets a rank-2 hypergraph as a graph.
    pub fn to_graph(&self) -> Result<Graph> {
        if self.rank != 2 {
            return Err(Error::param(format!("rank {} is not a graph", self.rank)));
        }
        Graph::new(self.n, self.edges.iter().map(|e| (e[0], e[1])))
    }
}

/// Enlarges every edge by the same `t` new vertices `n..n+t`.
pub fn suspension(h: &UniformHypergraph, t: usize) -> Result<UniformHypergraph> {
    if t == 0 {
        return Err(Error::param("suspension needs t >= 1"));
    }
    if h.m() == 0 {
        return Err(Error::param("suspension of an empty hypergraph"));
    }
    let n = h.n();
    UniformHypergraph::new(h.rank() + t, n + t, h.edges().iter().map(|e| e.iter().copied().chain(n..n + t).collect()))
}

/// Rank-`r` expansion: graph edge `i` receives the private vertices
/// `n + i(r-2) .. n + (i+1)(r-2)`.
pub fn expansion(g: &Graph, r: usize) -> Result<UniformHypergraph> {
    if r < 3 {
        return Err(Error::param(format!("expansion needs rank >= 3, got {r}")));
    }
    let n = g.n();
    let extra = r - 2;
    UniformHypergraph::new(
        r,
        n + extra * g.m(),
        g.edges().iter().enumerate().map(|(i, &(a, b))| {
            let start = n + i * extra;
            [a, b].into_iter().chain(start..start + extra).collect()
        }),
    )
}

/// Link of `v` with the vertex relabeling that drops `v`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Link {
    pub hypergraph: UniformHypergraph,
    /// `mapping[old] = Some(new)` for every vertex other than `v`.
    pub mapping: Vec<Option<usize>>,
}

/// The `(r-1)`-uniform hypergraph of all `S` with `S ∪ {v}` an edge.
pub fn link(h: &UniformHypergraph, v: usize) -> Result<Link> {
    if v >= h.n() {
        return Err(Error::param(format!("vertex {v} out of range")));
    }
    if h.rank() < 2 {
        return Err(Error::param("link of a rank-1 hypergraph"));
    }
    let mapping: Vec<Option<usize>> = (0..h.n())
        .map(|w| match w.cmp(&v) {
            std::cmp::Ordering::Less => Some(w),
            std::cmp::Ordering::Equal => None,
            std::cmp::Ordering::Greater => Some(w - 1),
        })
        .collect();
    let edges = h
        .edges()
        .iter()
        .filter(|e| e.contains(&v))
        .map(|e| e.iter().filter(|&&w| w != v).map(|&w| mapping[w].expect("w != v")).collect());
    let hypergraph = UniformHypergraph::new(h.rank() - 1, h.n() - 1, edges)?;
    Ok(Link { hypergraph, mapping })
}

/// Edge remainders `e \ {v}` for edges through `v`, in original labels.
pub(crate) fn link_sets(h: &UniformHypergraph, v: usize) -> Vec<Vec<usize>> {
    h.edges().iter().filter(|e| e.contains(&v)).map(|e| e.iter().copied().filter(|&w| w != v).collect()).collect()
}
