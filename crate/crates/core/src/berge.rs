//! Berge hypergraphs of a graph: enumeration up to isomorphism inside a
//! bounded vertex pool, and recognition.
//!
//! `H` is Berge-`G` when some bijection `phi: E(G) -> E(H)` has
//! `e ⊆ phi(e)` for every graph edge `e`.

use std::collections::HashMap;
use std::fs;
use std::path::Path;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::hgraph::{canonical_form, write_uhg, CanonicalForm, Graph, UniformHypergraph};

/// Raw labeled assignments above which enumeration refuses unless forced.
pub const RAW_SPACE_LIMIT: f64 = 1e8;

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct BergeEmbedding {
    /// `vertex_map[v]` is the vertex of `H` playing graph vertex `v`.
    pub vertex_map: Vec<usize>,
    /// `assignment[i]` indexes the hyperedge (in `H.edges()`) that contains
    /// graph edge `i`.
    pub assignment: Vec<usize>,
}

impl BergeEmbedding {
    /// Containment and bijectivity against `h` and `g`.
    pub fn validate(&self, h: &UniformHypergraph, g: &Graph) -> bool {
        if self.assignment.len() != g.m() || h.m() != g.m() || self.vertex_map.len() != g.n() {
            return false;
        }
        let mut seen = vec![false; h.m()];
        for (i, &(a, b)) in g.edges().iter().enumerate() {
            let Some(f) = h.edges().get(self.assignment[i]) else {
                return false;
            };
            if seen[self.assignment[i]] {
                return false;
            }
            seen[self.assignment[i]] = true;
            if !f.contains(&self.vertex_map[a]) || !f.contains(&self.vertex_map[b]) {
                return false;
            }
        }
        let mut images = self.vertex_map.clone();
        images.sort_unstable();
        images.dedup();
        images.len() == g.n()
    }
}

#[derive(Clone, Debug)]
pub struct CatalogEntry {
    /// Isolated pool vertices removed; graph vertices keep their labels.
    pub hypergraph: UniformHypergraph,
    pub embedding: BergeEmbedding,
    pub key: CanonicalForm,
}

#[derive(Clone, Debug)]
pub struct BergeCatalog {
    pub base: Graph,
    pub rank: usize,
    pub extra: usize,
    /// Sorted by canonical key.
    pub entries: Vec<CatalogEntry>,
    /// Labeled assignments with pairwise distinct hyperedges.
    pub raw_assignments: u64,
    pub diagnostic: Option<String>,
}

/// First choice vector and its sequential rank, per class.
type Found = HashMap<CanonicalForm, (Vec<usize>, u64)>;

pub fn vertex_bound(g: &Graph, r: usize) -> usize {
    g.n() + r - 2
}

fn binomial(n: usize, k: usize) -> f64 {
    if k > n {
        return 0.0;
    }
    (0..k).fold(1.0, |acc, i| acc * (n - i) as f64 / (i + 1) as f64)
}

/// Size of the labeled search space, ignoring the distinctness filter.
pub fn raw_assignment_space(g: &Graph, r: usize, extra: usize) -> f64 {
    let pool = g.n() + extra;
    binomial(pool.saturating_sub(2), r.saturating_sub(2)).powi(g.m() as i32)
}

pub fn enumerate_berge(g: &Graph, r: usize, extra: usize) -> Result<BergeCatalog> {
    enumerate_berge_with(g, r, extra, false)
}

/// Every edge independently takes an `(r-2)`-subset of `pool \ e`, with the
/// pool `V(G)` plus `extra` fresh vertices; edges are processed in input
/// order, subsets in lexicographic order, and the first assignment reaching
/// each isomorphism class supplies its entry. Work is split by the choice
/// for the first edge; the merge keeps the sequential winner.
pub fn enumerate_berge_with(g: &Graph, r: usize, extra: usize, force: bool) -> Result<BergeCatalog> {
    if r < 2 {
        return Err(Error::param(format!("rank must be >= 2, got {r}")));
    }
    if extra > r - 2 {
        return Err(Error::param(format!("extra must be <= r - 2 = {}, got {extra}", r - 2)));
    }
    if g.m() == 0 || !g.is_connected() {
        return Err(Error::param("base graph must be connected with at least one edge"));
    }
    let pool = g.n() + extra;
    let empty = |diagnostic: String| BergeCatalog {
        base: g.clone(),
        rank: r,
        extra,
        entries: Vec::new(),
        raw_assignments: 0,
        diagnostic: Some(diagnostic),
    };
    if pool < r {
        return Ok(empty(format!("pool of {pool} vertices cannot hold an edge of size {r}")));
    }
    let space = raw_assignment_space(g, r, extra);
    if space > RAW_SPACE_LIMIT && !force {
        return Err(Error::ResourceGuard(format!(
            "raw assignment space {space:.3e} exceeds {RAW_SPACE_LIMIT:.0e}; force to override"
        )));
    }
    let options: Vec<Vec<Vec<usize>>> = g
        .edges()
        .iter()
        .map(|&(a, b)| {
            let rest: Vec<usize> = (0..pool).filter(|&v| v != a && v != b).collect();
            subsets(&rest, r - 2)
                .into_iter()
                .map(|s| {
                    let mut e: Vec<usize> = s.into_iter().chain([a, b]).collect();
                    e.sort_unstable();
                    e
                })
                .collect()
        })
        .collect();
    let parts: Vec<(Found, u64)> = (0..options[0].len())
        .into_par_iter()
        .map(|first| {
            let mut walk =
                Walk { options: &options, r, pool, chosen: vec![first], found: HashMap::new(), order: 0, raw: 0 };
            walk.descend();
            (walk.found, walk.raw)
        })
        .collect();
    let mut merged: HashMap<CanonicalForm, (usize, u64, Vec<usize>)> = HashMap::new();
    let mut raw = 0;
    for (part, (found, count)) in parts.into_iter().enumerate() {
        raw += count;
        for (key, (choice, order)) in found {
            let slot = merged.entry(key).or_insert((part, order, choice.clone()));
            if (part, order) < (slot.0, slot.1) {
                *slot = (part, order, choice);
            }
        }
    }
    let mut entries: Vec<CatalogEntry> =
        merged.into_iter().map(|(key, (_, _, choice))| entry(g, r, pool, &options, &choice, key)).collect();
    entries.sort_by(|a, b| a.key.cmp(&b.key));
    Ok(BergeCatalog { base: g.clone(), rank: r, extra, entries, raw_assignments: raw, diagnostic: None })
}

struct Walk<'a> {
    options: &'a [Vec<Vec<usize>>],
    r: usize,
    pool: usize,
    chosen: Vec<usize>,
    found: Found,
    order: u64,
    raw: u64,
}

impl Walk<'_> {
    fn descend(&mut self) {
        let depth = self.chosen.len();
        if depth == self.options.len() {
            self.raw += 1;
            let edges = self.chosen.iter().enumerate().map(|(i, &c)| self.options[i][c].clone());
            let h = UniformHypergraph::new(self.r, self.pool, edges).expect("distinct by construction");
            let key = canonical_form(&h);
            let order = self.order;
            self.order += 1;
            self.found.entry(key).or_insert_with(|| (self.chosen.clone(), order));
            return;
        }
        for c in 0..self.options[depth].len() {
            let cand = &self.options[depth][c];
            let clash = self.chosen.iter().enumerate().any(|(i, &k)| self.options[i][k] == *cand);
            if !clash {
                self.chosen.push(c);
                self.descend();
                self.chosen.pop();
            }
        }
    }
}

fn entry(
    g: &Graph,
    r: usize,
    pool: usize,
    options: &[Vec<Vec<usize>>],
    choice: &[usize],
    key: CanonicalForm,
) -> CatalogEntry {
    let labeled: Vec<Vec<usize>> = choice.iter().enumerate().map(|(i, &c)| options[i][c].clone()).collect();
    let full = UniformHypergraph::new(r, pool, labeled.clone()).expect("distinct by construction");
    let (hypergraph, kept) = full.strip_isolated();
    let mut relabel = vec![usize::MAX; pool];
    for (new, &old) in kept.iter().enumerate() {
        relabel[old] = new;
    }
    let assignment = labeled
        .iter()
        .map(|e| {
            let mapped: Vec<usize> = e.iter().map(|&v| relabel[v]).collect();
            hypergraph.edges().iter().position(|f| *f == mapped).expect("edge present")
        })
        .collect();
    let vertex_map = (0..g.n()).map(|v| relabel[v]).collect();
    CatalogEntry { hypergraph, embedding: BergeEmbedding { vertex_map, assignment }, key }
}

fn subsets(items: &[usize], k: usize) -> Vec<Vec<usize>> {
    fn rec(items: &[usize], k: usize, start: usize, cur: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
        if cur.len() == k {
            out.push(cur.clone());
            return;
        }
        for i in start..items.len() {
            cur.push(items[i]);
            rec(items, k, i + 1, cur, out);
            cur.pop();
        }
    }
    let mut out = Vec::new();
    rec(items, k, 0, &mut Vec::new(), &mut out);
    out
}

/// Searches injective vertex maps `V(G) -> V(H)` (graph vertices in BFS
/// order, pruned by pair coverage and degree), then matches graph edges to
/// containing hyperedges.
pub fn is_berge(h: &UniformHypergraph, g: &Graph) -> Option<BergeEmbedding> {
    if h.m() != g.m() || g.n() > h.n() {
        return None;
    }
    if g.m() == 0 {
        return Some(BergeEmbedding { vertex_map: (0..g.n()).collect(), assignment: Vec::new() });
    }
    let order = vertex_order(g);
    let adj = g.adjacency();
    let hdeg = h.degrees();
    let mut covers = vec![vec![false; h.n()]; h.n()];
    for e in h.edges() {
        for &a in e {
            for &b in e {
                covers[a][b] = a != b;
            }
        }
    }
    let mut search = MapSearch {
        h,
        g,
        order: &order,
        adj: &adj,
        hdeg: &hdeg,
        covers: &covers,
        map: vec![usize::MAX; g.n()],
        used: vec![false; h.n()],
    };
    search.extend(0)
}

fn vertex_order(g: &Graph) -> Vec<usize> {
    let adj = g.adjacency();
    let mut seen = vec![false; g.n()];
    let mut order = Vec::with_capacity(g.n());
    let mut starts: Vec<usize> = (0..g.n()).collect();
    starts.sort_by_key(|&v| std::cmp::Reverse(adj[v].len()));
    for s in starts {
        if seen[s] {
            continue;
        }
        seen[s] = true;
        let mut queue = std::collections::VecDeque::from([s]);
        while let Some(v) = queue.pop_front() {
            order.push(v);
            for &w in &adj[v] {
                if !seen[w] {
                    seen[w] = true;
                    queue.push_back(w);
                }
            }
        }
    }
    order
}

struct MapSearch<'a> {
    h: &'a UniformHypergraph,
    g: &'a Graph,
    order: &'a [usize],
    adj: &'a [Vec<usize>],
    hdeg: &'a [usize],
    covers: &'a [Vec<bool>],
    map: Vec<usize>,
    used: Vec<bool>,
}

impl MapSearch<'_> {
    fn extend(&mut self, depth: usize) -> Option<BergeEmbedding> {
        if depth == self.order.len() {
            return self.matching();
        }
        let v = self.order[depth];
        for w in 0..self.h.n() {
            if self.used[w] || self.hdeg[w] < self.adj[v].len() {
                continue;
            }
            let fits = self.adj[v].iter().all(|&u| self.map[u] == usize::MAX || self.covers[w][self.map[u]]);
            if !fits {
                continue;
            }
            self.map[v] = w;
            self.used[w] = true;
            if let Some(found) = self.extend(depth + 1) {
                return Some(found);
            }
            self.map[v] = usize::MAX;
            self.used[w] = false;
        }
        None
    }

    /// Kuhn's augmenting paths on the containment relation.
    fn matching(&self) -> Option<BergeEmbedding> {
        let m = self.g.m();
        let fits: Vec<Vec<usize>> = self
            .g
            .edges()
            .iter()
            .map(|&(a, b)| {
                let (x, y) = (self.map[a], self.map[b]);
                (0..m).filter(|&f| self.h.edges()[f].contains(&x) && self.h.edges()[f].contains(&y)).collect()
            })
            .collect();
        let mut owner = vec![usize::MAX; m];
        fn augment(i: usize, fits: &[Vec<usize>], owner: &mut [usize], seen: &mut [bool]) -> bool {
            for &f in &fits[i] {
                if !seen[f] {
                    seen[f] = true;
                    if owner[f] == usize::MAX || augment(owner[f], fits, owner, seen) {
                        owner[f] = i;
                        return true;
                    }
                }
            }
            false
        }
        for i in 0..m {
            let mut seen = vec![false; m];
            if !augment(i, &fits, &mut owner, &mut seen) {
                return None;
            }
        }
        let mut assignment = vec![0; m];
        for (f, &i) in owner.iter().enumerate() {
            assignment[i] = f;
        }
        Some(BergeEmbedding { vertex_map: self.map.clone(), assignment })
    }
}

/// On-disk index written next to the `.uhg` files of a catalog.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct CatalogIndex {
    pub base: Graph,
    pub r: usize,
    pub extra: usize,
    pub count: usize,
    pub keys: Vec<CanonicalForm>,
    pub golden_count: Option<usize>,
}

/// Writes `index.json` and one `NNNNN.uhg` per entry into `dir`.
pub fn write_catalog(catalog: &BergeCatalog, dir: &Path, golden_count: Option<usize>) -> Result<CatalogIndex> {
    fs::create_dir_all(dir)?;
    for (i, e) in catalog.entries.iter().enumerate() {
        fs::write(dir.join(format!("{i:05}.uhg")), write_uhg(&e.hypergraph))?;
    }
    let index = CatalogIndex {
        base: catalog.base.clone(),
        r: catalog.rank,
        extra: catalog.extra,
        count: catalog.entries.len(),
        keys: catalog.entries.iter().map(|e| e.key.clone()).collect(),
        golden_count,
    };
    fs::write(dir.join("index.json"), serde_json::to_string_pretty(&index)? + "\n")?;
    Ok(index)
}

pub fn read_catalog_index(dir: &Path) -> Result<CatalogIndex> {
    Ok(serde_json::from_str(&fs::read_to_string(dir.join("index.json"))?)?)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::hgraph::{construct_graph, expansion, suspension, GraphFamily};

    fn family(f: GraphFamily, k: usize) -> Graph {
        construct_graph(&f, &[k]).unwrap()
    }

    #[test]
    fn single_edge_has_one_entry() {
        let cat = enumerate_berge(&family(GraphFamily::Path, 2), 3, 1).unwrap();
        assert_eq!(cat.entries.len(), 1);
        assert_eq!(cat.entries[0].key.to_string(), "r3n3:0,1,2");
    }

    #[test]
    fn entries_are_berge_and_distinct() {
        let g = family(GraphFamily::Path, 4);
        let cat = enumerate_berge(&g, 3, 1).unwrap();
        let mut keys: Vec<_> = cat.entries.iter().map(|e| e.key.clone()).collect();
        keys.dedup();
        assert_eq!(keys.len(), cat.entries.len());
        for e in &cat.entries {
            assert!(e.embedding.validate(&e.hypergraph, &g));
            assert!(is_berge(&e.hypergraph, &g).is_some());
        }
    }

    #[test]
    fn budget_zero_is_contained_in_budget_one() {
        let g = family(GraphFamily::Cycle, 4);
        let small = enumerate_berge(&g, 3, 0).unwrap();
        let large = enumerate_berge(&g, 3, 1).unwrap();
        for e in &small.entries {
            assert!(large.entries.iter().any(|f| f.key == e.key));
        }
    }

    #[test]
    fn guards_and_diagnostics() {
        let star = family(GraphFamily::Star, 12);
        assert!(matches!(enumerate_berge(&star, 3, 1), Err(Error::ResourceGuard(_))));
        let k2 = family(GraphFamily::Path, 2);
        let cat = enumerate_berge(&k2, 5, 1).unwrap();
        assert!(cat.entries.is_empty() && cat.diagnostic.is_some());
        assert!(enumerate_berge(&k2, 3, 2).is_err());
    }

    #[test]
    fn recognition_examples() {
        let c3 = family(GraphFamily::Cycle, 3);
        assert!(is_berge(&expansion(&c3, 3).unwrap(), &c3).is_some());
        let p5 = family(GraphFamily::Path, 5);
        assert!(is_berge(&suspension(&p5.to_hypergraph(), 1).unwrap(), &p5).is_some());
        let edge = UniformHypergraph::new(3, 3, vec![vec![0, 1, 2]]).unwrap();
        assert!(is_berge(&edge, &family(GraphFamily::Path, 3)).is_none());
        let k43 =
            UniformHypergraph::new(3, 4, vec![vec![0, 1, 2], vec![0, 1, 3], vec![0, 2, 3], vec![1, 2, 3]]).unwrap();
        assert!(is_berge(&k43, &family(GraphFamily::Cycle, 4)).is_some());
        let w = is_berge(&k43, &family(GraphFamily::Cycle, 4)).unwrap();
        assert!(w.validate(&k43, &family(GraphFamily::Cycle, 4)));
    }

    #[test]
    fn vertex_bounds() {
        assert_eq!(vertex_bound(&family(GraphFamily::Path, 6), 3), 7);
        assert_eq!(vertex_bound(&family(GraphFamily::Cycle, 6), 3), 7);
        assert_eq!(vertex_bound(&family(GraphFamily::Star, 11), 3), 12);
    }

    #[test]
    fn catalog_round_trip_on_disk() {
        let dir = tempfile::tempdir().unwrap();
        let cat = enumerate_berge(&family(GraphFamily::Path, 3), 3, 1).unwrap();
        let index = write_catalog(&cat, dir.path(), Some(cat.entries.len())).unwrap();
        assert_eq!(read_catalog_index(dir.path()).unwrap(), index);
        let text = fs::read_to_string(dir.path().join("00000.uhg")).unwrap();
        assert_eq!(crate::hgraph::parse_uhg(&text).unwrap(), cat.entries[0].hypergraph);
    }
}
