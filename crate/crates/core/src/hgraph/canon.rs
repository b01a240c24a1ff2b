//! Canonical labeling by individualization and refinement.
//!
//! Colors are refined from the incidence structure until stable; the search
//! then individualizes each vertex of the first non-singleton cell in turn.
//! Every discrete leaf gives a relabeling, and the key is the smallest
//! sorted edge list over all leaves. Cell order only depends on
//! isomorphism-invariant data, so the minimum is a canonical form.

use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Deserializer, Serialize, Serializer};

use super::UniformHypergraph;
use crate::error::{Error, Result};

#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct CanonicalForm {
    rank: usize,
    n: usize,
    edges: Vec<Vec<u16>>,
}

impl CanonicalForm {
    pub fn rank(&self) -> usize {
        self.rank
    }

    /// Vertex count after stripping isolated vertices.
    pub fn n(&self) -> usize {
        self.n
    }

    pub fn m(&self) -> usize {
        self.edges.len()
    }

    pub fn to_hypergraph(&self) -> UniformHypergraph {
        UniformHypergraph::new(self.rank, self.n, self.edges.iter().map(|e| e.iter().map(|&v| v as usize).collect()))
            .expect("canonical edge lists are valid")
    }
}

impl fmt::Display for CanonicalForm {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "r{}n{}:", self.rank, self.n)?;
        for (i, e) in self.edges.iter().enumerate() {
            if i > 0 {
                f.write_str(";")?;
            }
            for (j, v) in e.iter().enumerate() {
                if j > 0 {
                    f.write_str(",")?;
                }
                write!(f, "{v}")?;
            }
        }
        Ok(())
    }
}

impl FromStr for CanonicalForm {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let bad = || Error::Parse { line: 1, msg: format!("bad canonical key `{s}`") };
        let rest = s.strip_prefix('r').ok_or_else(bad)?;
        let (head, body) = rest.split_once(':').ok_or_else(bad)?;
        let (r, n) = head.split_once('n').ok_or_else(bad)?;
        let rank: usize = r.parse().map_err(|_| bad())?;
        let n: usize = n.parse().map_err(|_| bad())?;
        let mut edges = Vec::new();
        if !body.is_empty() {
            for e in body.split(';') {
                let verts: std::result::Result<Vec<u16>, _> = e.split(',').map(str::parse).collect();
                edges.push(verts.map_err(|_| bad())?);
            }
        }
        Ok(CanonicalForm { rank, n, edges })
    }
}

impl Serialize for CanonicalForm {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        s.collect_str(self)
    }
}

impl<'de> Deserialize<'de> for CanonicalForm {
    fn deserialize<D: Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        let s = String::deserialize(d)?;
        s.parse().map_err(serde::de::Error::custom)
    }
}

pub fn canonical_form(h: &UniformHypergraph) -> CanonicalForm {
    let (h, _) = h.strip_isolated();
    let n = h.n();
    let inc = h.incidence();
    let mut search = Search { h: &h, inc: &inc, best: None, best_labels: Vec::new(), autos: Vec::new() };
    let colors = refine(&h, &inc, vec![0; n]);
    search.descend(colors, &mut Vec::new());
    CanonicalForm { rank: h.rank(), n, edges: search.best.unwrap_or_default() }
}

pub fn is_isomorphic(a: &UniformHypergraph, b: &UniformHypergraph) -> bool {
    if a.rank() != b.rank() || a.m() != b.m() {
        return false;
    }
    let (mut da, mut db) = (a.degrees(), b.degrees());
    da.retain(|&d| d > 0);
    db.retain(|&d| d > 0);
    da.sort_unstable();
    db.sort_unstable();
    da == db && canonical_form(a) == canonical_form(b)
}

/// Individualize-refine search for the least encoding. Two leaves with the
/// same encoding differ by an automorphism; automorphisms fixing the
/// current prefix pointwise map sibling subtrees onto each other, so only
/// one child per orbit is explored.
struct Search<'a> {
    h: &'a UniformHypergraph,
    inc: &'a [Vec<usize>],
    best: Option<Vec<Vec<u16>>>,
    best_labels: Vec<u32>,
    autos: Vec<Vec<usize>>,
}

impl Search<'_> {
    fn descend(&mut self, colors: Vec<u32>, prefix: &mut Vec<usize>) {
        let n = colors.len();
        let cells = cell_sizes(&colors);
        // first non-singleton cell in color order
        let Some(target) = (0..cells.len()).find(|&c| cells[c] > 1) else {
            self.leaf(colors);
            return;
        };
        let mut tried: Vec<usize> = Vec::new();
        for v in 0..n {
            if colors[v] as usize != target {
                continue;
            }
            if !tried.is_empty() && self.same_orbit(prefix, &tried, v) {
                continue;
            }
            tried.push(v);
            let split: Vec<u32> =
                colors.iter().enumerate().map(|(w, &c)| 2 * c + u32::from(c as usize == target && w != v)).collect();
            prefix.push(v);
            self.descend(refine(self.h, self.inc, split), prefix);
            prefix.pop();
        }
    }

    fn leaf(&mut self, labels: Vec<u32>) {
        let enc = encode(self.h, &labels);
        match &self.best {
            Some(b) if enc == *b => {
                // v -> the vertex carrying the same label in the best leaf
                let mut at = vec![0; labels.len()];
                for (w, &l) in self.best_labels.iter().enumerate() {
                    at[l as usize] = w;
                }
                let auto: Vec<usize> = labels.iter().map(|&l| at[l as usize]).collect();
                if auto.iter().enumerate().any(|(v, &w)| v != w) {
                    self.autos.push(auto);
                }
            }
            Some(b) if enc > *b => {}
            _ => {
                self.best = Some(enc);
                self.best_labels = labels;
            }
        }
    }

    /// Whether `v` shares an orbit with a tried vertex under the known
    /// automorphisms that fix `prefix`.
    fn same_orbit(&self, prefix: &[usize], tried: &[usize], v: usize) -> bool {
        let n = self.best_labels.len();
        let mut parent: Vec<usize> = (0..n).collect();
        fn find(parent: &mut [usize], mut x: usize) -> usize {
            while parent[x] != x {
                parent[x] = parent[parent[x]];
                x = parent[x];
            }
            x
        }
        for auto in self.autos.iter().filter(|a| prefix.iter().all(|&u| a[u] == u)) {
            for (x, &y) in auto.iter().enumerate() {
                let (a, b) = (find(&mut parent, x), find(&mut parent, y));
                parent[a] = b;
            }
        }
        let root = find(&mut parent, v);
        tried.iter().any(|&u| find(&mut parent, u) == root)
    }
}

fn cell_sizes(colors: &[u32]) -> Vec<usize> {
    let k = colors.iter().map(|&c| c as usize + 1).max().unwrap_or(0);
    let mut sizes = vec![0; k];
    for &c in colors {
        sizes[c as usize] += 1;
    }
    sizes
}

/// Iterated color refinement; returns dense colors `0..k` ordered by
/// (previous color, incidence signature).
fn refine(h: &UniformHypergraph, inc: &[Vec<usize>], mut colors: Vec<u32>) -> Vec<u32> {
    colors = densify(&colors);
    let mut count = distinct(&colors);
    loop {
        let sigs: Vec<(u32, Vec<Vec<u32>>)> = (0..colors.len())
            .map(|v| {
                let mut per_edge: Vec<Vec<u32>> = inc[v]
                    .iter()
                    .map(|&e| {
                        let mut cs: Vec<u32> = h.edges()[e].iter().filter(|&&w| w != v).map(|&w| colors[w]).collect();
                        cs.sort_unstable();
                        cs
                    })
                    .collect();
                per_edge.sort_unstable();
                (colors[v], per_edge)
            })
            .collect();
        let mut order: Vec<&(u32, Vec<Vec<u32>>)> = sigs.iter().collect();
        order.sort_unstable();
        order.dedup();
        let next: Vec<u32> = sigs.iter().map(|s| order.binary_search(&s).expect("present") as u32).collect();
        let next_count = order.len();
        colors = next;
        if next_count == count {
            return colors;
        }
        count = next_count;
    }
}

fn densify(colors: &[u32]) -> Vec<u32> {
    let mut values: Vec<u32> = colors.to_vec();
    values.sort_unstable();
    values.dedup();
    colors.iter().map(|c| values.binary_search(c).expect("present") as u32).collect()
}

fn distinct(colors: &[u32]) -> usize {
    let mut v = colors.to_vec();
    v.sort_unstable();
    v.dedup();
    v.len()
}

fn encode(h: &UniformHypergraph, labels: &[u32]) -> Vec<Vec<u16>> {
    let mut edges: Vec<Vec<u16>> = h
        .edges()
        .iter()
        .map(|e| {
            let mut x: Vec<u16> = e.iter().map(|&v| labels[v] as u16).collect();
            x.sort_unstable();
            x
        })
        .collect();
    edges.sort_unstable();
    edges
}
