//! Edge-shifting operations on hypergraphs and graphs.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::hgraph::{link_sets, Graph, UniformHypergraph};

/// Rewrites each listed edge `e` as `(e \ {from}) ∪ {to}`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct EdgeMoveSpec {
    /// Indices into `H.edges()`.
    pub edges: Vec<usize>,
    pub from: usize,
    pub to: usize,
}

/// Fails with `MultipleEdge` if a rewritten edge coincides with a kept edge
/// or with another rewritten edge.
pub fn move_edges(h: &UniformHypergraph, spec: &EdgeMoveSpec) -> Result<UniformHypergraph> {
    let n = h.n();
    if spec.from >= n || spec.to >= n || spec.from == spec.to {
        return Err(Error::param(format!("bad move {} -> {}", spec.from, spec.to)));
    }
    let mut moved = vec![false; h.m()];
    for &i in &spec.edges {
        let e = h.edges().get(i).ok_or_else(|| Error::param(format!("edge index {i} out of range")))?;
        if !e.contains(&spec.from) || e.contains(&spec.to) {
            return Err(Error::param(format!("edge {e:?} must contain {} and avoid {}", spec.from, spec.to)));
        }
        if moved[i] {
            return Err(Error::param(format!("edge index {i} listed twice")));
        }
        moved[i] = true;
    }
    let mut edges: Vec<Vec<usize>> = Vec::with_capacity(h.m());
    for (i, e) in h.edges().iter().enumerate() {
        if moved[i] {
            let mut f: Vec<usize> = e.iter().map(|&v| if v == spec.from { spec.to } else { v }).collect();
            f.sort_unstable();
            edges.push(f);
        } else {
            edges.push(e.clone());
        }
    }
    let mut sorted = edges.clone();
    sorted.sort_unstable();
    if let Some(w) = sorted.windows(2).find(|w| w[0] == w[1]) {
        return Err(Error::MultipleEdge(w[0].clone()));
    }
    UniformHypergraph::new(h.rank(), n, edges)
}

/// Deletes `u` and re-attaches its link to `v`; vertices above `u` shift
/// down by one.
pub fn merge_vertex(h: &UniformHypergraph, u: usize, v: usize) -> Result<UniformHypergraph> {
    let n = h.n();
    if u >= n || v >= n || u == v {
        return Err(Error::param(format!("bad merge {u} -> {v}")));
    }
    if h.edges().iter().any(|e| e.contains(&u) && e.contains(&v)) {
        return Err(Error::SharedEdge(u, v));
    }
    let lu = link_sets(h, u);
    let lv = link_sets(h, v);
    if lu.iter().any(|f| lv.contains(f)) {
        return Err(Error::SharedLink(u, v));
    }
    let shift = |w: usize| if w > u { w - 1 } else { w };
    let kept = h.edges().iter().filter(|e| !e.contains(&u)).map(|e| e.iter().map(|&w| shift(w)).collect());
    let rewired = lu.into_iter().map(|f| f.into_iter().chain([v]).map(shift).collect());
    UniformHypergraph::new(h.rank(), n - 1, kept.chain(rewired).collect::<Vec<Vec<usize>>>())
}

/// Two pendant paths at `root`, each listed outward from the root.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct PendantTails {
    pub root: usize,
    pub a: Vec<usize>,
    pub b: Vec<usize>,
}

impl PendantTails {
    pub fn lengths(&self) -> (usize, usize) {
        (self.a.len(), self.b.len())
    }

    fn validate(&self, g: &Graph) -> Result<()> {
        let bad = |msg: String| Err(Error::PendantPath(msg));
        if self.root >= g.n() {
            return bad(format!("root {} out of range", self.root));
        }
        let mut seen = vec![false; g.n()];
        seen[self.root] = true;
        for tail in [&self.a, &self.b] {
            let mut prev = self.root;
            for (i, &w) in tail.iter().enumerate() {
                if w >= g.n() || seen[w] {
                    return bad(format!("vertex {w} repeated or out of range"));
                }
                seen[w] = true;
                if !g.has_edge(prev, w) {
                    return bad(format!("{prev} and {w} are not adjacent"));
                }
                let want = if i + 1 == tail.len() { 1 } else { 2 };
                if g.degree(w) != want {
                    return bad(format!("vertex {w} has degree {}, expected {want}", g.degree(w)));
                }
                prev = w;
            }
        }
        Ok(())
    }
}

/// Moves the end vertex of the longer tail to the end of the shorter one,
/// so lengths `(k+1, s-1)` become `(k, s)`. Tails whose lengths differ by
/// at most one are returned unchanged.
pub fn path_exchange_step(g: &Graph, tails: &PendantTails) -> Result<(Graph, PendantTails)> {
    tails.validate(g)?;
    let (long, short) = if tails.a.len() >= tails.b.len() { (&tails.a, &tails.b) } else { (&tails.b, &tails.a) };
    if long.len() <= short.len() + 1 {
        return Ok((g.clone(), tails.clone()));
    }
    let end = *long.last().expect("long tail is nonempty");
    let before = long[long.len() - 2];
    let anchor = short.last().copied().unwrap_or(tails.root);
    let edges = g.edges().iter().copied().filter(|&e| e != (before.min(end), before.max(end))).chain([(anchor, end)]);
    let out = Graph::new(g.n(), edges)?;
    let mut new_long = long.clone();
    new_long.pop();
    let mut new_short = short.clone();
    new_short.push(end);
    let next = if tails.a.len() >= tails.b.len() {
        PendantTails { root: tails.root, a: new_long, b: new_short }
    } else {
        PendantTails { root: tails.root, a: new_short, b: new_long }
    };
    Ok((out, next))
}

pub fn path_exchange(g: &Graph, tails: &PendantTails) -> Result<Graph> {
    path_exchange_step(g, tails).map(|(g, _)| g)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::hgraph::{attach_two_paths, canonical_form, construct_graph, GraphFamily};

    fn hg(edges: &[&[usize]], n: usize) -> UniformHypergraph {
        UniformHypergraph::new(3, n, edges.iter().map(|e| e.to_vec())).unwrap()
    }

    #[test]
    fn move_examples() {
        let h = hg(&[&[0, 1, 2], &[0, 3, 4]], 5);
        let out = move_edges(&h, &EdgeMoveSpec { edges: vec![1], from: 3, to: 1 }).unwrap();
        assert_eq!(out.edges(), &[vec![0, 1, 2], vec![0, 1, 4]]);
        let same = move_edges(&h, &EdgeMoveSpec { edges: vec![], from: 3, to: 1 }).unwrap();
        assert_eq!(same, h);
        let h = hg(&[&[0, 1, 2], &[0, 1, 3]], 4);
        let err = move_edges(&h, &EdgeMoveSpec { edges: vec![1], from: 3, to: 2 });
        assert!(matches!(err, Err(Error::MultipleEdge(e)) if e == vec![0, 1, 2]));
        assert!(move_edges(&h, &EdgeMoveSpec { edges: vec![0], from: 3, to: 2 }).is_err());
    }

    #[test]
    fn merge_examples() {
        let h = hg(&[&[0, 1, 2], &[3, 4, 5]], 6);
        let out = merge_vertex(&h, 3, 0).unwrap();
        assert_eq!(out.n(), 5);
        assert_eq!(out.edges(), &[vec![0, 1, 2], vec![0, 3, 4]]);
        let h = hg(&[&[0, 1, 2], &[1, 2, 3]], 4);
        assert!(matches!(merge_vertex(&h, 3, 0), Err(Error::SharedLink(3, 0))));
        let h = hg(&[&[0, 1, 3]], 4);
        assert!(matches!(merge_vertex(&h, 3, 0), Err(Error::SharedEdge(3, 0))));
    }

    #[test]
    fn exchange_balances_triangle_tails() {
        let tri = construct_graph(&GraphFamily::Complete, &[3]).unwrap();
        let g = attach_two_paths(&tri, 0, 3, 1).unwrap();
        let tails = PendantTails { root: 0, a: vec![3, 4, 5], b: vec![6] };
        let (out, next) = path_exchange_step(&g, &tails).unwrap();
        assert_eq!(next.lengths(), (2, 2));
        let want = attach_two_paths(&tri, 0, 2, 2).unwrap();
        assert_eq!(canonical_form(&out.to_hypergraph()), canonical_form(&want.to_hypergraph()));
        let g11 = attach_two_paths(&tri, 0, 1, 1).unwrap();
        let t11 = PendantTails { root: 0, a: vec![3], b: vec![4] };
        assert_eq!(path_exchange(&g11, &t11).unwrap(), g11);
    }

    #[test]
    fn iterating_reaches_delta1() {
        let tri = construct_graph(&GraphFamily::Complete, &[3]).unwrap();
        for k in 6..12 {
            let mut g = attach_two_paths(&tri, 0, k - 4, 0).unwrap();
            let mut tails = PendantTails { root: 0, a: (3..k - 1).collect(), b: vec![] };
            loop {
                let (next, t) = path_exchange_step(&g, &tails).unwrap();
                if t == tails {
                    break;
                }
                g = next;
                tails = t;
            }
            let d1 = construct_graph(&GraphFamily::Delta1, &[k]).unwrap();
            assert_eq!(canonical_form(&g.to_hypergraph()), canonical_form(&d1.to_hypergraph()), "k={k}");
        }
    }

    #[test]
    fn exchange_rejects_bad_tails() {
        let tri = construct_graph(&GraphFamily::Complete, &[3]).unwrap();
        let g = attach_two_paths(&tri, 0, 2, 0).unwrap();
        let t = PendantTails { root: 0, a: vec![1], b: vec![] };
        assert!(matches!(path_exchange(&g, &t), Err(Error::PendantPath(_))));
        let t = PendantTails { root: 0, a: vec![4, 3], b: vec![] };
        assert!(path_exchange(&g, &t).is_err());
    }
}
