use std::collections::VecDeque;

use serde::{Deserialize, Serialize};

use super::Graph;

/// A length that may be unbounded (diameter of a disconnected graph,
/// girth of a forest).
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Extent {
    Finite(usize),
    Infinite,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct GraphStats {
    pub connected: bool,
    pub diameter: Extent,
    pub girth: Extent,
    pub clique_number: usize,
}

pub fn graph_stats(g: &Graph) -> GraphStats {
    let adj = g.adjacency();
    let n = g.n();
    let mut diameter = 0;
    let mut connected = true;
    for s in 0..n {
        let dist = bfs(&adj, s);
        for d in dist {
            match d {
                Some(d) => diameter = diameter.max(d),
                None => connected = false,
            }
        }
    }
    GraphStats {
        connected,
        diameter: if connected { Extent::Finite(diameter) } else { Extent::Infinite },
        girth: girth(&adj),
        clique_number: clique_number(g),
    }
}

fn bfs(adj: &[Vec<usize>], s: usize) -> Vec<Option<usize>> {
    let mut dist = vec![None; adj.len()];
    dist[s] = Some(0);
    let mut queue = VecDeque::from([s]);
    while let Some(v) = queue.pop_front() {
        let d = dist[v].expect("queued vertices have distances");
        for &w in &adj[v] {
            if dist[w].is_none() {
                dist[w] = Some(d + 1);
                queue.push_back(w);
            }
        }
    }
    dist
}

/// Shortest cycle via a BFS from every vertex; a non-tree edge `(v, w)`
/// closes a cycle of length at most `d(v) + d(w) + 1`, and the minimum over
/// all roots is exact.
fn girth(adj: &[Vec<usize>]) -> Extent {
    let n = adj.len();
    let mut best = usize::MAX;
    for s in 0..n {
        let mut dist = vec![usize::MAX; n];
        let mut parent = vec![usize::MAX; n];
        dist[s] = 0;
        let mut queue = VecDeque::from([s]);
        while let Some(v) = queue.pop_front() {
            for &w in &adj[v] {
                if dist[w] == usize::MAX {
                    dist[w] = dist[v] + 1;
                    parent[w] = v;
                    queue.push_back(w);
                } else if parent[v] != w {
                    best = best.min(dist[v] + dist[w] + 1);
                }
            }
        }
    }
    if best == usize::MAX {
        Extent::Infinite
    } else {
        Extent::Finite(best)
    }
}

/// Maximum clique size by branch and bound on candidate sets.
pub fn clique_number(g: &Graph) -> usize {
    let n = g.n();
    if n == 0 {
        return 0;
    }
    let adj = g.adjacency();
    let mut neighbor = vec![vec![false; n]; n];
    for (v, list) in adj.iter().enumerate() {
        for &w in list {
            neighbor[v][w] = true;
        }
    }
    let mut best = 1;
    fn expand(neighbor: &[Vec<bool>], size: usize, cand: Vec<usize>, best: &mut usize) {
        if cand.is_empty() {
            *best = (*best).max(size);
            return;
        }
        for (i, &v) in cand.iter().enumerate() {
            if size + cand.len() - i <= *best {
                return;
            }
            let next: Vec<usize> = cand[i + 1..].iter().copied().filter(|&w| neighbor[v][w]).collect();
            expand(neighbor, size + 1, next, best);
        }
    }
    expand(&neighbor, 0, (0..n).collect(), &mut best);
    best
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::hgraph::{construct_graph, GraphFamily};

    fn stats(f: GraphFamily, k: usize) -> GraphStats {
        graph_stats(&construct_graph(&f, &[k]).unwrap())
    }

    #[test]
    fn cycle_triangle_star() {
        let s = stats(GraphFamily::Cycle, 6);
        assert_eq!(
            s,
            GraphStats { connected: true, diameter: Extent::Finite(3), girth: Extent::Finite(6), clique_number: 2 }
        );
        let s = stats(GraphFamily::Complete, 3);
        assert_eq!((s.diameter, s.girth, s.clique_number), (Extent::Finite(1), Extent::Finite(3), 3));
        let s = stats(GraphFamily::Star, 10);
        assert_eq!((s.diameter, s.girth, s.clique_number), (Extent::Finite(2), Extent::Infinite, 2));
    }

    #[test]
    fn delta_families() {
        for k in 6..12 {
            assert_eq!(stats(GraphFamily::Delta1, k).clique_number, 3);
            assert_eq!(stats(GraphFamily::Delta2, k).girth, Extent::Finite(3));
        }
    }

    #[test]
    fn disconnected_and_trivial() {
        let g = Graph::new(4, [(0, 1), (2, 3)]).unwrap();
        let s = graph_stats(&g);
        assert!(!s.connected);
        assert_eq!(s.diameter, Extent::Infinite);
        assert_eq!(graph_stats(&Graph::empty(1)).clique_number, 1);
        assert_eq!(stats(GraphFamily::Complete, 6).clique_number, 6);
        // odd cycle girth through non-root BFS
        assert_eq!(stats(GraphFamily::Cycle, 7).girth, Extent::Finite(7));
    }
}
