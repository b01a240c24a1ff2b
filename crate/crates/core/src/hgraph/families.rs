//! Named graph constructions. Vertex 0 is the distinguished root wherever a
//! family has one (star center, gluing vertex, attachment vertex).

use std::fmt;
use std::str::FromStr;

use super::Graph;
use crate::error::{Error, Result};

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum GraphFamily {
    /// `[k]`: path on `k` vertices, `0 - 1 - ... - (k-1)`.
    Path,
    /// `[k]`: cycle on `k >= 3` vertices.
    Cycle,
    /// `[k]`: star with center 0 and leaves `1..k`.
    Star,
    /// `[n]`: star on `n >= 3` vertices plus the leaf edge `{1, 2}`.
    StarPlus,
    /// `[k]`, `k >= 6`: triangle `{0,1,2}` with pendant paths of lengths
    /// `floor((k-4)/2)` and `ceil((k-4)/2)` at 0; `k - 1` vertices.
    Delta1,
    /// `[k]`, `k >= 6`: triangle and `C_{k-3}` glued at 0; `k - 1` vertices.
    Delta2,
    /// `[l, h, j]`: cycle `C_l` with pendant paths of lengths `h`, `j` at 0.
    CycleTwoPaths,
    /// `[l, d, h, j]`: cycle `C_l`, path of length `h` at 0 and `j` at `d`.
    CycleTwoPathsTwoRoots,
    /// `[a, b]`: `base` with pendant paths of lengths `a`, `b` at `root`.
    AttachTwoPaths { base: Graph, root: usize },
    /// `[n]`: complete graph.
    Complete,
}

impl GraphFamily {
    pub fn name(&self) -> &'static str {
        match self {
            GraphFamily::Path => "path",
            GraphFamily::Cycle => "cycle",
            GraphFamily::Star => "star",
            GraphFamily::StarPlus => "star_plus",
            GraphFamily::Delta1 => "delta1",
            GraphFamily::Delta2 => "delta2",
            GraphFamily::CycleTwoPaths => "cycle_two_paths",
            GraphFamily::CycleTwoPathsTwoRoots => "cycle_two_paths_two_roots",
            GraphFamily::AttachTwoPaths { .. } => "attach_two_paths",
            GraphFamily::Complete => "complete",
        }
    }
}

impl fmt::Display for GraphFamily {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for GraphFamily {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        Ok(match s {
            "path" => GraphFamily::Path,
            "cycle" => GraphFamily::Cycle,
            "star" => GraphFamily::Star,
            "star_plus" | "star-plus" => GraphFamily::StarPlus,
            "delta1" => GraphFamily::Delta1,
            "delta2" => GraphFamily::Delta2,
            "cycle_two_paths" => GraphFamily::CycleTwoPaths,
            "cycle_two_paths_two_roots" => GraphFamily::CycleTwoPathsTwoRoots,
            "complete" => GraphFamily::Complete,
            "attach_two_paths" => return Err(Error::param("attach_two_paths needs a base graph")),
            other => return Err(Error::param(format!("unknown graph family `{other}`"))),
        })
    }
}

fn arity(family: &GraphFamily, params: &[usize], want: usize) -> Result<()> {
    if params.len() != want {
        return Err(Error::param(format!("{family} expects {want} parameter(s), got {}", params.len())));
    }
    Ok(())
}

fn at_least(family: &GraphFamily, what: &str, value: usize, min: usize) -> Result<()> {
    if value < min {
        return Err(Error::param(format!("{family} needs {what} >= {min}, got {value}")));
    }
    Ok(())
}

fn cycle_edges(k: usize) -> impl Iterator<Item = (usize, usize)> {
    (0..k).map(move |i| (i, (i + 1) % k))
}

pub fn construct_graph(family: &GraphFamily, params: &[usize]) -> Result<Graph> {
    match family {
        GraphFamily::Path => {
            arity(family, params, 1)?;
            let k = params[0];
            at_least(family, "k", k, 1)?;
            Graph::new(k, (1..k).map(|i| (i - 1, i)))
        }
        GraphFamily::Cycle => {
            arity(family, params, 1)?;
            let k = params[0];
            at_least(family, "k", k, 3)?;
            Graph::new(k, cycle_edges(k))
        }
        GraphFamily::Star => {
            arity(family, params, 1)?;
            let k = params[0];
            at_least(family, "k", k, 2)?;
            Graph::new(k, (1..k).map(|i| (0, i)))
        }
        GraphFamily::StarPlus => {
            arity(family, params, 1)?;
            let n = params[0];
            at_least(family, "n", n, 3)?;
            Graph::new(n, (1..n).map(|i| (0, i)).chain([(1, 2)]))
        }
        GraphFamily::Delta1 => {
            arity(family, params, 1)?;
            let k = params[0];
            at_least(family, "k", k, 6)?;
            let triangle = Graph::new(3, [(0, 1), (0, 2), (1, 2)])?;
            attach_two_paths(&triangle, 0, (k - 4) / 2, (k - 4).div_ceil(2))
        }
        GraphFamily::Delta2 => {
            arity(family, params, 1)?;
            let k = params[0];
            at_least(family, "k", k, 6)?;
            // cycle through 0, 3, 4, ..., k-2
            let ring: Vec<usize> = std::iter::once(0).chain(3..k - 1).collect();
            let cycle = (0..ring.len()).map(|i| (ring[i], ring[(i + 1) % ring.len()]));
            Graph::new(k - 1, [(0, 1), (0, 2), (1, 2)].into_iter().chain(cycle))
        }
        GraphFamily::CycleTwoPaths => {
            arity(family, params, 3)?;
            at_least(family, "cycle length", params[0], 3)?;
            let cycle = Graph::new(params[0], cycle_edges(params[0]))?;
            attach_two_paths(&cycle, 0, params[1], params[2])
        }
        GraphFamily::CycleTwoPathsTwoRoots => {
            arity(family, params, 4)?;
            let (l, d, h, j) = (params[0], params[1], params[2], params[3]);
            at_least(family, "cycle length", l, 3)?;
            if d >= l {
                return Err(Error::param(format!("second root {d} is not on C_{l}")));
            }
            let cycle = Graph::new(l, cycle_edges(l))?;
            let with_first = attach_two_paths(&cycle, 0, h, 0)?;
            attach_two_paths(&with_first, d, j, 0)
        }
        GraphFamily::AttachTwoPaths { base, root } => {
            arity(family, params, 2)?;
            attach_two_paths(base, *root, params[0], params[1])
        }
        GraphFamily::Complete => {
            arity(family, params, 1)?;
            let n = params[0];
            at_least(family, "n", n, 1)?;
            Graph::new(n, (0..n).flat_map(|a| (a + 1..n).map(move |b| (a, b))))
        }
    }
}

/// `G(u; a, b)`: the first path occupies `n..n+a`, the second `n+a..n+a+b`,
/// each listed outward from `root`.
pub fn attach_two_paths(base: &Graph, root: usize, a: usize, b: usize) -> Result<Graph> {
    if root >= base.n() {
        return Err(Error::param(format!("root {root} out of range")));
    }
    let n = base.n();
    let mut edges = base.edges().to_vec();
    let mut next = n;
    for len in [a, b] {
        let mut prev = root;
        for _ in 0..len {
            edges.push((prev, next));
            prev = next;
            next += 1;
        }
    }
    Graph::new(next, edges)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn path_six() {
        let g = construct_graph(&GraphFamily::Path, &[6]).unwrap();
        assert_eq!(g.n(), 6);
        assert_eq!(g.edges(), &[(0, 1), (1, 2), (2, 3), (3, 4), (4, 5)]);
    }

    #[test]
    fn delta1_six_is_triangle_with_two_pendant_edges() {
        let g = construct_graph(&GraphFamily::Delta1, &[6]).unwrap();
        assert_eq!(g.n(), 5);
        assert_eq!(g.edges(), &[(0, 1), (0, 2), (1, 2), (0, 3), (0, 4)]);
        let g = construct_graph(&GraphFamily::Delta1, &[9]).unwrap();
        assert_eq!((g.n(), g.m()), (8, 8));
        assert_eq!(g.degree(0), 4);
    }

    #[test]
    fn delta2_glues_triangle_and_cycle() {
        let g = construct_graph(&GraphFamily::Delta2, &[6]).unwrap();
        assert_eq!((g.n(), g.m()), (5, 6));
        assert_eq!(g.degree(0), 4);
        assert!((1..5).all(|v| g.degree(v) == 2));
        assert!(construct_graph(&GraphFamily::Delta2, &[5]).is_err());
        assert!(construct_graph(&GraphFamily::Delta1, &[5]).is_err());
    }

    #[test]
    fn star_plus_nine() {
        let g = construct_graph(&GraphFamily::StarPlus, &[9]).unwrap();
        assert_eq!((g.n(), g.m()), (9, 9));
        assert!(g.has_edge(1, 2));
    }

    #[test]
    fn two_root_variant() {
        let g = construct_graph(&GraphFamily::CycleTwoPathsTwoRoots, &[4, 2, 1, 2]).unwrap();
        assert_eq!((g.n(), g.m()), (7, 7));
        assert_eq!(g.degree(0), 3);
        assert_eq!(g.degree(2), 3);
        assert!(construct_graph(&GraphFamily::CycleTwoPathsTwoRoots, &[4, 4, 1, 1]).is_err());
    }

    #[test]
    fn names_round_trip() {
        for name in ["path", "cycle", "star", "star_plus", "delta1", "delta2", "complete"] {
            assert_eq!(name.parse::<GraphFamily>().unwrap().name(), name);
        }
        assert!("nope".parse::<GraphFamily>().is_err());
    }
}
