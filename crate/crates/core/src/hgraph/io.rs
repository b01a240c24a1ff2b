//! Plain-text formats.
//!
//! `.uhg`: header `r n m`, then `m` lines of `r` vertex indices. Emitted with
//! each line ascending and lines in lexicographic order.
//!
//! `.g`: header `n m`, then `m` lines `u v`, emitted in stored edge order.

use std::fmt::Write as _;

use super::{Graph, UniformHypergraph};
use crate::error::{Error, Result};

pub fn write_uhg(h: &UniformHypergraph) -> String {
    let mut out = format!("{} {} {}\n", h.rank(), h.n(), h.m());
    for e in h.edges() {
        let line: Vec<String> = e.iter().map(usize::to_string).collect();
        let _ = writeln!(out, "{}", line.join(" "));
    }
    out
}

pub fn write_graph(g: &Graph) -> String {
    let mut out = format!("{} {}\n", g.n(), g.m());
    for &(a, b) in g.edges() {
        let _ = writeln!(out, "{a} {b}");
    }
    out
}

fn numbers(line: &str, lineno: usize) -> Result<Vec<usize>> {
    line.split_whitespace()
        .map(|tok| {
            tok.parse::<usize>()
                .map_err(|_| Error::Parse { line: lineno, msg: format!("`{tok}` is not a nonnegative integer") })
        })
        .collect()
}

/// Non-empty lines with their 1-based line numbers.
fn content_lines(text: &str) -> impl Iterator<Item = (usize, &str)> {
    text.lines().enumerate().map(|(i, l)| (i + 1, l.trim())).filter(|(_, l)| !l.is_empty())
}

fn structural(lineno: usize) -> impl Fn(Error) -> Error {
    move |e| Error::Parse { line: lineno, msg: e.to_string() }
}

pub fn parse_uhg(text: &str) -> Result<UniformHypergraph> {
    let mut lines = content_lines(text);
    let (hl, header) = lines.next().ok_or(Error::Parse { line: 1, msg: "empty input".into() })?;
    let head = numbers(header, hl)?;
    let [r, n, m] = head[..] else {
        return Err(Error::Parse { line: hl, msg: "header must be `r n m`".into() });
    };
    let mut edges = Vec::with_capacity(m);
    let mut last = hl;
    for (lineno, line) in lines {
        last = lineno;
        let e = numbers(line, lineno)?;
        if e.len() != r {
            return Err(Error::Parse { line: lineno, msg: format!("expected {r} vertices, found {}", e.len()) });
        }
        edges.push(e);
    }
    if edges.len() != m {
        return Err(Error::Parse { line: last, msg: format!("header announces {m} edges, found {}", edges.len()) });
    }
    UniformHypergraph::new(r, n, edges).map_err(structural(last))
}

pub fn parse_graph(text: &str) -> Result<Graph> {
    let mut lines = content_lines(text);
    let (hl, header) = lines.next().ok_or(Error::Parse { line: 1, msg: "empty input".into() })?;
    let head = numbers(header, hl)?;
    let [n, m] = head[..] else {
        return Err(Error::Parse { line: hl, msg: "header must be `n m`".into() });
    };
    let mut edges = Vec::with_capacity(m);
    let mut last = hl;
    for (lineno, line) in lines {
        last = lineno;
        let e = numbers(line, lineno)?;
        let [a, b] = e[..] else {
            return Err(Error::Parse { line: lineno, msg: "expected a vertex pair".into() });
        };
        edges.push((a, b));
    }
    if edges.len() != m {
        return Err(Error::Parse { line: last, msg: format!("header announces {m} edges, found {}", edges.len()) });
    }
    Graph::new(n, edges).map_err(structural(last))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn uhg_emission_is_sorted() {
        let h = UniformHypergraph::new(3, 5, vec![vec![4, 3, 0], vec![2, 1, 0]]).unwrap();
        assert_eq!(write_uhg(&h), "3 5 2\n0 1 2\n0 3 4\n");
    }

    #[test]
    fn uhg_parse_emits_identically() {
        let text = "3 6 3\n0 1 5\n0 2 5\n1 2 5\n";
        assert_eq!(write_uhg(&parse_uhg(text).unwrap()), text);
    }

    #[test]
    fn uhg_errors_carry_lines() {
        assert!(matches!(parse_uhg(""), Err(Error::Parse { .. })));
        assert!(matches!(parse_uhg("3 4\n"), Err(Error::Parse { line: 1, .. })));
        assert!(matches!(parse_uhg("3 4 1\n0 1\n"), Err(Error::Parse { line: 2, .. })));
        assert!(matches!(parse_uhg("3 4 2\n0 1 2\n"), Err(Error::Parse { .. })));
        assert!(matches!(parse_uhg("3 4 1\n0 1 x\n"), Err(Error::Parse { line: 2, .. })));
        assert!(matches!(parse_uhg("3 4 2\n0 1 2\n2 1 0\n"), Err(Error::Parse { line: 3, .. })));
    }

    #[test]
    fn graph_round_trip_keeps_order() {
        let text = "4 3\n2 3\n0 1\n1 2\n";
        let g = parse_graph(text).unwrap();
        assert_eq!(g.edges(), &[(2, 3), (0, 1), (1, 2)]);
        assert_eq!(write_graph(&g), text);
        assert!(parse_graph("3 1\n0 0\n").is_err());
        assert!(parse_graph("3 1\n0 1 2\n").is_err());
    }
}
