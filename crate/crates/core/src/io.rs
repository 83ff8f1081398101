//! Text formats for graphs and weight vectors.
//!
//! Graphs: a header `digraph <n>` or `graph <n>`, then one `u v` pair per
//! line (0-based). Weights: one rational per line, written `p/q`, as an
//! integer, or as a decimal. Blank lines and lines starting with `#` are
//! ignored in both.

use std::path::Path;

use num_bigint::BigInt;
use num_traits::{Num, Zero};

use crate::error::{Error, Result};
use crate::graph::{OrientedGraph, UndirectedGraph};
use crate::lagrangian::WeightVector;
use crate::Rational;

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum ParsedGraph {
    Directed(OrientedGraph),
    Undirected(UndirectedGraph),
}

impl ParsedGraph {
    pub fn n(&self) -> usize {
        match self {
            ParsedGraph::Directed(g) => g.n(),
            ParsedGraph::Undirected(g) => g.n(),
        }
    }

    pub fn undirected(&self) -> UndirectedGraph {
        match self {
            ParsedGraph::Directed(g) => g.underlying(),
            ParsedGraph::Undirected(g) => g.clone(),
        }
    }
}

fn parse_error<T>(line: usize, message: impl Into<String>) -> Result<T> {
    Err(Error::Parse {
        line,
        message: message.into(),
    })
}

/// Non-comment, non-blank lines with 1-based line numbers.
fn content_lines(text: &str) -> impl Iterator<Item = (usize, &str)> {
    text.lines()
        .enumerate()
        .map(|(i, l)| (i + 1, l.trim()))
        .filter(|(_, l)| !l.is_empty() && !l.starts_with('#'))
}

pub fn parse_graph(text: &str) -> Result<ParsedGraph> {
    let mut lines = content_lines(text);
    let Some((header_line, header)) = lines.next() else {
        return parse_error(1, "missing `digraph <n>` or `graph <n>` header");
    };
    let mut fields = header.split_whitespace();
    let directed = match fields.next() {
        Some("digraph") => true,
        Some("graph") => false,
        other => {
            return parse_error(
                header_line,
                format!("expected `digraph` or `graph`, found {:?}", other.unwrap_or("")),
            )
        }
    };
    let n: usize = match (fields.next().map(str::parse), fields.next()) {
        (Some(Ok(n)), None) => n,
        _ => return parse_error(header_line, "header must be `digraph <n>` or `graph <n>`"),
    };

    let mut digraph = OrientedGraph::empty(n);
    let mut graph = UndirectedGraph::empty(n);
    for (line, body) in lines {
        let pair: Vec<&str> = body.split_whitespace().collect();
        let [u, v] = pair.as_slice() else {
            return parse_error(line, format!("expected `u v`, found {body:?}"));
        };
        let (Ok(u), Ok(v)) = (u.parse::<usize>(), v.parse::<usize>()) else {
            return parse_error(line, format!("vertices must be nonnegative integers, found {body:?}"));
        };
        let inserted = if directed {
            digraph.insert(u, v)
        } else {
            graph.insert(u, v)
        };
        inserted.or_else(|e| parse_error(line, strip_domain(e)))?;
    }
    Ok(if directed {
        ParsedGraph::Directed(digraph)
    } else {
        ParsedGraph::Undirected(graph)
    })
}

fn strip_domain(e: Error) -> String {
    match e {
        Error::Domain(m) => m,
        other => other.to_string(),
    }
}

/// Parses `p/q`, an integer, or a finite decimal, exactly.
pub fn parse_rational(s: &str) -> Option<Rational> {
    let s = s.trim();
    if let Some((p, q)) = s.split_once('/') {
        let p = BigInt::from_str_radix(p.trim(), 10).ok()?;
        let q = BigInt::from_str_radix(q.trim(), 10).ok()?;
        return (!q.is_zero()).then(|| Rational::new(p, q));
    }
    let (negative, body) = match s.strip_prefix('-') {
        Some(rest) => (true, rest),
        None => (false, s.strip_prefix('+').unwrap_or(s)),
    };
    let (int, frac) = body.split_once('.').unwrap_or((body, ""));
    if (int.is_empty() && frac.is_empty())
        || !int.chars().chain(frac.chars()).all(|c| c.is_ascii_digit())
    {
        return None;
    }
    let digits = format!("{int}{frac}");
    let numer = BigInt::from_str_radix(&digits, 10).ok()?;
    let value = Rational::new(numer, BigInt::from(10u32).pow(frac.len() as u32));
    Some(if negative { -value } else { value })
}

pub fn parse_weights(text: &str) -> Result<WeightVector<Rational>> {
    let mut weights = Vec::new();
    for (line, body) in content_lines(text) {
        match parse_rational(body) {
            Some(r) => weights.push(r),
            None => return parse_error(line, format!("not a rational number: {body:?}")),
        }
    }
    WeightVector::new(weights)
}

pub fn read_graph(path: impl AsRef<Path>) -> Result<ParsedGraph> {
    parse_graph(&std::fs::read_to_string(path)?)
}

pub fn read_weights(path: impl AsRef<Path>) -> Result<WeightVector<Rational>> {
    parse_weights(&std::fs::read_to_string(path)?)
}

/// Text form of a graph in the format accepted by [`parse_graph`].
pub fn format_graph(g: &ParsedGraph) -> String {
    let (kind, n, pairs): (&str, usize, Vec<(usize, usize)>) = match g {
        ParsedGraph::Directed(d) => ("digraph", d.n(), d.arcs().collect()),
        ParsedGraph::Undirected(u) => ("graph", u.n(), u.edges().collect()),
    };
    let mut out = format!("{kind} {n}\n");
    for (u, v) in pairs {
        out.push_str(&format!("{u} {v}\n"));
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::Scalar;

    fn q(p: i64, d: i64) -> Rational {
        Rational::from_ratio(p, d)
    }

    #[test]
    fn graph_examples() {
        let g = parse_graph("digraph 3\n0 1\n2 1\n").unwrap();
        assert_eq!(g, ParsedGraph::Directed(OrientedGraph::new(3, [(0, 1), (2, 1)]).unwrap()));
        let g = parse_graph("graph 2\n0 1\n").unwrap();
        assert_eq!(g, ParsedGraph::Undirected(UndirectedGraph::complete(2)));
    }

    #[test]
    fn antiparallel_is_rejected_with_line() {
        match parse_graph("digraph 2\n0 1\n1 0\n") {
            Err(Error::Parse { line, message }) => {
                assert_eq!(line, 3);
                assert!(message.contains("not an orientation"), "{message}");
            }
            other => panic!("unexpected {other:?}"),
        }
    }

    #[test]
    fn malformed_lines_report_numbers() {
        let cases = [
            ("", 1),
            ("tree 3\n", 1),
            ("digraph x\n", 1),
            ("# comment\n\ndigraph 3\n0 1 2\n", 4),
            ("digraph 3\n0 1\n0 1\n", 3),
            ("graph 3\n0 5\n", 2),
            ("graph 3\n1 -1\n", 2),
        ];
        for (text, expected) in cases {
            match parse_graph(text) {
                Err(Error::Parse { line, .. }) => assert_eq!(line, expected, "{text:?}"),
                other => panic!("{text:?}: unexpected {other:?}"),
            }
        }
    }

    #[test]
    fn comments_are_skipped() {
        let g = parse_graph("# header next\ngraph 3\n# edge\n0 2\n\n").unwrap();
        assert_eq!(g.undirected().edges().collect::<Vec<_>>(), vec![(0, 2)]);
    }

    #[test]
    fn rationals() {
        assert_eq!(parse_rational("3/32"), Some(q(3, 32)));
        assert_eq!(parse_rational("2"), Some(q(2, 1)));
        assert_eq!(parse_rational("0.25"), Some(q(1, 4)));
        assert_eq!(parse_rational("-1.5"), Some(q(-3, 2)));
        assert_eq!(parse_rational(".5"), Some(q(1, 2)));
        assert_eq!(parse_rational("1/0"), None);
        assert_eq!(parse_rational("abc"), None);
        assert_eq!(parse_rational("."), None);
        assert_eq!(parse_rational("1e3"), None);
    }

    #[test]
    fn weights() {
        let w = parse_weights("1/4\n0.25\n# rest\n1/2\n").unwrap();
        assert_eq!(w.as_slice(), &[q(1, 4), q(1, 4), q(1, 2)]);
        assert!(matches!(parse_weights("1/2\nhalf\n"), Err(Error::Parse { line: 2, .. })));
        assert!(matches!(parse_weights("1/2\n1/3\n"), Err(Error::Domain(_))));
    }

    #[test]
    fn format_round_trips() {
        let text = "digraph 4\n0 1\n2 1\n3 0\n";
        assert_eq!(format_graph(&parse_graph(text).unwrap()), text);
    }

    #[test]
    fn files() {
        let dir = tempfile::tempdir().unwrap();
        let path = dir.path().join("g.txt");
        std::fs::write(&path, "graph 3\n0 1\n").unwrap();
        assert_eq!(read_graph(&path).unwrap().n(), 3);
        assert!(matches!(read_weights(dir.path().join("missing")), Err(Error::Io(_))));
    }
}
