//! Text file formats.
//!
//! Graph: first line `n m`, then `m` lines `u v w` (1-indexed, `u < v`,
//! decimal weight). Turnstile stream: lines `u v delta` (delta may be
//! negative). Matrix-weighted graph: first line `n k m`, then `m` lines
//! `u v phi_1 ... phi_k`.

use std::fmt::Write as _;

use thiserror::Error;

use crate::graph::WeightedGraph;
use crate::mw::MatrixWeightedGraph;

#[derive(Debug, Error)]
#[error("line {line}: {msg}")]
pub struct ParseError {
    pub line: usize,
    pub msg: String,
}

fn err<T>(line: usize, msg: impl Into<String>) -> Result<T, ParseError> {
    Err(ParseError { line, msg: msg.into() })
}

fn tokens(s: &str) -> Vec<&str> {
    s.split_whitespace().collect()
}

fn parse<T: std::str::FromStr>(tok: &str, line: usize, what: &str) -> Result<T, ParseError> {
    tok.parse::<T>().map_err(|_| ParseError { line, msg: format!("bad {what}: {tok:?}") })
}

pub fn parse_graph(text: &str) -> Result<WeightedGraph, ParseError> {
    let mut lines = text.lines().enumerate().filter(|(_, l)| !l.trim().is_empty());
    let (ln, header) = match lines.next() {
        Some(x) => x,
        None => return err(1, "empty file"),
    };
    let toks = tokens(header);
    if toks.len() != 2 {
        return err(ln + 1, "expected header `n m`");
    }
    let n: usize = parse(toks[0], ln + 1, "vertex count")?;
    let m: usize = parse(toks[1], ln + 1, "edge count")?;
    if n == 0 {
        return err(ln + 1, "vertex count must be positive");
    }
    let mut g = WeightedGraph::new(n);
    let mut seen = 0;
    for (ln, line) in lines {
        let toks = tokens(line);
        if toks.len() != 3 {
            return err(ln + 1, "expected `u v w`");
        }
        let u: usize = parse(toks[0], ln + 1, "endpoint")?;
        let v: usize = parse(toks[1], ln + 1, "endpoint")?;
        let w: f64 = parse(toks[2], ln + 1, "weight")?;
        if u == 0 || v == 0 || u > n || v > n {
            return err(ln + 1, format!("endpoint out of range 1..={n}"));
        }
        if u >= v {
            return err(ln + 1, "edges must satisfy u < v");
        }
        if !(w > 0.0) || !w.is_finite() {
            return err(ln + 1, "weight must be positive and finite");
        }
        g.set_edge(u - 1, v - 1, w).map_err(|e| ParseError { line: ln + 1, msg: e.to_string() })?;
        seen += 1;
    }
    if seen != m {
        return err(0, format!("header said {m} edges, found {seen}"));
    }
    Ok(g)
}

pub fn format_graph(g: &WeightedGraph) -> String {
    let mut out = String::new();
    let _ = writeln!(out, "{} {}", g.n(), g.m());
    for ((u, v), w) in g.edges() {
        let _ = writeln!(out, "{} {} {}", u + 1, v + 1, w);
    }
    out
}

/// Signed turnstile updates, 1-indexed endpoints.
pub fn parse_stream(text: &str) -> Result<Vec<(usize, usize, f64)>, ParseError> {
    let mut out = Vec::new();
    for (ln, line) in text.lines().enumerate() {
        if line.trim().is_empty() {
            continue;
        }
        let toks = tokens(line);
        if toks.len() != 3 {
            return err(ln + 1, "expected `u v delta`");
        }
        let u: usize = parse(toks[0], ln + 1, "endpoint")?;
        let v: usize = parse(toks[1], ln + 1, "endpoint")?;
        let d: f64 = parse(toks[2], ln + 1, "delta")?;
        if u == 0 || v == 0 || u == v {
            return err(ln + 1, "endpoints must be distinct and 1-indexed");
        }
        if !d.is_finite() {
            return err(ln + 1, "delta must be finite");
        }
        out.push((u - 1, v - 1, d));
    }
    Ok(out)
}

pub fn format_stream(updates: &[(usize, usize, f64)]) -> String {
    let mut out = String::new();
    for &(u, v, d) in updates {
        let _ = writeln!(out, "{} {} {}", u + 1, v + 1, d);
    }
    out
}

pub fn parse_mw_graph(text: &str) -> Result<MatrixWeightedGraph, ParseError> {
    let mut lines = text.lines().enumerate().filter(|(_, l)| !l.trim().is_empty());
    let (ln, header) = match lines.next() {
        Some(x) => x,
        None => return err(1, "empty file"),
    };
    let toks = tokens(header);
    if toks.len() != 3 {
        return err(ln + 1, "expected header `n k m`");
    }
    let n: usize = parse(toks[0], ln + 1, "vertex count")?;
    let k: usize = parse(toks[1], ln + 1, "weight dimension")?;
    let m: usize = parse(toks[2], ln + 1, "edge count")?;
    if n == 0 || k == 0 {
        return err(ln + 1, "n and k must be positive");
    }
    let mut g = MatrixWeightedGraph::new(n, k);
    let mut seen = 0;
    for (ln, line) in lines {
        let toks = tokens(line);
        if toks.len() != 2 + k {
            return err(ln + 1, format!("expected `u v` plus {k} weight entries"));
        }
        let u: usize = parse(toks[0], ln + 1, "endpoint")?;
        let v: usize = parse(toks[1], ln + 1, "endpoint")?;
        if u == 0 || v == 0 || u > n || v > n || u >= v {
            return err(ln + 1, "need 1-indexed endpoints with u < v");
        }
        let mut phi = Vec::with_capacity(k);
        for t in &toks[2..] {
            let x: f64 = parse(t, ln + 1, "weight entry")?;
            if !x.is_finite() {
                return err(ln + 1, "weight entries must be finite");
            }
            phi.push(x);
        }
        if phi.iter().all(|&x| x == 0.0) {
            return err(ln + 1, "weight vector must be nonzero");
        }
        g.set_edge(u - 1, v - 1, phi)
            .map_err(|e| ParseError { line: ln + 1, msg: e.to_string() })?;
        seen += 1;
    }
    if seen != m {
        return err(0, format!("header said {m} edges, found {seen}"));
    }
    Ok(g)
}

pub fn format_mw_graph(g: &MatrixWeightedGraph) -> String {
    let mut out = String::new();
    let _ = writeln!(out, "{} {} {}", g.n(), g.k(), g.m());
    for ((u, v), phi) in g.edges() {
        let _ = write!(out, "{} {}", u + 1, v + 1);
        for x in phi {
            let _ = write!(out, " {x}");
        }
        let _ = writeln!(out);
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn graph_roundtrip() {
        let g = WeightedGraph::from_edges(4, &[(0, 1, 1.5), (1, 3, 2.0)]).unwrap();
        let back = parse_graph(&format_graph(&g)).unwrap();
        assert_eq!(g, back);
    }

    #[test]
    fn graph_errors_carry_line_numbers() {
        let e = parse_graph("3 1\n1 1 2.0\n").unwrap_err();
        assert_eq!(e.line, 2);
        let e = parse_graph("3 2\n1 2 1.0\n").unwrap_err();
        assert!(e.msg.contains("found 1"));
        assert!(parse_graph("3 1\n2 1 1.0\n").is_err());
        assert!(parse_graph("3 1\n1 2 -1.0\n").is_err());
    }

    #[test]
    fn stream_roundtrip() {
        let ups = vec![(0, 3, 1.25), (2, 1, -0.5)];
        let s = format_stream(&ups);
        assert_eq!(parse_stream(&s).unwrap(), ups);
    }
}
