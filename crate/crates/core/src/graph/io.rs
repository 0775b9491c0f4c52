//! The `.gr` text format: `p ds <n> <m>`, then `e <u> <v>` per edge with
//! 1-indexed endpoints. Lines starting with `c` are comments.

use std::fmt::Write as _;

use super::Graph;
use crate::error::{Error, Result};

pub fn parse_gr(text: &str) -> Result<Graph> {
    let mut header: Option<(usize, usize)> = None;
    let mut edges = Vec::new();
    for (i, raw) in text.lines().enumerate() {
        let line_no = i + 1;
        let parse_err = |msg: &str| Error::Parse { line: line_no, msg: msg.to_string() };
        let line = raw.trim();
        if line.is_empty() || line.starts_with('c') {
            continue;
        }
        let mut tok = line.split_whitespace();
        match tok.next() {
            Some("p") => {
                if header.is_some() {
                    return Err(parse_err("duplicate header"));
                }
                if tok.next() != Some("ds") {
                    return Err(parse_err("expected `p ds <n> <m>`"));
                }
                let n = parse_num(tok.next(), line_no)?;
                let m = parse_num(tok.next(), line_no)?;
                if tok.next().is_some() {
                    return Err(parse_err("trailing tokens in header"));
                }
                header = Some((n, m));
            }
            Some("e") => {
                let Some((n, _)) = header else {
                    return Err(parse_err("edge before header"));
                };
                let u = parse_num(tok.next(), line_no)?;
                let v = parse_num(tok.next(), line_no)?;
                if tok.next().is_some() {
                    return Err(parse_err("trailing tokens in edge line"));
                }
                if u == 0 || v == 0 || u > n || v > n {
                    return Err(parse_err("vertex id out of range"));
                }
                if u == v {
                    return Err(parse_err("self-loop"));
                }
                edges.push((u - 1, v - 1));
            }
            _ => return Err(parse_err("unrecognised line")),
        }
    }
    let Some((n, m)) = header else {
        return Err(Error::Parse { line: 0, msg: "missing `p ds` header".into() });
    };
    if edges.len() != m {
        return Err(Error::Parse { line: 0, msg: format!("header declares {m} edges, found {}", edges.len()) });
    }
    let g = Graph::from_edges(n, edges)?;
    if g.m() != m {
        return Err(Error::Parse { line: 0, msg: "parallel edges".into() });
    }
    Ok(g)
}

fn parse_num(tok: Option<&str>, line: usize) -> Result<usize> {
    tok.and_then(|t| t.parse().ok()).ok_or(Error::Parse { line, msg: "expected a non-negative integer".into() })
}

/// Canonical serialisation: header, then edges sorted lexicographically.
pub fn write_gr(g: &Graph) -> String {
    let mut out = String::new();
    writeln!(out, "p ds {} {}", g.n(), g.m()).unwrap();
    for (u, v) in g.edges() {
        writeln!(out, "e {} {}", u + 1, v + 1).unwrap();
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    #[test]
    fn parses_with_comments() {
        let g = parse_gr("c a path\np ds 3 2\ne 1 2\nc mid\ne 2 3\n").unwrap();
        assert_eq!(g.n(), 3);
        assert_eq!(g.edges().collect::<Vec<_>>(), vec![(0, 1), (1, 2)]);
    }

    #[test]
    fn rejects_malformed_input() {
        assert!(matches!(parse_gr("e 1 2\n"), Err(Error::Parse { .. })));
        assert!(matches!(parse_gr("p ds 2 1\ne 1 3\n"), Err(Error::Parse { .. })));
        assert!(matches!(parse_gr("p ds 2 2\ne 1 2\n"), Err(Error::Parse { .. })));
        assert!(matches!(parse_gr("p ds 2 2\ne 1 2\ne 2 1\n"), Err(Error::Parse { .. })));
        assert!(matches!(parse_gr("p td 2 0\n"), Err(Error::Parse { .. })));
        assert!(matches!(parse_gr("p ds 2 1\ne 1 x\n"), Err(Error::Parse { .. })));
        assert!(matches!(parse_gr(""), Err(Error::Parse { .. })));
    }

    proptest! {
        #[test]
        fn round_trip_is_bit_exact(n in 0usize..12, raw in proptest::collection::vec((0usize..12, 0usize..12), 0..30)) {
            let edges: Vec<_> = raw.into_iter().filter(|&(u, v)| u < n && v < n && u != v).collect();
            let g = Graph::from_edges(n, edges).unwrap();
            let text = write_gr(&g);
            let back = parse_gr(&text).unwrap();
            prop_assert_eq!(&back, &g);
            prop_assert_eq!(write_gr(&back), text);
        }
    }
}
