//! PACE-style `.td` files.
//!
//! ```text
//! s td <#bags> <width+1> <n>
//! b <id> <v...>
//! <id> <id>
//! t <id> minor|deg
//! a <id> <v...>
//! ```
//!
//! Bag ids and vertices are 1-indexed. The `t`/`a` lines are optional node
//! type annotations.

use std::fmt::Write as _;
use std::sync::Arc;

use super::{NodeType, NodeTypeTag, TreeDecomposition};
use crate::error::{Error, Result};
use crate::graph::{Graph, VertexSet};

fn perr(line: usize, msg: impl Into<String>) -> Error {
    Error::Parse { line, msg: msg.into() }
}

fn num(tok: &str, line: usize) -> Result<usize> {
    tok.parse().map_err(|_| perr(line, format!("expected a non-negative integer, got `{tok}`")))
}

fn one_based(tok: &str, limit: usize, line: usize, what: &str) -> Result<usize> {
    let x = num(tok, line)?;
    if x == 0 || x > limit {
        return Err(perr(line, format!("{what} {x} out of range 1..={limit}")));
    }
    Ok(x - 1)
}

pub fn parse_td(text: &str, host: Arc<Graph>) -> Result<TreeDecomposition> {
    let mut header: Option<usize> = None;
    let mut bags: Vec<Option<VertexSet>> = Vec::new();
    let mut edges = Vec::new();
    let mut tags: Vec<(usize, usize, NodeTypeTag)> = Vec::new();
    let mut apices: Vec<(usize, usize, VertexSet)> = Vec::new();
    let n = host.n();
    for (i, raw) in text.lines().enumerate() {
        let line = i + 1;
        let toks: Vec<&str> = raw.split_whitespace().collect();
        let Some(&first) = toks.first() else { continue };
        if first == "c" {
            continue;
        }
        if first == "s" {
            if header.is_some() {
                return Err(perr(line, "duplicate header"));
            }
            if toks.len() != 5 || toks[1] != "td" {
                return Err(perr(line, "expected `s td <#bags> <width+1> <n>`"));
            }
            let count = num(toks[2], line)?;
            let hn = num(toks[4], line)?;
            if hn != n {
                return Err(perr(line, format!("header declares {hn} vertices, graph has {n}")));
            }
            header = Some(count);
            bags = vec![None; count];
            continue;
        }
        let Some(count) = header else {
            return Err(perr(line, "content before `s td` header"));
        };
        match first {
            "b" => {
                if toks.len() < 2 {
                    return Err(perr(line, "bag line without id"));
                }
                let id = one_based(toks[1], count, line, "bag id")?;
                let bag = toks[2..].iter().map(|t| one_based(t, n, line, "vertex")).collect::<Result<VertexSet>>()?;
                if bags[id].replace(bag).is_some() {
                    return Err(perr(line, format!("bag {} declared twice", id + 1)));
                }
            }
            "t" => {
                if toks.len() != 3 {
                    return Err(perr(line, "expected `t <id> minor|deg`"));
                }
                let id = one_based(toks[1], count, line, "bag id")?;
                let tag = match toks[2] {
                    "minor" => NodeTypeTag::MinorStructured,
                    "deg" => NodeTypeTag::LowHighDegree,
                    other => return Err(perr(line, format!("unknown node type `{other}`"))),
                };
                tags.push((line, id, tag));
            }
            "a" => {
                if toks.len() < 2 {
                    return Err(perr(line, "apex line without id"));
                }
                let id = one_based(toks[1], count, line, "bag id")?;
                let set = toks[2..].iter().map(|t| one_based(t, n, line, "vertex")).collect::<Result<VertexSet>>()?;
                apices.push((line, id, set));
            }
            _ => {
                if toks.len() != 2 {
                    return Err(perr(line, "unrecognised line"));
                }
                let u = one_based(toks[0], count, line, "bag id")?;
                let v = one_based(toks[1], count, line, "bag id")?;
                edges.push((u, v));
            }
        }
    }
    if header.is_none() {
        return Err(perr(0, "missing `s td` header"));
    }
    let bags = bags
        .into_iter()
        .enumerate()
        .map(|(i, b)| b.ok_or_else(|| perr(0, format!("bag {} never declared", i + 1))))
        .collect::<Result<Vec<_>>>()?;
    let mut td = TreeDecomposition::new(host, bags, &edges)?;
    let mut types: Vec<Option<NodeType>> = vec![None; td.len()];
    for (_, id, tag) in tags {
        types[id] = Some(NodeType { tag, apex_set: VertexSet::new() });
    }
    for (line, id, set) in apices {
        match &mut types[id] {
            Some(ty) => ty.apex_set = set,
            None => return Err(perr(line, "apex set for a node without a `t` line")),
        }
    }
    for (id, ty) in types.into_iter().enumerate() {
        if let Some(ty) = ty {
            td.set_annotation(id, ty)?;
        }
    }
    Ok(td)
}

pub fn write_td(td: &TreeDecomposition) -> String {
    let mut out = String::new();
    let max_bag = td.bags().iter().map(|b| b.len()).max().unwrap_or(0);
    writeln!(out, "s td {} {} {}", td.len(), max_bag, td.host().n()).unwrap();
    for t in td.nodes() {
        write!(out, "b {}", t + 1).unwrap();
        for v in td.bag(t) {
            write!(out, " {}", v + 1).unwrap();
        }
        out.push('\n');
    }
    for (p, c) in td.tree_edges() {
        writeln!(out, "{} {}", p + 1, c + 1).unwrap();
    }
    for t in td.nodes() {
        if let Some(ty) = td.annotation(t) {
            let tag = match ty.tag {
                NodeTypeTag::MinorStructured => "minor",
                NodeTypeTag::LowHighDegree => "deg",
            };
            writeln!(out, "t {} {tag}", t + 1).unwrap();
            if !ty.apex_set.is_empty() {
                write!(out, "a {}", t + 1).unwrap();
                for v in &ty.apex_set {
                    write!(out, " {}", v + 1).unwrap();
                }
                out.push('\n');
            }
        }
    }
    out
}
