//! Balanced separators from tree decompositions and the recursive
//! separator reducer for minor-structured pieces.

use crate::boundaried::{replace, RepresentativeTable};
use crate::error::{Error, Result};
use crate::graph::{Vertex, VertexSet};
use crate::treedec::{heuristic_decomposition, Heuristic, Node, TreeDecomposition};

use super::piece::{irrelevant_with_apices, replace_small_parts, try_replace, Piece, PieceOutcome};
use super::ReduceConfig;

/// A bag `x` of the decomposition splitting the rest of the graph into two
/// sides with no edges between them.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Separator {
    pub node: Node,
    pub x: VertexSet,
    pub v1: VertexSet,
    pub v2: VertexSet,
    /// Whether both sides carry between a third and two thirds of the
    /// weight outside `x`.
    pub band_ok: bool,
}

const EXHAUSTIVE_COMPONENTS: usize = 20;

fn in_band(w1: usize, w2: usize, rest: usize) -> bool {
    rest == 0 || (3 * w1 >= rest && 3 * w1 <= 2 * rest && 3 * w2 >= rest && 3 * w2 <= 2 * rest)
}

/// Splits weighted components into two groups; `Ok(assignment, band_ok)`.
fn group(weights: &[usize], rest: usize) -> (Vec<bool>, bool) {
    let mut order: Vec<usize> = (0..weights.len()).collect();
    order.sort_by_key(|&i| (std::cmp::Reverse(weights[i]), i));
    let mut side = vec![false; weights.len()];
    let (mut w1, mut w2) = (0, 0);
    for &i in &order {
        if w1 <= w2 {
            w1 += weights[i];
        } else {
            side[i] = true;
            w2 += weights[i];
        }
    }
    if in_band(w1, w2, rest) {
        return (side, true);
    }
    let c = weights.len();
    if c == 0 || c > EXHAUSTIVE_COMPONENTS {
        return (side, false);
    }
    let mut best: Option<(usize, u32)> = None;
    for mask in 0u32..1 << (c - 1) {
        let w2: usize = (0..c).filter(|i| mask >> i & 1 == 1).map(|i| weights[i]).sum();
        let w1 = rest - w2;
        if in_band(w1, w2, rest) {
            let spread = w1.abs_diff(w2);
            if best.is_none_or(|(s, _)| spread < s) {
                best = Some((spread, mask));
            }
        }
    }
    match best {
        Some((_, mask)) => ((0..c).map(|i| mask >> i & 1 == 1).collect(), true),
        None => (side, false),
    }
}

/// Finds a bag `X` such that every component of `G - X` carries at most
/// half of `weight`, then groups the components into two sides. Bags are
/// tried in preorder; the first whose grouping lands both sides in the
/// `[1/3, 2/3]` band of the weight outside `X` wins, else the first
/// qualifying bag is returned with `band_ok = false`.
pub fn balanced_separator(td: &TreeDecomposition, weight: &VertexSet) -> Result<Separator> {
    let g = td.host();
    g.check_set(weight)?;
    let total = weight.len();
    if total == 0 {
        return Err(Error::invalid("separator weight set is empty"));
    }
    let mut fallback: Option<Separator> = None;
    for &t in td.preorder() {
        let x = td.bag(t).clone();
        let comps = g.components_avoiding(&x);
        let ws: Vec<usize> = comps.iter().map(|c| c.iter().filter(|v| weight.contains(v)).count()).collect();
        if ws.iter().any(|&w| 2 * w > total) {
            continue;
        }
        let rest = total - weight.intersection(&x).count();
        let weighted: Vec<usize> = (0..comps.len()).filter(|&i| ws[i] > 0).collect();
        let (side, band_ok) = group(&weighted.iter().map(|&i| ws[i]).collect::<Vec<_>>(), rest);
        let (mut v1, mut v2) = (VertexSet::new(), VertexSet::new());
        for (j, &i) in weighted.iter().enumerate() {
            if side[j] { &mut v2 } else { &mut v1 }.extend(comps[i].iter().copied());
        }
        for (i, c) in comps.iter().enumerate() {
            if ws[i] == 0 {
                if v1.len() <= v2.len() { &mut v1 } else { &mut v2 }.extend(c.iter().copied());
            }
        }
        let sep = Separator { node: t, x, v1, v2, band_ok };
        if band_ok {
            return Ok(sep);
        }
        fallback.get_or_insert(sep);
    }
    fallback.ok_or_else(|| Error::invariant("no bag separates the weight in halves"))
}

/// Reduces a piece whose boundary `S` dominates it: small boundaries go
/// straight to the table, larger ones are split along a separator that
/// balances `S`, each side is reduced with boundary `(S ∩ side) ∪ X`, and
/// the results are glued back.
pub fn reduce_separator_recursive(
    piece: &Piece,
    apices: &VertexSet,
    table: &RepresentativeTable,
    cfg: &ReduceConfig,
) -> Result<PieceOutcome> {
    recurse(piece, apices, table, cfg, 0)
}

fn recurse(
    piece: &Piece,
    apices: &VertexSet,
    table: &RepresentativeTable,
    cfg: &ReduceConfig,
    depth: usize,
) -> Result<PieceOutcome> {
    if piece.boundary.len() <= table.t() {
        let mut out = whole_piece(piece, table)?;
        let swept = replace_small_parts(&out.piece, table, cfg)?;
        merge(&mut out, swept);
        return Ok(out);
    }
    let (mut out, kept) = irrelevant_with_apices(piece, apices, table.problem(), cfg)?;
    let apices: VertexSet = apices.iter().filter_map(|v| kept.binary_search(v).ok()).collect();
    let s = out.piece.boundary_set();
    let g = &out.piece.graph;
    if depth >= cfg.max_depth || g.n() <= s.len() + 1 {
        let swept = replace_small_parts(&out.piece, table, cfg)?;
        merge(&mut out, swept);
        return Ok(out);
    }
    let td = heuristic_decomposition(g, Heuristic::MinFill);
    out.width = Some(out.width.unwrap_or(0).max(td.width()));
    let sep = balanced_separator(&td, &s)?;
    let boundary_of = |side: &VertexSet, x: &VertexSet, s: &VertexSet| -> (VertexSet, Vec<Vertex>) {
        let part: VertexSet = side.union(x).copied().collect();
        let mut b: VertexSet = s.intersection(&part).copied().collect();
        b.extend(x.iter().copied());
        (part, b.into_iter().collect())
    };
    let (_, b1) = boundary_of(&sep.v1, &sep.x, &s);
    let (_, b2) = boundary_of(&sep.v2, &sep.x, &s);
    let progress = !sep.v1.is_empty() && !sep.v2.is_empty() && b1.len() < s.len() && b2.len() < s.len();
    if !progress {
        let swept = replace_small_parts(&out.piece, table, cfg)?;
        merge(&mut out, swept);
        return Ok(out);
    }
    let (mut x, mut v2, mut apices) = (sep.x.clone(), sep.v2.clone(), apices);
    let (part, boundary) = boundary_of(&sep.v1, &x, &s);
    if let Some(kept) = reduce_part(&mut out, &part, &boundary, &apices, table, cfg, depth)? {
        let map = |set: &VertexSet| -> VertexSet { set.iter().filter_map(|v| kept.binary_search(v).ok()).collect() };
        x = map(&x);
        v2 = map(&v2);
        apices = map(&apices);
        if x.len() != sep.x.len() || v2.len() != sep.v2.len() {
            return Err(Error::invariant("separator side changed while reducing the other side"));
        }
    }
    let s = out.piece.boundary_set();
    let (part, boundary) = boundary_of(&v2, &x, &s);
    reduce_part(&mut out, &part, &boundary, &apices, table, cfg, depth)?;
    Ok(out)
}

/// Reduces `G[part]` (boundary `boundary`) inside `out.piece` and glues the
/// result back when it is smaller. Returns the kept-vertex map on change.
fn reduce_part(
    out: &mut PieceOutcome,
    part: &VertexSet,
    boundary: &[Vertex],
    apices: &VertexSet,
    table: &RepresentativeTable,
    cfg: &ReduceConfig,
    depth: usize,
) -> Result<Option<Vec<Vertex>>> {
    let sub = Piece::from_part(&out.piece.graph, part, boundary)?;
    let res = recurse(&sub, &local_set(part, apices), table, cfg, depth + 1)?;
    if res.piece.n() >= sub.n() {
        out.refusals += res.refusals;
        return Ok(None);
    }
    let new_part = res.piece.to_boundaried(boundary.len())?;
    let replaced = replace(&out.piece.graph, part, boundary, &new_part)?;
    let piece_boundary = out
        .piece
        .boundary
        .iter()
        .map(|v| replaced.kept.binary_search(v).map_err(|_| Error::invariant("boundary vertex lost")))
        .collect::<Result<Vec<_>>>()?;
    let summary = PieceOutcome { piece: Piece::new(replaced.graph, piece_boundary)?, ..res };
    merge(out, summary);
    Ok(Some(replaced.kept))
}

/// Ids in `G[part]` (sorted order) of the members of `set` inside `part`.
fn local_set(part: &VertexSet, set: &VertexSet) -> VertexSet {
    part.iter().enumerate().filter(|(_, v)| set.contains(v)).map(|(i, _)| i).collect()
}

fn merge(out: &mut PieceOutcome, other: PieceOutcome) {
    out.piece = other.piece;
    out.constant += other.constant;
    out.irrelevant_removed += other.irrelevant_removed;
    out.replacements += other.replacements;
    out.refusals += other.refusals;
    out.width = match (out.width, other.width) {
        (Some(a), Some(b)) => Some(a.max(b)),
        (a, b) => a.or(b),
    };
}

fn whole_piece(piece: &Piece, table: &RepresentativeTable) -> Result<PieceOutcome> {
    let mut out = PieceOutcome {
        piece: piece.clone(),
        constant: 0,
        irrelevant_removed: 0,
        replacements: 0,
        refusals: 0,
        width: None,
    };
    let all: VertexSet = piece.graph.vertices().collect();
    match try_replace(piece, &all, &piece.boundary, table) {
        Ok(Some((next, c))) => {
            out.piece = next;
            out.constant = c;
            out.replacements = 1;
        }
        Ok(None) => {}
        Err(e) if e.is_refusal() => out.refusals = 1,
        Err(e) => return Err(e),
    }
    Ok(out)
}
