//! Protrusions: parts with a small boundary that are either of small
//! treewidth or dominated by a small set, and their replacement by table
//! representatives.

use std::collections::BTreeSet;
use std::fmt;

use crate::boundaried::{reduce_via_representatives, replace, BoundariedGraph, RepresentativeTable};
use crate::error::{Error, Result};
use crate::graph::{Graph, Vertex, VertexSet};
use crate::treedec::{heuristic_decomposition, Heuristic, Node, TreeDecomposition};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum ProtrusionKind {
    /// `G[X]` has treewidth at most `r`.
    Tw,
    /// A set of at most `r` vertices dominates `G[X]`.
    Ds,
    /// A set of at most `r` vertices meets every component of `G[X]` in a
    /// connected dominating set of it.
    Cds,
}

impl fmt::Display for ProtrusionKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            ProtrusionKind::Tw => "tw",
            ProtrusionKind::Ds => "ds",
            ProtrusionKind::Cds => "cds",
        })
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Protrusion {
    pub vertices: VertexSet,
    /// Vertices of `vertices` with a neighbour outside.
    pub boundary: VertexSet,
    pub kind: ProtrusionKind,
    pub r: usize,
    /// Empty for [`ProtrusionKind::Tw`].
    pub witness: VertexSet,
}

impl Protrusion {
    /// Builds a protrusion over `vertices`, computing its boundary in `g`.
    pub fn new(g: &Graph, vertices: VertexSet, kind: ProtrusionKind, r: usize, witness: VertexSet) -> Result<Self> {
        let boundary = g.boundary_of(&vertices)?;
        Ok(Protrusion { vertices, boundary, kind, r, witness })
    }

    pub fn interior(&self) -> VertexSet {
        self.vertices.difference(&self.boundary).copied().collect()
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Verdict {
    Valid,
    Invalid(String),
    /// The heuristic could not certify the treewidth bound.
    Unverified(String),
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ProtrusionReport {
    pub verdict: Verdict,
    pub boundary_size: usize,
    /// Width of the heuristic decomposition of `G[X]` (tw kind only).
    pub measured_width: Option<usize>,
}

impl ProtrusionReport {
    pub fn is_valid(&self) -> bool {
        self.verdict == Verdict::Valid
    }
}

pub fn verify_protrusion(g: &Graph, p: &Protrusion) -> Result<ProtrusionReport> {
    g.check_set(&p.vertices)?;
    let boundary = g.boundary_of(&p.vertices)?;
    let mut report = ProtrusionReport { verdict: Verdict::Valid, boundary_size: boundary.len(), measured_width: None };
    let fail = |mut r: ProtrusionReport, msg: String| {
        r.verdict = Verdict::Invalid(msg);
        Ok(r)
    };
    if boundary != p.boundary {
        return fail(report, "stated boundary differs from the computed one".into());
    }
    if boundary.len() > p.r {
        return fail(report, format!("boundary has {} vertices, more than r = {}", boundary.len(), p.r));
    }
    let (sub, map) = g.induced_subgraph(&p.vertices)?;
    let local = |s: &VertexSet| -> VertexSet { s.iter().filter_map(|v| map.binary_search(v).ok()).collect() };
    match p.kind {
        ProtrusionKind::Tw => {
            let width = heuristic_decomposition(&sub, Heuristic::MinFill).width();
            report.measured_width = Some(width);
            if width > p.r {
                report.verdict = Verdict::Unverified(format!("heuristic width {width} exceeds r = {}", p.r));
            }
        }
        ProtrusionKind::Ds | ProtrusionKind::Cds => {
            if !p.witness.is_subset(&p.vertices) {
                return fail(report, "witness leaves the protrusion".into());
            }
            if p.witness.len() > p.r {
                return fail(report, format!("witness has {} vertices, more than r = {}", p.witness.len(), p.r));
            }
            let w = local(&p.witness);
            if !sub.is_dominating_set(&w)? {
                return fail(report, "witness does not dominate the protrusion".into());
            }
            if p.kind == ProtrusionKind::Cds {
                for comp in sub.components() {
                    let part: VertexSet = comp.iter().copied().filter(|v| w.contains(v)).collect();
                    if !sub.is_connected_subset(&part) {
                        return fail(report, "witness is disconnected inside a component".into());
                    }
                }
            }
        }
    }
    Ok(report)
}

/// Replaces a verified DS or CDS protrusion by the representative of its
/// class, returning the new graph and parameter.
pub fn replace_ds_protrusion(g: &Graph, p: &Protrusion, table: &RepresentativeTable, k: i64) -> Result<(Graph, i64)> {
    if p.kind == ProtrusionKind::Tw {
        return Err(Error::invalid("expected a DS or CDS protrusion"));
    }
    replace_verified(g, p, table, k)
}

/// As [`replace_ds_protrusion`] for treewidth protrusions; an unverified
/// width bound is refused.
pub fn replace_tw_protrusion(g: &Graph, p: &Protrusion, table: &RepresentativeTable, k: i64) -> Result<(Graph, i64)> {
    if p.kind != ProtrusionKind::Tw {
        return Err(Error::invalid("expected a treewidth protrusion"));
    }
    replace_verified(g, p, table, k)
}

/// Replaces a protrusion of any kind; the driver entry point.
pub fn replace_protrusion(g: &Graph, p: &Protrusion, table: &RepresentativeTable, k: i64) -> Result<(Graph, i64)> {
    replace_verified(g, p, table, k)
}

fn replace_verified(g: &Graph, p: &Protrusion, table: &RepresentativeTable, k: i64) -> Result<(Graph, i64)> {
    let report = verify_protrusion(g, p)?;
    match report.verdict {
        Verdict::Valid => {}
        Verdict::Invalid(msg) => return Err(Error::invalid(format!("not a protrusion: {msg}"))),
        Verdict::Unverified(msg) => return Err(Error::Refused(format!("protrusion not certified: {msg}"))),
    }
    if p.boundary.len() > table.t() {
        return Err(Error::Capacity { what: "protrusion boundary", actual: p.boundary.len(), limit: table.t() });
    }
    let labeled: Vec<Vertex> = p.boundary.iter().copied().collect();
    let part = BoundariedGraph::view(g, &p.vertices, &labeled, table.t())?;
    let (rep, c) = reduce_via_representatives(&part, table)?;
    let out = replace(g, &p.vertices, &labeled, &rep)?;
    Ok((out.graph, k + c))
}

/// Tree-edge counts `μ` for a vertex set `d`: `below[c] = |Ψ(subtree(c)) ∩ d|`
/// and `above[c] = |Ψ(M \ subtree(c)) ∩ d|` for every non-root node `c`.
pub(crate) fn subtree_counts(td: &TreeDecomposition, d: &VertexSet) -> Result<(Vec<usize>, Vec<usize>)> {
    let peaks = td.peaks();
    let mut peak_count = vec![0usize; td.len()];
    for &v in d {
        let p = peaks
            .get(v)
            .copied()
            .flatten()
            .ok_or_else(|| Error::invalid(format!("vertex {v} is not covered by the decomposition")))?;
        peak_count[p] += 1;
    }
    let mut in_subtree = peak_count.clone();
    for &t in td.preorder().iter().rev() {
        if let Some(p) = td.parent(t) {
            in_subtree[p] += in_subtree[t];
        }
    }
    let mut below = vec![0; td.len()];
    let mut above = vec![0; td.len()];
    for t in td.nodes() {
        if td.parent(t).is_some() {
            let adhesion = td.sigma(t)?.intersection(d).count();
            below[t] = in_subtree[t] + adhesion;
            above[t] = d.len() - in_subtree[t];
        }
    }
    Ok((below, above))
}

/// Nodes of the component containing `start` after deleting the tree edge
/// `{start, away}`.
pub(crate) fn side_of(td: &TreeDecomposition, start: Node, away: Node) -> Vec<Node> {
    let mut seen = BTreeSet::from([start, away]);
    let mut out = vec![start];
    let mut i = 0;
    while i < out.len() {
        let u = out[i];
        i += 1;
        for w in td.neighbors(u) {
            if seen.insert(w) {
                out.push(w);
            }
        }
    }
    out
}

/// A side of a light tree edge (at most `h` vertices of `d`) whose other
/// side is heavy, with more than `xi` vertices. Edges are scanned in
/// preorder of their lower node, lower side first.
pub fn find_large_ds_protrusion(
    g: &Graph,
    td: &TreeDecomposition,
    d: &VertexSet,
    h: usize,
    xi: usize,
) -> Result<Option<Protrusion>> {
    Ok(light_protrusions(g, td, d, h, xi)?.into_iter().next())
}

/// Every protrusion found by [`find_large_ds_protrusion`]'s scan, in scan
/// order.
pub fn light_protrusions(
    g: &Graph,
    td: &TreeDecomposition,
    d: &VertexSet,
    h: usize,
    xi: usize,
) -> Result<Vec<Protrusion>> {
    if td.host() != g {
        return Err(Error::invalid("decomposition belongs to a different graph"));
    }
    let (below, above) = subtree_counts(td, d)?;
    let mut out = Vec::new();
    for &c in td.preorder() {
        let Some(p) = td.parent(c) else { continue };
        let kappa = td.sigma(c)?;
        for (light, heavy, start, away) in [(below[c], above[c], c, p), (above[c], below[c], p, c)] {
            if light > h || heavy <= h {
                continue;
            }
            let w = td.union_of(&side_of(td, start, away));
            if w.len() <= xi {
                continue;
            }
            let witness: VertexSet = w.intersection(d).chain(kappa.iter()).copied().collect();
            let prot = Protrusion::new(g, w, ProtrusionKind::Ds, 2 * h, witness)?;
            if verify_protrusion(g, &prot)?.is_valid() {
                out.push(prot);
            }
        }
    }
    Ok(out)
}

/// Parts `C ∪ N(C)` where `C` is a component of `g - Y` for a separator `Y`
/// of at most `max_boundary` vertices, `C` avoids `keep`, and the part has
/// more than `min_size` vertices. Largest parts first; ties by vertex
/// list. Reported as treewidth protrusions with `r` the measured width
/// (at least the boundary size).
pub fn small_boundary_parts(
    g: &Graph,
    keep: &VertexSet,
    max_boundary: usize,
    min_size: usize,
) -> Result<Vec<Protrusion>> {
    g.check_set(keep)?;
    let mut seps: Vec<VertexSet> = vec![VertexSet::new()];
    if max_boundary >= 1 {
        seps.extend(g.vertices().map(|v| VertexSet::from([v])));
    }
    if max_boundary >= 2 {
        for (u, v) in (0..g.n()).flat_map(|u| (u + 1..g.n()).map(move |v| (u, v))) {
            seps.push(VertexSet::from([u, v]));
        }
    }
    if max_boundary > 2 {
        return Err(Error::Capacity { what: "separator size", actual: max_boundary, limit: 2 });
    }
    let mut found: BTreeSet<Vec<Vertex>> = BTreeSet::new();
    let mut parts = Vec::new();
    for sep in &seps {
        for comp in g.components_avoiding(sep) {
            if comp.iter().any(|v| keep.contains(v)) || !found.insert(comp.clone()) {
                continue;
            }
            let c: VertexSet = comp.into_iter().collect();
            let x: VertexSet = g.closed_neighborhood(&c)?;
            let boundary = g.boundary_of(&x)?;
            if x.len() > min_size && x.iter().all(|v| boundary.contains(v) || !keep.contains(v)) {
                parts.push(x);
            }
        }
    }
    parts.sort_by(|a, b| b.len().cmp(&a.len()).then_with(|| a.cmp(b)));
    parts.dedup();
    parts
        .into_iter()
        .map(|x| {
            let (sub, _) = g.induced_subgraph(&x)?;
            let width = heuristic_decomposition(&sub, Heuristic::MinFill).width();
            let boundary = g.boundary_of(&x)?;
            let r = width.max(boundary.len());
            Protrusion::new(g, x, ProtrusionKind::Tw, r, VertexSet::new())
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::boundaried::enumerate_representatives;
    use crate::solvers::{domination_number, is_yes_instance};
    use crate::Problem;
    use std::sync::Arc;

    fn set(xs: &[Vertex]) -> VertexSet {
        xs.iter().copied().collect()
    }

    /// A triangle 0-1-2 with a pendant path of `len` vertices at 0.
    fn triangle_with_tail(len: usize) -> Graph {
        let mut edges = vec![(0, 1), (1, 2), (0, 2)];
        let mut prev = 0;
        for i in 0..len {
            edges.push((prev, 3 + i));
            prev = 3 + i;
        }
        Graph::from_edges(3 + len, edges).unwrap()
    }

    #[test]
    fn verify_pendant_path() {
        let g = triangle_with_tail(5);
        // X = the tail plus its attachment vertex: 0,3,4,5,6,7 is a P6;
        // use the tail P5 plus attachment handled by the boundary.
        let x = set(&[3, 4, 5, 6, 7]);
        let p = Protrusion::new(&g, x.clone(), ProtrusionKind::Ds, 2, set(&[4, 6])).unwrap();
        assert_eq!(p.boundary, set(&[3]));
        assert!(verify_protrusion(&g, &p).unwrap().is_valid());
        let p1 = Protrusion { r: 1, witness: set(&[5]), ..p.clone() };
        assert!(!verify_protrusion(&g, &p1).unwrap().is_valid());
        let whole = Protrusion::new(&g, g.vertex_set(), ProtrusionKind::Tw, 2, VertexSet::new()).unwrap();
        assert!(whole.boundary.is_empty());
        assert!(verify_protrusion(&g, &whole).unwrap().is_valid());
        let narrow = Protrusion { r: 0, ..whole };
        assert!(matches!(verify_protrusion(&g, &narrow).unwrap().verdict, Verdict::Unverified(_)));
    }

    #[test]
    fn replacing_a_pendant_path_preserves_answers() {
        let table = enumerate_representatives(1, 4, Problem::Ds).unwrap();
        let g = triangle_with_tail(5);
        let x = set(&[0, 3, 4, 5, 6, 7]);
        let p = Protrusion::new(&g, x, ProtrusionKind::Ds, 2, set(&[0, 4, 6])).unwrap();
        let p = Protrusion { r: 3, ..p };
        let (g2, k2) = replace_ds_protrusion(&g, &p, &table, 10).unwrap();
        assert!(g2.n() < g.n());
        let shift = 10 - k2;
        assert_eq!(domination_number(&g).unwrap() as i64 - shift, domination_number(&g2).unwrap() as i64);
        for k in 0..=g.n() as i64 {
            assert_eq!(
                is_yes_instance(&g, k, Problem::Ds).unwrap(),
                is_yes_instance(&g2, k - shift, Problem::Ds).unwrap()
            );
        }
    }

    #[test]
    fn identity_replacement_and_capacity() {
        let table = enumerate_representatives(1, 3, Problem::Ds).unwrap();
        let g = triangle_with_tail(1);
        let p = Protrusion::new(&g, set(&[0, 3]), ProtrusionKind::Ds, 1, set(&[0])).unwrap();
        let (g2, k2) = replace_ds_protrusion(&g, &p, &table, 4).unwrap();
        assert_eq!((g2.n(), g2.m(), k2), (g.n(), g.m(), 4));
        // Boundary of size 2 against a t = 1 table.
        let p = Protrusion::new(
            &g,
            set(&[1, 2, 0, 3]).difference(&set(&[0])).copied().collect(),
            ProtrusionKind::Ds,
            3,
            set(&[1]),
        )
        .unwrap();
        assert!(p.boundary.len() >= 2);
        assert!(replace_ds_protrusion(&g, &p, &table, 4).is_err());
    }

    #[test]
    fn tw_replacement_shortens_paths() {
        let table = enumerate_representatives(2, 4, Problem::Ds).unwrap();
        let g = Graph::from_edges(12, (0..11).map(|i| (i, i + 1)).chain([(0, 11)])).unwrap();
        // Arc 1..=9 of a 12-cycle, attached at 1 and 9.
        let x: VertexSet = (1..=9).collect();
        let p = Protrusion::new(&g, x, ProtrusionKind::Tw, 2, VertexSet::new()).unwrap();
        let (g2, k2) = replace_tw_protrusion(&g, &p, &table, 6).unwrap();
        assert!(g2.n() < g.n());
        assert_eq!(domination_number(&g).unwrap() as i64 - (6 - k2), domination_number(&g2).unwrap() as i64);
        // K4 attached at two of its vertices: width 3 exceeds r = 2.
        let g = Graph::from_edges(5, [(0, 1), (0, 2), (0, 3), (1, 2), (1, 3), (2, 3), (4, 0), (4, 1)]).unwrap();
        let p = Protrusion::new(&g, set(&[0, 1, 2, 3]), ProtrusionKind::Tw, 2, VertexSet::new()).unwrap();
        assert!(matches!(replace_tw_protrusion(&g, &p, &table, 6), Err(Error::Refused(_))));
    }

    #[test]
    fn light_subtree_detection() {
        // A star of triangles (heavy core) plus a long pendant path.
        let mut edges = Vec::new();
        for i in 0..4 {
            let (a, b) = (1 + 2 * i, 2 + 2 * i);
            edges.extend([(0, a), (0, b), (a, b)]);
            edges.push((a, 20 + i));
            edges.push((b, 24 + i));
        }
        let mut prev = 0;
        for v in 9..20 {
            edges.push((prev, v));
            prev = v;
        }
        let g = Arc::new(Graph::from_edges(28, edges).unwrap());
        let td = heuristic_decomposition(&g, Heuristic::MinFill);
        let d: VertexSet = (1..=8).chain([10, 13, 16, 19]).collect();
        assert!(g.is_dominating_set(&d).unwrap());
        assert_eq!(find_large_ds_protrusion(&g, &td, &d, 4, 100).unwrap(), None);
        let xi = 4;
        let p = find_large_ds_protrusion(&g, &td, &d, 4, xi).unwrap().expect("tail is light");
        assert!(p.vertices.len() > xi);
        assert!(verify_protrusion(&g, &p).unwrap().is_valid());
        let all = light_protrusions(&g, &td, &d, 4, 0).unwrap();
        assert!(!all.is_empty());
        assert!(all.iter().all(|p| verify_protrusion(&g, p).unwrap().is_valid()));
    }

    #[test]
    fn subtree_counts_match_direct_evaluation() {
        for seed in 0..20 {
            let g =
                Arc::new(crate::graph::generate_instance(crate::graph::Family::RandomPlanar { n: 14 }, seed).unwrap());
            let td = heuristic_decomposition(&g, Heuristic::MinDegree);
            let d: VertexSet = g.vertices().filter(|v| (v + seed as usize).is_multiple_of(3)).collect();
            let (below, above) = subtree_counts(&td, &d).unwrap();
            for c in td.nodes() {
                let Some(p) = td.parent(c) else { continue };
                let lower = td.union_of(&side_of(&td, c, p));
                let upper = td.union_of(&side_of(&td, p, c));
                assert_eq!(below[c], lower.intersection(&d).count());
                assert_eq!(above[c], upper.intersection(&d).count());
            }
        }
    }

    #[test]
    fn separated_parts_avoid_kept_vertices() {
        let g = triangle_with_tail(6);
        let parts = small_boundary_parts(&g, &set(&[1]), 1, 3).unwrap();
        assert!(!parts.is_empty());
        for p in &parts {
            assert!(p.boundary.len() <= 1);
            assert!(!p.interior().contains(&1));
            assert!(verify_protrusion(&g, p).unwrap().is_valid());
        }
        assert!(parts.windows(2).all(|w| w[0].vertices.len() >= w[1].vertices.len()));
    }
}
