//! Heavy-edge marking of a tree decomposition and slice decompositions.
//!
//! A tree edge is heavy when both sides carry at least `h + 1` vertices of
//! the approximate dominating set `D`. Deleting the heavy edges splits the
//! tree into slices; long chains of the heavy subtree and light hanging
//! subtrees yield protrusions instead.

use std::collections::{BTreeMap, BTreeSet};
use std::fmt::Write as _;

use crate::error::{Error, Result};
use crate::graph::{Graph, VertexSet};
use crate::protrusion::{light_protrusions, side_of, subtree_counts, verify_protrusion, Protrusion, ProtrusionKind};
use crate::treedec::{Node, NodeTypeTag, TreeDecomposition};

/// Tree edge as `(parent, child)`.
pub type TreeEdge = (Node, Node);

#[derive(Clone, Debug)]
pub struct MarkedTree {
    pub td: TreeDecomposition,
    pub d: VertexSet,
    pub h: usize,
    /// The set `ℱ`.
    pub heavy_edges: BTreeSet<TreeEdge>,
    /// `μ` of the lower side of each non-root node's parent edge.
    pub below: Vec<usize>,
    /// `μ` of the upper side of each non-root node's parent edge.
    pub above: Vec<usize>,
}

pub fn mark_heavy_edges(td: &TreeDecomposition, d: &VertexSet, h: usize) -> Result<MarkedTree> {
    td.host().check_set(d)?;
    let (below, above) = subtree_counts(td, d)?;
    let heavy_edges = td.tree_edges().into_iter().filter(|&(_, c)| below[c] > h && above[c] > h).collect();
    Ok(MarkedTree { td: td.clone(), d: d.clone(), h, heavy_edges, below, above })
}

/// A subtree of the decomposition tree given by its nodes and edges.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct SubTree {
    pub nodes: BTreeSet<Node>,
    pub edges: Vec<TreeEdge>,
}

/// `M*`, the subgraph formed by the heavy edges; empty when there are none.
pub fn marked_subtree(mt: &MarkedTree) -> Result<SubTree> {
    let nodes: BTreeSet<Node> = mt.heavy_edges.iter().flat_map(|&(p, c)| [p, c]).collect();
    let edges: Vec<TreeEdge> = mt.heavy_edges.iter().copied().collect();
    if !nodes.is_empty() && edges.len() + 1 != nodes.len() {
        return Err(Error::invariant("heavy edges do not form a connected subtree"));
    }
    Ok(SubTree { nodes, edges })
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct TreeStats {
    /// Nodes of degree at most 1.
    pub leaves: Vec<Node>,
    /// Nodes of degree at least 3.
    pub branch: Vec<Node>,
    /// Nodes of degree exactly 2.
    pub links: Vec<Node>,
    /// Maximal paths of link nodes, each listed from one end to the other
    /// together with the non-link neighbours at its ends.
    pub link_paths: Vec<LinkPath>,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct LinkPath {
    pub nodes: Vec<Node>,
    pub start: Node,
    pub end: Node,
}

fn adjacency(nodes: &BTreeSet<Node>, edges: &[TreeEdge]) -> Result<BTreeMap<Node, Vec<Node>>> {
    let mut adj: BTreeMap<Node, Vec<Node>> = nodes.iter().map(|&v| (v, Vec::new())).collect();
    for &(a, b) in edges {
        if a == b {
            return Err(Error::invalid("tree has a loop"));
        }
        for (x, y) in [(a, b), (b, a)] {
            adj.get_mut(&x).ok_or_else(|| Error::invalid(format!("edge endpoint {x} is not a node")))?.push(y);
        }
    }
    for list in adj.values_mut() {
        list.sort_unstable();
    }
    Ok(adj)
}

/// Degree taxonomy of a tree. A single node counts as one leaf.
pub fn tree_stats(nodes: &BTreeSet<Node>, edges: &[TreeEdge]) -> Result<TreeStats> {
    if nodes.is_empty() {
        return Err(Error::invalid("empty tree"));
    }
    if edges.len() + 1 != nodes.len() {
        return Err(Error::invalid("edge count does not match a tree"));
    }
    let adj = adjacency(nodes, edges)?;
    let first = *nodes.iter().next().expect("nonempty");
    let mut seen = BTreeSet::from([first]);
    let mut stack = vec![first];
    while let Some(u) = stack.pop() {
        for &w in &adj[&u] {
            if seen.insert(w) {
                stack.push(w);
            }
        }
    }
    if seen.len() != nodes.len() {
        return Err(Error::invalid("not connected"));
    }
    let deg = |v: &Node| adj[v].len();
    let leaves: Vec<Node> = nodes.iter().copied().filter(|v| deg(v) <= 1).collect();
    let branch: Vec<Node> = nodes.iter().copied().filter(|v| deg(v) >= 3).collect();
    let links: Vec<Node> = nodes.iter().copied().filter(|v| deg(v) == 2).collect();
    let mut done = BTreeSet::new();
    let mut link_paths = Vec::new();
    for &v in &links {
        if done.contains(&v) {
            continue;
        }
        // Walk to one end of the chain, then collect it.
        let (mut prev, mut cur) = (adj[&v][1], v);
        while deg(&prev) == 2 {
            let next = if adj[&prev][0] == cur { adj[&prev][1] } else { adj[&prev][0] };
            cur = prev;
            prev = next;
        }
        let start = prev;
        let mut path = vec![cur];
        let mut from = start;
        loop {
            let next = if adj[&cur][0] == from { adj[&cur][1] } else { adj[&cur][0] };
            if deg(&next) != 2 {
                done.extend(path.iter().copied());
                link_paths.push(LinkPath { nodes: path, start, end: next });
                break;
            }
            from = cur;
            cur = next;
            path.push(cur);
        }
    }
    Ok(TreeStats { leaves, branch, links, link_paths })
}

/// Component of `from` in the decomposition tree after deleting all edges
/// from `from` to nodes in `cut`.
fn hanging(td: &TreeDecomposition, from: Node, cut: &BTreeSet<Node>) -> Vec<Node> {
    let mut seen: BTreeSet<Node> = cut.clone();
    seen.insert(from);
    let mut out = vec![from];
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

/// Looks for a long unmarked stretch of the link path `path` of `M*`.
///
/// Every vertex of `(D ∩ Ψ(M(P))) ∪ κ(start, a_1) ∪ κ(a_m, end)` marks the
/// first and last path nodes whose hanging bags contain it. When the path
/// is longer than `xi · 2(2h + k_P)`, the first maximal run of unmarked
/// nodes whose hanging bags span more than `xi` vertices is returned as a
/// DS protrusion witnessed by the adhesions at both ends of the run.
pub fn long_path_reduction(mt: &MarkedTree, path: &LinkPath, xi: usize, h: usize) -> Result<Option<Protrusion>> {
    let td = &mt.td;
    let m = path.nodes.len();
    let on_path: BTreeSet<Node> = path.nodes.iter().copied().chain([path.start, path.end]).collect();
    let bags: Vec<VertexSet> = path
        .nodes
        .iter()
        .map(|&a| {
            let cut: BTreeSet<Node> = on_path.iter().copied().filter(|&x| x != a).collect();
            td.union_of(&hanging(td, a, &cut))
        })
        .collect();
    let all: VertexSet = bags.iter().flatten().copied().collect();
    let k_p = all.intersection(&mt.d).count();
    if m <= xi.saturating_mul(2 * (2 * h + k_p)) {
        return Ok(None);
    }
    let left = td.kappa(path.start, path.nodes[0])?;
    let right = td.kappa(path.nodes[m - 1], path.end)?;
    let watched: VertexSet = all.intersection(&mt.d).chain(left.iter()).chain(right.iter()).copied().collect();
    let mut marked = vec![false; m];
    for w in &watched {
        let hits: Vec<usize> = (0..m).filter(|&j| bags[j].contains(w)).collect();
        if let (Some(&a), Some(&b)) = (hits.first(), hits.last()) {
            marked[a] = true;
            marked[b] = true;
        }
    }
    let g = td.host();
    let mut j = 0;
    while j < m {
        if marked[j] {
            j += 1;
            continue;
        }
        let x = j;
        while j < m && !marked[j] {
            j += 1;
        }
        let y = j - 1;
        let w: VertexSet = bags[x..=y].iter().flatten().copied().collect();
        if w.len() <= xi {
            continue;
        }
        let before = if x == 0 { path.start } else { path.nodes[x - 1] };
        let after = if y + 1 == m { path.end } else { path.nodes[y + 1] };
        let witness: VertexSet =
            td.kappa(before, path.nodes[x])?.union(&td.kappa(path.nodes[y], after)?).copied().collect();
        let p = Protrusion::new(g, w, ProtrusionKind::Ds, 2 * h, witness)?;
        if verify_protrusion(g, &p)?.is_valid() {
            return Ok(Some(p));
        }
    }
    Ok(None)
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SliceDecomposition {
    /// `M_1, ..., M_α`, each sorted, ordered by smallest node.
    pub subtrees: Vec<Vec<Node>>,
    /// `R_i⁺ = Ψ(M_i)`.
    pub slices: Vec<VertexSet>,
    /// `ℰ(M_i)`: heavy edges with exactly one end in `M_i`.
    pub edge_sets: Vec<Vec<TreeEdge>>,
    /// `Q_i`: union of the adhesions of `ℰ(M_i)`.
    pub adhesions: Vec<VertexSet>,
    /// `Σ_i Σ_{e ∈ ℰ(M_i)} |κ(e)|`.
    pub boundary_budget: usize,
    /// The node of `M_i` incident to heavy edges, or the tree root.
    pub roots: Vec<Node>,
}

impl SliceDecomposition {
    pub fn alpha(&self) -> usize {
        self.subtrees.len()
    }

    /// `(D ∩ R_i⁺) ∪ Q_i`, a dominating set of `G[R_i⁺]`.
    pub fn slice_dominator(&self, i: usize, d: &VertexSet) -> VertexSet {
        self.slices[i].intersection(d).chain(self.adhesions[i].iter()).copied().collect()
    }

    /// Text dump: one line per slice with its nodes, order and adhesions.
    pub fn dump(&self, td: &TreeDecomposition) -> String {
        let mut out = String::new();
        writeln!(out, "slices {} budget {}", self.alpha(), self.boundary_budget).unwrap();
        for i in 0..self.alpha() {
            let nodes: Vec<String> = self.subtrees[i].iter().map(|t| t.to_string()).collect();
            let adh: Vec<String> = self.edge_sets[i]
                .iter()
                .map(|&(a, b)| td.kappa(a, b).map(|k| k.len()).unwrap_or(0).to_string())
                .collect();
            writeln!(
                out,
                "slice {i} nodes {} vertices {} adhesions {}",
                nodes.join(","),
                self.slices[i].len(),
                if adh.is_empty() { "-".to_string() } else { adh.join(",") }
            )
            .unwrap();
        }
        out
    }
}

/// Deletes the heavy edges and returns the remaining components.
pub fn slices_of(mt: &MarkedTree) -> Result<SliceDecomposition> {
    let td = &mt.td;
    let mut comp = vec![usize::MAX; td.len()];
    let mut subtrees: Vec<Vec<Node>> = Vec::new();
    for t in td.nodes() {
        if comp[t] != usize::MAX {
            continue;
        }
        let id = subtrees.len();
        comp[t] = id;
        let mut list = vec![t];
        let mut i = 0;
        while i < list.len() {
            let u = list[i];
            i += 1;
            for w in td.neighbors(u) {
                let e = if td.parent(w) == Some(u) { (u, w) } else { (w, u) };
                if comp[w] == usize::MAX && !mt.heavy_edges.contains(&e) {
                    comp[w] = id;
                    list.push(w);
                }
            }
        }
        list.sort_unstable();
        subtrees.push(list);
    }
    let alpha = subtrees.len();
    let mut edge_sets = vec![Vec::new(); alpha];
    let mut adhesions = vec![VertexSet::new(); alpha];
    let mut budget = 0;
    for &(p, c) in &mt.heavy_edges {
        let kappa = td.kappa(p, c)?;
        for side in [comp[p], comp[c]] {
            edge_sets[side].push((p, c));
            adhesions[side].extend(kappa.iter().copied());
            budget += kappa.len();
        }
    }
    let roots = (0..alpha)
        .map(|i| edge_sets[i].first().map(|&(p, c)| if comp[p] == i { p } else { c }).unwrap_or(subtrees[i][0]))
        .map(|r| if mt.heavy_edges.is_empty() { td.root() } else { r })
        .collect();
    let slices = subtrees.iter().map(|s| td.union_of(s)).collect();
    Ok(SliceDecomposition { subtrees, slices, edge_sets, adhesions, boundary_budget: budget, roots })
}

/// Checks that `(D ∩ R_i⁺) ∪ Q_i` dominates `G[R_i⁺]` for every slice.
pub fn check_slice_domination(sd: &SliceDecomposition, g: &Graph, d: &VertexSet) -> Result<()> {
    for i in 0..sd.alpha() {
        let (sub, map) = g.induced_subgraph(&sd.slices[i])?;
        let local: VertexSet =
            sd.slice_dominator(i, d).iter().map(|v| map.binary_search(v).expect("inside slice")).collect();
        if !sub.is_dominating_set(&local)? {
            return Err(Error::invariant(format!("slice {i} is not dominated by its boundary set")));
        }
    }
    Ok(())
}

/// Treewidth protrusions from the degree argument: in a slice whose root
/// torso has few high-degree vertices, a vertex `v` of torso degree at most
/// `h` together with its torso neighbourhood `N` and the small components
/// of `G - N` inside the slice that touch `v`.
pub fn degree_protrusions(mt: &MarkedTree, sd: &SliceDecomposition, xi: usize) -> Result<Vec<Protrusion>> {
    let td = &mt.td;
    let g = td.host();
    let h = mt.h;
    let mut out = Vec::new();
    for i in 0..sd.alpha() {
        let root = sd.roots[i];
        if td.node_type(root, h)?.tag != NodeTypeTag::LowHighDegree {
            continue;
        }
        let torso = td.torso(root)?;
        for lv in torso.graph.vertices() {
            if torso.graph.degree(lv) > h {
                continue;
            }
            let v = torso.vertices[lv];
            let n: VertexSet =
                std::iter::once(v).chain(torso.graph.neighbors(lv).iter().map(|&w| torso.vertices[w])).collect();
            let mut x = n.clone();
            for comp in g.components_avoiding(&n) {
                let c: VertexSet = comp.into_iter().collect();
                if c.len() > xi || !c.is_subset(&sd.slices[i]) {
                    continue;
                }
                let nc = g.open_neighborhood(&c)?;
                if nc.is_subset(&n) && nc.contains(&v) {
                    x.extend(c);
                }
            }
            if x.len() <= xi || x.len() == n.len() {
                continue;
            }
            let p = Protrusion::new(g, x, ProtrusionKind::Tw, h + xi, VertexSet::new())?;
            if verify_protrusion(g, &p)?.is_valid() {
                out.push(p);
            }
        }
    }
    Ok(out)
}

#[derive(Clone, Debug)]
pub enum SliceOutcome {
    Slices(SliceDecomposition),
    DsProtrusion(Protrusion),
    TwProtrusion(Protrusion),
}

/// Every outcome of the slice analysis, in deterministic order.
#[derive(Clone, Debug)]
pub struct SliceAnalysis {
    pub marked: MarkedTree,
    pub star: SubTree,
    /// Long-path protrusions (by path), then light hanging subtrees.
    pub ds_protrusions: Vec<Protrusion>,
    pub tw_protrusions: Vec<Protrusion>,
    pub slices: SliceDecomposition,
}

pub fn analyze_slices(g: &Graph, td: &TreeDecomposition, d: &VertexSet, h: usize, xi: usize) -> Result<SliceAnalysis> {
    if td.host() != g {
        return Err(Error::invalid("decomposition belongs to a different graph"));
    }
    if !g.is_dominating_set(d)? {
        return Err(Error::invalid("marking set does not dominate the graph"));
    }
    let marked = mark_heavy_edges(td, d, h)?;
    let star = marked_subtree(&marked)?;
    let mut ds_protrusions = Vec::new();
    if !star.nodes.is_empty() {
        let stats = tree_stats(&star.nodes, &star.edges)?;
        for path in &stats.link_paths {
            if let Some(p) = long_path_reduction(&marked, path, xi, h)? {
                ds_protrusions.push(p);
            }
        }
    }
    ds_protrusions.extend(light_protrusions(g, td, d, h, xi)?);
    let slices = slices_of(&marked)?;
    check_slice_domination(&slices, g, d)?;
    let tw_protrusions = degree_protrusions(&marked, &slices, xi)?;
    Ok(SliceAnalysis { marked, star, ds_protrusions, tw_protrusions, slices })
}

/// The first protrusion of [`analyze_slices`], or the slice decomposition.
pub fn build_slice_decomposition(
    g: &Graph,
    td: &TreeDecomposition,
    d: &VertexSet,
    h: usize,
    xi: usize,
) -> Result<SliceOutcome> {
    let mut a = analyze_slices(g, td, d, h, xi)?;
    if !a.ds_protrusions.is_empty() {
        return Ok(SliceOutcome::DsProtrusion(a.ds_protrusions.swap_remove(0)));
    }
    if !a.tw_protrusions.is_empty() {
        return Ok(SliceOutcome::TwProtrusion(a.tw_protrusions.swap_remove(0)));
    }
    Ok(SliceOutcome::Slices(a.slices))
}

/// Vertices of the part hanging below tree edge `(p, c)` on `c`'s side.
pub fn lower_side(td: &TreeDecomposition, edge: TreeEdge) -> VertexSet {
    td.union_of(&side_of(td, edge.1, edge.0))
}
