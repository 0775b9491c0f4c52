//! Rooted tree decompositions and the maps derived from them.
//!
//! For a node `t` with bag `Ψ(t)`:
//! * `σ(t)` is the adhesion to the parent (`∅` at the root),
//! * `γ(t)` is the union of the bags in the subtree rooted at `t`,
//! * `κ(e)` is the intersection of the two bags of a tree edge,
//! * the torso of `t` is `G[Ψ(t)]` with `σ(t)` and every child adhesion
//!   completed to cliques.

mod heuristic;
mod io;

use std::collections::BTreeSet;
use std::sync::Arc;

pub use heuristic::{elimination_order, heuristic_decomposition, Heuristic};
pub use io::{parse_td, write_td};

use crate::error::{Error, Result};
use crate::graph::{Graph, GraphBuilder, Vertex, VertexSet};

pub type Node = usize;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum NodeTypeTag {
    /// Torso is (surrogate for) nearly embeddable after removing apices.
    MinorStructured,
    /// Torso has at most `h` vertices of degree larger than `h`.
    LowHighDegree,
}

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct NodeType {
    pub tag: NodeTypeTag,
    /// Only meaningful for [`NodeTypeTag::MinorStructured`].
    pub apex_set: VertexSet,
}

impl NodeType {
    pub fn low_high_degree() -> Self {
        NodeType { tag: NodeTypeTag::LowHighDegree, apex_set: VertexSet::new() }
    }
}

/// A graph built on a subset of host vertices, with the local-to-host map.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct LocalGraph {
    pub graph: Graph,
    pub vertices: Vec<Vertex>,
}

impl LocalGraph {
    pub fn local_of(&self, v: Vertex) -> Option<usize> {
        self.vertices.binary_search(&v).ok()
    }

    pub fn host_set(&self, local: &VertexSet) -> VertexSet {
        local.iter().map(|&i| self.vertices[i]).collect()
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct TreeDecomposition {
    host: Arc<Graph>,
    bags: Vec<VertexSet>,
    parent: Vec<Option<Node>>,
    children: Vec<Vec<Node>>,
    root: Node,
    depth: Vec<usize>,
    preorder: Vec<Node>,
    annotations: Vec<Option<NodeType>>,
}

/// First violation of each kind found by [`TreeDecomposition::validate`].
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct ValidationReport {
    pub uncovered_vertex: Option<Vertex>,
    pub uncovered_edge: Option<(Vertex, Vertex)>,
    pub disconnected_vertex: Option<Vertex>,
    pub nested_bags: Option<(Node, Node)>,
}

impl ValidationReport {
    /// Vertex cover, edge cover and subtree connectivity hold.
    pub fn is_decomposition(&self) -> bool {
        self.uncovered_vertex.is_none() && self.uncovered_edge.is_none() && self.disconnected_vertex.is_none()
    }

    /// All four invariants, including that no bag is nested in another.
    pub fn ok(&self) -> bool {
        self.is_decomposition() && self.nested_bags.is_none()
    }
}

impl TreeDecomposition {
    /// Builds a decomposition from bags and undirected tree edges. The root
    /// is the smallest node whose bag holds the smallest host vertex.
    pub fn new(host: Arc<Graph>, bags: Vec<VertexSet>, edges: &[(Node, Node)]) -> Result<Self> {
        let root =
            bags.iter().enumerate().filter_map(|(t, b)| b.iter().next().map(|&v| (v, t))).min().map_or(0, |(_, t)| t);
        Self::with_root(host, bags, edges, root)
    }

    pub fn with_root(host: Arc<Graph>, bags: Vec<VertexSet>, edges: &[(Node, Node)], root: Node) -> Result<Self> {
        let k = bags.len();
        if k == 0 {
            return Err(Error::invalid("a tree decomposition needs at least one bag"));
        }
        if root >= k {
            return Err(Error::invalid(format!("root {root} out of range")));
        }
        for bag in &bags {
            host.check_set(bag)?;
        }
        if edges.len() + 1 != k {
            return Err(Error::invalid(format!(
                "{} tree edges for {k} bags; decomposition tree must be a tree",
                edges.len()
            )));
        }
        let mut adj = vec![Vec::new(); k];
        for &(u, v) in edges {
            if u >= k || v >= k || u == v {
                return Err(Error::invalid(format!("bad tree edge ({u}, {v})")));
            }
            adj[u].push(v);
            adj[v].push(u);
        }
        let mut parent = vec![None; k];
        let mut seen = vec![false; k];
        seen[root] = true;
        let mut stack = vec![root];
        while let Some(u) = stack.pop() {
            for &w in &adj[u] {
                if !seen[w] {
                    seen[w] = true;
                    parent[w] = Some(u);
                    stack.push(w);
                }
            }
        }
        if seen.iter().any(|s| !s) {
            return Err(Error::invalid("decomposition tree is disconnected"));
        }
        Ok(Self::from_parents(host, bags, parent, root))
    }

    fn from_parents(host: Arc<Graph>, bags: Vec<VertexSet>, parent: Vec<Option<Node>>, root: Node) -> Self {
        let k = bags.len();
        let mut children = vec![Vec::new(); k];
        for (t, p) in parent.iter().enumerate() {
            if let Some(p) = p {
                children[*p].push(t);
            }
        }
        let mut depth = vec![0; k];
        let mut preorder = Vec::with_capacity(k);
        let mut stack = vec![root];
        while let Some(u) = stack.pop() {
            preorder.push(u);
            for &c in children[u].iter().rev() {
                depth[c] = depth[u] + 1;
                stack.push(c);
            }
        }
        TreeDecomposition { host, bags, parent, children, root, depth, preorder, annotations: vec![None; k] }
    }

    /// Single bag holding the whole host.
    pub fn trivial(host: Arc<Graph>) -> Self {
        let bag = host.vertex_set();
        Self::from_parents(host, vec![bag], vec![None], 0)
    }

    pub fn host(&self) -> &Graph {
        &self.host
    }

    pub fn host_arc(&self) -> &Arc<Graph> {
        &self.host
    }

    pub fn len(&self) -> usize {
        self.bags.len()
    }

    pub fn is_empty(&self) -> bool {
        self.bags.is_empty()
    }

    pub fn nodes(&self) -> std::ops::Range<Node> {
        0..self.bags.len()
    }

    pub fn root(&self) -> Node {
        self.root
    }

    pub fn parent(&self, t: Node) -> Option<Node> {
        self.parent[t]
    }

    pub fn children(&self, t: Node) -> &[Node] {
        &self.children[t]
    }

    pub fn depth(&self, t: Node) -> usize {
        self.depth[t]
    }

    /// Nodes with every ancestor before its descendants.
    pub fn preorder(&self) -> &[Node] {
        &self.preorder
    }

    pub fn bag(&self, t: Node) -> &VertexSet {
        &self.bags[t]
    }

    pub fn bags(&self) -> &[VertexSet] {
        &self.bags
    }

    /// Tree edges as `(parent, child)`, ordered by child.
    pub fn tree_edges(&self) -> Vec<(Node, Node)> {
        self.nodes().filter_map(|c| self.parent[c].map(|p| (p, c))).collect()
    }

    pub fn neighbors(&self, t: Node) -> Vec<Node> {
        let mut out: Vec<Node> = self.children[t].clone();
        if let Some(p) = self.parent[t] {
            out.push(p);
        }
        out.sort_unstable();
        out
    }

    pub fn width(&self) -> usize {
        self.bags.iter().map(BTreeSet::len).max().unwrap_or(0).saturating_sub(1)
    }

    /// Largest adhesion over all tree edges.
    pub fn adhesion(&self) -> usize {
        self.nodes()
            .filter_map(|t| self.parent[t].map(|p| self.bags[t].intersection(&self.bags[p]).count()))
            .max()
            .unwrap_or(0)
    }

    fn check_node(&self, t: Node) -> Result<()> {
        if t < self.len() {
            Ok(())
        } else {
            Err(Error::invalid(format!("unknown decomposition node {t}")))
        }
    }

    pub fn is_ancestor(&self, a: Node, mut t: Node) -> bool {
        loop {
            if a == t {
                return true;
            }
            match self.parent[t] {
                Some(p) => t = p,
                None => return false,
            }
        }
    }

    /// Nodes of the subtree rooted at `t`, in preorder.
    pub fn subtree(&self, t: Node) -> Vec<Node> {
        let mut out = vec![t];
        let mut i = 0;
        while i < out.len() {
            let u = out[i];
            i += 1;
            out.extend(self.children[u].iter().copied());
        }
        out
    }

    pub fn sigma(&self, t: Node) -> Result<VertexSet> {
        self.check_node(t)?;
        Ok(match self.parent[t] {
            Some(p) => self.bags[t].intersection(&self.bags[p]).copied().collect(),
            None => VertexSet::new(),
        })
    }

    pub fn gamma(&self, t: Node) -> Result<VertexSet> {
        self.check_node(t)?;
        Ok(self.union_of(&self.subtree(t)))
    }

    pub fn derived_maps(&self, t: Node) -> Result<(VertexSet, VertexSet)> {
        Ok((self.sigma(t)?, self.gamma(t)?))
    }

    /// Adhesion of the tree edge `{u, v}`.
    pub fn kappa(&self, u: Node, v: Node) -> Result<VertexSet> {
        self.check_node(u)?;
        self.check_node(v)?;
        if self.parent[u] != Some(v) && self.parent[v] != Some(u) {
            return Err(Error::invalid(format!("({u}, {v}) is not a tree edge")));
        }
        Ok(self.bags[u].intersection(&self.bags[v]).copied().collect())
    }

    /// `Ψ(M')` for a set of nodes.
    pub fn union_of(&self, nodes: &[Node]) -> VertexSet {
        nodes.iter().flat_map(|&t| self.bags[t].iter().copied()).collect()
    }

    /// Tree edges with exactly one endpoint in `nodes`, as `(inside, outside)`.
    pub fn boundary_edges(&self, nodes: &BTreeSet<Node>) -> Vec<(Node, Node)> {
        let mut out = Vec::new();
        for &t in nodes {
            for w in self.neighbors(t) {
                if !nodes.contains(&w) {
                    out.push((t, w));
                }
            }
        }
        out
    }

    pub fn torso(&self, t: Node) -> Result<LocalGraph> {
        self.check_node(t)?;
        self.subtree_torso(&BTreeSet::from([t]))
    }

    /// `G[Ψ(M')]` plus cliques on the adhesions of all edges leaving `M'`.
    pub fn subtree_torso(&self, nodes: &BTreeSet<Node>) -> Result<LocalGraph> {
        for &t in nodes {
            self.check_node(t)?;
        }
        let list: Vec<Node> = nodes.iter().copied().collect();
        let verts = self.union_of(&list);
        let (sub, map) = self.host.induced_subgraph(&verts)?;
        let local = |v: Vertex| map.binary_search(&v).expect("adhesion inside bag");
        let mut b = GraphBuilder::new(sub.n());
        for (u, v) in sub.edges() {
            b.add_edge(u, v);
        }
        for (inside, outside) in self.boundary_edges(nodes) {
            let adh: Vec<Vertex> = self.bags[inside].intersection(&self.bags[outside]).map(|&v| local(v)).collect();
            for (i, &x) in adh.iter().enumerate() {
                for &y in &adh[i + 1..] {
                    b.add_edge(x, y);
                }
            }
        }
        Ok(LocalGraph { graph: b.build()?, vertices: map })
    }

    /// All nodes whose bag contains `v`.
    pub fn occurrences(&self, v: Vertex) -> Vec<Node> {
        self.nodes().filter(|&t| self.bags[t].contains(&v)).collect()
    }

    /// The node of `M_v` closest to the root.
    pub fn peak(&self, v: Vertex) -> Result<Node> {
        if !self.host.contains(v) {
            return Err(Error::UnknownVertex(v));
        }
        let occ = self.occurrences(v);
        let top = occ
            .iter()
            .copied()
            .min_by_key(|&t| (self.depth[t], t))
            .ok_or_else(|| Error::invalid(format!("vertex {v} is in no bag")))?;
        if occ.iter().any(|&t| !self.is_ancestor(top, t)) {
            return Err(Error::invariant(format!("peak of vertex {v} is not an ancestor of all its bags")));
        }
        Ok(top)
    }

    /// Peaks of all host vertices in one pass (`None` for uncovered ones).
    pub fn peaks(&self) -> Vec<Option<Node>> {
        let mut out = vec![None; self.host.n()];
        for &t in &self.preorder {
            for &v in &self.bags[t] {
                if out[v].is_none() {
                    out[v] = Some(t);
                }
            }
        }
        out
    }

    pub fn validate(&self) -> ValidationReport {
        let g = &*self.host;
        let mut report = ValidationReport::default();
        let mut count = vec![0usize; g.n()];
        for bag in &self.bags {
            for &v in bag {
                count[v] += 1;
            }
        }
        report.uncovered_vertex = g.vertices().find(|&v| count[v] == 0);
        report.uncovered_edge = g.edges().find(|&(u, v)| !self.bags.iter().any(|b| b.contains(&u) && b.contains(&v)));
        let mut edge_count = vec![0usize; g.n()];
        for (p, c) in self.tree_edges() {
            for v in self.bags[p].intersection(&self.bags[c]) {
                edge_count[*v] += 1;
            }
        }
        report.disconnected_vertex = g.vertices().find(|&v| count[v] > 0 && edge_count[v] + 1 != count[v]);
        'outer: for a in self.nodes() {
            for b in self.nodes() {
                if a != b && self.bags[a].is_subset(&self.bags[b]) {
                    report.nested_bags = Some((a, b));
                    break 'outer;
                }
            }
        }
        report
    }

    /// Contracts every tree edge whose adhesion equals one of its bags, so
    /// that no bag is contained in another. Node ids are compacted in their
    /// original order and the root is re-chosen by the usual rule.
    pub fn normalize(&self) -> TreeDecomposition {
        let k = self.len();
        let mut bags = self.bags.clone();
        let mut alive = vec![true; k];
        let mut parent = self.parent.clone();
        loop {
            let mut changed = false;
            for c in 0..k {
                if !alive[c] {
                    continue;
                }
                let Some(p) = parent[c] else { continue };
                let merge = bags[c].is_subset(&bags[p]) || bags[p].is_subset(&bags[c]);
                if !merge {
                    continue;
                }
                // Keep the smaller id as the surviving node.
                let (keep, gone) = if p < c { (p, c) } else { (c, p) };
                let union: VertexSet = bags[c].union(&bags[p]).copied().collect();
                bags[keep] = union;
                alive[gone] = false;
                parent[keep] = parent[p];
                for t in 0..k {
                    if alive[t] && (parent[t] == Some(gone) || parent[t] == Some(keep)) && t != keep {
                        parent[t] = Some(keep);
                    }
                }
                changed = true;
            }
            if !changed {
                break;
            }
        }
        let ids: Vec<Node> = (0..k).filter(|&t| alive[t]).collect();
        let index = |t: Node| ids.binary_search(&t).unwrap();
        let new_bags: Vec<VertexSet> = ids.iter().map(|&t| bags[t].clone()).collect();
        let edges: Vec<(Node, Node)> = ids.iter().filter_map(|&t| parent[t].map(|p| (index(p), index(t)))).collect();
        let mut td =
            TreeDecomposition::new(self.host.clone(), new_bags, &edges).expect("contraction preserves the tree");
        for (i, &t) in ids.iter().enumerate() {
            if let Some(a) = &self.annotations[t] {
                td.annotations[i] = Some(a.clone());
            }
        }
        td
    }

    pub fn annotation(&self, t: Node) -> Option<&NodeType> {
        self.annotations.get(t).and_then(Option::as_ref)
    }

    pub fn set_annotation(&mut self, t: Node, ty: NodeType) -> Result<()> {
        self.check_node(t)?;
        self.host.check_set(&ty.apex_set)?;
        self.annotations[t] = Some(ty);
        Ok(())
    }

    /// Degree census of the torso of `t`: low/high-degree when at most `h`
    /// torso vertices have degree above `h`, otherwise minor-structured with
    /// the `h` highest-degree torso vertices as apices.
    pub fn classify_node(&self, t: Node, h: usize) -> Result<NodeType> {
        let torso = self.torso(t)?;
        let g = &torso.graph;
        let high: Vec<usize> = g.vertices().filter(|&v| g.degree(v) > h).collect();
        if high.len() <= h {
            return Ok(NodeType::low_high_degree());
        }
        let mut by_degree: Vec<usize> = g.vertices().collect();
        by_degree.sort_by_key(|&v| (std::cmp::Reverse(g.degree(v)), v));
        Ok(NodeType {
            tag: NodeTypeTag::MinorStructured,
            apex_set: by_degree[..h].iter().map(|&v| torso.vertices[v]).collect(),
        })
    }

    /// The annotated type if present, else [`TreeDecomposition::classify_node`].
    pub fn node_type(&self, t: Node, h: usize) -> Result<NodeType> {
        match self.annotation(t) {
            Some(ty) => Ok(ty.clone()),
            None => self.classify_node(t, h),
        }
    }
}
