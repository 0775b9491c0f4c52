//! Boundaried graphs: graphs with up to `t` labeled boundary vertices,
//! glued by identifying equal labels.
//!
//! Labels are `1..=t`. [`Signature`]s summarise how a boundaried graph
//! behaves under every gluing; equal normalized signatures certify the
//! gluing equivalence used by replacement.

mod oracle;
mod signature;
mod table;

use std::collections::BTreeMap;

pub use oracle::{definitional_equivalence_oracle, distinguishing_filler, enumerate_fillers, oracle_row, row_offset};
pub use signature::{
    cds_signature, ds_signature, signature, signatures_equivalent, LabelState, Signature, State, CDS_SIGNATURE_GUARD,
};
pub use table::{
    enumerate_representatives, enumerate_universe, glue_threshold, reduce_via_representatives, RepresentativeTable,
    MAX_TABLE_SIZE, MAX_TABLE_T,
};

use crate::error::{Error, Result};
use crate::graph::{Graph, GraphBuilder, Vertex, VertexSet};

pub type Label = usize;

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct BoundariedGraph {
    graph: Graph,
    t: usize,
    labels: BTreeMap<Label, Vertex>,
}

impl BoundariedGraph {
    /// `labeling` lists `(label, vertex)` pairs; labels must be in `1..=t`
    /// and the map must be injective both ways.
    pub fn new(graph: Graph, t: usize, labeling: &[(Label, Vertex)]) -> Result<Self> {
        let mut labels = BTreeMap::new();
        let mut used = VertexSet::new();
        for &(l, v) in labeling {
            if l == 0 || l > t {
                return Err(Error::invalid(format!("label {l} outside 1..={t}")));
            }
            if !graph.contains(v) {
                return Err(Error::UnknownVertex(v));
            }
            if labels.insert(l, v).is_some() || !used.insert(v) {
                return Err(Error::invalid("boundary labeling must be injective"));
            }
        }
        Ok(BoundariedGraph { graph, t, labels })
    }

    /// Labels the given vertices `1, 2, ...` in order, with capacity `t`.
    pub fn with_boundary(graph: Graph, t: usize, boundary: &[Vertex]) -> Result<Self> {
        let labeling: Vec<(Label, Vertex)> = boundary.iter().enumerate().map(|(i, &v)| (i + 1, v)).collect();
        Self::new(graph, t, &labeling)
    }

    /// `G[x]` with `labeled` as boundary (labels `1..` in the given order).
    /// Every vertex of `x` with a neighbour outside `x` must be labeled.
    pub fn view(g: &Graph, x: &VertexSet, labeled: &[Vertex], t: usize) -> Result<Self> {
        let outer = g.boundary_of(x)?;
        for v in &outer {
            if !labeled.contains(v) {
                return Err(Error::invalid(format!("vertex {v} has neighbours outside the part but is not labeled")));
            }
        }
        let (sub, map) = g.induced_subgraph(x)?;
        let mut local = Vec::with_capacity(labeled.len());
        for v in labeled {
            local.push(map.binary_search(v).map_err(|_| Error::invalid("labeled vertex outside the part"))?);
        }
        Self::with_boundary(sub, t, &local)
    }

    pub fn graph(&self) -> &Graph {
        &self.graph
    }

    pub fn t(&self) -> usize {
        self.t
    }

    pub fn n(&self) -> usize {
        self.graph.n()
    }

    /// Same graph and labels with a different capacity.
    pub fn with_capacity(&self, t: usize) -> Result<Self> {
        let labeling: Vec<_> = self.labels.iter().map(|(&l, &v)| (l, v)).collect();
        Self::new(self.graph.clone(), t, &labeling)
    }

    pub fn labeling(&self) -> &BTreeMap<Label, Vertex> {
        &self.labels
    }

    pub fn used_labels(&self) -> Vec<Label> {
        self.labels.keys().copied().collect()
    }

    pub fn vertex_of(&self, l: Label) -> Option<Vertex> {
        self.labels.get(&l).copied()
    }

    pub fn label_of(&self, v: Vertex) -> Option<Label> {
        self.labels.iter().find(|(_, &w)| w == v).map(|(&l, _)| l)
    }

    pub fn boundary(&self) -> VertexSet {
        self.labels.values().copied().collect()
    }

    pub fn interior(&self) -> VertexSet {
        let b = self.boundary();
        self.graph.vertices().filter(|v| !b.contains(v)).collect()
    }
}

/// Result of gluing: the graph plus where the second part's vertices went.
/// The first part keeps its vertex ids.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Glued {
    pub graph: Graph,
    pub second: Vec<Vertex>,
}

fn glue_parts(g1: &BoundariedGraph, g2: &BoundariedGraph) -> Result<Glued> {
    if g1.t != g2.t {
        return Err(Error::invalid(format!("boundary capacities differ ({} vs {})", g1.t, g2.t)));
    }
    let mut b = GraphBuilder::new(g1.n());
    for (u, v) in g1.graph.edges() {
        b.add_edge(u, v);
    }
    let mut second = vec![usize::MAX; g2.n()];
    for (l, &v) in &g2.labels {
        if let Some(&w) = g1.labels.get(l) {
            second[v] = w;
        }
    }
    for v in g2.graph.vertices() {
        if second[v] == usize::MAX {
            second[v] = b.add_vertex();
        }
    }
    for (u, v) in g2.graph.edges() {
        b.add_edge(second[u], second[v]);
    }
    Ok(Glued { graph: b.build()?, second })
}

/// `g1 ⊕ g2`.
pub fn glue(g1: &BoundariedGraph, g2: &BoundariedGraph) -> Result<Graph> {
    Ok(glue_parts(g1, g2)?.graph)
}

/// `g1 ⊕ g2` keeping the union of both boundaries.
pub fn glue_boundaried(g1: &BoundariedGraph, g2: &BoundariedGraph) -> Result<BoundariedGraph> {
    let glued = glue_parts(g1, g2)?;
    let mut labeling: BTreeMap<Label, Vertex> = g1.labels.clone();
    for (&l, &v) in &g2.labels {
        labeling.entry(l).or_insert(glued.second[v]);
    }
    let pairs: Vec<_> = labeling.into_iter().collect();
    BoundariedGraph::new(glued.graph, g1.t, &pairs)
}

/// A graph produced by [`replace`]: `kept[i]` is the original id of new
/// vertex `i` for every surviving vertex; later ids belong to the new part.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Replaced {
    pub graph: Graph,
    pub kept: Vec<Vertex>,
}

/// Replaces the part `x` of `g`, whose boundary is labeled by `labeled`
/// (label `i + 1` on `labeled[i]`), with `new_part`.
pub fn replace(g: &Graph, x: &VertexSet, labeled: &[Vertex], new_part: &BoundariedGraph) -> Result<Replaced> {
    g.check_set(x)?;
    for v in labeled {
        if !x.contains(v) {
            return Err(Error::invalid(format!("labeled vertex {v} is not in the part")));
        }
    }
    let interior: VertexSet = x.iter().copied().filter(|v| !labeled.contains(v)).collect();
    for &v in &interior {
        if g.neighbors(v).iter().any(|w| !x.contains(w)) {
            return Err(Error::invalid(format!("interior vertex {v} has a neighbour outside the part")));
        }
    }
    let (rest, kept) = g.remove_vertices(&interior)?;
    let local: Vec<Vertex> = labeled.iter().map(|v| kept.binary_search(v).expect("boundary survives")).collect();
    let host = BoundariedGraph::with_boundary(rest, new_part.t, &local)?;
    let glued = glue_parts(&host, new_part)?;
    Ok(Replaced { graph: glued.graph, kept })
}
