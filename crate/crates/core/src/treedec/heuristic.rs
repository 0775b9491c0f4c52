//! Elimination-ordering heuristics.

use std::collections::BTreeSet;
use std::sync::Arc;

use super::{Node, TreeDecomposition};
use crate::graph::{Graph, Vertex, VertexSet};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Heuristic {
    MinFill,
    MinDegree,
}

fn fill_in(adj: &[BTreeSet<Vertex>], v: Vertex) -> usize {
    let nbrs: Vec<Vertex> = adj[v].iter().copied().collect();
    let mut missing = 0;
    for (i, &a) in nbrs.iter().enumerate() {
        for &b in &nbrs[i + 1..] {
            if !adj[a].contains(&b) {
                missing += 1;
            }
        }
    }
    missing
}

/// Greedy elimination order; ties go to the smallest vertex id.
pub fn elimination_order(g: &Graph, strategy: Heuristic) -> Vec<Vertex> {
    let n = g.n();
    let mut adj: Vec<BTreeSet<Vertex>> = g.vertices().map(|v| g.neighbors(v).iter().copied().collect()).collect();
    let mut alive: BTreeSet<Vertex> = g.vertices().collect();
    let mut order = Vec::with_capacity(n);
    while !alive.is_empty() {
        let v = *alive
            .iter()
            .min_by_key(|&&v| match strategy {
                Heuristic::MinDegree => (adj[v].len(), 0),
                Heuristic::MinFill => (fill_in(&adj, v), adj[v].len()),
            })
            .expect("nonempty");
        let nbrs: Vec<Vertex> = adj[v].iter().copied().collect();
        for (i, &a) in nbrs.iter().enumerate() {
            adj[a].remove(&v);
            for &b in &nbrs[i + 1..] {
                adj[a].insert(b);
                adj[b].insert(a);
            }
        }
        adj[v].clear();
        alive.remove(&v);
        order.push(v);
    }
    order
}

/// Tree decomposition from an elimination order, normalized. The empty graph
/// yields a single empty bag.
pub fn heuristic_decomposition(g: &Graph, strategy: Heuristic) -> TreeDecomposition {
    let host = Arc::new(g.clone());
    if g.n() == 0 {
        return TreeDecomposition::trivial(host);
    }
    let order = elimination_order(g, strategy);
    let mut position = vec![0usize; g.n()];
    for (i, &v) in order.iter().enumerate() {
        position[v] = i;
    }
    let mut adj: Vec<BTreeSet<Vertex>> = g.vertices().map(|v| g.neighbors(v).iter().copied().collect()).collect();
    let mut bags: Vec<VertexSet> = Vec::with_capacity(g.n());
    let mut parent_vertex: Vec<Option<Vertex>> = Vec::with_capacity(g.n());
    for &v in &order {
        let nbrs: Vec<Vertex> = adj[v].iter().copied().collect();
        let mut bag: VertexSet = nbrs.iter().copied().collect();
        bag.insert(v);
        bags.push(bag);
        parent_vertex.push(nbrs.iter().copied().min_by_key(|&w| position[w]));
        for (i, &a) in nbrs.iter().enumerate() {
            adj[a].remove(&v);
            for &b in &nbrs[i + 1..] {
                adj[a].insert(b);
                adj[b].insert(a);
            }
        }
    }
    // Bag i belongs to order[i]; component roots are chained together.
    let mut edges: Vec<(Node, Node)> = Vec::new();
    let mut roots: Vec<Node> = Vec::new();
    for (i, p) in parent_vertex.iter().enumerate() {
        match p {
            Some(w) => edges.push((i, position[*w])),
            None => roots.push(i),
        }
    }
    for pair in roots.windows(2) {
        edges.push((pair[0], pair[1]));
    }
    TreeDecomposition::new(host, bags, &edges).expect("elimination yields a tree").normalize()
}
