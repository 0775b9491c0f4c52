//! Deterministic instance generators.

use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use super::{Graph, GraphBuilder, Vertex};
use crate::error::{Error, Result};

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Family {
    Path {
        n: usize,
    },
    Cycle {
        n: usize,
    },
    Grid {
        rows: usize,
        cols: usize,
    },
    /// `K_h` with every edge replaced by a path with `l` internal vertices.
    SubdividedClique {
        h: usize,
        l: usize,
    },
    /// Connected random subgraph of a stacked triangulation.
    RandomPlanar {
        n: usize,
    },
    /// Connected random graph with maximum degree `max_degree`.
    BoundedDegree {
        n: usize,
        max_degree: usize,
    },
}

pub fn generate_instance(family: Family, seed: u64) -> Result<Graph> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    match family {
        Family::Path { n } => Graph::from_edges(n, (1..n).map(|i| (i - 1, i))),
        Family::Cycle { n } => {
            if n < 3 {
                return Err(Error::invalid("a cycle needs at least 3 vertices"));
            }
            Graph::from_edges(n, (0..n).map(|i| (i, (i + 1) % n)))
        }
        Family::Grid { rows, cols } => {
            let id = |r: usize, c: usize| r * cols + c;
            let mut edges = Vec::new();
            for r in 0..rows {
                for c in 0..cols {
                    if r + 1 < rows {
                        edges.push((id(r, c), id(r + 1, c)));
                    }
                    if c + 1 < cols {
                        edges.push((id(r, c), id(r, c + 1)));
                    }
                }
            }
            Graph::from_edges(rows * cols, edges)
        }
        Family::SubdividedClique { h, l } => {
            if h == 0 {
                return Err(Error::invalid("clique order must be positive"));
            }
            let mut b = GraphBuilder::new(h);
            for u in 0..h {
                for v in u + 1..h {
                    let mut prev = u;
                    for _ in 0..l {
                        let x = b.add_vertex();
                        b.add_edge(prev, x);
                        prev = x;
                    }
                    b.add_edge(prev, v);
                }
            }
            b.build()
        }
        Family::RandomPlanar { n } => random_planar(n, &mut rng),
        Family::BoundedDegree { n, max_degree } => {
            if max_degree < 2 && n > 2 {
                return Err(Error::invalid("max degree must be at least 2"));
            }
            bounded_degree(n, max_degree, &mut rng)
        }
    }
}

fn random_planar(n: usize, rng: &mut ChaCha8Rng) -> Result<Graph> {
    if n < 3 {
        return Graph::from_edges(n, (1..n).map(|i| (i - 1, i)));
    }
    // Stacked triangulation: every new vertex goes into a random face.
    let mut faces: Vec<[Vertex; 3]> = vec![[0, 1, 2], [0, 1, 2]];
    let mut edges = vec![(0, 1), (1, 2), (0, 2)];
    for v in 3..n {
        let i = rng.gen_range(0..faces.len());
        let [a, b, c] = faces.swap_remove(i);
        edges.extend([(a, v), (b, v), (c, v)]);
        faces.extend([[a, b, v], [b, c, v], [a, c, v]]);
    }
    let full = Graph::from_edges(n, edges)?;
    // Keep a random spanning tree plus each remaining edge with probability 1/2.
    let mut order: Vec<Vertex> = full.vertices().collect();
    order.shuffle(rng);
    let mut in_tree = vec![false; n];
    let mut kept = Vec::new();
    in_tree[order[0]] = true;
    let mut frontier = vec![order[0]];
    while let Some(u) = frontier.pop() {
        let mut nbrs: Vec<Vertex> = full.neighbors(u).to_vec();
        nbrs.shuffle(rng);
        for w in nbrs {
            if !in_tree[w] {
                in_tree[w] = true;
                kept.push((u, w));
                frontier.push(w);
            }
        }
    }
    for (u, v) in full.edges() {
        if !kept.contains(&(u, v)) && !kept.contains(&(v, u)) && rng.gen_bool(0.5) {
            kept.push((u, v));
        }
    }
    Graph::from_edges(n, kept)
}

fn bounded_degree(n: usize, cap: usize, rng: &mut ChaCha8Rng) -> Result<Graph> {
    let mut deg = vec![0usize; n];
    let mut edges = Vec::new();
    for v in 1..n {
        let open: Vec<Vertex> = (0..v).filter(|&u| deg[u] < cap).collect();
        let u = open[rng.gen_range(0..open.len())];
        deg[u] += 1;
        deg[v] += 1;
        edges.push((u, v));
    }
    for _ in 0..n {
        if n < 2 {
            break;
        }
        let u = rng.gen_range(0..n);
        let v = rng.gen_range(0..n);
        if u != v && deg[u] < cap && deg[v] < cap && !edges.contains(&(u, v)) && !edges.contains(&(v, u)) {
            deg[u] += 1;
            deg[v] += 1;
            edges.push((u, v));
        }
    }
    Graph::from_edges(n, edges)
}

/// Families with a planted domination number, used for scaling runs.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum PlantedFamily {
    /// Grid of `k` centres with every grid edge subdivided once and one or
    /// two pendant leaves per centre.
    SubdividedGrid,
    /// `k` centres of maximum degree 4, each with a pendant leaf.
    BoundedDegree,
}

/// Returns a connected graph whose domination number is exactly `k`.
///
/// Every centre carries a pendant leaf, so any dominating set needs one
/// vertex per centre; the centres dominate everything.
pub fn planted_instance(family: PlantedFamily, k: usize, seed: u64) -> Result<(Graph, usize)> {
    if k == 0 {
        return Err(Error::invalid("planted domination number must be positive"));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut b = GraphBuilder::new(k);
    match family {
        PlantedFamily::SubdividedGrid => {
            let rows = if k.is_multiple_of(2) && k >= 4 { 2 } else { 1 };
            let cols = k / rows;
            let id = |r: usize, c: usize| r * cols + c;
            for r in 0..rows {
                for c in 0..cols {
                    let mut nbrs = Vec::new();
                    if r + 1 < rows {
                        nbrs.push(id(r + 1, c));
                    }
                    if c + 1 < cols {
                        nbrs.push(id(r, c + 1));
                    }
                    for w in nbrs {
                        let x = b.add_vertex();
                        b.add_edge(id(r, c), x).add_edge(x, w);
                    }
                }
            }
            for c in 0..k {
                for _ in 0..rng.gen_range(1..=2) {
                    let leaf = b.add_vertex();
                    b.add_edge(c, leaf);
                }
            }
        }
        PlantedFamily::BoundedDegree => {
            let mut deg = vec![0usize; k];
            let mut free: Vec<Vertex> = Vec::new();
            for c in 0..k {
                let leaf = b.add_vertex();
                deg.push(1);
                b.add_edge(c, leaf);
                deg[c] += 1;
            }
            for c in 1..k {
                let x = b.add_vertex();
                deg.push(2);
                b.add_edge(c - 1, x).add_edge(x, c);
                deg[c - 1] += 1;
                deg[c] += 1;
                free.push(x);
            }
            for c in 0..k {
                if deg[c] < 4 && rng.gen_bool(0.7) {
                    let x = b.add_vertex();
                    deg.push(1);
                    b.add_edge(c, x);
                    deg[c] += 1;
                    free.push(x);
                }
            }
            let mut extra = Vec::new();
            for _ in 0..free.len() {
                let u = free[rng.gen_range(0..free.len())];
                let v = free[rng.gen_range(0..free.len())];
                if u != v && deg[u] < 4 && deg[v] < 4 && !extra.contains(&(u.min(v), u.max(v))) {
                    deg[u] += 1;
                    deg[v] += 1;
                    extra.push((u.min(v), u.max(v)));
                }
            }
            for (u, v) in extra {
                b.add_edge(u, v);
            }
        }
    }
    Ok((b.build()?, k))
}
