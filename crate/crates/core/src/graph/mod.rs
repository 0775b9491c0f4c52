//! Simple undirected graphs with dense vertex ids.
//!
//! A [`Graph`] is an immutable value. Operations that shrink or rewrite a
//! graph return a new graph together with a map from new ids to the ids of
//! the graph they were derived from.

mod generate;
mod io;

use std::collections::{BTreeSet, VecDeque};

pub use generate::{generate_instance, planted_instance, Family, PlantedFamily};
pub use io::{parse_gr, write_gr};

use crate::error::{Error, Result};

pub type Vertex = usize;

/// Sets are ordered so that iteration, and with it every tie-break
/// downstream, is deterministic.
pub type VertexSet = BTreeSet<Vertex>;

#[derive(Clone, Debug, Default, PartialEq, Eq, Hash)]
pub struct Graph {
    adj: Vec<Vec<Vertex>>,
}

impl Graph {
    /// Graph on `n` isolated vertices.
    pub fn empty(n: usize) -> Self {
        Graph { adj: vec![Vec::new(); n] }
    }

    /// Builds a graph on vertices `0..n`. Repeated edges collapse into one;
    /// self-loops and out-of-range endpoints are rejected.
    pub fn from_edges<I>(n: usize, edges: I) -> Result<Self>
    where
        I: IntoIterator<Item = (Vertex, Vertex)>,
    {
        let mut adj = vec![Vec::new(); n];
        for (u, v) in edges {
            if u >= n {
                return Err(Error::UnknownVertex(u));
            }
            if v >= n {
                return Err(Error::UnknownVertex(v));
            }
            if u == v {
                return Err(Error::invalid(format!("self-loop at vertex {u}")));
            }
            adj[u].push(v);
            adj[v].push(u);
        }
        for list in &mut adj {
            list.sort_unstable();
            list.dedup();
        }
        Ok(Graph { adj })
    }

    pub fn n(&self) -> usize {
        self.adj.len()
    }

    pub fn m(&self) -> usize {
        self.adj.iter().map(Vec::len).sum::<usize>() / 2
    }

    pub fn is_empty(&self) -> bool {
        self.adj.is_empty()
    }

    pub fn vertices(&self) -> std::ops::Range<Vertex> {
        0..self.n()
    }

    pub fn vertex_set(&self) -> VertexSet {
        self.vertices().collect()
    }

    pub fn contains(&self, v: Vertex) -> bool {
        v < self.n()
    }

    /// Sorted neighbour list.
    pub fn neighbors(&self, v: Vertex) -> &[Vertex] {
        &self.adj[v]
    }

    pub fn degree(&self, v: Vertex) -> usize {
        self.adj[v].len()
    }

    pub fn max_degree(&self) -> usize {
        self.adj.iter().map(Vec::len).max().unwrap_or(0)
    }

    pub fn has_edge(&self, u: Vertex, v: Vertex) -> bool {
        u < self.n() && self.adj[u].binary_search(&v).is_ok()
    }

    /// Edges as `(u, v)` with `u < v`, in lexicographic order.
    pub fn edges(&self) -> impl Iterator<Item = (Vertex, Vertex)> + '_ {
        self.adj.iter().enumerate().flat_map(|(u, list)| list.iter().filter(move |&&v| v > u).map(move |&v| (u, v)))
    }

    pub fn check_set(&self, s: &VertexSet) -> Result<()> {
        match s.iter().next_back() {
            Some(&v) if v >= self.n() => Err(Error::UnknownVertex(v)),
            _ => Ok(()),
        }
    }

    fn check_vertex(&self, v: Vertex) -> Result<()> {
        if v < self.n() {
            Ok(())
        } else {
            Err(Error::UnknownVertex(v))
        }
    }

    /// `N[s]`: `s` together with every vertex adjacent to it.
    pub fn closed_neighborhood(&self, s: &VertexSet) -> Result<VertexSet> {
        self.check_set(s)?;
        let mut out = s.clone();
        for &v in s {
            out.extend(self.adj[v].iter().copied());
        }
        Ok(out)
    }

    /// `N(s) \ s`.
    pub fn open_neighborhood(&self, s: &VertexSet) -> Result<VertexSet> {
        let mut out = self.closed_neighborhood(s)?;
        out.retain(|v| !s.contains(v));
        Ok(out)
    }

    /// BFS distances from `sources` (`usize::MAX` when unreachable).
    pub fn distances(&self, sources: &VertexSet) -> Result<Vec<usize>> {
        self.check_set(sources)?;
        let mut dist = vec![usize::MAX; self.n()];
        let mut queue = VecDeque::new();
        for &s in sources {
            dist[s] = 0;
            queue.push_back(s);
        }
        while let Some(u) = queue.pop_front() {
            for &w in &self.adj[u] {
                if dist[w] == usize::MAX {
                    dist[w] = dist[u] + 1;
                    queue.push_back(w);
                }
            }
        }
        Ok(dist)
    }

    /// `N^r[p]`: all vertices within distance `r` of `p`.
    pub fn r_dominated_set(&self, p: &VertexSet, r: usize) -> Result<VertexSet> {
        if r == 0 {
            return Err(Error::invalid("radius must be at least 1"));
        }
        let dist = self.distances(p)?;
        Ok(self.vertices().filter(|&v| dist[v] <= r).collect())
    }

    pub fn is_dominating_set(&self, d: &VertexSet) -> Result<bool> {
        Ok(self.closed_neighborhood(d)?.len() == self.n())
    }

    /// Connected dominating set test. Only defined on connected graphs.
    pub fn is_connected_dominating_set(&self, d: &VertexSet) -> Result<bool> {
        self.check_set(d)?;
        if !self.is_connected() {
            return Err(Error::Disconnected);
        }
        Ok(!d.is_empty() && self.is_dominating_set(d)? && self.is_connected_subset(d))
    }

    /// Connected components, each sorted, ordered by smallest member.
    pub fn components(&self) -> Vec<Vec<Vertex>> {
        self.components_avoiding(&VertexSet::new())
    }

    /// Components of `G - removed`.
    pub fn components_avoiding(&self, removed: &VertexSet) -> Vec<Vec<Vertex>> {
        let mut seen = vec![false; self.n()];
        for &r in removed {
            if r < self.n() {
                seen[r] = true;
            }
        }
        let mut out = Vec::new();
        for s in self.vertices() {
            if seen[s] {
                continue;
            }
            seen[s] = true;
            let mut comp = vec![s];
            let mut i = 0;
            while i < comp.len() {
                let u = comp[i];
                i += 1;
                for &w in &self.adj[u] {
                    if !seen[w] {
                        seen[w] = true;
                        comp.push(w);
                    }
                }
            }
            comp.sort_unstable();
            out.push(comp);
        }
        out
    }

    /// True for the empty graph and for every connected graph.
    pub fn is_connected(&self) -> bool {
        self.components().len() <= 1
    }

    /// Whether `G[s]` is connected. The empty set counts as connected.
    pub fn is_connected_subset(&self, s: &VertexSet) -> bool {
        let Some(&start) = s.iter().next() else {
            return true;
        };
        let mut seen = VertexSet::new();
        seen.insert(start);
        let mut stack = vec![start];
        while let Some(u) = stack.pop() {
            for &w in &self.adj[u] {
                if s.contains(&w) && seen.insert(w) {
                    stack.push(w);
                }
            }
        }
        seen.len() == s.len()
    }

    /// `G[keep]` with vertices renumbered in increasing order of their old id.
    /// The returned vector maps new ids to old ids.
    pub fn induced_subgraph(&self, keep: &VertexSet) -> Result<(Graph, Vec<Vertex>)> {
        self.check_set(keep)?;
        let map: Vec<Vertex> = keep.iter().copied().collect();
        let mut index = vec![usize::MAX; self.n()];
        for (i, &v) in map.iter().enumerate() {
            index[v] = i;
        }
        let adj = map
            .iter()
            .map(|&v| self.adj[v].iter().filter(|&&w| index[w] != usize::MAX).map(|&w| index[w]).collect())
            .collect();
        Ok((Graph { adj }, map))
    }

    /// `G - removed`, renumbered as in [`Graph::induced_subgraph`].
    pub fn remove_vertices(&self, removed: &VertexSet) -> Result<(Graph, Vec<Vertex>)> {
        self.check_set(removed)?;
        let keep = self.vertices().filter(|v| !removed.contains(v)).collect();
        self.induced_subgraph(&keep)
    }

    /// Vertices of `x` with a neighbour outside `x`.
    pub fn boundary_of(&self, x: &VertexSet) -> Result<VertexSet> {
        self.check_set(x)?;
        Ok(x.iter().copied().filter(|&v| self.adj[v].iter().any(|w| !x.contains(w))).collect())
    }

    /// Closed neighbourhoods as bitmasks. Only for graphs with at most 64
    /// vertices.
    pub fn closed_masks(&self) -> Result<Vec<u64>> {
        if self.n() > 64 {
            return Err(Error::Capacity { what: "bitmask graph order", actual: self.n(), limit: 64 });
        }
        Ok(self.adj.iter().enumerate().map(|(v, list)| list.iter().fold(1u64 << v, |m, &w| m | (1u64 << w))).collect())
    }

    pub fn degree_of(&self, v: Vertex) -> Result<usize> {
        self.check_vertex(v)?;
        Ok(self.degree(v))
    }
}

/// Builder used when vertex count is not known up front.
#[derive(Clone, Debug, Default)]
pub struct GraphBuilder {
    n: usize,
    edges: Vec<(Vertex, Vertex)>,
}

impl GraphBuilder {
    pub fn new(n: usize) -> Self {
        GraphBuilder { n, edges: Vec::new() }
    }

    pub fn add_vertex(&mut self) -> Vertex {
        self.n += 1;
        self.n - 1
    }

    pub fn add_edge(&mut self, u: Vertex, v: Vertex) -> &mut Self {
        self.edges.push((u, v));
        self
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn build(self) -> Result<Graph> {
        Graph::from_edges(self.n, self.edges)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn set(xs: &[Vertex]) -> VertexSet {
        xs.iter().copied().collect()
    }

    fn path(n: usize) -> Graph {
        Graph::from_edges(n, (1..n).map(|i| (i - 1, i))).unwrap()
    }

    fn cycle(n: usize) -> Graph {
        Graph::from_edges(n, (0..n).map(|i| (i, (i + 1) % n))).unwrap()
    }

    #[test]
    fn closed_neighborhood_examples() {
        // a-b-c
        assert_eq!(path(3).closed_neighborhood(&set(&[1])).unwrap(), set(&[0, 1, 2]));
        assert!(path(4).closed_neighborhood(&set(&[])).unwrap().is_empty());
        // C5 on 1..5 is 0..4 here: {1} -> {5,1,2} becomes {0} -> {4,0,1}
        assert_eq!(cycle(5).closed_neighborhood(&set(&[0])).unwrap(), set(&[4, 0, 1]));
        assert_eq!(path(3).closed_neighborhood(&set(&[7])), Err(Error::UnknownVertex(7)));
    }

    #[test]
    fn r_dominated_examples() {
        let p5 = path(5);
        assert_eq!(p5.r_dominated_set(&set(&[0]), 2).unwrap(), set(&[0, 1, 2]));
        assert_eq!(p5.r_dominated_set(&set(&[2]), 2).unwrap(), p5.vertex_set());
        assert_eq!(p5.r_dominated_set(&p5.vertex_set(), 1).unwrap(), p5.vertex_set());
        assert!(matches!(p5.r_dominated_set(&set(&[0]), 0), Err(Error::InvalidInput(_))));
    }

    #[test]
    fn domination_predicates() {
        let star = Graph::from_edges(6, (1..6).map(|i| (0, i))).unwrap();
        assert!(star.is_dominating_set(&set(&[0])).unwrap());
        let p4 = path(4);
        assert!(!p4.is_dominating_set(&set(&[0])).unwrap());
        assert!(p4.is_dominating_set(&set(&[1, 2])).unwrap());
        assert!(p4.is_connected_dominating_set(&set(&[1, 2])).unwrap());
        assert!(!cycle(6).is_connected_dominating_set(&set(&[0, 3])).unwrap());
        assert!(Graph::empty(1).is_connected_dominating_set(&set(&[0])).unwrap());
        let two = Graph::empty(2);
        assert_eq!(two.is_connected_dominating_set(&set(&[0])), Err(Error::Disconnected));
    }

    #[test]
    fn rejects_self_loops_and_collapses_duplicates() {
        assert!(Graph::from_edges(2, [(0, 0)]).is_err());
        let g = Graph::from_edges(2, [(0, 1), (1, 0), (0, 1)]).unwrap();
        assert_eq!(g.m(), 1);
    }

    #[test]
    fn induced_subgraph_maps_back() {
        let g = cycle(5);
        let (h, map) = g.induced_subgraph(&set(&[0, 1, 3])).unwrap();
        assert_eq!(map, vec![0, 1, 3]);
        assert_eq!(h.edges().collect::<Vec<_>>(), vec![(0, 1)]);
        assert_eq!(g.boundary_of(&set(&[0, 1])).unwrap(), set(&[0, 1]));
    }

    #[test]
    fn empty_graph_is_dominated_by_nothing() {
        let g = Graph::empty(0);
        assert!(g.is_dominating_set(&VertexSet::new()).unwrap());
        assert!(g.is_connected());
    }
}
