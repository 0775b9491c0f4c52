//! Boundaried pieces and the reducers that shrink them while preserving
//! their gluing behaviour on the boundary.

use crate::boundaried::{reduce_via_representatives, replace, signature, BoundariedGraph, RepresentativeTable};
use crate::error::{Error, Result};
use crate::graph::{Graph, Vertex, VertexSet};
use crate::protrusion::small_boundary_parts;
use crate::Problem;

use super::apex::irrelevant_vertex_pass;
use super::ReduceConfig;

/// A graph with an ordered boundary (label `i + 1` on `boundary[i]`).
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Piece {
    pub graph: Graph,
    pub boundary: Vec<Vertex>,
}

impl Piece {
    pub fn new(graph: Graph, boundary: Vec<Vertex>) -> Result<Self> {
        let set: VertexSet = boundary.iter().copied().collect();
        graph.check_set(&set)?;
        if set.len() != boundary.len() {
            return Err(Error::invalid("repeated boundary vertex"));
        }
        Ok(Piece { graph, boundary })
    }

    /// `G[x]` with boundary `boundary` (host ids, must lie in `x`).
    pub fn from_part(g: &Graph, x: &VertexSet, boundary: &[Vertex]) -> Result<Self> {
        let bg = BoundariedGraph::view(g, x, boundary, boundary.len())?;
        let labels: Vec<Vertex> = (1..=boundary.len()).map(|l| bg.vertex_of(l).expect("labeled")).collect();
        Piece::new(bg.graph().clone(), labels)
    }

    pub fn boundary_set(&self) -> VertexSet {
        self.boundary.iter().copied().collect()
    }

    pub fn n(&self) -> usize {
        self.graph.n()
    }

    pub fn to_boundaried(&self, t: usize) -> Result<BoundariedGraph> {
        BoundariedGraph::with_boundary(self.graph.clone(), t.max(self.boundary.len()), &self.boundary)
    }

    /// Replaces the part `x` (boundary `labeled`) by `new_part`, keeping the
    /// piece boundary, which must avoid the interior of `x`.
    fn replaced(&self, x: &VertexSet, labeled: &[Vertex], new_part: &BoundariedGraph) -> Result<Piece> {
        let out = replace(&self.graph, x, labeled, new_part)?;
        let boundary = self
            .boundary
            .iter()
            .map(|v| {
                out.kept.binary_search(v).map_err(|_| Error::invariant("piece boundary fell inside a replaced part"))
            })
            .collect::<Result<Vec<_>>>()?;
        Piece::new(out.graph, boundary)
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PieceOutcome {
    pub piece: Piece,
    /// Parameter change, never positive.
    pub constant: i64,
    pub irrelevant_removed: usize,
    pub replacements: usize,
    pub refusals: usize,
    /// Width of the decompositions used by the separator recursion.
    pub width: Option<usize>,
}

impl PieceOutcome {
    fn unchanged(piece: Piece) -> Self {
        PieceOutcome { piece, constant: 0, irrelevant_removed: 0, replacements: 0, refusals: 0, width: None }
    }

    fn absorb(&mut self, other: PieceOutcome) {
        self.piece = other.piece;
        self.constant += other.constant;
        self.irrelevant_removed += other.irrelevant_removed;
        self.replacements += other.replacements;
        self.refusals += other.refusals;
        self.width = match (self.width, other.width) {
            (Some(a), Some(b)) => Some(a.max(b)),
            (a, b) => a.or(b),
        };
    }
}

/// Tries to replace `x` (with boundary `labeled`) inside `piece` by a
/// smaller representative. `Ok(None)` when the class representative is not
/// smaller; refusals are returned as errors.
pub(crate) fn try_replace(
    piece: &Piece,
    x: &VertexSet,
    labeled: &[Vertex],
    table: &RepresentativeTable,
) -> Result<Option<(Piece, i64)>> {
    if labeled.len() > table.t() {
        return Err(Error::Refused("part boundary exceeds table capacity".into()));
    }
    let part = BoundariedGraph::view(&piece.graph, x, labeled, table.t())?;
    let (norm, _) = signature(&part, table.problem())?.normalized();
    let Some(class) = table.lookup(&norm) else {
        return Err(Error::Incomplete("class not represented".into()));
    };
    if table.rep(class).n() >= x.len() {
        return Ok(None);
    }
    let (rep, c) = reduce_via_representatives(&part, table)?;
    Ok(Some((piece.replaced(x, labeled, &rep)?, c)))
}

/// Repeatedly replaces parts separated from the rest of the piece by at
/// most `table.t()` vertices and avoiding the piece boundary.
pub fn replace_small_parts(piece: &Piece, table: &RepresentativeTable, cfg: &ReduceConfig) -> Result<PieceOutcome> {
    let mut out = PieceOutcome::unchanged(piece.clone());
    'sweep: loop {
        let keep = out.piece.boundary_set();
        let parts = small_boundary_parts(&out.piece.graph, &keep, table.t(), 2)?;
        for p in parts {
            if p.vertices.len() > cfg.max_part || p.boundary.is_empty() {
                continue;
            }
            let labeled: Vec<Vertex> = p.boundary.iter().copied().collect();
            match try_replace(&out.piece, &p.vertices, &labeled, table) {
                Ok(Some((next, c))) => {
                    out.piece = next;
                    out.constant += c;
                    out.replacements += 1;
                    continue 'sweep;
                }
                Ok(None) => {}
                Err(e) if e.is_refusal() => out.refusals += 1,
                Err(e) => return Err(e),
            }
        }
        return Ok(out);
    }
}

/// Vertices of degree above `h_prime`, highest degree first, at most
/// `guard` of them.
pub(crate) fn high_degree_apices(g: &Graph, h_prime: usize, guard: usize) -> VertexSet {
    let mut high: Vec<Vertex> = g.vertices().filter(|&v| g.degree(v) > h_prime).collect();
    high.sort_by_key(|&v| (std::cmp::Reverse(g.degree(v)), v));
    high.into_iter().take(guard).collect()
}

/// Irrelevant-vertex pass with the high-degree vertices as apices.
pub(crate) fn irrelevant_step(
    piece: &Piece,
    h_prime: usize,
    problem: Problem,
    cfg: &ReduceConfig,
) -> Result<PieceOutcome> {
    let a = high_degree_apices(&piece.graph, h_prime, cfg.apex_guard);
    Ok(irrelevant_with_apices(piece, &a, problem, cfg)?.0)
}

/// Irrelevant-vertex pass with apex set `a` (DS only, or CDS when
/// explicitly enabled). Also returns the input ids of the kept vertices.
pub(crate) fn irrelevant_with_apices(
    piece: &Piece,
    a: &VertexSet,
    problem: Problem,
    cfg: &ReduceConfig,
) -> Result<(PieceOutcome, Vec<Vertex>)> {
    let mut out = PieceOutcome::unchanged(piece.clone());
    let identity: Vec<Vertex> = piece.graph.vertices().collect();
    let enabled = match problem {
        Problem::Ds => cfg.irrelevant_rule,
        Problem::Cds => cfg.irrelevant_rule && cfg.cds_irrelevant_rule,
    };
    if !enabled || a.is_empty() {
        return Ok((out, identity));
    }
    let s = piece.boundary_set();
    if !piece.graph.is_dominating_set(&s)? {
        return Ok((out, identity));
    }
    let a: VertexSet = a.iter().copied().take(cfg.apex_guard).collect();
    let pass = irrelevant_vertex_pass(&piece.graph, &s, &a, cfg.irrelevant, cfg.apex_guard, &cfg.limits)?;
    if pass.removed.is_empty() {
        return Ok((out, identity));
    }
    let boundary = piece
        .boundary
        .iter()
        .map(|v| pass.kept.binary_search(v).map_err(|_| Error::invariant("boundary vertex removed")))
        .collect::<Result<Vec<_>>>()?;
    out.irrelevant_removed = pass.removed.len();
    out.piece = Piece::new(pass.graph, boundary)?;
    Ok((out, pass.kept))
}

/// Reducer for pieces with few high-degree vertices: the irrelevant-vertex
/// rule with the high-degree vertices as apices, then small-part
/// replacement.
pub fn reduce_bounded_degree_piece(
    piece: &Piece,
    h_prime: usize,
    table: &RepresentativeTable,
    cfg: &ReduceConfig,
) -> Result<PieceOutcome> {
    let mut out = irrelevant_step(piece, h_prime, table.problem(), cfg)?;
    let swept = replace_small_parts(&out.piece, table, cfg)?;
    out.absorb(swept);
    Ok(out)
}

#[cfg(test)]
pub(crate) mod tests {
    use super::*;
    use crate::boundaried::{enumerate_representatives, glue};
    use crate::solvers::threshold;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    /// Random fillers over `t` labels with up to `extra` further vertices.
    fn fillers(t: usize, extra: usize, count: usize, seed: u64) -> Vec<BoundariedGraph> {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        (0..count)
            .map(|_| {
                let n = t + rng.gen_range(0..=extra);
                let edges: Vec<(usize, usize)> =
                    (0..n).flat_map(|u| (u + 1..n).map(move |v| (u, v))).filter(|_| rng.gen_bool(0.4)).collect();
                let labels: Vec<usize> = (0..t).collect();
                BoundariedGraph::with_boundary(Graph::from_edges(n, edges).unwrap(), t, &labels).unwrap()
            })
            .collect()
    }

    pub(crate) fn assert_equivalent(before: &Piece, after: &PieceOutcome, problem: Problem, seed: u64) {
        let t = before.boundary.len();
        let a = before.to_boundaried(t).unwrap();
        let b = after.piece.to_boundaried(t).unwrap();
        for f in fillers(t, 3, 25, seed) {
            let g1 = glue(&a, &f).unwrap();
            let g2 = glue(&b, &f).unwrap();
            let (x, y) = match problem {
                Problem::Ds => (threshold(&g1, problem).unwrap() as i64, threshold(&g2, problem).unwrap() as i64),
                Problem::Cds => {
                    if !g1.is_connected() {
                        assert!(!g2.is_connected());
                        continue;
                    }
                    (threshold(&g1, problem).unwrap() as i64, threshold(&g2, problem).unwrap() as i64)
                }
            };
            assert_eq!(x + after.constant, y, "filler changes the threshold shift");
        }
    }

    fn cfg() -> ReduceConfig {
        ReduceConfig::default()
    }

    #[test]
    fn pendant_paths_are_shortened() {
        let table = enumerate_representatives(2, 4, Problem::Ds).unwrap();
        // Boundary {0, 1}; a long path hangs off vertex 1.
        let mut edges = vec![(0, 1)];
        for i in 1..12 {
            edges.push((i, i + 1));
        }
        let g = Graph::from_edges(13, edges).unwrap();
        let piece = Piece::new(g, vec![0, 1]).unwrap();
        let out = replace_small_parts(&piece, &table, &cfg()).unwrap();
        assert!(out.piece.n() < piece.n());
        assert!(out.constant < 0);
        assert_equivalent(&piece, &out, Problem::Ds, 1);
    }

    #[test]
    fn small_piece_is_unchanged() {
        let table = enumerate_representatives(1, 3, Problem::Ds).unwrap();
        let piece = Piece::new(Graph::from_edges(2, [(0, 1)]).unwrap(), vec![0]).unwrap();
        let out = reduce_bounded_degree_piece(&piece, 3, &table, &cfg()).unwrap();
        assert_eq!(out.piece, piece);
        assert_eq!(out.constant, 0);
    }

    #[test]
    fn bounded_degree_piece_is_sound() {
        let table = enumerate_representatives(2, 4, Problem::Ds).unwrap();
        for seed in 0..12 {
            let g = crate::graph::generate_instance(crate::graph::Family::BoundedDegree { n: 14, max_degree: 3 }, seed)
                .unwrap();
            let s = crate::solvers::ds_opt_bruteforce(&g, g.n()).unwrap().unwrap();
            let boundary: Vec<Vertex> = s.iter().copied().take(3).collect();
            // Boundary must dominate the piece: use the whole optimum when
            // it is small, else skip.
            if boundary.len() < s.len() {
                continue;
            }
            let piece = Piece::new(g, boundary).unwrap();
            let out = reduce_bounded_degree_piece(&piece, 3, &table, &cfg()).unwrap();
            assert!(out.constant <= 0);
            assert_equivalent(&piece, &out, Problem::Ds, seed);
        }
    }

    #[test]
    fn star_with_apex_loses_leaves() {
        let table = enumerate_representatives(1, 3, Problem::Ds).unwrap();
        let g = Graph::from_edges(12, (1..12).map(|i| (0, i))).unwrap();
        let piece = Piece::new(g, vec![0]).unwrap();
        let out = reduce_bounded_degree_piece(&piece, 3, &table, &cfg()).unwrap();
        assert!(out.piece.n() < 12);
        assert_equivalent(&piece, &out, Problem::Ds, 5);
    }

    #[test]
    fn everything_on_the_boundary_is_kept() {
        let table = enumerate_representatives(1, 3, Problem::Ds).unwrap();
        let g = Graph::from_edges(5, (0..4).map(|i| (i, i + 1))).unwrap();
        let piece = Piece::new(g.clone(), g.vertices().collect()).unwrap();
        let out = reduce_bounded_degree_piece(&piece, 1, &table, &cfg()).unwrap();
        assert_eq!(out.piece, piece);
    }
}
