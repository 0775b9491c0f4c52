//! Exact solvers used as ground truth: plain subset enumeration, branch and
//! bound over set cover, and a treewidth dynamic program.

mod cover;
mod dp;

use crate::error::{Error, Result};
use crate::graph::{Graph, GraphBuilder, Vertex, VertexSet};
use crate::treedec::{heuristic_decomposition, Heuristic, TreeDecomposition};
use crate::Problem;

pub(crate) use cover::{min_cover, Mask, MAX_TARGETS};
pub use dp::{ds_dp_with_modes, Choice, Mode, MAX_BAG};

/// Size limits for the exponential solvers.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct Limits {
    /// Largest order accepted by plain enumeration for DS.
    pub ds_n: usize,
    /// Largest order accepted by plain enumeration for CDS.
    pub cds_n: usize,
    /// Largest number of candidate vertices for branch and bound.
    pub branch_n: usize,
    /// Search-tree nodes before branch and bound gives up.
    pub branch_nodes: u64,
}

impl Default for Limits {
    fn default() -> Self {
        Limits { ds_n: 24, cds_n: 20, branch_n: 24, branch_nodes: 20_000_000 }
    }
}

fn capacity(what: &'static str, actual: usize, limit: usize) -> Error {
    Error::Capacity { what, actual, limit }
}

/// A graph whose vertices are split into `X` (already chosen), `Y`
/// (dominated, may still be chosen) and `Z` (must be dominated).
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ColoredInstance {
    graph: Graph,
    x: VertexSet,
    y: VertexSet,
    z: VertexSet,
}

impl ColoredInstance {
    /// Checks that the three sets partition the vertices and that
    /// `N(X) ⊆ X ∪ Y`.
    pub fn new(graph: Graph, x: VertexSet, y: VertexSet, z: VertexSet) -> Result<Self> {
        for s in [&x, &y, &z] {
            graph.check_set(s)?;
        }
        if x.len() + y.len() + z.len() != graph.n() || !x.is_disjoint(&y) || !x.is_disjoint(&z) || !y.is_disjoint(&z) {
            return Err(Error::invalid("X, Y, Z must partition the vertex set"));
        }
        let nx = graph.open_neighborhood(&x)?;
        if !nx.is_subset(&y) {
            return Err(Error::invalid("N(X) must lie inside X ∪ Y"));
        }
        Ok(ColoredInstance { graph, x, y, z })
    }

    /// `X` given, `Y = N(X) \ X`, `Z` the rest.
    pub fn fresh(graph: Graph, x: VertexSet) -> Result<Self> {
        let y = graph.open_neighborhood(&x)?;
        let z = graph.vertices().filter(|v| !x.contains(v) && !y.contains(v)).collect();
        Ok(ColoredInstance { graph, x, y, z })
    }

    /// Plain dominating set: everything in `Z`.
    pub fn trivial(graph: Graph) -> Self {
        let z = graph.vertex_set();
        ColoredInstance { graph, x: VertexSet::new(), y: VertexSet::new(), z }
    }

    pub fn graph(&self) -> &Graph {
        &self.graph
    }

    pub fn x(&self) -> &VertexSet {
        &self.x
    }

    pub fn y(&self) -> &VertexSet {
        &self.y
    }

    pub fn z(&self) -> &VertexSet {
        &self.z
    }

    /// Moves `d` into `X`; `Y` gains the new neighbours and `Z` loses
    /// everything now chosen or dominated.
    pub fn with_added(&self, d: &VertexSet) -> Result<Self> {
        self.graph.check_set(d)?;
        let x: VertexSet = self.x.union(d).copied().collect();
        let mut y: VertexSet = self.y.union(&self.graph.open_neighborhood(&x)?).copied().collect();
        y.retain(|v| !x.contains(v));
        let z = self.z.iter().copied().filter(|v| !x.contains(v) && !y.contains(v)).collect();
        Ok(ColoredInstance { graph: self.graph.clone(), x, y, z })
    }

    pub fn is_solution(&self, d: &VertexSet) -> Result<bool> {
        self.graph.check_set(d)?;
        if !d.is_disjoint(&self.x) {
            return Ok(false);
        }
        let all: VertexSet = self.x.union(d).copied().collect();
        let covered = self.graph.closed_neighborhood(&all)?;
        Ok(self.z.is_subset(&covered))
    }

    /// The set-cover view: targets are the vertices of `Z` not yet dominated
    /// by `X`; candidates are `Y ∪ Z`.
    pub(crate) fn cover_view(&self) -> Result<(Vec<Vertex>, Vec<Mask>)> {
        let nx = self.graph.closed_neighborhood(&self.x)?;
        let targets: Vec<Vertex> = self.z.iter().copied().filter(|v| !nx.contains(v)).collect();
        if targets.len() > MAX_TARGETS {
            return Err(capacity("vertices to dominate", targets.len(), MAX_TARGETS));
        }
        let index = |v: Vertex| targets.binary_search(&v).ok();
        let cands: Vec<Vertex> = self.y.union(&self.z).copied().collect();
        let masks = cands
            .iter()
            .map(|&c| {
                std::iter::once(c)
                    .chain(self.graph.neighbors(c).iter().copied())
                    .filter_map(index)
                    .fold(0 as Mask, |m, i| m | (1 << i))
            })
            .collect();
        Ok((cands, masks))
    }
}

/// Iterates the `s`-subsets of `0..n` in lexicographic order until `f`
/// returns true; returns the accepted subset.
fn first_combination(n: usize, s: usize, mut f: impl FnMut(&[usize]) -> bool) -> Option<Vec<usize>> {
    if s > n {
        return None;
    }
    let mut idx: Vec<usize> = (0..s).collect();
    loop {
        if f(&idx) {
            return Some(idx);
        }
        let mut i = s;
        loop {
            if i == 0 {
                return None;
            }
            i -= 1;
            if idx[i] < n - s + i {
                break;
            }
            if i == 0 {
                return None;
            }
        }
        idx[i] += 1;
        for j in i + 1..s {
            idx[j] = idx[j - 1] + 1;
        }
    }
}

/// Lexicographically first minimum dominating set by plain enumeration in
/// order of size, or `None` if every dominating set is larger than `cap`.
pub fn ds_opt_bruteforce(g: &Graph, cap: usize) -> Result<Option<VertexSet>> {
    ds_opt_bruteforce_with(g, cap, &Limits::default())
}

pub fn ds_opt_bruteforce_with(g: &Graph, cap: usize, limits: &Limits) -> Result<Option<VertexSet>> {
    let n = g.n();
    if n > limits.ds_n.min(64) {
        return Err(capacity("graph order for DS enumeration", n, limits.ds_n.min(64)));
    }
    let masks = g.closed_masks()?;
    let full = if n == 64 { u64::MAX } else { (1u64 << n) - 1 };
    for s in 0..=cap.min(n) {
        let hit = first_combination(n, s, |idx| idx.iter().fold(0u64, |m, &i| m | masks[i]) == full);
        if let Some(idx) = hit {
            return Ok(Some(idx.into_iter().collect()));
        }
    }
    Ok(None)
}

/// Minimum connected dominating set by plain enumeration. The empty graph
/// has the empty solution.
pub fn cds_opt_bruteforce(g: &Graph, cap: usize) -> Result<Option<VertexSet>> {
    cds_opt_bruteforce_with(g, cap, &Limits::default())
}

pub fn cds_opt_bruteforce_with(g: &Graph, cap: usize, limits: &Limits) -> Result<Option<VertexSet>> {
    if !g.is_connected() {
        return Err(Error::Disconnected);
    }
    let n = g.n();
    if n > limits.cds_n.min(64) {
        return Err(capacity("graph order for CDS enumeration", n, limits.cds_n.min(64)));
    }
    if n == 0 {
        return Ok(Some(VertexSet::new()));
    }
    let masks = g.closed_masks()?;
    let full = if n == 64 { u64::MAX } else { (1u64 << n) - 1 };
    for s in 1..=cap.min(n) {
        let hit = first_combination(n, s, |idx| {
            idx.iter().fold(0u64, |m, &i| m | masks[i]) == full && g.is_connected_subset(&idx.iter().copied().collect())
        });
        if let Some(idx) = hit {
            return Ok(Some(idx.into_iter().collect()));
        }
    }
    Ok(None)
}

/// Minimum `D ⊆ Y ∪ Z` such that `X ∪ D` dominates `Z`, if `|D| ≤ cap`.
pub fn colored_ds_opt(inst: &ColoredInstance, cap: usize) -> Result<Option<VertexSet>> {
    colored_ds_opt_with(inst, cap, &Limits::default())
}

pub fn colored_ds_opt_with(inst: &ColoredInstance, cap: usize, limits: &Limits) -> Result<Option<VertexSet>> {
    let (cands, masks) = inst.cover_view()?;
    if cands.len() > limits.branch_n {
        return Err(capacity("candidate vertices for exact search", cands.len(), limits.branch_n));
    }
    let targets = masks.iter().fold(0 as Mask, |m, c| m | c);
    let needed = {
        let nx = inst.graph.closed_neighborhood(&inst.x)?;
        inst.z.iter().filter(|v| !nx.contains(v)).count()
    };
    if (targets.count_ones() as usize) < needed {
        return Ok(None);
    }
    let picked = min_cover(targets, &masks, cap, limits.branch_nodes)?;
    Ok(picked.map(|idx| idx.into_iter().map(|i| cands[i]).collect()))
}

/// `γ(G)`: branch and bound for small graphs, the treewidth DP otherwise.
pub fn domination_number(g: &Graph) -> Result<usize> {
    domination_number_with(g, &Limits::default())
}

pub fn domination_number_with(g: &Graph, limits: &Limits) -> Result<usize> {
    if g.n() <= limits.branch_n.max(limits.ds_n) && g.n() <= MAX_TARGETS {
        let lim = Limits { branch_n: limits.branch_n.max(limits.ds_n), ..*limits };
        let sol = colored_ds_opt_with(&ColoredInstance::trivial(g.clone()), g.n(), &lim)?;
        return Ok(sol.expect("V dominates itself").len());
    }
    let td = heuristic_decomposition(g, Heuristic::MinFill);
    Ok(ds_dp_with_modes(&td, &vec![Mode::FREE; g.n()])?.expect("V dominates itself"))
}

/// `γ(G)` by dynamic programming over `td`, which must decompose `g`.
pub fn ds_treewidth_dp(g: &Graph, td: &TreeDecomposition) -> Result<usize> {
    if td.host() != g {
        return Err(Error::invalid("decomposition belongs to a different graph"));
    }
    Ok(ds_dp_with_modes(td, &vec![Mode::FREE; g.n()])?.expect("V dominates itself"))
}

/// `γ_c(G)` of a connected graph (0 for the empty graph).
pub fn connected_domination_number(g: &Graph) -> Result<usize> {
    Ok(cds_opt_bruteforce(g, g.n())?.expect("V is a connected dominating set").len())
}

/// The least `ℓ` with `(G, ℓ) ∈ Π`.
pub fn threshold(g: &Graph, problem: Problem) -> Result<usize> {
    match problem {
        Problem::Ds => domination_number(g),
        Problem::Cds => connected_domination_number(g),
    }
}

/// Membership of `(G, k)` in the problem. CDS instances on disconnected
/// graphs are no-instances.
pub fn is_yes_instance(g: &Graph, k: i64, problem: Problem) -> Result<bool> {
    if k < 0 {
        return Ok(false);
    }
    if problem == Problem::Cds && !g.is_connected() {
        return Ok(false);
    }
    Ok(threshold(g, problem)? as i64 <= k)
}

/// Minimum `|P|` with `N²[P] = V`, if at most `cap`.
pub fn two_dominating_set_size(g: &Graph, cap: usize) -> Result<Option<usize>> {
    Ok(ds_opt_bruteforce(&square(g)?, cap)?.map(|s| s.len()))
}

/// The graph joining vertices at distance at most two.
pub fn square(g: &Graph) -> Result<Graph> {
    let mut b = GraphBuilder::new(g.n());
    for v in g.vertices() {
        for &w in g.neighbors(v) {
            if v < w {
                b.add_edge(v, w);
            }
            for &x in g.neighbors(w) {
                if v < x {
                    b.add_edge(v, x);
                }
            }
        }
    }
    b.build()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graph::{generate_instance, Family};
    use proptest::prelude::*;

    fn set(xs: &[Vertex]) -> VertexSet {
        xs.iter().copied().collect()
    }

    fn path(n: usize) -> Graph {
        generate_instance(Family::Path { n }, 0).unwrap()
    }

    fn cycle(n: usize) -> Graph {
        generate_instance(Family::Cycle { n }, 0).unwrap()
    }

    fn complete(n: usize) -> Graph {
        Graph::from_edges(n, (0..n).flat_map(|u| (u + 1..n).map(move |v| (u, v)))).unwrap()
    }

    fn star(leaves: usize) -> Graph {
        Graph::from_edges(leaves + 1, (1..=leaves).map(|v| (0, v))).unwrap()
    }

    /// Independent oracle: scan every subset of V in mask order.
    fn gamma_by_masks(g: &Graph) -> usize {
        let masks = g.closed_masks().unwrap();
        let full = (1u64 << g.n()) - 1;
        (0u64..=full)
            .filter(|s| (0..g.n()).filter(|&i| s >> i & 1 == 1).fold(0, |m, i| m | masks[i]) == full)
            .map(|s| s.count_ones() as usize)
            .min()
            .unwrap()
    }

    #[test]
    fn ds_bruteforce_examples() {
        // P4 optimal pairs: {0,2}, {0,3}, {1,2}, {1,3}; the first is {0,2}.
        assert_eq!(ds_opt_bruteforce(&path(4), 4).unwrap(), Some(set(&[0, 2])));
        assert_eq!(gamma_by_masks(&path(4)), 2);
        assert_eq!(ds_opt_bruteforce(&star(5), 6).unwrap(), Some(set(&[0])));
        assert_eq!(ds_opt_bruteforce(&Graph::empty(0), 0).unwrap(), Some(set(&[])));
        assert_eq!(ds_opt_bruteforce(&path(4), 1).unwrap(), None);
        assert!(matches!(ds_opt_bruteforce(&Graph::empty(25), 25), Err(Error::Capacity { .. })));
    }

    #[test]
    fn cds_bruteforce_examples() {
        assert_eq!(cds_opt_bruteforce(&path(5), 5).unwrap(), Some(set(&[1, 2, 3])));
        assert_eq!(cds_opt_bruteforce(&complete(5), 5).unwrap().unwrap().len(), 1);
        assert_eq!(cds_opt_bruteforce(&cycle(6), 6).unwrap().unwrap().len(), 4);
        assert_eq!(cds_opt_bruteforce(&Graph::empty(2), 2), Err(Error::Disconnected));
    }

    #[test]
    fn colored_examples() {
        let p3 = path(3);
        let inst = ColoredInstance::new(p3.clone(), set(&[0]), set(&[1]), set(&[2])).unwrap();
        assert_eq!(colored_ds_opt(&inst, 3).unwrap().unwrap().len(), 1);
        let none_left = ColoredInstance::fresh(p3.clone(), set(&[1])).unwrap();
        assert!(none_left.z().is_empty());
        assert_eq!(colored_ds_opt(&none_left, 0).unwrap(), Some(set(&[])));
        assert!(ColoredInstance::new(p3.clone(), set(&[0]), set(&[]), set(&[1, 2])).is_err());
        assert!(ColoredInstance::new(p3, set(&[0]), set(&[1]), set(&[1, 2])).is_err());
    }

    #[test]
    fn thresholds_and_two_domination() {
        assert_eq!(threshold(&path(4), Problem::Ds).unwrap(), 2);
        assert_eq!(threshold(&Graph::empty(1), Problem::Ds).unwrap(), 1);
        assert_eq!(threshold(&path(5), Problem::Cds).unwrap(), 3);
        assert_eq!(two_dominating_set_size(&path(5), 5).unwrap(), Some(1));
        assert_eq!(two_dominating_set_size(&path(7), 7).unwrap(), Some(2));
        assert_eq!(two_dominating_set_size(&complete(6), 6).unwrap(), Some(1));
        assert!(is_yes_instance(&path(4), 2, Problem::Ds).unwrap());
        assert!(!is_yes_instance(&path(4), 1, Problem::Ds).unwrap());
        assert!(!is_yes_instance(&Graph::empty(2), 5, Problem::Cds).unwrap());
        assert!(is_yes_instance(&Graph::empty(0), 0, Problem::Cds).unwrap());
        assert!(!is_yes_instance(&Graph::empty(0), -1, Problem::Ds).unwrap());
    }

    #[test]
    fn treewidth_dp_examples() {
        let c6 = cycle(6);
        let td = heuristic_decomposition(&c6, Heuristic::MinDegree);
        assert_eq!(ds_treewidth_dp(&c6, &td).unwrap(), 2);
        assert!(ds_treewidth_dp(&path(6), &td).is_err());
        // Larger than the enumeration guard: γ(P_40) = 14.
        assert_eq!(domination_number(&path(40)).unwrap(), 14);
        let grid = generate_instance(Family::Grid { rows: 6, cols: 6 }, 0).unwrap();
        assert_eq!(domination_number(&grid).unwrap(), 10);
    }

    fn small_graph() -> impl Strategy<Value = Graph> {
        (1usize..=14, proptest::collection::vec((0usize..14, 0usize..14), 0..35)).prop_map(|(n, raw)| {
            Graph::from_edges(n, raw.into_iter().filter(|&(u, v)| u < n && v < n && u != v)).unwrap()
        })
    }

    fn connected_graph() -> impl Strategy<Value = Graph> {
        (
            1usize..=12,
            proptest::collection::vec(any::<usize>(), 12),
            proptest::collection::vec((0usize..12, 0usize..12), 0..12),
        )
            .prop_map(|(n, parents, extra)| {
                let tree = (1..n).map(|v| (parents[v] % v, v));
                let more = extra.into_iter().filter(|&(u, v)| u < n && v < n && u != v);
                Graph::from_edges(n, tree.chain(more)).unwrap()
            })
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(500))]

        #[test]
        fn dp_matches_enumeration(g in small_graph(), fill in any::<bool>()) {
            let s = if fill { Heuristic::MinFill } else { Heuristic::MinDegree };
            let td = heuristic_decomposition(&g, s);
            let oracle = gamma_by_masks(&g);
            prop_assert_eq!(ds_treewidth_dp(&g, &td).unwrap(), oracle);
            prop_assert_eq!(ds_opt_bruteforce(&g, g.n()).unwrap().unwrap().len(), oracle);
            let colored = colored_ds_opt(&ColoredInstance::trivial(g.clone()), g.n()).unwrap().unwrap();
            prop_assert_eq!(colored.len(), oracle);
            prop_assert!(g.is_dominating_set(&colored).unwrap());
            for l in 0..=g.n() {
                prop_assert_eq!(is_yes_instance(&g, l as i64, Problem::Ds).unwrap(), l >= oracle);
            }
        }

        #[test]
        fn colored_matches_enumeration(g in small_graph(), xbits in any::<u16>()) {
            let x: VertexSet = g.vertices().filter(|&v| xbits >> v & 1 == 1).collect();
            let inst = ColoredInstance::fresh(g.clone(), x.clone()).unwrap();
            let sol = colored_ds_opt(&inst, g.n()).unwrap().unwrap();
            prop_assert!(inst.is_solution(&sol).unwrap());
            // oracle: smallest D outside X with X ∪ D dominating Z
            let masks = g.closed_masks().unwrap();
            let xm = x.iter().fold(0u64, |m, &v| m | masks[v]);
            let zm = inst.z().iter().fold(0u64, |m, &v| m | 1 << v);
            let xset = x.iter().fold(0u64, |m, &v| m | 1 << v);
            let best = (0u64..1 << g.n())
                .filter(|d| d & xset == 0)
                .filter(|d| (0..g.n()).filter(|&i| d >> i & 1 == 1).fold(xm, |m, i| m | masks[i]) & zm == zm)
                .map(|d| d.count_ones() as usize)
                .min()
                .unwrap();
            prop_assert_eq!(sol.len(), best);
        }

        #[test]
        fn cds_sanity_bound(g in connected_graph()) {
            let ds = threshold(&g, Problem::Ds).unwrap();
            let cds = threshold(&g, Problem::Cds).unwrap();
            prop_assert!(ds <= cds && cds <= (3 * ds).saturating_sub(2).max(1));
        }
    }
}
