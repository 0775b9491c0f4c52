//! Feasible apex subsets, the irrelevant-vertex rule and the 2-domination
//! witness of irreducible instances.

use std::collections::BTreeMap;

use crate::error::{Error, Result};
use crate::graph::{Graph, Vertex, VertexSet};
use crate::solvers::{ds_dp_with_modes, min_cover, Choice, Limits, Mask, Mode, MAX_TARGETS};
use crate::treedec::{heuristic_decomposition, Heuristic, TreeDecomposition};

/// Default bound on `|A|` (the context enumerates `2^|A|` subsets).
pub const DEFAULT_APEX_GUARD: usize = 8;

/// Whether a set `A′ ⊆ A` admits a set `D` with `D ∩ A = A′`,
/// `|D| ≤ 2(|S| + 2)`, dominating `V \ (A ∪ S)`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Feasibility {
    /// Feasible, with such a set `D(A′)`.
    Witnessed(VertexSet),
    /// Treated as feasible because no exact answer was available.
    Assumed,
    Infeasible,
}

impl Feasibility {
    pub fn is_feasible(&self) -> bool {
        !matches!(self, Feasibility::Infeasible)
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ApexContext {
    pub apex_set: VertexSet,
    pub feasible: BTreeMap<VertexSet, Feasibility>,
    /// Smallest vertex `v` with `A′ ⊆ N[v]`, per subset that has one.
    pub representatives: BTreeMap<VertexSet, Vertex>,
    /// `R`: all representatives.
    pub representatives_r: VertexSet,
    pub budget: usize,
}

impl ApexContext {
    pub fn feasible_sets(&self) -> impl Iterator<Item = &VertexSet> {
        self.feasible.iter().filter(|(_, f)| f.is_feasible()).map(|(a, _)| a)
    }
}

fn subsets(a: &VertexSet) -> Vec<VertexSet> {
    let items: Vec<Vertex> = a.iter().copied().collect();
    (0u64..1 << items.len()).map(|m| (0..items.len()).filter(|i| m >> i & 1 == 1).map(|i| items[i]).collect()).collect()
}

fn greedy_dominate(g: &Graph, targets: &VertexSet, cands: &[Vertex]) -> Option<VertexSet> {
    let mut left: VertexSet = targets.clone();
    let mut out = VertexSet::new();
    while !left.is_empty() {
        let gain =
            |c: Vertex| usize::from(left.contains(&c)) + g.neighbors(c).iter().filter(|w| left.contains(w)).count();
        let (best, gb) = cands.iter().map(|&c| (c, gain(c))).max_by_key(|&(c, gn)| (gn, std::cmp::Reverse(c)))?;
        if gb == 0 {
            return None;
        }
        out.insert(best);
        left.remove(&best);
        for w in g.neighbors(best) {
            left.remove(w);
        }
    }
    Some(out)
}

fn exact_cover(
    g: &Graph,
    targets: &VertexSet,
    cands: &[Vertex],
    cap: usize,
    limits: &Limits,
) -> Result<Option<VertexSet>> {
    if targets.len() > MAX_TARGETS {
        return Err(Error::Capacity { what: "vertices to dominate", actual: targets.len(), limit: MAX_TARGETS });
    }
    let tv: Vec<Vertex> = targets.iter().copied().collect();
    let index = |v: Vertex| tv.binary_search(&v).ok();
    let masks: Vec<Mask> = cands
        .iter()
        .map(|&c| {
            std::iter::once(c)
                .chain(g.neighbors(c).iter().copied())
                .filter_map(index)
                .fold(0 as Mask, |m, i| m | (1 << i))
        })
        .collect();
    let all = masks.iter().fold(0 as Mask, |m, c| m | c);
    let want: Mask = if tv.len() == MAX_TARGETS { Mask::MAX } else { (1 << tv.len()) - 1 };
    if all & want != want {
        return Ok(None);
    }
    Ok(min_cover(want, &masks, cap, limits.branch_nodes)?.map(|idx| idx.into_iter().map(|i| cands[i]).collect()))
}

#[allow(clippy::too_many_arguments)]
fn classify(
    g: &Graph,
    s: &VertexSet,
    a: &VertexSet,
    sub: &VertexSet,
    budget: usize,
    td: &TreeDecomposition,
    limits: &Limits,
) -> Result<Feasibility> {
    let covered = g.closed_neighborhood(sub)?;
    let targets: VertexSet =
        g.vertices().filter(|v| !a.contains(v) && !s.contains(v) && !covered.contains(v)).collect();
    let cands: Vec<Vertex> = g.vertices().filter(|v| !a.contains(v)).collect();
    if sub.len() > budget {
        return Ok(Feasibility::Infeasible);
    }
    let room = budget - sub.len();
    if let Some(d) = greedy_dominate(g, &targets, &cands) {
        if d.len() <= room {
            return Ok(Feasibility::Witnessed(d.union(sub).copied().collect()));
        }
    }
    if s.intersection(a).eq(sub.iter()) {
        return Ok(Feasibility::Witnessed(s.clone()));
    }
    let modes: Vec<Mode> = g
        .vertices()
        .map(|v| Mode {
            choice: if sub.contains(&v) {
                Choice::Forced
            } else if a.contains(&v) {
                Choice::Forbidden
            } else {
                Choice::Optional
            },
            must_dominate: !a.contains(&v) && !s.contains(&v),
        })
        .collect();
    let exact = match ds_dp_with_modes(td, &modes) {
        Ok(v) => Some(v),
        Err(e) if e.is_refusal() => None,
        Err(e) => return Err(e),
    };
    match exact {
        Some(None) => return Ok(Feasibility::Infeasible),
        Some(Some(opt)) if opt > budget => return Ok(Feasibility::Infeasible),
        _ => {}
    }
    match exact_cover(g, &targets, &cands, room, limits) {
        Ok(Some(d)) => Ok(Feasibility::Witnessed(d.union(sub).copied().collect())),
        Ok(None) if exact.is_none() => Ok(Feasibility::Infeasible),
        Ok(None) => Ok(Feasibility::Assumed),
        Err(e) if e.is_refusal() => Ok(Feasibility::Assumed),
        Err(e) => Err(e),
    }
}

/// Classifies every `A′ ⊆ A` and picks representatives.
pub fn feasible_subsets(g: &Graph, s: &VertexSet, a: &VertexSet) -> Result<ApexContext> {
    feasible_subsets_with(g, s, a, DEFAULT_APEX_GUARD, &Limits::default())
}

pub fn feasible_subsets_with(
    g: &Graph,
    s: &VertexSet,
    a: &VertexSet,
    apex_guard: usize,
    limits: &Limits,
) -> Result<ApexContext> {
    g.check_set(s)?;
    g.check_set(a)?;
    if a.len() > apex_guard {
        return Err(Error::Capacity { what: "apex set", actual: a.len(), limit: apex_guard });
    }
    let budget = 2 * (s.len() + 2);
    let td = heuristic_decomposition(g, Heuristic::MinFill);
    let mut feasible = BTreeMap::new();
    let mut representatives = BTreeMap::new();
    for sub in subsets(a) {
        let f = classify(g, s, a, &sub, budget, &td, limits)?;
        if let Some(v) = g.vertices().find(|&v| sub.iter().all(|&x| x == v || g.has_edge(x, v))) {
            representatives.insert(sub.clone(), v);
        }
        feasible.insert(sub, f);
    }
    let representatives_r = representatives.values().copied().collect();
    Ok(ApexContext { apex_set: a.clone(), feasible, representatives, representatives_r, budget })
}

/// Vertices `w ∉ R ∪ S ∪ A` with `N[w] \ A ⊆ N(A′) \ A` for every
/// feasible `A′`.
pub fn irrelevant_vertices(g: &Graph, s: &VertexSet, ctx: &ApexContext) -> Result<VertexSet> {
    let a = &ctx.apex_set;
    let covers: Vec<VertexSet> = ctx.feasible_sets().map(|sub| g.open_neighborhood(sub)).collect::<Result<_>>()?;
    Ok(g.vertices()
        .filter(|w| !ctx.representatives_r.contains(w) && !s.contains(w) && !a.contains(w))
        .filter(|&w| {
            covers.iter().all(|cover| {
                std::iter::once(w)
                    .chain(g.neighbors(w).iter().copied())
                    .filter(|x| !a.contains(x))
                    .all(|x| cover.contains(&x))
            })
        })
        .collect())
}

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub enum IrrelevantMode {
    /// Delete one vertex at a time, recomputing the context after each.
    #[default]
    Sequential,
    /// Delete every vertex found irrelevant in one sweep.
    Batch,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct IrrelevantPass {
    pub graph: Graph,
    /// `kept[i]` is the input id of output vertex `i`.
    pub kept: Vec<Vertex>,
    /// Removed vertices, as input ids.
    pub removed: VertexSet,
    /// Context of the output graph (input ids translated).
    pub context: ApexContext,
}

fn remap(set: &VertexSet, kept: &[Vertex]) -> VertexSet {
    set.iter().filter_map(|v| kept.binary_search(v).ok()).collect()
}

/// Applies the irrelevant-vertex rule until nothing is irrelevant (or
/// once, in batch mode).
pub fn irrelevant_vertex_pass(
    g: &Graph,
    s: &VertexSet,
    a: &VertexSet,
    mode: IrrelevantMode,
    apex_guard: usize,
    limits: &Limits,
) -> Result<IrrelevantPass> {
    if !g.is_dominating_set(s)? {
        return Err(Error::invalid("boundary set does not dominate the piece"));
    }
    let mut cur = g.clone();
    let mut kept: Vec<Vertex> = g.vertices().collect();
    let mut removed = VertexSet::new();
    loop {
        let (s_cur, a_cur) = (remap(s, &kept), remap(a, &kept));
        let ctx = feasible_subsets_with(&cur, &s_cur, &a_cur, apex_guard, limits)?;
        let found = irrelevant_vertices(&cur, &s_cur, &ctx)?;
        let batch_done = mode == IrrelevantMode::Batch && !removed.is_empty();
        if found.is_empty() || batch_done {
            return Ok(IrrelevantPass { graph: cur, kept, removed, context: ctx });
        }
        let drop: VertexSet = match mode {
            IrrelevantMode::Sequential => found.iter().take(1).copied().collect(),
            IrrelevantMode::Batch => found,
        };
        removed.extend(drop.iter().map(|&v| kept[v]));
        let (next, map) = cur.remove_vertices(&drop)?;
        kept = map.iter().map(|&v| kept[v]).collect();
        cur = next;
    }
}

/// `Q = ⋃ D(A′) ∪ R ∪ S \ A`, checked to 2-dominate `V \ A` in `G - A`.
pub fn two_dom_witness(g: &Graph, s: &VertexSet, ctx: &ApexContext) -> Result<VertexSet> {
    let a = &ctx.apex_set;
    let mut q: VertexSet = s.union(&ctx.representatives_r).copied().collect();
    for f in ctx.feasible.values() {
        match f {
            Feasibility::Witnessed(d) => q.extend(d.iter().copied()),
            Feasibility::Assumed => {
                return Err(Error::Incomplete("a feasible apex subset has no witness".into()));
            }
            Feasibility::Infeasible => {}
        }
    }
    let q: VertexSet = q.difference(a).copied().collect();
    let (rest, kept) = g.remove_vertices(a)?;
    let local = remap(&q, &kept);
    let reach = rest.r_dominated_set(&local, 2)?;
    if reach.len() != rest.n() {
        let missing = rest.vertices().find(|v| !reach.contains(v)).map(|v| kept[v]);
        return Err(Error::invariant(format!("vertex {missing:?} is farther than 2 from the witness set")));
    }
    Ok(q)
}
