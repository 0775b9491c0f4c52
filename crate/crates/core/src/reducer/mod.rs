//! The kernelization driver and the rules it applies: protrusion
//! replacement, the irrelevant-vertex rule and the per-slice reducers.

mod apex;
mod piece;
mod separator;

use std::fmt::{self, Write as _};

pub use apex::{
    feasible_subsets, feasible_subsets_with, irrelevant_vertex_pass, irrelevant_vertices, two_dom_witness, ApexContext,
    Feasibility, IrrelevantMode, IrrelevantPass, DEFAULT_APEX_GUARD,
};
pub use piece::{reduce_bounded_degree_piece, replace_small_parts, Piece, PieceOutcome};
pub use separator::{balanced_separator, reduce_separator_recursive, Separator};

use crate::approx::{approx_cds_with, approx_colored_ds_with};
use crate::boundaried::{replace, RepresentativeTable};
use crate::error::{Error, Result};
use crate::graph::{Graph, Vertex, VertexSet};
use crate::protrusion::replace_protrusion;
use crate::slicedec::analyze_slices;
use crate::solvers::{threshold, ColoredInstance, Limits};
use crate::treedec::{heuristic_decomposition, Heuristic, NodeTypeTag, TreeDecomposition};
use crate::Problem;

/// Knobs shared by the piece reducers.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ReduceConfig {
    pub apex_guard: usize,
    pub irrelevant: IrrelevantMode,
    pub irrelevant_rule: bool,
    /// Apply the irrelevant-vertex rule to CDS instances too.
    pub cds_irrelevant_rule: bool,
    pub limits: Limits,
    /// Largest part handed to the representative table.
    pub max_part: usize,
    /// Recursion depth of the separator reducer.
    pub max_depth: usize,
}

impl Default for ReduceConfig {
    fn default() -> Self {
        ReduceConfig {
            apex_guard: DEFAULT_APEX_GUARD,
            irrelevant: IrrelevantMode::Sequential,
            irrelevant_rule: true,
            cds_irrelevant_rule: false,
            limits: Limits::default(),
            max_part: 40,
            max_depth: 8,
        }
    }
}

#[derive(Clone, Debug, Default)]
pub struct KernelConfig {
    /// Excluded topological minor order.
    pub h: usize,
    /// Decomposition of the input graph; a min-fill one is computed if absent.
    pub td: Option<TreeDecomposition>,
    pub reduce: ReduceConfig,
}

impl KernelConfig {
    pub fn new(h: usize) -> Self {
        KernelConfig { h, ..Default::default() }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Rule {
    NegativeBudget,
    Disconnected,
    ApproximationBound,
    ExactBound,
    SmallPart,
    DsProtrusion,
    TwProtrusion,
    BoundedDegreeSlice,
    SeparatorSlice,
}

impl fmt::Display for Rule {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Rule::NegativeBudget => "negative-budget",
            Rule::Disconnected => "disconnected",
            Rule::ApproximationBound => "approximation-bound",
            Rule::ExactBound => "exact-bound",
            Rule::SmallPart => "small-part",
            Rule::DsProtrusion => "ds-protrusion",
            Rule::TwProtrusion => "tw-protrusion",
            Rule::BoundedDegreeSlice => "bounded-degree-slice",
            Rule::SeparatorSlice => "separator-slice",
        })
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct TraceRecord {
    pub round: usize,
    pub rule: Rule,
    pub location: String,
    /// Vertices removed by the step (net).
    pub removed: usize,
    pub constant: i64,
    pub n_before: usize,
    pub n_after: usize,
}

impl fmt::Display for TraceRecord {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "round={} rule={} at={} removed={} c={} n={}->{}",
            self.round, self.rule, self.location, self.removed, self.constant, self.n_before, self.n_after
        )
    }
}

#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct KernelStats {
    pub n_in: usize,
    pub m_in: usize,
    pub k_in: i64,
    pub rounds: usize,
    pub h_used: usize,
    pub xi: usize,
    /// Size of the last approximate solution.
    pub approx_size: usize,
    /// Number of slices in the last slice decomposition.
    pub alpha: usize,
    /// Boundary budget of the last slice decomposition.
    pub boundary_budget: usize,
    pub max_width: usize,
    pub irrelevant_removed: usize,
    pub replacements: usize,
    pub refusals: usize,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Kernel {
    pub problem: Problem,
    pub graph: Graph,
    pub k: i64,
    pub trace: Vec<TraceRecord>,
    /// Set when the instance was decided to be a no-instance; the kernel is
    /// then the empty graph with `k = -1`.
    pub no_reason: Option<String>,
    pub stats: KernelStats,
}

impl Kernel {
    pub fn is_no(&self) -> bool {
        self.no_reason.is_some()
    }

    pub fn trace_text(&self) -> String {
        let mut out = String::new();
        for r in &self.trace {
            writeln!(out, "{r}").unwrap();
        }
        if let Some(reason) = &self.no_reason {
            writeln!(out, "no-instance {reason}").unwrap();
        }
        out
    }

    /// `key=value` lines in a fixed order; `delta` is the kernel order per
    /// vertex of the last approximate solution.
    pub fn stats_text(&self) -> String {
        let s = &self.stats;
        let mut out = String::new();
        for (key, value) in [
            ("problem", self.problem.to_string()),
            ("n_in", s.n_in.to_string()),
            ("m_in", s.m_in.to_string()),
            ("k_in", s.k_in.to_string()),
            ("n_out", self.graph.n().to_string()),
            ("m_out", self.graph.m().to_string()),
            ("k_out", self.k.to_string()),
            ("verdict", if self.is_no() { "no" } else { "kernel" }.to_string()),
            ("rounds", s.rounds.to_string()),
            ("h_used", s.h_used.to_string()),
            ("xi", s.xi.to_string()),
            ("approx_size", s.approx_size.to_string()),
            ("alpha", s.alpha.to_string()),
            ("boundary_budget", s.boundary_budget.to_string()),
            ("delta", format!("{:.3}", self.graph.n() as f64 / s.approx_size.max(1) as f64)),
            ("max_width", s.max_width.to_string()),
            ("irrelevant_removed", s.irrelevant_removed.to_string()),
            ("replacements", s.replacements.to_string()),
            ("refusals", s.refusals.to_string()),
        ] {
            writeln!(out, "{key}={value}").unwrap();
        }
        out
    }
}

fn no_instance(problem: Problem, trace: Vec<TraceRecord>, stats: KernelStats, reason: String) -> Kernel {
    Kernel {
        problem,
        graph: Graph::from_edges(0, []).expect("empty graph"),
        k: -1,
        trace,
        no_reason: Some(reason),
        stats,
    }
}

/// Exact threshold when it is cheap enough to compute, `None` otherwise.
fn exact_threshold(g: &Graph, problem: Problem, limits: &Limits) -> Option<usize> {
    let small = match problem {
        Problem::Ds => g.n() <= limits.branch_n,
        Problem::Cds => g.n() <= limits.cds_n,
    };
    if !small {
        return None;
    }
    threshold(g, problem).ok()
}

/// Kernelizes `(g, k)` for the problem of `table`.
///
/// Every accepted step strictly shrinks the graph, so the driver performs at
/// most `n` rounds. The output is equivalent to the input: `(g, k)` is a
/// yes-instance exactly when the kernel is.
pub fn kernelize(g: &Graph, k: i64, table: &RepresentativeTable, cfg: &KernelConfig) -> Result<Kernel> {
    let problem = table.problem();
    let rc = &cfg.reduce;
    let mut stats =
        KernelStats { n_in: g.n(), m_in: g.m(), k_in: k, h_used: cfg.h, xi: table.xi(), ..Default::default() };
    let mut trace = Vec::new();
    let mut supplied = cfg.td.clone();
    if let Some(td) = &supplied {
        if td.host() != g {
            return Err(Error::invalid("decomposition belongs to a different graph"));
        }
        if !td.validate().is_decomposition() {
            return Err(Error::invalid("supplied tree decomposition is not valid"));
        }
    }
    if k < 0 {
        return Ok(no_instance(problem, trace, stats, "negative budget".into()));
    }
    if problem == Problem::Cds && !g.is_connected() {
        return Ok(no_instance(problem, trace, stats, "graph is disconnected".into()));
    }
    let mut cur = g.clone();
    let mut k = k;
    'round: loop {
        if cur.n() == 0 || k < 0 {
            break;
        }
        stats.rounds += 1;
        let round = stats.rounds;
        let whole = Piece::new(cur.clone(), Vec::new())?;
        let swept = replace_small_parts(&whole, table, rc)?;
        stats.refusals += swept.refusals;
        if swept.piece.n() < cur.n() {
            trace.push(TraceRecord {
                round,
                rule: Rule::SmallPart,
                location: format!("{} parts", swept.replacements),
                removed: cur.n() - swept.piece.n(),
                constant: swept.constant,
                n_before: cur.n(),
                n_after: swept.piece.n(),
            });
            stats.replacements += swept.replacements;
            supplied = None;
            cur = swept.piece.graph;
            k += swept.constant;
            continue 'round;
        }
        let td = supplied.take().unwrap_or_else(|| heuristic_decomposition(&cur, Heuristic::MinFill));
        let h = cfg.h.max(td.adhesion()).max(1);
        stats.h_used = stats.h_used.max(h);
        stats.max_width = stats.max_width.max(td.width());
        let approx = match problem {
            Problem::Ds => approx_colored_ds_with(&ColoredInstance::trivial(cur.clone()), &td, h, &rc.limits)?,
            Problem::Cds => approx_cds_with(&cur, &td, h, &rc.limits)?,
        };
        let d = approx.solution.clone();
        stats.approx_size = d.len();
        let budget = problem.eta_multiplier() as i64 * h as i64 * k;
        if d.len() as i64 > budget {
            if let Some(opt) = exact_threshold(&cur, problem, &rc.limits) {
                if opt as i64 > k {
                    let reason = format!("optimum {opt} exceeds k={k}");
                    trace.push(TraceRecord {
                        round,
                        rule: Rule::ExactBound,
                        location: "graph".into(),
                        removed: 0,
                        constant: 0,
                        n_before: cur.n(),
                        n_after: 0,
                    });
                    return Ok(no_instance(problem, trace, stats, reason));
                }
            } else if approx.factor_certified() {
                let reason = format!("approximate solution of size {} exceeds {budget}", d.len());
                trace.push(TraceRecord {
                    round,
                    rule: Rule::ApproximationBound,
                    location: "graph".into(),
                    removed: 0,
                    constant: 0,
                    n_before: cur.n(),
                    n_after: 0,
                });
                return Ok(no_instance(problem, trace, stats, reason));
            }
        }
        let analysis = analyze_slices(&cur, &td, &d, h, table.xi())?;
        stats.alpha = analysis.slices.alpha();
        stats.boundary_budget = analysis.slices.boundary_budget;
        let protrusions = analysis
            .ds_protrusions
            .iter()
            .map(|p| (Rule::DsProtrusion, p))
            .chain(analysis.tw_protrusions.iter().map(|p| (Rule::TwProtrusion, p)));
        for (rule, p) in protrusions {
            if p.boundary.len() > table.t() || p.vertices.len() > rc.max_part {
                continue;
            }
            match replace_protrusion(&cur, p, table, k) {
                Ok((next, k_next)) if next.n() < cur.n() => {
                    trace.push(TraceRecord {
                        round,
                        rule,
                        location: format!("part of {} with boundary {}", p.vertices.len(), p.boundary.len()),
                        removed: cur.n() - next.n(),
                        constant: k_next - k,
                        n_before: cur.n(),
                        n_after: next.n(),
                    });
                    stats.replacements += 1;
                    cur = next;
                    k = k_next;
                    continue 'round;
                }
                Ok(_) => {}
                Err(e) if e.is_refusal() => stats.refusals += 1,
                Err(e) => return Err(e),
            }
        }
        let sd = &analysis.slices;
        for i in 0..sd.alpha() {
            let r = &sd.slices[i];
            let b: Vec<Vertex> = sd.slice_dominator(i, &d).into_iter().collect();
            if r.len() <= b.len() {
                continue;
            }
            let piece = Piece::from_part(&cur, r, &b)?;
            let ty = td.node_type(sd.roots[i], h)?;
            let (rule, out) = match ty.tag {
                NodeTypeTag::LowHighDegree => {
                    (Rule::BoundedDegreeSlice, reduce_bounded_degree_piece(&piece, h + table.xi(), table, rc)?)
                }
                NodeTypeTag::MinorStructured => {
                    let apices: VertexSet =
                        r.iter().enumerate().filter(|(_, v)| ty.apex_set.contains(v)).map(|(j, _)| j).collect();
                    (Rule::SeparatorSlice, reduce_separator_recursive(&piece, &apices, table, rc)?)
                }
            };
            stats.refusals += out.refusals;
            if out.piece.n() >= piece.n() {
                continue;
            }
            let new_part = out.piece.to_boundaried(b.len())?;
            let next = replace(&cur, r, &b, &new_part)?.graph;
            stats.irrelevant_removed += out.irrelevant_removed;
            stats.replacements += out.replacements;
            if let Some(w) = out.width {
                stats.max_width = stats.max_width.max(w);
            }
            trace.push(TraceRecord {
                round,
                rule,
                location: format!("slice {i}"),
                removed: cur.n() - next.n(),
                constant: out.constant,
                n_before: cur.n(),
                n_after: next.n(),
            });
            cur = next;
            k += out.constant;
            continue 'round;
        }
        break;
    }
    if k < 0 {
        trace.push(TraceRecord {
            round: stats.rounds,
            rule: Rule::NegativeBudget,
            location: "graph".into(),
            removed: cur.n(),
            constant: 0,
            n_before: cur.n(),
            n_after: 0,
        });
        return Ok(no_instance(problem, trace, stats, format!("budget dropped to {k}")));
    }
    Ok(Kernel { problem, graph: cur, k, trace, no_reason: None, stats })
}
