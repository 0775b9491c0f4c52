//! Exhaustive enumeration of small boundaried graphs, representative
//! tables and the translate-row replacement procedure.

use std::collections::HashMap;
use std::fmt::Write as _;

use super::signature::{signature, Signature, State};
use super::{glue, BoundariedGraph, Label};
use crate::error::{Error, Result};
use crate::graph::{Graph, Vertex};
use crate::solvers::{connected_domination_number, domination_number};
use crate::Problem;

/// Largest boundary capacity accepted by the enumerator.
pub const MAX_TABLE_T: usize = 2;
/// Largest vertex count accepted by the enumerator.
pub const MAX_TABLE_SIZE: usize = 6;

const FORMAT_HEADER: &str = "domkernel-representatives 1";

/// `Thr(a ⊕ b)`; `None` when the glued graph is a no-instance for every
/// parameter (a disconnected CDS instance).
pub fn glue_threshold(a: &BoundariedGraph, b: &BoundariedGraph, problem: Problem) -> Result<Option<usize>> {
    let g = glue(a, b)?;
    match problem {
        Problem::Ds => domination_number(&g).map(Some),
        Problem::Cds if g.is_connected() => connected_domination_number(&g).map(Some),
        Problem::Cds => Ok(None),
    }
}

fn pairs(n: usize) -> Vec<(usize, usize)> {
    (0..n).flat_map(|i| (i + 1..n).map(move |j| (i, j))).collect()
}

fn permutations(items: &[usize]) -> Vec<Vec<usize>> {
    if items.is_empty() {
        return vec![Vec::new()];
    }
    let mut out = Vec::new();
    for (i, &x) in items.iter().enumerate() {
        let mut rest = items.to_vec();
        rest.remove(i);
        for mut p in permutations(&rest) {
            p.insert(0, x);
            out.push(p);
        }
    }
    out
}

fn code_of(n: usize, has: impl Fn(usize, usize) -> bool) -> u64 {
    pairs(n).iter().enumerate().fold(0u64, |c, (bit, &(i, j))| if has(i, j) { c | 1 << bit } else { c })
}

/// Canonical adjacency code of a boundaried graph whose labeled vertices
/// come first, in label order: the least code over all relabelings of the
/// unlabeled vertices.
fn canonical_code(g: &Graph, fixed: usize, perms: &[Vec<usize>]) -> u64 {
    let n = g.n();
    perms
        .iter()
        .map(|p| {
            // position -> original vertex
            let at = |i: usize| if i < fixed { i } else { p[i - fixed] };
            code_of(n, |i, j| g.has_edge(at(i), at(j)))
        })
        .min()
        .unwrap_or(0)
}

fn label_subsets(t: usize) -> Vec<Vec<Label>> {
    (0u32..1 << t).map(|m| (1..=t).filter(|&l| m >> (l - 1) & 1 == 1).collect()).collect()
}

/// Every `t`-boundaried graph with at most `size_limit` vertices, one per
/// label-preserving isomorphism class. Labeled vertices are numbered first,
/// in label order; output is ordered by (order, label set, code).
pub fn enumerate_universe(t: usize, size_limit: usize) -> Result<Vec<BoundariedGraph>> {
    if t > MAX_TABLE_T {
        return Err(Error::Capacity { what: "table boundary size", actual: t, limit: MAX_TABLE_T });
    }
    if size_limit > MAX_TABLE_SIZE {
        return Err(Error::Capacity { what: "table graph order", actual: size_limit, limit: MAX_TABLE_SIZE });
    }
    let mut subsets = label_subsets(t);
    subsets.sort_by_key(|s| (s.len(), s.clone()));
    let mut out = Vec::new();
    for n in 0..=size_limit {
        let ps = pairs(n);
        for labels in subsets.iter().filter(|s| s.len() <= n) {
            let fixed = labels.len();
            let perms = permutations(&(fixed..n).collect::<Vec<_>>());
            for code in 0u64..1 << ps.len() {
                let edges = ps.iter().enumerate().filter(|(bit, _)| code >> bit & 1 == 1).map(|(_, &e)| e);
                let g = Graph::from_edges(n, edges)?;
                if canonical_code(&g, fixed, &perms) != code {
                    continue;
                }
                let labeling: Vec<(Label, Vertex)> = labels.iter().enumerate().map(|(i, &l)| (l, i)).collect();
                out.push(BoundariedGraph::new(g, t, &labeling)?);
            }
        }
    }
    Ok(out)
}

/// One representative per signature class of the enumerated universe, and
/// the thresholds of all pairwise gluings.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct RepresentativeTable {
    problem: Problem,
    t: usize,
    size_limit: usize,
    reps: Vec<BoundariedGraph>,
    /// Normalized signatures of the representatives.
    signatures: Vec<Signature>,
    /// Least signature entry of each representative.
    base: Vec<usize>,
    thr: Vec<Vec<Option<usize>>>,
    index: HashMap<Signature, usize>,
}

pub fn enumerate_representatives(t: usize, size_limit: usize, problem: Problem) -> Result<RepresentativeTable> {
    let universe = enumerate_universe(t, size_limit)?;
    let mut best: HashMap<Signature, (usize, usize)> = HashMap::new();
    let mut order: Vec<Signature> = Vec::new();
    for (i, g) in universe.iter().enumerate() {
        let (norm, base) = signature(g, problem)?.normalized();
        match best.get_mut(&norm) {
            Some(slot) => {
                let cur = &universe[slot.0];
                // Universe order already breaks (order, code) ties.
                if (base, g.n()) < (slot.1, cur.n()) {
                    *slot = (i, base);
                }
            }
            None => {
                best.insert(norm.clone(), (i, base));
                order.push(norm);
            }
        }
    }
    let mut classes: Vec<(usize, usize, Signature)> = order
        .into_iter()
        .map(|s| {
            let (i, b) = best[&s];
            (i, b, s)
        })
        .collect();
    classes.sort_by_key(|c| c.0);
    let reps: Vec<BoundariedGraph> = classes.iter().map(|c| universe[c.0].clone()).collect();
    let base = classes.iter().map(|c| c.1).collect();
    let signatures: Vec<Signature> = classes.into_iter().map(|c| c.2).collect();
    let thr = thr_matrix(&reps, problem)?;
    Ok(RepresentativeTable::assemble(problem, t, size_limit, reps, signatures, base, thr))
}

fn thr_matrix(reps: &[BoundariedGraph], problem: Problem) -> Result<Vec<Vec<Option<usize>>>> {
    reps.iter().map(|a| reps.iter().map(|b| glue_threshold(a, b, problem)).collect()).collect()
}

impl RepresentativeTable {
    fn assemble(
        problem: Problem,
        t: usize,
        size_limit: usize,
        reps: Vec<BoundariedGraph>,
        signatures: Vec<Signature>,
        base: Vec<usize>,
        thr: Vec<Vec<Option<usize>>>,
    ) -> Self {
        let index = signatures.iter().cloned().enumerate().map(|(i, s)| (s, i)).collect();
        RepresentativeTable { problem, t, size_limit, reps, signatures, base, thr, index }
    }

    pub fn problem(&self) -> Problem {
        self.problem
    }

    pub fn t(&self) -> usize {
        self.t
    }

    pub fn size_limit(&self) -> usize {
        self.size_limit
    }

    pub fn len(&self) -> usize {
        self.reps.len()
    }

    pub fn is_empty(&self) -> bool {
        self.reps.is_empty()
    }

    pub fn reps(&self) -> &[BoundariedGraph] {
        &self.reps
    }

    pub fn rep(&self, i: usize) -> &BoundariedGraph {
        &self.reps[i]
    }

    pub fn signature(&self, i: usize) -> &Signature {
        &self.signatures[i]
    }

    pub fn base(&self, i: usize) -> usize {
        self.base[i]
    }

    pub fn thr(&self, i: usize, j: usize) -> Option<usize> {
        self.thr[i][j]
    }

    /// `ξ_t`: one more than the largest representative.
    pub fn xi(&self) -> usize {
        self.reps.iter().map(|r| r.n()).max().unwrap_or(0) + 1
    }

    /// Class of a normalized signature.
    pub fn lookup(&self, normalized: &Signature) -> Option<usize> {
        self.index.get(normalized).copied()
    }

    /// Largest `Thr(g ⊕ Y_j)` over the representatives.
    pub fn kappa(&self, g: &BoundariedGraph) -> Result<Option<usize>> {
        let g = g.with_capacity(self.t)?;
        let mut best = None;
        for r in &self.reps {
            if let Some(v) = glue_threshold(&g, r, self.problem)? {
                best = Some(best.map_or(v, |b: usize| b.max(v)));
            }
        }
        Ok(best)
    }

    pub fn to_text(&self) -> String {
        let mut out = String::new();
        writeln!(out, "{FORMAT_HEADER}").unwrap();
        writeln!(out, "problem {}", self.problem).unwrap();
        writeln!(out, "t {}", self.t).unwrap();
        writeln!(out, "size_limit {}", self.size_limit).unwrap();
        writeln!(out, "classes {}", self.reps.len()).unwrap();
        for (i, r) in self.reps.iter().enumerate() {
            let labels: Vec<String> = r.labeling().iter().map(|(l, v)| format!("{l}:{v}")).collect();
            let edges: Vec<String> = r.graph().edges().map(|(u, v)| format!("{u}-{v}")).collect();
            writeln!(out, "rep {i} {} {} {}", r.n(), dash_if_empty(&labels), dash_if_empty(&edges)).unwrap();
            let entries: Vec<String> = self.signatures[i].table.iter().map(|(s, c)| format!("{s}={c}")).collect();
            writeln!(out, "sig {i} {} {}", self.base[i], dash_if_empty(&entries)).unwrap();
            let row: Vec<String> = self.thr[i].iter().map(|x| x.map_or("inf".to_string(), |v| v.to_string())).collect();
            writeln!(out, "thr {i} {}", row.join(" ")).unwrap();
        }
        out
    }

    /// Parses [`RepresentativeTable::to_text`] output and re-derives every
    /// signature to reject stale or corrupted tables.
    pub fn from_text(text: &str) -> Result<Self> {
        let mut lines = text.lines().enumerate().filter(|(_, l)| !l.trim().is_empty());
        let mut next = |what: &str| -> Result<(usize, Vec<String>)> {
            let (i, l) = lines.next().ok_or_else(|| perr(0, format!("missing {what}")))?;
            Ok((i + 1, l.split_whitespace().map(str::to_string).collect()))
        };
        let (ln, head) = next("header")?;
        if head.join(" ") != FORMAT_HEADER {
            return Err(perr(ln, "unknown table format"));
        }
        let problem: Problem = field(&mut next, "problem")?.parse()?;
        let t = num(&field(&mut next, "t")?, 0)?;
        let size_limit = num(&field(&mut next, "size_limit")?, 0)?;
        let count = num(&field(&mut next, "classes")?, 0)?;
        let mut reps = Vec::with_capacity(count);
        let mut signatures = Vec::with_capacity(count);
        let mut base = Vec::with_capacity(count);
        let mut thr = Vec::with_capacity(count);
        for i in 0..count {
            let (ln, rep) = next("rep line")?;
            if rep.len() != 5 || rep[0] != "rep" || num(&rep[1], ln)? != i {
                return Err(perr(ln, "expected `rep <i> <n> <labels> <edges>`"));
            }
            let n = num(&rep[2], ln)?;
            let labeling = split_list(&rep[3])
                .map(|p| {
                    let (l, v) = p.split_once(':').ok_or_else(|| perr(ln, "bad label"))?;
                    Ok((num(l, ln)?, num(v, ln)?))
                })
                .collect::<Result<Vec<_>>>()?;
            let edges = split_list(&rep[4])
                .map(|p| {
                    let (u, v) = p.split_once('-').ok_or_else(|| perr(ln, "bad edge"))?;
                    Ok((num(u, ln)?, num(v, ln)?))
                })
                .collect::<Result<Vec<_>>>()?;
            let g = BoundariedGraph::new(Graph::from_edges(n, edges)?, t, &labeling)?;
            let (ln, sig) = next("sig line")?;
            if sig.len() != 4 || sig[0] != "sig" || num(&sig[1], ln)? != i {
                return Err(perr(ln, "expected `sig <i> <base> <entries>`"));
            }
            let b = num(&sig[2], ln)?;
            let table = split_list(&sig[3])
                .map(|e| {
                    let (s, c) = e.split_once('=').ok_or_else(|| perr(ln, "bad entry"))?;
                    Ok((s.parse::<State>()?, num(c, ln)?))
                })
                .collect::<Result<_>>()?;
            let stated = Signature { problem, labels: g.used_labels(), table };
            let (derived, derived_base) = signature(&g, problem)?.normalized();
            if derived != stated || derived_base != b {
                return Err(perr(ln, format!("signature of representative {i} does not match its graph")));
            }
            let (ln, row) = next("thr line")?;
            if row.len() != count + 2 || row[0] != "thr" || num(&row[1], ln)? != i {
                return Err(perr(ln, "expected `thr <i>` followed by one entry per class"));
            }
            thr.push(
                row[2..]
                    .iter()
                    .map(|x| if x == "inf" { Ok(None) } else { num(x, ln).map(Some) })
                    .collect::<Result<Vec<_>>>()?,
            );
            reps.push(g);
            signatures.push(stated);
            base.push(b);
        }
        if let Some((i, _)) = lines.next() {
            return Err(perr(i + 1, "trailing content"));
        }
        Ok(Self::assemble(problem, t, size_limit, reps, signatures, base, thr))
    }
}

fn dash_if_empty(items: &[String]) -> String {
    if items.is_empty() {
        "-".to_string()
    } else {
        items.join(",")
    }
}

fn split_list(s: &str) -> impl Iterator<Item = &str> {
    s.split(',').filter(|p| !p.is_empty() && *p != "-")
}

fn perr(line: usize, msg: impl Into<String>) -> Error {
    Error::Parse { line, msg: msg.into() }
}

fn num(s: &str, line: usize) -> Result<usize> {
    s.parse().map_err(|_| perr(line, format!("expected a number, got `{s}`")))
}

fn field(next: &mut impl FnMut(&str) -> Result<(usize, Vec<String>)>, key: &str) -> Result<String> {
    let (ln, toks) = next(key)?;
    if toks.len() != 2 || toks[0] != key {
        return Err(perr(ln, format!("expected `{key} <value>`")));
    }
    Ok(toks[1].clone())
}

/// Replaces `g` by the representative of its class.
///
/// Computes the row `Thr(g ⊕ Y_j)` over all representatives, finds the
/// representative whose row is a translate by `n₀`, and returns it with the
/// parameter change `-n₀`: `(g ⊕ F, k) ∈ Π ⟺ (Y ⊕ F, k - n₀) ∈ Π`.
pub fn reduce_via_representatives(g: &BoundariedGraph, table: &RepresentativeTable) -> Result<(BoundariedGraph, i64)> {
    if g.t() > table.t {
        return Err(Error::Refused(format!("boundary capacity {} exceeds table capacity {}", g.t(), table.t)));
    }
    let g = g.with_capacity(table.t)?;
    let (norm, g_base) = signature(&g, table.problem)?.normalized();
    let Some(l) = table.lookup(&norm) else {
        return Err(Error::Incomplete("signature class not in the representative table".into()));
    };
    let row: Vec<Option<usize>> =
        table.reps.iter().map(|r| glue_threshold(&g, r, table.problem)).collect::<Result<_>>()?;
    let translates: Vec<(usize, i64)> =
        (0..table.len()).filter_map(|i| translate_offset(&row, &table.thr[i]).map(|n0| (i, n0))).collect();
    let Some(&(_, n0)) = translates.iter().find(|(i, _)| *i == l) else {
        return Err(Error::invariant("representative with equal signature is not a translate row"));
    };
    let n0 = if row.iter().all(Option::is_none) { g_base as i64 - table.base[l] as i64 } else { n0 };
    if n0 != g_base as i64 - table.base[l] as i64 {
        return Err(Error::invariant("translate offset disagrees with signature offset"));
    }
    if n0 < 0 {
        return Err(Error::Refused("replacement would increase the parameter".into()));
    }
    let out = table.reps[l].clone();
    for (j, r) in table.reps.iter().enumerate() {
        let again = glue_threshold(&out, r, table.problem)?;
        if again.map(|v| v as i64 + n0) != row[j].map(|v| v as i64) {
            return Err(Error::invariant(format!("translate identity fails against representative {j}")));
        }
    }
    Ok((out, -n0))
}

/// `n₀` with `row = base + n₀` entrywise (matching infinities), if any.
fn translate_offset(row: &[Option<usize>], base: &[Option<usize>]) -> Option<i64> {
    let mut n0 = None;
    for (a, b) in row.iter().zip(base) {
        match (a, b) {
            (Some(a), Some(b)) => {
                let d = *a as i64 - *b as i64;
                if n0.is_some_and(|x| x != d) {
                    return None;
                }
                n0 = Some(d);
            }
            (None, None) => {}
            _ => return None,
        }
    }
    Some(n0.unwrap_or(0))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::boundaried::signatures_equivalent;

    #[test]
    fn universe_counts() {
        // Unlabeled graphs on up to 3 vertices: 1 + 1 + 2 + 4.
        assert_eq!(enumerate_universe(0, 3).unwrap().len(), 8);
        // One label, up to 2 vertices: empty, K1, K1 labeled, 2 unlabeled,
        // 2 with a label (edge or not).
        assert_eq!(enumerate_universe(1, 2).unwrap().len(), 7);
        assert!(enumerate_universe(3, 2).is_err());
        assert!(enumerate_universe(1, 9).is_err());
    }

    #[test]
    fn t_zero_has_one_class() {
        let table = enumerate_representatives(0, 3, Problem::Ds).unwrap();
        assert_eq!(table.len(), 1);
        assert_eq!(table.rep(0).n(), 0);
        assert_eq!(table.xi(), 1);
    }

    #[test]
    fn t_one_totality_and_isolated_class() {
        let table = enumerate_representatives(1, 3, Problem::Ds).unwrap();
        for g in enumerate_universe(1, 3).unwrap() {
            let sig = signature(&g, Problem::Ds).unwrap();
            let hits = (0..table.len()).filter(|&i| signatures_equivalent(table.signature(i), &sig).is_some()).count();
            assert_eq!(hits, 1);
        }
        let iso = BoundariedGraph::new(Graph::empty(1), 1, &[(1, 0)]).unwrap();
        let (norm, _) = signature(&iso, Problem::Ds).unwrap().normalized();
        let class = table.lookup(&norm).unwrap();
        assert_eq!(table.rep(class), &iso);
    }

    #[test]
    fn text_round_trip_and_corruption() {
        let table = enumerate_representatives(1, 3, Problem::Ds).unwrap();
        let text = table.to_text();
        let back = RepresentativeTable::from_text(&text).unwrap();
        assert_eq!(back, table);
        assert_eq!(back.to_text(), text);
        let corrupted = text.replacen("sig 1 ", "sig 1 7", 1);
        assert!(RepresentativeTable::from_text(&corrupted).is_err());
        assert!(RepresentativeTable::from_text("nonsense").is_err());
    }

    #[test]
    fn reduce_examples() {
        let table = enumerate_representatives(1, 4, Problem::Ds).unwrap();
        for i in 0..table.len() {
            let (out, c) = reduce_via_representatives(table.rep(i), &table).unwrap();
            assert_eq!(&out, table.rep(i));
            assert_eq!(c, 0);
        }
        // A representative plus a disjoint P2 widget needing one more vertex.
        let rep = table.rep(table.len() - 1).clone();
        let n = rep.n();
        let mut edges: Vec<_> = rep.graph().edges().collect();
        edges.push((n, n + 1));
        let labeling: Vec<_> = rep.labeling().iter().map(|(&l, &v)| (l, v)).collect();
        let bigger = BoundariedGraph::new(Graph::from_edges(n + 2, edges).unwrap(), 1, &labeling).unwrap();
        let (out, c) = reduce_via_representatives(&bigger, &table).unwrap();
        assert_eq!(out, rep);
        assert_eq!(c, -1);
        // A pendant path of length 7 lies outside the enumerated sizes but
        // its class is covered.
        let long =
            BoundariedGraph::new(Graph::from_edges(8, (0..7).map(|i| (i, i + 1))).unwrap(), 1, &[(1, 0)]).unwrap();
        let (out, c) = reduce_via_representatives(&long, &table).unwrap();
        assert!(out.n() < 8 && c < 0);
    }

    #[test]
    fn reduce_reports_uncovered_classes() {
        let table = enumerate_representatives(2, 2, Problem::Ds).unwrap();
        // Labels on both ends of a P6 yield a class unseen at size 2.
        let p6 = BoundariedGraph::new(Graph::from_edges(6, (0..5).map(|i| (i, i + 1))).unwrap(), 2, &[(1, 0), (2, 5)])
            .unwrap();
        assert!(matches!(reduce_via_representatives(&p6, &table), Err(Error::Incomplete(_))));
    }
}
