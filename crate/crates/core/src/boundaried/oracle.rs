//! Brute-force equivalence of boundaried graphs against every small filler.

use super::table::{enumerate_universe, glue_threshold};
use super::BoundariedGraph;
use crate::error::{Error, Result};
use crate::Problem;

/// All boundaried graphs with capacity `t` and at most `limit` vertices,
/// one per label-preserving isomorphism class.
pub fn enumerate_fillers(t: usize, limit: usize) -> Result<Vec<BoundariedGraph>> {
    enumerate_universe(t, limit)
}

/// `Thr(g ⊕ F)` for every filler `F`, `None` standing for `+∞`.
pub fn oracle_row(g: &BoundariedGraph, fillers: &[BoundariedGraph], problem: Problem) -> Result<Vec<Option<usize>>> {
    fillers.iter().map(|f| glue_threshold(g, f, problem)).collect()
}

/// The offset `c` with `Thr(g2 ⊕ F) = Thr(g1 ⊕ F) + c` for every filler of
/// at most `filler_limit` vertices, or `None` if the rows are not
/// translates. Rows that are infinite everywhere compare equal with `c = 0`.
pub fn definitional_equivalence_oracle(
    g1: &BoundariedGraph,
    g2: &BoundariedGraph,
    filler_limit: usize,
    problem: Problem,
) -> Result<Option<i64>> {
    let fillers = fillers_for(g1, g2, filler_limit)?;
    let r1 = oracle_row(&g1.with_capacity(g1.t())?, &fillers, problem)?;
    let r2 = oracle_row(g2, &fillers, problem)?;
    Ok(row_offset(&r1, &r2))
}

/// `c` with `r2 = r1 + c` entrywise, matching infinities.
pub fn row_offset(r1: &[Option<usize>], r2: &[Option<usize>]) -> Option<i64> {
    let mut c = None;
    for (a, b) in r1.iter().zip(r2) {
        match (a, b) {
            (Some(a), Some(b)) => {
                let d = *b as i64 - *a as i64;
                if c.is_some_and(|x| x != d) {
                    return None;
                }
                c = Some(d);
            }
            (None, None) => {}
            _ => return None,
        }
    }
    Some(c.unwrap_or(0))
}

/// A filler `F` and parameter `k` with `(g1 ⊕ F, k) ∈ Π` differing from
/// `(g2 ⊕ F, k + c) ∈ Π`, or `None` when `c` is consistent with every
/// filler up to `filler_limit` vertices.
pub fn distinguishing_filler(
    g1: &BoundariedGraph,
    g2: &BoundariedGraph,
    c: i64,
    filler_limit: usize,
    problem: Problem,
) -> Result<Option<(BoundariedGraph, i64)>> {
    for f in fillers_for(g1, g2, filler_limit)? {
        let a = glue_threshold(g1, &f, problem)?.map(|x| x as i64);
        let b = glue_threshold(g2, &f, problem)?.map(|x| x as i64);
        let k = match (a, b) {
            (Some(a), Some(b)) if b - c > a => Some(a),
            (Some(a), Some(b)) if b - c < a => Some(b - c),
            (Some(a), None) => Some(a),
            (None, Some(b)) => Some(b - c),
            _ => None,
        };
        if let Some(k) = k {
            return Ok(Some((f, k)));
        }
    }
    Ok(None)
}

fn fillers_for(g1: &BoundariedGraph, g2: &BoundariedGraph, limit: usize) -> Result<Vec<BoundariedGraph>> {
    if g1.t() != g2.t() {
        return Err(Error::invalid("boundaried graphs have different capacities"));
    }
    enumerate_fillers(g1.t(), limit)
}
