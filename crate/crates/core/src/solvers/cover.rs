//! Branch and bound for small set-cover instances: pick the fewest candidates
//! whose masks jointly cover a target mask of at most 128 elements.

use crate::error::{Error, Result};

pub(crate) type Mask = u128;

pub(crate) const MAX_TARGETS: usize = 128;

struct Search<'a> {
    cands: &'a [Mask],
    best: Option<Vec<usize>>,
    best_len: usize,
    nodes: u64,
    node_limit: u64,
}

fn lower_bound(uncovered: Mask, cands: &[Mask]) -> usize {
    if uncovered == 0 {
        return 0;
    }
    let max_gain = cands.iter().map(|c| (c & uncovered).count_ones() as usize).max().unwrap_or(0);
    if max_gain == 0 {
        return usize::MAX;
    }
    let by_gain = (uncovered.count_ones() as usize).div_ceil(max_gain);
    // Targets no single candidate can cover together each need their own pick.
    let mut packing = 0;
    let mut open = uncovered;
    while open != 0 {
        let bit = open & open.wrapping_neg();
        packing += 1;
        let mut blocked = bit;
        for c in cands {
            if c & bit != 0 {
                blocked |= c;
            }
        }
        open &= !blocked;
    }
    by_gain.max(packing)
}

impl Search<'_> {
    fn run(&mut self, uncovered: Mask, chosen: &mut Vec<usize>) -> Result<()> {
        self.nodes += 1;
        if self.nodes > self.node_limit {
            return Err(Error::Capacity {
                what: "branch-and-bound nodes",
                actual: self.nodes as usize,
                limit: self.node_limit as usize,
            });
        }
        if uncovered == 0 {
            if chosen.len() < self.best_len {
                self.best_len = chosen.len();
                self.best = Some(chosen.clone());
            }
            return Ok(());
        }
        let lb = lower_bound(uncovered, self.cands);
        if lb == usize::MAX || chosen.len() + lb >= self.best_len {
            return Ok(());
        }
        // Branch on the uncovered target with the fewest options.
        let mut pivot = 0;
        let mut fewest = usize::MAX;
        let mut open = uncovered;
        while open != 0 {
            let bit = open & open.wrapping_neg();
            open &= open - 1;
            let count = self.cands.iter().filter(|&&c| c & bit != 0).count();
            if count < fewest {
                fewest = count;
                pivot = bit;
            }
        }
        let mut options: Vec<usize> = (0..self.cands.len()).filter(|&i| self.cands[i] & pivot != 0).collect();
        options.sort_by_key(|&i| (std::cmp::Reverse((self.cands[i] & uncovered).count_ones()), i));
        for i in options {
            chosen.push(i);
            self.run(uncovered & !self.cands[i], chosen)?;
            chosen.pop();
        }
        Ok(())
    }
}

/// Minimum number of candidates covering `targets`, if at most `cap`.
/// Returns candidate indices in increasing order.
pub(crate) fn min_cover(targets: Mask, cands: &[Mask], cap: usize, node_limit: u64) -> Result<Option<Vec<usize>>> {
    let mut s = Search { cands, best: None, best_len: cap.saturating_add(1), nodes: 0, node_limit };
    if let Some(g) = greedy_cover(targets, cands) {
        if g.len() < s.best_len {
            s.best_len = g.len();
            s.best = Some(g);
        }
    }
    s.run(targets, &mut Vec::new())?;
    Ok(s.best.map(|mut b| {
        b.sort_unstable();
        b
    }))
}

/// Classical greedy: repeatedly take the candidate covering the most
/// uncovered targets (ties to the smallest index).
pub(crate) fn greedy_cover(targets: Mask, cands: &[Mask]) -> Option<Vec<usize>> {
    let mut uncovered = targets;
    let mut out = Vec::new();
    while uncovered != 0 {
        let (i, gain) = cands
            .iter()
            .enumerate()
            .map(|(i, c)| (i, (c & uncovered).count_ones()))
            .max_by_key(|&(i, g)| (g, std::cmp::Reverse(i)))?;
        if gain == 0 {
            return None;
        }
        uncovered &= !cands[i];
        out.push(i);
    }
    Some(out)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn covers_small_instances() {
        // targets 0..4, sets {0,1}, {1,2}, {2,3}, {3}
        let cands = [0b0011, 0b0110, 0b1100, 0b1000];
        assert_eq!(min_cover(0b1111, &cands, 4, 1000).unwrap(), Some(vec![0, 2]));
        assert_eq!(min_cover(0b1111, &cands, 1, 1000).unwrap(), None);
        assert_eq!(min_cover(0, &cands, 0, 1000).unwrap(), Some(vec![]));
        assert_eq!(min_cover(0b10000, &cands, 9, 1000).unwrap(), None);
        assert_eq!(greedy_cover(0b10000, &cands), None);
    }
}
