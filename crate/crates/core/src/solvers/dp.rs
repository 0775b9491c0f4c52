//! Dominating-set dynamic programming over a rooted tree decomposition.
//!
//! Each bag vertex carries one of three states: selected, dominated by a
//! selected vertex seen so far, or not yet dominated. Per-vertex modes allow
//! forcing or forbidding selection and dropping the domination requirement,
//! which is what boundary signatures and colored instances need.

use std::collections::HashMap;

use crate::error::{Error, Result};
use crate::graph::Vertex;
use crate::treedec::TreeDecomposition;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Choice {
    Forbidden,
    Optional,
    Forced,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct Mode {
    pub choice: Choice,
    pub must_dominate: bool,
}

impl Mode {
    pub const FREE: Mode = Mode { choice: Choice::Optional, must_dominate: true };
}

/// Largest bag the DP accepts.
pub const MAX_BAG: usize = 18;

const SEL: u8 = 0;
const DOM: u8 = 1;
const UND: u8 = 2;

type Key = u64;
type Table = HashMap<Key, usize>;

fn get(key: Key, i: usize) -> u8 {
    ((key >> (2 * i)) & 3) as u8
}

fn set(key: Key, i: usize, s: u8) -> Key {
    (key & !(3 << (2 * i))) | ((s as Key) << (2 * i))
}

fn relax(table: &mut Table, key: Key, cost: usize) {
    table.entry(key).and_modify(|c| *c = (*c).min(cost)).or_insert(cost);
}

/// Minimum number of selected vertices over all selections respecting
/// `modes` that dominate every vertex with `must_dominate`. `None` when no
/// such selection exists.
pub fn ds_dp_with_modes(td: &TreeDecomposition, modes: &[Mode]) -> Result<Option<usize>> {
    let g = td.host();
    if modes.len() != g.n() {
        return Err(Error::invalid("one mode per vertex required"));
    }
    if !td.validate().is_decomposition() {
        return Err(Error::invalid("not a valid tree decomposition"));
    }
    let widest = td.bags().iter().map(|b| b.len()).max().unwrap_or(0);
    if widest > MAX_BAG {
        return Err(Error::Capacity { what: "bag size for dynamic programming", actual: widest, limit: MAX_BAG });
    }
    let mut tables: Vec<Option<(Vec<Vertex>, Table)>> = vec![None; td.len()];
    for &t in td.preorder().iter().rev() {
        let bag: Vec<Vertex> = td.bag(t).iter().copied().collect();
        let mut table = base_table(g, &bag, modes);
        for &c in td.children(t) {
            let (cbag, ctable) = tables[c].take().expect("children first");
            let (shared, reduced) = forget(&cbag, ctable, &bag, modes);
            table = join(&bag, table, &shared, &reduced);
        }
        tables[t] = Some((bag, table));
    }
    let (bag, table) = tables[td.root()].take().expect("root table");
    let best = table
        .into_iter()
        .filter(|&(key, _)| (0..bag.len()).all(|i| get(key, i) != UND || !modes[bag[i]].must_dominate))
        .map(|(_, c)| c)
        .min();
    Ok(best)
}

fn base_table(g: &crate::graph::Graph, bag: &[Vertex], modes: &[Mode]) -> Table {
    let k = bag.len();
    let mut table = Table::new();
    'sel: for sel in 0u32..(1 << k) {
        for (i, &v) in bag.iter().enumerate() {
            let picked = sel >> i & 1 == 1;
            match modes[v].choice {
                Choice::Forbidden if picked => continue 'sel,
                Choice::Forced if !picked => continue 'sel,
                _ => {}
            }
        }
        let mut key: Key = 0;
        for (i, &v) in bag.iter().enumerate() {
            let s = if sel >> i & 1 == 1 {
                SEL
            } else if bag.iter().enumerate().any(|(j, &w)| sel >> j & 1 == 1 && g.has_edge(v, w)) {
                DOM
            } else {
                UND
            };
            key = set(key, i, s);
        }
        relax(&mut table, key, sel.count_ones() as usize);
    }
    table
}

/// Projects a child table onto the vertices it shares with the parent bag.
fn forget(cbag: &[Vertex], ctable: Table, bag: &[Vertex], modes: &[Mode]) -> (Vec<Vertex>, Table) {
    let shared: Vec<Vertex> = cbag.iter().copied().filter(|v| bag.contains(v)).collect();
    let mut out = Table::new();
    'entry: for (key, cost) in ctable {
        let mut nk: Key = 0;
        let mut j = 0;
        for (i, &v) in cbag.iter().enumerate() {
            let s = get(key, i);
            if bag.contains(&v) {
                nk = set(nk, j, s);
                j += 1;
            } else if s == UND && modes[v].must_dominate {
                continue 'entry;
            }
        }
        relax(&mut out, nk, cost);
    }
    (shared, out)
}

fn join(bag: &[Vertex], table: Table, shared: &[Vertex], reduced: &Table) -> Table {
    let pos: Vec<usize> =
        shared.iter().map(|v| bag.iter().position(|w| w == v).expect("shared vertex in bag")).collect();
    // Group child entries by the selection pattern on shared vertices.
    let mut by_sel: HashMap<u32, Vec<(u32, usize)>> = HashMap::new();
    for (&key, &cost) in reduced {
        let mut sel = 0u32;
        let mut dom = 0u32;
        for j in 0..shared.len() {
            match get(key, j) {
                SEL => sel |= 1 << j,
                DOM => dom |= 1 << j,
                _ => {}
            }
        }
        by_sel.entry(sel).or_default().push((dom, cost));
    }
    let mut out = Table::new();
    for (key, cost) in table {
        let mut sel = 0u32;
        for (j, &p) in pos.iter().enumerate() {
            if get(key, p) == SEL {
                sel |= 1 << j;
            }
        }
        let Some(options) = by_sel.get(&sel) else { continue };
        let overlap = sel.count_ones() as usize;
        for &(dom, ccost) in options {
            let mut nk = key;
            for (j, &p) in pos.iter().enumerate() {
                if dom >> j & 1 == 1 {
                    nk = set(nk, p, DOM);
                }
            }
            relax(&mut out, nk, cost + ccost - overlap);
        }
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graph::Graph;
    use crate::treedec::{heuristic_decomposition, Heuristic};

    #[test]
    fn cycle_and_modes() {
        let c6 = Graph::from_edges(6, (0..6).map(|i| (i, (i + 1) % 6))).unwrap();
        let td = heuristic_decomposition(&c6, Heuristic::MinFill);
        assert_eq!(ds_dp_with_modes(&td, &[Mode::FREE; 6]).unwrap(), Some(2));
        let mut modes = [Mode::FREE; 6];
        modes[0].choice = Choice::Forced;
        modes[1].choice = Choice::Forced;
        assert_eq!(ds_dp_with_modes(&td, &modes).unwrap(), Some(3));
        let none = [Mode { choice: Choice::Forbidden, must_dominate: true }; 6];
        assert_eq!(ds_dp_with_modes(&td, &none).unwrap(), None);
        assert!(ds_dp_with_modes(&td, &[Mode::FREE; 5]).is_err());
    }
}
