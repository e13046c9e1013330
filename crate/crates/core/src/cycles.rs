//! Inverse cycles: the orbits of `x -> x^ρ`, and their statistics over catalogs.

use std::collections::BTreeMap;
use std::fmt::Write as _;

use serde::Serialize;

use crate::table::{LoopTable, Side};

/// Orbits of `J_ρ`, each listed `x, x^ρ, x^ρρ, ...` from its least element,
/// orbits ordered by least element.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct CycleDecomposition {
    pub orbits: Vec<Vec<usize>>,
    /// Orbit sizes, ascending.
    pub lengths: Vec<usize>,
}

impl CycleDecomposition {
    pub fn longest(&self) -> usize {
        self.lengths.last().copied().unwrap_or(0)
    }

    /// Length of the orbit containing `x`.
    pub fn period_of(&self, x: usize) -> usize {
        self.orbits
            .iter()
            .find(|o| o.contains(&x))
            .map_or(0, Vec::len)
    }

    pub fn to_text(&self) -> String {
        let mut out = String::new();
        for orbit in &self.orbits {
            let parts: Vec<String> = orbit.iter().map(|v| v.to_string()).collect();
            let _ = writeln!(out, "({})  length {}", parts.join(" "), orbit.len());
        }
        let lengths: Vec<String> = self.lengths.iter().map(|v| v.to_string()).collect();
        let _ = writeln!(out, "lengths: {}", lengths.join(" "));
        out
    }
}

pub fn rho_cycles(l: &LoopTable) -> CycleDecomposition {
    let orbits = l.j_map(Side::Rho).cycles();
    let mut lengths: Vec<usize> = orbits.iter().map(Vec::len).collect();
    lengths.sort_unstable();
    CycleDecomposition { orbits, lengths }
}

/// `count` cycles of length `length` in total across loops of order `order`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct CensusRow {
    pub order: usize,
    pub length: usize,
    pub count: u64,
    /// Number of loops having at least one cycle of this length.
    pub loops: u64,
}

#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize)]
pub struct CycleCensus {
    pub loops_scanned: u64,
    pub rows: Vec<CensusRow>,
}

impl CycleCensus {
    pub fn to_text(&self) -> String {
        let mut out = format!("loops scanned: {}\n", self.loops_scanned);
        let _ = writeln!(
            out,
            "{:>5}  {:>6}  {:>10}  {:>8}",
            "order", "length", "cycles", "loops"
        );
        for r in &self.rows {
            let _ = writeln!(
                out,
                "{:>5}  {:>6}  {:>10}  {:>8}",
                r.order, r.length, r.count, r.loops
            );
        }
        out
    }

    pub fn max_length(&self) -> usize {
        self.rows.iter().map(|r| r.length).max().unwrap_or(0)
    }
}

/// Histogram of cycle lengths, rows sorted by order then length.
pub fn cycle_census<'a>(loops: impl IntoIterator<Item = &'a LoopTable>) -> CycleCensus {
    let mut hist: BTreeMap<(usize, usize), (u64, u64)> = BTreeMap::new();
    let mut scanned = 0;
    for l in loops {
        scanned += 1;
        let d = rho_cycles(l);
        let mut per_len: BTreeMap<usize, u64> = BTreeMap::new();
        for len in d.lengths {
            *per_len.entry(len).or_default() += 1;
        }
        for (len, count) in per_len {
            let slot = hist.entry((l.order(), len)).or_default();
            slot.0 += count;
            slot.1 += 1;
        }
    }
    CycleCensus {
        loops_scanned: scanned,
        rows: hist
            .into_iter()
            .map(|((order, length), (count, loops))| CensusRow {
                order,
                length,
                count,
                loops,
            })
            .collect(),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::families::cyclic;

    #[test]
    fn z5_orbits() {
        let d = rho_cycles(&cyclic(5));
        assert_eq!(d.orbits, vec![vec![0], vec![1, 4], vec![2, 3]]);
        assert_eq!(d.lengths, vec![1, 2, 2]);
        assert_eq!(d.period_of(3), 2);
    }

    #[test]
    fn cyclic_census_has_short_cycles_only() {
        let loops: Vec<LoopTable> = (2..=8).map(cyclic).collect();
        let census = cycle_census(&loops);
        assert_eq!(census.loops_scanned, 7);
        assert!(census.max_length() <= 2);
        let z2 = census
            .rows
            .iter()
            .find(|r| r.order == 2 && r.length == 1)
            .unwrap();
        assert_eq!(z2.count, 2);
    }

    #[test]
    fn empty_census() {
        let census = cycle_census(std::iter::empty());
        assert!(census.rows.is_empty());
    }
}
