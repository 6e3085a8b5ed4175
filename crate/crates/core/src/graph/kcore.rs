//! Core decomposition on the undirected, unweighted view of the retweet graph.

use super::{Group, GroupMap, RetweetGraph};
use std::io::Write;

/// Core number per node index.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CoreAssignment {
    cores: Vec<u32>,
}

impl CoreAssignment {
    pub fn get(&self, node: u32) -> u32 {
        self.cores[node as usize]
    }

    pub fn as_slice(&self) -> &[u32] {
        &self.cores
    }

    pub fn max_core(&self) -> u32 {
        self.cores.iter().copied().max().unwrap_or(0)
    }

    /// Nodes of the k-core.
    pub fn members(&self, k: u32) -> impl Iterator<Item = u32> + '_ {
        self.cores
            .iter()
            .enumerate()
            .filter(move |(_, c)| **c >= k)
            .map(|(i, _)| i as u32)
    }
}

/// Bucket-based peeling (Batagelj–Zaversnik), linear in nodes plus edges.
pub fn core_numbers(graph: &RetweetGraph) -> CoreAssignment {
    let adj = graph.undirected();
    let n = adj.node_count();
    if n == 0 {
        return CoreAssignment { cores: Vec::new() };
    }
    let mut deg: Vec<usize> = (0..n as u32).map(|v| adj.degree(v)).collect();
    let max_deg = deg.iter().copied().max().unwrap_or(0);

    // bin[d] = start of the degree-d block in `vert`
    let mut bin = vec![0usize; max_deg + 1];
    for &d in &deg {
        bin[d] += 1;
    }
    let mut start = 0;
    for b in bin.iter_mut() {
        let count = *b;
        *b = start;
        start += count;
    }
    let mut vert = vec![0u32; n];
    let mut pos = vec![0usize; n];
    for v in 0..n {
        pos[v] = bin[deg[v]];
        vert[pos[v]] = v as u32;
        bin[deg[v]] += 1;
    }
    for d in (1..=max_deg).rev() {
        bin[d] = bin[d - 1];
    }
    bin[0] = 0;

    for i in 0..n {
        let v = vert[i] as usize;
        for &u in adj.neighbors(v as u32) {
            let u = u as usize;
            if deg[u] > deg[v] {
                let du = deg[u];
                let pu = pos[u];
                let pw = bin[du];
                let w = vert[pw] as usize;
                if u != w {
                    vert.swap(pu, pw);
                    pos[u] = pw;
                    pos[w] = pu;
                }
                bin[du] += 1;
                deg[u] -= 1;
            }
        }
    }
    CoreAssignment {
        cores: deg.into_iter().map(|d| d as u32).collect(),
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct CoreSeriesRow {
    pub k: u32,
    pub members: u64,
    /// Member counts in [`Group::PARTISAN`] order.
    pub counts: [u64; 4],
    pub residual: u64,
}

impl CoreSeriesRow {
    /// Group share of k-core members, `None` when the k-core is empty.
    pub fn fraction(&self, group: Group) -> Option<f64> {
        if self.members == 0 {
            return None;
        }
        let count = match group.partisan_index() {
            Some(i) => self.counts[i],
            None => self.residual,
        };
        Some(count as f64 / self.members as f64)
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct CoreSeries {
    pub rows: Vec<CoreSeriesRow>,
}

impl CoreSeries {
    pub fn write_csv<W: Write>(&self, mut w: W) -> std::io::Result<()> {
        write!(w, "k,members")?;
        for g in Group::ALL {
            write!(w, ",{g}")?;
        }
        writeln!(w)?;
        for row in &self.rows {
            write!(w, "{},{}", row.k, row.members)?;
            for g in Group::ALL {
                write!(w, ",{}", crate::report::fmt_opt(row.fraction(g)))?;
            }
            writeln!(w)?;
        }
        Ok(())
    }
}

/// Group composition of every k-core for `k` in `0..=k_max`. Residual members count
/// toward the k-core size but are reported in their own column.
pub fn core_series(
    graph: &RetweetGraph,
    cores: &CoreAssignment,
    groups: &GroupMap,
    k_max: u32,
) -> CoreSeries {
    // per-core-number tallies, then suffix sums over k
    let top = cores.max_core().max(k_max) as usize;
    let mut by_core = vec![([0u64; 4], 0u64); top + 1];
    for (node, &c) in cores.as_slice().iter().enumerate() {
        let slot = &mut by_core[c as usize];
        match groups.get(graph.node_id(node as u32)).partisan_index() {
            Some(i) => slot.0[i] += 1,
            None => slot.1 += 1,
        }
    }
    let mut rows = Vec::with_capacity(k_max as usize + 1);
    let mut acc = ([0u64; 4], 0u64);
    let mut suffix = vec![acc; top + 1];
    for c in (0..=top).rev() {
        for i in 0..4 {
            acc.0[i] += by_core[c].0[i];
        }
        acc.1 += by_core[c].1;
        suffix[c] = acc;
    }
    for k in 0..=k_max {
        let (counts, residual) = suffix[k as usize];
        rows.push(CoreSeriesRow {
            k,
            members: counts.iter().sum::<u64>() + residual,
            counts,
            residual,
        });
    }
    CoreSeries { rows }
}

#[cfg(test)]
pub(crate) mod oracle {
    use super::super::RetweetGraph;
    use std::collections::BTreeSet;

    /// Members of the k-core by repeated deletion of nodes with fewer than k live
    /// neighbors.
    pub fn kcore_by_deletion(graph: &RetweetGraph, k: u32) -> BTreeSet<u32> {
        let n = graph.node_count();
        let mut nbrs: Vec<BTreeSet<u32>> = vec![BTreeSet::new(); n];
        for e in graph.edges() {
            nbrs[e.source as usize].insert(e.target);
            nbrs[e.target as usize].insert(e.source);
        }
        let mut alive: BTreeSet<u32> = (0..n as u32).collect();
        loop {
            let doomed: Vec<u32> = alive
                .iter()
                .copied()
                .filter(|v| nbrs[*v as usize].iter().filter(|u| alive.contains(u)).count() < k as usize)
                .collect();
            if doomed.is_empty() {
                return alive;
            }
            for v in doomed {
                alive.remove(&v);
            }
        }
    }
}
