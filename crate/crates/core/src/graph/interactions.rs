use super::{Group, GroupMap, RetweetGraph};
use crate::report::fmt_opt;
use std::io::Write;

/// Retweet volume between partisan groups, `counts[source][target]` in
/// [`Group::PARTISAN`] order. Edges touching a residual account are tallied separately.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct InteractionMatrix {
    pub counts: [[u64; 4]; 4],
    pub residual_weight: u64,
}

impl InteractionMatrix {
    pub fn total(&self) -> u64 {
        self.counts.iter().flatten().sum()
    }

    pub fn count(&self, source: Group, target: Group) -> u64 {
        match (source.partisan_index(), target.partisan_index()) {
            (Some(s), Some(t)) => self.counts[s][t],
            _ => 0,
        }
    }

    /// Every cell over the grand total; `None` when there are no partisan interactions.
    pub fn overall(&self) -> Option<[[f64; 4]; 4]> {
        let total = self.total();
        (total > 0).then(|| self.counts.map(|row| row.map(|c| c as f64 / total as f64)))
    }

    /// Each row over its own sum; rows with no outgoing interactions are `None`.
    pub fn row_normalized(&self) -> [Option<[f64; 4]>; 4] {
        self.counts.map(|row| {
            let sum: u64 = row.iter().sum();
            (sum > 0).then(|| row.map(|c| c as f64 / sum as f64))
        })
    }

    pub fn write_counts_csv<W: Write>(&self, w: W) -> std::io::Result<()> {
        let rows = self.counts.map(|row| row.map(|c| c.to_string()));
        write_table(w, &rows)
    }

    pub fn write_overall_csv<W: Write>(&self, w: W) -> std::io::Result<()> {
        let overall = self.overall();
        let rows: [[String; 4]; 4] = std::array::from_fn(|s| {
            std::array::from_fn(|t| fmt_opt(overall.map(|m| m[s][t])))
        });
        write_table(w, &rows)
    }

    pub fn write_row_csv<W: Write>(&self, w: W) -> std::io::Result<()> {
        let norm = self.row_normalized();
        let rows: [[String; 4]; 4] =
            std::array::from_fn(|s| std::array::from_fn(|t| fmt_opt(norm[s].map(|r| r[t]))));
        write_table(w, &rows)
    }
}

fn write_table<W: Write>(mut w: W, rows: &[[String; 4]; 4]) -> std::io::Result<()> {
    write!(w, "source")?;
    for g in Group::PARTISAN {
        write!(w, ",{g}")?;
    }
    writeln!(w)?;
    for (g, row) in Group::PARTISAN.iter().zip(rows) {
        writeln!(w, "{g},{}", row.join(","))?;
    }
    Ok(())
}

pub fn interaction_matrix(graph: &RetweetGraph, groups: &GroupMap) -> InteractionMatrix {
    let node_groups: Vec<Option<usize>> = graph
        .node_ids()
        .iter()
        .map(|id| groups.get(id).partisan_index())
        .collect();
    let mut m = InteractionMatrix::default();
    for e in graph.edges() {
        match (node_groups[e.source as usize], node_groups[e.target as usize]) {
            (Some(s), Some(t)) => m.counts[s][t] += e.weight,
            _ => m.residual_weight += e.weight,
        }
    }
    m
}
