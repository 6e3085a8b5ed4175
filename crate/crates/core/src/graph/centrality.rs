use super::{Group, GroupMap, RetweetGraph};
use crate::report::fmt_opt;
use crate::{Error, Result};
use rayon::prelude::*;
use std::io::Write;

/// In/out degree centrality per node index: distinct neighbors over `n - 1`.
#[derive(Debug, Clone, PartialEq)]
pub struct Centrality {
    pub in_centrality: Vec<f64>,
    pub out_centrality: Vec<f64>,
}

pub fn degree_centrality(graph: &RetweetGraph) -> Result<Centrality> {
    let n = graph.node_count();
    if n < 2 {
        return Err(Error::TooFewNodes(n));
    }
    // each edge is a distinct ordered pair, so counting edges counts distinct neighbors
    let mut in_deg = vec![0u32; n];
    let mut out_deg = vec![0u32; n];
    for e in graph.edges() {
        in_deg[e.target as usize] += 1;
        out_deg[e.source as usize] += 1;
    }
    let norm = (n - 1) as f64;
    let scale = |d: &u32| *d as f64 / norm;
    Ok(Centrality {
        in_centrality: in_deg.par_iter().map(scale).collect(),
        out_centrality: out_deg.par_iter().map(scale).collect(),
    })
}

#[derive(Debug, Clone, PartialEq)]
pub struct GroupCentrality {
    pub group: Group,
    pub members: u64,
    pub mean_in: Option<f64>,
    pub mean_out: Option<f64>,
}

/// Mean centralities over the members of each group present in the graph.
pub fn group_centrality(
    graph: &RetweetGraph,
    centrality: &Centrality,
    groups: &GroupMap,
) -> Vec<GroupCentrality> {
    let mut sums = [(0u64, 0.0f64, 0.0f64); 5];
    for (node, id) in graph.node_ids().iter().enumerate() {
        let g = groups.get(id);
        let slot = &mut sums[Group::ALL.iter().position(|x| *x == g).expect("group listed")];
        slot.0 += 1;
        slot.1 += centrality.in_centrality[node];
        slot.2 += centrality.out_centrality[node];
    }
    Group::ALL
        .iter()
        .zip(sums)
        .map(|(&group, (members, sum_in, sum_out))| GroupCentrality {
            group,
            members,
            mean_in: (members > 0).then(|| sum_in / members as f64),
            mean_out: (members > 0).then(|| sum_out / members as f64),
        })
        .collect()
}

pub fn write_centrality_csv<W: Write>(mut w: W, rows: &[GroupCentrality]) -> std::io::Result<()> {
    writeln!(w, "group,members,mean_out_centrality,mean_in_centrality")?;
    for r in rows {
        // scientific notation: real-scale values sit around 1e-6
        let sci = |v: Option<f64>| v.map_or_else(|| fmt_opt(None), |x| format!("{x:.6e}"));
        writeln!(w, "{},{},{},{}", r.group, r.members, sci(r.mean_out), sci(r.mean_in))?;
    }
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;
    use std::collections::BTreeSet;

    #[test]
    fn directed_star() {
        let g = RetweetGraph::from_edges(
            Vec::<&str>::new(),
            [("l1", "c", 1), ("l2", "c", 1), ("l3", "c", 1)],
        );
        let c = degree_centrality(&g).unwrap();
        let center = g.index_of("c").unwrap() as usize;
        assert_eq!(c.in_centrality[center], 1.0);
        assert_eq!(c.out_centrality[center], 0.0);
        for leaf in ["l1", "l2", "l3"] {
            let i = g.index_of(leaf).unwrap() as usize;
            assert_eq!(c.out_centrality[i], 1.0 / 3.0);
            assert_eq!(c.in_centrality[i], 0.0);
        }
    }

    #[test]
    fn too_few_nodes() {
        let g = RetweetGraph::from_edges(["solo"], Vec::<(&str, &str, u64)>::new());
        assert!(matches!(degree_centrality(&g), Err(Error::TooFewNodes(1))));
    }

    #[test]
    fn weights_do_not_matter() {
        let heavy = RetweetGraph::from_edges(Vec::<&str>::new(), [("a", "b", 9), ("b", "c", 1)]);
        let light = RetweetGraph::from_edges(Vec::<&str>::new(), [("a", "b", 1), ("b", "c", 1)]);
        assert_eq!(degree_centrality(&heavy).unwrap(), degree_centrality(&light).unwrap());
    }

    #[test]
    fn group_means() {
        let g = RetweetGraph::from_edges(
            Vec::<&str>::new(),
            [("l1", "c", 1), ("l2", "c", 1), ("l3", "c", 1)],
        );
        let mut groups = GroupMap::new();
        groups.insert("c", Group::ConservativeBot);
        groups.insert("l1", Group::LiberalHuman);
        groups.insert("l2", Group::LiberalHuman);
        let rows = group_centrality(&g, &degree_centrality(&g).unwrap(), &groups);
        let lh = &rows[0];
        assert_eq!(lh.members, 2);
        assert_eq!(lh.mean_out, Some(1.0 / 3.0));
        assert_eq!(rows[1].mean_in, None); // no liberal bots
        assert_eq!(rows[3].mean_in, Some(1.0));
        assert_eq!(rows[4].members, 1); // l3 is residual
    }

    proptest! {
        #[test]
        fn centralities_match_adjacency_count(edges in prop::collection::vec((0u8..12, 0u8..12, 1u64..4), 0..60)) {
            let named: Vec<(String, String, u64)> =
                edges.iter().map(|(s, t, w)| (format!("v{s:02}"), format!("v{t:02}"), *w)).collect();
            let g = RetweetGraph::from_edges((0..12).map(|i| format!("v{i:02}")), named);
            let c = degree_centrality(&g).unwrap();
            for v in 0..12u8 {
                let ins: BTreeSet<u8> = edges.iter().filter(|(s, t, _)| *t == v && s != t).map(|e| e.0).collect();
                let outs: BTreeSet<u8> = edges.iter().filter(|(s, t, _)| *s == v && s != t).map(|e| e.1).collect();
                prop_assert_eq!(c.in_centrality[v as usize], ins.len() as f64 / 11.0);
                prop_assert_eq!(c.out_centrality[v as usize], outs.len() as f64 / 11.0);
                prop_assert!((0.0..=1.0).contains(&c.in_centrality[v as usize]));
            }
        }
    }
}
