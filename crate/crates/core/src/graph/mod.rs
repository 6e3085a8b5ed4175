//! The retweet network and its structural analytics.
//!
//! An edge `source -> target` means `source` retweeted content authored by `target`;
//! its weight is the number of such retweets. Nodes are stored in lexicographic id
//! order so every derived table is deterministic.

mod activity;
mod centrality;
mod export;
mod groups;
mod interactions;
mod kcore;

pub use activity::{tweets_per_user, write_activity_csv, GroupActivity};
pub use centrality::{
    degree_centrality, group_centrality, write_centrality_csv, Centrality, GroupCentrality,
};
pub use export::{read_edge_list, write_edge_list, write_gexf, NodeAnnotations};
pub use groups::{Group, GroupMap};
pub use interactions::{interaction_matrix, InteractionMatrix};
pub use kcore::{core_numbers, core_series, CoreAssignment, CoreSeries, CoreSeriesRow};

use crate::corpus::{Corpus, TweetKind};
use std::collections::HashMap;

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Edge {
    pub source: u32,
    pub target: u32,
    pub weight: u64,
}

#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct RetweetGraph {
    ids: Vec<String>,
    index: HashMap<String, u32>,
    /// Sorted by (source, target); one entry per ordered pair.
    edges: Vec<Edge>,
}

impl RetweetGraph {
    pub fn node_count(&self) -> usize {
        self.ids.len()
    }

    pub fn edge_count(&self) -> usize {
        self.edges.len()
    }

    pub fn edges(&self) -> &[Edge] {
        &self.edges
    }

    pub fn node_ids(&self) -> &[String] {
        &self.ids
    }

    pub fn node_id(&self, node: u32) -> &str {
        &self.ids[node as usize]
    }

    pub fn index_of(&self, id: &str) -> Option<u32> {
        self.index.get(id).copied()
    }

    pub fn weight(&self, source: &str, target: &str) -> Option<u64> {
        let (s, t) = (self.index_of(source)?, self.index_of(target)?);
        self.edges
            .binary_search_by(|e| (e.source, e.target).cmp(&(s, t)))
            .ok()
            .map(|i| self.edges[i].weight)
    }

    pub fn total_weight(&self) -> u64 {
        self.edges.iter().map(|e| e.weight).sum()
    }

    /// Builds a graph from explicit nodes and weighted edges. Edges between the same
    /// ordered pair are merged, self-loops and zero weights are dropped, and edge
    /// endpoints are added as nodes.
    pub fn from_edges<N, E, S>(nodes: N, edges: E) -> Self
    where
        N: IntoIterator<Item = S>,
        E: IntoIterator<Item = (S, S, u64)>,
        S: AsRef<str>,
    {
        let mut b = GraphBuilder::default();
        for n in nodes {
            b.add_node(n.as_ref());
        }
        for (s, t, w) in edges {
            b.add_retweets(s.as_ref(), t.as_ref(), w);
        }
        b.finish()
    }

    /// Undirected adjacency: each unordered pair appears once per endpoint, weighted by
    /// the sum of both directions.
    pub fn undirected(&self) -> UndirectedView {
        let n = self.node_count();
        let mut pairs: Vec<(u32, u32, u64)> = self
            .edges
            .iter()
            .map(|e| {
                let (a, b) = if e.source < e.target {
                    (e.source, e.target)
                } else {
                    (e.target, e.source)
                };
                (a, b, e.weight)
            })
            .collect();
        pairs.sort_unstable();
        let mut merged: Vec<(u32, u32, u64)> = Vec::with_capacity(pairs.len());
        for (a, b, w) in pairs {
            match merged.last_mut() {
                Some(last) if last.0 == a && last.1 == b => last.2 += w,
                _ => merged.push((a, b, w)),
            }
        }

        let mut offsets = vec![0usize; n + 1];
        for &(a, b, _) in &merged {
            offsets[a as usize + 1] += 1;
            offsets[b as usize + 1] += 1;
        }
        for i in 0..n {
            offsets[i + 1] += offsets[i];
        }
        let mut cursor = offsets.clone();
        let mut neighbors = vec![0u32; offsets[n]];
        let mut weights = vec![0u64; offsets[n]];
        // Lower-indexed neighbors first, then higher; both passes run in sorted order.
        for &(a, b, w) in &merged {
            let slot = cursor[b as usize];
            neighbors[slot] = a;
            weights[slot] = w;
            cursor[b as usize] += 1;
        }
        for &(a, b, w) in &merged {
            let slot = cursor[a as usize];
            neighbors[slot] = b;
            weights[slot] = w;
            cursor[a as usize] += 1;
        }
        UndirectedView {
            offsets,
            neighbors,
            weights,
        }
    }
}

/// Compressed undirected adjacency lists, each sorted by neighbor index.
#[derive(Debug, Clone)]
pub struct UndirectedView {
    offsets: Vec<usize>,
    neighbors: Vec<u32>,
    weights: Vec<u64>,
}

impl UndirectedView {
    pub fn node_count(&self) -> usize {
        self.offsets.len() - 1
    }

    pub fn degree(&self, node: u32) -> usize {
        let i = node as usize;
        self.offsets[i + 1] - self.offsets[i]
    }

    pub fn neighbors(&self, node: u32) -> &[u32] {
        let i = node as usize;
        &self.neighbors[self.offsets[i]..self.offsets[i + 1]]
    }

    pub fn weighted_neighbors(&self, node: u32) -> impl Iterator<Item = (u32, u64)> + '_ {
        let i = node as usize;
        let range = self.offsets[i]..self.offsets[i + 1];
        self.neighbors[range.clone()]
            .iter()
            .copied()
            .zip(self.weights[range].iter().copied())
    }
}

/// Incremental graph construction with string interning.
#[derive(Debug, Default)]
pub struct GraphBuilder {
    ids: Vec<String>,
    index: HashMap<String, u32>,
    tally: HashMap<(u32, u32), u64>,
}

impl GraphBuilder {
    pub fn add_node(&mut self, id: &str) -> u32 {
        if let Some(&i) = self.index.get(id) {
            return i;
        }
        let i = u32::try_from(self.ids.len()).expect("graph exceeds u32 node ids");
        self.ids.push(id.to_string());
        self.index.insert(id.to_string(), i);
        i
    }

    pub fn add_retweets(&mut self, source: &str, target: &str, weight: u64) {
        let s = self.add_node(source);
        let t = self.add_node(target);
        if s != t && weight > 0 {
            *self.tally.entry((s, t)).or_insert(0) += weight;
        }
    }

    pub fn finish(self) -> RetweetGraph {
        let GraphBuilder { ids, tally, .. } = self;
        let mut order: Vec<u32> = (0..ids.len() as u32).collect();
        order.sort_unstable_by(|a, b| ids[*a as usize].cmp(&ids[*b as usize]));
        let mut remap = vec![0u32; ids.len()];
        for (new, &old) in order.iter().enumerate() {
            remap[old as usize] = new as u32;
        }
        let mut slots: Vec<Option<String>> = ids.into_iter().map(Some).collect();
        let ids: Vec<String> = order
            .iter()
            .map(|&old| slots[old as usize].take().expect("each node moved once"))
            .collect();
        let index = ids
            .iter()
            .enumerate()
            .map(|(i, id)| (id.clone(), i as u32))
            .collect();
        let mut edges: Vec<Edge> = tally
            .into_iter()
            .map(|((s, t), weight)| Edge {
                source: remap[s as usize],
                target: remap[t as usize],
                weight,
            })
            .collect();
        edges.sort_unstable();
        RetweetGraph { ids, index, edges }
    }
}

/// Builds the retweet network. Nodes are every record author plus every retweeted
/// author; replies and originals contribute nodes but no edges.
pub fn build(corpus: &Corpus) -> RetweetGraph {
    let mut b = GraphBuilder::default();
    for r in corpus.records() {
        b.add_node(&r.author_id);
        if r.kind == TweetKind::Retweet {
            if let Some(target) = r.referenced_author_id.as_deref() {
                b.add_retweets(&r.author_id, target, 1);
            }
        }
    }
    b.finish()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::corpus::test_support::*;

    #[test]
    fn no_retweets_no_edges() {
        let g = build(&corpus(vec![original("1", "A"), reply("2", "B", "1", "A")]));
        assert_eq!(g.edge_count(), 0);
        assert_eq!(g.node_count(), 2);
    }

    #[test]
    fn retweet_weights() {
        let g = build(&corpus(vec![
            original("1", "A"),
            retweet("2", "B", "1", "A"),
            retweet("3", "B", "1", "A"),
            retweet("4", "C", "1", "A"),
        ]));
        assert_eq!(g.node_count(), 3);
        assert_eq!(g.edge_count(), 2);
        assert_eq!(g.weight("B", "A"), Some(2));
        assert_eq!(g.weight("C", "A"), Some(1));
        assert_eq!(g.weight("A", "B"), None);
    }

    #[test]
    fn self_retweets_dropped() {
        let g = build(&corpus(vec![original("1", "A"), retweet("2", "A", "1", "A")]));
        assert_eq!(g.node_count(), 1);
        assert_eq!(g.edge_count(), 0);
    }

    #[test]
    fn build_is_deterministic() {
        let c = corpus(vec![
            retweet("1", "z", "0", "a"),
            retweet("2", "m", "0", "a"),
            retweet("3", "a", "9", "m"),
        ]);
        assert_eq!(build(&c), build(&c));
        assert_eq!(build(&c).node_ids(), &["a", "m", "z"]);
    }

    #[test]
    fn undirected_merges_directions() {
        let g = RetweetGraph::from_edges(
            Vec::<&str>::new(),
            [("a", "b", 2), ("b", "a", 3), ("b", "c", 1)],
        );
        let u = g.undirected();
        let b = g.index_of("b").unwrap();
        let got: Vec<(u32, u64)> = u.weighted_neighbors(b).collect();
        assert_eq!(got, vec![(0, 5), (2, 1)]);
        assert_eq!(u.degree(g.index_of("a").unwrap()), 1);
    }
}
