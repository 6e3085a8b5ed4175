//! Weighted edge-list TSV and GEXF exports.

use super::{Centrality, CoreAssignment, GroupMap, RetweetGraph};
use crate::{Error, Result};
use std::io::{BufRead, Write};

/// Writes `source<TAB>target<TAB>weight` for every edge with weight ≥ `min_weight`.
pub fn write_edge_list<W: Write>(graph: &RetweetGraph, min_weight: u64, mut w: W) -> std::io::Result<()> {
    for e in graph.edges().iter().filter(|e| e.weight >= min_weight) {
        writeln!(
            w,
            "{}\t{}\t{}",
            graph.node_id(e.source),
            graph.node_id(e.target),
            e.weight
        )?;
    }
    Ok(())
}

/// Reads an edge list written by [`write_edge_list`]. Blank lines are skipped.
pub fn read_edge_list<R: BufRead>(reader: R) -> Result<RetweetGraph> {
    let mut edges = Vec::new();
    for (i, line) in reader.lines().enumerate() {
        let line = line?;
        if line.trim().is_empty() {
            continue;
        }
        let mut parts = line.split('\t');
        let (Some(s), Some(t), Some(w), None) = (parts.next(), parts.next(), parts.next(), parts.next())
        else {
            return Err(Error::Parse(format!("edge list line {}: expected 3 fields", i + 1)));
        };
        let w: u64 = w
            .trim()
            .parse()
            .map_err(|_| Error::Parse(format!("edge list line {}: bad weight `{w}`", i + 1)))?;
        edges.push((s.to_string(), t.to_string(), w));
    }
    Ok(RetweetGraph::from_edges(Vec::<String>::new(), edges))
}

/// Per-node attributes carried by the GEXF export.
pub struct NodeAnnotations<'a> {
    pub groups: &'a GroupMap,
    pub cores: &'a CoreAssignment,
    /// Absent for graphs with fewer than two nodes.
    pub centrality: Option<&'a Centrality>,
}

fn xml_escape(s: &str) -> String {
    let mut out = String::with_capacity(s.len());
    for c in s.chars() {
        match c {
            '&' => out.push_str("&amp;"),
            '<' => out.push_str("&lt;"),
            '>' => out.push_str("&gt;"),
            '"' => out.push_str("&quot;"),
            '\'' => out.push_str("&apos;"),
            c => out.push(c),
        }
    }
    out
}

/// GEXF 1.3 document with a directed edge set filtered by `min_weight` and every node
/// annotated with group, core number, and in/out degree centrality.
pub fn write_gexf<W: Write>(
    graph: &RetweetGraph,
    notes: &NodeAnnotations<'_>,
    min_weight: u64,
    mut w: W,
) -> std::io::Result<()> {
    writeln!(w, r#"<?xml version="1.0" encoding="UTF-8"?>"#)?;
    writeln!(w, r#"<gexf xmlns="http://gexf.net/1.3" version="1.3">"#)?;
    writeln!(w, r#"  <graph mode="static" defaultedgetype="directed">"#)?;
    writeln!(w, r#"    <attributes class="node">"#)?;
    writeln!(w, r#"      <attribute id="group" title="group" type="string"/>"#)?;
    writeln!(w, r#"      <attribute id="core_number" title="core_number" type="integer"/>"#)?;
    writeln!(w, r#"      <attribute id="in_centrality" title="in_centrality" type="double"/>"#)?;
    writeln!(w, r#"      <attribute id="out_centrality" title="out_centrality" type="double"/>"#)?;
    writeln!(w, "    </attributes>")?;
    writeln!(w, "    <nodes>")?;
    for (i, id) in graph.node_ids().iter().enumerate() {
        let id = xml_escape(id);
        writeln!(w, r#"      <node id="{id}" label="{id}">"#)?;
        writeln!(w, "        <attvalues>")?;
        writeln!(w, r#"          <attvalue for="group" value="{}"/>"#, notes.groups.get(graph.node_id(i as u32)))?;
        writeln!(w, r#"          <attvalue for="core_number" value="{}"/>"#, notes.cores.get(i as u32))?;
        if let Some(c) = notes.centrality {
            writeln!(w, r#"          <attvalue for="in_centrality" value="{}"/>"#, c.in_centrality[i])?;
            writeln!(w, r#"          <attvalue for="out_centrality" value="{}"/>"#, c.out_centrality[i])?;
        }
        writeln!(w, "        </attvalues>")?;
        writeln!(w, "      </node>")?;
    }
    writeln!(w, "    </nodes>")?;
    writeln!(w, "    <edges>")?;
    for (i, e) in graph.edges().iter().filter(|e| e.weight >= min_weight).enumerate() {
        writeln!(
            w,
            r#"      <edge id="{i}" source="{}" target="{}" weight="{}"/>"#,
            xml_escape(graph.node_id(e.source)),
            xml_escape(graph.node_id(e.target)),
            e.weight
        )?;
    }
    writeln!(w, "    </edges>")?;
    writeln!(w, "  </graph>")?;
    writeln!(w, "</gexf>")
}
