//! Edge-list and label file formats.
//!
//! Both are UTF-8 text with one record per line and two whitespace-separated
//! tokens. Blank lines and lines starting with `#` are ignored. Vertex tokens are
//! arbitrary strings; they are interned in order of first appearance in the edge
//! list and written back verbatim.

use std::collections::HashSet;
use std::fs::File;
use std::io::{BufRead, BufReader, Write};
use std::path::Path;

use crate::error::{Error, Result};
use crate::graph::{Graph, VertexNames};
use crate::partition::Partition;

fn records<R: BufRead>(reader: R) -> impl Iterator<Item = Result<(usize, String, String)>> {
    reader
        .lines()
        .enumerate()
        .filter_map(|(i, line)| {
            let line_no = i + 1;
            let line = match line {
                Ok(l) => l,
                Err(e) => return Some(Err(Error::Io(e))),
            };
            let trimmed = line.trim();
            if trimmed.is_empty() || trimmed.starts_with('#') {
                return None;
            }
            let mut tokens = trimmed.split_whitespace();
            let (a, b) = (tokens.next(), tokens.next());
            match (a, b, tokens.next()) {
                (Some(a), Some(b), None) => Some(Ok((line_no, a.to_owned(), b.to_owned()))),
                _ => Some(Err(Error::Parse {
                    line: line_no,
                    message: format!("expected two tokens, got `{trimmed}`"),
                })),
            }
        })
}

/// Reads an undirected simple graph from an edge list.
pub fn load_edge_list<R: BufRead>(reader: R) -> Result<Graph> {
    let mut names = VertexNames::new();
    let mut seen: HashSet<(usize, usize)> = HashSet::new();
    let mut edges = Vec::new();
    for record in records(reader) {
        let (line, a, b) = record?;
        if a == b {
            return Err(Error::SelfLoop { line, vertex: a });
        }
        let (u, v) = (names.intern(&a), names.intern(&b));
        if !seen.insert((u.min(v), u.max(v))) {
            return Err(Error::DuplicateEdge { line, u: a, v: b });
        }
        edges.push((u, v));
    }
    let graph = Graph::from_edges(names.len(), &edges)?;
    Ok(graph.with_names(names))
}

pub fn read_edge_list(path: &Path) -> Result<Graph> {
    let file = File::open(path)?;
    load_edge_list(BufReader::new(file))
}

/// Reads a `vertex community` file covering every vertex of `graph` exactly once.
pub fn load_labels<R: BufRead>(reader: R, graph: &Graph) -> Result<Partition> {
    let mut community_ids = VertexNames::new();
    let mut labels: Vec<Option<usize>> = vec![None; graph.n()];
    for record in records(reader) {
        let (line, vertex, community) = record?;
        let v = graph
            .vertex_index(&vertex)
            .ok_or_else(|| Error::UnknownVertex {
                line,
                vertex: vertex.clone(),
            })?;
        if labels[v].is_some() {
            return Err(Error::DuplicateVertex { line, vertex });
        }
        labels[v] = Some(community_ids.intern(&community));
    }
    let labels = labels
        .into_iter()
        .enumerate()
        .map(|(v, l)| l.ok_or_else(|| Error::MissingVertex(graph.vertex_name(v))))
        .collect::<Result<Vec<_>>>()?;
    Partition::from_assignment(graph, &labels)
}

pub fn read_labels(path: &Path, graph: &Graph) -> Result<Partition> {
    let file = File::open(path)?;
    load_labels(BufReader::new(file), graph)
}

/// Writes `partition` in label-file format, one line per vertex in index order.
pub fn write_labels<W: Write>(mut writer: W, graph: &Graph, partition: &Partition) -> Result<()> {
    for v in 0..graph.n() {
        writeln!(writer, "{} {}", graph.vertex_name(v), partition.community_of(v))?;
    }
    Ok(())
}

/// Writes each undirected edge once.
pub fn write_edge_list<W: Write>(mut writer: W, graph: &Graph) -> Result<()> {
    for (u, v, _) in graph.edges() {
        writeln!(writer, "{} {}", graph.vertex_name(u), graph.vertex_name(v))?;
    }
    Ok(())
}
