//! Undirected graph storage.
//!
//! A [`Graph`] is an immutable compressed adjacency structure. Level-0 graphs (loaded
//! from files or produced by the LFR generator) are simple with unit weights; the
//! supervertex graphs built by [`aggregate`] carry edge weights, per-vertex self-loop
//! weights, and the number of original vertices each supervertex stands for.

use std::collections::HashMap;
use std::sync::Arc;

use crate::error::{Error, Result};
use crate::partition::Partition;

/// Interned vertex identifiers, kept so output labels round-trip to the input ids.
#[derive(Debug, Clone, Default)]
pub struct VertexNames {
    names: Vec<String>,
    index: HashMap<String, usize>,
}

impl VertexNames {
    pub fn new() -> Self {
        Self::default()
    }

    /// Returns the dense index for `name`, assigning the next free one if unseen.
    pub fn intern(&mut self, name: &str) -> usize {
        if let Some(&i) = self.index.get(name) {
            return i;
        }
        let i = self.names.len();
        self.names.push(name.to_owned());
        self.index.insert(name.to_owned(), i);
        i
    }

    pub fn get(&self, name: &str) -> Option<usize> {
        self.index.get(name).copied()
    }

    pub fn name(&self, v: usize) -> &str {
        &self.names[v]
    }

    pub fn len(&self) -> usize {
        self.names.len()
    }

    pub fn is_empty(&self) -> bool {
        self.names.is_empty()
    }
}

#[derive(Debug, Clone)]
pub struct Graph {
    offsets: Vec<usize>,
    targets: Vec<u32>,
    weights: Vec<f64>,
    self_loops: Vec<f64>,
    degrees: Vec<f64>,
    sizes: Vec<usize>,
    total_size: usize,
    total_weight_2m: f64,
    names: Option<Arc<VertexNames>>,
}

impl Graph {
    /// Builds a simple unit-weight graph on `n` vertices.
    ///
    /// Self-loops, duplicate edges and out-of-range endpoints are rejected; the
    /// reported line number is the 1-based index into `edges`.
    pub fn from_edges(n: usize, edges: &[(usize, usize)]) -> Result<Self> {
        let mut adjacency: Vec<Vec<u32>> = vec![Vec::new(); n];
        for (i, &(u, v)) in edges.iter().enumerate() {
            if u >= n || v >= n {
                return Err(Error::Parse {
                    line: i + 1,
                    message: format!("edge ({u}, {v}) out of range for {n} vertices"),
                });
            }
            if u == v {
                return Err(Error::SelfLoop {
                    line: i + 1,
                    vertex: u.to_string(),
                });
            }
            adjacency[u].push(v as u32);
            adjacency[v].push(u as u32);
        }
        for (u, list) in adjacency.iter_mut().enumerate() {
            list.sort_unstable();
            if let Some(w) = list.windows(2).find(|w| w[0] == w[1]) {
                let v = w[0] as usize;
                let line = edges
                    .iter()
                    .enumerate()
                    .filter(|(_, &(a, b))| (a, b) == (u, v) || (a, b) == (v, u))
                    .nth(1)
                    .map_or(0, |(i, _)| i + 1);
                return Err(Error::DuplicateEdge {
                    line,
                    u: u.to_string(),
                    v: v.to_string(),
                });
            }
        }
        Ok(Self::from_sorted_adjacency(adjacency))
    }

    fn from_sorted_adjacency(adjacency: Vec<Vec<u32>>) -> Self {
        let n = adjacency.len();
        let mut offsets = Vec::with_capacity(n + 1);
        offsets.push(0);
        let mut targets = Vec::new();
        for list in &adjacency {
            targets.extend_from_slice(list);
            offsets.push(targets.len());
        }
        let degrees: Vec<f64> = adjacency.iter().map(|l| l.len() as f64).collect();
        let total_weight_2m = targets.len() as f64;
        Self {
            offsets,
            weights: vec![1.0; targets.len()],
            targets,
            self_loops: vec![0.0; n],
            degrees,
            sizes: vec![1; n],
            total_size: n,
            total_weight_2m,
            names: None,
        }
    }

    /// Builds a weighted graph from per-vertex `(neighbor, weight)` lists.
    ///
    /// Lists must be symmetric and free of self references; self-loop weight is
    /// passed separately and counts twice toward the vertex degree.
    pub(crate) fn from_weighted_adjacency(
        adjacency: Vec<Vec<(u32, f64)>>,
        self_loops: Vec<f64>,
        sizes: Vec<usize>,
    ) -> Self {
        let n = adjacency.len();
        debug_assert_eq!(self_loops.len(), n);
        debug_assert_eq!(sizes.len(), n);
        let mut offsets = Vec::with_capacity(n + 1);
        offsets.push(0);
        let mut targets = Vec::new();
        let mut weights = Vec::new();
        let mut degrees = Vec::with_capacity(n);
        for (v, list) in adjacency.iter().enumerate() {
            let mut d = 2.0 * self_loops[v];
            for &(u, w) in list {
                debug_assert_ne!(u as usize, v);
                targets.push(u);
                weights.push(w);
                d += w;
            }
            degrees.push(d);
            offsets.push(targets.len());
        }
        let total_weight_2m = degrees.iter().sum();
        let total_size = sizes.iter().sum();
        Self {
            offsets,
            targets,
            weights,
            self_loops,
            degrees,
            sizes,
            total_size,
            total_weight_2m,
            names: None,
        }
    }

    pub(crate) fn with_names(mut self, names: VertexNames) -> Self {
        self.names = Some(Arc::new(names));
        self
    }

    /// Number of vertices at this level.
    pub fn n(&self) -> usize {
        self.degrees.len()
    }

    /// Number of stored undirected edges, not counting self-loops.
    pub fn edge_count(&self) -> usize {
        self.targets.len() / 2
    }

    /// Total edge weight `m` (self-loops included once).
    pub fn total_weight(&self) -> f64 {
        self.total_weight_2m / 2.0
    }

    /// `2m`, the sum of all weighted degrees.
    pub fn total_weight_2m(&self) -> f64 {
        self.total_weight_2m
    }

    pub fn degree(&self, v: usize) -> f64 {
        self.degrees[v]
    }

    pub fn degrees(&self) -> &[f64] {
        &self.degrees
    }

    pub fn self_loop_weight(&self, v: usize) -> f64 {
        self.self_loops[v]
    }

    /// Number of original vertices represented by `v` (1 at level 0).
    pub fn vertex_size(&self, v: usize) -> usize {
        self.sizes[v]
    }

    /// Number of original vertices represented by the whole graph.
    pub fn total_size(&self) -> usize {
        self.total_size
    }

    pub fn neighbors(&self, v: usize) -> impl Iterator<Item = (usize, f64)> + '_ {
        let range = self.offsets[v]..self.offsets[v + 1];
        self.targets[range.clone()]
            .iter()
            .zip(&self.weights[range])
            .map(|(&u, &w)| (u as usize, w))
    }

    pub fn neighbor_count(&self, v: usize) -> usize {
        self.offsets[v + 1] - self.offsets[v]
    }

    pub fn has_edge(&self, u: usize, v: usize) -> bool {
        let range = self.offsets[u]..self.offsets[u + 1];
        self.targets[range].binary_search(&(v as u32)).is_ok()
    }

    /// Each undirected edge once, as `(u, v, w)` with `u < v`.
    pub fn edges(&self) -> impl Iterator<Item = (usize, usize, f64)> + '_ {
        (0..self.n()).flat_map(move |u| {
            self.neighbors(u)
                .filter(move |&(v, _)| u < v)
                .map(move |(v, w)| (u, v, w))
        })
    }

    /// Integer degree at level 0.
    pub fn unweighted_degree(&self, v: usize) -> usize {
        self.neighbor_count(v)
    }

    pub fn names(&self) -> Option<&VertexNames> {
        self.names.as_deref()
    }

    /// External id of `v`: the interned token if the graph was loaded from a file,
    /// otherwise the index itself.
    pub fn vertex_name(&self, v: usize) -> String {
        match &self.names {
            Some(names) => names.name(v).to_owned(),
            None => v.to_string(),
        }
    }

    /// Index of the vertex with external id `name`.
    pub fn vertex_index(&self, name: &str) -> Option<usize> {
        match &self.names {
            Some(names) => names.get(name),
            None => name.parse::<usize>().ok().filter(|&v| v < self.n()),
        }
    }

    /// True for graphs without weights other than 1 and without self-loops.
    pub fn is_simple(&self) -> bool {
        self.weights.iter().all(|&w| w == 1.0) && self.self_loops.iter().all(|&w| w == 0.0)
    }
}

/// Contracts every community of `partition` into one supervertex.
///
/// The weight between two supervertices is the total weight between the two
/// communities, and each supervertex carries the total intra-community weight as a
/// self-loop. Supervertex `c` corresponds to community id `c` of the compacted
/// partition, so `partition` must not contain empty communities.
pub fn aggregate(graph: &Graph, partition: &Partition) -> Graph {
    let k = partition.num_communities();
    debug_assert!(
        (0..k).all(|c| partition.community_members(c) > 0),
        "aggregate requires a compacted partition"
    );
    let mut members: Vec<Vec<usize>> = vec![Vec::new(); k];
    for v in 0..graph.n() {
        members[partition.community_of(v)].push(v);
    }
    let mut scratch = vec![0.0f64; k];
    let mut touched: Vec<usize> = Vec::new();
    let mut adjacency = Vec::with_capacity(k);
    let mut self_loops = Vec::with_capacity(k);
    let mut sizes = Vec::with_capacity(k);
    for (c, list) in members.iter().enumerate() {
        let mut internal = 0.0;
        let mut size = 0;
        for &v in list {
            internal += graph.self_loop_weight(v);
            size += graph.vertex_size(v);
            for (u, w) in graph.neighbors(v) {
                let cu = partition.community_of(u);
                if cu == c {
                    // each intra edge is seen from both ends
                    internal += w / 2.0;
                } else {
                    if scratch[cu] == 0.0 {
                        touched.push(cu);
                    }
                    scratch[cu] += w;
                }
            }
        }
        touched.sort_unstable();
        let row: Vec<(u32, f64)> = touched
            .iter()
            .map(|&cu| (cu as u32, std::mem::take(&mut scratch[cu])))
            .collect();
        touched.clear();
        adjacency.push(row);
        self_loops.push(internal);
        sizes.push(size);
    }
    Graph::from_weighted_adjacency(adjacency, self_loops, sizes)
}

/// Fraction of the edge weight running between communities, `m_out / m`.
pub fn mixing_fraction(graph: &Graph, partition: &Partition) -> Result<f64> {
    if graph.total_weight_2m() <= 0.0 {
        return Err(Error::EmptyGraph);
    }
    partition.check_graph(graph)?;
    Ok(partition.inter_weight() / graph.total_weight())
}
