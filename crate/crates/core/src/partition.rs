//! Vertex-to-community assignment with incrementally maintained tallies.

use crate::error::{Error, Result};
use crate::graph::Graph;

/// Assignment of every vertex of a graph to one community.
///
/// Besides the assignment the partition caches, per community, the total degree
/// `D(C)`, the number of original vertices `|C|`, the number of member vertices at
/// this level and the internal edge weight (self-loops included), plus the global
/// intra-community weight `m_in`. Moves keep all of these in sync.
#[derive(Debug, Clone, PartialEq)]
pub struct Partition {
    assignment: Vec<usize>,
    community_degree: Vec<f64>,
    community_size: Vec<usize>,
    community_members: Vec<usize>,
    community_internal: Vec<f64>,
    intra_weight: f64,
    total_weight: f64,
}

impl Partition {
    /// Every vertex in its own community.
    pub fn singletons(graph: &Graph) -> Self {
        let n = graph.n();
        let community_internal: Vec<f64> = (0..n).map(|v| graph.self_loop_weight(v)).collect();
        Self {
            assignment: (0..n).collect(),
            community_degree: graph.degrees().to_vec(),
            community_size: (0..n).map(|v| graph.vertex_size(v)).collect(),
            community_members: vec![1; n],
            intra_weight: community_internal.iter().sum(),
            community_internal,
            total_weight: graph.total_weight(),
        }
    }

    /// All vertices in one community.
    pub fn all_in_one(graph: &Graph) -> Self {
        Self::build(graph, vec![0; graph.n()], if graph.n() == 0 { 0 } else { 1 })
    }

    /// Builds a partition from arbitrary community labels.
    ///
    /// Labels are densified to `0..k` in order of first appearance.
    pub fn from_assignment(graph: &Graph, labels: &[usize]) -> Result<Self> {
        if labels.len() != graph.n() {
            return Err(Error::PartitionMismatch(format!(
                "{} labels for {} vertices",
                labels.len(),
                graph.n()
            )));
        }
        let (dense, k) = densify(labels);
        Ok(Self::build(graph, dense, k))
    }

    fn build(graph: &Graph, assignment: Vec<usize>, k: usize) -> Self {
        let mut community_degree = vec![0.0; k];
        let mut community_size = vec![0; k];
        let mut community_members = vec![0; k];
        let mut community_internal = vec![0.0; k];
        let mut intra = 0.0;
        for v in 0..graph.n() {
            let c = assignment[v];
            community_degree[c] += graph.degree(v);
            community_size[c] += graph.vertex_size(v);
            community_members[c] += 1;
            community_internal[c] += graph.self_loop_weight(v);
            intra += graph.self_loop_weight(v);
            for (u, w) in graph.neighbors(v) {
                if u > v && assignment[u] == c {
                    community_internal[c] += w;
                    intra += w;
                }
            }
        }
        Self {
            assignment,
            community_degree,
            community_size,
            community_members,
            community_internal,
            intra_weight: intra,
            total_weight: graph.total_weight(),
        }
    }

    pub fn n(&self) -> usize {
        self.assignment.len()
    }

    pub fn community_of(&self, v: usize) -> usize {
        self.assignment[v]
    }

    pub fn assignment(&self) -> &[usize] {
        &self.assignment
    }

    /// Number of community slots; equals the community count once compacted.
    pub fn num_communities(&self) -> usize {
        self.community_degree.len()
    }

    /// Number of non-empty communities.
    pub fn nonempty_communities(&self) -> usize {
        self.community_members.iter().filter(|&&c| c > 0).count()
    }

    pub fn community_degree(&self, c: usize) -> f64 {
        self.community_degree[c]
    }

    /// Number of original vertices in community `c`.
    pub fn community_size(&self, c: usize) -> usize {
        self.community_size[c]
    }

    pub fn community_sizes(&self) -> &[usize] {
        &self.community_size
    }

    /// Number of vertices of the current graph level in community `c`.
    pub fn community_members(&self, c: usize) -> usize {
        self.community_members[c]
    }

    /// Internal edge weight of community `c`, self-loops included.
    pub fn community_internal_weight(&self, c: usize) -> f64 {
        self.community_internal[c]
    }

    /// `m_in`: total intra-community edge weight.
    pub fn intra_weight(&self) -> f64 {
        self.intra_weight
    }

    /// `m_out`: total inter-community edge weight.
    pub fn inter_weight(&self) -> f64 {
        (self.total_weight - self.intra_weight).max(0.0)
    }

    pub fn total_weight(&self) -> f64 {
        self.total_weight
    }

    pub(crate) fn check_graph(&self, graph: &Graph) -> Result<()> {
        if self.n() != graph.n() {
            return Err(Error::PartitionMismatch(format!(
                "partition covers {} vertices, graph has {}",
                self.n(),
                graph.n()
            )));
        }
        Ok(())
    }

    /// Weights from `v` to its own community and to `target`, excluding self-loops.
    pub(crate) fn link_weights(&self, graph: &Graph, v: usize, target: usize) -> (f64, f64) {
        let own = self.assignment[v];
        let (mut k_own, mut k_target) = (0.0, 0.0);
        for (u, w) in graph.neighbors(v) {
            let c = self.assignment[u];
            if c == own {
                k_own += w;
            }
            if c == target {
                k_target += w;
            }
        }
        (k_own, k_target)
    }

    /// Moves `v` into community `target` (which may be an empty slot).
    pub fn move_vertex(&mut self, graph: &Graph, v: usize, target: usize) {
        let (k_own, k_target) = self.link_weights(graph, v, target);
        self.apply_move(graph, v, target, k_own, k_target);
    }

    /// Move with precomputed link weights from `v` to its current and target community.
    pub(crate) fn apply_move(
        &mut self,
        graph: &Graph,
        v: usize,
        target: usize,
        k_own: f64,
        k_target: f64,
    ) {
        let from = self.assignment[v];
        if from == target {
            return;
        }
        let d = graph.degree(v);
        let s = graph.vertex_size(v);
        let loop_w = graph.self_loop_weight(v);
        self.community_degree[from] -= d;
        self.community_degree[target] += d;
        self.community_size[from] -= s;
        self.community_size[target] += s;
        self.community_members[from] -= 1;
        self.community_members[target] += 1;
        self.community_internal[from] -= k_own + loop_w;
        self.community_internal[target] += k_target + loop_w;
        self.intra_weight += k_target - k_own;
        if self.community_members[from] == 0 {
            // clear accumulated rounding residue
            self.community_degree[from] = 0.0;
            self.community_internal[from] = 0.0;
        }
        self.assignment[v] = target;
    }

    /// Drops empty communities and renumbers the rest in order of first appearance.
    pub fn compact(&mut self) {
        let k = self.num_communities();
        let mut remap = vec![usize::MAX; k];
        let mut next = 0;
        for &c in &self.assignment {
            if remap[c] == usize::MAX {
                remap[c] = next;
                next += 1;
            }
        }
        let mut degree = vec![0.0; next];
        let mut size = vec![0; next];
        let mut members = vec![0; next];
        let mut internal = vec![0.0; next];
        for (c, &r) in remap.iter().enumerate() {
            if r != usize::MAX {
                degree[r] = self.community_degree[c];
                size[r] = self.community_size[c];
                members[r] = self.community_members[c];
                internal[r] = self.community_internal[c];
            }
        }
        for c in &mut self.assignment {
            *c = remap[*c];
        }
        self.community_degree = degree;
        self.community_size = size;
        self.community_members = members;
        self.community_internal = internal;
    }

    /// Vertex lists of all non-empty communities.
    pub fn communities(&self) -> Vec<Vec<usize>> {
        let mut out: Vec<Vec<usize>> = vec![Vec::new(); self.num_communities()];
        for (v, &c) in self.assignment.iter().enumerate() {
            out[c].push(v);
        }
        out.retain(|c| !c.is_empty());
        out
    }

    /// Same assignment with all tallies recomputed from scratch.
    pub fn recomputed(&self, graph: &Graph) -> Self {
        Self::build(graph, self.assignment.clone(), self.num_communities())
    }
}

impl AsRef<[usize]> for Partition {
    fn as_ref(&self) -> &[usize] {
        &self.assignment
    }
}

/// Relabels to `0..k` by first appearance; returns the labels and `k`.
pub fn densify(labels: &[usize]) -> (Vec<usize>, usize) {
    let mut map = std::collections::HashMap::new();
    let dense = labels
        .iter()
        .map(|&l| {
            let next = map.len();
            *map.entry(l).or_insert(next)
        })
        .collect();
    (dense, map.len())
}
