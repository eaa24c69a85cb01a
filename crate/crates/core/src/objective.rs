//! Partition-quality objectives maximized by the local-move engine.
//!
//! * Modularity with resolution `γ`: `m_in/m − γ·Σ_C D(C)²/(4m²)`.
//! * PPM with resolution `γ`: the same intra-edge fraction against an Erdős–Rényi
//!   null, `m_in/m − γ·Σ_C |C|(|C|−1)/2 ÷ n(n−1)/2`.
//! * ILFR with mixing `μ`: the partition-dependent part of the Poisson log-likelihood
//!   of the graph under intensities
//!   `λ_ij = μ·d(i)d(j)/2m + [C(i)=C(j)]·(1−μ)·d(i)d(j)/D(C)`,
//!   which reduces to `Σ_C m_C·ln(μ/2m + (1−μ)/D(C)) + m_out·ln(μ/2m)`
//!   (the intensities always sum to `m`, and the `d(i)d(j)` factors do not depend
//!   on the partition).
//!
//! All three only depend on per-community tallies, so they are invariant under
//! [`aggregate`](crate::graph::aggregate) and a single-vertex move gain costs O(1)
//! once the link weights of the vertex are known.

use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::graph::Graph;
use crate::partition::Partition;

/// Gains at or below this are treated as no improvement.
pub const MIN_GAIN: f64 = 1e-12;

/// Which objective family; each has one scalar hyperparameter.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum ObjectiveKind {
    /// Resolution-parameterized modularity (the Louvain algorithm).
    Modularity,
    Ppm,
    Ilfr,
}

impl ObjectiveKind {
    pub const ALL: [ObjectiveKind; 3] = [
        ObjectiveKind::Modularity,
        ObjectiveKind::Ppm,
        ObjectiveKind::Ilfr,
    ];

    /// `γ = 1` for modularity and PPM, `μ = 0.3` for ILFR.
    pub fn default_parameter(&self) -> f64 {
        match self {
            ObjectiveKind::Modularity | ObjectiveKind::Ppm => 1.0,
            ObjectiveKind::Ilfr => 0.3,
        }
    }

    pub fn objective(&self, parameter: f64) -> Result<Objective> {
        match self {
            ObjectiveKind::Modularity => Objective::modularity(parameter),
            ObjectiveKind::Ppm => Objective::ppm(parameter),
            ObjectiveKind::Ilfr => Objective::ilfr(parameter),
        }
    }

    /// Algorithm name as used on the command line.
    pub fn algorithm_name(&self) -> &'static str {
        match self {
            ObjectiveKind::Modularity => "louvain",
            ObjectiveKind::Ppm => "ppm",
            ObjectiveKind::Ilfr => "ilfr",
        }
    }

    pub fn parameter_name(&self) -> &'static str {
        match self {
            ObjectiveKind::Modularity | ObjectiveKind::Ppm => "gamma",
            ObjectiveKind::Ilfr => "mu",
        }
    }
}

impl fmt::Display for ObjectiveKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.algorithm_name())
    }
}

impl FromStr for ObjectiveKind {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.to_ascii_lowercase().as_str() {
            "louvain" | "modularity" | "dcppm" => Ok(ObjectiveKind::Modularity),
            "ppm" => Ok(ObjectiveKind::Ppm),
            "ilfr" => Ok(ObjectiveKind::Ilfr),
            _ => Err(Error::InvalidParameter(format!("unknown algorithm `{s}`"))),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "lowercase")]
pub enum Objective {
    Modularity { gamma: f64 },
    Ppm { gamma: f64 },
    Ilfr { mu: f64 },
}

/// Everything a move gain needs about the vertex, its two communities and the graph.
#[derive(Debug, Clone, Copy)]
pub(crate) struct MoveStats {
    /// `m`
    pub total_weight: f64,
    /// Original vertex count `n`.
    pub total_size: f64,
    pub degree: f64,
    pub size: f64,
    pub self_loop: f64,
    /// Weight from the vertex to the rest of its current community.
    pub k_from: f64,
    pub k_to: f64,
    pub from_degree: f64,
    pub to_degree: f64,
    pub from_size: f64,
    pub to_size: f64,
    pub from_internal: f64,
    pub to_internal: f64,
}

impl Objective {
    pub fn modularity(gamma: f64) -> Result<Self> {
        check_gamma(gamma)?;
        Ok(Objective::Modularity { gamma })
    }

    pub fn ppm(gamma: f64) -> Result<Self> {
        check_gamma(gamma)?;
        Ok(Objective::Ppm { gamma })
    }

    pub fn ilfr(mu: f64) -> Result<Self> {
        if !(0.0..=1.0).contains(&mu) {
            return Err(Error::InvalidParameter(format!(
                "ILFR mixing must lie in [0, 1], got {mu}"
            )));
        }
        Ok(Objective::Ilfr { mu })
    }

    pub fn kind(&self) -> ObjectiveKind {
        match self {
            Objective::Modularity { .. } => ObjectiveKind::Modularity,
            Objective::Ppm { .. } => ObjectiveKind::Ppm,
            Objective::Ilfr { .. } => ObjectiveKind::Ilfr,
        }
    }

    pub fn parameter(&self) -> f64 {
        match *self {
            Objective::Modularity { gamma } | Objective::Ppm { gamma } => gamma,
            Objective::Ilfr { mu } => mu,
        }
    }

    /// Objective value of `partition`. ILFR with `μ = 0` and any inter-community
    /// edge evaluates to `-inf`.
    pub fn value(&self, graph: &Graph, partition: &Partition) -> Result<f64> {
        if graph.total_weight_2m() <= 0.0 {
            return Err(Error::EmptyGraph);
        }
        partition.check_graph(graph)?;
        let m = graph.total_weight();
        let k = partition.num_communities();
        Ok(match *self {
            Objective::Modularity { gamma } => {
                let sq: f64 = (0..k).map(|c| partition.community_degree(c).powi(2)).sum();
                partition.intra_weight() / m - gamma * sq / (4.0 * m * m)
            }
            Objective::Ppm { gamma } => {
                let n = graph.total_size() as f64;
                let within: f64 = (0..k)
                    .map(|c| pair_count(partition.community_size(c) as f64))
                    .sum();
                partition.intra_weight() / m - gamma * (within / pair_count(n))
            }
            Objective::Ilfr { mu } => {
                let community: f64 = (0..k)
                    .map(|c| {
                        ilfr_community_term(
                            mu,
                            m,
                            partition.community_internal_weight(c),
                            partition.community_degree(c),
                        )
                    })
                    .sum();
                community + ilfr_inter_term(mu, m, partition.inter_weight())
            }
        })
    }

    /// Change in [`value`](Self::value) from moving `v` into community `target`.
    pub fn move_gain(&self, graph: &Graph, partition: &Partition, v: usize, target: usize) -> f64 {
        let from = partition.community_of(v);
        if from == target {
            return 0.0;
        }
        let (k_from, k_to) = partition.link_weights(graph, v, target);
        self.gain(&move_stats(graph, partition, v, target, k_from, k_to))
    }

    pub(crate) fn gain(&self, s: &MoveStats) -> f64 {
        let m = s.total_weight;
        match *self {
            Objective::Modularity { gamma } => {
                (s.k_to - s.k_from) / m
                    - gamma * s.degree * (s.to_degree - s.from_degree + s.degree) / (2.0 * m * m)
            }
            Objective::Ppm { gamma } => {
                (s.k_to - s.k_from) / m
                    - gamma * s.size * (s.to_size - s.from_size + s.size) / pair_count(s.total_size)
            }
            Objective::Ilfr { mu } => {
                let delta_out = s.k_from - s.k_to;
                if mu == 0.0 && delta_out != 0.0 {
                    // limit μ → 0+: the ln μ term dominates everything else
                    return if delta_out > 0.0 {
                        f64::NEG_INFINITY
                    } else {
                        f64::INFINITY
                    };
                }
                let from_after = ilfr_community_term(
                    mu,
                    m,
                    s.from_internal - s.k_from - s.self_loop,
                    s.from_degree - s.degree,
                );
                let to_after = ilfr_community_term(
                    mu,
                    m,
                    s.to_internal + s.k_to + s.self_loop,
                    s.to_degree + s.degree,
                );
                let before = ilfr_community_term(mu, m, s.from_internal, s.from_degree)
                    + ilfr_community_term(mu, m, s.to_internal, s.to_degree);
                let inter = if delta_out == 0.0 {
                    0.0
                } else {
                    delta_out * (mu / (2.0 * m)).ln()
                };
                from_after + to_after - before + inter
            }
        }
    }
}

impl fmt::Display for Objective {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Objective::Modularity { gamma } => write!(f, "modularity(gamma={gamma})"),
            Objective::Ppm { gamma } => write!(f, "ppm(gamma={gamma})"),
            Objective::Ilfr { mu } => write!(f, "ilfr(mu={mu})"),
        }
    }
}

pub(crate) fn move_stats(
    graph: &Graph,
    partition: &Partition,
    v: usize,
    target: usize,
    k_from: f64,
    k_to: f64,
) -> MoveStats {
    let from = partition.community_of(v);
    MoveStats {
        total_weight: graph.total_weight(),
        total_size: graph.total_size() as f64,
        degree: graph.degree(v),
        size: graph.vertex_size(v) as f64,
        self_loop: graph.self_loop_weight(v),
        k_from,
        k_to,
        from_degree: partition.community_degree(from),
        to_degree: partition.community_degree(target),
        from_size: partition.community_size(from) as f64,
        to_size: partition.community_size(target) as f64,
        from_internal: partition.community_internal_weight(from),
        to_internal: partition.community_internal_weight(target),
    }
}

fn check_gamma(gamma: f64) -> Result<()> {
    if !(gamma.is_finite() && gamma >= 0.0) {
        return Err(Error::InvalidParameter(format!(
            "resolution must be finite and non-negative, got {gamma}"
        )));
    }
    Ok(())
}

fn pair_count(x: f64) -> f64 {
    x * (x - 1.0) / 2.0
}

/// `m_C · ln(μ/2m + (1−μ)/D(C))`, zero for communities without internal weight.
fn ilfr_community_term(mu: f64, m: f64, internal: f64, degree: f64) -> f64 {
    if internal <= 0.0 || degree <= 0.0 {
        return 0.0;
    }
    internal * (mu / (2.0 * m) + (1.0 - mu) / degree).ln()
}

fn ilfr_inter_term(mu: f64, m: f64, inter: f64) -> f64 {
    if inter <= 0.0 {
        return 0.0;
    }
    if mu == 0.0 {
        return f64::NEG_INFINITY;
    }
    inter * (mu / (2.0 * m)).ln()
}

#[cfg(test)]
mod tests {
    use super::*;

    fn triangle() -> Graph {
        Graph::from_edges(3, &[(0, 1), (1, 2), (2, 0)]).unwrap()
    }

    #[test]
    fn modularity_closed_forms() {
        let g = triangle();
        let all = Partition::all_in_one(&g);
        for gamma in [0.0, 0.5, 1.0, 2.5] {
            let q = Objective::modularity(gamma).unwrap().value(&g, &all).unwrap();
            assert_eq!(q, 1.0 - gamma);
        }
        let single = Partition::singletons(&g);
        let q = Objective::modularity(1.0).unwrap().value(&g, &single).unwrap();
        assert_eq!(q, -1.0 / 3.0);
    }

    #[test]
    fn ppm_closed_forms() {
        let g = triangle();
        let p = Partition::from_assignment(&g, &[0, 0, 1]).unwrap();
        let q = Objective::ppm(1.0).unwrap().value(&g, &p).unwrap();
        assert!(q.abs() < 1e-15);
        let single = Partition::singletons(&g);
        assert_eq!(Objective::ppm(1.7).unwrap().value(&g, &single).unwrap(), 0.0);
    }

    #[test]
    fn ilfr_mu_one_is_partition_free() {
        let g = triangle();
        let obj = Objective::ilfr(1.0).unwrap();
        let a = obj.value(&g, &Partition::singletons(&g)).unwrap();
        let b = obj.value(&g, &Partition::all_in_one(&g)).unwrap();
        assert!((a - b).abs() < 1e-12);
    }

    #[test]
    fn ilfr_mu_zero() {
        let g = triangle();
        let obj = Objective::ilfr(0.0).unwrap();
        assert_eq!(
            obj.value(&g, &Partition::singletons(&g)).unwrap(),
            f64::NEG_INFINITY
        );
        assert!(obj.value(&g, &Partition::all_in_one(&g)).unwrap().is_finite());
        // merging reduces m_out: infinitely good in the μ → 0 limit
        let p = Partition::singletons(&g);
        assert_eq!(obj.move_gain(&g, &p, 0, 1), f64::INFINITY);
        let p = Partition::from_assignment(&g, &[0, 0, 1]).unwrap();
        assert_eq!(obj.move_gain(&g, &p, 2, 0), f64::INFINITY);
        let mut merged = p.clone();
        merged.move_vertex(&g, 2, 0);
        assert_eq!(obj.move_gain(&g, &merged, 1, 1), f64::NEG_INFINITY);
    }

    #[test]
    fn parameter_validation() {
        assert!(Objective::modularity(-0.1).is_err());
        assert!(Objective::ppm(f64::NAN).is_err());
        assert!(Objective::ilfr(1.2).is_err());
        assert!(Objective::ilfr(0.0).is_ok());
    }

    #[test]
    fn empty_graph_errors() {
        let g = Graph::from_edges(3, &[]).unwrap();
        let p = Partition::singletons(&g);
        assert!(matches!(
            Objective::modularity(1.0).unwrap().value(&g, &p),
            Err(Error::EmptyGraph)
        ));
    }

    #[test]
    fn gain_to_own_community_is_zero() {
        let g = triangle();
        let p = Partition::from_assignment(&g, &[0, 0, 1]).unwrap();
        for obj in [
            Objective::modularity(1.3).unwrap(),
            Objective::ppm(0.4).unwrap(),
            Objective::ilfr(0.3).unwrap(),
        ] {
            assert_eq!(obj.move_gain(&g, &p, 0, 0), 0.0);
        }
    }

    #[test]
    fn kind_parsing() {
        assert_eq!("louvain".parse::<ObjectiveKind>().unwrap(), ObjectiveKind::Modularity);
        assert_eq!("ILFR".parse::<ObjectiveKind>().unwrap(), ObjectiveKind::Ilfr);
        assert!("leiden".parse::<ObjectiveKind>().is_err());
        assert_eq!(ObjectiveKind::Ilfr.default_parameter(), 0.3);
    }
}
