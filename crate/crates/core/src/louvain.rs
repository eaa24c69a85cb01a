//! Multi-level greedy local-move optimization (Louvain) over any [`Objective`].

use std::borrow::Cow;

use rand::seq::SliceRandom;
use rand::Rng;

use crate::error::{Error, Result};
use crate::graph::{aggregate, Graph};
use crate::objective::{move_stats, Objective, MIN_GAIN};
use crate::partition::Partition;
use crate::seed::rng_from_seed;

#[derive(Debug, Clone)]
pub struct DetectionResult {
    /// Partition of the original vertices, community ids dense.
    pub partition: Partition,
    pub objective_value: f64,
    /// Number of aggregation levels performed.
    pub levels: usize,
    pub seed: u64,
}

/// Sweeps all vertices in a fresh random order, moving each to the adjacent
/// community of largest positive gain, until a full sweep moves nothing.
///
/// Returns whether any vertex moved. Ties between targets of equal gain go to the
/// lowest community id.
pub fn local_move_phase<R: Rng + ?Sized>(
    graph: &Graph,
    objective: &Objective,
    partition: &mut Partition,
    rng: &mut R,
) -> bool {
    let n = graph.n();
    let mut order: Vec<usize> = (0..n).collect();
    let mut link = vec![0.0f64; partition.num_communities()];
    let mut seen = vec![false; partition.num_communities()];
    let mut touched: Vec<usize> = Vec::new();
    let mut improved = false;
    loop {
        order.shuffle(rng);
        let mut moved = false;
        for &v in &order {
            let own = partition.community_of(v);
            for (u, w) in graph.neighbors(v) {
                let c = partition.community_of(u);
                if !seen[c] {
                    seen[c] = true;
                    touched.push(c);
                }
                link[c] += w;
            }
            let k_own = link[own];
            let mut best: Option<(usize, f64, f64)> = None;
            for &c in &touched {
                if c == own {
                    continue;
                }
                let gain = objective.gain(&move_stats(graph, partition, v, c, k_own, link[c]));
                let better = match best {
                    None => gain > MIN_GAIN,
                    Some((bc, bg, _)) => gain > bg || (gain == bg && c < bc),
                };
                if better {
                    best = Some((c, gain, link[c]));
                }
            }
            for &c in &touched {
                link[c] = 0.0;
                seen[c] = false;
            }
            touched.clear();
            if let Some((target, gain, k_target)) = best {
                debug_assert!(gain > 0.0);
                partition.apply_move(graph, v, target, k_own, k_target);
                moved = true;
            }
        }
        if !moved {
            break;
        }
        improved = true;
    }
    improved
}

/// Runs the full multi-level optimization, deterministic in `(graph, objective, seed)`.
pub fn detect(graph: &Graph, objective: &Objective, seed: u64) -> Result<DetectionResult> {
    if graph.total_weight_2m() <= 0.0 {
        return Err(Error::EmptyGraph);
    }
    let mut rng = rng_from_seed(seed);
    let mut level: Cow<'_, Graph> = Cow::Borrowed(graph);
    let mut membership: Vec<usize> = (0..graph.n()).collect();
    let mut levels = 0;
    #[cfg(debug_assertions)]
    let mut last_value = f64::NEG_INFINITY;
    loop {
        let mut partition = Partition::singletons(&level);
        if !local_move_phase(&level, objective, &mut partition, &mut rng) {
            break;
        }
        partition.compact();
        #[cfg(debug_assertions)]
        {
            let value = objective.value(&level, &partition)?;
            debug_assert!(
                value >= last_value - 1e-9 || value.is_nan(),
                "objective decreased across levels: {last_value} -> {value}"
            );
            last_value = value;
        }
        for m in membership.iter_mut() {
            *m = partition.community_of(*m);
        }
        level = Cow::Owned(aggregate(&level, &partition));
        levels += 1;
    }
    let partition = Partition::from_assignment(graph, &membership)?;
    let objective_value = objective.value(graph, &partition)?;
    Ok(DetectionResult {
        partition,
        objective_value,
        levels,
        seed,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::seed::rng_from_seed;

    fn clique_edges(offset: usize, k: usize, edges: &mut Vec<(usize, usize)>) {
        for u in 0..k {
            for v in u + 1..k {
                edges.push((offset + u, offset + v));
            }
        }
    }

    #[test]
    fn two_disjoint_cliques() {
        let mut edges = Vec::new();
        clique_edges(0, 4, &mut edges);
        clique_edges(4, 4, &mut edges);
        let g = Graph::from_edges(8, &edges).unwrap();
        let obj = Objective::modularity(1.0).unwrap();
        let mut p = Partition::singletons(&g);
        assert!(local_move_phase(&g, &obj, &mut p, &mut rng_from_seed(3)));
        p.compact();
        assert_eq!(p.num_communities(), 2);
        assert!((0..4).all(|v| p.community_of(v) == p.community_of(0)));
        assert!((4..8).all(|v| p.community_of(v) == p.community_of(4)));
    }

    #[test]
    fn k5_collapses() {
        let mut edges = Vec::new();
        clique_edges(0, 5, &mut edges);
        let g = Graph::from_edges(5, &edges).unwrap();
        let obj = Objective::modularity(1.0).unwrap();
        for seed in 0..20 {
            let r = detect(&g, &obj, seed).unwrap();
            assert_eq!(r.partition.num_communities(), 1);
            assert!(r.objective_value.abs() < 1e-15);
        }
    }

    #[test]
    fn fixed_point_is_not_improved() {
        let mut edges = Vec::new();
        clique_edges(0, 4, &mut edges);
        clique_edges(4, 4, &mut edges);
        let g = Graph::from_edges(8, &edges).unwrap();
        let obj = Objective::modularity(1.0).unwrap();
        let mut p = Partition::from_assignment(&g, &[0, 0, 0, 0, 1, 1, 1, 1]).unwrap();
        let before = p.clone();
        assert!(!local_move_phase(&g, &obj, &mut p, &mut rng_from_seed(1)));
        assert_eq!(p, before);
    }

    #[test]
    fn deterministic_per_seed() {
        let mut edges = Vec::new();
        for c in 0..6 {
            clique_edges(c * 5, 5, &mut edges);
            edges.push((c * 5, ((c + 1) % 6) * 5 + 1));
        }
        let g = Graph::from_edges(30, &edges).unwrap();
        let obj = Objective::modularity(1.0).unwrap();
        let a = detect(&g, &obj, 42).unwrap();
        let b = detect(&g, &obj, 42).unwrap();
        assert_eq!(a.partition, b.partition);
        assert_eq!(a.objective_value.to_bits(), b.objective_value.to_bits());
    }

    #[test]
    fn empty_graph_rejected() {
        let g = Graph::from_edges(4, &[]).unwrap();
        assert!(matches!(
            detect(&g, &Objective::modularity(1.0).unwrap(), 0),
            Err(Error::EmptyGraph)
        ));
    }

    #[test]
    fn ilfr_mu_zero_merges_components() {
        let mut edges = Vec::new();
        clique_edges(0, 4, &mut edges);
        clique_edges(4, 4, &mut edges);
        edges.push((3, 4));
        let g = Graph::from_edges(8, &edges).unwrap();
        let r = detect(&g, &Objective::ilfr(0.0).unwrap(), 5).unwrap();
        assert_eq!(r.partition.num_communities(), 1);
        assert!(r.objective_value.is_finite());
    }
}
