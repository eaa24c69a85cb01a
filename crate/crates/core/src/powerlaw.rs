//! Estimation of LFR benchmark parameters from an observed graph.
//!
//! Power-law exponents are fitted by ordinary least squares on the log-log
//! complementary cumulative distribution: if `P(X ≥ x) ∝ x^s` then the density
//! exponent is `1 − s`.

use std::collections::BTreeMap;
use std::fmt;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::graph::Graph;
use crate::partition::Partition;

/// Size exponent used when a partition has too few distinct community sizes to fit.
pub const FALLBACK_SIZE_EXPONENT: f64 = 1.5;

/// The eight LFR generator parameters.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct LfrParams {
    pub n: usize,
    pub mean_degree: f64,
    pub max_degree: usize,
    pub degree_exponent: f64,
    pub mixing: f64,
    pub size_exponent: f64,
    pub min_community: usize,
    pub max_community: usize,
}

impl LfrParams {
    /// The synthetic benchmark setting `n = 10^4, γ_d = 2.5, d̄ = 20, d_max = 200,
    /// γ_C = 1.5, C_min = 50, C_max = 500` at the given mixing.
    pub fn benchmark(mixing: f64) -> Self {
        Self {
            n: 10_000,
            mean_degree: 20.0,
            max_degree: 200,
            degree_exponent: 2.5,
            mixing,
            size_exponent: 1.5,
            min_community: 50,
            max_community: 500,
        }
    }

    pub fn from_parts(graph: GraphParams, community: CommunityParams) -> Self {
        Self {
            n: graph.n,
            mean_degree: graph.mean_degree,
            max_degree: graph.max_degree,
            degree_exponent: graph.degree_exponent,
            mixing: community.mixing,
            size_exponent: community.size_exponent,
            min_community: community.min_community,
            max_community: community.max_community,
        }
    }

    pub fn validate(&self) -> Result<()> {
        let bad = |msg: String| Err(Error::InvalidParameter(msg));
        if self.n < 2 {
            return bad(format!("n must be at least 2, got {}", self.n));
        }
        if !(self.mean_degree.is_finite() && self.mean_degree >= 1.0) {
            return bad(format!("mean degree must be >= 1, got {}", self.mean_degree));
        }
        if self.max_degree >= self.n {
            return bad(format!(
                "max degree {} must be below n = {}",
                self.max_degree, self.n
            ));
        }
        if !(0.0..=1.0).contains(&self.mixing) {
            return bad(format!("mixing must lie in [0, 1], got {}", self.mixing));
        }
        if !self.degree_exponent.is_finite() || !self.size_exponent.is_finite() {
            return bad("exponents must be finite".into());
        }
        if self.min_community == 0
            || self.min_community > self.max_community
            || self.max_community > self.n
        {
            return bad(format!(
                "need 1 <= c_min <= c_max <= n, got c_min = {}, c_max = {}, n = {}",
                self.min_community, self.max_community, self.n
            ));
        }
        Ok(())
    }
}

impl fmt::Display for LfrParams {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "n={} mean_degree={:.4} max_degree={} degree_exponent={:.4} mixing={:.4} \
             size_exponent={:.4} min_community={} max_community={}",
            self.n,
            self.mean_degree,
            self.max_degree,
            self.degree_exponent,
            self.mixing,
            self.size_exponent,
            self.min_community,
            self.max_community
        )
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct GraphParams {
    pub n: usize,
    pub mean_degree: f64,
    pub max_degree: usize,
    pub degree_exponent: f64,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct CommunityParams {
    pub mixing: f64,
    pub size_exponent: f64,
    pub min_community: usize,
    pub max_community: usize,
    /// True when the size exponent is the fallback value rather than a fit.
    pub size_exponent_fallback: bool,
}

/// Which empirical tail is regressed.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum TailKind {
    /// `P(X ≥ x)` at every distinct value.
    #[default]
    Ccdf,
    /// `P(X > x)`, which drops the largest value (its tail is empty).
    CdfTail,
}

#[derive(Debug, Clone, Copy, PartialEq, Default, Serialize, Deserialize)]
pub struct PowerLawFit {
    pub tail: TailKind,
    /// Ignore values below this.
    pub min_value: Option<u64>,
}

/// Fits the density exponent of a power law to positive integer samples.
pub fn fit_powerlaw_exponent(values: &[u64]) -> Result<f64> {
    fit_powerlaw_exponent_with(values, PowerLawFit::default())
}

pub fn fit_powerlaw_exponent_with(values: &[u64], fit: PowerLawFit) -> Result<f64> {
    let mut hist: BTreeMap<u64, f64> = BTreeMap::new();
    for &v in values {
        if v == 0 {
            return Err(Error::InvalidParameter(
                "power-law samples must be >= 1".into(),
            ));
        }
        *hist.entry(v).or_insert(0.0) += 1.0;
    }
    fit_histogram(&hist.into_iter().collect::<Vec<_>>(), fit)
}

/// Same fit from `(value, weight)` pairs; weights need not be integers.
pub fn fit_histogram(hist: &[(u64, f64)], fit: PowerLawFit) -> Result<f64> {
    let mut points: Vec<(u64, f64)> = hist
        .iter()
        .copied()
        .filter(|&(x, w)| w > 0.0 && fit.min_value.is_none_or(|m| x >= m))
        .collect();
    points.sort_by_key(|&(x, _)| x);
    points.dedup_by(|b, a| {
        if a.0 == b.0 {
            a.1 += b.1;
            true
        } else {
            false
        }
    });
    if points.len() < 3 {
        return Err(Error::DegenerateDistribution(format!(
            "need at least 3 distinct values, got {}",
            points.len()
        )));
    }
    let total: f64 = points.iter().map(|p| p.1).sum();
    let mut remaining = total;
    let mut xs = Vec::with_capacity(points.len());
    let mut ys = Vec::with_capacity(points.len());
    for &(x, w) in &points {
        let tail = match fit.tail {
            TailKind::Ccdf => remaining,
            TailKind::CdfTail => remaining - w,
        };
        remaining -= w;
        if tail <= 0.0 {
            continue;
        }
        xs.push((x as f64).ln());
        ys.push((tail / total).ln());
    }
    if xs.len() < 2 {
        return Err(Error::DegenerateDistribution(
            "tail has fewer than 2 points".into(),
        ));
    }
    Ok(1.0 - ols_slope(&xs, &ys))
}

fn ols_slope(xs: &[f64], ys: &[f64]) -> f64 {
    let n = xs.len() as f64;
    let mx = xs.iter().sum::<f64>() / n;
    let my = ys.iter().sum::<f64>() / n;
    let (mut sxy, mut sxx) = (0.0, 0.0);
    for (x, y) in xs.iter().zip(ys) {
        sxy += (x - mx) * (y - my);
        sxx += (x - mx) * (x - mx);
    }
    sxy / sxx
}

/// `n`, mean degree `2m/n`, maximum degree and fitted degree exponent.
pub fn estimate_graph_params(graph: &Graph) -> Result<GraphParams> {
    estimate_graph_params_with(graph, PowerLawFit::default())
}

pub fn estimate_graph_params_with(graph: &Graph, fit: PowerLawFit) -> Result<GraphParams> {
    let n = graph.n();
    if n == 0 || graph.edge_count() == 0 {
        return Err(Error::EmptyGraph);
    }
    let degrees: Vec<u64> = (0..n)
        .map(|v| graph.unweighted_degree(v) as u64)
        .filter(|&d| d > 0)
        .collect();
    let degree_exponent = fit_powerlaw_exponent_with(&degrees, fit)?;
    Ok(GraphParams {
        n,
        mean_degree: 2.0 * graph.edge_count() as f64 / n as f64,
        max_degree: degrees.iter().copied().max().unwrap_or(0) as usize,
        degree_exponent,
    })
}

/// Mixing `m_out/m`, size exponent and size range of `partition`.
pub fn estimate_community_params(graph: &Graph, partition: &Partition) -> Result<CommunityParams> {
    estimate_community_params_with(graph, partition, PowerLawFit::default())
}

pub fn estimate_community_params_with(
    graph: &Graph,
    partition: &Partition,
    fit: PowerLawFit,
) -> Result<CommunityParams> {
    partition.check_graph(graph)?;
    let sizes: Vec<u64> = partition
        .community_sizes()
        .iter()
        .filter(|&&s| s > 0)
        .map(|&s| s as u64)
        .collect();
    if sizes.is_empty() {
        return Err(Error::PartitionMismatch("partition is empty".into()));
    }
    let mixing = crate::graph::mixing_fraction(graph, partition)?;
    let (size_exponent, size_exponent_fallback) = match fit_powerlaw_exponent_with(&sizes, fit) {
        Ok(e) => (e, false),
        Err(Error::DegenerateDistribution(why)) => {
            log::warn!(
                "community size fit failed ({why}); using size exponent {FALLBACK_SIZE_EXPONENT}"
            );
            (FALLBACK_SIZE_EXPONENT, true)
        }
        Err(e) => return Err(e),
    };
    Ok(CommunityParams {
        mixing,
        size_exponent,
        min_community: *sizes.iter().min().unwrap() as usize,
        max_community: *sizes.iter().max().unwrap() as usize,
        size_exponent_fallback,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    /// Histogram whose CCDF is exactly `x^-alpha` on the powers of two up to 1024.
    fn exact_ccdf_histogram(alpha: f64) -> Vec<(u64, f64)> {
        let xs: Vec<u64> = (0..=10).map(|i| 1u64 << i).collect();
        let ccdf = |x: u64| (x as f64).powf(-alpha);
        xs.iter()
            .enumerate()
            .map(|(i, &x)| {
                let next = xs.get(i + 1).map_or(0.0, |&y| ccdf(y));
                (x, ccdf(x) - next)
            })
            .collect()
    }

    #[test]
    fn recovers_exact_ccdf_exponent() {
        let e = fit_histogram(&exact_ccdf_histogram(1.5), PowerLawFit::default()).unwrap();
        assert!((e - 2.5).abs() < 1e-6, "{e}");
    }

    #[test]
    fn integer_counts_realizing_the_ccdf() {
        // 10^12 samples, rounding error in each log-ordinate is ~1e-9
        let hist: Vec<(u64, f64)> = exact_ccdf_histogram(1.5)
            .into_iter()
            .map(|(x, w)| (x, (w * 1e12).round()))
            .collect();
        let e = fit_histogram(&hist, PowerLawFit::default()).unwrap();
        assert!((e - 2.5).abs() < 1e-6, "{e}");
    }

    #[test]
    fn scale_covariance() {
        // multiplying all ordinates by a constant only moves the intercept
        let hist = exact_ccdf_histogram(0.8);
        let scaled: Vec<(u64, f64)> = hist.iter().map(|&(x, w)| (x, w * 37.0)).collect();
        let a = fit_histogram(&hist, PowerLawFit::default()).unwrap();
        let b = fit_histogram(&scaled, PowerLawFit::default()).unwrap();
        assert!((a - b).abs() < 1e-12);
    }

    #[test]
    fn degenerate_inputs() {
        assert!(matches!(
            fit_powerlaw_exponent(&[4, 4, 4, 4]),
            Err(Error::DegenerateDistribution(_))
        ));
        assert!(matches!(
            fit_powerlaw_exponent(&[1, 2, 2]),
            Err(Error::DegenerateDistribution(_))
        ));
        assert!(fit_powerlaw_exponent(&[0, 1, 2, 3]).is_err());
    }

    #[test]
    fn min_value_cutoff_and_tail_kind() {
        let values: Vec<u64> = (1..=50).flat_map(|x| std::iter::repeat_n(x, 60 / x as usize)).collect();
        let all = fit_powerlaw_exponent(&values).unwrap();
        let cut = fit_powerlaw_exponent_with(
            &values,
            PowerLawFit {
                min_value: Some(5),
                ..Default::default()
            },
        )
        .unwrap();
        let strict = fit_powerlaw_exponent_with(
            &values,
            PowerLawFit {
                tail: TailKind::CdfTail,
                ..Default::default()
            },
        )
        .unwrap();
        assert!(all.is_finite() && cut.is_finite() && strict.is_finite());
        assert_ne!(all, cut);
    }

    #[test]
    fn triangle_params() {
        let g = Graph::from_edges(3, &[(0, 1), (1, 2), (2, 0)]).unwrap();
        assert!(matches!(
            estimate_graph_params(&g),
            Err(Error::DegenerateDistribution(_))
        ));
    }

    #[test]
    fn all_in_one_community_params() {
        let mut edges = Vec::new();
        for v in 1..8 {
            edges.push((0, v));
        }
        edges.push((1, 2));
        let g = Graph::from_edges(8, &edges).unwrap();
        let p = Partition::all_in_one(&g);
        let c = estimate_community_params(&g, &p).unwrap();
        assert_eq!(c.mixing, 0.0);
        assert_eq!((c.min_community, c.max_community), (8, 8));
        assert!(c.size_exponent_fallback);
        assert_eq!(c.size_exponent, FALLBACK_SIZE_EXPONENT);
    }

    #[test]
    fn validation() {
        assert!(LfrParams::benchmark(0.5).validate().is_ok());
        let mut p = LfrParams::benchmark(0.5);
        p.min_community = 600;
        assert!(p.validate().is_err());
        let mut p = LfrParams::benchmark(0.5);
        p.mixing = 1.5;
        assert!(p.validate().is_err());
    }
}
