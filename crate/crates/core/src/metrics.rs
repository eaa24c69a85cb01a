//! Partition similarity: Rand index, Jaccard index and normalized mutual information.
//!
//! All functions take plain label slices (a [`Partition`](crate::Partition) derefs via
//! `AsRef<[usize]>`) and work on the sparse contingency table, so the cost is
//! `O(n log n)` regardless of the number of communities.

use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::partition::densify;

/// Pair classification of two partitions of the same vertex set.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct PairCounts {
    /// Pairs together in both partitions.
    pub n11: u64,
    /// Pairs together in the first partition only.
    pub n10: u64,
    /// Pairs together in the second partition only.
    pub n01: u64,
    /// Pairs separated in both.
    pub n00: u64,
}

impl PairCounts {
    pub fn total(&self) -> u64 {
        self.n11 + self.n10 + self.n01 + self.n00
    }
}

/// Sparse contingency table of two labelings.
struct Contingency {
    n: usize,
    rows: Vec<u64>,
    cols: Vec<u64>,
    cells: Vec<u64>,
}

impl Contingency {
    fn new(a: &[usize], b: &[usize]) -> Result<Self> {
        if a.len() != b.len() {
            return Err(Error::PartitionMismatch(format!(
                "partitions cover {} and {} vertices",
                a.len(),
                b.len()
            )));
        }
        let (a, ka) = densify(a);
        let (b, kb) = densify(b);
        let mut rows = vec![0u64; ka];
        let mut cols = vec![0u64; kb];
        let mut keys: Vec<u64> = a
            .iter()
            .zip(&b)
            .map(|(&x, &y)| {
                rows[x] += 1;
                cols[y] += 1;
                ((x as u64) << 32) | y as u64
            })
            .collect();
        keys.sort_unstable();
        let mut cells = Vec::new();
        let mut i = 0;
        while i < keys.len() {
            let j = keys[i..].partition_point(|&k| k == keys[i]) + i;
            cells.push((j - i) as u64);
            i = j;
        }
        Ok(Self {
            n: a.len(),
            rows,
            cols,
            cells,
        })
    }
}

fn pairs(x: u64) -> u64 {
    x * x.saturating_sub(1) / 2
}

pub fn pair_counts(a: impl AsRef<[usize]>, b: impl AsRef<[usize]>) -> Result<PairCounts> {
    let t = Contingency::new(a.as_ref(), b.as_ref())?;
    let n11: u64 = t.cells.iter().map(|&c| pairs(c)).sum();
    let together_a: u64 = t.rows.iter().map(|&c| pairs(c)).sum();
    let together_b: u64 = t.cols.iter().map(|&c| pairs(c)).sum();
    let total = pairs(t.n as u64);
    let n10 = together_a - n11;
    let n01 = together_b - n11;
    Ok(PairCounts {
        n11,
        n10,
        n01,
        n00: total - n11 - n10 - n01,
    })
}

fn require_pairs(n: usize) -> Result<()> {
    if n < 2 {
        return Err(Error::SampleTooSmall(format!(
            "pair-counting index needs at least 2 vertices, got {n}"
        )));
    }
    Ok(())
}

pub fn rand_index(a: impl AsRef<[usize]>, b: impl AsRef<[usize]>) -> Result<f64> {
    require_pairs(a.as_ref().len())?;
    let c = pair_counts(a, b)?;
    Ok((c.n11 + c.n00) as f64 / c.total() as f64)
}

/// `n11 / (n11 + n10 + n01)`; 1 when both partitions are all singletons.
pub fn jaccard_index(a: impl AsRef<[usize]>, b: impl AsRef<[usize]>) -> Result<f64> {
    require_pairs(a.as_ref().len())?;
    let c = pair_counts(a, b)?;
    let denom = c.n11 + c.n10 + c.n01;
    if denom == 0 {
        return Ok(1.0);
    }
    Ok(c.n11 as f64 / denom as f64)
}

/// How mutual information is normalized by the two entropies.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum NmiNormalization {
    /// `sqrt(H1 * H2)`
    #[default]
    Geometric,
    /// `(H1 + H2) / 2`
    Arithmetic,
    /// `max(H1, H2)`
    Max,
}

impl FromStr for NmiNormalization {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "geometric" => Ok(Self::Geometric),
            "arithmetic" => Ok(Self::Arithmetic),
            "max" => Ok(Self::Max),
            _ => Err(Error::InvalidParameter(format!(
                "unknown NMI normalization `{s}`"
            ))),
        }
    }
}

pub fn nmi(a: impl AsRef<[usize]>, b: impl AsRef<[usize]>) -> Result<f64> {
    nmi_with(a, b, NmiNormalization::Geometric)
}

/// NMI with natural logarithms. Two zero-entropy partitions score 1; exactly one
/// zero entropy scores 0.
pub fn nmi_with(
    a: impl AsRef<[usize]>,
    b: impl AsRef<[usize]>,
    normalization: NmiNormalization,
) -> Result<f64> {
    let t = Contingency::new(a.as_ref(), b.as_ref())?;
    if t.n == 0 {
        return Ok(1.0);
    }
    let n = t.n as f64;
    let entropy = |counts: &[u64]| -> f64 {
        -counts
            .iter()
            .map(|&c| {
                let p = c as f64 / n;
                p * p.ln()
            })
            .sum::<f64>()
    };
    let h1 = entropy(&t.rows);
    let h2 = entropy(&t.cols);
    let zero1 = t.rows.len() <= 1;
    let zero2 = t.cols.len() <= 1;
    if zero1 && zero2 {
        return Ok(1.0);
    }
    if zero1 || zero2 {
        return Ok(0.0);
    }
    // I = H1 + H2 - H12
    let h12 = entropy(&t.cells);
    let mi = (h1 + h2 - h12).max(0.0);
    let norm = match normalization {
        NmiNormalization::Geometric => (h1 * h2).sqrt(),
        NmiNormalization::Arithmetic => 0.5 * (h1 + h2),
        NmiNormalization::Max => h1.max(h2),
    };
    Ok((mi / norm).clamp(0.0, 1.0))
}

/// Quality function used to compare a detected partition with ground truth.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Metric {
    Rand,
    Jaccard,
    Nmi,
}

impl Metric {
    pub const ALL: [Metric; 3] = [Metric::Rand, Metric::Jaccard, Metric::Nmi];

    pub fn evaluate(&self, a: impl AsRef<[usize]>, b: impl AsRef<[usize]>) -> Result<f64> {
        match self {
            Metric::Rand => rand_index(a, b),
            Metric::Jaccard => jaccard_index(a, b),
            Metric::Nmi => nmi(a, b),
        }
    }

    pub fn name(&self) -> &'static str {
        match self {
            Metric::Rand => "rand",
            Metric::Jaccard => "jaccard",
            Metric::Nmi => "nmi",
        }
    }
}

impl fmt::Display for Metric {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for Metric {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.to_ascii_lowercase().as_str() {
            "rand" => Ok(Metric::Rand),
            "jaccard" => Ok(Metric::Jaccard),
            "nmi" => Ok(Metric::Nmi),
            _ => Err(Error::InvalidParameter(format!("unknown metric `{s}`"))),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    // {1,2}{3,4} vs {1,2,3}{4}, zero-based
    const A: [usize; 4] = [0, 0, 1, 1];
    const B: [usize; 4] = [0, 0, 0, 1];

    #[test]
    fn pair_counts_examples() {
        let c = pair_counts(A, A).unwrap();
        assert_eq!((c.n10, c.n01), (0, 0));
        let c = pair_counts(A, B).unwrap();
        assert_eq!((c.n11, c.n10, c.n01, c.n00), (1, 1, 2, 2));
        let c = pair_counts([0, 1, 2, 3], [0, 0, 0, 0]).unwrap();
        assert_eq!((c.n11, c.n10, c.n01, c.n00), (0, 0, 6, 0));
    }

    #[test]
    fn rand_examples() {
        assert_eq!(rand_index(A, A).unwrap(), 1.0);
        assert_eq!(rand_index(A, B).unwrap(), 0.5);
        assert_eq!(rand_index([0, 1, 2, 3], [0, 0, 0, 0]).unwrap(), 0.0);
        assert!(rand_index([0], [0]).is_err());
    }

    #[test]
    fn jaccard_examples() {
        assert_eq!(jaccard_index(A, A).unwrap(), 1.0);
        assert_eq!(jaccard_index(A, B).unwrap(), 0.25);
        assert_eq!(jaccard_index([0, 1, 2], [2, 1, 0]).unwrap(), 1.0);
    }

    #[test]
    fn nmi_examples() {
        assert!((nmi(A, A).unwrap() - 1.0).abs() < 1e-15);
        assert!(nmi(A, [0, 1, 0, 1]).unwrap().abs() < 1e-15);
        assert_eq!(nmi([0, 0, 0], [1, 1, 1]).unwrap(), 1.0);
        assert_eq!(nmi([0, 0, 0], [0, 1, 1]).unwrap(), 0.0);
        assert!(nmi([0, 0], [0, 0, 0]).is_err());
    }

    #[test]
    fn nmi_normalizations_order() {
        let a = [0, 0, 0, 1, 1, 2];
        let b = [0, 0, 1, 1, 1, 1];
        let g = nmi_with(a, b, NmiNormalization::Geometric).unwrap();
        let ar = nmi_with(a, b, NmiNormalization::Arithmetic).unwrap();
        let mx = nmi_with(a, b, NmiNormalization::Max).unwrap();
        // max >= arithmetic >= geometric mean of the entropies
        assert!(mx <= ar && ar <= g);
    }

    fn labels(n: usize) -> impl Strategy<Value = (Vec<usize>, Vec<usize>)> {
        (
            prop::collection::vec(0..n, n),
            prop::collection::vec(0..n, n),
        )
    }

    proptest! {
        #[test]
        fn symmetric_and_bounded((a, b) in (2usize..12).prop_flat_map(labels)) {
            for m in Metric::ALL {
                let ab = m.evaluate(&a, &b).unwrap();
                let ba = m.evaluate(&b, &a).unwrap();
                prop_assert!((ab - ba).abs() < 1e-12);
                prop_assert!((0.0..=1.0).contains(&ab));
            }
        }

        #[test]
        fn relabel_invariant((a, b) in (2usize..12).prop_flat_map(labels)) {
            let shifted: Vec<usize> = a.iter().map(|&x| 1000 - x * 7).collect();
            for m in Metric::ALL {
                let x = m.evaluate(&a, &b).unwrap();
                let y = m.evaluate(&shifted, &b).unwrap();
                prop_assert!((x - y).abs() < 1e-12);
            }
        }

        #[test]
        fn self_similarity((a, _) in (2usize..12).prop_flat_map(labels)) {
            prop_assert_eq!(rand_index(&a, &a).unwrap(), 1.0);
            prop_assert_eq!(jaccard_index(&a, &a).unwrap(), 1.0);
            let k = densify(&a).1;
            if k > 1 {
                prop_assert!((nmi(&a, &a).unwrap() - 1.0).abs() < 1e-12);
            }
        }
    }
}
