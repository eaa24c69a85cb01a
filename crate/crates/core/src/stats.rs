//! Unpaired two-sample significance testing.

use serde::{Deserialize, Serialize};
use statrs::distribution::{ContinuousCDF, StudentsT};

use crate::error::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SignificanceResult {
    pub mean_default: f64,
    pub sd_default: f64,
    pub mean_tuned: f64,
    pub sd_tuned: f64,
    pub t_statistic: f64,
    /// Two-sided.
    pub p_value: f64,
    /// Welch–Satterthwaite degrees of freedom.
    pub df: f64,
    /// Size of the smaller sample.
    pub runs_per_arm: usize,
}

/// Mean and sample standard deviation (`n − 1` denominator).
pub fn mean_sd(values: &[f64]) -> (f64, f64) {
    let n = values.len() as f64;
    if values.is_empty() {
        return (f64::NAN, f64::NAN);
    }
    let mean = values.iter().sum::<f64>() / n;
    if values.len() < 2 {
        return (mean, 0.0);
    }
    let ss: f64 = values.iter().map(|x| (x - mean) * (x - mean)).sum();
    (mean, (ss / (n - 1.0)).sqrt())
}

/// Welch's unequal-variance t-test of `a` (default arm) against `b` (tuned arm).
///
/// When both samples have zero variance the statistic is 0 with p = 1 if the
/// means agree, and infinite with p = 0 otherwise.
pub fn welch_t_test(a: &[f64], b: &[f64]) -> Result<SignificanceResult> {
    if a.len() < 2 || b.len() < 2 {
        return Err(Error::SampleTooSmall(format!(
            "t-test needs at least 2 values per sample, got {} and {}",
            a.len(),
            b.len()
        )));
    }
    let (ma, sa) = mean_sd(a);
    let (mb, sb) = mean_sd(b);
    let (na, nb) = (a.len() as f64, b.len() as f64);
    let (va, vb) = (sa * sa / na, sb * sb / nb);
    let se2 = va + vb;
    let constant = |x: &[f64]| x.iter().all(|&v| v == x[0]);
    let (t, p, df) = if constant(a) && constant(b) {
        let (ma, mb) = (a[0], b[0]);
        if ma == mb {
            (0.0, 1.0, na + nb - 2.0)
        } else {
            let t = if ma < mb { f64::NEG_INFINITY } else { f64::INFINITY };
            (t, 0.0, na + nb - 2.0)
        }
    } else {
        let t = (ma - mb) / se2.sqrt();
        let df = se2 * se2 / (va * va / (na - 1.0) + vb * vb / (nb - 1.0));
        let dist = StudentsT::new(0.0, 1.0, df).map_err(|e| {
            Error::InvalidParameter(format!("Student-t with df = {df}: {e}"))
        })?;
        // sf on |t| keeps precision for tiny p-values
        let p = (2.0 * dist.sf(t.abs())).min(1.0);
        (t, p, df)
    };
    Ok(SignificanceResult {
        mean_default: ma,
        sd_default: sa,
        mean_tuned: mb,
        sd_tuned: sb,
        t_statistic: t,
        p_value: p,
        df,
        runs_per_arm: a.len().min(b.len()),
    })
}
