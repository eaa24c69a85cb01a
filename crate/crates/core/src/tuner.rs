//! Label-free tuning of a detection algorithm's parameter.
//!
//! The observed graph is summarized by LFR parameters (degree statistics from the
//! graph, mixing and community sizes from a default-parameter detection run).
//! Synthetic instances with planted communities are generated from them, every
//! candidate is scored against the planted truth, and the median of the per-graph
//! winners is returned.

use std::fmt::Write as _;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::experiment::format_number;
use crate::graph::Graph;
use crate::lfr::{generate_lfr, LfrConfig, LfrInstance};
use crate::louvain::detect;
use crate::metrics::Metric;
use crate::objective::{Objective, ObjectiveKind};
use crate::partition::Partition;
use crate::powerlaw::{estimate_community_params, estimate_graph_params, LfrParams};
use crate::seed::{derive_seed, domain};

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct TuneConfig {
    pub candidates: Vec<f64>,
    pub default_param: f64,
    pub metric: Metric,
    pub n_graphs: usize,
    pub n_runs: usize,
    pub master_seed: u64,
    pub lfr: LfrConfig,
}

impl TuneConfig {
    pub fn new(kind: ObjectiveKind, candidates: Vec<f64>) -> Self {
        Self {
            candidates,
            default_param: kind.default_parameter(),
            metric: Metric::Nmi,
            n_graphs: 10,
            n_runs: 10,
            master_seed: 0,
            lfr: LfrConfig::default(),
        }
    }

    fn validate(&self, kind: ObjectiveKind) -> Result<()> {
        if self.candidates.is_empty() {
            return Err(Error::InvalidParameter("candidate list is empty".into()));
        }
        if self.n_graphs == 0 || self.n_runs == 0 {
            return Err(Error::InvalidParameter(
                "n_graphs and n_runs must be positive".into(),
            ));
        }
        kind.objective(self.default_param)?;
        for &c in &self.candidates {
            kind.objective(c)?;
        }
        Ok(())
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct TuneReport {
    pub family: ObjectiveKind,
    pub metric: Metric,
    pub default_param: f64,
    pub chosen: f64,
    pub candidates: Vec<f64>,
    pub per_graph_best: Vec<f64>,
    /// Mean quality, indexed `[graph][candidate]`.
    pub quality_table: Vec<Vec<f64>>,
    pub params: LfrParams,
    /// Labels of the default-parameter run on the observed graph.
    pub default_assignment: Vec<usize>,
    /// Why the default parameter was returned without a search, if it was.
    pub fallback: Option<String>,
}

impl TuneReport {
    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("report serializes")
    }

    pub fn to_text(&self) -> String {
        let mut s = String::new();
        let name = self.family.parameter_name();
        let _ = writeln!(s, "algorithm: {}", self.family.algorithm_name());
        let _ = writeln!(s, "metric: {}", self.metric);
        let _ = writeln!(s, "default_{name}: {}", format_number(self.default_param));
        let _ = writeln!(s, "chosen_{name}: {}", format_number(self.chosen));
        let best: Vec<String> = self.per_graph_best.iter().map(|&x| format_number(x)).collect();
        let _ = writeln!(s, "per_graph_best: {}", best.join(" "));
        let _ = writeln!(s, "estimated: {}", self.params);
        let k = crate::partition::densify(&self.default_assignment).1;
        let _ = writeln!(s, "default_communities: {k}");
        if let Some(why) = &self.fallback {
            let _ = writeln!(s, "fallback: {why}");
        }
        if !self.quality_table.is_empty() {
            let _ = writeln!(s);
            let header: Vec<String> = self.candidates.iter().map(|&c| format_number(c)).collect();
            let _ = writeln!(s, "graph\t{}", header.join("\t"));
            for (i, row) in self.quality_table.iter().enumerate() {
                let cells: Vec<String> = row.iter().map(|&q| format_number(q)).collect();
                let _ = writeln!(s, "{i}\t{}", cells.join("\t"));
            }
        }
        s
    }
}

/// Middle order statistic; the lower of the two middle values for even counts.
pub fn median_param(values: &[f64]) -> Result<f64> {
    if values.is_empty() {
        return Err(Error::SampleTooSmall("median of an empty list".into()));
    }
    let mut sorted = values.to_vec();
    sorted.sort_by(f64::total_cmp);
    Ok(sorted[(sorted.len() - 1) / 2])
}

/// Mean quality of `objective` on `graph` against `truth` over one run per seed.
pub fn mean_quality(
    graph: &Graph,
    truth: &Partition,
    objective: &Objective,
    metric: Metric,
    seeds: &[u64],
) -> Result<f64> {
    if seeds.is_empty() {
        return Err(Error::SampleTooSmall("no runs requested".into()));
    }
    let qualities = seeds
        .par_iter()
        .map(|&seed| {
            let r = detect(graph, objective, seed)?;
            metric.evaluate(&r.partition, truth)
        })
        .collect::<Result<Vec<f64>>>()?;
    Ok(qualities.iter().sum::<f64>() / seeds.len() as f64)
}

/// Seed of detection run `run` with `candidate` on synthetic graph `graph`.
/// Keyed by the candidate's value so that editing the grid leaves other cells alone.
pub fn run_seed(master: u64, graph: usize, candidate: f64, run: usize) -> u64 {
    derive_seed(
        master,
        &[domain::RUN, graph as u64, candidate.to_bits(), run as u64],
    )
}

pub fn graph_seed(master: u64, graph: usize) -> u64 {
    derive_seed(master, &[domain::GRAPH, graph as u64])
}

pub fn default_run_seed(master: u64) -> u64 {
    derive_seed(master, &[domain::DEFAULT_RUN])
}

/// Index of the best mean quality; exact ties go to the candidate nearest the
/// default, then to the smaller value.
fn argmax(row: &[f64], candidates: &[f64], default: f64) -> usize {
    let mut best = 0;
    for j in 1..row.len() {
        let (q, bq) = (row[j], row[best]);
        let closer = (candidates[j] - default).abs() < (candidates[best] - default).abs();
        let same_dist = (candidates[j] - default).abs() == (candidates[best] - default).abs();
        if q > bq
            || (q == bq && (closer || (same_dist && candidates[j] < candidates[best])))
            || (bq.is_nan() && !q.is_nan())
        {
            best = j;
        }
    }
    best
}

pub fn tune(graph: &Graph, kind: ObjectiveKind, config: &TuneConfig) -> Result<TuneReport> {
    let mut reports = tune_metrics(graph, kind, config, &[config.metric])?;
    Ok(reports.remove(0))
}

/// Synthetic instances built from the observed graph, shared by every metric.
pub struct TuningSetup {
    pub params: LfrParams,
    pub default_assignment: Vec<usize>,
    pub instances: Vec<LfrInstance>,
    pub fallback: Option<String>,
}

/// Estimates LFR parameters from `graph` and a default run, then generates the
/// synthetic instances.
pub fn prepare(graph: &Graph, kind: ObjectiveKind, config: &TuneConfig) -> Result<TuningSetup> {
    config.validate(kind)?;
    let graph_params = estimate_graph_params(graph)?;
    let default = detect(
        graph,
        &kind.objective(config.default_param)?,
        default_run_seed(config.master_seed),
    )?;
    let degenerate = default.partition.nonempty_communities() <= 1;
    if degenerate {
        log::warn!("default run found a single community; synthetic graphs will have one community");
    }
    let community_params = estimate_community_params(graph, &default.partition)?;
    let params = LfrParams::from_parts(graph_params, community_params);
    let default_assignment = default.partition.assignment().to_vec();

    let generated = (0..config.n_graphs)
        .into_par_iter()
        .map(|i| generate_lfr(&params, &config.lfr, graph_seed(config.master_seed, i)))
        .collect::<Result<Vec<_>>>();
    match generated {
        Ok(instances) => Ok(TuningSetup {
            params,
            default_assignment,
            instances,
            fallback: None,
        }),
        Err(e) if degenerate && (e.is_infeasible_generation() || matches!(e, Error::InvalidParameter(_))) => {
            log::warn!("generation failed for a single-community default run ({e}); keeping the default parameter");
            Ok(TuningSetup {
                params,
                default_assignment,
                instances: Vec::new(),
                fallback: Some(format!("single-community default run, generation failed: {e}")),
            })
        }
        Err(e) => Err(Error::Generation {
            params: Box::new(params),
            source: Box::new(e),
        }),
    }
}

/// Runs the tuning loop once and scores each detection under every metric in `metrics`.
pub fn tune_metrics(
    graph: &Graph,
    kind: ObjectiveKind,
    config: &TuneConfig,
    metrics: &[Metric],
) -> Result<Vec<TuneReport>> {
    if metrics.is_empty() {
        return Err(Error::InvalidParameter("no metric selected".into()));
    }
    let setup = prepare(graph, kind, config)?;
    tune_prepared(&setup, kind, config, metrics)
}

pub fn tune_prepared(
    setup: &TuningSetup,
    kind: ObjectiveKind,
    config: &TuneConfig,
    metrics: &[Metric],
) -> Result<Vec<TuneReport>> {
    let report = |metric: Metric, chosen: f64, best: Vec<f64>, table: Vec<Vec<f64>>| TuneReport {
        family: kind,
        metric,
        default_param: config.default_param,
        chosen,
        candidates: config.candidates.clone(),
        per_graph_best: best,
        quality_table: table,
        params: setup.params.clone(),
        default_assignment: setup.default_assignment.clone(),
        fallback: setup.fallback.clone(),
    };
    if setup.instances.is_empty() {
        return Ok(metrics
            .iter()
            .map(|&m| report(m, config.default_param, Vec::new(), Vec::new()))
            .collect());
    }

    let (g, c, r) = (setup.instances.len(), config.candidates.len(), config.n_runs);
    let cells: Vec<Vec<f64>> = (0..g * c * r)
        .into_par_iter()
        .map(|idx| {
            let (i, rest) = (idx / (c * r), idx % (c * r));
            let (j, run) = (rest / r, rest % r);
            let inst = &setup.instances[i];
            let theta = config.candidates[j];
            let result = detect(
                &inst.graph,
                &kind.objective(theta)?,
                run_seed(config.master_seed, i, theta, run),
            )?;
            metrics
                .iter()
                .map(|m| m.evaluate(&result.partition, &inst.ground_truth))
                .collect::<Result<Vec<f64>>>()
        })
        .collect::<Result<_>>()?;

    metrics
        .iter()
        .enumerate()
        .map(|(mi, &metric)| {
            let table: Vec<Vec<f64>> = (0..g)
                .map(|i| {
                    (0..c)
                        .map(|j| {
                            let base = (i * c + j) * r;
                            cells[base..base + r].iter().map(|q| q[mi]).sum::<f64>() / r as f64
                        })
                        .collect()
                })
                .collect();
            let best: Vec<f64> = table
                .iter()
                .map(|row| config.candidates[argmax(row, &config.candidates, config.default_param)])
                .collect();
            let chosen = median_param(&best)?;
            Ok(report(metric, chosen, best, table))
        })
        .collect()
}
