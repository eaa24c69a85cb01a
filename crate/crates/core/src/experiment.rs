//! Default-versus-tuned comparisons, stability histograms and the parameter grids
//! and run-count presets used by the command-line tool.

use std::fmt::Write as _;
use std::path::Path;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::graph::Graph;
use crate::io::{read_edge_list, read_labels};
use crate::louvain::detect;
use crate::metrics::Metric;
use crate::objective::ObjectiveKind;
use crate::partition::Partition;
use crate::seed::{derive_seed, domain};
use crate::stats::{mean_sd, welch_t_test, SignificanceResult};
use crate::tuner::{prepare, tune_prepared, TuneConfig, TuneReport};

/// Six significant digits, shortest representation. Text and CSV output both go
/// through here so they always carry the same numbers.
pub fn format_number(x: f64) -> String {
    if !x.is_finite() {
        return format!("{x}");
    }
    let rounded: f64 = format!("{x:.5e}").parse().expect("formatted float parses");
    if rounded == 0.0 {
        return "0".into();
    }
    if (1e-4..1e9).contains(&rounded.abs()) {
        format!("{rounded}")
    } else {
        format!("{rounded:e}")
    }
}

/// Values `start, start + step, ..., stop`, rounded to the step's precision.
pub fn grid_range(start: f64, stop: f64, step: f64) -> Result<Vec<f64>> {
    if !(step > 0.0 && start.is_finite() && stop.is_finite() && stop >= start) {
        return Err(Error::InvalidParameter(format!(
            "bad grid {start}:{stop}:{step}"
        )));
    }
    let count = ((stop - start) / step + 1e-9).floor() as usize + 1;
    if count > 100_000 {
        return Err(Error::InvalidParameter(format!("grid has {count} points")));
    }
    Ok((0..count)
        .map(|i| ((start + i as f64 * step) * 1e9).round() / 1e9)
        .collect())
}

/// Named preset (`real-gamma`, `synthetic-gamma`, `ilfr-mu`), a `start:stop:step`
/// range or a comma-separated list.
pub fn parse_grid(spec: &str) -> Result<Vec<f64>> {
    let num = |s: &str| {
        s.trim()
            .parse::<f64>()
            .map_err(|_| Error::InvalidParameter(format!("bad number `{s}` in grid `{spec}`")))
    };
    match spec {
        "real-gamma" => grid_range(0.0, 2.0, 0.1),
        "synthetic-gamma" => grid_range(0.0, 4.0, 0.2),
        "ilfr-mu" => grid_range(0.0, 1.0, 0.05),
        _ if spec.contains(':') => {
            let parts: Vec<&str> = spec.split(':').collect();
            if parts.len() != 3 {
                return Err(Error::InvalidParameter(format!(
                    "grid `{spec}` is not start:stop:step"
                )));
            }
            grid_range(num(parts[0])?, num(parts[1])?, num(parts[2])?)
        }
        _ => spec.split(',').map(num).collect(),
    }
}

pub fn default_grid(kind: ObjectiveKind) -> Vec<f64> {
    let name = match kind {
        ObjectiveKind::Ilfr => "ilfr-mu",
        _ => "real-gamma",
    };
    parse_grid(name).expect("preset grid")
}

/// Run counts scaled to graph size.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct RunPreset {
    pub n_runs: usize,
    pub n_graphs: usize,
    pub n_runs_eval: usize,
}

impl RunPreset {
    pub fn for_size(n: usize) -> Self {
        match n {
            0..=200 => Self {
                n_runs: 1000,
                n_graphs: 1000,
                n_runs_eval: 10_000,
            },
            201..=5000 => Self {
                n_runs: 100,
                n_graphs: 100,
                n_runs_eval: 1000,
            },
            _ => Self {
                n_runs: 2,
                n_graphs: 100,
                n_runs_eval: 100,
            },
        }
    }
}

/// Reference statistics of the standard real-world datasets, keyed by file stem.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct KnownDataset {
    pub name: &'static str,
    pub n: usize,
    pub m: usize,
    pub clusters: usize,
    pub mixing: f64,
}

pub const KNOWN_DATASETS: [KnownDataset; 8] = [
    KnownDataset { name: "karate", n: 34, m: 78, clusters: 2, mixing: 0.128 },
    KnownDataset { name: "dolphins", n: 62, m: 159, clusters: 2, mixing: 0.038 },
    KnownDataset { name: "football", n: 115, m: 613, clusters: 11, mixing: 0.325 },
    KnownDataset { name: "polbooks", n: 105, m: 441, clusters: 3, mixing: 0.159 },
    KnownDataset { name: "polblogs", n: 1224, m: 16715, clusters: 2, mixing: 0.094 },
    KnownDataset { name: "eu-core", n: 986, m: 16064, clusters: 42, mixing: 0.664 },
    KnownDataset { name: "cora", n: 24166, m: 89157, clusters: 70, mixing: 0.458 },
    KnownDataset { name: "as", n: 23752, m: 58416, clusters: 176, mixing: 0.561 },
];

pub fn known_dataset(name: &str) -> Option<&'static KnownDataset> {
    KNOWN_DATASETS.iter().find(|d| d.name.eq_ignore_ascii_case(name))
}

#[derive(Debug, Clone)]
pub struct Dataset {
    pub name: String,
    pub graph: Graph,
    pub truth: Partition,
}

impl Dataset {
    pub fn new(name: impl Into<String>, graph: Graph, truth: Partition) -> Self {
        Self {
            name: name.into(),
            graph,
            truth,
        }
    }

    /// Loads an edge list and label file; datasets with a known name are checked
    /// against their reference `n` and `m`.
    pub fn load(edges: &Path, labels: &Path) -> Result<Self> {
        let graph = read_edge_list(edges)?;
        let truth = read_labels(labels, &graph)?;
        let name = edges
            .file_stem()
            .map(|s| s.to_string_lossy().into_owned())
            .unwrap_or_else(|| "dataset".into());
        if let Some(k) = known_dataset(&name) {
            if k.n != graph.n() || k.m != graph.edge_count() {
                log::warn!(
                    "{name}: expected n={} m={}, loaded n={} m={}",
                    k.n,
                    k.m,
                    graph.n(),
                    graph.edge_count()
                );
            }
        }
        Ok(Self { name, graph, truth })
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ExperimentSpec {
    pub algorithm: ObjectiveKind,
    pub default_param: f64,
    pub candidates: Vec<f64>,
    pub metrics: Vec<Metric>,
    pub n_runs_eval: usize,
    pub n_runs: usize,
    pub n_graphs: usize,
    pub master_seed: u64,
}

impl ExperimentSpec {
    fn tune_config(&self, dataset: usize) -> TuneConfig {
        TuneConfig {
            candidates: self.candidates.clone(),
            default_param: self.default_param,
            metric: self.metrics[0],
            n_graphs: self.n_graphs,
            n_runs: self.n_runs,
            master_seed: derive_seed(self.master_seed, &[dataset as u64]),
            lfr: Default::default(),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ExperimentRow {
    pub dataset: String,
    pub algorithm: ObjectiveKind,
    pub metric: Metric,
    pub default_param: f64,
    pub tuned_param: f64,
    pub significance: SignificanceResult,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ExperimentResults {
    pub rows: Vec<ExperimentRow>,
    pub reports: Vec<TuneReport>,
}

/// Seed of evaluation run `run` at parameter `theta` on dataset `dataset`; disjoint
/// from every tuning seed by its domain tag.
pub fn eval_seed(master: u64, dataset: usize, theta: f64, run: usize) -> u64 {
    derive_seed(
        master,
        &[domain::EVAL, dataset as u64, theta.to_bits(), run as u64],
    )
}

/// Qualities of `n_runs_eval` seeded runs at `theta`, one vector per metric.
pub fn evaluate_parameter(
    dataset: &Dataset,
    index: usize,
    kind: ObjectiveKind,
    theta: f64,
    metrics: &[Metric],
    n_runs: usize,
    master_seed: u64,
) -> Result<Vec<Vec<f64>>> {
    let objective = kind.objective(theta)?;
    let runs: Vec<Vec<f64>> = (0..n_runs)
        .into_par_iter()
        .map(|r| {
            let res = detect(
                &dataset.graph,
                &objective,
                eval_seed(master_seed, index, theta, r),
            )?;
            metrics
                .iter()
                .map(|m| m.evaluate(&res.partition, &dataset.truth))
                .collect::<Result<Vec<f64>>>()
        })
        .collect::<Result<_>>()?;
    Ok((0..metrics.len())
        .map(|mi| runs.iter().map(|q| q[mi]).collect())
        .collect())
}

/// Tunes on each dataset without labels, then compares default and tuned
/// parameters on fresh evaluation runs against the ground truth.
pub fn run_experiment(spec: &ExperimentSpec, datasets: &[Dataset]) -> Result<ExperimentResults> {
    if spec.metrics.is_empty() {
        return Err(Error::InvalidParameter("no metric selected".into()));
    }
    let mut rows = Vec::new();
    let mut reports = Vec::new();
    for (d, dataset) in datasets.iter().enumerate() {
        let config = spec.tune_config(d);
        let setup = prepare(&dataset.graph, spec.algorithm, &config)?;
        let tuned = tune_prepared(&setup, spec.algorithm, &config, &spec.metrics)?;
        let eval = |theta: f64| {
            evaluate_parameter(
                dataset,
                d,
                spec.algorithm,
                theta,
                &spec.metrics,
                spec.n_runs_eval,
                spec.master_seed,
            )
        };
        let default_q = eval(spec.default_param)?;
        let mut cache: Vec<(f64, Vec<Vec<f64>>)> = Vec::new();
        for (mi, report) in tuned.iter().enumerate() {
            let theta = report.chosen;
            if !cache.iter().any(|(t, _)| *t == theta) {
                cache.push((theta, eval(theta)?));
            }
            let tuned_q = &cache.iter().find(|(t, _)| *t == theta).unwrap().1;
            rows.push(ExperimentRow {
                dataset: dataset.name.clone(),
                algorithm: spec.algorithm,
                metric: report.metric,
                default_param: spec.default_param,
                tuned_param: theta,
                significance: welch_t_test(&default_q[mi], &tuned_q[mi])?,
            });
        }
        reports.extend(tuned);
    }
    Ok(ExperimentResults { rows, reports })
}

const COLUMNS: [&str; 13] = [
    "dataset",
    "algorithm",
    "metric",
    "default_param",
    "default_mean",
    "default_sd",
    "tuned_param",
    "tuned_mean",
    "tuned_sd",
    "t",
    "p",
    "df",
    "runs",
];

impl ExperimentRow {
    fn cells(&self) -> Vec<String> {
        let s = &self.significance;
        vec![
            self.dataset.clone(),
            self.algorithm.algorithm_name().to_string(),
            self.metric.to_string(),
            format_number(self.default_param),
            format_number(s.mean_default),
            format_number(s.sd_default),
            format_number(self.tuned_param),
            format_number(s.mean_tuned),
            format_number(s.sd_tuned),
            format_number(s.t_statistic),
            format_number(s.p_value),
            format_number(s.df),
            s.runs_per_arm.to_string(),
        ]
    }
}

impl ExperimentResults {
    pub fn to_csv(&self) -> String {
        let mut out = COLUMNS.join(",");
        out.push('\n');
        for row in &self.rows {
            out.push_str(&row.cells().join(","));
            out.push('\n');
        }
        out
    }

    pub fn to_text(&self) -> String {
        let body: Vec<Vec<String>> = self.rows.iter().map(ExperimentRow::cells).collect();
        aligned_table(&COLUMNS, &body)
    }
}

/// Left-aligned columns separated by two spaces.
pub fn aligned_table(header: &[&str], rows: &[Vec<String>]) -> String {
    let mut widths: Vec<usize> = header.iter().map(|h| h.len()).collect();
    for row in rows {
        for (w, cell) in widths.iter_mut().zip(row) {
            *w = (*w).max(cell.len());
        }
    }
    let mut out = String::new();
    let mut line = |cells: &mut dyn Iterator<Item = &str>| {
        let parts: Vec<String> = cells
            .zip(&widths)
            .map(|(c, &w)| format!("{c:<w$}"))
            .collect();
        let _ = writeln!(out, "{}", parts.join("  ").trim_end());
    };
    line(&mut header.iter().copied());
    for row in rows {
        line(&mut row.iter().map(String::as_str));
    }
    out
}

/// Frequency of each candidate among per-graph winners.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct StabilityHistogram {
    pub bins: Vec<(f64, usize)>,
}

impl StabilityHistogram {
    pub fn from_winners(candidates: &[f64], winners: &[f64]) -> Self {
        let bins = candidates
            .iter()
            .map(|&c| (c, winners.iter().filter(|&&w| w == c).count()))
            .collect();
        Self { bins }
    }

    pub fn total(&self) -> usize {
        self.bins.iter().map(|b| b.1).sum()
    }

    /// Sample variance of the winners (`n − 1` denominator).
    pub fn variance(&self) -> f64 {
        let values: Vec<f64> = self
            .bins
            .iter()
            .flat_map(|&(c, k)| std::iter::repeat_n(c, k))
            .collect();
        let sd = mean_sd(&values).1;
        sd * sd
    }

    pub fn to_csv(&self) -> String {
        let mut out = String::from("param,frequency\n");
        for &(c, k) in &self.bins {
            let _ = writeln!(out, "{},{k}", format_number(c));
        }
        out
    }

    pub fn to_text(&self) -> String {
        let rows: Vec<Vec<String>> = self
            .bins
            .iter()
            .map(|&(c, k)| vec![format_number(c), k.to_string()])
            .collect();
        aligned_table(&["param", "frequency"], &rows)
    }
}

pub fn stability(report: &TuneReport) -> StabilityHistogram {
    StabilityHistogram::from_winners(&report.candidates, &report.per_graph_best)
}
