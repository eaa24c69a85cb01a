#![allow(dead_code)]

use std::path::{Path, PathBuf};

use commtune::io::{read_edge_list, read_labels};
use commtune::{Graph, Partition};
use rand::Rng;

pub fn data_dir() -> PathBuf {
    Path::new(env!("CARGO_MANIFEST_DIR")).join("tests/data")
}

pub fn karate() -> (Graph, Partition) {
    let dir = data_dir();
    let g = read_edge_list(&dir.join("karate.edges")).unwrap();
    let p = read_labels(&dir.join("karate.labels"), &g).unwrap();
    (g, p)
}

/// G(n, p) with at least one edge.
pub fn random_graph<R: Rng>(rng: &mut R, n: usize, p: f64) -> Graph {
    let mut edges = Vec::new();
    for u in 0..n {
        for v in u + 1..n {
            if rng.random::<f64>() < p {
                edges.push((u, v));
            }
        }
    }
    if edges.is_empty() {
        edges.push((0, 1));
    }
    Graph::from_edges(n, &edges).unwrap()
}

pub fn random_labels<R: Rng>(rng: &mut R, n: usize, k: usize) -> Vec<usize> {
    (0..n).map(|_| rng.random_range(0..k)).collect()
}

pub fn clique_edges(offset: usize, k: usize, edges: &mut Vec<(usize, usize)>) {
    for u in 0..k {
        for v in u + 1..k {
            edges.push((offset + u, offset + v));
        }
    }
}

/// `count` cliques of size `k`, consecutive cliques joined by one edge in a ring.
pub fn ring_of_cliques(count: usize, k: usize) -> (Graph, Vec<usize>) {
    let mut edges = Vec::new();
    for c in 0..count {
        clique_edges(c * k, k, &mut edges);
        edges.push((c * k, ((c + 1) % count) * k + 1));
    }
    let labels = (0..count * k).map(|v| v / k).collect();
    (Graph::from_edges(count * k, &edges).unwrap(), labels)
}

/// Every set partition of `0..n` as restricted growth strings.
pub fn all_set_partitions(n: usize) -> Vec<Vec<usize>> {
    fn grow(prefix: &mut Vec<usize>, max: usize, n: usize, out: &mut Vec<Vec<usize>>) {
        if prefix.len() == n {
            out.push(prefix.clone());
            return;
        }
        for c in 0..=max + 1 {
            if prefix.is_empty() && c > 0 {
                break;
            }
            prefix.push(c);
            let next = if prefix.len() == 1 { 0 } else { max.max(c) };
            grow(prefix, next, n, out);
            prefix.pop();
        }
    }
    let mut out = Vec::new();
    if n == 0 {
        out.push(Vec::new());
        return out;
    }
    grow(&mut Vec::new(), 0, n, &mut out);
    out
}

/// Pair counts `(n11, n10, n01, n00)` by enumerating every pair.
pub fn pair_oracle(a: &[usize], b: &[usize]) -> (u64, u64, u64, u64) {
    let (mut n11, mut n10, mut n01, mut n00) = (0, 0, 0, 0);
    for i in 0..a.len() {
        for j in i + 1..a.len() {
            match (a[i] == a[j], b[i] == b[j]) {
                (true, true) => n11 += 1,
                (true, false) => n10 += 1,
                (false, true) => n01 += 1,
                (false, false) => n00 += 1,
            }
        }
    }
    (n11, n10, n01, n00)
}

/// NMI (geometric normalization) straight from the contingency table.
pub fn nmi_oracle(a: &[usize], b: &[usize]) -> f64 {
    let n = a.len() as f64;
    let ka = a.iter().max().unwrap() + 1;
    let kb = b.iter().max().unwrap() + 1;
    let mut table = vec![vec![0.0; kb]; ka];
    for (&x, &y) in a.iter().zip(b) {
        table[x][y] += 1.0;
    }
    let rows: Vec<f64> = table.iter().map(|r| r.iter().sum()).collect();
    let cols: Vec<f64> = (0..kb).map(|j| table.iter().map(|r| r[j]).sum()).collect();
    let h = |v: &[f64]| -> f64 {
        v.iter().filter(|&&c| c > 0.0).map(|&c| -(c / n) * (c / n).ln()).sum()
    };
    let (ha, hb) = (h(&rows), h(&cols));
    let mut mi = 0.0;
    for i in 0..ka {
        for j in 0..kb {
            let c = table[i][j];
            if c > 0.0 {
                mi += c / n * (c * n / (rows[i] * cols[j])).ln();
            }
        }
    }
    let nonempty = |v: &[f64]| v.iter().filter(|&&c| c > 0.0).count();
    match (nonempty(&rows) <= 1, nonempty(&cols) <= 1) {
        (true, true) => 1.0,
        (true, false) | (false, true) => 0.0,
        _ => mi / (ha * hb).sqrt(),
    }
}
