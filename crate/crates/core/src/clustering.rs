//! Clustering of the `Mn` embedded vertex copies.
//!
//! The selected eigenvectors form the columns of an `Mn x k` matrix; row
//! `t * n + i` is vertex `i` at view `t`. All rows are clustered jointly, so a
//! label means the same thing at every view.

use rand::Rng;
use rayon::prelude::*;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::rng::{derive_seed, seeded};
use crate::spectral::{EigenTag, SpectralEmbedding};

/// Row-major point matrix with the eigenvector indices it was built from.
#[derive(Debug, Clone)]
pub struct Embedding {
    pub points: Vec<f64>,
    pub rows: usize,
    pub dims: usize,
    /// 0-based indices into the spectral embedding.
    pub selection: Vec<usize>,
}

impl Embedding {
    pub fn from_columns(columns: &[&[f64]], selection: Vec<usize>) -> Self {
        let rows = columns.first().map_or(0, |c| c.len());
        let dims = columns.len();
        let mut points = vec![0.0; rows * dims];
        for (c, col) in columns.iter().enumerate() {
            for (r, &x) in col.iter().enumerate() {
                points[r * dims + c] = x;
            }
        }
        Self { points, rows, dims, selection }
    }

    pub fn row(&self, r: usize) -> &[f64] {
        &self.points[r * self.dims..(r + 1) * self.dims]
    }
}

/// First `k` eigenvectors (descending eigenvalue) tagged spatial or constant.
pub fn select_spatial(embedding: &SpectralEmbedding, k: usize) -> Result<Embedding> {
    let chosen: Vec<usize> =
        embedding.tags.iter().enumerate().filter(|(_, t)| **t != EigenTag::Temporal).map(|(i, _)| i).take(k).collect();
    if k == 0 || chosen.len() < k {
        return Err(Error::InsufficientSpatialEigenvectors { available: chosen.len(), requested: k });
    }
    let cols: Vec<&[f64]> = chosen.iter().map(|&i| embedding.eigenvectors[i].as_slice()).collect();
    Ok(Embedding::from_columns(&cols, chosen))
}

/// First `k` eigenvectors regardless of tag.
pub fn select_leading(embedding: &SpectralEmbedding, k: usize) -> Result<Embedding> {
    if k == 0 || embedding.len() < k {
        return Err(Error::InsufficientSpatialEigenvectors { available: embedding.len(), requested: k });
    }
    let cols: Vec<&[f64]> = embedding.eigenvectors[..k].iter().map(Vec::as_slice).collect();
    Ok(Embedding::from_columns(&cols, (0..k).collect()))
}

#[derive(Debug, Clone)]
pub struct KMeansConfig {
    pub k: usize,
    pub seed: u64,
    pub restarts: usize,
    pub max_iter: usize,
}

impl KMeansConfig {
    pub fn new(k: usize, seed: u64) -> Self {
        Self { k, seed, restarts: 10, max_iter: 300 }
    }
}

#[derive(Debug, Clone)]
pub struct KMeansFit {
    pub labels: Vec<usize>,
    pub centroids: Vec<f64>,
    pub inertia: f64,
    pub iterations: usize,
    /// Inertia after every assignment step of the winning restart.
    pub history: Vec<f64>,
    /// Which restart won.
    pub restart: usize,
}

/// Lloyd iterations from k-means++ seeding; best of `restarts` by inertia.
pub fn kmeans(points: &[f64], dims: usize, config: &KMeansConfig) -> Result<KMeansFit> {
    let k = config.k;
    if dims == 0 || !points.len().is_multiple_of(dims) {
        return Err(Error::InvalidArgument(format!("{} values do not form rows of width {dims}", points.len())));
    }
    let rows = points.len() / dims;
    if k == 0 || rows < k {
        return Err(Error::InvalidArgument(format!("k = {k} with {rows} points")));
    }
    let restarts = config.restarts.max(1);
    let fits: Vec<KMeansFit> = (0..restarts)
        .into_par_iter()
        .map(|r| lloyd(points, rows, dims, k, config.max_iter, derive_seed(config.seed, r as u64), r))
        .collect();
    // Lowest inertia, earliest restart on ties.
    let best = fits
        .into_iter()
        .reduce(|best, f| if f.inertia < best.inertia { f } else { best })
        .expect("at least one restart");
    Ok(best)
}

fn sq_dist(a: &[f64], b: &[f64]) -> f64 {
    a.iter().zip(b).map(|(x, y)| (x - y) * (x - y)).sum()
}

fn lloyd(points: &[f64], rows: usize, dims: usize, k: usize, max_iter: usize, seed: u64, restart: usize) -> KMeansFit {
    let row = |r: usize| &points[r * dims..(r + 1) * dims];
    let mut rng = seeded(seed);

    // k-means++ seeding.
    let mut centroids = Vec::with_capacity(k * dims);
    centroids.extend_from_slice(row(rng.gen_range(0..rows)));
    let mut d2: Vec<f64> = (0..rows).map(|r| sq_dist(row(r), &centroids[..dims])).collect();
    for _ in 1..k {
        let total: f64 = d2.iter().sum();
        let pick = if total > 0.0 {
            let target = rng.gen::<f64>() * total;
            let mut acc = 0.0;
            d2.iter()
                .position(|&d| {
                    acc += d;
                    acc > target
                })
                .unwrap_or(rows - 1)
        } else {
            rng.gen_range(0..rows)
        };
        let c = row(pick).to_vec();
        for (r, d) in d2.iter_mut().enumerate() {
            *d = d.min(sq_dist(row(r), &c));
        }
        centroids.extend_from_slice(&c);
    }

    let mut labels = vec![usize::MAX; rows];
    let mut history = Vec::new();
    let mut iterations = 0;
    loop {
        iterations += 1;
        let mut changed = false;
        let mut inertia = 0.0;
        for (r, label) in labels.iter_mut().enumerate() {
            let (best, dist) = (0..k)
                .map(|c| (c, sq_dist(row(r), &centroids[c * dims..(c + 1) * dims])))
                .fold((0, f64::INFINITY), |acc, x| if x.1 < acc.1 { x } else { acc });
            if *label != best {
                *label = best;
                changed = true;
            }
            inertia += dist;
        }
        history.push(inertia);
        if !changed || iterations >= max_iter {
            break;
        }
        update_centroids(points, dims, k, &labels, &mut centroids);
    }

    let inertia = objective(points, dims, &labels, &centroids);
    KMeansFit { labels, centroids, inertia, iterations, history, restart }
}

/// Means of the assigned points. An emptied cluster is reseeded at the point
/// farthest from its current centroid.
fn update_centroids(points: &[f64], dims: usize, k: usize, labels: &[usize], centroids: &mut [f64]) {
    let rows = labels.len();
    let mut sums = vec![0.0; k * dims];
    let mut counts = vec![0usize; k];
    for (r, &l) in labels.iter().enumerate() {
        counts[l] += 1;
        for d in 0..dims {
            sums[l * dims + d] += points[r * dims + d];
        }
    }
    for c in 0..k {
        if counts[c] > 0 {
            for d in 0..dims {
                centroids[c * dims + d] = sums[c * dims + d] / counts[c] as f64;
            }
        }
    }
    for c in 0..k {
        if counts[c] == 0 {
            let far = (0..rows)
                .map(|r| {
                    let l = labels[r];
                    (r, sq_dist(&points[r * dims..(r + 1) * dims], &centroids[l * dims..(l + 1) * dims]))
                })
                .fold((0, -1.0), |acc, x| if x.1 > acc.1 { x } else { acc })
                .0;
            centroids[c * dims..(c + 1) * dims].copy_from_slice(&points[far * dims..(far + 1) * dims]);
        }
    }
}

/// Sum of squared distances of each point to its assigned centroid.
pub fn objective(points: &[f64], dims: usize, labels: &[usize], centroids: &[f64]) -> f64 {
    labels
        .iter()
        .enumerate()
        .map(|(r, &l)| sq_dist(&points[r * dims..(r + 1) * dims], &centroids[l * dims..(l + 1) * dims]))
        .sum()
}

/// Joint labels of all vertex copies, view-major.
#[derive(Debug, Clone, Serialize)]
pub struct ClusteringResult {
    pub n: usize,
    pub views: usize,
    pub k: usize,
    /// `labels[t * n + i]` is the label of vertex `i` at view `t`.
    pub labels: Vec<usize>,
    pub inertia: f64,
    pub seed: u64,
    pub restarts: usize,
}

impl ClusteringResult {
    pub fn from_fit(fit: &KMeansFit, n: usize, views: usize, k: usize, seed: u64, restarts: usize) -> Self {
        Self { n, views, k, labels: fit.labels.clone(), inertia: fit.inertia, seed, restarts }
    }

    pub fn view(&self, t: usize) -> &[usize] {
        &self.labels[t * self.n..(t + 1) * self.n]
    }
}

/// `views` rows of `n` labels.
pub fn per_view_labels(result: &ClusteringResult) -> Vec<Vec<usize>> {
    (0..result.views).map(|t| result.view(t).to_vec()).collect()
}
