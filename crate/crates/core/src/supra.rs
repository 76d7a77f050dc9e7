//! Supra-Laplacian baseline.
//!
//! Per-view Laplacians sit on the diagonal blocks and adjacent views are
//! coupled by identity blocks of strength `a`. The coupling enters with the
//! usual Laplacian sign convention: off-diagonal blocks `-a I_n`, and each
//! diagonal block gains `a I_n` per neighbouring view, so the whole matrix is
//! `blockdiag(L_t) + a (L_path kron I_n)`.
//!
//! The normalized variant uses `I - D^{-1/2} W D^{-1/2}` per view, which keeps
//! the supra matrix symmetric; its eigenvectors are mapped back through
//! `D^{-1/2}` so that, at `a = 0`, they are exactly the random-walk
//! eigenvectors of each view.

use serde::{Deserialize, Serialize};

use crate::clustering::{kmeans, select_leading, select_spatial, ClusteringResult, KMeansConfig};
use crate::eigen::{dense_symmetric, lanczos_largest, LanczosOptions};
use crate::error::{Error, Result};
use crate::sparse::CsrMatrix;
use crate::spectral::{classify_eigenvectors, SpectralEmbedding};
use crate::teg::TimeEvolvingGraph;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum LaplacianVariant {
    /// `I - D^{-1/2} W D^{-1/2}`.
    #[default]
    Normalized,
    /// `D - W`.
    Unnormalized,
}

impl LaplacianVariant {
    pub fn as_str(self) -> &'static str {
        match self {
            LaplacianVariant::Normalized => "normalized",
            LaplacianVariant::Unnormalized => "unnormalized",
        }
    }
}

impl std::str::FromStr for LaplacianVariant {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "normalized" | "random-walk" | "rw" | "sym" => Ok(Self::Normalized),
            "unnormalized" | "combinatorial" => Ok(Self::Unnormalized),
            other => Err(Error::InvalidArgument(format!("unknown Laplacian variant '{other}'"))),
        }
    }
}

#[derive(Debug, Clone)]
pub struct SupraSystem {
    pub n: usize,
    pub views: usize,
    pub a: f64,
    pub variant: LaplacianVariant,
    pub matrix: CsrMatrix,
    /// Per-row factor applied to eigenvectors after solving (`D^{-1/2}` or 1).
    pub back_scale: Vec<f64>,
}

/// Per-view Laplacian and the row scaling that maps its eigenvectors back.
fn view_laplacian(w: &CsrMatrix, variant: LaplacianVariant) -> (CsrMatrix, Vec<f64>) {
    let n = w.nrows();
    let deg = w.row_sums();
    match variant {
        LaplacianVariant::Unnormalized => {
            let l = CsrMatrix::diagonal(&deg).add(&w.map_values(|v| -v)).expect("square");
            (l, vec![1.0; n])
        }
        LaplacianVariant::Normalized => {
            let inv_sqrt: Vec<f64> = deg.iter().map(|&d| if d > 0.0 { 1.0 / d.sqrt() } else { 0.0 }).collect();
            let norm_w = w.scale(Some(&inv_sqrt), Some(&inv_sqrt));
            let l = CsrMatrix::identity(n).add(&norm_w.map_values(|v| -v)).expect("square");
            let back = inv_sqrt.iter().map(|&s| if s > 0.0 { s } else { 1.0 }).collect();
            (l, back)
        }
    }
}

pub fn symmetrize(graph: &TimeEvolvingGraph) -> TimeEvolvingGraph {
    graph.symmetrize()
}

pub fn build_supra(graph: &TimeEvolvingGraph, a: f64, variant: LaplacianVariant) -> Result<SupraSystem> {
    if graph.is_directed() {
        return Err(Error::DirectedInput);
    }
    if !(a >= 0.0) || !a.is_finite() {
        return Err(Error::InvalidArgument(format!("coupling strength must be nonnegative, got {a}")));
    }
    let n = graph.n();
    let views = graph.views();
    let dim = n * views;
    let mut triplets = Vec::new();
    let mut back_scale = Vec::with_capacity(dim);
    for t in 0..views {
        let (l, back) = view_laplacian(graph.snapshot(t), variant);
        back_scale.extend(back);
        let neighbours = (t > 0) as usize + (t + 1 < views) as usize;
        for (i, j, v) in l.iter() {
            triplets.push((t * n + i, t * n + j, v));
        }
        if a > 0.0 {
            for i in 0..n {
                triplets.push((t * n + i, t * n + i, a * neighbours as f64));
                if t + 1 < views {
                    triplets.push((t * n + i, (t + 1) * n + i, -a));
                    triplets.push(((t + 1) * n + i, t * n + i, -a));
                }
            }
        }
    }
    let matrix = CsrMatrix::from_triplets(dim, dim, &triplets)?;
    Ok(SupraSystem { n, views, a, variant, matrix, back_scale })
}

/// Supra systems up to this size are solved densely; larger ones use
/// Lanczos on a shifted matrix.
pub const SUPRA_DENSE_LIMIT: usize = 1500;

impl SupraSystem {
    pub fn dim(&self) -> usize {
        self.n * self.views
    }

    /// The `k` smallest eigenpairs of the supra-Laplacian (ascending), with
    /// eigenvectors mapped back and tagged.
    pub fn smallest(&self, k: usize, tau: f64) -> Result<SpectralEmbedding> {
        let dim = self.dim();
        if k == 0 || k > dim {
            return Err(Error::InvalidArgument(format!("k = {k} outside [1, {dim}]")));
        }
        let (values, vectors) = if dim <= SUPRA_DENSE_LIMIT {
            let mut full = dense_symmetric(dim, &self.matrix.to_dense())?;
            full.values.reverse();
            full.vectors.reverse();
            full.values.truncate(k);
            full.vectors.truncate(k);
            (full.values, full.vectors)
        } else {
            // Largest eigenpairs of sigma I - L_S, with sigma a Gershgorin
            // bound on the spectrum of L_S.
            let sigma = (0..dim).map(|i| self.matrix.row(i).1.iter().map(|v| v.abs()).sum::<f64>()).fold(0.0, f64::max);
            let shifted = CsrMatrix::diagonal(&vec![sigma; dim]).add(&self.matrix.map_values(|v| -v))?;
            let eig = lanczos_largest(&shifted, k, &LanczosOptions::default())?;
            (eig.values.into_iter().map(|l| sigma - l).collect(), eig.vectors)
        };
        let mut eigenvalues = Vec::with_capacity(k);
        let mut eigenvectors = Vec::with_capacity(k);
        for (l, y) in values.into_iter().zip(vectors) {
            eigenvalues.push(l);
            let mut v: Vec<f64> = y.iter().zip(&self.back_scale).map(|(x, s)| x * s).collect();
            let scale = v.iter().fold(0.0f64, |m, x| m.max(x.abs()));
            if let Some(first) = v.iter().find(|x| x.abs() > 1e-10 * scale) {
                if *first < 0.0 {
                    v.iter_mut().for_each(|x| *x = -*x);
                }
            }
            eigenvectors.push(v);
        }
        let tags = classify_eigenvectors(&eigenvectors, self.n, self.views, tau);
        Ok(SpectralEmbedding { n: self.n, views: self.views, eigenvalues, eigenvectors, tags })
    }

    /// Full spectrum, ascending.
    pub fn spectrum(&self) -> Result<Vec<f64>> {
        let mut v = dense_symmetric(self.dim(), &self.matrix.to_dense())?.values;
        v.reverse();
        Ok(v)
    }
}

#[derive(Debug, Clone)]
pub struct SupraClusterOptions {
    pub k: usize,
    pub seed: u64,
    pub restarts: usize,
    pub tau: f64,
    /// Drop temporal eigenvectors before k-means.
    pub filter_temporal: bool,
}

#[derive(Debug, Clone)]
pub struct SupraClustering {
    pub result: ClusteringResult,
    pub spectrum: SpectralEmbedding,
    pub selection: Vec<usize>,
}

/// Spectral clustering on the smallest eigenvectors of the supra-Laplacian.
pub fn supra_cluster(system: &SupraSystem, opts: &SupraClusterOptions) -> Result<SupraClustering> {
    let dim = system.dim();
    let mut request = (opts.k + system.views + 10).min(dim);
    let (spectrum, emb) = loop {
        let spectrum = system.smallest(request, opts.tau)?;
        let emb =
            if opts.filter_temporal { select_spatial(&spectrum, opts.k) } else { select_leading(&spectrum, opts.k) };
        match emb {
            Err(Error::InsufficientSpatialEigenvectors { .. }) if request < dim => request = (2 * request).min(dim),
            other => break (spectrum, other?),
        }
    };
    let cfg = KMeansConfig { k: opts.k, seed: opts.seed, restarts: opts.restarts, max_iter: 300 };
    let fit = kmeans(&emb.points, emb.dims, &cfg)?;
    let result = ClusteringResult::from_fit(&fit, system.n, system.views, opts.k, opts.seed, opts.restarts);
    Ok(SupraClustering { result, spectrum, selection: emb.selection })
}
