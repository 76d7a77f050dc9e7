//! Eigendecomposition of `C`, folding of eigenvectors into view slices and
//! spatial / temporal classification.
//!
//! The generalized problem `A f = lambda B f` is solved through the symmetric
//! matrix `H = B^{-1/2} A B^{-1/2}`: if `H y = lambda y` then
//! `v = B^{-1/2} y` satisfies `C v = lambda v` and the `v` are B-orthonormal.

use serde::{Deserialize, Serialize};

use crate::eigen::{dense_symmetric, dense_symmetric_values, lanczos_largest, LanczosOptions, SymmetricEigen};
use crate::error::{Error, Result};
use crate::system::SpatioTemporalSystem;

/// Problems up to this size are solved densely under [`Solver::Auto`].
pub const DENSE_LIMIT: usize = 5000;
/// Eigenvalues below this are dropped unless the full spectrum is requested.
pub const NEGATIVE_CUTOFF: f64 = -1e-12;
pub const DEFAULT_TAU: f64 = 0.05;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum EigenTag {
    Constant,
    Temporal,
    Spatial,
}

impl EigenTag {
    pub fn as_str(self) -> &'static str {
        match self {
            EigenTag::Constant => "constant",
            EigenTag::Temporal => "temporal",
            EigenTag::Spatial => "spatial",
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum Solver {
    /// Dense up to [`DENSE_LIMIT`], Lanczos above.
    #[default]
    Auto,
    Dense,
    Lanczos,
}

#[derive(Debug, Clone)]
pub struct EigenOptions {
    /// Keep negative eigenvalues too.
    pub full_spectrum: bool,
    pub solver: Solver,
    /// Temporal classification threshold.
    pub tau: f64,
    pub lanczos: LanczosOptions,
}

impl Default for EigenOptions {
    fn default() -> Self {
        Self { full_spectrum: false, solver: Solver::Auto, tau: DEFAULT_TAU, lanczos: LanczosOptions::default() }
    }
}

/// Leading eigenpairs of `C` for a system with `n` vertices and `views` views.
#[derive(Debug, Clone)]
pub struct SpectralEmbedding {
    pub n: usize,
    pub views: usize,
    /// Descending.
    pub eigenvalues: Vec<f64>,
    /// B-orthonormal, length `n * views` each.
    pub eigenvectors: Vec<Vec<f64>>,
    pub tags: Vec<EigenTag>,
}

impl SpectralEmbedding {
    pub fn len(&self) -> usize {
        self.eigenvalues.len()
    }

    pub fn is_empty(&self) -> bool {
        self.eigenvalues.is_empty()
    }

    /// Eigenvector `i` as `views` slices of length `n`.
    pub fn folded(&self, i: usize) -> Vec<Vec<f64>> {
        fold_eigenvector(&self.eigenvectors[i], self.n, self.views).expect("eigenvector length is n * views")
    }

    /// Re-tags all eigenvectors with threshold `tau`.
    pub fn retag(&mut self, tau: f64) {
        self.tags = classify_eigenvectors(&self.eigenvectors, self.n, self.views, tau);
    }
}

/// The `k_request` largest eigenpairs of `C`; negative ones are dropped unless
/// `opts.full_spectrum`.
pub fn eigendecompose(
    system: &SpatioTemporalSystem,
    k_request: usize,
    opts: &EigenOptions,
) -> Result<SpectralEmbedding> {
    let dim = system.dim();
    if k_request == 0 || k_request > dim {
        return Err(Error::InvalidArgument(format!("k_request = {k_request} outside [1, {dim}]")));
    }
    let h = system.symmetrized();
    let use_dense = match opts.solver {
        Solver::Dense => true,
        Solver::Lanczos => false,
        Solver::Auto => dim <= DENSE_LIMIT,
    };
    let mut eig = if use_dense {
        let mut full = dense_symmetric(dim, &h.to_dense())?;
        full.values.truncate(k_request);
        full.vectors.truncate(k_request);
        full
    } else {
        lanczos_largest(&h, k_request, &opts.lanczos)?
    };

    let scale = system.inv_sqrt_b();
    for y in &mut eig.vectors {
        y.iter_mut().zip(&scale).for_each(|(x, s)| *x *= s);
    }
    canonicalize(&mut eig);

    if !opts.full_spectrum {
        let keep = eig.values.iter().take_while(|&&l| l >= NEGATIVE_CUTOFF).count();
        eig.values.truncate(keep);
        eig.vectors.truncate(keep);
    }
    let tags = classify_eigenvectors(&eig.vectors, system.n(), system.views(), opts.tau);
    Ok(SpectralEmbedding {
        n: system.n(),
        views: system.views(),
        eigenvalues: eig.values,
        eigenvectors: eig.vectors,
        tags,
    })
}

/// Full spectrum of `C`, descending.
pub fn c_spectrum(system: &SpatioTemporalSystem) -> Result<Vec<f64>> {
    dense_symmetric_values(system.dim(), &system.symmetrized().to_dense())
}

/// `{1 - lambda}` over the spectrum of `C`, ascending.
pub fn laplacian_spectrum(system: &SpatioTemporalSystem) -> Result<Vec<f64>> {
    Ok(c_spectrum(system)?.into_iter().map(|l| 1.0 - l).collect())
}

/// Sign-fixes every vector (first clearly nonzero entry positive) and orders
/// by descending eigenvalue, breaking near-ties lexicographically.
fn canonicalize(eig: &mut SymmetricEigen) {
    for v in &mut eig.vectors {
        let scale = v.iter().fold(0.0f64, |m, x| m.max(x.abs()));
        if let Some(first) = v.iter().find(|x| x.abs() > 1e-10 * scale) {
            if *first < 0.0 {
                v.iter_mut().for_each(|x| *x = -*x);
            }
        }
    }
    let mut pairs: Vec<(f64, Vec<f64>)> = eig.values.drain(..).zip(eig.vectors.drain(..)).collect();
    pairs.sort_by(|a, b| b.0.total_cmp(&a.0));
    let tied = |a: f64, b: f64| (a - b).abs() <= 1e-12 * a.abs().max(b.abs()).max(1.0);
    let mut start = 0;
    while start < pairs.len() {
        let mut end = start + 1;
        while end < pairs.len() && tied(pairs[end - 1].0, pairs[end].0) {
            end += 1;
        }
        pairs[start..end].sort_by(|a, b| {
            a.1.iter().zip(&b.1).map(|(x, y)| y.total_cmp(x)).find(|o| o.is_ne()).unwrap_or(std::cmp::Ordering::Equal)
        });
        // Keep values non-increasing after reordering within the tie group.
        let mut values: Vec<f64> = pairs[start..end].iter().map(|p| p.0).collect();
        values.sort_by(|a, b| b.total_cmp(a));
        pairs[start..end].iter_mut().zip(values).for_each(|(p, l)| p.0 = l);
        start = end;
    }
    for (l, v) in pairs {
        eig.values.push(l);
        eig.vectors.push(v);
    }
}

/// Row `t` holds entries `[t n, (t + 1) n)` of `v`.
pub fn fold_eigenvector(v: &[f64], n: usize, views: usize) -> Result<Vec<Vec<f64>>> {
    if v.len() != n * views {
        return Err(Error::DimensionMismatch { expected: n * views, found: v.len() });
    }
    Ok(v.chunks(n).map(<[f64]>::to_vec).collect())
}

pub fn unfold(slices: &[Vec<f64>]) -> Vec<f64> {
    slices.concat()
}

fn mean_std(x: &[f64]) -> (f64, f64) {
    let n = x.len() as f64;
    let mean = x.iter().sum::<f64>() / n;
    let var = x.iter().map(|v| (v - mean).powi(2)).sum::<f64>() / n;
    (mean, var.sqrt())
}

/// Constant if the whole vector is flat (std below `tau` times its RMS);
/// temporal if every view slice is flat relative to the overall std;
/// spatial otherwise.
pub fn classify_eigenvector(v: &[f64], n: usize, views: usize, tau: f64) -> EigenTag {
    let (_, overall) = mean_std(v);
    let rms = (v.iter().map(|x| x * x).sum::<f64>() / v.len() as f64).sqrt();
    if overall <= tau * rms {
        return EigenTag::Constant;
    }
    let flat_views = v.chunks(n).take(views).all(|slice| mean_std(slice).1 < tau * overall);
    if flat_views {
        EigenTag::Temporal
    } else {
        EigenTag::Spatial
    }
}

pub fn classify_eigenvectors(vectors: &[Vec<f64>], n: usize, views: usize, tau: f64) -> Vec<EigenTag> {
    vectors.iter().map(|v| classify_eigenvector(v, n, views, tau)).collect()
}
