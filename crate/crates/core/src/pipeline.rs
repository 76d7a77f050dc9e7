//! End-to-end clustering: operators, system, eigenpairs, selection, k-means
//! and evaluation against ground truth.

use std::time::Instant;

use serde::Serialize;

use crate::ari::adjusted_rand_index;
use crate::clustering::{kmeans, select_spatial, ClusteringResult, KMeansConfig};
use crate::error::{Error, Result};
use crate::spectral::{eigendecompose, EigenOptions, SpectralEmbedding};
use crate::system::SpatioTemporalSystem;
use crate::teg::{OperatorConfig, OperatorSequence, TimeEvolvingGraph};

#[derive(Debug, Clone)]
pub struct PipelineConfig {
    pub k: usize,
    pub seed: u64,
    pub restarts: usize,
    pub operators: OperatorConfig,
    pub eigen: EigenOptions,
    /// Eigenpairs computed first; doubled until `k` spatial ones are found.
    /// Defaults to `k + M + 10`.
    pub k_request: Option<usize>,
}

impl PipelineConfig {
    pub fn new(k: usize, seed: u64) -> Self {
        Self {
            k,
            seed,
            restarts: 10,
            operators: OperatorConfig::default(),
            eigen: EigenOptions::default(),
            k_request: None,
        }
    }
}

/// Wall-clock seconds per stage.
#[derive(Debug, Clone, Default, Serialize)]
pub struct Timings {
    pub operators: f64,
    pub assemble: f64,
    pub eigensolve: f64,
    pub kmeans: f64,
    pub total: f64,
}

#[derive(Debug, Clone)]
pub struct PipelineOutput {
    pub embedding: SpectralEmbedding,
    /// Eigenvector indices fed to k-means.
    pub selection: Vec<usize>,
    pub result: ClusteringResult,
    /// ARI per view when ground truth was given.
    pub ari: Option<Vec<f64>>,
    pub timings: Timings,
}

pub fn per_view_ari(truth: &[Vec<usize>], result: &ClusteringResult) -> Result<Vec<f64>> {
    if truth.len() != result.views {
        return Err(Error::DimensionMismatch { expected: result.views, found: truth.len() });
    }
    truth.iter().enumerate().map(|(t, l)| adjusted_rand_index(l, result.view(t))).collect()
}

/// Leading eigenpairs with at least `k` non-temporal ones among them, when
/// the positive spectrum allows it.
pub fn spectral_embedding(system: &SpatioTemporalSystem, cfg: &PipelineConfig) -> Result<SpectralEmbedding> {
    let dim = system.dim();
    let mut request = cfg.k_request.unwrap_or(cfg.k + system.views() + 10).clamp(1, dim);
    loop {
        let emb = eigendecompose(system, request, &cfg.eigen)?;
        let spatial = emb.tags.iter().filter(|t| **t != crate::spectral::EigenTag::Temporal).count();
        let exhausted = request == dim || emb.len() < request;
        if spatial >= cfg.k || exhausted {
            return Ok(emb);
        }
        request = (2 * request).min(dim);
    }
}

pub fn run_pipeline(
    graph: &TimeEvolvingGraph,
    labels: Option<&[Vec<usize>]>,
    cfg: &PipelineConfig,
) -> Result<PipelineOutput> {
    if cfg.k == 0 {
        return Err(Error::InvalidArgument("k must be at least 1".into()));
    }
    let start = Instant::now();
    let mut timings = Timings::default();

    let mut clock = Instant::now();
    let ops = OperatorSequence::from_graph(graph, &cfg.operators)?;
    timings.operators = clock.elapsed().as_secs_f64();

    clock = Instant::now();
    let system = SpatioTemporalSystem::assemble(&ops)?;
    timings.assemble = clock.elapsed().as_secs_f64();

    clock = Instant::now();
    let embedding = spectral_embedding(&system, cfg)?;
    timings.eigensolve = clock.elapsed().as_secs_f64();

    clock = Instant::now();
    let emb = select_spatial(&embedding, cfg.k)?;
    let kcfg = KMeansConfig { k: cfg.k, seed: cfg.seed, restarts: cfg.restarts, max_iter: 300 };
    let fit = kmeans(&emb.points, emb.dims, &kcfg)?;
    let result = ClusteringResult::from_fit(&fit, graph.n(), graph.views(), cfg.k, cfg.seed, cfg.restarts);
    timings.kmeans = clock.elapsed().as_secs_f64();

    let ari = labels.map(|l| per_view_ari(l, &result)).transpose()?;
    timings.total = start.elapsed().as_secs_f64();
    Ok(PipelineOutput { embedding, selection: emb.selection, result, ari, timings })
}
