//! Time-evolving graphs and their transfer operators.
//!
//! A [`TimeEvolvingGraph`] is a fixed vertex set with one weighted adjacency
//! snapshot per view. Row-normalizing each snapshot gives the transition
//! matrices `S_t`; pushing a reference density through them gives the
//! densities `mu_t`. Together they define the Koopman operator `K_t = S_t` and
//! the reweighted Perron-Frobenius operator
//! `T_t = D_{mu_{t+1}}^{-1} S_t^T D_{mu_t}`.
//!
//! Views are indexed from 0 in the API.

use crate::error::{Error, Result};
use crate::sparse::CsrMatrix;

/// Entries below this are treated as a vanished density.
pub const DEFAULT_DENSITY_FLOOR: f64 = 1e-300;

/// Fixed vertex set observed over `M >= 2` views.
#[derive(Debug, Clone, PartialEq)]
pub struct TimeEvolvingGraph {
    n: usize,
    directed: bool,
    snapshots: Vec<CsrMatrix>,
}

impl TimeEvolvingGraph {
    pub fn new(n: usize, directed: bool, snapshots: Vec<CsrMatrix>) -> Result<Self> {
        if n == 0 {
            return Err(Error::InvalidGraph("vertex count must be positive".into()));
        }
        if snapshots.len() < 2 {
            return Err(Error::InvalidGraph(format!("need at least 2 views, got {}", snapshots.len())));
        }
        for (t, w) in snapshots.iter().enumerate() {
            if w.nrows() != n || w.ncols() != n {
                return Err(Error::InvalidGraph(format!("view {t} is {}x{}, expected {n}x{n}", w.nrows(), w.ncols())));
            }
            if let Some((i, j, v)) = w.iter().find(|&(_, _, v)| !(v >= 0.0) || !v.is_finite()) {
                return Err(Error::InvalidGraph(format!("view {t} has invalid weight {v} at ({i}, {j})")));
            }
            if !directed {
                let scale = w.values().iter().fold(0.0f64, |m, v| m.max(v.abs()));
                if w.asymmetry() > 1e-12 * scale.max(1.0) {
                    return Err(Error::InvalidGraph(format!("view {t} is not symmetric but the graph is undirected")));
                }
            }
        }
        Ok(Self { n, directed, snapshots })
    }

    /// Builds snapshots from `(view, source, target, weight)` edges, 0-based.
    pub fn from_edges(
        n: usize,
        views: usize,
        directed: bool,
        edges: impl IntoIterator<Item = (usize, usize, usize, f64)>,
    ) -> Result<Self> {
        let mut per_view: Vec<Vec<(usize, usize, f64)>> = vec![Vec::new(); views];
        for (t, i, j, w) in edges {
            let bucket = per_view
                .get_mut(t)
                .ok_or_else(|| Error::InvalidGraph(format!("edge view {t} outside [0, {views})")))?;
            bucket.push((i, j, w));
        }
        let snapshots = per_view.iter().map(|trip| CsrMatrix::from_triplets(n, n, trip)).collect::<Result<Vec<_>>>()?;
        Self::new(n, directed, snapshots)
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn views(&self) -> usize {
        self.snapshots.len()
    }

    pub fn is_directed(&self) -> bool {
        self.directed
    }

    pub fn snapshot(&self, t: usize) -> &CsrMatrix {
        &self.snapshots[t]
    }

    pub fn snapshots(&self) -> &[CsrMatrix] {
        &self.snapshots
    }

    /// Adds a self-loop of `weight` to every vertex at every view.
    pub fn with_self_loops(&self, weight: f64) -> Self {
        let eye = CsrMatrix::identity(self.n).map_values(|v| v * weight);
        let snapshots = self.snapshots.iter().map(|w| w.add(&eye).expect("same shape")).collect();
        Self { n: self.n, directed: self.directed, snapshots }
    }

    /// `(W_t + W_t^T) / 2` at every view; clears the directed flag.
    pub fn symmetrize(&self) -> Self {
        let snapshots = self
            .snapshots
            .iter()
            .map(|w| w.add(&w.transpose()).expect("square snapshot").map_values(|v| 0.5 * v))
            .collect();
        Self { n: self.n, directed: false, snapshots }
    }
}

/// `S = D_o^{-1} W`. `view` is only used to label the error.
pub fn row_normalize(w: &CsrMatrix, view: usize) -> Result<CsrMatrix> {
    let sums = w.row_sums();
    if let Some(vertex) = sums.iter().position(|&s| !(s > 0.0)) {
        return Err(Error::ZeroOutDegree { view, vertex });
    }
    let inv: Vec<f64> = sums.iter().map(|s| 1.0 / s).collect();
    Ok(w.scale(Some(&inv), None))
}

/// How a graph is turned into an [`OperatorSequence`].
#[derive(Debug, Clone)]
pub struct OperatorConfig {
    /// Weight of the self-loop added to every vertex before normalization.
    pub self_loop: Option<f64>,
    /// Reference density at the first view; uniform when `None`.
    pub initial_density: Option<Vec<f64>>,
    pub density_floor: f64,
}

impl Default for OperatorConfig {
    fn default() -> Self {
        Self { self_loop: Some(1.0), initial_density: None, density_floor: DEFAULT_DENSITY_FLOOR }
    }
}

/// Transition matrices `S_t` and reference densities `mu_t`, one per view.
#[derive(Debug, Clone)]
pub struct OperatorSequence {
    transitions: Vec<CsrMatrix>,
    densities: Vec<Vec<f64>>,
}

impl OperatorSequence {
    pub fn from_graph(graph: &TimeEvolvingGraph, config: &OperatorConfig) -> Result<Self> {
        let regularized;
        let g = match config.self_loop {
            Some(w) if w > 0.0 => {
                regularized = graph.with_self_loops(w);
                &regularized
            }
            _ => graph,
        };
        let transitions =
            g.snapshots().iter().enumerate().map(|(t, w)| row_normalize(w, t)).collect::<Result<Vec<_>>>()?;
        let n = graph.n();
        let mu1 = match &config.initial_density {
            Some(mu) => mu.clone(),
            None => vec![1.0 / n as f64; n],
        };
        Self::from_transitions(transitions, mu1, config.density_floor)
    }

    /// Propagates `mu_1` through `S_1, ..., S_{M-1}`.
    pub fn from_transitions(transitions: Vec<CsrMatrix>, mu1: Vec<f64>, floor: f64) -> Result<Self> {
        let n = mu1.len();
        if transitions.len() < 2 {
            return Err(Error::InvalidGraph("need at least 2 views".into()));
        }
        for s in &transitions {
            if s.nrows() != n || s.ncols() != n {
                return Err(Error::DimensionMismatch { expected: n, found: s.nrows() });
            }
        }
        validate_density(&mu1, 0, floor)?;
        let mut densities = Vec::with_capacity(transitions.len());
        densities.push(mu1);
        for t in 0..transitions.len() - 1 {
            let next = transitions[t].matvec_transpose(&densities[t])?;
            validate_density(&next, t + 1, floor)?;
            densities.push(next);
        }
        Ok(Self { transitions, densities })
    }

    pub fn n(&self) -> usize {
        self.densities[0].len()
    }

    pub fn views(&self) -> usize {
        self.transitions.len()
    }

    pub fn transition(&self, t: usize) -> &CsrMatrix {
        &self.transitions[t]
    }

    pub fn transitions(&self) -> &[CsrMatrix] {
        &self.transitions
    }

    pub fn density(&self, t: usize) -> &[f64] {
        &self.densities[t]
    }

    pub fn densities(&self) -> &[Vec<f64>] {
        &self.densities
    }

    /// `K_t f`.
    pub fn koopman(&self, t: usize, f: &[f64]) -> Result<Vec<f64>> {
        koopman_apply(&self.transitions[t], f)
    }

    /// `T_t u`, defined for `t < M - 1`.
    pub fn reweighted_pf(&self, t: usize, u: &[f64]) -> Result<Vec<f64>> {
        reweighted_pf_apply(&self.transitions[t], &self.densities[t], &self.densities[t + 1], u)
    }

    /// Matrix of `T_t = D_{mu_{t+1}}^{-1} S_t^T D_{mu_t}`.
    pub fn reweighted_pf_matrix(&self, t: usize) -> CsrMatrix {
        let inv_next: Vec<f64> = self.densities[t + 1].iter().map(|m| 1.0 / m).collect();
        self.transitions[t].transpose().scale(Some(&inv_next), Some(&self.densities[t]))
    }

    /// Covariance `C_tt = D_{mu_t}` (diagonal).
    pub fn covariance(&self, t: usize) -> CsrMatrix {
        CsrMatrix::diagonal(&self.densities[t])
    }

    /// Cross-covariance `C_{t(t+1)} = D_{mu_t} S_t`.
    pub fn cross_covariance(&self, t: usize) -> CsrMatrix {
        self.transitions[t].scale(Some(&self.densities[t]), None)
    }

    /// Correlation between `f` at view `t` and `g` at view `t + 1`.
    pub fn view_correlation(&self, t: usize, f: &[f64], g: &[f64]) -> Result<f64> {
        correlation(f, g, &self.cross_covariance(t), &self.covariance(t), &self.covariance(t + 1))
    }
}

fn validate_density(mu: &[f64], view: usize, floor: f64) -> Result<()> {
    if let Some((vertex, &value)) = mu.iter().enumerate().find(|(_, &m)| !(m >= floor) || m == 0.0) {
        return Err(Error::DensityVanished { view, vertex, value });
    }
    Ok(())
}

/// Propagates `mu1` through the row-normalized (and regularized, per `config`)
/// snapshots of `graph`.
pub fn propagate_densities(
    graph: &TimeEvolvingGraph,
    mu1: &[f64],
    config: &OperatorConfig,
) -> Result<OperatorSequence> {
    if mu1.len() != graph.n() {
        return Err(Error::DimensionMismatch { expected: graph.n(), found: mu1.len() });
    }
    let total: f64 = mu1.iter().sum();
    if (total - 1.0).abs() > 1e-12 {
        return Err(Error::InvalidArgument(format!("initial density sums to {total}, not 1")));
    }
    let cfg = OperatorConfig { initial_density: Some(mu1.to_vec()), ..config.clone() };
    OperatorSequence::from_graph(graph, &cfg)
}

/// Koopman operator: `S_t f`.
pub fn koopman_apply(transition: &CsrMatrix, f: &[f64]) -> Result<Vec<f64>> {
    transition.matvec(f)
}

/// Reweighted Perron-Frobenius operator: `D_{mu_next}^{-1} S^T D_{mu} u`.
pub fn reweighted_pf_apply(transition: &CsrMatrix, mu: &[f64], mu_next: &[f64], u: &[f64]) -> Result<Vec<f64>> {
    let n = transition.nrows();
    for v in [mu, mu_next, u] {
        if v.len() != n {
            return Err(Error::DimensionMismatch { expected: n, found: v.len() });
        }
    }
    let weighted: Vec<f64> = mu.iter().zip(u).map(|(m, x)| m * x).collect();
    let pushed = transition.matvec_transpose(&weighted)?;
    pushed
        .iter()
        .zip(mu_next)
        .enumerate()
        .map(
            |(i, (p, &m))| {
                if m == 0.0 {
                    Err(Error::DensityVanished { view: 0, vertex: i, value: m })
                } else {
                    Ok(p / m)
                }
            },
        )
        .collect()
}

/// `f^T C_fg g / sqrt(f^T C_ff f) sqrt(g^T C_gg g)`.
pub fn correlation(f: &[f64], g: &[f64], cross: &CsrMatrix, cov_f: &CsrMatrix, cov_g: &CsrMatrix) -> Result<f64> {
    let dot = |a: &[f64], b: &[f64]| a.iter().zip(b).map(|(x, y)| x * y).sum::<f64>();
    let var_f = dot(f, &cov_f.matvec(f)?);
    let var_g = dot(g, &cov_g.matvec(g)?);
    if !(var_f > 0.0) || !(var_g > 0.0) {
        return Err(Error::ZeroVariance);
    }
    let cov = dot(f, &cross.matvec(g)?);
    Ok((cov / (var_f.sqrt() * var_g.sqrt())).clamp(-1.0, 1.0))
}
