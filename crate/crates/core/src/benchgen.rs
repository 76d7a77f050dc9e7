//! Seeded benchmark graphs.
//!
//! All generators use coupled sampling: every vertex pair draws one uniform
//! number `u` and one weight up front, and the edge exists at view `t` iff
//! `u < p_t(i, j)`. Edges between vertices whose roles do not change persist
//! across views; an edge whose probability halves each view survives each
//! step with probability one half.

use rand::Rng;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::rng::seeded;
use crate::teg::TimeEvolvingGraph;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "lowercase")]
pub enum WeightDist {
    Constant { value: f64 },
    Uniform { low: f64, high: f64 },
}

impl Default for WeightDist {
    fn default() -> Self {
        WeightDist::Uniform { low: 0.5, high: 1.5 }
    }
}

impl WeightDist {
    fn sample(&self, rng: &mut impl Rng) -> f64 {
        match *self {
            WeightDist::Constant { value } => value,
            WeightDist::Uniform { low, high } => low + (high - low) * rng.gen::<f64>(),
        }
    }
}

/// Planted partition over `views` views with per-view block membership.
#[derive(Debug, Clone)]
pub struct BenchmarkSpec {
    pub n: usize,
    pub views: usize,
    pub k_true: usize,
    /// `membership[t][i]` is the block of vertex `i` at view `t`.
    pub membership: Vec<Vec<usize>>,
    pub p_in: f64,
    pub p_out: f64,
    pub weight_dist: WeightDist,
    pub directed: bool,
    pub seed: u64,
}

impl BenchmarkSpec {
    /// Same membership at every view.
    pub fn static_blocks(sizes: &[usize], views: usize, p_in: f64, p_out: f64, seed: u64) -> Self {
        let labels: Vec<usize> = sizes.iter().enumerate().flat_map(|(b, &s)| std::iter::repeat_n(b, s)).collect();
        Self {
            n: labels.len(),
            views,
            k_true: sizes.len(),
            membership: vec![labels; views],
            p_in,
            p_out,
            weight_dist: WeightDist::default(),
            directed: false,
            seed,
        }
    }

    pub fn validate(&self) -> Result<()> {
        if !(0.0 <= self.p_out && self.p_out < self.p_in && self.p_in <= 1.0) {
            return Err(Error::InvalidArgument(format!(
                "need 0 <= p_out < p_in <= 1, got p_in = {}, p_out = {}",
                self.p_in, self.p_out
            )));
        }
        if self.membership.len() != self.views || self.membership.iter().any(|m| m.len() != self.n) {
            return Err(Error::InvalidArgument(format!("membership must be {} x {}", self.views, self.n)));
        }
        Ok(())
    }
}

/// A generated graph with its ground truth.
#[derive(Debug, Clone)]
pub struct Benchmark {
    pub name: String,
    pub graph: TimeEvolvingGraph,
    /// `labels[t][i]`; `None` when no ground truth exists.
    pub labels: Option<Vec<Vec<usize>>>,
    pub k_true: usize,
}

fn coupled_graph(
    n: usize,
    views: usize,
    directed: bool,
    weights: WeightDist,
    seed: u64,
    prob: impl Fn(usize, usize, usize) -> f64,
) -> Result<TimeEvolvingGraph> {
    let mut rng = seeded(seed);
    let mut edges = Vec::new();
    for i in 0..n {
        let js: Box<dyn Iterator<Item = usize>> = if directed { Box::new(0..n) } else { Box::new(i + 1..n) };
        for j in js {
            if i == j {
                continue;
            }
            let u = rng.gen::<f64>();
            let w = weights.sample(&mut rng);
            for t in 0..views {
                if u < prob(t, i, j) {
                    edges.push((t, i, j, w));
                    if !directed {
                        edges.push((t, j, i, w));
                    }
                }
            }
        }
    }
    TimeEvolvingGraph::from_edges(n, views, directed, edges)
}

/// Independent edges with probability `p_in` inside blocks and `p_out` across.
pub fn gen_planted_partition(spec: &BenchmarkSpec) -> Result<TimeEvolvingGraph> {
    spec.validate()?;
    let m = &spec.membership;
    coupled_graph(spec.n, spec.views, spec.directed, spec.weight_dist, spec.seed, |t, i, j| {
        if m[t][i] == m[t][j] {
            spec.p_in
        } else {
            spec.p_out
        }
    })
}

pub const BENCHMARK1_P_IN: f64 = 0.3;
pub const BENCHMARK1_P_OUT: f64 = 0.02;

/// Sizes of the migration batches that move `total` vertices over `steps`
/// transitions: the first `total % steps` batches take one extra vertex.
pub fn migration_batches(total: usize, steps: usize) -> Vec<usize> {
    (0..steps).map(|s| total / steps + usize::from(s < total % steps)).collect()
}

/// Ground truth of benchmark 1: three blocks of 100; vertices 99, 98, ..., 65
/// move from block 0 to block 1 in batches `4, 4, 4, 4, 4, 4, 4, 4, 3` at
/// views 1..=9. Block 2 never changes.
pub fn benchmark1_membership() -> Vec<Vec<usize>> {
    let views = 10;
    let mut labels: Vec<usize> = (0..300).map(|i| i / 100).collect();
    let mut out = vec![labels.clone()];
    let mut next = 99usize;
    for batch in migration_batches(35, views - 1) {
        for _ in 0..batch {
            labels[next] = 1;
            next -= 1;
        }
        out.push(labels.clone());
    }
    out
}

/// Undirected, n = 300, M = 10: block 0 shrinks from 100 to 65 vertices while
/// block 1 grows to 135.
pub fn gen_benchmark1(seed: u64) -> Result<Benchmark> {
    let membership = benchmark1_membership();
    let spec = BenchmarkSpec {
        n: 300,
        views: 10,
        k_true: 3,
        membership: membership.clone(),
        p_in: BENCHMARK1_P_IN,
        p_out: BENCHMARK1_P_OUT,
        weight_dist: WeightDist::default(),
        directed: false,
        seed,
    };
    let graph = gen_planted_partition(&spec)?;
    Ok(Benchmark { name: "benchmark1".into(), graph, labels: Some(membership), k_true: 3 })
}

pub const BENCHMARK2_P_IN: f64 = 0.5;
pub const BENCHMARK2_P_OUT: f64 = 0.005;
/// First view (0-based) at which the ground truth counts the large block as split.
pub const BENCHMARK2_SPLIT_VIEW: usize = 3;

/// Ground truth of benchmark 2. Block 0 is vertices 0..200 until the split,
/// after which 100..200 become block 3; 200..300 is block 1 and 300..400 is
/// block 2.
pub fn benchmark2_membership() -> Vec<Vec<usize>> {
    (0..10)
        .map(|t| {
            (0..400)
                .map(|i| match i {
                    0..=99 => 0,
                    100..=199 if t >= BENCHMARK2_SPLIT_VIEW => 3,
                    100..=199 => 0,
                    200..=299 => 1,
                    _ => 2,
                })
                .collect()
        })
        .collect()
}

/// Directed, n = 400, M = 10.
///
/// * vertices 0..200 form one dense diagonal block; edges between its halves
///   0..100 and 100..200 are removed with probability 1/2 at every view;
/// * 200..300 and 300..400 are off-diagonal clusters: dense directed links
///   200..300 -> 300..400 and 300..400 -> 200..300, sparse inside each group;
/// * everything else links with probability `p_out`.
pub fn gen_benchmark2(seed: u64) -> Result<Benchmark> {
    gen_benchmark2_with(seed, BENCHMARK2_P_IN, BENCHMARK2_P_OUT)
}

/// [`gen_benchmark2`] with explicit block densities.
pub fn gen_benchmark2_with(seed: u64, p_in: f64, p_out: f64) -> Result<Benchmark> {
    if !(0.0 <= p_out && p_out < p_in && p_in <= 1.0) {
        return Err(Error::InvalidArgument(format!("need 0 <= p_out < p_in <= 1, got {p_in}, {p_out}")));
    }
    let group = |i: usize| i / 100;
    let graph = coupled_graph(400, 10, true, WeightDist::default(), seed, |t, i, j| match (group(i), group(j)) {
        (a, b) if a == b && a < 2 => p_in,
        (0, 1) | (1, 0) => p_in * 0.5f64.powi(t as i32),
        (2, 3) | (3, 2) => p_in,
        _ => p_out,
    })?;
    Ok(Benchmark { name: "benchmark2".into(), graph, labels: Some(benchmark2_membership()), k_true: 4 })
}

/// Weight of edge (v2, v3) at each view of the line graph.
pub const LINE_GRAPH_BRIDGE: [f64; 4] = [0.01, 0.1, 1.0, 1.0];

/// The six-vertex line graph over four views: solid edges (weight 1) pair up
/// v1-v2, v3-v4, v5-v6; v4-v5 stays at 0.01; v2-v3 strengthens per
/// [`LINE_GRAPH_BRIDGE`]. Self-loops are not stored; the default operator
/// regularization adds them.
pub fn gen_line_graph() -> Benchmark {
    let mut edges = Vec::new();
    for (t, &bridge) in LINE_GRAPH_BRIDGE.iter().enumerate() {
        for (i, j, w) in [(0, 1, 1.0), (2, 3, 1.0), (4, 5, 1.0), (3, 4, 0.01), (1, 2, bridge)] {
            edges.push((t, i, j, w));
            edges.push((t, j, i, w));
        }
    }
    let graph = TimeEvolvingGraph::from_edges(6, 4, false, edges).expect("static line graph is valid");
    let mut labels = vec![vec![0, 0, 1, 1, 2, 2]; 4];
    labels[3] = vec![0, 0, 0, 0, 1, 1];
    Benchmark { name: "linegraph".into(), graph, labels: Some(labels), k_true: 3 }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn sizes(labels: &[usize], k: usize) -> Vec<usize> {
        let mut s = vec![0; k];
        labels.iter().for_each(|&l| s[l] += 1);
        s
    }

    #[test]
    fn migration_schedule() {
        assert_eq!(migration_batches(35, 9), vec![4, 4, 4, 4, 4, 4, 4, 4, 3]);
        let m = benchmark1_membership();
        assert_eq!(sizes(&m[0], 3), vec![100, 100, 100]);
        assert_eq!(sizes(&m[9], 3), vec![65, 135, 100]);
        assert!(m.iter().all(|v| v[200..].iter().all(|&l| l == 2)));
        assert!(m[9][..65].iter().all(|&l| l == 0));
    }

    #[test]
    fn benchmark2_truth_sizes() {
        let m = benchmark2_membership();
        assert_eq!(sizes(&m[0], 4), vec![200, 100, 100, 0]);
        assert_eq!(sizes(&m[9], 4), vec![100, 100, 100, 100]);
    }

    #[test]
    fn zero_p_out_gives_block_diagonal() {
        let spec = BenchmarkSpec::static_blocks(&[10, 10], 2, 0.5, 0.0, 4);
        let g = gen_planted_partition(&spec).unwrap();
        for (i, j, _) in g.snapshot(0).iter() {
            assert_eq!(i / 10, j / 10);
        }
    }

    #[test]
    fn invalid_probabilities_rejected() {
        let spec = BenchmarkSpec::static_blocks(&[5, 5], 2, 0.1, 0.2, 0);
        assert!(gen_planted_partition(&spec).is_err());
    }

    #[test]
    fn line_graph_schedule() {
        let g = gen_line_graph().graph;
        let bridge: Vec<f64> = (0..4).map(|t| g.snapshot(t).get(1, 2)).collect();
        assert_eq!(bridge, LINE_GRAPH_BRIDGE.to_vec());
        assert!((0..4).all(|t| g.snapshot(t).get(3, 4) == 0.01));
        assert!((0..4).all(|t| g.snapshot(t).asymmetry() == 0.0));
    }
}
