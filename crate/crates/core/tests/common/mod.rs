#![allow(dead_code)]

use rand::Rng;
use stgl::rng::seeded;
use stgl::TimeEvolvingGraph;

/// Random weighted graph; each ordered (or unordered) pair is an edge with
/// probability `density`, weights in (0.1, 2).
pub fn random_graph(seed: u64, n: usize, views: usize, directed: bool, density: f64) -> TimeEvolvingGraph {
    let mut rng = seeded(seed);
    let mut edges = Vec::new();
    for t in 0..views {
        for i in 0..n {
            for j in 0..n {
                if (!directed && j < i) || !(rng.gen::<f64>() < density) {
                    continue;
                }
                let w = 0.1 + 1.9 * rng.gen::<f64>();
                edges.push((t, i, j, w));
                if !directed && i != j {
                    edges.push((t, j, i, w));
                }
            }
        }
    }
    TimeEvolvingGraph::from_edges(n, views, directed, edges).unwrap()
}

/// Random graph with random size in the given ranges.
pub fn random_sized_graph(seed: u64, max_n: usize, max_views: usize, directed: bool) -> TimeEvolvingGraph {
    let mut rng = seeded(seed ^ 0xabcdef);
    let n = rng.gen_range(1..=max_n);
    let views = rng.gen_range(2..=max_views);
    let density = rng.gen_range(0.05..0.8);
    random_graph(seed, n, views, directed, density)
}

pub fn max_abs(v: &[f64]) -> f64 {
    v.iter().fold(0.0, |m, x| m.max(x.abs()))
}
