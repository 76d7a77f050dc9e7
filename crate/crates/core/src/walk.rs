//! Random walks on time-evolving graphs.
//!
//! A walker sits at one vertex per view and moves from view `t` to view
//! `t + 1` according to row `path[t]` of `S_t`. Batches use one derived seed
//! per walker, so a batch is reproducible regardless of thread scheduling.

use std::collections::HashSet;

use rand::Rng;
use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::rng::{derive_seed, seeded};
use crate::sparse::CsrMatrix;

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct WalkTrace {
    pub path: Vec<usize>,
    pub seed: u64,
}

/// One walk of length `transitions.len()` starting at `start` in view 0.
pub fn simulate_walk(transitions: &[CsrMatrix], start: usize, seed: u64) -> Result<WalkTrace> {
    let n = transitions.first().map(CsrMatrix::nrows).unwrap_or(0);
    if start >= n {
        return Err(Error::InvalidArgument(format!("start vertex {start} outside [0, {n})")));
    }
    if transitions.len() < 2 {
        return Err(Error::InvalidArgument("need at least 2 views".into()));
    }
    let mut rng = seeded(seed);
    let mut path = Vec::with_capacity(transitions.len());
    path.push(start);
    let mut at = start;
    for s in &transitions[..transitions.len() - 1] {
        at = sample_row(s, at, rng.gen::<f64>());
        path.push(at);
    }
    Ok(WalkTrace { path, seed })
}

/// Walkers `i = 0..starts.len()` use seed `derive_seed(seed, i)`.
pub fn simulate_walks(transitions: &[CsrMatrix], starts: &[usize], seed: u64) -> Result<Vec<WalkTrace>> {
    starts.par_iter().enumerate().map(|(i, &s)| simulate_walk(transitions, s, derive_seed(seed, i as u64))).collect()
}

fn sample_row(s: &CsrMatrix, i: usize, u: f64) -> usize {
    let (cols, vals) = s.row(i);
    let total: f64 = vals.iter().sum();
    let target = u * total;
    let mut acc = 0.0;
    for (&j, &p) in cols.iter().zip(vals) {
        acc += p;
        if target < acc {
            return j;
        }
    }
    // Rounding: fall back to the last vertex with positive probability.
    cols.iter().zip(vals).rev().find(|(_, &p)| p > 0.0).map(|(&j, _)| j).unwrap_or(i)
}

/// Fraction of traces that are outside `sets[t]` at some view `t`.
pub fn escape_rate(traces: &[WalkTrace], sets: &[HashSet<usize>]) -> Result<f64> {
    if traces.is_empty() {
        return Err(Error::InvalidArgument("no traces".into()));
    }
    let escaped = traces.iter().filter(|tr| tr.path.iter().zip(sets).any(|(v, set)| !set.contains(v))).count();
    Ok(escaped as f64 / traces.len() as f64)
}

/// Among traces inside `set` at view `t`, the fraction outside it at `t + 1`.
/// `None` when no trace is inside `set` at view `t`.
pub fn step_escape_rate(traces: &[WalkTrace], set: &HashSet<usize>, t: usize) -> Option<f64> {
    let inside: Vec<_> = traces.iter().filter(|tr| set.contains(&tr.path[t])).collect();
    if inside.is_empty() {
        return None;
    }
    let left = inside.iter().filter(|tr| !set.contains(&tr.path[t + 1])).count();
    Some(left as f64 / inside.len() as f64)
}
