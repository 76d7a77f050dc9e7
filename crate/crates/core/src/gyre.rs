//! Time-periodic double gyre on `[0, 2] x [0, 1]` and its Ulam discretization.

use std::f64::consts::PI;

use rand::Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::rng::{derive_seed, seeded};
use crate::sparse::CsrMatrix;
use crate::teg::{row_normalize, TimeEvolvingGraph};

pub const DOMAIN_WIDTH: f64 = 2.0;
pub const DOMAIN_HEIGHT: f64 = 1.0;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct GyreParams {
    pub amplitude: f64,
    pub omega: f64,
    pub epsilon: f64,
}

impl Default for GyreParams {
    fn default() -> Self {
        Self { amplitude: 0.1, omega: 2.0 * PI / 10.0, epsilon: 0.25 }
    }
}

impl GyreParams {
    pub fn validate(&self) -> Result<()> {
        if !(self.amplitude > 0.0 && self.omega > 0.0 && (0.0..0.5).contains(&self.epsilon)) {
            return Err(Error::InvalidArgument(format!("need A > 0, omega > 0, 0 <= epsilon < 0.5; got {self:?}")));
        }
        Ok(())
    }
}

/// Anything that can drive particles.
pub trait VelocityField: Sync {
    fn velocity(&self, x: f64, y: f64, t: f64) -> (f64, f64);
}

impl VelocityField for GyreParams {
    fn velocity(&self, x: f64, y: f64, t: f64) -> (f64, f64) {
        velocity(x, y, t, self)
    }
}

/// Field that moves nothing.
#[derive(Debug, Clone, Copy, Default)]
pub struct ZeroField;

impl VelocityField for ZeroField {
    fn velocity(&self, _: f64, _: f64, _: f64) -> (f64, f64) {
        (0.0, 0.0)
    }
}

pub fn velocity(x: f64, y: f64, t: f64, p: &GyreParams) -> (f64, f64) {
    let s = p.epsilon * (p.omega * t).sin();
    let f = s * x * x + (1.0 - 2.0 * s) * x;
    let df = 2.0 * s * x + 1.0 - 2.0 * s;
    let a = PI * p.amplitude;
    (-a * (PI * f).sin() * (PI * y).cos(), a * (PI * f).cos() * (PI * y).sin() * df)
}

fn reflect(v: f64, hi: f64) -> f64 {
    if v < 0.0 {
        -v
    } else if v > hi {
        2.0 * hi - v
    } else {
        v
    }
}

fn excess(v: f64, hi: f64) -> f64 {
    if v < 0.0 {
        -v
    } else {
        (v - hi).max(0.0)
    }
}

/// Classical RK4 from `t0` to `t1` with step `h`, reflecting at the walls.
///
/// A step that lands further than `max_excursion` outside the domain fails
/// with [`Error::StepTooLarge`].
pub fn integrate_rk4(
    field: &impl VelocityField,
    state: (f64, f64),
    t0: f64,
    t1: f64,
    h: f64,
    max_excursion: f64,
) -> Result<(f64, f64)> {
    if !(h > 0.0) {
        return Err(Error::InvalidArgument(format!("step must be positive, got {h}")));
    }
    let span = t1 - t0;
    let steps = (span / h).round();
    if steps < 1.0 || (steps * h - span).abs() > 1e-9 * span.abs().max(1.0) {
        return Err(Error::InvalidArgument(format!("step {h} does not divide [{t0}, {t1}]")));
    }
    let (mut x, mut y) = state;
    for s in 0..steps as usize {
        let t = t0 + s as f64 * h;
        let (k1x, k1y) = field.velocity(x, y, t);
        let (k2x, k2y) = field.velocity(x + 0.5 * h * k1x, y + 0.5 * h * k1y, t + 0.5 * h);
        let (k3x, k3y) = field.velocity(x + 0.5 * h * k2x, y + 0.5 * h * k2y, t + 0.5 * h);
        let (k4x, k4y) = field.velocity(x + h * k3x, y + h * k3y, t + h);
        x += h / 6.0 * (k1x + 2.0 * k2x + 2.0 * k3x + k4x);
        y += h / 6.0 * (k1y + 2.0 * k2y + 2.0 * k3y + k4y);
        let out = excess(x, DOMAIN_WIDTH).max(excess(y, DOMAIN_HEIGHT));
        if out > max_excursion {
            return Err(Error::StepTooLarge { excess: out, box_width: max_excursion });
        }
        x = reflect(x, DOMAIN_WIDTH);
        y = reflect(y, DOMAIN_HEIGHT);
    }
    Ok((x, y))
}

/// Equal boxes over the domain; box `iy * nx + ix` covers column `ix`, row `iy`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct UlamGrid {
    pub nx: usize,
    pub ny: usize,
    pub particles_per_box: usize,
    pub step: f64,
}

impl Default for UlamGrid {
    fn default() -> Self {
        Self { nx: 40, ny: 20, particles_per_box: 50, step: 0.01 }
    }
}

impl UlamGrid {
    pub fn boxes(&self) -> usize {
        self.nx * self.ny
    }

    pub fn box_width(&self) -> f64 {
        DOMAIN_WIDTH / self.nx as f64
    }

    pub fn box_height(&self) -> f64 {
        DOMAIN_HEIGHT / self.ny as f64
    }

    pub fn index(&self, ix: usize, iy: usize) -> usize {
        iy * self.nx + ix
    }

    pub fn coords(&self, b: usize) -> (usize, usize) {
        (b % self.nx, b / self.nx)
    }

    /// Box containing `(x, y)`; points on the far walls belong to the last box.
    pub fn locate(&self, x: f64, y: f64) -> usize {
        let ix = ((x / self.box_width()).floor().max(0.0) as usize).min(self.nx - 1);
        let iy = ((y / self.box_height()).floor().max(0.0) as usize).min(self.ny - 1);
        self.index(ix, iy)
    }

    pub fn center(&self, b: usize) -> (f64, f64) {
        let (ix, iy) = self.coords(b);
        ((ix as f64 + 0.5) * self.box_width(), (iy as f64 + 0.5) * self.box_height())
    }

    fn validate(&self) -> Result<()> {
        if self.nx == 0 || self.ny == 0 || self.particles_per_box == 0 || !(self.step > 0.0) {
            return Err(Error::InvalidArgument(format!("invalid Ulam grid {self:?}")));
        }
        Ok(())
    }
}

/// Box-to-box particle counts over `[t, t + 1]`.
///
/// Each box seeds its particles from its own derived stream, so the result
/// does not depend on thread scheduling.
pub fn ulam_counts(grid: &UlamGrid, field: &impl VelocityField, t: f64, seed: u64) -> Result<CsrMatrix> {
    grid.validate()?;
    let nb = grid.boxes();
    let (bw, bh) = (grid.box_width(), grid.box_height());
    let rows: Vec<Vec<(usize, usize, f64)>> = (0..nb)
        .into_par_iter()
        .map(|b| {
            let mut rng = seeded(derive_seed(seed, b as u64));
            let (ix, iy) = grid.coords(b);
            let mut targets = Vec::with_capacity(grid.particles_per_box);
            for _ in 0..grid.particles_per_box {
                let x = (ix as f64 + rng.gen::<f64>()) * bw;
                let y = (iy as f64 + rng.gen::<f64>()) * bh;
                let (x1, y1) = integrate_rk4(field, (x, y), t, t + 1.0, grid.step, bw)?;
                targets.push(grid.locate(x1, y1));
            }
            targets.sort_unstable();
            let mut out = Vec::new();
            for chunk in targets.chunk_by(|p, q| p == q) {
                out.push((b, chunk[0], chunk.len() as f64));
            }
            Ok(out)
        })
        .collect::<Result<_>>()?;
    let triplets: Vec<_> = rows.into_iter().flatten().collect();
    CsrMatrix::from_triplets(nb, nb, &triplets)
}

/// Row-stochastic Ulam approximation of the flow map over `[t, t + 1]`.
pub fn ulam_transition(grid: &UlamGrid, field: &impl VelocityField, t: f64, seed: u64) -> Result<CsrMatrix> {
    row_normalize(&ulam_counts(grid, field, t, seed)?, 0)
}

/// Directed graph on the boxes; view `t` holds the transition counts over
/// `[t, t + 1]` for `t = 0, ..., views - 1`.
pub fn gyre_graph(grid: &UlamGrid, params: &GyreParams, views: usize, seed: u64) -> Result<TimeEvolvingGraph> {
    params.validate()?;
    let snapshots = (0..views)
        .map(|t| ulam_counts(grid, params, t as f64, derive_seed(seed, t as u64)))
        .collect::<Result<Vec<_>>>()?;
    TimeEvolvingGraph::new(grid.boxes(), true, snapshots)
}

/// Box geometry written next to the gyre graph for plotting.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct GyreGeometry {
    pub nx: usize,
    pub ny: usize,
    pub box_width: f64,
    pub box_height: f64,
    /// Center of box `b` is `centers[b]`.
    pub centers: Vec<[f64; 2]>,
}

impl GyreGeometry {
    pub fn new(grid: &UlamGrid) -> Self {
        let centers = (0..grid.boxes()).map(|b| {
            let (x, y) = grid.center(b);
            [x, y]
        });
        Self {
            nx: grid.nx,
            ny: grid.ny,
            box_width: grid.box_width(),
            box_height: grid.box_height(),
            centers: centers.collect(),
        }
    }
}

/// Mean x position of the left/right label boundary at one view.
///
/// The label of the leftmost column (by majority) counts as "left"; each
/// row contributes the total width of its left-labelled boxes.
pub fn boundary_position(grid: &UlamGrid, labels: &[usize]) -> f64 {
    let mut votes = std::collections::HashMap::new();
    for iy in 0..grid.ny {
        *votes.entry(labels[grid.index(0, iy)]).or_insert(0usize) += 1;
    }
    let left = votes.into_iter().max_by_key(|&(l, c)| (c, std::cmp::Reverse(l))).map(|(l, _)| l).unwrap_or(0);
    let count = labels.iter().filter(|&&l| l == left).count();
    count as f64 / grid.ny as f64 * grid.box_width()
}

/// Least-squares fit `c + a cos(2 pi t / period) + b sin(2 pi t / period)` to
/// samples at `t = 0, 1, ...`; returns `(c, sqrt(a^2 + b^2), phase)` with the
/// fit written as `c + amplitude * sin(2 pi t / period + phase)`.
pub fn fit_sinusoid(samples: &[f64], period: f64) -> (f64, f64, f64) {
    // Normal equations of the 3-parameter model, solved by Cramer's rule.
    let w = 2.0 * PI / period;
    let mut g = [[0.0; 3]; 3];
    let mut r = [0.0; 3];
    for (t, &y) in samples.iter().enumerate() {
        let basis = [1.0, (w * t as f64).cos(), (w * t as f64).sin()];
        for i in 0..3 {
            r[i] += basis[i] * y;
            for j in 0..3 {
                g[i][j] += basis[i] * basis[j];
            }
        }
    }
    let det = |m: &[[f64; 3]; 3]| {
        m[0][0] * (m[1][1] * m[2][2] - m[1][2] * m[2][1]) - m[0][1] * (m[1][0] * m[2][2] - m[1][2] * m[2][0])
            + m[0][2] * (m[1][0] * m[2][1] - m[1][1] * m[2][0])
    };
    let d = det(&g);
    let solve = |col: usize| {
        let mut m = g;
        for i in 0..3 {
            m[i][col] = r[i];
        }
        det(&m) / d
    };
    let (c, a, b) = (solve(0), solve(1), solve(2));
    (c, a.hypot(b), a.atan2(b))
}
