//! Block matrices of the multiview CCA eigenproblem `A f = lambda B f`.
//!
//! With `Mn` unknowns ordered view-major (entry `t * n + i` is vertex `i` at
//! view `t`):
//!
//! * `A` has off-diagonal blocks `C_{t(t+1)} = D_{mu_t} S_t` and their
//!   transposes, zero diagonal blocks;
//! * `B` is diagonal with blocks `C_11, 2 C_22, ..., 2 C_{(M-1)(M-1)}, C_MM`;
//! * `C = B^{-1} A`, the row-stochastic operator whose block rows are
//!   `[K_1]`, `[T_{t-1} / 2, K_t / 2]`, ..., `[T_{M-1}]`;
//! * `L = I - C`, the spatio-temporal graph Laplacian.

use crate::error::Result;
use crate::sparse::CsrMatrix;
use crate::teg::OperatorSequence;

#[derive(Debug, Clone)]
pub struct SpatioTemporalSystem {
    n: usize,
    views: usize,
    a: CsrMatrix,
    b: Vec<f64>,
    c: CsrMatrix,
}

/// Weight of view `t` in `B`: 1 at the ends, 2 in the interior.
fn view_weight(t: usize, views: usize) -> f64 {
    if t == 0 || t + 1 == views {
        1.0
    } else {
        2.0
    }
}

impl SpatioTemporalSystem {
    /// Covariance route: builds `A` and `B`, then `C = B^{-1} A`.
    pub fn assemble(ops: &OperatorSequence) -> Result<Self> {
        let n = ops.n();
        let views = ops.views();
        let dim = n * views;

        let mut triplets = Vec::new();
        for t in 0..views - 1 {
            let cross = ops.cross_covariance(t);
            for (i, j, v) in cross.iter() {
                triplets.push((t * n + i, (t + 1) * n + j, v));
                triplets.push(((t + 1) * n + j, t * n + i, v));
            }
        }
        let a = CsrMatrix::from_triplets(dim, dim, &triplets)?;

        let b: Vec<f64> = (0..views)
            .flat_map(|t| {
                let w = view_weight(t, views);
                ops.density(t).iter().map(move |m| w * m)
            })
            .collect();
        let inv_b: Vec<f64> = b.iter().map(|x| 1.0 / x).collect();
        let c = a.scale(Some(&inv_b), None);
        Ok(Self { n, views, a, b, c })
    }

    /// Transfer-operator route: places `K_t` and `T_t` blocks directly.
    pub fn transfer_route(ops: &OperatorSequence) -> Result<CsrMatrix> {
        let n = ops.n();
        let views = ops.views();
        let dim = n * views;
        let mut triplets = Vec::new();
        for t in 0..views {
            let half = 1.0 / view_weight(t, views);
            if t + 1 < views {
                for (i, j, v) in ops.transition(t).iter() {
                    triplets.push((t * n + i, (t + 1) * n + j, half * v));
                }
            }
            if t > 0 {
                for (i, j, v) in ops.reweighted_pf_matrix(t - 1).iter() {
                    triplets.push((t * n + i, (t - 1) * n + j, half * v));
                }
            }
        }
        CsrMatrix::from_triplets(dim, dim, &triplets)
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn views(&self) -> usize {
        self.views
    }

    /// `Mn`.
    pub fn dim(&self) -> usize {
        self.n * self.views
    }

    pub fn a(&self) -> &CsrMatrix {
        &self.a
    }

    /// Diagonal of `B`.
    pub fn b(&self) -> &[f64] {
        &self.b
    }

    pub fn c(&self) -> &CsrMatrix {
        &self.c
    }

    /// `L = I - C`.
    pub fn laplacian(&self) -> CsrMatrix {
        CsrMatrix::identity(self.dim()).add(&self.c.map_values(|v| -v)).expect("same shape")
    }

    /// `B^{-1/2} A B^{-1/2}`: symmetric, same spectrum as `C`.
    pub fn symmetrized(&self) -> CsrMatrix {
        let s = self.inv_sqrt_b();
        self.a.scale(Some(&s), Some(&s))
    }

    pub fn inv_sqrt_b(&self) -> Vec<f64> {
        self.b.iter().map(|x| 1.0 / x.sqrt()).collect()
    }

    /// Static graph on the `Mn` vertex copies with adjacency `A`.
    pub fn coupling_graph(&self) -> CouplingGraph {
        CouplingGraph { n: self.n, views: self.views, adjacency: self.a.clone() }
    }

    /// `max_i |(C v)_i - lambda v_i|`.
    pub fn residual(&self, lambda: f64, v: &[f64]) -> f64 {
        let cv = self.c.matvec(v).expect("vector of length Mn");
        cv.iter().zip(v).map(|(x, y)| (x - lambda * y).abs()).fold(0.0, f64::max)
    }
}

/// `((view, vertex), (view, vertex), weight)`.
pub type CouplingEdge = ((usize, usize), (usize, usize), f64);

/// Undirected graph whose vertices are the copies `(view, vertex)`.
#[derive(Debug, Clone)]
pub struct CouplingGraph {
    n: usize,
    views: usize,
    adjacency: CsrMatrix,
}

impl CouplingGraph {
    pub fn adjacency(&self) -> &CsrMatrix {
        &self.adjacency
    }

    pub fn index(&self, view: usize, vertex: usize) -> usize {
        view * self.n + vertex
    }

    pub fn weight(&self, a: (usize, usize), b: (usize, usize)) -> f64 {
        self.adjacency.get(self.index(a.0, a.1), self.index(b.0, b.1))
    }

    pub fn has_edge(&self, a: (usize, usize), b: (usize, usize)) -> bool {
        self.weight(a, b) != 0.0
    }

    pub fn is_undirected(&self) -> bool {
        self.adjacency.asymmetry() == 0.0
    }

    /// Edges as `((view, vertex), (view, vertex), weight)`, each listed once.
    pub fn edges(&self) -> Vec<CouplingEdge> {
        self.adjacency
            .iter()
            .filter(|&(i, j, _)| i < j)
            .map(|(i, j, w)| ((i / self.n, i % self.n), (j / self.n, j % self.n), w))
            .collect()
    }

    pub fn views(&self) -> usize {
        self.views
    }
}
