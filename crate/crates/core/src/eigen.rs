//! Symmetric eigensolvers.
//!
//! Small and medium problems go through a dense decomposition (faer). Large
//! sparse problems use a thick-restart Lanczos iteration with full
//! reorthogonalization, which only needs matrix-vector products.

use faer::{Mat, Side};
use rand::Rng;

use crate::error::{Error, Result};
use crate::rng::seeded;
use crate::sparse::CsrMatrix;

/// Eigenpairs of a symmetric matrix, sorted by descending eigenvalue.
#[derive(Debug, Clone)]
pub struct SymmetricEigen {
    pub values: Vec<f64>,
    /// Orthonormal eigenvectors, `vectors[i]` belongs to `values[i]`.
    pub vectors: Vec<Vec<f64>>,
}

/// Full decomposition of a dense symmetric matrix (row-major), descending.
pub fn dense_symmetric(n: usize, data: &[f64]) -> Result<SymmetricEigen> {
    if data.len() != n * n {
        return Err(Error::DimensionMismatch { expected: n * n, found: data.len() });
    }
    let m = Mat::<f64>::from_fn(n, n, |i, j| data[i * n + j]);
    let evd = m.self_adjoint_eigen(Side::Lower).map_err(|_| Error::ConvergenceFailure {
        iterations: 0,
        converged: 0,
        requested: n,
        residual: f64::NAN,
    })?;
    let s = evd.S().column_vector();
    let u = evd.U();
    // faer returns ascending order.
    let values = (0..n).rev().map(|i| s[i]).collect();
    let vectors = (0..n).rev().map(|j| (0..n).map(|i| u[(i, j)]).collect()).collect();
    Ok(SymmetricEigen { values, vectors })
}

/// Eigenvalues only, descending.
pub fn dense_symmetric_values(n: usize, data: &[f64]) -> Result<Vec<f64>> {
    Ok(dense_symmetric(n, data)?.values)
}

#[derive(Debug, Clone)]
pub struct LanczosOptions {
    /// Residual tolerance `||H x - theta x||` for a unit Ritz vector.
    pub tol: f64,
    /// Krylov basis size; `None` picks `max(2 nev + 20, nev + 40)`.
    pub basis_size: Option<usize>,
    pub max_restarts: usize,
    pub seed: u64,
}

impl Default for LanczosOptions {
    fn default() -> Self {
        Self { tol: 1e-10, basis_size: None, max_restarts: 2000, seed: 0x5eed }
    }
}

/// The `nev` algebraically largest eigenpairs of the symmetric `matrix`.
pub fn lanczos_largest(matrix: &CsrMatrix, nev: usize, opts: &LanczosOptions) -> Result<SymmetricEigen> {
    let dim = matrix.nrows();
    if nev == 0 || nev > dim {
        return Err(Error::InvalidArgument(format!("requested {nev} eigenpairs of a {dim}x{dim} matrix")));
    }
    let ncv = opts.basis_size.unwrap_or_else(|| (2 * nev + 20).max(nev + 40)).min(dim);
    if ncv <= nev || ncv < 3 {
        // Too small for restarting to make sense.
        let full = dense_symmetric(dim, &matrix.to_dense())?;
        return Ok(truncate(full, nev));
    }

    let mut rng = seeded(opts.seed);
    let mut basis: Vec<Vec<f64>> = Vec::with_capacity(ncv + 1);
    let mut start: Vec<f64> = (0..dim).map(|_| rng.gen::<f64>() - 0.5).collect();
    normalize(&mut start);
    basis.push(start);

    // Projected matrix V^T H V, kept dense.
    let mut proj = vec![0.0; ncv * ncv];
    let mut kept = 0usize;
    let mut w = vec![0.0; dim];
    let mut last_residual = f64::INFINITY;
    let mut last_converged = 0;

    for restart in 0..opts.max_restarts {
        // Extend the basis from `kept` to `ncv` columns.
        let mut beta = 0.0;
        for j in kept..ncv {
            matrix.matvec_into(&basis[j], &mut w);
            let coeffs = orthogonalize(&mut w, &basis);
            for (i, &c) in coeffs.iter().enumerate() {
                proj[i * ncv + j] = c;
                proj[j * ncv + i] = c;
            }
            beta = norm(&w);
            let next = if beta > 1e-12 {
                w.iter().map(|x| x / beta).collect()
            } else {
                // Invariant subspace found: continue with a fresh direction.
                beta = 0.0;
                let mut fresh: Vec<f64> = (0..dim).map(|_| rng.gen::<f64>() - 0.5).collect();
                orthogonalize(&mut fresh, &basis);
                normalize(&mut fresh);
                fresh
            };
            if basis.len() == j + 1 {
                basis.push(next);
            } else {
                basis[j + 1] = next;
            }
        }

        let ritz = dense_symmetric(ncv, &proj)?;
        let residual = |i: usize| (beta * ritz.vectors[i][ncv - 1]).abs();
        let converged = (0..nev).take_while(|&i| residual(i) <= opts.tol).count();
        last_converged = converged;
        last_residual = (0..nev).map(residual).fold(0.0, f64::max);
        if converged == nev {
            let vectors = (0..nev).map(|i| combine(&basis[..ncv], &ritz.vectors[i])).collect();
            return Ok(SymmetricEigen { values: ritz.values[..nev].to_vec(), vectors });
        }

        // Thick restart: keep the leading Ritz vectors plus the residual direction.
        kept = (nev + (ncv - nev) / 2).min(ncv - 1);
        let mut new_basis: Vec<Vec<f64>> = (0..kept).map(|i| combine(&basis[..ncv], &ritz.vectors[i])).collect();
        new_basis.push(basis[ncv].clone());
        basis = new_basis;
        proj.iter_mut().for_each(|x| *x = 0.0);
        for i in 0..kept {
            proj[i * ncv + i] = ritz.values[i];
            let coupling = beta * ritz.vectors[i][ncv - 1];
            proj[i * ncv + kept] = coupling;
            proj[kept * ncv + i] = coupling;
        }
        if restart + 1 == opts.max_restarts {
            break;
        }
    }
    Err(Error::ConvergenceFailure {
        iterations: opts.max_restarts,
        converged: last_converged,
        requested: nev,
        residual: last_residual,
    })
}

fn truncate(mut e: SymmetricEigen, k: usize) -> SymmetricEigen {
    e.values.truncate(k);
    e.vectors.truncate(k);
    e
}

fn dot(a: &[f64], b: &[f64]) -> f64 {
    a.iter().zip(b).map(|(x, y)| x * y).sum()
}

fn norm(a: &[f64]) -> f64 {
    dot(a, a).sqrt()
}

fn normalize(a: &mut [f64]) {
    let n = norm(a);
    a.iter_mut().for_each(|x| *x /= n);
}

/// Two passes of classical Gram-Schmidt against `basis`; returns the summed
/// projection coefficients.
fn orthogonalize(w: &mut [f64], basis: &[Vec<f64>]) -> Vec<f64> {
    let mut coeffs = vec![0.0; basis.len()];
    for _ in 0..2 {
        for (c, v) in coeffs.iter_mut().zip(basis) {
            let h = dot(v, w);
            *c += h;
            w.iter_mut().zip(v).for_each(|(x, y)| *x -= h * y);
        }
    }
    coeffs
}

fn combine(basis: &[Vec<f64>], coeffs: &[f64]) -> Vec<f64> {
    let mut out = vec![0.0; basis[0].len()];
    for (v, &c) in basis.iter().zip(coeffs) {
        out.iter_mut().zip(v).for_each(|(o, x)| *o += c * x);
    }
    out
}
