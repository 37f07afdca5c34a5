//! Dense eigendecomposition of small Hamiltonians and structural checks of
//! the hole-spin block structure.
//!
//! Everything here is dense and exact-tolerance: the systems of interest
//! are small once the desired subspace and its blocks are used, and an
//! iterative sparse eigensolver would add numerical surface for nothing.

use nalgebra::DMatrix;

use crate::blocks::BlockDecomposition;
use crate::error::{Error, Result};
use crate::fermiops::SparseOperator;

/// Largest matrix the dense solver accepts.
pub const DENSE_DIM_CAP: usize = 4096;

/// Absolute tolerance for symmetry and off-block checks; entries are
/// O(1) eV, so this is far below any physical coupling.
pub const SYMMETRY_TOL: f64 = 1e-12;

/// Absolute tolerance on eigenpair residuals.
pub const EIGEN_RESIDUAL_TOL: f64 = 1e-10;

/// Eigenvalues of a symmetric operator, ascending, with the worst
/// max-norm residual of the computed eigenpairs.
#[derive(Clone, Debug, PartialEq)]
pub struct Spectrum {
    pub eigenvalues: Vec<f64>,
    pub basis_id: String,
    pub residual_bound: f64,
}

fn densify(op: &SparseOperator) -> DMatrix<f64> {
    let (n_rows, n_cols) = op.shape();
    let mut m = DMatrix::zeros(n_rows, n_cols);
    for &(r, c, v) in op.entries() {
        m[(r, c)] = v;
    }
    m
}

/// All eigenvalues of a symmetric operator via dense decomposition.
///
/// The operator must be square, symmetric within [`SYMMETRY_TOL`], and of
/// dimension at most [`DENSE_DIM_CAP`] — decompose into blocks first if it
/// is not. Each eigenpair residual `max |H v - lambda v|` must come out
/// below `tol` or the decomposition is rejected.
pub fn eigen_spectrum(op: &SparseOperator, tol: f64) -> Result<Spectrum> {
    let (n_rows, n_cols) = op.shape();
    if n_rows != n_cols {
        return Err(Error::NotSquare { n_rows, n_cols });
    }
    if n_rows > DENSE_DIM_CAP {
        return Err(Error::DimensionOverCap {
            dim: n_rows,
            cap: DENSE_DIM_CAP,
        });
    }
    check_symmetric(op)?;

    if n_rows == 0 {
        return Ok(Spectrum {
            eigenvalues: Vec::new(),
            basis_id: op.col_basis().to_string(),
            residual_bound: 0.0,
        });
    }

    let h = densify(op);
    let eigen = h.clone().symmetric_eigen();

    let mut order: Vec<usize> = (0..n_rows).collect();
    order.sort_by(|&a, &b| {
        eigen.eigenvalues[a]
            .partial_cmp(&eigen.eigenvalues[b])
            .expect("symmetric eigenvalues are finite")
    });

    // residual of every reported pair: max-norm of H v - lambda v
    let hv = &h * &eigen.eigenvectors;
    let mut residual_bound = 0.0f64;
    for i in 0..n_rows {
        let lambda = eigen.eigenvalues[i];
        for r in 0..n_rows {
            let res = (hv[(r, i)] - lambda * eigen.eigenvectors[(r, i)]).abs();
            residual_bound = residual_bound.max(res);
        }
    }
    if residual_bound > tol {
        return Err(Error::ResidualOverTolerance {
            residual: residual_bound,
            tol,
        });
    }

    Ok(Spectrum {
        eigenvalues: order.iter().map(|&i| eigen.eigenvalues[i]).collect(),
        basis_id: op.col_basis().to_string(),
        residual_bound,
    })
}

fn check_symmetric(op: &SparseOperator) -> Result<()> {
    let lookup: std::collections::BTreeMap<(usize, usize), f64> = op
        .entries()
        .iter()
        .map(|&(r, c, v)| ((r, c), v))
        .collect();
    for (&(r, c), &v) in &lookup {
        let vt = lookup.get(&(c, r)).copied().unwrap_or(0.0);
        let delta = (v - vt).abs();
        if delta > SYMMETRY_TOL {
            return Err(Error::AsymmetricOperator { row: r, col: c, delta });
        }
    }
    Ok(())
}

/// Result of scanning a desired-sector Hamiltonian for entries that
/// connect different hole-spin blocks.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct BlockDiagonalCheck {
    pub block_diagonal: bool,
    /// Largest entry magnitude connecting two different blocks.
    pub max_off_block: f64,
}

/// Check that `op`, built on the canonical desired basis, never connects
/// states of different hole-spin patterns beyond `tol`.
pub fn verify_block_diagonal(
    op: &SparseOperator,
    decomposition: &BlockDecomposition,
    tol: f64,
) -> Result<BlockDiagonalCheck> {
    let basis = decomposition.desired_basis();
    let (n_rows, n_cols) = op.shape();
    if n_rows != basis.len() || n_cols != basis.len() {
        return Err(Error::SiteCountMismatch {
            n_sites: n_rows,
            n_pairs: decomposition.n_pairs(),
        });
    }
    let block_of: Vec<usize> = basis
        .states()
        .iter()
        .map(|s| decomposition.block_of(s))
        .collect::<Result<_>>()?;

    let mut max_off_block = 0.0f64;
    for &(r, c, v) in op.entries() {
        if block_of[r] != block_of[c] {
            max_off_block = max_off_block.max(v.abs());
        }
    }
    Ok(BlockDiagonalCheck {
        block_diagonal: max_off_block <= tol,
        max_off_block,
    })
}
