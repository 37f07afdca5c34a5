//! Exact Fock-space construction and Hilbert-space analysis for arrays of
//! silicon dangling-bond-pair charge qubits.
//!
//! The crate builds the extended Hubbard Hamiltonian of such an array on
//! explicit occupation-number bases, decomposes the Hilbert space into the
//! desired (no qubit loss) subspace and its spin-preserved blocks, verifies
//! the dimension-counting formulas by brute force, diagonalizes small
//! systems, and models the classical memory needed to store states and
//! operators as the array grows.

pub mod blocks;
mod error;
pub mod fermiops;
pub mod fockspace;
pub mod hubbard;
pub mod memmodel;
pub mod spectra;

pub use error::{Error, ErrorKind, Result};
