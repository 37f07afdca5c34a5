//! Closed-form classical-memory estimates for storing state vectors and
//! operators as the array grows.
//!
//! Counts are exact (`BigUint`), so the reports stay meaningful far past
//! any materializable system. The byte model is explicit and configurable:
//! the interesting content is the growth of each series and the ratios
//! between them, not the absolute scale. Three reports cover the storage
//! of state vectors, of the basis sets needed to assemble the Hamiltonian,
//! and of the number operator; the desired-vs-per-block comparison is a
//! column filter of the second report, not a separate formula.

use std::fmt::Write as _;
use std::ops::RangeInclusive;

use num_bigint::BigUint;

use crate::blocks::{binomial, pow2};
use crate::error::{Error, Result};
use crate::fermiops::{build_operator_matrix, OperatorKind};
use crate::fockspace::{Basis, HoleSpinPattern, Spin, SpinOrbital};

/// Triplet-mode reports materialize the desired sector; `4^N` states stop
/// being cheap quickly.
pub const TRIPLET_ENUMERATION_CAP: usize = 10;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum MatrixMode {
    /// Matrices stored densely: `dims^2` amplitudes.
    Dense,
    /// Matrices stored as (row, col, value) triplets of actual nonzeros.
    Triplet,
}

/// How many bytes each stored item costs.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct MemoryModel {
    /// Per amplitude; 16 assumes complex double precision.
    pub bytes_per_amplitude: u64,
    pub matrix_mode: MatrixMode,
    /// Per sparse triplet; 20 packs two 4-byte indices and an 8-byte real.
    pub bytes_per_triplet: u64,
    /// Store states as packed occupation bitstrings (`ceil(4N/8)` bytes
    /// each) instead of one amplitude per state.
    pub bitstring_storage: bool,
}

impl Default for MemoryModel {
    fn default() -> Self {
        MemoryModel {
            bytes_per_amplitude: 16,
            matrix_mode: MatrixMode::Dense,
            bytes_per_triplet: 20,
            bitstring_storage: false,
        }
    }
}

impl MemoryModel {
    fn validate(&self) -> Result<()> {
        if self.bytes_per_amplitude == 0 || self.bytes_per_triplet == 0 {
            return Err(Error::BadMemoryModel);
        }
        Ok(())
    }

    fn bytes_per_state(&self, n_pairs: usize) -> u64 {
        if self.bitstring_storage {
            (4 * n_pairs as u64).div_ceil(8)
        } else {
            self.bytes_per_amplitude
        }
    }
}

/// One report line: a labeled count of stored items and its byte cost.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct MemoryRow {
    pub n_pairs: usize,
    pub quantity: &'static str,
    pub count: BigUint,
    pub bytes: BigUint,
}

#[derive(Clone, Debug, PartialEq, Eq, Default)]
pub struct MemoryReport {
    rows: Vec<MemoryRow>,
}

impl MemoryReport {
    pub fn rows(&self) -> &[MemoryRow] {
        &self.rows
    }

    /// Rows of one series, in `n_pairs` order.
    pub fn series(&self, quantity: &str) -> Vec<&MemoryRow> {
        self.rows.iter().filter(|r| r.quantity == quantity).collect()
    }

    /// CSV body with columns `n,quantity,count,bytes`.
    pub fn to_csv(&self) -> String {
        let mut out = String::from("n,quantity,count,bytes\n");
        for row in &self.rows {
            let _ = writeln!(
                out,
                "{},{},{},{}",
                row.n_pairs, row.quantity, row.count, row.bytes
            );
        }
        out
    }

    /// Two-column `n bytes` series suitable for gnuplot.
    pub fn to_gnuplot_series(&self, quantity: &str) -> String {
        let mut out = String::new();
        for row in self.series(quantity) {
            let _ = writeln!(out, "{} {}", row.n_pairs, row.bytes);
        }
        out
    }

    fn push(&mut self, n_pairs: usize, quantity: &'static str, count: BigUint, per_item: u64) {
        let bytes = &count * BigUint::from(per_item);
        self.rows.push(MemoryRow {
            n_pairs,
            quantity,
            count,
            bytes,
        });
    }
}

fn check_range(n_range: &RangeInclusive<usize>) -> Result<()> {
    if *n_range.start() == 0 {
        return Err(Error::ZeroPairs);
    }
    Ok(())
}

/// Memory to hold one state vector over the full `3N`-electron sector
/// (`states_full`), over the desired subspace (`states_desired`), and over
/// a single hole-spin block (`states_block`).
pub fn state_storage_report(
    n_range: RangeInclusive<usize>,
    model: &MemoryModel,
) -> Result<MemoryReport> {
    model.validate()?;
    check_range(&n_range)?;
    let mut report = MemoryReport::default();
    for n_pairs in n_range {
        let n = n_pairs as u64;
        let per_state = model.bytes_per_state(n_pairs);
        report.push(n_pairs, "states_full", binomial(4 * n, 3 * n), per_state);
        report.push(n_pairs, "states_desired", pow2(2 * n), per_state);
        report.push(n_pairs, "states_block", pow2(n), per_state);
    }
    Ok(report)
}

/// Memory to hold the basis sets that assemble the Hamiltonian: the whole
/// `(3N-1)`-electron sector (`hbasis_lower_total`), the states reachable
/// from the desired subspace (`hbasis_desired_reachable`), and the states
/// reachable from one hole-spin block (`hbasis_spin_block`).
pub fn hamiltonian_basis_report(
    n_range: RangeInclusive<usize>,
    model: &MemoryModel,
) -> Result<MemoryReport> {
    model.validate()?;
    check_range(&n_range)?;
    let mut report = MemoryReport::default();
    for n_pairs in n_range {
        let n = n_pairs as u64;
        let per_state = model.bytes_per_state(n_pairs);
        report.push(
            n_pairs,
            "hbasis_lower_total",
            binomial(4 * n, 3 * n - 1),
            per_state,
        );
        report.push(
            n_pairs,
            "hbasis_desired_reachable",
            BigUint::from(3 * n) * pow2(2 * n - 1),
            per_state,
        );
        report.push(
            n_pairs,
            "hbasis_spin_block",
            BigUint::from(5 * n) * pow2(n - 1),
            per_state,
        );
    }
    Ok(report)
}

/// Memory to hold one number operator on the desired subspace
/// (`numop_full`, `4^N x 4^N`) and on a single hole-spin block
/// (`numop_spin_block`, `2^N x 2^N`).
///
/// Dense mode prices `dims^2` amplitudes from the closed forms. Triplet
/// mode materializes the bases, builds the operator for the first orbital,
/// and prices its actual nonzeros, so it is capped at
/// [`TRIPLET_ENUMERATION_CAP`] pairs.
pub fn number_operator_report(
    n_range: RangeInclusive<usize>,
    model: &MemoryModel,
) -> Result<MemoryReport> {
    model.validate()?;
    check_range(&n_range)?;
    let mut report = MemoryReport::default();
    for n_pairs in n_range.clone() {
        let n = n_pairs as u64;
        match model.matrix_mode {
            MatrixMode::Dense => {
                report.push(
                    n_pairs,
                    "numop_full",
                    pow2(2 * n) * pow2(2 * n),
                    model.bytes_per_amplitude,
                );
                report.push(
                    n_pairs,
                    "numop_spin_block",
                    pow2(n) * pow2(n),
                    model.bytes_per_amplitude,
                );
            }
            MatrixMode::Triplet => {
                if n_pairs > TRIPLET_ENUMERATION_CAP {
                    return Err(Error::TripletOverCap {
                        n_pairs,
                        cap: TRIPLET_ENUMERATION_CAP,
                    });
                }
                let orbital = SpinOrbital::from_linear_index(0);
                let desired = Basis::desired(n_pairs)?;
                let on_desired =
                    build_operator_matrix(OperatorKind::Number, &orbital, &desired, &desired)?;
                let all_up = HoleSpinPattern::new(vec![Spin::Up; n_pairs]);
                let block = Basis::hole_spin_block(&all_up)?;
                let on_block =
                    build_operator_matrix(OperatorKind::Number, &orbital, &block, &block)?;
                report.push(
                    n_pairs,
                    "numop_full",
                    BigUint::from(on_desired.nnz()),
                    model.bytes_per_triplet,
                );
                report.push(
                    n_pairs,
                    "numop_spin_block",
                    BigUint::from(on_block.nnz()),
                    model.bytes_per_triplet,
                );
            }
        }
    }
    Ok(report)
}
