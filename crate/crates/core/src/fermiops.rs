//! Fermionic creation, annihilation, and number operators with their sign
//! strings, materialized as sparse matrices between explicit bases.
//!
//! The sign convention counts occupied orbitals strictly below the target
//! linear index (ordered-product convention). It is fixed globally;
//! spectra and block structure do not depend on it, but matrix entries do.

use std::collections::BTreeMap;
use std::fmt::Write as _;
use std::io::Write;

use crate::error::{Error, Result};
use crate::fockspace::{Basis, FockState, SpinOrbital};

/// Result of applying a ladder operator: the new state together with the
/// fermionic parity sign, always exactly +1 or -1.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct SignedState {
    pub sign: i32,
    pub state: FockState,
}

/// The three operator species materialized by [`build_operator_matrix`].
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum OperatorKind {
    Annihilation,
    Creation,
    Number,
}

impl OperatorKind {
    pub fn as_str(&self) -> &'static str {
        match self {
            OperatorKind::Annihilation => "annihilation",
            OperatorKind::Creation => "creation",
            OperatorKind::Number => "number",
        }
    }
}

fn parity_sign(bits: u64, linear_index: usize) -> i32 {
    let below = bits & ((1u64 << linear_index) - 1);
    if below.count_ones() & 1 == 0 {
        1
    } else {
        -1
    }
}

fn checked_orbital(state: &FockState, orbital: &SpinOrbital) -> Result<usize> {
    let k = orbital.linear_index();
    if k >= state.n_orbitals() {
        return Err(Error::OrbitalOutOfRange {
            linear_index: k,
            n_orbitals: state.n_orbitals(),
        });
    }
    Ok(k)
}

/// Apply `c_{orbital}`: `None` if the orbital is empty, otherwise the state
/// with the bit cleared and the parity sign of the occupied orbitals below.
pub fn apply_annihilation(state: &FockState, orbital: &SpinOrbital) -> Result<Option<SignedState>> {
    let k = checked_orbital(state, orbital)?;
    let bits = state.bits();
    if bits >> k & 1 == 0 {
        return Ok(None);
    }
    Ok(Some(SignedState {
        sign: parity_sign(bits, k),
        state: state.with_bits(bits & !(1u64 << k)),
    }))
}

/// Apply `c†_{orbital}`: `None` if the orbital is already occupied.
pub fn apply_creation(state: &FockState, orbital: &SpinOrbital) -> Result<Option<SignedState>> {
    let k = checked_orbital(state, orbital)?;
    let bits = state.bits();
    if bits >> k & 1 == 1 {
        return Ok(None);
    }
    Ok(Some(SignedState {
        sign: parity_sign(bits, k),
        state: state.with_bits(bits | (1u64 << k)),
    }))
}

/// Real sparse matrix in triplet form. Entries are kept sorted by
/// (row, col) with no duplicates and no explicit zeros, so equal operators
/// compare equal and rebuilds are bit-identical.
#[derive(Clone, Debug, PartialEq)]
pub struct SparseOperator {
    n_rows: usize,
    n_cols: usize,
    name: String,
    row_basis: String,
    col_basis: String,
    entries: Vec<(usize, usize, f64)>,
}

impl SparseOperator {
    pub fn from_triplets(
        n_rows: usize,
        n_cols: usize,
        name: impl Into<String>,
        row_basis: impl Into<String>,
        col_basis: impl Into<String>,
        triplets: Vec<(usize, usize, f64)>,
    ) -> Result<SparseOperator> {
        let mut merged: BTreeMap<(usize, usize), f64> = BTreeMap::new();
        for (r, c, v) in triplets {
            if r >= n_rows || c >= n_cols {
                return Err(Error::EntryOutOfBounds {
                    row: r,
                    col: c,
                    n_rows,
                    n_cols,
                });
            }
            if !v.is_finite() {
                return Err(Error::NonFiniteEntry { row: r, col: c });
            }
            *merged.entry((r, c)).or_insert(0.0) += v;
        }
        let entries = merged
            .into_iter()
            .filter(|&(_, v)| v != 0.0)
            .map(|((r, c), v)| (r, c, v))
            .collect();
        Ok(SparseOperator {
            n_rows,
            n_cols,
            name: name.into(),
            row_basis: row_basis.into(),
            col_basis: col_basis.into(),
            entries,
        })
    }

    pub fn zero(n_rows: usize, n_cols: usize, name: impl Into<String>, basis: impl Into<String>) -> SparseOperator {
        let basis = basis.into();
        SparseOperator {
            n_rows,
            n_cols,
            name: name.into(),
            row_basis: basis.clone(),
            col_basis: basis,
            entries: Vec::new(),
        }
    }

    pub fn identity(n: usize, basis: impl Into<String>) -> SparseOperator {
        let basis = basis.into();
        SparseOperator {
            n_rows: n,
            n_cols: n,
            name: "identity".into(),
            row_basis: basis.clone(),
            col_basis: basis,
            entries: (0..n).map(|i| (i, i, 1.0)).collect(),
        }
    }

    pub fn n_rows(&self) -> usize {
        self.n_rows
    }

    pub fn n_cols(&self) -> usize {
        self.n_cols
    }

    pub fn shape(&self) -> (usize, usize) {
        (self.n_rows, self.n_cols)
    }

    pub fn nnz(&self) -> usize {
        self.entries.len()
    }

    pub fn name(&self) -> &str {
        &self.name
    }

    pub fn row_basis(&self) -> &str {
        &self.row_basis
    }

    pub fn col_basis(&self) -> &str {
        &self.col_basis
    }

    pub fn entries(&self) -> &[(usize, usize, f64)] {
        &self.entries
    }

    pub fn transpose(&self) -> SparseOperator {
        let mut entries: Vec<(usize, usize, f64)> =
            self.entries.iter().map(|&(r, c, v)| (c, r, v)).collect();
        entries.sort_unstable_by_key(|&(r, c, _)| (r, c));
        SparseOperator {
            n_rows: self.n_cols,
            n_cols: self.n_rows,
            name: format!("{}^T", self.name),
            row_basis: self.col_basis.clone(),
            col_basis: self.row_basis.clone(),
            entries,
        }
    }

    /// `self * other`, exact on integer-valued entries.
    pub fn matmul(&self, other: &SparseOperator) -> Result<SparseOperator> {
        if self.n_cols != other.n_rows {
            return Err(Error::EntryOutOfBounds {
                row: self.n_cols,
                col: other.n_rows,
                n_rows: self.n_cols,
                n_cols: self.n_cols,
            });
        }
        // index other's entries by row
        let mut by_row: Vec<Vec<(usize, f64)>> = vec![Vec::new(); other.n_rows];
        for &(r, c, v) in &other.entries {
            by_row[r].push((c, v));
        }
        let mut acc: BTreeMap<(usize, usize), f64> = BTreeMap::new();
        for &(r, k, a) in &self.entries {
            for &(c, b) in &by_row[k] {
                *acc.entry((r, c)).or_insert(0.0) += a * b;
            }
        }
        let entries = acc
            .into_iter()
            .filter(|&(_, v)| v != 0.0)
            .map(|((r, c), v)| (r, c, v))
            .collect();
        Ok(SparseOperator {
            n_rows: self.n_rows,
            n_cols: other.n_cols,
            name: format!("({})*({})", self.name, other.name),
            row_basis: self.row_basis.clone(),
            col_basis: other.col_basis.clone(),
            entries,
        })
    }

    /// `self + scale * other`; shapes must match.
    pub fn add_scaled(&self, other: &SparseOperator, scale: f64) -> Result<SparseOperator> {
        if self.shape() != other.shape() {
            return Err(Error::EntryOutOfBounds {
                row: other.n_rows,
                col: other.n_cols,
                n_rows: self.n_rows,
                n_cols: self.n_cols,
            });
        }
        let mut acc: BTreeMap<(usize, usize), f64> = BTreeMap::new();
        for &(r, c, v) in &self.entries {
            *acc.entry((r, c)).or_insert(0.0) += v;
        }
        for &(r, c, v) in &other.entries {
            *acc.entry((r, c)).or_insert(0.0) += scale * v;
        }
        let entries = acc
            .into_iter()
            .filter(|&(_, v)| v != 0.0)
            .map(|((r, c), v)| (r, c, v))
            .collect();
        Ok(SparseOperator {
            n_rows: self.n_rows,
            n_cols: self.n_cols,
            name: format!("({})+{}*({})", self.name, scale, other.name),
            row_basis: self.row_basis.clone(),
            col_basis: self.col_basis.clone(),
            entries,
        })
    }

    pub fn is_zero(&self) -> bool {
        self.entries.is_empty()
    }

    /// Exact structural symmetry: every entry equals its transpose partner.
    pub fn max_asymmetry(&self) -> f64 {
        let lookup: BTreeMap<(usize, usize), f64> = self
            .entries
            .iter()
            .map(|&(r, c, v)| ((r, c), v))
            .collect();
        let mut max = 0.0f64;
        for (&(r, c), &v) in &lookup {
            let vt = lookup.get(&(c, r)).copied().unwrap_or(0.0);
            max = max.max((v - vt).abs());
        }
        max
    }

    /// Matrix Market coordinate format (real general, 1-based indices),
    /// with comment lines recording the operator and its bases.
    pub fn write_matrix_market<W: Write>(&self, mut w: W) -> std::io::Result<()> {
        w.write_all(self.to_matrix_market().as_bytes())
    }

    pub fn to_matrix_market(&self) -> String {
        let mut out = String::new();
        out.push_str("%%MatrixMarket matrix coordinate real general\n");
        let _ = writeln!(out, "% op: {}", self.name);
        let _ = writeln!(out, "% rows: {}", self.row_basis);
        let _ = writeln!(out, "% cols: {}", self.col_basis);
        let _ = writeln!(out, "{} {} {}", self.n_rows, self.n_cols, self.entries.len());
        for &(r, c, v) in &self.entries {
            let _ = writeln!(out, "{} {} {}", r + 1, c + 1, v);
        }
        out
    }
}

/// Materialize one ladder or number operator as a matrix from `domain`
/// into `codomain`: `M[r, c]` is the fermionic sign when the operator maps
/// domain state `c` to codomain state `r`.
///
/// The codomain may be a restricted basis (e.g. the states reachable from
/// the desired subspace), but it must contain every reached state;
/// a missing one is reported as a `CodomainIncomplete` error, since it
/// signals a wrong restriction rather than a projection.
pub fn build_operator_matrix(
    kind: OperatorKind,
    orbital: &SpinOrbital,
    domain: &Basis,
    codomain: &Basis,
) -> Result<SparseOperator> {
    if domain.n_pairs() != codomain.n_pairs() {
        return Err(Error::WidthMismatch {
            expected: domain.n_pairs(),
            actual: codomain.n_pairs(),
        });
    }
    if orbital.linear_index() >= domain.n_orbitals() {
        return Err(Error::OrbitalOutOfRange {
            linear_index: orbital.linear_index(),
            n_orbitals: domain.n_orbitals(),
        });
    }
    // fixed-sector domains must pair with the matching codomain sector
    if let (Some(ne), Some(ne_out)) = (
        domain.uniform_electron_count(),
        codomain.uniform_electron_count(),
    ) {
        let expected = match kind {
            OperatorKind::Annihilation => ne.checked_sub(1),
            OperatorKind::Creation => Some(ne + 1),
            OperatorKind::Number => Some(ne),
        };
        if expected != Some(ne_out) {
            return Err(Error::SectorMismatch {
                kind: kind.as_str(),
                domain_ne: ne,
                codomain_ne: ne_out,
            });
        }
    }

    let mut triplets = Vec::new();
    for (col, state) in domain.states().iter().enumerate() {
        let mapped = match kind {
            OperatorKind::Annihilation => apply_annihilation(state, orbital)?,
            OperatorKind::Creation => apply_creation(state, orbital)?,
            OperatorKind::Number => state
                .is_occupied(orbital)?
                .then_some(SignedState { sign: 1, state: *state }),
        };
        if let Some(SignedState { sign, state: reached }) = mapped {
            let row = codomain
                .index_of(&reached)
                .ok_or_else(|| Error::CodomainIncomplete {
                    codomain: codomain.label().to_string(),
                    state: reached.to_string(),
                })?;
            triplets.push((row, col, sign as f64));
        }
    }
    SparseOperator::from_triplets(
        codomain.len(),
        domain.len(),
        format!("{} orbital={} ({})", kind.as_str(), orbital.linear_index(), orbital),
        codomain.label(),
        domain.label(),
        triplets,
    )
}

/// Matrix shapes of the number, annihilation, and creation operators.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct OperatorShapes {
    pub number: (u128, u128),
    pub annihilation: (u128, u128),
    pub creation: (u128, u128),
}

/// Closed-form operator shapes on the desired subspace.
///
/// Without spin resolution the number operator acts on the full `4^N`
/// desired space and the annihilation operator maps it onto the
/// `3N * 2^(2N-1)` reachable lower states; within a single hole-spin block
/// the dimensions shrink to `2^N` and `5N * 2^(N-1)`.
pub fn operator_shapes(n_pairs: usize, spin_resolved: bool) -> Result<OperatorShapes> {
    if n_pairs == 0 {
        return Err(Error::ZeroPairs);
    }
    if n_pairs > 60 {
        return Err(Error::ShapeOverflow { n_pairs });
    }
    let n = n_pairs as u128;
    let (dim, reach) = if spin_resolved {
        (1u128 << n_pairs, 5 * n * (1u128 << (n_pairs - 1)))
    } else {
        (1u128 << (2 * n_pairs), 3 * n * (1u128 << (2 * n_pairs - 1)))
    };
    Ok(OperatorShapes {
        number: (dim, dim),
        annihilation: (reach, dim),
        creation: (dim, reach),
    })
}
