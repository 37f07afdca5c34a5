//! Occupation-number basis states for arrays of dangling-bond pairs.
//!
//! A system of `N` pairs has `2N` sites and `4N` spin-orbitals. States are
//! stored as bitstrings (one bit per spin-orbital) packed into a `u64`,
//! which bounds materialized enumeration at 16 pairs; every sector that
//! fits in memory fits in the encoding long before that.

use std::fmt;
use std::str::FromStr;

use crate::error::{Error, Result};

/// Widest system the `u64` state encoding can hold (4 bits per pair).
pub const MAX_ENCODED_PAIRS: usize = 16;

/// Which dangling bond of a pair an orbital sits on.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Side {
    Left = 0,
    Right = 1,
}

/// Electron spin projection.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Spin {
    Up = 0,
    Down = 1,
}

impl Spin {
    pub fn flipped(self) -> Spin {
        match self {
            Spin::Up => Spin::Down,
            Spin::Down => Spin::Up,
        }
    }

    pub fn as_char(self) -> char {
        match self {
            Spin::Up => 'u',
            Spin::Down => 'd',
        }
    }
}

/// A single spin-orbital: (pair, side, spin) with the fixed linear index
/// `4*pair + 2*side + spin`. This indexing convention determines every
/// fermionic sign in the crate; do not change it.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct SpinOrbital {
    pub pair_index: usize,
    pub side: Side,
    pub spin: Spin,
}

impl SpinOrbital {
    pub fn new(pair_index: usize, side: Side, spin: Spin) -> Self {
        SpinOrbital {
            pair_index,
            side,
            spin,
        }
    }

    pub fn linear_index(&self) -> usize {
        4 * self.pair_index + 2 * (self.side as usize) + (self.spin as usize)
    }

    pub fn from_linear_index(linear_index: usize) -> Self {
        let side = if linear_index & 2 == 0 {
            Side::Left
        } else {
            Side::Right
        };
        let spin = if linear_index & 1 == 0 {
            Spin::Up
        } else {
            Spin::Down
        };
        SpinOrbital {
            pair_index: linear_index / 4,
            side,
            spin,
        }
    }

    /// Site index in `[0, 2N)`: pair `p` owns sites `2p` (left) and `2p+1`.
    pub fn site_index(&self) -> usize {
        2 * self.pair_index + self.side as usize
    }

    /// All `4N` orbitals in linear-index order.
    pub fn all(n_pairs: usize) -> impl Iterator<Item = SpinOrbital> {
        (0..4 * n_pairs).map(SpinOrbital::from_linear_index)
    }
}

impl fmt::Display for SpinOrbital {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let side = match self.side {
            Side::Left => 'L',
            Side::Right => 'R',
        };
        write!(f, "p{}.{}{}", self.pair_index, side, self.spin.as_char())
    }
}

/// Occupation-number basis state over `4N` spin-orbitals.
///
/// Bit `k` of the encoding is the occupancy of linear index `k`, with
/// index 0 as the least-significant bit. The width (number of pairs)
/// travels with the state so that operations can validate it.
#[derive(Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct FockState {
    bits: u64,
    n_pairs: u8,
}

impl FockState {
    /// The empty state for `n_pairs` pairs.
    pub fn vacuum(n_pairs: usize) -> Result<Self> {
        check_width(n_pairs)?;
        Ok(FockState {
            bits: 0,
            n_pairs: n_pairs as u8,
        })
    }

    /// Build from a raw bit pattern; bits beyond `4N` must be clear.
    pub fn from_bits(n_pairs: usize, bits: u64) -> Result<Self> {
        check_width(n_pairs)?;
        if bits & !width_mask(4 * n_pairs) != 0 {
            let highest = 64 - bits.leading_zeros() as usize;
            return Err(Error::WidthMismatch {
                expected: n_pairs,
                actual: highest.div_ceil(4),
            });
        }
        Ok(FockState {
            bits,
            n_pairs: n_pairs as u8,
        })
    }

    pub fn from_occupied(n_pairs: usize, orbitals: &[SpinOrbital]) -> Result<Self> {
        let mut state = FockState::vacuum(n_pairs)?;
        for orb in orbitals {
            let k = state.checked_index(orb)?;
            state.bits |= 1 << k;
        }
        Ok(state)
    }

    pub fn bits(&self) -> u64 {
        self.bits
    }

    pub fn n_pairs(&self) -> usize {
        self.n_pairs as usize
    }

    pub fn n_orbitals(&self) -> usize {
        4 * self.n_pairs as usize
    }

    pub fn electron_count(&self) -> usize {
        self.bits.count_ones() as usize
    }

    pub fn is_occupied(&self, orbital: &SpinOrbital) -> Result<bool> {
        let k = self.checked_index(orbital)?;
        Ok(self.bits >> k & 1 == 1)
    }

    pub(crate) fn occupied_bit(&self, linear_index: usize) -> bool {
        self.bits >> linear_index & 1 == 1
    }

    pub(crate) fn with_bits(&self, bits: u64) -> FockState {
        FockState {
            bits,
            n_pairs: self.n_pairs,
        }
    }

    fn checked_index(&self, orbital: &SpinOrbital) -> Result<usize> {
        let k = orbital.linear_index();
        if k >= self.n_orbitals() {
            return Err(Error::OrbitalOutOfRange {
                linear_index: k,
                n_orbitals: self.n_orbitals(),
            });
        }
        Ok(k)
    }

    /// Electron count in the four spin-orbitals of one pair, in `[0, 4]`.
    pub fn pair_occupation(&self, pair_index: usize) -> Result<usize> {
        if pair_index >= self.n_pairs() {
            return Err(Error::PairOutOfRange {
                pair_index,
                n_pairs: self.n_pairs(),
            });
        }
        Ok((self.bits >> (4 * pair_index) & 0xf).count_ones() as usize)
    }

    /// Twice the total spin projection: `n_up - n_down` in units of hbar/2.
    pub fn total_sz(&self) -> i64 {
        const UP_MASK: u64 = 0x5555_5555_5555_5555; // even linear indices
        let up = (self.bits & UP_MASK).count_ones() as i64;
        let down = (self.bits & !UP_MASK).count_ones() as i64;
        up - down
    }

    /// True iff every pair retains exactly three electrons (no qubit loss).
    pub fn is_desired(&self) -> bool {
        let mut bits = self.bits;
        for _ in 0..self.n_pairs {
            if (bits & 0xf).count_ones() != 3 {
                return false;
            }
            bits >>= 4;
        }
        true
    }

    /// Spin of the single empty orbital in each pair. Defined only on
    /// desired states.
    pub fn hole_spin_pattern(&self) -> Result<HoleSpinPattern> {
        if !self.is_desired() {
            return Err(Error::NotDesired {
                state: self.to_string(),
            });
        }
        let mut spins = Vec::with_capacity(self.n_pairs());
        for p in 0..self.n_pairs() {
            let nibble = self.bits >> (4 * p) & 0xf;
            let hole_offset = (!nibble & 0xf).trailing_zeros() as usize;
            spins.push(if hole_offset & 1 == 0 {
                Spin::Up
            } else {
                Spin::Down
            });
        }
        Ok(HoleSpinPattern { spins })
    }
}

impl fmt::Display for FockState {
    /// Textual form: linear index 0 leftmost, one 4-bit group per pair,
    /// groups separated by `|` (e.g. `1110|1011`).
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for p in 0..self.n_pairs() {
            if p > 0 {
                f.write_str("|")?;
            }
            for offset in 0..4 {
                let bit = self.bits >> (4 * p + offset) & 1;
                write!(f, "{bit}")?;
            }
        }
        Ok(())
    }
}

impl fmt::Debug for FockState {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "FockState({self})")
    }
}

impl FromStr for FockState {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let groups: Vec<&str> = s.split('|').collect();
        let n_pairs = groups.len();
        check_width(n_pairs)?;
        let mut bits = 0u64;
        for (p, group) in groups.iter().enumerate() {
            if group.len() != 4 {
                return Err(Error::BadConfig(format!(
                    "pair group '{group}' must be 4 bits"
                )));
            }
            for (offset, c) in group.chars().enumerate() {
                match c {
                    '1' => bits |= 1 << (4 * p + offset),
                    '0' => {}
                    _ => {
                        return Err(Error::BadConfig(format!(
                            "invalid occupation character '{c}'"
                        )))
                    }
                }
            }
        }
        FockState::from_bits(n_pairs, bits)
    }
}

/// Hole spins of a desired state, one entry per pair. There are `2^N`
/// distinct patterns and they label the spin-preserved blocks.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct HoleSpinPattern {
    spins: Vec<Spin>,
}

impl HoleSpinPattern {
    pub fn new(spins: Vec<Spin>) -> Self {
        HoleSpinPattern { spins }
    }

    pub fn spins(&self) -> &[Spin] {
        &self.spins
    }

    pub fn n_pairs(&self) -> usize {
        self.spins.len()
    }

    /// Patterns in canonical (lexicographic, Up < Down) order.
    pub fn all(n_pairs: usize) -> Vec<HoleSpinPattern> {
        let mut out = Vec::with_capacity(1 << n_pairs);
        for code in 0..1u64 << n_pairs {
            let spins = (0..n_pairs)
                .map(|p| {
                    // pair 0 is the most significant position so that the
                    // ordering matches the label read left to right
                    if code >> (n_pairs - 1 - p) & 1 == 0 {
                        Spin::Up
                    } else {
                        Spin::Down
                    }
                })
                .collect();
            out.push(HoleSpinPattern { spins });
        }
        out
    }
}

impl fmt::Display for HoleSpinPattern {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for s in &self.spins {
            write!(f, "{}", s.as_char())?;
        }
        Ok(())
    }
}

/// An ordered basis: strictly ascending `FockState`s of uniform width,
/// plus a label that identifies it in exports and error messages.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Basis {
    n_pairs: usize,
    label: String,
    states: Vec<FockState>,
}

impl Basis {
    /// All states with a fixed electron count, optionally restricted to a
    /// fixed `Sz = n_up - n_down`. Canonical order is ascending encoding.
    ///
    /// An unreachable `sz` (parity mismatch or out of range) yields an
    /// empty basis, not an error.
    pub fn sector(n_pairs: usize, n_electrons: usize, sz_filter: Option<i64>) -> Result<Basis> {
        check_width(n_pairs)?;
        let n_orbitals = 4 * n_pairs;
        if n_electrons > n_orbitals {
            return Err(Error::ElectronCountOutOfRange {
                n_pairs,
                n_electrons,
                max: n_orbitals,
            });
        }
        let mut states = Vec::new();
        for bits in BitCombinations::new(n_orbitals, n_electrons) {
            let state = FockState {
                bits,
                n_pairs: n_pairs as u8,
            };
            if let Some(sz) = sz_filter {
                if state.total_sz() != sz {
                    continue;
                }
            }
            states.push(state);
        }
        let label = match sz_filter {
            Some(sz) => format!("sector(n={n_pairs},ne={n_electrons},sz={sz})"),
            None => format!("sector(n={n_pairs},ne={n_electrons})"),
        };
        Ok(Basis {
            n_pairs,
            label,
            states,
        })
    }

    /// The whole `2^{4N}`-dimensional Fock space, ascending.
    pub fn full_space(n_pairs: usize) -> Result<Basis> {
        check_width(n_pairs)?;
        let dim = 1u64 << (4 * n_pairs);
        let states = (0..dim)
            .map(|bits| FockState {
                bits,
                n_pairs: n_pairs as u8,
            })
            .collect();
        Ok(Basis {
            n_pairs,
            label: format!("full(n={n_pairs})"),
            states,
        })
    }

    /// The desired subspace of the `3N`-electron sector: every pair holds
    /// exactly three electrons. Built directly as a product over pairs
    /// (4 hole positions each), then sorted; dimension `4^N`.
    pub fn desired(n_pairs: usize) -> Result<Basis> {
        check_width(n_pairs)?;
        let mut states = vec![0u64];
        for p in 0..n_pairs {
            let mut next = Vec::with_capacity(states.len() * 4);
            for hole_offset in 0..4u64 {
                let nibble = (0xf ^ (1 << hole_offset)) << (4 * p);
                next.extend(states.iter().map(|bits| bits | nibble));
            }
            states = next;
        }
        states.sort_unstable();
        let states = states
            .into_iter()
            .map(|bits| FockState {
                bits,
                n_pairs: n_pairs as u8,
            })
            .collect();
        Ok(Basis {
            n_pairs,
            label: format!("desired(n={n_pairs})"),
            states,
        })
    }

    /// One hole-spin block of the desired subspace: hole spins fixed to
    /// `pattern`, the hole side free in each pair; dimension `2^N`.
    pub fn hole_spin_block(pattern: &HoleSpinPattern) -> Result<Basis> {
        let n_pairs = pattern.n_pairs();
        check_width(n_pairs)?;
        let mut states = vec![0u64];
        for (p, spin) in pattern.spins().iter().enumerate() {
            let mut next = Vec::with_capacity(states.len() * 2);
            for side in [Side::Left, Side::Right] {
                let hole = SpinOrbital::new(p, side, *spin).linear_index();
                let nibble = (0xfu64 ^ (1 << (hole - 4 * p))) << (4 * p);
                next.extend(states.iter().map(|bits| bits | nibble));
            }
            states = next;
        }
        states.sort_unstable();
        let states = states
            .into_iter()
            .map(|bits| FockState {
                bits,
                n_pairs: n_pairs as u8,
            })
            .collect();
        Ok(Basis {
            n_pairs,
            label: format!("block(n={n_pairs},pattern={pattern})"),
            states,
        })
    }

    /// Wrap an explicit state list. The list must be strictly ascending
    /// (canonical order) and of uniform width.
    pub fn from_states(label: impl Into<String>, n_pairs: usize, states: Vec<FockState>) -> Result<Basis> {
        check_width(n_pairs)?;
        for (i, s) in states.iter().enumerate() {
            if s.n_pairs() != n_pairs {
                return Err(Error::WidthMismatch {
                    expected: n_pairs,
                    actual: s.n_pairs(),
                });
            }
            if i > 0 && states[i - 1].bits >= s.bits {
                return Err(Error::UnsortedBasis { position: i });
            }
        }
        Ok(Basis {
            n_pairs,
            label: label.into(),
            states,
        })
    }

    pub fn n_pairs(&self) -> usize {
        self.n_pairs
    }

    pub fn n_orbitals(&self) -> usize {
        4 * self.n_pairs
    }

    pub fn label(&self) -> &str {
        &self.label
    }

    pub fn len(&self) -> usize {
        self.states.len()
    }

    pub fn is_empty(&self) -> bool {
        self.states.is_empty()
    }

    pub fn states(&self) -> &[FockState] {
        &self.states
    }

    pub fn state(&self, index: usize) -> FockState {
        self.states[index]
    }

    /// Position of `state` in the basis, by binary search over the
    /// ascending encodings.
    pub fn index_of(&self, state: &FockState) -> Option<usize> {
        self.states
            .binary_search_by_key(&state.bits, |s| s.bits)
            .ok()
    }

    /// `Some(ne)` when every state carries the same electron count.
    pub fn uniform_electron_count(&self) -> Option<usize> {
        let first = self.states.first()?.electron_count();
        self.states
            .iter()
            .all(|s| s.electron_count() == first)
            .then_some(first)
    }
}

/// Enumerate `n`-bit words with exactly `k` set bits in ascending order
/// (Gosper's hack).
struct BitCombinations {
    next: Option<u64>,
    mask: u64,
    k: usize,
}

impl BitCombinations {
    fn new(n: usize, k: usize) -> Self {
        debug_assert!(n <= 64 && k <= n);
        let mask = width_mask(n);
        let start = if k == 64 {
            u64::MAX
        } else {
            (1u64 << k) - 1
        };
        BitCombinations {
            next: Some(start),
            mask,
            k,
        }
    }
}

impl Iterator for BitCombinations {
    type Item = u64;

    fn next(&mut self) -> Option<u64> {
        let v = self.next?;
        self.next = if self.k == 0 {
            None
        } else {
            let low = v & v.wrapping_neg();
            match v.checked_add(low) {
                None => None,
                Some(ripple) => {
                    let shifted = ((v ^ ripple) >> 2) / low;
                    let candidate = ripple | shifted;
                    (candidate <= self.mask).then_some(candidate)
                }
            }
        };
        Some(v)
    }
}

fn width_mask(n_bits: usize) -> u64 {
    if n_bits >= 64 {
        u64::MAX
    } else {
        (1u64 << n_bits) - 1
    }
}

fn check_width(n_pairs: usize) -> Result<()> {
    if n_pairs == 0 {
        return Err(Error::ZeroPairs);
    }
    if n_pairs > MAX_ENCODED_PAIRS {
        return Err(Error::EncodingOverflow {
            n_pairs,
            max: 4 * MAX_ENCODED_PAIRS,
        });
    }
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::collections::BTreeMap;

    #[test]
    fn orbital_linear_index_roundtrip() {
        for k in 0..64 {
            let orb = SpinOrbital::from_linear_index(k);
            assert_eq!(orb.linear_index(), k);
        }
        // and the forward direction hits every index exactly once
        let mut seen = [false; 16];
        for orb in SpinOrbital::all(4) {
            assert!(!seen[orb.linear_index()]);
            seen[orb.linear_index()] = true;
        }
        assert!(seen.iter().all(|&s| s));
    }

    #[test]
    fn orbital_index_convention() {
        let orb = SpinOrbital::new(1, Side::Right, Spin::Down);
        assert_eq!(orb.linear_index(), 4 + 2 + 1);
        assert_eq!(orb.site_index(), 3);
        assert_eq!(orb.to_string(), "p1.Rd");
    }

    #[test]
    fn sector_sizes_match_binomials() {
        assert_eq!(Basis::sector(1, 3, None).unwrap().len(), 4);
        assert_eq!(Basis::sector(2, 6, None).unwrap().len(), 28);
        assert_eq!(Basis::sector(3, 9, None).unwrap().len(), 220);
    }

    #[test]
    fn empty_sector_is_vacuum() {
        let basis = Basis::sector(1, 0, None).unwrap();
        assert_eq!(basis.len(), 1);
        assert_eq!(basis.state(0), FockState::vacuum(1).unwrap());
    }

    #[test]
    fn full_sector_is_single_state() {
        let basis = Basis::sector(2, 8, None).unwrap();
        assert_eq!(basis.len(), 1);
        assert_eq!(basis.state(0).bits(), 0xff);
    }

    #[test]
    fn sector_rejects_too_many_electrons() {
        assert!(matches!(
            Basis::sector(1, 5, None),
            Err(Error::ElectronCountOutOfRange { .. })
        ));
        assert!(matches!(Basis::sector(0, 0, None), Err(Error::ZeroPairs)));
    }

    #[test]
    fn sz_filter_sizes() {
        // n_up + n_down = ne, n_up - n_down = sz  =>  C(2N, n_up) * C(2N, n_down)
        let basis = Basis::sector(2, 6, Some(0)).unwrap();
        assert_eq!(basis.len(), 16); // C(4,3)^2
        for s in basis.states() {
            assert_eq!(s.total_sz(), 0);
        }
        // parity mismatch: 6 electrons cannot give odd sz
        assert!(Basis::sector(2, 6, Some(1)).unwrap().is_empty());
        // partition over all reachable sz values
        let total: usize = (-6..=6)
            .map(|sz| Basis::sector(2, 6, Some(sz)).unwrap().len())
            .sum();
        assert_eq!(total, 28);
    }

    #[test]
    fn canonical_order_is_ascending_and_stable() {
        let a = Basis::sector(2, 6, None).unwrap();
        let b = Basis::sector(2, 6, None).unwrap();
        assert_eq!(a, b);
        for w in a.states().windows(2) {
            assert!(w[0].bits() < w[1].bits());
        }
    }

    #[test]
    fn desired_detection() {
        let one_hole: FockState = "1110".parse().unwrap();
        assert!(one_hole.is_desired());

        // pair 0 holds 4 electrons, pair 1 only 2
        let migrated: FockState = "1111|1100".parse().unwrap();
        assert!(!migrated.is_desired());
        assert_eq!(migrated.electron_count(), 6);
    }

    #[test]
    fn desired_count_in_six_electron_sector() {
        let basis = Basis::sector(2, 6, None).unwrap();
        let desired = basis.states().iter().filter(|s| s.is_desired()).count();
        assert_eq!(desired, 16);
    }

    #[test]
    fn sector_and_desired_counts_up_to_six_pairs() {
        use crate::blocks::binomial;
        use num_bigint::BigUint;
        for n in 1..=6usize {
            let basis = Basis::sector(n, 3 * n, None).unwrap();
            assert_eq!(
                BigUint::from(basis.len()),
                binomial(4 * n as u64, 3 * n as u64)
            );
            let desired = basis.states().iter().filter(|s| s.is_desired()).count();
            assert_eq!(desired, 1 << (2 * n));
        }
    }

    #[test]
    fn desired_basis_matches_filtered_sector() {
        for n in 1..=4 {
            let filtered: Vec<FockState> = Basis::sector(n, 3 * n, None)
                .unwrap()
                .states()
                .iter()
                .copied()
                .filter(FockState::is_desired)
                .collect();
            let direct = Basis::desired(n).unwrap();
            assert_eq!(direct.states(), &filtered[..]);
            assert_eq!(direct.len(), 1 << (2 * n));
        }
    }

    #[test]
    fn pair_occupation_examples() {
        let s: FockState = "1110".parse().unwrap();
        assert_eq!(s.pair_occupation(0).unwrap(), 3);

        let t: FockState = "1111|0000".parse().unwrap();
        assert_eq!(t.pair_occupation(1).unwrap(), 0);
        assert!(matches!(
            t.pair_occupation(2),
            Err(Error::PairOutOfRange { .. })
        ));
    }

    #[test]
    fn pair_occupations_sum_to_electron_count() {
        for s in Basis::sector(2, 6, None).unwrap().states() {
            let total: usize = (0..2).map(|p| s.pair_occupation(p).unwrap()).sum();
            assert_eq!(total, s.electron_count());
        }
    }

    #[test]
    fn total_sz_examples() {
        assert_eq!(FockState::vacuum(3).unwrap().total_sz(), 0);
        // hole at L-up leaves L-down, R-up, R-down: one up, two down
        let s: FockState = "0111".parse().unwrap();
        assert_eq!(s.total_sz(), -1);
    }

    #[test]
    fn sz_histogram_over_desired_sector() {
        let mut histogram: BTreeMap<i64, usize> = BTreeMap::new();
        for s in Basis::desired(1).unwrap().states() {
            *histogram.entry(s.total_sz()).or_default() += 1;
        }
        assert_eq!(histogram, BTreeMap::from([(-1, 2), (1, 2)]));
    }

    #[test]
    fn hole_spin_pattern_examples() {
        let s: FockState = "0111".parse().unwrap(); // hole at L-up
        assert_eq!(s.hole_spin_pattern().unwrap().spins(), &[Spin::Up]);

        // holes at R-down (pair 0) and L-down (pair 1)
        let t: FockState = "1110|1011".parse().unwrap();
        assert_eq!(
            t.hole_spin_pattern().unwrap().spins(),
            &[Spin::Down, Spin::Down]
        );

        let bad: FockState = "1111|1100".parse().unwrap();
        assert!(matches!(
            bad.hole_spin_pattern(),
            Err(Error::NotDesired { .. })
        ));
    }

    #[test]
    fn hole_spin_pattern_partitions_desired_sector() {
        // 2^N classes of 2^N states each
        for n in 1..=3 {
            let mut by_pattern: BTreeMap<HoleSpinPattern, usize> = BTreeMap::new();
            for s in Basis::desired(n).unwrap().states() {
                *by_pattern.entry(s.hole_spin_pattern().unwrap()).or_default() += 1;
            }
            assert_eq!(by_pattern.len(), 1 << n);
            assert!(by_pattern.values().all(|&count| count == 1 << n));
        }
    }

    #[test]
    fn sz_is_constant_within_each_block() {
        for pattern in HoleSpinPattern::all(3) {
            let block = Basis::hole_spin_block(&pattern).unwrap();
            let sz0 = block.state(0).total_sz();
            assert!(block.states().iter().all(|s| s.total_sz() == sz0));
        }
    }

    #[test]
    fn display_roundtrip() {
        let s: FockState = "1110|1011".parse().unwrap();
        assert_eq!(s.to_string(), "1110|1011");
        assert_eq!(s.bits(), 0b1101_0111); // index 0 is the LSB
        assert_eq!(s.n_pairs(), 2);
    }

    #[test]
    fn index_of_binary_search() {
        let basis = Basis::sector(2, 6, None).unwrap();
        for (i, s) in basis.states().iter().enumerate() {
            assert_eq!(basis.index_of(s), Some(i));
        }
        let outside = FockState::vacuum(2).unwrap();
        assert_eq!(basis.index_of(&outside), None);
    }

    #[test]
    fn from_states_rejects_unsorted() {
        let a = FockState::from_bits(1, 3).unwrap();
        let b = FockState::from_bits(1, 5).unwrap();
        assert!(Basis::from_states("test", 1, vec![a, b]).is_ok());
        assert!(matches!(
            Basis::from_states("test", 1, vec![b, a]),
            Err(Error::UnsortedBasis { .. })
        ));
        assert!(matches!(
            Basis::from_states("test", 1, vec![a, a]),
            Err(Error::UnsortedBasis { .. })
        ));
    }

    #[test]
    fn uniform_electron_count() {
        assert_eq!(
            Basis::sector(1, 3, None).unwrap().uniform_electron_count(),
            Some(3)
        );
        assert_eq!(Basis::full_space(1).unwrap().uniform_electron_count(), None);
    }

    #[test]
    fn full_space_dimension() {
        assert_eq!(Basis::full_space(1).unwrap().len(), 16);
        assert_eq!(Basis::full_space(2).unwrap().len(), 256);
    }
}
