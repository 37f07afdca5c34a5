//! Desired/undesired decomposition of the Hilbert space, hole-spin blocks,
//! and the dimension-counting formulas, each verifiable by brute force.
//!
//! For `N` pairs the `3N`-electron sector has `C(4N, 3N)` states, of which
//! `4^N` are desired (three electrons on every pair). The desired sector
//! splits into `2^N` hole-spin blocks of `2^N` states. One annihilation
//! lands in the `(3N-1)`-electron sector of `C(4N, 3N-1)` states, of which
//! `3N * 2^(2N-1)` are reachable from the desired sector; each block
//! reaches `5N * 2^(N-1)` of them, `4N * 2^(N-1)` shared with other blocks
//! and `N * 2^(N-1)` exclusive.

use std::collections::BTreeMap;

use num_bigint::BigUint;
use num_traits::One;

use crate::error::{Error, Result};
use crate::fermiops::apply_annihilation;
use crate::fockspace::{Basis, FockState, HoleSpinPattern, SpinOrbital};

/// Brute-force verification enumerates the desired sector and every
/// annihilation image; capped by default to keep runtimes predictable.
pub const DEFAULT_VERIFY_CAP: usize = 4;

/// Exact binomial coefficient `C(n, k)`.
pub fn binomial(n: u64, k: u64) -> BigUint {
    if k > n {
        return BigUint::ZERO;
    }
    let k = k.min(n - k);
    let mut result = BigUint::one();
    for i in 0..k {
        result = result * BigUint::from(n - i) / BigUint::from(i + 1);
    }
    result
}

/// Exact `2^exp`.
pub fn pow2(exp: u64) -> BigUint {
    BigUint::one() << exp
}

/// Total / desired / undesired dimensions of the `3N`-electron sector.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct DimensionTable {
    pub n_pairs: usize,
    /// `C(4N, 3N)`
    pub total: BigUint,
    /// `4^N = 2^N * 2^N`
    pub desired: BigUint,
    /// `total - desired`
    pub undesired: BigUint,
}

pub fn count_dimensions(n_pairs: usize) -> Result<DimensionTable> {
    if n_pairs == 0 {
        return Err(Error::ZeroPairs);
    }
    let n = n_pairs as u64;
    let total = binomial(4 * n, 3 * n);
    let desired = pow2(2 * n);
    let undesired = &total - &desired;
    Ok(DimensionTable {
        n_pairs,
        total,
        desired,
        undesired,
    })
}

/// The desired sector grouped by hole-spin pattern: exactly `2^N` blocks
/// of `2^N` states, in canonical pattern order.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct BlockDecomposition {
    n_pairs: usize,
    blocks: Vec<(HoleSpinPattern, Vec<FockState>)>,
}

impl BlockDecomposition {
    pub fn n_pairs(&self) -> usize {
        self.n_pairs
    }

    pub fn n_blocks(&self) -> usize {
        self.blocks.len()
    }

    pub fn blocks(&self) -> &[(HoleSpinPattern, Vec<FockState>)] {
        &self.blocks
    }

    pub fn block_states(&self, index: usize) -> &[FockState] {
        &self.blocks[index].1
    }

    pub fn pattern(&self, index: usize) -> &HoleSpinPattern {
        &self.blocks[index].0
    }

    /// Block index of a pattern, by binary search in canonical order.
    pub fn block_index(&self, pattern: &HoleSpinPattern) -> Option<usize> {
        self.blocks
            .binary_search_by(|(p, _)| p.cmp(pattern))
            .ok()
    }

    /// Block index of a desired state.
    pub fn block_of(&self, state: &FockState) -> Result<usize> {
        let pattern = state.hole_spin_pattern()?;
        self.block_index(&pattern).ok_or(Error::WidthMismatch {
            expected: self.n_pairs,
            actual: state.n_pairs(),
        })
    }

    /// The union of the blocks in canonical (ascending) order: the full
    /// desired basis the decomposition partitions.
    pub fn desired_basis(&self) -> Basis {
        let mut states: Vec<FockState> = self
            .blocks
            .iter()
            .flat_map(|(_, states)| states.iter().copied())
            .collect();
        states.sort_unstable();
        Basis::from_states(format!("desired(n={})", self.n_pairs), self.n_pairs, states)
            .expect("blocks partition the desired sector")
    }

    /// Wrap one block as a standalone basis.
    pub fn block_basis(&self, index: usize) -> Basis {
        let (pattern, states) = &self.blocks[index];
        Basis::from_states(
            format!("block(n={},pattern={})", self.n_pairs, pattern),
            self.n_pairs,
            states.clone(),
        )
        .expect("block states are sorted")
    }
}

/// Group the desired sector by hole-spin pattern. Blocks are ordered by
/// pattern (Up before Down, pair 0 first); states ascend within a block.
pub fn decompose_desired(n_pairs: usize) -> Result<BlockDecomposition> {
    let blocks = HoleSpinPattern::all(n_pairs)
        .into_iter()
        .map(|pattern| {
            let basis = Basis::hole_spin_block(&pattern)?;
            Ok((pattern, basis.states().to_vec()))
        })
        .collect::<Result<Vec<_>>>()?;
    Ok(BlockDecomposition { n_pairs, blocks })
}

/// The counting record for the `(3N-1)`-electron sector reached by one
/// annihilation, with the per-block shared/unshared split.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SupportCounts {
    pub n_pairs: usize,
    /// `C(4N, 3N-1)`
    pub total_lower: BigUint,
    /// `3N * 2^(2N-1)` — image of the desired sector under all `c_k`
    pub desired_reachable: BigUint,
    /// `total_lower - desired_reachable`
    pub undesired_lower: BigUint,
    /// `5N * 2^(N-1)` — states reached from one hole-spin block
    pub per_block: BigUint,
    /// `4N * 2^(N-1)` — of those, reachable from at least one other block
    pub shared: BigUint,
    /// `N * 2^(N-1)` — exclusive to the block
    pub unshared: BigUint,
    /// true when the closed forms were confirmed by brute force
    pub verified: bool,
    pub verify_report: Option<SupportVerifyReport>,
}

/// Observations from the brute-force reachability pass.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SupportVerifyReport {
    /// Distinct lower-sector states reached from the desired sector.
    pub reached_total: u64,
    /// Reached-set size per block, in canonical block order.
    pub per_block_reached: Vec<u64>,
    /// Shared count per block (reachable from >= 2 distinct blocks).
    pub shared_per_block: Vec<u64>,
    /// Unshared count per block.
    pub unshared_per_block: Vec<u64>,
    /// (number of blocks reaching a state, how many states) — makes the
    /// exact sharing degree observable instead of presumed.
    pub sharing_histogram: Vec<(usize, u64)>,
}

pub fn support_counts(n_pairs: usize, verify: bool) -> Result<SupportCounts> {
    support_counts_capped(n_pairs, verify, DEFAULT_VERIFY_CAP)
}

/// As [`support_counts`], with an explicit brute-force cap.
pub fn support_counts_capped(n_pairs: usize, verify: bool, verify_cap: usize) -> Result<SupportCounts> {
    if n_pairs == 0 {
        return Err(Error::ZeroPairs);
    }
    let n = n_pairs as u64;
    let total_lower = binomial(4 * n, 3 * n - 1);
    let desired_reachable = BigUint::from(3 * n) * pow2(2 * n - 1);
    let undesired_lower = &total_lower - &desired_reachable;
    let per_block = BigUint::from(5 * n) * pow2(n - 1);
    let shared = BigUint::from(4 * n) * pow2(n - 1);
    let unshared = BigUint::from(n) * pow2(n - 1);

    let mut counts = SupportCounts {
        n_pairs,
        total_lower,
        desired_reachable,
        undesired_lower,
        per_block,
        shared,
        unshared,
        verified: false,
        verify_report: None,
    };
    if verify {
        if n_pairs > verify_cap {
            return Err(Error::VerifyOverCap {
                n_pairs,
                cap: verify_cap,
            });
        }
        let report = verify_support_counts(&counts)?;
        counts.verified = true;
        counts.verify_report = Some(report);
    }
    Ok(counts)
}

/// Recompute every count by explicit annihilation reachability and compare
/// with the closed forms; a mismatch is an integrity error naming both.
fn verify_support_counts(counts: &SupportCounts) -> Result<SupportVerifyReport> {
    let n_pairs = counts.n_pairs;
    let decomposition = decompose_desired(n_pairs)?;
    let orbitals: Vec<SpinOrbital> = SpinOrbital::all(n_pairs).collect();

    // which blocks reach each lower state
    let mut reaching_blocks: BTreeMap<u64, Vec<usize>> = BTreeMap::new();
    for (block_idx, (_, states)) in decomposition.blocks().iter().enumerate() {
        for state in states {
            for orbital in &orbitals {
                if let Some(signed) = apply_annihilation(state, orbital)? {
                    let blocks = reaching_blocks.entry(signed.state.bits()).or_default();
                    if blocks.last() != Some(&block_idx) {
                        blocks.push(block_idx);
                    }
                }
            }
        }
    }

    let reached_total = reaching_blocks.len() as u64;
    check_count("desired-reachable states", &counts.desired_reachable, reached_total)?;

    let n_blocks = decomposition.n_blocks();
    let mut per_block_reached = vec![0u64; n_blocks];
    let mut shared_per_block = vec![0u64; n_blocks];
    let mut sharing_histogram: BTreeMap<usize, u64> = BTreeMap::new();
    for blocks in reaching_blocks.values() {
        *sharing_histogram.entry(blocks.len()).or_default() += 1;
        for &b in blocks {
            per_block_reached[b] += 1;
            if blocks.len() >= 2 {
                shared_per_block[b] += 1;
            }
        }
    }
    let unshared_per_block: Vec<u64> = per_block_reached
        .iter()
        .zip(&shared_per_block)
        .map(|(p, s)| p - s)
        .collect();

    for b in 0..n_blocks {
        check_count("states reached per block", &counts.per_block, per_block_reached[b])?;
        check_count("shared states per block", &counts.shared, shared_per_block[b])?;
        check_count("unshared states per block", &counts.unshared, unshared_per_block[b])?;
    }

    // total lower dimension against direct enumeration
    let lower = Basis::sector(n_pairs, 3 * n_pairs - 1, None)?;
    check_count("lower sector dimension", &counts.total_lower, lower.len() as u64)?;

    Ok(SupportVerifyReport {
        reached_total,
        per_block_reached,
        shared_per_block,
        unshared_per_block,
        sharing_histogram: sharing_histogram.into_iter().collect(),
    })
}

fn check_count(quantity: &str, closed_form: &BigUint, brute_force: u64) -> Result<()> {
    if closed_form != &BigUint::from(brute_force) {
        return Err(Error::CountMismatch {
            quantity: quantity.to_string(),
            closed_form: closed_form.to_string(),
            brute_force: brute_force.to_string(),
        });
    }
    Ok(())
}

/// The image of `basis` under every single annihilation operator, as a
/// canonically ordered basis: the exact codomain for a restricted
/// annihilation matrix. From the desired sector this has
/// `3N * 2^(2N-1)` states; from one hole-spin block, `5N * 2^(N-1)`.
pub fn annihilation_image(basis: &Basis) -> Result<Basis> {
    let n_pairs = basis.n_pairs();
    let mut reached = std::collections::BTreeSet::new();
    for state in basis.states() {
        for orbital in SpinOrbital::all(n_pairs) {
            if let Some(signed) = apply_annihilation(state, &orbital)? {
                reached.insert(signed.state);
            }
        }
    }
    Basis::from_states(
        format!("reach({})", basis.label()),
        n_pairs,
        reached.into_iter().collect(),
    )
}

/// Comparison of two closed-form counts for the lower sector: the
/// binomial `C(4N, 3N-1)` and the product `3N * 2^(2N-1)`. They agree only
/// at `N = 1`; for larger arrays the product counts just the
/// desired-reachable part and the difference is the undesired remainder.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct LowerSectorSplit {
    pub n_pairs: usize,
    /// `C(4N, 3N-1)`
    pub total: BigUint,
    /// `3N * 2^(2N-1)`
    pub desired_reachable: BigUint,
    /// `total - desired_reachable`
    pub difference: BigUint,
    /// true iff the two expressions coincide (only at `N = 1`)
    pub exact_match: bool,
}

pub fn lower_sector_split(n_pairs: usize) -> Result<LowerSectorSplit> {
    if n_pairs == 0 {
        return Err(Error::ZeroPairs);
    }
    let n = n_pairs as u64;
    let total = binomial(4 * n, 3 * n - 1);
    let desired_reachable = BigUint::from(3 * n) * pow2(2 * n - 1);
    let difference = &total - &desired_reachable;
    let exact_match = total == desired_reachable;
    Ok(LowerSectorSplit {
        n_pairs,
        total,
        desired_reachable,
        difference,
        exact_match,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::collections::BTreeSet;

    fn big(v: u64) -> BigUint {
        BigUint::from(v)
    }

    #[test]
    fn binomial_values() {
        assert_eq!(binomial(4, 3), big(4));
        assert_eq!(binomial(8, 6), big(28));
        assert_eq!(binomial(12, 9), big(220));
        assert_eq!(binomial(16, 11), big(4368));
        assert_eq!(binomial(3, 7), BigUint::ZERO);
        assert_eq!(binomial(0, 0), big(1));
    }

    #[test]
    fn dimension_table_small_n() {
        let t = count_dimensions(1).unwrap();
        assert_eq!((t.total, t.desired, t.undesired), (big(4), big(4), big(0)));
        let t = count_dimensions(2).unwrap();
        assert_eq!((t.total, t.desired, t.undesired), (big(28), big(16), big(12)));
        let t = count_dimensions(3).unwrap();
        assert_eq!((t.total, t.desired, t.undesired), (big(220), big(64), big(156)));
    }

    #[test]
    fn dimension_table_identities() {
        for n in 1..=10 {
            let t = count_dimensions(n).unwrap();
            assert_eq!(&t.desired + &t.undesired, t.total);
            assert_eq!(t.desired, pow2(n as u64) * pow2(n as u64));
        }
        assert!(matches!(count_dimensions(0), Err(Error::ZeroPairs)));
    }

    #[test]
    fn dimensions_match_enumeration() {
        for n in 1..=4 {
            let t = count_dimensions(n).unwrap();
            let sector = Basis::sector(n, 3 * n, None).unwrap();
            let desired = sector.states().iter().filter(|s| s.is_desired()).count();
            assert_eq!(t.total, big(sector.len() as u64));
            assert_eq!(t.desired, big(desired as u64));
        }
    }

    #[test]
    fn decomposition_small_blocks() {
        let d = decompose_desired(1).unwrap();
        assert_eq!(d.n_blocks(), 2);
        assert!(d.blocks().iter().all(|(_, s)| s.len() == 2));
        // hole-Up block holds the states with the hole on either side up
        let up_block = d.block_states(0);
        let encodings: Vec<u64> = up_block.iter().map(|s| s.bits()).collect();
        assert_eq!(encodings, vec![0b1011, 0b1110]); // holes at R-up, L-up

        let d3 = decompose_desired(3).unwrap();
        assert_eq!(d3.n_blocks(), 8);
        assert!(d3.blocks().iter().all(|(_, s)| s.len() == 8));
    }

    #[test]
    fn decomposition_partitions_desired_sector() {
        for n in 1..=5 {
            let d = decompose_desired(n).unwrap();
            let mut seen = BTreeSet::new();
            for (_, states) in d.blocks() {
                for s in states {
                    assert!(seen.insert(s.bits()), "blocks overlap");
                }
            }
            let desired = Basis::desired(n).unwrap();
            let expected: BTreeSet<u64> = desired.states().iter().map(|s| s.bits()).collect();
            assert_eq!(seen, expected);
            assert_eq!(d.desired_basis(), desired);
        }
    }

    #[test]
    fn block_lookup() {
        let d = decompose_desired(2).unwrap();
        for (i, (pattern, states)) in d.blocks().iter().enumerate() {
            assert_eq!(d.block_index(pattern), Some(i));
            for s in states {
                assert_eq!(d.block_of(s).unwrap(), i);
            }
        }
    }

    #[test]
    fn support_counts_tabulated_rows() {
        let rows = [
            (1, 6, 6, 0, 5, 4, 1),
            (2, 56, 48, 8, 20, 16, 4),
            (3, 495, 288, 207, 60, 48, 12),
            (4, 4368, 1536, 2832, 160, 128, 32),
        ];
        for (n, total, reach, und, per, sh, unsh) in rows {
            let c = support_counts(n, true).unwrap();
            assert_eq!(c.total_lower, big(total), "n={n}");
            assert_eq!(c.desired_reachable, big(reach), "n={n}");
            assert_eq!(c.undesired_lower, big(und), "n={n}");
            assert_eq!(c.per_block, big(per), "n={n}");
            assert_eq!(c.shared, big(sh), "n={n}");
            assert_eq!(c.unshared, big(unsh), "n={n}");
            assert!(c.verified);
        }
    }

    #[test]
    fn shared_plus_unshared_is_per_block() {
        for n in 1..=32usize {
            let c = support_counts(n, false).unwrap();
            assert_eq!(&c.shared + &c.unshared, c.per_block);
            assert_eq!(&c.desired_reachable + &c.undesired_lower, c.total_lower);
        }
    }

    #[test]
    fn verify_cap_is_enforced() {
        assert!(matches!(
            support_counts(5, true),
            Err(Error::VerifyOverCap { .. })
        ));
        // raising the cap admits larger systems
        let c = support_counts_capped(5, true, 5).unwrap();
        assert!(c.verified);
    }

    #[test]
    fn sharing_degree_is_exactly_two() {
        // shared states are reachable from exactly two blocks: the two
        // hole spins of the weak pair's missing orbitals
        for n in 1..=4 {
            let c = support_counts(n, true).unwrap();
            let report = c.verify_report.unwrap();
            let degrees: Vec<usize> = report.sharing_histogram.iter().map(|&(d, _)| d).collect();
            assert!(degrees.iter().all(|&d| d == 1 || d == 2), "n={n}: {degrees:?}");
        }
    }

    #[test]
    fn reached_states_have_one_weak_pair() {
        // a state reached from the desired sector has exactly one pair
        // with 2 electrons and all others with 3 — checked as a predicate
        // equivalence over the whole lower sector
        for n in 1..=4usize {
            let desired = Basis::desired(n).unwrap();
            let mut reached = BTreeSet::new();
            for state in desired.states() {
                for orbital in SpinOrbital::all(n) {
                    if let Some(signed) = apply_annihilation(state, &orbital).unwrap() {
                        reached.insert(signed.state.bits());
                    }
                }
            }
            for s in Basis::sector(n, 3 * n - 1, None).unwrap().states() {
                let occupations: Vec<usize> =
                    (0..n).map(|p| s.pair_occupation(p).unwrap()).collect();
                let weak = occupations.iter().filter(|&&o| o == 2).count();
                let strong = occupations.iter().filter(|&&o| o == 3).count();
                let predicted = weak == 1 && strong == n - 1;
                assert_eq!(predicted, reached.contains(&s.bits()), "n={n} state={s}");
            }
        }
    }

    #[test]
    fn unshared_states_are_opposite_spin_doublets() {
        // the states only one block reaches: the weak pair keeps both
        // electrons with spin opposite to that block's hole spin there
        for n in 1..=3usize {
            let decomposition = decompose_desired(n).unwrap();
            for (block_idx, (pattern, states)) in decomposition.blocks().iter().enumerate() {
                let mut reached: BTreeMap<u64, bool> = BTreeMap::new(); // bits -> shared
                for state in states {
                    for orbital in SpinOrbital::all(n) {
                        if let Some(signed) = apply_annihilation(state, &orbital).unwrap() {
                            reached.entry(signed.state.bits()).or_insert(false);
                        }
                    }
                }
                // mark states also reachable from any other block
                for (other_idx, (_, other_states)) in decomposition.blocks().iter().enumerate() {
                    if other_idx == block_idx {
                        continue;
                    }
                    for state in other_states {
                        for orbital in SpinOrbital::all(n) {
                            if let Some(signed) = apply_annihilation(state, &orbital).unwrap() {
                                if let Some(shared) = reached.get_mut(&signed.state.bits()) {
                                    *shared = true;
                                }
                            }
                        }
                    }
                }
                for (&bits, &shared) in &reached {
                    let state = FockState::from_bits(n, bits).unwrap();
                    let weak_pair = (0..n)
                        .find(|&p| state.pair_occupation(p).unwrap() == 2)
                        .unwrap();
                    let nibble = bits >> (4 * weak_pair) & 0xf;
                    // both remaining electrons of spin opposite the block's
                    // hole spin at the weak pair: occupied offsets are the
                    // two sides of the flipped spin
                    let sigma = pattern.spins()[weak_pair];
                    let opposite = sigma.flipped();
                    let doublet: u64 = [0usize, 2]
                        .iter()
                        .map(|side_offset| 1u64 << (side_offset + opposite as usize))
                        .sum();
                    let predicted_unshared = nibble == doublet;
                    assert_eq!(predicted_unshared, !shared, "n={n} block={pattern} {state}");
                }
            }
        }
    }

    #[test]
    fn annihilation_image_sizes() {
        for n in 1..=3usize {
            let desired = Basis::desired(n).unwrap();
            let image = annihilation_image(&desired).unwrap();
            let counts = support_counts(n, false).unwrap();
            assert_eq!(big(image.len() as u64), counts.desired_reachable);

            let decomposition = decompose_desired(n).unwrap();
            let block_image = annihilation_image(&decomposition.block_basis(0)).unwrap();
            assert_eq!(big(block_image.len() as u64), counts.per_block);
        }
    }

    #[test]
    fn lower_sector_split_examples() {
        let r = lower_sector_split(1).unwrap();
        assert!(r.exact_match);
        assert_eq!(r.difference, BigUint::ZERO);

        let r = lower_sector_split(2).unwrap();
        assert_eq!((r.total, r.desired_reachable, r.difference), (big(56), big(48), big(8)));
        assert!(!r.exact_match);

        let r = lower_sector_split(3).unwrap();
        assert_eq!((r.total, r.desired_reachable, r.difference), (big(495), big(288), big(207)));
        assert!(!r.exact_match);
    }

    #[test]
    fn split_difference_matches_undesired_column() {
        for n in 1..=8 {
            let split = lower_sector_split(n).unwrap();
            let counts = support_counts(n, false).unwrap();
            assert_eq!(split.difference, counts.undesired_lower);
            assert_eq!(split.exact_match, n == 1);
        }
    }
}
