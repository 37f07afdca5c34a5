//! Property tests for the invariants that hold on every input, with
//! independent oracles where one exists.

use num_bigint::BigUint;
use proptest::prelude::*;

use dbp_hilbert::blocks::{binomial, count_dimensions, support_counts};
use dbp_hilbert::fermiops::{apply_annihilation, apply_creation};
use dbp_hilbert::fockspace::{Basis, FockState, SpinOrbital};
use dbp_hilbert::hubbard::{build_hamiltonian, HubbardParams};

/// Pascal-triangle binomials: an additive route independent of the
/// multiplicative implementation.
fn pascal(n: usize, k: usize) -> BigUint {
    let mut row = vec![BigUint::from(1u32)];
    for _ in 0..n {
        let mut next = vec![BigUint::from(1u32)];
        for i in 1..row.len() {
            next.push(&row[i - 1] + &row[i]);
        }
        next.push(BigUint::from(1u32));
        row = next;
    }
    row.get(k).cloned().unwrap_or(BigUint::ZERO)
}

proptest! {
    #[test]
    fn binomial_matches_pascal(n in 0usize..60, k in 0usize..60) {
        prop_assert_eq!(binomial(n as u64, k as u64), pascal(n, k));
    }

    #[test]
    fn orbital_index_is_a_bijection(k in 0usize..64) {
        let orb = SpinOrbital::from_linear_index(k);
        prop_assert_eq!(orb.linear_index(), k);
        prop_assert_eq!(
            4 * orb.pair_index + 2 * (orb.side as usize) + orb.spin as usize,
            k
        );
    }

    #[test]
    fn state_text_roundtrip(bits in 0u64..(1 << 12)) {
        let state = FockState::from_bits(3, bits).unwrap();
        let parsed: FockState = state.to_string().parse().unwrap();
        prop_assert_eq!(parsed, state);
    }

    #[test]
    fn sector_enumeration_is_sorted_and_counted(n_pairs in 1usize..4, ne in 0usize..9) {
        prop_assume!(ne <= 4 * n_pairs);
        let basis = Basis::sector(n_pairs, ne, None).unwrap();
        prop_assert_eq!(
            BigUint::from(basis.len()),
            binomial(4 * n_pairs as u64, ne as u64)
        );
        for w in basis.states().windows(2) {
            prop_assert!(w[0].bits() < w[1].bits());
        }
        for s in basis.states() {
            prop_assert_eq!(s.electron_count(), ne);
        }
    }

    #[test]
    fn ladder_operators_invert_with_consistent_signs(bits in 0u64..(1 << 8), k in 0usize..8) {
        let state = FockState::from_bits(2, bits).unwrap();
        let orb = SpinOrbital::from_linear_index(k);
        match apply_annihilation(&state, &orb).unwrap() {
            Some(lowered) => {
                // c then c+ returns the state; the two signs agree
                let raised = apply_creation(&lowered.state, &orb).unwrap().unwrap();
                prop_assert_eq!(raised.state, state);
                prop_assert_eq!(raised.sign, lowered.sign);
                // and c is nilpotent
                prop_assert!(apply_annihilation(&lowered.state, &orb).unwrap().is_none());
            }
            None => {
                let raised = apply_creation(&state, &orb).unwrap().unwrap();
                prop_assert!(apply_creation(&raised.state, &orb).unwrap().is_none());
            }
        }
    }

    #[test]
    fn desired_count_is_4_to_the_n(n_pairs in 1usize..5) {
        let table = count_dimensions(n_pairs).unwrap();
        let sector = Basis::sector(n_pairs, 3 * n_pairs, None).unwrap();
        let desired = sector.states().iter().filter(|s| s.is_desired()).count();
        prop_assert_eq!(table.desired, BigUint::from(desired));
        prop_assert_eq!(table.total, BigUint::from(sector.len()));
    }

    #[test]
    fn support_identities(n_pairs in 1usize..40) {
        let c = support_counts(n_pairs, false).unwrap();
        prop_assert_eq!(&c.shared + &c.unshared, c.per_block);
        prop_assert_eq!(&c.desired_reachable + &c.undesired_lower, c.total_lower);
    }

    #[test]
    fn hamiltonian_is_symmetric_and_conserves_sz(
        e in proptest::collection::vec(-1.0f64..1.0, 4),
        u in proptest::collection::vec(-1.0f64..1.0, 4),
        t01 in -1.0f64..1.0,
        t12 in -1.0f64..1.0,
        t23 in -1.0f64..1.0,
        w02 in -1.0f64..1.0,
        v13 in -1.0f64..1.0,
    ) {
        let mut params = HubbardParams::zero(2).unwrap();
        params.set_onsite_energies(e).unwrap();
        for (i, ui) in u.into_iter().enumerate() {
            params.set_onsite_repulsion(i, ui).unwrap();
        }
        params.set_tunneling(0, 1, t01).unwrap();
        params.set_tunneling(1, 2, t12).unwrap();
        params.set_tunneling(2, 3, t23).unwrap();
        params.set_coulomb(0, 2, w02).unwrap();
        params.set_potential(1, 3, v13).unwrap();

        let basis = Basis::sector(2, 6, None).unwrap();
        let h = build_hamiltonian(&params, &basis).unwrap();
        prop_assert_eq!(h.max_asymmetry(), 0.0);
        for &(r, c, _) in h.entries() {
            prop_assert_eq!(basis.state(r).total_sz(), basis.state(c).total_sz());
            prop_assert_eq!(basis.state(r).electron_count(), basis.state(c).electron_count());
        }
    }
}
