//! Extended Hubbard Hamiltonian for a dangling-bond array: on-site energy,
//! spin-conserving tunneling, on-site Coulomb repulsion, inter-site Coulomb
//! repulsion, and an external potential-difference term,
//!
//! ```text
//! H = sum_{i,s} E_os[i] n_{i,s}
//!   - sum_{i!=j,s} T[i][j] c+_{i,s} c_{j,s}
//!   + sum_i U[i] n_{i,up} n_{i,down}
//!   + sum_{i<j,s,s'} W[i,s][j,s'] n_{i,s} n_{j,s'}
//!   + (1/2) sum_{i<j,s} V[i][j] (n_{i,s} - n_{j,s})
//! ```
//!
//! Site `i` runs over the `2N` dangling bonds; pair `p` owns sites `2p`
//! (left) and `2p+1` (right). The inter-site sum counts each unordered
//! site pair once by default; `w_double_count` restores the both-orders
//! reading (a factor of two for spin-independent couplings). All energies
//! are in eV.

use serde::Deserialize;

use crate::error::{Error, Result};
use crate::fermiops::SparseOperator;
use crate::fockspace::Basis;

/// Reduced Planck constant in eV s.
pub const HBAR_EV_S: f64 = 6.582_119_569e-16;

/// Measured and ab-initio constants for dangling-bond pairs on
/// H-terminated Si(100)-2x1. These are quoted inputs, never computed here.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct PhysicalConstants {
    /// Tunneling amplitude at the minimum DB separation (eV).
    pub t_intra_ev: f64,
    /// On-site Coulomb repulsion (eV).
    pub u_onsite_ev: f64,
    /// Residual tunneling amplitude between well-separated pairs (eV).
    pub t_inter_ev: f64,
    /// Separation giving `t_intra_ev` (Angstrom).
    pub intra_distance_angstrom: f64,
    /// Separation at and beyond which `t_inter_ev` applies (Angstrom).
    pub inter_distance_angstrom: f64,
    /// Allowed intra-pair separation range (Angstrom).
    pub min_pair_separation_angstrom: f64,
    pub max_pair_separation_angstrom: f64,
    /// Ab-initio tunneling rates at the separation extremes (THz).
    pub rate_max_thz: f64,
    pub rate_min_thz: f64,
    /// Probability of losing the shared electron to the conduction band.
    pub p_conduction_loss: f64,
    /// Worst-case probability of electron-donor recombination.
    pub p_donor_loss: f64,
}

/// The dangling-bond-pair preset.
pub const SILICON_DBP: PhysicalConstants = PhysicalConstants {
    t_intra_ev: 0.308,
    u_onsite_ev: 0.583,
    t_inter_ev: 0.128e-4,
    intra_distance_angstrom: 3.84,
    inter_distance_angstrom: 17.92,
    min_pair_separation_angstrom: 3.84,
    max_pair_separation_angstrom: 16.0,
    rate_max_thz: 467.0,
    rate_min_thz: 0.1,
    p_conduction_loss: 1.453e-8,
    p_donor_loss: 1.11e-5,
};

/// Convert an energy splitting to an angular rate in units of
/// 10^12 rad/s (`energy / hbar`).
pub fn energy_to_angular_rate(energy_ev: f64) -> Result<f64> {
    if energy_ev < 0.0 {
        return Err(Error::NegativeEnergy(energy_ev));
    }
    Ok(energy_ev / HBAR_EV_S / 1e12)
}

/// Planar positions of the dangling bonds and their grouping into pairs.
///
/// The order of `pairing` defines the pair indices; within a pair the
/// first site is the left one. Derived parameter sets are expressed in
/// canonical site order (pair `p` owns sites `2p` and `2p+1`), whatever
/// the geometry's own numbering.
#[derive(Clone, Debug, PartialEq)]
pub struct DBGeometry {
    positions: Vec<[f64; 2]>,
    pairing: Vec<(usize, usize)>,
}

impl DBGeometry {
    pub fn new(positions: Vec<[f64; 2]>, pairing: Vec<(usize, usize)>) -> Result<Self> {
        let n_sites = positions.len();
        if n_sites == 0 || !n_sites.is_multiple_of(2) || pairing.len() != n_sites / 2 {
            return Err(Error::BadConfig(format!(
                "{} positions cannot form {} pairs",
                n_sites,
                pairing.len()
            )));
        }
        let mut owner = vec![0usize; n_sites];
        for &(a, b) in &pairing {
            if a >= n_sites || b >= n_sites || a == b {
                return Err(Error::BadPairing { site: a.max(b) });
            }
            owner[a] += 1;
            owner[b] += 1;
        }
        if let Some(site) = owner.iter().position(|&c| c != 1) {
            return Err(Error::BadPairing { site });
        }
        let geometry = DBGeometry { positions, pairing };
        for &(a, b) in &geometry.pairing {
            let d = geometry.distance(a, b);
            let (min, max) = (
                SILICON_DBP.min_pair_separation_angstrom,
                SILICON_DBP.max_pair_separation_angstrom,
            );
            if d < min - 1e-9 || d > max + 1e-9 {
                return Err(Error::PairSeparationOutOfRange {
                    a,
                    b,
                    distance: d,
                    min,
                    max,
                });
            }
        }
        Ok(geometry)
    }

    pub fn n_sites(&self) -> usize {
        self.positions.len()
    }

    pub fn n_pairs(&self) -> usize {
        self.pairing.len()
    }

    pub fn positions(&self) -> &[[f64; 2]] {
        &self.positions
    }

    pub fn pairing(&self) -> &[(usize, usize)] {
        &self.pairing
    }

    pub fn distance(&self, a: usize, b: usize) -> f64 {
        let [xa, ya] = self.positions[a];
        let [xb, yb] = self.positions[b];
        ((xa - xb).powi(2) + (ya - yb).powi(2)).sqrt()
    }

    /// Geometry site index of canonical site `2p + side`.
    fn canonical_to_geometry(&self, canonical: usize) -> usize {
        let (left, right) = self.pairing[canonical / 2];
        if canonical.is_multiple_of(2) {
            left
        } else {
            right
        }
    }
}

/// All coefficients of the Hamiltonian on `2N` sites, in eV.
#[derive(Clone, Debug, PartialEq)]
pub struct HubbardParams {
    n_sites: usize,
    e_onsite: Vec<f64>,
    t_matrix: Vec<Vec<f64>>,
    u_onsite: Vec<f64>,
    w_matrix: Vec<Vec<f64>>,
    /// Optional spin-resolved inter-site coupling, indexed by spin-orbital
    /// `2*site + spin`; overrides `w_matrix` when present.
    w_spin: Option<Vec<Vec<f64>>>,
    v_matrix: Vec<Vec<f64>>,
    w_double_count: bool,
}

impl HubbardParams {
    pub fn new(
        e_onsite: Vec<f64>,
        t_matrix: Vec<Vec<f64>>,
        u_onsite: Vec<f64>,
        w_matrix: Vec<Vec<f64>>,
        v_matrix: Vec<Vec<f64>>,
    ) -> Result<Self> {
        let n_sites = e_onsite.len();
        if n_sites == 0 || !n_sites.is_multiple_of(2) || u_onsite.len() != n_sites {
            return Err(Error::BadConfig(format!(
                "per-site vectors must cover an even number of sites (got {n_sites} and {})",
                u_onsite.len()
            )));
        }
        check_coupling("t_matrix", &t_matrix, n_sites)?;
        check_coupling("w_matrix", &w_matrix, n_sites)?;
        if v_matrix.len() != n_sites || v_matrix.iter().any(|row| row.len() != n_sites) {
            return Err(Error::BadConfig(format!(
                "v_matrix must be {n_sites}x{n_sites}"
            )));
        }
        Ok(HubbardParams {
            n_sites,
            e_onsite,
            t_matrix,
            u_onsite,
            w_matrix,
            w_spin: None,
            v_matrix,
            w_double_count: false,
        })
    }

    /// All-zero coefficients on `2 * n_pairs` sites.
    pub fn zero(n_pairs: usize) -> Result<Self> {
        if n_pairs == 0 {
            return Err(Error::ZeroPairs);
        }
        let n = 2 * n_pairs;
        HubbardParams::new(
            vec![0.0; n],
            vec![vec![0.0; n]; n],
            vec![0.0; n],
            vec![vec![0.0; n]; n],
            vec![vec![0.0; n]; n],
        )
    }

    /// Decoupled pairs at the preset operating point: tunneling 0.308 eV
    /// within each pair, on-site repulsion 0.583 eV, no inter-pair terms.
    pub fn ideal_array(n_pairs: usize) -> Result<Self> {
        let mut params = HubbardParams::zero(n_pairs)?;
        for p in 0..n_pairs {
            params.t_matrix[2 * p][2 * p + 1] = SILICON_DBP.t_intra_ev;
            params.t_matrix[2 * p + 1][2 * p] = SILICON_DBP.t_intra_ev;
        }
        params.u_onsite = vec![SILICON_DBP.u_onsite_ev; 2 * n_pairs];
        Ok(params)
    }

    pub fn n_sites(&self) -> usize {
        self.n_sites
    }

    pub fn n_pairs(&self) -> usize {
        self.n_sites / 2
    }

    pub fn e_onsite(&self) -> &[f64] {
        &self.e_onsite
    }

    pub fn t_matrix(&self) -> &[Vec<f64>] {
        &self.t_matrix
    }

    pub fn u_onsite(&self) -> &[f64] {
        &self.u_onsite
    }

    pub fn w_matrix(&self) -> &[Vec<f64>] {
        &self.w_matrix
    }

    pub fn v_matrix(&self) -> &[Vec<f64>] {
        &self.v_matrix
    }

    pub fn w_double_count(&self) -> bool {
        self.w_double_count
    }

    pub fn set_w_double_count(&mut self, double_count: bool) {
        self.w_double_count = double_count;
    }

    pub fn set_onsite_energy(&mut self, site: usize, energy: f64) -> Result<()> {
        self.check_site(site)?;
        self.e_onsite[site] = energy;
        Ok(())
    }

    pub fn set_onsite_energies(&mut self, energies: Vec<f64>) -> Result<()> {
        if energies.len() != self.n_sites {
            return Err(Error::BadConfig(format!(
                "expected {} on-site energies, got {}",
                self.n_sites,
                energies.len()
            )));
        }
        self.e_onsite = energies;
        Ok(())
    }

    pub fn set_onsite_repulsion(&mut self, site: usize, u: f64) -> Result<()> {
        self.check_site(site)?;
        self.u_onsite[site] = u;
        Ok(())
    }

    /// Set the tunneling amplitude between two distinct sites (both
    /// directions at once, keeping the matrix symmetric).
    pub fn set_tunneling(&mut self, i: usize, j: usize, t: f64) -> Result<()> {
        self.check_site_pair(i, j)?;
        self.t_matrix[i][j] = t;
        self.t_matrix[j][i] = t;
        Ok(())
    }

    /// Set the spin-independent inter-site Coulomb coupling symmetrically.
    pub fn set_coulomb(&mut self, i: usize, j: usize, w: f64) -> Result<()> {
        self.check_site_pair(i, j)?;
        self.w_matrix[i][j] = w;
        self.w_matrix[j][i] = w;
        Ok(())
    }

    /// Set the potential difference `V[i][j]` for `i < j`.
    pub fn set_potential(&mut self, i: usize, j: usize, v: f64) -> Result<()> {
        self.check_site_pair(i, j)?;
        if i >= j {
            return Err(Error::BadConfig(format!(
                "potential differences are indexed with i < j (got {i}, {j})"
            )));
        }
        self.v_matrix[i][j] = v;
        Ok(())
    }

    fn check_site(&self, site: usize) -> Result<()> {
        if site >= self.n_sites {
            return Err(Error::BadConfig(format!(
                "site {site} out of range for {} sites",
                self.n_sites
            )));
        }
        Ok(())
    }

    fn check_site_pair(&self, i: usize, j: usize) -> Result<()> {
        self.check_site(i)?;
        self.check_site(j)?;
        if i == j {
            return Err(Error::BadConfig(format!(
                "site pair ({i}, {j}) must be two distinct sites"
            )));
        }
        Ok(())
    }

    /// Install a spin-resolved inter-site coupling, indexed by spin-orbital
    /// `2*site + spin`. Must be symmetric with zero same-site blocks.
    pub fn set_w_spin_resolved(&mut self, w_spin: Vec<Vec<f64>>) -> Result<()> {
        let n = 2 * self.n_sites;
        if w_spin.len() != n || w_spin.iter().any(|row| row.len() != n) {
            return Err(Error::BadCouplingMatrix {
                name: "w_spin",
                n,
            });
        }
        for (a, row) in w_spin.iter().enumerate() {
            for (b, &value) in row.iter().enumerate() {
                if value != w_spin[b][a] || !value.is_finite() {
                    return Err(Error::BadCouplingMatrix { name: "w_spin", n });
                }
                if a / 2 == b / 2 && value != 0.0 {
                    return Err(Error::BadCouplingMatrix { name: "w_spin", n });
                }
            }
        }
        self.w_spin = Some(w_spin);
        Ok(())
    }

    /// Inter-site coupling between spin-orbitals `(i, si)` and `(j, sj)`.
    fn w(&self, i: usize, si: usize, j: usize, sj: usize) -> f64 {
        match &self.w_spin {
            Some(w) => w[2 * i + si][2 * j + sj],
            None => self.w_matrix[i][j],
        }
    }
}

fn check_coupling(name: &'static str, m: &[Vec<f64>], n: usize) -> Result<()> {
    let bad = m.len() != n
        || m.iter().any(|row| row.len() != n)
        || (0..n).any(|i| {
            m[i][i] != 0.0 || (0..n).any(|j| m[i][j] != m[j][i] || !m[i][j].is_finite())
        });
    if bad {
        return Err(Error::BadCouplingMatrix { name, n });
    }
    Ok(())
}

/// Derive parameters from a geometry using the preset lookup table:
/// `3.84 A -> t_intra`, `>= 17.92 A -> t_inter` (distances rounded to
/// 0.01 A), anything else requiring an entry in `t_overrides`
/// (geometry site indices, unordered). No interpolation is attempted.
pub fn params_from_geometry(
    geometry: &DBGeometry,
    preset: &PhysicalConstants,
    t_overrides: &[(usize, usize, f64)],
) -> Result<HubbardParams> {
    let n_sites = geometry.n_sites();
    let mut params = HubbardParams::zero(geometry.n_pairs())?;
    params.u_onsite = vec![preset.u_onsite_ev; n_sites];

    let lookup_override = |a: usize, b: usize| {
        t_overrides
            .iter()
            .find(|&&(x, y, _)| (x, y) == (a, b) || (x, y) == (b, a))
            .map(|&(_, _, t)| t)
    };

    for ci in 0..n_sites {
        for cj in (ci + 1)..n_sites {
            let gi = geometry.canonical_to_geometry(ci);
            let gj = geometry.canonical_to_geometry(cj);
            let d = round_to_hundredth(geometry.distance(gi, gj));
            let t = if let Some(t) = lookup_override(gi, gj) {
                t
            } else if d == preset.intra_distance_angstrom {
                preset.t_intra_ev
            } else if d >= preset.inter_distance_angstrom {
                preset.t_inter_ev
            } else {
                return Err(Error::UnparameterizedDistance {
                    a: gi,
                    b: gj,
                    distance: d,
                });
            };
            params.t_matrix[ci][cj] = t;
            params.t_matrix[cj][ci] = t;
        }
    }
    Ok(params)
}

fn round_to_hundredth(d: f64) -> f64 {
    (d * 100.0).round() / 100.0
}

/// Assemble the Hamiltonian on `basis` as the matrix of
/// `<row| H |col>` over its states.
///
/// A fixed-electron-count basis (optionally with fixed `Sz`) is closed
/// under every term, so the matrix is the full sector Hamiltonian. On a
/// restricted basis (the desired subspace, one hole-spin block) hops that
/// leave the span contribute nothing and the result is the projected
/// block, which is what the restriction is for.
pub fn build_hamiltonian(params: &HubbardParams, basis: &Basis) -> Result<SparseOperator> {
    let n_sites = params.n_sites;
    if n_sites != 2 * basis.n_pairs() {
        return Err(Error::SiteCountMismatch {
            n_sites,
            n_pairs: basis.n_pairs(),
        });
    }

    let mut triplets: Vec<(usize, usize, f64)> = Vec::new();
    for (col, state) in basis.states().iter().enumerate() {
        let occ = |site: usize, spin: usize| state.occupied_bit(2 * site + spin);

        let mut diag = 0.0;
        for i in 0..n_sites {
            let up = occ(i, 0);
            let down = occ(i, 1);
            if up {
                diag += params.e_onsite[i];
            }
            if down {
                diag += params.e_onsite[i];
            }
            if up && down {
                diag += params.u_onsite[i];
            }
        }
        for i in 0..n_sites {
            for j in (i + 1)..n_sites {
                for si in 0..2 {
                    for sj in 0..2 {
                        if occ(i, si) && occ(j, sj) {
                            diag += params.w(i, si, j, sj);
                            if params.w_double_count {
                                diag += params.w(j, sj, i, si);
                            }
                        }
                    }
                }
                for s in 0..2 {
                    let delta = occ(i, s) as i32 - occ(j, s) as i32;
                    if delta != 0 {
                        diag += 0.5 * params.v_matrix[i][j] * delta as f64;
                    }
                }
            }
        }
        if diag != 0.0 {
            triplets.push((col, col, diag));
        }

        // spin-conserving hops: -T[i][j] c+_{i,s} c_{j,s} over ordered i != j
        for i in 0..n_sites {
            for j in 0..n_sites {
                let t = params.t_matrix[i][j];
                if i == j || t == 0.0 {
                    continue;
                }
                for s in 0..2 {
                    let from = 2 * j + s;
                    let to = 2 * i + s;
                    if !state.occupied_bit(from) || state.occupied_bit(to) {
                        continue;
                    }
                    let bits = state.bits();
                    let sign_from = parity_below(bits, from);
                    let moved = bits & !(1u64 << from);
                    let sign_to = parity_below(moved, to);
                    let hopped = state.with_bits(moved | (1u64 << to));
                    // outside the basis span: projected away
                    if let Some(row) = basis.index_of(&hopped) {
                        triplets.push((row, col, -t * (sign_from * sign_to) as f64));
                    }
                }
            }
        }
    }

    SparseOperator::from_triplets(
        basis.len(),
        basis.len(),
        "hubbard hamiltonian",
        basis.label(),
        basis.label(),
        triplets,
    )
}

fn parity_below(bits: u64, linear_index: usize) -> i32 {
    let below = bits & ((1u64 << linear_index) - 1);
    if below.count_ones() & 1 == 0 {
        1
    } else {
        -1
    }
}

/// JSON parameter document. Explicit matrices win over geometry; a
/// geometry (both `positions` and `pairs`) fills the tunneling matrix from
/// the preset table and defaults the on-site repulsion to the preset
/// value. Scalars broadcast over sites.
#[derive(Clone, Debug, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ParamsDocument {
    pub n_pairs: usize,
    #[serde(default)]
    pub positions: Option<Vec<[f64; 2]>>,
    #[serde(default)]
    pub pairs: Option<Vec<[usize; 2]>>,
    #[serde(default)]
    pub e_onsite: Option<ScalarOrPerSite>,
    #[serde(default)]
    pub t_matrix: Option<Vec<Vec<f64>>>,
    #[serde(default)]
    pub u_onsite: Option<ScalarOrPerSite>,
    #[serde(default)]
    pub w_matrix: Option<Vec<Vec<f64>>>,
    #[serde(default)]
    pub v_matrix: Option<Vec<Vec<f64>>>,
    #[serde(default)]
    pub w_double_count: bool,
}

#[derive(Clone, Debug, Deserialize)]
#[serde(untagged)]
pub enum ScalarOrPerSite {
    Scalar(f64),
    PerSite(Vec<f64>),
}

impl ScalarOrPerSite {
    fn broadcast(&self, n_sites: usize) -> Result<Vec<f64>> {
        match self {
            ScalarOrPerSite::Scalar(v) => Ok(vec![*v; n_sites]),
            ScalarOrPerSite::PerSite(v) if v.len() == n_sites => Ok(v.clone()),
            ScalarOrPerSite::PerSite(v) => Err(Error::BadConfig(format!(
                "per-site list has {} entries, expected {n_sites}",
                v.len()
            ))),
        }
    }
}

impl ParamsDocument {
    pub fn parse(text: &str) -> Result<Self> {
        serde_json::from_str(text).map_err(|e| Error::BadConfig(e.to_string()))
    }

    pub fn resolve(&self) -> Result<HubbardParams> {
        if self.n_pairs == 0 {
            return Err(Error::ZeroPairs);
        }
        let n_sites = 2 * self.n_pairs;

        let geometry = match (&self.positions, &self.pairs) {
            (Some(positions), Some(pairs)) => {
                let pairing = pairs.iter().map(|&[a, b]| (a, b)).collect();
                let geometry = DBGeometry::new(positions.clone(), pairing)?;
                if geometry.n_pairs() != self.n_pairs {
                    return Err(Error::BadConfig(format!(
                        "geometry has {} pairs, document says {}",
                        geometry.n_pairs(),
                        self.n_pairs
                    )));
                }
                Some(geometry)
            }
            (None, None) => None,
            _ => {
                return Err(Error::BadConfig(
                    "positions and pairs must be given together".into(),
                ))
            }
        };

        let mut params = match (&self.t_matrix, &geometry) {
            (Some(_), _) | (None, None) => HubbardParams::zero(self.n_pairs)?,
            (None, Some(geometry)) => params_from_geometry(geometry, &SILICON_DBP, &[])?,
        };
        if let Some(t) = &self.t_matrix {
            check_coupling("t_matrix", t, n_sites)?;
            params.t_matrix = t.clone();
        }
        if let Some(e) = &self.e_onsite {
            params.e_onsite = e.broadcast(n_sites)?;
        }
        if let Some(u) = &self.u_onsite {
            params.u_onsite = u.broadcast(n_sites)?;
        } else if geometry.is_some() {
            params.u_onsite = vec![SILICON_DBP.u_onsite_ev; n_sites];
        }
        if let Some(w) = &self.w_matrix {
            check_coupling("w_matrix", w, n_sites)?;
            params.w_matrix = w.clone();
        }
        if let Some(v) = &self.v_matrix {
            if v.len() != n_sites || v.iter().any(|row| row.len() != n_sites) {
                return Err(Error::BadConfig(format!(
                    "v_matrix must be {n_sites}x{n_sites}"
                )));
            }
            params.v_matrix = v.clone();
        }
        params.w_double_count = self.w_double_count;
        Ok(params)
    }
}
