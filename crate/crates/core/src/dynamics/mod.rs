//! Hamiltonian assembly and dynamics for the multiphoton model.
//!
//! ħ = 1 throughout; frequencies are quoted in units of the coupling.
//! The model Hamiltonian is
//!
//! ```text
//! H = ω₀ E₀₀ + Σ_{ij} ω_ij E_ij
//!   + Σ_{i₁…i_s} (g_{i₁…i_s} V⁺_{i₁…i_s} + c.c.) + δ₁ R₁ + δ₀
//! ```
//!
//! with a fully symmetric coupling tensor g (stored on sorted
//! multi-indices; the unrestricted-tuple sum contributes the multinomial
//! multiplicity of each sorted index). H commutes with R₁ and with the
//! discrete charge e^{i2πN/s}, so dynamics never mixes chain blocks.

mod bloch;
mod compare;
mod evolve;
pub mod ode;

pub use bloch::{mean_field_bloch, second_order_residual, BlochParams, BlochState, BlochTrajectory};
pub use compare::{compare_quantum_classical, DeviationRow};
pub use evolve::{evolve_block_exact, heisenberg_expectations, EvolutionResult, HeisenbergSeries};

use std::collections::BTreeMap;

use nalgebra::DMatrix;
use num_complex::Complex64;

use crate::error::CoreError;
use crate::fock::OperatorMatrix;
use crate::pla::PlaGenerators;
use crate::tol;

/// Parameters of the multiphoton Hamiltonian.
#[derive(Debug, Clone)]
pub struct MpsHamiltonianParams {
    /// Pump-mode frequency ω₀.
    pub omega0: f64,
    /// Hermitian linear couplings ω_ij among the scattered modes (n×n).
    pub omega: DMatrix<Complex64>,
    /// Symmetric coupling tensor on sorted multi-indices (1-based modes).
    pub couplings: BTreeMap<Vec<usize>, Complex64>,
    /// Coefficient of the central element R₁.
    pub delta_r1: f64,
    /// Constant offset.
    pub delta_const: f64,
}

impl MpsHamiltonianParams {
    /// Couplings only, zero frequencies.
    pub fn bare(n: usize, couplings: BTreeMap<Vec<usize>, Complex64>) -> Self {
        MpsHamiltonianParams {
            omega0: 0.0,
            omega: DMatrix::zeros(n, n),
            couplings,
            delta_r1: 0.0,
            delta_const: 0.0,
        }
    }

    /// Collapse a full (tuple-indexed) tensor onto sorted multi-indices,
    /// rejecting entries that disagree under index permutation.
    pub fn couplings_from_full(
        entries: impl IntoIterator<Item = (Vec<usize>, Complex64)>,
    ) -> Result<BTreeMap<Vec<usize>, Complex64>, CoreError> {
        let mut map: BTreeMap<Vec<usize>, Complex64> = BTreeMap::new();
        for (idx, value) in entries {
            let mut key = idx.clone();
            key.sort_unstable();
            match map.get(&key) {
                Some(&existing) => {
                    if (existing - value).norm() > tol::EXACT * tol::scale_of(&[value.norm()]) {
                        return Err(CoreError::AsymmetricTensor(format!(
                            "entries for permutations of {key:?} disagree: {existing} vs {value}"
                        )));
                    }
                }
                None => {
                    map.insert(key, value);
                }
            }
        }
        Ok(map)
    }
}

/// Multiplicity of a sorted multi-index among unrestricted tuples:
/// s!/∏(count of each repeated mode)!.
pub fn tuple_multiplicity(sorted_index: &[usize]) -> f64 {
    let s = sorted_index.len();
    let mut numerator: f64 = (1..=s).map(|v| v as f64).product();
    let mut run = 1usize;
    for t in 1..=s {
        if t < s && sorted_index[t] == sorted_index[t - 1] {
            run += 1;
        } else {
            numerator /= (1..=run).map(|v| v as f64).product::<f64>();
            run = 1;
        }
    }
    numerator
}

/// Assemble the model Hamiltonian; hermitian, commutes with R₁ on the
/// interior and preserves n mod s exactly.
pub fn build_mps_hamiltonian(
    gen: &PlaGenerators,
    params: &MpsHamiltonianParams,
) -> Result<OperatorMatrix, CoreError> {
    let spec = gen.spec();
    let n = spec.n;
    if params.omega.nrows() != n || params.omega.ncols() != n {
        return Err(CoreError::InvalidArgument(format!(
            "omega must be {n}×{n}, got {}×{}",
            params.omega.nrows(),
            params.omega.ncols()
        )));
    }
    let omega_dev = (&params.omega - params.omega.adjoint())
        .iter()
        .map(|v| v.norm())
        .fold(0.0, f64::max);
    if omega_dev > tol::EXACT * tol::scale_of(&[params.omega.iter().map(|v| v.norm()).fold(0.0, f64::max)]) {
        return Err(CoreError::NonHermitian(format!(
            "omega deviates from hermiticity by {omega_dev:.3e}"
        )));
    }
    for key in params.couplings.keys() {
        let sorted = key.windows(2).all(|w| w[0] <= w[1]);
        let in_range = key.iter().all(|&i| i >= 1 && i <= n);
        if key.len() != spec.s || !sorted || !in_range {
            return Err(CoreError::AsymmetricTensor(format!(
                "coupling key {key:?} is not a sorted rank-{} multi-index over 1..={n}",
                spec.s
            )));
        }
    }

    let basis = gen.basis();
    let mut h = gen.e00().scale(Complex64::new(params.omega0, 0.0));
    for i in 1..=n {
        for j in 1..=n {
            let w = params.omega[(i - 1, j - 1)];
            if w != Complex64::ZERO {
                h = h.add(&gen.e(i, j).unwrap().scale(w))?;
            }
        }
    }
    for (key, &g) in &params.couplings {
        let mult = Complex64::new(tuple_multiplicity(key), 0.0);
        h = h.add(&gen.vplus(key).unwrap().scale(g * mult))?;
        h = h.add(&gen.vminus(key).unwrap().scale(g.conj() * mult))?;
    }
    if params.delta_r1 != 0.0 {
        h = h.add(&gen.r1().scale(Complex64::new(params.delta_r1, 0.0)))?;
    }
    if params.delta_const != 0.0 {
        h = h.add(&OperatorMatrix::identity(basis).scale(Complex64::new(params.delta_const, 0.0)))?;
    }

    if !h.is_hermitian() {
        return Err(CoreError::NonHermitian(
            "assembled multiphoton Hamiltonian is not hermitian".into(),
        ));
    }
    Ok(h)
}

/// Result of certifying a rank-one coupling tensor and rotating it onto
/// the single extremal coupling.
#[derive(Debug, Clone)]
pub struct RankOneReduction {
    /// Unitary mode rotation among modes 1…n; row 0 is the coupling
    /// direction c, so the new mode b₁† = Σᵢ cᵢ aᵢ†.
    pub rotation: DMatrix<Complex64>,
    /// Parameters in the rotated frame: single coupling g̃ on (1,…,1).
    pub reduced: MpsHamiltonianParams,
    /// Largest entrywise deviation of the tensor from g̃·c⊗…⊗c.
    pub deviation: f64,
}

/// Certify that g_{i₁…i_s} = g·c_{i₁}⋯c_{i_s} and return the mode
/// rotation sending c to the first mode together with the reduced
/// parameter set. Refuses tensors that are not rank-one.
pub fn reduce_rank_one(
    gen: &PlaGenerators,
    params: &MpsHamiltonianParams,
) -> Result<RankOneReduction, CoreError> {
    let spec = gen.spec();
    let n = spec.n;
    let s = spec.s;

    // Full tensor on unrestricted tuples.
    let tuple_count = n.pow(s as u32);
    let tuple_of = |mut flat: usize| -> Vec<usize> {
        let mut t = vec![0usize; s];
        for slot in (0..s).rev() {
            t[slot] = flat % n + 1;
            flat /= n;
        }
        t
    };
    let mut tensor = vec![Complex64::ZERO; tuple_count];
    let mut max_entry = 0.0_f64;
    for (flat, value) in tensor.iter_mut().enumerate() {
        let mut key = tuple_of(flat);
        key.sort_unstable();
        *value = params.couplings.get(&key).copied().unwrap_or(Complex64::ZERO);
        max_entry = max_entry.max(value.norm());
    }
    if max_entry == 0.0 {
        // Zero tensor: trivially rank-one with vanishing coupling.
        let mut couplings = BTreeMap::new();
        couplings.insert(vec![1usize; s], Complex64::ZERO);
        return Ok(RankOneReduction {
            rotation: DMatrix::identity(n, n),
            reduced: MpsHamiltonianParams {
                omega0: params.omega0,
                omega: params.omega.clone(),
                couplings,
                delta_r1: params.delta_r1,
                delta_const: params.delta_const,
            },
            deviation: 0.0,
        });
    }

    // Direction from the dominant left singular vector of the unfolding.
    let cols = tuple_count / n;
    let mut unfolding = DMatrix::<Complex64>::zeros(n, cols);
    for (flat, &value) in tensor.iter().enumerate() {
        unfolding[(flat / cols, flat % cols)] = value;
    }
    let svd = unfolding.svd(true, false);
    let u = svd.u.as_ref().expect("left singular vectors requested");
    let mut c: Vec<Complex64> = (0..n).map(|i| u[(i, 0)]).collect();
    // Deterministic phase: largest component real positive.
    let lead = (0..n)
        .max_by(|&a, &b| c[a].norm().partial_cmp(&c[b].norm()).unwrap())
        .unwrap();
    let phase = c[lead] / Complex64::new(c[lead].norm(), 0.0);
    for v in &mut c {
        *v /= phase;
    }

    // Best coefficient for g·∏c given ‖c‖ = 1.
    let mut g_fit = Complex64::ZERO;
    for (flat, &value) in tensor.iter().enumerate() {
        let mut prod = Complex64::new(1.0, 0.0);
        for &mode in &tuple_of(flat) {
            prod *= c[mode - 1];
        }
        g_fit += value * prod.conj();
    }

    let mut deviation = 0.0_f64;
    for (flat, &value) in tensor.iter().enumerate() {
        let mut prod = Complex64::new(1.0, 0.0);
        for &mode in &tuple_of(flat) {
            prod *= c[mode - 1];
        }
        deviation = deviation.max((value - g_fit * prod).norm());
    }
    let tolerance = tol::BLOCK * tol::scale_of(&[max_entry]);
    if deviation > tolerance {
        return Err(CoreError::NotRankOne {
            deviation,
            tolerance,
        });
    }

    // Complete c to a unitary with c as row 0 (Gram-Schmidt on axes).
    let mut rows: Vec<Vec<Complex64>> = vec![c.clone()];
    for axis in 0..n {
        if rows.len() == n {
            break;
        }
        let mut cand = vec![Complex64::ZERO; n];
        cand[axis] = Complex64::new(1.0, 0.0);
        for row in &rows {
            let amp: Complex64 = row.iter().zip(cand.iter()).map(|(r, v)| r.conj() * v).sum();
            for (cv, rv) in cand.iter_mut().zip(row.iter()) {
                *cv -= amp * rv;
            }
        }
        let norm = cand.iter().map(|v| v.norm_sqr()).sum::<f64>().sqrt();
        if norm > 1e-8 {
            for v in &mut cand {
                *v /= Complex64::new(norm, 0.0);
            }
            rows.push(cand);
        }
    }
    debug_assert_eq!(rows.len(), n);
    let rotation = DMatrix::from_fn(n, n, |r, cidx| rows[r][cidx]);

    // ω transforms as Ω = conj(U) ω Uᵀ so that Σ Ω_kl b†_k b_l = Σ ω_ij a†_i a_j.
    let rotated_omega = rotation.map(|v| v.conj()) * &params.omega * rotation.transpose();
    let mut couplings = BTreeMap::new();
    couplings.insert(vec![1usize; s], g_fit);
    let reduced = MpsHamiltonianParams {
        omega0: params.omega0,
        omega: rotated_omega,
        couplings,
        delta_r1: params.delta_r1,
        delta_const: params.delta_const,
    };

    Ok(RankOneReduction {
        rotation,
        reduced,
        deviation,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fock::Ladder;
    use crate::pla::PlaModelSpec;

    fn gen(n: usize, s: usize, cutoff: u32) -> PlaGenerators {
        PlaGenerators::build(PlaModelSpec::new(n, s).unwrap(), cutoff).unwrap()
    }

    #[test]
    fn multiplicities() {
        assert_eq!(tuple_multiplicity(&[1, 1]), 1.0);
        assert_eq!(tuple_multiplicity(&[1, 2]), 2.0);
        assert_eq!(tuple_multiplicity(&[1, 1, 2]), 3.0);
        assert_eq!(tuple_multiplicity(&[1, 2, 3]), 6.0);
    }

    #[test]
    fn bare_coupling_hamiltonian() {
        // n=1, s=2, g real, ω₀ = ω₁ = 0: H = g(V₊ + V₋).
        let g = gen(1, 2, 8);
        let mut couplings = BTreeMap::new();
        couplings.insert(vec![1, 1], Complex64::new(0.7, 0.0));
        let params = MpsHamiltonianParams::bare(1, couplings);
        let h = build_mps_hamiltonian(&g, &params).unwrap();
        let expected = g
            .vplus_extremal()
            .add(g.vminus_extremal())
            .unwrap()
            .scale(Complex64::new(0.7, 0.0));
        assert!(h.sub(&expected).unwrap().max_norm() < 1e-14);
    }

    #[test]
    fn hamiltonian_commutes_with_r1() {
        let g = gen(2, 2, 7);
        let mut couplings = BTreeMap::new();
        couplings.insert(vec![1, 1], Complex64::new(0.3, 0.4));
        couplings.insert(vec![1, 2], Complex64::new(-0.2, 0.9));
        couplings.insert(vec![2, 2], Complex64::new(0.1, -0.6));
        let mut omega = DMatrix::zeros(2, 2);
        omega[(0, 0)] = Complex64::new(1.2, 0.0);
        omega[(1, 1)] = Complex64::new(0.8, 0.0);
        omega[(0, 1)] = Complex64::new(0.25, 0.45);
        omega[(1, 0)] = Complex64::new(0.25, -0.45);
        let params = MpsHamiltonianParams {
            omega0: 0.9,
            omega,
            couplings,
            delta_r1: 0.2,
            delta_const: -0.1,
        };
        let h = build_mps_hamiltonian(&g, &params).unwrap();
        assert!(h.is_hermitian());
        let p = OperatorMatrix::interior_projector(g.basis(), 3).unwrap();
        let res = h.commutator(g.r1()).unwrap().mul(&p).unwrap().max_norm();
        assert!(res <= 1e-12, "[H, R1] residual {res}");
    }

    #[test]
    fn hamiltonian_preserves_charge_mod_s() {
        // Every entry of H changes N = Σ_{i≥1} nᵢ by 0 or ±s.
        let g = gen(1, 3, 9);
        let mut couplings = BTreeMap::new();
        couplings.insert(vec![1, 1, 1], Complex64::new(0.5, 0.2));
        let params = MpsHamiltonianParams::bare(1, couplings);
        let h = build_mps_hamiltonian(&g, &params).unwrap();
        let basis = g.basis();
        for (r, c, _) in h.entries() {
            let dn = basis.state(r)[1] as i64 - basis.state(c)[1] as i64;
            assert!(dn == 0 || dn.abs() == 3, "charge change {dn}");
        }
    }

    #[test]
    fn asymmetric_tensor_rejected() {
        let entries = vec![
            (vec![1usize, 2usize], Complex64::new(1.0, 0.0)),
            (vec![2, 1], Complex64::new(0.5, 0.0)),
        ];
        assert!(matches!(
            MpsHamiltonianParams::couplings_from_full(entries),
            Err(CoreError::AsymmetricTensor(_))
        ));
    }

    #[test]
    fn unsorted_coupling_key_rejected() {
        let g = gen(2, 2, 5);
        let mut couplings = BTreeMap::new();
        couplings.insert(vec![2, 1], Complex64::new(1.0, 0.0));
        let params = MpsHamiltonianParams::bare(2, couplings);
        assert!(matches!(
            build_mps_hamiltonian(&g, &params),
            Err(CoreError::AsymmetricTensor(_))
        ));
    }

    #[test]
    fn rank_one_identity_rotation_for_single_mode() {
        let g = gen(1, 2, 6);
        let mut couplings = BTreeMap::new();
        couplings.insert(vec![1, 1], Complex64::new(0.9, 0.1));
        let params = MpsHamiltonianParams::bare(1, couplings);
        let red = reduce_rank_one(&g, &params).unwrap();
        assert!((red.rotation[(0, 0)].norm() - 1.0).abs() < 1e-12);
        assert!(red.deviation < 1e-14);
        let g_fit = red.reduced.couplings[&vec![1, 1]];
        assert!((g_fit.norm() - (0.9f64 * 0.9 + 0.1 * 0.1).sqrt()).abs() < 1e-12);
    }

    #[test]
    fn rank_one_45_degree_mixer_preserves_spectrum() {
        // n=2, s=2, c = (1,1)/√2: g̃ = g, spectra agree.
        let g = gen(2, 2, 6);
        let gval = Complex64::new(0.8, 0.0);
        let c = [
            Complex64::new(1.0 / 2.0_f64.sqrt(), 0.0),
            Complex64::new(1.0 / 2.0_f64.sqrt(), 0.0),
        ];
        let mut couplings = BTreeMap::new();
        for (i, j) in [(1usize, 1usize), (1, 2), (2, 2)] {
            couplings.insert(vec![i, j], gval * c[i - 1] * c[j - 1]);
        }
        let params = MpsHamiltonianParams::bare(2, couplings);
        let red = reduce_rank_one(&g, &params).unwrap();
        let g_fit = red.reduced.couplings[&vec![1, 1]];
        assert!((g_fit - gval).norm() < 1e-12, "g̃ = {g_fit}");

        let h_orig = build_mps_hamiltonian(&g, &params).unwrap().to_dense();
        let h_red = build_mps_hamiltonian(&g, &red.reduced).unwrap().to_dense();
        let mut ev_orig: Vec<f64> = h_orig.symmetric_eigen().eigenvalues.iter().copied().collect();
        let mut ev_red: Vec<f64> = h_red.symmetric_eigen().eigenvalues.iter().copied().collect();
        ev_orig.sort_by(|a, b| a.partial_cmp(b).unwrap());
        ev_red.sort_by(|a, b| a.partial_cmp(b).unwrap());
        let scale = ev_orig.iter().map(|v| v.abs()).fold(1.0, f64::max);
        for (a, b) in ev_orig.iter().zip(ev_red.iter()) {
            assert!((a - b).abs() <= 1e-9 * scale, "{a} vs {b}");
        }
    }

    #[test]
    fn zero_tensor_reduces_trivially() {
        let g = gen(2, 2, 5);
        let params = MpsHamiltonianParams::bare(2, BTreeMap::new());
        let red = reduce_rank_one(&g, &params).unwrap();
        assert_eq!(red.deviation, 0.0);
        assert_eq!(red.reduced.couplings[&vec![1, 1]], Complex64::ZERO);
    }

    #[test]
    fn non_rank_one_tensor_refused() {
        let g = gen(2, 2, 5);
        let mut couplings = BTreeMap::new();
        couplings.insert(vec![1, 1], Complex64::new(1.0, 0.0));
        couplings.insert(vec![2, 2], Complex64::new(1.0, 0.0));
        // No (1,2) coupling: c₁²=c₂²=g, c₁c₂=0 is unsatisfiable.
        let params = MpsHamiltonianParams::bare(2, couplings);
        assert!(matches!(
            reduce_rank_one(&g, &params),
            Err(CoreError::NotRankOne { .. })
        ));
    }

    #[test]
    fn rotation_row_zero_is_direction() {
        let g = gen(2, 2, 5);
        let gval = Complex64::new(0.5, -0.3);
        let c = [Complex64::new(0.6, 0.0), Complex64::new(0.0, 0.8)];
        let mut couplings = BTreeMap::new();
        for (i, j) in [(1usize, 1usize), (1, 2), (2, 2)] {
            couplings.insert(vec![i, j], gval * c[i - 1] * c[j - 1]);
        }
        let params = MpsHamiltonianParams::bare(2, couplings);
        let red = reduce_rank_one(&g, &params).unwrap();
        // Unitarity.
        let unit = &red.rotation * red.rotation.adjoint();
        for r in 0..2 {
            for cc in 0..2 {
                let want = if r == cc { 1.0 } else { 0.0 };
                assert!((unit[(r, cc)].re - want).abs() < 1e-12);
                assert!(unit[(r, cc)].im.abs() < 1e-12);
            }
        }
        // Row 0 parallel to c (up to the deterministic phase).
        let ratio = red.rotation[(0, 1)] / red.rotation[(0, 0)];
        let expect = c[1] / c[0];
        assert!((ratio - expect).norm() < 1e-10);
    }

    #[test]
    fn reduced_spectrum_matches_with_frequencies() {
        let g = gen(2, 2, 6);
        let gval = Complex64::new(0.4, 0.2);
        let c = [Complex64::new(0.8, 0.1), Complex64::new(-0.3, 0.5)];
        let norm = (c[0].norm_sqr() + c[1].norm_sqr()).sqrt();
        let c = [c[0] / norm, c[1] / norm];
        let mut couplings = BTreeMap::new();
        for (i, j) in [(1usize, 1usize), (1, 2), (2, 2)] {
            couplings.insert(vec![i, j], gval * c[i - 1] * c[j - 1]);
        }
        let mut omega = DMatrix::zeros(2, 2);
        omega[(0, 0)] = Complex64::new(0.9, 0.0);
        omega[(1, 1)] = Complex64::new(1.4, 0.0);
        omega[(0, 1)] = Complex64::new(0.2, -0.1);
        omega[(1, 0)] = Complex64::new(0.2, 0.1);
        let params = MpsHamiltonianParams {
            omega0: 0.7,
            omega,
            couplings,
            delta_r1: 0.0,
            delta_const: 0.0,
        };
        let red = reduce_rank_one(&g, &params).unwrap();
        let h_orig = build_mps_hamiltonian(&g, &params).unwrap().to_dense();
        let h_red = build_mps_hamiltonian(&g, &red.reduced).unwrap().to_dense();
        let mut ev_orig: Vec<f64> = h_orig.symmetric_eigen().eigenvalues.iter().copied().collect();
        let mut ev_red: Vec<f64> = h_red.symmetric_eigen().eigenvalues.iter().copied().collect();
        ev_orig.sort_by(|a, b| a.partial_cmp(b).unwrap());
        ev_red.sort_by(|a, b| a.partial_cmp(b).unwrap());
        let scale = ev_orig.iter().map(|v| v.abs()).fold(1.0, f64::max);
        for (a, b) in ev_orig.iter().zip(ev_red.iter()) {
            assert!((a - b).abs() <= 1e-9 * scale, "{a} vs {b}");
        }
    }

    #[test]
    fn charge_conservation_prevents_block_mixing() {
        // H leakage between blocks with different k is exactly zero.
        let g = gen(1, 2, 10);
        let mut couplings = BTreeMap::new();
        couplings.insert(vec![1, 1], Complex64::new(0.6, 0.0));
        let params = MpsHamiltonianParams::bare(1, couplings);
        let h = build_mps_hamiltonian(&g, &params).unwrap();
        let blocks = crate::blocks::decompose_mps(&g).unwrap();
        for b0 in blocks.iter().filter(|b| matches!(b.label, crate::blocks::BlockLabel::Mps { k: 0, .. })) {
            for b1 in blocks.iter().filter(|b| matches!(b.label, crate::blocks::BlockLabel::Mps { k: 1, .. })) {
                let cross = b1.columns.adjoint() * h.apply_matrix(&b0.columns);
                let worst = cross.iter().map(|v| v.norm()).fold(0.0, f64::max);
                assert!(worst == 0.0, "cross-k mixing {worst}");
            }
        }
    }

    #[test]
    fn monomial_and_builder_agree_on_rabi_element() {
        // 2-dim block (s=2, k=1, 2j=1): |⟨(3,0)|H|(1,1)⟩| = √6 g.
        let g = gen(1, 2, 8);
        let mut couplings = BTreeMap::new();
        couplings.insert(vec![1, 1], Complex64::new(1.0, 0.0));
        let h = build_mps_hamiltonian(&g, &MpsHamiltonianParams::bare(1, couplings)).unwrap();
        let basis = g.basis();
        let src = basis.index_of(&[1, 1]).unwrap();
        let dst = basis.index_of(&[0, 3]).unwrap();
        assert!((h.entry(dst, src).re - 6.0_f64.sqrt()).abs() < 1e-12);
        // Direct monomial route.
        let direct = OperatorMatrix::monomial(
            basis,
            &[(1, Ladder::Create), (1, Ladder::Create), (0, Ladder::Annihilate)],
        )
        .unwrap();
        assert!((direct.entry(dst, src).re - 6.0_f64.sqrt()).abs() < 1e-12);
    }
}
