//! Polarization quasispin and biphoton-cluster structures for light
//! fields with two polarization components per spatial mode.
//!
//! Modes are laid out pairwise: spatial mode i (0-based) contributes the
//! flat Fock modes 2i (helicity +) and 2i+1 (helicity −). The gauge SU(2)
//! is generated by
//!
//! ```text
//! P₀ = ½ Σᵢ (n̂ᵢ₊ − n̂ᵢ₋),   P₊ = Σᵢ a†ᵢ₊ aᵢ₋,   P₋ = (P₊)†
//! ```
//!
//! with Casimir P² = P₀² + ½(P₊P₋ + P₋P₊). The SU(2)-invariant cluster
//! operators are X_ij = aᵢ₊aⱼ₋ − aᵢ₋aⱼ₊ and their conjugates; E_ij =
//! Σ_β a†_{iβ} a_{jβ} are the spatial exchange operators. States built
//! from X† clusters alone carry p = 0 and have every polarization moment
//! equal to zero, which [`verify_p_scalar`] checks directly.

use std::collections::BTreeMap;
use std::sync::Arc;

use nalgebra::{DMatrix, DVector};
use num_complex::Complex64;
use serde::Serialize;

use crate::error::CoreError;
use crate::fock::{FockBasis, Ladder, OperatorMatrix};
use crate::report::{IdentityCheck, VerificationReport};
use crate::tol;

/// Quasispin, exchange and cluster operators over 2n modes.
#[derive(Debug)]
pub struct PolarizationOps {
    n_spatial: usize,
    basis: Arc<FockBasis>,
    p0: OperatorMatrix,
    pplus: OperatorMatrix,
    pminus: OperatorMatrix,
    p2: OperatorMatrix,
    e: Vec<Vec<OperatorMatrix>>,
    x: Vec<Vec<OperatorMatrix>>,
    xdag: Vec<Vec<OperatorMatrix>>,
}

/// Flat mode index of spatial mode `i` with helicity `plus`.
pub fn mode_index(i: usize, plus: bool) -> usize {
    2 * i + usize::from(!plus)
}

impl PolarizationOps {
    /// Realize all operators on the 2·n_spatial-mode basis.
    pub fn build(n_spatial: usize, cutoff: u32) -> Result<Self, CoreError> {
        if n_spatial == 0 {
            return Err(CoreError::InvalidArgument(
                "need at least one spatial mode".into(),
            ));
        }
        let basis = FockBasis::new(2 * n_spatial, cutoff)?;

        let mut p0 = OperatorMatrix::zeros(&basis);
        let mut pplus = OperatorMatrix::zeros(&basis);
        let half = Complex64::new(0.5, 0.0);
        for i in 0..n_spatial {
            let np = OperatorMatrix::monomial(
                &basis,
                &[(mode_index(i, true), Ladder::Create), (mode_index(i, true), Ladder::Annihilate)],
            )?;
            let nm = OperatorMatrix::monomial(
                &basis,
                &[(mode_index(i, false), Ladder::Create), (mode_index(i, false), Ladder::Annihilate)],
            )?;
            p0 = p0.add(&np.sub(&nm)?.scale(half))?;
            pplus = pplus.add(&OperatorMatrix::monomial(
                &basis,
                &[(mode_index(i, true), Ladder::Create), (mode_index(i, false), Ladder::Annihilate)],
            )?)?;
        }
        let pminus = pplus.adjoint();
        let p2 = p0.mul(&p0)?.add(
            &pplus
                .mul(&pminus)?
                .add(&pminus.mul(&pplus)?)?
                .scale(half),
        )?;

        let mut e = Vec::with_capacity(n_spatial);
        for i in 0..n_spatial {
            let mut row = Vec::with_capacity(n_spatial);
            for j in 0..n_spatial {
                let mut eij = OperatorMatrix::zeros(&basis);
                for plus in [true, false] {
                    eij = eij.add(&OperatorMatrix::monomial(
                        &basis,
                        &[(mode_index(i, plus), Ladder::Create), (mode_index(j, plus), Ladder::Annihilate)],
                    )?)?;
                }
                row.push(eij);
            }
            e.push(row);
        }

        let mut x = Vec::with_capacity(n_spatial);
        for i in 0..n_spatial {
            let mut row = Vec::with_capacity(n_spatial);
            for j in 0..n_spatial {
                // X_ij = aᵢ₊aⱼ₋ − aᵢ₋aⱼ₊ (zero for i = j).
                let first = OperatorMatrix::monomial(
                    &basis,
                    &[(mode_index(i, true), Ladder::Annihilate), (mode_index(j, false), Ladder::Annihilate)],
                )?;
                let second = OperatorMatrix::monomial(
                    &basis,
                    &[(mode_index(i, false), Ladder::Annihilate), (mode_index(j, true), Ladder::Annihilate)],
                )?;
                row.push(first.sub(&second)?);
            }
            x.push(row);
        }
        let xdag = x
            .iter()
            .map(|row: &Vec<OperatorMatrix>| row.iter().map(|op| op.adjoint()).collect())
            .collect();

        Ok(PolarizationOps {
            n_spatial,
            basis,
            p0,
            pplus,
            pminus,
            p2,
            e,
            x,
            xdag,
        })
    }

    pub fn n_spatial(&self) -> usize {
        self.n_spatial
    }

    pub fn basis(&self) -> &Arc<FockBasis> {
        &self.basis
    }

    pub fn p0(&self) -> &OperatorMatrix {
        &self.p0
    }

    pub fn pplus(&self) -> &OperatorMatrix {
        &self.pplus
    }

    pub fn pminus(&self) -> &OperatorMatrix {
        &self.pminus
    }

    pub fn p2(&self) -> &OperatorMatrix {
        &self.p2
    }

    /// Cartesian component P₁ = (P₊ + P₋)/2.
    pub fn p1_cartesian(&self) -> OperatorMatrix {
        self.pplus
            .add(&self.pminus)
            .expect("same basis")
            .scale(Complex64::new(0.5, 0.0))
    }

    /// Cartesian component P₂ = (P₊ − P₋)/2i.
    pub fn p2_cartesian(&self) -> OperatorMatrix {
        self.pplus
            .sub(&self.pminus)
            .expect("same basis")
            .scale(Complex64::new(0.0, -0.5))
    }

    pub fn e(&self, i: usize, j: usize) -> Option<&OperatorMatrix> {
        self.e.get(i)?.get(j)
    }

    pub fn x(&self, i: usize, j: usize) -> Option<&OperatorMatrix> {
        self.x.get(i)?.get(j)
    }

    pub fn xdag(&self, i: usize, j: usize) -> Option<&OperatorMatrix> {
        self.xdag.get(i)?.get(j)
    }

    /// Check the su(2) relations, SU(2)-invariance of the clusters and
    /// [P², E] = 0 on the interior with the given margin.
    pub fn verify(&self, margin: u32) -> Result<VerificationReport, CoreError> {
        let p = OperatorMatrix::interior_projector(&self.basis, margin)?;
        let project = |op: &OperatorMatrix| -> Result<f64, CoreError> { Ok(op.mul(&p)?.max_norm()) };
        let mut report = VerificationReport::default();
        let scale = tol::scale_of(&[self.pplus.max_norm() * self.pminus.max_norm()]);

        let r1 = project(&self.p0.commutator(&self.pplus)?.sub(&self.pplus)?)?;
        let r2 = project(&self.p0.commutator(&self.pminus)?.add(&self.pminus)?)?;
        report.push(IdentityCheck::new(
            "su(2): [P0, P±] = ±P±",
            r1.max(r2),
            tol::COMMUTATOR * scale,
        ));

        let r3 = project(
            &self
                .pplus
                .commutator(&self.pminus)?
                .sub(&self.p0.scale(Complex64::new(2.0, 0.0)))?,
        )?;
        report.push(IdentityCheck::new(
            "su(2): [P+, P-] = 2P0",
            r3,
            tol::COMMUTATOR * scale,
        ));

        let mut worst_inv = 0.0_f64;
        for i in 0..self.n_spatial {
            for j in 0..self.n_spatial {
                for alpha in [&self.p0, &self.pplus, &self.pminus] {
                    worst_inv = worst_inv.max(project(&alpha.commutator(&self.xdag[i][j])?)?);
                    worst_inv = worst_inv.max(project(&alpha.commutator(&self.x[i][j])?)?);
                }
            }
        }
        report.push(IdentityCheck::new(
            "invariance: [P_a, X(†)_ij] = 0",
            worst_inv,
            tol::COMMUTATOR * scale,
        ));

        let mut worst_e = 0.0_f64;
        for i in 0..self.n_spatial {
            for j in 0..self.n_spatial {
                worst_e = worst_e.max(project(&self.p2.commutator(&self.e[i][j])?)?);
            }
        }
        report.push(IdentityCheck::new(
            "casimir: [P², E_ij] = 0",
            worst_e,
            tol::COMMUTATOR * tol::scale_of(&[self.p2.max_norm()]),
        ));

        // X antisymmetry is exact by construction.
        let mut worst_x = 0.0_f64;
        for i in 0..self.n_spatial {
            for j in 0..self.n_spatial {
                worst_x = worst_x.max(
                    self.xdag[i][j]
                        .add(&self.xdag[j][i])?
                        .max_norm(),
                );
            }
        }
        report.push(IdentityCheck::new(
            "antisymmetry: X†_ij = -X†_ji",
            worst_x,
            tol::EXACT,
        ));

        Ok(report)
    }
}

/// Normalized P-scalar state ∏ (X†_ij)^{κ_ij} |0⟩.
///
/// Requires n_spatial ≥ 2, a nonzero power pattern, and 2·Σκ within the
/// cutoff; a pattern that annihilates the vacuum (e.g. any κ_ii > 0) is a
/// degenerate input.
pub fn p_scalar_state(
    pol: &PolarizationOps,
    powers: &BTreeMap<(usize, usize), u32>,
) -> Result<DVector<Complex64>, CoreError> {
    if pol.n_spatial() < 2 {
        return Err(CoreError::InvalidArgument(
            "P-scalar states require at least two spatial modes".into(),
        ));
    }
    let total: u32 = powers.values().sum();
    if total == 0 {
        return Err(CoreError::DegenerateInput(
            "cluster power pattern κ must be nonzero".into(),
        ));
    }
    if 2 * total > pol.basis().total_cutoff() {
        return Err(CoreError::InvalidArgument(format!(
            "cluster pattern needs shell {} beyond cutoff {}",
            2 * total,
            pol.basis().total_cutoff()
        )));
    }
    let vacuum = pol
        .basis()
        .index_of(&vec![0; 2 * pol.n_spatial()])
        .expect("vacuum in basis");
    let mut state = pol.basis().unit_vector(vacuum);
    for (&(i, j), &kappa) in powers {
        let op = pol
            .xdag(i, j)
            .ok_or(CoreError::ModeOutOfRange {
                mode: i.max(j),
                mode_count: pol.n_spatial(),
            })?;
        for _ in 0..kappa {
            state = op.apply(&state);
        }
    }
    let norm = state.norm();
    if norm <= 1e-12 {
        return Err(CoreError::DegenerateInput(
            "cluster pattern annihilates the vacuum".into(),
        ));
    }
    Ok(state / Complex64::new(norm, 0.0))
}

/// One evaluated polarization moment |⟨P₁^{a₁} P₂^{a₂} P₀^{a₀}⟩|.
#[derive(Debug, Clone, Serialize)]
pub struct Moment {
    pub a1: u32,
    pub a2: u32,
    pub a0: u32,
    pub value: f64,
}

/// Moment report for one state.
#[derive(Debug, Clone, Serialize)]
pub struct MomentReport {
    pub moments: Vec<Moment>,
    pub max_abs: f64,
    pub tolerance: f64,
    pub pass: bool,
}

/// Evaluate all mixed moments ⟨P₁^{a₁}P₂^{a₂}P₀^{a₀}⟩ with
/// 1 ≤ a₁+a₂+a₀ ≤ max_order. A P-scalar state passes iff every
/// magnitude is ≤ 1e-10.
pub fn verify_p_scalar(
    pol: &PolarizationOps,
    state: &DVector<Complex64>,
    max_order: u32,
) -> Result<MomentReport, CoreError> {
    if state.len() != pol.basis().dim() {
        return Err(CoreError::BasisMismatch);
    }
    let p1 = pol.p1_cartesian();
    let p2c = pol.p2_cartesian();

    // P₀^{a₀}|ψ⟩ chains, extended by P₂ then P₁ powers.
    let mut moments = Vec::new();
    let mut max_abs = 0.0_f64;
    let mut psi0 = vec![state.clone()];
    for _ in 1..=max_order {
        let last = psi0.last().unwrap();
        psi0.push(pol.p0().apply(last));
    }
    for a0 in 0..=max_order {
        let mut psi2 = vec![psi0[a0 as usize].clone()];
        for _ in 1..=max_order - a0 {
            let last = psi2.last().unwrap();
            psi2.push(p2c.apply(last));
        }
        for a2 in 0..=max_order - a0 {
            let mut current = psi2[a2 as usize].clone();
            for a1 in 0..=max_order - a0 - a2 {
                if a0 + a1 + a2 >= 1 {
                    let value = state.dotc(&current);
                    let magnitude = value.norm();
                    max_abs = max_abs.max(magnitude);
                    moments.push(Moment {
                        a1,
                        a2,
                        a0,
                        value: magnitude,
                    });
                }
                if a0 + a1 + a2 < max_order {
                    current = p1.apply(&current);
                }
            }
        }
    }
    moments.sort_by_key(|m| (m.a1 + m.a2 + m.a0, m.a1, m.a2, m.a0));
    Ok(MomentReport {
        moments,
        max_abs,
        tolerance: tol::MOMENT,
        pass: max_abs <= tol::MOMENT,
    })
}

/// Parameters of the polarization-preserving Hamiltonian family
/// H = Σωᵢ E_ii + Σ_{i≠j}[ω_ij E_ij + g_ij X_ij + g*_ij X†_ij] + Σ Ω_α P_α.
#[derive(Debug, Clone, Default)]
pub struct PolarizationHamiltonianParams {
    /// Free-field frequencies ω_i, one per spatial mode.
    pub omega: Vec<f64>,
    /// Exchange couplings ω_ij for i < j (hermitian completion implied).
    pub omega_exchange: BTreeMap<(usize, usize), Complex64>,
    /// Cluster couplings g_ij for i < j (antisymmetric completion implied).
    pub g_cluster: BTreeMap<(usize, usize), Complex64>,
    /// SU(2) drive coefficients (Ω₁, Ω₂, Ω₀) for the hermitian
    /// Cartesian components (P₁, P₂, P₀).
    pub drive: [f64; 3],
}

/// Assemble the Hamiltonian; hermiticity is implied by the parameter
/// layout and verified before returning.
pub fn build_polarization_hamiltonian(
    pol: &PolarizationOps,
    params: &PolarizationHamiltonianParams,
) -> Result<OperatorMatrix, CoreError> {
    let n = pol.n_spatial();
    if params.omega.len() != n {
        return Err(CoreError::InvalidArgument(format!(
            "expected {n} frequencies, got {}",
            params.omega.len()
        )));
    }
    for key in params.omega_exchange.keys().chain(params.g_cluster.keys()) {
        if key.0 >= key.1 || key.1 >= n {
            return Err(CoreError::NonHermitian(format!(
                "coupling key ({}, {}) must satisfy i < j < {n}",
                key.0, key.1
            )));
        }
    }

    let basis = pol.basis();
    let mut h = OperatorMatrix::zeros(basis);
    for (i, &w) in params.omega.iter().enumerate() {
        h = h.add(&pol.e(i, i).unwrap().scale(Complex64::new(w, 0.0)))?;
    }
    for (&(i, j), &w) in &params.omega_exchange {
        h = h.add(&pol.e(i, j).unwrap().scale(w))?;
        h = h.add(&pol.e(j, i).unwrap().scale(w.conj()))?;
    }
    for (&(i, j), &g) in &params.g_cluster {
        h = h.add(&pol.x(i, j).unwrap().scale(g))?;
        h = h.add(&pol.xdag(i, j).unwrap().scale(g.conj()))?;
    }
    let [o1, o2, o0] = params.drive;
    h = h.add(&pol.p1_cartesian().scale(Complex64::new(o1, 0.0)))?;
    h = h.add(&pol.p2_cartesian().scale(Complex64::new(o2, 0.0)))?;
    h = h.add(&pol.p0().scale(Complex64::new(o0, 0.0)))?;

    if !h.is_hermitian() {
        return Err(CoreError::NonHermitian(
            "assembled polarization Hamiltonian is not hermitian".into(),
        ));
    }
    Ok(h)
}

/// Apply the SU(2) rotation exp(ξP₊ − ξ*P₋) to a state.
///
/// P± conserve the photon-number shell, so the exponential acts
/// shell-block-diagonally; each shell block is exponentiated through the
/// eigendecomposition of the hermitian generator i(ξP₊ − ξ*P₋). Shell
/// leakage and norm drift are asserted.
pub fn su2_coherent_prep(
    pol: &PolarizationOps,
    xi: Complex64,
    reference: &DVector<Complex64>,
) -> Result<DVector<Complex64>, CoreError> {
    let basis = pol.basis();
    if reference.len() != basis.dim() {
        return Err(CoreError::BasisMismatch);
    }
    if xi == Complex64::ZERO {
        return Ok(reference.clone());
    }
    let generator = pol
        .pplus()
        .scale(xi)
        .sub(&pol.pminus().scale(xi.conj()))?;

    // Shells present in the reference.
    let mut shells: Vec<u32> = (0..basis.dim())
        .filter(|&i| reference[i].norm() > 0.0)
        .map(|i| basis.total(i))
        .collect();
    shells.sort_unstable();
    shells.dedup();

    let mut out = reference.clone();
    for shell in shells {
        let indices: Vec<usize> = (0..basis.dim())
            .filter(|&i| basis.total(i) == shell)
            .collect();
        let sdim = indices.len();
        let pos: std::collections::HashMap<usize, usize> =
            indices.iter().enumerate().map(|(a, &i)| (i, a)).collect();
        // Hermitian iA restricted to the shell.
        let mut ia = DMatrix::<Complex64>::zeros(sdim, sdim);
        for (r, c, v) in generator.entries() {
            if let (Some(&ra), Some(&ca)) = (pos.get(&r), pos.get(&c)) {
                ia[(ra, ca)] = Complex64::i() * v;
            }
        }
        let eig = ia.symmetric_eigen();
        // exp(A) = V diag(e^{-iλ}) V†.
        let mut local = DVector::<Complex64>::zeros(sdim);
        for (a, &i) in indices.iter().enumerate() {
            local[a] = reference[i];
        }
        let coeffs = eig.eigenvectors.adjoint() * &local;
        let mut rotated = DVector::<Complex64>::zeros(sdim);
        for (k, &lambda) in eig.eigenvalues.iter().enumerate() {
            let phase = Complex64::new(0.0, -lambda).exp();
            rotated += eig.eigenvectors.column(k) * (coeffs[k] * phase);
        }
        for (a, &i) in indices.iter().enumerate() {
            out[i] = rotated[a];
        }
    }

    let drift = (out.norm() - reference.norm()).abs();
    if drift > 1e-8 {
        return Err(CoreError::ModelViolation(format!(
            "rotation norm drift {drift:.3e} exceeds leakage bound"
        )));
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn singlet_powers() -> BTreeMap<(usize, usize), u32> {
        let mut m = BTreeMap::new();
        m.insert((0, 1), 1);
        m
    }

    #[test]
    fn single_photon_shell_is_spin_half() {
        let pol = PolarizationOps::build(1, 3).unwrap();
        let basis = pol.basis();
        for occ in [[1u32, 0u32], [0, 1]] {
            let idx = basis.index_of(&occ).unwrap();
            let v = basis.unit_vector(idx);
            let val = pol.p2().expectation(&v);
            assert!((val.re - 0.75).abs() < 1e-14);
            assert!(val.im.abs() < 1e-15);
        }
    }

    #[test]
    fn pminus_kills_vacuum() {
        let pol = PolarizationOps::build(2, 3).unwrap();
        let vac = pol
            .basis()
            .unit_vector(pol.basis().index_of(&[0, 0, 0, 0]).unwrap());
        assert!(pol.pminus().apply(&vac).norm() < 1e-15);
    }

    #[test]
    fn cluster_commutes_with_pplus() {
        let pol = PolarizationOps::build(2, 6).unwrap();
        let p = OperatorMatrix::interior_projector(pol.basis(), 2).unwrap();
        let res = pol
            .pplus()
            .commutator(pol.xdag(0, 1).unwrap())
            .unwrap()
            .mul(&p)
            .unwrap()
            .max_norm();
        assert!(res <= 1e-12);
    }

    #[test]
    fn verify_report_passes() {
        let pol = PolarizationOps::build(2, 5).unwrap();
        let report = pol.verify(2).unwrap();
        assert!(report.all_pass(), "{:?}", report.worst());
    }

    #[test]
    fn singlet_is_explicit_two_photon_state() {
        // (a†₁₊a†₂₋ − a†₁₋a†₂₊)|0⟩/√2.
        let pol = PolarizationOps::build(2, 4).unwrap();
        let state = p_scalar_state(&pol, &singlet_powers()).unwrap();
        let basis = pol.basis();
        let plus_minus = basis.index_of(&[1, 0, 0, 1]).unwrap();
        let minus_plus = basis.index_of(&[0, 1, 1, 0]).unwrap();
        let inv_sqrt2 = 1.0 / 2.0_f64.sqrt();
        assert!((state[plus_minus].re - inv_sqrt2).abs() < 1e-14);
        assert!((state[minus_plus].re + inv_sqrt2).abs() < 1e-14);
        let rest: f64 = (0..basis.dim())
            .filter(|&i| i != plus_minus && i != minus_plus)
            .map(|i| state[i].norm())
            .sum();
        assert!(rest < 1e-14);
    }

    #[test]
    fn double_cluster_state_is_frozen_expansion() {
        // (X†₁₂)²|0⟩ normalized: (|2,0,0,2⟩ − |1,1,1,1⟩ + |0,2,2,0⟩)/√3.
        let pol = PolarizationOps::build(2, 4).unwrap();
        let mut powers = BTreeMap::new();
        powers.insert((0, 1), 2);
        let state = p_scalar_state(&pol, &powers).unwrap();
        assert!((state.norm() - 1.0).abs() < 1e-12);
        let basis = pol.basis();
        let inv_sqrt3 = 1.0 / 3.0_f64.sqrt();
        let expect = [
            ([2u32, 0u32, 0u32, 2u32], inv_sqrt3),
            ([1, 1, 1, 1], -inv_sqrt3),
            ([0, 2, 2, 0], inv_sqrt3),
        ];
        for (occ, val) in expect {
            let idx = basis.index_of(&occ).unwrap();
            assert!(
                (state[idx].re - val).abs() < 1e-14,
                "coefficient at {occ:?}: {}",
                state[idx]
            );
            assert!(state[idx].im.abs() < 1e-15);
        }
    }

    #[test]
    fn zero_power_pattern_rejected() {
        let pol = PolarizationOps::build(2, 4).unwrap();
        let empty = BTreeMap::new();
        assert!(matches!(
            p_scalar_state(&pol, &empty),
            Err(CoreError::DegenerateInput(_))
        ));
    }

    #[test]
    fn diagonal_cluster_annihilates() {
        let pol = PolarizationOps::build(2, 4).unwrap();
        let mut powers = BTreeMap::new();
        powers.insert((1, 1), 1);
        assert!(matches!(
            p_scalar_state(&pol, &powers),
            Err(CoreError::DegenerateInput(_))
        ));
    }

    #[test]
    fn singlet_moments_vanish() {
        let pol = PolarizationOps::build(2, 6).unwrap();
        let state = p_scalar_state(&pol, &singlet_powers()).unwrap();
        let report = verify_p_scalar(&pol, &state, 4).unwrap();
        assert_eq!(report.moments.len(), 34);
        assert!(report.pass, "max moment {}", report.max_abs);
        assert!(report.max_abs <= 1e-12);
    }

    #[test]
    fn polarized_state_fails_moment_test() {
        let pol = PolarizationOps::build(2, 4).unwrap();
        let idx = pol.basis().index_of(&[1, 0, 0, 0]).unwrap();
        let state = pol.basis().unit_vector(idx);
        let report = verify_p_scalar(&pol, &state, 2).unwrap();
        assert!(!report.pass);
        let p0_moment = report
            .moments
            .iter()
            .find(|m| (m.a1, m.a2, m.a0) == (0, 0, 1))
            .unwrap();
        assert!((p0_moment.value - 0.5).abs() < 1e-12);
    }

    #[test]
    fn vacuum_is_trivially_p_scalar() {
        let pol = PolarizationOps::build(2, 4).unwrap();
        let vac = pol.basis().unit_vector(0);
        let report = verify_p_scalar(&pol, &vac, 4).unwrap();
        assert!(report.pass);
        assert!(report.max_abs < 1e-15);
    }

    #[test]
    fn annihilated_by_p_iff_moments_vanish() {
        // Forward: P_a |singlet⟩ = 0 directly; converse: a state with a
        // nonzero first moment is not annihilated.
        let pol = PolarizationOps::build(2, 6).unwrap();
        let singlet = p_scalar_state(&pol, &singlet_powers()).unwrap();
        for op in [pol.p0(), pol.pplus(), pol.pminus()] {
            assert!(op.apply(&singlet).norm() < 1e-13);
        }
        let idx = pol.basis().index_of(&[1, 0, 0, 0]).unwrap();
        let polarized = pol.basis().unit_vector(idx);
        assert!(pol.p0().apply(&polarized).norm() > 0.4);
    }

    #[test]
    fn hamiltonian_diagonal_when_only_frequencies() {
        let pol = PolarizationOps::build(2, 4).unwrap();
        let params = PolarizationHamiltonianParams {
            omega: vec![1.0, 2.5],
            ..Default::default()
        };
        let h = build_polarization_hamiltonian(&pol, &params).unwrap();
        assert!(h.entries().all(|(r, c, _)| r == c));
    }

    #[test]
    fn cluster_term_connects_adjacent_shells() {
        let pol = PolarizationOps::build(2, 6).unwrap();
        let mut params = PolarizationHamiltonianParams {
            omega: vec![0.0, 0.0],
            ..Default::default()
        };
        params.g_cluster.insert((0, 1), Complex64::new(0.7, 0.2));
        let h = build_polarization_hamiltonian(&pol, &params).unwrap();
        let basis = pol.basis();
        for (r, c, _) in h.entries() {
            let dn = basis.total(r) as i64 - basis.total(c) as i64;
            assert!(dn == 2 || dn == -2, "shell change {dn}");
        }
    }

    #[test]
    fn bad_coupling_keys_rejected() {
        let pol = PolarizationOps::build(2, 4).unwrap();
        let mut params = PolarizationHamiltonianParams {
            omega: vec![0.0, 0.0],
            ..Default::default()
        };
        params.g_cluster.insert((1, 0), Complex64::new(1.0, 0.0));
        assert!(matches!(
            build_polarization_hamiltonian(&pol, &params),
            Err(CoreError::NonHermitian(_))
        ));
    }

    #[test]
    fn generic_hamiltonian_commutes_with_p2() {
        let pol = PolarizationOps::build(2, 6).unwrap();
        let mut params = PolarizationHamiltonianParams {
            omega: vec![1.0, 1.3],
            drive: [0.4, -0.2, 0.9],
            ..Default::default()
        };
        params
            .omega_exchange
            .insert((0, 1), Complex64::new(0.3, 0.1));
        params.g_cluster.insert((0, 1), Complex64::new(0.5, -0.4));
        let h = build_polarization_hamiltonian(&pol, &params).unwrap();
        let p = OperatorMatrix::interior_projector(pol.basis(), 2).unwrap();
        let res = pol.p2().commutator(&h).unwrap().mul(&p).unwrap().max_norm();
        assert!(res <= 1e-10, "[P², H] residual {res}");
    }

    #[test]
    fn rotation_at_zero_is_identity() {
        let pol = PolarizationOps::build(1, 3).unwrap();
        let idx = pol.basis().index_of(&[0, 1]).unwrap();
        let v = pol.basis().unit_vector(idx);
        let w = su2_coherent_prep(&pol, Complex64::ZERO, &v).unwrap();
        assert!((w - v).norm() < 1e-15);
    }

    #[test]
    fn rotation_conserves_shell_and_p() {
        let pol = PolarizationOps::build(1, 5).unwrap();
        let basis = pol.basis();
        let idx = basis.index_of(&[0, 4]).unwrap(); // 4 quanta in (1,−)
        let v = basis.unit_vector(idx);
        let w = su2_coherent_prep(&pol, Complex64::new(0.3, 0.7), &v).unwrap();
        assert!((w.norm() - 1.0).abs() < 1e-10);
        for i in 0..basis.dim() {
            if basis.total(i) != 4 {
                assert!(w[i].norm() < 1e-14, "leaked outside shell");
            }
        }
        let p2_before = pol.p2().expectation(&v).re;
        let p2_after = pol.p2().expectation(&w).re;
        assert!((p2_before - p2_after).abs() < 1e-10);
    }

    #[test]
    fn rotation_of_multi_shell_superposition() {
        // (|0⟩ + |1₋⟩)/√2: the vacuum part is invariant, the photon part
        // rotates as a spin-½, and P₀ has no cross-shell elements, so
        // ⟨P₀⟩ = −cos(2ξ)/4.
        let pol = PolarizationOps::build(1, 3).unwrap();
        let basis = pol.basis();
        let vac = basis.unit_vector(basis.index_of(&[0, 0]).unwrap());
        let one = basis.unit_vector(basis.index_of(&[0, 1]).unwrap());
        let reference = (vac + one) / Complex64::new(2.0_f64.sqrt(), 0.0);
        let xi = 0.8;
        let w = su2_coherent_prep(&pol, Complex64::new(xi, 0.0), &reference).unwrap();
        assert!((w.norm() - 1.0).abs() < 1e-12);
        let p0 = pol.p0().expectation(&w).re;
        assert!((p0 + 0.25 * (2.0 * xi).cos()).abs() < 1e-12, "got {p0}");
    }

    #[test]
    fn rotation_matches_spin_half_oracle() {
        // ⟨P₀⟩ after rotating |1₋⟩ by real ξ is −½cos(2ξ).
        let pol = PolarizationOps::build(1, 3).unwrap();
        let idx = pol.basis().index_of(&[0, 1]).unwrap();
        let v = pol.basis().unit_vector(idx);
        for xi in [0.0, 0.3, 1.1, 2.0] {
            let w = su2_coherent_prep(&pol, Complex64::new(xi, 0.0), &v).unwrap();
            let p0 = pol.p0().expectation(&w).re;
            assert!(
                (p0 + 0.5 * (2.0 * xi).cos()).abs() < 1e-12,
                "xi={xi}: got {p0}"
            );
        }
    }
}
