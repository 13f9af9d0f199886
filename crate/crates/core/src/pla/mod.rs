//! The polynomial Lie algebra of the multiphoton scattering model.
//!
//! For `n` scattered modes a₁…a_n coupled to a pump mode a₀ in clusters
//! of order `s`, the invariant basis is
//!
//! ```text
//! E_ij = aᵢ†aⱼ                      (i, j ≥ 1)
//! V⁺_{i₁…i_s} = a†_{i₁}…a†_{i_s}a₀   (symmetric rank-s tensor)
//! V⁻_{i₁…i_s} = (V⁺_{i₁…i_s})†
//! R₁ = (N + s·E₀₀)/(s+1)            (central),  N = Σᵢ E_ii
//! V₀ = (N − E₀₀)/(s+1)              (Cartan element)
//! ```
//!
//! The V₀ normalization is fixed by the grading [V₀, V⁺] = V⁺: a V⁺
//! application raises N by s and lowers E₀₀ by 1, so only the (N − E₀₀)
//! combination shifts by exactly s+1. At s = 1 this reduces to the
//! standard two-mode su(2) Cartan element (n̂₁ − n̂₀)/2.
//!
//! [`PlaGenerators::verify`] checks the closure relations: the u(n)
//! δ-pattern for [E, E], the adjoint action of E on the V± tensors, the
//! grading, centrality of R₁, and that [V⁻, V⁺] commutes with the center
//! and Cartan element (and is diagonal for n = 1).

mod diffreal;
mod hp;
pub mod poly;
mod structure;
mod tensor_lift;

pub use diffreal::{differential_realization_check, verify_intertwining};
pub use hp::{holstein_primakoff, verify_hp, HpTriple};
pub use structure::{casimir_check, extract_structure_polynomial, StructureFamily, StructurePolynomial};
pub use tensor_lift::u2_tensor_lift;

use std::collections::BTreeMap;
use std::sync::Arc;

use num_complex::Complex64;

use crate::error::CoreError;
use crate::fock::{FockBasis, Ladder, OperatorMatrix};
use crate::report::{IdentityCheck, VerificationReport};
use crate::tol;

/// Model parameters: `n` scattered modes, cluster order `s`.
///
/// `s = 1` is admitted as the linear su(2) control case.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct PlaModelSpec {
    pub n: usize,
    pub s: usize,
}

impl PlaModelSpec {
    pub fn new(n: usize, s: usize) -> Result<Self, CoreError> {
        if n < 1 || s < 1 {
            return Err(CoreError::InvalidArgument(format!(
                "model requires n ≥ 1 and s ≥ 1, got n={n}, s={s}"
            )));
        }
        Ok(PlaModelSpec { n, s })
    }
}

/// Realized generator basis of the model PLA on an (n+1)-mode Fock basis.
///
/// Mode 0 of the basis is the pump a₀; modes 1…n are the scattered modes.
#[derive(Debug)]
pub struct PlaGenerators {
    spec: PlaModelSpec,
    basis: Arc<FockBasis>,
    e: Vec<Vec<OperatorMatrix>>,
    e00: OperatorMatrix,
    number: OperatorMatrix,
    vplus: BTreeMap<Vec<usize>, OperatorMatrix>,
    vminus: BTreeMap<Vec<usize>, OperatorMatrix>,
    v0: OperatorMatrix,
    r1: OperatorMatrix,
}

/// All sorted multi-indices (i₁ ≤ … ≤ i_s) with entries in 1..=n.
pub fn symmetric_multi_indices(n: usize, s: usize) -> Vec<Vec<usize>> {
    let mut out = Vec::new();
    let mut current = Vec::with_capacity(s);
    fn rec(out: &mut Vec<Vec<usize>>, current: &mut Vec<usize>, lo: usize, n: usize, left: usize) {
        if left == 0 {
            out.push(current.clone());
            return;
        }
        for i in lo..=n {
            current.push(i);
            rec(out, current, i, n, left - 1);
            current.pop();
        }
    }
    rec(&mut out, &mut current, 1, n, s);
    out
}

impl PlaGenerators {
    /// Realize the generator basis at the given total cutoff.
    pub fn build(spec: PlaModelSpec, cutoff: u32) -> Result<Self, CoreError> {
        if (cutoff as usize) < spec.s {
            return Err(CoreError::InvalidArgument(format!(
                "cutoff {} below cluster order {}",
                cutoff, spec.s
            )));
        }
        let basis = FockBasis::new(spec.n + 1, cutoff)?;
        let n = spec.n;
        let s = spec.s;

        let mut e = Vec::with_capacity(n);
        for i in 1..=n {
            let mut row = Vec::with_capacity(n);
            for j in 1..=n {
                row.push(OperatorMatrix::monomial(
                    &basis,
                    &[(i, Ladder::Create), (j, Ladder::Annihilate)],
                )?);
            }
            e.push(row);
        }
        let e00 = OperatorMatrix::monomial(
            &basis,
            &[(0, Ladder::Create), (0, Ladder::Annihilate)],
        )?;
        let mut number = OperatorMatrix::zeros(&basis);
        for (i, row) in e.iter().enumerate() {
            number = number.add(&row[i])?;
        }

        let mut vplus = BTreeMap::new();
        let mut vminus = BTreeMap::new();
        for idx in symmetric_multi_indices(n, s) {
            let mut factors: Vec<(usize, Ladder)> =
                idx.iter().map(|&i| (i, Ladder::Create)).collect();
            factors.push((0, Ladder::Annihilate));
            let vp = OperatorMatrix::monomial(&basis, &factors)?;
            let vm = vp.adjoint();
            vplus.insert(idx.clone(), vp);
            vminus.insert(idx, vm);
        }

        let kappa = Complex64::new(1.0 / (s as f64 + 1.0), 0.0);
        let v0 = number.sub(&e00)?.scale(kappa);
        let r1 = number
            .add(&e00.scale(Complex64::new(s as f64, 0.0)))?
            .scale(kappa);

        Ok(PlaGenerators {
            spec,
            basis,
            e,
            e00,
            number,
            vplus,
            vminus,
            v0,
            r1,
        })
    }

    pub fn spec(&self) -> PlaModelSpec {
        self.spec
    }

    pub fn basis(&self) -> &Arc<FockBasis> {
        &self.basis
    }

    /// E_ij = aᵢ†aⱼ with 1-based scattered-mode indices.
    pub fn e(&self, i: usize, j: usize) -> Option<&OperatorMatrix> {
        self.e.get(i.checked_sub(1)?)?.get(j.checked_sub(1)?)
    }

    pub fn e00(&self) -> &OperatorMatrix {
        &self.e00
    }

    /// N = Σᵢ E_ii over the scattered modes.
    pub fn number(&self) -> &OperatorMatrix {
        &self.number
    }

    pub fn vplus(&self, idx: &[usize]) -> Option<&OperatorMatrix> {
        self.vplus.get(idx)
    }

    pub fn vminus(&self, idx: &[usize]) -> Option<&OperatorMatrix> {
        self.vminus.get(idx)
    }

    pub fn multi_indices(&self) -> impl Iterator<Item = &Vec<usize>> {
        self.vplus.keys()
    }

    pub fn v0(&self) -> &OperatorMatrix {
        &self.v0
    }

    pub fn r1(&self) -> &OperatorMatrix {
        &self.r1
    }

    /// Extremal cluster component V⁺_{1…1} used by the n = 1 chain.
    pub fn vplus_extremal(&self) -> &OperatorMatrix {
        &self.vplus[&vec![1usize; self.spec.s]]
    }

    pub fn vminus_extremal(&self) -> &OperatorMatrix {
        &self.vminus[&vec![1usize; self.spec.s]]
    }

    /// Verify the defining commutation relations on the interior with the
    /// given margin (margin ≥ 2s makes every identity truncation-exact).
    pub fn verify(&self, margin: u32) -> Result<VerificationReport, CoreError> {
        let p = OperatorMatrix::interior_projector(&self.basis, margin)?;
        let mut report = VerificationReport::default();
        let n = self.spec.n;

        let project = |op: &OperatorMatrix| -> Result<f64, CoreError> {
            Ok(op.mul(&p)?.max_norm())
        };

        // (11a) closure of h: [E_ij, E_kl] = δ_jk E_il − δ_li E_kj, and E00 commutes.
        let mut worst = 0.0_f64;
        let mut scale = 1.0_f64;
        for i in 1..=n {
            for j in 1..=n {
                let eij = self.e(i, j).unwrap();
                for k in 1..=n {
                    for l in 1..=n {
                        let ekl = self.e(k, l).unwrap();
                        let mut rhs = OperatorMatrix::zeros(&self.basis);
                        if j == k {
                            rhs = rhs.add(self.e(i, l).unwrap())?;
                        }
                        if l == i {
                            rhs = rhs.sub(self.e(k, j).unwrap())?;
                        }
                        let res = project(&eij.commutator(ekl)?.sub(&rhs)?)?;
                        worst = worst.max(res);
                        scale = scale.max(eij.max_norm() * ekl.max_norm());
                    }
                }
                let res = project(&eij.commutator(&self.e00)?)?;
                worst = worst.max(res);
            }
        }
        report.push(IdentityCheck::new(
            "closure: [E_ij, E_kl] = d_jk E_il - d_li E_kj",
            worst,
            tol::COMMUTATOR * scale,
        ));

        // (11b) adjoint action on the V⁺ tensor:
        // [E_ij, V⁺_K] = Σ_t δ_{j,K_t} V⁺_{K_t → i}.
        let mut worst_p = 0.0_f64;
        let mut worst_m = 0.0_f64;
        let mut scale_v = 1.0_f64;
        for i in 1..=n {
            for j in 1..=n {
                let eij = self.e(i, j).unwrap();
                for key in self.vplus.keys() {
                    let mut rhs = OperatorMatrix::zeros(&self.basis);
                    for t in 0..key.len() {
                        if key[t] == j {
                            let mut target = key.clone();
                            target[t] = i;
                            target.sort_unstable();
                            rhs = rhs.add(&self.vplus[&target])?;
                        }
                    }
                    let lhs = eij.commutator(&self.vplus[key])?;
                    worst_p = worst_p.max(project(&lhs.sub(&rhs)?)?);
                    scale_v = scale_v.max(eij.max_norm() * self.vplus[key].max_norm());

                    // Conjugate pattern: [E_ij, V⁻_K] = −Σ_t δ_{i,K_t} V⁻_{K_t → j}.
                    let mut rhs_m = OperatorMatrix::zeros(&self.basis);
                    for t in 0..key.len() {
                        if key[t] == i {
                            let mut target = key.clone();
                            target[t] = j;
                            target.sort_unstable();
                            rhs_m = rhs_m.sub(&self.vminus[&target])?;
                        }
                    }
                    let lhs_m = eij.commutator(&self.vminus[key])?;
                    worst_m = worst_m.max(project(&lhs_m.sub(&rhs_m)?)?);
                }
            }
        }
        report.push(IdentityCheck::new(
            "adjoint action: [E_ij, V+_K] tensor pattern",
            worst_p,
            tol::COMMUTATOR * scale_v,
        ));
        report.push(IdentityCheck::new(
            "adjoint action: [E_ij, V-_K] conjugate pattern",
            worst_m,
            tol::COMMUTATOR * scale_v,
        ));

        // Grading: [V0, V±] = ±V±.
        let mut worst_grade = 0.0_f64;
        for (key, vp) in &self.vplus {
            let res_p = project(&self.v0.commutator(vp)?.sub(vp)?)?;
            let vm = &self.vminus[key];
            let res_m = project(&self.v0.commutator(vm)?.add(vm)?)?;
            worst_grade = worst_grade.max(res_p).max(res_m);
        }
        report.push(IdentityCheck::new(
            "grading: [V0, V±] = ±V±",
            worst_grade,
            tol::COMMUTATOR * scale_v,
        ));

        // Centrality of R1 against every generator.
        let mut worst_c = 0.0_f64;
        let mut central_targets: Vec<&OperatorMatrix> = vec![&self.e00, &self.v0];
        central_targets.extend(self.e.iter().flatten());
        central_targets.extend(self.vplus.values());
        central_targets.extend(self.vminus.values());
        for x in central_targets {
            worst_c = worst_c.max(project(&self.r1.commutator(x)?)?);
        }
        report.push(IdentityCheck::new(
            "center: [R1, X] = 0 for all generators",
            worst_c,
            tol::COMMUTATOR * scale_v,
        ));

        // V⁻ agrees with the a_{i₁}…a_{i_s}a₀† monomial on the interior.
        let mut worst_adj = 0.0_f64;
        for key in self.vplus.keys() {
            let mut factors: Vec<(usize, Ladder)> =
                key.iter().map(|&i| (i, Ladder::Annihilate)).collect();
            factors.push((0, Ladder::Create));
            let direct = OperatorMatrix::monomial(&self.basis, &factors)?;
            worst_adj = worst_adj.max(project(&self.vminus[key].sub(&direct)?)?);
        }
        report.push(IdentityCheck::new(
            "conjugation: V-_K = (V+_K)† matches monomial",
            worst_adj,
            tol::EXACT * tol::scale_of(&[scale_v]),
        ));

        // (11c) [V⁻_I, V⁺_J] lies in the enveloping algebra of h ∪ r:
        // verified as commuting with R1 and V0 on the interior.
        let mut worst_r1 = 0.0_f64;
        let mut worst_v0 = 0.0_f64;
        let mut scale_c = 1.0_f64;
        for vm in self.vminus.values() {
            for vp in self.vplus.values() {
                let c = vm.commutator(vp)?;
                worst_r1 = worst_r1.max(project(&c.commutator(&self.r1)?)?);
                worst_v0 = worst_v0.max(project(&c.commutator(&self.v0)?)?);
                scale_c = scale_c.max(c.max_norm());
            }
        }
        report.push(IdentityCheck::new(
            "structure: [[V-_I, V+_J], R1] = 0",
            worst_r1,
            tol::COMMUTATOR * scale_c,
        ));
        report.push(IdentityCheck::new(
            "structure: [[V-_I, V+_J], V0] = 0",
            worst_v0,
            tol::COMMUTATOR * scale_c,
        ));

        // For n = 1 the commutator must be diagonal in the occupation basis.
        if n == 1 {
            let c = self
                .vminus_extremal()
                .commutator(self.vplus_extremal())?
                .mul(&p)?;
            let (_, offdiag) = c.real_diagonal();
            report.push(IdentityCheck::new(
                "structure: [V-, V+] diagonal (n = 1)",
                offdiag,
                tol::COMMUTATOR * scale_c,
            ));
        }

        Ok(report)
    }
}

/// Chain label (k, 2j) of the n = 1 occupation state (n₁, n₀):
/// k = n₁ mod s, 2j = n₀ + (n₁ − k)/s.
pub fn chain_label(n1: u32, n0: u32, s: usize) -> (u32, u32) {
    let k = n1 % s as u32;
    let kappa = (n1 - k) / s as u32;
    (k, n0 + kappa)
}

/// R₁ eigenvalue on the chain block (k, 2j): (k + 2j·s)/(s+1).
pub fn chain_r1(k: u32, two_j: u32, s: usize) -> f64 {
    (k as f64 + two_j as f64 * s as f64) / (s as f64 + 1.0)
}

/// V₀ eigenvalue of the chain reference vector: (k − 2j)/(s+1).
pub fn chain_v0_min(k: u32, two_j: u32, s: usize) -> f64 {
    (k as f64 - two_j as f64) / (s as f64 + 1.0)
}
