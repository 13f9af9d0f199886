//! Differential realization of the chain algebra on monomials.
//!
//! Acting on coefficient vectors of monomials zᵐ (weight m):
//!
//! ```text
//! V₊ zᵐ = zᵐ⁺¹,   V₀ zᵐ = (m + R₀) zᵐ,   V₋ zᵐ = [C + Q(m + R₀)] zᵐ⁻¹
//! ```
//!
//! with R₀ the lowest-weight V₀ eigenvalue. The checks confirm the
//! grading, the ladder-difference relation [V₋,V₊]zᵐ = 𝒫(m+R₀)zᵐ, the
//! lowest-weight annihilation C + Q(R₀) = 0, and that the normal-ordered
//! expansion Q(z d/dz + R₀) = Σ γ_k zᵏ(d/dz)ᵏ (γ from forward
//! differences) reproduces the pointwise values. The block intertwiner
//! exhibits the explicit diagonal change of basis to the Fock chain.
//!
//! The conjugate realization (V₋ = d/dz, with V₊ carrying the inverse
//! derivative) is the formal adjoint of this one and is not realized
//! separately.

use nalgebra::DMatrix;
use num_complex::Complex64;

use crate::blocks::{restrict, BlockSubspace};
use crate::error::CoreError;
use crate::pla::structure::StructurePolynomial;
use crate::pla::{poly, PlaGenerators};
use crate::report::{IdentityCheck, VerificationReport};
use crate::tol;

fn realization_matrices(
    q: &StructurePolynomial,
    casimir_value: f64,
    dim: usize,
) -> (DMatrix<f64>, DMatrix<f64>, DMatrix<f64>) {
    let mut vplus = DMatrix::<f64>::zeros(dim, dim);
    let mut v0 = DMatrix::<f64>::zeros(dim, dim);
    let mut vminus = DMatrix::<f64>::zeros(dim, dim);
    for m in 0..dim {
        if m + 1 < dim {
            vplus[(m + 1, m)] = 1.0;
        }
        v0[(m, m)] = m as f64 + q.r0;
        if m > 0 {
            vminus[(m - 1, m)] = casimir_value + q.eval(m as f64 + q.r0);
        }
    }
    (vplus, v0, vminus)
}

/// Verify the monomial realization on all degrees up to `max_degree`.
pub fn differential_realization_check(
    q: &StructurePolynomial,
    casimir_value: f64,
    max_degree: usize,
) -> Result<VerificationReport, CoreError> {
    if max_degree < q.s + 2 {
        return Err(CoreError::InvalidArgument(format!(
            "max_degree {} below s + 2 = {}",
            max_degree,
            q.s + 2
        )));
    }
    let dim = max_degree + 1;
    let (vplus, v0, vminus) = realization_matrices(q, casimir_value, dim);
    let mut report = VerificationReport::default();
    let scale = tol::scale_of(&[(0..dim)
        .map(|m| (casimir_value + q.eval(m as f64 + q.r0)).abs())
        .fold(0.0, f64::max)]);

    // V₋ z⁰ would need z⁻¹ unless C + Q(R₀) = 0.
    report.push(IdentityCheck::new(
        "diffreal: lowest weight, C + Q(R0) = 0",
        (casimir_value + q.eval(q.r0)).abs(),
        tol::COMMUTATOR * scale,
    ));

    // [V₀, V₊] zᵐ = zᵐ⁺¹ for m below the degree cap.
    let comm_plus = &v0 * &vplus - &vplus * &v0;
    let mut worst = 0.0_f64;
    for m in 0..dim - 1 {
        for r in 0..dim {
            let expect = if r == m + 1 { 1.0 } else { 0.0 };
            worst = worst.max((comm_plus[(r, m)] - expect).abs());
        }
    }
    report.push(IdentityCheck::new(
        "diffreal: [V0, V+] = V+",
        worst,
        tol::COMMUTATOR * scale,
    ));

    let comm_minus = &v0 * &vminus - &vminus * &v0;
    let mut worst = 0.0_f64;
    for m in 0..dim {
        for r in 0..dim {
            worst = worst.max((comm_minus[(r, m)] + vminus[(r, m)]).abs());
        }
    }
    report.push(IdentityCheck::new(
        "diffreal: [V0, V-] = -V-",
        worst,
        tol::COMMUTATOR * scale,
    ));

    // [V₋, V₊] zᵐ = (Q(m+1+R₀) − Q(m+R₀)) zᵐ.
    let comm_pm = &vminus * &vplus - &vplus * &vminus;
    let mut worst = 0.0_f64;
    for m in 0..dim - 1 {
        let expect = q.eval(m as f64 + 1.0 + q.r0) - q.eval(m as f64 + q.r0);
        for r in 0..dim {
            let want = if r == m { expect } else { 0.0 };
            worst = worst.max((comm_pm[(r, m)] - want).abs());
        }
    }
    report.push(IdentityCheck::new(
        "diffreal: [V-, V+] z^m = P(m + R0) z^m",
        worst,
        tol::COMMUTATOR * scale,
    ));

    // Normal-ordered expansion: Q(z d/dz + R₀) = Σ_k γ_k z^k (d/dz)^k with
    // γ_k = Δᵏf(0)/k!, f(m) = Q(m + R₀); z^k (d/dz)^k z^m = m(m−1)⋯(m−k+1) z^m.
    let deg = q.degree();
    let mut diffs: Vec<f64> = (0..=deg).map(|m| q.eval(m as f64 + q.r0)).collect();
    let mut gamma = vec![diffs[0]];
    let mut factorial = 1.0_f64;
    for k in 1..=deg {
        for i in (k..=deg).rev() {
            diffs[i] -= diffs[i - 1];
        }
        factorial *= k as f64;
        gamma.push(diffs[k] / factorial);
    }
    let mut worst = 0.0_f64;
    for m in 0..=max_degree {
        let direct = q.eval(m as f64 + q.r0);
        let expanded: f64 = gamma
            .iter()
            .enumerate()
            .map(|(k, &g)| g * poly::falling(m as f64, k))
            .sum();
        worst = worst.max((expanded - direct).abs());
    }
    report.push(IdentityCheck::new(
        "diffreal: gamma expansion matches pointwise Q",
        worst,
        tol::BLOCK * scale,
    ));

    Ok(report)
}

/// Conjugate the monomial realization by the explicit diagonal change of
/// basis d₀ = 1, d_{m} = d_{m-1}·√Q(R₀+m) and compare it entrywise with
/// the block-restricted generators.
pub fn verify_intertwining(
    gen: &PlaGenerators,
    block: &BlockSubspace,
    q: &StructurePolynomial,
) -> Result<IdentityCheck, CoreError> {
    let d = block.dimension();
    let (vplus, v0, vminus) = realization_matrices(q, 0.0, d);

    let mut diag = vec![1.0_f64; d];
    for m in 1..d {
        let qm = q.eval(q.r0 + m as f64).max(0.0);
        diag[m] = diag[m - 1] * qm.sqrt();
    }

    let conjugate = |x: &DMatrix<f64>| -> DMatrix<Complex64> {
        DMatrix::from_fn(d, d, |r, c| Complex64::new(x[(r, c)] * diag[r] / diag[c], 0.0))
    };

    let mut worst = 0.0_f64;
    let mut scale = 1.0_f64;
    for (diff_side, op) in [
        (conjugate(&vplus), gen.vplus_extremal()),
        (conjugate(&vminus), gen.vminus_extremal()),
        (conjugate(&v0), gen.v0()),
    ] {
        let block_side = restrict(op, block)?.matrix;
        let dev = (&diff_side - &block_side)
            .iter()
            .map(|v| v.norm())
            .fold(0.0, f64::max);
        worst = worst.max(dev);
        scale = scale.max(block_side.iter().map(|v| v.norm()).fold(0.0, f64::max));
    }
    Ok(IdentityCheck::new(
        "diffreal: block intertwining via diagonal basis change",
        worst,
        tol::POLY * scale,
    ))
}
