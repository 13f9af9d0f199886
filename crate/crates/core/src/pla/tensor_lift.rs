//! u(2) adjoint lift of the rank-2 cluster tensor (n = 2, s = 2).
//!
//! The extremal component V⁺₁₁ = (a₁†)²a₀ generates the whole tensor by
//! repeated adjoint actions of E₂₁:
//!
//! ```text
//! 2V⁺₁₂ = ad_{E₂₁} V⁺₁₁,   2V⁺₂₂ = ad²_{E₂₁} V⁺₁₁,
//! ad_{E₁₂} V⁺₁₁ = 0,       ad³_{E₂₁} V⁺₁₁ = 0,
//! ```
//!
//! together with the conjugate lowest-weight relations for V₁₁.

use num_complex::Complex64;

use crate::error::CoreError;
use crate::fock::OperatorMatrix;
use crate::pla::PlaGenerators;
use crate::report::{IdentityCheck, VerificationReport};
use crate::tol;

/// Verify the adjoint-action lift; requires n = 2, s = 2 generators.
pub fn u2_tensor_lift(gen: &PlaGenerators) -> Result<VerificationReport, CoreError> {
    let spec = gen.spec();
    if spec.n != 2 || spec.s != 2 {
        return Err(CoreError::InvalidArgument(format!(
            "tensor lift is the (n, s) = (2, 2) example, got ({}, {})",
            spec.n, spec.s
        )));
    }
    // Identities combine one E (degree 2) with one cluster (degree s+1=3).
    let margin = 5u32;
    if gen.basis().total_cutoff() < margin {
        return Err(CoreError::InvalidArgument(format!(
            "cutoff {} below interior margin {margin}",
            gen.basis().total_cutoff()
        )));
    }
    let p = OperatorMatrix::interior_projector(gen.basis(), margin)?;
    let project = |op: &OperatorMatrix| -> Result<f64, CoreError> { Ok(op.mul(&p)?.max_norm()) };

    let e12 = gen.e(1, 2).unwrap();
    let e21 = gen.e(2, 1).unwrap();
    let v11 = gen.vplus(&[1, 1]).unwrap();
    let v12 = gen.vplus(&[1, 2]).unwrap();
    let v22 = gen.vplus(&[2, 2]).unwrap();
    let w11 = gen.vminus(&[1, 1]).unwrap();
    let w12 = gen.vminus(&[1, 2]).unwrap();
    let w22 = gen.vminus(&[2, 2]).unwrap();
    let two = Complex64::new(2.0, 0.0);
    let scale = tol::scale_of(&[
        e21.max_norm() * e21.max_norm() * e21.max_norm() * v11.max_norm(),
    ]);

    let mut report = VerificationReport::default();

    // Highest-weight condition.
    report.push(IdentityCheck::new(
        "lift: ad_{E12} V+_{11} = 0",
        project(&e12.commutator(v11)?)?,
        tol::EXACT * scale,
    ));

    // First and second adjoint powers reproduce the direct monomials.
    let ad1 = e21.commutator(v11)?;
    report.push(IdentityCheck::new(
        "lift: ad_{E21} V+_{11} = 2 V+_{12}",
        project(&ad1.sub(&v12.scale(two))?)?,
        tol::EXACT * scale,
    ));
    let ad2 = e21.commutator(&ad1)?;
    report.push(IdentityCheck::new(
        "lift: ad²_{E21} V+_{11} = 2 V+_{22}",
        project(&ad2.sub(&v22.scale(two))?)?,
        tol::EXACT * scale,
    ));
    let ad3 = e21.commutator(&ad2)?;
    report.push(IdentityCheck::new(
        "lift: ad³_{E21} V+_{11} = 0",
        project(&ad3)?,
        tol::EXACT * scale,
    ));

    // Conjugate relations from the lowest-weight component V₁₁.
    report.push(IdentityCheck::new(
        "lift: ad_{E21} V_{11} = 0",
        project(&e21.commutator(w11)?)?,
        tol::EXACT * scale,
    ));
    let bd1 = e12.commutator(w11)?;
    report.push(IdentityCheck::new(
        "lift: ad_{E12} V_{11} = -2 V_{12}",
        project(&bd1.add(&w12.scale(two))?)?,
        tol::EXACT * scale,
    ));
    let bd2 = e12.commutator(&bd1)?;
    report.push(IdentityCheck::new(
        "lift: ad²_{E12} V_{11} = 2 V_{22}",
        project(&bd2.sub(&w22.scale(two))?)?,
        tol::EXACT * scale,
    ));
    let bd3 = e12.commutator(&bd2)?;
    report.push(IdentityCheck::new(
        "lift: ad³_{E12} V_{11} = 0",
        project(&bd3)?,
        tol::EXACT * scale,
    ));

    Ok(report)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::pla::PlaModelSpec;

    #[test]
    fn lift_identities_hold_at_cutoff_8() {
        let gen = PlaGenerators::build(PlaModelSpec::new(2, 2).unwrap(), 8).unwrap();
        let report = u2_tensor_lift(&gen).unwrap();
        assert!(report.all_pass(), "{:?}", report.worst());
        assert_eq!(report.checks.len(), 8);
    }

    #[test]
    fn lift_rejects_wrong_model() {
        let gen = PlaGenerators::build(PlaModelSpec::new(1, 2).unwrap(), 8).unwrap();
        assert!(u2_tensor_lift(&gen).is_err());
    }
}
