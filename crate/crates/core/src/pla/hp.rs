//! Block-wise Holstein-Primakoff map onto su(2).
//!
//! On a chain block of dimension 2j+1 the triple
//!
//! ```text
//! Y₀ = V₀ − (R₀+J),   Y₋ = V₋ [φ(V₀)]^{-1/2},   Y₊ = (Y₋)†
//! ```
//!
//! satisfies the su(2) relations exactly. The shift R₀+J is the midpoint
//! of the V₀ spectrum on the block (making Y₀ symmetric, spectrum
//! −j … +j), and φ is stored per weight as the ratio of the V₊V₋
//! diagonal to the su(2) target (j+m)(j−m+1); only weights with m > −j
//! enter, where both sides are strictly positive.

use nalgebra::DMatrix;
use num_complex::Complex64;

use crate::blocks::{restrict, BlockLabel, BlockSubspace};
use crate::error::CoreError;
use crate::pla::PlaGenerators;
use crate::report::{IdentityCheck, VerificationReport};
use crate::tol;

/// su(2) triple realized on one chain block.
#[derive(Debug, Clone)]
pub struct HpTriple {
    pub two_j: u32,
    pub j: f64,
    /// The scalar R₀+J subtracted from V₀.
    pub r0_plus_j: f64,
    pub y0: DMatrix<Complex64>,
    pub yplus: DMatrix<Complex64>,
    pub yminus: DMatrix<Complex64>,
    /// (V₀ eigenvalue, φ value) per weight with m > −j.
    pub phi_values: Vec<(f64, f64)>,
}

/// Construct the su(2) triple on a chain block.
pub fn holstein_primakoff(
    gen: &PlaGenerators,
    block: &BlockSubspace,
) -> Result<HpTriple, CoreError> {
    let BlockLabel::Mps { two_j, .. } = block.label else {
        return Err(CoreError::InvalidArgument(
            "Holstein-Primakoff map is defined on chain blocks".into(),
        ));
    };
    let d = block.dimension();
    let j = (d as f64 - 1.0) / 2.0;

    let v0_block = restrict(gen.v0(), block)?;
    let vminus_block = restrict(gen.vminus_extremal(), block)?;
    let vv_block = restrict(
        &gen.vplus_extremal().mul(gen.vminus_extremal())?,
        block,
    )?;

    let v0_vals: Vec<f64> = (0..d).map(|i| v0_block.matrix[(i, i)].re).collect();
    let r0_plus_j = (v0_vals[0] + v0_vals[d - 1]) / 2.0;

    let mut y0 = DMatrix::<Complex64>::zeros(d, d);
    for i in 0..d {
        y0[(i, i)] = Complex64::new(v0_vals[i] - r0_plus_j, 0.0);
    }

    // φ per weight; the lowest weight never enters (V₋ annihilates it).
    let mut phi_values = Vec::with_capacity(d.saturating_sub(1));
    let mut inv_sqrt_phi = vec![1.0_f64; d];
    for kappa in 1..d {
        let m = kappa as f64 - j;
        let target = (j + m) * (j - m + 1.0);
        let q_val = vv_block.matrix[(kappa, kappa)].re;
        let phi = q_val / target;
        if phi <= 0.0 {
            return Err(CoreError::RepresentationDefect(format!(
                "φ = {phi} at weight m = {m} (non-unitarizable block)"
            )));
        }
        phi_values.push((v0_vals[kappa], phi));
        inv_sqrt_phi[kappa] = 1.0 / phi.sqrt();
    }

    // Y₋ = V₋ · diag(φ(V₀))^{-1/2}, column κ scaled at its source weight.
    let mut yminus = vminus_block.matrix.clone();
    for kappa in 0..d {
        let factor = Complex64::new(inv_sqrt_phi[kappa], 0.0);
        for r in 0..d {
            yminus[(r, kappa)] *= factor;
        }
    }
    let yplus = yminus.adjoint();

    Ok(HpTriple {
        two_j,
        j,
        r0_plus_j,
        y0,
        yplus,
        yminus,
        phi_values,
    })
}

/// Verify the su(2) relations, Casimir spectrum and Y₀ spectrum of a
/// constructed triple.
pub fn verify_hp(hp: &HpTriple) -> VerificationReport {
    let mut report = VerificationReport::default();
    let d = hp.two_j as usize + 1;
    let max_norm = |m: &DMatrix<Complex64>| m.iter().map(|v| v.norm()).fold(0.0, f64::max);
    let scale = tol::scale_of(&[
        max_norm(&hp.yplus) * max_norm(&hp.yminus),
        max_norm(&hp.y0),
    ]);

    let comm = |a: &DMatrix<Complex64>, b: &DMatrix<Complex64>| a * b - b * a;

    let r_plus = max_norm(&(comm(&hp.y0, &hp.yplus) - &hp.yplus));
    let r_minus = max_norm(&(comm(&hp.y0, &hp.yminus) + &hp.yminus));
    report.push(IdentityCheck::new(
        "hp: [Y0, Y±] = ±Y±",
        r_plus.max(r_minus),
        tol::BLOCK * scale,
    ));

    let r_pm = max_norm(&(comm(&hp.yminus, &hp.yplus) + hp.y0.scale(2.0)));
    report.push(IdentityCheck::new(
        "hp: [Y-, Y+] = -2Y0",
        r_pm,
        tol::BLOCK * scale,
    ));

    // Casimir Y₊Y₋ + Y₀² − Y₀ has the single eigenvalue j(j+1).
    let casimir = &hp.yplus * &hp.yminus + &hp.y0 * &hp.y0 - &hp.y0;
    let target = hp.j * (hp.j + 1.0);
    let eig = casimir.symmetric_eigen();
    let dev = eig
        .eigenvalues
        .iter()
        .map(|&l| (l - target).abs())
        .fold(0.0, f64::max);
    report.push(IdentityCheck::new(
        "hp: Casimir spectrum = {j(j+1)}",
        dev,
        tol::POLY * tol::scale_of(&[target]),
    ));

    // Y₀ spectrum is exactly {−j, …, +j}.
    let mut y0_dev = 0.0_f64;
    for i in 0..d {
        y0_dev = y0_dev.max((hp.y0[(i, i)].re - (i as f64 - hp.j)).abs());
    }
    report.push(IdentityCheck::new(
        "hp: Y0 spectrum = {-j..+j}",
        y0_dev,
        tol::BLOCK * tol::scale_of(&[hp.j]),
    ));

    report
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::blocks::mps_block;
    use crate::pla::PlaModelSpec;

    fn gen(s: usize, cutoff: u32) -> PlaGenerators {
        PlaGenerators::build(PlaModelSpec::new(1, s).unwrap(), cutoff).unwrap()
    }

    #[test]
    fn trivial_block_gives_zero_triple() {
        let g = gen(2, 6);
        let block = mps_block(&g, 1, 0).unwrap().unwrap();
        let hp = holstein_primakoff(&g, &block).unwrap();
        assert_eq!(hp.two_j, 0);
        assert!(hp.phi_values.is_empty());
        assert!(hp.yplus.iter().all(|v| v.norm() == 0.0));
        assert!(hp.y0[(0, 0)].norm() < 1e-15);
    }

    #[test]
    fn spectrum_of_three_dim_block() {
        // (k=0, 2j=2, s=2): Y₀ spectrum {−1, 0, +1}.
        let g = gen(2, 8);
        let block = mps_block(&g, 0, 2).unwrap().unwrap();
        let hp = holstein_primakoff(&g, &block).unwrap();
        assert_eq!(hp.two_j, 2);
        for (i, expect) in [-1.0, 0.0, 1.0].iter().enumerate() {
            assert!((hp.y0[(i, i)].re - expect).abs() < 1e-12);
        }
        // Frozen φ values: Q(1/3)=4 over (j+m)(j−m+1)=2 → 2;
        // Q(4/3)=12 over 2 → 6.
        assert_eq!(hp.phi_values.len(), 2);
        assert!((hp.phi_values[0].1 - 2.0).abs() < 1e-10);
        assert!((hp.phi_values[1].1 - 6.0).abs() < 1e-10);
    }

    #[test]
    fn su2_relations_hold() {
        let g = gen(2, 8);
        let block = mps_block(&g, 0, 2).unwrap().unwrap();
        let hp = holstein_primakoff(&g, &block).unwrap();
        let report = verify_hp(&hp);
        assert!(report.all_pass(), "{:?}", report.worst());
    }

    #[test]
    fn su2_relations_hold_across_blocks_and_orders() {
        for s in [1usize, 2, 3] {
            let g = gen(s, (6 * s) as u32 + 2);
            for k in 0..s as u32 {
                for two_j in 0..=6u32 {
                    let Some(block) = mps_block(&g, k, two_j).unwrap() else {
                        continue;
                    };
                    let hp = holstein_primakoff(&g, &block).unwrap();
                    let report = verify_hp(&hp);
                    assert!(
                        report.all_pass(),
                        "s={s} k={k} 2j={two_j}: {:?}",
                        report.worst()
                    );
                    for (_, phi) in &hp.phi_values {
                        assert!(*phi > 0.0);
                    }
                }
            }
        }
    }
}
