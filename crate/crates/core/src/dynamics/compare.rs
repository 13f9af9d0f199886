//! Quantum-vs-classical comparison on the chain-block family.
//!
//! For each block (k = 0, 2j) the reference vector evolves exactly under
//! H = a·V₀ + g̃V₊ + g̃*V₋, while the classical trajectory starts from
//! the matched point v₀(0) = ⟨V₀⟩, v₊(0) = ⟨V₊⟩ and follows the
//! mean-field Bloch system with the block's own structure polynomial.
//! The deviation max_t |⟨V₀(t)⟩ − v₀(t)| / 2j over a fixed scaled
//! horizon shrinks as the block grows, which is the quasiclassical trend
//! the table exposes. Time is scaled by |g̃|(2j)^{(s−1)/2} so the
//! classical motion covers a j-independent fraction of its period.

use serde::Serialize;

use crate::blocks::{mps_block, restrict};
use crate::dynamics::bloch::{mean_field_bloch, BlochParams, BlochState};
use crate::dynamics::evolve::evolve_block_exact;
use crate::error::CoreError;
use crate::pla::{extract_structure_polynomial, PlaGenerators, StructureFamily, StructurePolynomial};

/// One row of the deviation table.
#[derive(Debug, Clone, Serialize)]
pub struct DeviationRow {
    pub two_j: u32,
    pub deviation: f64,
    /// Physical time window [0, horizon / (|g̃|(2j)^{(s−1)/2})].
    pub time_window: f64,
}

/// Compare exact and mean-field evolution over the (k = 0, 2j) family.
pub fn compare_quantum_classical(
    gen: &PlaGenerators,
    params: &BlochParams,
    two_j_list: &[u32],
    horizon: f64,
) -> Result<Vec<DeviationRow>, CoreError> {
    let spec = gen.spec();
    if spec.n != 1 {
        return Err(CoreError::InvalidArgument(
            "comparison harness uses the n = 1 reduction".into(),
        ));
    }
    if params.coupling.norm() == 0.0 {
        return Err(CoreError::InvalidArgument(
            "comparison requires a nonzero coupling".into(),
        ));
    }
    let s = spec.s;
    let family = StructureFamily::extract(s)?;

    // H = a·V₀ + g̃V₊ + g̃*V₋.
    let h = gen
        .v0()
        .scale(num_complex::Complex64::new(params.detuning, 0.0))
        .add(&gen.vplus_extremal().scale(params.coupling))?
        .add(&gen.vminus_extremal().scale(params.coupling.conj()))?;

    let grid_points = 800usize;
    let mut rows = Vec::with_capacity(two_j_list.len());
    for &two_j in two_j_list {
        let block = mps_block(gen, 0, two_j)?.ok_or_else(|| {
            CoreError::InvalidArgument(format!(
                "block (k=0, 2j={two_j}) exceeds cutoff {}",
                gen.basis().total_cutoff()
            ))
        })?;
        let dim = block.dimension();

        // Block structure polynomial: direct extraction when well-posed,
        // the family evaluation otherwise (small blocks).
        let q = if dim >= s + 2 {
            extract_structure_polynomial(gen, &block)?
        } else {
            let coefficients = family.univariate(block.charge);
            let v0_block = restrict(gen.v0(), &block)?;
            StructurePolynomial {
                s,
                r1: block.charge,
                r0: v0_block.matrix[(0, 0)].re,
                coefficients,
                casimir_value: 0.0,
            }
        };

        let hb = restrict(&h, &block)?;
        let v0b = restrict(gen.v0(), &block)?;
        let vpb = restrict(gen.vplus_extremal(), &block)?;

        let scaled_coupling =
            params.coupling.norm() * (two_j.max(1) as f64).powf((s as f64 - 1.0) / 2.0);
        let t_end = horizon / scaled_coupling;
        let times: Vec<f64> = (0..=grid_points)
            .map(|i| t_end * i as f64 / grid_points as f64)
            .collect();

        let mut psi0 = nalgebra::DVector::zeros(dim);
        psi0[block.reference_index] = num_complex::Complex64::new(1.0, 0.0);
        let evolution = evolve_block_exact(&hb, &psi0, &times)?;
        let quantum_v0 = evolution.expectation_series(&v0b.matrix);

        let v0_init = quantum_v0[0].re;
        let vplus_init = psi0.dotc(&(&vpb.matrix * &psi0));
        let init = BlochState::new(v0_init, vplus_init.re, vplus_init.im, block.charge, params);
        let classical = mean_field_bloch(&q, params, &init, &times)?;

        let deviation = quantum_v0
            .iter()
            .zip(classical.v0.iter())
            .map(|(qv, cv)| (qv.re - cv).abs())
            .fold(0.0, f64::max)
            / two_j.max(1) as f64;

        rows.push(DeviationRow {
            two_j,
            deviation,
            time_window: t_end,
        });
    }
    Ok(rows)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::pla::{PlaGenerators, PlaModelSpec};
    use num_complex::Complex64;

    fn params() -> BlochParams {
        BlochParams {
            detuning: 0.0,
            coupling: Complex64::new(1.0, 0.0),
        }
    }

    #[test]
    fn trivial_block_has_zero_deviation() {
        let gen = PlaGenerators::build(PlaModelSpec::new(1, 2).unwrap(), 10).unwrap();
        let rows = compare_quantum_classical(&gen, &params(), &[0], 1.0).unwrap();
        assert!(rows[0].deviation <= 1e-10, "deviation {}", rows[0].deviation);
    }

    #[test]
    fn deviation_decreases_with_block_size() {
        let gen = PlaGenerators::build(PlaModelSpec::new(1, 2).unwrap(), 42).unwrap();
        let rows = compare_quantum_classical(&gen, &params(), &[4, 10, 20], 1.0).unwrap();
        assert!(
            rows[0].deviation > rows[1].deviation && rows[1].deviation > rows[2].deviation,
            "trend not decreasing: {:?}",
            rows.iter().map(|r| r.deviation).collect::<Vec<_>>()
        );
    }

    #[test]
    fn short_horizon_deviation_is_quadratically_small() {
        let gen = PlaGenerators::build(PlaModelSpec::new(1, 2).unwrap(), 14).unwrap();
        let h = 0.2;
        let rows_h = compare_quantum_classical(&gen, &params(), &[6], h).unwrap();
        let rows_half = compare_quantum_classical(&gen, &params(), &[6], h / 2.0).unwrap();
        assert!(
            rows_half[0].deviation <= 0.3 * rows_h[0].deviation,
            "dev(h)={}, dev(h/2)={}",
            rows_h[0].deviation,
            rows_half[0].deviation
        );
    }
}
