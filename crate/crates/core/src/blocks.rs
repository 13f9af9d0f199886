//! Invariant-subspace decomposition of the model Hilbert spaces.
//!
//! Two block families are realized:
//!
//! - **Chain blocks** of the multiphoton model (n = 1): the block labelled
//!   (k, 2j) is spanned by repeated V⁺ applications to the reference
//!   vector (a₁†)^k (a₀†)^{2j}|0⟩ and has dimension exactly 2j + 1. Blocks
//!   whose top state would exceed the cutoff are dropped, not truncated,
//!   so every returned block is exactly invariant.
//! - **Polarization domains** L(p): per fixed photon-number shell, the
//!   eigenspaces of the quasispin Casimir P² with eigenvalue p(p+1). The
//!   block basis is assembled from lowest-weight vectors (P₀ = −p) seeded
//!   in graded-lex order and raised by P₊ chains, so the column order is
//!   deterministic and columns [c(2p+1), (c+1)(2p+1)) form the c-th
//!   irreducible su(2) component.

use std::sync::Arc;

use nalgebra::{DMatrix, DVector};
use num_complex::Complex64;
use serde::Serialize;

use crate::error::CoreError;
use crate::fock::{FockBasis, OperatorMatrix};
use crate::pla::{chain_r1, PlaGenerators};
use crate::polarization::PolarizationOps;
use crate::tol;

/// Label of one invariant block.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum BlockLabel {
    Mps { k: u32, two_j: u32 },
    Polarization { two_p: u32, shell: u32 },
}

/// One invariant subspace with an orthonormal column basis.
#[derive(Debug, Clone)]
pub struct BlockSubspace {
    pub label: BlockLabel,
    /// Orthonormal basis columns in Fock coordinates (dim × block size).
    pub columns: DMatrix<Complex64>,
    /// Column index of the reference vector.
    pub reference_index: usize,
    /// For chain blocks: the single Fock index supporting each column.
    pub state_indices: Option<Vec<usize>>,
    /// R₁ eigenvalue (chain blocks) or the Casimir eigenvalue p(p+1).
    pub charge: f64,
    basis: Arc<FockBasis>,
}

impl BlockSubspace {
    pub fn dimension(&self) -> usize {
        self.columns.ncols()
    }

    pub fn basis(&self) -> &Arc<FockBasis> {
        &self.basis
    }

    /// Occupation vector dominating the reference column.
    pub fn reference_occupation(&self) -> Vec<u32> {
        let col = self.columns.column(self.reference_index);
        let mut best = 0usize;
        let mut best_mag = 0.0;
        for (i, v) in col.iter().enumerate() {
            if v.norm() > best_mag {
                best_mag = v.norm();
                best = i;
            }
        }
        self.basis.state(best).to_vec()
    }

    /// Multiplicity of the block's irreducible content: d(p) =
    /// dimension/(2p+1) for polarization domains, 1 for chain blocks.
    pub fn degeneracy(&self) -> usize {
        match self.label {
            BlockLabel::Mps { .. } => 1,
            BlockLabel::Polarization { two_p, .. } => self.dimension() / (two_p as usize + 1),
        }
    }

    /// Irreducible su(2) components of a polarization block: consecutive
    /// column slices of width 2p+1. A chain block is one component.
    pub fn irreducible_components(&self) -> Vec<DMatrix<Complex64>> {
        match self.label {
            BlockLabel::Mps { .. } => vec![self.columns.clone()],
            BlockLabel::Polarization { two_p, .. } => {
                let width = two_p as usize + 1;
                (0..self.columns.ncols() / width)
                    .map(|c| self.columns.columns(c * width, width).into_owned())
                    .collect()
            }
        }
    }

    /// Largest off-block leakage ‖(1−Π)XΠ‖_max over the given operators.
    pub fn invariance_leakage(&self, ops: &[&OperatorMatrix]) -> f64 {
        let mut worst = 0.0_f64;
        for op in ops {
            let image = op.apply_matrix(&self.columns);
            let reduced = self.columns.adjoint() * &image;
            let leak = &image - &self.columns * &reduced;
            worst = worst.max(leak.iter().map(|v| v.norm()).fold(0.0, f64::max));
        }
        worst
    }
}

/// A single chain block (k, 2j) of the n = 1 model, or `None` if its top
/// state (total quanta k + 2j·s) exceeds the basis cutoff.
pub fn mps_block(gen: &PlaGenerators, k: u32, two_j: u32) -> Result<Option<BlockSubspace>, CoreError> {
    let spec = gen.spec();
    if spec.n != 1 {
        return Err(CoreError::InvalidArgument(
            "chain blocks are defined for the n = 1 reduction".into(),
        ));
    }
    let s = spec.s as u32;
    if k >= s {
        return Err(CoreError::InvalidArgument(format!(
            "chain label k = {k} must lie in [0, s-1] = [0, {}]",
            s - 1
        )));
    }
    let basis = gen.basis();
    if k + two_j * s > basis.total_cutoff() {
        return Ok(None);
    }

    let dim = basis.dim();
    let block_dim = two_j as usize + 1;
    let mut columns = DMatrix::zeros(dim, block_dim);
    let mut state_indices = Vec::with_capacity(block_dim);

    // Reference vector (a₁†)^k (a₀†)^{2j} |0⟩, occupation [n₀ = 2j, n₁ = k].
    let ref_idx = basis
        .index_of(&[two_j, k])
        .expect("reference state within cutoff");
    let mut current = basis.unit_vector(ref_idx);
    state_indices.push(ref_idx);
    columns.set_column(0, &current);

    let vplus = gen.vplus_extremal();
    for col in 1..block_dim {
        current = vplus.apply(&current);
        let norm = current.norm();
        debug_assert!(norm > 0.0, "chain terminated early");
        current /= Complex64::new(norm, 0.0);
        let occ = [two_j - col as u32, k + col as u32 * s];
        state_indices.push(basis.index_of(&occ).expect("chain state within cutoff"));
        columns.set_column(col, &current);
    }

    Ok(Some(BlockSubspace {
        label: BlockLabel::Mps { k, two_j },
        columns,
        reference_index: 0,
        state_indices: Some(state_indices),
        charge: chain_r1(k, two_j, spec.s),
        basis: Arc::clone(basis),
    }))
}

/// All chain blocks that fit the cutoff, ordered by (k, 2j).
pub fn decompose_mps(gen: &PlaGenerators) -> Result<Vec<BlockSubspace>, CoreError> {
    let s = gen.spec().s as u32;
    let cutoff = gen.basis().total_cutoff();
    let mut blocks = Vec::new();
    for k in 0..s {
        let mut two_j = 0u32;
        while k + two_j * s <= cutoff {
            if let Some(b) = mps_block(gen, k, two_j)? {
                blocks.push(b);
            }
            two_j += 1;
        }
    }
    Ok(blocks)
}

/// Polarization domains L(p) within one photon-number shell: eigenspaces
/// of P² grouped by p(p+1), returned in descending p.
pub fn decompose_polarization(
    pol: &PolarizationOps,
    shell: u32,
) -> Result<Vec<BlockSubspace>, CoreError> {
    let basis = pol.basis();
    if shell > basis.total_cutoff() {
        return Err(CoreError::InvalidArgument(format!(
            "shell {shell} exceeds cutoff {}",
            basis.total_cutoff()
        )));
    }
    let shell_indices: Vec<usize> = (0..basis.dim())
        .filter(|&i| basis.total(i) == shell)
        .collect();
    let sdim = shell_indices.len();

    // Dense P² and P₀ restricted to the shell.
    let mut p2 = DMatrix::<Complex64>::zeros(sdim, sdim);
    let mut p0 = DMatrix::<Complex64>::zeros(sdim, sdim);
    let pos: std::collections::HashMap<usize, usize> = shell_indices
        .iter()
        .enumerate()
        .map(|(a, &i)| (i, a))
        .collect();
    for (r, c, v) in pol.p2().entries() {
        if let (Some(&ra), Some(&ca)) = (pos.get(&r), pos.get(&c)) {
            p2[(ra, ca)] = v;
        }
    }
    for (r, c, v) in pol.p0().entries() {
        if let (Some(&ra), Some(&ca)) = (pos.get(&r), pos.get(&c)) {
            p0[(ra, ca)] = v;
        }
    }

    let eig = p2.clone().symmetric_eigen();
    let scale = tol::scale_of(&[shell as f64 * (shell as f64 + 2.0) / 4.0]);

    // Admissible two_p values: shell, shell−2, …, ≥ 0.
    let mut by_two_p: std::collections::BTreeMap<u32, Vec<usize>> = Default::default();
    for (vi, &lambda) in eig.eigenvalues.iter().enumerate() {
        let mut assigned = None;
        let mut best_dev = f64::INFINITY;
        let mut two_p = shell;
        loop {
            let p = two_p as f64 / 2.0;
            let dev = (lambda - p * (p + 1.0)).abs();
            best_dev = best_dev.min(dev);
            if dev <= tol::SPECTRAL * scale {
                assigned = Some(two_p);
                break;
            }
            if two_p < 2 {
                break;
            }
            two_p -= 2;
        }
        match assigned {
            Some(tp) => by_two_p.entry(tp).or_default().push(vi),
            None => {
                return Err(CoreError::SpectralAnomaly {
                    eigenvalue: lambda,
                    deviation: best_dev,
                })
            }
        }
    }

    let mut blocks = Vec::new();
    for (&two_p, vec_indices) in by_two_p.iter().rev() {
        let p = two_p as f64 / 2.0;
        let espace_dim = vec_indices.len();
        let width = two_p as usize + 1;
        if espace_dim % width != 0 {
            return Err(CoreError::ModelViolation(format!(
                "P² eigenspace for 2p = {two_p} has dimension {espace_dim}, not a multiple of {width}"
            )));
        }
        let degeneracy = espace_dim / width;

        // Eigenspace basis in shell coordinates.
        let mut espace = DMatrix::<Complex64>::zeros(sdim, espace_dim);
        for (a, &vi) in vec_indices.iter().enumerate() {
            espace.set_column(a, &eig.eigenvectors.column(vi).into_owned());
        }

        // Lowest-weight subspace: eigenvectors of P₀|_{E_p} at −p.
        let p0_block = espace.adjoint() * &p0 * &espace;
        let p0_eig = p0_block.symmetric_eigen();
        let mut low_vectors: Vec<DVector<Complex64>> = Vec::new();
        for (vi, &mu) in p0_eig.eigenvalues.iter().enumerate() {
            if (mu + p).abs() <= tol::SPECTRAL * scale {
                low_vectors.push(&espace * p0_eig.eigenvectors.column(vi).into_owned());
            }
        }
        if low_vectors.len() != degeneracy {
            return Err(CoreError::ModelViolation(format!(
                "found {} lowest-weight vectors for 2p = {two_p}, expected {degeneracy}",
                low_vectors.len()
            )));
        }

        // Deterministic orthonormal basis of the lowest-weight space:
        // project coordinate axes in graded-lex order and Gram-Schmidt.
        let low = deterministic_span(&low_vectors, sdim);

        // Raise each lowest-weight vector with P₊ to fill its chain.
        let mut columns = DMatrix::<Complex64>::zeros(basis.dim(), espace_dim);
        for (c, w) in low.iter().enumerate() {
            let mut full = DVector::<Complex64>::zeros(basis.dim());
            for (a, &i) in shell_indices.iter().enumerate() {
                full[i] = w[a];
            }
            for step in 0..width {
                columns.set_column(c * width + step, &full);
                if step + 1 < width {
                    full = pol.pplus().apply(&full);
                    let norm = full.norm();
                    if norm <= 1e-13 {
                        return Err(CoreError::ModelViolation(format!(
                            "P₊ chain for 2p = {two_p} terminated at step {step}"
                        )));
                    }
                    full /= Complex64::new(norm, 0.0);
                }
            }
        }

        blocks.push(BlockSubspace {
            label: BlockLabel::Polarization { two_p, shell },
            columns,
            reference_index: 0,
            state_indices: None,
            charge: p * (p + 1.0),
            basis: Arc::clone(basis),
        });
    }
    Ok(blocks)
}

/// Orthonormal basis of span(vectors), chosen deterministically by
/// projecting coordinate axes in basis order.
fn deterministic_span(vectors: &[DVector<Complex64>], ambient: usize) -> Vec<DVector<Complex64>> {
    let want = vectors.len();
    let mut chosen: Vec<DVector<Complex64>> = Vec::with_capacity(want);
    for axis in 0..ambient {
        if chosen.len() == want {
            break;
        }
        // Projection of e_axis onto span(vectors).
        let mut proj = DVector::<Complex64>::zeros(ambient);
        for v in vectors {
            let amp = v[axis].conj();
            proj += v * amp;
        }
        for c in &chosen {
            let amp = c.dotc(&proj);
            proj -= c * amp;
        }
        let norm = proj.norm();
        if norm > 1e-7 {
            proj /= Complex64::new(norm, 0.0);
            chosen.push(proj);
        }
    }
    debug_assert_eq!(chosen.len(), want, "span not exhausted by coordinate axes");
    chosen
}

/// Dense restriction of an operator to a block, with leakage diagnostics.
#[derive(Debug, Clone)]
pub struct BlockOperator {
    pub matrix: DMatrix<Complex64>,
    /// ‖(1−Π) op Π‖_max.
    pub leakage: f64,
    /// True iff the leakage is below the invariance tolerance.
    pub invariant: bool,
}

/// B = Π† op Π in block coordinates. If the off-block leakage exceeds the
/// tolerance the result is flagged non-invariant (evolution refuses it).
pub fn restrict(op: &OperatorMatrix, block: &BlockSubspace) -> Result<BlockOperator, CoreError> {
    if !op.basis().same_as(block.basis()) {
        return Err(CoreError::BasisMismatch);
    }
    let image = op.apply_matrix(&block.columns);
    let matrix = block.columns.adjoint() * &image;
    let leak = &image - &block.columns * &matrix;
    let leakage = leak.iter().map(|v| v.norm()).fold(0.0, f64::max);
    let invariant = leakage <= tol::BLOCK * tol::scale_of(&[op.max_norm()]);
    Ok(BlockOperator {
        matrix,
        leakage,
        invariant,
    })
}
