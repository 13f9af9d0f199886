//! Occupation-number bases and sparse boson operators.
//!
//! A [`FockBasis`] enumerates all occupation vectors (n₁,…,n_m) of `m`
//! modes with Σnᵢ ≤ N_cut in graded lexicographic order (by total quantum
//! number, then lexicographically), so basis indices are reproducible
//! across runs. Ladder operators and their ordered products are realized
//! as sparse matrices over that basis:
//!
//! ```text
//! a†|n⟩ = √(n+1)|n+1⟩      a|n⟩ = √n|n-1⟩
//! ```
//!
//! Truncation is hard: creation out of the cutoff shell maps to zero.
//! Operator identities of total ladder degree d therefore hold exactly on
//! the range of [`OperatorMatrix::interior_projector`] with margin ≥ d,
//! which is the contract all verification operations rely on.

use std::collections::{BTreeMap, HashMap};
use std::io::Write;
use std::sync::{Arc, OnceLock};

use nalgebra::{DMatrix, DVector};
use num_complex::Complex64;

use crate::error::CoreError;
use crate::tol;

/// Default bound on the number of basis states.
pub const DEFAULT_STATE_BOUND: usize = 2_000_000;

/// Creation or annihilation.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Ladder {
    Create,
    Annihilate,
}

/// Occupation-number basis of `mode_count` modes under a total cutoff.
#[derive(Debug)]
pub struct FockBasis {
    mode_count: usize,
    total_cutoff: u32,
    states: Vec<Vec<u32>>,
    index_map: HashMap<Vec<u32>, usize>,
}

fn binomial(n: u64, k: u64) -> u128 {
    let k = k.min(n - k.min(n));
    let mut acc: u128 = 1;
    for i in 0..k {
        acc = acc * (n - i) as u128 / (i + 1) as u128;
    }
    acc
}

impl FockBasis {
    /// Enumerate all states with Σnᵢ ≤ `total_cutoff` using the default
    /// dimension bound.
    pub fn new(mode_count: usize, total_cutoff: u32) -> Result<Arc<Self>, CoreError> {
        Self::with_state_bound(mode_count, total_cutoff, DEFAULT_STATE_BOUND)
    }

    /// Same as [`FockBasis::new`] with an explicit bound on the state count.
    pub fn with_state_bound(
        mode_count: usize,
        total_cutoff: u32,
        bound: usize,
    ) -> Result<Arc<Self>, CoreError> {
        if mode_count == 0 {
            return Err(CoreError::InvalidArgument(
                "mode_count must be at least 1".into(),
            ));
        }
        let count = binomial(total_cutoff as u64 + mode_count as u64, mode_count as u64);
        if count > bound as u128 {
            return Err(CoreError::DimensionBound {
                states: count,
                bound,
            });
        }

        let mut states = Vec::with_capacity(count as usize);
        let mut current = vec![0u32; mode_count];
        for total in 0..=total_cutoff {
            enumerate_shell(&mut states, &mut current, 0, total);
        }
        let index_map = states
            .iter()
            .enumerate()
            .map(|(i, s)| (s.clone(), i))
            .collect();
        Ok(Arc::new(FockBasis {
            mode_count,
            total_cutoff,
            states,
            index_map,
        }))
    }

    pub fn mode_count(&self) -> usize {
        self.mode_count
    }

    pub fn total_cutoff(&self) -> u32 {
        self.total_cutoff
    }

    /// Number of basis states.
    pub fn dim(&self) -> usize {
        self.states.len()
    }

    /// Occupation vector of basis state `idx`.
    pub fn state(&self, idx: usize) -> &[u32] {
        &self.states[idx]
    }

    pub fn states(&self) -> impl Iterator<Item = &[u32]> {
        self.states.iter().map(|s| s.as_slice())
    }

    /// Basis index of an occupation vector, if within the cutoff.
    pub fn index_of(&self, occ: &[u32]) -> Option<usize> {
        self.index_map.get(occ).copied()
    }

    /// Total quantum number of basis state `idx`.
    pub fn total(&self, idx: usize) -> u32 {
        self.states[idx].iter().sum()
    }

    /// Two bases are interchangeable iff they enumerate the same states.
    pub fn same_as(&self, other: &FockBasis) -> bool {
        std::ptr::eq(self, other)
            || (self.mode_count == other.mode_count && self.total_cutoff == other.total_cutoff)
    }

    /// Unit basis vector |idx⟩ as a dense column.
    pub fn unit_vector(&self, idx: usize) -> DVector<Complex64> {
        let mut v = DVector::zeros(self.dim());
        v[idx] = Complex64::new(1.0, 0.0);
        v
    }
}

/// Fill `states` with all completions of `current[..mode]` summing to
/// `total` overall, in lexicographic order.
fn enumerate_shell(states: &mut Vec<Vec<u32>>, current: &mut Vec<u32>, mode: usize, total: u32) {
    let used: u32 = current[..mode].iter().sum();
    let remaining = total - used;
    if mode + 1 == current.len() {
        current[mode] = remaining;
        states.push(current.clone());
        return;
    }
    for n in 0..=remaining {
        current[mode] = n;
        enumerate_shell(states, current, mode + 1, total);
    }
}

/// Sparse complex matrix bound to a [`FockBasis`].
///
/// Entries are keyed by (row, column), so iteration order is
/// deterministic and CSV dumps are reproducible.
#[derive(Debug, Clone)]
pub struct OperatorMatrix {
    basis: Arc<FockBasis>,
    entries: BTreeMap<(usize, usize), Complex64>,
    hermitian: OnceLock<bool>,
}

impl OperatorMatrix {
    /// Zero operator.
    pub fn zeros(basis: &Arc<FockBasis>) -> Self {
        OperatorMatrix {
            basis: Arc::clone(basis),
            entries: BTreeMap::new(),
            hermitian: OnceLock::new(),
        }
    }

    /// Identity operator.
    pub fn identity(basis: &Arc<FockBasis>) -> Self {
        let entries = (0..basis.dim())
            .map(|i| ((i, i), Complex64::new(1.0, 0.0)))
            .collect();
        OperatorMatrix {
            basis: Arc::clone(basis),
            entries,
            hermitian: OnceLock::new(),
        }
    }

    /// Build from explicit entries; zero values are dropped.
    pub fn from_entries(
        basis: &Arc<FockBasis>,
        entries: impl IntoIterator<Item = (usize, usize, Complex64)>,
    ) -> Result<Self, CoreError> {
        let dim = basis.dim();
        let mut map = BTreeMap::new();
        for (r, c, v) in entries {
            if r >= dim || c >= dim {
                return Err(CoreError::InvalidArgument(format!(
                    "entry ({r}, {c}) out of range for dimension {dim}"
                )));
            }
            if v != Complex64::ZERO {
                *map.entry((r, c)).or_insert(Complex64::ZERO) += v;
            }
        }
        map.retain(|_, v| *v != Complex64::ZERO);
        Ok(OperatorMatrix {
            basis: Arc::clone(basis),
            entries: map,
            hermitian: OnceLock::new(),
        })
    }

    /// Single-mode ladder operator. Creation out of the cutoff shell is
    /// truncated to zero.
    pub fn ladder(basis: &Arc<FockBasis>, mode: usize, kind: Ladder) -> Result<Self, CoreError> {
        if mode >= basis.mode_count() {
            return Err(CoreError::ModeOutOfRange {
                mode,
                mode_count: basis.mode_count(),
            });
        }
        let mut entries = BTreeMap::new();
        let mut target = Vec::new();
        for (col, occ) in basis.states.iter().enumerate() {
            let n = occ[mode];
            match kind {
                Ladder::Create => {
                    target.clear();
                    target.extend_from_slice(occ);
                    target[mode] = n + 1;
                    if let Some(row) = basis.index_of(&target) {
                        entries.insert((row, col), Complex64::new(((n + 1) as f64).sqrt(), 0.0));
                    }
                }
                Ladder::Annihilate => {
                    if n > 0 {
                        target.clear();
                        target.extend_from_slice(occ);
                        target[mode] = n - 1;
                        let row = basis
                            .index_of(&target)
                            .expect("annihilation target always within cutoff");
                        entries.insert((row, col), Complex64::new((n as f64).sqrt(), 0.0));
                    }
                }
            }
        }
        Ok(OperatorMatrix {
            basis: Arc::clone(basis),
            entries,
            hermitian: OnceLock::new(),
        })
    }

    /// Ordered product of ladder operators; the rightmost factor is
    /// applied first, as in operator notation.
    pub fn monomial(basis: &Arc<FockBasis>, factors: &[(usize, Ladder)]) -> Result<Self, CoreError> {
        if factors.is_empty() {
            return Err(CoreError::EmptyMonomial);
        }
        let mut iter = factors.iter().rev();
        let (mode, kind) = iter.next().unwrap();
        let mut acc = Self::ladder(basis, *mode, *kind)?;
        for (mode, kind) in iter {
            let f = Self::ladder(basis, *mode, *kind)?;
            acc = f.mul(&acc)?;
        }
        Ok(acc)
    }

    /// Diagonal 0/1 projector onto states with Σnᵢ ≤ cutoff − margin.
    pub fn interior_projector(basis: &Arc<FockBasis>, margin: u32) -> Result<Self, CoreError> {
        if margin > basis.total_cutoff() {
            return Err(CoreError::MarginTooLarge {
                margin,
                cutoff: basis.total_cutoff(),
            });
        }
        let limit = basis.total_cutoff() - margin;
        let entries = (0..basis.dim())
            .filter(|&i| basis.total(i) <= limit)
            .map(|i| ((i, i), Complex64::new(1.0, 0.0)))
            .collect();
        Ok(OperatorMatrix {
            basis: Arc::clone(basis),
            entries,
            hermitian: OnceLock::new(),
        })
    }

    pub fn basis(&self) -> &Arc<FockBasis> {
        &self.basis
    }

    pub fn nnz(&self) -> usize {
        self.entries.len()
    }

    pub fn entries(&self) -> impl Iterator<Item = (usize, usize, Complex64)> + '_ {
        self.entries.iter().map(|(&(r, c), &v)| (r, c, v))
    }

    pub fn entry(&self, row: usize, col: usize) -> Complex64 {
        self.entries
            .get(&(row, col))
            .copied()
            .unwrap_or(Complex64::ZERO)
    }

    fn check_basis(&self, other: &Self) -> Result<(), CoreError> {
        if self.basis.same_as(&other.basis) {
            Ok(())
        } else {
            Err(CoreError::BasisMismatch)
        }
    }

    pub fn add(&self, other: &Self) -> Result<Self, CoreError> {
        self.check_basis(other)?;
        let mut entries = self.entries.clone();
        for (&k, &v) in &other.entries {
            *entries.entry(k).or_insert(Complex64::ZERO) += v;
        }
        entries.retain(|_, v| *v != Complex64::ZERO);
        Ok(OperatorMatrix {
            basis: Arc::clone(&self.basis),
            entries,
            hermitian: OnceLock::new(),
        })
    }

    pub fn sub(&self, other: &Self) -> Result<Self, CoreError> {
        self.add(&other.scale(Complex64::new(-1.0, 0.0)))
    }

    pub fn scale(&self, factor: Complex64) -> Self {
        let entries = if factor == Complex64::ZERO {
            BTreeMap::new()
        } else {
            self.entries.iter().map(|(&k, &v)| (k, v * factor)).collect()
        };
        OperatorMatrix {
            basis: Arc::clone(&self.basis),
            entries,
            hermitian: OnceLock::new(),
        }
    }

    /// Matrix product `self * other`.
    pub fn mul(&self, other: &Self) -> Result<Self, CoreError> {
        self.check_basis(other)?;
        let mut entries: BTreeMap<(usize, usize), Complex64> = BTreeMap::new();
        for (&(i, k), &a) in &self.entries {
            let row_start = (k, 0usize);
            let row_end = (k, usize::MAX);
            for (&(_, j), &b) in other.entries.range(row_start..=row_end) {
                *entries.entry((i, j)).or_insert(Complex64::ZERO) += a * b;
            }
        }
        entries.retain(|_, v| *v != Complex64::ZERO);
        Ok(OperatorMatrix {
            basis: Arc::clone(&self.basis),
            entries,
            hermitian: OnceLock::new(),
        })
    }

    /// AB − BA.
    pub fn commutator(&self, other: &Self) -> Result<Self, CoreError> {
        self.mul(other)?.sub(&other.mul(self)?)
    }

    /// Conjugate transpose.
    pub fn adjoint(&self) -> Self {
        let entries = self
            .entries
            .iter()
            .map(|(&(r, c), &v)| ((c, r), v.conj()))
            .collect();
        OperatorMatrix {
            basis: Arc::clone(&self.basis),
            entries,
            hermitian: OnceLock::new(),
        }
    }

    /// Largest entry magnitude.
    pub fn max_norm(&self) -> f64 {
        self.entries.values().map(|v| v.norm()).fold(0.0, f64::max)
    }

    /// Hermiticity cache: true iff max|A − A†| ≤ 1e-12·max(1, ‖A‖_max).
    pub fn is_hermitian(&self) -> bool {
        *self.hermitian.get_or_init(|| {
            let res = self
                .sub(&self.adjoint())
                .expect("same basis")
                .max_norm();
            res <= tol::EXACT * tol::scale_of(&[self.max_norm()])
        })
    }

    /// Apply to a dense column vector.
    pub fn apply(&self, v: &DVector<Complex64>) -> DVector<Complex64> {
        let mut out = DVector::zeros(self.basis.dim());
        for (&(r, c), &a) in &self.entries {
            out[r] += a * v[c];
        }
        out
    }

    /// Apply to each column of a dense matrix.
    pub fn apply_matrix(&self, m: &DMatrix<Complex64>) -> DMatrix<Complex64> {
        let mut out = DMatrix::zeros(self.basis.dim(), m.ncols());
        for (&(r, c), &a) in &self.entries {
            for j in 0..m.ncols() {
                out[(r, j)] += a * m[(c, j)];
            }
        }
        out
    }

    /// Expectation value ⟨v|A|v⟩.
    pub fn expectation(&self, v: &DVector<Complex64>) -> Complex64 {
        v.dotc(&self.apply(v))
    }

    pub fn to_dense(&self) -> DMatrix<Complex64> {
        let mut m = DMatrix::zeros(self.basis.dim(), self.basis.dim());
        for (&(r, c), &v) in &self.entries {
            m[(r, c)] = v;
        }
        m
    }

    /// Diagonal as a real vector; returns the largest off-diagonal and
    /// imaginary-part magnitude alongside.
    pub fn real_diagonal(&self) -> (Vec<f64>, f64) {
        let mut diag = vec![0.0; self.basis.dim()];
        let mut off = 0.0_f64;
        for (&(r, c), &v) in &self.entries {
            if r == c {
                diag[r] = v.re;
                off = off.max(v.im.abs());
            } else {
                off = off.max(v.norm());
            }
        }
        (diag, off)
    }

    /// Debug dump as CSV rows `row,col,re,im`, sorted by (row, col).
    pub fn write_csv<W: Write>(&self, w: &mut W) -> std::io::Result<()> {
        writeln!(w, "row,col,re,im")?;
        for (&(r, c), &v) in &self.entries {
            writeln!(w, "{},{},{:.16e},{:.16e}", r, c, v.re, v.im)?;
        }
        Ok(())
    }
}
