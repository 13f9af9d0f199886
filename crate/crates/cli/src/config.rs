//! Scenario configuration: JSON schema, parsing and validation.
//!
//! A scenario selects a model (`mps` or `polarization`), its size
//! parameters and cutoff, Hamiltonian parameters, and the list of tasks
//! to run. Validation failures name the offending field.

use std::collections::BTreeMap;

use nalgebra::DMatrix;
use num_complex::Complex64;
use serde::Deserialize;

use pla_core::dynamics::MpsHamiltonianParams;
use pla_core::polarization::PolarizationHamiltonianParams;

/// Error with the field that failed validation.
#[derive(Debug)]
pub struct ValidationError {
    pub field: String,
    pub message: String,
}

impl std::fmt::Display for ValidationError {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "invalid field `{}`: {}", self.field, self.message)
    }
}

impl std::error::Error for ValidationError {}

fn invalid(field: &str, message: impl Into<String>) -> ValidationError {
    ValidationError {
        field: field.to_string(),
        message: message.into(),
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Model {
    Mps,
    Polarization,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Task {
    VerifyAlgebra,
    Decompose,
    Casimir,
    Hp,
    DiffRealization,
    TensorLift,
    Pscalar,
    Evolve,
    Bloch,
    Compare,
}

impl Task {
    pub fn name(&self) -> &'static str {
        match self {
            Task::VerifyAlgebra => "verify_algebra",
            Task::Decompose => "decompose",
            Task::Casimir => "casimir",
            Task::Hp => "hp",
            Task::DiffRealization => "diff_realization",
            Task::TensorLift => "tensor_lift",
            Task::Pscalar => "pscalar",
            Task::Evolve => "evolve",
            Task::Bloch => "bloch",
            Task::Compare => "compare",
        }
    }
}

#[derive(Debug, Clone, Deserialize)]
pub struct ComplexEntry {
    pub i: usize,
    pub j: usize,
    pub re: f64,
    #[serde(default)]
    pub im: f64,
}

#[derive(Debug, Clone, Deserialize)]
pub struct CouplingEntry {
    pub indices: Vec<usize>,
    pub re: f64,
    #[serde(default)]
    pub im: f64,
}

#[derive(Debug, Clone, Default, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct MpsHamiltonianConfig {
    #[serde(default)]
    pub omega0: f64,
    #[serde(default)]
    pub omega: Vec<ComplexEntry>,
    #[serde(default)]
    pub couplings: Vec<CouplingEntry>,
    #[serde(default)]
    pub delta_r1: f64,
    #[serde(default)]
    pub delta_const: f64,
}

#[derive(Debug, Clone, Default, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct PolarizationHamiltonianConfig {
    #[serde(default)]
    pub omega: Vec<f64>,
    #[serde(default)]
    pub exchange: Vec<ComplexEntry>,
    #[serde(default)]
    pub clusters: Vec<ComplexEntry>,
    #[serde(default)]
    pub drive: Option<[f64; 3]>,
}

#[derive(Debug, Clone, Deserialize)]
pub struct PowerEntry {
    pub i: usize,
    pub j: usize,
    pub kappa: u32,
}

#[derive(Debug, Clone, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct PscalarConfig {
    pub powers: Vec<PowerEntry>,
    #[serde(default = "default_moment_order")]
    pub max_order: u32,
}

fn default_moment_order() -> u32 {
    4
}

#[derive(Debug, Clone, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct EvolveConfig {
    /// mps: chain block to evolve in.
    #[serde(default)]
    pub k: u32,
    #[serde(default = "default_two_j")]
    pub two_j: u32,
    /// polarization: occupation numbers of the initial Fock state.
    #[serde(default)]
    pub initial_occupation: Option<Vec<u32>>,
    #[serde(default = "default_t_end")]
    pub t_end: f64,
    #[serde(default = "default_points")]
    pub points: usize,
}

fn default_two_j() -> u32 {
    2
}
fn default_t_end() -> f64 {
    10.0
}
fn default_points() -> usize {
    400
}

#[derive(Debug, Clone, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct BlochConfig {
    #[serde(default)]
    pub detuning: f64,
    pub coupling_re: f64,
    #[serde(default)]
    pub coupling_im: f64,
    #[serde(default = "default_two_j")]
    pub two_j: u32,
    #[serde(default = "default_t_end")]
    pub t_end: f64,
    #[serde(default = "default_bloch_points")]
    pub points: usize,
}

fn default_bloch_points() -> usize {
    8000
}

#[derive(Debug, Clone, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct CompareConfig {
    pub two_j: Vec<u32>,
    #[serde(default)]
    pub detuning: f64,
    #[serde(default = "default_coupling")]
    pub coupling_re: f64,
    #[serde(default)]
    pub coupling_im: f64,
    #[serde(default = "default_horizon")]
    pub horizon: f64,
}

fn default_coupling() -> f64 {
    1.0
}
fn default_horizon() -> f64 {
    1.0
}

/// Raw scenario as read from JSON.
#[derive(Debug, Clone, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ScenarioConfig {
    pub model: Model,
    #[serde(default)]
    pub n: Option<usize>,
    #[serde(default)]
    pub s: Option<usize>,
    #[serde(default)]
    pub n_spatial: Option<usize>,
    pub cutoff: u32,
    #[serde(default)]
    pub hamiltonian: Option<serde_json::Value>,
    pub run: Vec<Task>,
    #[serde(default)]
    pub output_dir: Option<String>,
    #[serde(default)]
    pub seed: u64,
    #[serde(default)]
    pub pscalar: Option<PscalarConfig>,
    #[serde(default)]
    pub evolve: Option<EvolveConfig>,
    #[serde(default)]
    pub bloch: Option<BlochConfig>,
    #[serde(default)]
    pub compare: Option<CompareConfig>,
}

impl ScenarioConfig {
    /// Cross-field validation; returns the offending field on failure.
    pub fn validate(&self) -> Result<(), ValidationError> {
        match self.model {
            Model::Mps => {
                let n = self.n.ok_or_else(|| invalid("n", "required for model mps"))?;
                let s = self.s.ok_or_else(|| invalid("s", "required for model mps"))?;
                if n < 1 {
                    return Err(invalid("n", "must be at least 1"));
                }
                if s < 1 {
                    return Err(invalid("s", "must be at least 1"));
                }
                if (self.cutoff as usize) < s {
                    return Err(invalid("cutoff", format!("must be at least s = {s}")));
                }
                for task in &self.run {
                    match task {
                        Task::Pscalar => {
                            return Err(invalid("run", "task pscalar requires model polarization"))
                        }
                        Task::Casimir | Task::Hp | Task::DiffRealization | Task::Bloch
                        | Task::Compare
                            if n != 1 =>
                        {
                            return Err(invalid(
                                "run",
                                format!("task {} requires n = 1", task.name()),
                            ))
                        }
                        Task::Decompose if n != 1 => {
                            return Err(invalid("run", "task decompose requires n = 1 for mps"))
                        }
                        Task::Evolve if n != 1 => {
                            return Err(invalid("run", "task evolve requires n = 1 for mps"))
                        }
                        Task::TensorLift if !(n == 2 && s == 2) => {
                            return Err(invalid("run", "task tensor_lift requires n = 2, s = 2"))
                        }
                        _ => {}
                    }
                }
                if let Some(cfg) = &self.compare {
                    if cfg.coupling_re == 0.0 && cfg.coupling_im == 0.0 {
                        return Err(invalid("compare.coupling_re", "coupling must be nonzero"));
                    }
                    let max_two_j = cfg.two_j.iter().copied().max().unwrap_or(0);
                    if max_two_j * s as u32 > self.cutoff {
                        return Err(invalid(
                            "compare.two_j",
                            format!("block (k=0, 2j={max_two_j}) needs cutoff >= {}", max_two_j * s as u32),
                        ));
                    }
                }
                if let Some(cfg) = &self.evolve {
                    if cfg.k >= s as u32 {
                        return Err(invalid("evolve.k", format!("must lie in [0, {})", s)));
                    }
                    if cfg.k + cfg.two_j * s as u32 > self.cutoff {
                        return Err(invalid(
                            "evolve.two_j",
                            "block exceeds the cutoff; enlarge cutoff or shrink 2j",
                        ));
                    }
                    if cfg.points < 2 {
                        return Err(invalid("evolve.points", "need at least 2 grid points"));
                    }
                }
                if let Some(cfg) = &self.bloch {
                    if cfg.points < 2 {
                        return Err(invalid("bloch.points", "need at least 2 grid points"));
                    }
                    if cfg.two_j * s as u32 > self.cutoff {
                        return Err(invalid("bloch.two_j", "block exceeds the cutoff"));
                    }
                }
            }
            Model::Polarization => {
                let n_spatial = self
                    .n_spatial
                    .ok_or_else(|| invalid("n_spatial", "required for model polarization"))?;
                if n_spatial < 1 {
                    return Err(invalid("n_spatial", "must be at least 1"));
                }
                for task in &self.run {
                    match task {
                        Task::VerifyAlgebra | Task::Decompose | Task::Pscalar | Task::Evolve => {}
                        other => {
                            return Err(invalid(
                                "run",
                                format!("task {} requires model mps", other.name()),
                            ))
                        }
                    }
                }
                if self.run.contains(&Task::Pscalar) {
                    let cfg = self
                        .pscalar
                        .as_ref()
                        .ok_or_else(|| invalid("pscalar", "required when task pscalar runs"))?;
                    if cfg.powers.is_empty() {
                        return Err(invalid("pscalar.powers", "cluster pattern must be nonzero"));
                    }
                    for p in &cfg.powers {
                        if p.i >= n_spatial || p.j >= n_spatial {
                            return Err(invalid(
                                "pscalar.powers",
                                format!("mode pair ({}, {}) out of range", p.i, p.j),
                            ));
                        }
                    }
                }
            }
        }
        for value in [self.evolve.as_ref().map(|c| c.t_end), self.bloch.as_ref().map(|c| c.t_end)]
            .into_iter()
            .flatten()
        {
            if !value.is_finite() || value <= 0.0 {
                return Err(invalid("t_end", "must be positive and finite"));
            }
        }
        Ok(())
    }

    /// Typed mps Hamiltonian parameters (hermitian completion of omega,
    /// symmetric collapse of the couplings).
    pub fn mps_hamiltonian(&self, n: usize, s: usize) -> Result<MpsHamiltonianParams, ValidationError> {
        let cfg: MpsHamiltonianConfig = match &self.hamiltonian {
            Some(value) => serde_json::from_value(value.clone())
                .map_err(|e| invalid("hamiltonian", e.to_string()))?,
            None => MpsHamiltonianConfig::default(),
        };
        let mut omega = DMatrix::<Complex64>::zeros(n, n);
        for entry in &cfg.omega {
            if entry.i < 1 || entry.i > n || entry.j < 1 || entry.j > n {
                return Err(invalid(
                    "hamiltonian.omega",
                    format!("mode pair ({}, {}) out of range 1..={n}", entry.i, entry.j),
                ));
            }
            let value = Complex64::new(entry.re, entry.im);
            let (r, c) = (entry.i - 1, entry.j - 1);
            if r == c && entry.im != 0.0 {
                return Err(invalid(
                    "hamiltonian.omega",
                    format!("diagonal entry ({}, {}) must be real", entry.i, entry.j),
                ));
            }
            if omega[(r, c)] != Complex64::ZERO && omega[(r, c)] != value {
                return Err(invalid(
                    "hamiltonian.omega",
                    format!("conflicting entries for ({}, {})", entry.i, entry.j),
                ));
            }
            omega[(r, c)] = value;
            omega[(c, r)] = value.conj();
        }
        let full = cfg.couplings.iter().map(|e| {
            (
                e.indices.clone(),
                Complex64::new(e.re, e.im),
            )
        });
        let couplings = MpsHamiltonianParams::couplings_from_full(full)
            .map_err(|e| invalid("hamiltonian.couplings", e.to_string()))?;
        for key in couplings.keys() {
            if key.len() != s || key.iter().any(|&m| m < 1 || m > n) {
                return Err(invalid(
                    "hamiltonian.couplings",
                    format!("indices {key:?} must be a rank-{s} multi-index over 1..={n}"),
                ));
            }
        }
        Ok(MpsHamiltonianParams {
            omega0: cfg.omega0,
            omega,
            couplings,
            delta_r1: cfg.delta_r1,
            delta_const: cfg.delta_const,
        })
    }

    /// Typed polarization Hamiltonian parameters.
    pub fn polarization_hamiltonian(
        &self,
        n_spatial: usize,
    ) -> Result<PolarizationHamiltonianParams, ValidationError> {
        let cfg: PolarizationHamiltonianConfig = match &self.hamiltonian {
            Some(value) => serde_json::from_value(value.clone())
                .map_err(|e| invalid("hamiltonian", e.to_string()))?,
            None => PolarizationHamiltonianConfig::default(),
        };
        let omega = if cfg.omega.is_empty() {
            vec![0.0; n_spatial]
        } else if cfg.omega.len() == n_spatial {
            cfg.omega.clone()
        } else {
            return Err(invalid(
                "hamiltonian.omega",
                format!("expected {n_spatial} frequencies, got {}", cfg.omega.len()),
            ));
        };
        let mut omega_exchange = BTreeMap::new();
        for e in &cfg.exchange {
            if e.i >= e.j || e.j >= n_spatial {
                return Err(invalid(
                    "hamiltonian.exchange",
                    format!("pair ({}, {}) must satisfy i < j < {n_spatial}", e.i, e.j),
                ));
            }
            omega_exchange.insert((e.i, e.j), Complex64::new(e.re, e.im));
        }
        let mut g_cluster = BTreeMap::new();
        for e in &cfg.clusters {
            if e.i >= e.j || e.j >= n_spatial {
                return Err(invalid(
                    "hamiltonian.clusters",
                    format!("pair ({}, {}) must satisfy i < j < {n_spatial}", e.i, e.j),
                ));
            }
            g_cluster.insert((e.i, e.j), Complex64::new(e.re, e.im));
        }
        Ok(PolarizationHamiltonianParams {
            omega,
            omega_exchange,
            g_cluster,
            drive: cfg.drive.unwrap_or([0.0; 3]),
        })
    }
}
