//! Task implementations: each task builds what it needs, writes its
//! artifacts under the output directory, and contributes summary rows.
//! File writes happen on the calling thread only; rayon parallelism is
//! internal to a task and results are merged in deterministic order.

use std::collections::BTreeMap;
use std::path::Path;

use nalgebra::DVector;
use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::Serialize;

use pla_core::blocks::{
    decompose_mps, decompose_polarization, mps_block, restrict, BlockLabel, BlockOperator,
    BlockSubspace,
};
use pla_core::dynamics::{
    compare_quantum_classical, evolve_block_exact, mean_field_bloch, second_order_residual,
    BlochParams, BlochState, MpsHamiltonianParams,
};
use pla_core::fock::OperatorMatrix;
use pla_core::pla::{
    casimir_check, differential_realization_check, extract_structure_polynomial,
    holstein_primakoff, u2_tensor_lift, verify_hp, verify_intertwining, PlaGenerators,
    PlaModelSpec, StructurePolynomial,
};
use pla_core::polarization::{
    build_polarization_hamiltonian, p_scalar_state, verify_p_scalar, PolarizationOps,
};
use pla_core::report::IdentityCheck;
use pla_core::tol;

use crate::artifacts::{write_json, write_timeseries, SummaryEntry};
use crate::config::{Model, ScenarioConfig, Task};

/// Any failure while executing a task (exit status 1 territory).
#[derive(Debug)]
pub struct TaskError(pub String);

impl std::fmt::Display for TaskError {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "{}", self.0)
    }
}

impl std::error::Error for TaskError {}

impl From<pla_core::CoreError> for TaskError {
    fn from(e: pla_core::CoreError) -> Self {
        TaskError(e.to_string())
    }
}

impl From<std::io::Error> for TaskError {
    fn from(e: std::io::Error) -> Self {
        TaskError(e.to_string())
    }
}

impl From<crate::config::ValidationError> for TaskError {
    fn from(e: crate::config::ValidationError) -> Self {
        TaskError(e.to_string())
    }
}

/// Run every task of the scenario and return the combined summary rows.
pub fn run_scenario(
    config: &ScenarioConfig,
    output_dir: &Path,
    verbose: bool,
) -> Result<Vec<SummaryEntry>, TaskError> {
    let mut summary = Vec::new();
    match config.model {
        Model::Mps => {
            let n = config.n.expect("validated");
            let s = config.s.expect("validated");
            let spec = PlaModelSpec::new(n, s)?;
            let gen = PlaGenerators::build(spec, config.cutoff)?;
            for task in &config.run {
                if verbose {
                    eprintln!("running task {}", task.name());
                }
                let entries = match task {
                    Task::VerifyAlgebra => verify_algebra_mps(config, &gen)?,
                    Task::Decompose => decompose_task_mps(output_dir, &gen)?,
                    Task::Casimir => casimir_task(output_dir, config, &gen)?,
                    Task::Hp => hp_task(&gen)?,
                    Task::DiffRealization => diff_realization_task(config, &gen)?,
                    Task::TensorLift => {
                        let report = u2_tensor_lift(&gen)?;
                        report
                            .checks
                            .iter()
                            .map(|c| SummaryEntry::from_identity("tensor_lift", c))
                            .collect()
                    }
                    Task::Pscalar => unreachable!("validated"),
                    Task::Evolve => evolve_task_mps(output_dir, config, &gen)?,
                    Task::Bloch => bloch_task(output_dir, config, &gen)?,
                    Task::Compare => compare_task(output_dir, config, &gen)?,
                };
                summary.extend(entries);
            }
        }
        Model::Polarization => {
            let n_spatial = config.n_spatial.expect("validated");
            let pol = PolarizationOps::build(n_spatial, config.cutoff)?;
            for task in &config.run {
                if verbose {
                    eprintln!("running task {}", task.name());
                }
                let entries = match task {
                    Task::VerifyAlgebra => pol
                        .verify(2)?
                        .checks
                        .iter()
                        .map(|c| SummaryEntry::from_identity("verify_algebra", c))
                        .collect(),
                    Task::Decompose => decompose_task_polarization(output_dir, &pol)?,
                    Task::Pscalar => pscalar_task(output_dir, config, &pol)?,
                    Task::Evolve => evolve_task_polarization(output_dir, config, &pol)?,
                    _ => unreachable!("validated"),
                };
                summary.extend(entries);
            }
        }
    }
    Ok(summary)
}

fn entry(task: &str, check: &str, residual: f64, tolerance: f64) -> SummaryEntry {
    SummaryEntry {
        task: task.to_string(),
        check: check.to_string(),
        residual,
        tolerance,
        pass: residual <= tolerance,
    }
}

/// mps algebra verification: the CR report plus a seeded random
/// Hamiltonian whose R₁ commutator and discrete-charge conservation are
/// checked directly.
fn verify_algebra_mps(
    config: &ScenarioConfig,
    gen: &PlaGenerators,
) -> Result<Vec<SummaryEntry>, TaskError> {
    let spec = gen.spec();
    let s = spec.s;
    let report = gen.verify(2 * s as u32)?;
    let mut entries: Vec<SummaryEntry> = report
        .checks
        .iter()
        .map(|c| SummaryEntry::from_identity("verify_algebra", c))
        .collect();

    // Randomized residual sampling: a random admissible parameter set.
    let mut rng = ChaCha8Rng::seed_from_u64(config.seed);
    let n = spec.n;
    let mut omega = nalgebra::DMatrix::<Complex64>::zeros(n, n);
    for i in 0..n {
        omega[(i, i)] = Complex64::new(rng.gen_range(-1.0..1.0), 0.0);
        for j in i + 1..n {
            let v = Complex64::new(rng.gen_range(-1.0..1.0), rng.gen_range(-1.0..1.0));
            omega[(i, j)] = v;
            omega[(j, i)] = v.conj();
        }
    }
    let mut couplings = BTreeMap::new();
    for idx in pla_core::pla::symmetric_multi_indices(n, s) {
        couplings.insert(
            idx,
            Complex64::new(rng.gen_range(-1.0..1.0), rng.gen_range(-1.0..1.0)),
        );
    }
    let params = MpsHamiltonianParams {
        omega0: rng.gen_range(-1.0..1.0),
        omega,
        couplings,
        delta_r1: 0.0,
        delta_const: 0.0,
    };
    let h = pla_core::dynamics::build_mps_hamiltonian(gen, &params)?;
    let p = OperatorMatrix::interior_projector(gen.basis(), s as u32 + 1)?;
    let res = h.commutator(gen.r1())?.mul(&p)?.max_norm();
    entries.push(entry(
        "verify_algebra",
        "random Hamiltonian: [H, R1] = 0",
        res,
        tol::EXACT * tol::scale_of(&[h.max_norm()]),
    ));

    let basis = gen.basis();
    let mut charge_violation = 0.0_f64;
    for (r, c, v) in h.entries() {
        let nr: u32 = basis.state(r)[1..].iter().sum();
        let nc: u32 = basis.state(c)[1..].iter().sum();
        if (nr as i64 - nc as i64).rem_euclid(s as i64) != 0 {
            charge_violation = charge_violation.max(v.norm());
        }
    }
    entries.push(entry(
        "verify_algebra",
        "random Hamiltonian: N mod s conserved",
        charge_violation,
        0.0,
    ));
    Ok(entries)
}

#[derive(Serialize)]
struct BlockRecord {
    label: BlockLabel,
    dimension: usize,
    reference_occupation: Vec<u32>,
    /// R₁ eigenvalue for chain blocks, p(p+1) for polarization domains.
    charge: f64,
}

fn decompose_task_mps(
    output_dir: &Path,
    gen: &PlaGenerators,
) -> Result<Vec<SummaryEntry>, TaskError> {
    let blocks = decompose_mps(gen)?;
    let records: Vec<BlockRecord> = blocks
        .iter()
        .map(|b| BlockRecord {
            label: b.label,
            dimension: b.dimension(),
            reference_occupation: b.reference_occupation(),
            charge: b.charge,
        })
        .collect();
    write_json(&output_dir.join("blocks.json"), &records)?;

    let basis = gen.basis();
    let s = gen.spec().s as u32;
    let covered: usize = blocks.iter().map(|b| b.dimension()).sum();
    let expected = (0..basis.dim())
        .filter(|&i| {
            let occ = basis.state(i);
            occ[1] + s * occ[0] <= basis.total_cutoff()
        })
        .count();

    let ops = [
        gen.e(1, 1).unwrap(),
        gen.e00(),
        gen.vplus_extremal(),
        gen.vminus_extremal(),
        gen.v0(),
        gen.r1(),
    ];
    let leakage = blocks
        .par_iter()
        .map(|b| b.invariance_leakage(&ops))
        .reduce(|| 0.0, f64::max);

    Ok(vec![
        entry(
            "decompose",
            "blocks partition the untruncated states",
            (covered as f64 - expected as f64).abs(),
            0.0,
        ),
        entry(
            "decompose",
            "blocks invariant under all generators",
            leakage,
            tol::BLOCK,
        ),
    ])
}

fn decompose_task_polarization(
    output_dir: &Path,
    pol: &PolarizationOps,
) -> Result<Vec<SummaryEntry>, TaskError> {
    let cutoff = pol.basis().total_cutoff();
    let mut records = Vec::new();
    let mut bookkeeping_gap = 0.0_f64;
    let mut su2_residual = 0.0_f64;
    let mut cross_shell_leak = 0.0_f64;
    let mut per_shell: Vec<Vec<BlockSubspace>> = Vec::new();

    for shell in 0..=cutoff {
        let blocks = decompose_polarization(pol, shell)?;
        let shell_dim = (0..pol.basis().dim())
            .filter(|&i| pol.basis().total(i) == shell)
            .count();
        let counted: usize = blocks.iter().map(|b| b.dimension()).sum();
        bookkeeping_gap = bookkeeping_gap.max((counted as f64 - shell_dim as f64).abs());

        for block in &blocks {
            records.push(BlockRecord {
                label: block.label,
                dimension: block.dimension(),
                reference_occupation: block.reference_occupation(),
                charge: block.charge,
            });
            // su(2) relations on each irreducible component.
            for comp in block.irreducible_components() {
                let reduce = |op: &OperatorMatrix| comp.adjoint() * op.apply_matrix(&comp);
                let p0 = reduce(pol.p0());
                let pp = reduce(pol.pplus());
                let pm = reduce(pol.pminus());
                let c1 = (&p0 * &pp - &pp * &p0) - &pp;
                let c2 = (&pp * &pm - &pm * &pp) - p0.map(|v| v * Complex64::new(2.0, 0.0));
                for m in [c1, c2] {
                    su2_residual = su2_residual
                        .max(m.iter().map(|v| v.norm()).fold(0.0, f64::max));
                }
            }
        }
        per_shell.push(blocks);
    }
    write_json(&output_dir.join("blocks.json"), &records)?;

    // Cluster operators map shell N blocks into shell N+2 blocks of the
    // same p.
    for shell in 0..cutoff.saturating_sub(1) {
        let (lower, upper) = {
            let (a, b) = per_shell.split_at(shell as usize + 2);
            (&a[shell as usize], &b[0])
        };
        for block in lower {
            let BlockLabel::Polarization { two_p, .. } = block.label else {
                continue;
            };
            for i in 0..pol.n_spatial() {
                for j in i + 1..pol.n_spatial() {
                    let image = pol.xdag(i, j).unwrap().apply_matrix(&block.columns);
                    let norm = image.iter().map(|v| v.norm()).fold(0.0, f64::max);
                    if norm < 1e-13 {
                        continue;
                    }
                    let target = upper
                        .iter()
                        .find(|b| matches!(b.label, BlockLabel::Polarization { two_p: tp, .. } if tp == two_p));
                    match target {
                        Some(t) => {
                            let reduced = t.columns.adjoint() * &image;
                            let leak = &image - &t.columns * reduced;
                            cross_shell_leak = cross_shell_leak
                                .max(leak.iter().map(|v| v.norm()).fold(0.0, f64::max));
                        }
                        None => cross_shell_leak = cross_shell_leak.max(norm),
                    }
                }
            }
        }
    }

    Ok(vec![
        entry(
            "decompose",
            "angular bookkeeping: sum (2p+1) d(p) = shell dimension",
            bookkeeping_gap,
            0.0,
        ),
        entry(
            "decompose",
            "su(2) relations on irreducible components",
            su2_residual,
            tol::BLOCK * tol::scale_of(&[cutoff as f64]),
        ),
        entry(
            "decompose",
            "cluster X+ conserves p across shells",
            cross_shell_leak,
            tol::BLOCK * tol::scale_of(&[cutoff as f64]),
        ),
    ])
}

/// Extract the structure polynomial from the largest well-posed block at
/// the configured cutoff, or from an enlarged auxiliary realization when
/// the cutoff admits none.
fn extract_q(gen: &PlaGenerators) -> Result<StructurePolynomial, TaskError> {
    let s = gen.spec().s;
    let cutoff = gen.basis().total_cutoff();
    let best_two_j = cutoff / s as u32;
    if best_two_j > s as u32 {
        let block = mps_block(gen, 0, best_two_j)?.expect("fits by construction");
        return Ok(extract_structure_polynomial(gen, &block)?);
    }
    let aux_cutoff = (s * (s + 1)) as u32;
    let aux = PlaGenerators::build(gen.spec(), aux_cutoff)?;
    let block = mps_block(&aux, 0, s as u32 + 1)?.expect("fits by construction");
    Ok(extract_structure_polynomial(&aux, &block)?)
}

fn casimir_task(
    output_dir: &Path,
    _config: &ScenarioConfig,
    gen: &PlaGenerators,
) -> Result<Vec<SummaryEntry>, TaskError> {
    let q = extract_q(gen)?;
    write_json(&output_dir.join("structure_poly.json"), &q)?;
    let report = casimir_check(gen, &q, gen.spec().s as u32 + 1)?;
    let mut entries: Vec<SummaryEntry> = report
        .checks
        .iter()
        .map(|c| SummaryEntry::from_identity("casimir", c))
        .collect();
    entries.push(entry(
        "casimir",
        "extracted degree equals s+1",
        (q.degree() as f64 - (gen.spec().s + 1) as f64).abs(),
        0.0,
    ));
    Ok(entries)
}

fn hp_task(gen: &PlaGenerators) -> Result<Vec<SummaryEntry>, TaskError> {
    let blocks = decompose_mps(gen)?;
    let reports: Vec<(BlockLabel, Vec<IdentityCheck>)> = blocks
        .par_iter()
        .map(|block| {
            let hp = holstein_primakoff(gen, block)?;
            Ok((block.label, verify_hp(&hp).checks))
        })
        .collect::<Result<_, pla_core::CoreError>>()?;
    let mut entries = Vec::new();
    for (label, checks) in reports {
        let BlockLabel::Mps { k, two_j } = label else {
            continue;
        };
        for c in checks {
            entries.push(entry(
                "hp",
                &format!("block (k={k}, 2j={two_j}): {}", c.identity_name),
                c.max_residual,
                c.tolerance,
            ));
        }
    }
    Ok(entries)
}

fn diff_realization_task(
    _config: &ScenarioConfig,
    gen: &PlaGenerators,
) -> Result<Vec<SummaryEntry>, TaskError> {
    let q = extract_q(gen)?;
    let max_degree = (gen.spec().s + 2).max(10);
    let report = differential_realization_check(&q, q.casimir_value, max_degree)?;
    let mut entries: Vec<SummaryEntry> = report
        .checks
        .iter()
        .map(|c| SummaryEntry::from_identity("diff_realization", c))
        .collect();
    // Intertwine with the source block when it fits this cutoff.
    let s = gen.spec().s as u32;
    let two_j = gen.basis().total_cutoff() / s;
    if let Some(block) = mps_block(gen, 0, two_j)? {
        if block.dimension() >= gen.spec().s + 2 {
            let q_here = extract_structure_polynomial(gen, &block)?;
            let check = verify_intertwining(gen, &block, &q_here)?;
            entries.push(SummaryEntry::from_identity("diff_realization", &check));
        }
    }
    Ok(entries)
}

fn pscalar_task(
    output_dir: &Path,
    config: &ScenarioConfig,
    pol: &PolarizationOps,
) -> Result<Vec<SummaryEntry>, TaskError> {
    let cfg = config.pscalar.as_ref().expect("validated");
    let mut powers = BTreeMap::new();
    for p in &cfg.powers {
        *powers.entry((p.i, p.j)).or_insert(0) += p.kappa;
    }
    let state = p_scalar_state(pol, &powers)?;
    let report = verify_p_scalar(pol, &state, cfg.max_order)?;
    write_json(&output_dir.join("moments.json"), &report.moments)?;

    // State dump as CSV (index, re, im).
    let mut csv = Vec::new();
    use std::io::Write;
    writeln!(csv, "index,re,im")?;
    for (i, v) in state.iter().enumerate() {
        if v.norm() > 0.0 {
            writeln!(csv, "{i},{:.16e},{:.16e}", v.re, v.im)?;
        }
    }
    std::fs::write(output_dir.join("state_pscalar.csv"), csv)?;

    Ok(vec![
        entry(
            "pscalar",
            "all mixed moments vanish",
            report.max_abs,
            report.tolerance,
        ),
        entry(
            "pscalar",
            "state has P² expectation zero",
            pol.p2().expectation(&state).norm(),
            tol::BLOCK,
        ),
    ])
}

fn evolve_task_mps(
    output_dir: &Path,
    config: &ScenarioConfig,
    gen: &PlaGenerators,
) -> Result<Vec<SummaryEntry>, TaskError> {
    let cfg = config.evolve.clone().unwrap_or_else(|| {
        serde_json::from_value(serde_json::json!({})).expect("defaults")
    });
    let spec = gen.spec();
    let params = config.mps_hamiltonian(spec.n, spec.s)?;
    let h = pla_core::dynamics::build_mps_hamiltonian(gen, &params)?;
    let block = mps_block(gen, cfg.k, cfg.two_j)?
        .ok_or_else(|| TaskError(format!("block (k={}, 2j={}) exceeds cutoff", cfg.k, cfg.two_j)))?;
    let hb = restrict(&h, &block)?;
    let mut psi0 = DVector::zeros(block.dimension());
    psi0[block.reference_index] = Complex64::new(1.0, 0.0);
    let times: Vec<f64> = (0..cfg.points)
        .map(|i| cfg.t_end * i as f64 / (cfg.points - 1) as f64)
        .collect();
    let mut result = evolve_block_exact(&hb, &psi0, &times)?;

    let v0b = restrict(gen.v0(), &block)?;
    let vpb = restrict(gen.vplus_extremal(), &block)?;
    let r1b = restrict(gen.r1(), &block)?;
    let r1_drift = result.track_constant("R1", &r1b.matrix);

    let v0_series = result.expectation_series(&v0b.matrix);
    let vp_series = result.expectation_series(&vpb.matrix);
    let energy_series = result.expectation_series(&result.h_block.clone());
    let norm_series: Vec<f64> = result.states.iter().map(|s| s.norm()).collect();
    write_timeseries(
        &output_dir.join("timeseries_evolve.csv"),
        &["v0", "vplus_re", "vplus_im", "energy", "norm"],
        &times,
        &[
            v0_series.iter().map(|v| v.re).collect(),
            vp_series.iter().map(|v| v.re).collect(),
            vp_series.iter().map(|v| v.im).collect(),
            energy_series.iter().map(|v| v.re).collect(),
            norm_series,
        ],
    )?;

    Ok(vec![
        entry("evolve", "unitarity: norm drift", result.norm_drift, tol::NORM_DRIFT),
        entry("evolve", "energy conservation", result.energy_drift, tol::NORM_DRIFT),
        entry("evolve", "R1 conservation", r1_drift, tol::CONSERVATION),
    ])
}

fn evolve_task_polarization(
    output_dir: &Path,
    config: &ScenarioConfig,
    pol: &PolarizationOps,
) -> Result<Vec<SummaryEntry>, TaskError> {
    let cfg = config.evolve.clone().unwrap_or_else(|| {
        serde_json::from_value(serde_json::json!({})).expect("defaults")
    });
    let params = config.polarization_hamiltonian(pol.n_spatial())?;
    let h = build_polarization_hamiltonian(pol, &params)?;
    let full = BlockOperator {
        matrix: h.to_dense(),
        leakage: 0.0,
        invariant: true,
    };
    let basis = pol.basis();
    let psi0 = match &cfg.initial_occupation {
        Some(occ) => {
            let idx = basis.index_of(occ).ok_or_else(|| {
                TaskError(format!("initial occupation {occ:?} not within the cutoff"))
            })?;
            basis.unit_vector(idx)
        }
        None => basis.unit_vector(0),
    };
    let times: Vec<f64> = (0..cfg.points)
        .map(|i| cfg.t_end * i as f64 / (cfg.points - 1) as f64)
        .collect();
    let mut result = evolve_block_exact(&full, &psi0, &times)?;
    let p2_drift = result.track_constant("P2", &pol.p2().to_dense());

    let p0_series = result.expectation_series(&pol.p0().to_dense());
    let p2_series = result.expectation_series(&pol.p2().to_dense());
    let energy_series = result.expectation_series(&result.h_block.clone());
    let norm_series: Vec<f64> = result.states.iter().map(|s| s.norm()).collect();
    write_timeseries(
        &output_dir.join("timeseries_evolve.csv"),
        &["p0", "p_squared", "energy", "norm"],
        &times,
        &[
            p0_series.iter().map(|v| v.re).collect(),
            p2_series.iter().map(|v| v.re).collect(),
            energy_series.iter().map(|v| v.re).collect(),
            norm_series,
        ],
    )?;

    Ok(vec![
        entry("evolve", "unitarity: norm drift", result.norm_drift, tol::NORM_DRIFT),
        entry("evolve", "energy conservation", result.energy_drift, tol::NORM_DRIFT),
        entry("evolve", "P² conservation", p2_drift, tol::CONSERVATION),
    ])
}

fn bloch_task(
    output_dir: &Path,
    config: &ScenarioConfig,
    gen: &PlaGenerators,
) -> Result<Vec<SummaryEntry>, TaskError> {
    let cfg = config
        .bloch
        .as_ref()
        .ok_or_else(|| TaskError("bloch section required for task bloch".into()))?;
    let block = mps_block(gen, 0, cfg.two_j)?
        .ok_or_else(|| TaskError(format!("block (k=0, 2j={}) exceeds cutoff", cfg.two_j)))?;
    let q = extract_structure_polynomial(gen, &block)?;
    let params = BlochParams {
        detuning: cfg.detuning,
        coupling: Complex64::new(cfg.coupling_re, cfg.coupling_im),
    };
    let init = BlochState::new(q.r0, 0.0, 0.0, q.r1, &params);
    let times: Vec<f64> = (0..cfg.points)
        .map(|i| cfg.t_end * i as f64 / (cfg.points - 1) as f64)
        .collect();
    let traj = mean_field_bloch(&q, &params, &init, &times)?;
    write_timeseries(
        &output_dir.join("timeseries_bloch.csv"),
        &["v0", "vplus_re", "vplus_im"],
        &traj.times,
        &[traj.v0.clone(), traj.v_plus_re.clone(), traj.v_plus_im.clone()],
    )?;
    let second = second_order_residual(&traj, &q, &params)?;
    Ok(vec![
        entry(
            "bloch",
            "first integral: energy",
            traj.energy_drift,
            tol::CLASSICAL_INTEGRAL,
        ),
        entry(
            "bloch",
            "first integral: |v+|^2 - F(v0)",
            traj.invariant_drift,
            tol::CLASSICAL_INTEGRAL,
        ),
        SummaryEntry::from_identity("bloch", &second),
    ])
}

fn compare_task(
    output_dir: &Path,
    config: &ScenarioConfig,
    gen: &PlaGenerators,
) -> Result<Vec<SummaryEntry>, TaskError> {
    let cfg = config
        .compare
        .as_ref()
        .ok_or_else(|| TaskError("compare section required for task compare".into()))?;
    let params = BlochParams {
        detuning: cfg.detuning,
        coupling: Complex64::new(cfg.coupling_re, cfg.coupling_im),
    };
    // Parallel over blocks; rows merged back in input order.
    let rows: Vec<_> = cfg
        .two_j
        .par_iter()
        .map(|&two_j| {
            compare_quantum_classical(gen, &params, &[two_j], cfg.horizon)
                .map(|mut v| v.pop().expect("one row per block"))
        })
        .collect::<Result<_, pla_core::CoreError>>()?;
    write_json(&output_dir.join("deviation.json"), &rows)?;

    // Trend check when the list is ascending in 2j.
    let ascending = cfg.two_j.windows(2).all(|w| w[0] < w[1]);
    let mut worst_violation = 0.0_f64;
    if ascending && rows.len() >= 2 {
        for w in rows.windows(2) {
            worst_violation = worst_violation.max((w[1].deviation - w[0].deviation).max(0.0));
        }
    }
    Ok(vec![entry(
        "compare",
        "normalized deviation decreases with 2j",
        worst_violation,
        0.0,
    )])
}
