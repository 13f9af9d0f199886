//! Adaptive Dormand-Prince 4(5) integrator with output at caller-chosen
//! times. Steps are clamped to land exactly on each requested time, so
//! no interpolation is involved.

use crate::error::CoreError;

/// Integrator options; defaults follow the crate-wide dynamics settings
/// (absolute 1e-10, relative 1e-8).
#[derive(Debug, Clone, Copy)]
pub struct OdeOptions {
    pub atol: f64,
    pub rtol: f64,
    pub max_step_growth: f64,
}

impl Default for OdeOptions {
    fn default() -> Self {
        OdeOptions {
            atol: 1e-10,
            rtol: 1e-8,
            max_step_growth: 5.0,
        }
    }
}

const STAGES: usize = 7;
const A: [[f64; 6]; STAGES] = [
    [0.0, 0.0, 0.0, 0.0, 0.0, 0.0],
    [1.0 / 5.0, 0.0, 0.0, 0.0, 0.0, 0.0],
    [3.0 / 40.0, 9.0 / 40.0, 0.0, 0.0, 0.0, 0.0],
    [44.0 / 45.0, -56.0 / 15.0, 32.0 / 9.0, 0.0, 0.0, 0.0],
    [
        19372.0 / 6561.0,
        -25360.0 / 2187.0,
        64448.0 / 6561.0,
        -212.0 / 729.0,
        0.0,
        0.0,
    ],
    [
        9017.0 / 3168.0,
        -355.0 / 33.0,
        46732.0 / 5247.0,
        49.0 / 176.0,
        -5103.0 / 18656.0,
        0.0,
    ],
    [
        35.0 / 384.0,
        0.0,
        500.0 / 1113.0,
        125.0 / 192.0,
        -2187.0 / 6784.0,
        11.0 / 84.0,
    ],
];
const B5: [f64; STAGES] = [
    35.0 / 384.0,
    0.0,
    500.0 / 1113.0,
    125.0 / 192.0,
    -2187.0 / 6784.0,
    11.0 / 84.0,
    0.0,
];
const B4: [f64; STAGES] = [
    5179.0 / 57600.0,
    0.0,
    7571.0 / 16695.0,
    393.0 / 640.0,
    -92097.0 / 339200.0,
    187.0 / 2100.0,
    1.0 / 40.0,
];
const C: [f64; STAGES] = [0.0, 1.0 / 5.0, 3.0 / 10.0, 4.0 / 5.0, 8.0 / 9.0, 1.0, 1.0];

/// Integrate y' = f(t, y) and return the state at each requested time.
/// `times` must be strictly increasing; `times[0]` carries `y0`.
pub fn integrate_at<F>(
    mut f: F,
    y0: &[f64],
    times: &[f64],
    opts: OdeOptions,
) -> Result<Vec<Vec<f64>>, CoreError>
where
    F: FnMut(f64, &[f64], &mut [f64]),
{
    if times.is_empty() {
        return Ok(Vec::new());
    }
    let n = y0.len();
    let span = (times[times.len() - 1] - times[0]).abs().max(1e-30);
    let h_min = span * 1e-14;

    let mut out = Vec::with_capacity(times.len());
    out.push(y0.to_vec());

    let mut y = y0.to_vec();
    let mut t = times[0];
    let mut k = vec![vec![0.0; n]; STAGES];
    let mut h = span / 100.0;

    let mut stage_y = vec![0.0; n];
    let mut y5 = vec![0.0; n];
    let mut y4 = vec![0.0; n];

    for &target in &times[1..] {
        if target <= t {
            return Err(CoreError::InvalidArgument(
                "output times must be strictly increasing".into(),
            ));
        }
        while t < target {
            let mut step = h.min(target - t);
            loop {
                // Stage evaluations.
                f(t, &y, &mut k[0]);
                for stage in 1..STAGES {
                    for i in 0..n {
                        let mut acc = 0.0;
                        for (prev, krow) in k.iter().enumerate().take(stage) {
                            acc += A[stage][prev] * krow[i];
                        }
                        stage_y[i] = y[i] + step * acc;
                    }
                    f(t + step * C[stage], &stage_y, &mut k[stage]);
                }
                for i in 0..n {
                    let mut acc5 = 0.0;
                    let mut acc4 = 0.0;
                    for (stage, krow) in k.iter().enumerate() {
                        acc5 += B5[stage] * krow[i];
                        acc4 += B4[stage] * krow[i];
                    }
                    y5[i] = y[i] + step * acc5;
                    y4[i] = y[i] + step * acc4;
                }

                // Scaled RMS error against the embedded 4th-order result.
                let mut err_sq = 0.0;
                for i in 0..n {
                    let scale = opts.atol + opts.rtol * y[i].abs().max(y5[i].abs());
                    let e = (y5[i] - y4[i]) / scale;
                    err_sq += e * e;
                }
                let err = (err_sq / n as f64).sqrt();

                if err.is_finite() && err <= 1.0 {
                    t += step;
                    y.copy_from_slice(&y5);
                    let growth = if err == 0.0 {
                        opts.max_step_growth
                    } else {
                        (0.9 * err.powf(-0.2)).min(opts.max_step_growth)
                    };
                    h = step * growth.max(0.2);
                    break;
                }
                // Overflowed stages count as arbitrarily large error.
                let shrink = if err.is_finite() {
                    (0.9 * err.powf(-0.2)).clamp(0.1, 0.9)
                } else {
                    0.1
                };
                step *= shrink;
                if !step.is_finite() || step < h_min {
                    return Err(CoreError::IntegrationFailure { t_reached: t });
                }
            }
        }
        out.push(y.clone());
    }
    Ok(out)
}
