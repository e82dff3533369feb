//! Adaptive Dormand–Prince 5(4) integration of the point-vortex equations.

use serde::{Deserialize, Serialize};

use super::{rhs_flat, PlanarState};
use crate::{Error, Result};

/// Integration stops once two vortices come closer than this.
pub const COLLISION_APPROACH: f64 = 1e-6;

const MAX_STEPS: usize = 10_000_000;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub enum Outcome {
    Completed,
    /// Two vortices came within [`COLLISION_APPROACH`] of each other at time `t`.
    CollisionApproach {
        t: f64,
        min_distance: f64,
    },
    /// The step size underflowed or the step budget ran out at time `t`.
    Stalled {
        t: f64,
    },
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Trajectory {
    pub circulations: Vec<f64>,
    /// Sample times, starting at 0.
    pub times: Vec<f64>,
    /// Flattened positions `(x1, y1, x2, y2, ...)` at each sample time.
    pub samples: Vec<Vec<f64>>,
    pub outcome: Outcome,
    pub accepted_steps: usize,
    pub rejected_steps: usize,
}

impl Trajectory {
    pub fn is_complete(&self) -> bool {
        self.outcome == Outcome::Completed
    }

    pub fn state(&self, k: usize) -> PlanarState {
        PlanarState::from_flat(&self.samples[k], &self.circulations)
    }

    pub fn last(&self) -> PlanarState {
        self.state(self.samples.len() - 1)
    }
}

const A: [[f64; 6]; 7] = [
    [0.0; 6],
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
// fifth-order weights minus embedded fourth-order weights
const E: [f64; 7] = [
    71.0 / 57600.0,
    0.0,
    -71.0 / 16695.0,
    71.0 / 1920.0,
    -17253.0 / 339200.0,
    22.0 / 525.0,
    -1.0 / 40.0,
];

fn min_distance(y: &[f64]) -> f64 {
    let n = y.len() / 2;
    let mut best = f64::INFINITY;
    for i in 0..n {
        for j in i + 1..n {
            let d = (y[2 * i] - y[2 * j]).hypot(y[2 * i + 1] - y[2 * j + 1]);
            best = best.min(d);
        }
    }
    best
}

/// Integrates from `state0` to `t_end`, recording `n_samples + 1` equally
/// spaced states (including the initial one). Steps are shortened to land
/// exactly on sample times. `tol` is used as both relative and absolute
/// local error tolerance.
pub fn integrate(state0: &PlanarState, t_end: f64, tol: f64, n_samples: usize) -> Result<Trajectory> {
    if !(t_end > 0.0 && t_end.is_finite()) {
        return Err(Error::Domain(format!("t_end = {t_end} must be positive")));
    }
    if !(tol > 0.0) || n_samples == 0 {
        return Err(Error::Domain(
            "tolerance and sample count must be positive".into(),
        ));
    }
    let gamma = state0.circulations.clone();
    let dim = 2 * gamma.len();
    let mut y = state0.flat();
    let mut t = 0.0;
    let mut traj = Trajectory {
        circulations: gamma.clone(),
        times: vec![0.0],
        samples: vec![y.clone()],
        outcome: Outcome::Completed,
        accepted_steps: 0,
        rejected_steps: 0,
    };

    let mut k = vec![vec![0.0; dim]; 7];
    let mut stage = vec![0.0; dim];
    let mut y_new = vec![0.0; dim];
    rhs_flat(&gamma, &y, &mut k[0]);

    let scale0: f64 = y.iter().fold(0.0f64, |a, v| a.max(v.abs())).max(1.0);
    let speed0: f64 = k[0].iter().fold(0.0f64, |a, v| a.max(v.abs())).max(1e-12);
    let mut h = (0.01 * scale0 / speed0).min(t_end / n_samples as f64);
    let mut next_sample = 1;

    while next_sample <= n_samples {
        if traj.accepted_steps + traj.rejected_steps >= MAX_STEPS {
            traj.outcome = Outcome::Stalled { t };
            return Ok(traj);
        }
        let target = t_end * next_sample as f64 / n_samples as f64;
        let lands = t + h >= target;
        let step = if lands { target - t } else { h };
        if step <= f64::EPSILON * t.abs().max(1.0) && !lands {
            traj.outcome = Outcome::Stalled { t };
            return Ok(traj);
        }

        for s in 1..7 {
            for d in 0..dim {
                let mut acc = y[d];
                for (j, kj) in k.iter().enumerate().take(s) {
                    acc += step * A[s][j] * kj[d];
                }
                stage[d] = acc;
            }
            rhs_flat(&gamma, &stage, &mut k[s]);
        }
        // stage 7 is evaluated at the fifth-order solution
        y_new.copy_from_slice(&stage);

        let mut err = 0.0f64;
        for d in 0..dim {
            let e: f64 = (0..7).map(|s| E[s] * k[s][d]).sum::<f64>() * step;
            let sc = tol + tol * y[d].abs().max(y_new[d].abs());
            err = f64::max(err, (e / sc).abs());
        }

        if err <= 1.0 {
            t = if lands { target } else { t + step };
            std::mem::swap(&mut y, &mut y_new);
            let last = k[6].clone();
            k[0].copy_from_slice(&last);
            traj.accepted_steps += 1;

            let dmin = min_distance(&y);
            if dmin < COLLISION_APPROACH {
                traj.outcome = Outcome::CollisionApproach {
                    t,
                    min_distance: dmin,
                };
                return Ok(traj);
            }
            if lands {
                traj.times.push(target);
                traj.samples.push(y.clone());
                next_sample += 1;
            }
            let fac = if err == 0.0 {
                5.0
            } else {
                (0.9 * err.powf(-0.2)).clamp(0.2, 5.0)
            };
            // a step shortened to hit a sample time says little about the next one
            h = if lands { h.max(step * fac) } else { step * fac };
        } else {
            traj.rejected_steps += 1;
            h = step * (0.9 * err.powf(-0.2)).clamp(0.1, 1.0);
        }
    }
    Ok(traj)
}
