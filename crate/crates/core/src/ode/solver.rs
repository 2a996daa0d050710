use serde::{Deserialize, Serialize};

use super::OdeError;
use crate::reactions::ReactionSystem;

/// Pre-clip values below `-CLIP_TOL` are counted as genuine negativity
/// violations; smaller excursions are ordinary round-off.
pub const CLIP_TOL: f64 = 1e-10;

/// A reaction-system initial value problem.
#[derive(Debug, Clone)]
pub struct OdeProblem {
    pub system: ReactionSystem,
    pub y0: Vec<f64>,
    pub t_span: (f64, f64),
}

impl OdeProblem {
    pub fn new(
        system: ReactionSystem,
        y0: Vec<f64>,
        t_span: (f64, f64),
    ) -> Result<Self, OdeError> {
        if !(t_span.1 > t_span.0) || !t_span.0.is_finite() || !t_span.1.is_finite() {
            return Err(OdeError::BadSpan(t_span.0, t_span.1));
        }
        if y0.len() != system.species().len() {
            return Err(OdeError::DimensionMismatch {
                expected: system.species().len(),
                got: y0.len(),
            });
        }
        if y0.iter().any(|v| !v.is_finite() || *v < 0.0) {
            return Err(OdeError::BadInitialState);
        }
        Ok(Self { system, y0, t_span })
    }
}

/// Integrator selection.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(tag = "method", rename_all = "snake_case")]
pub enum SolverConfig {
    /// Classic fixed-step 4th-order Runge–Kutta. The step is shrunk slightly
    /// if needed so an integer number of steps lands exactly on `t1`.
    FixedRk4 { step: f64 },
    /// Dormand–Prince 5(4) embedded pair with per-component error control.
    Adaptive { abs_tol: f64, rel_tol: f64 },
}

impl Default for SolverConfig {
    fn default() -> Self {
        Self::Adaptive { abs_tol: 1e-8, rel_tol: 1e-8 }
    }
}

/// Numerical solution on the integrator's grid.
#[derive(Debug, Clone)]
pub struct Solution {
    pub times: Vec<f64>,
    /// One state vector per time point.
    pub states: Vec<Vec<f64>>,
    pub steps_taken: usize,
    pub rejected_steps: usize,
    /// Components clipped to zero from below `-CLIP_TOL`.
    pub negativity_clips: usize,
}

impl Solution {
    pub fn n_species(&self) -> usize {
        self.states.first().map_or(0, Vec::len)
    }

    pub fn final_state(&self) -> &[f64] {
        self.states.last().expect("solutions hold at least the initial state")
    }

    /// State at time `t`, linearly interpolated between grid points. Exact
    /// (no interpolation) when `t` coincides with a grid point.
    pub fn sample(&self, t: f64) -> Result<Vec<f64>, OdeError> {
        let (t0, t1) = (self.times[0], *self.times.last().unwrap());
        let eps = 1e-9 * (1.0 + t0.abs().max(t1.abs()));
        if t < t0 - eps || t > t1 + eps {
            return Err(OdeError::OutsideSpan(t, t0, t1));
        }
        let t = t.clamp(t0, t1);
        // binary search for the bracketing interval
        let mut hi = match self.times.binary_search_by(|probe| probe.partial_cmp(&t).unwrap()) {
            Ok(i) => return Ok(self.states[i].clone()),
            Err(i) => i,
        };
        if hi == 0 {
            hi = 1;
        }
        if hi >= self.times.len() {
            hi = self.times.len() - 1;
        }
        let lo = hi - 1;
        let (ta, tb) = (self.times[lo], self.times[hi]);
        if (t - ta).abs() <= eps {
            return Ok(self.states[lo].clone());
        }
        if (t - tb).abs() <= eps {
            return Ok(self.states[hi].clone());
        }
        let w = (t - ta) / (tb - ta);
        Ok(self.states[lo]
            .iter()
            .zip(&self.states[hi])
            .map(|(a, b)| a + w * (b - a))
            .collect())
    }
}

/// Integrates a reaction-system ODE.
pub fn integrate(problem: &OdeProblem, config: &SolverConfig) -> Result<Solution, OdeError> {
    match *config {
        SolverConfig::FixedRk4 { step } => {
            if !(step > 0.0) || !step.is_finite() {
                return Err(OdeError::BadConfig(step));
            }
            fixed_rk4(problem, step)
        }
        SolverConfig::Adaptive { abs_tol, rel_tol } => {
            if !(abs_tol > 0.0) || !(rel_tol > 0.0) {
                return Err(OdeError::BadConfig(abs_tol.min(rel_tol)));
            }
            dormand_prince(problem, abs_tol, rel_tol)
        }
    }
}

fn clip_state(y: &mut [f64], clips: &mut usize) {
    for v in y {
        if *v < 0.0 {
            if *v < -CLIP_TOL {
                *clips += 1;
            }
            *v = 0.0;
        }
    }
}

fn check_finite(y: &[f64], t: f64) -> Result<(), OdeError> {
    if y.iter().any(|v| !v.is_finite()) {
        return Err(OdeError::Diverged(t));
    }
    Ok(())
}

fn fixed_rk4(problem: &OdeProblem, step: f64) -> Result<Solution, OdeError> {
    let (t0, t1) = problem.t_span;
    let span = t1 - t0;
    let n_steps = ((span / step) - 1e-9).ceil().max(1.0) as usize;
    let h = span / n_steps as f64;
    let dim = problem.y0.len();
    let sys = &problem.system;

    let mut y = problem.y0.clone();
    let mut times = Vec::with_capacity(n_steps + 1);
    let mut states = Vec::with_capacity(n_steps + 1);
    times.push(t0);
    states.push(y.clone());

    let mut k1 = vec![0.0; dim];
    let mut k2 = vec![0.0; dim];
    let mut k3 = vec![0.0; dim];
    let mut k4 = vec![0.0; dim];
    let mut tmp = vec![0.0; dim];
    let mut clips = 0;

    for i in 0..n_steps {
        let t = t0 + h * i as f64;
        sys.rhs_into(&y, &mut k1);
        for j in 0..dim {
            tmp[j] = y[j] + 0.5 * h * k1[j];
        }
        sys.rhs_into(&tmp, &mut k2);
        for j in 0..dim {
            tmp[j] = y[j] + 0.5 * h * k2[j];
        }
        sys.rhs_into(&tmp, &mut k3);
        for j in 0..dim {
            tmp[j] = y[j] + h * k3[j];
        }
        sys.rhs_into(&tmp, &mut k4);
        for j in 0..dim {
            y[j] += h / 6.0 * (k1[j] + 2.0 * k2[j] + 2.0 * k3[j] + k4[j]);
        }
        clip_state(&mut y, &mut clips);
        check_finite(&y, t + h)?;
        times.push(t0 + h * (i + 1) as f64);
        states.push(y.clone());
    }
    Ok(Solution {
        times,
        states,
        steps_taken: n_steps,
        rejected_steps: 0,
        negativity_clips: clips,
    })
}

// Dormand–Prince 5(4) Butcher tableau (stage times omitted: autonomous RHS).
const DP_A: [[f64; 6]; 7] = [
    [0.0, 0.0, 0.0, 0.0, 0.0, 0.0],
    [1.0 / 5.0, 0.0, 0.0, 0.0, 0.0, 0.0],
    [3.0 / 40.0, 9.0 / 40.0, 0.0, 0.0, 0.0, 0.0],
    [44.0 / 45.0, -56.0 / 15.0, 32.0 / 9.0, 0.0, 0.0, 0.0],
    [19372.0 / 6561.0, -25360.0 / 2187.0, 64448.0 / 6561.0, -212.0 / 729.0, 0.0, 0.0],
    [9017.0 / 3168.0, -355.0 / 33.0, 46732.0 / 5247.0, 49.0 / 176.0, -5103.0 / 18656.0, 0.0],
    [35.0 / 384.0, 0.0, 500.0 / 1113.0, 125.0 / 192.0, -2187.0 / 6784.0, 11.0 / 84.0],
];
const DP_B5: [f64; 7] =
    [35.0 / 384.0, 0.0, 500.0 / 1113.0, 125.0 / 192.0, -2187.0 / 6784.0, 11.0 / 84.0, 0.0];
const DP_B4: [f64; 7] = [
    5179.0 / 57600.0,
    0.0,
    7571.0 / 16695.0,
    393.0 / 640.0,
    -92097.0 / 339200.0,
    187.0 / 2100.0,
    1.0 / 40.0,
];

fn dormand_prince(problem: &OdeProblem, abs_tol: f64, rel_tol: f64) -> Result<Solution, OdeError> {
    let (t0, t1) = problem.t_span;
    let dim = problem.y0.len();
    let sys = &problem.system;

    let mut t = t0;
    let mut y = problem.y0.clone();
    let mut times = vec![t0];
    let mut states = vec![y.clone()];
    let mut clips = 0;
    let mut steps = 0;
    let mut rejected = 0;

    let mut k: Vec<Vec<f64>> = vec![vec![0.0; dim]; 7];
    let mut tmp = vec![0.0; dim];
    let mut y5 = vec![0.0; dim];

    let span = t1 - t0;
    let h_min = span * 1e-14;
    let mut h = (span / 100.0).min(0.1).max(h_min);
    let max_steps = 10_000_000;

    while t < t1 {
        if steps + rejected > max_steps {
            return Err(OdeError::StepUnderflow(t, h));
        }
        h = h.min(t1 - t);
        // the RHS is autonomous, so the stage times DP_C are not needed
        for stage in 0..7 {
            for j in 0..dim {
                let mut acc = y[j];
                for (s, k_s) in k.iter().enumerate().take(stage) {
                    acc += h * DP_A[stage][s] * k_s[j];
                }
                tmp[j] = acc;
            }
            sys.rhs_into(&tmp, &mut k[stage]);
        }
        let mut err_norm = 0.0_f64;
        for j in 0..dim {
            let mut v5 = y[j];
            let mut v4 = y[j];
            for s in 0..7 {
                v5 += h * DP_B5[s] * k[s][j];
                v4 += h * DP_B4[s] * k[s][j];
            }
            y5[j] = v5;
            let scale = abs_tol + rel_tol * y[j].abs().max(v5.abs());
            let e = (v5 - v4) / scale;
            err_norm += e * e;
        }
        err_norm = (err_norm / dim as f64).sqrt();
        if !err_norm.is_finite() {
            return Err(OdeError::Diverged(t));
        }

        if err_norm <= 1.0 {
            t += h;
            y.copy_from_slice(&y5);
            clip_state(&mut y, &mut clips);
            check_finite(&y, t)?;
            times.push(t);
            states.push(y.clone());
            steps += 1;
        } else {
            rejected += 1;
        }
        let factor = if err_norm == 0.0 {
            5.0
        } else {
            (0.9 * err_norm.powf(-0.2)).clamp(0.2, 5.0)
        };
        h *= factor;
        if h < h_min {
            return Err(OdeError::StepUnderflow(t, h));
        }
    }
    Ok(Solution { times, states, steps_taken: steps, rejected_steps: rejected, negativity_clips: clips })
}
