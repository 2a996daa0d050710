use nalgebra::{Matrix3, RowVector3, Vector3};

use super::{grid_spacing, DerivativeMethod, LearnError, SeriesData};

/// Second-order derivative estimate on a uniform grid.
///
/// Interior points use central differences `(y[i+1] − y[i−1])/(2Δ)`; the two
/// ends use the second-order one-sided three-point stencils, so the output
/// has the same length as the input.
pub fn central_difference(times: &[f64], y: &[f64]) -> Result<Vec<f64>, LearnError> {
    if times.len() < 3 {
        return Err(LearnError::TooFewSamples(times.len()));
    }
    if y.len() != times.len() {
        return Err(LearnError::RaggedSeries(format!(
            "{} values against {} times",
            y.len(),
            times.len()
        )));
    }
    let dt = grid_spacing(times)?;
    let n = y.len();
    let mut d = vec![0.0; n];
    d[0] = (-3.0 * y[0] + 4.0 * y[1] - y[2]) / (2.0 * dt);
    for i in 1..n - 1 {
        d[i] = (y[i + 1] - y[i - 1]) / (2.0 * dt);
    }
    d[n - 1] = (3.0 * y[n - 1] - 4.0 * y[n - 2] + y[n - 3]) / (2.0 * dt);
    Ok(d)
}

/// Kalman-smoothed derivative estimate on a uniform grid.
///
/// State-space model with state `(position, velocity, acceleration)`,
/// constant-acceleration transition, and continuous white-jerk process
/// noise. A forward pass is followed by a Rauch–Tung–Striebel backward
/// smoothing pass; the smoothed velocity is returned on the same grid.
/// Only the ratio of process to measurement noise matters; `noise_ratio`
/// is that ratio.
pub fn kalman_derivative(
    times: &[f64],
    y: &[f64],
    noise_ratio: f64,
) -> Result<Vec<f64>, LearnError> {
    if times.len() < 3 {
        return Err(LearnError::TooFewSamples(times.len()));
    }
    if y.len() != times.len() {
        return Err(LearnError::RaggedSeries(format!(
            "{} values against {} times",
            y.len(),
            times.len()
        )));
    }
    let dt = grid_spacing(times)?;
    let n = y.len();

    let f = Matrix3::new(
        1.0, dt, 0.5 * dt * dt,
        0.0, 1.0, dt,
        0.0, 0.0, 1.0,
    );
    let q_scale = noise_ratio.max(f64::MIN_POSITIVE);
    let (d2, d3, d4, d5) = (dt * dt, dt * dt * dt, dt * dt * dt * dt, dt * dt * dt * dt * dt);
    let q = Matrix3::new(
        d5 / 20.0, d4 / 8.0, d3 / 6.0,
        d4 / 8.0, d3 / 3.0, d2 / 2.0,
        d3 / 6.0, d2 / 2.0, dt,
    ) * q_scale;
    let h = RowVector3::new(1.0, 0.0, 0.0);
    let r = 1.0;

    // forward filter
    let mut x = Vector3::new(y[0], (y[1] - y[0]) / dt, 0.0);
    let mut p = Matrix3::identity() * 1e6;
    let mut filtered_x = Vec::with_capacity(n);
    let mut filtered_p = Vec::with_capacity(n);
    let mut predicted_x = Vec::with_capacity(n);
    let mut predicted_p = Vec::with_capacity(n);

    for (i, &obs) in y.iter().enumerate() {
        let (x_pred, p_pred) = if i == 0 {
            (x, p)
        } else {
            (f * x, f * p * f.transpose() + q)
        };
        predicted_x.push(x_pred);
        predicted_p.push(p_pred);
        let innovation = obs - (h * x_pred)[0];
        let s = (h * p_pred * h.transpose())[0] + r;
        let gain = p_pred * h.transpose() / s;
        x = x_pred + gain * innovation;
        p = (Matrix3::identity() - gain * h) * p_pred;
        filtered_x.push(x);
        filtered_p.push(p);
    }

    // RTS backward smoothing (state recursion only; covariances not needed)
    let mut smoothed = vec![Vector3::zeros(); n];
    smoothed[n - 1] = filtered_x[n - 1];
    for i in (0..n - 1).rev() {
        let p_pred_next = predicted_p[i + 1];
        let inv = p_pred_next.try_inverse().unwrap_or_else(Matrix3::identity);
        let gain = filtered_p[i] * f.transpose() * inv;
        smoothed[i] = filtered_x[i] + gain * (smoothed[i + 1] - predicted_x[i + 1]);
    }

    Ok(smoothed.iter().map(|s| s[1]).collect())
}

/// Derivative estimates for every species of a series.
pub fn estimate_derivatives(
    series: &SeriesData,
    method: DerivativeMethod,
    kalman_noise_ratio: f64,
) -> Result<Vec<Vec<f64>>, LearnError> {
    series.validate()?;
    series
        .values
        .iter()
        .map(|y| match method {
            DerivativeMethod::Central => central_difference(&series.times, y),
            DerivativeMethod::Kalman => kalman_derivative(&series.times, y, kalman_noise_ratio),
        })
        .collect()
}
