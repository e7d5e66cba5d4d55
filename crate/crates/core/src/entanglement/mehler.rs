// Licensed under the Apache License, Version 2.0 (the "License"); you may
// not use this file except in compliance with the License. You may obtain
// a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS, WITHOUT
// WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied. See the
// License for the specific language governing permissions and limitations
// under the License.

//! Grid oracle for the Schmidt coefficients of a two-mode Gaussian.
//!
//! `psi(x, y) = exp(-x^2/2 - y^2/2 - d x y)` is sampled on a uniform grid
//! with trapezoid weights folded in symmetrically
//! (`K_ij = sqrt(w_i) psi(x_i, x_j) sqrt(w_j)`). The squared singular
//! values of `K`, normalized, approximate the Schmidt coefficients, which
//! by the Mehler expansion follow `(1 - t^2) t^{2n}` with
//! `t^2 = (gamma - 1)/(gamma + 1)`.

use nalgebra::DMatrix;

use super::gamma_from_d;
use crate::error::{Error, Result};

pub const DEFAULT_GRID_HALFWIDTH: f64 = 8.0;
pub const DEFAULT_GRID_POINTS: usize = 400;
/// Allowed deviation of the leading coefficient from `2/(gamma+1)`.
pub const TOP_COEFFICIENT_TOL: f64 = 1e-4;
const AUTO_SPACING: f64 = 0.04;
const AUTO_SIGMAS: f64 = 7.0;

/// Normalized Schmidt coefficients, descending, one per grid point.
pub fn mehler_oracle(d: f64, grid_halfwidth: f64, grid_points: usize) -> Result<Vec<f64>> {
    if !(d > 0.0 && d < 1.0) {
        return Err(Error::DOutOfRange(d));
    }
    if !(grid_halfwidth > 0.0 && grid_halfwidth.is_finite()) || grid_points < 3 {
        return Err(Error::InvalidGrid(format!(
            "halfwidth {grid_halfwidth}, {grid_points} points"
        )));
    }
    let h = 2.0 * grid_halfwidth / (grid_points - 1) as f64;
    let x: Vec<f64> = (0..grid_points)
        .map(|i| -grid_halfwidth + h * i as f64)
        .collect();
    let sw: Vec<f64> = (0..grid_points)
        .map(|i| {
            let w = if i == 0 || i == grid_points - 1 {
                h / 2.0
            } else {
                h
            };
            w.sqrt()
        })
        .collect();
    let k = DMatrix::from_fn(grid_points, grid_points, |i, j| {
        sw[i] * sw[j] * (-0.5 * x[i] * x[i] - 0.5 * x[j] * x[j] - d * x[i] * x[j]).exp()
    });
    // K is symmetric, so its singular values are |eigenvalues|
    let mut coeffs: Vec<f64> = k.symmetric_eigenvalues().iter().map(|e| e * e).collect();
    let total: f64 = coeffs.iter().sum();
    coeffs.iter_mut().for_each(|c| *c /= total);
    coeffs.sort_by(|a, b| b.total_cmp(a));

    let expected = 2.0 / (gamma_from_d(d) + 1.0);
    if (coeffs[0] - expected).abs() > TOP_COEFFICIENT_TOL {
        return Err(Error::GridTooCoarse {
            found: coeffs[0],
            expected,
        });
    }
    Ok(coeffs)
}

/// Oracle with the grid sized to the Gaussian: halfwidth
/// `max(8, 7 sigma)` with `sigma = 1/sqrt(2(1-d^2))`, spacing about 0.04.
pub fn mehler_oracle_auto(d: f64) -> Result<Vec<f64>> {
    if !(d > 0.0 && d < 1.0) {
        return Err(Error::DOutOfRange(d));
    }
    let sigma = 1.0 / (2.0 * (1.0 - d * d)).sqrt();
    let halfwidth = DEFAULT_GRID_HALFWIDTH.max(AUTO_SIGMAS * sigma);
    let points = (2.0 * halfwidth / AUTO_SPACING).ceil() as usize + 1;
    mehler_oracle(d, halfwidth, points)
}

/// First `count` terms of `(1 - t^2) t^{2n}`.
pub fn geometric_coefficients(d: f64, count: usize) -> Vec<f64> {
    let gamma = gamma_from_d(d);
    let t2 = (gamma - 1.0) / (gamma + 1.0);
    (0..count).map(|n| (1.0 - t2) * t2.powi(n as i32)).collect()
}

/// `-sum p ln p`, nats.
pub fn shannon_entropy(p: &[f64]) -> f64 {
    p.iter().filter(|&&x| x > 0.0).map(|&x| -x * x.ln()).sum()
}
