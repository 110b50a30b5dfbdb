//! Equilibrium shapes of the compressed beam on `(0, π)`:
//! `u'''' + [P − (2/π)‖u'‖²]u'' = 0` with hinged ends.
//!
//! For `P ∈ (k², (k+1)²]` there are exactly `2k+1` solutions: `u₀ = 0` and
//! `±u_j = ±(√(P−j²)/j) sin(jx)` for `1 ≤ j ≤ k`.

use std::f64::consts::PI;

use serde::{Deserialize, Serialize};

use crate::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct StationarySolution {
    pub j: u32,
    /// `0` for `u₀`, otherwise `√(P−j²)/j`.
    pub amplitude: f64,
    pub energy_j0: f64,
    pub morse_index: u32,
    /// `+1` or `−1`; `0` for `u₀`.
    pub sign: i8,
}

impl StationarySolution {
    pub fn eval(&self, x: f64) -> f64 {
        self.sign as f64 * self.amplitude * (self.j as f64 * x).sin()
    }

    pub fn with_amplitude(mut self, amplitude: f64) -> Self {
        self.amplitude = amplitude;
        self
    }
}

/// Number of bending modes below the load, i.e. `k` with `P ∈ (k², (k+1)²]`.
pub fn buckled_mode_count(p: f64) -> u32 {
    if p <= 1.0 {
        return 0;
    }
    let mut k = p.sqrt().floor() as u32;
    while (k as f64).powi(2) >= p {
        k -= 1;
    }
    k
}

/// All equilibria for load `p`, ordered `u₀, +u₁, −u₁, +u₂, −u₂, …`.
pub fn stationary_catalog(p: f64) -> Result<Vec<StationarySolution>> {
    if !p.is_finite() {
        return Err(Error::domain(format!("load P must be finite, got {p}")));
    }
    let k = buckled_mode_count(p);
    let mut out = Vec::with_capacity(2 * k as usize + 1);
    out.push(StationarySolution {
        j: 0,
        amplitude: 0.0,
        energy_j0: 0.0,
        morse_index: k,
        sign: 0,
    });
    for j in 1..=k {
        let jf = j as f64;
        let gap = p - jf * jf;
        for sign in [1, -1] {
            out.push(StationarySolution {
                j,
                amplitude: gap.sqrt() / jf,
                energy_j0: -PI / 8.0 * gap * gap,
                morse_index: j - 1,
                sign,
            });
        }
    }
    Ok(out)
}

/// Largest pointwise residual of the equilibrium equation over `x_samples`.
///
/// Derivatives and `‖u'‖² = (π/2)A²j²` are taken from the solution's own
/// amplitude, so a wrong amplitude shows up as a nonzero residual.
pub fn residual_check(solution: &StationarySolution, p: f64, x_samples: &[f64]) -> f64 {
    if solution.j == 0 || solution.amplitude == 0.0 {
        return 0.0;
    }
    let a = solution.sign as f64 * solution.amplitude;
    let j = solution.j as f64;
    let norm_sq = 0.5 * PI * a * a * j * j;
    let coeff = p - 2.0 / PI * norm_sq;
    x_samples
        .iter()
        .map(|&x| {
            let s = (j * x).sin();
            let u4 = a * j.powi(4) * s;
            let u2 = -a * j * j * s;
            (u4 + coeff * u2).abs()
        })
        .fold(0.0, f64::max)
}
