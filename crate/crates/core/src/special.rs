//! Complete elliptic integral of the first kind and related constants.

use std::f64::consts::{FRAC_PI_2, PI, SQRT_2};
use std::sync::OnceLock;

use crate::{Error, Result};

/// Complete elliptic integral of the first kind `K(x) = ∫₀¹ dt/√((1−t²)(1−x²t²))`
/// for a modulus `0 ≤ x < 1`, by the arithmetic–geometric mean.
pub fn elliptic_k(x: f64) -> Result<f64> {
    if !(0.0..1.0).contains(&x) {
        return Err(Error::domain(format!(
            "elliptic_k requires 0 <= x < 1, got {x}"
        )));
    }
    Ok(agm_k(((1.0 - x) * (1.0 + x)).sqrt()))
}

/// `K` from the complementary modulus `kc = √(1−x²)`, `0 < kc ≤ 1`.
///
/// Near `x → 1` this avoids forming `1 − x²` by cancellation.
pub fn elliptic_k_complement(kc: f64) -> Result<f64> {
    if !(kc > 0.0 && kc <= 1.0) {
        return Err(Error::domain(format!(
            "complementary modulus must lie in (0, 1], got {kc}"
        )));
    }
    Ok(agm_k(kc))
}

fn agm_k(kc: f64) -> f64 {
    let mut a = 1.0_f64;
    let mut b = kc;
    while (a - b).abs() >= 1e-15 * a {
        let next = 0.5 * (a + b);
        b = (a * b).sqrt();
        a = next;
    }
    PI / (2.0 * a)
}

/// `σ = ∫₀¹ dθ/√(1−θ⁴) = K(1/√2)/√2 ≈ 1.311`.
pub fn sigma_constant() -> f64 {
    static SIGMA: OnceLock<f64> = OnceLock::new();
    *SIGMA.get_or_init(|| {
        let x = 1.0 / SQRT_2;
        elliptic_k(x).expect("1/sqrt(2) is inside the domain") * x
    })
}

/// The three comparison functions used to prove stability for all energies
/// when `n ≤ ε m`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Stability11Bounds {
    /// `K(√z)⁴`
    pub f: f64,
    /// Fourth power of the convexity chord of `K(√z)` on `[0, 1/2]`.
    pub g: f64,
    /// Max of the two sufficient thresholds coming from the Zhukovskii and
    /// Li–Zhang criteria.
    pub h: f64,
}

pub fn stability11_bounds(z: f64, eps: f64) -> Result<Stability11Bounds> {
    if !(z > 0.0 && z < 0.5) {
        return Err(Error::domain(format!("z must lie in (0, 1/2), got {z}")));
    }
    if !(eps > 0.0 && eps < 1.0) {
        return Err(Error::domain(format!("eps must lie in (0, 1), got {eps}")));
    }
    let sigma = sigma_constant();
    let f = elliptic_k(z.sqrt())?.powi(4);
    let g = (FRAC_PI_2 + (2.0 * SQRT_2 * sigma - PI) * z).powi(4);

    let e2 = eps * eps;
    let e4 = e2 * e2;
    let zhukovskii = PI.powi(4) / (16.0 * e4 * (e2 + 2.0 * (1.0 - e2) * z).powi(2));
    let quadratic = 4.0 * (3.0 * e4 - 4.0 * e2 + 5.0 / 3.0) * z * z
        - 4.0 * (3.0 * e4 - 2.0 * e2 + 1.0 / 3.0) * z
        + 3.0 * e4;
    let li_zhang = 4.0 * sigma.powi(4) / (e4 * quadratic);
    Ok(Stability11Bounds {
        f,
        g,
        h: zhukovskii.max(li_zhang),
    })
}
