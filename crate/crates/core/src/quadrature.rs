//! Gauss–Legendre quadrature on adaptively bisected panels.

use std::sync::OnceLock;

use crate::{Error, Result};

/// Nodes and weights of an `n`-point Gauss–Legendre rule on `[-1, 1]`.
#[derive(Debug, Clone)]
pub struct GaussLegendre {
    pub nodes: Vec<f64>,
    pub weights: Vec<f64>,
}

impl GaussLegendre {
    /// Builds the rule by Newton iteration on `P_n` from the Tricomi initial guesses.
    pub fn new(n: usize) -> Self {
        assert!(n >= 1);
        let mut nodes = vec![0.0; n];
        let mut weights = vec![0.0; n];
        let nf = n as f64;
        for i in 0..n.div_ceil(2) {
            let mut x = (std::f64::consts::PI * (i as f64 + 0.75) / (nf + 0.5)).cos();
            let mut dp = 0.0;
            for _ in 0..100 {
                let (p, d) = legendre_with_derivative(n, x);
                dp = d;
                let dx = p / d;
                x -= dx;
                if dx.abs() < 1e-16 {
                    break;
                }
            }
            let (_, d) = legendre_with_derivative(n, x);
            dp = if d != 0.0 { d } else { dp };
            let w = 2.0 / ((1.0 - x * x) * dp * dp);
            nodes[i] = -x;
            nodes[n - 1 - i] = x;
            weights[i] = w;
            weights[n - 1 - i] = w;
        }
        Self { nodes, weights }
    }

    /// Integral of `f` over `[a, b]` with this rule.
    pub fn integrate<F: FnMut(f64) -> f64>(&self, mut f: F, a: f64, b: f64) -> f64 {
        let half = 0.5 * (b - a);
        let mid = 0.5 * (a + b);
        self.nodes
            .iter()
            .zip(&self.weights)
            .map(|(x, w)| w * f(mid + half * x))
            .sum::<f64>()
            * half
    }
}

fn legendre_with_derivative(n: usize, x: f64) -> (f64, f64) {
    let (mut p0, mut p1) = (1.0, x);
    for k in 2..=n {
        let kf = k as f64;
        let p2 = ((2.0 * kf - 1.0) * x * p1 - (kf - 1.0) * p0) / kf;
        p0 = p1;
        p1 = p2;
    }
    let d = n as f64 * (x * p1 - p0) / (x * x - 1.0);
    (p1, d)
}

fn panel_rule() -> &'static GaussLegendre {
    static RULE: OnceLock<GaussLegendre> = OnceLock::new();
    RULE.get_or_init(|| GaussLegendre::new(32))
}

/// Adaptive integral of a smooth `f` over `[a, b]`.
///
/// Each panel is integrated with a 32-point rule and compared with the sum over
/// its two halves; panels are bisected until the difference falls below
/// `rel_tol` times the running magnitude of the integral.
pub fn integrate_adaptive<F: FnMut(f64) -> f64>(
    mut f: F,
    a: f64,
    b: f64,
    rel_tol: f64,
) -> Result<f64> {
    const MAX_PANELS: usize = 1 << 16;
    let rule = panel_rule();
    let whole = rule.integrate(&mut f, a, b);
    let scale = whole.abs().max(f64::MIN_POSITIVE);
    let mut stack = vec![(a, b, whole)];
    let mut total = 0.0;
    let mut panels = 0usize;
    while let Some((lo, hi, coarse)) = stack.pop() {
        let mid = 0.5 * (lo + hi);
        let left = rule.integrate(&mut f, lo, mid);
        let right = rule.integrate(&mut f, mid, hi);
        let fine = left + right;
        let width_share = (hi - lo) / (b - a);
        if (fine - coarse).abs() <= rel_tol * scale * width_share.max(1e-3)
            || hi - lo < 1e-14 * (b - a).abs()
        {
            total += fine;
            continue;
        }
        panels += 1;
        if panels > MAX_PANELS {
            return Err(Error::Quadrature(format!(
                "more than {MAX_PANELS} panel bisections on [{a}, {b}]"
            )));
        }
        stack.push((mid, hi, right));
        stack.push((lo, mid, left));
    }
    Ok(total)
}
