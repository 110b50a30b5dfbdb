//! Test-only reference computations, kept independent of the library's
//! AGM, Gauss–Legendre and Runge–Kutta code paths.

/// Adaptive Simpson quadrature with Richardson correction.
pub fn simpson<F: Fn(f64) -> f64>(f: &F, a: f64, b: f64, tol: f64) -> f64 {
    #[allow(clippy::too_many_arguments)]
    fn rec<F: Fn(f64) -> f64>(
        f: &F,
        a: f64,
        b: f64,
        fa: f64,
        fm: f64,
        fb: f64,
        whole: f64,
        tol: f64,
        depth: u32,
    ) -> f64 {
        let m = 0.5 * (a + b);
        let lm = 0.5 * (a + m);
        let rm = 0.5 * (m + b);
        let flm = f(lm);
        let frm = f(rm);
        let left = (m - a) / 6.0 * (fa + 4.0 * flm + fm);
        let right = (b - m) / 6.0 * (fm + 4.0 * frm + fb);
        let delta = left + right - whole;
        if depth == 0 || delta.abs() <= 15.0 * tol {
            return left + right + delta / 15.0;
        }
        rec(f, a, m, fa, flm, fm, left, 0.5 * tol, depth - 1)
            + rec(f, m, b, fm, frm, fb, right, 0.5 * tol, depth - 1)
    }
    let fa = f(a);
    let fb = f(b);
    let fm = f(0.5 * (a + b));
    let whole = (b - a) / 6.0 * (fa + 4.0 * fm + fb);
    rec(f, a, b, fa, fm, fb, whole, tol, 50)
}

/// `K(x)` from its trigonometric integral form.
pub fn elliptic_k_quadrature(x: f64) -> f64 {
    simpson(
        &|a: f64| 1.0 / (1.0 - x * x * a.sin().powi(2)).sqrt(),
        0.0,
        std::f64::consts::FRAC_PI_2,
        1e-14,
    )
}

/// `∫₀¹ dθ/√(1−θ⁴)` through `θ = √(sin φ)`, `φ = ψ²`, which leaves a bounded integrand.
pub fn sigma_quadrature() -> f64 {
    let upper = std::f64::consts::FRAC_PI_2.sqrt();
    let g = |psi: f64| {
        if psi == 0.0 {
            1.0
        } else {
            psi / (psi * psi).sin().sqrt()
        }
    };
    simpson(&g, 0.0, upper, 1e-14)
}
