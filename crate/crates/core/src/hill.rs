//! Linear stability of a mode `Θ_m` with respect to a mode `n`.
//!
//! The small mode obeys the Hill equation `ξ̈ + a(t)ξ = 0` with
//! `a(t) = n²(n²−P) + m²n²Θ_m(t)²`. The coefficient has period `T/2` along
//! sign-changing orbits and `T` along one-signed ones.

use std::fmt;

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::duffing::{orbit_from_energy, DuffingOrbit, ModeParams};
use crate::integrate::{integrate_final, IntegratorConfig};
use crate::special::sigma_constant;
use crate::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub enum Coefficient {
    /// `a(t) = n²(n²−P) + m²n²Θ_m(t)²` along a mode-`m` orbit.
    Orbit {
        m: u32,
        n: u32,
        p: f64,
        orbit: DuffingOrbit,
    },
    /// `a(t) ≡ c`.
    Constant(f64),
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct HillProblem {
    pub coefficient: Coefficient,
    /// Minimal period of `a(t)`.
    pub coeff_period: f64,
}

/// Hill problem for mode `n` along the mode-`m` orbit of energy `e`.
pub fn build_hill(m: u32, n: u32, p: f64, e: f64) -> Result<HillProblem> {
    if m == n {
        return Err(Error::domain(format!("modes must differ, got m = n = {m}")));
    }
    if n == 0 {
        return Err(Error::domain("mode index n must be at least 1"));
    }
    let orbit = orbit_from_energy(&ModeParams::new(m, p)?, e)?;
    HillProblem::from_orbit(n, orbit)
}

impl HillProblem {
    pub fn from_orbit(n: u32, orbit: DuffingOrbit) -> Result<Self> {
        let m = orbit.params.k;
        if m == n || n == 0 {
            return Err(Error::domain(format!("invalid mode pair m = {m}, n = {n}")));
        }
        let coeff_period = if orbit.is_sign_changing() {
            0.5 * orbit.period
        } else {
            orbit.period
        };
        Ok(Self {
            coefficient: Coefficient::Orbit {
                m,
                n,
                p: orbit.params.p,
                orbit,
            },
            coeff_period,
        })
    }

    pub fn constant(c: f64, period: f64) -> Result<Self> {
        if !c.is_finite() || !(period > 0.0 && period.is_finite()) {
            return Err(Error::domain(format!(
                "invalid constant problem c = {c}, period = {period}"
            )));
        }
        Ok(Self {
            coefficient: Coefficient::Constant(c),
            coeff_period: period,
        })
    }

    /// `(n²(n²−P), m²n²)`, so that `a = base + coupling·Θ²`.
    fn affine(&self) -> (f64, f64) {
        match self.coefficient {
            Coefficient::Orbit { m, n, p, .. } => {
                let n2 = (n as f64).powi(2);
                (n2 * (n2 - p), (m as f64).powi(2) * n2)
            }
            Coefficient::Constant(c) => (c, 0.0),
        }
    }

    /// Analytic range `(min a, max a)` over one period.
    pub fn coefficient_range(&self) -> (f64, f64) {
        let (base, coupling) = self.affine();
        match self.coefficient {
            Coefficient::Orbit { orbit, .. } => {
                let (lo, hi) = orbit.theta_sq_range();
                (base + coupling * lo, base + coupling * hi)
            }
            Coefficient::Constant(c) => (c, c),
        }
    }

    pub fn is_constant(&self) -> bool {
        match self.coefficient {
            Coefficient::Orbit { orbit, .. } => orbit.is_constant(),
            Coefficient::Constant(_) => true,
        }
    }

    /// Integrates `[Θ, Θ̇, y...]` over one coefficient period, where `y` is driven by `a(t)`.
    fn integrate_with<const N: usize, F>(
        &self,
        tail0: [f64; N],
        config: &IntegratorConfig,
        drive: F,
    ) -> Result<[f64; N]>
    where
        F: Fn(f64, &[f64], &mut [f64]),
    {
        let (base, coupling) = self.affine();
        let (field, theta0) = match self.coefficient {
            Coefficient::Orbit { orbit, .. } => {
                (orbit.params.vector_field(), orbit.canonical_initial)
            }
            Coefficient::Constant(_) => (
                crate::duffing::DuffingField {
                    linear: 0.0,
                    cubic: 0.0,
                },
                [0.0, 0.0],
            ),
        };
        // a fixed-size buffer large enough for the systems used here
        const M: usize = 8;
        assert!(N + 2 <= M);
        let sys = move |_t: f64, y: &[f64; M], dy: &mut [f64; M]| {
            dy[0] = y[1];
            dy[1] = field.acceleration(y[0]);
            let a = base + coupling * y[0] * y[0];
            drive(a, &y[2..2 + N], &mut dy[2..2 + N]);
        };
        let mut y0 = [0.0; M];
        y0[..2].copy_from_slice(&theta0);
        y0[2..2 + N].copy_from_slice(&tail0);
        let end = integrate_final(&sys, y0, (0.0, self.coeff_period), config)?;
        let mut out = [0.0; N];
        out.copy_from_slice(&end[2..2 + N]);
        Ok(out)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum Verdict {
    Stable,
    Unstable,
    Marginal,
}

impl fmt::Display for Verdict {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Verdict::Stable => "Stable",
            Verdict::Unstable => "Unstable",
            Verdict::Marginal => "Marginal",
        })
    }
}

impl Verdict {
    pub fn from_trace(trace: f64, tol_margin: f64) -> Self {
        let t = trace.abs();
        if t < 2.0 - tol_margin {
            Verdict::Stable
        } else if t > 2.0 + tol_margin {
            Verdict::Unstable
        } else {
            Verdict::Marginal
        }
    }

    /// Marginal is compatible with everything.
    pub fn agrees_with(self, other: Verdict) -> bool {
        self == other || self == Verdict::Marginal || other == Verdict::Marginal
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct StabilityConfig {
    pub integrator: IntegratorConfig,
    /// Half-width of the Marginal band around `|trace| = 2`.
    pub tol_margin: f64,
}

impl Default for StabilityConfig {
    fn default() -> Self {
        Self {
            integrator: IntegratorConfig::with_tolerances(1e-12, 1e-14),
            tol_margin: 1e-6,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct MonodromyResult {
    /// Row-major `[[ξ₁, ξ₂], [ξ̇₁, ξ̇₂]]` at the end of one period.
    pub matrix: [[f64; 2]; 2],
    pub det: f64,
    pub trace: f64,
    pub multipliers: [Complex64; 2],
    pub verdict: Verdict,
}

/// Roots of `λ² − trace·λ + 1`, larger modulus first.
pub fn multipliers_from_trace(trace: f64) -> [Complex64; 2] {
    let disc = trace * trace - 4.0;
    if disc >= 0.0 {
        let l1 = 0.5 * (trace + trace.signum() * disc.sqrt());
        [Complex64::new(l1, 0.0), Complex64::new(1.0 / l1, 0.0)]
    } else {
        let im = 0.5 * (-disc).sqrt();
        [
            Complex64::new(0.5 * trace, im),
            Complex64::new(0.5 * trace, -im),
        ]
    }
}

/// Monodromy matrix of the Hill equation over one coefficient period.
///
/// The orbit and both fundamental solutions are integrated together. A
/// determinant further than `1e-6` from one (relative to the size of the
/// products it is formed from) is reported as a numerical-quality failure.
pub fn monodromy(problem: &HillProblem, config: &StabilityConfig) -> Result<MonodromyResult> {
    let end = problem.integrate_with([1.0, 0.0, 0.0, 1.0], &config.integrator, |a, y, dy| {
        dy[0] = y[1];
        dy[1] = -a * y[0];
        dy[2] = y[3];
        dy[3] = -a * y[2];
    })?;
    let matrix = [[end[0], end[2]], [end[1], end[3]]];
    let p1 = matrix[0][0] * matrix[1][1];
    let p2 = matrix[0][1] * matrix[1][0];
    let det = p1 - p2;
    let scale = 1.0f64.max(p1.abs() + p2.abs());
    if !det.is_finite() || (det - 1.0).abs() > 1e-6 * scale {
        return Err(Error::NumericalQuality(format!(
            "monodromy determinant {det} drifted from 1"
        )));
    }
    let trace = matrix[0][0] + matrix[1][1];
    Ok(MonodromyResult {
        matrix,
        det,
        trace,
        multipliers: multipliers_from_trace(trace),
        verdict: Verdict::from_trace(trace, config.tol_margin),
    })
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Zhukovskii {
    pub applies: bool,
    pub ell: Option<u64>,
}

/// `ℓ²π²/T² ≤ a(t) ≤ (ℓ+1)²π²/T²` for some `ℓ ≥ 0`, with `a` not stuck on an endpoint.
pub fn zhukovskii_criterion(problem: &HillProblem) -> Zhukovskii {
    let (a_min, a_max) = problem.coefficient_range();
    let none = Zhukovskii {
        applies: false,
        ell: None,
    };
    if !(a_min >= 0.0) || a_max <= 0.0 {
        return none;
    }
    let t = problem.coeff_period;
    let pi_t = std::f64::consts::PI / t;
    let ell = (a_min.sqrt() / pi_t).floor();
    let lower = (ell * pi_t).powi(2);
    let upper = ((ell + 1.0) * pi_t).powi(2);
    let fits = lower <= a_min && a_max <= upper;
    // a constant coefficient on an endpoint sits exactly at a resonance
    let degenerate = a_min == a_max && (a_min == lower || a_max == upper);
    if fits && !degenerate {
        Zhukovskii {
            applies: true,
            ell: Some(ell as u64),
        }
    } else {
        none
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct LiZhang {
    pub applies: bool,
    /// `∫₀^T a`.
    pub mean_integral: f64,
    /// `T³∫₀^T (a⁺)²`.
    pub lhs: f64,
    /// `(64/3)σ⁴`.
    pub rhs: f64,
}

/// `∫₀^T a > 0` and `T³∫₀^T (a⁺)² < (64/3)σ⁴`.
pub fn li_zhang_criterion(problem: &HillProblem, config: &IntegratorConfig) -> Result<LiZhang> {
    let t = problem.coeff_period;
    let (int_a, int_ap2) = if problem.is_constant() {
        let (a, _) = problem.coefficient_range();
        (a * t, a.max(0.0).powi(2) * t)
    } else {
        // normalized so the quadrature slots share the orbit's error scale
        let (a_min, a_max) = problem.coefficient_range();
        let s = a_min.abs().max(a_max.abs()).max(1.0);
        let end = problem.integrate_with([0.0, 0.0], config, |a, _y, dy| {
            dy[0] = a / s;
            dy[1] = (a.max(0.0) / s).powi(2);
        })?;
        (end[0] * s, end[1] * s * s)
    };
    let lhs = t.powi(3) * int_ap2;
    let rhs = 64.0 / 3.0 * sigma_constant().powi(4);
    Ok(LiZhang {
        applies: int_a > 0.0 && lhs < rhs,
        mean_integral: int_a,
        lhs,
        rhs,
    })
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct NegativeCoefficient {
    pub applies: bool,
}

/// `a(t) ≤ 0` throughout, which forces instability.
pub fn negative_coefficient_criterion(problem: &HillProblem) -> NegativeCoefficient {
    NegativeCoefficient {
        applies: problem.coefficient_range().1 <= 0.0,
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct CriterionReport {
    pub zhukovskii: Zhukovskii,
    pub li_zhang: LiZhang,
    pub negative_coeff: NegativeCoefficient,
}

impl CriterionReport {
    /// Verdict implied by the criteria alone, if any applies.
    pub fn implied(&self) -> Option<Verdict> {
        if self.negative_coeff.applies {
            Some(Verdict::Unstable)
        } else if self.zhukovskii.applies || self.li_zhang.applies {
            Some(Verdict::Stable)
        } else {
            None
        }
    }

    /// First criterion contradicting `verdict`, if any.
    pub fn disagreement(&self, verdict: Verdict) -> Option<&'static str> {
        if self.zhukovskii.applies && !Verdict::Stable.agrees_with(verdict) {
            Some("zhukovskii")
        } else if self.li_zhang.applies && !Verdict::Stable.agrees_with(verdict) {
            Some("li_zhang")
        } else if self.negative_coeff.applies && !Verdict::Unstable.agrees_with(verdict) {
            Some("negative_coefficient")
        } else {
            None
        }
    }
}

pub fn evaluate_criteria(
    problem: &HillProblem,
    config: &IntegratorConfig,
) -> Result<CriterionReport> {
    Ok(CriterionReport {
        zhukovskii: zhukovskii_criterion(problem),
        li_zhang: li_zhang_criterion(problem, config)?,
        negative_coeff: negative_coefficient_criterion(problem),
    })
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct StabilityReport {
    pub verdict: Verdict,
    pub criteria: CriterionReport,
    pub monodromy: MonodromyResult,
}

pub fn classify_problem(
    problem: &HillProblem,
    config: &StabilityConfig,
) -> Result<StabilityReport> {
    let criteria = evaluate_criteria(problem, &config.integrator)?;
    let monodromy = monodromy(problem, config)?;
    if let Some(criterion) = criteria.disagreement(monodromy.verdict) {
        return Err(Error::CriterionDisagreement {
            criterion,
            verdict: monodromy.verdict.to_string(),
        });
    }
    Ok(StabilityReport {
        verdict: monodromy.verdict,
        criteria,
        monodromy,
    })
}

/// Stability of the mode-`m` orbit of energy `e` with respect to mode `n`.
pub fn classify_stability(
    m: u32,
    n: u32,
    p: f64,
    e: f64,
    config: &StabilityConfig,
) -> Result<StabilityReport> {
    classify_problem(&build_hill(m, n, p, e)?, config)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::duffing::period_of;
    use std::f64::consts::PI;

    fn cfg() -> StabilityConfig {
        StabilityConfig::default()
    }

    #[test]
    fn coefficient_periods() {
        let h = build_hill(2, 1, 0.0, 1.0).unwrap();
        let t = period_of(&ModeParams::new(2, 0.0).unwrap(), 1.0).unwrap();
        assert_eq!(h.coeff_period, t / 2.0);
        let h = build_hill(1, 2, 2.0, -3.0 / 16.0).unwrap();
        let t = period_of(&ModeParams::new(1, 2.0).unwrap(), -3.0 / 16.0).unwrap();
        assert_eq!(h.coeff_period, t);
        assert!(build_hill(2, 2, 0.0, 1.0).unwrap_err().is_domain());
        assert!(build_hill(1, 2, 0.0, -1.0).unwrap_err().is_domain());
    }

    #[test]
    fn bottom_of_well_coefficient_is_constant() {
        let h = build_hill(1, 2, 3.0, -1.0).unwrap();
        let (lo, hi) = h.coefficient_range();
        assert_eq!(lo, hi);
        assert!((lo - 4.0 * (4.0 - 1.0)).abs() < 1e-12);
    }

    #[test]
    fn constant_coefficient_monodromy() {
        let (c, tau) = (2.0f64, 1.3);
        let r = monodromy(&HillProblem::constant(c, tau).unwrap(), &cfg()).unwrap();
        assert!((r.trace - 2.0 * (c.sqrt() * tau).cos()).abs() < 1e-9);
        assert!((r.matrix[0][1] - (c.sqrt() * tau).sin() / c.sqrt()).abs() < 1e-9);
        assert_eq!(r.verdict, Verdict::Stable);

        let r = monodromy(&HillProblem::constant(-1.5, 2.0).unwrap(), &cfg()).unwrap();
        assert!((r.trace - 2.0 * (1.5f64.sqrt() * 2.0).cosh()).abs() < 1e-8);
        assert_eq!(r.verdict, Verdict::Unstable);

        let r = monodromy(&HillProblem::constant(1.0, 2.0 * PI).unwrap(), &cfg()).unwrap();
        assert_eq!(r.verdict, Verdict::Marginal);
    }

    #[test]
    fn multipliers_are_reciprocal() {
        for tr in [-7.0, -2.5, -1.0, 0.0, 1.9, 2.0, 3.0, 1e6] {
            let [l1, l2] = multipliers_from_trace(tr);
            assert!(((l1 * l2) - 1.0).norm() < 1e-12, "{tr}");
            assert!(((l1 + l2).re - tr).abs() < 1e-9 * tr.abs().max(1.0));
        }
    }

    #[test]
    fn unstable_below_e1() {
        // E1 = (P−n²)(2m²−n²−P)/4 = 2 for (2, 1, 3)
        let r = classify_stability(2, 1, 3.0, 1.0, &cfg()).unwrap();
        assert_eq!(r.verdict, Verdict::Unstable);
        assert!(r.criteria.negative_coeff.applies);
        let r = classify_stability(2, 1, 3.0, 3.0, &cfg()).unwrap();
        assert!(!r.criteria.negative_coeff.applies);
        // E1 = 12 for (3, 1, 5)
        let r = classify_stability(3, 1, 5.0, 1.0, &cfg()).unwrap();
        assert_eq!(r.verdict, Verdict::Unstable);
    }

    #[test]
    fn stable_examples() {
        let r = classify_stability(2, 1, 0.0, 1.0, &cfg()).unwrap();
        assert_eq!(r.verdict, Verdict::Stable);
        let r = classify_stability(2, 1, 0.0, 1e-4, &cfg()).unwrap();
        assert_eq!(r.criteria.zhukovskii.ell, Some(0));
        let r = classify_stability(2, 1, 0.0, 1e8, &cfg()).unwrap();
        assert!(r.criteria.li_zhang.applies);
        assert_eq!(r.verdict, Verdict::Stable);
    }

    #[test]
    fn well_bottom_zhukovskii_uses_higher_ell() {
        let bottom = -0.25;
        let r = classify_stability(1, 2, 2.0, bottom * (1.0 - 1e-4), &cfg()).unwrap();
        assert!(r.criteria.zhukovskii.applies);
        assert!(r.criteria.zhukovskii.ell.unwrap() >= 1);
        assert_eq!(r.verdict, Verdict::Stable);
    }

    #[test]
    fn gamma_in_unstable_interval_at_high_energy() {
        let r = classify_stability(2, 3, 0.0, 1e6, &cfg()).unwrap();
        assert_eq!(r.verdict, Verdict::Unstable);
    }

    #[test]
    fn zhukovskii_constant_cases() {
        let h = HillProblem::constant(2.0, 1.0).unwrap();
        let z = zhukovskii_criterion(&h);
        assert!(z.applies);
        assert_eq!(z.ell, Some((2f64.sqrt() / PI).floor() as u64));
        let h = HillProblem::constant(PI * PI, 1.0).unwrap();
        assert!(!zhukovskii_criterion(&h).applies);
        let h = HillProblem::constant(-1.0, 1.0).unwrap();
        assert!(!zhukovskii_criterion(&h).applies);
    }

    #[test]
    fn li_zhang_edge_cases() {
        let h = HillProblem::constant(0.0, 1.0).unwrap();
        assert!(!li_zhang_criterion(&h, &cfg().integrator).unwrap().applies);
        let rhs = 64.0 / 3.0 * sigma_constant().powi(4);
        let tau = 1.0;
        let c = rhs.sqrt();
        let r =
            li_zhang_criterion(&HillProblem::constant(c, tau).unwrap(), &cfg().integrator).unwrap();
        assert!((r.lhs - r.rhs).abs() <= 1e-12 * r.rhs);
        let below = li_zhang_criterion(
            &HillProblem::constant(0.99 * c, tau).unwrap(),
            &cfg().integrator,
        )
        .unwrap();
        assert!(below.applies);
        let above = li_zhang_criterion(
            &HillProblem::constant(1.01 * c, tau).unwrap(),
            &cfg().integrator,
        )
        .unwrap();
        assert!(!above.applies);
    }

    #[test]
    fn negative_never_applies_below_n2() {
        for e in [1e-3, 1.0, 100.0] {
            let h = build_hill(3, 2, 4.0, e).unwrap();
            assert!(!negative_coefficient_criterion(&h).applies);
        }
    }

    #[test]
    fn diagonal_symmetry() {
        for &(m, n, p, e) in &[
            (2, 1, 0.0, 1.0),
            (1, 2, 2.0, -0.1),
            (2, 3, 0.0, 50.0),
            (2, 1, 3.0, 1.0),
        ] {
            let r = monodromy(&build_hill(m, n, p, e).unwrap(), &cfg()).unwrap();
            let scale = r.matrix[0][0].abs().max(1.0);
            assert!(
                (r.matrix[0][0] - r.matrix[1][1]).abs() < 1e-7 * scale,
                "{m} {n} {p} {e}: {:?}",
                r.matrix
            );
        }
    }
}
