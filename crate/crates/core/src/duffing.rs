//! Single nonlinear modes: `Θ̈ + k²(k²−P)Θ + k⁴Θ³ = 0`.
//!
//! Positive energies give sign-changing orbits oscillating in `[−√Λ₁, √Λ₁]`.
//! Under supercritical load (`k² < P`) negative energies give one-signed
//! orbits trapped in one of the two wells, `√Φ₂ ≤ |Θ| ≤ √Φ₁`, and the zero
//! energy level carries the homoclinic loop.

use std::f64::consts::{FRAC_PI_2, PI, SQRT_2};

use serde::{Deserialize, Serialize};

use crate::integrate::{integrate, integrate_final, IntegratorConfig, OdeSystem, Trajectory};
use crate::quadrature::integrate_adaptive;
use crate::special::elliptic_k_complement;
use crate::{Error, Result};

/// Spatial frequency `k` and axial load `P` of one Fourier mode.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ModeParams {
    pub k: u32,
    pub p: f64,
}

impl ModeParams {
    pub fn new(k: u32, p: f64) -> Result<Self> {
        if k == 0 {
            return Err(Error::domain("mode index k must be at least 1"));
        }
        if !p.is_finite() {
            return Err(Error::domain(format!("load P must be finite, got {p}")));
        }
        Ok(Self { k, p })
    }

    pub fn k2(&self) -> f64 {
        let k = self.k as f64;
        k * k
    }

    /// Coefficient of the linear term, `k²(k²−P)`.
    pub fn linear_coeff(&self) -> f64 {
        self.k2() * (self.k2() - self.p)
    }

    /// Coefficient of the cubic term, `k⁴`.
    pub fn cubic_coeff(&self) -> f64 {
        self.k2() * self.k2()
    }

    /// `k² < P`: the origin is a saddle between two wells.
    pub fn is_supercritical(&self) -> bool {
        self.k2() < self.p
    }

    /// Energy at the bottom of the wells, `−(P−k²)²/4`, when they exist.
    pub fn bottom_energy(&self) -> Option<f64> {
        self.is_supercritical()
            .then(|| -0.25 * (self.p - self.k2()).powi(2))
    }

    /// The constant solutions `±√(P−k²)/k` (positive one returned).
    pub fn equilibrium(&self) -> Option<f64> {
        self.is_supercritical()
            .then(|| (self.p - self.k2()).sqrt() / self.k as f64)
    }

    /// Conserved energy of the state `(Θ, Θ̇)`.
    pub fn energy(&self, theta: f64, theta_dot: f64) -> f64 {
        let t2 = theta * theta;
        0.5 * theta_dot * theta_dot
            + 0.5 * self.linear_coeff() * t2
            + 0.25 * self.cubic_coeff() * t2 * t2
    }

    /// Energy of the state released from rest at `Θ(0) = theta0`.
    pub fn energy_at_rest(&self, theta0: f64) -> f64 {
        self.energy(theta0, 0.0)
    }

    pub fn vector_field(&self) -> DuffingField {
        DuffingField {
            linear: self.linear_coeff(),
            cubic: self.cubic_coeff(),
        }
    }
}

/// Right-hand side of the mode equation as a first-order system `(Θ, Θ̇)`.
#[derive(Debug, Clone, Copy)]
pub struct DuffingField {
    pub linear: f64,
    pub cubic: f64,
}

impl DuffingField {
    #[inline]
    pub fn acceleration(&self, theta: f64) -> f64 {
        -(self.linear + self.cubic * theta * theta) * theta
    }
}

impl OdeSystem<2> for DuffingField {
    fn rhs(&self, _t: f64, y: &[f64; 2], dy: &mut [f64; 2]) {
        dy[0] = y[1];
        dy[1] = self.acceleration(y[0]);
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum EnergyRegime {
    /// `Θ ≡ 0`.
    Trivial,
    PositiveEnergy,
    NegativeEnergyWell,
    /// The constant solutions at the bottom of a well.
    BottomOfWell,
    /// Zero energy under supercritical load: the separatrix.
    Homoclinic,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct EnergyLevel {
    pub e: f64,
    pub regime: EnergyRegime,
}

fn regime_tolerance(e: f64) -> f64 {
    1e-13 * (1.0 + e.abs())
}

/// Classifies an energy value, rejecting values no real orbit can have.
pub fn classify_energy(params: &ModeParams, e: f64) -> Result<EnergyRegime> {
    if !e.is_finite() {
        return Err(Error::domain(format!("energy must be finite, got {e}")));
    }
    let tol = regime_tolerance(e);
    match params.bottom_energy() {
        None => {
            if e > tol {
                Ok(EnergyRegime::PositiveEnergy)
            } else if e.abs() <= tol {
                Ok(EnergyRegime::Trivial)
            } else {
                Err(Error::domain(format!(
                    "energy {e} is negative but k² = {} ≥ P = {}",
                    params.k2(),
                    params.p
                )))
            }
        }
        Some(bottom) => {
            if e > tol {
                Ok(EnergyRegime::PositiveEnergy)
            } else if e.abs() <= tol {
                Ok(EnergyRegime::Homoclinic)
            } else if (e - bottom).abs() <= tol {
                Ok(EnergyRegime::BottomOfWell)
            } else if e > bottom {
                Ok(EnergyRegime::NegativeEnergyWell)
            } else {
                Err(Error::domain(format!(
                    "energy {e} lies below the bottom of the well {bottom}"
                )))
            }
        }
    }
}

/// Energy and regime of the orbit through `(α, β)`.
///
/// The origin is reported as [`EnergyRegime::Trivial`] for every load.
pub fn energy_of(params: &ModeParams, alpha: f64, beta: f64) -> Result<EnergyLevel> {
    let e = params.energy(alpha, beta);
    if alpha == 0.0 && beta == 0.0 {
        return Ok(EnergyLevel {
            e,
            regime: EnergyRegime::Trivial,
        });
    }
    Ok(EnergyLevel {
        e,
        regime: classify_energy(params, e)?,
    })
}

/// Which well a one-signed orbit lives in. Sign-changing orbits always use `Positive`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum Branch {
    Positive,
    Negative,
}

impl Branch {
    pub fn sign(self) -> f64 {
        match self {
            Branch::Positive => 1.0,
            Branch::Negative => -1.0,
        }
    }
}

/// A periodic solution of the mode equation at a fixed energy.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct DuffingOrbit {
    pub params: ModeParams,
    pub energy: EnergyLevel,
    /// `(Λ₁, Λ₂)` for positive energy.
    pub lambdas: Option<(f64, f64)>,
    /// `(Φ₁, Φ₂)` for the wells (equal at the bottom).
    pub phis: Option<(f64, f64)>,
    /// `√(Φ₂/Φ₁)` for the wells.
    pub delta: Option<f64>,
    /// `max |Θ|`.
    pub amplitude: f64,
    pub period: f64,
    /// `(Θ(0), Θ̇(0))`: `(√Λ₁, 0)` for positive energy, `(±√Φ₂, 0)` in a well.
    pub canonical_initial: [f64; 2],
    pub branch: Branch,
}

impl DuffingOrbit {
    pub fn e(&self) -> f64 {
        self.energy.e
    }

    /// True when the orbit changes sign (positive energy).
    pub fn is_sign_changing(&self) -> bool {
        self.energy.regime == EnergyRegime::PositiveEnergy
    }

    pub fn is_constant(&self) -> bool {
        self.energy.regime == EnergyRegime::BottomOfWell
    }

    /// Analytic range `(min Θ², max Θ²)` along the orbit.
    pub fn theta_sq_range(&self) -> (f64, f64) {
        match (self.lambdas, self.phis) {
            (Some((l1, _)), _) => (0.0, l1),
            (None, Some((p1, p2))) => (p2, p1),
            _ => unreachable!("orbit carries either lambdas or phis"),
        }
    }

    /// The mirror orbit `−Θ` (only meaningful for one-signed orbits).
    pub fn with_branch(mut self, branch: Branch) -> Self {
        if !self.is_sign_changing() {
            let magnitude = self.canonical_initial[0].abs();
            self.canonical_initial[0] = branch.sign() * magnitude;
            self.branch = branch;
        }
        self
    }
}

fn lambdas(params: &ModeParams, e: f64) -> (f64, f64) {
    let d = params.k2() - params.p;
    let s = (d * d + 4.0 * e).sqrt();
    let k2 = params.k2();
    // one of s ± d suffers cancellation for small E; use s² − d² = 4E there
    if d >= 0.0 {
        (4.0 * e / (k2 * (s + d)), (s + d) / k2)
    } else {
        ((s - d) / k2, 4.0 * e / (k2 * (s - d)))
    }
}

fn phis(params: &ModeParams, e: f64) -> (f64, f64) {
    let q = params.p - params.k2();
    let s = (q * q + 4.0 * e).max(0.0).sqrt();
    let k2 = params.k2();
    ((q + s) / k2, -4.0 * e / (k2 * (q + s)))
}

/// Builds the orbit of energy `e` with the canonical initial condition.
///
/// At the bottom of a well the orbit is the constant equilibrium and `period`
/// is the small-oscillation limit.
pub fn orbit_from_energy(params: &ModeParams, e: f64) -> Result<DuffingOrbit> {
    let regime = classify_energy(params, e)?;
    let energy = EnergyLevel { e, regime };
    match regime {
        EnergyRegime::PositiveEnergy => {
            let (l1, l2) = lambdas(params, e);
            let amp = l1.sqrt();
            Ok(DuffingOrbit {
                params: *params,
                energy,
                lambdas: Some((l1, l2)),
                phis: None,
                delta: None,
                amplitude: amp,
                period: period_of(params, e)?,
                canonical_initial: [amp, 0.0],
                branch: Branch::Positive,
            })
        }
        EnergyRegime::NegativeEnergyWell => {
            let (p1, p2) = phis(params, e);
            Ok(DuffingOrbit {
                params: *params,
                energy,
                lambdas: None,
                phis: Some((p1, p2)),
                delta: Some((p2 / p1).sqrt()),
                amplitude: p1.sqrt(),
                period: period_of(params, e)?,
                canonical_initial: [p2.sqrt(), 0.0],
                branch: Branch::Positive,
            })
        }
        EnergyRegime::BottomOfWell => {
            let q = (params.p - params.k2()) / params.k2();
            Ok(DuffingOrbit {
                params: *params,
                energy,
                lambdas: None,
                phis: Some((q, q)),
                delta: Some(1.0),
                amplitude: q.sqrt(),
                period: bottom_period(params),
                canonical_initial: [q.sqrt(), 0.0],
                branch: Branch::Positive,
            })
        }
        EnergyRegime::Homoclinic | EnergyRegime::Trivial => Err(Error::domain(format!(
            "energy {e} gives no periodic orbit for k = {}, P = {}",
            params.k, params.p
        ))),
    }
}

/// Orbit through `(theta0, 0)`, on the well of the sign of `theta0` when one-signed.
pub fn orbit_from_rest(params: &ModeParams, theta0: f64) -> Result<DuffingOrbit> {
    if !theta0.is_finite() {
        return Err(Error::domain(format!(
            "initial displacement must be finite, got {theta0}"
        )));
    }
    let level = energy_of(params, theta0, 0.0)?;
    let branch = if theta0 < 0.0 {
        Branch::Negative
    } else {
        Branch::Positive
    };
    Ok(orbit_from_energy(params, level.e)?.with_branch(branch))
}

fn bottom_period(params: &ModeParams) -> f64 {
    PI * SQRT_2 / (params.k as f64 * (params.p - params.k2()).sqrt())
}

/// Period `T(E)` of the orbit at energy `e`.
///
/// Positive energies use the closed form in `K`; well energies integrate the
/// desingularised period integral with adaptive Gauss–Legendre panels.
pub fn period_of(params: &ModeParams, e: f64) -> Result<f64> {
    let k = params.k as f64;
    match classify_energy(params, e)? {
        EnergyRegime::PositiveEnergy => {
            let d = params.k2() - params.p;
            let root_x = (4.0 * e + d * d).sqrt();
            // complementary modulus squared of the K argument
            let kc2 = if d >= 0.0 {
                0.5 + d / (2.0 * root_x)
            } else {
                2.0 * e / (root_x * (root_x - d))
            };
            let kk = elliptic_k_complement(kc2.sqrt())?;
            Ok(4.0 / (k * root_x.sqrt()) * kk)
        }
        EnergyRegime::NegativeEnergyWell => {
            let q = params.p - params.k2();
            let s = (q * q + 4.0 * e).sqrt();
            let delta = 2.0 * (-e).sqrt() / (q + s);
            // θ² = δ² + (1−δ²) sin²φ maps ∫_δ^1 dθ/√((1−θ²)(θ²−δ²)) to a smooth integral
            let d2 = delta * delta;
            let integral = integrate_adaptive(
                |phi| {
                    let (sn, cs) = phi.sin_cos();
                    1.0 / (d2 * cs * cs + sn * sn).sqrt()
                },
                0.0,
                FRAC_PI_2,
                1e-12,
            )?;
            Ok(2.0 * SQRT_2 / (k * (q + s).sqrt()) * integral)
        }
        EnergyRegime::BottomOfWell => Ok(bottom_period(params)),
        EnergyRegime::Homoclinic | EnergyRegime::Trivial => Err(Error::domain(format!(
            "energy {e} gives no periodic orbit for k = {}, P = {}",
            params.k, params.p
        ))),
    }
}

/// Integrates the orbit over `n_periods` periods from its canonical initial condition.
pub fn orbit_trajectory(
    orbit: &DuffingOrbit,
    n_periods: f64,
    config: &IntegratorConfig,
) -> Result<Trajectory<2>> {
    if !(n_periods > 0.0 && n_periods.is_finite()) {
        return Err(Error::domain(format!(
            "number of periods must be positive, got {n_periods}"
        )));
    }
    integrate(
        &orbit.params.vector_field(),
        orbit.canonical_initial,
        (0.0, n_periods * orbit.period),
        config,
    )
}

/// Zero-energy solution `√2·√(P−k²) / (k cosh(k√(P−k²) t))`.
pub fn homoclinic(params: &ModeParams, t: f64) -> Result<f64> {
    if !params.is_supercritical() {
        return Err(Error::domain(format!(
            "homoclinic orbit needs k² < P (k = {}, P = {})",
            params.k, params.p
        )));
    }
    let q = (params.p - params.k2()).sqrt();
    let k = params.k as f64;
    Ok(SQRT_2 * q / (k * (k * q * t).cosh()))
}

/// `∫₀^τ g(Θ(t)) dt` along the orbit, with `τ` a multiple of the period.
pub fn integrate_along_orbit<G: Fn(f64) -> f64>(
    orbit: &DuffingOrbit,
    period_fraction: f64,
    g: G,
    config: &IntegratorConfig,
) -> Result<f64> {
    let field = orbit.params.vector_field();
    let tau = period_fraction * orbit.period;
    if orbit.is_constant() {
        return Ok(g(orbit.canonical_initial[0]) * tau);
    }
    let sys = |_t: f64, y: &[f64; 3], dy: &mut [f64; 3]| {
        dy[0] = y[1];
        dy[1] = field.acceleration(y[0]);
        dy[2] = g(y[0]);
    };
    let [x0, v0] = orbit.canonical_initial;
    let end = integrate_final(&sys, [x0, v0, 0.0], (0.0, tau), config)?;
    Ok(end[2])
}

/// `I(E) = ∫₀^{T/2} (n²(n²−P) + m²n²Θ_m²)² dt`.
pub fn hill_integral_i(m: u32, n: u32, p: f64, e: f64, config: &IntegratorConfig) -> Result<f64> {
    let params = ModeParams::new(m, p)?;
    if n == 0 {
        return Err(Error::domain("mode index n must be at least 1"));
    }
    let orbit = orbit_from_energy(&params, e)?;
    let n2 = (n as f64).powi(2);
    let base = n2 * (n2 - p);
    let coupling = params.k2() * n2;
    integrate_along_orbit(
        &orbit,
        0.5,
        |th| (base + coupling * th * th).powi(2),
        config,
    )
}

/// `∫Θ²` and `∫Θ⁴` over the first half period.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct HalfPeriodMoments {
    pub theta2: f64,
    pub theta4: f64,
}

pub fn half_period_moments(
    orbit: &DuffingOrbit,
    config: &IntegratorConfig,
) -> Result<HalfPeriodMoments> {
    let field = orbit.params.vector_field();
    let sys = |_t: f64, y: &[f64; 4], dy: &mut [f64; 4]| {
        let t2 = y[0] * y[0];
        dy[0] = y[1];
        dy[1] = field.acceleration(y[0]);
        dy[2] = t2;
        dy[3] = t2 * t2;
    };
    let [x0, v0] = orbit.canonical_initial;
    let end = integrate_final(&sys, [x0, v0, 0.0, 0.0], (0.0, 0.5 * orbit.period), config)?;
    Ok(HalfPeriodMoments {
        theta2: end[2],
        theta4: end[3],
    })
}

/// `X_m(E) = 4E + (m²−P)²`, `Y_m = X_m/(m²−P)²`, `Z_m = 1/2 − 1/(2√Y_m)`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ScaledEnergyFunctions {
    pub x: f64,
    pub y: f64,
    pub z: f64,
}

pub fn scaled_energy_functions(m: u32, p: f64, e: f64) -> Result<ScaledEnergyFunctions> {
    let params = ModeParams::new(m, p)?;
    if !(e > 0.0) || !e.is_finite() {
        return Err(Error::domain(format!(
            "scaled energy functions need E > 0, got {e}"
        )));
    }
    let d = params.k2() - p;
    if d == 0.0 {
        return Err(Error::domain("scaled energy functions need P ≠ m²"));
    }
    let x = 4.0 * e + d * d;
    let y = x / (d * d);
    Ok(ScaledEnergyFunctions {
        x,
        y,
        z: 0.5 - 0.5 / y.sqrt(),
    })
}
