//! Regimes of the pair `(m, n)` under load `P`.
//!
//! At large energy the ratio `γ = n²/m²` decides stability through the
//! interval families
//!
//! ```text
//! I_S = ∪ₖ (k(2k+1), (k+1)(2k+1)),   I_U = ∪ₖ ((k+1)(2k+1), (k+1)(2k+3)).
//! ```
//!
//! All endpoints are triangular numbers `T_j = j(j+1)/2`, so membership is
//! decided exactly in integer arithmetic.

use std::fmt;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::hill::{multipliers_from_trace, MonodromyResult, Verdict};
use crate::integrate::{find_zero_crossing, integrate_final, CrossingDirection, IntegratorConfig};
use crate::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum Membership {
    InIU(u64),
    InIS(u64),
    /// `γ = (k+1)(2k+1)`, the lower end of the `k`-th unstable interval.
    BoundaryLower(u64),
    /// `γ = (k+1)(2k+3)`, the upper end of the `k`-th unstable interval.
    BoundaryUpper(u64),
}

impl Membership {
    pub fn k(self) -> u64 {
        match self {
            Membership::InIU(k)
            | Membership::InIS(k)
            | Membership::BoundaryLower(k)
            | Membership::BoundaryUpper(k) => k,
        }
    }

    pub fn is_boundary(self) -> bool {
        matches!(
            self,
            Membership::BoundaryLower(_) | Membership::BoundaryUpper(_)
        )
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct FrequencyRatioClass {
    pub gamma: f64,
    pub membership: Membership,
    pub k_index: u64,
}

fn triangular(j: u128) -> u128 {
    j * (j + 1) / 2
}

/// Exact class of `γ = n²/m²`.
pub fn classify_gamma(m: u32, n: u32) -> Result<FrequencyRatioClass> {
    if m == 0 || n == 0 {
        return Err(Error::domain(format!(
            "mode indices must be positive, got m = {m}, n = {n}"
        )));
    }
    let mm = (m as u128).pow(2);
    let nn = (n as u128).pow(2);
    let gamma = nn as f64 / mm as f64;
    // largest j with T_j·m² ≤ n²
    let mut j = (((8.0 * gamma + 1.0).sqrt() - 1.0) / 2.0).floor().max(0.0) as u128;
    while triangular(j) * mm > nn {
        j -= 1;
    }
    while triangular(j + 1) * mm <= nn {
        j += 1;
    }
    let membership = if triangular(j) * mm == nn {
        // j ≥ 1 here because n ≥ 1
        if j % 2 == 1 {
            Membership::BoundaryLower(((j - 1) / 2) as u64)
        } else {
            Membership::BoundaryUpper((j / 2 - 1) as u64)
        }
    } else if j.is_multiple_of(2) {
        Membership::InIS((j / 2) as u64)
    } else {
        Membership::InIU(((j - 1) / 2) as u64)
    };
    Ok(FrequencyRatioClass {
        gamma,
        membership,
        k_index: membership.k(),
    })
}

/// Class of a real ratio `γ > 0`; endpoints are matched exactly.
pub fn membership_of_ratio(gamma: f64) -> Result<Membership> {
    if !(gamma > 0.0) || !gamma.is_finite() {
        return Err(Error::domain(format!(
            "gamma must be positive, got {gamma}"
        )));
    }
    let tri = |j: u64| (j * (j + 1) / 2) as f64;
    let mut j = (((8.0 * gamma + 1.0).sqrt() - 1.0) / 2.0).floor().max(0.0) as u64;
    while j > 0 && tri(j) > gamma {
        j -= 1;
    }
    while tri(j + 1) <= gamma {
        j += 1;
    }
    Ok(if tri(j) == gamma {
        if j % 2 == 1 {
            Membership::BoundaryLower((j - 1) / 2)
        } else {
            Membership::BoundaryUpper(j / 2 - 1)
        }
    } else if j.is_multiple_of(2) {
        Membership::InIS(j / 2)
    } else {
        Membership::InIU((j - 1) / 2)
    })
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ResonanceDiagnostics {
    /// Integer `ℓ ≥ 2` with `n√(n²−P) = ℓ m√(m²−P)`, when one exists.
    pub ell: Option<u64>,
    /// Largest `μ ≥ 0` with `μ m√(m²−P) < n√(n²−P)`; needs `m², n² > P`.
    pub mu: Option<u64>,
    /// `(n/m)√(2(n²−m²)/(P−m²))`; needs `m² < P` and `m < n`.
    pub l: Option<f64>,
    pub l_is_integer: Option<bool>,
    /// `3m⁴L⁴ − (3m⁴+4n²m²)L² + 4n²m² − 4n⁴`.
    pub ppp2_value: Option<f64>,
}

const RESONANCE_TOL: f64 = 1e-12;

fn near_integer(x: f64) -> Option<u64> {
    let r = x.round();
    ((x - r).abs() <= RESONANCE_TOL * x.abs().max(1.0)).then_some(r as u64)
}

pub fn ppp2_polynomial(m: f64, n: f64, l: f64) -> f64 {
    let (m2, n2, l2) = (m * m, n * n, l * l);
    3.0 * m2 * m2 * l2 * l2 - (3.0 * m2 * m2 + 4.0 * n2 * m2) * l2 + 4.0 * n2 * m2 - 4.0 * n2 * n2
}

pub fn resonance_diagnostics(m: u32, n: u32, p: f64) -> Result<ResonanceDiagnostics> {
    if m == 0 || n == 0 || !p.is_finite() {
        return Err(Error::domain(format!(
            "invalid triple m = {m}, n = {n}, P = {p}"
        )));
    }
    let (mf, nf) = (m as f64, n as f64);
    let (m2, n2) = (mf * mf, nf * nf);
    let (mut ell, mut mu) = (None, None);
    if m2 > p && n2 > p {
        let r = nf * (n2 - p).sqrt() / (mf * (m2 - p).sqrt());
        ell = near_integer(r).filter(|&l| l >= 2);
        mu = Some(match near_integer(r) {
            Some(k) => k.saturating_sub(1),
            None => r.floor() as u64,
        });
    }
    let (mut l, mut l_is_integer, mut ppp2_value) = (None, None, None);
    if m2 < p && m < n {
        let lv = nf / mf * (2.0 * (n2 - m2) / (p - m2)).sqrt();
        l = Some(lv);
        l_is_integer = Some(near_integer(lv).is_some());
        ppp2_value = Some(ppp2_polynomial(mf, nf, lv));
    }
    Ok(ResonanceDiagnostics {
        ell,
        mu,
        l,
        l_is_integer,
        ppp2_value,
    })
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct Ppp2Hit {
    pub m: u64,
    pub n: u64,
    pub l: u64,
}

fn ppp2_exact(m: i128, n: i128, l: i128) -> i128 {
    let (m2, n2, l2) = (m * m, n * n, l * l);
    3 * m2 * m2 * l2 * l2 - (3 * m2 * m2 + 4 * n2 * m2) * l2 + 4 * n2 * m2 - 4 * n2 * n2
}

/// Integer roots `L ≥ 1` of the quartic for `2 ≤ n ≤ n_max`, `1 ≤ m < n`.
///
/// The quartic is a quadratic in `L²` with exactly one positive root; only
/// the integers next to its square root are tested, exactly.
pub fn ppp2_scan(n_max: u64) -> Result<Vec<Ppp2Hit>> {
    if n_max < 2 {
        return Err(Error::domain(format!(
            "n_max must be at least 2, got {n_max}"
        )));
    }
    let hits = (2..=n_max)
        .into_par_iter()
        .flat_map_iter(|n| {
            (1..n).flat_map(move |m| {
                let (mf, nf) = (m as f64, n as f64);
                let a = 3.0 * mf.powi(4);
                let b = -(3.0 * mf.powi(4) + 4.0 * nf * nf * mf * mf);
                let c = 4.0 * nf * nf * mf * mf - 4.0 * nf.powi(4);
                let x = (-b + (b * b - 4.0 * a * c).sqrt()) / (2.0 * a);
                let centre = x.sqrt().round() as i128;
                (centre - 1..=centre + 1)
                    .filter(move |&l| l >= 1 && ppp2_exact(m as i128, n as i128, l) == 0)
                    .map(move |l| Ppp2Hit { m, n, l: l as u64 })
            })
        })
        .collect();
    Ok(hits)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum TableRow {
    /// `P ≤ n² < m²`
    PLeN2LtM2,
    /// `n² < P ≤ m²`
    N2LtPLeM2,
    /// `n² < m² < P`
    N2LtM2LtP,
    /// `P < m² < n²`
    PLtM2LtN2,
    /// `P = m² < n²`
    PEqM2LtN2,
    /// `m² < P ≤ n²`
    M2LtPLeN2,
    /// `m² < n² < P`
    M2LtN2LtP,
}

impl TableRow {
    pub fn label(self) -> &'static str {
        match self {
            TableRow::PLeN2LtM2 => "P ≤ n² < m²",
            TableRow::N2LtPLeM2 => "n² < P ≤ m²",
            TableRow::N2LtM2LtP => "n² < m² < P",
            TableRow::PLtM2LtN2 => "P < m² < n²",
            TableRow::PEqM2LtN2 => "P = m² < n²",
            TableRow::M2LtPLeN2 => "m² < P ≤ n²",
            TableRow::M2LtN2LtP => "m² < n² < P",
        }
    }
}

impl fmt::Display for TableRow {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.label())
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum LowPrediction {
    S,
    I,
    Unknown,
}

/// Conjectured behaviour at the ends of the unstable intervals; never a theorem.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum ConjectureHint {
    ConjecturedUnstable,
    ConjecturedStable,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum GammaPrediction {
    S,
    I,
    Boundary(ConjectureHint),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum HighPrediction {
    S,
    I,
    DependsOnGamma(GammaPrediction),
}

impl HighPrediction {
    /// The verdict a high-energy computation should return, if one is asserted.
    pub fn expected_verdict(self) -> Option<Verdict> {
        match self {
            HighPrediction::S | HighPrediction::DependsOnGamma(GammaPrediction::S) => {
                Some(Verdict::Stable)
            }
            HighPrediction::I | HighPrediction::DependsOnGamma(GammaPrediction::I) => {
                Some(Verdict::Unstable)
            }
            HighPrediction::DependsOnGamma(GammaPrediction::Boundary(_)) => None,
        }
    }
}

impl LowPrediction {
    pub fn expected_verdict(self) -> Option<Verdict> {
        match self {
            LowPrediction::S => Some(Verdict::Stable),
            LowPrediction::I => Some(Verdict::Unstable),
            LowPrediction::Unknown => None,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RegimeReport {
    pub m: u32,
    pub n: u32,
    pub p: f64,
    pub ordering: TableRow,
    pub low_energy_prediction: LowPrediction,
    pub high_energy_prediction: HighPrediction,
    pub theorem_refs: Vec<String>,
    pub gamma: FrequencyRatioClass,
    pub resonance: ResonanceDiagnostics,
}

fn gamma_prediction(class: &FrequencyRatioClass) -> GammaPrediction {
    match class.membership {
        Membership::InIS(_) => GammaPrediction::S,
        Membership::InIU(_) => GammaPrediction::I,
        Membership::BoundaryLower(_) => {
            GammaPrediction::Boundary(ConjectureHint::ConjecturedUnstable)
        }
        Membership::BoundaryUpper(_) => {
            GammaPrediction::Boundary(ConjectureHint::ConjecturedStable)
        }
    }
}

/// Row of the stability summary table for `(m, n, P)` and its predictions.
pub fn table_regime(m: u32, n: u32, p: f64) -> Result<RegimeReport> {
    if m == 0 || n == 0 || m == n {
        return Err(Error::domain(format!(
            "need distinct positive modes, got m = {m}, n = {n}"
        )));
    }
    if !(p >= 0.0) || !p.is_finite() {
        return Err(Error::domain(format!(
            "load P must be finite and nonnegative, got {p}"
        )));
    }
    let m2 = (m as f64).powi(2);
    let n2 = (n as f64).powi(2);
    let gamma = classify_gamma(m, n)?;
    let by_gamma = HighPrediction::DependsOnGamma(gamma_prediction(&gamma));
    let (ordering, low, high, refs): (_, _, _, &[&str]) = if n < m {
        if p <= n2 {
            (
                TableRow::PLeN2LtM2,
                LowPrediction::S,
                HighPrediction::S,
                &["stability0", "stability11"],
            )
        } else if p <= m2 {
            (
                TableRow::N2LtPLeM2,
                LowPrediction::I,
                HighPrediction::S,
                &["stability2"],
            )
        } else {
            (
                TableRow::N2LtM2LtP,
                LowPrediction::I,
                HighPrediction::S,
                &["stability3"],
            )
        }
    } else if p < m2 {
        (
            TableRow::PLtM2LtN2,
            LowPrediction::S,
            by_gamma,
            &["stability12"],
        )
    } else if p == m2 {
        (
            TableRow::PEqM2LtN2,
            LowPrediction::Unknown,
            by_gamma,
            &["t:limit-case"],
        )
    } else if p <= n2 {
        (
            TableRow::M2LtPLeN2,
            LowPrediction::S,
            by_gamma,
            &["stability22"],
        )
    } else {
        (
            TableRow::M2LtN2LtP,
            LowPrediction::S,
            by_gamma,
            &["stability4"],
        )
    };
    Ok(RegimeReport {
        m,
        n,
        p,
        ordering,
        low_energy_prediction: low,
        high_energy_prediction: high,
        theorem_refs: refs.iter().map(|s| s.to_string()).collect(),
        gamma,
        resonance: resonance_diagnostics(m, n, p)?,
    })
}

/// First positive zero `θ` of `ü + u³ = 0`, `u(0) = 0`, `u̇(0) = 1`.
pub fn cazenave_first_zero(config: &IntegratorConfig) -> Result<f64> {
    let sys = |_t: f64, y: &[f64; 2], dy: &mut [f64; 2]| {
        dy[0] = y[1];
        dy[1] = -y[0].powi(3);
    };
    find_zero_crossing(
        &sys,
        [0.0, 1.0],
        0,
        CrossingDirection::Falling,
        (0.0, 10.0),
        config,
    )
}

/// Classifies the limit map `B_γ = −Φ(θ)` of `η̈ + γu(t)²η = 0` over `[0, θ]`.
pub fn cazenave_limit_classify(
    gamma: f64,
    config: &IntegratorConfig,
    tol_margin: f64,
) -> Result<MonodromyResult> {
    if !(gamma > 0.0) || !gamma.is_finite() {
        return Err(Error::domain(format!(
            "gamma must be positive, got {gamma}"
        )));
    }
    let theta = cazenave_first_zero(config)?;
    let sys = move |_t: f64, y: &[f64; 6], dy: &mut [f64; 6]| {
        let a = gamma * y[0] * y[0];
        dy[0] = y[1];
        dy[1] = -y[0].powi(3);
        dy[2] = y[3];
        dy[3] = -a * y[2];
        dy[4] = y[5];
        dy[5] = -a * y[4];
    };
    let end = integrate_final(&sys, [0.0, 1.0, 1.0, 0.0, 0.0, 1.0], (0.0, theta), config)?;
    let matrix = [[-end[2], -end[4]], [-end[3], -end[5]]];
    let det = matrix[0][0] * matrix[1][1] - matrix[0][1] * matrix[1][0];
    let trace = matrix[0][0] + matrix[1][1];
    Ok(MonodromyResult {
        matrix,
        det,
        trace,
        multipliers: multipliers_from_trace(trace),
        verdict: Verdict::from_trace(trace, tol_margin),
    })
}
