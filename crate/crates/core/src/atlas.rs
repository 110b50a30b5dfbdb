//! Parameter sweeps over mode pairs and initial amplitudes, and bisection of
//! the energies where the stability verdict changes.

use std::io::Write;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::duffing::ModeParams;
use crate::hill::{classify_stability, StabilityConfig, Verdict};
use crate::regime::cazenave_limit_classify;
use crate::{Error, Result};

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub enum SweepAxis {
    /// `Θ_m(0)` with `Θ̇_m(0) = 0`.
    Theta0(Vec<f64>),
    Energy(Vec<f64>),
}

impl SweepAxis {
    fn values(&self) -> &[f64] {
        match self {
            SweepAxis::Theta0(v) | SweepAxis::Energy(v) => v,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum VerdictSource {
    Monodromy,
    /// Large-energy limit map; depends on `γ` only.
    CazenaveLimit,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SweepSpec {
    pub p: f64,
    /// `(m, n)` pairs, strictly increasing in `γ = n²/m²`.
    pub pairs: Vec<(u32, u32)>,
    pub axis: SweepAxis,
    pub verdict_source: VerdictSource,
    pub stability: StabilityConfig,
}

fn gamma_of(m: u32, n: u32) -> f64 {
    (n as f64 / m as f64).powi(2)
}

impl SweepSpec {
    pub fn validate(&self) -> Result<()> {
        if !self.p.is_finite() {
            return Err(Error::domain(format!(
                "load P must be finite, got {}",
                self.p
            )));
        }
        if self.pairs.is_empty() || self.axis.values().is_empty() {
            return Err(Error::domain("sweep grids must be non-empty"));
        }
        if self.pairs.iter().any(|&(m, n)| m == 0 || n == 0 || m == n) {
            return Err(Error::domain(
                "mode pairs must be distinct positive integers",
            ));
        }
        // compare n₁²m₂² < n₂²m₁² exactly
        let increasing = self.pairs.windows(2).all(|w| {
            let (m1, n1) = (w[0].0 as u128, w[0].1 as u128);
            let (m2, n2) = (w[1].0 as u128, w[1].1 as u128);
            n1 * n1 * m2 * m2 < n2 * n2 * m1 * m1
        });
        let values = self.axis.values();
        if !increasing
            || !values.windows(2).all(|w| w[0] < w[1])
            || values.iter().any(|v| !v.is_finite())
        {
            return Err(Error::domain(
                "sweep grids must be finite and strictly increasing",
            ));
        }
        self.stability.integrator.validate()
    }

    pub fn len(&self) -> usize {
        self.pairs.len() * self.axis.values().len()
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct AtlasCell {
    pub gamma: f64,
    pub m: u32,
    pub n: u32,
    pub p: f64,
    /// Absent for energy-parameterised sweeps.
    pub theta0: Option<f64>,
    pub e: f64,
    /// Absent when the cell failed.
    pub trace: Option<f64>,
    pub verdict: Option<Verdict>,
    /// `ok`, or a short failure tag.
    pub quality: String,
    pub message: Option<String>,
}

fn failure_tag(err: &Error) -> &'static str {
    match err {
        Error::Domain(_) => "domain",
        Error::StepLimit { .. } => "step_limit",
        Error::StepUnderflow { .. } => "step_underflow",
        Error::NoCrossing { .. } => "no_crossing",
        Error::Quadrature(_) => "quadrature",
        Error::NumericalQuality(_) => "numerical_quality",
        Error::CriterionDisagreement { .. } => "criterion_disagreement",
    }
}

fn compute_cell(spec: &SweepSpec, m: u32, n: u32, x: f64) -> AtlasCell {
    let (theta0, e) = match spec.axis {
        SweepAxis::Theta0(_) => {
            let e = ModeParams::new(m, spec.p)
                .map(|prm| prm.energy_at_rest(x))
                .unwrap_or(f64::NAN);
            (Some(x), e)
        }
        SweepAxis::Energy(_) => (None, x),
    };
    let mut cell = AtlasCell {
        gamma: gamma_of(m, n),
        m,
        n,
        p: spec.p,
        theta0,
        e,
        trace: None,
        verdict: None,
        quality: "ok".into(),
        message: None,
    };
    let outcome = match spec.verdict_source {
        VerdictSource::Monodromy => classify_stability(m, n, spec.p, e, &spec.stability)
            .map(|r| (r.monodromy.trace, r.verdict)),
        VerdictSource::CazenaveLimit => cazenave_limit_classify(
            cell.gamma,
            &spec.stability.integrator,
            spec.stability.tol_margin,
        )
        .map(|r| (r.trace, r.verdict)),
    };
    match outcome {
        Ok((trace, verdict)) => {
            cell.trace = Some(trace);
            cell.verdict = Some(verdict);
        }
        Err(err) => {
            cell.quality = failure_tag(&err).into();
            cell.message = Some(err.to_string());
        }
    }
    cell
}

/// Classifies every grid point, row-major over `pairs × axis`.
///
/// `jobs = None` uses the global rayon pool. Failures are recorded per cell.
pub fn sweep(spec: &SweepSpec, jobs: Option<usize>) -> Result<Vec<AtlasCell>> {
    spec.validate()?;
    let points: Vec<(u32, u32, f64)> = spec
        .pairs
        .iter()
        .flat_map(|&(m, n)| spec.axis.values().iter().map(move |&x| (m, n, x)))
        .collect();
    let run = || {
        points
            .par_iter()
            .map(|&(m, n, x)| compute_cell(spec, m, n, x))
            .collect::<Vec<_>>()
    };
    match jobs {
        Some(j) => {
            let pool = rayon::ThreadPoolBuilder::new()
                .num_threads(j.max(1))
                .build()
                .map_err(|e| Error::domain(format!("cannot build worker pool: {e}")))?;
            Ok(pool.install(run))
        }
        None => Ok(run()),
    }
}

pub const CSV_HEADER: &str = "gamma,m,n,P,theta0,E,trace,verdict,quality";

pub fn write_csv<W: Write>(cells: &[AtlasCell], mut out: W) -> std::io::Result<()> {
    writeln!(out, "{CSV_HEADER}")?;
    for c in cells {
        let verdict = c
            .verdict
            .map_or_else(|| "Failed".to_string(), |v| v.to_string());
        let theta0 = c.theta0.unwrap_or(f64::NAN);
        let trace = c.trace.unwrap_or(f64::NAN);
        writeln!(
            out,
            "{},{},{},{},{},{},{},{},{}",
            c.gamma, c.m, c.n, c.p, theta0, c.e, trace, verdict, c.quality
        )?;
    }
    Ok(())
}

/// Maximal runs of consecutive `Unstable` cells for one pair, as index ranges.
pub fn unstable_runs(cells: &[AtlasCell]) -> Vec<(usize, usize)> {
    let mut runs = Vec::new();
    let mut start = None;
    for (i, c) in cells.iter().enumerate() {
        match (c.verdict == Some(Verdict::Unstable), start) {
            (true, None) => start = Some(i),
            (false, Some(s)) => {
                runs.push((s, i - 1));
                start = None;
            }
            _ => {}
        }
    }
    if let Some(s) = start {
        runs.push((s, cells.len() - 1));
    }
    runs
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Threshold {
    pub energy: f64,
    pub below: Verdict,
    pub above: Verdict,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ThresholdSearch {
    pub samples: usize,
    /// Relative width at which bisection stops.
    pub refinement_tol: f64,
    /// Log-spaced samples (needs a positive range).
    pub log_spacing: bool,
}

impl Default for ThresholdSearch {
    fn default() -> Self {
        Self {
            samples: 64,
            refinement_tol: 1e-4,
            log_spacing: true,
        }
    }
}

/// Energies in `e_range` where the verdict changes between Stable and Unstable.
///
/// The range is sampled first; each sign change is then bisected. A Marginal
/// midpoint is accepted as the transition itself.
pub fn find_thresholds(
    m: u32,
    n: u32,
    p: f64,
    e_range: (f64, f64),
    search: &ThresholdSearch,
    stability: &StabilityConfig,
) -> Result<Vec<Threshold>> {
    let (lo, hi) = e_range;
    if !(lo < hi) {
        return Ok(Vec::new());
    }
    if search.samples < 2 || !(search.refinement_tol > 0.0) {
        return Err(Error::domain(
            "threshold search needs at least 2 samples and a positive tolerance",
        ));
    }
    let log = search.log_spacing && lo > 0.0;
    let at = |i: usize| {
        let s = i as f64 / (search.samples - 1) as f64;
        if log {
            (lo.ln() + s * (hi.ln() - lo.ln())).exp()
        } else {
            lo + s * (hi - lo)
        }
    };
    let verdict = |e: f64| classify_stability(m, n, p, e, stability).map(|r| r.verdict);
    let samples: Vec<(f64, Verdict)> = (0..search.samples)
        .map(|i| {
            let e = at(i);
            verdict(e).map(|v| (e, v))
        })
        .collect::<Result<_>>()?;
    let decided: Vec<&(f64, Verdict)> = samples
        .iter()
        .filter(|(_, v)| *v != Verdict::Marginal)
        .collect();
    let mut out = Vec::new();
    for w in decided.windows(2) {
        let (&(mut a, va), &(mut b, vb)) = (w[0], w[1]);
        if va == vb {
            continue;
        }
        let mut found = None;
        while (b - a) > search.refinement_tol * 0.5 * (a.abs() + b.abs()) {
            let mid = if log { (a * b).sqrt() } else { 0.5 * (a + b) };
            match verdict(mid)? {
                Verdict::Marginal => {
                    found = Some(mid);
                    break;
                }
                v if v == va => a = mid,
                _ => b = mid,
            }
        }
        out.push(Threshold {
            energy: found.unwrap_or(0.5 * (a + b)),
            below: va,
            above: vb,
        });
    }
    Ok(out)
}
