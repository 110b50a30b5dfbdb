//! Two interacting modes `w = Θ_m`, `z = Θ_n`:
//!
//! ```text
//! ẅ + m²(m²−P)w + m²(m²w² + n²z²)w = 0
//! z̈ + n²(n²−P)z + n²(n²z² + m²w²)z = 0
//! ```
//!
//! The total energy splits into the mode energies `E_w`, `E_z` and the
//! coupling energy `E_wz = m²n²w²z²/2`; only their sum is conserved.

use std::io::Write;

use serde::{Deserialize, Serialize};

use crate::duffing::{orbit_from_energy, ModeParams};
use crate::integrate::{integrate, IntegratorConfig, Trajectory};
use crate::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct TwoModeConfig {
    pub m: u32,
    pub n: u32,
    pub p: f64,
    pub w0: f64,
    pub w1: f64,
    pub z0: f64,
    pub z1: f64,
}

impl TwoModeConfig {
    pub fn validate(&self) -> Result<()> {
        if self.m == 0 || self.n == 0 || self.m == self.n {
            return Err(Error::domain(format!(
                "need distinct positive modes, got m = {}, n = {}",
                self.m, self.n
            )));
        }
        let vals = [self.p, self.w0, self.w1, self.z0, self.z1];
        if vals.iter().any(|v| !v.is_finite()) {
            return Err(Error::domain("load and initial data must be finite"));
        }
        Ok(())
    }

    /// Mode `m` on its canonical orbit of energy `e_w`; mode `n` starts at
    /// `z = 0` with velocity `√(2 e_z)`, so that `E_z(0) = e_z`.
    pub fn from_energies(m: u32, n: u32, p: f64, e_w: f64, e_z: f64) -> Result<Self> {
        if !(e_z >= 0.0) || !e_z.is_finite() {
            return Err(Error::domain(format!(
                "E_z(0) must be nonnegative, got {e_z}"
            )));
        }
        let orbit = orbit_from_energy(&ModeParams::new(m, p)?, e_w)?;
        let cfg = Self {
            m,
            n,
            p,
            w0: orbit.canonical_initial[0],
            w1: orbit.canonical_initial[1],
            z0: 0.0,
            z1: (2.0 * e_z).sqrt(),
        };
        cfg.validate()?;
        Ok(cfg)
    }

    fn coeffs(&self) -> Coeffs {
        let m2 = (self.m as f64).powi(2);
        let n2 = (self.n as f64).powi(2);
        Coeffs {
            lw: m2 * (m2 - self.p),
            lz: n2 * (n2 - self.p),
            m4: m2 * m2,
            n4: n2 * n2,
            mn: m2 * n2,
        }
    }

    pub fn initial_state(&self) -> [f64; 4] {
        [self.w0, self.w1, self.z0, self.z1]
    }

    /// Energy channels of a state `(w, ẇ, z, ż)`.
    pub fn channels(&self, y: &[f64; 4]) -> (f64, f64, f64) {
        self.coeffs().channels(y)
    }

    pub fn total_energy(&self) -> f64 {
        let (a, b, c) = self.channels(&self.initial_state());
        a + b + c
    }
}

#[derive(Debug, Clone, Copy)]
struct Coeffs {
    lw: f64,
    lz: f64,
    m4: f64,
    n4: f64,
    mn: f64,
}

impl Coeffs {
    fn channels(&self, y: &[f64; 4]) -> (f64, f64, f64) {
        let [w, wd, z, zd] = *y;
        let (w2, z2) = (w * w, z * z);
        let ew = 0.5 * wd * wd + 0.5 * self.lw * w2 + 0.25 * self.m4 * w2 * w2;
        let ez = 0.5 * zd * zd + 0.5 * self.lz * z2 + 0.25 * self.n4 * z2 * z2;
        (ew, ez, 0.5 * self.mn * w2 * z2)
    }
}

/// Channel energies sampled at the integrator output points.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct EnergyChannels {
    pub t: Vec<f64>,
    pub e_w: Vec<f64>,
    pub e_z: Vec<f64>,
    pub e_wz: Vec<f64>,
    pub e_total: f64,
}

impl EnergyChannels {
    /// Largest `|E_w + E_z + E_wz − E_total| / |E_total|` over the samples.
    pub fn max_relative_drift(&self) -> f64 {
        let scale = self.e_total.abs().max(f64::MIN_POSITIVE);
        self.e_w
            .iter()
            .zip(&self.e_z)
            .zip(&self.e_wz)
            .map(|((a, b), c)| ((a + b + c) - self.e_total).abs() / scale)
            .fold(0.0, f64::max)
    }
}

#[derive(Debug, Clone)]
pub struct TwoModeRun {
    pub config: TwoModeConfig,
    pub trajectory: Trajectory<4>,
    pub channels: EnergyChannels,
}

pub fn simulate(
    config: &TwoModeConfig,
    t_end: f64,
    integrator: &IntegratorConfig,
) -> Result<TwoModeRun> {
    config.validate()?;
    if !(t_end > 0.0 && t_end.is_finite()) {
        return Err(Error::domain(format!(
            "t_end must be positive, got {t_end}"
        )));
    }
    let c = config.coeffs();
    let sys = move |_t: f64, y: &[f64; 4], dy: &mut [f64; 4]| {
        let [w, wd, z, zd] = *y;
        let (w2, z2) = (w * w, z * z);
        dy[0] = wd;
        dy[1] = -(c.lw + c.m4 * w2 + c.mn * z2) * w;
        dy[2] = zd;
        dy[3] = -(c.lz + c.n4 * z2 + c.mn * w2) * z;
    };
    let trajectory = integrate(&sys, config.initial_state(), (0.0, t_end), integrator)?;
    let mut channels = EnergyChannels {
        t: Vec::with_capacity(trajectory.times.len()),
        e_w: Vec::with_capacity(trajectory.times.len()),
        e_z: Vec::with_capacity(trajectory.times.len()),
        e_wz: Vec::with_capacity(trajectory.times.len()),
        e_total: config.total_energy(),
    };
    for (t, y) in trajectory.times.iter().zip(&trajectory.states) {
        let (a, b, cc) = c.channels(y);
        channels.t.push(*t);
        channels.e_w.push(a);
        channels.e_z.push(b);
        channels.e_wz.push(cc);
    }
    Ok(TwoModeRun {
        config: *config,
        trajectory,
        channels,
    })
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum TransferHint {
    TransferObserved,
    NoTransfer,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct TransferReport {
    /// `max_t E_z(t) / E_z(0)`.
    pub max_growth_ratio: f64,
    pub time_of_peak: f64,
    pub verdict_hint: TransferHint,
}

pub const DEFAULT_TRANSFER_THRESHOLD: f64 = 100.0;

pub fn transfer_report(channels: &EnergyChannels, threshold: f64) -> Result<TransferReport> {
    let ez0 = *channels
        .e_z
        .first()
        .ok_or_else(|| Error::domain("no energy samples"))?;
    if !(ez0 > 0.0) {
        return Err(Error::domain(format!("E_z(0) must be positive, got {ez0}")));
    }
    let (i, peak) = channels
        .e_z
        .iter()
        .enumerate()
        .fold(
            (0, f64::NEG_INFINITY),
            |acc, (i, &v)| if v > acc.1 { (i, v) } else { acc },
        );
    let ratio = peak / ez0;
    Ok(TransferReport {
        max_growth_ratio: ratio,
        time_of_peak: channels.t[i],
        verdict_hint: if ratio > threshold {
            TransferHint::TransferObserved
        } else {
            TransferHint::NoTransfer
        },
    })
}

/// Compact outcome of a run.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SimulationSummary {
    pub config: TwoModeConfig,
    pub t_end: f64,
    pub e_total: f64,
    pub max_relative_drift: f64,
    pub transfer: Option<TransferReport>,
}

impl TwoModeRun {
    /// Transfer statistics are present when `E_z(0) > 0`.
    pub fn summary(&self, threshold: f64) -> SimulationSummary {
        SimulationSummary {
            config: self.config,
            t_end: self.trajectory.t_end(),
            e_total: self.channels.e_total,
            max_relative_drift: self.channels.max_relative_drift(),
            transfer: transfer_report(&self.channels, threshold).ok(),
        }
    }
}

/// `𝓤(w, z)`, the potential whose sublevels contain the orbits.
pub fn potential(m: u32, n: u32, p: f64, w: f64, z: f64) -> f64 {
    let m2 = (m as f64).powi(2);
    let n2 = (n as f64).powi(2);
    let (w2, z2) = (w * w, z * z);
    0.5 * m2 * (m2 - p) * w2
        + 0.5 * n2 * (n2 - p) * z2
        + 0.25 * m2 * m2 * w2 * w2
        + 0.25 * n2 * n2 * z2 * z2
        + 0.5 * m2 * n2 * w2 * z2
}

/// Hessian of [`potential`] at `(w, z)`.
pub fn potential_hessian(m: u32, n: u32, p: f64, w: f64, z: f64) -> [[f64; 2]; 2] {
    let m2 = (m as f64).powi(2);
    let n2 = (n as f64).powi(2);
    let uww = m2 * (m2 - p) + 3.0 * m2 * m2 * w * w + m2 * n2 * z * z;
    let uzz = n2 * (n2 - p) + 3.0 * n2 * n2 * z * z + m2 * n2 * w * w;
    let uwz = 2.0 * m2 * n2 * w * z;
    [[uww, uwz], [uwz, uzz]]
}

/// Writes `t,w,w_dot,z,z_dot,E_w,E_z,E_wz` rows.
pub fn write_csv<W: Write>(run: &TwoModeRun, mut out: W) -> std::io::Result<()> {
    writeln!(out, "t,w,w_dot,z,z_dot,E_w,E_z,E_wz")?;
    let ch = &run.channels;
    for (i, y) in run.trajectory.states.iter().enumerate() {
        writeln!(
            out,
            "{},{},{},{},{},{},{},{}",
            ch.t[i], y[0], y[1], y[2], y[3], ch.e_w[i], ch.e_z[i], ch.e_wz[i]
        )?;
    }
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::duffing::orbit_trajectory;

    fn tight() -> IntegratorConfig {
        IntegratorConfig::with_tolerances(1e-12, 1e-14)
    }

    #[test]
    fn invariant_subspace_reproduces_single_mode() {
        let cfg = TwoModeConfig::from_energies(2, 1, 0.0, 1.0, 0.0).unwrap();
        let orbit = orbit_from_energy(&ModeParams::new(2, 0.0).unwrap(), 1.0).unwrap();
        let run = simulate(&cfg, 3.0 * orbit.period, &tight()).unwrap();
        let single = orbit_trajectory(&orbit, 3.0, &tight()).unwrap();
        for y in &run.trajectory.states {
            assert_eq!((y[2], y[3]), (0.0, 0.0));
        }
        let a = run.trajectory.final_state();
        let b = single.final_state();
        assert!((a[0] - b[0]).abs() < 1e-12 && (a[1] - b[1]).abs() < 1e-12);
    }

    #[test]
    fn swap_symmetry() {
        let a = TwoModeConfig {
            m: 2,
            n: 3,
            p: 1.0,
            w0: 0.3,
            w1: 0.1,
            z0: 0.2,
            z1: -0.4,
        };
        let b = TwoModeConfig {
            m: 3,
            n: 2,
            w0: a.z0,
            w1: a.z1,
            z0: a.w0,
            z1: a.w1,
            ..a
        };
        let ra = simulate(&a, 5.0, &tight()).unwrap();
        let rb = simulate(&b, 5.0, &tight()).unwrap();
        let (ya, yb) = (ra.trajectory.final_state(), rb.trajectory.final_state());
        for (i, j) in [(0, 2), (1, 3), (2, 0), (3, 1)] {
            assert!((ya[i] - yb[j]).abs() < 1e-12, "{ya:?} {yb:?}");
        }
    }

    #[test]
    fn energy_is_conserved_and_confined() {
        let cfg = TwoModeConfig {
            m: 1,
            n: 2,
            p: 2.0,
            w0: 1.2,
            w1: 0.0,
            z0: 0.1,
            z1: 0.05,
        };
        let run = simulate(&cfg, 50.0, &tight()).unwrap();
        assert!(run.channels.max_relative_drift() < 1e-8);
        for y in &run.trajectory.states {
            assert!(potential(1, 2, 2.0, y[0], y[2]) <= run.channels.e_total + 1e-8);
        }
    }

    #[test]
    fn potential_shape() {
        assert_eq!(potential(2, 3, 1.0, 0.0, 0.0), 0.0);
        let h = potential_hessian(1, 2, 5.0, 0.0, 0.0);
        assert!(h[0][0] < 0.0 && h[0][0] * h[1][1] - h[0][1] * h[1][0] > 0.0);
        for i in -5..=5 {
            for j in -5..=5 {
                let (w, z) = (0.3 * i as f64, 0.3 * j as f64);
                let h = potential_hessian(2, 3, 3.0, w, z);
                let det = h[0][0] * h[1][1] - h[0][1] * h[1][0];
                assert!(h[0][0] >= 0.0 && h[1][1] >= 0.0 && det >= -1e-9, "{w} {z}");
            }
        }
    }

    #[test]
    fn transfer_report_basics() {
        let ch = EnergyChannels {
            t: vec![0.0, 1.0, 2.0],
            e_w: vec![1.0; 3],
            e_z: vec![1e-8, 1e-8, 1e-8],
            e_wz: vec![0.0; 3],
            e_total: 1.0 + 1e-8,
        };
        let r = transfer_report(&ch, DEFAULT_TRANSFER_THRESHOLD).unwrap();
        assert_eq!(r.max_growth_ratio, 1.0);
        assert_eq!(r.verdict_hint, TransferHint::NoTransfer);
        let zero = EnergyChannels {
            e_z: vec![0.0; 3],
            ..ch
        };
        assert!(transfer_report(&zero, 100.0).unwrap_err().is_domain());
    }

    #[test]
    fn rejects_bad_config() {
        assert!(TwoModeConfig::from_energies(2, 2, 0.0, 1.0, 1e-8).is_err());
        assert!(TwoModeConfig::from_energies(2, 1, 0.0, 1.0, -1.0).is_err());
        let cfg = TwoModeConfig::from_energies(2, 1, 0.0, 1.0, 0.0).unwrap();
        assert!(simulate(&cfg, 0.0, &tight()).is_err());
    }

    #[test]
    fn csv_header_and_rows() {
        let cfg = TwoModeConfig::from_energies(2, 1, 0.0, 1.0, 1e-6).unwrap();
        let run = simulate(&cfg, 1.0, &IntegratorConfig::default()).unwrap();
        let mut buf = Vec::new();
        write_csv(&run, &mut buf).unwrap();
        let text = String::from_utf8(buf).unwrap();
        let mut lines = text.lines();
        assert_eq!(lines.next(), Some("t,w,w_dot,z,z_dot,E_w,E_z,E_wz"));
        assert_eq!(lines.count(), run.trajectory.states.len());
    }
}
