//! Adaptive Dormand–Prince 5(4) integration with dense output and
//! zero-crossing detection.
//!
//! States are fixed-size arrays so the coupled systems used elsewhere in the
//! crate (2, 3, 4 and 6 components) stay on the stack.

use serde::{Deserialize, Serialize};

use crate::{Error, Result};

/// Right-hand side of `y' = f(t, y)`.
pub trait OdeSystem<const N: usize> {
    fn rhs(&self, t: f64, y: &[f64; N], dy: &mut [f64; N]);
}

impl<F, const N: usize> OdeSystem<N> for F
where
    F: Fn(f64, &[f64; N], &mut [f64; N]),
{
    fn rhs(&self, t: f64, y: &[f64; N], dy: &mut [f64; N]) {
        self(t, y, dy)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct IntegratorConfig {
    pub rel_tol: f64,
    pub abs_tol: f64,
    /// Unbounded by default; `null` in JSON.
    #[serde(with = "unbounded")]
    pub max_step: f64,
    pub max_steps: usize,
}

mod unbounded {
    use serde::{Deserialize, Deserializer, Serializer};

    pub fn serialize<S: Serializer>(v: &f64, s: S) -> Result<S::Ok, S::Error> {
        if v.is_finite() {
            s.serialize_some(v)
        } else {
            s.serialize_none()
        }
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> Result<f64, D::Error> {
        Ok(Option::<f64>::deserialize(d)?.unwrap_or(f64::INFINITY))
    }
}

impl Default for IntegratorConfig {
    fn default() -> Self {
        Self {
            rel_tol: 1e-10,
            abs_tol: 1e-12,
            max_step: f64::INFINITY,
            max_steps: 2_000_000,
        }
    }
}

impl IntegratorConfig {
    pub fn with_tolerances(rel_tol: f64, abs_tol: f64) -> Self {
        Self {
            rel_tol,
            abs_tol,
            ..Self::default()
        }
    }

    pub fn validate(&self) -> Result<()> {
        if !(self.rel_tol > 0.0 && self.abs_tol > 0.0) {
            return Err(Error::domain(
                "integrator tolerances must be strictly positive",
            ));
        }
        if !(self.max_step > 0.0) {
            return Err(Error::domain("max_step must be positive"));
        }
        if self.max_steps == 0 {
            return Err(Error::domain("max_steps must be at least 1"));
        }
        Ok(())
    }
}

// Dormand–Prince 5(4) tableau.
const C2: f64 = 1.0 / 5.0;
const C3: f64 = 3.0 / 10.0;
const C4: f64 = 4.0 / 5.0;
const C5: f64 = 8.0 / 9.0;
const A21: f64 = 1.0 / 5.0;
const A31: f64 = 3.0 / 40.0;
const A32: f64 = 9.0 / 40.0;
const A41: f64 = 44.0 / 45.0;
const A42: f64 = -56.0 / 15.0;
const A43: f64 = 32.0 / 9.0;
const A51: f64 = 19372.0 / 6561.0;
const A52: f64 = -25360.0 / 2187.0;
const A53: f64 = 64448.0 / 6561.0;
const A54: f64 = -212.0 / 729.0;
const A61: f64 = 9017.0 / 3168.0;
const A62: f64 = -355.0 / 33.0;
const A63: f64 = 46732.0 / 5247.0;
const A64: f64 = 49.0 / 176.0;
const A65: f64 = -5103.0 / 18656.0;
const A71: f64 = 35.0 / 384.0;
const A73: f64 = 500.0 / 1113.0;
const A74: f64 = 125.0 / 192.0;
const A75: f64 = -2187.0 / 6784.0;
const A76: f64 = 11.0 / 84.0;
// difference between the 5th and 4th order weights
const E1: f64 = 71.0 / 57600.0;
const E3: f64 = -71.0 / 16695.0;
const E4: f64 = 71.0 / 1920.0;
const E5: f64 = -17253.0 / 339200.0;
const E6: f64 = 22.0 / 525.0;
const E7: f64 = -1.0 / 40.0;
// continuous extension
const D1: f64 = -12715105075.0 / 11282082432.0;
const D3: f64 = 87487479700.0 / 32700410799.0;
const D4: f64 = -10690763975.0 / 1880347072.0;
const D5: f64 = 701980252875.0 / 199316789632.0;
const D6: f64 = -1453857185.0 / 822651844.0;
const D7: f64 = 69997945.0 / 29380423.0;

/// Interpolant over one accepted step `[t0, t0 + h]`.
#[derive(Debug, Clone, Copy)]
pub struct DenseSegment<const N: usize> {
    pub t0: f64,
    pub h: f64,
    coeffs: [[f64; N]; 5],
}

impl<const N: usize> DenseSegment<N> {
    pub fn t1(&self) -> f64 {
        self.t0 + self.h
    }

    /// Interpolated state at `t` (meaningful for `t` inside the step).
    pub fn eval(&self, t: f64) -> [f64; N] {
        let s = (t - self.t0) / self.h;
        let s1 = 1.0 - s;
        let [r1, r2, r3, r4, r5] = &self.coeffs;
        std::array::from_fn(|i| r1[i] + s * (r2[i] + s1 * (r3[i] + s * (r4[i] + s1 * r5[i]))))
    }

    /// Interpolated value of one component.
    pub fn eval_component(&self, t: f64, i: usize) -> f64 {
        let s = (t - self.t0) / self.h;
        let s1 = 1.0 - s;
        let [r1, r2, r3, r4, r5] = &self.coeffs;
        r1[i] + s * (r2[i] + s1 * (r3[i] + s * (r4[i] + s1 * r5[i])))
    }

    /// Time derivative of the interpolant of one component.
    pub fn derivative_component(&self, t: f64, i: usize) -> f64 {
        let s = (t - self.t0) / self.h;
        let [_, r2, r3, r4, r5] = &self.coeffs;
        // d/ds of r2 s + r3 s(1-s) + r4 s²(1-s) + r5 s²(1-s)²
        let ds = r2[i]
            + r3[i] * (1.0 - 2.0 * s)
            + r4[i] * (2.0 * s - 3.0 * s * s)
            + r5[i] * (2.0 * s - 6.0 * s * s + 4.0 * s * s * s);
        ds / self.h
    }
}

/// One accepted step.
#[derive(Debug, Clone, Copy)]
pub struct Step<const N: usize> {
    pub t: f64,
    pub y: [f64; N],
    pub segment: DenseSegment<N>,
}

/// Step-by-step driver. Each call to [`Stepper::step`] advances by one accepted step
/// and never overshoots `t_end`.
pub struct Stepper<'a, S, const N: usize> {
    system: &'a S,
    config: IntegratorConfig,
    t: f64,
    y: [f64; N],
    f: [f64; N],
    h: f64,
    t_end: f64,
    steps: usize,
}

impl<'a, S: OdeSystem<N>, const N: usize> Stepper<'a, S, N> {
    const MIN_STEP: f64 = 1e-14;

    pub fn new(
        system: &'a S,
        y0: [f64; N],
        t0: f64,
        t_end: f64,
        config: &IntegratorConfig,
    ) -> Result<Self> {
        config.validate()?;
        if !(t0 < t_end) || !t0.is_finite() || !t_end.is_finite() {
            return Err(Error::domain(format!(
                "time span must satisfy t0 < t1, got ({t0}, {t_end})"
            )));
        }
        let mut f = [0.0; N];
        system.rhs(t0, &y0, &mut f);
        let mut stepper = Self {
            system,
            config: *config,
            t: t0,
            y: y0,
            f,
            h: 0.0,
            t_end,
            steps: 0,
        };
        stepper.h = stepper.initial_step();
        Ok(stepper)
    }

    pub fn time(&self) -> f64 {
        self.t
    }

    pub fn state(&self) -> &[f64; N] {
        &self.y
    }

    pub fn finished(&self) -> bool {
        self.t >= self.t_end
    }

    fn scale(&self, a: f64, b: f64) -> f64 {
        self.config.abs_tol + self.config.rel_tol * a.abs().max(b.abs())
    }

    // Starting step from the norms of y, f and a trial Euler step (Hairer–Wanner).
    #[allow(clippy::needless_range_loop)]
    fn initial_step(&self) -> f64 {
        let span = self.t_end - self.t;
        let mut d0 = 0.0;
        let mut d1 = 0.0;
        for i in 0..N {
            let sc = self.scale(self.y[i], self.y[i]);
            d0 += (self.y[i] / sc).powi(2);
            d1 += (self.f[i] / sc).powi(2);
        }
        let n = N as f64;
        let (d0, d1) = ((d0 / n).sqrt(), (d1 / n).sqrt());
        let mut h0 = if d0 < 1e-5 || d1 < 1e-5 {
            1e-6
        } else {
            0.01 * d0 / d1
        };
        h0 = h0.min(span).min(self.config.max_step);
        let y1: [f64; N] = std::array::from_fn(|i| self.y[i] + h0 * self.f[i]);
        let mut f1 = [0.0; N];
        self.system.rhs(self.t + h0, &y1, &mut f1);
        let mut d2 = 0.0;
        for i in 0..N {
            let sc = self.scale(self.y[i], self.y[i]);
            d2 += ((f1[i] - self.f[i]) / sc).powi(2);
        }
        let d2 = (d2 / n).sqrt() / h0;
        let h1 = if d1.max(d2) <= 1e-15 {
            (h0 * 1e-3).max(1e-6)
        } else {
            (0.01 / d1.max(d2)).powf(0.2)
        };
        (100.0 * h0)
            .min(h1)
            .max(1e3 * Self::MIN_STEP * self.t.abs().max(1.0))
            .min(span)
            .min(self.config.max_step)
    }

    /// Advances by one accepted step. Returns `Ok(None)` once `t_end` is reached.
    pub fn step(&mut self) -> Result<Option<Step<N>>> {
        if self.finished() {
            return Ok(None);
        }
        loop {
            if self.steps >= self.config.max_steps {
                return Err(Error::StepLimit {
                    t: self.t,
                    max_steps: self.config.max_steps,
                });
            }
            self.steps += 1;
            let remaining = self.t_end - self.t;
            let mut h = self.h.min(self.config.max_step);
            let last = h >= remaining * (1.0 - 1e-12);
            if last {
                h = remaining;
            }
            if h < Self::MIN_STEP * self.t.abs().max(1.0) && !last {
                return Err(Error::StepUnderflow { t: self.t, h });
            }

            let (y_new, f_new, k, err) = self.attempt(h);
            if err <= 1.0 {
                let y0 = self.y;
                let ydiff: [f64; N] = std::array::from_fn(|i| y_new[i] - y0[i]);
                let bspl: [f64; N] = std::array::from_fn(|i| h * k[0][i] - ydiff[i]);
                let segment = DenseSegment {
                    t0: self.t,
                    h,
                    coeffs: [
                        y0,
                        ydiff,
                        bspl,
                        std::array::from_fn(|i| ydiff[i] - h * f_new[i] - bspl[i]),
                        std::array::from_fn(|i| {
                            h * (D1 * k[0][i]
                                + D3 * k[2][i]
                                + D4 * k[3][i]
                                + D5 * k[4][i]
                                + D6 * k[5][i]
                                + D7 * f_new[i])
                        }),
                    ],
                };
                self.t = if last { self.t_end } else { self.t + h };
                self.y = y_new;
                self.f = f_new;
                let factor = (0.9 * err.max(1e-10).powf(-0.2)).clamp(0.2, 10.0);
                self.h = h * factor;
                return Ok(Some(Step {
                    t: self.t,
                    y: self.y,
                    segment,
                }));
            }
            let factor = (0.9 * err.powf(-0.2)).clamp(0.1, 1.0);
            self.h = h * factor;
            if !self.h.is_finite() || self.h < Self::MIN_STEP * self.t.abs().max(1.0) {
                return Err(Error::StepUnderflow {
                    t: self.t,
                    h: self.h,
                });
            }
        }
    }

    fn attempt(&self, h: f64) -> ([f64; N], [f64; N], [[f64; N]; 6], f64) {
        let (t, y, sys) = (self.t, &self.y, self.system);
        let k1 = self.f;
        let mut k2 = [0.0; N];
        let mut k3 = [0.0; N];
        let mut k4 = [0.0; N];
        let mut k5 = [0.0; N];
        let mut k6 = [0.0; N];
        let mut k7 = [0.0; N];

        let tmp: [f64; N] = std::array::from_fn(|i| y[i] + h * A21 * k1[i]);
        sys.rhs(t + C2 * h, &tmp, &mut k2);
        let tmp: [f64; N] = std::array::from_fn(|i| y[i] + h * (A31 * k1[i] + A32 * k2[i]));
        sys.rhs(t + C3 * h, &tmp, &mut k3);
        let tmp: [f64; N] =
            std::array::from_fn(|i| y[i] + h * (A41 * k1[i] + A42 * k2[i] + A43 * k3[i]));
        sys.rhs(t + C4 * h, &tmp, &mut k4);
        let tmp: [f64; N] = std::array::from_fn(|i| {
            y[i] + h * (A51 * k1[i] + A52 * k2[i] + A53 * k3[i] + A54 * k4[i])
        });
        sys.rhs(t + C5 * h, &tmp, &mut k5);
        let tmp: [f64; N] = std::array::from_fn(|i| {
            y[i] + h * (A61 * k1[i] + A62 * k2[i] + A63 * k3[i] + A64 * k4[i] + A65 * k5[i])
        });
        sys.rhs(t + h, &tmp, &mut k6);
        let y_new: [f64; N] = std::array::from_fn(|i| {
            y[i] + h * (A71 * k1[i] + A73 * k3[i] + A74 * k4[i] + A75 * k5[i] + A76 * k6[i])
        });
        sys.rhs(t + h, &y_new, &mut k7);

        let mut err = 0.0;
        for i in 0..N {
            let e =
                h * (E1 * k1[i] + E3 * k3[i] + E4 * k4[i] + E5 * k5[i] + E6 * k6[i] + E7 * k7[i]);
            let sc = self.scale(y[i], y_new[i]);
            err += (e / sc).powi(2);
        }
        let err = (err / N as f64).sqrt();
        let err = if err.is_finite() { err } else { f64::INFINITY };
        (y_new, k7, [k1, k2, k3, k4, k5, k6], err)
    }
}

/// Solution on a time grid with the dense interpolant of every step.
#[derive(Debug, Clone)]
pub struct Trajectory<const N: usize> {
    pub times: Vec<f64>,
    pub states: Vec<[f64; N]>,
    segments: Vec<DenseSegment<N>>,
}

impl<const N: usize> Trajectory<N> {
    pub fn has_dense_output(&self) -> bool {
        !self.segments.is_empty()
    }

    pub fn segments(&self) -> &[DenseSegment<N>] {
        &self.segments
    }

    pub fn t_start(&self) -> f64 {
        self.times[0]
    }

    pub fn t_end(&self) -> f64 {
        *self
            .times
            .last()
            .expect("trajectory has at least one sample")
    }

    pub fn final_state(&self) -> &[f64; N] {
        self.states
            .last()
            .expect("trajectory has at least one sample")
    }

    /// Dense-output state at any `t` in the integrated span.
    pub fn eval(&self, t: f64) -> Option<[f64; N]> {
        if t < self.t_start() || t > self.t_end() {
            return None;
        }
        let idx = self.segments.partition_point(|s| s.t1() < t);
        self.segments
            .get(idx.min(self.segments.len().saturating_sub(1)))
            .map(|s| s.eval(t))
    }
}

/// Integrates `system` from `y0` over `t_span`, keeping every accepted step.
pub fn integrate<S: OdeSystem<N>, const N: usize>(
    system: &S,
    y0: [f64; N],
    t_span: (f64, f64),
    config: &IntegratorConfig,
) -> Result<Trajectory<N>> {
    let mut stepper = Stepper::new(system, y0, t_span.0, t_span.1, config)?;
    let mut times = vec![t_span.0];
    let mut states = vec![y0];
    let mut segments = Vec::new();
    while let Some(step) = stepper.step()? {
        times.push(step.t);
        states.push(step.y);
        segments.push(step.segment);
    }
    Ok(Trajectory {
        times,
        states,
        segments,
    })
}

/// Integrates without storing intermediate steps and returns the final state.
pub fn integrate_final<S: OdeSystem<N>, const N: usize>(
    system: &S,
    y0: [f64; N],
    t_span: (f64, f64),
    config: &IntegratorConfig,
) -> Result<[f64; N]> {
    let mut stepper = Stepper::new(system, y0, t_span.0, t_span.1, config)?;
    while stepper.step()?.is_some() {}
    Ok(*stepper.state())
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum CrossingDirection {
    /// From negative to positive.
    Rising,
    /// From positive to negative.
    Falling,
    Either,
}

impl CrossingDirection {
    fn accepts(self, before: f64) -> bool {
        match self {
            CrossingDirection::Rising => before < 0.0,
            CrossingDirection::Falling => before > 0.0,
            CrossingDirection::Either => true,
        }
    }
}

/// First time in `(t_start, t_max]` where `component` crosses zero in `direction`.
///
/// A zero exactly at `t_start` is not a crossing. The crossing is located on
/// the dense-output polynomial by safeguarded Newton iteration to an absolute
/// accuracy of 1e-10 (or better).
pub fn find_zero_crossing<S: OdeSystem<N>, const N: usize>(
    system: &S,
    y0: [f64; N],
    component: usize,
    direction: CrossingDirection,
    window: (f64, f64),
    config: &IntegratorConfig,
) -> Result<f64> {
    if component >= N {
        return Err(Error::domain(format!(
            "component {component} out of range for dimension {N}"
        )));
    }
    let (t_start, t_max) = window;
    let mut stepper = Stepper::new(system, y0, t_start, t_max, config)?;
    let mut prev = y0[component];
    while let Some(step) = stepper.step()? {
        let next = step.y[component];
        let seg = step.segment;
        if prev != 0.0 && next == 0.0 && direction.accepts(prev) {
            return Ok(step.t);
        }
        if prev != 0.0 && next != 0.0 && (prev < 0.0) != (next < 0.0) && direction.accepts(prev) {
            return Ok(refine_root(&seg, component));
        }
        if prev == 0.0 || next != 0.0 {
            prev = next;
        }
    }
    Err(Error::NoCrossing {
        component,
        t_start,
        t_end: t_max,
    })
}

// Bracketed Newton on the interpolant: falls back to bisection whenever the
// Newton iterate leaves the bracket.
fn refine_root<const N: usize>(seg: &DenseSegment<N>, i: usize) -> f64 {
    let (mut lo, mut hi) = (seg.t0, seg.t1());
    let rising = seg.eval_component(lo, i) < 0.0;
    let mut t = 0.5 * (lo + hi);
    for _ in 0..200 {
        let f = seg.eval_component(t, i);
        if f == 0.0 {
            return t;
        }
        if (f < 0.0) == rising {
            lo = t;
        } else {
            hi = t;
        }
        let d = seg.derivative_component(t, i);
        let correction = f / d;
        if d != 0.0 && correction.abs() < 1e-15 * t.abs().max(1.0) {
            return t - correction;
        }
        let newton = t - correction;
        t = if d != 0.0 && newton > lo && newton < hi {
            newton
        } else {
            0.5 * (lo + hi)
        };
        if hi - lo < 1e-14 * t.abs().max(1.0) {
            break;
        }
    }
    t
}
