//! `nlbeam`: command-line access to single-mode orbits, pair stability,
//! two-mode simulations, regime tables, equilibria and sweeps.
//!
//! Exit codes: 0 success, 1 domain error, 2 usage error, 3 numerical failure.

mod config;

use std::fmt::Write as _;
use std::io::Write as _;
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde::Serialize;

use nlbeam::atlas::{
    self, find_thresholds, sweep, SweepAxis, SweepSpec, ThresholdSearch, VerdictSource,
};
use nlbeam::duffing::{
    homoclinic, orbit_from_energy, orbit_from_rest, orbit_trajectory, DuffingOrbit, ModeParams,
};
use nlbeam::hill::{build_hill, classify_stability, evaluate_criteria, StabilityConfig};
use nlbeam::integrate::IntegratorConfig;
use nlbeam::regime::{
    cazenave_limit_classify, classify_gamma, ppp2_scan, resonance_diagnostics, table_regime,
};
use nlbeam::stationary::{residual_check, stationary_catalog};
use nlbeam::two_mode::{self, simulate, TwoModeConfig, DEFAULT_TRANSFER_THRESHOLD};

use config::UsageError;

#[derive(Parser, Debug)]
#[command(
    name = "nlbeam",
    version,
    about = "Nonlinear beam modes and their stability"
)]
struct Cli {
    #[command(flatten)]
    global: Global,
    #[command(subcommand)]
    command: Command,
}

#[derive(Args, Debug)]
struct Global {
    /// Output format.
    #[arg(long, global = true, value_enum, default_value_t = Format::Text)]
    format: Format,
    /// Write output to this file instead of stdout.
    #[arg(long, global = true)]
    out: Option<PathBuf>,
    /// Worker threads for sweeps and scans (default: logical cores).
    #[arg(long, global = true)]
    jobs: Option<usize>,
    /// Relative integrator tolerance.
    #[arg(long, global = true)]
    tol: Option<f64>,
    /// key = value file with default flag values.
    #[arg(long, global = true)]
    config: Option<PathBuf>,
}

#[derive(Copy, Clone, Debug, PartialEq, Eq, ValueEnum)]
enum Format {
    Text,
    Csv,
    Json,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Single nonlinear modes.
    #[command(subcommand)]
    Mode(ModeCmd),
    /// Stability of mode m with respect to mode n.
    #[command(subcommand)]
    Hill(HillCmd),
    /// Coupled two-mode system.
    #[command(subcommand)]
    Twomode(TwoModeCmd),
    /// Regime table, frequency ratios, resonances and the limit map.
    #[command(subcommand)]
    Regime(RegimeCmd),
    /// Exhaustive integer scans.
    #[command(subcommand)]
    Scan(ScanCmd),
    /// Equilibria of the compressed beam.
    #[command(args_override_self = true, allow_negative_numbers = true)]
    Stationary(StationaryArgs),
    /// Parameter sweeps and threshold search.
    #[command(subcommand)]
    Atlas(AtlasCmd),
}

#[derive(Args, Debug, Clone, Copy)]
#[group(required = true, multiple = false)]
struct OrbitSel {
    /// Energy of mode m (or k).
    #[arg(long = "E")]
    e: Option<f64>,
    /// Initial displacement, released from rest.
    #[arg(long)]
    theta0: Option<f64>,
}

impl OrbitSel {
    fn orbit(&self, params: &ModeParams) -> nlbeam::Result<DuffingOrbit> {
        match (self.e, self.theta0) {
            (Some(e), _) => orbit_from_energy(params, e),
            (None, Some(t)) => orbit_from_rest(params, t),
            (None, None) => unreachable!("clap enforces one selector"),
        }
    }

    fn energy(&self, params: &ModeParams) -> f64 {
        self.e
            .unwrap_or_else(|| params.energy_at_rest(self.theta0.unwrap_or(0.0)))
    }
}

#[derive(Args, Debug)]
struct ModeArgs {
    #[arg(long)]
    k: u32,
    #[arg(long = "P")]
    p: f64,
    #[command(flatten)]
    sel: OrbitSel,
}

#[derive(Subcommand, Debug)]
enum ModeCmd {
    /// Period of the orbit at a given energy.
    #[command(args_override_self = true, allow_negative_numbers = true)]
    Period(ModeArgs),
    /// Integrated orbit samples.
    #[command(args_override_self = true, allow_negative_numbers = true)]
    Orbit {
        #[command(flatten)]
        mode: ModeArgs,
        #[arg(long, default_value_t = 1.0)]
        periods: f64,
    },
    /// The zero-energy orbit under supercritical load.
    #[command(args_override_self = true, allow_negative_numbers = true)]
    Homoclinic {
        #[arg(long)]
        k: u32,
        #[arg(long = "P")]
        p: f64,
        #[arg(long = "t-min", default_value_t = -5.0)]
        t_min: f64,
        #[arg(long = "t-max", default_value_t = 5.0)]
        t_max: f64,
        #[arg(long, default_value_t = 101)]
        points: usize,
    },
}

#[derive(Args, Debug)]
struct PairArgs {
    #[arg(long)]
    m: u32,
    #[arg(long)]
    n: u32,
    #[arg(long = "P")]
    p: f64,
    #[command(flatten)]
    sel: OrbitSel,
}

#[derive(Subcommand, Debug)]
enum HillCmd {
    /// Monodromy verdict checked against the classical criteria.
    #[command(args_override_self = true, allow_negative_numbers = true)]
    Classify(PairArgs),
    /// The classical criteria only.
    #[command(args_override_self = true, allow_negative_numbers = true)]
    Criteria(PairArgs),
}

#[derive(Subcommand, Debug)]
enum TwoModeCmd {
    /// Integrate the coupled system and report energy transfer.
    #[command(args_override_self = true, allow_negative_numbers = true)]
    Simulate(SimulateArgs),
}

#[derive(Args, Debug)]
struct SimulateArgs {
    #[arg(long)]
    m: u32,
    #[arg(long)]
    n: u32,
    #[arg(long = "P")]
    p: f64,
    /// Start mode m on its canonical orbit of this energy.
    #[arg(long = "Ew", conflicts_with_all = ["w0", "w1"])]
    e_w: Option<f64>,
    /// With --Ew: initial energy of mode n, put in its velocity.
    #[arg(long = "Ez", requires = "e_w", conflicts_with_all = ["z0", "z1"])]
    e_z: Option<f64>,
    #[arg(long, default_value_t = 0.0)]
    w0: f64,
    #[arg(long, default_value_t = 0.0)]
    w1: f64,
    #[arg(long, default_value_t = 0.0)]
    z0: f64,
    #[arg(long, default_value_t = 0.0)]
    z1: f64,
    #[arg(long = "t-end", default_value_t = 100.0)]
    t_end: f64,
    #[arg(long, default_value_t = DEFAULT_TRANSFER_THRESHOLD)]
    threshold: f64,
}

#[derive(Subcommand, Debug)]
enum RegimeCmd {
    /// Row of the stability summary table.
    #[command(args_override_self = true, allow_negative_numbers = true)]
    Table {
        #[arg(long)]
        m: u32,
        #[arg(long)]
        n: u32,
        #[arg(long = "P")]
        p: f64,
    },
    /// Interval class of n²/m².
    #[command(args_override_self = true)]
    Gamma {
        #[arg(long)]
        m: u32,
        #[arg(long)]
        n: u32,
    },
    /// Resonance quantities.
    #[command(args_override_self = true, allow_negative_numbers = true)]
    Resonance {
        #[arg(long)]
        m: u32,
        #[arg(long)]
        n: u32,
        #[arg(long = "P")]
        p: f64,
    },
    /// Large-energy limit map for a frequency ratio.
    #[command(args_override_self = true, allow_negative_numbers = true)]
    Cazenave {
        #[arg(long)]
        gamma: f64,
    },
}

#[derive(Subcommand, Debug)]
enum ScanCmd {
    /// Integer roots of the resonance quartic.
    #[command(args_override_self = true)]
    Ppp2 {
        #[arg(long = "n-max", default_value_t = 500)]
        n_max: u64,
    },
}

#[derive(Args, Debug)]
struct StationaryArgs {
    #[arg(long = "P")]
    p: f64,
}

#[derive(Copy, Clone, Debug, PartialEq, Eq, ValueEnum)]
enum Source {
    Monodromy,
    Cazenave,
}

#[derive(Copy, Clone, Debug, PartialEq, Eq, ValueEnum)]
enum Spacing {
    Log,
    Linear,
}

#[derive(Subcommand, Debug)]
enum AtlasCmd {
    /// Verdict grid over mode pairs and amplitudes (or energies).
    #[command(args_override_self = true, allow_negative_numbers = true)]
    Sweep(SweepArgs),
    /// Energies where the verdict changes.
    #[command(args_override_self = true, allow_negative_numbers = true)]
    Thresholds {
        #[arg(long)]
        m: u32,
        #[arg(long)]
        n: u32,
        #[arg(long = "P")]
        p: f64,
        #[arg(long = "E-min")]
        e_min: f64,
        #[arg(long = "E-max")]
        e_max: f64,
        #[arg(long, default_value_t = 64)]
        samples: usize,
        #[arg(long, default_value_t = 1e-4)]
        rtol: f64,
        #[arg(long, value_enum, default_value_t = Spacing::Log)]
        spacing: Spacing,
    },
}

#[derive(Args, Debug)]
struct SweepArgs {
    #[arg(long = "P", default_value_t = 0.0)]
    p: f64,
    /// Comma-separated m:n pairs, e.g. `3:7,2:3`.
    #[arg(long)]
    pairs: String,
    /// Lower end of the amplitude grid; omitted means (0, max].
    #[arg(long = "theta0-min")]
    theta0_min: Option<f64>,
    #[arg(long = "theta0-max", default_value_t = 50.0)]
    theta0_max: f64,
    /// Sweep energies instead of amplitudes.
    #[arg(long = "E-min", requires = "e_max")]
    e_min: Option<f64>,
    #[arg(long = "E-max", requires = "e_min")]
    e_max: Option<f64>,
    #[arg(long, default_value_t = 200)]
    points: usize,
    #[arg(long, value_enum, default_value_t = Source::Monodromy)]
    source: Source,
}

fn stability_config(tol: Option<f64>) -> StabilityConfig {
    let mut cfg = StabilityConfig::default();
    if let Some(t) = tol {
        cfg.integrator = IntegratorConfig::with_tolerances(t, t * 1e-2);
    }
    cfg
}

fn integrator_config(tol: Option<f64>) -> IntegratorConfig {
    tol.map_or_else(IntegratorConfig::default, |t| {
        IntegratorConfig::with_tolerances(t, t * 1e-2)
    })
}

/// Renders one record as `key: value` lines, a one-row CSV, or JSON.
fn record<T: Serialize>(
    format: Format,
    fields: &[(&str, String)],
    json: &T,
) -> anyhow::Result<String> {
    Ok(match format {
        Format::Text => fields.iter().map(|(k, v)| format!("{k}: {v}\n")).collect(),
        Format::Csv => {
            let head: Vec<&str> = fields.iter().map(|(k, _)| *k).collect();
            let row: Vec<&str> = fields.iter().map(|(_, v)| v.as_str()).collect();
            format!("{}\n{}\n", head.join(","), row.join(","))
        }
        Format::Json => serde_json::to_string_pretty(json)? + "\n",
    })
}

/// Text and CSV share the tabular rendering; JSON uses the given value.
fn table<T: Serialize>(format: Format, csv: String, json: &T) -> anyhow::Result<String> {
    Ok(match format {
        Format::Json => serde_json::to_string_pretty(json)? + "\n",
        _ => csv,
    })
}

fn pool<R: Send>(jobs: Option<usize>, f: impl FnOnce() -> R + Send) -> anyhow::Result<R> {
    match jobs {
        Some(j) => Ok(rayon::ThreadPoolBuilder::new()
            .num_threads(j.max(1))
            .build()?
            .install(f)),
        None => Ok(f()),
    }
}

fn parse_pairs(s: &str) -> Result<Vec<(u32, u32)>, UsageError> {
    s.split(',')
        .map(|p| {
            let (m, n) = p
                .trim()
                .split_once(':')
                .ok_or_else(|| UsageError(format!("pair `{p}` is not of the form m:n")))?;
            let parse = |x: &str| {
                x.trim()
                    .parse::<u32>()
                    .map_err(|_| UsageError(format!("bad mode index `{x}`")))
            };
            Ok((parse(m)?, parse(n)?))
        })
        .collect()
}

#[derive(Serialize)]
struct OrbitOutput {
    orbit: DuffingOrbit,
    samples: Vec<[f64; 3]>,
}

fn run(cli: &Cli) -> anyhow::Result<String> {
    let g = &cli.global;
    let fmt = g.format;
    match &cli.command {
        Command::Mode(ModeCmd::Period(a)) => {
            let prm = ModeParams::new(a.k, a.p)?;
            let orbit = a.sel.orbit(&prm)?;
            record(
                fmt,
                &[
                    ("k", a.k.to_string()),
                    ("P", a.p.to_string()),
                    ("E", orbit.e().to_string()),
                    ("regime", format!("{:?}", orbit.energy.regime)),
                    ("period", orbit.period.to_string()),
                ],
                &orbit,
            )
        }
        Command::Mode(ModeCmd::Orbit { mode: a, periods }) => {
            let prm = ModeParams::new(a.k, a.p)?;
            let orbit = a.sel.orbit(&prm)?;
            let traj = orbit_trajectory(&orbit, *periods, &integrator_config(g.tol))?;
            let samples: Vec<[f64; 3]> = traj
                .times
                .iter()
                .zip(&traj.states)
                .map(|(t, y)| [*t, y[0], y[1]])
                .collect();
            let mut csv = String::from("t,theta,theta_dot\n");
            for s in &samples {
                writeln!(csv, "{},{},{}", s[0], s[1], s[2])?;
            }
            table(fmt, csv, &OrbitOutput { orbit, samples })
        }
        Command::Mode(ModeCmd::Homoclinic {
            k,
            p,
            t_min,
            t_max,
            points,
        }) => {
            let prm = ModeParams::new(*k, *p)?;
            if *points < 2 || t_min.partial_cmp(t_max) != Some(std::cmp::Ordering::Less) {
                return Err(nlbeam::Error::Domain(
                    "need t-min < t-max and at least 2 points".into(),
                )
                .into());
            }
            let rows: Vec<[f64; 2]> = (0..*points)
                .map(|i| {
                    let t = t_min + (t_max - t_min) * i as f64 / (*points - 1) as f64;
                    homoclinic(&prm, t).map(|th| [t, th])
                })
                .collect::<nlbeam::Result<_>>()?;
            let mut csv = String::from("t,theta\n");
            for r in &rows {
                writeln!(csv, "{},{}", r[0], r[1])?;
            }
            table(fmt, csv, &rows)
        }
        Command::Hill(HillCmd::Classify(a)) => {
            let prm = ModeParams::new(a.m, a.p)?;
            let e = a.sel.energy(&prm);
            let r = classify_stability(a.m, a.n, a.p, e, &stability_config(g.tol))?;
            let mu = r.monodromy.multipliers;
            record(
                fmt,
                &[
                    ("m", a.m.to_string()),
                    ("n", a.n.to_string()),
                    ("P", a.p.to_string()),
                    ("E", e.to_string()),
                    ("verdict", r.verdict.to_string()),
                    ("trace", r.monodromy.trace.to_string()),
                    ("det", r.monodromy.det.to_string()),
                    ("lambda1", mu[0].to_string()),
                    ("lambda2", mu[1].to_string()),
                    ("zhukovskii", r.criteria.zhukovskii.applies.to_string()),
                    ("li_zhang", r.criteria.li_zhang.applies.to_string()),
                    (
                        "negative_coefficient",
                        r.criteria.negative_coeff.applies.to_string(),
                    ),
                ],
                &r,
            )
        }
        Command::Hill(HillCmd::Criteria(a)) => {
            let prm = ModeParams::new(a.m, a.p)?;
            let e = a.sel.energy(&prm);
            let h = build_hill(a.m, a.n, a.p, e)?;
            let c = evaluate_criteria(&h, &stability_config(g.tol).integrator)?;
            let (a_min, a_max) = h.coefficient_range();
            record(
                fmt,
                &[
                    ("m", a.m.to_string()),
                    ("n", a.n.to_string()),
                    ("P", a.p.to_string()),
                    ("E", e.to_string()),
                    ("coeff_period", h.coeff_period.to_string()),
                    ("a_min", a_min.to_string()),
                    ("a_max", a_max.to_string()),
                    ("zhukovskii", c.zhukovskii.applies.to_string()),
                    (
                        "ell",
                        c.zhukovskii.ell.map_or(String::new(), |l| l.to_string()),
                    ),
                    ("li_zhang", c.li_zhang.applies.to_string()),
                    ("li_zhang_lhs", c.li_zhang.lhs.to_string()),
                    ("li_zhang_rhs", c.li_zhang.rhs.to_string()),
                    ("negative_coefficient", c.negative_coeff.applies.to_string()),
                ],
                &c,
            )
        }
        Command::Twomode(TwoModeCmd::Simulate(a)) => {
            let cfg = match a.e_w {
                Some(ew) => TwoModeConfig::from_energies(a.m, a.n, a.p, ew, a.e_z.unwrap_or(0.0))?,
                None => TwoModeConfig {
                    m: a.m,
                    n: a.n,
                    p: a.p,
                    w0: a.w0,
                    w1: a.w1,
                    z0: a.z0,
                    z1: a.z1,
                },
            };
            let run = simulate(&cfg, a.t_end, &integrator_config(g.tol.or(Some(1e-12))))?;
            let summary = run.summary(a.threshold);
            match fmt {
                Format::Csv => {
                    let mut buf = Vec::new();
                    two_mode::write_csv(&run, &mut buf)?;
                    Ok(String::from_utf8(buf)?)
                }
                _ => {
                    let mut fields = vec![
                        ("t_end", summary.t_end.to_string()),
                        ("E_total", summary.e_total.to_string()),
                        ("max_relative_drift", summary.max_relative_drift.to_string()),
                    ];
                    if let Some(t) = summary.transfer {
                        fields.push(("max_growth_ratio", t.max_growth_ratio.to_string()));
                        fields.push(("time_of_peak", t.time_of_peak.to_string()));
                        fields.push(("verdict_hint", format!("{:?}", t.verdict_hint)));
                    }
                    record(fmt, &fields, &summary)
                }
            }
        }
        Command::Regime(RegimeCmd::Table { m, n, p }) => {
            let r = table_regime(*m, *n, *p)?;
            record(
                fmt,
                &[
                    ("row", r.ordering.label().to_string()),
                    ("low", format!("{:?}", r.low_energy_prediction)),
                    ("high", format!("{:?}", r.high_energy_prediction)),
                    ("theorems", r.theorem_refs.join(" ")),
                    ("gamma", r.gamma.gamma.to_string()),
                    ("membership", format!("{:?}", r.gamma.membership)),
                ],
                &r,
            )
        }
        Command::Regime(RegimeCmd::Gamma { m, n }) => {
            let c = classify_gamma(*m, *n)?;
            record(
                fmt,
                &[
                    ("gamma", c.gamma.to_string()),
                    ("membership", format!("{:?}", c.membership)),
                    ("k", c.k_index.to_string()),
                ],
                &c,
            )
        }
        Command::Regime(RegimeCmd::Resonance { m, n, p }) => {
            let r = resonance_diagnostics(*m, *n, *p)?;
            let opt = |v: Option<String>| v.unwrap_or_default();
            record(
                fmt,
                &[
                    ("ell", opt(r.ell.map(|x| x.to_string()))),
                    ("mu", opt(r.mu.map(|x| x.to_string()))),
                    ("L", opt(r.l.map(|x| x.to_string()))),
                    ("L_is_integer", opt(r.l_is_integer.map(|x| x.to_string()))),
                    ("ppp2_value", opt(r.ppp2_value.map(|x| x.to_string()))),
                ],
                &r,
            )
        }
        Command::Regime(RegimeCmd::Cazenave { gamma }) => {
            let cfg = stability_config(g.tol);
            let r = cazenave_limit_classify(*gamma, &cfg.integrator, cfg.tol_margin)?;
            record(
                fmt,
                &[
                    ("gamma", gamma.to_string()),
                    ("trace", r.trace.to_string()),
                    ("det", r.det.to_string()),
                    ("verdict", r.verdict.to_string()),
                ],
                &r,
            )
        }
        Command::Scan(ScanCmd::Ppp2 { n_max }) => {
            let hits = pool(g.jobs, || ppp2_scan(*n_max))??;
            let mut csv = String::from("m,n,L\n");
            for h in &hits {
                writeln!(csv, "{},{},{}", h.m, h.n, h.l)?;
            }
            table(fmt, csv, &hits)
        }
        Command::Stationary(a) => {
            let cat = stationary_catalog(a.p)?;
            let grid: Vec<f64> = (0..=200)
                .map(|i| std::f64::consts::PI * i as f64 / 200.0)
                .collect();
            let mut csv = String::from("j,sign,amplitude,energy_J0,morse_index,residual\n");
            for s in &cat {
                writeln!(
                    csv,
                    "{},{},{},{},{},{}",
                    s.j,
                    s.sign,
                    s.amplitude,
                    s.energy_j0,
                    s.morse_index,
                    residual_check(s, a.p, &grid)
                )?;
            }
            table(fmt, csv, &cat)
        }
        Command::Atlas(AtlasCmd::Sweep(a)) => {
            let pairs = parse_pairs(&a.pairs)?;
            if a.points == 0 {
                return Err(UsageError("--points must be positive".into()).into());
            }
            let linspace = |lo: f64, hi: f64| -> Vec<f64> {
                if a.points == 1 {
                    return vec![hi];
                }
                (0..a.points)
                    .map(|i| lo + (hi - lo) * i as f64 / (a.points - 1) as f64)
                    .collect()
            };
            let axis = match (a.e_min, a.e_max) {
                (Some(lo), Some(hi)) => SweepAxis::Energy(linspace(lo, hi)),
                _ => SweepAxis::Theta0(match a.theta0_min {
                    Some(lo) => linspace(lo, a.theta0_max),
                    None => (1..=a.points)
                        .map(|i| a.theta0_max * i as f64 / a.points as f64)
                        .collect(),
                }),
            };
            let spec = SweepSpec {
                p: a.p,
                pairs,
                axis,
                verdict_source: match a.source {
                    Source::Monodromy => VerdictSource::Monodromy,
                    Source::Cazenave => VerdictSource::CazenaveLimit,
                },
                stability: stability_config(g.tol),
            };
            let cells = sweep(&spec, g.jobs)?;
            let mut buf = Vec::new();
            atlas::write_csv(&cells, &mut buf)?;
            table(fmt, String::from_utf8(buf)?, &cells)
        }
        Command::Atlas(AtlasCmd::Thresholds {
            m,
            n,
            p,
            e_min,
            e_max,
            samples,
            rtol,
            spacing,
        }) => {
            let search = ThresholdSearch {
                samples: *samples,
                refinement_tol: *rtol,
                log_spacing: *spacing == Spacing::Log,
            };
            let th = find_thresholds(
                *m,
                *n,
                *p,
                (*e_min, *e_max),
                &search,
                &stability_config(g.tol),
            )?;
            let mut csv = String::from("energy,below,above\n");
            for t in &th {
                writeln!(csv, "{},{},{}", t.energy, t.below, t.above)?;
            }
            table(fmt, csv, &th)
        }
    }
}

fn exit_code(err: &anyhow::Error) -> u8 {
    if let Some(e) = err.downcast_ref::<nlbeam::Error>() {
        if e.is_domain() {
            1
        } else {
            3
        }
    } else if err.downcast_ref::<UsageError>().is_some() {
        2
    } else {
        1
    }
}

fn emit(out: &Option<PathBuf>, text: &str) -> anyhow::Result<()> {
    match out {
        Some(path) => std::fs::write(path, text)?,
        None => std::io::stdout().lock().write_all(text.as_bytes())?,
    }
    Ok(())
}

fn main() -> ExitCode {
    let argv = match config::inject(std::env::args().collect()) {
        Ok(a) => a,
        Err(e) => {
            eprintln!("error: {e}");
            return ExitCode::from(2);
        }
    };
    let cli = match Cli::try_parse_from(argv) {
        Ok(c) => c,
        Err(e) => {
            let code = e.exit_code();
            let _ = e.print();
            return ExitCode::from(code as u8);
        }
    };
    if let Some(t) = cli.global.tol {
        if !(t > 0.0 && t < 1.0) {
            eprintln!("error: --tol must lie in (0, 1), got {t}");
            return ExitCode::from(2);
        }
    }
    match run(&cli).and_then(|text| emit(&cli.global.out, &text)) {
        Ok(()) => ExitCode::SUCCESS,
        Err(err) => {
            eprintln!("error: {err}");
            ExitCode::from(exit_code(&err))
        }
    }
}
