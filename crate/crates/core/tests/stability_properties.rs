use nlbeam::atlas::{
    find_thresholds, sweep, write_csv, SweepAxis, SweepSpec, ThresholdSearch, VerdictSource,
};
use nlbeam::duffing::{orbit_from_energy, orbit_trajectory, ModeParams};
use nlbeam::hill::{build_hill, classify_stability, monodromy, StabilityConfig, Verdict};
use nlbeam::integrate::IntegratorConfig;
use nlbeam::regime::{
    cazenave_limit_classify, classify_gamma, membership_of_ratio, ppp2_scan, Membership,
};
use nlbeam::stationary::{buckled_mode_count, stationary_catalog};
use nlbeam::two_mode::{potential, simulate, TwoModeConfig};
use num_rational::Ratio;
use proptest::prelude::*;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

fn tight() -> IntegratorConfig {
    IntegratorConfig::with_tolerances(1e-12, 1e-14)
}

/// Membership of `n²/m²` by walking the triangular numbers in exact rationals.
fn rational_membership(m: u64, n: u64) -> Membership {
    let gamma = Ratio::new(n * n, m * m);
    let mut j = 0u64;
    loop {
        let next = Ratio::from_integer((j + 1) * (j + 2) / 2);
        if gamma == next {
            let j = j + 1;
            return if j % 2 == 1 {
                Membership::BoundaryLower((j - 1) / 2)
            } else {
                Membership::BoundaryUpper((j - 2) / 2)
            };
        }
        if gamma < next {
            return if j.is_multiple_of(2) {
                Membership::InIS(j / 2)
            } else {
                Membership::InIU((j - 1) / 2)
            };
        }
        j += 1;
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(400))]

    #[test]
    fn gamma_classes_match_rationals(m in 1u32..=200, n in 1u32..=200) {
        let class = classify_gamma(m, n).unwrap();
        prop_assert_eq!(class.membership, rational_membership(m as u64, n as u64));
        prop_assert_eq!(class.k_index, class.membership.k());
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(40))]

    #[test]
    fn monodromy_is_symplectic_and_symmetric(
        m in 1u32..=4, n in 1u32..=4, c in 0.0f64..3.0, log_e in -2.0f64..3.0
    ) {
        prop_assume!(m != n);
        let n2 = (n * n) as f64;
        let p = c * (m * m) as f64;
        // keep the multipliers moderate
        prop_assume!(n2 * (p - n2) <= 10.0);
        let e = 10f64.powf(log_e);
        let h = build_hill(m, n, p, e).unwrap();
        let r = monodromy(&h, &StabilityConfig::default()).unwrap();
        prop_assert!((r.det - 1.0).abs() < 1e-8, "det {}", r.det);
        let prod = r.multipliers[0] * r.multipliers[1];
        prop_assert!((prod.re - 1.0).abs() < 1e-8 && prod.im.abs() < 1e-8);
        let [[a, _], [_, d]] = r.matrix;
        prop_assert!((a - d).abs() < 1e-7 * a.abs().max(1.0), "diagonal {a} vs {d}");
    }

    #[test]
    fn either_branch_gives_the_same_verdict(m in 1u32..=3, n in 1u32..=4, excess in 0.2f64..4.0, frac in 0.05f64..0.95) {
        prop_assume!(m != n);
        let m2 = (m * m) as f64;
        let params = ModeParams::new(m, m2 + excess).unwrap();
        let e = params.bottom_energy().unwrap() * frac;
        let h = build_hill(m, n, m2 + excess, e).unwrap();
        let neg = nlbeam::hill::HillProblem::from_orbit(
            n,
            orbit_from_energy(&params, e).unwrap().with_branch(nlbeam::duffing::Branch::Negative),
        )
        .unwrap();
        let cfg = StabilityConfig::default();
        let (a, b) = (monodromy(&h, &cfg).unwrap(), monodromy(&neg, &cfg).unwrap());
        prop_assert!((a.trace - b.trace).abs() < 1e-7 * a.trace.abs().max(1.0));
    }
}

#[test]
fn cazenave_limit_agrees_with_gamma_classes() {
    let mut rng = ChaCha8Rng::seed_from_u64(7);
    let mut checked = 0;
    while checked < 50 {
        let m = rng.gen_range(1..=12u32);
        let n = rng.gen_range(1..=40u32);
        let class = classify_gamma(m, n).unwrap();
        if class.membership.is_boundary() || class.gamma > 40.0 {
            continue;
        }
        let r = cazenave_limit_classify(class.gamma, &tight(), 1e-6).unwrap();
        assert!((r.det - 1.0).abs() < 1e-8);
        let expected = match class.membership {
            Membership::InIU(_) => Verdict::Unstable,
            _ => Verdict::Stable,
        };
        if r.verdict != Verdict::Marginal {
            assert_eq!(
                r.verdict,
                expected,
                "γ = {}/{} (trace {})",
                n * n,
                m * m,
                r.trace
            );
        }
        assert_eq!(membership_of_ratio(class.gamma).unwrap(), class.membership);
        checked += 1;
    }
}

#[test]
fn resonant_well_bottom_has_complex_multipliers() {
    let params = ModeParams::new(1, 7.0).unwrap();
    let bottom = params.bottom_energy().unwrap();
    for frac in [1.0 - 1e-4, 1.0 - 5e-4, 1.0 - 1e-3] {
        let h = build_hill(1, 2, 7.0, bottom * frac).unwrap();
        let r = monodromy(&h, &StabilityConfig::default()).unwrap();
        assert!(r.trace.abs() < 2.0, "trace {}", r.trace);
        assert!(r.multipliers[0].im.abs() > 0.0);
        assert!((r.multipliers[0].norm() - 1.0).abs() < 1e-8);
    }
}

#[test]
fn floquet_rate_matches_small_mode_growth() {
    let (m, n, p, e) = (2, 1, 3.0, 1.0);
    let h = build_hill(m, n, p, e).unwrap();
    let r = monodromy(&h, &StabilityConfig::default()).unwrap();
    assert_eq!(r.verdict, Verdict::Unstable);
    let rate = r.multipliers[0].norm().ln() / h.coeff_period;

    let config = TwoModeConfig::from_energies(m, n, p, e, 1e-20 * e).unwrap();
    // z grows by about e¹⁸ and stays far below w
    let t_end = 18.0 / rate;
    let run = simulate(&config, t_end, &tight()).unwrap();
    let window = h.coeff_period;
    let windows = (t_end / window).floor() as usize;
    let mut pts = Vec::new();
    for w in 0..windows {
        // E_z can be negative when n² < P, so track the amplitude of z instead
        let peak = (0..50)
            .map(|i| {
                run.trajectory
                    .eval((w as f64 + i as f64 / 50.0) * window)
                    .unwrap()[2]
                    .abs()
            })
            .fold(0.0, f64::max);
        pts.push(((w as f64 + 0.5) * window, peak.ln()));
    }
    // fit over the later part, once the unstable direction dominates
    let tail = &pts[pts.len() / 3..];
    let nf = tail.len() as f64;
    let (sx, sy) = tail
        .iter()
        .fold((0.0, 0.0), |(a, b), (x, y)| (a + x, b + y));
    let (mx, my) = (sx / nf, sy / nf);
    let (num, den) = tail.iter().fold((0.0, 0.0), |(a, b), (x, y)| {
        (a + (x - mx) * (y - my), b + (x - mx).powi(2))
    });
    let fitted = num / den;
    assert!(
        ((fitted - rate) / rate).abs() < 0.1,
        "fitted {fitted} vs Floquet {rate}"
    );
}

#[test]
fn two_mode_invariant_subspace_and_confinement() {
    let params = ModeParams::new(2, 1.0).unwrap();
    let orbit = orbit_from_energy(&params, 3.0).unwrap();
    let config = TwoModeConfig {
        m: 2,
        n: 3,
        p: 1.0,
        w0: orbit.canonical_initial[0],
        w1: 0.0,
        z0: 0.0,
        z1: 0.0,
    };
    let run = simulate(&config, 3.0 * orbit.period, &tight()).unwrap();
    assert!(run
        .trajectory
        .states
        .iter()
        .all(|y| y[2] == 0.0 && y[3] == 0.0));
    let single = orbit_trajectory(&orbit, 3.0, &tight()).unwrap();
    for i in 0..=60 {
        let t = 3.0 * orbit.period * i as f64 / 60.0;
        let (a, b) = (run.trajectory.eval(t).unwrap(), single.eval(t).unwrap());
        assert!((a[0] - b[0]).abs() < 1e-8, "t={t}: {} vs {}", a[0], b[0]);
    }

    let config = TwoModeConfig::from_energies(2, 1, 3.0, 1.0, 1e-3).unwrap();
    let e0 = config.total_energy();
    let run = simulate(&config, 200.0, &tight()).unwrap();
    for y in &run.trajectory.states {
        assert!(potential(2, 1, 3.0, y[0], y[2]) <= e0 + 1e-8 * e0.abs().max(1.0));
    }
    assert!(run.channels.max_relative_drift() < 1e-8);
}

#[test]
fn stationary_counts_and_ordering() {
    for (p, k) in [
        (1.5, 1u32),
        (4.0, 1),
        (4.5, 2),
        (9.0, 2),
        (9.5, 3),
        (26.0, 5),
    ] {
        assert_eq!(buckled_mode_count(p), k);
        let cat = stationary_catalog(p).unwrap();
        assert_eq!(cat.len(), 2 * k as usize + 1);
        let mut energies: Vec<f64> = cat.iter().skip(1).step_by(2).map(|s| s.energy_j0).collect();
        energies.push(0.0);
        assert!(
            energies.windows(2).all(|w| w[0] < w[1]),
            "P={p}: {energies:?}"
        );
    }
}

fn small_spec() -> SweepSpec {
    SweepSpec {
        p: 0.0,
        pairs: vec![(2, 3), (3, 7)],
        axis: SweepAxis::Theta0((1..=24).map(|i| i as f64 * 0.5).collect()),
        verdict_source: VerdictSource::Monodromy,
        stability: StabilityConfig::default(),
    }
}

#[test]
fn sweeps_are_deterministic_across_workers() {
    let spec = small_spec();
    let csv = |jobs| {
        let mut buf = Vec::new();
        write_csv(&sweep(&spec, Some(jobs)).unwrap(), &mut buf).unwrap();
        buf
    };
    let serial = csv(1);
    assert_eq!(serial, csv(1));
    assert_eq!(serial, csv(3));
}

#[test]
fn thresholds_separate_verdicts() {
    let cfg = StabilityConfig::default();
    let search = ThresholdSearch::default();
    let found = find_thresholds(2, 1, 3.0, (0.1, 100.0), &search, &cfg).unwrap();
    assert!(!found.is_empty());
    for t in found {
        let below = classify_stability(
            2,
            1,
            3.0,
            t.energy * (1.0 - 2.0 * search.refinement_tol),
            &cfg,
        )
        .unwrap();
        let above = classify_stability(
            2,
            1,
            3.0,
            t.energy * (1.0 + 2.0 * search.refinement_tol),
            &cfg,
        )
        .unwrap();
        assert!(
            below.verdict.agrees_with(t.below) && above.verdict.agrees_with(t.above),
            "{t:?}"
        );
        assert_ne!(t.below, t.above);
    }
}

#[test]
fn quartic_has_no_integer_roots_up_to_5000() {
    assert!(ppp2_scan(5000).unwrap().is_empty());
}
