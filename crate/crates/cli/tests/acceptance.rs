//! Acceptance suite: golden-number checks of the closed-form model against
//! the laboratory reference values, Monte Carlo closure of the
//! generator/estimator loop, oracle equivalence of the pair counting, the
//! forward-projection sweep, and bit-level determinism.
//!
//! Each criterion prints one `acceptance N PASS` line (visible with
//! `cargo test --test acceptance -- --nocapture`); a failed assertion fails
//! the corresponding test.

use std::f64::consts::TAU;

use qnd_cli::config::RunConfig;
use qnd_cli::scenario::{self, Scenario, ScenarioName};
use qnd_core::correlate::{cross_correlation, CorrelationConfig};
use qnd_core::physics::{
    blocking_probability, epsilon0, grating_overlap, one_over_e_photon_number,
    peak_cooperativity, scattering_probability, PhysicalParams,
};
use qnd_core::rates::{cauchy_schwarz, g2_from_counts, g2_zero, mean_counts, psp_solve, DetectionChain};
use qnd_core::sim::{simulate, Channel, ClickStream, SimulationConfig};
use qnd_core::units::angular_from_mhz;

fn inset_params() -> PhysicalParams {
    PhysicalParams {
        eta: 4.3,
        depth_in: 3.0,
        omega: angular_from_mhz(2.6),
        kappa: angular_from_mhz(0.14),
        gamma_e: angular_from_mhz(5.2),
        gamma_0: angular_from_mhz(0.1),
        ..PhysicalParams::reference()
    }
}

#[test]
fn c01_detection_probability_golden_number() {
    let p = inset_params();
    let four_eps0 = 4.0 * epsilon0(&p, p.gamma_0).unwrap();
    assert!(
        (0.09..=0.11).contains(&four_eps0),
        "4*eps0 = {four_eps0} outside [0.09, 0.11]"
    );
    println!("acceptance 1 PASS: 4*eps0 = {four_eps0:.4} in [0.09, 0.11]");
}

#[test]
fn c02_blocking_probability_golden_number() {
    let p = inset_params();
    let four_eps0 = 4.0 * epsilon0(&p, p.gamma_0).unwrap();
    let blocking = blocking_probability(four_eps0).unwrap();
    assert!(
        (0.50..=0.56).contains(&blocking),
        "blocking = {blocking} outside [0.50, 0.56]"
    );
    println!("acceptance 2 PASS: blocking probability = {blocking:.4} in [0.50, 0.56]");
}

#[test]
fn c03_peak_cooperativity_golden_number() {
    // 2g = 2pi * 2.5 MHz.
    let p = PhysicalParams {
        g: TAU * 1.25,
        kappa: TAU * 0.14,
        gamma_e: TAU * 5.2,
        ..PhysicalParams::reference()
    };
    let eta = peak_cooperativity(&p);
    assert!((eta - 8.6).abs() <= 0.1, "peak cooperativity {eta}");
    println!("acceptance 3 PASS: peak cooperativity = {eta:.3} = 8.6 +/- 0.1");
}

#[test]
fn c04_overlap_and_scattering_golden_numbers() {
    let fp = grating_overlap(8.6);
    assert!((0.66..=0.70).contains(&fp), "grating overlap {fp}");
    let sc = scattering_probability(4.3);
    assert!((0.29..=0.32).contains(&sc), "scattering {sc}");
    println!("acceptance 4 PASS: grating overlap {fp:.4}, scattering probability {sc:.4}");
}

#[test]
fn c05_joint_probability_solve() {
    let psp = psp_solve(0.10, 0.2, 0.5).unwrap();
    assert!(
        (psp.state_prep - 0.040).abs() <= 1e-12,
        "state prep {}",
        psp.state_prep
    );
    let total = psp.p00 + psp.p01 + psp.p10 + psp.p11;
    assert!((total - 1.0).abs() <= 1e-12, "sum {total}");
    println!(
        "acceptance 5 PASS: P = ({:.2}, {:.2}, {:.2}, {:.2}), state prep = {:.3}",
        psp.p00, psp.p01, psp.p10, psp.p11, psp.state_prep
    );
}

#[test]
fn c06_cauchy_schwarz_quantity() {
    let g = cauchy_schwarz(4.4, 1.6, 5.6).unwrap();
    assert!((g - 2.16).abs() <= 0.01, "G = {g}");
    // Reference normalized correlation 2.7(8); the central-value computation
    // must land inside that band and beat the classical bound.
    assert!((1.9..=3.5).contains(&g), "G = {g} outside 2.7 +/- 0.8");
    assert!(g > 1.0);
    println!("acceptance 6 PASS: G = {g:.4} in 2.7 +/- 0.8 and above the classical bound");
}

#[test]
fn c07_generator_estimator_closure() {
    // The fig2a operating point: Q = 0.10, g2(0) = 4.0, tau = 1.2/1.3 us,
    // 8000 cycles x 300 windows of 20 us.
    let mut cfg = scenario::preset(ScenarioName::Fig2a);
    cfg.finalize().unwrap();
    assert_eq!(cfg.sim.n_cycles, 8_000);
    assert_eq!(cfg.sim.windows_per_cycle, 300);
    let (stream, summary) = scenario::simulate_and_summarize(&cfg).unwrap();

    let g2 = summary.fit.g2_zero;
    assert!((g2 - 4.0).abs() <= 0.3, "g2(0) = {g2}");
    let q = summary.q_estimate.q;
    assert!((q - 0.10).abs() / 0.10 <= 0.15, "Q = {q}");
    let tn = summary.fit.tau_neg_us;
    assert!((tn - 1.2).abs() / 1.2 <= 0.20, "tau_neg = {tn}");
    let tp = summary.fit.tau_pos_us;
    assert!((tp - 1.3).abs() / 1.3 <= 0.20, "tau_pos = {tp}");
    let res = summary.fit.time_resolution_us();
    assert!((res - 2.5).abs() <= 0.5, "time resolution = {res}");

    // Independent O(n^2) pair counting on a 100-window subsample.
    let sub = ClickStream {
        events: stream
            .events
            .iter()
            .copied()
            .filter(|e| e.window_id < 100)
            .collect(),
        window_ns: stream.window_ns,
        n_cycles: 2,
        windows_per_cycle: 50,
        seed: stream.seed,
        config_hash: stream.config_hash,
    };
    let correlation = CorrelationConfig::default();
    let hist = cross_correlation(&sub, Channel::Signal, Channel::Probe, &correlation).unwrap();
    assert_eq!(
        hist.pair_counts,
        naive_same_window_counts(&sub, Channel::Signal, Channel::Probe, &correlation),
        "production pair counts diverge from the O(n^2) oracle"
    );

    println!(
        "acceptance 7 PASS: closure g2(0) = {g2:.3}, Q = {q:.4}, tau = {tn:.2}/{tp:.2} us, \
         resolution = {res:.2} us"
    );
}

#[test]
fn c08_g2_exact_limit() {
    for n in [0.01, 0.1, 1.0] {
        let g2 = g2_zero(0.024, 0.0, 0.0, n).unwrap();
        assert!(
            (g2 - 1.0 / n).abs() <= 1e-9 * (1.0 / n),
            "g2({n}) = {g2}"
        );
    }
    println!("acceptance 8 PASS: g2(0) = 1/<n_s^in> exactly for beta = 0");
}

#[test]
fn c09_g2_cavity_photon_invariance() {
    // Full five-term bookkeeping with zero dark counts.
    let chain = DetectionChain::new(0.3, 0.3, 0.66, 3e-3, 0.004);
    let reference = {
        let counts = mean_counts(0.024, 0.1, 0.1, 0.2, &chain);
        g2_from_counts(&counts).unwrap()
    };
    for n_c in [1.0, 10.0] {
        let counts = mean_counts(0.024, 0.1, n_c, 0.2, &chain);
        let g2 = g2_from_counts(&counts).unwrap();
        assert!(
            (g2 - reference).abs() <= 1e-9 * reference,
            "g2 at n_c = {n_c}: {g2} vs {reference}"
        );
    }
    println!("acceptance 9 PASS: g2(0) invariant over n_c in {{0.1, 1, 10}} (= {reference:.4})");
}

#[test]
fn c10_trend_properties() {
    // 1/e cavity photon number strictly increasing with drive strength.
    let n1e: Vec<f64> = [1.8, 2.9, 3.5]
        .iter()
        .map(|&f| {
            let p = PhysicalParams {
                omega: angular_from_mhz(f),
                ..PhysicalParams::reference()
            };
            one_over_e_photon_number(&p).unwrap()
        })
        .collect();
    assert!(n1e[0] < n1e[1] && n1e[1] < n1e[2], "1/e ordering {n1e:?}");

    // Detection probability per cavity photon strictly decreasing in drive
    // strength at fixed depth 4.
    let mut last = f64::INFINITY;
    let mut i = 0;
    while 1.3 + 0.1 * f64::from(i) <= 3.5 + 1e-9 {
        let omega = 1.3 + 0.1 * f64::from(i);
        let p = PhysicalParams {
            depth_in: 4.0,
            omega: angular_from_mhz(omega),
            ..PhysicalParams::reference()
        };
        let rates = qnd_core::physics::derived_rates(&p, 0.0).unwrap();
        let e0 = epsilon0(&p, rates.gamma_total).unwrap();
        let eps = qnd_core::physics::epsilon_total(e0, rates.tau_c_us, rates.tau_eit_us).unwrap();
        assert!(eps < last, "eps not decreasing at omega = {omega}: {eps} vs {last}");
        last = eps;
        i += 1;
    }

    println!(
        "acceptance 10 PASS: 1/e photon numbers {:.1} < {:.1} < {:.1}; eps(omega) decreasing",
        n1e[0], n1e[1], n1e[2]
    );
}

#[test]
fn c11_brute_force_oracle_equivalence() {
    let correlation = CorrelationConfig::default();
    for seed in 0..20 {
        let mut cfg =
            SimulationConfig::from_targets(0.2, 0.5, 0.3, 0.5, 0.15, 0.3, 7_000 + seed).unwrap();
        cfg.n_cycles = 30;
        cfg.windows_per_cycle = 15;
        let stream = simulate(&cfg).unwrap();
        assert!(stream.events.len() <= 10_000, "{} events", stream.events.len());
        for (a, b) in [
            (Channel::Signal, Channel::Probe),
            (Channel::Probe, Channel::Probe),
        ] {
            let hist = cross_correlation(&stream, a, b, &correlation).unwrap();
            assert_eq!(
                hist.pair_counts,
                naive_same_window_counts(&stream, a, b, &correlation),
                "numerator mismatch, seed {seed}"
            );
            assert_eq!(
                hist.norm_counts,
                naive_shuffled_counts(&stream, a, b, &correlation, hist.shuffle_offsets),
                "normalization mismatch, seed {seed}"
            );
        }
    }
    println!("acceptance 11 PASS: production correlator equals the O(n^2) oracle on 20 seeds");
}

#[test]
fn c12_projection_scenario() {
    let mut cfg = scenario::preset(ScenarioName::Projection);
    cfg.finalize().unwrap();
    let (_, best) = scenario::projection_sweep(&cfg).unwrap();
    // Design goals for the strong-coupling regime (eta = 20, depth 10, ideal
    // detection): device efficiency above 0.55, conditional efficiency near
    // 0.8, transmission near 0.7. Agreement is checked at factor-2
    // granularity; the assumptions behind the goals are not fully pinned
    // down, so the ratios below document how this model's optimum compares.
    let device_ratio = best.device_q / 0.55;
    let q_ratio = best.q_cond / 0.80;
    let t_ratio = best.t_s_detected / 0.70;
    for (name, ratio) in [
        ("device", device_ratio),
        ("conditional", q_ratio),
        ("transmission", t_ratio),
    ] {
        assert!(
            (0.5..=2.0).contains(&ratio),
            "{name} ratio {ratio} outside factor 2"
        );
    }
    println!(
        "acceptance 12 PASS: optimum at omega/2pi = {:.2} MHz, n_c = {:.1}: device {:.3} \
         ({:.2}x of 0.55), conditional {:.3} ({:.2}x of 0.80), transmission {:.3} ({:.2}x of 0.70)",
        best.omega_mhz,
        best.n_c_in,
        best.device_q,
        device_ratio,
        best.q_cond,
        q_ratio,
        best.t_s_detected,
        t_ratio
    );
}

#[test]
fn c13_determinism_across_runs_and_threads() {
    let mut cfg = RunConfig::default();
    cfg.apply_text(
        "[simulation]\nseed = 33\nn_cycles = 200\nwindows_per_cycle = 50\n\
         q_target = 0.1\ng2_target = 4.0\n",
    )
    .unwrap();
    cfg.finalize().unwrap();
    let sim_cfg = cfg.build_simulation().unwrap();

    let single = rayon::ThreadPoolBuilder::new()
        .num_threads(1)
        .build()
        .unwrap();
    let multi = rayon::ThreadPoolBuilder::new()
        .num_threads(4)
        .build()
        .unwrap();

    let csv_single = single.install(|| {
        qnd_core::io::stream_to_csv(&simulate(&sim_cfg).unwrap())
    });
    let csv_multi = multi.install(|| {
        qnd_core::io::stream_to_csv(&simulate(&sim_cfg).unwrap())
    });
    let csv_again = qnd_core::io::stream_to_csv(&simulate(&sim_cfg).unwrap());
    assert_eq!(csv_single, csv_multi, "stream differs across thread counts");
    assert_eq!(csv_single, csv_again, "stream differs across runs");

    // Scenario reports must be byte-identical too.
    let dir_a = tempfile::tempdir().unwrap();
    let dir_b = tempfile::tempdir().unwrap();
    let scenario_for = |dir: &std::path::Path| Scenario {
        name: ScenarioName::Custom,
        config: cfg.clone(),
        out_dir: dir.to_path_buf(),
    };
    let files_a = single
        .install(|| scenario::run_scenario(&scenario_for(dir_a.path())))
        .unwrap();
    let files_b = multi
        .install(|| scenario::run_scenario(&scenario_for(dir_b.path())))
        .unwrap();
    assert_eq!(files_a.len(), files_b.len());
    for (fa, fb) in files_a.iter().zip(&files_b) {
        assert_eq!(fa.file_name(), fb.file_name());
        let a = std::fs::read(fa).unwrap();
        let b = std::fs::read(fb).unwrap();
        assert_eq!(a, b, "{:?} differs across thread counts", fa.file_name());
    }
    println!(
        "acceptance 13 PASS: byte-identical stream and {} report files across runs and 1 vs 4 threads",
        files_a.len()
    );
}

/// Reference O(n²) same-window pair counter.
fn naive_same_window_counts(
    stream: &ClickStream,
    ch_a: Channel,
    ch_b: Channel,
    config: &CorrelationConfig,
) -> Vec<u64> {
    let bin_ns = (config.bin_us * 1e3).round() as i64;
    let max_lag_ns = (config.max_lag_us * 1e3).round() as i64;
    let n_bins = 2 * (config.max_lag_us / config.bin_us).round() as usize;
    let mut hist = vec![0u64; n_bins];
    for (ia, ea) in stream.events.iter().enumerate() {
        if ea.channel != ch_a {
            continue;
        }
        for (ib, eb) in stream.events.iter().enumerate() {
            if eb.channel != ch_b || eb.window_id != ea.window_id || ia == ib {
                continue;
            }
            let lag = i64::from(eb.t_ns) - i64::from(ea.t_ns);
            if lag < -max_lag_ns || lag >= max_lag_ns {
                continue;
            }
            hist[((lag + max_lag_ns) / bin_ns) as usize] += 1;
        }
    }
    hist
}

/// Reference O(n²) cross-cycle (shuffled) pair counter.
fn naive_shuffled_counts(
    stream: &ClickStream,
    ch_a: Channel,
    ch_b: Channel,
    config: &CorrelationConfig,
    offsets: u64,
) -> Vec<u64> {
    let bin_ns = (config.bin_us * 1e3).round() as i64;
    let max_lag_ns = (config.max_lag_us * 1e3).round() as i64;
    let n_bins = 2 * (config.max_lag_us / config.bin_us).round() as usize;
    let wpc = stream.windows_per_cycle;
    let mut hist = vec![0u64; n_bins];
    for ea in stream.events.iter().filter(|e| e.channel == ch_a) {
        let cycle = ea.window_id / wpc;
        let index = ea.window_id % wpc;
        for k in 1..=offsets {
            let partner = ((cycle + k) % stream.n_cycles) * wpc + index;
            for eb in stream
                .events
                .iter()
                .filter(|e| e.channel == ch_b && e.window_id == partner)
            {
                let lag = i64::from(eb.t_ns) - i64::from(ea.t_ns);
                if lag < -max_lag_ns || lag >= max_lag_ns {
                    continue;
                }
                hist[((lag + max_lag_ns) / bin_ns) as usize] += 1;
            }
        }
    }
    hist
}
