//! Scenario orchestration: canned operating points, parameter sweeps and
//! their report files.
//!
//! Every scenario writes a `manifest.txt` with the fully resolved parameter
//! set (in the config-file format, so the run is reproducible from it) plus
//! CSV tables and a key=value summary. Reports are a pure function of
//! (config, seed): sweeps run concurrently but results are collected and
//! written in axis order.

use std::fmt::Write as _;
use std::fs;
use std::path::{Path, PathBuf};
use std::str::FromStr;

use rayon::prelude::*;

use qnd_core::analysis::{summarize, StreamSummary, SummaryInputs};
use qnd_core::physics::{
    blocking_probability, derived_rates, detected_transmission, epsilon0, epsilon_total,
    grating_overlap, peak_cooperativity, scattering_probability, signal_transmission,
};
use qnd_core::rates::{
    g2_zero, input_signal_photon_number, mean_counts, model_conditional_efficiency, psp_solve,
};
use qnd_core::sim::{simulate, Channel, ClickStream};
use qnd_core::units::{angular_from_mhz, mhz_from_angular};
use qnd_core::{Error, Result};

use crate::config::RunConfig;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ScenarioName {
    Fig2a,
    Fig2b,
    Fig3,
    Fig4,
    FigS2,
    Projection,
    Custom,
}

impl ScenarioName {
    pub const ALL: [ScenarioName; 7] = [
        ScenarioName::Fig2a,
        ScenarioName::Fig2b,
        ScenarioName::Fig3,
        ScenarioName::Fig4,
        ScenarioName::FigS2,
        ScenarioName::Projection,
        ScenarioName::Custom,
    ];

    pub fn as_str(self) -> &'static str {
        match self {
            ScenarioName::Fig2a => "fig2a",
            ScenarioName::Fig2b => "fig2b",
            ScenarioName::Fig3 => "fig3",
            ScenarioName::Fig4 => "fig4",
            ScenarioName::FigS2 => "figS2",
            ScenarioName::Projection => "projection",
            ScenarioName::Custom => "custom",
        }
    }
}

impl FromStr for ScenarioName {
    type Err = String;

    fn from_str(s: &str) -> std::result::Result<Self, String> {
        ScenarioName::ALL
            .into_iter()
            .find(|n| n.as_str().eq_ignore_ascii_case(s))
            .ok_or_else(|| {
                format!(
                    "unknown scenario `{s}` (expected one of: {})",
                    ScenarioName::ALL.map(|n| n.as_str()).join(", ")
                )
            })
    }
}

/// A named run: resolved configuration plus output directory.
#[derive(Debug, Clone)]
pub struct Scenario {
    pub name: ScenarioName,
    pub config: RunConfig,
    pub out_dir: PathBuf,
}

/// Baseline configuration for a scenario, before user overrides.
pub fn preset(name: ScenarioName) -> RunConfig {
    let mut cfg = RunConfig::default();
    match name {
        ScenarioName::Fig2a => {
            // Strong-correlation operating point: the generator targets the
            // measured efficiency and correlation height.
            cfg.sim.q_target = Some(0.10);
            cfg.sim.g2_target = Some(4.0);
        }
        ScenarioName::Fig2b => {
            // Slow drive, per-dataset fit: peak cooperativity, fitted depth
            // and a directly supplied EIT lifetime.
            cfg.physics.eta = 8.6;
            cfg.physics.depth_in = 5.0;
            cfg.physics.omega = angular_from_mhz(1.3);
            cfg.physics.tau_eit_us = Some(1.4);
            cfg.beams.n_c_in = 1.2;
        }
        ScenarioName::Fig3 => {
            cfg.beams.signal_rate_detected_per_us = 0.28;
            cfg.sim.n_cycles = 400;
        }
        ScenarioName::Fig4 => {
            cfg.physics.omega = angular_from_mhz(2.9);
            cfg.beams.signal_rate_detected_per_us = 0.28;
        }
        ScenarioName::FigS2 => {
            cfg.physics.depth_in = 4.0;
            cfg.beams.n_c_in = 0.0;
        }
        ScenarioName::Projection => {
            cfg.physics.eta = 20.0;
            cfg.physics.depth_in = 10.0;
            cfg.physics.depth_out = 0.0;
            cfg.physics.grating_eta = Some(20.0);
            cfg.chain.q_s = 1.0;
            cfg.chain.q_d = 1.0;
            cfg.chain.outcoupling = 1.0;
            cfg.chain.q_p = 1.0;
            cfg.chain.alpha = 0.0;
            cfg.chain.eps_b = 0.0;
            cfg.eps_b_explicit = true;
        }
        ScenarioName::Custom => {}
    }
    cfg
}

/// Runs a scenario, returning the files it wrote.
pub fn run_scenario(scenario: &Scenario) -> Result<Vec<PathBuf>> {
    fs::create_dir_all(&scenario.out_dir)?;
    let mut files = vec![write_file(
        &scenario.out_dir,
        "manifest.txt",
        &format!(
            "# scenario = {}\n{}",
            scenario.name.as_str(),
            scenario.config.manifest()
        ),
    )?];
    let more = match scenario.name {
        ScenarioName::Fig2a => fig2a(scenario)?,
        ScenarioName::Fig2b => fig2b(scenario)?,
        ScenarioName::Fig3 => fig3(scenario)?,
        ScenarioName::Fig4 => fig4(scenario)?,
        ScenarioName::FigS2 => fig_s2(scenario)?,
        ScenarioName::Projection => projection(scenario)?,
        ScenarioName::Custom => custom(scenario)?,
    };
    files.extend(more);
    Ok(files)
}

/// Closed-form model report for one operating point, as key=value pairs.
pub fn model_report(cfg: &RunConfig) -> Result<Vec<(String, String)>> {
    let p = &cfg.physics;
    let rates = derived_rates(p, cfg.beams.n_c_in)?;
    let eps0_free = epsilon0(p, p.gamma_0)?;
    let eps0_loaded = epsilon0(p, rates.gamma_total)?;
    let eps = epsilon_total(eps0_loaded, rates.tau_c_us, rates.tau_eit_us)?;
    let t_s_free = signal_transmission(p, p.gamma_0);
    let t_s_loaded = signal_transmission(p, rates.gamma_total);
    let q_model = model_conditional_efficiency(eps, cfg.chain.q_p, cfg.beams.n_c_in).min(1.0);
    let n_s_in = input_signal_photon_number(
        cfg.beams.signal_rate_detected_per_us,
        cfg.chain.q_s,
        rates.tau_eit_us,
    )?;
    let counts = mean_counts(eps0_loaded, n_s_in, cfg.beams.n_c_in, t_s_loaded, &cfg.chain);
    let grating_eta = p.grating_eta.unwrap_or_else(|| peak_cooperativity(p));
    let mut out: Vec<(String, String)> = Vec::new();
    let mut push = |k: &str, v: f64| out.push((k.to_string(), format!("{v}")));
    push("gamma_c_over_2pi_mhz", mhz_from_angular(rates.gamma_c));
    push("gamma_total_over_2pi_mhz", mhz_from_angular(rates.gamma_total));
    push("tau_c_us", rates.tau_c_us);
    push("tau_eit_us", rates.tau_eit_us);
    push("zeta", rates.zeta);
    push("eps0_probe_free", eps0_free);
    push("eps0_loaded", eps0_loaded);
    push("four_eps0_probe_free", 4.0 * eps0_free);
    push("blocking_probability", blocking_probability((4.0 * eps0_free).min(1.0))?);
    push("eps_total", eps);
    push("t_s_probe_free", t_s_free);
    push("t_s_loaded", t_s_loaded);
    push("t_s_detected", detected_transmission(p, rates.gamma_total));
    push("peak_cooperativity", peak_cooperativity(p));
    push("grating_overlap", grating_overlap(grating_eta));
    push("scattering_probability", scattering_probability(p.eta));
    push("q_model", q_model);
    push("device_q_model", q_model * detected_transmission(p, rates.gamma_total));
    push("n_s_in", n_s_in);
    push("n_c_in", cfg.beams.n_c_in);
    push("mean_n_s", counts.n_s);
    push("mean_n_p", counts.n_p);
    push("mean_true_detections", counts.t);
    push("mean_background", counts.b);
    push("mean_coincidences", counts.n_sp);
    if n_s_in > 0.0 && eps0_loaded > 0.0 {
        push(
            "g2_zero_model",
            g2_zero(eps0_loaded, cfg.chain.eps_b, cfg.chain.alpha, n_s_in)?,
        );
    }
    Ok(out)
}

/// Simulates the configured stream plus a zero-signal companion (for the
/// false-detection level) and summarizes both.
pub fn simulate_and_summarize(cfg: &RunConfig) -> Result<(ClickStream, StreamSummary)> {
    let sim_cfg = cfg.build_simulation()?;
    let stream = simulate(&sim_cfg)?;

    let mut companion = sim_cfg.clone();
    companion.arrival_rate_per_us = 0.0;
    companion.seed = sim_cfg.seed.wrapping_add(0x9E37_79B9);
    let zero_signal = simulate(&companion)?;
    let p_err = if zero_signal.events.is_empty() {
        0.0
    } else {
        zero_signal.mean_per_window(Channel::Probe)
    };

    let mut inputs = SummaryInputs::new(sim_cfg.arrival_rate_per_us, sim_cfg.q_s);
    inputs.correlation = cfg.analysis;
    inputs.p_err = Some(p_err);
    let summary = summarize(&stream, &inputs)?;
    Ok((stream, summary))
}

fn fig2a(scenario: &Scenario) -> Result<Vec<PathBuf>> {
    let (_, summary) = simulate_and_summarize(&scenario.config)?;
    let mut files = vec![write_histogram(&scenario.out_dir, &summary)?];
    files.push(write_file(
        &scenario.out_dir,
        "summary.txt",
        &summary_kv(&summary),
    )?);
    Ok(files)
}

fn fig2b(scenario: &Scenario) -> Result<Vec<PathBuf>> {
    let cfg = &scenario.config;
    let p = &cfg.physics;
    let rates = derived_rates(p, cfg.beams.n_c_in)?;
    let eps0_v = epsilon0(p, rates.gamma_total)?;
    let eps = epsilon_total(eps0_v, rates.tau_c_us, rates.tau_eit_us)?;

    let mut table = String::from("n_s_in,probe_ratio_model,probe_ratio_ideal\n");
    let steps = 15;
    for i in 1..=steps {
        let n_s_in = 0.1 * f64::from(i);
        let model = eps * n_s_in + cfg.chain.alpha;
        let ideal = 0.25 * n_s_in;
        let _ = writeln!(table, "{n_s_in},{model},{ideal}");
    }
    let mut summary = String::new();
    let _ = writeln!(summary, "slope_model = {eps}");
    let _ = writeln!(summary, "offset_model = {}", cfg.chain.alpha);
    let _ = writeln!(summary, "slope_ideal = 0.25");
    let _ = writeln!(summary, "eps0 = {eps0_v}");
    let _ = writeln!(summary, "tau_eit_us = {}", rates.tau_eit_us);
    let _ = writeln!(summary, "tau_c_us = {}", rates.tau_c_us);
    Ok(vec![
        write_file(&scenario.out_dir, "table.csv", &table)?,
        write_file(&scenario.out_dir, "summary.txt", &summary)?,
    ])
}

/// Observed detection-efficiency slopes dQ/d⟨n_c^in⟩ per drive setting,
/// from the measured linear fits.
pub fn observed_q_slope(omega_mhz: f64) -> Option<f64> {
    [(1.8, 0.10), (2.9, 0.05), (3.5, 0.019)]
        .into_iter()
        .find(|(f, _)| (f - omega_mhz).abs() < 1e-9)
        .map(|(_, s)| s)
}

fn fig3(scenario: &Scenario) -> Result<Vec<PathBuf>> {
    let cfg = &scenario.config;
    let omegas = [1.8, 2.9, 3.5];
    let n_cs: Vec<f64> = (1..=8).map(|i| 0.5 * f64::from(i)).collect();
    let mut points = Vec::new();
    for &omega in &omegas {
        for &n_c in &n_cs {
            points.push((omega, n_c));
        }
    }
    let rows: Result<Vec<String>> = points
        .par_iter()
        .enumerate()
        .map(|(idx, &(omega_mhz, n_c))| {
            let mut point = cfg.clone();
            point.physics.omega = angular_from_mhz(omega_mhz);
            point.beams.n_c_in = n_c;
            point.eps_b_explicit = false;
            point.finalize()?;

            let rates = derived_rates(&point.physics, n_c)?;
            let eps0_v = epsilon0(&point.physics, rates.gamma_total)?;
            let eps = epsilon_total(eps0_v, rates.tau_c_us, rates.tau_eit_us)?;
            let q_model = model_conditional_efficiency(eps, point.chain.q_p, n_c).min(1.0);
            let t_s_model = signal_transmission(&point.physics, rates.gamma_total);
            let q_obs = observed_q_slope(omega_mhz).expect("preset drive") * n_c;

            // Simulated estimate at the observed-efficiency operating point.
            point.sim.q_target = Some(q_obs.min(0.95));
            point.sim.t_s_target = Some(t_s_model);
            point.sim.seed = cfg.sim.seed.wrapping_add(idx as u64);
            let (_, summary) = simulate_and_summarize(&point)?;

            Ok(format!(
                "{omega_mhz},{n_c},{q_model},{q_obs},{},{t_s_model}\n",
                summary.q_estimate.q
            ))
        })
        .collect();
    let mut table = String::from("omega_mhz,n_c_in,q_model,q_obs_param,q_simulated,t_s_model\n");
    for row in rows? {
        table.push_str(&row);
    }

    let mut summary = String::new();
    for &omega in &omegas {
        let _ = writeln!(
            summary,
            "dq_dnc_obs_{omega} = {}",
            observed_q_slope(omega).expect("preset drive")
        );
        let mut point = cfg.clone();
        point.physics.omega = angular_from_mhz(omega);
        point.beams.n_c_in = 1.0;
        point.eps_b_explicit = false;
        point.finalize()?;
        let rates = derived_rates(&point.physics, 1.0)?;
        let eps0_v = epsilon0(&point.physics, rates.gamma_total)?;
        let eps = epsilon_total(eps0_v, rates.tau_c_us, rates.tau_eit_us)?;
        let _ = writeln!(
            summary,
            "dq_dnc_model_{omega} = {}",
            model_conditional_efficiency(eps, point.chain.q_p, 1.0)
        );
    }
    Ok(vec![
        write_file(&scenario.out_dir, "table.csv", &table)?,
        write_file(&scenario.out_dir, "summary.txt", &summary)?,
    ])
}

fn fig4(scenario: &Scenario) -> Result<Vec<PathBuf>> {
    let cfg = &scenario.config;
    let mut table =
        String::from("n_c_in,p11,p10,p01,p00,p_err,state_prep,device_q\n");
    for i in 1..=24 {
        let n_c = 0.25 * f64::from(i);
        let mut point = cfg.clone();
        point.beams.n_c_in = n_c;
        point.eps_b_explicit = false;
        point.finalize()?;
        let rates = derived_rates(&point.physics, n_c)?;
        let eps0_v = epsilon0(&point.physics, rates.gamma_total)?;
        let eps = epsilon_total(eps0_v, rates.tau_c_us, rates.tau_eit_us)?;
        let q = model_conditional_efficiency(eps, point.chain.q_p, n_c).min(1.0);
        let t_s = signal_transmission(&point.physics, rates.gamma_total);
        let n_s_in = input_signal_photon_number(
            point.beams.signal_rate_detected_per_us,
            point.chain.q_s,
            rates.tau_eit_us,
        )?;
        let counts = mean_counts(eps0_v, n_s_in, n_c, t_s, &point.chain);
        let m = counts.n_p / n_s_in;
        let psp = psp_solve(q, t_s, m)?;
        let _ = writeln!(
            table,
            "{n_c},{},{},{},{},{},{},{}",
            psp.p11, psp.p10, psp.p01, psp.p00, counts.b, psp.state_prep, psp.p11
        );
    }
    Ok(vec![write_file(&scenario.out_dir, "table.csv", &table)?])
}

fn fig_s2(scenario: &Scenario) -> Result<Vec<PathBuf>> {
    let cfg = &scenario.config;
    let mut table = String::from("omega_mhz,tau_eit_us,eps0,eps_total\n");
    for i in 0..=22 {
        let omega_mhz = 1.3 + 0.1 * f64::from(i);
        let mut point = cfg.physics.clone();
        point.omega = angular_from_mhz(omega_mhz);
        let rates = derived_rates(&point, cfg.beams.n_c_in)?;
        let eps0_v = epsilon0(&point, rates.gamma_total)?;
        let eps = epsilon_total(eps0_v, rates.tau_c_us, rates.tau_eit_us)?;
        let _ = writeln!(table, "{omega_mhz},{},{eps0_v},{eps}", rates.tau_eit_us);
    }
    Ok(vec![write_file(&scenario.out_dir, "table.csv", &table)?])
}

/// One point of the forward-projection sweep.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ProjectionPoint {
    pub omega_mhz: f64,
    pub n_c_in: f64,
    /// Conditional efficiency, capped at 1 where the linear model exceeds it.
    pub q_cond: f64,
    /// Transmission of detected polaritons (grating and localization
    /// factors included).
    pub t_s_detected: f64,
    pub device_q: f64,
}

/// Sweeps (Ω, ⟨n_c^in⟩) for the configured parameters and returns all points
/// plus the device-efficiency optimum.
pub fn projection_sweep(cfg: &RunConfig) -> Result<(Vec<ProjectionPoint>, ProjectionPoint)> {
    let mut points = Vec::new();
    for i in 0..=52 {
        let omega_mhz = 1.0 + 0.25 * f64::from(i);
        for j in 1..=80 {
            let n_c = 0.5 * f64::from(j);
            let mut p = cfg.physics.clone();
            p.omega = angular_from_mhz(omega_mhz);
            let rates = derived_rates(&p, n_c)?;
            let eps0_v = epsilon0(&p, rates.gamma_total)?;
            let eps = epsilon_total(eps0_v, rates.tau_c_us, rates.tau_eit_us)?;
            let q_cond = model_conditional_efficiency(eps, cfg.chain.q_p, n_c).min(1.0);
            let t_det = detected_transmission(&p, rates.gamma_total);
            points.push(ProjectionPoint {
                omega_mhz,
                n_c_in: n_c,
                q_cond,
                t_s_detected: t_det,
                device_q: q_cond * t_det,
            });
        }
    }
    let best = points
        .iter()
        .copied()
        .max_by(|a, b| a.device_q.partial_cmp(&b.device_q).unwrap())
        .expect("nonempty sweep");
    Ok((points, best))
}

fn projection(scenario: &Scenario) -> Result<Vec<PathBuf>> {
    let (points, best) = projection_sweep(&scenario.config)?;
    let mut table = String::from("omega_mhz,n_c_in,q_cond,t_s_detected,device_q\n");
    for p in &points {
        let _ = writeln!(
            table,
            "{},{},{},{},{}",
            p.omega_mhz, p.n_c_in, p.q_cond, p.t_s_detected, p.device_q
        );
    }
    let mut summary = String::new();
    let _ = writeln!(summary, "optimum_omega_mhz = {}", best.omega_mhz);
    let _ = writeln!(summary, "optimum_n_c_in = {}", best.n_c_in);
    let _ = writeln!(summary, "optimum_q_cond = {}", best.q_cond);
    let _ = writeln!(summary, "optimum_t_s_detected = {}", best.t_s_detected);
    let _ = writeln!(summary, "optimum_device_q = {}", best.device_q);
    // Reference design goals for this parameter regime: device efficiency
    // above 0.55 with conditional efficiency near 0.8 and transmission near
    // 0.7. Ratios below document how this sweep's optimum compares.
    let _ = writeln!(summary, "device_q_over_0.55 = {}", best.device_q / 0.55);
    let _ = writeln!(summary, "q_cond_over_0.80 = {}", best.q_cond / 0.80);
    let _ = writeln!(
        summary,
        "t_s_detected_over_0.70 = {}",
        best.t_s_detected / 0.70
    );
    Ok(vec![
        write_file(&scenario.out_dir, "table.csv", &table)?,
        write_file(&scenario.out_dir, "summary.txt", &summary)?,
    ])
}

fn custom(scenario: &Scenario) -> Result<Vec<PathBuf>> {
    let cfg = &scenario.config;
    let mut files = Vec::new();

    let mut model = String::new();
    for (k, v) in model_report(cfg)? {
        let _ = writeln!(model, "{k} = {v}");
    }
    files.push(write_file(&scenario.out_dir, "model.txt", &model)?);

    // A configured sweep axis turns the run into a model table over that
    // axis; with no axis this is a single-point run with the full pipeline.
    let sweep_values = cfg.sweep.values();
    if let Some(variable) = &cfg.sweep.variable {
        let rows: Result<Vec<String>> = sweep_values
            .par_iter()
            .map(|&value| {
                let mut point = cfg.clone();
                match variable.as_str() {
                    "n_c_in" => point.beams.n_c_in = value,
                    "omega_over_2pi_mhz" => point.physics.omega = angular_from_mhz(value),
                    "depth_in" => point.physics.depth_in = value,
                    other => unreachable!("validated sweep variable {other}"),
                }
                point.eps_b_explicit = false;
                point.finalize()?;
                let rates = derived_rates(&point.physics, point.beams.n_c_in)?;
                let eps0_v = epsilon0(&point.physics, rates.gamma_total)?;
                let eps = epsilon_total(eps0_v, rates.tau_c_us, rates.tau_eit_us)?;
                let q = model_conditional_efficiency(eps, point.chain.q_p, point.beams.n_c_in)
                    .min(1.0);
                let t_s = signal_transmission(&point.physics, rates.gamma_total);
                Ok(format!("{value},{eps0_v},{t_s},{q},{}\n", q * t_s))
            })
            .collect();
        let mut table = format!("{variable},eps0,t_s,q_model,device_q\n");
        for row in rows? {
            table.push_str(&row);
        }
        files.push(write_file(&scenario.out_dir, "sweep.csv", &table)?);
        return Ok(files);
    }

    let sim_cfg = cfg.build_simulation()?;
    let stream = simulate(&sim_cfg)?;
    let base = scenario.out_dir.join("clicks");
    qnd_core::io::write_stream(&stream, &base)?;
    files.push(base.with_extension("csv"));
    files.push(base.with_extension("meta"));

    let (_, summary) = simulate_and_summarize(cfg)?;
    files.push(write_histogram(&scenario.out_dir, &summary)?);
    files.push(write_file(
        &scenario.out_dir,
        "summary.txt",
        &summary_kv(&summary),
    )?);
    Ok(files)
}

/// Renders a stream summary as key=value text.
pub fn summary_kv(summary: &StreamSummary) -> String {
    let mut out = String::new();
    let d = &summary.detection;
    let fit = &summary.fit;
    let pairs: Vec<(&str, f64)> = vec![
        ("n_s_per_window", summary.n_s_per_window),
        ("n_p_per_window", summary.n_p_per_window),
        ("m_observed", summary.m_observed),
        ("m_corrected", summary.m_corrected),
        ("g2_zero", fit.g2_zero),
        ("g2_zero_err", fit.g2_zero_err),
        ("tau_neg_us", fit.tau_neg_us),
        ("tau_neg_err", fit.tau_neg_err),
        ("tau_pos_us", fit.tau_pos_us),
        ("tau_pos_err", fit.tau_pos_err),
        ("time_resolution_us", fit.time_resolution_us()),
        ("baseline", fit.baseline),
        ("reduced_chi2", fit.reduced_chi2),
        ("q_area", summary.q_estimate.q),
        ("q_area_err", summary.q_estimate.q_err),
        ("t_s", d.t_s),
        ("device_q", d.device_q),
        ("p00", d.psp.p00),
        ("p01", d.psp.p01),
        ("p10", d.psp.p10),
        ("p11", d.psp.p11),
        ("state_prep", d.psp.state_prep),
        ("p_err", d.p_err),
        ("f_m", d.f_m),
        ("f_qnd", d.f_qnd),
        ("transfer_meter", d.transfer_meter),
        ("transfer_signal", d.transfer_signal),
    ];
    for (k, v) in pairs {
        let _ = writeln!(out, "{k} = {v}");
    }
    let _ = writeln!(out, "baseline_ok = {}", summary.q_estimate.baseline_ok);
    if let Some(g) = d.cauchy_schwarz {
        let _ = writeln!(out, "cauchy_schwarz = {g}");
    }
    out
}

fn write_histogram(dir: &Path, summary: &StreamSummary) -> Result<PathBuf> {
    let hist = &summary.histogram;
    let mut text = String::from("tau_us,g2,err\n");
    for (i, c) in hist.bin_centers_us().iter().enumerate() {
        let _ = writeln!(text, "{c},{},{}", hist.g2[i], hist.err[i]);
    }
    write_file(dir, "histogram.csv", &text)
}

fn write_file(dir: &Path, name: &str, text: &str) -> Result<PathBuf> {
    let path = dir.join(name);
    fs::write(&path, text).map_err(Error::Io)?;
    Ok(path)
}
