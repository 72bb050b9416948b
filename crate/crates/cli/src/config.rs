//! Run configuration: a flat key=value file with `[section]` headers and
//! units suffixed in the key names (frequencies are quoted as `f = ω/2π` in
//! MHz, times in µs). Every key is optional; defaults are the laboratory
//! reference values. Unknown keys are rejected with their line number.

use std::fmt::Write as _;
use std::path::Path;

use qnd_core::io::KvFile;
use qnd_core::physics::{loaded_gamma, signal_transmission, PhysicalParams};
use qnd_core::rates::{default_eps_b, DetectionChain};
use qnd_core::units::{angular_from_mhz, mhz_from_angular};
use qnd_core::{CorrelationConfig, Error, Result, SimulationConfig};

/// Beam levels feeding the model and the generator.
#[derive(Debug, Clone, PartialEq)]
pub struct Beams {
    /// Mean input cavity photon number ⟨n_c^in⟩.
    pub n_c_in: f64,
    /// Detected empty-cavity output rate R_c^{s=0} (µs⁻¹); when set it
    /// overrides `n_c_in` through the cavity lifetime.
    pub cavity_rate_detected_per_us: Option<f64>,
    /// Detected-convention input signal rate R_s^in (µs⁻¹); the physical
    /// rate entering the medium is R_s^in/q_s.
    pub signal_rate_detected_per_us: f64,
}

impl Default for Beams {
    fn default() -> Self {
        Beams {
            n_c_in: 3.7,
            cavity_rate_detected_per_us: None,
            signal_rate_detected_per_us: 0.03,
        }
    }
}

/// Windowing geometry and optional statistical targets for the generator.
/// Absent targets are derived from the closed-form model.
#[derive(Debug, Clone, PartialEq)]
pub struct SimSection {
    pub seed: u64,
    pub n_cycles: u64,
    pub windows_per_cycle: u64,
    pub window_us: f64,
    pub tau_neg_us: f64,
    pub tau_pos_us: f64,
    pub q_target: Option<f64>,
    pub t_s_target: Option<f64>,
    pub m_target: Option<f64>,
    pub g2_target: Option<f64>,
    pub background_per_window: Option<f64>,
}

impl Default for SimSection {
    fn default() -> Self {
        SimSection {
            seed: 1,
            n_cycles: 8_000,
            windows_per_cycle: 300,
            window_us: 20.0,
            tau_neg_us: 1.2,
            tau_pos_us: 1.3,
            q_target: None,
            t_s_target: None,
            m_target: None,
            g2_target: None,
            background_per_window: None,
        }
    }
}

/// Optional one-dimensional sweep axis for the `custom` scenario.
#[derive(Debug, Clone, PartialEq, Default)]
pub struct SweepSection {
    /// One of `n_c_in`, `omega_over_2pi_mhz`, `depth_in`; absent means a
    /// single-point run.
    pub variable: Option<String>,
    pub start: f64,
    pub stop: f64,
    pub steps: u64,
}

impl SweepSection {
    pub const VARIABLES: [&'static str; 3] = ["n_c_in", "omega_over_2pi_mhz", "depth_in"];

    /// Sweep values, inclusive of both ends.
    pub fn values(&self) -> Vec<f64> {
        if self.variable.is_none() || self.steps == 0 {
            return Vec::new();
        }
        if self.steps == 1 {
            return vec![self.start];
        }
        let step = (self.stop - self.start) / (self.steps - 1) as f64;
        (0..self.steps)
            .map(|i| self.start + step * i as f64)
            .collect()
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct RunConfig {
    pub physics: PhysicalParams,
    pub chain: DetectionChain,
    /// True when eps_b came from the file rather than the model default.
    pub eps_b_explicit: bool,
    pub beams: Beams,
    pub sim: SimSection,
    pub analysis: CorrelationConfig,
    pub sweep: SweepSection,
}

impl Default for RunConfig {
    fn default() -> Self {
        RunConfig {
            physics: PhysicalParams::reference(),
            chain: DetectionChain::reference(),
            eps_b_explicit: false,
            beams: Beams::default(),
            sim: SimSection::default(),
            analysis: CorrelationConfig::default(),
            sweep: SweepSection::default(),
        }
    }
}

impl RunConfig {
    /// Loads and validates a config file over the defaults; `None` gives the
    /// defaults themselves.
    pub fn load(path: Option<&Path>) -> Result<RunConfig> {
        let mut cfg = RunConfig::default();
        if let Some(path) = path {
            let text = std::fs::read_to_string(path)?;
            cfg.apply_text(&text)?;
        }
        cfg.finalize()?;
        Ok(cfg)
    }

    /// Applies key=value text on top of the current values.
    pub fn apply_text(&mut self, text: &str) -> Result<()> {
        let kv = KvFile::parse(text)?;
        for e in &kv.entries {
            let fail = |msg: String| Error::Parse {
                line: e.line,
                msg: format!("key `{}`: {msg}", e.key),
            };
            let f = || -> Result<f64> {
                e.value.parse().map_err(|err| fail(format!("bad number `{}`: {err}", e.value)))
            };
            let u = || -> Result<u64> {
                e.value.parse().map_err(|err| fail(format!("bad integer `{}`: {err}", e.value)))
            };
            let b = || -> Result<bool> {
                e.value.parse().map_err(|err| fail(format!("bad bool `{}`: {err}", e.value)))
            };
            match (e.section.as_str(), e.key.as_str()) {
                ("physics", "eta") => self.physics.eta = f()?,
                ("physics", "g_over_2pi_mhz") => self.physics.g = angular_from_mhz(f()?),
                ("physics", "depth_in") => self.physics.depth_in = f()?,
                ("physics", "depth_out") => self.physics.depth_out = f()?,
                ("physics", "omega_over_2pi_mhz") => self.physics.omega = angular_from_mhz(f()?),
                ("physics", "kappa_over_2pi_mhz") => self.physics.kappa = angular_from_mhz(f()?),
                ("physics", "gamma_e_over_2pi_mhz") => {
                    self.physics.gamma_e = angular_from_mhz(f()?)
                }
                ("physics", "gamma_0_over_2pi_mhz") => {
                    self.physics.gamma_0 = angular_from_mhz(f()?)
                }
                ("physics", "grating_loss_enabled") => self.physics.grating_loss_enabled = b()?,
                ("physics", "localization_loss") => self.physics.localization_loss = f()?,
                ("physics", "grating_eta") => self.physics.grating_eta = Some(f()?),
                ("physics", "tau_eit_us") => self.physics.tau_eit_us = Some(f()?),
                ("chain", "q_s") => self.chain.q_s = f()?,
                ("chain", "q_d") => {
                    self.chain.q_d = f()?;
                    self.chain.q_p = self.chain.q_d * self.chain.outcoupling;
                }
                ("chain", "outcoupling") => {
                    self.chain.outcoupling = f()?;
                    self.chain.q_p = self.chain.q_d * self.chain.outcoupling;
                }
                ("chain", "alpha") => self.chain.alpha = f()?,
                ("chain", "eps_b") => {
                    self.chain.eps_b = f()?;
                    self.eps_b_explicit = true;
                }
                ("chain", "r_s_per_window") => self.chain.r_s = f()?,
                ("chain", "r_p_per_window") => self.chain.r_p = f()?,
                ("beams", "n_c_in") => self.beams.n_c_in = f()?,
                ("beams", "cavity_rate_detected_per_us") => {
                    self.beams.cavity_rate_detected_per_us = Some(f()?)
                }
                ("beams", "signal_rate_detected_per_us") => {
                    self.beams.signal_rate_detected_per_us = f()?
                }
                ("simulation", "seed") => self.sim.seed = u()?,
                ("simulation", "n_cycles") => self.sim.n_cycles = u()?,
                ("simulation", "windows_per_cycle") => self.sim.windows_per_cycle = u()?,
                ("simulation", "window_us") => self.sim.window_us = f()?,
                ("simulation", "tau_neg_us") => self.sim.tau_neg_us = f()?,
                ("simulation", "tau_pos_us") => self.sim.tau_pos_us = f()?,
                ("simulation", "q_target") => self.sim.q_target = Some(f()?),
                ("simulation", "t_s_target") => self.sim.t_s_target = Some(f()?),
                ("simulation", "m_target") => self.sim.m_target = Some(f()?),
                ("simulation", "g2_target") => self.sim.g2_target = Some(f()?),
                ("simulation", "background_per_window") => {
                    self.sim.background_per_window = Some(f()?)
                }
                ("analysis", "bin_us") => self.analysis.bin_us = f()?,
                ("analysis", "max_lag_us") => self.analysis.max_lag_us = f()?,
                ("analysis", "shuffle_offsets") => self.analysis.shuffle_offsets = u()?,
                ("sweep", "variable") => {
                    if !SweepSection::VARIABLES.contains(&e.value.as_str()) {
                        return Err(fail(format!(
                            "unknown sweep variable `{}` (expected one of: {})",
                            e.value,
                            SweepSection::VARIABLES.join(", ")
                        )));
                    }
                    self.sweep.variable = Some(e.value.clone());
                }
                ("sweep", "start") => self.sweep.start = f()?,
                ("sweep", "stop") => self.sweep.stop = f()?,
                ("sweep", "steps") => self.sweep.steps = u()?,
                (section, key) => {
                    return Err(Error::Parse {
                        line: e.line,
                        msg: format!("unknown key `{key}` in section [{section}]"),
                    })
                }
            }
        }
        Ok(())
    }

    /// Resolves derived values and validates everything.
    pub fn finalize(&mut self) -> Result<()> {
        self.physics.validate()?;
        if let Some(rate) = self.beams.cavity_rate_detected_per_us {
            let tau_c = 2.0 / self.physics.kappa;
            self.beams.n_c_in =
                qnd_core::rates::input_cavity_photon_number(rate, &self.chain, tau_c)?;
        }
        if !self.eps_b_explicit {
            let gamma = loaded_gamma(&self.physics, self.beams.n_c_in);
            let t_s = signal_transmission(&self.physics, gamma);
            self.chain.eps_b = default_eps_b(self.physics.eta, t_s);
        }
        self.chain.validate()?;
        if self.sweep.variable.is_some() {
            if self.sweep.steps == 0 {
                return Err(Error::Parameter {
                    name: "sweep.steps",
                    reason: "must be >= 1".into(),
                });
            }
            if !self.sweep.start.is_finite() || !self.sweep.stop.is_finite() {
                return Err(Error::Parameter {
                    name: "sweep.start/stop",
                    reason: "must be finite".into(),
                });
            }
        }
        Ok(())
    }

    /// Physical signal photon rate entering the medium (µs⁻¹).
    pub fn arrival_rate_per_us(&self) -> f64 {
        self.beams.signal_rate_detected_per_us / self.chain.q_s
    }

    /// Background probe clicks per measurement window implied by the chain,
    /// unless pinned in the simulation section.
    pub fn background_per_window(&self) -> f64 {
        self.sim.background_per_window.unwrap_or_else(|| {
            let tau_c = 2.0 / self.physics.kappa;
            let cavity_rate_in = self.beams.n_c_in / tau_c;
            self.chain.alpha * self.chain.q_p * cavity_rate_in * self.sim.window_us
                + self.chain.r_p
        })
    }

    /// Builds the generator configuration: targets from the file when given,
    /// otherwise derived from the closed-form model at the loaded
    /// decoherence rate.
    pub fn build_simulation(&self) -> Result<SimulationConfig> {
        use qnd_core::physics::{derived_rates, epsilon0, epsilon_total};
        use qnd_core::rates::model_conditional_efficiency;

        let rates = derived_rates(&self.physics, self.beams.n_c_in)?;
        let t_s = match self.sim.t_s_target {
            Some(t) => t,
            None => signal_transmission(&self.physics, rates.gamma_total),
        };
        let q = match self.sim.q_target {
            Some(q) => q,
            None => {
                let e0 = epsilon0(&self.physics, rates.gamma_total)?;
                let eps = epsilon_total(e0, rates.tau_c_us, rates.tau_eit_us)?;
                model_conditional_efficiency(eps, self.chain.q_p, self.beams.n_c_in).min(1.0)
            }
        };
        let background = self.background_per_window();
        // Default marking: lost polaritons leave the atom in the storage
        // state and are probed at the same conditional rate as transmitted
        // ones, so M defaults to Q.
        let m = self.sim.m_target.unwrap_or(q);
        let mut cfg = SimulationConfig::from_targets(
            q,
            t_s,
            m,
            self.chain.q_s,
            self.arrival_rate_per_us(),
            background,
            self.sim.seed,
        )?;
        cfg.n_cycles = self.sim.n_cycles;
        cfg.windows_per_cycle = self.sim.windows_per_cycle;
        cfg.window_us = self.sim.window_us;
        cfg.tau_neg_us = self.sim.tau_neg_us;
        cfg.tau_pos_us = self.sim.tau_pos_us;
        cfg.dark_signal_per_window = self.chain.r_s;
        cfg.n_c_in = self.beams.n_c_in;
        if let Some(g2) = self.sim.g2_target {
            cfg.set_g2_target(q, t_s, g2)?;
        }
        Ok(cfg)
    }

    /// Renders the fully resolved configuration in the config-file format,
    /// so a run can be reproduced from its manifest.
    pub fn manifest(&self) -> String {
        let mut out = String::new();
        let p = &self.physics;
        out.push_str("[physics]\n");
        let _ = writeln!(out, "eta = {}", p.eta);
        let _ = writeln!(out, "g_over_2pi_mhz = {}", mhz_from_angular(p.g));
        let _ = writeln!(out, "depth_in = {}", p.depth_in);
        let _ = writeln!(out, "depth_out = {}", p.depth_out);
        let _ = writeln!(out, "omega_over_2pi_mhz = {}", mhz_from_angular(p.omega));
        let _ = writeln!(out, "kappa_over_2pi_mhz = {}", mhz_from_angular(p.kappa));
        let _ = writeln!(out, "gamma_e_over_2pi_mhz = {}", mhz_from_angular(p.gamma_e));
        let _ = writeln!(out, "gamma_0_over_2pi_mhz = {}", mhz_from_angular(p.gamma_0));
        let _ = writeln!(out, "grating_loss_enabled = {}", p.grating_loss_enabled);
        let _ = writeln!(out, "localization_loss = {}", p.localization_loss);
        if let Some(eta) = p.grating_eta {
            let _ = writeln!(out, "grating_eta = {eta}");
        }
        if let Some(tau) = p.tau_eit_us {
            let _ = writeln!(out, "tau_eit_us = {tau}");
        }
        let c = &self.chain;
        out.push_str("\n[chain]\n");
        let _ = writeln!(out, "q_s = {}", c.q_s);
        let _ = writeln!(out, "q_d = {}", c.q_d);
        let _ = writeln!(out, "outcoupling = {}", c.outcoupling);
        let _ = writeln!(out, "alpha = {}", c.alpha);
        let _ = writeln!(out, "eps_b = {}", c.eps_b);
        let _ = writeln!(out, "r_s_per_window = {}", c.r_s);
        let _ = writeln!(out, "r_p_per_window = {}", c.r_p);
        out.push_str("\n[beams]\n");
        let _ = writeln!(out, "n_c_in = {}", self.beams.n_c_in);
        let _ = writeln!(
            out,
            "signal_rate_detected_per_us = {}",
            self.beams.signal_rate_detected_per_us
        );
        let s = &self.sim;
        out.push_str("\n[simulation]\n");
        let _ = writeln!(out, "seed = {}", s.seed);
        let _ = writeln!(out, "n_cycles = {}", s.n_cycles);
        let _ = writeln!(out, "windows_per_cycle = {}", s.windows_per_cycle);
        let _ = writeln!(out, "window_us = {}", s.window_us);
        let _ = writeln!(out, "tau_neg_us = {}", s.tau_neg_us);
        let _ = writeln!(out, "tau_pos_us = {}", s.tau_pos_us);
        for (key, v) in [
            ("q_target", s.q_target),
            ("t_s_target", s.t_s_target),
            ("m_target", s.m_target),
            ("g2_target", s.g2_target),
            ("background_per_window", s.background_per_window),
        ] {
            if let Some(v) = v {
                let _ = writeln!(out, "{key} = {v}");
            }
        }
        let a = &self.analysis;
        out.push_str("\n[analysis]\n");
        let _ = writeln!(out, "bin_us = {}", a.bin_us);
        let _ = writeln!(out, "max_lag_us = {}", a.max_lag_us);
        let _ = writeln!(out, "shuffle_offsets = {}", a.shuffle_offsets);
        if let Some(variable) = &self.sweep.variable {
            out.push_str("\n[sweep]\n");
            let _ = writeln!(out, "variable = {variable}");
            let _ = writeln!(out, "start = {}", self.sweep.start);
            let _ = writeln!(out, "stop = {}", self.sweep.stop);
            let _ = writeln!(out, "steps = {}", self.sweep.steps);
        }
        out
    }
}
