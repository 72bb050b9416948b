//! Mean-count bookkeeping and figures of merit.
//!
//! Detected probe clicks split into true detections (a cavity photon "hit" a
//! signal polariton) and backgrounds (residual polarization rotation from
//! atom-number fluctuations, decohered atoms, dark counts). This module
//! carries that accounting through to the published figures of merit: the
//! zero-lag cross-correlation, the conditional nondestructive quantum
//! efficiency Q, the joint detection-probability matrix P_sp, the QND
//! transfer coefficients and the Cauchy-Schwarz quantity.

use crate::error::{Error, Result};
use crate::physics::{epsilon0_saturated, scattering_probability};

/// Detection-path efficiencies and background levels.
#[derive(Debug, Clone, PartialEq)]
pub struct DetectionChain {
    /// Signal-path detection efficiency (fiber coupling × detector).
    pub q_s: f64,
    /// Cavity-path detector and fiber efficiency.
    pub q_d: f64,
    /// Cavity mirror out-coupling efficiency T/(T+L).
    pub outcoupling: f64,
    /// Total probe-path efficiency, q_d × outcoupling.
    pub q_p: f64,
    /// Fractional polarization-rotation background from shot-to-shot atom
    /// number fluctuations.
    pub alpha: f64,
    /// Probability ε_b = ε_d·f_s of a probe click caused by a decohered atom.
    pub eps_b: f64,
    /// Mean dark counts per accounting window, signal detector.
    pub r_s: f64,
    /// Mean dark counts per accounting window, probe detector.
    pub r_p: f64,
}

impl DetectionChain {
    /// Builds a chain with `q_p` derived from `q_d × outcoupling`.
    pub fn new(q_s: f64, q_d: f64, outcoupling: f64, alpha: f64, eps_b: f64) -> Self {
        DetectionChain {
            q_s,
            q_d,
            outcoupling,
            q_p: q_d * outcoupling,
            alpha,
            eps_b,
            r_s: 0.0,
            r_p: 0.0,
        }
    }

    /// Laboratory reference values: q_s = 0.3, q_d = 0.3, outcoupling = 0.66,
    /// α = 3×10⁻³, dark counts negligible.
    pub fn reference() -> Self {
        DetectionChain::new(0.3, 0.3, 0.66, 3e-3, 0.0)
    }

    pub fn validate(&self) -> Result<()> {
        let unit: [(&'static str, f64); 6] = [
            ("q_s", self.q_s),
            ("q_d", self.q_d),
            ("outcoupling", self.outcoupling),
            ("q_p", self.q_p),
            ("alpha", self.alpha),
            ("eps_b", self.eps_b),
        ];
        for (name, v) in unit {
            if !(0.0..=1.0).contains(&v) {
                return Err(Error::parameter(name, format!("must lie in [0, 1], got {v}")));
            }
        }
        if (self.q_p - self.q_d * self.outcoupling).abs() > 1e-12 {
            return Err(Error::parameter(
                "q_p",
                format!(
                    "must equal q_d*outcoupling = {}, got {}",
                    self.q_d * self.outcoupling,
                    self.q_p
                ),
            ));
        }
        for (name, v) in [("r_s", self.r_s), ("r_p", self.r_p)] {
            if !v.is_finite() || v < 0.0 {
                return Err(Error::parameter(name, format!("must be >= 0, got {v}")));
            }
        }
        Ok(())
    }
}

/// Mean detected photon numbers per accounting window.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct MeanCounts {
    /// Mean input signal photon number.
    pub n_s_in: f64,
    /// Mean input cavity photon number.
    pub n_c_in: f64,
    /// Detected signal photons ⟨n_s⟩.
    pub n_s: f64,
    /// Detected probe photons ⟨n_p⟩ = ⟨t⟩ + ⟨b⟩.
    pub n_p: f64,
    /// True detections ⟨t⟩ (probe clicks caused by signal photons).
    pub t: f64,
    /// Background probe clicks ⟨b⟩.
    pub b: f64,
    /// Coincidences ⟨n_s n_p⟩.
    pub n_sp: f64,
}

/// Joint probabilities of detecting s∈{0,1} signal and p∈{0,1} probe photons
/// for one input signal photon.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PspMatrix {
    pub p00: f64,
    pub p01: f64,
    pub p10: f64,
    pub p11: f64,
    /// Probability of an outgoing signal photon given a probe click,
    /// P₁₁/(P₁₁+P₀₁). Zero when no probe clicks occur at all.
    pub state_prep: f64,
}

/// Whether a summary was computed from detected (observed) quantities or
/// from efficiency-corrected (intrinsic) ones. The two are never mixed.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum EfficiencyView {
    Observed,
    Intrinsic,
}

impl std::fmt::Display for EfficiencyView {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            EfficiencyView::Observed => write!(f, "observed"),
            EfficiencyView::Intrinsic => write!(f, "intrinsic"),
        }
    }
}

/// Derived figures of merit for one operating point.
#[derive(Debug, Clone, PartialEq)]
pub struct DetectionSummary {
    pub view: EfficiencyView,
    /// Conditional nondestructive quantum efficiency.
    pub q: f64,
    /// Signal transmission.
    pub t_s: f64,
    /// Device nondestructive quantum efficiency Q × T_s = P₁₁.
    pub device_q: f64,
    pub psp: PspMatrix,
    /// Probe clicks per window with no signal present.
    pub p_err: f64,
    /// Measurement fidelity F_M = P₁₁ + P₀₁.
    pub f_m: f64,
    /// QND fidelity F_QND = P₁₁ + P₁₀.
    pub f_qnd: f64,
    /// Input-to-meter transfer coefficient.
    pub transfer_meter: f64,
    /// Input-to-output transfer coefficient.
    pub transfer_signal: f64,
    /// Cauchy-Schwarz quantity, when auto-correlations are available.
    pub cauchy_schwarz: Option<f64>,
    /// Detector time resolution τ_< + τ_> (µs), when fitted.
    pub time_resolution_us: Option<f64>,
}

impl DetectionSummary {
    /// Assembles the full summary from a measured (Q, T_s, M) triple plus the
    /// background-only probe level.
    pub fn from_measurements(
        q: f64,
        t_s: f64,
        m: f64,
        p_err: f64,
        view: EfficiencyView,
    ) -> Result<DetectionSummary> {
        let psp = psp_solve(q, t_s, m)?;
        let f_m = psp.p11 + psp.p01;
        let f_qnd = psp.p11 + psp.p10;
        let (transfer_meter, transfer_signal) = transfer_coefficients(f_m, f_qnd)?;
        Ok(DetectionSummary {
            view,
            q,
            t_s,
            device_q: psp.p11,
            psp,
            p_err,
            f_m,
            f_qnd,
            transfer_meter,
            transfer_signal,
            cauchy_schwarz: None,
            time_resolution_us: None,
        })
    }
}

/// Photon rate entering the cavity and the resulting mean photon number,
/// reconstructed from the detected empty-cavity rate:
/// R_c^in = R_c^{s=0}/(q_d·outcoupling), ⟨n_c^in⟩ = R_c^in·τ_c.
pub fn input_cavity_photon_number(
    rate_detected_empty: f64,
    chain: &DetectionChain,
    tau_c_us: f64,
) -> Result<f64> {
    let q_c = chain.q_d * chain.outcoupling;
    if q_c <= 0.0 {
        return Err(Error::domain(
            "input_cavity_photon_number",
            "cavity-path efficiency q_d*outcoupling is zero",
        ));
    }
    Ok(rate_detected_empty / q_c * tau_c_us)
}

/// Mean input signal photon number per EIT lifetime:
/// ⟨n_s^in⟩ = R_s^in·τ_EIT/q_s.
pub fn input_signal_photon_number(rate_detected_in: f64, q_s: f64, tau_eit_us: f64) -> Result<f64> {
    if q_s <= 0.0 {
        return Err(Error::domain(
            "input_signal_photon_number",
            "signal-path efficiency q_s is zero",
        ));
    }
    Ok(rate_detected_in * tau_eit_us / q_s)
}

/// Populates the full mean-count bookkeeping:
///
/// ```text
/// n_s  = q_s T_s ⟨n_s^in⟩ + r_s
/// b    = α q_p ⟨n_c^in⟩ + r_p
/// t    = (ε₀ + ε_b) q_p ⟨n_c^in⟩ ⟨n_s^in⟩
/// n_p  = t + b
/// n_sp = ε₀ q_p ⟨n_c^in⟩ · T_s q_s ⟨n_s^in⟩
///      + (α + ε_b ⟨n_s^in⟩) q_p ⟨n_c^in⟩ · T_s q_s ⟨n_s^in⟩
///      + T_s q_s ⟨n_s^in⟩ r_p
///      + ((ε₀ + ε_b) ⟨n_s^in⟩ + α) q_p ⟨n_c^in⟩ r_s
///      + r_p r_s
/// ```
///
/// Every coincidence term beyond the first is a background source.
pub fn mean_counts(
    eps0: f64,
    n_s_in: f64,
    n_c_in: f64,
    t_s: f64,
    chain: &DetectionChain,
) -> MeanCounts {
    let q_p = chain.q_p;
    let q_s = chain.q_s;
    let n_s = q_s * t_s * n_s_in + chain.r_s;
    let b = chain.alpha * q_p * n_c_in + chain.r_p;
    let t = (eps0 + chain.eps_b) * q_p * n_c_in * n_s_in;
    let n_p = t + b;
    let detected_signal = t_s * q_s * n_s_in;
    let n_sp = eps0 * q_p * n_c_in * detected_signal
        + (chain.alpha + chain.eps_b * n_s_in) * q_p * n_c_in * detected_signal
        + detected_signal * chain.r_p
        + ((eps0 + chain.eps_b) * n_s_in + chain.alpha) * q_p * n_c_in * chain.r_s
        + chain.r_p * chain.r_s;
    MeanCounts {
        n_s_in,
        n_c_in,
        n_s,
        n_p,
        t,
        b,
        n_sp,
    }
}

/// Zero-lag cross-correlation, dark counts neglected:
/// g²(0) = (1+β)/(β + ⟨n_s^in⟩) with β = (α + ε_b⟨n_s^in⟩)/ε₀.
///
/// Independent of the cavity photon number: detections and backgrounds both
/// scale linearly with it.
pub fn g2_zero(eps0: f64, eps_b: f64, alpha: f64, n_s_in: f64) -> Result<f64> {
    if eps0 <= 0.0 {
        return Err(Error::domain("g2_zero", format!("eps0 must be > 0, got {eps0}")));
    }
    let beta = (alpha + eps_b * n_s_in) / eps0;
    let denom = beta + n_s_in;
    if denom == 0.0 {
        return Err(Error::domain("g2_zero", "beta + n_s_in is zero"));
    }
    Ok((1.0 + beta) / denom)
}

/// Zero-lag cross-correlation from the full bookkeeping,
/// ⟨n_s n_p⟩/(⟨n_s⟩⟨n_p⟩).
pub fn g2_from_counts(counts: &MeanCounts) -> Result<f64> {
    let denom = counts.n_s * counts.n_p;
    if denom == 0.0 {
        return Err(Error::domain("g2_from_counts", "zero mean counts"));
    }
    Ok(counts.n_sp / denom)
}

/// Conditional nondestructive quantum efficiency from measured counts,
/// Q = (⟨n_s n_p⟩ − ⟨n_p⟩⟨n_s⟩)/⟨n_s⟩: the covariance removes random
/// coincidences.
pub fn conditional_efficiency(counts: &MeanCounts) -> Result<f64> {
    if counts.n_s <= 0.0 {
        return Err(Error::domain(
            "conditional_efficiency",
            format!("mean detected signal must be > 0, got {}", counts.n_s),
        ));
    }
    Ok((counts.n_sp - counts.n_p * counts.n_s) / counts.n_s)
}

/// Model form of the conditional efficiency, Q = ε q_p ⟨n_c^in⟩.
pub fn model_conditional_efficiency(eps: f64, q_p: f64, n_c_in: f64) -> f64 {
    eps * q_p * n_c_in
}

/// Solves the joint detection probabilities from the three measured
/// constraints P₁₁/(P₁₁+P₁₀) = Q, P₁₁+P₁₀ = T_s, P₀₁+P₁₁ = M and ΣP = 1:
///
/// ```text
/// P11 = Q·T_s      P10 = T_s(1−Q)
/// P01 = M − Q·T_s  P00 = 1 − T_s − M + Q·T_s
/// ```
pub fn psp_solve(q: f64, t_s: f64, m: f64) -> Result<PspMatrix> {
    if !(0.0..=1.0).contains(&q) {
        return Err(Error::Infeasible {
            constraint: format!("Q must lie in [0, 1], got {q}"),
        });
    }
    if !(0.0..=1.0).contains(&t_s) {
        return Err(Error::Infeasible {
            constraint: format!("T_s must lie in [0, 1], got {t_s}"),
        });
    }
    let p11 = q * t_s;
    if m < p11 {
        return Err(Error::Infeasible {
            constraint: format!("M >= Q*T_s violated: M = {m}, Q*T_s = {p11}"),
        });
    }
    let p00 = 1.0 - t_s - m + p11;
    if p00 < 0.0 {
        return Err(Error::Infeasible {
            constraint: format!("P00 = 1 - T_s - M + Q*T_s >= 0 violated: P00 = {p00}"),
        });
    }
    let p10 = t_s * (1.0 - q);
    let p01 = m - p11;
    let state_prep = if m > 0.0 { p11 / m } else { 0.0 };
    Ok(PspMatrix {
        p00,
        p01,
        p10,
        p11,
        state_prep,
    })
}

/// QND transfer coefficients from the measurement and QND fidelities:
/// T = (2/F² − 1)⁻¹, strictly increasing in F on (0, 1].
pub fn transfer_coefficients(f_m: f64, f_qnd: f64) -> Result<(f64, f64)> {
    let one = |name: &'static str, f: f64| -> Result<f64> {
        if !(f > 0.0 && f <= 1.0) {
            return Err(Error::domain(
                "transfer_coefficients",
                format!("{name} must lie in (0, 1], got {f}"),
            ));
        }
        Ok(1.0 / (2.0 / (f * f) - 1.0))
    };
    Ok((one("F_M", f_m)?, one("F_QND", f_qnd)?))
}

/// Cauchy-Schwarz quantity G = g_sp²/(g_ss·g_pp); G > 1 certifies
/// non-classical cross-correlations.
pub fn cauchy_schwarz(g_sp: f64, g_ss: f64, g_pp: f64) -> Result<f64> {
    if g_ss <= 0.0 || g_pp <= 0.0 {
        return Err(Error::domain(
            "cauchy_schwarz",
            format!("auto-correlations must be > 0, got g_ss = {g_ss}, g_pp = {g_pp}"),
        ));
    }
    Ok(g_sp * g_sp / (g_ss * g_pp))
}

/// Default probability of a probe click from a decohered atom:
/// the fully blocking detection probability times the fraction of signal
/// photons incoherently mapped into the storage state,
/// f_s = 1 − T_s − (scattering losses).
pub fn default_eps_b(eta: f64, t_s: f64) -> f64 {
    let f_s = (1.0 - t_s - scattering_probability(eta)).max(0.0);
    epsilon0_saturated(eta) * f_s
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::{assert_abs_diff_eq, assert_relative_eq};

    #[test]
    fn chain_invariant_q_p() {
        let chain = DetectionChain::reference();
        chain.validate().unwrap();
        assert_abs_diff_eq!(chain.q_p, 0.198, epsilon = 1e-12);

        let broken = DetectionChain {
            q_p: 0.25,
            ..DetectionChain::reference()
        };
        assert!(broken.validate().is_err());
    }

    #[test]
    fn cavity_photon_number_reference_point() {
        let mut chain = DetectionChain::reference();
        // Combined cavity-path efficiency quoted as 0.2.
        chain.q_d = 0.2 / 0.66;
        chain.q_p = 0.2;
        let n = input_cavity_photon_number(0.37, &chain, 2.0).unwrap();
        assert_relative_eq!(n, 3.7, max_relative = 1e-12);

        let ideal = DetectionChain::new(1.0, 1.0, 1.0, 0.0, 0.0);
        assert_relative_eq!(
            input_cavity_photon_number(0.37, &ideal, 1.0).unwrap(),
            0.37,
            max_relative = 1e-12
        );
        assert_eq!(input_cavity_photon_number(0.0, &chain, 2.0).unwrap(), 0.0);
        let dead = DetectionChain::new(0.3, 0.0, 0.66, 0.0, 0.0);
        assert!(input_cavity_photon_number(0.37, &dead, 2.0).is_err());
    }

    #[test]
    fn signal_photon_number_reference_point() {
        // 0.214 * 1.4 / 0.3 = 0.99866...
        let n = input_signal_photon_number(0.214, 0.3, 1.4).unwrap();
        assert_relative_eq!(n, 0.998_667, max_relative = 1e-5);
        assert_eq!(input_signal_photon_number(0.0, 0.3, 1.4).unwrap(), 0.0);
        assert_relative_eq!(
            input_signal_photon_number(0.214, 0.3, 2.8).unwrap(),
            2.0 * n,
            max_relative = 1e-12
        );
        assert!(input_signal_photon_number(0.1, 0.0, 1.4).is_err());
    }

    #[test]
    fn mean_counts_background_only() {
        let chain = DetectionChain::reference();
        let counts = mean_counts(0.024, 0.0, 3.7, 0.2, &chain);
        assert_eq!(counts.n_s, 0.0);
        assert_eq!(counts.t, 0.0);
        assert_relative_eq!(
            counts.n_p,
            chain.alpha * chain.q_p * 3.7,
            max_relative = 1e-12
        );
    }

    #[test]
    fn mean_counts_clean_reduction() {
        // Only the first coincidence term survives without backgrounds.
        let chain = DetectionChain::new(0.3, 0.3, 0.66, 0.0, 0.0);
        let counts = mean_counts(0.024, 0.1, 3.7, 0.2, &chain);
        let expect = 0.024 * chain.q_p * 3.7 * 0.2 * 0.3 * 0.1;
        assert_relative_eq!(counts.n_sp, expect, max_relative = 1e-12);
        assert_abs_diff_eq!(counts.n_p, counts.t + counts.b, epsilon = 1e-15);
    }

    #[test]
    fn mean_counts_probe_reference_point() {
        // (0.024*0.1 + 3e-3) * 0.2 * 3.7 = 3.996e-3
        let mut chain = DetectionChain::reference();
        chain.q_d = 0.2 / 0.66;
        chain.q_p = 0.2;
        let counts = mean_counts(0.024, 0.1, 3.7, 0.2, &chain);
        assert_relative_eq!(counts.n_p, 3.996e-3, max_relative = 1e-10);
    }

    #[test]
    fn g2_zero_limits_and_reference_point() {
        // beta = 0, n = 1: coherent limit.
        assert_abs_diff_eq!(g2_zero(0.024, 0.0, 0.0, 1.0).unwrap(), 1.0, epsilon = 1e-15);
        // beta = 0: exactly 1/n.
        for n in [0.01, 0.1, 1.0] {
            assert_relative_eq!(g2_zero(0.024, 0.0, 0.0, n).unwrap(), 1.0 / n, max_relative = 1e-12);
        }
        // alpha = 3e-3, eps0 = 0.024, n = 0.1: beta = 0.125, g2 = 5.0.
        assert_relative_eq!(g2_zero(0.024, 0.0, 3e-3, 0.1).unwrap(), 5.0, max_relative = 1e-12);
        assert!(g2_zero(0.0, 0.0, 0.0, 0.1).is_err());
    }

    #[test]
    fn g2_full_ratio_matches_closed_form() {
        // With zero dark counts the five-term bookkeeping collapses exactly
        // onto (1+beta)/(beta+n).
        let chain = DetectionChain::reference();
        let eps0 = 0.024;
        for n_c in [0.1, 1.0, 10.0] {
            let counts = mean_counts(eps0, 0.1, n_c, 0.2, &chain);
            let g2 = g2_from_counts(&counts).unwrap();
            let expect = g2_zero(eps0, chain.eps_b, chain.alpha, 0.1).unwrap();
            assert_relative_eq!(g2, expect, max_relative = 1e-12);
        }
    }

    #[test]
    fn conditional_efficiency_forms() {
        // Uncorrelated streams: covariance vanishes.
        let flat = MeanCounts {
            n_s_in: 0.1,
            n_c_in: 1.0,
            n_s: 0.03,
            n_p: 0.01,
            t: 0.01,
            b: 0.0,
            n_sp: 0.03 * 0.01,
        };
        assert_abs_diff_eq!(conditional_efficiency(&flat).unwrap(), 0.0, epsilon = 1e-15);

        // Model form: eps = 0.5, q_p = 0.2, n_c = 1.
        assert_abs_diff_eq!(model_conditional_efficiency(0.5, 0.2, 1.0), 0.10, epsilon = 1e-15);

        // Background-free counts: the covariance form collapses to
        // eps0*q_p*n_c*(1 - n_s_in), hence to eps0*q_p*n_c as n_s_in -> 0.
        let chain = DetectionChain::new(0.3, 0.3, 0.66, 0.0, 0.0);
        let counts = mean_counts(0.024, 0.1, 3.7, 0.2, &chain);
        let q = conditional_efficiency(&counts).unwrap();
        assert_relative_eq!(q, 0.024 * chain.q_p * 3.7 * (1.0 - 0.1), max_relative = 1e-9);

        let tiny = mean_counts(0.024, 1e-9, 3.7, 0.2, &chain);
        assert_relative_eq!(
            conditional_efficiency(&tiny).unwrap(),
            0.024 * chain.q_p * 3.7,
            max_relative = 1e-6
        );

        // eps_b cancels in the covariance regardless of its value.
        let chain_b = DetectionChain::new(0.3, 0.3, 0.66, 0.0, 0.3);
        let counts_b = mean_counts(0.024, 0.1, 3.7, 0.2, &chain_b);
        assert_relative_eq!(
            conditional_efficiency(&counts_b).unwrap(),
            q,
            max_relative = 1e-9
        );
    }

    #[test]
    fn psp_solve_reference_points() {
        let psp = psp_solve(0.10, 0.2, 0.5).unwrap();
        assert_abs_diff_eq!(psp.p11, 0.02, epsilon = 1e-15);
        assert_abs_diff_eq!(psp.p10, 0.18, epsilon = 1e-15);
        assert_abs_diff_eq!(psp.p01, 0.48, epsilon = 1e-15);
        assert_abs_diff_eq!(psp.p00, 0.32, epsilon = 1e-15);
        assert_abs_diff_eq!(psp.state_prep, 0.04, epsilon = 1e-12);
        assert_abs_diff_eq!(psp.p00 + psp.p01 + psp.p10 + psp.p11, 1.0, epsilon = 1e-12);

        let pass = psp_solve(0.0, 1.0, 0.0).unwrap();
        assert_eq!(pass.p10, 1.0);
        assert_eq!(pass.p11 + pass.p01 + pass.p00, 0.0);

        let ideal = psp_solve(1.0, 1.0, 1.0).unwrap();
        assert_eq!(ideal.p11, 1.0);
        assert_eq!(ideal.p00 + ideal.p01 + ideal.p10, 0.0);
    }

    #[test]
    fn psp_solve_names_violated_constraint() {
        let err = psp_solve(0.5, 0.8, 0.1).unwrap_err();
        assert!(err.to_string().contains("M >= Q*T_s"), "{err}");
        let err = psp_solve(0.1, 0.9, 0.95).unwrap_err();
        assert!(err.to_string().contains("P00"), "{err}");
        let err = psp_solve(1.5, 0.9, 0.95).unwrap_err();
        assert!(err.to_string().contains('Q'), "{err}");
    }

    #[test]
    fn transfer_coefficient_values() {
        let (tm, ts) = transfer_coefficients(1.0, 1.0).unwrap();
        assert_eq!((tm, ts), (1.0, 1.0));
        // F^2 = 1/2 -> (4 - 1)^-1 = 1/3.
        let f = 0.5f64.sqrt();
        let (tm, _) = transfer_coefficients(f, 1.0).unwrap();
        assert_relative_eq!(tm, 1.0 / 3.0, max_relative = 1e-12);
        // Strictly increasing in F.
        let mut last = 0.0;
        for i in 1..=20 {
            let f = f64::from(i) / 20.0;
            let (t, _) = transfer_coefficients(f, 1.0).unwrap();
            assert!(t > last);
            last = t;
        }
        assert!(transfer_coefficients(0.0, 1.0).is_err());
    }

    #[test]
    fn cauchy_schwarz_values() {
        assert_abs_diff_eq!(cauchy_schwarz(1.0, 1.0, 1.0).unwrap(), 1.0, epsilon = 1e-15);
        let boundary = cauchy_schwarz(2.0, 2.0, 2.0).unwrap();
        assert_abs_diff_eq!(boundary, 1.0, epsilon = 1e-15);
        // 4.4^2 / (1.6 * 5.6) = 2.16071...
        assert_relative_eq!(
            cauchy_schwarz(4.4, 1.6, 5.6).unwrap(),
            2.160_714_3,
            max_relative = 1e-6
        );
        assert!(cauchy_schwarz(1.0, 0.0, 1.0).is_err());
    }

    #[test]
    fn default_eps_b_bounds() {
        let e = default_eps_b(4.3, 0.2);
        assert!(e > 0.0 && e < 0.25, "got {e}");
        // Full transmission leaves nothing to decohere.
        assert_eq!(default_eps_b(4.3, 1.0), 0.0);
    }
}
