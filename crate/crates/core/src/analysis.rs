//! Full per-stream summaries: measured mean counts, the fitted correlation
//! function, the area-integral efficiency and the joint detection
//! probabilities.

use crate::correlate::{cross_correlation, CorrelationConfig, CorrelationHistogram};
use crate::error::Result;
use crate::fit::{fit_double_exponential, q_from_histogram, ExpFit, QEstimate};
use crate::rates::{cauchy_schwarz, DetectionSummary, EfficiencyView};
use crate::sim::{edge_keep_fraction, Channel, ClickStream};

/// Ground-truth inputs the analysis cannot measure from the stream itself.
#[derive(Debug, Clone)]
pub struct SummaryInputs {
    /// Physical signal photon arrival rate entering the medium (µs⁻¹).
    pub arrival_rate_per_us: f64,
    /// Signal-path detection efficiency.
    pub q_s: f64,
    pub correlation: CorrelationConfig,
    /// Mean probe clicks per window of a zero-signal companion run; measured
    /// false-detection probability. Taken as 0 when absent.
    pub p_err: Option<f64>,
    /// Also estimate the auto-correlations and the Cauchy-Schwarz quantity.
    pub with_autocorrelations: bool,
    /// How far outside the joint-probability simplex the measured (Q, T_s, M)
    /// triple may stray before the analysis refuses it. Noise puts unbiased
    /// estimates on the wrong side of a boundary about half the time when the
    /// true point lies on it (e.g. a lossless stream has P00 = 0 exactly).
    pub boundary_tolerance: f64,
}

impl SummaryInputs {
    pub fn new(arrival_rate_per_us: f64, q_s: f64) -> Self {
        SummaryInputs {
            arrival_rate_per_us,
            q_s,
            correlation: CorrelationConfig::default(),
            p_err: None,
            with_autocorrelations: false,
            boundary_tolerance: 0.02,
        }
    }
}

/// Everything the analysis extracts from one stream.
#[derive(Debug, Clone)]
pub struct StreamSummary {
    /// Mean detected signal clicks per window.
    pub n_s_per_window: f64,
    /// Mean detected probe clicks per window.
    pub n_p_per_window: f64,
    /// Probe clicks per input photon, ⟨n_p⟩/⟨n_s^in⟩, as counted (still
    /// reduced by window gating).
    pub m_observed: f64,
    /// Probe clicks per input photon with the window-gating loss undone
    /// using the fitted correlation times; feeds the joint-probability
    /// solve so it stays consistent with the gating-corrected area Q.
    pub m_corrected: f64,
    pub fit: ExpFit,
    pub q_estimate: QEstimate,
    pub histogram: CorrelationHistogram,
    pub detection: DetectionSummary,
}

/// Measures a stream end to end: mean rates, g²(τ) cross-correlation with a
/// double-exponential fit, the area-integral Q, transmission from the
/// detected signal rate, and the joint probability matrix from
/// (Q, T_s, M).
pub fn summarize(stream: &ClickStream, inputs: &SummaryInputs) -> Result<StreamSummary> {
    let n_windows = stream.n_windows() as f64;
    let window_us = stream.window_us();
    let n_s_per_window = stream.channel_count(Channel::Signal) as f64 / n_windows;
    let n_p_per_window = stream.channel_count(Channel::Probe) as f64 / n_windows;

    let histogram =
        cross_correlation(stream, Channel::Signal, Channel::Probe, &inputs.correlation)?;
    let fit = fit_double_exponential(&histogram)?;
    let probe_rate = n_p_per_window / window_us;
    let q_estimate = q_from_histogram(&histogram, probe_rate);

    let arrivals_per_window = inputs.arrival_rate_per_us * window_us;
    let t_s = n_s_per_window / (inputs.q_s * arrivals_per_window);
    let m_observed = n_p_per_window / arrivals_per_window;
    let p_err = inputs.p_err.unwrap_or(0.0);

    // Probe clicks correlated with a photon are clipped at the window edges;
    // the area Q is normalization-corrected for that, so M must be undone
    // too or the triple turns inconsistent near unit efficiency. Backgrounds
    // (estimated by the zero-signal level when available) are not clipped.
    let keep = edge_keep_fraction(fit.tau_neg_us, fit.tau_pos_us, window_us).clamp(0.1, 1.0);
    let correlated = (n_p_per_window - p_err).max(0.0);
    let m_corrected = (correlated / keep + p_err) / arrivals_per_window;

    let q = q_estimate.q.clamp(0.0, 1.0);
    let t_s = t_s.clamp(0.0, 1.0);
    // Snap M onto the feasible interval when noise pushes it just outside.
    let (m_lo, m_hi) = (q * t_s, 1.0 - t_s + q * t_s);
    let tol = inputs.boundary_tolerance;
    let m_for_solve = if m_corrected < m_lo && m_corrected >= m_lo - tol {
        m_lo
    } else if m_corrected > m_hi && m_corrected <= m_hi + tol {
        m_hi
    } else {
        m_corrected
    };

    let mut detection =
        DetectionSummary::from_measurements(q, t_s, m_for_solve, p_err, EfficiencyView::Observed)?;
    detection.time_resolution_us = Some(fit.time_resolution_us());

    if inputs.with_autocorrelations {
        let g_ss = zero_lag_estimate(stream, Channel::Signal, &inputs.correlation)?;
        let g_pp = zero_lag_estimate(stream, Channel::Probe, &inputs.correlation)?;
        // Cross-correlation peak over auto-correlation floor.
        detection.cauchy_schwarz = cauchy_schwarz(fit.g2_zero, g_ss, g_pp).ok();
    }

    Ok(StreamSummary {
        n_s_per_window,
        n_p_per_window,
        m_observed,
        m_corrected,
        fit,
        q_estimate,
        histogram,
        detection,
    })
}

/// Zero-lag auto-correlation estimate: mean of the two bins flanking zero.
fn zero_lag_estimate(
    stream: &ClickStream,
    channel: Channel,
    config: &CorrelationConfig,
) -> Result<f64> {
    let hist = cross_correlation(stream, channel, channel, config)?;
    let n = hist.n_bins();
    Ok(0.5 * (hist.g2[n / 2 - 1] + hist.g2[n / 2]))
}
