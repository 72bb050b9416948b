//! g²(τ) estimation from click streams.
//!
//! The numerator counts same-window pairs binned by lag t_b − t_a. The
//! denominator counts pairs with the two channels drawn from *different
//! cycles* at the same window index, which has identical single-channel
//! marginals but no physical correlation: the ratio therefore normalizes
//! away the triangular finite-window overlap, window-edge gating bias and
//! slow rate drift in one step. All accumulation is over integer pair
//! counts, so the result is independent of reduction order.

use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::sim::{Channel, ClickStream};

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CorrelationConfig {
    /// Histogram bin width (µs).
    pub bin_us: f64,
    /// Maximum |lag| (µs); bins tile [−max_lag, +max_lag).
    pub max_lag_us: f64,
    /// How many cycle offsets feed the shuffled-pair normalization.
    pub shuffle_offsets: u64,
}

impl Default for CorrelationConfig {
    fn default() -> Self {
        CorrelationConfig {
            bin_us: 0.25,
            max_lag_us: 10.0,
            shuffle_offsets: 4,
        }
    }
}

/// Binned g²(τ) estimate with raw pair counts.
#[derive(Debug, Clone, PartialEq)]
pub struct CorrelationHistogram {
    /// Bin edges (µs), length `n_bins + 1`.
    pub bin_edges_us: Vec<f64>,
    /// g² per bin.
    pub g2: Vec<f64>,
    /// Statistical error per bin from Poisson pair counts.
    pub err: Vec<f64>,
    /// Same-window pair counts (numerator).
    pub pair_counts: Vec<u64>,
    /// Shuffled-pair counts (denominator, summed over offsets).
    pub norm_counts: Vec<u64>,
    pub n_windows: u64,
    pub shuffle_offsets: u64,
}

impl CorrelationHistogram {
    pub fn n_bins(&self) -> usize {
        self.g2.len()
    }

    pub fn bin_width_us(&self) -> f64 {
        self.bin_edges_us[1] - self.bin_edges_us[0]
    }

    /// Bin center lags (µs).
    pub fn bin_centers_us(&self) -> Vec<f64> {
        self.bin_edges_us
            .windows(2)
            .map(|e| 0.5 * (e[0] + e[1]))
            .collect()
    }

    /// Mean g² over the outer fraction of the lag range (both wings); 1.0
    /// for a properly normalized histogram. Bins without normalization
    /// counts are skipped.
    pub fn far_lag_baseline(&self, outer_fraction: f64) -> f64 {
        let cut = self.bin_edges_us.last().unwrap().abs() * (1.0 - outer_fraction);
        let centers = self.bin_centers_us();
        let mut sum = 0.0;
        let mut n = 0usize;
        for (i, c) in centers.iter().enumerate() {
            if c.abs() >= cut && self.norm_counts[i] > 0 {
                sum += self.g2[i];
                n += 1;
            }
        }
        if n == 0 {
            f64::NAN
        } else {
            sum / n as f64
        }
    }
}

/// Cross-correlation histogram between two channels of a stream; pass the
/// same channel twice for the auto-correlation (zero-lag self-pairs are
/// excluded).
pub fn cross_correlation(
    stream: &ClickStream,
    ch_a: Channel,
    ch_b: Channel,
    config: &CorrelationConfig,
) -> Result<CorrelationHistogram> {
    let n_bins = validate_binning(config)?;
    if stream.n_cycles < 2 {
        return Err(Error::Binning(
            "shuffled-pair normalization needs at least 2 cycles".into(),
        ));
    }
    let offsets = config.shuffle_offsets.min(stream.n_cycles - 1).max(1);

    let a = ChannelIndex::build(stream, ch_a)?;
    let b = if ch_a == ch_b {
        None
    } else {
        Some(ChannelIndex::build(stream, ch_b)?)
    };
    let b_ref = b.as_ref().unwrap_or(&a);
    let auto = ch_a == ch_b;

    let bin_ns = (config.bin_us * 1e3).round() as i64;
    let max_lag_ns = (config.max_lag_us * 1e3).round() as i64;

    let n_windows = stream.n_windows();
    let wpc = stream.windows_per_cycle;

    // Numerator: same-window pairs.
    let pair_counts = (0..n_windows)
        .into_par_iter()
        .fold(
            || vec![0u64; n_bins],
            |mut hist, w| {
                count_pairs(
                    a.window(w),
                    b_ref.window(w),
                    max_lag_ns,
                    bin_ns,
                    auto,
                    &mut hist,
                );
                hist
            },
        )
        .reduce(|| vec![0u64; n_bins], merge_hist);

    // Denominator: channel A from cycle c, channel B from cycle c+k.
    let norm_counts = (0..n_windows)
        .into_par_iter()
        .fold(
            || vec![0u64; n_bins],
            |mut hist, w| {
                let cycle = w / wpc;
                let index = w % wpc;
                for k in 1..=offsets {
                    let partner = ((cycle + k) % stream.n_cycles) * wpc + index;
                    count_pairs(
                        a.window(w),
                        b_ref.window(partner),
                        max_lag_ns,
                        bin_ns,
                        false,
                        &mut hist,
                    );
                }
                hist
            },
        )
        .reduce(|| vec![0u64; n_bins], merge_hist);

    let scale = offsets as f64;
    let mut g2 = vec![0.0; n_bins];
    let mut err = vec![f64::INFINITY; n_bins];
    for i in 0..n_bins {
        let p = pair_counts[i] as f64;
        let n = norm_counts[i] as f64;
        if norm_counts[i] > 0 {
            g2[i] = p * scale / n;
            let p_eff = p.max(1.0);
            err[i] = (p_eff * scale / n) * (1.0 / p_eff + 1.0 / n).sqrt();
        }
    }

    let mut bin_edges_us = Vec::with_capacity(n_bins + 1);
    for i in 0..=n_bins {
        bin_edges_us.push(-config.max_lag_us + i as f64 * config.bin_us);
    }

    Ok(CorrelationHistogram {
        bin_edges_us,
        g2,
        err,
        pair_counts,
        norm_counts,
        n_windows,
        shuffle_offsets: offsets,
    })
}

fn validate_binning(config: &CorrelationConfig) -> Result<usize> {
    let ok = |v: f64| v.is_finite() && v > 0.0;
    if !ok(config.bin_us) || !ok(config.max_lag_us) {
        return Err(Error::Binning("bin and max lag must be > 0".into()));
    }
    let ratio = config.max_lag_us / config.bin_us;
    if (ratio - ratio.round()).abs() > 1e-9 {
        return Err(Error::Binning(format!(
            "bin width {} must divide max lag {}",
            config.bin_us, config.max_lag_us
        )));
    }
    Ok(2 * ratio.round() as usize)
}

fn merge_hist(mut a: Vec<u64>, b: Vec<u64>) -> Vec<u64> {
    for (x, y) in a.iter_mut().zip(b) {
        *x += y;
    }
    a
}

/// Two-pointer pair counting between two sorted time slices. `exclude_diag`
/// skips identical event indices (auto-correlation self-pairs).
fn count_pairs(
    ts_a: &[u32],
    ts_b: &[u32],
    max_lag_ns: i64,
    bin_ns: i64,
    exclude_diag: bool,
    hist: &mut [u64],
) {
    let mut start = 0usize;
    for (i, &ta) in ts_a.iter().enumerate() {
        let ta = i64::from(ta);
        while start < ts_b.len() && i64::from(ts_b[start]) < ta - max_lag_ns {
            start += 1;
        }
        for (j, &tb) in ts_b.iter().enumerate().skip(start) {
            let lag = i64::from(tb) - ta;
            if lag >= max_lag_ns {
                break;
            }
            if exclude_diag && i == j {
                continue;
            }
            let bin = (lag + max_lag_ns) / bin_ns;
            hist[bin as usize] += 1;
        }
    }
}

/// Per-window view of one channel: flat sorted times plus window offsets.
struct ChannelIndex {
    times: Vec<u32>,
    offsets: Vec<u32>,
}

impl ChannelIndex {
    fn build(stream: &ClickStream, channel: Channel) -> Result<Self> {
        let n_windows = stream.n_windows() as usize;
        let mut times = Vec::new();
        let mut offsets = vec![0u32; n_windows + 1];
        for e in stream.events.iter().filter(|e| e.channel == channel) {
            times.push(e.t_ns);
            offsets[e.window_id as usize + 1] += 1;
        }
        if times.is_empty() {
            return Err(Error::EmptyChannel(channel.as_str()));
        }
        for i in 1..offsets.len() {
            offsets[i] += offsets[i - 1];
        }
        Ok(ChannelIndex { times, offsets })
    }

    #[inline]
    fn window(&self, w: u64) -> &[u32] {
        let lo = self.offsets[w as usize] as usize;
        let hi = self.offsets[w as usize + 1] as usize;
        &self.times[lo..hi]
    }
}
