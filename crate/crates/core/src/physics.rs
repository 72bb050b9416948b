//! Closed-form detection and transmission model.
//!
//! A signal polariton inside the cavity waist couples the intracavity σ⁺
//! field to the atomic excitation; the resulting polarization rotation sends
//! cavity light to the otherwise-dark probe port. The model below gives the
//! probe-port detection probability per cavity photon, the signal
//! transmission under cavity-induced decoherence, the relevant lifetimes, and
//! the single-shot probabilities (blocking, scattering, grating overlap) that
//! bound the detector.
//!
//! All functions are pure; angular frequencies in rad/µs, times in µs.

use crate::error::{Error, Result};
use crate::units::angular_from_mhz;

/// Atomic/cavity constants and tunables.
///
/// `eta` is the spatially averaged cavity cooperativity of the ensemble;
/// the peak (antinode) value follows from `g`, `kappa` and `gamma_e` via
/// [`peak_cooperativity`].
#[derive(Debug, Clone, PartialEq)]
pub struct PhysicalParams {
    /// Spatially averaged single-atom cooperativity η.
    pub eta: f64,
    /// Single-photon Rabi half-amplitude g (rad/µs).
    pub g: f64,
    /// Effective optical depth of the ensemble region overlapping the cavity
    /// mode.
    pub depth_in: f64,
    /// Optical depth of the atoms outside the cavity waist.
    pub depth_out: f64,
    /// Control Rabi frequency Ω (rad/µs).
    pub omega: f64,
    /// Cavity energy decay rate κ (rad/µs).
    pub kappa: f64,
    /// Excited-state decay rate Γ (rad/µs).
    pub gamma_e: f64,
    /// Intrinsic atomic decoherence rate γ₀ (rad/µs), Doppler dominated.
    pub gamma_0: f64,
    /// Whether the standing-wave grating overlap multiplies the transmission
    /// of detected polaritons.
    pub grating_loss_enabled: bool,
    /// Extra transmission factor for detected polaritons from localizing the
    /// wave packet inside the cavity region (spectral broadening loss).
    pub localization_loss: f64,
    /// Cooperativity entering the grating overlap; `None` uses the peak
    /// (antinode) cooperativity.
    pub grating_eta: Option<f64>,
    /// Directly supplied EIT lifetime (µs), overriding the formula. Useful
    /// when the lifetime is known from a fit rather than from the nominal
    /// optical depth.
    pub tau_eit_us: Option<f64>,
}

impl PhysicalParams {
    /// Laboratory reference values: η = 4.3, 2g = 2π×2.5 MHz, D = 3, D′ = 3,
    /// Ω = 2π×1.9 MHz, κ = 2π×140 kHz, Γ = 2π×5.2 MHz, γ₀ = 2π×100 kHz.
    ///
    /// Γ is back-derived from the quoted peak cooperativity 4g²/κΓ = 8.6.
    pub fn reference() -> Self {
        PhysicalParams {
            eta: 4.3,
            g: angular_from_mhz(1.25),
            depth_in: 3.0,
            depth_out: 3.0,
            omega: angular_from_mhz(1.9),
            kappa: angular_from_mhz(0.14),
            gamma_e: angular_from_mhz(5.2),
            gamma_0: angular_from_mhz(0.1),
            grating_loss_enabled: true,
            localization_loss: 0.7,
            grating_eta: None,
            tau_eit_us: None,
        }
    }

    pub fn validate(&self) -> Result<()> {
        let positive: [(&'static str, f64); 4] = [
            ("omega", self.omega),
            ("kappa", self.kappa),
            ("gamma_e", self.gamma_e),
            ("gamma_0", self.gamma_0),
        ];
        for (name, v) in positive {
            if !v.is_finite() || v <= 0.0 {
                return Err(Error::parameter(name, format!("must be > 0, got {v}")));
            }
        }
        let nonneg: [(&'static str, f64); 4] = [
            ("eta", self.eta),
            ("g", self.g),
            ("depth_in", self.depth_in),
            ("depth_out", self.depth_out),
        ];
        for (name, v) in nonneg {
            if !v.is_finite() || v < 0.0 {
                return Err(Error::parameter(name, format!("must be >= 0, got {v}")));
            }
        }
        if !(0.0..=1.0).contains(&self.localization_loss) {
            return Err(Error::parameter(
                "localization_loss",
                format!("must lie in [0, 1], got {}", self.localization_loss),
            ));
        }
        if let Some(eta) = self.grating_eta {
            if !eta.is_finite() || eta < 0.0 {
                return Err(Error::parameter("grating_eta", format!("must be >= 0, got {eta}")));
            }
        }
        if let Some(tau) = self.tau_eit_us {
            if !tau.is_finite() || tau <= 0.0 {
                return Err(Error::parameter("tau_eit_us", format!("must be > 0, got {tau}")));
            }
        }
        Ok(())
    }
}

/// Rates and timescales derived from [`PhysicalParams`] at a given cavity
/// photon number.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct DerivedRates {
    /// Cavity-induced decoherence γ_c (rad/µs).
    pub gamma_c: f64,
    /// Total decoherence γ = γ_c + γ₀ (rad/µs).
    pub gamma_total: f64,
    /// Cavity lifetime τ_c = (κ/2)⁻¹ (µs).
    pub tau_c_us: f64,
    /// EIT lifetime τ_EIT (µs).
    pub tau_eit_us: f64,
    /// Transparency-window suppression factor ζ.
    pub zeta: f64,
}

/// Suppression factor ζ entering the detection probability:
/// ζ = (1 + γΓ/Ω²)(1 + (Ω²/κΓ + γ/κ)/(1+η)).
pub fn zeta(p: &PhysicalParams, gamma_total: f64) -> Result<f64> {
    if p.omega == 0.0 {
        return Err(Error::domain("zeta", "control Rabi frequency omega is zero"));
    }
    let narrow = 1.0 + gamma_total * p.gamma_e / (p.omega * p.omega);
    let broad = 1.0
        + (p.omega * p.omega / (p.kappa * p.gamma_e) + gamma_total / p.kappa) / (1.0 + p.eta);
    Ok(narrow * broad)
}

/// Probability ε₀ of observing a probe photon while a cavity photon and a
/// signal photon are simultaneously present:
/// ε₀ = ¼ η²/(1+η)² [1 − exp(−D/2ζ)]².
///
/// Bounded above by the ideal value ¼ reached for η → ∞, D → ∞.
pub fn epsilon0(p: &PhysicalParams, gamma_total: f64) -> Result<f64> {
    let z = zeta(p, gamma_total)?;
    let coupling = p.eta / (1.0 + p.eta);
    let absorbed = 1.0 - (-p.depth_in / (2.0 * z)).exp();
    Ok(0.25 * coupling * coupling * absorbed * absorbed)
}

/// ε₀ with the ensemble absorption saturated (D/2ζ → ∞): the detection
/// probability for a fully blocking atomic excitation.
pub fn epsilon0_saturated(eta: f64) -> f64 {
    let coupling = eta / (1.0 + eta);
    0.25 * coupling * coupling
}

/// Cavity-induced decoherence rate γ_c = ⟨n_c^in⟩ κ η/(1+η)² from scattering
/// of intracavity photons. Linear in the input cavity photon number.
pub fn cavity_decoherence(n_c_in: f64, p: &PhysicalParams) -> f64 {
    let denom = (1.0 + p.eta) * (1.0 + p.eta);
    n_c_in * p.kappa * p.eta / denom
}

/// Total decoherence rate γ = γ₀ + γ_c(⟨n_c^in⟩).
pub fn loaded_gamma(p: &PhysicalParams, n_c_in: f64) -> f64 {
    p.gamma_0 + cavity_decoherence(n_c_in, p)
}

/// Signal transmission through the EIT window in the presence of cavity
/// photons: T_s = T₀ exp(−D/(1 + Ω²/Γγ)) with
/// T₀ = exp(−D′/(1 + Ω²/Γγ₀)) the contribution of atoms outside the waist.
///
/// γ = 0 is treated as the continuous limit (in-cavity factor → 1).
pub fn signal_transmission(p: &PhysicalParams, gamma_total: f64) -> f64 {
    let t0 = if p.gamma_0 == 0.0 {
        1.0
    } else {
        (-p.depth_out / (1.0 + p.omega * p.omega / (p.gamma_e * p.gamma_0))).exp()
    };
    let in_cavity = if gamma_total == 0.0 {
        1.0
    } else {
        (-p.depth_in / (1.0 + p.omega * p.omega / (p.gamma_e * gamma_total))).exp()
    };
    t0 * in_cavity
}

/// Transmission of *detected* polaritons: the mean transmission multiplied by
/// the standing-wave grating overlap (if enabled) and the localization loss.
pub fn detected_transmission(p: &PhysicalParams, gamma_total: f64) -> f64 {
    let mut t = signal_transmission(p, gamma_total);
    if p.grating_loss_enabled {
        let eta = p.grating_eta.unwrap_or_else(|| peak_cooperativity(p));
        t *= grating_overlap(eta);
    }
    t * p.localization_loss
}

/// EIT lifetime τ_EIT = (Ω²/(ΓD) + γ₀)⁻¹, the relevant time window for a
/// signal photon traversing the medium. Honors `tau_eit_us` overrides.
pub fn eit_lifetime(p: &PhysicalParams) -> Result<f64> {
    if let Some(tau) = p.tau_eit_us {
        return Ok(tau);
    }
    if p.depth_in == 0.0 {
        // No medium in the cavity: the window collapses for any finite drive.
        return if p.omega > 0.0 {
            Ok(0.0)
        } else if p.gamma_0 > 0.0 {
            Ok(1.0 / p.gamma_0)
        } else {
            Err(Error::domain("eit_lifetime", "Omega, D and gamma_0 all zero"))
        };
    }
    let denom = p.omega * p.omega / (p.gamma_e * p.depth_in) + p.gamma_0;
    if denom == 0.0 {
        return Err(Error::domain("eit_lifetime", "Omega and gamma_0 both zero"));
    }
    Ok(1.0 / denom)
}

/// Overlap between the polariton mode before and after a probe detection,
/// limited by the standing-wave grating the cavity imprints:
/// F_p = 1 − 1/√(1+η). Approaches 1 at large cooperativity.
pub fn grating_overlap(eta: f64) -> f64 {
    1.0 - 1.0 / (1.0 + eta).sqrt()
}

/// Probability 2η/(1+η)² that a cavity photon scatters into free space and
/// destroys the signal polariton. Maximal (½) at η = 1.
pub fn scattering_probability(eta: f64) -> f64 {
    let one_plus = 1.0 + eta;
    2.0 * eta / (one_plus * one_plus)
}

/// Probability that a single intracavity atomic excitation blocks σ⁺ cavity
/// transmission: P = 1 − (1 − √(4ε₀))².
pub fn blocking_probability(four_eps0: f64) -> Result<f64> {
    if !(0.0..=1.0).contains(&four_eps0) {
        return Err(Error::domain(
            "blocking_probability",
            format!("4*eps0 must lie in [0, 1], got {four_eps0}"),
        ));
    }
    let r = 1.0 - four_eps0.sqrt();
    Ok(1.0 - r * r)
}

/// Cooperativity 4g²/κΓ of an atom on the cavity axis at an antinode.
pub fn peak_cooperativity(p: &PhysicalParams) -> f64 {
    4.0 * p.g * p.g / (p.kappa * p.gamma_e)
}

/// Total probe detection probability per input cavity photon, from the
/// instantaneous ε₀ and the ratio of the relevant time windows:
/// ε = ε₀ (τ_c + τ_EIT)/τ_c.
pub fn epsilon_total(eps0: f64, tau_c_us: f64, tau_eit_us: f64) -> Result<f64> {
    if tau_c_us <= 0.0 {
        return Err(Error::domain(
            "epsilon_total",
            format!("cavity lifetime must be > 0, got {tau_c_us}"),
        ));
    }
    Ok(eps0 * (tau_c_us + tau_eit_us) / tau_c_us)
}

/// All derived rates at a given input cavity photon number. ζ is evaluated
/// at the loaded decoherence rate γ = γ₀ + γ_c.
pub fn derived_rates(p: &PhysicalParams, n_c_in: f64) -> Result<DerivedRates> {
    let gamma_c = cavity_decoherence(n_c_in, p);
    let gamma_total = p.gamma_0 + gamma_c;
    Ok(DerivedRates {
        gamma_c,
        gamma_total,
        tau_c_us: 2.0 / p.kappa,
        tau_eit_us: eit_lifetime(p)?,
        zeta: zeta(p, gamma_total)?,
    })
}

/// Input cavity photon number at which the modeled signal transmission drops
/// to 1/e of its probe-free value. Solved by bisection.
pub fn one_over_e_photon_number(p: &PhysicalParams) -> Result<f64> {
    let t_ref = signal_transmission(p, p.gamma_0);
    if t_ref == 0.0 {
        return Err(Error::domain("one_over_e_photon_number", "zero probe-free transmission"));
    }
    let target = t_ref * (-1.0f64).exp();
    let ratio = |n: f64| signal_transmission(p, loaded_gamma(p, n));
    let mut hi = 1.0;
    while ratio(hi) > target {
        hi *= 2.0;
        if hi > 1e12 {
            return Err(Error::domain(
                "one_over_e_photon_number",
                "transmission never reaches 1/e of its probe-free value",
            ));
        }
    }
    let mut lo = 0.0;
    for _ in 0..200 {
        let mid = 0.5 * (lo + hi);
        if ratio(mid) > target {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    Ok(0.5 * (lo + hi))
}
