//! Simulation and analysis toolkit for cavity-assisted, partially
//! nondestructive detection of traveling optical photons.
//!
//! A weak signal pulse propagates as a slow-light polariton through an atomic
//! ensemble under electromagnetically induced transparency (EIT); its
//! atomic-excitation component rotates the polarization of light transmitted
//! through an optical cavity, so a click on the probe port heralds a signal
//! photon without absorbing it. This crate provides the pieces needed to
//! model and exercise such a detector end to end:
//!
//! - [`physics`] — closed-form detection and transmission model (probe-port
//!   detection probability, EIT transmission, lifetimes, grating overlap,
//!   blocking and scattering probabilities).
//! - [`rates`] — mean-count bookkeeping and figures of merit: backgrounds,
//!   coincidences, zero-lag cross-correlation, conditional nondestructive
//!   quantum efficiency, the joint detection-probability matrix, transfer
//!   coefficients and the Cauchy-Schwarz quantity.
//! - [`sim`] — deterministic, seeded generation of windowed, time-tagged
//!   detector click streams whose ensemble statistics reproduce the rate
//!   model and a two-sided exponential cross-correlation.
//! - [`correlate`] — g²(τ) histogram estimation with shuffled-pair
//!   normalization.
//! - [`fit`] — double-exponential fits of correlation histograms and the
//!   area-integral efficiency estimate.
//! - [`analysis`] — full per-stream summaries (measured efficiencies, joint
//!   probabilities, time resolution).
//! - [`io`] — click-stream CSV and key=value metadata files.
//!
//! Angular frequencies are expressed in rad/µs and times in µs throughout;
//! [`units`] converts from the laboratory convention of quoting `Ω/2π` in
//! MHz.

pub mod analysis;
pub mod correlate;
pub mod error;
pub mod fit;
pub mod io;
pub mod physics;
pub mod rates;
pub mod sim;
pub mod units;

pub use analysis::{StreamSummary, SummaryInputs};
pub use correlate::{cross_correlation, CorrelationConfig, CorrelationHistogram};
pub use error::{Error, Result};
pub use fit::{fit_double_exponential, q_from_histogram, ExpFit, QEstimate};
pub use physics::{DerivedRates, PhysicalParams};
pub use rates::{DetectionChain, DetectionSummary, EfficiencyView, MeanCounts, PspMatrix};
pub use sim::{simulate, Channel, ClickEvent, ClickStream, SimulationConfig};
