//! Unit conventions and conversions.
//!
//! Internally every rate is an angular frequency in rad/µs and every time is
//! in µs. Laboratory values are quoted as ordinary frequencies `f = ω/2π` in
//! MHz; converting once at the boundary keeps stray factors of 2π out of the
//! formulas.

use std::f64::consts::TAU;

/// Angular frequency (rad/µs) from an ordinary frequency in MHz.
pub fn angular_from_mhz(f_mhz: f64) -> f64 {
    TAU * f_mhz
}

/// Ordinary frequency in MHz from an angular frequency (rad/µs).
pub fn mhz_from_angular(omega: f64) -> f64 {
    omega / TAU
}

/// Nanoseconds (integer event timestamps) from µs.
pub fn ns_from_us(t_us: f64) -> f64 {
    t_us * 1e3
}

/// µs from integer nanoseconds.
pub fn us_from_ns(t_ns: u32) -> f64 {
    f64::from(t_ns) * 1e-3
}
