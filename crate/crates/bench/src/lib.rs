//! Shared fixtures for the benchmarks.

use qnd_core::sim::SimulationConfig;

/// A correlated operating point at a benchmark-friendly scale.
pub fn bench_config(n_cycles: u64, windows_per_cycle: u64) -> SimulationConfig {
    let mut cfg = SimulationConfig::with_g2_target(0.1, 0.37, 4.0, 0.3, 0.1, 0.022, 17)
        .expect("feasible bench point");
    cfg.n_cycles = n_cycles;
    cfg.windows_per_cycle = windows_per_cycle;
    cfg
}
