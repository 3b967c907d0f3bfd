//! Shared inputs for the benchmarks.

use repscat::{Spin, StepProblem};

/// Sets that support step and barrier scattering.
pub const SCATTER_REPS: [&str; 3] = ["dirac", "ajaib", "xi"];

/// One step problem per set in the transmitting, gap and Klein regimes.
pub fn step_problems() -> Vec<(String, StepProblem)> {
    let mut out = Vec::new();
    for rep in SCATTER_REPS {
        for (regime, v0) in [("transmitting", 0.5), ("gap", 2.0), ("klein", 10.0)] {
            out.push((format!("{rep}/{regime}"), StepProblem::new(rep, 2.0, 1.0, v0, Spin::Up)));
        }
    }
    out
}

/// Energy grid for sweep benchmarks: `n` points above `V0 + m` for `m = 1`, `V0 = 2`.
pub fn sweep_energies(n: usize) -> Vec<f64> {
    repscat::scattering::energy_grid(3.15, 30.0, n)
}
