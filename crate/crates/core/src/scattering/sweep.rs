use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::planewave::{at_threshold, Kinematics, ModeOptions, Spin, THRESHOLD_GUARD};
use crate::representations::registry_lookup;

use super::{solve_step, ScatterError, ScatterResult, StepProblem};

/// One grid point. Failed points are kept as rows with `error` set.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SweepRow {
    pub requested_energy: f64,
    /// Energy actually solved; differs from the request only next to a threshold.
    pub energy: f64,
    pub result: Option<ScatterResult>,
    pub error: Option<String>,
}

/// `steps` evenly spaced energies from `emin` to `emax` inclusive.
pub fn energy_grid(emin: f64, emax: f64, steps: usize) -> Vec<f64> {
    if steps < 2 {
        return vec![emin];
    }
    let h = (emax - emin) / (steps - 1) as f64;
    (0..steps)
        .map(|i| if i == steps - 1 { emax } else { emin + h * i as f64 })
        .collect()
}

fn nudge(rep: &crate::representations::RepresentationSet, energy: f64, mass: f64, v0: f64) -> f64 {
    let mut e = energy;
    for _ in 0..4 {
        let near = [0.0, v0].iter().any(|&v| {
            Kinematics::new(e, mass, v)
                .map(|k| at_threshold(rep, &k))
                .unwrap_or(false)
        });
        if !near {
            break;
        }
        let scale = e.abs().max(mass).max((e - v0).abs()).max(1.0);
        e += 2.0 * THRESHOLD_GUARD * scale;
    }
    e
}

/// Step scattering over an energy grid, evaluated in parallel.
///
/// Energies within the threshold guard are nudged upward just past it; any
/// point that still fails becomes a flagged row rather than an error.
pub fn sweep(
    rep: &str,
    mass: f64,
    v0: f64,
    energies: &[f64],
    incident_spin: Spin,
    options: ModeOptions,
) -> Result<Vec<SweepRow>, ScatterError> {
    let set = registry_lookup(rep)?;
    if energies.is_empty() {
        return Err(ScatterError::InvalidProblem("energy grid is empty".into()));
    }
    if energies.windows(2).any(|w| w[1] <= w[0]) {
        return Err(ScatterError::InvalidProblem("energy grid must be strictly increasing".into()));
    }
    if energies[0] <= mass {
        return Err(ScatterError::InvalidProblem(format!(
            "every energy must exceed m={mass}; grid starts at {}",
            energies[0]
        )));
    }
    Ok(energies
        .par_iter()
        .map(|&requested| {
            let energy = nudge(set, requested, mass, v0);
            let problem = StepProblem::new(rep, energy, mass, v0, incident_spin).with_options(options);
            match solve_step(&problem) {
                Ok(r) => SweepRow {
                    requested_energy: requested,
                    energy,
                    result: Some(r),
                    error: None,
                },
                Err(e) => SweepRow {
                    requested_energy: requested,
                    energy,
                    result: None,
                    error: Some(e.to_string()),
                },
            }
        })
        .collect())
}

/// `(T1, T2, T_int)`: same-spin, flipped-spin and interference transmission.
pub fn interference_decomposition(r: &ScatterResult) -> (f64, f64, f64) {
    (r.t1, r.t2, r.t_int)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn grid_endpoints() {
        let g = energy_grid(1.1, 5.0, 10);
        assert_eq!(g.len(), 10);
        assert_eq!(g[0], 1.1);
        assert_eq!(g[9], 5.0);
    }

    #[test]
    fn free_sweep_transmits() {
        let rows = sweep("xi", 1.0, 0.0, &energy_grid(1.1, 5.0, 10), Spin::Up, ModeOptions::default()).unwrap();
        for row in rows {
            let r = row.result.unwrap();
            assert!((r.t_tot - 1.0).abs() < 1e-9);
        }
    }

    #[test]
    fn threshold_points_are_nudged() {
        let rows = sweep("dirac", 1.0, 0.5, &[1.5, 2.0], Spin::Up, ModeOptions::default()).unwrap();
        assert!(rows[0].energy > 1.5);
        assert!(rows[0].result.as_ref().unwrap().conservation_residual < 1e-9);
    }

    #[test]
    fn grid_validation() {
        let opts = ModeOptions::default();
        assert!(sweep("dirac", 1.0, 0.0, &[2.0, 1.5], Spin::Up, opts).is_err());
        assert!(sweep("dirac", 1.0, 0.0, &[0.5, 1.5], Spin::Up, opts).is_err());
        assert!(sweep("nope", 1.0, 0.0, &[1.5], Spin::Up, opts).is_err());
    }

    #[test]
    fn decomposition_sums_to_total() {
        let rows = sweep("xi", 1.0, 2.0, &energy_grid(3.15, 30.0, 12), Spin::Up, ModeOptions::default()).unwrap();
        for row in rows {
            let r = row.result.unwrap();
            let (t1, t2, ti) = interference_decomposition(&r);
            assert!((t1 + t2 + ti - r.t_tot).abs() <= 1e-12);
        }
    }
}
