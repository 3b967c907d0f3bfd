use crate::numkernel::{solve_linear, ComplexMatrix};
use crate::planewave::{modes_with, Direction, Kinematics};
use crate::representations::{registry_lookup, Kind, RepresentationSet};

use super::{assemble, pick, Assembly, Outgoing, Regime, ScatterError, ScatterResult, StepProblem};

pub(crate) fn regime_of(rep: &RepresentationSet, energy: f64, mass: f64, potential: f64) -> Regime {
    let k = energy - potential;
    match rep.kind {
        Kind::Relativistic if k.abs() < mass => Regime::Gap,
        Kind::Relativistic if k < -mass => Regime::Klein,
        Kind::Nonrelativistic if k < 0.0 => Regime::Gap,
        _ => Regime::Transmitting,
    }
}

/// Matches `ψ_I = u_in + r_s·L_s + r_c·L_c` to `ψ_II = t_s·R_s + t_c·R_c` at `z = 0`.
pub fn solve_step(problem: &StepProblem) -> Result<ScatterResult, ScatterError> {
    problem.validate()?;
    let rep = registry_lookup(&problem.rep)?;
    let spin = problem.incident_spin;
    let left = modes_with(rep, &Kinematics::new(problem.energy, problem.mass, 0.0)?, problem.options)?;
    let right = modes_with(rep, &Kinematics::new(problem.energy, problem.mass, problem.v0)?, problem.options)?;

    let incident = pick(&left, Direction::Rightward, spin)?;
    let (ls, lc) = (
        pick(&left, Direction::Leftward, spin)?,
        pick(&left, Direction::Leftward, spin.flipped())?,
    );
    let (rs, rc) = (
        pick(&right, Direction::Rightward, spin)?,
        pick(&right, Direction::Rightward, spin.flipped())?,
    );

    let neg = |m: &crate::planewave::Mode| m.spinor.iter().map(|z| -z).collect::<Vec<_>>();
    let system = ComplexMatrix::from_columns(&[neg(ls), neg(lc), rs.spinor.clone(), rc.spinor.clone()])?;
    let c = solve_linear(&system, &incident.spinor)?;

    Ok(assemble(Assembly {
        problem,
        width: None,
        current: &rep.current_op,
        incident_flux: incident.flux,
        reflected: Outgoing {
            same: (ls, c[0]),
            cross: (lc, c[1]),
        },
        transmitted: Outgoing {
            same: (rs, c[2]),
            cross: (rc, c[3]),
        },
        regime: regime_of(rep, problem.energy, problem.mass, problem.v0),
    }))
}
