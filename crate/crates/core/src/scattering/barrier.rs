use num_complex::Complex64;

use crate::numkernel::{solve_linear, ComplexMatrix};
use crate::planewave::{modes_with, Direction, Kinematics, Mode};
use crate::representations::registry_lookup;

use super::step::regime_of;
use super::{assemble, pick, Assembly, Outgoing, Regime, ScatterError, ScatterResult, StepProblem};

/// Barrier `V(z) = V0` on `0 < z < width`, free on both sides.
///
/// Interior modes that grow to the right are referenced at `z = width` and the
/// rest at `z = 0`, so no exponential in the system exceeds one in magnitude.
/// Transmitted amplitudes are referenced at `z = width`.
pub fn solve_barrier(problem: &StepProblem, width: f64) -> Result<ScatterResult, ScatterError> {
    problem.validate()?;
    if !(width.is_finite() && width > 0.0) {
        return Err(ScatterError::InvalidProblem(format!("barrier width must be positive, got {width}")));
    }
    let rep = registry_lookup(&problem.rep)?;
    let spin = problem.incident_spin;
    let outside = modes_with(rep, &Kinematics::new(problem.energy, problem.mass, 0.0)?, problem.options)?;
    let inside = modes_with(rep, &Kinematics::new(problem.energy, problem.mass, problem.v0)?, problem.options)?;

    let incident = pick(&outside, Direction::Rightward, spin)?;
    let ls = pick(&outside, Direction::Leftward, spin)?;
    let lc = pick(&outside, Direction::Leftward, spin.flipped())?;
    let ts = pick(&outside, Direction::Rightward, spin)?;
    let tc = pick(&outside, Direction::Rightward, spin.flipped())?;

    // unknowns: [r_s, r_c, a_0..a_3, t_s, t_c]
    let mut m = ComplexMatrix::zeros(8, 8);
    for i in 0..4 {
        m[(i, 0)] = -ls.spinor[i];
        m[(i, 1)] = -lc.spinor[i];
        m[(i + 4, 6)] = -ts.spinor[i];
        m[(i + 4, 7)] = -tc.spinor[i];
    }
    for (k, mode) in inside.iter().enumerate() {
        let (at_left, at_right) = interior_factors(mode, width);
        for i in 0..4 {
            m[(i, 2 + k)] = mode.spinor[i] * at_left;
            m[(i + 4, 2 + k)] = mode.spinor[i] * at_right;
        }
    }
    let mut rhs = vec![Complex64::new(0.0, 0.0); 8];
    rhs[..4].copy_from_slice(&incident.spinor);
    let c = solve_linear(&m, &rhs)?;

    let interior = regime_of(rep, problem.energy, problem.mass, problem.v0);
    Ok(assemble(Assembly {
        problem,
        width: Some(width),
        current: &rep.current_op,
        incident_flux: incident.flux,
        reflected: Outgoing {
            same: (ls, c[0]),
            cross: (lc, c[1]),
        },
        transmitted: Outgoing {
            same: (ts, c[6]),
            cross: (tc, c[7]),
        },
        regime: if interior == Regime::Gap {
            Regime::Tunneling
        } else {
            interior
        },
    }))
}

/// Phase factors of an interior mode at `z = 0` and `z = width`.
fn interior_factors(mode: &Mode, width: f64) -> (Complex64, Complex64) {
    let i = Complex64::new(0.0, 1.0);
    if mode.momentum.im < 0.0 {
        ((-i * mode.momentum * width).exp(), Complex64::new(1.0, 0.0))
    } else {
        (Complex64::new(1.0, 0.0), (i * mode.momentum * width).exp())
    }
}
