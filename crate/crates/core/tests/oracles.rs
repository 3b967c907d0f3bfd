//! Results of the matcher checked against independently derived answers.

use num_complex::Complex64;
use repscat::numkernel::{bilinear, expm, solve_linear, ComplexMatrix};
use repscat::planewave::{modes, Direction, Kinematics, Mode};
use repscat::{registry_lookup, solve_barrier, solve_step, Regime, Spin, StepProblem};

fn c(re: f64, im: f64) -> Complex64 {
    Complex64::new(re, im)
}

/// Textbook step reflection `((1 − κ)/(1 + κ))²`, `κ = (q/k)(E + m)/(E − V0 + m)`.
fn textbook_reflection(e: f64, m: f64, v0: f64) -> f64 {
    let k = (e * e - m * m).sqrt();
    let q = ((e - v0) * (e - v0) - m * m).sqrt();
    let kappa = (q / k) * (e + m) / (e - v0 + m);
    ((1.0 - kappa) / (1.0 + kappa)).powi(2)
}

/// Two-component Dirac spinor `(K + p, i·m)` of the spin-up sector.
fn reduced_spinor(kinetic: f64, m: f64, p: Complex64) -> [Complex64; 2] {
    [c(kinetic, 0.0) + p, c(0.0, m)]
}

fn reduced_flux(u: &[Complex64; 2]) -> f64 {
    u[0].norm_sqr() - u[1].norm_sqr()
}

/// Spin-up step solved in the decoupled `(u1, u3)` sector by Cramer's rule.
///
/// Returns `(T, R, |t|, |r|)` for unit-flux normalized spinors.
fn reduced_step(e: f64, m: f64, v0: f64) -> (f64, f64, f64, f64) {
    let k = (e * e - m * m).sqrt();
    let kin = e - v0;
    let q2 = kin * kin - m * m;
    let q = if q2 < 0.0 {
        c(0.0, (-q2).sqrt())
    } else if kin > 0.0 {
        c(q2.sqrt(), 0.0)
    } else {
        // Klein zone: positive group velocity means negative momentum
        c(-q2.sqrt(), 0.0)
    };
    let normalize = |u: [Complex64; 2]| {
        let f = reduced_flux(&u).abs();
        let s = if f > 0.0 { f.sqrt() } else { (u[0].norm_sqr() + u[1].norm_sqr()).sqrt() };
        [u[0] / s, u[1] / s]
    };
    let vin = normalize(reduced_spinor(e, m, c(k, 0.0)));
    let vr = normalize(reduced_spinor(e, m, c(-k, 0.0)));
    let vt = normalize(reduced_spinor(kin, m, q));
    // r·vr − t·vt = −vin
    let det = vr[0] * (-vt[1]) - (-vt[0]) * vr[1];
    let r = ((-vin[0]) * (-vt[1]) - (-vt[0]) * (-vin[1])) / det;
    let t = (vr[0] * (-vin[1]) - (-vin[0]) * vr[1]) / det;
    let f_in = reduced_flux(&vin);
    let tp = if q.im > 0.0 { 0.0 } else { t.norm_sqr() * reduced_flux(&vt) / f_in };
    let rp = -r.norm_sqr() * reduced_flux(&vr) / f_in;
    (tp, rp, t.norm(), r.norm())
}

#[test]
fn dirac_step_matches_textbook_formula() {
    for &(e, m, v0) in &[(2.0, 1.0, 0.5), (1.2, 1.0, 0.1), (5.0, 1.0, 3.5), (3.0, 0.5, -2.0), (10.0, 2.0, 7.0)] {
        let expect_r = textbook_reflection(e, m, v0);
        for rep in ["dirac", "ajaib", "xi"] {
            let out = solve_step(&StepProblem::new(rep, e, m, v0, Spin::Up)).unwrap();
            assert!((out.r_tot - expect_r).abs() < 1e-10, "{rep} {e} {m} {v0}: {} vs {expect_r}", out.r_tot);
            assert!((out.t_tot - (1.0 - expect_r)).abs() < 1e-10);
        }
    }
}

#[test]
fn dirac_step_matches_reduced_two_component_matcher() {
    let points = [
        (2.0, 1.0, 0.5),
        (1.5, 1.0, 0.3),
        (4.0, 1.0, -1.0),
        (1.5, 1.0, 1.0),
        (2.0, 1.0, 2.5),
        (2.0, 1.0, 10.0),
        (3.0, 1.0, 50.0),
    ];
    for &(e, m, v0) in &points {
        let out = solve_step(&StepProblem::new("dirac", e, m, v0, Spin::Up)).unwrap();
        let (t, r, t_abs, r_abs) = reduced_step(e, m, v0);
        assert!((out.trans_up - t).abs() < 1e-10, "T at {v0}: {} vs {t}", out.trans_up);
        assert!((out.refl_up - r).abs() < 1e-10, "R at {v0}: {} vs {r}", out.refl_up);
        assert!((out.r_up.norm() - r_abs).abs() < 1e-10);
        if out.regime != Regime::Gap {
            assert!((out.t_up.norm() - t_abs).abs() < 1e-10);
        }
        assert!(out.t_down.norm() < 1e-12 && out.r_down.norm() < 1e-12);
    }
}

fn pick(modes: &[Mode], direction: Direction, spin: Spin) -> &Mode {
    modes
        .iter()
        .find(|m| m.direction == direction && m.spin_label == spin)
        .expect("mode present")
}

/// Barrier probabilities from the interior transfer matrix `exp(i·H·w)`.
///
/// Returns `(T_tot, R_tot)` computed from the flux of the full transmitted and
/// reflected spinors, so no channel decomposition is involved.
fn transfer_matrix_barrier(rep_name: &str, e: f64, m: f64, v0: f64, w: f64) -> (f64, f64) {
    let rep = registry_lookup(rep_name).unwrap();
    let outside = modes(rep, &Kinematics::new(e, m, 0.0).unwrap()).unwrap();
    let incident = pick(&outside, Direction::Rightward, Spin::Up);
    let ls = pick(&outside, Direction::Leftward, Spin::Up);
    let lc = pick(&outside, Direction::Leftward, Spin::Down);
    let ts = pick(&outside, Direction::Rightward, Spin::Up);
    let tc = pick(&outside, Direction::Rightward, Spin::Down);

    let transfer = expm(&rep.generator(e, m, v0).scale(c(0.0, w))).unwrap();
    let mls = transfer.mul_vec(&ls.spinor).unwrap();
    let mlc = transfer.mul_vec(&lc.spinor).unwrap();
    let min = transfer.mul_vec(&incident.spinor).unwrap();

    let mut a = ComplexMatrix::zeros(4, 4);
    for i in 0..4 {
        a[(i, 0)] = mls[i];
        a[(i, 1)] = mlc[i];
        a[(i, 2)] = -ts.spinor[i];
        a[(i, 3)] = -tc.spinor[i];
    }
    let rhs: Vec<Complex64> = min.iter().map(|z| -z).collect();
    let x = solve_linear(&a, &rhs).unwrap();

    let combine = |p: &Mode, q: &Mode, a: Complex64, b: Complex64| -> Vec<Complex64> {
        p.spinor.iter().zip(&q.spinor).map(|(u, v)| u * a + v * b).collect()
    };
    let reflected = combine(ls, lc, x[0], x[1]);
    let transmitted = combine(ts, tc, x[2], x[3]);
    let j = &rep.current_op;
    let f_in = bilinear(&incident.spinor, j, &incident.spinor).re;
    let t = bilinear(&transmitted, j, &transmitted).re / f_in;
    let r = -bilinear(&reflected, j, &reflected).re / f_in;
    (t, r)
}

#[test]
fn barrier_matches_transfer_matrix() {
    let cases = [
        (2.0, 1.0, 0.5, 1.0),
        (2.0, 1.0, 0.5, 3.7),
        (1.5, 1.0, 1.2, 0.8),
        (1.5, 1.0, 1.2, 4.0),
        (2.0, 1.0, 6.0, 0.6),
        (3.2, 1.0, -2.0, 2.0),
    ];
    for rep in ["dirac", "ajaib", "xi"] {
        for &(e, m, v0, w) in &cases {
            let out = solve_barrier(&StepProblem::new(rep, e, m, v0, Spin::Up), w).unwrap();
            let (t, r) = transfer_matrix_barrier(rep, e, m, v0, w);
            assert!((out.t_tot - t).abs() < 1e-8, "{rep} {e} {v0} {w}: T {} vs {t}", out.t_tot);
            assert!((out.r_tot - r).abs() < 1e-8, "{rep} {e} {v0} {w}: R {} vs {r}", out.r_tot);
        }
    }
}

#[test]
fn anchor_reflection_value() {
    let r = textbook_reflection(2.0, 1.0, 0.5);
    assert!((r - 0.0161332).abs() < 1e-6);
}
