use num_complex::Complex64;
use proptest::prelude::*;
use repscat::equivalence::{compare_representations, time_generator};
use repscat::numkernel::{eigen, expm, inverse, nullspace, solve_linear, vnorm, ComplexMatrix};
use repscat::planewave::{dispersion, modes_with, Direction, Kinematics};
use repscat::representations::build_gamma_basis;
use repscat::{
    registry_lookup, solve_barrier, solve_step, KleinConvention, Kind, ModeOptions, Regime, Spin, SpinBasis,
    StepProblem,
};

const SCATTER_REPS: [&str; 3] = ["dirac", "ajaib", "xi"];

fn matrix(n: usize, m: usize) -> impl Strategy<Value = ComplexMatrix> {
    prop::collection::vec((-1.0..1.0f64, -1.0..1.0f64), n * m)
        .prop_map(move |v| ComplexMatrix::new(n, m, v.into_iter().map(|(a, b)| Complex64::new(a, b)).collect()).unwrap())
}

fn vector(n: usize) -> impl Strategy<Value = Vec<Complex64>> {
    prop::collection::vec((-1.0..1.0f64, -1.0..1.0f64), n)
        .prop_map(|v| v.into_iter().map(|(a, b)| Complex64::new(a, b)).collect())
}

fn residual(a: &ComplexMatrix, x: &[Complex64], b: &[Complex64]) -> f64 {
    let ax = a.mul_vec(x).unwrap();
    let diff: Vec<Complex64> = ax.iter().zip(b).map(|(p, q)| p - q).collect();
    vnorm(&diff)
}

/// Keeps random kinematics away from thresholds and from the isolated energy
/// where the xi down mode carries no current.
fn regular(e: f64, m: f64, v0: f64) -> bool {
    let k = (e - v0).abs();
    (k - m).abs() > 1e-4 * m && (e - 3.0 * m).abs() > 1e-3 * m && (k - 3.0 * m).abs() > 1e-3 * m
}

proptest! {
    #[test]
    fn dagger_is_an_involution_reversing_products(a in matrix(4, 4), b in matrix(4, 4)) {
        prop_assert!(a.dagger().dagger().max_abs_diff(&a) <= 1e-12);
        let lhs = (&a * &b).dagger();
        let rhs = &b.dagger() * &a.dagger();
        prop_assert!(lhs.max_abs_diff(&rhs) <= 1e-12);
    }

    #[test]
    fn eigen_trace_and_residuals(a in matrix(4, 4)) {
        let pairs = eigen(&a).unwrap();
        prop_assert_eq!(pairs.len(), 4);
        let scale = a.norm();
        let sum: Complex64 = pairs.iter().map(|p| p.value).sum();
        prop_assert!((sum - a.trace()).norm() <= 1e-10 * scale);
        for p in &pairs {
            let lv: Vec<Complex64> = p.vector.iter().map(|z| z * p.value).collect();
            prop_assert!(residual(&a, &p.vector, &lv) <= 1e-10 * scale);
        }
    }

    #[test]
    fn nullspace_of_rank_two_products(b in matrix(4, 2), c in matrix(2, 4)) {
        let a = &b * &c;
        let basis = nullspace(&a, 1e-9);
        prop_assert!(basis.len() >= 2);
        for v in &basis {
            let zero = vec![Complex64::new(0.0, 0.0); 4];
            prop_assert!(residual(&a, v, &zero) <= 1e-9 * a.norm());
            prop_assert!((vnorm(v) - 1.0).abs() <= 1e-12);
        }
    }

    #[test]
    fn generators_square_to_dispersion(e in 0.0..20.0f64, m in 0.0..5.0f64) {
        for name in SCATTER_REPS {
            let rep = registry_lookup(name).unwrap();
            let h = rep.generator(e, m, 0.0);
            let expect = ComplexMatrix::identity(4).scale_real(e * e - m * m);
            prop_assert!((&h * &h).max_abs_diff(&expect) <= 1e-12 * (e * e + m * m).max(1.0), "{}", name);
        }
        let eta = registry_lookup("eta12").unwrap();
        let h = eta.generator(e, m, 0.0);
        let expect = ComplexMatrix::identity(4).scale_real(2.0 * e * m);
        prop_assert!((&h * &h).max_abs_diff(&expect) <= 1e-12 * (e * e + m * m).max(1.0));
    }

    #[test]
    fn dirac_operator_factorizes(e in -10.0..10.0f64, m in 0.0..5.0f64, p in -10.0..10.0f64) {
        let g = build_gamma_basis();
        let i5 = g.gamma5.scale(Complex64::new(0.0, 1.0));
        let base = &g.gamma0.scale_real(e) + &i5.scale_real(m);
        let id = ComplexMatrix::identity(4);
        let minus = &base - &id.scale_real(p);
        let plus = &base + &id.scale_real(p);
        let expect = id.scale_real(e * e - p * p - m * m);
        prop_assert!((&minus * &plus).max_abs_diff(&expect) <= 1e-12 * (e * e + p * p + m * m).max(1.0));
    }

    #[test]
    fn dispersion_branches_depend_on_kinetic_energy_only(e in -10.0..10.0f64, m in 0.01..5.0f64, v in -10.0..10.0f64) {
        for name in ["dirac", "ajaib", "xi", "eta12"] {
            let rep = registry_lookup(name).unwrap();
            let shifted = dispersion(rep, &Kinematics::new(e, m, v).unwrap());
            let plain = dispersion(rep, &Kinematics::new(e - v, m, 0.0).unwrap());
            prop_assert_eq!(shifted, plain);
            let k = e - v;
            let p2 = match rep.kind {
                Kind::Relativistic => k * k - m * m,
                Kind::Nonrelativistic => 2.0 * k * m,
            };
            prop_assert!((shifted[0] * shifted[0] - p2).norm() <= 1e-12 * p2.abs().max(1.0));
            prop_assert!(shifted[0].im >= 0.0);
        }
    }

    #[test]
    fn modes_are_complete_and_on_shell(e in 1.01..8.0f64, m in 0.2..2.0f64, v in -10.0..10.0f64, projected in any::<bool>()) {
        prop_assume!(e > m * 1.001 && regular(e, m, v));
        let options = ModeOptions {
            spin_basis: if projected { SpinBasis::ProjectedSpin } else { SpinBasis::Echelon },
            ..ModeOptions::default()
        };
        for name in SCATTER_REPS {
            let rep = registry_lookup(name).unwrap();
            let kin = Kinematics::new(e, m, v).unwrap();
            let ms = match modes_with(rep, &kin, options) {
                Ok(ms) => ms,
                // the projected split of xi can also produce null-current vectors
                Err(_) if projected && name == "xi" => continue,
                Err(err) => return Err(TestCaseError::fail(format!("{name}: {err}"))),
            };
            prop_assert_eq!(ms.len(), 4);
            let right = ms.iter().filter(|m| m.direction == Direction::Rightward).count();
            prop_assert_eq!(right, 2);
            let scale = rep.generator(e, m, v).norm().max(1.0);
            for mode in &ms {
                prop_assert!(mode.on_shell_residual(rep, &kin) <= 1e-9 * scale * vnorm(&mode.spinor).max(1.0));
            }
            let total: f64 = ms.iter().map(|m| m.flux).sum();
            prop_assert!(total.abs() <= 1e-9, "{} flux sum {}", name, total);
        }
    }

    #[test]
    fn dirac_spin_is_conserved(e in 1.01..8.0f64, v0 in -10.0..10.0f64, up in any::<bool>()) {
        prop_assume!(regular(e, 1.0, v0));
        let spin = if up { Spin::Up } else { Spin::Down };
        let out = solve_step(&StepProblem::new("dirac", e, 1.0, v0, spin)).unwrap();
        prop_assert!(out.transmission(spin.flipped()).abs() <= 1e-12);
        prop_assert!(out.reflection(spin.flipped()).abs() <= 1e-12);
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(1000))]

    #[test]
    fn linear_solves_have_small_residuals(a in matrix(4, 4), b in vector(4)) {
        let a = &a + &ComplexMatrix::identity(4).scale_real(3.0);
        let x = solve_linear(&a, &b).unwrap();
        prop_assert!(residual(&a, &x, &b) <= 1e-12 * (a.norm() * vnorm(&x) + vnorm(&b)));
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(200))]

    #[test]
    fn step_conserves_current(
        e in 1.01..8.0f64,
        m in 0.2..2.0f64,
        v0 in -15.0..15.0f64,
        up in any::<bool>(),
        momentum in any::<bool>(),
    ) {
        prop_assume!(e > m * 1.001 && regular(e, m, v0));
        let spin = if up { Spin::Up } else { Spin::Down };
        let convention = if momentum { KleinConvention::Momentum } else { KleinConvention::Flux };
        for name in SCATTER_REPS {
            let out = solve_step(&StepProblem::new(name, e, m, v0, spin).with_convention(convention)).unwrap();
            let tot = out.t1 + out.t2 + out.t_int;
            prop_assert!((tot - out.t_tot).abs() <= 1e-12);
            prop_assert!((out.t_tot + out.r_tot - 1.0).abs() <= 1e-9, "{} {} {} {}", name, e, m, v0);
            prop_assert!(out.conservation_residual <= 1e-9);
            if out.regime == Regime::Gap {
                prop_assert_eq!(out.t_tot, 0.0);
                prop_assert!((out.r_tot - 1.0).abs() <= 1e-9);
            }
        }
    }

    #[test]
    fn equivalent_sets_agree_on_totals(e in 1.05..5.0f64, v0 in -12.0..12.0f64) {
        prop_assume!(regular(e, 1.0, v0));
        let d = solve_step(&StepProblem::new("dirac", e, 1.0, v0, Spin::Up)).unwrap();
        let a = solve_step(&StepProblem::new("ajaib", e, 1.0, v0, Spin::Up)).unwrap();
        prop_assert!((d.t_tot - a.t_tot).abs() <= 1e-9);
        prop_assert!((d.r_tot - a.r_tot).abs() <= 1e-9);
        if a.regime != Regime::Gap && v0.abs() > 0.1 {
            prop_assert!(a.trans_down > 1e-6, "T_down {} at E={} V0={}", a.trans_down, e, v0);
        }
    }

    #[test]
    fn barrier_conserves_current(e in 1.01..6.0f64, v0 in -10.0..10.0f64, w in 0.05..6.0f64) {
        prop_assume!(regular(e, 1.0, v0));
        for name in SCATTER_REPS {
            let out = solve_barrier(&StepProblem::new(name, e, 1.0, v0, Spin::Up), w).unwrap();
            prop_assert!(out.conservation_residual <= 1e-9, "{} {} {} {}", name, e, v0, w);
        }
    }

    #[test]
    fn intertwiner_maps_generators(e in 0.0..10.0f64, m in 0.0..3.0f64, v in -5.0..5.0f64) {
        for target in ["ajaib", "xi"] {
            let report = compare_representations("dirac", target).unwrap();
            prop_assert!(report.exists);
            let s = &report.intertwiner;
            let s_inv = inverse(s).unwrap();
            let a = registry_lookup("dirac").unwrap().generator(e, m, v);
            let b = registry_lookup(target).unwrap().generator(e, m, v);
            let mapped = &(s * &a) * &s_inv;
            prop_assert!(mapped.max_abs_diff(&b) <= 1e-9 * b.norm().max(1.0));
        }
    }

    #[test]
    fn evolution_preserves_the_metric(e in 1.01..6.0f64, t in -3.0..3.0f64, a in matrix(4, 4)) {
        let report = compare_representations("dirac", "xi").unwrap();
        let g = &report.metric;
        let h = time_generator(registry_lookup("xi").unwrap(), e, 1.0).unwrap();
        let evolve = expm(&h.scale(Complex64::new(0.0, -t))).unwrap();
        let kept = &(&evolve.dagger() * g) * &evolve;
        prop_assert!(kept.max_abs_diff(g) <= 1e-8 * g.norm());

        // exp(g⁻¹·A) with A anti-Hermitian is g-unitary
        let anti = (&a - &a.dagger()).scale_real(0.25);
        let v = expm(&(&inverse(g).unwrap() * &anti)).unwrap();
        let kept = &(&v.dagger() * g) * &v;
        prop_assert!(kept.max_abs_diff(g) <= 1e-8 * g.norm());
    }
}
