use nalgebra::DMatrix;
use proptest::prelude::*;
use sopkit::christoffel::{perturb_prekernel, perturb_sop};
use sopkit::classical_op::OpSystem;
use sopkit::ensemble::Support;
use sopkit::kernels::{corr_fn, corr_fn_with, one_point, PreKernel};
use sopkit::sampler::sample_matrix_ginibre;
use sopkit::skew::{partition_function, pfaffian, sop_from_recurrence, SkewIntegrator, SkewSystem};
use sopkit::special::erf_c;
use sopkit::verify::skew_orthogonality_error;
use sopkit::{Complex64, EnsembleSpec};
use std::f64::consts::PI;

fn c(re: f64, im: f64) -> Complex64 {
    Complex64::new(re, im)
}

fn system(e: &EnsembleSpec, n: usize) -> SkewSystem {
    let ops = OpSystem::for_ensemble(e, 2 * n + 2).unwrap();
    sop_from_recurrence(&ops, e, n).unwrap()
}

fn ensemble() -> impl Strategy<Value = EnsembleSpec> {
    prop_oneof![
        Just(EnsembleSpec::Ginibre),
        (0.5..3.0f64, -0.5..2.0f64).prop_map(|(lambda, c)| EnsembleSpec::MittagLeffler { lambda, c }),
        (-0.5..3.0f64).prop_map(|alpha| EnsembleSpec::Truncated { alpha }),
        (-0.5..3.0f64, 1.2..3.0f64, 0.3..1.0f64).prop_map(|(alpha, a, b)| EnsembleSpec::Gegenbauer { alpha, a, b }),
        (1.2..3.0f64, 0.3..1.0f64).prop_map(|(a, b)| EnsembleSpec::ChebyshevEllipse { a, b }),
        (0.0..0.8f64).prop_map(EnsembleSpec::elliptic_tau),
        (0.0..0.8f64, -0.5..2.0f64).prop_map(|(tau, nu)| EnsembleSpec::chiral_tau(tau, nu)),
        (1u32..=2, 0.0..1.5f64).prop_map(|(m, c)| EnsembleSpec::ProductGinibre { m, c }),
    ]
}

/// A point of the open upper half of the support from two unit draws.
fn support_point(e: &EnsembleSpec, s: f64, t: f64) -> Complex64 {
    let th = PI * (0.02 + 0.96 * t);
    match e.support() {
        Support::Contour { a, b } => c(a * th.cos(), b * th.sin()),
        Support::Ellipse { a, b } => {
            let rho = 0.98 * s.sqrt();
            c(a * rho * th.cos(), b * rho * th.sin())
        }
        Support::Plane => Complex64::from_polar(0.05 + 2.5 * s.sqrt(), th),
    }
}

fn point() -> impl Strategy<Value = Complex64> {
    (-2.0..2.0f64, -2.0..2.0f64).prop_map(|(x, y)| c(x, y))
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn erf_reflection_is_exact(x in -6.0..6.0f64, y in -6.0..6.0f64) {
        let z = c(x, y);
        prop_assert_eq!(erf_c(z.conj()).unwrap(), erf_c(z).unwrap().conj());
    }

    #[test]
    fn op_recurrence_matches_coefficients(e in ensemble(), r in 0.0..10.0f64, th in 0.0..(2.0 * PI), n in 1usize..=30) {
        let ops = OpSystem::for_ensemble(&e, n).unwrap();
        let z = Complex64::from_polar(r, th);
        let rec = ops.eval_all(n, z).unwrap();
        for (k, p) in ops.coeffs_all(n).unwrap().iter().enumerate() {
            // scale of the terms, so cancellation in the monomial sum is not held against it
            let scale = p.coeffs.iter().enumerate().map(|(j, a)| a.abs() * r.powi(j as i32)).sum::<f64>();
            prop_assert!((p.eval(z) - rec[k]).norm() <= 1e-10 * scale.max(1e-300), "{} n={k}: {} vs {}", e.id(), p.eval(z), rec[k]);
            prop_assert_eq!(p.eval(z.conj()), p.eval(z).conj());
        }
    }

    #[test]
    fn pfaffian_squares_to_determinant(n in 1usize..=6, seed in any::<u64>()) {
        let dim = 2 * n;
        let mut state = seed;
        let mut next = || {
            state = state.wrapping_mul(6364136223846793005).wrapping_add(1442695040888963407);
            (state >> 11) as f64 / (1u64 << 53) as f64 * 2.0 - 1.0
        };
        let mut m = DMatrix::<f64>::zeros(dim, dim);
        for i in 0..dim {
            for j in i + 1..dim {
                let v = next();
                m[(i, j)] = v;
                m[(j, i)] = -v;
            }
        }
        let pf = pfaffian(&m).unwrap();
        let det = m.determinant();
        prop_assert!((pf * pf - det).abs() <= 1e-8 * det.abs().max(1e-12), "{pf}² vs {det}");
    }

    #[test]
    fn skew_norms_are_positive(e in ensemble()) {
        let sys = system(&e, 5);
        prop_assert!(sys.r.iter().all(|&r| r > 0.0), "{}: {:?}", e.id(), sys.r);
    }

    #[test]
    fn odd_gauge_leaves_prekernel_and_relations(e in ensemble(), d in proptest::collection::vec(-2.0..2.0f64, 3), z in point(), u in point()) {
        let sys = system(&e, 3);
        let shifted = sys.with_odd_shift(&d);
        let (a, b) = (PreKernel::full(&sys).eval(z, u), PreKernel::full(&shifted).eval(z, u));
        prop_assert!((a - b).norm() <= 1e-9 * a.norm().max(1e-6), "{a} vs {b}");
        let integ = SkewIntegrator::for_degree(&e, 12, 1e-12).unwrap();
        prop_assert!(skew_orthogonality_error(&integ, &shifted.q, &shifted.r, |_| 1.0) <= 1e-6);
    }

    #[test]
    fn prekernel_is_antisymmetric(e in ensemble(), z in point(), u in point()) {
        let sys = system(&e, 4);
        let pk = PreKernel::full(&sys);
        let (a, b) = (pk.eval(z, u), pk.eval(u, z));
        prop_assert!((a + b).norm() <= 1e-12 * a.norm().max(1.0));
    }

    #[test]
    fn one_point_function_is_nonnegative(e in ensemble(), s in 0.0..1.0f64, t in 0.0..1.0f64) {
        let sys = system(&e, 4);
        let z = support_point(&e, s, t);
        let r1 = one_point(&sys, z);
        prop_assert!(r1 >= -1e-9, "{} at {z}: {r1}", e.id());
        prop_assert!((one_point(&sys, z.conj()) - r1).abs() <= 1e-10 * r1.abs().max(1e-10));
    }

    #[test]
    fn correlations_are_cocycle_invariant(a in -1.0..1.0f64, b in -1.0..1.0f64, z1 in point(), z2 in point()) {
        // θ(z̄) = −θ(z), so g(z̄) = 1/g(z)
        let g = |z: Complex64| Complex64::from_polar(1.0, a * z.im + b * (z * z).im);
        let e = EnsembleSpec::elliptic_tau(0.4);
        let sys = system(&e, 3);
        let pk = PreKernel::full(&sys);
        let w = |z: Complex64| e.weight(z);
        for pts in [vec![z1], vec![z1, z2]] {
            let plain = corr_fn(&sys, &pts).unwrap();
            let twisted = corr_fn_with(|x, y| g(x) * g(y) * pk.eval(x, y), w, &pts).unwrap();
            prop_assert!((plain - twisted).abs() <= 1e-10 * plain.abs().max(1e-10), "{plain} vs {twisted}");
        }
    }

    #[test]
    fn perturbed_prekernel_routes_agree(m in -1.5..1.5f64, z in point(), u in point()) {
        let sys = system(&EnsembleSpec::Ginibre, 3);
        let p = perturb_sop(&sys, m, &[]).unwrap();
        let (a, b) = (perturb_prekernel(&sys, m, z, u).unwrap(), p.pre_kernel(z, u));
        prop_assert!((a - b).norm() <= 1e-9 * b.norm().max(1e-3), "{a} vs {b}");
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(16))]

    #[test]
    fn partition_function_grows_on_unbounded_weights(
        e in prop_oneof![
            Just(EnsembleSpec::Ginibre),
            (0.5..2.0f64, 0.0..2.0f64).prop_map(|(lambda, c)| EnsembleSpec::MittagLeffler { lambda, c }),
            (0.0..0.8f64).prop_map(EnsembleSpec::elliptic_tau),
            (0.0..0.8f64, 0.0..2.0f64).prop_map(|(tau, nu)| EnsembleSpec::chiral_tau(tau, nu)),
        ]
    ) {
        let sys = system(&e, 6);
        let z: Vec<f64> = (1..=6).map(|n| partition_function(&sys.truncate(n))).collect();
        prop_assert!(z.windows(2).all(|w| w[1] > w[0]), "{}: {z:?}", e.id());
    }

    #[test]
    fn matrix_draws_pair_up(n in 1usize..=8, seed in any::<u64>()) {
        let s = sample_matrix_ginibre(n, 20, seed).unwrap();
        for cfg in &s.configs {
            prop_assert_eq!(cfg.len(), n);
            prop_assert!(cfg.iter().all(|z| z.im > 0.0));
        }
    }
}

#[test]
fn partition_function_falls_on_the_disc() {
    // Z_{N+1}/Z_N = (N+1) r_N and r_N ~ 1/N for the truncated weight
    let sys = system(&EnsembleSpec::Truncated { alpha: 1.0 }, 6);
    let z: Vec<f64> = (1..=6).map(|n| partition_function(&sys.truncate(n))).collect();
    assert!(z[1] > z[0] && z[5] < z[2], "{z:?}");
}
