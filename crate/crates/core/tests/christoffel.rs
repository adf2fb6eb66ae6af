use num_complex::Complex64;
use rand::{RngExt, SeedableRng};
use rand_chacha::ChaCha8Rng;
use sopkit::christoffel::*;
use sopkit::classical_op::OpSystem;
use sopkit::poly::Poly;
use sopkit::skew::*;
use sopkit::EnsembleSpec;

fn c(re: f64, im: f64) -> Complex64 {
    Complex64::new(re, im)
}

fn base(e: &EnsembleSpec, n: usize) -> (OpSystem, SkewSystem) {
    let ops = OpSystem::for_ensemble(e, 2 * n + 2).unwrap();
    let sys = sop_from_recurrence(&ops, e, n).unwrap();
    (ops, sys)
}

fn ensembles() -> [EnsembleSpec; 2] {
    [EnsembleSpec::Ginibre, EnsembleSpec::Gegenbauer { alpha: 1.0, a: 2.0, b: 1.0 }]
}

/// Coefficients of `target` in a monic triangular basis.
fn expand(target: &Poly<f64>, basis: &[Poly<Complex64>]) -> Vec<Complex64> {
    let mut rest = target.to_complex();
    let mut out = vec![c(0.0, 0.0); target.degree() + 1];
    for l in (0..=target.degree()).rev() {
        let a = rest.coeff(l);
        out[l] = a;
        rest = rest.axpy(-a, &basis[l]);
    }
    out
}

#[test]
fn perturbed_system_is_skew_orthogonal() {
    for e in ensembles() {
        let (_, sys) = base(&e, 4);
        let integ = SkewIntegrator::for_degree(&e, 16, 1e-13).unwrap();
        for m in [0.0, 0.7] {
            let p = perturb_sop(&sys, m, &[]).unwrap();
            assert_eq!(p.size(), 3);
            let g = integ.gram_matrix(&p.q1, |z| (z - m).norm_sqr());
            let rmax = p.r1.iter().cloned().fold(0.0, f64::max);
            for k in 0..3 {
                for l in 0..3 {
                    assert!(g[(2 * k, 2 * l)].abs() <= 1e-6 * rmax, "{} m={m} even {k},{l}", e.id());
                    assert!(g[(2 * k + 1, 2 * l + 1)].abs() <= 1e-6 * rmax, "{} m={m} odd {k},{l}", e.id());
                    let want = if k == l { p.r1[k] } else { 0.0 };
                    assert!((g[(2 * k, 2 * l + 1)] - want).abs() <= 1e-6 * rmax, "{} m={m} mixed {k},{l}", e.id());
                }
                assert!((g[(2 * k, 2 * k + 1)] - p.r1[k]).abs() <= 1e-6 * p.r1[k], "{} m={m} r1_{k}", e.id());
            }
        }
    }
}

#[test]
fn prekernel_routes_agree() {
    let mut rng = ChaCha8Rng::seed_from_u64(5);
    for e in ensembles() {
        let (_, sys) = base(&e, 4);
        for m in [0.0, 0.7, -1.3] {
            let p = perturb_sop(&sys, m, &[]).unwrap();
            for _ in 0..20 {
                let z = c(rng.random_range(-1.5..1.5), rng.random_range(-1.0..1.0));
                let u = c(rng.random_range(-1.5..1.5), rng.random_range(-1.0..1.0));
                let a = perturb_prekernel(&sys, m, z, u).unwrap();
                let b = p.pre_kernel(z, u);
                assert!((a - b).norm() <= 1e-9 * b.norm().max(1e-3), "{} m={m}: {a} vs {b}", e.id());
            }
        }
    }
}

#[test]
fn prekernel_is_finite_through_m() {
    let (_, sys) = base(&EnsembleSpec::Ginibre, 3);
    let p = perturb_sop(&sys, 0.7, &[]).unwrap();
    let u = c(0.2, 0.4);
    let a = perturb_prekernel(&sys, 0.7, c(0.7, 0.0), u).unwrap();
    assert!((a - p.pre_kernel(c(0.7, 0.0), u)).norm() < 1e-12 * a.norm());
}

#[test]
fn fourier_coefficients_rebuild_perturbed_sop() {
    for e in ensembles() {
        let (ops, sys) = base(&e, 4);
        for m in [0.0, 0.7, 1.0] {
            let p = perturb_sop(&sys, m, &[]).unwrap();
            let op1 = perturb_op(&ops, &e, c(m, 0.0), 2 * p.size()).unwrap();
            for k in 0..p.size() {
                let odd = &p.q1[2 * k + 1];
                let oracle = expand(odd, &op1.p1);
                for (l, o) in oracle.iter().enumerate() {
                    let b = fourier_beta(&sys, &ops, m, k, l).unwrap();
                    assert!((b - o.re).abs() <= 1e-8 * o.norm().max(1.0), "{} m={m} β_{},{l}: {b} vs {o}", e.id(), 2 * k + 1);
                }
                let even = &p.q1[2 * k];
                let oracle = expand(even, &op1.p1);
                for (l, o) in oracle.iter().enumerate() {
                    let a = fourier_alpha(&sys, &ops, m, k, l).unwrap();
                    assert!((a - o.re).abs() <= 1e-8 * o.norm().max(1.0), "{} m={m} α_{},{l}: {a} vs {o}", e.id(), 2 * k);
                }
                // the rebuilt sum, coefficient by coefficient
                let mut sum = Poly::<Complex64>::zero();
                for l in 0..=2 * k + 1 {
                    sum = sum.axpy(c(fourier_beta(&sys, &ops, m, k, l).unwrap(), 0.0), &op1.p1[l]);
                }
                assert!(sum.max_diff(&odd.to_complex()) <= 1e-8 * odd.norm_inf());
            }
        }
    }
}

#[test]
fn fill_in_below_the_three_term_band() {
    let (ops, sys) = base(&EnsembleSpec::Ginibre, 3);
    let b30 = fourier_beta(&sys, &ops, 1.0, 1, 0).unwrap();
    let b31 = fourier_beta(&sys, &ops, 1.0, 1, 1).unwrap();
    assert!(b30.abs() > 1e-6 && b31.abs() > 1e-6, "{b30} {b31}");
    assert_eq!(fourier_beta(&sys, &ops, 1.0, 1, 3).unwrap(), 1.0);
    assert_eq!(fourier_alpha(&sys, &ops, 1.0, 1, 2).unwrap(), 1.0);
}

#[test]
fn expansion_needs_the_recurrence_gauge() {
    let (ops, sys) = base(&EnsembleSpec::Ginibre, 3);
    let shifted = sys.with_odd_shift(&[0.5]);
    assert!(matches!(fourier_beta(&shifted, &ops, 0.5, 1, 0), Err(sopkit::Error::Gauge(_))));
}

#[test]
fn perturbed_op_is_orthogonal() {
    for e in ensembles() {
        let ops = OpSystem::for_ensemble(&e, 8).unwrap();
        let integ = SkewIntegrator::for_degree(&e, 14, 1e-13).unwrap();
        let rule = &integ.rule;
        for m in [c(0.0, 0.0), c(0.7, 0.0), c(0.3, 0.5)] {
            let p = perturb_op(&ops, &e, m, 5).unwrap();
            for i in 0..=5 {
                for j in 0..=i {
                    let g = rule.integrate(|z| p.p1[i].eval(z) * p.p1[j].eval(z).conj() * (z - m).norm_sqr());
                    let want = if i == j { p.h1[i] } else { 0.0 };
                    assert!((g - want).norm() <= 1e-6 * p.h1[i], "{} m={m} ({i},{j}): {g} vs {want}", e.id());
                }
            }
        }
    }
}

#[test]
fn far_perturbation_leaves_op_unchanged() {
    // Ginibre: ⟨z,1⟩ = −πm and ⟨1,1⟩ = π(1 + m²) under |z − m|² e^{−|z|²}, so p1_1 = z + m/(1 + m²)
    let g = EnsembleSpec::Ginibre;
    let ops = OpSystem::for_ensemble(&g, 8).unwrap();
    for m in [0.5, 3.0, 1e3] {
        let p = perturb_op(&ops, &g, c(m, 0.0), 2).unwrap();
        let want = Poly::new(vec![c(m / (1.0 + m * m), 0.0), c(1.0, 0.0)]);
        assert!(p.p1[1].max_diff(&want) < 1e-12, "m={m}: {:?}", p.p1[1]);
    }
    // the approach to the unperturbed family is first order in 1/|m|
    let e = EnsembleSpec::Gegenbauer { alpha: 1.0, a: 2.0, b: 1.0 };
    let ops = OpSystem::for_ensemble(&e, 8).unwrap();
    let base = ops.coeffs_all(5).unwrap();
    for m in [1e3, 1e4, 1e5] {
        let p = perturb_op(&ops, &e, c(m, 0.0), 5).unwrap();
        for n in 0..=5 {
            let d = p.p1[n].max_diff(&base[n].to_complex());
            assert!(d <= 5.0 / m, "m={m} n={n}: {d:e}");
        }
    }
    let p = perturb_op(&ops, &e, c(1e5, 0.0), 5).unwrap();
    assert!((0..=5).all(|n| p.p1[n].max_diff(&base[n].to_complex()) <= 1e-4));
}

#[test]
fn perturbed_kernel_reproduces() {
    let e = EnsembleSpec::Ginibre;
    let ops = OpSystem::for_ensemble(&e, 8).unwrap();
    let rule = SkewIntegrator::for_degree(&e, 14, 1e-13).unwrap().rule;
    let m = c(0.6, 0.2);
    let p = perturb_op(&ops, &e, m, 6).unwrap();
    let f = Poly::new(vec![c(0.5, 0.1), c(-1.0, 0.0), c(0.2, 0.3), c(0.0, 1.0)]);
    let mut rng = ChaCha8Rng::seed_from_u64(9);
    for _ in 0..5 {
        let v = c(rng.random_range(-1.0..1.0), rng.random_range(-1.0..1.0));
        let got = rule.integrate(|z| p.kernel(5, v, z).unwrap() * f.eval(z) * (z - m).norm_sqr());
        assert!((got - f.eval(v)).norm() <= 1e-6 * f.eval(v).norm().max(1.0), "{v}: {got}");
    }
}
