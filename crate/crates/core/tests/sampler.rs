use sopkit::classical_op::OpSystem;
use sopkit::kernels::{one_point, s_hermite_series};
use sopkit::sampler::*;
use sopkit::skew::*;
use sopkit::special::{planar_rule, RuleOptions};
use sopkit::{Complex64, EnsembleSpec};
use std::f64::consts::PI;

fn system(e: &EnsembleSpec, n: usize) -> SkewSystem {
    let ops = OpSystem::for_ensemble(e, 2 * n).unwrap();
    sop_from_recurrence(&ops, e, n).unwrap()
}

#[test]
fn matrix_mean_square_modulus() {
    let e = EnsembleSpec::Ginibre;
    let sys = system(&e, 2);
    let rule = planar_rule(&e, RuleOptions::new(8, 1e-12)).unwrap();
    // the rule carries w, so it is divided out of R_{2,1}
    let exact = rule.integrate_real(|z| z.norm_sqr() * one_point(&sys, z) / e.weight(z));
    let s = sample_matrix_ginibre(2, 10_000, 2).unwrap();
    let vals: Vec<f64> = s.configs.iter().map(|c| c.iter().map(|z| z.norm_sqr()).sum()).collect();
    let n = vals.len() as f64;
    let mean = vals.iter().sum::<f64>() / n;
    let sd = (vals.iter().map(|v| (v - mean).powi(2)).sum::<f64>() / (n - 1.0)).sqrt();
    assert!((mean - exact).abs() <= 3.0 * sd / n.sqrt(), "{mean} vs {exact} (σ = {})", sd / n.sqrt());
}

#[test]
fn real_axis_is_depleted() {
    let e = EnsembleSpec::Ginibre;
    let sys = system(&e, 2);
    // expected number of points per configuration with 0 < Im z < 0.01 (and mirrors)
    let (xs, wx) = sopkit::special::gauss_legendre_on(64, -6.0, 6.0);
    let (ys, wy) = sopkit::special::gauss_legendre_on(8, 0.0, 0.01);
    let mut strip = 0.0;
    for (x, a) in xs.iter().zip(&wx) {
        for (y, b) in ys.iter().zip(&wy) {
            strip += 2.0 * a * b * one_point(&sys, Complex64::new(*x, *y));
        }
    }
    assert!(strip < 1e-5, "{strip}");
    let s = sample_matrix_ginibre(2, 10_000, 22).unwrap();
    let near = s.points().filter(|z| z.im < 0.01).count();
    // Poisson mean below 0.1
    assert!(near <= 2, "{near} points near the real axis, expected {}", strip * 1e4);
}

#[test]
fn matrix_radial_histogram_matches_one_point_function() {
    let e = EnsembleSpec::Ginibre;
    let sys = system(&e, 2);
    let s = sample_matrix_ginibre(2, 100_000, 1).unwrap();
    let h = radial_histogram(&s, 3.5, 20, 50).unwrap();
    let exact = annulus_integrals(|z| one_point(&sys, z), &h.edges, 64);
    let worst = h.max_deviation(&exact);
    assert!(worst <= 4.0, "{worst} standard errors");
}

#[test]
fn mcmc_radial_histogram_matches_one_point_function() {
    let e = EnsembleSpec::MittagLeffler { lambda: 2.0, c: 1.0 };
    let sys = system(&e, 4);
    let opts = McmcOptions { chains: 32, thin: 4, start: None };
    let s = sample_mcmc_with(&e, 4, 20_000, 2_000, 3, &opts).unwrap();
    let h = radial_histogram(&s, 2.0, 20, 32).unwrap();
    let exact = annulus_integrals(|z| one_point(&sys, z), &h.edges, 64);
    assert!((exact.iter().sum::<f64>() - 4.0).abs() < 1e-3);
    let worst = h.max_deviation(&exact);
    assert!(worst <= 4.0, "{worst} standard errors");
}

#[test]
fn mcmc_single_pair_radial_law() {
    // N = 1: radial density 2r³e^{−r²}, CDF 1 − (1 + r²)e^{−r²}
    let opts = McmcOptions { chains: 16, thin: 10, start: None };
    let s = sample_mcmc_with(&EnsembleSpec::Ginibre, 1, 62_500, 1_000, 8, &opts).unwrap();
    assert_eq!(s.len(), 100_000);
    let mut r: Vec<f64> = s.points().map(|z| z.norm()).collect();
    r.sort_by(f64::total_cmp);
    let n = r.len() as f64;
    let cdf = |r: f64| 1.0 - (1.0 + r * r) * (-r * r).exp();
    let ks = r
        .iter()
        .enumerate()
        .map(|(i, &x)| (cdf(x) - i as f64 / n).abs().max((cdf(x) - (i + 1) as f64 / n).abs()))
        .fold(0.0, f64::max);
    assert!(ks <= 0.02, "KS distance {ks}");
}

#[test]
fn elliptic_plateau() {
    let tau = 0.5;
    let e = EnsembleSpec::elliptic_tau(tau);
    let plateau = 1.0 / (2.0 * PI * (1.0 - tau * tau));
    let opts = McmcOptions { chains: 8, thin: 10, start: None };
    let s = sample_mcmc_with(&e, 32, 10_000, 2_000, 4, &opts).unwrap();
    // bulk away from the real-axis boundary layer and the droplet edge
    let grid = DensityGrid { x: (-4.0, 4.0), y: (1.5, 3.0), nx: 4, ny: 1 };
    let d = empirical_density(&s, &grid).unwrap();
    let mean = d.values.iter().sum::<f64>() / d.values.len() as f64;
    assert!((mean / plateau - 1.0).abs() <= 0.15, "{mean} vs {plateau}");
    // the same window under the exact finite-N density
    let scale = 2.0 * PI * (1.0 - tau) * (1.0 - tau * tau).sqrt();
    for i in 0..4 {
        let z = grid.center(i, 0);
        let exact = ((z.conj() - z) * s_hermite_series(tau, z, z.conj(), 32).unwrap()).re * e.weight(z) / scale;
        assert!((exact / plateau - 1.0).abs() < 0.1, "{z}: {exact}");
    }
}

#[test]
fn density_is_mirror_symmetric() {
    let s = sample_matrix_ginibre(3, 20_000, 5).unwrap();
    let grid = DensityGrid { x: (-4.5, 4.5), y: (-4.5, 4.5), nx: 12, ny: 12 };
    let d = empirical_density(&s, &grid).unwrap();
    assert!((d.integral() - 3.0).abs() < 1e-2);
    // Poisson error of a cell from its count
    let count = |v: f64| v * grid.cell_area() * s.len() as f64 * 2.0;
    for j in 0..12 {
        for i in 0..6 {
            let (a, b) = (d.at(i, j), d.at(11 - i, j));
            let sigma = (count(a) + count(b)).sqrt().max(1.0) / (grid.cell_area() * s.len() as f64 * 2.0);
            assert!((a - b).abs() <= 5.0 * sigma, "cell ({i},{j}): {a} vs {b}");
        }
    }
}

#[test]
fn partition_function_by_direct_quadrature() {
    for e in [EnsembleSpec::Ginibre, EnsembleSpec::Truncated { alpha: 1.0 }] {
        let sys = system(&e, 2);
        let z = partition_function_quadrature(&e, 2, 1e-10).unwrap();
        let want = 2.0 * sys.r[0] * sys.r[1];
        assert!((z / want - 1.0).abs() <= 1e-4, "{}: {z} vs {want}", e.id());
        assert!((partition_function(&sys) / want - 1.0).abs() < 1e-14);
    }
}

#[test]
fn sample_export_is_reproducible() {
    let a = sample_mcmc(&EnsembleSpec::Ginibre, 2, 50, 20, 12).unwrap();
    let b = sample_mcmc(&EnsembleSpec::Ginibre, 2, 50, 20, 12).unwrap();
    let (mut x, mut y) = (Vec::new(), Vec::new());
    a.write_csv(&mut x).unwrap();
    b.write_csv(&mut y).unwrap();
    assert_eq!(x, y);
    assert_eq!(String::from_utf8(x).unwrap().lines().count(), 1 + 50 * 2);
    assert_eq!(a.meta_json().unwrap(), b.meta_json().unwrap());
}
