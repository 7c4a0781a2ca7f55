use fractal_conjugacy::catalog;
use fractal_conjugacy::code_space::ProbabilityVector;
use fractal_conjugacy::ifs::{EmpiricalMeasure, DEFAULT_BURN_IN};
use fractal_conjugacy::measure::*;
use fractal_conjugacy::oracles::cantor_function;
use fractal_conjugacy::transform::bit_exact_depth;
use fractal_conjugacy::Pair64;

#[test]
fn pushforward_keeps_every_sample_and_its_weight() {
    let m = EmpiricalMeasure::<f64>::uniform_interval(50_000, 1).unwrap();
    for label in ["FG1", "FG3", "identity", "hilbert", "triangle"] {
        let tp: Pair64 = catalog::pair(label).unwrap();
        let out = pushforward(&tp, &m).unwrap();
        assert_eq!(out.len(), m.len(), "{label}");
        assert_eq!(out.weight().to_bits(), m.weight().to_bits(), "{label}");
        assert_eq!(out.dim(), tp.target().dim());
    }
    let id: Pair64 = catalog::pair::<f64>("identity").unwrap().with_depth(bit_exact_depth::<f64>());
    let out = pushforward(&id, &m).unwrap();
    for (a, b) in m.points().iter().zip(out.points()) {
        assert_eq!(a.x.to_bits(), b.x.to_bits());
    }
}

#[test]
fn interval_pushforwards_stay_uniform() {
    let n = 200_000;
    let m = EmpiricalMeasure::<f64>::uniform_interval(n, 2).unwrap();
    let bound = ks_critical_value(n, 0.01);
    for label in ["FG1", "FG2", "FG3", "scaled:0.2", "scaled:0.45"] {
        let tp: Pair64 = catalog::pair(label).unwrap();
        let ks = ks_statistic(&pushforward(&tp, &m).unwrap(), uniform_cdf).unwrap();
        assert!(ks < bound, "{label}: {ks} >= {bound}");
    }
}

#[test]
fn cantor_measure_follows_the_cantor_function() {
    let n = 200_000;
    let f = catalog::cantor_f::<f64>().unwrap();
    let m = f
        .chaos_game_parallel(f.default_probabilities(), n, DEFAULT_BURN_IN, 3, 4)
        .unwrap();
    let bound = ks_critical_value(n, 0.01);
    let ks = ks_statistic(&m, |x| cantor_function(x, 40)).unwrap();
    assert!(ks < bound, "{ks}");
    let tp: Pair64 = catalog::pair("cantor").unwrap();
    let ks = ks_statistic(&pushforward(&tp, &m).unwrap(), uniform_cdf).unwrap();
    assert!(ks < bound, "{ks}");
}

#[test]
fn hilbert_target_measure_is_lebesgue() {
    let n = 1_000_000;
    let g = catalog::hilbert_g::<f64>().unwrap();
    let m = g
        .chaos_game_parallel(&ProbabilityVector::uniform(4), n, DEFAULT_BURN_IN, 5, 4)
        .unwrap();
    let chi = grid_chi_square(&m, 32).unwrap();
    assert!(chi < chi_square_quantile(1023, 0.99).unwrap(), "{chi}");
}

#[test]
fn chi_square_rejects_a_point_mass() {
    let n = 10_000;
    let points = vec![fractal_conjugacy::geometry::Point::new(0.1, 0.1); n];
    let m = EmpiricalMeasure::<f64>::from_points(points, 2, "point").unwrap();
    let chi = grid_chi_square(&m, 8).unwrap();
    assert!((chi - n as f64 * 63.0).abs() < 1e-6 * chi);
    assert!(grid_chi_square(&m, 64).is_err());
}

#[test]
fn invariance_residuals_at_a_million_samples() {
    let n = 1_000_000;
    let cells = DyadicCells::unit(1, 5);
    let binary = catalog::interval_binary::<f64>().unwrap();
    let scaled = catalog::interval_scaled::<f64>(0.3).unwrap();
    for (ifs, p) in [
        (binary, ProbabilityVector::uniform(2)),
        (scaled, ProbabilityVector::new(vec![0.3, 0.7]).unwrap()),
    ] {
        let m = ifs.chaos_game_parallel(&p, n, DEFAULT_BURN_IN, 9, 4).unwrap();
        let r = invariance_residual(&ifs, &p, &m, &cells).unwrap();
        assert!(r < 0.004, "{}: {r}", ifs.label());
        let exact = invariance_residual_cdf(&ifs, &p, uniform_cdf, &cells).unwrap();
        assert!(exact < 1e-15, "{}: {exact}", ifs.label());
    }
}

#[test]
fn critical_samples_thin_out_linearly() {
    for ifs in [
        catalog::interval_binary::<f64>().unwrap(),
        catalog::interval_g1().unwrap(),
        catalog::interval_scaled(0.3).unwrap(),
    ] {
        let eps = [1e-4, 1e-5, 1e-6];
        let mut fractions = [0.0; 3];
        let batches = 8;
        for seed in 0..batches {
            let m = ifs
                .chaos_game_parallel(ifs.default_probabilities(), 2_000_000, DEFAULT_BURN_IN, 100 + seed, 4)
                .unwrap();
            for (f, &e) in fractions.iter_mut().zip(&eps) {
                *f += critical_fraction(&ifs, &m, e) / batches as f64;
            }
        }
        for w in fractions.windows(2) {
            let ratio = w[0] / w[1];
            assert!((4.0..=25.0).contains(&ratio), "{}: {fractions:?}", ifs.label());
        }
    }
}
