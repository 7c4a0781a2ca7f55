use fractal_conjugacy::catalog;
use fractal_conjugacy::geometry::Point;
use fractal_conjugacy::haar::HaarElement;
use fractal_conjugacy::hilbert_space::*;
use fractal_conjugacy::ifs::EmpiricalMeasure;
use fractal_conjugacy::Pair64;
use proptest::prelude::*;

fn element(kind: BasisKind, index: usize) -> SampledFunction<f64> {
    basis_function(BasisSpec { kind, index }).unwrap()
}

fn wiggle() -> SampledFunction<f64> {
    SampledFunction::on_interval(Smoothness::Continuous, |x| (3.0 * x).sin() + x * x - 0.4 * (7.0 * x).cos())
}

#[test]
fn pulled_back_functions_keep_their_coefficients() {
    let f = wiggle();
    for (classical, fractal) in [
        (BasisKind::Sine, BasisKind::FractalSineG1),
        (BasisKind::Sine, BasisKind::FractalSineG2),
        (BasisKind::Legendre, BasisKind::FractalLegendreG1),
        (BasisKind::Legendre, BasisKind::FractalLegendreG2),
    ] {
        let fb = Basis::<f64>::new(fractal).unwrap();
        let uf = unitary_pullback(fb.pair().unwrap(), &f).unwrap();
        let a = series_coefficients(&f, &Basis::new(classical).unwrap(), 24).unwrap();
        let b = series_coefficients(&uf, &fb, 24).unwrap();
        for (n, (x, y)) in a.iter().zip(&b).enumerate() {
            assert!((x - y).abs() < 1e-8, "{fractal} {n}: {x} vs {y}");
        }
    }
}

#[test]
fn fractal_families_are_orthonormal() {
    for kind in [
        BasisKind::FractalSineG1,
        BasisKind::FractalSineG2,
        BasisKind::FractalLegendreG1,
        BasisKind::FractalLegendreG2,
    ] {
        let elems: Vec<_> = kind.indices(6).into_iter().map(|n| element(kind, n)).collect();
        for (i, a) in elems.iter().enumerate() {
            for (j, b) in elems.iter().enumerate() {
                let g = inner_product(a, b, Integrator::Lebesgue).unwrap().value;
                let expect = if i == j { 1.0 } else { 0.0 };
                assert!((g - expect).abs() < 1e-5, "{kind} ({i},{j}): {g}");
            }
        }
    }
}

#[test]
fn first_two_fractal_sines_are_orthogonal_by_monte_carlo() {
    let m = EmpiricalMeasure::<f64>::uniform_interval(1_000_000, 21).unwrap();
    let e1 = element(BasisKind::FractalSineG1, 1);
    let e2 = element(BasisKind::FractalSineG1, 2);
    let ip = inner_product(&e1, &e2, Integrator::MonteCarlo(&m)).unwrap();
    assert!(ip.value.abs() < 0.004, "{ip:?}");
    assert!(ip.stderr < 2e-3);
}

#[test]
fn haar_family_is_orthonormal() {
    let n = 32;
    let elems: Vec<_> = (1..=n).map(|k| element(BasisKind::Haar, k)).collect();
    for i in 0..n {
        for j in 0..n {
            let g = inner_product(&elems[i], &elems[j], Integrator::Lebesgue).unwrap().value;
            let expect = if i == j { 1.0 } else { 0.0 };
            assert!((g - expect).abs() < 1e-12, "({i},{j}): {g}");
        }
    }
    assert_eq!(HaarElement::from_index(2).unwrap().value(0.25), 1.0);
    assert_eq!(HaarElement::from_index(2).unwrap().value(0.75), -1.0);
}

#[test]
fn pullback_of_constants_and_identity() {
    let tp: Pair64 = catalog::pair("FG1").unwrap();
    let one = unitary_pullback(&tp, &SampledFunction::constant(UNIT_INTERVAL, 1.0)).unwrap();
    let id = unitary_pullback(&tp, &SampledFunction::on_interval(Smoothness::Continuous, |x| x)).unwrap();
    let back = tp.inverse();
    for k in 0..200 {
        let y = (k as f64 + 0.37) / 200.0;
        assert_eq!(one.eval_at(y).unwrap(), 1.0);
        assert_eq!(id.eval_at(y).unwrap(), back.transform(Point::on_line(y)).unwrap().x);
    }
    assert_eq!(id.smoothness(), Smoothness::Rough);
}

#[test]
fn pullbacks_preserve_norms() {
    for label in ["FG1", "FG2", "FG3", "scaled:0.3"] {
        let tp: Pair64 = catalog::pair(label).unwrap();
        for f in [wiggle(), element(BasisKind::Sine, 3), named_function("tent").unwrap()] {
            let a = norm(&f, Integrator::Lebesgue).unwrap().value;
            let b = norm(&unitary_pullback(&tp, &f).unwrap(), Integrator::Lebesgue).unwrap().value;
            assert!((a - b).abs() < 1e-6 * a, "{label}: {a} vs {b}");
        }
    }
}

#[test]
fn pullback_rejects_foreign_domains() {
    let tp: Pair64 = catalog::pair("hilbert").unwrap();
    let f = SampledFunction::<f64>::constant(UNIT_SQUARE, 1.0);
    assert!(unitary_pullback(&tp, &f).is_err());
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(32))]

    #[test]
    fn partial_sums_are_linear(
        c in prop::collection::vec(-2.0f64..2.0, 1..12),
        d in prop::collection::vec(-2.0f64..2.0, 12),
        y in 0.0f64..=1.0,
        which in 0usize..4,
    ) {
        let kind = [BasisKind::Sine, BasisKind::FractalSineG2, BasisKind::Legendre, BasisKind::Haar][which];
        let basis = Basis::<f64>::new(kind).unwrap();
        let d = &d[..c.len()];
        let sum: Vec<f64> = c.iter().zip(d).map(|(a, b)| a + b).collect();
        let p = Point::on_line(y);
        let lhs = partial_sum(&sum, &basis, p).unwrap();
        let rhs = partial_sum(&c, &basis, p).unwrap() + partial_sum(d, &basis, p).unwrap();
        prop_assert!((lhs - rhs).abs() < 1e-9 * (1.0 + lhs.abs()) * c.len() as f64);
    }
}
