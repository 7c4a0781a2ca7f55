use fractal_conjugacy::calculus::*;
use fractal_conjugacy::catalog;
use fractal_conjugacy::code_space::ProbabilityVector;
use fractal_conjugacy::geometry::Point;
use fractal_conjugacy::hilbert_space::SampledFunction;
use proptest::prelude::*;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

#[test]
fn cantor_function_has_unit_fractal_derivative() {
    let cantor = catalog::pair::<f64>("cantor").unwrap();
    let tp = cantor.inverse();
    let g = transform_coordinate(&cantor);
    let d = fractal_derivative(&tp, &g, 1).unwrap();
    let f = tp.target().clone();
    let mut rng = ChaCha8Rng::seed_from_u64(3);
    let pts = f.chaos_game(&ProbabilityVector::uniform(2), 200, 64, &mut rng).unwrap();
    for y in pts.points() {
        let v = d.eval(*y).unwrap();
        assert!((v - 1.0).abs() < 1e-6, "{y:?} {v}");
    }
}

#[test]
fn koch_ode_residual() {
    let tp = catalog::pair::<f64>("koch").unwrap();
    let g = transformed_ode_solution(&tp).unwrap();
    let y0 = tp.transform(Point::on_line(0.0)).unwrap();
    assert!((g.eval(y0).unwrap() - 1.0).abs() < 1e-12);
    let d = fractal_derivative(&tp, &g, 1).unwrap();
    let mut rng = ChaCha8Rng::seed_from_u64(5);
    let mut worst = 0.0f64;
    for _ in 0..200 {
        let y = tp.transform(Point::on_line(rng.gen::<f64>())).unwrap();
        worst = worst.max((d.eval(y).unwrap() - g.eval(y).unwrap()).abs());
    }
    assert!(worst < 1e-4, "{worst}");
}

#[test]
fn pullback_of_ode_solution_is_exponential() {
    let tp = catalog::pair::<f64>("koch").unwrap();
    let g = transformed_ode_solution(&tp).unwrap();
    for x in [0.1, 0.37, 0.8] {
        let y = tp.transform(Point::on_line(x)).unwrap();
        let err = (g.eval(y).unwrap() - f64::exp(x)).abs();
        let bound = 4.0 * f64::exp(x) * tp.roundtrip_residual(Point::on_line(x)).unwrap().max(f64::EPSILON);
        assert!(err <= bound, "{err} > {bound}");
    }
}

#[test]
fn constant_has_zero_derivative_and_linearity() {
    let tp = catalog::pair::<f64>("koch").unwrap();
    let one = SampledFunction::constant("koch_G", 1.0);
    let d = fractal_derivative(&tp, &one, 1).unwrap();
    let g = transformed_ode_solution(&tp).unwrap();
    let combo = g.scaled(2.0).plus(&one.scaled(-3.0)).unwrap();
    let dg = fractal_derivative(&tp, &g, 1).unwrap();
    let dcombo = fractal_derivative(&tp, &combo, 1).unwrap();
    for x in [0.2, 0.6] {
        let y = tp.transform(Point::on_line(x)).unwrap();
        assert_eq!(d.eval(y).unwrap(), 0.0);
        let lhs = dcombo.eval(y).unwrap();
        let rhs = 2.0 * dg.eval(y).unwrap();
        assert!((lhs - rhs).abs() < 1e-8 * rhs.abs(), "{lhs} {rhs}");
    }
}

#[test]
fn second_order_matches_repeated_first_order() {
    let tp = catalog::pair::<f64>("koch").unwrap();
    let g = transformed_ode_solution(&tp).unwrap();
    let d1 = fractal_derivative(&tp, &g, 1).unwrap();
    let dd = fractal_derivative(&tp, &d1, 1).unwrap();
    let d2 = fractal_derivative(&tp, &g, 2).unwrap();
    for x in [0.15, 0.5, 0.85] {
        let y = tp.transform(Point::on_line(x)).unwrap();
        let (a, b) = (dd.eval(y).unwrap(), d2.eval(y).unwrap());
        assert!((a - b).abs() < 1e-3, "{a} {b}");
        assert!((b - f64::exp(x)).abs() < 1e-4);
    }
}

#[test]
fn difference_quotient_converges() {
    let tp = catalog::pair::<f64>("koch").unwrap();
    let oa = OrderedAttractor::from_pair(&tp).unwrap();
    let g = transformed_ode_solution(&tp).unwrap();
    let d = fractal_derivative(&tp, &g, 1).unwrap();
    let delta = 0.5f64.powi(16);
    let mut rng = ChaCha8Rng::seed_from_u64(11);
    for _ in 0..50 {
        let x0 = 0.1 + 0.8 * rng.gen::<f64>();
        let y0 = tp.transform(Point::on_line(x0)).unwrap();
        let y = tp.transform(Point::on_line(x0 + delta)).unwrap();
        let q = difference_quotient(&oa, &g, y, y0).unwrap();
        let exact = d.eval(y0).unwrap();
        assert!(((q - exact) / exact).abs() < 1e-3);
        let anti = fractal_difference(&oa, y, y0).unwrap() + fractal_difference(&oa, y0, y).unwrap();
        assert_eq!(anti, 0.0);
    }
}

#[test]
fn non_homeomorphic_pairs_are_not_ordered() {
    let tp = catalog::pair::<f64>("FG1").unwrap();
    assert!(OrderedAttractor::from_pair(&tp).is_err());
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(32))]

    #[test]
    fn fractal_derivative_is_linear(a in -3.0f64..3.0, b in -3.0f64..3.0, c in -3.0f64..3.0, x in 0.05f64..0.95) {
        let tp = catalog::pair::<f64>("koch").unwrap();
        let g = transformed_ode_solution(&tp).unwrap();
        let h = transform_coordinate(&tp.inverse());
        let one = SampledFunction::constant("koch_G", 1.0);
        let combo = g.scaled(a).plus(&h.scaled(b)).unwrap().plus(&one.scaled(c)).unwrap();
        let y = tp.transform(Point::on_line(x)).unwrap();
        let lhs = fractal_derivative(&tp, &combo, 1).unwrap().eval(y).unwrap();
        let rhs = a * fractal_derivative(&tp, &g, 1).unwrap().eval(y).unwrap()
            + b * fractal_derivative(&tp, &h, 1).unwrap().eval(y).unwrap();
        prop_assert!((lhs - rhs).abs() < 1e-6 * (1.0 + rhs.abs()), "{} {}", lhs, rhs);
    }
}
