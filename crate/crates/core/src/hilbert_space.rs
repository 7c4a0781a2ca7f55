//! Functions in `L²(A, μ)`, inner products, the induced unitary operators
//! and orthonormal bases of `L²[0, 1]` with their fractal transplants.

use std::f64::consts::{PI, SQRT_2};
use std::fmt;
use std::str::FromStr;
use std::sync::Arc;

use rayon::prelude::*;

use crate::catalog;
use crate::error::{Error, Result};
use crate::geometry::Point;
use crate::haar::HaarElement;
use crate::ifs::{ContractiveIfs, EmpiricalMeasure};
use crate::quadrature::{legendre, Rule, DEFAULT_ORDER};
use crate::region::Region;
use crate::scalar::Scalar;
use crate::transform::TransformPair;

/// Domain label of functions on the unit interval.
pub const UNIT_INTERVAL: &str = "[0,1]";
/// Domain label of functions on the unit square.
pub const UNIT_SQUARE: &str = "[0,1]^2";

/// Number of dyadic cells (log2) used for integrands built from transforms.
pub const ROUGH_LOG2_CELLS: u32 = 12;
/// Points per dyadic cell for rough integrands.
pub const ROUGH_ORDER: usize = 16;
/// Panels per smooth piece for composite Gauss–Legendre.
pub const SMOOTH_PANELS: usize = 64;

/// Regularity hint that selects the quadrature.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Smoothness {
    Continuous,
    /// Smooth between the listed breakpoints.
    Piecewise,
    Rough,
}

type Eval<T> = Arc<dyn Fn(Point<T>) -> Result<f64> + Send + Sync>;

/// A real function on an attractor.
#[derive(Clone)]
pub struct SampledFunction<T> {
    eval: Eval<T>,
    domain: String,
    smoothness: Smoothness,
    breakpoints: Vec<f64>,
}

impl<T: Scalar> fmt::Debug for SampledFunction<T> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("SampledFunction")
            .field("domain", &self.domain)
            .field("smoothness", &self.smoothness)
            .field("breakpoints", &self.breakpoints)
            .finish()
    }
}

impl<T: Scalar> SampledFunction<T> {
    pub fn new(
        domain: impl Into<String>,
        smoothness: Smoothness,
        eval: impl Fn(Point<T>) -> Result<f64> + Send + Sync + 'static,
    ) -> Self {
        Self {
            eval: Arc::new(eval),
            domain: domain.into(),
            smoothness,
            breakpoints: Vec::new(),
        }
    }

    /// A total function of `x` on `[0, 1]`.
    pub fn on_interval(smoothness: Smoothness, f: impl Fn(f64) -> f64 + Send + Sync + 'static) -> Self {
        Self::new(UNIT_INTERVAL, smoothness, move |p: Point<T>| Ok(f(p.x.as_f64())))
    }

    pub fn constant(domain: impl Into<String>, c: f64) -> Self {
        Self::new(domain, Smoothness::Continuous, move |_| Ok(c))
    }

    pub fn with_breakpoints(mut self, breakpoints: Vec<f64>) -> Self {
        self.breakpoints = breakpoints;
        self
    }

    #[inline]
    pub fn eval(&self, p: Point<T>) -> Result<f64> {
        (self.eval)(p)
    }

    pub fn eval_at(&self, x: f64) -> Result<f64> {
        self.eval(Point::on_line(T::lit(x)))
    }

    pub fn eval_many(&self, points: &[Point<T>]) -> Result<Vec<f64>> {
        points.par_iter().map(|&p| self.eval(p)).collect()
    }

    pub fn domain(&self) -> &str {
        &self.domain
    }

    pub fn smoothness(&self) -> Smoothness {
        self.smoothness
    }

    pub fn breakpoints(&self) -> &[f64] {
        &self.breakpoints
    }

    /// `α f`.
    pub fn scaled(&self, alpha: f64) -> Self {
        let f = Arc::clone(&self.eval);
        Self {
            eval: Arc::new(move |p| Ok(alpha * f(p)?)),
            domain: self.domain.clone(),
            smoothness: self.smoothness,
            breakpoints: self.breakpoints.clone(),
        }
    }

    /// `f + g` on a shared domain.
    pub fn plus(&self, other: &Self) -> Result<Self> {
        check_domains(self, other)?;
        let (f, g) = (Arc::clone(&self.eval), Arc::clone(&other.eval));
        let mut breakpoints = self.breakpoints.clone();
        breakpoints.extend_from_slice(&other.breakpoints);
        Ok(Self {
            eval: Arc::new(move |p| Ok(f(p)? + g(p)?)),
            domain: self.domain.clone(),
            smoothness: worse(self.smoothness, other.smoothness),
            breakpoints,
        })
    }

    /// `x ↦ h(f(x))`.
    pub fn map(&self, h: impl Fn(f64) -> f64 + Send + Sync + 'static) -> Self {
        let f = Arc::clone(&self.eval);
        Self {
            eval: Arc::new(move |p| Ok(h(f(p)?))),
            domain: self.domain.clone(),
            smoothness: self.smoothness,
            breakpoints: self.breakpoints.clone(),
        }
    }
}

fn worse(a: Smoothness, b: Smoothness) -> Smoothness {
    use Smoothness::*;
    match (a, b) {
        (Rough, _) | (_, Rough) => Rough,
        (Piecewise, _) | (_, Piecewise) => Piecewise,
        _ => Continuous,
    }
}

fn check_domains<T>(f: &SampledFunction<T>, g: &SampledFunction<T>) -> Result<()> {
    if f.domain != g.domain {
        return Err(Error::DomainMismatch {
            left: f.domain.clone(),
            right: g.domain.clone(),
        });
    }
    Ok(())
}

/// Domain label of functions on the attractor of `ifs`.
pub fn domain_label<T: Scalar>(ifs: &ContractiveIfs<T>) -> String {
    match ifs.region() {
        Region::Interval { lo, hi } if *lo == T::zero() && *hi == T::one() => UNIT_INTERVAL.into(),
        Region::Rect { min, max }
            if min.x == T::zero() && min.y == T::zero() && max.x == T::one() && max.y == T::one() =>
        {
            UNIT_SQUARE.into()
        }
        _ => ifs.label().to_string(),
    }
}

/// Test functions on `[0, 1]`: `constant`, `step` (indicator of `[0, 1/2)`),
/// `tent` (`min(x, 1-x)`), `identity`, `sine` (`sin πx`).
pub fn named_function<T: Scalar>(label: &str) -> Result<SampledFunction<T>> {
    Ok(match label {
        "constant" => SampledFunction::on_interval(Smoothness::Continuous, |_| 1.0),
        "step" => SampledFunction::on_interval(Smoothness::Piecewise, |x| if x < 0.5 { 1.0 } else { 0.0 })
            .with_breakpoints(vec![0.5]),
        "tent" => SampledFunction::on_interval(Smoothness::Piecewise, |x| x.min(1.0 - x)).with_breakpoints(vec![0.5]),
        "identity" => SampledFunction::on_interval(Smoothness::Continuous, |x| x),
        "sine" => SampledFunction::on_interval(Smoothness::Continuous, |x| (PI * x).sin()),
        other => return Err(Error::UnknownLabel(other.to_string())),
    })
}

/// Labels accepted by [`named_function`].
pub const FUNCTION_LABELS: &[&str] = &["constant", "step", "tent", "identity", "sine"];

/// Value and standard error of an integral estimate. Deterministic rules
/// report a standard error of zero.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Estimate {
    pub value: f64,
    pub stderr: f64,
}

/// How to integrate against the measure.
#[derive(Clone, Copy, Debug)]
pub enum Integrator<'a, T> {
    /// Sample mean over a point cloud of the measure.
    MonteCarlo(&'a EmpiricalMeasure<T>),
    /// Lebesgue measure on `[0, 1]`, by Gauss–Legendre quadrature.
    Lebesgue,
}

/// `⟨f, g⟩ = ∫ f g dμ`.
pub fn inner_product<T: Scalar>(
    f: &SampledFunction<T>,
    g: &SampledFunction<T>,
    integrator: Integrator<'_, T>,
) -> Result<Estimate> {
    check_domains(f, g)?;
    match integrator {
        Integrator::MonteCarlo(m) => {
            let fv = f.eval_many(m.points())?;
            let gv = g.eval_many(m.points())?;
            let prod: Vec<f64> = fv.iter().zip(&gv).map(|(a, b)| a * b).collect();
            Ok(mean_with_stderr(&prod))
        }
        Integrator::Lebesgue => {
            if f.domain != UNIT_INTERVAL {
                return Err(Error::DomainMismatch {
                    left: f.domain.clone(),
                    right: UNIT_INTERVAL.into(),
                });
            }
            let mut bps = f.breakpoints.clone();
            bps.extend_from_slice(&g.breakpoints);
            let rule = rule_for(worse(f.smoothness, g.smoothness), &bps);
            let pts: Vec<Point<T>> = rule.nodes.iter().map(|&x| Point::on_line(T::lit(x))).collect();
            let fv = f.eval_many(&pts)?;
            let gv = g.eval_many(&pts)?;
            let prod: Vec<f64> = fv.iter().zip(&gv).map(|(a, b)| a * b).collect();
            Ok(Estimate {
                value: rule.apply(&prod),
                stderr: 0.0,
            })
        }
    }
}

/// `‖f‖` with the standard error of `‖f‖²`.
pub fn norm<T: Scalar>(f: &SampledFunction<T>, integrator: Integrator<'_, T>) -> Result<Estimate> {
    let sq = inner_product(f, f, integrator)?;
    Ok(Estimate {
        value: sq.value.sqrt(),
        stderr: sq.stderr,
    })
}

pub(crate) fn mean_with_stderr(values: &[f64]) -> Estimate {
    let n = values.len() as f64;
    let mean = values.iter().sum::<f64>() / n;
    let var = values.iter().map(|v| (v - mean) * (v - mean)).sum::<f64>() / (n - 1.0).max(1.0);
    Estimate {
        value: mean,
        stderr: (var / n).sqrt(),
    }
}

fn rule_for(smoothness: Smoothness, breakpoints: &[f64]) -> Rule {
    match smoothness {
        Smoothness::Rough => Rule::dyadic(ROUGH_LOG2_CELLS, ROUGH_ORDER),
        _ => Rule::composite(0.0, 1.0, breakpoints, SMOOTH_PANELS, DEFAULT_ORDER),
    }
}

/// `(U_FG f)(y) = f(T_GF(y))`.
pub fn unitary_pullback<T: Scalar>(tp: &TransformPair<T>, f: &SampledFunction<T>) -> Result<SampledFunction<T>> {
    let source = domain_label(tp.source());
    if f.domain != source {
        return Err(Error::DomainMismatch {
            left: f.domain.clone(),
            right: source,
        });
    }
    let back = tp.inverse();
    let g = Arc::clone(&f.eval);
    let smoothness = match (tp.is_homeomorphism(), f.smoothness) {
        (true, Smoothness::Continuous) => Smoothness::Continuous,
        _ => Smoothness::Rough,
    };
    Ok(SampledFunction {
        eval: Arc::new(move |y| g(back.transform(y)?)),
        domain: domain_label(tp.target()),
        smoothness,
        breakpoints: Vec::new(),
    })
}

/// Orthonormal families of `L²[0, 1]` and their transplants.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum BasisKind {
    /// `√2 sin(nπx)`, `n ≥ 1`.
    Sine,
    /// `√2 sin(nπ T_{G₁F}(x))`.
    FractalSineG1,
    /// `√2 sin(nπ T_{G₂F}(x))`.
    FractalSineG2,
    /// `√(2n+1) P_n(2x − 1)`, `n ≥ 0`.
    Legendre,
    FractalLegendreG1,
    FractalLegendreG2,
    /// Constant, mother wavelet, then words level by level; `n ≥ 1`.
    Haar,
}

impl BasisKind {
    pub const ALL: [BasisKind; 7] = [
        BasisKind::Sine,
        BasisKind::FractalSineG1,
        BasisKind::FractalSineG2,
        BasisKind::Legendre,
        BasisKind::FractalLegendreG1,
        BasisKind::FractalLegendreG2,
        BasisKind::Haar,
    ];

    pub fn label(self) -> &'static str {
        match self {
            BasisKind::Sine => "sine",
            BasisKind::FractalSineG1 => "fractal_sine_G1",
            BasisKind::FractalSineG2 => "fractal_sine_G2",
            BasisKind::Legendre => "legendre",
            BasisKind::FractalLegendreG1 => "fractal_legendre_G1",
            BasisKind::FractalLegendreG2 => "fractal_legendre_G2",
            BasisKind::Haar => "haar",
        }
    }

    /// The classical family a fractal kind is transplanted from.
    pub fn classical(self) -> BasisKind {
        match self {
            BasisKind::FractalSineG1 | BasisKind::FractalSineG2 => BasisKind::Sine,
            BasisKind::FractalLegendreG1 | BasisKind::FractalLegendreG2 => BasisKind::Legendre,
            k => k,
        }
    }

    /// Pair label of the transform used by a fractal kind.
    pub fn pair_label(self) -> Option<&'static str> {
        match self {
            BasisKind::FractalSineG1 | BasisKind::FractalLegendreG1 => Some("FG1"),
            BasisKind::FractalSineG2 | BasisKind::FractalLegendreG2 => Some("FG2"),
            _ => None,
        }
    }

    pub fn is_fractal(self) -> bool {
        self.pair_label().is_some()
    }

    pub fn first_index(self) -> usize {
        match self.classical() {
            BasisKind::Legendre => 0,
            _ => 1,
        }
    }

    /// The first `terms` indices.
    pub fn indices(self, terms: usize) -> Vec<usize> {
        let s = self.first_index();
        (s..s + terms).collect()
    }
}

impl fmt::Display for BasisKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.label())
    }
}

impl FromStr for BasisKind {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        BasisKind::ALL
            .into_iter()
            .find(|k| k.label() == s)
            .ok_or_else(|| Error::UnknownLabel(s.to_string()))
    }
}

/// One basis element.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct BasisSpec {
    pub kind: BasisKind,
    pub index: usize,
}

/// Classical element `e_n(x)` on `[0, 1]`.
pub fn classical_element(kind: BasisKind, n: usize, x: f64) -> f64 {
    match kind.classical() {
        BasisKind::Sine => SQRT_2 * (n as f64 * PI * x).sin(),
        BasisKind::Legendre => ((2 * n + 1) as f64).sqrt() * legendre(n, 2.0 * x - 1.0),
        _ => HaarElement::from_index(n).map_or(0.0, |h| h.value(x)),
    }
}

/// A basis family, holding the transform of its fractal variant.
#[derive(Clone, Debug)]
pub struct Basis<T: Scalar> {
    kind: BasisKind,
    pair: Option<TransformPair<T>>,
}

impl<T: Scalar> Basis<T> {
    pub fn new(kind: BasisKind) -> Result<Self> {
        let pair = kind.pair_label().map(catalog::pair::<T>).transpose()?;
        Ok(Self { kind, pair })
    }

    pub fn kind(&self) -> BasisKind {
        self.kind
    }

    /// `F → G` with `F = interval_binary`; fractal elements are `e_n ∘ T_GF`.
    pub fn pair(&self) -> Option<&TransformPair<T>> {
        self.pair.as_ref()
    }

    pub fn check_index(&self, n: usize) -> Result<()> {
        if n < self.kind.first_index() {
            return Err(Error::InvalidIndex(format!("{} index {n}", self.kind)));
        }
        Ok(())
    }

    /// The classical abscissa behind `y`: `T_GF(y)` for fractal kinds.
    pub fn pullback_abscissa(&self, y: Point<T>) -> Result<f64> {
        match &self.pair {
            Some(tp) => Ok(tp.inverse().transform(y)?.x.as_f64()),
            None => Ok(y.x.as_f64()),
        }
    }

    pub fn eval(&self, n: usize, y: Point<T>) -> Result<f64> {
        self.check_index(n)?;
        Ok(classical_element(self.kind, n, self.pullback_abscissa(y)?))
    }

    /// Elements `indices` at `y`, sharing one transform evaluation.
    pub fn eval_many(&self, indices: &[usize], y: Point<T>) -> Result<Vec<f64>> {
        let x = self.pullback_abscissa(y)?;
        Ok(indices.iter().map(|&n| classical_element(self.kind, n, x)).collect())
    }
}

/// The basis element as a function.
pub fn basis_function<T: Scalar>(spec: BasisSpec) -> Result<SampledFunction<T>> {
    let basis = Basis::<T>::new(spec.kind)?;
    basis.check_index(spec.index)?;
    let n = spec.index;
    let (smoothness, breakpoints) = match spec.kind {
        k if k.is_fractal() => (Smoothness::Rough, Vec::new()),
        BasisKind::Haar => {
            let level = HaarElement::from_index(n).map_or(0, |h| h.level() + 1);
            let cells = 1usize << level;
            (
                Smoothness::Piecewise,
                (1..cells).map(|k| k as f64 / cells as f64).collect(),
            )
        }
        _ => (Smoothness::Continuous, Vec::new()),
    };
    Ok(SampledFunction::new(UNIT_INTERVAL, smoothness, move |y| basis.eval(n, y)).with_breakpoints(breakpoints))
}

/// Coefficients `⟨f, b_n⟩` for the first `terms` elements.
///
/// For fractal kinds the integral is moved to the classical side,
/// `⟨f, e_n ∘ T_GF⟩ = ∫ f(T_FG(x)) e_n(x) dx`.
pub fn series_coefficients<T: Scalar>(f: &SampledFunction<T>, basis: &Basis<T>, terms: usize) -> Result<Vec<f64>> {
    if f.domain != UNIT_INTERVAL {
        return Err(Error::DomainMismatch {
            left: f.domain.clone(),
            right: UNIT_INTERVAL.into(),
        });
    }
    let indices = basis.kind.indices(terms);
    let rule = match (&basis.pair, basis.kind, f.smoothness) {
        (Some(_), _, _) | (_, BasisKind::Haar, _) | (_, _, Smoothness::Rough) => {
            Rule::dyadic(ROUGH_LOG2_CELLS, ROUGH_ORDER)
        }
        _ => Rule::composite(0.0, 1.0, &f.breakpoints, SMOOTH_PANELS, DEFAULT_ORDER),
    };
    let values: Vec<f64> = rule
        .nodes
        .par_iter()
        .map(|&x| {
            let p = Point::on_line(T::lit(x));
            match &basis.pair {
                Some(tp) => f.eval(tp.transform(p)?),
                None => f.eval(p),
            }
        })
        .collect::<Result<_>>()?;
    let weighted: Vec<f64> = values.iter().zip(&rule.weights).map(|(v, w)| v * w).collect();
    Ok(indices
        .par_iter()
        .map(|&n| {
            rule.nodes
                .iter()
                .zip(&weighted)
                .map(|(&x, &wv)| wv * classical_element(basis.kind, n, x))
                .sum()
        })
        .collect())
}

/// `∑ c_n b_n(y)` over the first `coeffs.len()` elements.
pub fn partial_sum<T: Scalar>(coeffs: &[f64], basis: &Basis<T>, y: Point<T>) -> Result<f64> {
    let x = basis.pullback_abscissa(y)?;
    let first = basis.kind.first_index();
    Ok(coeffs
        .iter()
        .enumerate()
        .map(|(k, c)| c * classical_element(basis.kind, first + k, x))
        .sum())
}

/// Gram matrix of the listed elements under a Monte Carlo measure.
pub fn gram_matrix_mc<T: Scalar>(basis: &Basis<T>, indices: &[usize], m: &EmpiricalMeasure<T>) -> Result<Vec<Vec<f64>>> {
    let k = indices.len();
    let rows: Vec<Vec<f64>> = m
        .points()
        .par_iter()
        .map(|&y| basis.eval_many(indices, y))
        .collect::<Result<_>>()?;
    let n = rows.len() as f64;
    let mut g = vec![vec![0.0; k]; k];
    for (i, gi) in g.iter_mut().enumerate() {
        for (j, gij) in gi.iter_mut().enumerate() {
            *gij = rows.iter().map(|r| r[i] * r[j]).sum::<f64>() / n;
        }
    }
    Ok(g)
}

/// Midpoints `(k + 1/2)/2^log2` of the dyadic grid.
pub fn midpoint_grid(log2: u32) -> Vec<f64> {
    let n = 1usize << log2;
    (0..n).map(|k| (k as f64 + 0.5) / n as f64).collect()
}

/// Sine coefficient `b_n` of the unnormalized expansion `∑ b_n sin(nπx)`,
/// given the coefficient `c_n` against `√2 sin(nπx)`.
pub fn unnormalized_sine(c: f64) -> f64 {
    SQRT_2 * c
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_abs_diff_eq;

    #[test]
    fn sine_orthonormal_by_quadrature() {
        let e1 = basis_function::<f64>(BasisSpec { kind: BasisKind::Sine, index: 1 }).unwrap();
        let e2 = basis_function::<f64>(BasisSpec { kind: BasisKind::Sine, index: 2 }).unwrap();
        assert_abs_diff_eq!(inner_product(&e1, &e1, Integrator::Lebesgue).unwrap().value, 1.0, epsilon = 1e-10);
        assert_abs_diff_eq!(inner_product(&e1, &e2, Integrator::Lebesgue).unwrap().value, 0.0, epsilon = 1e-10);
        assert_abs_diff_eq!(e1.eval_at(0.5).unwrap(), SQRT_2, epsilon = 1e-15);
    }

    #[test]
    fn legendre_matches_gram_schmidt() {
        // Gram–Schmidt of 1, x, x² on [0,1]: the quadratic is x² − x + 1/6
        let q = |x: f64| x * x - x + 1.0 / 6.0;
        let norm = (1.0f64 / 180.0).sqrt();
        for x in [0.0, 0.2, 0.5, 0.9] {
            assert_abs_diff_eq!(classical_element(BasisKind::Legendre, 2, x), q(x) / norm, epsilon = 1e-12);
        }
    }

    #[test]
    fn index_validation() {
        assert!(basis_function::<f64>(BasisSpec { kind: BasisKind::Sine, index: 0 }).is_err());
        assert!(basis_function::<f64>(BasisSpec { kind: BasisKind::Legendre, index: 0 }).is_ok());
        assert_eq!("fractal_sine_G2".parse::<BasisKind>().unwrap(), BasisKind::FractalSineG2);
        assert!("bogus".parse::<BasisKind>().is_err());
    }

    #[test]
    fn step_coefficients_closed_form() {
        let step = named_function::<f64>("step").unwrap();
        let basis = Basis::new(BasisKind::Sine).unwrap();
        let c = series_coefficients(&step, &basis, 16).unwrap();
        for (k, ck) in c.iter().enumerate() {
            let n = (k + 1) as f64;
            let expect = 2.0 / PI * (1.0 - (n * PI / 2.0).cos()) / n;
            assert_abs_diff_eq!(unnormalized_sine(*ck), expect, epsilon = 1e-12);
        }
    }

    #[test]
    fn one_term_constant_sum() {
        let one = named_function::<f64>("constant").unwrap();
        let basis = Basis::new(BasisKind::Sine).unwrap();
        let c = series_coefficients(&one, &basis, 1).unwrap();
        let s = partial_sum(&c, &basis, Point::on_line(0.5)).unwrap();
        assert_abs_diff_eq!(s, 4.0 / PI, epsilon = 1e-12);
        assert_eq!(partial_sum(&[0.0; 5], &basis, Point::on_line(0.3)).unwrap(), 0.0);
    }

    #[test]
    fn domain_mismatch_is_reported() {
        let f = SampledFunction::<f64>::constant("a", 1.0);
        let g = SampledFunction::<f64>::constant("b", 1.0);
        assert!(matches!(
            inner_product(&f, &g, Integrator::Lebesgue),
            Err(Error::DomainMismatch { .. })
        ));
    }
}
