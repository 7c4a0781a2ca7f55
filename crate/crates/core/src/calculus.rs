//! Fractal differences and derivatives, `D_G^k = U_FG ∘ D_F^k ∘ U_GF`.

use std::cmp::Ordering;
use std::sync::Arc;

use crate::catalog;
use crate::error::{Error, Result};
use crate::geometry::Point;
use crate::hilbert_space::{domain_label, SampledFunction, Smoothness, UNIT_INTERVAL};
use crate::ifs::ContractiveIfs;
use crate::oracles::cantor_function;
use crate::scalar::Scalar;
use crate::transform::TransformPair;

/// `log2(1/h)` of the first-order difference step.
pub const STEP_LOG2: u32 = 20;

/// Ternary digits read by the Cantor interval measure.
const CANTOR_DIGITS: usize = 48;

type Compare<T> = Arc<dyn Fn(Point<T>, Point<T>) -> Result<Ordering> + Send + Sync>;
type IntervalMeasure<T> = Arc<dyn Fn(Point<T>, Point<T>) -> Result<f64> + Send + Sync>;

/// An attractor with a linear order and the measure of its order intervals.
#[derive(Clone)]
pub struct OrderedAttractor<T: Scalar> {
    ifs: Arc<ContractiveIfs<T>>,
    compare: Compare<T>,
    measure: IntervalMeasure<T>,
    tol: T,
}

impl<T: Scalar> OrderedAttractor<T> {
    pub fn new(
        ifs: ContractiveIfs<T>,
        compare: impl Fn(Point<T>, Point<T>) -> Result<Ordering> + Send + Sync + 'static,
        measure: impl Fn(Point<T>, Point<T>) -> Result<f64> + Send + Sync + 'static,
    ) -> Self {
        let tol = ifs.diameter() * T::lit(1e-9);
        Self {
            ifs: Arc::new(ifs),
            compare: Arc::new(compare),
            measure: Arc::new(measure),
            tol,
        }
    }

    /// `[0, 1]` with Lebesgue measure.
    pub fn unit_interval() -> Result<Self> {
        Ok(Self::new(
            catalog::interval_binary()?,
            |a, b| Ok(a.x.as_f64().total_cmp(&b.x.as_f64())),
            |a, b| Ok((b.x - a.x).as_f64()),
        ))
    }

    /// The middle-thirds Cantor set with its uniform measure.
    pub fn cantor() -> Result<Self> {
        Ok(Self::new(
            catalog::cantor_f()?,
            |a, b| Ok(a.x.as_f64().total_cmp(&b.x.as_f64())),
            |a, b| {
                Ok(cantor_function(b.x.as_f64(), CANTOR_DIGITS) - cantor_function(a.x.as_f64(), CANTOR_DIGITS))
            },
        ))
    }

    /// The target of a homeomorphic pair from `[0, 1]`, ordered and
    /// measured through `T_GF`.
    pub fn from_pair(tp: &TransformPair<T>) -> Result<Self> {
        if !tp.is_homeomorphism() {
            return Err(Error::InvalidParameter(format!("pair {} is not a homeomorphism", tp.label())));
        }
        check_interval_source(tp)?;
        let back = tp.inverse();
        let back2 = back.clone();
        Ok(Self::new(
            tp.target().clone(),
            move |a, b| Ok(back.transform(a)?.x.as_f64().total_cmp(&back.transform(b)?.x.as_f64())),
            move |a, b| Ok((back2.transform(b)?.x - back2.transform(a)?.x).as_f64()),
        ))
    }

    pub fn with_tol(mut self, tol: T) -> Self {
        self.tol = tol;
        self
    }

    pub fn ifs(&self) -> &ContractiveIfs<T> {
        &self.ifs
    }

    pub fn compare(&self, a: Point<T>, b: Point<T>) -> Result<Ordering> {
        (self.compare)(a, b)
    }

    /// `μ([a, b])` for `a ⪯ b`.
    pub fn interval_measure(&self, a: Point<T>, b: Point<T>) -> Result<f64> {
        (self.measure)(a, b)
    }

    fn check_member(&self, p: Point<T>) -> Result<()> {
        if self.ifs.attractor_member(p, self.tol) {
            Ok(())
        } else {
            Err(Error::PointNotInAttractor {
                label: self.ifs.label().to_string(),
                step: 0,
                point: p.to_string(),
            })
        }
    }
}

/// `y₁ − y₂`: `μ([y₂, y₁])` if `y₁ ⪰ y₂`, otherwise `−μ([y₁, y₂])`.
pub fn fractal_difference<T: Scalar>(oa: &OrderedAttractor<T>, y1: Point<T>, y2: Point<T>) -> Result<f64> {
    oa.check_member(y1)?;
    oa.check_member(y2)?;
    match oa.compare(y1, y2)? {
        Ordering::Equal => Ok(0.0),
        Ordering::Greater => oa.interval_measure(y2, y1),
        Ordering::Less => Ok(-oa.interval_measure(y1, y2)?),
    }
}

/// `(g(y) − g(y₀)) / (y − y₀)` with the fractal difference below.
pub fn difference_quotient<T: Scalar>(
    oa: &OrderedAttractor<T>,
    g: &SampledFunction<T>,
    y: Point<T>,
    y0: Point<T>,
) -> Result<f64> {
    let d = fractal_difference(oa, y, y0)?;
    Ok((g.eval(y)? - g.eval(y0)?) / d)
}

fn check_interval_source<T: Scalar>(tp: &TransformPair<T>) -> Result<()> {
    let source = domain_label(tp.source());
    if source != UNIT_INTERVAL {
        return Err(Error::DomainMismatch {
            left: source,
            right: UNIT_INTERVAL.into(),
        });
    }
    Ok(())
}

/// `x ↦ T(x)` as a function on the source, first coordinate.
pub fn transform_coordinate<T: Scalar>(tp: &TransformPair<T>) -> SampledFunction<T> {
    let tp = tp.clone();
    let smoothness = if tp.is_homeomorphism() {
        Smoothness::Continuous
    } else {
        Smoothness::Rough
    };
    SampledFunction::new(domain_label(tp.source()), smoothness, move |x| Ok(tp.transform(x)?.x.as_f64()))
}

/// Difference step for order `k`: `2^{-⌈STEP_LOG2 / k⌉}`.
pub fn default_step(k: usize) -> f64 {
    let e = STEP_LOG2.div_ceil(k.max(1) as u32);
    0.5f64.powi(e as i32)
}

/// `k`-th central difference `δ_h^k f(x) / h^k`, with the stencil pushed
/// inside `[0, 1]` near the ends.
pub fn central_difference(f: impl Fn(f64) -> Result<f64>, x: f64, k: usize, h: f64) -> Result<f64> {
    if k == 0 {
        return f(x);
    }
    let half = 0.5 * k as f64 * h;
    let c = x.clamp(half, 1.0 - half);
    let mut binom = 1.0;
    let mut acc = 0.0;
    for j in 0..=k {
        let v = f(c + (0.5 * k as f64 - j as f64) * h)?;
        if !v.is_finite() {
            return Err(Error::NonFinitePullback(c));
        }
        let sign = if j % 2 == 0 { 1.0 } else { -1.0 };
        acc += sign * binom * v;
        binom = binom * (k - j) as f64 / (j + 1) as f64;
    }
    Ok(acc / h.powi(k as i32))
}

/// `D_G^k g` with the step of [`default_step`].
pub fn fractal_derivative<T: Scalar>(tp: &TransformPair<T>, g: &SampledFunction<T>, k: usize) -> Result<SampledFunction<T>> {
    fractal_derivative_with_step(tp, g, k, default_step(k))
}

/// `D_G^k g (y) = (D^k (g ∘ T_FG))(T_GF(y))`, by central differences of step `h`.
pub fn fractal_derivative_with_step<T: Scalar>(
    tp: &TransformPair<T>,
    g: &SampledFunction<T>,
    k: usize,
    h: f64,
) -> Result<SampledFunction<T>> {
    check_interval_source(tp)?;
    let target = domain_label(tp.target());
    if g.domain() != target {
        return Err(Error::DomainMismatch {
            left: g.domain().to_string(),
            right: target,
        });
    }
    let forward = tp.clone();
    let back = tp.inverse();
    let g = g.clone();
    Ok(SampledFunction::new(target, Smoothness::Rough, move |y| {
        let x = back.transform(y)?.x.as_f64();
        let pulled = |u: f64| g.eval(forward.transform(Point::on_line(T::lit(u)))?);
        central_difference(pulled, x, k, h)
    }))
}

/// `y ↦ exp(T_GF(y))`, the solution of `D_G g = g`, `g(T_FG(0)) = 1`.
pub fn transformed_ode_solution<T: Scalar>(tp: &TransformPair<T>) -> Result<SampledFunction<T>> {
    check_interval_source(tp)?;
    Ok(transform_coordinate(&tp.inverse()).map(f64::exp))
}
