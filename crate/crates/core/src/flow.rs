//! Flows `f_t` and their fractal conjugates `g_t = T_FG ∘ f_t ∘ T_GF`, acting
//! on points, functions and measures.

use std::fmt;
use std::sync::Arc;

use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::geometry::Point;
use crate::hilbert_space::{domain_label, SampledFunction, Smoothness, UNIT_INTERVAL};
use crate::ifs::EmpiricalMeasure;
use crate::raster::{quantize, Raster};
use crate::scalar::Scalar;
use crate::transform::TransformPair;

/// Time unit of the strip figure: `t = 1` translates by `1/16`.
pub const STRIP_SPEED: f64 = 1.0 / 16.0;

/// Times of the strip figure.
pub const STRIP_TIMES: [f64; 9] = [0.0, 1.0, 2.0, 3.0, 4.0, 5.0, 6.0, 7.0, 100.0];

type Apply<T> = Arc<dyn Fn(Point<T>, f64) -> Result<Point<T>> + Send + Sync>;

/// A one-parameter family of maps `x ↦ f_t(x)` on a labelled domain.
#[derive(Clone)]
pub struct Flow<T> {
    apply: Apply<T>,
    domain: String,
}

impl<T: Scalar> fmt::Debug for Flow<T> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("Flow").field("domain", &self.domain).finish()
    }
}

impl<T: Scalar> Flow<T> {
    pub fn new(
        domain: impl Into<String>,
        apply: impl Fn(Point<T>, f64) -> Result<Point<T>> + Send + Sync + 'static,
    ) -> Self {
        Self {
            apply: Arc::new(apply),
            domain: domain.into(),
        }
    }

    #[inline]
    pub fn apply(&self, x: Point<T>, t: f64) -> Result<Point<T>> {
        (self.apply)(x, t)
    }

    pub fn apply_many(&self, xs: &[Point<T>], t: f64) -> Result<Vec<Point<T>>> {
        xs.par_iter()
            .enumerate()
            .map(|(index, &x)| {
                self.apply(x, t).map_err(|e| Error::SampleFailure {
                    index,
                    source: Box::new(e),
                })
            })
            .collect()
    }

    pub fn domain(&self) -> &str {
        &self.domain
    }

    /// The same maps on another domain containing or contained in this one.
    pub fn on(mut self, domain: impl Into<String>) -> Self {
        self.domain = domain.into();
        self
    }
}

/// `x ↦ (x + t) mod 1` on `[0, 1)`.
pub fn translation_flow<T: Scalar>() -> Flow<T> {
    translation_flow_with_speed(1.0)
}

/// `x ↦ (x + speed·t) mod 1`.
pub fn translation_flow_with_speed<T: Scalar>(speed: f64) -> Flow<T> {
    Flow::new(UNIT_INTERVAL, move |p: Point<T>, t| {
        let shift = (speed * t).rem_euclid(1.0);
        let mut x = p.x.as_f64() + shift;
        if x >= 1.0 {
            x -= 1.0;
        }
        // rem_euclid can round up to exactly 1
        Ok(Point::on_line(T::lit(if x >= 1.0 { 0.0 } else { x })))
    })
}

/// Formula used by [`rotation_flow`].
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub enum RotationMode {
    /// `(a cos t − b sin t, a sin t + b cos t)`.
    #[default]
    Standard,
    /// `(a cos t + b sin t, a sin t − b cos t)`, a reflection for every `t`.
    Verbatim,
}

/// Rotation of the closed unit disk, the identity outside it.
pub fn rotation_flow<T: Scalar>(mode: RotationMode) -> Flow<T> {
    Flow::new("unit_disk", move |p: Point<T>, t| {
        if p.norm() > T::one() {
            return Ok(p);
        }
        let (s, c) = T::lit(t).sin_cos();
        Ok(match mode {
            RotationMode::Standard => Point::new(p.x * c - p.y * s, p.x * s + p.y * c),
            RotationMode::Verbatim => Point::new(p.x * c + p.y * s, p.x * s - p.y * c),
        })
    })
}

/// Jacobian determinant of the rotation formula inside the disk.
pub fn rotation_determinant(mode: RotationMode, t: f64) -> f64 {
    let (s, c) = t.sin_cos();
    match mode {
        RotationMode::Standard => c * c + s * s,
        RotationMode::Verbatim => c * (-c) - s * s,
    }
}

/// `g_t = T_FG ∘ f_t ∘ T_GF` on the target of `tp`.
pub fn conjugate_flow<T: Scalar>(tp: &TransformPair<T>, flow: &Flow<T>) -> Result<Flow<T>> {
    let source = domain_label(tp.source());
    if flow.domain() != source {
        return Err(Error::DomainMismatch {
            left: flow.domain().to_string(),
            right: source,
        });
    }
    let forward = tp.clone();
    let back = tp.inverse();
    let f = flow.clone();
    Ok(Flow::new(domain_label(tp.target()), move |y, t| {
        forward.transform(f.apply(back.transform(y)?, t)?)
    }))
}

/// `f_t^# φ = φ ∘ f_{−t}`.
pub fn transport_function<T: Scalar>(flow: &Flow<T>, f: &SampledFunction<T>, t: f64) -> Result<SampledFunction<T>> {
    if flow.domain() != f.domain() {
        return Err(Error::DomainMismatch {
            left: flow.domain().to_string(),
            right: f.domain().to_string(),
        });
    }
    if t == 0.0 {
        return Ok(f.clone());
    }
    let flow = flow.clone();
    let g = f.clone();
    Ok(SampledFunction::new(f.domain().to_string(), Smoothness::Rough, move |x| {
        g.eval(flow.apply(x, -t)?)
    }))
}

/// Pushes every sample through `f_t`.
pub fn transport_measure<T: Scalar>(flow: &Flow<T>, m: &EmpiricalMeasure<T>, t: f64) -> Result<EmpiricalMeasure<T>> {
    let points = flow.apply_many(m.points(), t)?;
    Ok(m.with_points(points, m.dim(), m.system_label().to_string()))
}

/// One grayscale row per time.
#[derive(Clone, Debug, PartialEq)]
pub struct StripFrames {
    pub times: Vec<f64>,
    pub resolution: usize,
    /// Transported function values at the pixel centres, one row per time.
    pub values: Vec<Vec<f64>>,
    /// Shared gray scale `[lo, hi]`.
    pub range: (f64, f64),
}

impl StripFrames {
    /// Quantized row `i`.
    pub fn row(&self, i: usize) -> Vec<u8> {
        self.values[i]
            .iter()
            .map(|&v| quantize(v, self.range.0, self.range.1))
            .collect()
    }

    /// Rows stacked `strip_height` pixels tall, with a white gap of `gap`
    /// pixels before the rows listed in `gap_before`.
    pub fn to_raster(&self, strip_height: usize, gap: usize, gap_before: &[usize]) -> Result<Raster> {
        let mut pixels = Vec::new();
        let mut height = 0;
        for i in 0..self.values.len() {
            if gap_before.contains(&i) {
                pixels.extend(std::iter::repeat_n(255u8, gap * self.resolution));
                height += gap;
            }
            let row = self.row(i);
            for _ in 0..strip_height {
                pixels.extend_from_slice(&row);
            }
            height += strip_height;
        }
        Raster::gray(self.resolution, height, pixels)
    }
}

/// Rasterizes `f_t^# f0` at `(k + 1/2)/resolution` for each time.
pub fn flow_strip_frames<T: Scalar>(
    flow: &Flow<T>,
    f0: &SampledFunction<T>,
    times: &[f64],
    resolution: usize,
) -> Result<StripFrames> {
    if resolution == 0 {
        return Err(Error::InvalidParameter("zero resolution".into()));
    }
    let centres: Vec<Point<T>> = (0..resolution)
        .map(|k| Point::on_line(T::lit((k as f64 + 0.5) / resolution as f64)))
        .collect();
    let values = times
        .par_iter()
        .map(|&t| transport_function(flow, f0, t)?.eval_many(&centres))
        .collect::<Result<Vec<_>>>()?;
    let lo = values.iter().flatten().copied().fold(f64::INFINITY, f64::min);
    let hi = values.iter().flatten().copied().fold(f64::NEG_INFINITY, f64::max);
    Ok(StripFrames {
        times: times.to_vec(),
        resolution,
        values,
        range: (lo, hi),
    })
}

/// Strips of the conjugated flow `T_FG ∘ f_t ∘ T_GF` applied to `U_FG f0`.
pub fn conjugated_strip_frames<T: Scalar>(
    tp: &TransformPair<T>,
    flow: &Flow<T>,
    f0: &SampledFunction<T>,
    times: &[f64],
    resolution: usize,
) -> Result<StripFrames> {
    let g = conjugate_flow(tp, flow)?;
    let u = crate::hilbert_space::unitary_pullback(tp, f0)?;
    flow_strip_frames(&g, &u, times, resolution)
}
