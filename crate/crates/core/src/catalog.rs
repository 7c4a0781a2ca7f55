//! Built-in systems and transform pairs.
//!
//! | label | maps |
//! |---|---|
//! | `interval_binary` | `x/2`, `x/2 + 1/2` |
//! | `interval_G1` | `-x/2 + 1/2`, `x/2 + 1/2` |
//! | `interval_G2` | `-x/2 + 1/2`, `-x/2 + 1` |
//! | `interval_G3` | `x/2`, `-x/2 + 1` |
//! | `interval_scaled(r)` | `r x`, `(1-r) x + r`, with `p = (r, 1-r)` |
//! | `interval_scaled_swapped(r)` | `r x + 1 - r`, `(1-r) x`, with `p = (r, 1-r)` |
//! | `koch_F` | `1/2 - x/2`, `1 - x/2` |
//! | `koch_G` | two reflections of ratio `1/√3` onto a Koch curve |
//! | `hilbert_F` | `(x + i - 1)/4`, `i = 1..4` |
//! | `hilbert_G` | the four quadrant maps of Hilbert's curve |
//! | `cantor_F` | `x/3`, `x/3 + 2/3` |
//! | `cantor_binary_G` | same maps as `interval_binary` |
//! | `triangle_G(ax,ay,bx,by,cx,cy)` | `ABC ↦ ADB`, `ABC ↦ BDC`, `D` the midpoint of `CA` |
//! | `triangle_lamina(r)` | four sub-triangles of an equilateral triangle, `0 < r ≤ 1/2` |
//! | `triangle_lamina_dual(r)` | the same subdivision at parameter `1 - r` |

use std::sync::Arc;

use crate::code_space::ProbabilityVector;
use crate::error::{Error, Result};
use crate::geometry::{AffineMap, Mat2, Point};
use crate::ifs::ContractiveIfs;
use crate::region::{Region, SelfSimilarSet};
use crate::scalar::Scalar;
use crate::transform::TransformPair;

/// Labels accepted by [`builtin`].
pub const SYSTEM_LABELS: &[&str] = &[
    "interval_binary",
    "interval_G1",
    "interval_G2",
    "interval_G3",
    "interval_scaled",
    "interval_scaled_swapped",
    "koch_F",
    "koch_G",
    "hilbert_F",
    "hilbert_G",
    "cantor_F",
    "cantor_binary_G",
    "triangle_G",
    "triangle_lamina",
    "triangle_lamina_dual",
];

/// Builds a named system. Parametrized families read `params`:
/// `interval_scaled*` and `triangle_lamina*` take `r`, `triangle_G` takes
/// the six vertex coordinates (defaulting to `(0,0), (1,0), (0,1)`).
pub fn builtin<T: Scalar>(label: &str, params: &[f64]) -> Result<ContractiveIfs<T>> {
    let one_param = |lo_open: f64, hi: f64, hi_closed: bool| -> Result<f64> {
        let r = *params
            .first()
            .ok_or_else(|| Error::InvalidParameter(format!("`{label}` needs a parameter r")))?;
        let ok = r > lo_open && (r < hi || (hi_closed && r == hi));
        if !ok {
            let bracket = if hi_closed { ']' } else { ')' };
            return Err(Error::InvalidParameter(format!(
                "`{label}`: r = {r} outside ({lo_open}, {hi}{bracket}"
            )));
        }
        Ok(r)
    };
    match label {
        "interval_binary" => interval_binary(),
        "interval_G1" => interval_g1(),
        "interval_G2" => interval_g2(),
        "interval_G3" => interval_g3(),
        "interval_scaled" => interval_scaled(one_param(0.0, 1.0, false)?),
        "interval_scaled_swapped" => interval_scaled_swapped(one_param(0.0, 1.0, false)?),
        "koch_F" => koch_f(),
        "koch_G" => koch_g(),
        "hilbert_F" => hilbert_f(),
        "hilbert_G" => hilbert_g(),
        "cantor_F" => cantor_f(),
        "cantor_binary_G" => Ok(interval_binary()?.with_label("cantor_binary_G")),
        "triangle_G" => {
            let v = match params.len() {
                0 => [0.0, 0.0, 1.0, 0.0, 0.0, 1.0],
                6 => [params[0], params[1], params[2], params[3], params[4], params[5]],
                n => {
                    return Err(Error::InvalidParameter(format!(
                        "`triangle_G` takes 6 coordinates, got {n}"
                    )))
                }
            };
            triangle_g(
                Point::new(T::lit(v[0]), T::lit(v[1])),
                Point::new(T::lit(v[2]), T::lit(v[3])),
                Point::new(T::lit(v[4]), T::lit(v[5])),
            )
        }
        "triangle_lamina" => triangle_lamina(one_param(0.0, 0.5, true)?),
        "triangle_lamina_dual" => triangle_lamina_dual(one_param(0.0, 0.5, true)?),
        other => Err(Error::UnknownLabel(other.to_string())),
    }
}

/// Parses `name` or `name(a, b, …)` and calls [`builtin`].
pub fn parse_system<T: Scalar>(spec: &str) -> Result<ContractiveIfs<T>> {
    let spec = spec.trim();
    let (name, params) = match spec.split_once('(') {
        None => (spec, Vec::new()),
        Some((name, rest)) => {
            let inner = rest
                .strip_suffix(')')
                .ok_or_else(|| Error::Parse(format!("unbalanced parentheses in `{spec}`")))?;
            let params = inner
                .split(',')
                .map(|t| {
                    t.trim()
                        .parse::<f64>()
                        .map_err(|e| Error::Parse(format!("bad parameter `{t}`: {e}")))
                })
                .collect::<Result<Vec<_>>>()?;
            (name.trim(), params)
        }
    };
    builtin(name, &params)
}

fn line<T: Scalar>(a: f64, b: f64) -> Result<AffineMap<T>> {
    AffineMap::line(T::lit(a), T::lit(b))
}

fn interval_system<T: Scalar>(
    label: &str,
    maps: Vec<AffineMap<T>>,
    p: ProbabilityVector,
) -> Result<ContractiveIfs<T>> {
    ContractiveIfs::new(label, maps, Region::unit_interval(), T::one(), p)
}

pub fn interval_binary<T: Scalar>() -> Result<ContractiveIfs<T>> {
    Ok(interval_system(
        "interval_binary",
        vec![line(0.5, 0.0)?, line(0.5, 0.5)?],
        ProbabilityVector::uniform(2),
    )?
    .with_exact_inverse())
}

pub fn interval_g1<T: Scalar>() -> Result<ContractiveIfs<T>> {
    interval_system(
        "interval_G1",
        vec![line(-0.5, 0.5)?, line(0.5, 0.5)?],
        ProbabilityVector::uniform(2),
    )
}

pub fn interval_g2<T: Scalar>() -> Result<ContractiveIfs<T>> {
    interval_system(
        "interval_G2",
        vec![line(-0.5, 0.5)?, line(-0.5, 1.0)?],
        ProbabilityVector::uniform(2),
    )
}

pub fn interval_g3<T: Scalar>() -> Result<ContractiveIfs<T>> {
    Ok(interval_system(
        "interval_G3",
        vec![line(0.5, 0.0)?, line(-0.5, 1.0)?],
        ProbabilityVector::uniform(2),
    )?
    .with_exact_inverse())
}

pub fn interval_scaled<T: Scalar>(r: f64) -> Result<ContractiveIfs<T>> {
    interval_system(
        &format!("interval_scaled({r})"),
        vec![line(r, 0.0)?, line(1.0 - r, r)?],
        ProbabilityVector::new(vec![r, 1.0 - r])?,
    )
}

pub fn interval_scaled_swapped<T: Scalar>(r: f64) -> Result<ContractiveIfs<T>> {
    interval_system(
        &format!("interval_scaled_swapped({r})"),
        vec![line(r, 1.0 - r)?, line(1.0 - r, 0.0)?],
        ProbabilityVector::new(vec![r, 1.0 - r])?,
    )
}

pub fn koch_f<T: Scalar>() -> Result<ContractiveIfs<T>> {
    interval_system(
        "koch_F",
        vec![line(-0.5, 0.5)?, line(-0.5, 1.0)?],
        ProbabilityVector::uniform(2),
    )
}

/// Endpoints `(∓9/4, -√3/4)` and junction `(0, √3/2)`.
pub fn koch_endpoints<T: Scalar>() -> [Point<T>; 3] {
    let s3 = T::lit(3.0).sqrt();
    let q = T::lit(2.25);
    [
        Point::new(-q, -s3 / T::lit(4.0)),
        Point::new(q, -s3 / T::lit(4.0)),
        Point::new(T::zero(), s3 / T::lit(2.0)),
    ]
}

pub fn koch_g<T: Scalar>() -> Result<ContractiveIfs<T>> {
    let half = T::lit(0.5);
    let k = T::one() / (T::lit(2.0) * T::lit(3.0).sqrt());
    let g1 = AffineMap::plane(Mat2::new(half, k, k, -half), Point::new(-T::one(), T::zero()))?;
    let g2 = AffineMap::plane(Mat2::new(half, -k, -k, -half), Point::new(T::one(), T::zero()))?;
    let maps = vec![g1, g2];
    let hull = Region::Triangle(koch_endpoints());
    let diameter = T::lit(4.5);
    let region = Region::SelfSimilar(Arc::new(SelfSimilarSet::new(maps.clone(), hull, diameter)));
    ContractiveIfs::new("koch_G", maps, region, diameter, ProbabilityVector::uniform(2))
}

pub fn hilbert_f<T: Scalar>() -> Result<ContractiveIfs<T>> {
    let maps = (0..4)
        .map(|i| line(0.25, f64::from(i) / 4.0))
        .collect::<Result<Vec<_>>>()?;
    Ok(interval_system("hilbert_F", maps, ProbabilityVector::uniform(4))?.with_exact_inverse())
}

/// Images `A_i B_i C_i D_i` of the unit square corners `ABCD` under `g_i`.
pub fn hilbert_correspondences<T: Scalar>() -> [[Point<T>; 4]; 4] {
    let p = |x: f64, y: f64| Point::new(T::lit(x), T::lit(y));
    [
        [p(0.0, 0.0), p(0.0, 0.5), p(0.5, 0.5), p(0.5, 0.0)],
        [p(0.0, 0.5), p(0.5, 0.5), p(0.5, 1.0), p(0.0, 1.0)],
        [p(0.5, 0.5), p(1.0, 0.5), p(1.0, 1.0), p(0.5, 1.0)],
        [p(1.0, 0.5), p(1.0, 0.0), p(0.5, 0.0), p(0.5, 0.5)],
    ]
}

pub fn hilbert_g<T: Scalar>() -> Result<ContractiveIfs<T>> {
    let o = T::zero();
    let l = T::one();
    let square = [Point::new(o, o), Point::new(l, o), Point::new(o, l)];
    let maps = hilbert_correspondences::<T>()
        .iter()
        .map(|c| AffineMap::from_correspondence(square, [c[0], c[1], c[3]]))
        .collect::<Result<Vec<_>>>()?;
    ContractiveIfs::new(
        "hilbert_G",
        maps,
        Region::unit_square(),
        T::lit(2.0).sqrt(),
        ProbabilityVector::uniform(4),
    )
}

pub fn cantor_f<T: Scalar>() -> Result<ContractiveIfs<T>> {
    let maps = vec![line(1.0 / 3.0, 0.0)?, line(1.0 / 3.0, 2.0 / 3.0)?];
    let region = Region::SelfSimilar(Arc::new(SelfSimilarSet::new(
        maps.clone(),
        Region::unit_interval(),
        T::one(),
    )));
    ContractiveIfs::new("cantor_F", maps, region, T::one(), ProbabilityVector::uniform(2))
}

pub fn triangle_g<T: Scalar>(a: Point<T>, b: Point<T>, c: Point<T>) -> Result<ContractiveIfs<T>> {
    let d = c.lerp(a, T::lit(0.5));
    let g1 = AffineMap::from_correspondence([a, b, c], [a, d, b])?;
    let g2 = AffineMap::from_correspondence([a, b, c], [b, d, c])?;
    let diameter = a.dist(b).max(b.dist(c)).max(c.dist(a));
    ContractiveIfs::new(
        "triangle_G",
        vec![g1, g2],
        Region::Triangle([a, b, c]),
        diameter,
        ProbabilityVector::uniform(2),
    )
}

/// Equilateral triangle with the unit disk inscribed at the origin.
pub fn lamina_vertices<T: Scalar>() -> [Point<T>; 3] {
    let s3 = T::lit(3.0).sqrt();
    [
        Point::new(-s3, -T::one()),
        Point::new(s3, -T::one()),
        Point::new(T::zero(), T::lit(2.0)),
    ]
}

/// Corner maps `ABC ↦ APR, PBQ, RQC` and the central map `ABC ↦ QPR`, with
/// `P, Q, R` at parameter `s` along `AB, BC, CA`.
fn lamina<T: Scalar>(label: String, s: f64) -> Result<ContractiveIfs<T>> {
    let [a, b, c] = lamina_vertices::<T>();
    let s_t = T::lit(s);
    let p = a.lerp(b, s_t);
    let q = b.lerp(c, s_t);
    let r = c.lerp(a, s_t);
    let src = [a, b, c];
    let maps = vec![
        AffineMap::from_correspondence(src, [a, p, r])?,
        AffineMap::from_correspondence(src, [p, b, q])?,
        AffineMap::from_correspondence(src, [r, q, c])?,
        AffineMap::from_correspondence(src, [q, p, r])?,
    ];
    let corner = s * (1.0 - s);
    let probs = ProbabilityVector::proportional(&[corner, corner, corner, 1.0 - 3.0 * corner])?;
    ContractiveIfs::new(
        label,
        maps,
        Region::Triangle(src),
        a.dist(b),
        probs,
    )
}

pub fn triangle_lamina<T: Scalar>(r: f64) -> Result<ContractiveIfs<T>> {
    lamina(format!("triangle_lamina({r})"), r)
}

pub fn triangle_lamina_dual<T: Scalar>(r: f64) -> Result<ContractiveIfs<T>> {
    lamina(format!("triangle_lamina_dual({r})"), 1.0 - r)
}

/// Labels accepted by [`pair`].
pub const PAIR_LABELS: &[&str] = &[
    "FG1", "FG2", "FG3", "identity", "cantor", "koch", "koch_F", "hilbert", "scaled:<r>", "triangle", "lamina",
];

/// Named transform pairs.
///
/// * `FG1`, `FG2`, `FG3`: `interval_binary` to `interval_G*`
/// * `identity`: `interval_binary` to itself
/// * `cantor`: `cantor_F` to `cantor_binary_G` (the Cantor function)
/// * `koch`: `interval_binary` to `koch_G`, a homeomorphism onto the curve
/// * `koch_F`: `koch_F` to `koch_G`, continuous only off the dyadic rationals
/// * `hilbert`: `hilbert_F` to `hilbert_G` (Hilbert's curve)
/// * `scaled:r`: `interval_scaled(r)` to `interval_scaled_swapped(r)`
/// * `triangle`: `interval_binary` to `triangle_G` on the unit right triangle
/// * `lamina`, `lamina:r`: `triangle_lamina(r)` to `triangle_lamina_dual(r)`, `r = 0.3` by default
pub fn pair<T: Scalar>(label: &str) -> Result<TransformPair<T>> {
    let label = label.trim();
    let param = |s: &str| -> Result<f64> {
        s.parse::<f64>()
            .map_err(|e| Error::Parse(format!("bad pair parameter `{s}`: {e}")))
    };
    let (f, g, homeo) = match label {
        "FG1" => (interval_binary()?, interval_g1()?, false),
        "FG2" => (interval_binary()?, interval_g2()?, false),
        "FG3" => (interval_binary()?, interval_g3()?, false),
        "identity" => (interval_binary()?, interval_binary()?, true),
        "cantor" => (cantor_f()?, builtin("cantor_binary_G", &[])?, false),
        "koch" => (interval_binary()?, koch_g()?, true),
        "koch_F" => (koch_f()?, koch_g()?, false),
        "hilbert" => (hilbert_f()?, hilbert_g()?, false),
        "triangle" => (interval_binary()?, builtin("triangle_G", &[])?, false),
        "lamina" => (triangle_lamina(0.3)?, triangle_lamina_dual(0.3)?, true),
        other => {
            if let Some(r) = other.strip_prefix("scaled:") {
                let r = param(r)?;
                (builtin("interval_scaled", &[r])?, builtin("interval_scaled_swapped", &[r])?, false)
            } else if let Some(r) = other.strip_prefix("lamina:") {
                let r = param(r)?;
                (
                    builtin("triangle_lamina", &[r])?,
                    builtin("triangle_lamina_dual", &[r])?,
                    true,
                )
            } else {
                return Err(Error::UnknownLabel(other.to_string()));
            }
        }
    };
    Ok(TransformPair::new(f, g)?.with_homeomorphism(homeo))
}
