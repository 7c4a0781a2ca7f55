//! Closed sets with tolerance-fattened membership tests.

use std::fmt;
use std::sync::Arc;

use crate::geometry::{AffineMap, Point};
use crate::scalar::Scalar;

/// User-supplied membership predicate `(point, tol) -> bool`.
pub type MembershipFn<T> = Arc<dyn Fn(Point<T>, T) -> bool + Send + Sync>;

/// A closed set `S` with the test `dist(p, S) ≤ tol` (or a conservative
/// variant of it for polygons).
#[derive(Clone)]
pub enum Region<T> {
    Interval { lo: T, hi: T },
    Rect { min: Point<T>, max: Point<T> },
    Triangle([Point<T>; 3]),
    /// Attractor of `maps`, contained in `hull`.
    SelfSimilar(Arc<SelfSimilarSet<T>>),
    Custom(MembershipFn<T>),
}

impl<T: Scalar> fmt::Debug for Region<T> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Region::Interval { lo, hi } => write!(f, "Interval[{lo}, {hi}]"),
            Region::Rect { min, max } => write!(f, "Rect[{min}, {max}]"),
            Region::Triangle(v) => write!(f, "Triangle[{}, {}, {}]", v[0], v[1], v[2]),
            Region::SelfSimilar(s) => write!(f, "SelfSimilar({} maps, hull {:?})", s.maps.len(), s.hull),
            Region::Custom(_) => f.write_str("Custom"),
        }
    }
}

impl<T: Scalar> Region<T> {
    pub fn unit_interval() -> Self {
        Region::Interval {
            lo: T::zero(),
            hi: T::one(),
        }
    }

    pub fn unit_square() -> Self {
        Region::Rect {
            min: Point::new(T::zero(), T::zero()),
            max: Point::new(T::one(), T::one()),
        }
    }

    pub fn contains(&self, p: Point<T>, tol: T) -> bool {
        if !p.is_finite() {
            return false;
        }
        match self {
            Region::Interval { lo, hi } => p.x >= *lo - tol && p.x <= *hi + tol,
            Region::Rect { min, max } => {
                p.x >= min.x - tol && p.x <= max.x + tol && p.y >= min.y - tol && p.y <= max.y + tol
            }
            Region::Triangle(v) => triangle_contains(v, p, tol),
            Region::SelfSimilar(s) => s.contains(p, tol),
            Region::Custom(f) => f(p, tol),
        }
    }
}

/// Half-plane test against each edge, inward normal, slack `tol`.
pub fn triangle_contains<T: Scalar>(v: &[Point<T>; 3], p: Point<T>, tol: T) -> bool {
    let orient = cross(v[1] - v[0], v[2] - v[0]).signum();
    (0..3).all(|k| {
        let a = v[k];
        let b = v[(k + 1) % 3];
        let edge = b - a;
        let len = edge.norm();
        orient * cross(edge, p - a) / len >= -tol
    })
}

/// Barycentric coordinates of `p` with respect to the triangle `v`.
pub fn barycentric<T: Scalar>(v: &[Point<T>; 3], p: Point<T>) -> [T; 3] {
    let area = cross(v[1] - v[0], v[2] - v[0]);
    let l1 = cross(v[2] - v[1], p - v[1]) / area;
    let l2 = cross(v[0] - v[2], p - v[2]) / area;
    [l1, l2, T::one() - l1 - l2]
}

#[inline]
pub(crate) fn cross<T: Scalar>(a: Point<T>, b: Point<T>) -> T {
    a.x * b.y - a.y * b.x
}

/// Attractor of a set of affine contractions, tested by descent through the
/// inverse maps until the fattening swallows the hull.
pub struct SelfSimilarSet<T> {
    maps: Vec<AffineMap<T>>,
    hull: Region<T>,
    diameter: T,
}

impl<T: Scalar> SelfSimilarSet<T> {
    const MAX_DEPTH: usize = 256;

    pub fn new(maps: Vec<AffineMap<T>>, hull: Region<T>, diameter: T) -> Self {
        Self { maps, hull, diameter }
    }

    pub fn contains(&self, p: Point<T>, tol: T) -> bool {
        let floor = T::lit(8.0) * T::epsilon() * self.diameter;
        self.descend(p, tol.max(floor), 0)
    }

    fn descend(&self, p: Point<T>, tol: T, depth: usize) -> bool {
        if !self.hull.contains(p, tol) {
            return false;
        }
        if tol >= self.diameter || depth >= Self::MAX_DEPTH {
            return true;
        }
        self.maps
            .iter()
            .any(|m| self.descend(m.apply_inverse(p), tol * m.inverse_lipschitz(), depth + 1))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn triangle_membership_either_orientation() {
        let cw: [Point<f64>; 3] = [Point::new(0.0, 0.0), Point::new(0.0, 1.0), Point::new(1.0, 0.0)];
        let ccw = [cw[0], cw[2], cw[1]];
        for v in [cw, ccw] {
            assert!(triangle_contains(&v, Point::new(0.25, 0.25), 0.0));
            assert!(triangle_contains(&v, Point::new(0.5, 0.5), 1e-15));
            assert!(!triangle_contains(&v, Point::new(0.6, 0.6), 1e-3));
            assert!(triangle_contains(&v, Point::new(-1e-4, 0.5), 2e-4));
        }
        let b = barycentric(&cw, Point::new(0.0, 0.0));
        assert!((b[0] - 1.0).abs() < 1e-15 && b[1].abs() < 1e-15);
    }

    #[test]
    fn cantor_descent() {
        let maps = vec![
            AffineMap::line(1.0 / 3.0, 0.0).unwrap(),
            AffineMap::line(1.0 / 3.0, 2.0 / 3.0).unwrap(),
        ];
        let c = SelfSimilarSet::new(maps, Region::unit_interval(), 1.0);
        assert!(c.contains(Point::on_line(0.0), 0.0));
        assert!(c.contains(Point::on_line(2.0 / 3.0), 0.0));
        assert!(c.contains(Point::on_line(0.25), 0.0));
        assert!(!c.contains(Point::on_line(0.5), 1e-9));
        assert!(!c.contains(Point::on_line(0.4), 1e-9));
        assert!(c.contains(Point::on_line(0.5), 0.2));
    }
}
