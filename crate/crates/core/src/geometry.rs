//! Points in the line or the plane, and affine maps between them.
//!
//! One-dimensional systems use the `x` coordinate only; `y` is kept at zero.

use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use crate::error::{Error, Result};
use crate::scalar::Scalar;

#[derive(Clone, Copy, Debug, Default, PartialEq)]
pub struct Point<T> {
    pub x: T,
    pub y: T,
}

impl<T: Scalar> Point<T> {
    #[inline]
    pub fn new(x: T, y: T) -> Self {
        Self { x, y }
    }

    /// A point on the real line.
    #[inline]
    pub fn on_line(x: T) -> Self {
        Self { x, y: T::zero() }
    }

    #[inline]
    pub fn norm(self) -> T {
        self.x.hypot(self.y)
    }

    #[inline]
    pub fn dist(self, other: Self) -> T {
        (self - other).norm()
    }

    #[inline]
    pub fn dot(self, other: Self) -> T {
        self.x * other.x + self.y * other.y
    }

    #[inline]
    pub fn is_finite(self) -> bool {
        self.x.is_finite() && self.y.is_finite()
    }

    pub fn lerp(self, other: Self, t: T) -> Self {
        self + (other - self) * t
    }

    pub fn cast<U: Scalar>(self) -> Point<U> {
        Point::new(U::lit(self.x.as_f64()), U::lit(self.y.as_f64()))
    }
}

impl<T: Scalar> fmt::Display for Point<T> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({}, {})", self.x, self.y)
    }
}

impl<T: Scalar> Add for Point<T> {
    type Output = Self;
    #[inline]
    fn add(self, o: Self) -> Self {
        Self::new(self.x + o.x, self.y + o.y)
    }
}

impl<T: Scalar> Sub for Point<T> {
    type Output = Self;
    #[inline]
    fn sub(self, o: Self) -> Self {
        Self::new(self.x - o.x, self.y - o.y)
    }
}

impl<T: Scalar> Mul<T> for Point<T> {
    type Output = Self;
    #[inline]
    fn mul(self, s: T) -> Self {
        Self::new(self.x * s, self.y * s)
    }
}

impl<T: Scalar> Neg for Point<T> {
    type Output = Self;
    #[inline]
    fn neg(self) -> Self {
        Self::new(-self.x, -self.y)
    }
}

/// 2×2 matrix stored row-major.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Mat2<T> {
    pub m: [[T; 2]; 2],
}

impl<T: Scalar> Mat2<T> {
    pub fn new(a: T, b: T, c: T, d: T) -> Self {
        Self { m: [[a, b], [c, d]] }
    }

    pub fn identity() -> Self {
        Self::new(T::one(), T::zero(), T::zero(), T::one())
    }

    #[inline]
    pub fn apply(&self, p: Point<T>) -> Point<T> {
        Point::new(
            self.m[0][0] * p.x + self.m[0][1] * p.y,
            self.m[1][0] * p.x + self.m[1][1] * p.y,
        )
    }

    pub fn det(&self) -> T {
        self.m[0][0] * self.m[1][1] - self.m[0][1] * self.m[1][0]
    }

    pub fn inverse(&self) -> Option<Self> {
        let det = self.det();
        if det == T::zero() || !det.is_finite() {
            return None;
        }
        Some(Self::new(
            self.m[1][1] / det,
            -self.m[0][1] / det,
            -self.m[1][0] / det,
            self.m[0][0] / det,
        ))
    }

    pub fn mul(&self, o: &Self) -> Self {
        let a = &self.m;
        let b = &o.m;
        Self::new(
            a[0][0] * b[0][0] + a[0][1] * b[1][0],
            a[0][0] * b[0][1] + a[0][1] * b[1][1],
            a[1][0] * b[0][0] + a[1][1] * b[1][0],
            a[1][0] * b[0][1] + a[1][1] * b[1][1],
        )
    }

    /// Spectral (Euclidean operator) norm.
    pub fn operator_norm(&self) -> T {
        let [[a, b], [c, d]] = self.m;
        // largest singular value of [[a,b],[c,d]]
        let s1 = (a + d).hypot(c - b);
        let s2 = (a - d).hypot(c + b);
        (s1 + s2) / T::lit(2.0)
    }
}

/// Invertible affine map `p ↦ L p + t` on the line (`dim == 1`) or the plane.
#[derive(Clone, Debug, PartialEq)]
pub struct AffineMap<T> {
    linear: Mat2<T>,
    offset: Point<T>,
    inv_linear: Mat2<T>,
    inv_offset: Point<T>,
    dim: usize,
}

impl<T: Scalar> AffineMap<T> {
    /// `x ↦ a x + b` on the real line.
    pub fn line(a: T, b: T) -> Result<Self> {
        if a == T::zero() || !a.is_finite() || !b.is_finite() {
            return Err(Error::InvalidParameter(format!("degenerate 1-D map {a}x+{b}")));
        }
        let linear = Mat2::new(a, T::zero(), T::zero(), T::zero());
        let inv_linear = Mat2::new(T::one() / a, T::zero(), T::zero(), T::zero());
        Ok(Self {
            linear,
            offset: Point::on_line(b),
            inv_linear,
            inv_offset: Point::on_line(-b / a),
            dim: 1,
        })
    }

    pub fn plane(linear: Mat2<T>, offset: Point<T>) -> Result<Self> {
        let inv_linear = linear
            .inverse()
            .ok_or_else(|| Error::InvalidParameter("singular linear part".into()))?;
        let inv_offset = -inv_linear.apply(offset);
        Ok(Self {
            linear,
            offset,
            inv_linear,
            inv_offset,
            dim: 2,
        })
    }

    /// The unique affine map sending `src[k]` to `dst[k]` for three
    /// non-collinear source points.
    pub fn from_correspondence(src: [Point<T>; 3], dst: [Point<T>; 3]) -> Result<Self> {
        let s = Mat2::new(
            src[1].x - src[0].x,
            src[2].x - src[0].x,
            src[1].y - src[0].y,
            src[2].y - src[0].y,
        );
        let d = Mat2::new(
            dst[1].x - dst[0].x,
            dst[2].x - dst[0].x,
            dst[1].y - dst[0].y,
            dst[2].y - dst[0].y,
        );
        let s_inv = s
            .inverse()
            .ok_or_else(|| Error::InvalidParameter("collinear source points".into()))?;
        let linear = d.mul(&s_inv);
        let offset = dst[0] - linear.apply(src[0]);
        Self::plane(linear, offset)
    }

    #[inline]
    pub fn dim(&self) -> usize {
        self.dim
    }

    #[inline]
    pub fn apply(&self, p: Point<T>) -> Point<T> {
        self.linear.apply(p) + self.offset
    }

    /// Inverse on the image; defined on the whole space because the map is affine.
    #[inline]
    pub fn apply_inverse(&self, p: Point<T>) -> Point<T> {
        self.inv_linear.apply(p) + self.inv_offset
    }

    pub fn linear(&self) -> &Mat2<T> {
        &self.linear
    }

    pub fn offset(&self) -> Point<T> {
        self.offset
    }

    pub fn inverse_offset(&self) -> Point<T> {
        self.inv_offset
    }

    /// Lipschitz constant in the Euclidean metric.
    pub fn lipschitz(&self) -> T {
        if self.dim == 1 {
            self.linear.m[0][0].abs()
        } else {
            self.linear.operator_norm()
        }
    }

    /// Lipschitz constant of the inverse.
    pub fn inverse_lipschitz(&self) -> T {
        if self.dim == 1 {
            self.inv_linear.m[0][0].abs()
        } else {
            self.inv_linear.operator_norm()
        }
    }

    /// Unique fixed point of the map (exists since the map is a contraction).
    pub fn fixed_point(&self) -> Point<T> {
        if self.dim == 1 {
            let a = self.linear.m[0][0];
            return Point::on_line(self.offset.x / (T::one() - a));
        }
        let i_minus_l = Mat2::new(
            T::one() - self.linear.m[0][0],
            -self.linear.m[0][1],
            -self.linear.m[1][0],
            T::one() - self.linear.m[1][1],
        );
        match i_minus_l.inverse() {
            Some(inv) => inv.apply(self.offset),
            None => Point::new(T::nan(), T::nan()),
        }
    }

    pub fn det(&self) -> T {
        if self.dim == 1 {
            self.linear.m[0][0]
        } else {
            self.linear.det()
        }
    }

    pub fn compose_linear(&self, other: &Self) -> Mat2<T> {
        self.linear.mul(&other.linear)
    }
}
