//! Closed-form reference values, independent of the address machinery.

use crate::error::{Error, Result};

/// First `n` binary digits of `x ∈ [0, 1]`; `x = 1` gives all ones.
pub fn binary_digits(x: f64, n: usize) -> Vec<u8> {
    if x >= 1.0 {
        return vec![1; n];
    }
    let mut y = x.max(0.0);
    (0..n)
        .map(|_| {
            y *= 2.0;
            if y >= 1.0 {
                y -= 1.0;
                1
            } else {
                0
            }
        })
        .collect()
}

/// Partial sum `∑_{n ≤ terms} (-1)^{n-1}(d_n + 1)/2^n` of the series for the
/// transform onto `interval_G2`; error at most `2^{1-terms}`.
pub fn tfg2_series_oracle(x: f64, terms: usize) -> f64 {
    binary_digits(x, terms)
        .iter()
        .enumerate()
        .map(|(k, &d)| {
            let sign = if k % 2 == 0 { 1.0 } else { -1.0 };
            sign * f64::from(d + 1) * 0.5f64.powi(k as i32 + 1)
        })
        .sum()
}

/// Binary value of a Cantor-set point given by ternary digits in `{0, 2}`,
/// read through `0 ↦ 0`, `2 ↦ 1`.
pub fn cantor_function_oracle(ternary: &[u8]) -> Result<f64> {
    ternary.iter().enumerate().try_fold(0.0, |acc, (k, &d)| match d {
        0 => Ok(acc),
        2 => Ok(acc + 0.5f64.powi(k as i32 + 1)),
        other => Err(Error::InvalidParameter(format!(
            "ternary digit {other} at position {} is not a Cantor-set digit",
            k + 1
        ))),
    })
}

/// Value of a ternary digit string.
pub fn ternary_value(ternary: &[u8]) -> f64 {
    ternary
        .iter()
        .rev()
        .fold(0.0, |acc, &d| (acc + f64::from(d)) / 3.0)
}

/// The Cantor function on all of `[0, 1]`: ternary digits up to the first 1.
pub fn cantor_function(x: f64, digits: usize) -> f64 {
    if x >= 1.0 {
        return 1.0;
    }
    let mut y = x.max(0.0);
    let mut value = 0.0;
    let mut scale = 0.5;
    for _ in 0..digits {
        y *= 3.0;
        let d = y.floor().min(2.0);
        y -= d;
        if d == 1.0 {
            return value + scale;
        }
        if d == 2.0 {
            value += scale;
        }
        scale *= 0.5;
    }
    value
}

/// Mass that the p-measure of the 1-D affine system with `maps = [(a, b)]`
/// puts on `[lo, hi]`, by exhaustive enumeration of depth-`depth` cylinders.
/// Each cylinder image is an interval; partially covered cylinders count
/// proportionally to their overlap, which bounds the error by the mass of
/// the cylinders straddling the endpoints.
pub fn affine_interval_mass(maps: &[(f64, f64)], p: &[f64], lo: f64, hi: f64, depth: usize) -> f64 {
    fn rec(maps: &[(f64, f64)], p: &[f64], lo: f64, hi: f64, depth: usize, x0: f64, x1: f64, w: f64) -> f64 {
        let (a, b) = (x0.min(x1), x0.max(x1));
        if b <= lo || a >= hi {
            return 0.0;
        }
        if a >= lo && b <= hi {
            return w;
        }
        if depth == 0 {
            return w * (b.min(hi) - a.max(lo)) / (b - a);
        }
        maps.iter()
            .zip(p)
            .map(|(&(s, t), &pi)| rec(maps, p, lo, hi, depth - 1, s * x0 + t, s * x1 + t, w * pi))
            .sum()
    }
    // the attractor of the listed maps is assumed to be [0, 1]
    rec(maps, p, lo, hi, depth, 0.0, 1.0, 1.0)
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_abs_diff_eq;

    #[test]
    fn series_values() {
        assert_abs_diff_eq!(tfg2_series_oracle(0.0, 60), 1.0 / 3.0, epsilon = 1e-15);
        assert_abs_diff_eq!(tfg2_series_oracle(1.0, 60), 2.0 / 3.0, epsilon = 1e-15);
        assert_abs_diff_eq!(tfg2_series_oracle(1.0 / 3.0, 52), 0.0, epsilon = 1e-15);
    }

    #[test]
    fn cantor_digit_map() {
        assert_abs_diff_eq!(ternary_value(&[2, 0, 2]), 20.0 / 27.0, epsilon = 1e-15);
        assert_eq!(cantor_function_oracle(&[2]).unwrap(), 0.5);
        let mut d = vec![0];
        d.extend(std::iter::repeat_n(2, 60));
        assert_abs_diff_eq!(cantor_function_oracle(&d).unwrap(), 0.5, epsilon = 1e-15);
        let alt: Vec<u8> = (0..60).map(|k| if k % 2 == 0 { 2 } else { 0 }).collect();
        assert_abs_diff_eq!(cantor_function_oracle(&alt).unwrap(), 2.0 / 3.0, epsilon = 1e-15);
        assert!(cantor_function_oracle(&[0, 1]).is_err());
    }

    #[test]
    fn cantor_function_on_reals() {
        assert_abs_diff_eq!(cantor_function(2.0 / 3.0, 40), 0.5, epsilon = 1e-9);
        assert_abs_diff_eq!(cantor_function(0.25, 40), 1.0 / 3.0, epsilon = 1e-9);
        assert_eq!(cantor_function(0.5, 40), 0.5);
        assert_eq!(cantor_function(1.0, 40), 1.0);
    }

    #[test]
    fn interval_mass_uniform() {
        let binary = [(0.5, 0.0), (0.5, 0.5)];
        assert_abs_diff_eq!(affine_interval_mass(&binary, &[0.5, 0.5], 0.2, 0.7, 20), 0.5, epsilon = 1e-6);
    }
}
