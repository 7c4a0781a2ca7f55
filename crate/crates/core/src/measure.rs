//! Pushforwards and statistical comparison of empirical measures.

use std::io::Write;

use rayon::prelude::*;
use statrs::distribution::{ChiSquared, ContinuousCDF};

use crate::code_space::ProbabilityVector;
use crate::error::{Error, Result};
use crate::geometry::Point;
use crate::ifs::{ContractiveIfs, EmpiricalMeasure};
use crate::region::barycentric;
use crate::scalar::Scalar;
use crate::transform::TransformPair;

/// Applies the transform to every sample.
pub fn pushforward<T: Scalar>(tp: &TransformPair<T>, m: &EmpiricalMeasure<T>) -> Result<EmpiricalMeasure<T>> {
    tp.pushforward(m)
}

/// `sup |F_n − F|` for the first coordinates of `m`.
pub fn ks_statistic<T: Scalar>(m: &EmpiricalMeasure<T>, cdf: impl Fn(f64) -> f64) -> Result<f64> {
    ks_statistic_values(m.xs(), cdf)
}

/// Kolmogorov–Smirnov distance of raw samples from a reference CDF.
pub fn ks_statistic_values(mut xs: Vec<f64>, cdf: impl Fn(f64) -> f64) -> Result<f64> {
    if xs.is_empty() {
        return Err(Error::EmptyMeasure);
    }
    xs.par_sort_unstable_by(f64::total_cmp);
    let n = xs.len() as f64;
    let mut d: f64 = 0.0;
    let mut i = 0;
    while i < xs.len() {
        // ties move the empirical CDF in one jump
        let mut j = i;
        while j + 1 < xs.len() && xs[j + 1] == xs[i] {
            j += 1;
        }
        let f = cdf(xs[i]);
        d = d.max((f - i as f64 / n).abs()).max(((j + 1) as f64 / n - f).abs());
        i = j + 1;
    }
    Ok(d)
}

/// Uniform CDF on `[0, 1]`.
pub fn uniform_cdf(x: f64) -> f64 {
    x.clamp(0.0, 1.0)
}

/// Large-sample critical value `c(α)/√n` of the KS statistic.
pub fn ks_critical_value(n: usize, alpha: f64) -> f64 {
    (-0.5 * (alpha / 2.0).ln()).sqrt() / (n as f64).sqrt()
}

/// Upper `q`-quantile of the chi-square distribution.
pub fn chi_square_quantile(dof: usize, q: f64) -> Result<f64> {
    let d = ChiSquared::new(dof as f64).map_err(|e| Error::InvalidParameter(e.to_string()))?;
    Ok(d.inverse_cdf(q))
}

/// Pearson statistic of bin counts against equal expectations.
pub fn pearson(counts: &[u64], n: usize) -> f64 {
    let expected = n as f64 / counts.len() as f64;
    counts
        .iter()
        .map(|&c| {
            let d = c as f64 - expected;
            d * d / expected
        })
        .sum()
}

/// Pearson statistic over a `cells × cells` grid of `[0,1]²`.
pub fn grid_chi_square<T: Scalar>(m: &EmpiricalMeasure<T>, cells: usize) -> Result<f64> {
    let k = cells * cells;
    if m.len() < 5 * k {
        return Err(Error::UnderPowered {
            n: m.len(),
            required: 5 * k,
        });
    }
    let counts = bin_counts(m.points(), k, |p| {
        let c = |v: T| ((v.as_f64() * cells as f64).floor() as isize).clamp(0, cells as isize - 1) as usize;
        Some(c(p.y) * cells + c(p.x))
    });
    Ok(pearson(&counts, m.len()))
}

/// Pearson statistic over the `cells²` congruent triangles obtained by
/// cutting each side of `tri` into `cells` pieces.
pub fn triangle_chi_square<T: Scalar>(m: &EmpiricalMeasure<T>, tri: &[Point<T>; 3], cells: usize) -> Result<f64> {
    let k = cells * cells;
    if m.len() < 5 * k {
        return Err(Error::UnderPowered {
            n: m.len(),
            required: 5 * k,
        });
    }
    let counts = bin_counts(m.points(), k, |p| Some(triangle_cell(tri, p, cells)));
    Ok(pearson(&counts, m.len()))
}

/// Index in `0..cells²` of the sub-triangle holding `p`.
pub fn triangle_cell<T: Scalar>(tri: &[Point<T>; 3], p: Point<T>, cells: usize) -> usize {
    let b = barycentric(tri, p);
    let m = cells as f64;
    let u = (b[0].as_f64() * m).clamp(0.0, m - 1e-9);
    let v = (b[1].as_f64() * m).clamp(0.0, m - 1e-9);
    let (mut i, mut j) = (u.floor() as usize, v.floor() as usize);
    if i + j > cells - 1 {
        // rounding pushed the point past the far edge
        let excess = i + j - (cells - 1);
        if i >= excess {
            i -= excess;
        } else {
            j -= excess;
        }
    }
    let up = (u - i as f64) + (v - j as f64) < 1.0 || i + j == cells - 1;
    // row j holds 2(cells - j) - 1 triangles, alternating up/down
    let row_start: usize = (0..j).map(|r| 2 * (cells - r) - 1).sum();
    row_start + 2 * i + usize::from(!up)
}

fn bin_counts<T: Scalar>(points: &[Point<T>], k: usize, cell: impl Fn(Point<T>) -> Option<usize> + Sync) -> Vec<u64> {
    points
        .par_chunks(8192)
        .map(|chunk| {
            let mut c = vec![0u64; k];
            for &p in chunk {
                if let Some(i) = cell(p) {
                    c[i] += 1;
                }
            }
            c
        })
        .reduce(
            || vec![0u64; k],
            |mut a, b| {
                a.iter_mut().zip(b).for_each(|(x, y)| *x += y);
                a
            },
        )
}

/// Dyadic test cells of side `2^-depth` over a box.
#[derive(Clone, Copy, Debug)]
pub struct DyadicCells<T> {
    pub depth: u32,
    pub dim: usize,
    pub min: Point<T>,
    pub max: Point<T>,
}

impl<T: Scalar> DyadicCells<T> {
    pub fn unit(dim: usize, depth: u32) -> Self {
        Self {
            depth,
            dim,
            min: Point::new(T::zero(), T::zero()),
            max: Point::new(T::one(), T::one()),
        }
    }

    pub fn count(&self) -> usize {
        (1usize << self.depth).pow(self.dim as u32)
    }

    /// Half-open cell index; `None` outside the box.
    pub fn index(&self, p: Point<T>) -> Option<usize> {
        let side = 1usize << self.depth;
        let coord = |v: T, lo: T, hi: T| -> Option<usize> {
            let t = ((v - lo) / (hi - lo)).as_f64();
            if !(0.0..1.0).contains(&t) {
                return None;
            }
            Some(((t * side as f64) as usize).min(side - 1))
        };
        let ix = coord(p.x, self.min.x, self.max.x)?;
        if self.dim == 1 {
            Some(ix)
        } else {
            Some(coord(p.y, self.min.y, self.max.y)? * side + ix)
        }
    }

    /// `[lo, hi)` of a 1-D cell.
    pub fn interval(&self, i: usize) -> (f64, f64) {
        let side = (1u64 << self.depth) as f64;
        let (lo, hi) = (self.min.x.as_f64(), self.max.x.as_f64());
        let w = (hi - lo) / side;
        (lo + w * i as f64, lo + w * (i + 1) as f64)
    }
}

/// `max_B |m(B) − ∑ pᵢ m(fᵢ⁻¹ B)|` over the test cells.
pub fn invariance_residual<T: Scalar>(
    ifs: &ContractiveIfs<T>,
    p: &ProbabilityVector,
    m: &EmpiricalMeasure<T>,
    cells: &DyadicCells<T>,
) -> Result<f64> {
    if p.len() != ifs.len() {
        return Err(Error::AlphabetMismatch {
            left: ifs.alphabet(),
            right: p.len() as u16,
        });
    }
    if m.is_empty() {
        return Err(Error::EmptyMeasure);
    }
    let k = cells.count();
    let n = m.len() as f64;
    let direct = bin_counts(m.points(), k, |x| cells.index(x));
    let mut mixed = vec![0.0; k];
    for (map, &pi) in ifs.maps().iter().zip(p.weights()) {
        let counts = bin_counts(m.points(), k, |x| cells.index(map.apply(x)));
        for (acc, c) in mixed.iter_mut().zip(counts) {
            *acc += pi * c as f64;
        }
    }
    Ok(direct
        .iter()
        .zip(mixed)
        .map(|(&d, w)| ((d as f64 - w) / n).abs())
        .fold(0.0, f64::max))
}

/// The same residual for an exact 1-D measure given by its CDF.
pub fn invariance_residual_cdf<T: Scalar>(
    ifs: &ContractiveIfs<T>,
    p: &ProbabilityVector,
    cdf: impl Fn(f64) -> f64,
    cells: &DyadicCells<T>,
) -> Result<f64> {
    if ifs.dim() != 1 {
        return Err(Error::InvalidParameter("analytic residual needs a 1-D system".into()));
    }
    let mass = |lo: f64, hi: f64| cdf(hi) - cdf(lo);
    let mut worst: f64 = 0.0;
    for c in 0..cells.count() {
        let (lo, hi) = cells.interval(c);
        let mixed: f64 = ifs
            .maps()
            .iter()
            .zip(p.weights())
            .map(|(m, &pi)| {
                let a = m.apply_inverse(Point::on_line(T::lit(lo))).x.as_f64();
                let b = m.apply_inverse(Point::on_line(T::lit(hi))).x.as_f64();
                pi * mass(a.min(b), a.max(b))
            })
            .sum();
        worst = worst.max((mass(lo, hi) - mixed).abs());
    }
    Ok(worst)
}

/// Fraction of samples lying in at least two `eps`-fattened tiles.
pub fn critical_fraction<T: Scalar>(ifs: &ContractiveIfs<T>, m: &EmpiricalMeasure<T>, eps: T) -> f64 {
    m.mass(|x| (0..ifs.len()).filter(|&i| ifs.tile_member(i, x, eps)).take(2).count() == 2)
}

/// Occupied boxes of side `diameter · 2^-k` for each `k` in `levels`, over
/// the bounding box of the samples.
pub fn box_counts<T: Scalar>(m: &EmpiricalMeasure<T>, diameter: f64, levels: &[u32]) -> Result<Vec<usize>> {
    if m.is_empty() {
        return Err(Error::EmptyMeasure);
    }
    let (mut x0, mut y0) = (f64::INFINITY, f64::INFINITY);
    for p in m.points() {
        x0 = x0.min(p.x.as_f64());
        y0 = y0.min(p.y.as_f64());
    }
    Ok(levels
        .par_iter()
        .map(|&k| {
            let side = diameter / (1u64 << k) as f64;
            let mut boxes: Vec<(i64, i64)> = m
                .points()
                .iter()
                .map(|p| {
                    (
                        ((p.x.as_f64() - x0) / side).floor() as i64,
                        ((p.y.as_f64() - y0) / side).floor() as i64,
                    )
                })
                .collect();
            boxes.sort_unstable();
            boxes.dedup();
            boxes.len()
        })
        .collect())
}

/// Least-squares slope of `ln N` against `k ln 2`, the box-counting dimension
/// estimate over the given levels.
pub fn box_count_slope<T: Scalar>(m: &EmpiricalMeasure<T>, diameter: f64, levels: &[u32]) -> Result<f64> {
    if levels.len() < 2 {
        return Err(Error::InvalidParameter("need at least two box sizes".into()));
    }
    let counts = box_counts(m, diameter, levels)?;
    let xs: Vec<f64> = levels.iter().map(|&k| f64::from(k) * std::f64::consts::LN_2).collect();
    let ys: Vec<f64> = counts.iter().map(|&c| (c as f64).ln()).collect();
    Ok(least_squares_slope(&xs, &ys))
}

/// Slope of the least-squares line through `(xs, ys)`.
pub fn least_squares_slope(xs: &[f64], ys: &[f64]) -> f64 {
    let n = xs.len() as f64;
    let mx = xs.iter().sum::<f64>() / n;
    let my = ys.iter().sum::<f64>() / n;
    let sxy: f64 = xs.iter().zip(ys).map(|(x, y)| (x - mx) * (y - my)).sum();
    let sxx: f64 = xs.iter().map(|x| (x - mx) * (x - mx)).sum();
    sxy / sxx
}

/// One line of a check report.
#[derive(Clone, Debug, PartialEq)]
pub struct ReportRow {
    pub statistic: String,
    pub value: f64,
    pub threshold: f64,
    pub pass: bool,
}

/// Rows `statistic,value,threshold,pass`.
#[derive(Clone, Debug, Default, PartialEq)]
pub struct Report {
    pub rows: Vec<ReportRow>,
}

impl Report {
    pub fn new() -> Self {
        Self::default()
    }

    /// Records `value < threshold`.
    pub fn below(&mut self, statistic: impl Into<String>, value: f64, threshold: f64) -> bool {
        self.push(statistic, value, threshold, value < threshold)
    }

    /// Records `value > threshold`.
    pub fn above(&mut self, statistic: impl Into<String>, value: f64, threshold: f64) -> bool {
        self.push(statistic, value, threshold, value > threshold)
    }

    pub fn push(&mut self, statistic: impl Into<String>, value: f64, threshold: f64, pass: bool) -> bool {
        self.rows.push(ReportRow {
            statistic: statistic.into(),
            value,
            threshold,
            pass,
        });
        pass
    }

    pub fn extend(&mut self, other: Report) {
        self.rows.extend(other.rows);
    }

    pub fn all_pass(&self) -> bool {
        self.rows.iter().all(|r| r.pass)
    }

    pub fn write_csv<W: Write>(&self, mut w: W) -> Result<()> {
        writeln!(w, "statistic,value,threshold,pass")?;
        for r in &self.rows {
            writeln!(w, "{},{:e},{:e},{}", r.statistic, r.value, r.threshold, r.pass)?;
        }
        Ok(())
    }
}
