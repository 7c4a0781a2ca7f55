//! Iterated function systems of affine contractions, the coding map, and
//! chaos-game sampling.

use std::fmt;
use std::io::Write;

use rand::distributions::Distribution;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;

use crate::code_space::{Address, ProbabilityVector};
use crate::error::{Error, Result};
use crate::geometry::{AffineMap, Mat2, Point};
use crate::region::Region;
use crate::scalar::Scalar;

/// Default number of discarded chaos-game iterations.
pub const DEFAULT_BURN_IN: usize = 64;

/// Upper bound on `N^depth` accepted by [`ContractiveIfs::hutchinson_tiles`].
pub const TILE_LIMIT: u128 = 1 << 24;

/// `N ≥ 2` affine contractions sharing an ambient dimension, together with
/// exact attractor membership.
#[derive(Clone)]
pub struct ContractiveIfs<T> {
    label: String,
    maps: Vec<AffineMap<T>>,
    region: Region<T>,
    diameter: T,
    dim: usize,
    default_p: ProbabilityVector,
    exact_inverse: bool,
    rounding: T,
    base_point: Point<T>,
}

impl<T: Scalar> fmt::Debug for ContractiveIfs<T> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("ContractiveIfs")
            .field("label", &self.label)
            .field("maps", &self.maps.len())
            .field("dim", &self.dim)
            .field("region", &self.region)
            .field("diameter", &self.diameter)
            .finish()
    }
}

impl<T: Scalar> ContractiveIfs<T> {
    /// `region` is the attractor itself (or a predicate for it); tile
    /// membership is derived from it through the inverse maps.
    pub fn new(
        label: impl Into<String>,
        maps: Vec<AffineMap<T>>,
        region: Region<T>,
        diameter: T,
        default_p: ProbabilityVector,
    ) -> Result<Self> {
        let label = label.into();
        if maps.len() < 2 {
            return Err(Error::InvalidParameter(format!("`{label}` needs at least two maps")));
        }
        if maps.len() > usize::from(u16::MAX) {
            return Err(Error::InvalidParameter("too many maps".into()));
        }
        let dim = maps[0].dim();
        if maps.iter().any(|m| m.dim() != dim) {
            return Err(Error::InvalidParameter(format!("`{label}` mixes 1-D and 2-D maps")));
        }
        if default_p.len() != maps.len() {
            return Err(Error::AlphabetMismatch {
                left: maps.len() as u16,
                right: default_p.len() as u16,
            });
        }
        if !(diameter > T::zero()) {
            return Err(Error::InvalidParameter("diameter must be positive".into()));
        }
        let base_point = maps[0].fixed_point();
        let mut ifs = Self {
            label,
            maps,
            region,
            diameter,
            dim,
            default_p,
            exact_inverse: false,
            rounding: T::zero(),
            base_point,
        };
        ifs.rounding = ifs.rounding_bound();
        if ifs.contraction_factor() >= T::one() {
            return Err(Error::InvalidParameter(format!(
                "`{}` is not eventually contractive",
                ifs.label
            )));
        }
        Ok(ifs)
    }

    /// Declares that every inverse map is evaluated without rounding on the
    /// attractor (dyadic arithmetic on the unit interval, say).
    pub fn with_exact_inverse(mut self) -> Self {
        self.exact_inverse = true;
        self.rounding = T::zero();
        self
    }

    pub fn with_label(mut self, label: impl Into<String>) -> Self {
        self.label = label.into();
        self
    }

    fn rounding_bound(&self) -> T {
        let extent = self
            .maps
            .iter()
            .map(|m| m.fixed_point().norm())
            .fold(T::zero(), T::max)
            + self.diameter;
        let worst = self
            .maps
            .iter()
            .map(|m| m.inverse_lipschitz() * extent + m.inverse_offset().norm())
            .fold(T::zero(), T::max);
        T::lit(4.0) * T::epsilon() * worst
    }

    pub fn label(&self) -> &str {
        &self.label
    }

    pub fn len(&self) -> usize {
        self.maps.len()
    }

    pub fn is_empty(&self) -> bool {
        self.maps.is_empty()
    }

    pub fn alphabet(&self) -> u16 {
        self.maps.len() as u16
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn maps(&self) -> &[AffineMap<T>] {
        &self.maps
    }

    pub fn map(&self, symbol: u16) -> &AffineMap<T> {
        &self.maps[usize::from(symbol) - 1]
    }

    pub fn region(&self) -> &Region<T> {
        &self.region
    }

    pub fn diameter(&self) -> T {
        self.diameter
    }

    pub fn default_probabilities(&self) -> &ProbabilityVector {
        &self.default_p
    }

    pub fn exact_inverse(&self) -> bool {
        self.exact_inverse
    }

    /// Per-step absolute rounding error of an inverse-map evaluation.
    pub fn inverse_rounding(&self) -> T {
        self.rounding
    }

    /// Fixed point of `f₁`, a point of the attractor.
    pub fn base_point(&self) -> Point<T> {
        self.base_point
    }

    /// Euclidean Lipschitz constants `λᵢ`.
    pub fn lipschitz(&self) -> Vec<T> {
        self.maps.iter().map(|m| m.lipschitz()).collect()
    }

    pub fn max_lipschitz(&self) -> T {
        self.maps.iter().map(|m| m.lipschitz()).fold(T::zero(), T::max)
    }

    /// Asymptotic contraction rate `λ`: the smallest `(max_w ‖L_w‖)^{1/k}`
    /// over word lengths `k = 1..=4`. Some maps (thin lamina corners) expand
    /// in the Euclidean norm yet every long composition contracts.
    pub fn contraction_factor(&self) -> T {
        let mut layer: Vec<Mat2<T>> = self.maps.iter().map(|m| *m.linear()).collect();
        let mut best = self.norm_bound(&layer);
        for k in 2..=4u32 {
            layer = layer
                .iter()
                .flat_map(|w| self.maps.iter().map(move |m| w.mul(m.linear())))
                .collect();
            let rate = self.norm_bound(&layer).powf(T::one() / T::lit(f64::from(k)));
            best = best.min(rate);
        }
        best
    }

    fn norm_bound(&self, mats: &[Mat2<T>]) -> T {
        mats.iter()
            .map(|m| {
                if self.dim == 1 {
                    m.m[0][0].abs()
                } else {
                    m.operator_norm()
                }
            })
            .fold(T::zero(), T::max)
    }

    /// Bound `λ^K · diam(A)` on the coding-map truncation error at depth `K`.
    pub fn coding_accuracy(&self, depth: usize) -> T {
        self.contraction_factor().powi(depth as i32) * self.diameter * self.coding_constant()
    }

    fn coding_constant(&self) -> T {
        // constant C with ‖L_w‖ ≤ C λ^|w|; one for Euclidean contractions
        let lambda = self.contraction_factor();
        let max = self.max_lipschitz();
        if max <= lambda {
            T::one()
        } else {
            (max / lambda).powi(3)
        }
    }

    /// `x ∈ fᵢ(A)` within `tol`, for the zero-based map index `i`.
    #[inline]
    pub fn tile_member(&self, i: usize, p: Point<T>, tol: T) -> bool {
        let m = &self.maps[i];
        self.region.contains(m.apply_inverse(p), tol * m.inverse_lipschitz())
    }

    #[inline]
    pub fn attractor_member(&self, p: Point<T>, tol: T) -> bool {
        self.region.contains(p, tol)
    }

    /// `f_{σ₁}∘⋯∘f_{σ_K}(base)`.
    pub fn coding_map(&self, a: &Address, base: Point<T>) -> Result<Point<T>> {
        if a.alphabet() != self.alphabet() {
            return Err(Error::AlphabetMismatch {
                left: a.alphabet(),
                right: self.alphabet(),
            });
        }
        Ok(self.code_symbols(a.symbols(), base))
    }

    pub(crate) fn code_symbols(&self, symbols: &[u16], base: Point<T>) -> Point<T> {
        symbols
            .iter()
            .rev()
            .fold(base, |z, &s| self.maps[usize::from(s) - 1].apply(z))
    }

    /// Random iteration `x ← f_i(x)` with `i ~ p`.
    pub fn chaos_game<R: Rng + ?Sized>(
        &self,
        p: &ProbabilityVector,
        n: usize,
        burn_in: usize,
        rng: &mut R,
    ) -> Result<EmpiricalMeasure<T>> {
        self.check_p(p)?;
        if n == 0 {
            return Err(Error::EmptyMeasure);
        }
        let points = self.iterate(p, n, burn_in, rng);
        Ok(EmpiricalMeasure {
            points,
            dim: self.dim,
            seed: None,
            workers: 1,
            system_label: self.label.clone(),
        })
    }

    /// Chaos game split over `workers` independent streams seeded
    /// `seed + worker_index`; concatenated in worker order.
    pub fn chaos_game_parallel(
        &self,
        p: &ProbabilityVector,
        n: usize,
        burn_in: usize,
        seed: u64,
        workers: usize,
    ) -> Result<EmpiricalMeasure<T>> {
        self.check_p(p)?;
        if n == 0 {
            return Err(Error::EmptyMeasure);
        }
        let workers = workers.clamp(1, n);
        let chunks: Vec<Vec<Point<T>>> = (0..workers)
            .into_par_iter()
            .map(|w| {
                let len = n / workers + usize::from(w < n % workers);
                let mut rng = ChaCha8Rng::seed_from_u64(seed.wrapping_add(w as u64));
                self.iterate(p, len, burn_in, &mut rng)
            })
            .collect();
        Ok(EmpiricalMeasure {
            points: chunks.concat(),
            dim: self.dim,
            seed: Some(seed),
            workers,
            system_label: self.label.clone(),
        })
    }

    fn iterate<R: Rng + ?Sized>(&self, p: &ProbabilityVector, n: usize, burn_in: usize, rng: &mut R) -> Vec<Point<T>> {
        let dist = p.sampler();
        let mut x = self.base_point;
        for _ in 0..burn_in {
            x = self.maps[dist.sample(rng)].apply(x);
        }
        (0..n)
            .map(|_| {
                x = self.maps[dist.sample(rng)].apply(x);
                x
            })
            .collect()
    }

    fn check_p(&self, p: &ProbabilityVector) -> Result<()> {
        if p.len() != self.len() {
            return Err(Error::AlphabetMismatch {
                left: self.alphabet(),
                right: p.len() as u16,
            });
        }
        Ok(())
    }

    /// One representative `f_w(base)` per depth-`d` tile, with its prefix `w`.
    pub fn hutchinson_tiles(&self, depth: usize) -> Result<Vec<Tile<T>>> {
        let tiles = (self.len() as u128).checked_pow(depth as u32).unwrap_or(u128::MAX);
        if tiles > TILE_LIMIT {
            return Err(Error::DepthTooLarge {
                tiles,
                limit: TILE_LIMIT,
            });
        }
        let mut out = vec![Tile {
            prefix: Vec::new(),
            point: self.base_point,
        }];
        for _ in 0..depth {
            out = out
                .into_iter()
                .flat_map(|t| {
                    (1..=self.alphabet()).map(move |s| {
                        let mut prefix = t.prefix.clone();
                        prefix.push(s);
                        Tile { prefix, point: t.point }
                    })
                })
                .collect();
        }
        for t in &mut out {
            t.point = self.code_symbols(&t.prefix, self.base_point);
        }
        Ok(out)
    }

    /// Estimates `μ(fᵢ(A) ∩ f_j(A))` from samples of this system.
    pub fn overlap_diagnostic(&self, samples: &EmpiricalMeasure<T>, tol: T) -> Result<OverlapReport> {
        if samples.is_empty() {
            return Err(Error::EmptyMeasure);
        }
        let n = self.len();
        let counts = samples
            .points
            .par_iter()
            .map(|&x| {
                let hits: Vec<bool> = (0..n).map(|i| self.tile_member(i, x, tol)).collect();
                let mut c = vec![0u64; n * n];
                for i in 0..n {
                    for j in 0..n {
                        if i != j && hits[i] && hits[j] {
                            c[i * n + j] += 1;
                        }
                    }
                }
                c
            })
            .reduce(
                || vec![0u64; n * n],
                |mut a, b| {
                    a.iter_mut().zip(b).for_each(|(x, y)| *x += y);
                    a
                },
            );
        let total = samples.len() as f64;
        let fractions: Vec<Vec<f64>> = (0..n)
            .map(|i| (0..n).map(|j| counts[i * n + j] as f64 / total).collect())
            .collect();
        let threshold = 10.0 * tol.as_f64() / self.diameter.as_f64();
        let clean = fractions.iter().flatten().all(|&f| f < threshold.max(f64::MIN_POSITIVE));
        Ok(OverlapReport {
            pairwise_hit_fraction: fractions,
            threshold,
            verdict: if clean {
                OverlapVerdict::NonOverlappingConsistent
            } else {
                OverlapVerdict::OverlapDetected
            },
        })
    }
}

/// A depth-`d` composite tile `f_w(A)` and a point inside it.
#[derive(Clone, Debug, PartialEq)]
pub struct Tile<T> {
    pub prefix: Vec<u16>,
    pub point: Point<T>,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum OverlapVerdict {
    NonOverlappingConsistent,
    OverlapDetected,
}

#[derive(Clone, Debug)]
pub struct OverlapReport {
    /// `[i][j]`: fraction of samples in both tiles; zero on the diagonal.
    pub pairwise_hit_fraction: Vec<Vec<f64>>,
    pub threshold: f64,
    pub verdict: OverlapVerdict,
}

/// Uniformly weighted point cloud approximating a p-measure.
#[derive(Clone, Debug, PartialEq)]
pub struct EmpiricalMeasure<T> {
    points: Vec<Point<T>>,
    dim: usize,
    seed: Option<u64>,
    workers: usize,
    system_label: String,
}

impl<T: Scalar> EmpiricalMeasure<T> {
    pub fn from_points(points: Vec<Point<T>>, dim: usize, system_label: impl Into<String>) -> Result<Self> {
        if points.is_empty() {
            return Err(Error::EmptyMeasure);
        }
        if dim != 1 && dim != 2 {
            return Err(Error::InvalidParameter(format!("dimension {dim}")));
        }
        Ok(Self {
            points,
            dim,
            seed: None,
            workers: 1,
            system_label: system_label.into(),
        })
    }

    /// Samples of Lebesgue measure on `[0,1]`.
    pub fn uniform_interval(n: usize, seed: u64) -> Result<Self> {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let points = (0..n).map(|_| Point::on_line(T::lit(rng.gen::<f64>()))).collect();
        let mut m = Self::from_points(points, 1, "lebesgue[0,1]")?;
        m.seed = Some(seed);
        Ok(m)
    }

    /// Samples of Lebesgue measure on `[0,1]²`.
    pub fn uniform_square(n: usize, seed: u64) -> Result<Self> {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let points = (0..n)
            .map(|_| Point::new(T::lit(rng.gen::<f64>()), T::lit(rng.gen::<f64>())))
            .collect();
        let mut m = Self::from_points(points, 2, "lebesgue[0,1]^2")?;
        m.seed = Some(seed);
        Ok(m)
    }

    pub fn points(&self) -> &[Point<T>] {
        &self.points
    }

    pub fn into_points(self) -> Vec<Point<T>> {
        self.points
    }

    pub fn len(&self) -> usize {
        self.points.len()
    }

    pub fn is_empty(&self) -> bool {
        self.points.is_empty()
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    /// Weight `1/n` carried by every point.
    pub fn weight(&self) -> f64 {
        1.0 / self.points.len() as f64
    }

    pub fn seed(&self) -> Option<u64> {
        self.seed
    }

    pub fn workers(&self) -> usize {
        self.workers
    }

    pub fn system_label(&self) -> &str {
        &self.system_label
    }

    /// First coordinates as `f64`, for 1-D statistics.
    pub fn xs(&self) -> Vec<f64> {
        self.points.iter().map(|p| p.x.as_f64()).collect()
    }

    /// Empirical mass of the set described by `inside`.
    pub fn mass(&self, inside: impl Fn(Point<T>) -> bool + Sync) -> f64 {
        let hits = self.points.par_iter().filter(|&&p| inside(p)).count();
        hits as f64 / self.points.len() as f64
    }

    pub(crate) fn with_points(&self, points: Vec<Point<T>>, dim: usize, label: String) -> Self {
        Self {
            points,
            dim,
            seed: self.seed,
            workers: self.workers,
            system_label: label,
        }
    }

    /// CSV with header `x,weight` or `x,y,weight`.
    pub fn write_csv<W: Write>(&self, mut w: W) -> Result<()> {
        let weight = self.weight();
        if self.dim == 1 {
            writeln!(w, "x,weight")?;
            for p in &self.points {
                writeln!(w, "{:e},{:e}", p.x.as_f64(), weight)?;
            }
        } else {
            writeln!(w, "x,y,weight")?;
            for p in &self.points {
                writeln!(w, "{:e},{:e},{:e}", p.x.as_f64(), p.y.as_f64(), weight)?;
            }
        }
        Ok(())
    }
}
