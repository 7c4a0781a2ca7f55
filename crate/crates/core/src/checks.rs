//! Invariant suites producing `statistic,value,threshold,pass` reports.

use std::f64::consts::PI;
use std::fmt;
use std::str::FromStr;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::catalog;
use crate::code_space::ProbabilityVector;
use crate::error::{Error, Result};
use crate::flow::{
    conjugate_flow, rotation_determinant, rotation_flow, translation_flow, transport_function, transport_measure,
    RotationMode,
};
use crate::geometry::Point;
use crate::haar::{invariant_signal, HaarElement, HaarOracle, HaarWord, IndexReading};
use crate::hilbert_space::{
    domain_label, gram_matrix_mc, named_function, norm, partial_sum, series_coefficients,
    unitary_pullback, Basis, BasisKind, Integrator, SampledFunction, Smoothness,
};
use crate::ifs::{EmpiricalMeasure, DEFAULT_BURN_IN};
use crate::measure::{
    chi_square_quantile, critical_fraction, grid_chi_square, invariance_residual, invariance_residual_cdf,
    ks_critical_value, ks_statistic, triangle_chi_square, uniform_cdf, DyadicCells, Report,
};

/// Named suites.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Suite {
    Measures,
    Isometry,
    Haar,
    Flows,
}

impl Suite {
    pub const ALL: [Suite; 4] = [Suite::Measures, Suite::Isometry, Suite::Haar, Suite::Flows];

    pub fn label(self) -> &'static str {
        match self {
            Suite::Measures => "measures",
            Suite::Isometry => "isometry",
            Suite::Haar => "haar",
            Suite::Flows => "flows",
        }
    }
}

impl fmt::Display for Suite {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.label())
    }
}

impl FromStr for Suite {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        Suite::ALL
            .into_iter()
            .find(|k| k.label() == s)
            .ok_or_else(|| Error::UnknownLabel(s.to_string()))
    }
}

/// Sample size and seed shared by the suites.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct CheckConfig {
    pub seed: u64,
    /// Monte Carlo sample count for KS, chi-square and norm estimates.
    pub n: usize,
    pub workers: usize,
}

impl Default for CheckConfig {
    fn default() -> Self {
        Self {
            seed: 7,
            n: 1_000_000,
            workers: 4,
        }
    }
}

pub fn run(suite: Suite, cfg: &CheckConfig) -> Result<Report> {
    match suite {
        Suite::Measures => measures(cfg),
        Suite::Isometry => isometry(cfg),
        Suite::Haar => haar(cfg),
        Suite::Flows => flows(cfg),
    }
}

const KS_BOUND: f64 = 0.002;
const CHI_LEVEL: f64 = 0.99;

/// Pushforward KS and chi-square, invariance residuals, critical-set scaling.
pub fn measures(cfg: &CheckConfig) -> Result<Report> {
    let mut r = Report::new();
    let n = cfg.n;
    let uniform = EmpiricalMeasure::<f64>::uniform_interval(n, cfg.seed)?;
    let ks_bound = KS_BOUND.max(ks_critical_value(n, 1.0 - CHI_LEVEL));

    for label in ["FG1", "FG2", "FG3", "scaled:0.3", "scaled:0.5", "scaled:0.7"] {
        let tp = catalog::pair::<f64>(label)?;
        let pushed = tp.pushforward(&uniform)?;
        r.push(format!("{label}_mass"), pushed.len() as f64, n as f64, pushed.len() == n);
        r.below(format!("{label}_ks"), ks_statistic(&pushed, uniform_cdf)?, ks_bound);
    }

    let id = catalog::pair::<f64>("identity")?.with_depth(crate::transform::bit_exact_depth::<f64>());
    let sample = &uniform.points()[..n.min(10_000)];
    let mapped = id.transform_many(sample)?;
    let mismatches = sample.iter().zip(&mapped).filter(|(a, b)| a != b).count();
    r.below("identity_bit_mismatches", mismatches as f64, 0.5);

    let chi_bound = chi_square_quantile(1023, CHI_LEVEL)?;
    let hilbert = catalog::pair::<f64>("hilbert")?;
    r.below("hilbert_pushforward_chi2", grid_chi_square(&hilbert.pushforward(&uniform)?, 32)?, chi_bound);
    let g = catalog::hilbert_g::<f64>()?;
    let chaos = g.chaos_game_parallel(&ProbabilityVector::uniform(4), n, DEFAULT_BURN_IN, cfg.seed + 1, cfg.workers)?;
    r.below("hilbert_chaos_chi2", grid_chi_square(&chaos, 32)?, chi_bound);

    let cells = DyadicCells::unit(1, 5);
    let binary = catalog::interval_binary::<f64>()?;
    let half = ProbabilityVector::uniform(2);
    let m = binary.chaos_game_parallel(&half, n, DEFAULT_BURN_IN, cfg.seed + 2, cfg.workers)?;
    let resid_bound = 4.0 / (n as f64).sqrt();
    r.below("binary_invariance", invariance_residual(&binary, &half, &m, &cells)?, resid_bound);
    r.below("binary_invariance_exact", invariance_residual_cdf(&binary, &half, uniform_cdf, &cells)?, 1e-15);
    let scaled = catalog::interval_scaled::<f64>(0.3)?;
    let p = scaled.default_probabilities().clone();
    let m = scaled.chaos_game_parallel(&p, n, DEFAULT_BURN_IN, cfg.seed + 3, cfg.workers)?;
    r.below("scaled_0.3_invariance", invariance_residual(&scaled, &p, &m, &cells)?, resid_bound);

    let big = binary.chaos_game_parallel(&half, 10 * n, DEFAULT_BURN_IN, cfg.seed + 4, cfg.workers)?;
    let fractions: Vec<f64> = [1e-4, 1e-5, 1e-6].iter().map(|&e| critical_fraction(&binary, &big, e)).collect();
    for (k, w) in fractions.windows(2).enumerate() {
        let ratio = if w[1] > 0.0 { w[0] / w[1] } else { f64::INFINITY };
        r.push(
            format!("critical_ratio_1e-{}_1e-{}", k + 4, k + 5),
            ratio,
            10.0,
            (4.0..=25.0).contains(&ratio),
        );
    }
    Ok(r)
}

/// Norm preservation, Gram matrix, coefficient transfer and series parity.
pub fn isometry(cfg: &CheckConfig) -> Result<Report> {
    let mut r = Report::new();
    let tp = catalog::pair::<f64>("FG1")?;
    let samples = EmpiricalMeasure::<f64>::uniform_interval(cfg.n, cfg.seed)?;
    for label in ["sine", "identity", "step"] {
        let f = named_function::<f64>(label)?;
        let exact = norm(&f, Integrator::Lebesgue)?.value;
        let u = unitary_pullback(&tp, &f)?;
        let mc = norm(&u, Integrator::MonteCarlo(&samples))?.value;
        r.below(format!("norm_{label}_rel_err"), (mc - exact).abs() / exact, 0.005);
    }

    let basis = Basis::<f64>::new(BasisKind::FractalSineG1)?;
    let indices: Vec<usize> = (1..=8).collect();
    let gram = gram_matrix_mc(&basis, &indices, &samples)?;
    let worst = gram
        .iter()
        .enumerate()
        .flat_map(|(i, row)| row.iter().enumerate().map(move |(j, &v)| (v - f64::from(u8::from(i == j))).abs()))
        .fold(0.0, f64::max);
    r.below("gram_fractal_sine_G1_max_dev", worst, 0.01);

    let f = named_function::<f64>("tent")?;
    let classical = series_coefficients(&f, &Basis::new(BasisKind::Sine)?, 16)?;
    let fractal = series_coefficients(&unitary_pullback(&tp, &f)?, &basis, 16)?;
    let dev = classical
        .iter()
        .zip(&fractal)
        .map(|(a, b)| (a - b).abs())
        .fold(0.0, f64::max);
    r.below("coefficient_transfer_max_dev", dev, 1e-6);

    for (label, terms) in [("10", 10), ("50", 50), ("100", 100)] {
        let (rc, rf) = rms_pair(terms)?;
        r.below(format!("rms_parity_{label}"), (rc - rf).abs() / rc, 0.01);
    }

    let step = named_function::<f64>("step")?;
    let c = series_coefficients(&step, &Basis::new(BasisKind::Sine)?, 64)?;
    let step_dev = c
        .iter()
        .enumerate()
        .map(|(k, &ck)| {
            let n = (k + 1) as f64;
            (crate::hilbert_space::unnormalized_sine(ck) - 2.0 / PI * (1.0 - (n * PI / 2.0).cos()) / n).abs()
        })
        .fold(0.0, f64::max);
    r.below("step_coefficient_max_dev", step_dev, 1e-8);
    Ok(r)
}

/// RMS error of the classical sine and fractal sine partial sums of the
/// constant, on the `2^12` midpoint grid; the fractal target is `U 1 = 1`.
pub fn rms_pair(terms: usize) -> Result<(f64, f64)> {
    let one = named_function::<f64>("constant")?;
    let grid = crate::hilbert_space::midpoint_grid(12);
    let mut out = [0.0; 2];
    for (slot, kind) in [BasisKind::Sine, BasisKind::FractalSineG1].into_iter().enumerate() {
        let basis = Basis::<f64>::new(kind)?;
        let c = series_coefficients(&one, &basis, terms)?;
        let sq: f64 = grid
            .iter()
            .map(|&y| partial_sum(&c, &basis, Point::on_line(y)).map(|s| (s - 1.0) * (s - 1.0)))
            .sum::<Result<f64>>()?;
        out[slot] = (sq / grid.len() as f64).sqrt();
    }
    Ok((out[0], out[1]))
}

/// Highest Haar level checked by the suite.
pub const HAAR_MAX_LEVEL: usize = 6;

/// Index-formula reading, per-level agreement, projections, invariant signals.
pub fn haar(cfg: &CheckConfig) -> Result<Report> {
    let mut r = Report::new();
    let tp = catalog::pair::<f64>("FG2")?;
    let oracle = HaarOracle::new(&tp, (HAAR_MAX_LEVEL + 4) as u32)?;
    let reading = oracle.resolve_reading(HAAR_MAX_LEVEL)?;
    r.push(
        format!("reading_{}", reading.map_or("none", IndexReading::label)),
        f64::from(u8::from(reading.is_some())),
        1.0,
        reading == Some(IndexReading::Position),
    );
    for level in 1..=HAAR_MAX_LEVEL {
        let (hits, total) = level_agreement(&oracle, IndexReading::Position, level)?;
        r.below(format!("level_{level}_mismatches"), (total - hits) as f64, 0.5);
    }
    let (hits, total) = oracle.agreement(IndexReading::WordLength, HAAR_MAX_LEVEL)?;
    r.push("alternative_reading_agreement", hits as f64, total as f64, hits < total);

    let mother = oracle.computed(&HaarWord::empty())?;
    r.push("mother_fixed", mother.coefficients[0], 1.0, mother.single(0) == Some((1, HaarWord::empty())));
    let constant = oracle.computed_element(&HaarElement::Constant)?;
    r.push("constant_fixed", constant.coefficients[0], 1.0, (constant.coefficients[0] - 1.0).abs() < 1e-12);

    let mut rng = ChaCha8Rng::seed_from_u64(cfg.seed);
    for depth in 1..=5 {
        let values: Vec<f64> = (0..1usize << (depth + 2)).map(|_| rng.gen_range(-1.0..1.0)).collect();
        r.below(format!("projection_commutes_L{depth}"), oracle.projection_defect(depth, &values)?, 1e-10);
    }

    let mut terms = Vec::new();
    for level in [0usize, 2, 4] {
        for w in HaarWord::all(level) {
            terms.push((w, rng.gen_range(-1.0..1.0)));
        }
    }
    let signal = invariant_signal(rng.gen_range(-1.0..1.0), &terms)?;
    let u = oracle.pullback(&signal);
    let dev = oracle
        .grid()
        .iter()
        .zip(&u)
        .map(|(&x, &v)| (v - signal(x)).abs())
        .fold(0.0, f64::max);
    r.below("invariant_signal_max_dev", dev, 1e-10);
    Ok(r)
}

fn level_agreement(oracle: &HaarOracle, reading: IndexReading, level: usize) -> Result<(usize, usize)> {
    let (a, ta) = oracle.agreement(reading, level)?;
    if level == 1 {
        return Ok((a, ta));
    }
    let (b, tb) = oracle.agreement(reading, level - 1)?;
    Ok((a - b, ta - tb))
}

/// Group law, measure preservation, radius and area conservation.
pub fn flows(cfg: &CheckConfig) -> Result<Report> {
    let mut r = Report::new();
    let tp = catalog::pair::<f64>("FG1")?;
    let translation = translation_flow::<f64>();
    let g = conjugate_flow(&tp, &translation)?;
    let back = tp.inverse();

    let mut rng = ChaCha8Rng::seed_from_u64(cfg.seed);
    let mut worst: f64 = 0.0;
    let mut used = 0;
    while used < 1000 {
        let (x, s, t): (f64, f64, f64) = (rng.gen(), rng.gen(), rng.gen());
        let y = Point::on_line(x);
        let pre = back.transform(y)?.x;
        if near_dyadic(pre + t) || near_dyadic(pre + s + t) {
            continue;
        }
        let a = g.apply(g.apply(y, t)?, s)?;
        let b = g.apply(y, s + t)?;
        worst = worst.max((a.x - b.x).abs());
        used += 1;
    }
    r.below("group_law_max_dev", worst, 1e-6);

    let uniform = EmpiricalMeasure::<f64>::uniform_interval(cfg.n, cfg.seed + 1)?;
    let ks_bound = KS_BOUND.max(ks_critical_value(cfg.n, 1.0 - CHI_LEVEL));
    r.below("conjugated_ks", ks_statistic(&transport_measure(&g, &uniform, 0.37)?, uniform_cdf)?, ks_bound);
    r.below("translation_ks", ks_statistic(&transport_measure(&translation, &uniform, 0.37)?, uniform_cdf)?, ks_bound);

    let rot = rotation_flow::<f64>(RotationMode::Standard);
    let mut radius_dev: f64 = 0.0;
    for _ in 0..10_000 {
        let (a, b): (f64, f64) = (rng.gen_range(-0.7..0.7), rng.gen_range(-0.7..0.7));
        let p = Point::new(a, b);
        radius_dev = radius_dev.max((rot.apply(p, rng.gen_range(-10.0..10.0))?.norm() - p.norm()).abs());
    }
    r.below("rotation_radius_max_dev", radius_dev, 1e-14);
    let det = rotation_determinant(RotationMode::Verbatim, 0.8);
    r.push("verbatim_determinant", det, -1.0, (det + 1.0).abs() < 1e-12);

    let lamina = catalog::pair::<f64>("lamina")?;
    let lg = conjugate_flow(&lamina, &rot.clone().on(domain_label(lamina.source())))?;
    let tri = catalog::lamina_vertices::<f64>();
    let m = (cfg.n / 10).max(5 * 256);
    let pts: Vec<Point<f64>> = (0..m).map(|_| uniform_in_triangle(&tri, &mut rng)).collect();
    let moved = EmpiricalMeasure::from_points(lg.apply_many(&pts, 0.9)?, 2, "lamina")?;
    r.below("lamina_rotation_chi2", triangle_chi_square(&moved, &tri, 16)?, chi_square_quantile(255, CHI_LEVEL)?);

    let rho = unitary_pullback(
        &tp,
        &SampledFunction::on_interval(Smoothness::Continuous, |x| 1.0 + 0.5 * (2.0 * PI * x).cos()),
    )?;
    let grid = crate::hilbert_space::midpoint_grid(16);
    let centres: Vec<Point<f64>> = grid.iter().map(|&x| Point::on_line(x)).collect();
    let a = transport_function(&g, &rho, 0.4)?.eval_many(&centres)?;
    let b = transport_function(&g, &rho, 0.401)?.eval_many(&centres)?;
    let l1 = a.iter().zip(&b).map(|(x, y)| (x - y).abs()).sum::<f64>() / grid.len() as f64;
    r.below("orbit_l1_step", l1, 1e-2);

    Ok(r)
}

/// Within `1e-9` of a multiple of `2^-20`, taken mod 1.
fn near_dyadic(x: f64) -> bool {
    let scale = f64::from(1u32 << 20);
    let s = x.rem_euclid(1.0) * scale;
    (s - s.round()).abs() / scale < 1e-9
}

fn uniform_in_triangle<R: Rng>(tri: &[Point<f64>; 3], rng: &mut R) -> Point<f64> {
    let (mut u, mut v): (f64, f64) = (rng.gen(), rng.gen());
    if u + v > 1.0 {
        u = 1.0 - u;
        v = 1.0 - v;
    }
    let w = 1.0 - u - v;
    Point::new(
        u * tri[0].x + v * tri[1].x + w * tri[2].x,
        u * tri[0].y + v * tri[1].y + w * tri[2].y,
    )
}
