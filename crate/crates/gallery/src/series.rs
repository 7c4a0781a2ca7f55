//! `series`: partial sums against a target on the `2^12` midpoint grid.

use anyhow::{bail, Context, Result};
use fractal_conjugacy::geometry::Point;
use fractal_conjugacy::hilbert_space::{
    midpoint_grid, named_function, partial_sum, series_coefficients, unitary_pullback, Basis, BasisKind,
};
use rayon::prelude::*;

use crate::output::{self, Provenance};
use crate::Common;

pub const GRID_LOG2: u32 = 12;

/// Functions accepted by `series`.
pub const SERIES_FUNCTIONS: &[&str] = &["constant", "step", "tent", "identity"];

/// Grid, target values, one approximant per term count and their RMS errors.
pub struct SeriesTable {
    pub grid: Vec<f64>,
    pub target: Vec<f64>,
    pub approx: Vec<Vec<f64>>,
    pub rms: Vec<f64>,
}

/// The target is `f` for a classical basis and `U f` for a transplanted one.
pub fn compute(function: &str, basis: &str, terms: &[usize]) -> Result<SeriesTable> {
    if !SERIES_FUNCTIONS.contains(&function) {
        bail!("unknown function `{function}`, expected one of {}", SERIES_FUNCTIONS.join(", "));
    }
    let kind: BasisKind = basis.parse().with_context(|| format!("basis `{basis}`"))?;
    if terms.is_empty() || terms.contains(&0) {
        bail!("--terms needs positive term counts");
    }
    let basis = Basis::<f64>::new(kind)?;
    let f = named_function::<f64>(function)?;
    let target = match basis.pair() {
        Some(tp) => unitary_pullback(tp, &f)?,
        None => f,
    };
    let max = terms.iter().copied().max().unwrap_or(1);
    let coeffs = series_coefficients(&target, &basis, max)?;
    let grid = midpoint_grid(GRID_LOG2);
    let rows = grid
        .par_iter()
        .map(|&x| {
            let y = Point::on_line(x);
            let t = target.eval(y)?;
            let a = terms
                .iter()
                .map(|&m| partial_sum(&coeffs[..m], &basis, y))
                .collect::<fractal_conjugacy::Result<Vec<_>>>()?;
            Ok((t, a))
        })
        .collect::<Result<Vec<_>>>()?;
    let target_values: Vec<f64> = rows.iter().map(|r| r.0).collect();
    let approx: Vec<Vec<f64>> = (0..terms.len())
        .map(|j| rows.iter().map(|r| r.1[j]).collect())
        .collect();
    let rms = approx
        .iter()
        .map(|a| {
            let sq: f64 = a.iter().zip(&target_values).map(|(u, v)| (u - v) * (u - v)).sum();
            (sq / a.len() as f64).sqrt()
        })
        .collect();
    Ok(SeriesTable {
        grid,
        target: target_values,
        approx,
        rms,
    })
}

pub fn run(function: &str, basis: &str, terms: &[usize], common: &Common, _prov: &Provenance) -> Result<()> {
    let table = compute(function, basis, terms)?;
    let mut header = vec!["x".to_string(), "target".to_string()];
    header.extend(terms.iter().map(|m| format!("approx_{m}")));
    let rows = (0..table.grid.len()).map(|i| {
        let mut row = vec![table.grid[i], table.target[i]];
        row.extend(table.approx.iter().map(|a| a[i]));
        row
    });
    output::write_csv(&common.out.join("series.csv"), &header, rows)?;
    output::write_csv(
        &common.out.join("series_rms.csv"),
        &["terms".to_string(), "rms".to_string()],
        terms.iter().zip(&table.rms).map(|(&m, &r)| vec![m as f64, r]),
    )?;
    for (m, r) in terms.iter().zip(&table.rms) {
        println!("{function} {basis} {m:>5} terms: rms {r:.6e}");
    }
    Ok(())
}
