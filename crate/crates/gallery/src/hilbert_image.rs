//! `hilbert-image`: square image to Hilbert strip and back.

use std::fs::File;
use std::io::BufReader;
use std::path::Path;

use anyhow::{bail, Context, Result};
use fractal_conjugacy::catalog;
use fractal_conjugacy::geometry::Point;
use fractal_conjugacy::raster::Raster;
use fractal_conjugacy::transform::TransformPair;
use rayon::prelude::*;

use crate::output::{self, Provenance};
use crate::Direction;

/// For each strip cell `j < 4^depth`, the `(col, row)` of the square pixel
/// it maps to under `h` at `depth`, rows counted from the top.
pub fn strip_to_square_cells(depth: u32) -> Result<Vec<(usize, usize)>> {
    let side = 1usize << depth;
    let cells = side * side;
    let tp: TransformPair<f64> = catalog::pair("hilbert")?.with_depth(depth.max(1) as usize);
    let centre = Point::new(0.5, 0.5);
    (0..cells)
        .into_par_iter()
        .map(|j| {
            if depth == 0 {
                return Ok((0, 0));
            }
            let s = (j as f64 + 0.5) / cells as f64;
            let a = tp.address(Point::on_line(s))?;
            let p = tp.target().coding_map(&a, centre)?;
            let col = (p.x * side as f64).floor() as usize;
            let row = side - 1 - (p.y * side as f64).floor() as usize;
            Ok((col.min(side - 1), row.min(side - 1)))
        })
        .collect()
}

/// For each square pixel, row-major from the top, the strip cell `T_GF`
/// sends its centre to.
pub fn square_to_strip_cells(depth: u32) -> Result<Vec<usize>> {
    let side = 1usize << depth;
    let cells = side * side;
    let tp: TransformPair<f64> = catalog::pair::<f64>("hilbert")?.inverse().with_depth(depth.max(1) as usize);
    (0..cells)
        .into_par_iter()
        .map(|i| {
            if depth == 0 {
                return Ok(0);
            }
            let (row, col) = (i / side, i % side);
            let c = Point::new((col as f64 + 0.5) / side as f64, 1.0 - (row as f64 + 0.5) / side as f64);
            let a = tp.address(c)?;
            let s = tp.target().coding_map(&a, Point::on_line(0.5))?.x;
            Ok(((s * cells as f64).floor() as usize).min(cells - 1))
        })
        .collect()
}

fn log4(n: usize) -> Option<u32> {
    (n.is_power_of_two() && n.trailing_zeros().is_multiple_of(2)).then(|| n.trailing_zeros() / 2)
}

pub fn square_to_strip(img: &Raster) -> Result<Raster> {
    if img.width != img.height || !img.width.is_power_of_two() {
        bail!("square image with a power-of-two side expected, got {}x{}", img.width, img.height);
    }
    let depth = img.width.trailing_zeros();
    let cells = strip_to_square_cells(depth)?;
    let samples = cells
        .iter()
        .flat_map(|&(col, row)| img.pixel(col, row).to_vec())
        .collect();
    Ok(Raster::new(cells.len(), 1, img.channels, img.maxval, samples)?)
}

pub fn strip_to_square(img: &Raster) -> Result<Raster> {
    let n = img.width * img.height;
    let Some(depth) = log4(n) else {
        bail!("strip of {n} pixels is not a power of four");
    };
    if img.height != 1 {
        bail!("strip must be a single row, got height {}", img.height);
    }
    let side = 1usize << depth;
    let cells = square_to_strip_cells(depth)?;
    let samples = cells.iter().flat_map(|&j| img.pixel(j, 0).to_vec()).collect();
    Ok(Raster::new(side, side, img.channels, img.maxval, samples)?)
}

pub fn run(input: &Path, direction: Direction, out: &Path, prov: &Provenance) -> Result<()> {
    let file = File::open(input).with_context(|| format!("opening {}", input.display()))?;
    let img = Raster::read(BufReader::new(file)).with_context(|| format!("reading {}", input.display()))?;
    let (result, label) = match direction {
        Direction::TwoDToStrip => (square_to_strip(&img)?, "2d_to_strip"),
        Direction::StripToTwoD => (strip_to_square(&img)?, "strip_to_2d"),
    };
    let depth = log4(result.width * result.height).unwrap_or(0);
    let result = prov.stamp(
        result,
        &[("direction", label.to_string()), ("depth", depth.to_string())],
    );
    output::write_raster(out, &result)
}
