//! `flow-strip`: a function moved by the translation flow, and by its
//! conjugate, one row per time.

use anyhow::{bail, Result};
use fractal_conjugacy::flow::{
    conjugated_strip_frames, flow_strip_frames, translation_flow_with_speed, StripFrames, STRIP_SPEED, STRIP_TIMES,
};
use fractal_conjugacy::hilbert_space::{domain_label, named_function, UNIT_INTERVAL};
use fractal_conjugacy::raster::Raster;

use crate::graph::parse_chain;
use crate::output::{self, Provenance};
use crate::Common;

/// Rows per time in the raster.
pub const STRIP_HEIGHT: usize = 16;
/// White rows between strips and between the two blocks.
pub const GAP: usize = 4;

fn stack(classical: &StripFrames, conjugated: &StripFrames) -> Result<Raster> {
    let width = classical.resolution;
    let mut pixels = Vec::new();
    let mut height = 0;
    for (block, frames) in [classical, conjugated].into_iter().enumerate() {
        if block > 0 {
            pixels.extend(std::iter::repeat_n(255u8, 2 * GAP * width));
            height += 2 * GAP;
        }
        for i in 0..frames.times.len() {
            if i > 0 {
                pixels.extend(std::iter::repeat_n(255u8, GAP * width));
                height += GAP;
            }
            let row = frames.row(i);
            for _ in 0..STRIP_HEIGHT {
                pixels.extend_from_slice(&row);
            }
            height += STRIP_HEIGHT;
        }
    }
    Ok(Raster::gray(width, height, pixels)?)
}

pub fn run(pair: &str, function: &str, n: usize, common: &Common, prov: &Provenance) -> Result<()> {
    if n == 0 {
        bail!("--n must be positive");
    }
    let chain = parse_chain(pair, common.depth, common.tol)?;
    if chain.len() != 1 {
        bail!("flow-strip takes a single pair");
    }
    let tp = &chain[0];
    if domain_label(tp.source()) != UNIT_INTERVAL || domain_label(tp.target()) != UNIT_INTERVAL {
        bail!("flow-strip needs a pair between copies of [0,1]");
    }
    let f0 = named_function::<f64>(function)?;
    let flow = translation_flow_with_speed::<f64>(STRIP_SPEED);
    let classical = flow_strip_frames(&flow, &f0, &STRIP_TIMES, n)?;
    let conjugated = conjugated_strip_frames(tp, &flow, &f0, &STRIP_TIMES, n)?;

    let header: Vec<String> = ["conjugated", "t", "x", "value"].map(String::from).to_vec();
    let mut rows = Vec::new();
    for (flag, frames) in [(0.0, &classical), (1.0, &conjugated)] {
        for (t, values) in frames.times.iter().zip(&frames.values) {
            for (k, v) in values.iter().enumerate() {
                rows.push(vec![flag, *t, (k as f64 + 0.5) / n as f64, *v]);
            }
        }
    }
    output::write_csv(&common.out.join("flow_strip.csv"), &header, rows)?;

    let times: Vec<String> = STRIP_TIMES.iter().map(|t| t.to_string()).collect();
    let raster = prov.stamp(
        stack(&classical, &conjugated)?,
        &[
            ("pair", pair.to_string()),
            ("function", function.to_string()),
            ("speed", STRIP_SPEED.to_string()),
            ("times", times.join(" ")),
            ("depth", common.depth.to_string()),
            ("seed", common.seed.to_string()),
            ("layout", "translation strips on top, conjugated strips below".into()),
        ],
    );
    output::write_raster(&common.out.join("flow_strip.pgm"), &raster)
}
