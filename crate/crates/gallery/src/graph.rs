//! `graph`: samples a transform, or a chain of them, at `(k + 1/2)/n`.

use anyhow::{bail, Context, Result};
use fractal_conjugacy::catalog;
use fractal_conjugacy::code_space::Address;
use fractal_conjugacy::error::Error;
use fractal_conjugacy::geometry::Point;
use fractal_conjugacy::hilbert_space::domain_label;
use fractal_conjugacy::ifs::ContractiveIfs;
use fractal_conjugacy::raster::Raster;
use fractal_conjugacy::transform::TransformPair;
use rayon::prelude::*;

use crate::output::{self, Provenance};
use crate::Common;

/// Pairs of a `+`-separated label, applied left to right.
pub fn parse_chain(label: &str, depth: usize, tol: f64) -> Result<Vec<TransformPair<f64>>> {
    let chain = label
        .split('+')
        .map(|l| Ok(catalog::pair::<f64>(l)?.with_depth(depth).with_tol(tol)))
        .collect::<Result<Vec<_>>>()
        .with_context(|| format!("pair `{label}`"))?;
    for w in chain.windows(2) {
        let (a, b) = (domain_label(w[0].target()), domain_label(w[1].source()));
        if a != b {
            bail!("cannot compose: `{a}` is not `{b}`");
        }
    }
    Ok(chain)
}

/// Smallest interval containing a 1-D attractor.
fn hull(ifs: &ContractiveIfs<f64>) -> (f64, f64) {
    let mut lo = ifs.maps()[0].fixed_point().x;
    let mut hi = lo;
    for _ in 0..256 {
        let (mut a, mut b) = (f64::INFINITY, f64::NEG_INFINITY);
        for m in ifs.maps() {
            let (u, v) = (m.apply(Point::on_line(lo)).x, m.apply(Point::on_line(hi)).x);
            a = a.min(u.min(v));
            b = b.max(u.max(v));
        }
        (lo, hi) = (a, b);
    }
    (lo, hi)
}

/// Address of the attractor point nearest to `x`, for 1-D systems.
fn nearest_address(ifs: &ContractiveIfs<f64>, x: f64, depth: usize) -> Result<Address> {
    let (lo, hi) = hull(ifs);
    let mut z = x;
    let mut symbols = Vec::with_capacity(depth);
    for _ in 0..depth {
        let mut best = (f64::INFINITY, 0usize, z);
        for (i, m) in ifs.maps().iter().enumerate() {
            let (u, v) = (m.apply(Point::on_line(lo)).x, m.apply(Point::on_line(hi)).x);
            let c = z.clamp(u.min(v), u.max(v));
            if (c - z).abs() < best.0 {
                best = ((c - z).abs(), i, c);
            }
        }
        let (_, i, c) = best;
        symbols.push(i as u16 + 1);
        z = ifs.maps()[i].apply_inverse(Point::on_line(c)).x.clamp(lo, hi);
    }
    Ok(Address::new(ifs.alphabet(), symbols)?)
}

/// `T(x)` along the chain; abscissae outside a 1-D source attractor are
/// first moved to the nearest attractor point.
pub fn eval_chain(chain: &[TransformPair<f64>], x: f64) -> Result<Point<f64>> {
    let first = &chain[0];
    let mut y = match first.transform(Point::on_line(x)) {
        Ok(y) => y,
        Err(Error::PointNotInAttractor { .. }) => {
            let a = nearest_address(first.source(), x, first.depth())?;
            first.target().coding_map(&a, first.target().base_point())?
        }
        Err(e) => return Err(e.into()),
    };
    for tp in &chain[1..] {
        y = tp.transform(y)?;
    }
    Ok(y)
}

pub fn run(label: &str, n: usize, common: &Common, prov: &Provenance) -> Result<()> {
    if n == 0 {
        bail!("--n must be positive");
    }
    let chain = parse_chain(label, common.depth, common.tol)?;
    if chain[0].source().dim() != 1 {
        bail!("graph needs a source on a line, `{label}` starts in the plane");
    }
    let plane = chain.last().map_or(1, |tp| tp.target().dim()) == 2;
    let xs: Vec<f64> = (0..n).map(|k| (k as f64 + 0.5) / n as f64).collect();
    let ys = xs
        .par_iter()
        .map(|&x| eval_chain(&chain, x))
        .collect::<Result<Vec<_>>>()?;

    let header: Vec<String> = if plane {
        vec!["x".into(), "y1".into(), "y2".into()]
    } else {
        vec!["x".into(), "y".into()]
    };
    let rows = xs.iter().zip(&ys).map(|(&x, p)| if plane { vec![x, p.x, p.y] } else { vec![x, p.x] });
    output::write_csv(&common.out.join("graph.csv"), &header, rows)?;

    let mut pixels = vec![255u8; n * n];
    let cell = |v: f64| ((v * n as f64).floor() as isize).clamp(0, n as isize - 1) as usize;
    for (&x, p) in xs.iter().zip(&ys) {
        let (u, v) = if plane { (p.x, p.y) } else { (x, p.x) };
        if (0.0..=1.0).contains(&u) && (0.0..=1.0).contains(&v) {
            pixels[(n - 1 - cell(v)) * n + cell(u)] = 0;
        }
    }
    let raster = prov.stamp(
        Raster::gray(n, n, pixels)?,
        &[
            ("pair", label.to_string()),
            ("seed", common.seed.to_string()),
            ("depth", common.depth.to_string()),
            ("tol", common.tol.to_string()),
            ("window", "[0,1]x[0,1]".into()),
        ],
    );
    output::write_raster(&common.out.join("graph.pgm"), &raster)
}
