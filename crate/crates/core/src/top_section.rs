//! Greedy top address `τ(x) = max π⁻¹(x)`.
//!
//! Each step keeps the smallest map index whose tile contains the current
//! point, then pulls the point back through that map. The membership slack
//! starts at `tol` and follows the rounding envelope `e ← e·‖Lᵢ⁻¹‖ + r`,
//! where `r` is the system's per-step inverse rounding (zero for exact
//! systems). Once the envelope exceeds [`STOP_FRACTION`] of the diameter the
//! remaining digits carry no information and are filled with symbol 1.

use crate::code_space::Address;
use crate::error::{Error, Result};
use crate::geometry::Point;
use crate::ifs::ContractiveIfs;
use crate::scalar::Scalar;

/// Envelope size, relative to the diameter, at which refinement stops.
pub const STOP_FRACTION: f64 = 1.0 / 32.0;

/// Slack multiplier for the single retry after a mid-descent miss.
pub const RETRY_FACTOR: f64 = 1e3;

/// Top address of `x` truncated to `depth` symbols.
pub fn top_address<T: Scalar>(ifs: &ContractiveIfs<T>, x: Point<T>, depth: usize, tol: T) -> Result<Address> {
    top_address_resolved(ifs, x, depth, tol).map(|(a, _)| a)
}

/// Top address together with the number of symbols read before the
/// envelope stop; the rest are fill.
pub fn top_address_resolved<T: Scalar>(
    ifs: &ContractiveIfs<T>,
    x: Point<T>,
    depth: usize,
    tol: T,
) -> Result<(Address, usize)> {
    if depth == 0 {
        return Err(Error::DepthTooShallow { min: 1, got: 0 });
    }
    let (symbols, resolved) = match greedy(ifs, x, depth, tol) {
        Err(Error::PointNotInAttractor { step, .. }) if step > 0 => {
            let retry = T::lit(RETRY_FACTOR) * tol.max(T::epsilon() * ifs.diameter());
            greedy(ifs, x, depth, retry)?
        }
        other => other?,
    };
    Ok((Address::from_raw(ifs.alphabet(), symbols), resolved))
}

fn greedy<T: Scalar>(ifs: &ContractiveIfs<T>, x: Point<T>, depth: usize, tol: T) -> Result<(Vec<u16>, usize)> {
    let r = ifs.inverse_rounding();
    let stop = T::lit(STOP_FRACTION) * ifs.diameter();
    let mut symbols = Vec::with_capacity(depth);
    let mut z = x;
    let mut e = tol + r;
    for step in 0..depth {
        if e > stop {
            symbols.resize(depth, 1);
            return Ok((symbols, step));
        }
        let i = (0..ifs.len())
            .find(|&i| ifs.tile_member(i, z, e))
            .ok_or_else(|| Error::PointNotInAttractor {
                label: ifs.label().to_string(),
                step,
                point: format!("{x}"),
            })?;
        symbols.push(i as u16 + 1);
        let m = &ifs.maps()[i];
        z = m.apply_inverse(z);
        e = e * m.inverse_lipschitz() + r;
    }
    Ok((symbols, depth))
}

/// `|x − π(τ(x))|` at the given depth.
pub fn section_roundtrip_residual<T: Scalar>(ifs: &ContractiveIfs<T>, x: Point<T>, depth: usize, tol: T) -> Result<T> {
    let a = top_address(ifs, x, depth, tol)?;
    let y = ifs.coding_map(&a, ifs.base_point())?;
    Ok(x.dist(y))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::code_space::ProbabilityVector;
    use crate::geometry::AffineMap;
    use crate::region::{Region, SelfSimilarSet};
    use std::sync::Arc;

    fn binary() -> ContractiveIfs<f64> {
        ContractiveIfs::new(
            "binary",
            vec![AffineMap::line(0.5, 0.0).unwrap(), AffineMap::line(0.5, 0.5).unwrap()],
            Region::unit_interval(),
            1.0,
            ProbabilityVector::uniform(2),
        )
        .unwrap()
        .with_exact_inverse()
    }

    #[test]
    fn half_prefers_left_tile() {
        let a = top_address(&binary(), Point::on_line(0.5), 48, 0.0).unwrap();
        assert_eq!(a.symbols()[0], 1);
        assert!(a.symbols()[1..].iter().all(|&s| s == 2));
        let z = top_address(&binary(), Point::on_line(0.0), 48, 0.0).unwrap();
        assert!(z.symbols().iter().all(|&s| s == 1));
    }

    #[test]
    fn cantor_two_thirds() {
        let maps = vec![
            AffineMap::line(1.0 / 3.0, 0.0).unwrap(),
            AffineMap::line(1.0 / 3.0, 2.0 / 3.0).unwrap(),
        ];
        let region = Region::SelfSimilar(Arc::new(SelfSimilarSet::new(maps.clone(), Region::unit_interval(), 1.0)));
        let c = ContractiveIfs::new("cantor", maps, region, 1.0, ProbabilityVector::uniform(2)).unwrap();
        let a = top_address(&c, Point::on_line(2.0 / 3.0), 20, 0.0).unwrap();
        assert_eq!(a.symbols()[0], 2);
        assert!(a.symbols()[1..].iter().all(|&s| s == 1));
        assert!(matches!(
            top_address(&c, Point::on_line(0.5), 20, 0.0),
            Err(Error::PointNotInAttractor { step: 0, .. })
        ));
    }

    #[test]
    fn residual_is_tiny() {
        let f = binary();
        for k in 0..100 {
            let x = (k as f64 + 0.37) / 100.0;
            assert!(section_roundtrip_residual(&f, Point::on_line(x), 48, 0.0).unwrap() < 1e-14);
        }
    }
}
