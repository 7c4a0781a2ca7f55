//! Haar wavelets on `[0, 1]` and the action of `U = U_{FG₂}` on them.
//!
//! `U H_σ = (−1)^{|σ|} H_{σ'}` where `σ'_l = (−1)^{l+1} σ_l + (1 + (−1)^k)/2`.
//! The exponent `k` is read as the position `l` ([`IndexReading::Position`]):
//! odd positions keep their bit and even positions flip it. Reading `k` as
//! the word length produces the digit 2 for even lengths and is kept only
//! for comparison.

use std::fmt;
use std::str::FromStr;

use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::geometry::Point;
use crate::hilbert_space::midpoint_grid;
use crate::scalar::Scalar;
use crate::transform::TransformPair;

/// A word `σ ∈ {0,1}^k`; the empty word is the mother wavelet.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct HaarWord {
    bits: Vec<u8>,
}

impl HaarWord {
    pub fn new(bits: Vec<u8>) -> Result<Self> {
        if let Some(b) = bits.iter().find(|&&b| b > 1) {
            return Err(Error::InvalidIndex(format!("Haar bit {b}")));
        }
        Ok(Self { bits })
    }

    pub fn empty() -> Self {
        Self { bits: Vec::new() }
    }

    pub fn bits(&self) -> &[u8] {
        &self.bits
    }

    pub fn level(&self) -> usize {
        self.bits.len()
    }

    /// The word as a binary integer, `0.σ₁σ₂⋯σ_k = position / 2^k`.
    pub fn position(&self) -> usize {
        self.bits.iter().fold(0, |acc, &b| 2 * acc + usize::from(b))
    }

    pub fn from_position(level: usize, position: usize) -> Self {
        let bits = (0..level).rev().map(|s| ((position >> s) & 1) as u8).collect();
        Self { bits }
    }

    /// All words of the given level in increasing position.
    pub fn all(level: usize) -> Vec<Self> {
        (0..1usize << level).map(|p| Self::from_position(level, p)).collect()
    }

    /// `H_σ(x) = 2^{|σ|/2} H_∅(2^{|σ|} x − position)`.
    pub fn value(&self, x: f64) -> f64 {
        if !(0.0..1.0).contains(&x) {
            return 0.0;
        }
        let k = self.level();
        let scaled = x * (1u64 << k) as f64;
        let cell = scaled.floor();
        if cell as usize != self.position() {
            return 0.0;
        }
        let amp = 2f64.powf(k as f64 / 2.0);
        if scaled - cell < 0.5 {
            amp
        } else {
            -amp
        }
    }
}

impl fmt::Display for HaarWord {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.bits.is_empty() {
            return f.write_str("empty");
        }
        for b in &self.bits {
            write!(f, "{b}")?;
        }
        Ok(())
    }
}

impl FromStr for HaarWord {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        if s == "empty" || s.is_empty() {
            return Ok(Self::empty());
        }
        let bits = s
            .chars()
            .map(|c| match c {
                '0' => Ok(0),
                '1' => Ok(1),
                other => Err(Error::Parse(format!("bad Haar bit `{other}`"))),
            })
            .collect::<Result<_>>()?;
        Ok(Self { bits })
    }
}

/// Element of the Haar basis: the constant or a wavelet.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub enum HaarElement {
    Constant,
    Wavelet(HaarWord),
}

impl HaarElement {
    /// Enumeration `1 ↦ constant`, `2 ↦ H_∅`, then words by level and position.
    pub fn from_index(n: usize) -> Option<Self> {
        match n {
            0 => None,
            1 => Some(HaarElement::Constant),
            _ => {
                let m = n - 1;
                let level = (usize::BITS - 1 - m.leading_zeros()) as usize;
                Some(HaarElement::Wavelet(HaarWord::from_position(level, m - (1 << level))))
            }
        }
    }

    pub fn index(&self) -> usize {
        match self {
            HaarElement::Constant => 1,
            HaarElement::Wavelet(w) => (1 << w.level()) + w.position() + 1,
        }
    }

    /// Finest dyadic level on which the element is not constant.
    pub fn level(&self) -> usize {
        match self {
            HaarElement::Constant => 0,
            HaarElement::Wavelet(w) => w.level(),
        }
    }

    pub fn value(&self, x: f64) -> f64 {
        match self {
            HaarElement::Constant => {
                if (0.0..1.0).contains(&x) {
                    1.0
                } else {
                    0.0
                }
            }
            HaarElement::Wavelet(w) => w.value(x),
        }
    }
}

/// Binding of `k` in the printed index formula.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum IndexReading {
    /// `k = l`.
    Position,
    /// `k = |σ|`.
    WordLength,
}

impl IndexReading {
    pub fn label(self) -> &'static str {
        match self {
            IndexReading::Position => "k=l",
            IndexReading::WordLength => "k=|sigma|",
        }
    }
}

/// Predicted sign and image word; `None` when the reading yields a digit
/// outside `{0, 1}`.
pub fn haar_action_predicted(w: &HaarWord, reading: IndexReading) -> Option<(i8, HaarWord)> {
    let len = w.level() as i64;
    let bits: Option<Vec<u8>> = w
        .bits
        .iter()
        .enumerate()
        .map(|(i, &b)| {
            let l = i as i64 + 1;
            let k = match reading {
                IndexReading::Position => l,
                IndexReading::WordLength => len,
            };
            let sign = if (l + 1) % 2 == 0 { 1 } else { -1 };
            let shift = if k % 2 == 0 { 1 } else { 0 };
            let v = sign * i64::from(b) + shift;
            u8::try_from(v).ok().filter(|&v| v <= 1)
        })
        .collect();
    let sign = if len % 2 == 0 { 1 } else { -1 };
    bits.map(|bits| (sign, HaarWord { bits }))
}

/// Rounding allowance on computed Haar coefficients.
pub const ACTION_TOLERANCE: f64 = 1e-12;

/// Haar expansion of `U H_σ` restricted to the wavelets of level `|σ|`.
#[derive(Clone, Debug, PartialEq)]
pub struct HaarAction {
    /// Coefficient against each wavelet of the level, by position.
    pub coefficients: Vec<f64>,
    /// `‖U H_σ‖² − ∑ c²`: mass outside the level.
    pub residual: f64,
}

impl HaarAction {
    /// `(sign, word)` when exactly one coefficient is `±1` and the rest
    /// vanish, up to [`ACTION_TOLERANCE`].
    pub fn single(&self, level: usize) -> Option<(i8, HaarWord)> {
        let nonzero: Vec<(usize, f64)> = self
            .coefficients
            .iter()
            .copied()
            .enumerate()
            .filter(|&(_, c)| c.abs() > ACTION_TOLERANCE)
            .collect();
        match nonzero.as_slice() {
            [(pos, c)] if (c.abs() - 1.0).abs() <= ACTION_TOLERANCE && self.residual.abs() <= ACTION_TOLERANCE => {
                Some((c.signum() as i8, HaarWord::from_position(level, *pos)))
            }
            _ => None,
        }
    }
}

/// Evaluates `U φ = φ ∘ T_GF` on a fine dyadic midpoint grid.
pub struct HaarOracle {
    resolution_log2: u32,
    /// `T_GF` at the grid midpoints.
    image: Vec<f64>,
}

impl HaarOracle {
    /// `pair` is `F → G`; the grid has `2^resolution_log2` midpoints.
    pub fn new<T: Scalar>(pair: &TransformPair<T>, resolution_log2: u32) -> Result<Self> {
        let back = pair.inverse();
        let image = midpoint_grid(resolution_log2)
            .par_iter()
            .map(|&y| Ok(back.transform(Point::on_line(T::lit(y)))?.x.as_f64()))
            .collect::<Result<_>>()?;
        Ok(Self { resolution_log2, image })
    }

    pub fn resolution(&self) -> usize {
        self.image.len()
    }

    pub fn grid(&self) -> Vec<f64> {
        midpoint_grid(self.resolution_log2)
    }

    /// `(U φ)` at the grid midpoints.
    pub fn pullback(&self, phi: impl Fn(f64) -> f64 + Sync) -> Vec<f64> {
        self.image.par_iter().map(|&x| phi(x)).collect()
    }

    /// Expansion of `U H_σ` over the wavelets of level `|σ|`, by midpoint
    /// averages (exact for piecewise constants on the grid).
    pub fn computed(&self, w: &HaarWord) -> Result<HaarAction> {
        self.computed_element(&HaarElement::Wavelet(w.clone()))
    }

    pub fn computed_element(&self, e: &HaarElement) -> Result<HaarAction> {
        let level = e.level();
        let required = 1usize << (level + 4);
        if self.resolution() < required {
            return Err(Error::ResolutionTooCoarse {
                resolution: self.resolution(),
                required,
            });
        }
        let grid = self.grid();
        let u = self.pullback(|x| e.value(x));
        let n = grid.len() as f64;
        let targets: Vec<HaarElement> = match e {
            HaarElement::Constant => vec![HaarElement::Constant],
            HaarElement::Wavelet(_) => HaarWord::all(level).into_iter().map(HaarElement::Wavelet).collect(),
        };
        let coefficients: Vec<f64> = targets
            .iter()
            .map(|t| grid.iter().zip(&u).map(|(&x, &v)| v * t.value(x)).sum::<f64>() / n)
            .collect();
        let total: f64 = u.iter().map(|v| v * v).sum::<f64>() / n;
        let residual = total - coefficients.iter().map(|c| c * c).sum::<f64>();
        Ok(HaarAction { coefficients, residual })
    }

    /// Reading under which every word of level `1..=max_level` matches the
    /// computed action.
    pub fn resolve_reading(&self, max_level: usize) -> Result<Option<IndexReading>> {
        for reading in [IndexReading::Position, IndexReading::WordLength] {
            let (hits, total) = self.agreement(reading, max_level)?;
            if hits == total {
                return Ok(Some(reading));
            }
        }
        Ok(None)
    }

    /// `(matching words, total words)` over levels `1..=max_level`.
    pub fn agreement(&self, reading: IndexReading, max_level: usize) -> Result<(usize, usize)> {
        let mut hits = 0;
        let mut total = 0;
        for level in 1..=max_level {
            for w in HaarWord::all(level) {
                total += 1;
                let computed = self.computed(&w)?.single(level);
                if computed.is_some() && computed == haar_action_predicted(&w, reading) {
                    hits += 1;
                }
            }
        }
        Ok((hits, total))
    }

    /// `max |P(U f) − U(P f)|` on the grid, with `P` the projection onto
    /// levels `≤ depth` and `f` given by its values on `2^{depth+2}` cells.
    pub fn projection_defect(&self, depth: usize, cell_values: &[f64]) -> Result<f64> {
        let fine = depth + 2;
        if cell_values.len() != 1 << fine {
            return Err(Error::InvalidParameter(format!(
                "expected {} cell values, got {}",
                1usize << fine,
                cell_values.len()
            )));
        }
        let required = 1usize << (depth + 4);
        if self.resolution() < required {
            return Err(Error::ResolutionTooCoarse {
                resolution: self.resolution(),
                required,
            });
        }
        let f = |x: f64| cell_values[((x * (1u64 << fine) as f64) as usize).min(cell_values.len() - 1)];
        let coarse = 1usize << (depth + 1);
        // P averages over the cells of level depth+1
        let project = |values: &[f64]| -> Vec<f64> {
            let per = values.len() / coarse;
            values
                .chunks(per)
                .flat_map(|c| {
                    let avg = c.iter().sum::<f64>() / per as f64;
                    std::iter::repeat_n(avg, per)
                })
                .collect()
        };
        let grid = self.grid();
        let f_grid: Vec<f64> = grid.iter().map(|&x| f(x)).collect();
        let pf = project(&f_grid);
        let uf = self.pullback(f);
        let p_uf = project(&uf);
        let per = grid.len() / coarse;
        let u_pf = self.pullback(|x| pf[((x * coarse as f64) as usize).min(coarse - 1) * per]);
        Ok(p_uf
            .iter()
            .zip(&u_pf)
            .map(|(a, b)| (a - b).abs())
            .fold(0.0, f64::max))
    }
}

/// `a H_∅ + ∑ c_σ (H_σ + H_{σ'})` over even-level words.
pub fn invariant_signal(a_empty: f64, terms: &[(HaarWord, f64)]) -> Result<impl Fn(f64) -> f64 + Sync> {
    let mut pairs = Vec::with_capacity(terms.len());
    for (w, c) in terms {
        if w.level() % 2 != 0 {
            return Err(Error::InvalidIndex(format!("word {w} has odd level")));
        }
        let (_, w2) = haar_action_predicted(w, IndexReading::Position).expect("position reading is binary");
        pairs.push((w.clone(), w2, *c));
    }
    let mother = HaarWord::empty();
    Ok(move |x: f64| {
        a_empty * mother.value(x) + pairs.iter().map(|(w, w2, c)| c * (w.value(x) + w2.value(x))).sum::<f64>()
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn mother_wavelet_values() {
        let h = HaarWord::empty();
        assert_eq!(h.value(0.25), 1.0);
        assert_eq!(h.value(0.75), -1.0);
        let w: HaarWord = "01".parse().unwrap();
        assert_eq!(w.value(0.3), 2.0);
        assert_eq!(w.value(0.45), -2.0);
        assert_eq!(w.value(0.6), 0.0);
    }

    #[test]
    fn enumeration_roundtrip() {
        for n in 1..200 {
            assert_eq!(HaarElement::from_index(n).unwrap().index(), n);
        }
        assert_eq!(HaarElement::from_index(2), Some(HaarElement::Wavelet(HaarWord::empty())));
        assert_eq!(HaarElement::from_index(0), None);
    }

    #[test]
    fn predicted_readings() {
        let w: HaarWord = "0".parse().unwrap();
        let (s, p) = haar_action_predicted(&w, IndexReading::Position).unwrap();
        assert_eq!((s, p.level()), (-1, 1));
        assert_eq!(haar_action_predicted(&HaarWord::empty(), IndexReading::Position), Some((1, HaarWord::empty())));
        let w2: HaarWord = "00".parse().unwrap();
        assert_eq!(haar_action_predicted(&w2, IndexReading::Position).unwrap().1.to_string(), "01");
        let w3: HaarWord = "10".parse().unwrap();
        assert_eq!(haar_action_predicted(&w3, IndexReading::WordLength), None);
    }
}
