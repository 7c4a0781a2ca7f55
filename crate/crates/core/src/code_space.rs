//! Finite-depth addresses in code space.
//!
//! Symbols run over `1..=N`. The lexicographic order used everywhere in the
//! crate ranks symbol 1 as the GREATEST and N as the least; [`lex_compare`]
//! is the only place that encodes this.

use std::cmp::Ordering;
use std::fmt;

use rand::distributions::{Distribution, WeightedIndex};
use rand::Rng;

use crate::error::{Error, Result};

/// Working depth used when a caller does not pick one.
pub const DEFAULT_DEPTH: usize = 48;

/// A single code-space symbol in `1..=alphabet`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct Symbol {
    value: u16,
    alphabet: u16,
}

impl Symbol {
    pub fn new(value: u16, alphabet: u16) -> Result<Self> {
        if value == 0 || value > alphabet {
            return Err(Error::InvalidSymbol { value, alphabet });
        }
        Ok(Self { value, alphabet })
    }

    pub fn value(self) -> u16 {
        self.value
    }

    pub fn alphabet(self) -> u16 {
        self.alphabet
    }

    /// Zero-based index of the map this symbol selects.
    pub fn index(self) -> usize {
        usize::from(self.value - 1)
    }
}

/// Truncation `σ₁⋯σ_K` of an infinite code-space word.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Address {
    alphabet: u16,
    symbols: Vec<u16>,
}

impl Address {
    pub fn new(alphabet: u16, symbols: Vec<u16>) -> Result<Self> {
        if alphabet < 1 {
            return Err(Error::InvalidParameter("alphabet must be non-empty".into()));
        }
        if symbols.is_empty() {
            return Err(Error::DepthTooShallow { min: 1, got: 0 });
        }
        if let Some(&bad) = symbols.iter().find(|&&s| s == 0 || s > alphabet) {
            return Err(Error::InvalidSymbol { value: bad, alphabet });
        }
        Ok(Self { alphabet, symbols })
    }

    /// Constant word `s s s ⋯` of the given depth.
    pub fn constant(alphabet: u16, symbol: u16, depth: usize) -> Result<Self> {
        Self::new(alphabet, vec![symbol; depth])
    }

    pub(crate) fn from_raw(alphabet: u16, symbols: Vec<u16>) -> Self {
        debug_assert!(!symbols.is_empty());
        debug_assert!(symbols.iter().all(|&s| s >= 1 && s <= alphabet));
        Self { alphabet, symbols }
    }

    pub fn alphabet(&self) -> u16 {
        self.alphabet
    }

    pub fn depth(&self) -> usize {
        self.symbols.len()
    }

    pub fn symbols(&self) -> &[u16] {
        &self.symbols
    }

    pub fn symbol(&self, k: usize) -> Symbol {
        Symbol {
            value: self.symbols[k],
            alphabet: self.alphabet,
        }
    }

    pub fn first(&self) -> Symbol {
        self.symbol(0)
    }

    /// Leading `k` symbols.
    pub fn prefix(&self, k: usize) -> Result<Self> {
        if k == 0 || k > self.depth() {
            return Err(Error::InvalidParameter(format!(
                "prefix length {k} outside 1..={}",
                self.depth()
            )));
        }
        Ok(Self::from_raw(self.alphabet, self.symbols[..k].to_vec()))
    }

    /// Appends a symbol (used for cylinder refinement).
    pub fn extended(&self, symbol: u16) -> Result<Self> {
        let mut symbols = self.symbols.clone();
        symbols.push(symbol);
        Self::new(self.alphabet, symbols)
    }

    /// Parses the serialized form: digit strings for `N ≤ 9`, dot-separated
    /// integers otherwise.
    pub fn parse(text: &str, alphabet: u16) -> Result<Self> {
        let text = text.trim();
        let symbols: Vec<u16> = if alphabet <= 9 {
            text.chars()
                .map(|c| {
                    c.to_digit(10)
                        .map(|d| d as u16)
                        .ok_or_else(|| Error::Parse(format!("bad address digit `{c}`")))
                })
                .collect::<Result<_>>()?
        } else {
            text.split('.')
                .map(|t| t.parse::<u16>().map_err(|e| Error::Parse(format!("bad symbol `{t}`: {e}"))))
                .collect::<Result<_>>()?
        };
        Self::new(alphabet, symbols)
    }
}

impl fmt::Display for Address {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.alphabet <= 9 {
            for s in &self.symbols {
                write!(f, "{s}")?;
            }
            Ok(())
        } else {
            let parts: Vec<String> = self.symbols.iter().map(|s| s.to_string()).collect();
            f.write_str(&parts.join("."))
        }
    }
}

/// Result of comparing two finite addresses.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum LexOrder {
    Less,
    /// One address is a prefix of the other (or they are identical).
    EqualPrefix,
    Greater,
}

impl LexOrder {
    /// `EqualPrefix` maps to `Equal`.
    pub fn to_ordering(self) -> Ordering {
        match self {
            LexOrder::Less => Ordering::Less,
            LexOrder::EqualPrefix => Ordering::Equal,
            LexOrder::Greater => Ordering::Greater,
        }
    }
}

/// Compares two symbols under the code-space order, where 1 is greatest.
#[inline]
pub fn symbol_order(a: u16, b: u16) -> Ordering {
    b.cmp(&a)
}

/// Lexicographic comparison with symbol 1 greatest.
pub fn lex_compare(a: &Address, b: &Address) -> Result<LexOrder> {
    if a.alphabet != b.alphabet {
        return Err(Error::AlphabetMismatch {
            left: a.alphabet,
            right: b.alphabet,
        });
    }
    for (&x, &y) in a.symbols.iter().zip(&b.symbols) {
        match symbol_order(x, y) {
            Ordering::Less => return Ok(LexOrder::Less),
            Ordering::Greater => return Ok(LexOrder::Greater),
            Ordering::Equal => {}
        }
    }
    Ok(LexOrder::EqualPrefix)
}

/// The shift `S(σ₁σ₂⋯) = σ₂σ₃⋯`.
pub fn shift(a: &Address) -> Result<Address> {
    if a.depth() < 2 {
        return Err(Error::DepthTooShallow {
            min: 2,
            got: a.depth(),
        });
    }
    Ok(Address::from_raw(a.alphabet, a.symbols[1..].to_vec()))
}

/// Code-space metric `2^{-k}`, `k` the first (1-based) index of disagreement.
pub fn code_distance(a: &Address, b: &Address) -> Result<f64> {
    if a.alphabet != b.alphabet {
        return Err(Error::AlphabetMismatch {
            left: a.alphabet,
            right: b.alphabet,
        });
    }
    if a.depth() != b.depth() {
        return Err(Error::DepthMismatch {
            left: a.depth(),
            right: b.depth(),
        });
    }
    Ok(a.symbols
        .iter()
        .zip(&b.symbols)
        .position(|(x, y)| x != y)
        .map_or(0.0, |k| 0.5f64.powi(k as i32 + 1)))
}

/// Weights `p₁,…,p_N` of a p-measure.
#[derive(Clone, Debug, PartialEq)]
pub struct ProbabilityVector {
    weights: Vec<f64>,
}

impl ProbabilityVector {
    pub const SUM_TOLERANCE: f64 = 1e-12;

    pub fn new(weights: Vec<f64>) -> Result<Self> {
        if weights.is_empty() {
            return Err(Error::InvalidProbability("no weights".into()));
        }
        if let Some(w) = weights.iter().find(|w| !(w.is_finite() && **w > 0.0)) {
            return Err(Error::InvalidProbability(format!("weight {w} is not positive")));
        }
        let sum: f64 = weights.iter().sum();
        if (sum - 1.0).abs() > Self::SUM_TOLERANCE {
            return Err(Error::InvalidProbability(format!("weights sum to {sum}")));
        }
        Ok(Self { weights })
    }

    pub fn uniform(n: usize) -> Self {
        Self {
            weights: vec![1.0 / n as f64; n],
        }
    }

    /// Normalizes arbitrary positive weights (e.g. tile areas).
    pub fn proportional(raw: &[f64]) -> Result<Self> {
        let sum: f64 = raw.iter().sum();
        if !(sum > 0.0) {
            return Err(Error::InvalidProbability("weights do not sum to a positive value".into()));
        }
        Self::new(raw.iter().map(|w| w / sum).collect()).or_else(|_| {
            // renormalize once more to absorb rounding of the division
            let v: Vec<f64> = raw.iter().map(|w| w / sum).collect();
            let s2: f64 = v.iter().sum();
            Self::new(v.iter().map(|w| w / s2).collect())
        })
    }

    pub fn len(&self) -> usize {
        self.weights.len()
    }

    pub fn is_empty(&self) -> bool {
        self.weights.is_empty()
    }

    pub fn weights(&self) -> &[f64] {
        &self.weights
    }

    pub fn weight(&self, symbol: u16) -> f64 {
        self.weights[usize::from(symbol) - 1]
    }

    pub(crate) fn sampler(&self) -> WeightedIndex<f64> {
        WeightedIndex::new(&self.weights).expect("validated weights")
    }
}

/// Bernoulli measure `ν_p([σ₁⋯σₙ]) = ∏ p_{σᵢ}` of a cylinder.
pub fn cylinder_measure(prefix: &Address, p: &ProbabilityVector) -> Result<f64> {
    if usize::from(prefix.alphabet) != p.len() {
        return Err(Error::AlphabetMismatch {
            left: prefix.alphabet,
            right: p.len() as u16,
        });
    }
    Ok(prefix.symbols.iter().map(|&s| p.weight(s)).product())
}

/// Draws i.i.d. symbols with `P(i) = pᵢ`.
pub fn sample_bernoulli<R: Rng + ?Sized>(p: &ProbabilityVector, depth: usize, rng: &mut R) -> Result<Address> {
    if depth == 0 {
        return Err(Error::DepthTooShallow { min: 1, got: 0 });
    }
    let dist = p.sampler();
    let symbols = (0..depth).map(|_| dist.sample(rng) as u16 + 1).collect();
    Ok(Address::from_raw(p.len() as u16, symbols))
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    fn addr(s: &str) -> Address {
        Address::parse(s, 3).unwrap()
    }

    #[test]
    fn lex_examples() {
        assert_eq!(lex_compare(&addr("122"), &addr("211")).unwrap(), LexOrder::Greater);
        assert_eq!(lex_compare(&addr("12"), &addr("121")).unwrap(), LexOrder::EqualPrefix);
        assert_eq!(lex_compare(&addr("21"), &addr("23")).unwrap(), LexOrder::Greater);
        assert_eq!(lex_compare(&addr("23"), &addr("21")).unwrap(), LexOrder::Less);
        let two = Address::parse("12", 2).unwrap();
        assert!(matches!(
            lex_compare(&addr("12"), &two),
            Err(Error::AlphabetMismatch { .. })
        ));
    }

    #[test]
    fn shift_examples() {
        assert_eq!(shift(&addr("123")).unwrap(), addr("23"));
        assert_eq!(shift(&addr("22")).unwrap(), addr("2"));
        assert!(shift(&addr("2")).is_err());
        let mut a = addr("1231231");
        for _ in 0..6 {
            a = shift(&a).unwrap();
        }
        assert_eq!(a.depth(), 1);
    }

    #[test]
    fn distance_examples() {
        assert_eq!(code_distance(&addr("111"), &addr("121")).unwrap(), 0.25);
        assert_eq!(code_distance(&addr("121"), &addr("121")).unwrap(), 0.0);
        assert_eq!(code_distance(&addr("211"), &addr("111")).unwrap(), 0.5);
        assert!(code_distance(&addr("11"), &addr("111")).is_err());
    }

    #[test]
    fn cylinder_examples() {
        let half = ProbabilityVector::uniform(2);
        let a = Address::parse("12", 2).unwrap();
        assert_eq!(cylinder_measure(&a, &half).unwrap(), 0.25);
        let p = ProbabilityVector::new(vec![0.3, 0.7]).unwrap();
        assert_eq!(cylinder_measure(&Address::parse("1", 2).unwrap(), &p).unwrap(), 0.3);
        let mut total = 0.0;
        for w in 0..8u16 {
            let s = vec![(w & 1) + 1, ((w >> 1) & 1) + 1, ((w >> 2) & 1) + 1];
            total += cylinder_measure(&Address::new(2, s).unwrap(), &half).unwrap();
        }
        assert_eq!(total, 1.0);
    }

    #[test]
    fn probability_vector_validation() {
        assert!(ProbabilityVector::new(vec![0.5, 0.5]).is_ok());
        assert!(ProbabilityVector::new(vec![0.5, 0.6]).is_err());
        assert!(ProbabilityVector::new(vec![1.0, 0.0]).is_err());
        assert!(ProbabilityVector::new(vec![]).is_err());
        let p = ProbabilityVector::proportional(&[1.0, 3.0]).unwrap();
        assert_eq!(p.weights(), &[0.25, 0.75]);
    }

    #[test]
    fn serialization() {
        let a = Address::new(2, vec![1, 2, 2, 1]).unwrap();
        assert_eq!(a.to_string(), "1221");
        let b = Address::new(12, vec![1, 12, 3]).unwrap();
        assert_eq!(b.to_string(), "1.12.3");
        assert_eq!(Address::parse("1.12.3", 12).unwrap(), b);
        assert!(Address::parse("13", 2).is_err());
        assert!(Address::parse("", 2).is_err());
    }

    #[test]
    fn bernoulli_frequency_and_determinism() {
        let p = ProbabilityVector::uniform(2);
        let mut rng = ChaCha8Rng::seed_from_u64(11);
        let a = sample_bernoulli(&p, 1_000_000, &mut rng).unwrap();
        let ones = a.symbols().iter().filter(|&&s| s == 1).count() as f64 / 1e6;
        assert!((ones - 0.5).abs() < 0.002, "frequency {ones}");

        let x = sample_bernoulli(&p, 64, &mut ChaCha8Rng::seed_from_u64(5)).unwrap();
        let y = sample_bernoulli(&p, 64, &mut ChaCha8Rng::seed_from_u64(5)).unwrap();
        assert_eq!(x, y);
    }

    #[test]
    fn bernoulli_nearly_degenerate() {
        // P(all ones) = (1-ε)^20 ≈ 1 - 2e-5
        let eps = 1e-6;
        let p = ProbabilityVector::new(vec![1.0 - eps, eps]).unwrap();
        let mut rng = ChaCha8Rng::seed_from_u64(3);
        let trials = 20_000;
        let all_ones = (0..trials)
            .filter(|_| {
                sample_bernoulli(&p, 20, &mut rng)
                    .unwrap()
                    .symbols()
                    .iter()
                    .all(|&s| s == 1)
            })
            .count();
        // expected misses 0.4; allow a handful
        assert!(trials - all_ones <= 5, "{} non-constant words", trials - all_ones);
    }
}
