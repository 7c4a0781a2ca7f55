//! Gauss–Legendre rules and composite quadrature on `[0, 1]`.

use std::f64::consts::PI;

use rayon::prelude::*;

/// Default Gauss–Legendre order for smooth integrands.
pub const DEFAULT_ORDER: usize = 64;

/// Legendre polynomial `P_n(x)` and its derivative, by the three-term
/// recurrence.
pub fn legendre_with_derivative(n: usize, x: f64) -> (f64, f64) {
    if n == 0 {
        return (1.0, 0.0);
    }
    let (mut p0, mut p1) = (1.0, x);
    for k in 2..=n {
        let k = k as f64;
        let p2 = ((2.0 * k - 1.0) * x * p1 - (k - 1.0) * p0) / k;
        p0 = p1;
        p1 = p2;
    }
    let n = n as f64;
    let dp = if (1.0 - x * x).abs() < 1e-300 {
        // endpoint value n(n+1)/2 · x^{n+1}
        0.5 * n * (n + 1.0) * x.powf(n + 1.0)
    } else {
        n * (p0 - x * p1) / (1.0 - x * x)
    };
    (p1, dp)
}

/// `P_n(x)` on `[-1, 1]`.
pub fn legendre(n: usize, x: f64) -> f64 {
    legendre_with_derivative(n, x).0
}

/// Nodes and weights of the `n`-point rule on `[-1, 1]`.
#[derive(Clone, Debug, PartialEq)]
pub struct GaussLegendre {
    pub nodes: Vec<f64>,
    pub weights: Vec<f64>,
}

impl GaussLegendre {
    /// Newton iteration from Chebyshev-like initial guesses.
    pub fn new(n: usize) -> Self {
        assert!(n >= 1, "Gauss-Legendre order must be positive");
        let mut nodes = vec![0.0; n];
        let mut weights = vec![0.0; n];
        let m = n.div_ceil(2);
        for i in 0..m {
            let mut x = (PI * (i as f64 + 0.75) / (n as f64 + 0.5)).cos();
            for _ in 0..100 {
                let (p, dp) = legendre_with_derivative(n, x);
                let dx = p / dp;
                x -= dx;
                if dx.abs() < 1e-16 {
                    break;
                }
            }
            let (_, dp) = legendre_with_derivative(n, x);
            let w = 2.0 / ((1.0 - x * x) * dp * dp);
            nodes[i] = -x;
            nodes[n - 1 - i] = x;
            weights[i] = w;
            weights[n - 1 - i] = w;
        }
        Self { nodes, weights }
    }

    pub fn order(&self) -> usize {
        self.nodes.len()
    }

    /// `∫_a^b f`.
    pub fn integrate(&self, f: impl Fn(f64) -> f64, a: f64, b: f64) -> f64 {
        let half = 0.5 * (b - a);
        let mid = 0.5 * (a + b);
        half * self
            .nodes
            .iter()
            .zip(&self.weights)
            .map(|(&x, &w)| w * f(mid + half * x))
            .sum::<f64>()
    }
}

/// Flattened composite rule: absolute nodes and weights on an interval.
#[derive(Clone, Debug, PartialEq)]
pub struct Rule {
    pub nodes: Vec<f64>,
    pub weights: Vec<f64>,
}

impl Rule {
    /// `[a, b]` cut at `breakpoints`, each piece split into `panels` equal
    /// panels carrying an `order`-point rule.
    pub fn composite(a: f64, b: f64, breakpoints: &[f64], panels: usize, order: usize) -> Self {
        let mut cuts = vec![a];
        let mut inner: Vec<f64> = breakpoints.iter().copied().filter(|&t| t > a && t < b).collect();
        inner.sort_by(f64::total_cmp);
        inner.dedup();
        cuts.extend(inner);
        cuts.push(b);
        let pieces: Vec<(f64, f64)> = cuts
            .windows(2)
            .flat_map(|w| {
                let h = (w[1] - w[0]) / panels as f64;
                (0..panels).map(move |k| (w[0] + h * k as f64, w[0] + h * (k + 1) as f64))
            })
            .collect();
        Self::from_pieces(&pieces, order)
    }

    /// `2^log2_cells` dyadic cells of `[0, 1]`, `order` points per cell.
    /// Discontinuities at dyadic rationals of that level fall on cell edges.
    pub fn dyadic(log2_cells: u32, order: usize) -> Self {
        let cells = 1usize << log2_cells;
        let h = 1.0 / cells as f64;
        let pieces: Vec<(f64, f64)> = (0..cells).map(|k| (k as f64 * h, (k + 1) as f64 * h)).collect();
        Self::from_pieces(&pieces, order)
    }

    fn from_pieces(pieces: &[(f64, f64)], order: usize) -> Self {
        let g = GaussLegendre::new(order);
        let mut nodes = Vec::with_capacity(pieces.len() * order);
        let mut weights = Vec::with_capacity(pieces.len() * order);
        for &(lo, hi) in pieces {
            let half = 0.5 * (hi - lo);
            let mid = 0.5 * (hi + lo);
            for (&x, &w) in g.nodes.iter().zip(&g.weights) {
                nodes.push(mid + half * x);
                weights.push(half * w);
            }
        }
        Self { nodes, weights }
    }

    pub fn len(&self) -> usize {
        self.nodes.len()
    }

    pub fn is_empty(&self) -> bool {
        self.nodes.is_empty()
    }

    /// `∑ wᵢ vᵢ` for values already evaluated at the nodes, summed in node order.
    pub fn apply(&self, values: &[f64]) -> f64 {
        self.weights.iter().zip(values).map(|(w, v)| w * v).sum()
    }

    pub fn integrate(&self, f: impl Fn(f64) -> f64 + Sync) -> f64 {
        let values: Vec<f64> = self.nodes.par_iter().map(|&x| f(x)).collect();
        self.apply(&values)
    }
}

/// Composite Gauss–Legendre integral; see [`Rule::composite`].
pub fn composite(f: impl Fn(f64) -> f64 + Sync, a: f64, b: f64, breakpoints: &[f64], panels: usize, order: usize) -> f64 {
    Rule::composite(a, b, breakpoints, panels, order).integrate(f)
}

/// `∫_0^1 f` by [`Rule::dyadic`].
pub fn dyadic_composite(f: impl Fn(f64) -> f64 + Sync, log2_cells: u32, order: usize) -> f64 {
    Rule::dyadic(log2_cells, order).integrate(f)
}
