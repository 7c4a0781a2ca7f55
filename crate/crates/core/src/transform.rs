//! Fractal transformations `T_FG = π_G ∘ τ_F`.

use std::fmt;
use std::sync::Arc;

use rayon::prelude::*;

use crate::code_space::{Address, DEFAULT_DEPTH};
use crate::error::{Error, Result};
use crate::geometry::Point;
use crate::ifs::{ContractiveIfs, EmpiricalMeasure};
use crate::scalar::Scalar;
use crate::top_section::top_address;

/// Depth at which exact-inverse coding reproduces every representable point
/// of `[0, 1]`, subnormals included: `2^-depth` is below half an ulp everywhere.
pub fn bit_exact_depth<T: Scalar>() -> usize {
    let exponent = -T::min_positive_value().log2().as_f64();
    let mantissa = -T::epsilon().log2().as_f64();
    (exponent + 2.0 * mantissa) as usize + 4
}

/// Ordered pair of systems with the same number of maps.
#[derive(Clone)]
pub struct TransformPair<T> {
    source: Arc<ContractiveIfs<T>>,
    target: Arc<ContractiveIfs<T>>,
    depth: usize,
    tol: T,
    homeomorphism: bool,
}

impl<T: Scalar> fmt::Debug for TransformPair<T> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("TransformPair")
            .field("source", &self.source.label())
            .field("target", &self.target.label())
            .field("depth", &self.depth)
            .field("tol", &self.tol)
            .finish()
    }
}

impl<T: Scalar> TransformPair<T> {
    pub fn new(source: ContractiveIfs<T>, target: ContractiveIfs<T>) -> Result<Self> {
        Self::from_shared(Arc::new(source), Arc::new(target))
    }

    pub fn from_shared(source: Arc<ContractiveIfs<T>>, target: Arc<ContractiveIfs<T>>) -> Result<Self> {
        if source.len() != target.len() {
            return Err(Error::AlphabetMismatch {
                left: source.alphabet(),
                right: target.alphabet(),
            });
        }
        Ok(Self {
            source,
            target,
            depth: DEFAULT_DEPTH,
            tol: T::zero(),
            homeomorphism: false,
        })
    }

    pub fn with_depth(mut self, depth: usize) -> Self {
        self.depth = depth;
        self
    }

    pub fn with_tol(mut self, tol: T) -> Self {
        self.tol = tol;
        self
    }

    /// Marks the pair as a homeomorphism between the attractors.
    pub fn with_homeomorphism(mut self, yes: bool) -> Self {
        self.homeomorphism = yes;
        self
    }

    pub fn source(&self) -> &ContractiveIfs<T> {
        &self.source
    }

    pub fn target(&self) -> &ContractiveIfs<T> {
        &self.target
    }

    pub fn depth(&self) -> usize {
        self.depth
    }

    pub fn tol(&self) -> T {
        self.tol
    }

    pub fn is_homeomorphism(&self) -> bool {
        self.homeomorphism
    }

    pub fn label(&self) -> String {
        format!("{}->{}", self.source.label(), self.target.label())
    }

    /// The pair `G → F`, sharing both systems.
    pub fn inverse(&self) -> Self {
        Self {
            source: Arc::clone(&self.target),
            target: Arc::clone(&self.source),
            depth: self.depth,
            tol: self.tol,
            homeomorphism: self.homeomorphism,
        }
    }

    pub fn address(&self, x: Point<T>) -> Result<Address> {
        top_address(&self.source, x, self.depth, self.tol)
    }

    pub fn transform(&self, x: Point<T>) -> Result<Point<T>> {
        let a = self.address(x)?;
        Ok(self.target.code_symbols(a.symbols(), self.target.base_point()))
    }

    /// Pointwise transform in parallel; fails with the first offending index.
    pub fn transform_many(&self, xs: &[Point<T>]) -> Result<Vec<Point<T>>> {
        xs.par_iter()
            .enumerate()
            .map(|(index, &x)| {
                self.transform(x).map_err(|e| Error::SampleFailure {
                    index,
                    source: Box::new(e),
                })
            })
            .collect()
    }

    /// Target-side truncation bound `λ_G^depth · diam(A_G)`.
    pub fn accuracy(&self) -> T {
        self.target.coding_accuracy(self.depth)
    }

    /// `|x − T_GF(T_FG(x))|`.
    pub fn roundtrip_residual(&self, x: Point<T>) -> Result<T> {
        let y = self.transform(x)?;
        let back = self.inverse().transform(y)?;
        Ok(x.dist(back))
    }

    /// Maps every sample; weights are untouched.
    pub fn pushforward(&self, m: &EmpiricalMeasure<T>) -> Result<EmpiricalMeasure<T>> {
        let points = self.transform_many(m.points())?;
        Ok(m.with_points(points, self.target.dim(), self.target.label().to_string()))
    }
}
