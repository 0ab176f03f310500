//! Monic polynomials `p(z) = ∏ (z - z_j)` kept in product form.

use std::f64::consts::TAU;

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::geometry::{ConvexDomain, Point};

/// Distance to a zero below which [`MonicPolynomial::log_derivative`]
/// reports a pole.
pub const POLE_GUARD: f64 = 1e-12;

/// Zeros of a polynomial, repeated according to multiplicity.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ZeroSet {
    pub zeros: Vec<Point>,
}

impl ZeroSet {
    pub fn new(zeros: Vec<Point>) -> Result<Self> {
        if zeros.is_empty() {
            return Err(Error::Invalid("zero set must contain at least one zero".into()));
        }
        if let Some(j) = zeros.iter().position(|z| !z.re.is_finite() || !z.im.is_finite()) {
            return Err(Error::Invalid(format!("zero {j} is not finite")));
        }
        Ok(Self { zeros })
    }

    pub fn len(&self) -> usize {
        self.zeros.len()
    }

    pub fn is_empty(&self) -> bool {
        self.zeros.is_empty()
    }
}

/// `p(z) = ∏_{j=1}^n (z - z_j)`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "ZeroSet", into = "ZeroSet")]
pub struct MonicPolynomial {
    zeros: Vec<Point>,
}

impl TryFrom<ZeroSet> for MonicPolynomial {
    type Error = Error;

    fn try_from(z: ZeroSet) -> Result<Self> {
        Self::from_zeros(z.zeros)
    }
}

impl From<MonicPolynomial> for ZeroSet {
    fn from(p: MonicPolynomial) -> Self {
        ZeroSet { zeros: p.zeros }
    }
}

impl MonicPolynomial {
    pub fn new(zero_set: ZeroSet) -> Self {
        Self {
            zeros: zero_set.zeros,
        }
    }

    pub fn from_zeros(zeros: Vec<Point>) -> Result<Self> {
        ZeroSet::new(zeros).map(Self::new)
    }

    /// `z^n`.
    pub fn power(center: Point, n: usize) -> Result<Self> {
        Self::from_zeros(vec![center; n])
    }

    pub fn degree(&self) -> usize {
        self.zeros.len()
    }

    pub fn zeros(&self) -> &[Point] {
        &self.zeros
    }

    pub fn zero_set(&self) -> ZeroSet {
        ZeroSet {
            zeros: self.zeros.clone(),
        }
    }

    pub fn eval(&self, z: Complex64) -> Complex64 {
        self.zeros
            .iter()
            .fold(Complex64::new(1.0, 0.0), |acc, zj| acc * (z - zj))
    }

    /// `p'(z) = Σ_i ∏_{j≠i} (z - z_j)`, accumulated by the product rule so
    /// that it stays exact at the zeros.
    pub fn eval_derivative(&self, z: Complex64) -> Complex64 {
        self.eval_with_derivative(z).1
    }

    /// `(p(z), p'(z))` in one pass.
    pub fn eval_with_derivative(&self, z: Complex64) -> (Complex64, Complex64) {
        // (p, p') -> ((z - a) p, p + (z - a) p')
        let mut p = Complex64::new(1.0, 0.0);
        let mut dp = Complex64::new(0.0, 0.0);
        for zj in &self.zeros {
            let f = z - zj;
            dp = dp * f + p;
            p *= f;
        }
        (p, dp)
    }

    /// `p'(z)/p(z) = Σ 1/(z - z_j)`.
    pub fn log_derivative(&self, z: Complex64) -> Result<Complex64> {
        let mut acc = Complex64::new(0.0, 0.0);
        for zj in &self.zeros {
            let d = z - zj;
            if d.norm() < POLE_GUARD {
                return Err(Error::Pole {
                    re: z.re,
                    im: z.im,
                    guard: POLE_GUARD,
                });
            }
            acc += d.inv();
        }
        Ok(acc)
    }

    /// Whether every zero lies in `K` or within `tol` of it.
    pub fn zeros_in_domain(&self, domain: &ConvexDomain, tol: f64) -> bool {
        self.zeros.iter().all(|z| domain.contains(*z, tol))
    }

    /// Number of zeros with `arg(z_j - apex) ∈ [σ, θ]` modulo `2π`. Zeros at
    /// the apex count in every sector.
    pub fn sector_count(&self, apex: Point, sigma: f64, theta: f64) -> Result<usize> {
        if !(sigma <= theta) {
            return Err(Error::OutOfRange(format!(
                "sector needs sigma <= theta, got [{sigma}, {theta}]"
            )));
        }
        let span = theta - sigma;
        Ok(self
            .zeros
            .iter()
            .filter(|z| {
                let d = *z - apex;
                if d.norm() == 0.0 {
                    return true;
                }
                span >= TAU || (d.arg() - sigma).rem_euclid(TAU) <= span
            })
            .count())
    }
}
