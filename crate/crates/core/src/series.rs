//! Truncated formal power series in `z` with polynomial coefficients.

use thiserror::Error;

use crate::poly::MultiPoly;
use crate::scalar::{factorial, Scalar};

#[derive(Debug, Error, PartialEq, Eq)]
pub enum SeriesError {
    #[error("truncation orders differ: {0} vs {1}")]
    TruncationMismatch(usize, usize),
    #[error("constant term must be {expected} for series {op}")]
    BadConstantTerm { op: &'static str, expected: i64 },
    #[error("order {0} exceeds truncation {1}")]
    TruncationExceeded(usize, usize),
    #[error("series coefficient division left a remainder")]
    NonExactDivision,
    #[error("data table entry for z^{0} is missing")]
    MissingEntry(usize),
}

/// Power series truncated at a fixed order `T`; arithmetic never reads or
/// writes beyond index `T`.
#[derive(Clone, PartialEq, Debug)]
pub struct TruncSeries<C: Scalar> {
    coeffs: Vec<MultiPoly<C>>,
}

impl<C: Scalar> TruncSeries<C> {
    pub fn zero(truncation: usize) -> Self {
        TruncSeries {
            coeffs: vec![MultiPoly::zero(); truncation + 1],
        }
    }

    pub fn one(truncation: usize) -> Self {
        let mut s = Self::zero(truncation);
        s.coeffs[0] = MultiPoly::one();
        s
    }

    pub fn from_coeffs(coeffs: Vec<MultiPoly<C>>) -> Self {
        assert!(!coeffs.is_empty(), "series needs at least the z^0 slot");
        TruncSeries { coeffs }
    }

    pub fn truncation(&self) -> usize {
        self.coeffs.len() - 1
    }

    pub fn coeff(&self, k: usize) -> &MultiPoly<C> {
        &self.coeffs[k]
    }

    pub fn set_coeff(&mut self, k: usize, p: MultiPoly<C>) {
        self.coeffs[k] = p;
    }

    fn check_same(&self, other: &Self) -> Result<(), SeriesError> {
        if self.truncation() != other.truncation() {
            return Err(SeriesError::TruncationMismatch(
                self.truncation(),
                other.truncation(),
            ));
        }
        Ok(())
    }

    pub fn add(&self, other: &Self) -> Self {
        assert_eq!(self.truncation(), other.truncation());
        TruncSeries {
            coeffs: self
                .coeffs
                .iter()
                .zip(other.coeffs.iter())
                .map(|(a, b)| a + b)
                .collect(),
        }
    }

    pub fn scale_poly(&self, p: &MultiPoly<C>) -> Self {
        TruncSeries {
            coeffs: self.coeffs.iter().map(|c| c * p).collect(),
        }
    }

    /// Cauchy product truncated at the common order.
    pub fn mul(&self, other: &Self) -> Result<Self, SeriesError> {
        self.check_same(other)?;
        let t = self.truncation();
        let mut out = Self::zero(t);
        for i in 0..=t {
            if self.coeffs[i].is_zero() {
                continue;
            }
            for j in 0..=(t - i) {
                if other.coeffs[j].is_zero() {
                    continue;
                }
                let prod = &self.coeffs[i] * &other.coeffs[j];
                out.coeffs[i + j] = &out.coeffs[i + j] + &prod;
            }
        }
        Ok(out)
    }

    /// Formal logarithm; the constant term must be 1.
    pub fn log(&self) -> Result<Self, SeriesError> {
        if !self.coeffs[0].is_one() {
            return Err(SeriesError::BadConstantTerm {
                op: "log",
                expected: 1,
            });
        }
        let t = self.truncation();
        let mut u = self.clone();
        u.coeffs[0] = MultiPoly::zero();
        // log(1+u) = sum_{j>=1} (-1)^{j+1} u^j / j
        let mut out = Self::zero(t);
        let mut upow = u.clone();
        for j in 1..=t {
            let sign = if j % 2 == 1 { C::one() } else { -C::one() };
            let c = sign / C::from_int(j as i64);
            for k in j..=t {
                out.coeffs[k] = &out.coeffs[k] + &upow.coeffs[k].scale(&c);
            }
            if j < t {
                upow = upow.mul(&u)?;
            }
        }
        Ok(out)
    }

    /// Formal exponential; the constant term must be 0.
    pub fn exp(&self) -> Result<Self, SeriesError> {
        if !self.coeffs[0].is_zero() {
            return Err(SeriesError::BadConstantTerm {
                op: "exp",
                expected: 0,
            });
        }
        let t = self.truncation();
        let mut out = Self::one(t);
        let mut upow = self.clone();
        for j in 1..=t {
            let f: C = factorial(j as u32);
            let c = C::one() / f;
            for k in j..=t {
                out.coeffs[k] = &out.coeffs[k] + &upow.coeffs[k].scale(&c);
            }
            if j < t {
                upow = upow.mul(self)?;
            }
        }
        Ok(out)
    }

    /// `self^exponent = exp(exponent * log self)` for a polynomial exponent;
    /// the constant term of `self` must be 1. A rational constant exponent
    /// gives the formal rational power.
    pub fn pow_poly(&self, exponent: &MultiPoly<C>) -> Result<Self, SeriesError> {
        self.log()?.scale_poly(exponent).exp()
    }

    pub fn pow_scalar(&self, exponent: C) -> Result<Self, SeriesError> {
        self.pow_poly(&MultiPoly::constant(exponent))
    }

    /// Non-negative integer power by repeated multiplication (no constant
    /// term restriction).
    pub fn pow_u32(&self, k: u32) -> Result<Self, SeriesError> {
        let mut out = Self::one(self.truncation());
        for _ in 0..k {
            out = out.mul(self)?;
        }
        Ok(out)
    }
}
