//! Coefficient scalars for the polynomial and series layers.

use std::fmt;

use num_rational::{BigRational, Rational64};
use num_traits::{FromPrimitive, Signed};

/// Ring of coefficients the polynomial layer is generic over.
///
/// The bounds are the minimum needed for exact ring arithmetic plus division
/// by integer constants (falling-factorial binomials, series logarithms, the
/// 1/k of the multiple point recursion). The engine instantiates everything
/// with [`BigRational`].
pub trait Scalar: Clone + PartialEq + fmt::Debug + fmt::Display + Signed + FromPrimitive {
    fn from_int(n: i64) -> Self {
        Self::from_i64(n).expect("scalar cannot represent integer")
    }

    fn from_fraction(num: i64, den: i64) -> Self {
        Self::from_int(num) / Self::from_int(den)
    }

    /// Rendering used by the LaTeX emitter; rationals override this to
    /// produce `\tfrac` forms.
    fn latex_string(&self) -> String {
        self.to_string()
    }
}

impl Scalar for BigRational {
    fn from_fraction(num: i64, den: i64) -> Self {
        BigRational::new(num.into(), den.into())
    }

    fn latex_string(&self) -> String {
        if self.is_integer() {
            self.numer().to_string()
        } else {
            let sign = if self.is_negative() { "-" } else { "" };
            let a = self.numer().magnitude();
            format!("{}\\tfrac{{{}}}{{{}}}", sign, a, self.denom())
        }
    }
}

impl Scalar for Rational64 {
    fn from_fraction(num: i64, den: i64) -> Self {
        Rational64::new(num, den)
    }

    fn latex_string(&self) -> String {
        if self.is_integer() {
            self.numer().to_string()
        } else {
            let sign = if self.is_negative() { "-" } else { "" };
            format!(
                "{}\\tfrac{{{}}}{{{}}}",
                sign,
                self.numer().abs(),
                self.denom()
            )
        }
    }
}

impl Scalar for f64 {}
impl Scalar for f32 {}

/// k! as a scalar.
pub fn factorial<C: Scalar>(k: u32) -> C {
    let mut acc = C::one();
    for j in 2..=k {
        acc = acc * C::from_int(j as i64);
    }
    acc
}
