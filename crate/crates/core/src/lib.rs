//! Exact-arithmetic engine for intersection-theoretic counts on del Pezzo
//! surfaces.
//!
//! Three computations live here, all over arbitrary-precision rationals:
//!
//! * [`hilb`] — the generating series for Euler characteristics of
//!   determinant line bundles on Hilbert schemes of points,
//! * [`chow`] + [`multipoint`] — virtual-normal Chern classes, pushforwards
//!   and the iterative multiple point formula that computes expected lengths
//!   of finite quot schemes,
//! * [`p2`] — the exceptional-slope and resolution calculus for stable
//!   sheaves on the projective plane.
//!
//! The polynomial and series layers are generic over the coefficient scalar
//! (see [`scalar::Scalar`]); everything downstream uses the concrete
//! [`Rat`]-backed aliases below, since every identity the crate asserts is
//! exact.

pub mod chow;
pub mod classical;
pub mod datafile;
pub mod hilb;
pub mod multipoint;
pub mod p2;
pub mod poly;
pub mod scalar;
pub mod series;
pub mod symbol;

/// Exact rational scalar used by all concrete computations.
pub type Rat = num_rational::BigRational;

/// Multivariate polynomial over [`Rat`] in the fixed symbol set.
pub type Poly = poly::MultiPoly<Rat>;

/// Truncated power series in `z` with [`Poly`] coefficients.
pub type Series = series::TruncSeries<Rat>;

pub use symbol::Symbol;

/// Integer as a [`Rat`].
pub fn rat(n: i64) -> Rat {
    Rat::from_integer(n.into())
}

/// Fraction as a [`Rat`]; `den` must be nonzero.
pub fn ratio(num: i64, den: i64) -> Rat {
    Rat::new(num.into(), den.into())
}
