//! Euler characteristics of determinant line bundles on Hilbert schemes of
//! points over a surface with chi(O_S) = 1.
//!
//! The generating series is a four-factor product
//! `g_r^chi(L) * f_r^(1/2) * A_r^(L.K - K^2/2) * B_r^(K^2)` where `f_r` and
//! `g_r` have closed forms and `A_r`, `B_r` are carried as embedded data
//! through order `z^7` (a data file can extend them; overlaps must agree).

use std::collections::BTreeMap;

use num_traits::Zero;

use crate::poly::MultiPoly;
use crate::series::SeriesError;
use crate::symbol::Symbol;
use crate::{Poly, Rat, Series};

/// Built-in truncation order of the series data.
pub const DEFAULT_TRUNCATION: usize = 7;

/// Rank parameter: a fixed rational or the formal symbol `r`.
#[derive(Clone, PartialEq, Debug)]
pub enum Rank {
    Numeric(Rat),
    Symbolic,
}

impl Rank {
    pub fn numeric(n: i64) -> Self {
        Rank::Numeric(crate::rat(n))
    }
}

#[derive(Clone, Copy, PartialEq, Eq, Debug)]
pub enum SeriesName {
    A,
    B,
}

impl SeriesName {
    pub fn as_str(self) -> &'static str {
        match self {
            SeriesName::A => "A",
            SeriesName::B => "B",
        }
    }
}

/// One of the two data-backed series: a map from z-powers to polynomials
/// in `r`. Entries 0 and 1 are always 1 and 0.
#[derive(Clone, PartialEq, Debug)]
pub struct SeriesDataTable {
    pub name: SeriesName,
    entries: BTreeMap<usize, Poly>,
}

impl SeriesDataTable {
    pub fn new(name: SeriesName) -> Self {
        let mut entries = BTreeMap::new();
        entries.insert(0, Poly::one());
        entries.insert(1, Poly::zero());
        SeriesDataTable { name, entries }
    }

    pub fn builtin(name: SeriesName) -> Self {
        let mut t = Self::new(name);
        let data: &[SeriesEntrySpec] = match name {
            SeriesName::A => BUILTIN_A,
            SeriesName::B => BUILTIN_B,
        };
        for (k, terms) in data {
            t.entries.insert(*k, poly_in_r(terms));
        }
        t
    }

    pub fn entry(&self, k: usize) -> Option<&Poly> {
        self.entries.get(&k)
    }

    pub fn set_entry(&mut self, k: usize, p: Poly) {
        self.entries.insert(k, p);
    }

    /// Largest `T` such that all of `z^0..z^T` are present.
    pub fn max_order(&self) -> usize {
        let mut t = 0;
        while self.entries.contains_key(&(t + 1)) {
            t += 1;
        }
        t
    }

    /// Materialize as a series truncated at `t`, numeric entries when `r`
    /// is numeric.
    pub fn to_series(&self, t: usize, r: &Rank) -> Result<Series, SeriesError> {
        let mut coeffs = Vec::with_capacity(t + 1);
        for k in 0..=t {
            let p = self.entry(k).ok_or(SeriesError::MissingEntry(k))?;
            coeffs.push(match r {
                Rank::Symbolic => p.clone(),
                Rank::Numeric(v) => {
                    let point: BTreeMap<_, _> = [(Symbol::R, v.clone())].into_iter().collect();
                    Poly::constant(p.evaluate(&point).expect("entry is a polynomial in r"))
                }
            });
        }
        Ok(Series::from_coeffs(coeffs))
    }
}

/// The built-in `A` and `B` tables (orders through `z^7`).
pub fn builtin_tables() -> (SeriesDataTable, SeriesDataTable) {
    (
        SeriesDataTable::builtin(SeriesName::A),
        SeriesDataTable::builtin(SeriesName::B),
    )
}

/// One data row: `(z-power, [(r-exponent, numerator, denominator), ...])`.
type SeriesEntrySpec = (usize, &'static [(u16, i64, i64)]);

fn poly_in_r(terms: &[(u16, i64, i64)]) -> Poly {
    let mut p = Poly::zero();
    for (e, num, den) in terms {
        p = p + Poly::fraction(*num, *den) * Poly::var(Symbol::R).pow(*e as u32);
    }
    p
}

#[rustfmt::skip]
const BUILTIN_A: &[SeriesEntrySpec] = &[
    (2, &[(3, -1, 6), (1, 1, 6)]),
    (3, &[(5, 17, 40), (3, -5, 8), (1, 1, 5)]),
    (4, &[(7, -631, 630), (6, 1, 72), (5, 88, 45), (4, -1, 36), (3, -209, 180),
          (2, 1, 72), (1, 29, 140)]),
    (5, &[(9, 171215, 72576), (8, -17, 240), (7, -69619, 12096), (6, 7, 40),
          (5, 16979, 3456), (4, -11, 80), (3, -31259, 18144), (2, 1, 30), (1, 13, 63)]),
    (6, &[(11, -18684667, 3326400), (10, 155581, 604800), (9, 597209, 36288),
          (8, -1699, 2240), (7, -5513891, 302400), (6, 23033, 28800), (5, 114685, 12096),
          (4, -2669, 7560), (3, -519509, 226800), (2, 229, 4200), (1, 281, 1386)]),
    (7, &[(13, 401297449, 29652480), (12, -8914439, 10886400), (11, -528153667, 11404800),
          (10, 30585833, 10886400), (9, 4352347, 69120), (8, -13405099, 3628800),
          (7, -44899771, 1036800), (6, 25156259, 10886400), (5, 817639, 51840),
          (4, -1859441, 2721600), (3, -339287, 118800), (2, 1433, 18900), (1, 85, 429)]),
];

#[rustfmt::skip]
const BUILTIN_B: &[SeriesEntrySpec] = &[
    (2, &[(4, -1, 24), (2, 1, 24)]),
    (3, &[(6, 97, 720), (4, -31, 144), (2, 29, 360)]),
    (4, &[(8, -14899, 40320), (6, 2273, 2880), (4, -3053, 5760), (2, 139, 1260)]),
    (5, &[(10, 503377, 518400), (8, -311701, 120960), (6, 421267, 172800),
          (4, -6257, 6480), (2, 187, 1400)]),
    (6, &[(12, -1205178661, 479001600), (10, 346550543, 43545600), (8, -19975933, 2073600),
          (6, 241348529, 43545600), (4, -4092191, 2721600), (2, 9047, 59400)]),
    (7, &[(14, 1571744023, 242161920), (12, -11403389887, 479001600), (10, 1523544803, 43545600),
          (8, -2666500579, 101606400), (6, 458713229, 43545600), (4, -63757807, 29937600),
          (2, 6349289, 37837800)]),
];

fn rank_squared_minus_one(r: &Rank) -> Poly {
    match r {
        Rank::Symbolic => Poly::var(Symbol::R).pow(2) - Poly::one(),
        Rank::Numeric(v) => Poly::constant(v.clone() * v.clone() - crate::rat(1)),
    }
}

/// `f_r(z) = sum_k binom((1-r^2)(k-1), k) z^k` truncated at `t`.
pub fn build_f(r: &Rank, t: usize) -> Result<Series, SeriesError> {
    let m = rank_squared_minus_one(r);
    let mut coeffs = Vec::with_capacity(t + 1);
    for k in 0..=t {
        // top = (1 - r^2)(k - 1)
        let top = (-&m).scale(&crate::rat(k as i64 - 1));
        coeffs.push(MultiPoly::generalized_binomial(&top, k as u32));
    }
    Ok(Series::from_coeffs(coeffs))
}

/// `g_r(z) = sum_k binom(1-(r^2-1)k, k) / (1-(r^2-1)k) z^k` truncated at `t`.
///
/// The prefactor divides the binomial exactly; for symbolic `r` this is
/// checked by exact polynomial division.
pub fn build_g(r: &Rank, t: usize) -> Result<Series, SeriesError> {
    let m = rank_squared_minus_one(r);
    let mut coeffs = Vec::with_capacity(t + 1);
    coeffs.push(Poly::one());
    for k in 1..=t {
        // top = 1 - (r^2-1) k, which is also the prefactor denominator
        let top = Poly::one() - m.scale(&crate::rat(k as i64));
        let binom = MultiPoly::generalized_binomial(&top, k as u32);
        let coeff = match r {
            Rank::Symbolic => binom
                .div_exact(&top)
                .map_err(|_| SeriesError::NonExactDivision)?,
            Rank::Numeric(_) => {
                let pre = top.as_constant().expect("numeric rank gives constants");
                if pre.is_zero() {
                    return Err(SeriesError::NonExactDivision);
                }
                binom.scale(&(crate::rat(1) / pre))
            }
        };
        coeffs.push(coeff);
    }
    Ok(Series::from_coeffs(coeffs))
}

/// Assemble the full generating series truncated at `t`.
pub fn generating_series(
    r: &Rank,
    tables: &(SeriesDataTable, SeriesDataTable),
    t: usize,
) -> Result<Series, SeriesError> {
    let g = build_g(r, t)?;
    let f = build_f(r, t)?;
    let a = tables.0.to_series(t, r)?;
    let b = tables.1.to_series(t, r)?;

    let chi = Poly::var(Symbol::ChiL);
    let lk = Poly::var(Symbol::LK);
    let k2 = Poly::var(Symbol::K2);
    // exponents: chi(L) on g, 1/2 on f (chi(O_S) = 1), L.K - K^2/2 on A, K^2 on B
    let gf = g.pow_poly(&chi)?;
    let ff = f.pow_scalar(crate::ratio(1, 2))?;
    let af = a.pow_poly(&(lk - k2.scale(&crate::ratio(1, 2))))?;
    let bf = b.pow_poly(&k2)?;

    gf.mul(&ff)?.mul(&af)?.mul(&bf)
}

/// `chi(O_{S^[n]}(L_n - r B/2))` as a polynomial in chi(L), L.K, K^2 (and
/// `r` when symbolic), using the supplied data tables.
pub fn euler_char_hilb_with(
    n: usize,
    r: &Rank,
    tables: &(SeriesDataTable, SeriesDataTable),
) -> Result<Poly, SeriesError> {
    let t = tables.0.max_order().min(tables.1.max_order());
    if n > t {
        return Err(SeriesError::TruncationExceeded(n, t));
    }
    let s = generating_series(r, tables, t)?;
    Ok(s.coeff(n).clone())
}

/// [`euler_char_hilb_with`] on the built-in tables (truncation 7).
pub fn euler_char_hilb(n: usize, r: &Rank) -> Result<Poly, SeriesError> {
    euler_char_hilb_with(n, r, &builtin_tables())
}
