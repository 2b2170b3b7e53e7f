//! Sparse multivariate polynomials over the fixed symbol set.
//!
//! Terms are kept in a map from exponent vectors to nonzero coefficients;
//! the exponent order is graded lexicographic with ties broken by the
//! canonical symbol order, which makes equality structural and every
//! rendering deterministic.

use std::collections::BTreeMap;
use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use thiserror::Error;

use crate::scalar::{factorial, Scalar};
use crate::symbol::{Symbol, SYMBOLS, SYMBOL_COUNT};

/// Exponent vector over the fixed symbol set.
#[derive(Clone, Copy, PartialEq, Eq, Hash, Debug)]
pub struct Monomial(pub [u16; SYMBOL_COUNT]);

impl Monomial {
    /// The empty monomial (all exponents zero).
    pub const UNIT: Monomial = Monomial([0; SYMBOL_COUNT]);

    pub fn var(s: Symbol) -> Self {
        let mut e = [0u16; SYMBOL_COUNT];
        e[s.index()] = 1;
        Monomial(e)
    }

    pub fn exp(&self, s: Symbol) -> u16 {
        self.0[s.index()]
    }

    pub fn degree(&self) -> u32 {
        self.0.iter().map(|&e| e as u32).sum()
    }

    pub fn is_unit(&self) -> bool {
        self.0.iter().all(|&e| e == 0)
    }

    fn mul(&self, other: &Self) -> Self {
        let mut e = self.0;
        for (a, b) in e.iter_mut().zip(other.0.iter()) {
            *a = a.checked_add(*b).expect("exponent overflow");
        }
        Monomial(e)
    }

    fn divides(&self, other: &Self) -> bool {
        self.0.iter().zip(other.0.iter()).all(|(a, b)| a <= b)
    }

    /// `other / self`; caller must ensure divisibility.
    fn quotient(&self, other: &Self) -> Self {
        let mut e = other.0;
        for (a, b) in e.iter_mut().zip(self.0.iter()) {
            *a -= b;
        }
        Monomial(e)
    }
}

impl Ord for Monomial {
    fn cmp(&self, other: &Self) -> std::cmp::Ordering {
        self.degree()
            .cmp(&other.degree())
            .then_with(|| self.0.cmp(&other.0))
    }
}

impl PartialOrd for Monomial {
    fn partial_cmp(&self, other: &Self) -> Option<std::cmp::Ordering> {
        Some(self.cmp(other))
    }
}

/// Term specification `(numerator, denominator, monomial)` for
/// [`MultiPoly::from_terms`].
pub type TermSpec<'a> = (i64, i64, &'a [(Symbol, u16)]);

#[derive(Debug, Error, PartialEq, Eq)]
pub enum PolyError {
    #[error("symbol {0:?} has no assigned value")]
    MissingSymbol(Symbol),
    #[error("polynomial division is not exact")]
    NonExactDivision,
    #[error("division by the zero polynomial")]
    DivisionByZero,
}

/// Multivariate polynomial with exact coefficients.
///
/// Invariant: no stored coefficient is zero, so equality is structural.
#[derive(Clone, PartialEq, Debug)]
pub struct MultiPoly<C: Scalar> {
    terms: BTreeMap<Monomial, C>,
}

impl<C: Scalar> MultiPoly<C> {
    pub fn zero() -> Self {
        MultiPoly {
            terms: BTreeMap::new(),
        }
    }

    pub fn one() -> Self {
        Self::constant(C::one())
    }

    pub fn constant(c: C) -> Self {
        let mut terms = BTreeMap::new();
        if !c.is_zero() {
            terms.insert(Monomial::UNIT, c);
        }
        MultiPoly { terms }
    }

    pub fn int(n: i64) -> Self {
        Self::constant(C::from_int(n))
    }

    pub fn fraction(num: i64, den: i64) -> Self {
        Self::constant(C::from_fraction(num, den))
    }

    pub fn var(s: Symbol) -> Self {
        let mut terms = BTreeMap::new();
        terms.insert(Monomial::var(s), C::one());
        MultiPoly { terms }
    }

    /// Build from `(num, den, [(symbol, exponent)...])` triples.
    pub fn from_terms(spec: &[TermSpec<'_>]) -> Self {
        let mut p = Self::zero();
        for (num, den, sym) in spec {
            let mut m = Monomial::UNIT;
            for (s, e) in sym.iter() {
                m.0[s.index()] += e;
            }
            p.insert_term(m, C::from_fraction(*num, *den));
        }
        p
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn is_one(&self) -> bool {
        self.terms.len() == 1
            && self
                .terms
                .get(&Monomial::UNIT)
                .map(|c| c.is_one())
                .unwrap_or(false)
    }

    pub fn num_terms(&self) -> usize {
        self.terms.len()
    }

    /// Terms in ascending graded-lex order.
    pub fn terms(&self) -> impl Iterator<Item = (&Monomial, &C)> {
        self.terms.iter()
    }

    /// Terms in the canonical display order (descending graded-lex).
    pub fn terms_desc(&self) -> impl Iterator<Item = (&Monomial, &C)> {
        self.terms.iter().rev()
    }

    pub fn coeff(&self, m: &Monomial) -> C {
        self.terms.get(m).cloned().unwrap_or_else(C::zero)
    }

    pub fn constant_term(&self) -> C {
        self.coeff(&Monomial::UNIT)
    }

    /// The constant value if the polynomial is constant.
    pub fn as_constant(&self) -> Option<C> {
        if self.is_zero() {
            Some(C::zero())
        } else if self.terms.len() == 1 {
            self.terms.get(&Monomial::UNIT).cloned()
        } else {
            None
        }
    }

    pub fn total_degree(&self) -> u32 {
        self.terms.keys().map(|m| m.degree()).max().unwrap_or(0)
    }

    /// Symbols that actually occur.
    pub fn symbols(&self) -> Vec<Symbol> {
        SYMBOLS
            .into_iter()
            .filter(|s| self.terms.keys().any(|m| m.exp(*s) > 0))
            .collect()
    }

    pub fn insert_term(&mut self, m: Monomial, c: C) {
        if c.is_zero() {
            return;
        }
        match self.terms.entry(m) {
            std::collections::btree_map::Entry::Vacant(e) => {
                e.insert(c);
            }
            std::collections::btree_map::Entry::Occupied(mut e) => {
                let sum = e.get().clone() + c;
                if sum.is_zero() {
                    e.remove();
                } else {
                    *e.get_mut() = sum;
                }
            }
        }
    }

    fn add_ref(&self, other: &Self) -> Self {
        let mut out = self.clone();
        for (m, c) in &other.terms {
            out.insert_term(*m, c.clone());
        }
        out
    }

    fn sub_ref(&self, other: &Self) -> Self {
        let mut out = self.clone();
        for (m, c) in &other.terms {
            out.insert_term(*m, -c.clone());
        }
        out
    }

    fn mul_ref(&self, other: &Self) -> Self {
        let mut out = Self::zero();
        for (m1, c1) in &self.terms {
            for (m2, c2) in &other.terms {
                out.insert_term(m1.mul(m2), c1.clone() * c2.clone());
            }
        }
        out
    }

    fn neg_ref(&self) -> Self {
        MultiPoly {
            terms: self.terms.iter().map(|(m, c)| (*m, -c.clone())).collect(),
        }
    }

    pub fn scale(&self, c: &C) -> Self {
        if c.is_zero() {
            return Self::zero();
        }
        MultiPoly {
            terms: self
                .terms
                .iter()
                .map(|(m, k)| (*m, k.clone() * c.clone()))
                .collect(),
        }
    }

    pub fn pow(&self, k: u32) -> Self {
        let mut result = Self::one();
        let mut base = self.clone();
        let mut e = k;
        while e > 0 {
            if e & 1 == 1 {
                result = result.mul_ref(&base);
            }
            e >>= 1;
            if e > 0 {
                base = base.mul_ref(&base);
            }
        }
        result
    }

    /// Falling-factorial binomial `top (top-1) ... (top-k+1) / k!`.
    ///
    /// For an integer constant `top >= k` this is the ordinary binomial
    /// coefficient; `k = 0` gives 1.
    pub fn generalized_binomial(top: &Self, k: u32) -> Self {
        let mut acc = Self::one();
        for j in 0..k {
            acc = acc.mul_ref(&top.sub_ref(&Self::int(j as i64)));
        }
        let f: C = factorial(k);
        acc.scale(&(C::one() / f))
    }

    /// Simultaneous substitution of symbols by polynomials.
    ///
    /// Symbols without a rule are left alone; rules are not iterated.
    pub fn substitute(&self, rules: &BTreeMap<Symbol, Self>) -> Self {
        let mut acc = Self::zero();
        for (m, c) in &self.terms {
            if SYMBOLS
                .into_iter()
                .all(|s| m.exp(s) == 0 || !rules.contains_key(&s))
            {
                acc.insert_term(*m, c.clone());
                continue;
            }
            let mut term = Self::constant(c.clone());
            for s in SYMBOLS {
                let e = m.exp(s);
                if e == 0 {
                    continue;
                }
                let base = match rules.get(&s) {
                    Some(p) => p.clone(),
                    None => Self::var(s),
                };
                term = term.mul_ref(&base.pow(e as u32));
            }
            acc = acc.add_ref(&term);
        }
        acc
    }

    /// Exact evaluation at a rational point covering all symbols of `self`.
    pub fn evaluate(&self, point: &BTreeMap<Symbol, C>) -> Result<C, PolyError> {
        let mut acc = C::zero();
        for (m, c) in &self.terms {
            let mut term = c.clone();
            for s in SYMBOLS {
                let e = m.exp(s);
                if e == 0 {
                    continue;
                }
                let v = point.get(&s).ok_or(PolyError::MissingSymbol(s))?;
                for _ in 0..e {
                    term = term * v.clone();
                }
            }
            acc = acc + term;
        }
        Ok(acc)
    }

    /// Exact polynomial division; errors unless `divisor` divides `self`
    /// with zero remainder.
    pub fn div_exact(&self, divisor: &Self) -> Result<Self, PolyError> {
        if divisor.is_zero() {
            return Err(PolyError::DivisionByZero);
        }
        let (dm, dc) = divisor.terms.iter().next_back().expect("nonzero divisor");
        let mut rem = self.clone();
        let mut quot = Self::zero();
        while !rem.is_zero() {
            let (rm, rc) = {
                let (m, c) = rem.terms.iter().next_back().expect("nonzero remainder");
                (*m, c.clone())
            };
            if !dm.divides(&rm) {
                return Err(PolyError::NonExactDivision);
            }
            let qm = dm.quotient(&rm);
            let qc = rc / dc.clone();
            let mut piece = Self::zero();
            piece.insert_term(qm, qc);
            rem = rem.sub_ref(&piece.mul_ref(divisor));
            quot = quot.add_ref(&piece);
        }
        Ok(quot)
    }

    /// Canonical text rendering.
    pub fn to_text(&self) -> String {
        self.render(false)
    }

    /// LaTeX rendering with the same term order as the text form.
    pub fn to_latex(&self) -> String {
        self.render(true)
    }

    fn render(&self, latex: bool) -> String {
        if self.is_zero() {
            return "0".to_string();
        }
        let mut out = String::new();
        for (i, (m, c)) in self.terms_desc().enumerate() {
            let neg = c.is_negative();
            if i == 0 {
                if neg {
                    out.push('-');
                }
            } else if neg {
                out.push_str(" - ");
            } else {
                out.push_str(" + ");
            }
            let mag = c.abs();
            let syms = Self::render_monomial(m, latex);
            if syms.is_empty() {
                out.push_str(&if latex {
                    mag.latex_string()
                } else {
                    mag.to_string()
                });
            } else {
                if !mag.is_one() {
                    out.push_str(&if latex {
                        mag.latex_string()
                    } else {
                        mag.to_string()
                    });
                    out.push_str(if latex { " " } else { "*" });
                }
                out.push_str(&syms);
            }
        }
        out
    }

    fn render_monomial(m: &Monomial, latex: bool) -> String {
        let mut parts = Vec::new();
        for s in SYMBOLS {
            let e = m.exp(s);
            if e == 0 {
                continue;
            }
            let name = if latex { s.latex() } else { s.name() };
            if e == 1 {
                parts.push(name.to_string());
            } else {
                // parenthesize names like L.K or K^2 before exponentiating
                let base = if name.contains(['^', '.', '|']) {
                    format!("({})", name)
                } else {
                    name.to_string()
                };
                if latex {
                    parts.push(format!("{}^{{{}}}", base, e));
                } else {
                    parts.push(format!("{}^{}", base, e));
                }
            }
        }
        parts.join(if latex { " " } else { "*" })
    }
}

impl<C: Scalar> fmt::Display for MultiPoly<C> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.to_text())
    }
}

macro_rules! binop {
    ($trait:ident, $method:ident, $inner:ident) => {
        impl<C: Scalar> $trait for &MultiPoly<C> {
            type Output = MultiPoly<C>;
            fn $method(self, rhs: &MultiPoly<C>) -> MultiPoly<C> {
                self.$inner(rhs)
            }
        }
        impl<C: Scalar> $trait for MultiPoly<C> {
            type Output = MultiPoly<C>;
            fn $method(self, rhs: MultiPoly<C>) -> MultiPoly<C> {
                self.$inner(&rhs)
            }
        }
        impl<C: Scalar> $trait<&MultiPoly<C>> for MultiPoly<C> {
            type Output = MultiPoly<C>;
            fn $method(self, rhs: &MultiPoly<C>) -> MultiPoly<C> {
                self.$inner(rhs)
            }
        }
        impl<C: Scalar> $trait<MultiPoly<C>> for &MultiPoly<C> {
            type Output = MultiPoly<C>;
            fn $method(self, rhs: MultiPoly<C>) -> MultiPoly<C> {
                self.$inner(&rhs)
            }
        }
    };
}

binop!(Add, add, add_ref);
binop!(Sub, sub, sub_ref);
binop!(Mul, mul, mul_ref);

impl<C: Scalar> Neg for &MultiPoly<C> {
    type Output = MultiPoly<C>;
    fn neg(self) -> MultiPoly<C> {
        self.neg_ref()
    }
}

impl<C: Scalar> Neg for MultiPoly<C> {
    type Output = MultiPoly<C>;
    fn neg(self) -> MultiPoly<C> {
        self.neg_ref()
    }
}
