//! Chow-class models for the multiple point computations.
//!
//! `XClass` lives on the source of the counting map: a formal polynomial in
//! the relative hyperplane class `xi`, with coefficients in a small base
//! algebra generated by the divisors L, K and the aggregated exceptional
//! divisor E over the point class `rho`. The base pairing is fixed:
//! L.L = L^2, L.K = L.K, K.K = K^2, E.E = -|W'|, L.E = K.E = 0, and any
//! product of base degree >= 3 vanishes.
//!
//! No relation is imposed on powers of `xi`; every consumer pushes forward
//! to the target projective space, where truncation at `dim Y` does the
//! bookkeeping. The pushforward context (projective bundle over the surface
//! vs. blown-up surface) is an explicit parameter.

use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use crate::symbol::Symbol;
use crate::Poly;

/// Element of the base algebra: scalar + divisor part + multiple of the
/// point class.
#[derive(Clone, PartialEq, Debug)]
pub struct BaseElement {
    pub scalar: Poly,
    pub div_l: Poly,
    pub div_k: Poly,
    pub div_e: Poly,
    pub point: Poly,
}

impl BaseElement {
    pub fn zero() -> Self {
        BaseElement {
            scalar: Poly::zero(),
            div_l: Poly::zero(),
            div_k: Poly::zero(),
            div_e: Poly::zero(),
            point: Poly::zero(),
        }
    }

    pub fn one() -> Self {
        let mut b = Self::zero();
        b.scalar = Poly::one();
        b
    }

    pub fn from_scalar(p: Poly) -> Self {
        let mut b = Self::zero();
        b.scalar = p;
        b
    }

    pub fn divisor(l: Poly, k: Poly, e: Poly) -> Self {
        let mut b = Self::zero();
        b.div_l = l;
        b.div_k = k;
        b.div_e = e;
        b
    }

    pub fn from_point(p: Poly) -> Self {
        let mut b = Self::zero();
        b.point = p;
        b
    }

    pub fn is_zero(&self) -> bool {
        self.scalar.is_zero()
            && self.div_l.is_zero()
            && self.div_k.is_zero()
            && self.div_e.is_zero()
            && self.point.is_zero()
    }

    fn add(&self, other: &Self) -> Self {
        BaseElement {
            scalar: &self.scalar + &other.scalar,
            div_l: &self.div_l + &other.div_l,
            div_k: &self.div_k + &other.div_k,
            div_e: &self.div_e + &other.div_e,
            point: &self.point + &other.point,
        }
    }

    fn neg(&self) -> Self {
        BaseElement {
            scalar: -&self.scalar,
            div_l: -&self.div_l,
            div_k: -&self.div_k,
            div_e: -&self.div_e,
            point: -&self.point,
        }
    }

    /// Product in the base algebra; degree >= 3 components vanish.
    fn mul(&self, other: &Self) -> Self {
        let l2 = Poly::var(Symbol::L2);
        let lk = Poly::var(Symbol::LK);
        let k2 = Poly::var(Symbol::K2);
        let w = Poly::var(Symbol::W);
        let pairing = &self.div_l * &other.div_l * &l2
            + (&self.div_l * &other.div_k + &self.div_k * &other.div_l) * &lk
            + &self.div_k * &other.div_k * &k2
            - &self.div_e * &other.div_e * &w;
        BaseElement {
            scalar: &self.scalar * &other.scalar,
            div_l: &self.scalar * &other.div_l + &other.scalar * &self.div_l,
            div_k: &self.scalar * &other.div_k + &other.scalar * &self.div_k,
            div_e: &self.scalar * &other.div_e + &other.scalar * &self.div_e,
            point: &self.scalar * &other.point + &other.scalar * &self.point + pairing,
        }
    }

    fn scale(&self, p: &Poly) -> Self {
        BaseElement {
            scalar: &self.scalar * p,
            div_l: &self.div_l * p,
            div_k: &self.div_k * p,
            div_e: &self.div_e * p,
            point: &self.point * p,
        }
    }
}

/// Formal polynomial in `xi` with base-algebra coefficients.
#[derive(Clone, PartialEq, Debug)]
pub struct XClass {
    coeffs: Vec<BaseElement>,
}

impl XClass {
    pub fn zero() -> Self {
        XClass { coeffs: vec![] }
    }

    pub fn one() -> Self {
        XClass {
            coeffs: vec![BaseElement::one()],
        }
    }

    pub fn from_base(b: BaseElement) -> Self {
        XClass { coeffs: vec![b] }
    }

    /// `b * xi^k`.
    pub fn base_times_xi(b: BaseElement, k: usize) -> Self {
        let mut coeffs = vec![BaseElement::zero(); k + 1];
        coeffs[k] = b;
        XClass { coeffs }
    }

    pub fn xi_degree(&self) -> usize {
        self.coeffs.len().saturating_sub(1)
    }

    pub fn base_coeff(&self, k: usize) -> BaseElement {
        self.coeffs
            .get(k)
            .cloned()
            .unwrap_or_else(BaseElement::zero)
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.iter().all(|b| b.is_zero())
    }

    fn trim(mut self) -> Self {
        while let Some(last) = self.coeffs.last() {
            if last.is_zero() {
                self.coeffs.pop();
            } else {
                break;
            }
        }
        self
    }

    fn add_ref(&self, other: &Self) -> Self {
        let n = self.coeffs.len().max(other.coeffs.len());
        let mut coeffs = Vec::with_capacity(n);
        for k in 0..n {
            coeffs.push(self.base_coeff(k).add(&other.base_coeff(k)));
        }
        XClass { coeffs }.trim()
    }

    fn sub_ref(&self, other: &Self) -> Self {
        self.add_ref(&other.neg_ref())
    }

    fn neg_ref(&self) -> Self {
        XClass {
            coeffs: self.coeffs.iter().map(|b| b.neg()).collect(),
        }
    }

    fn mul_ref(&self, other: &Self) -> Self {
        if self.is_zero() || other.is_zero() {
            return Self::zero();
        }
        let n = self.coeffs.len() + other.coeffs.len() - 1;
        let mut coeffs = vec![BaseElement::zero(); n];
        for (i, a) in self.coeffs.iter().enumerate() {
            if a.is_zero() {
                continue;
            }
            for (j, b) in other.coeffs.iter().enumerate() {
                if b.is_zero() {
                    continue;
                }
                coeffs[i + j] = coeffs[i + j].add(&a.mul(b));
            }
        }
        XClass { coeffs }.trim()
    }

    pub fn scale_poly(&self, p: &Poly) -> Self {
        XClass {
            coeffs: self.coeffs.iter().map(|b| b.scale(p)).collect(),
        }
    }

    pub fn pow(&self, k: u32) -> Self {
        let mut out = Self::one();
        for _ in 0..k {
            out = out.mul_ref(self);
        }
        out
    }
}

macro_rules! xclass_binop {
    ($trait:ident, $method:ident, $inner:ident) => {
        impl $trait for &XClass {
            type Output = XClass;
            fn $method(self, rhs: &XClass) -> XClass {
                self.$inner(rhs)
            }
        }
        impl $trait for XClass {
            type Output = XClass;
            fn $method(self, rhs: XClass) -> XClass {
                self.$inner(&rhs)
            }
        }
        impl $trait<&XClass> for XClass {
            type Output = XClass;
            fn $method(self, rhs: &XClass) -> XClass {
                self.$inner(rhs)
            }
        }
        impl $trait<XClass> for &XClass {
            type Output = XClass;
            fn $method(self, rhs: XClass) -> XClass {
                self.$inner(&rhs)
            }
        }
    };
}

xclass_binop!(Add, add, add_ref);
xclass_binop!(Sub, sub, sub_ref);
xclass_binop!(Mul, mul, mul_ref);

impl Neg for &XClass {
    type Output = XClass;
    fn neg(self) -> XClass {
        self.neg_ref()
    }
}

/// Class on the target projective space: polynomial in the hyperplane class
/// `H`, truncated at `dim Y`.
#[derive(Clone, PartialEq, Debug)]
pub struct YClass {
    dim_y: usize,
    coeffs: Vec<Poly>,
}

impl YClass {
    pub fn zero(dim_y: usize) -> Self {
        YClass {
            dim_y,
            coeffs: vec![Poly::zero(); dim_y + 1],
        }
    }

    pub fn one(dim_y: usize) -> Self {
        let mut y = Self::zero(dim_y);
        y.coeffs[0] = Poly::one();
        y
    }

    /// `p * H^k` (vanishes if `k > dim Y`).
    pub fn h_power(dim_y: usize, k: usize, p: Poly) -> Self {
        let mut y = Self::zero(dim_y);
        if k <= dim_y {
            y.coeffs[k] = p;
        }
        y
    }

    pub fn dim_y(&self) -> usize {
        self.dim_y
    }

    pub fn coeff(&self, k: usize) -> Poly {
        self.coeffs.get(k).cloned().unwrap_or_else(Poly::zero)
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.iter().all(|p| p.is_zero())
    }

    /// H-degrees with nonzero coefficient.
    pub fn support(&self) -> Vec<usize> {
        (0..=self.dim_y)
            .filter(|&k| !self.coeffs[k].is_zero())
            .collect()
    }

    fn add_ref(&self, other: &Self) -> Self {
        assert_eq!(self.dim_y, other.dim_y, "target dimensions differ");
        YClass {
            dim_y: self.dim_y,
            coeffs: self
                .coeffs
                .iter()
                .zip(other.coeffs.iter())
                .map(|(a, b)| a + b)
                .collect(),
        }
    }

    fn sub_ref(&self, other: &Self) -> Self {
        self.add_ref(&other.neg_ref())
    }

    fn neg_ref(&self) -> Self {
        YClass {
            dim_y: self.dim_y,
            coeffs: self.coeffs.iter().map(|p| -p).collect(),
        }
    }

    fn mul_ref(&self, other: &Self) -> Self {
        assert_eq!(self.dim_y, other.dim_y, "target dimensions differ");
        let mut out = Self::zero(self.dim_y);
        for i in 0..=self.dim_y {
            if self.coeffs[i].is_zero() {
                continue;
            }
            for j in 0..=(self.dim_y - i) {
                if other.coeffs[j].is_zero() {
                    continue;
                }
                out.coeffs[i + j] = &out.coeffs[i + j] + &(&self.coeffs[i] * &other.coeffs[j]);
            }
        }
        out
    }

    pub fn scale_poly(&self, p: &Poly) -> Self {
        YClass {
            dim_y: self.dim_y,
            coeffs: self.coeffs.iter().map(|c| c * p).collect(),
        }
    }

    pub fn scale(&self, c: &crate::Rat) -> Self {
        self.scale_poly(&Poly::constant(c.clone()))
    }

    pub fn pow(&self, k: u32) -> Self {
        let mut out = Self::one(self.dim_y);
        for _ in 0..k {
            out = out.mul_ref(self);
        }
        out
    }
}

macro_rules! yclass_binop {
    ($trait:ident, $method:ident, $inner:ident) => {
        impl $trait for &YClass {
            type Output = YClass;
            fn $method(self, rhs: &YClass) -> YClass {
                self.$inner(rhs)
            }
        }
        impl $trait for YClass {
            type Output = YClass;
            fn $method(self, rhs: YClass) -> YClass {
                self.$inner(&rhs)
            }
        }
        impl $trait<&YClass> for YClass {
            type Output = YClass;
            fn $method(self, rhs: &YClass) -> YClass {
                self.$inner(rhs)
            }
        }
        impl $trait<YClass> for &YClass {
            type Output = YClass;
            fn $method(self, rhs: YClass) -> YClass {
                self.$inner(&rhs)
            }
        }
    };
}

yclass_binop!(Add, add, add_ref);
yclass_binop!(Sub, sub, sub_ref);
yclass_binop!(Mul, mul, mul_ref);

impl fmt::Display for YClass {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut first = true;
        for k in (0..=self.dim_y).rev() {
            if self.coeffs[k].is_zero() {
                continue;
            }
            if !first {
                f.write_str(" + ")?;
            }
            first = false;
            write!(f, "({})*H^{}", self.coeffs[k], k)?;
        }
        if first {
            f.write_str("0")?;
        }
        Ok(())
    }
}

/// Pushforward context: the map from the projective bundle P(G) over the
/// surface, or the map from a blown-up surface (where f*H = L - E).
#[derive(Clone, Copy, PartialEq, Eq, Debug)]
pub enum PushContext {
    ProjBundle,
    BlowUpSurface,
}

fn binom_int(m: i64, j: i64) -> i64 {
    if j < 0 || j > m {
        return 0;
    }
    let mut v: i64 = 1;
    for i in 0..j {
        v = v * (m - i) / (i + 1);
    }
    v
}

/// Chern class `c_i` of the virtual normal sheaf `f* T_Y / T_X` of the
/// counting map out of P(G), for numeric rank `r >= 2`.
///
/// The class depends only on `r`; negative `i` gives 0, `i = 0` gives 1,
/// and every `i >= r + 4` vanishes because all three binomial rows do.
pub fn virtual_normal_chern(i: i64, r: u32) -> XClass {
    if i < 0 {
        return XClass::zero();
    }
    let r = r as i64;
    let i_us = i as usize;
    let mut cls = XClass::zero();

    let top = binom_int(r + 1, i);
    if top != 0 {
        cls = cls + XClass::base_times_xi(BaseElement::from_scalar(Poly::int(top)), i_us);
    }
    if i >= 1 {
        let bl = binom_int(r, i - 1);
        let bk = binom_int(r + 1, i - 1);
        if bl != 0 || bk != 0 {
            cls = cls
                + XClass::base_times_xi(
                    BaseElement::divisor(Poly::int(bl), Poly::int(bk), Poly::zero()),
                    i_us - 1,
                );
        }
    }
    if i >= 2 {
        let b1 = binom_int(r - 1, i - 2);
        let b2 = binom_int(r, i - 2);
        let b3 = binom_int(r + 1, i - 2);
        // bracket [b1 c2(V*) + b2 L.K + b3 2(K^2 - 6 rho)] contributes to the
        // point part only
        let point = Poly::var(Symbol::C2V).scale(&crate::rat(b1))
            + Poly::var(Symbol::LK).scale(&crate::rat(b2))
            + (Poly::var(Symbol::K2).scale(&crate::rat(2)) - Poly::int(12)).scale(&crate::rat(b3));
        if !point.is_zero() {
            cls = cls + XClass::base_times_xi(BaseElement::from_point(point), i_us - 2);
        }
    }
    cls
}

/// Pushforward to the target projective space of dimension `n(r-1)`.
///
/// Scalars map with a factor of the image degree (`c2(V*)` for the
/// projective bundle, `L^2 - |W'|` for the blow-up), divisors pair against
/// `f*H`, the point class shifts by two more, and each `xi` raises the
/// H-exponent by one. The base shift is the codimension of the map:
/// `r - 1` for the bundle, `dim Y - 2` for the blown-up surface (the two
/// agree in the classical cases).
pub fn pushforward(x: &XClass, n: u32, r: u32, ctx: PushContext) -> YClass {
    let dim_y = (n as usize) * (r as usize - 1);
    let mut out = YClass::zero(dim_y);
    let shift = match ctx {
        PushContext::ProjBundle => r as usize,
        PushContext::BlowUpSurface => dim_y - 1,
    };
    let scalar_factor = match ctx {
        PushContext::ProjBundle => Poly::var(Symbol::C2V),
        PushContext::BlowUpSurface => Poly::var(Symbol::L2) - Poly::var(Symbol::W),
    };
    for k in 0..=x.xi_degree() {
        let b = x.base_coeff(k);
        if !b.scalar.is_zero() {
            out = out + YClass::h_power(dim_y, shift - 1 + k, &b.scalar * &scalar_factor);
        }
        let divisor_weight = match ctx {
            PushContext::ProjBundle => {
                &b.div_l * &Poly::var(Symbol::L2) + &b.div_k * &Poly::var(Symbol::LK)
            }
            PushContext::BlowUpSurface => {
                // f*H = L - E, and E.(L - E) = |W'|
                &b.div_l * &Poly::var(Symbol::L2)
                    + &b.div_k * &Poly::var(Symbol::LK)
                    + &b.div_e * &Poly::var(Symbol::W)
            }
        };
        if !divisor_weight.is_zero() {
            out = out + YClass::h_power(dim_y, shift + k, divisor_weight);
        }
        if !b.point.is_zero() {
            out = out + YClass::h_power(dim_y, shift + 1 + k, b.point);
        }
    }
    out
}

/// Pullback along `f* O_Y(1) = O_X(1)`: substitutes `H -> xi` with no
/// truncation on the source.
pub fn pullback_h(y: &YClass) -> XClass {
    let mut out = XClass::zero();
    for k in 0..=y.dim_y() {
        let c = y.coeff(k);
        if !c.is_zero() {
            out = out + XClass::base_times_xi(BaseElement::from_scalar(c), k);
        }
    }
    out
}
