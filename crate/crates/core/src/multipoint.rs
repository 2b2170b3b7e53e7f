//! Residual polynomials and the iterative multiple point formula.
//!
//! A residual polynomial for singularity index `i` is a sum of terms
//! `coef * prod_o c_{l+o}` with exactly `i` Chern factors whose offsets sum
//! to zero (homogeneity). Indices 0..2 are built in; higher indices are
//! accepted only from validated data files, and index 7 and beyond is
//! refused outright.
//!
//! The k-fold point class on the target is computed by the recursion
//! `y_k = (1/k) sum_{i<k} (-1)^i f_*(R_i) y_{k-1-i}` with `y_0 = [Y]`, and
//! the n-fold count is the top H-degree coefficient of `y_n` after the
//! counting substitutions.

use std::collections::BTreeMap;

use thiserror::Error;

use crate::chow::{pushforward, virtual_normal_chern, PushContext, XClass, YClass};
use crate::symbol::Symbol;
use crate::{rat, ratio, Poly};

#[derive(Debug, Error, PartialEq, Eq)]
pub enum MultipointError {
    #[error("no residual polynomial for index {0}; supply a residual data file")]
    MissingResidual(usize),
    #[error("multiple point order {0} out of supported range 1..=7")]
    OrderOutOfRange(usize),
    #[error("rank {0} out of supported range (need r >= 2)")]
    RankOutOfRange(u32),
}

/// One term `coef * prod_o c_{l+o}`; `coef` may involve the symbol `ell`.
#[derive(Clone, PartialEq, Debug)]
pub struct ResidualTerm {
    pub coef: Poly,
    pub offsets: Vec<i64>,
}

/// Residual polynomial for singularity index `i`.
#[derive(Clone, PartialEq, Debug)]
pub struct ResidualPoly {
    pub index: usize,
    pub terms: Vec<ResidualTerm>,
}

impl ResidualPoly {
    /// Canonical form: offsets sorted, equal-offset terms merged, zero terms
    /// dropped, terms sorted. Used by the data-file consistency gate.
    pub fn normalized(&self) -> ResidualPoly {
        let mut merged: BTreeMap<Vec<i64>, Poly> = BTreeMap::new();
        for t in &self.terms {
            let mut o = t.offsets.clone();
            o.sort_unstable();
            let entry = merged.entry(o).or_insert_with(Poly::zero);
            *entry = &*entry + &t.coef;
        }
        ResidualPoly {
            index: self.index,
            terms: merged
                .into_iter()
                .filter(|(_, c)| !c.is_zero())
                .map(|(offsets, coef)| ResidualTerm { coef, offsets })
                .collect(),
        }
    }
}

/// Registry of residual polynomials by singularity index.
#[derive(Clone, PartialEq, Debug)]
pub struct ResidualRegistry {
    map: BTreeMap<usize, ResidualPoly>,
}

impl ResidualRegistry {
    pub fn empty() -> Self {
        ResidualRegistry {
            map: BTreeMap::new(),
        }
    }

    pub fn get(&self, i: usize) -> Option<&ResidualPoly> {
        self.map.get(&i)
    }

    pub fn insert(&mut self, rp: ResidualPoly) {
        self.map.insert(rp.index, rp);
    }

    pub fn max_index(&self) -> Option<usize> {
        self.map.keys().next_back().copied()
    }

    /// Largest n such that every index < n is present.
    pub fn max_order(&self) -> usize {
        let mut n = 0;
        while self.map.contains_key(&n) {
            n += 1;
        }
        n
    }
}

fn term(coef: i64, offsets: &[i64]) -> ResidualTerm {
    ResidualTerm {
        coef: Poly::int(coef),
        offsets: offsets.to_vec(),
    }
}

/// The built-in residual polynomials for indices 0, 1, 2:
/// `R_0 = 1`, `R_1 = c_l`, and
/// `R_2 = 8 c_{l-4} c_{l+4} + 4 c_{l-3} c_{l+3} + 2 c_{l-2} c_{l+2}
///        + c_{l-1} c_{l+1} + c_l^2`.
pub fn builtin_residuals() -> ResidualRegistry {
    let mut reg = ResidualRegistry::empty();
    reg.insert(ResidualPoly {
        index: 0,
        terms: vec![term(1, &[])],
    });
    reg.insert(ResidualPoly {
        index: 1,
        terms: vec![term(1, &[0])],
    });
    reg.insert(ResidualPoly {
        index: 2,
        terms: vec![
            term(8, &[-4, 4]),
            term(4, &[-3, 3]),
            term(2, &[-2, 2]),
            term(1, &[-1, 1]),
            term(1, &[0, 0]),
        ],
    });
    reg
}

/// Evaluate a residual polynomial in the virtual-normal Chern classes with
/// `l = r - 1`; factors with negative index vanish and `c_0 = 1`.
pub fn instantiate_residual(rp: &ResidualPoly, r: u32) -> XClass {
    let ell = r as i64 - 1;
    let mut out = XClass::zero();
    let rules: BTreeMap<_, _> = [(Symbol::Ell, Poly::int(ell))].into_iter().collect();
    for t in &rp.terms {
        let mut prod = XClass::one();
        let mut dead = false;
        for &o in &t.offsets {
            let j = ell + o;
            if j < 0 {
                dead = true;
                break;
            }
            prod = prod * virtual_normal_chern(j, r);
            if prod.is_zero() {
                dead = true;
                break;
            }
        }
        if dead {
            continue;
        }
        let coef = t.coef.substitute(&rules);
        out = out + prod.scale_poly(&coef);
    }
    out
}

/// The k-fold point class `y_k` on the target projective space of dimension
/// `n(r-1)`, from the iterative formula; needs residual indices `0..k`.
pub fn multiple_point_class(
    k: usize,
    n: u32,
    r: u32,
    residuals: &ResidualRegistry,
) -> Result<YClass, MultipointError> {
    if k == 0 || k > 7 {
        return Err(MultipointError::OrderOutOfRange(k));
    }
    if r < 2 {
        return Err(MultipointError::RankOutOfRange(r));
    }
    let dim_y = (n as usize) * (r as usize - 1);
    // pushforwards of the instantiated residuals, computed once
    let mut pushed = Vec::with_capacity(k);
    for i in 0..k {
        let rp = residuals
            .get(i)
            .ok_or(MultipointError::MissingResidual(i))?;
        let inst = instantiate_residual(rp, r);
        pushed.push(pushforward(&inst, n, r, PushContext::ProjBundle));
    }
    let mut y: Vec<YClass> = vec![YClass::one(dim_y)];
    for j in 1..=k {
        let mut acc = YClass::zero(dim_y);
        for i in 0..j {
            let contribution = &pushed[i] * &y[j - 1 - i];
            if i % 2 == 0 {
                acc = acc + contribution;
            } else {
                acc = acc - contribution;
            }
        }
        y.push(acc.scale(&ratio(1, j as i64)));
    }
    Ok(y.pop().expect("k >= 1"))
}

/// Expected number of length-n quotients: the H^{n(r-1)} coefficient of
/// `y_n` after the counting substitutions `c2(V*) -> chi(L) - (n-1)(r-1)`
/// and `L^2 -> 2 chi(L) + L.K - 2`. The result involves only chi(L), L.K
/// and K^2.
pub fn n_fold_count(n: u32, r: u32, residuals: &ResidualRegistry) -> Result<Poly, MultipointError> {
    let y = multiple_point_class(n as usize, n, r, residuals)?;
    let top = y.coeff(y.dim_y());
    let chi = Poly::var(Symbol::ChiL);
    let c2v_rule = &chi - &Poly::int((n as i64 - 1) * (r as i64 - 1));
    let l2_rule = chi.scale(&rat(2)) + Poly::var(Symbol::LK) - Poly::int(2);
    let rules: BTreeMap<_, _> = [(Symbol::C2V, c2v_rule), (Symbol::L2, l2_rule)]
        .into_iter()
        .collect();
    let counted = top.substitute(&rules);
    debug_assert!(
        counted
            .symbols()
            .iter()
            .all(|s| matches!(s, Symbol::ChiL | Symbol::LK | Symbol::K2)),
        "count should only involve chi(L), L.K, K^2: {}",
        counted
    );
    Ok(counted)
}

/// Herbert-Ronga double point class on the target:
/// `y_2 = ((f_*[X])^2 - f_* c_l) / 2`.
pub fn herbert_ronga_double(f_x: &YClass, f_cl: &YClass) -> YClass {
    (&f_x.pow(2) - f_cl).scale(&ratio(1, 2))
}

/// Kleiman triple point class on the target:
/// `y_3 = ((f_*[X])^3 - 3 (f_* c_l)(f_*[X]) + 2 f_*(c_l^2)
///         + sum_{k=1}^{l} 2^k f_*(c_{l-k} c_{l+k})) / 6`.
///
/// `cross[k-1]` holds the pushforward of `c_{l-k} c_{l+k}`.
pub fn kleiman_triple(f_x: &YClass, f_cl: &YClass, f_cl_sq: &YClass, cross: &[YClass]) -> YClass {
    let mut acc = f_x.pow(3) - (f_cl * f_x).scale(&rat(3)) + f_cl_sq.scale(&rat(2));
    let mut weight = rat(1);
    for c in cross {
        weight *= rat(2);
        acc = acc + c.scale(&weight);
    }
    acc.scale(&ratio(1, 6))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::hilb::{euler_char_hilb, Rank};

    #[test]
    fn builtins_are_the_printed_polynomials() {
        let reg = builtin_residuals();
        assert_eq!(reg.get(0).unwrap().terms, vec![term(1, &[])]);
        assert_eq!(reg.get(1).unwrap().terms, vec![term(1, &[0])]);
        let r2 = reg.get(2).unwrap();
        assert_eq!(r2.terms.len(), 5);
        assert_eq!(reg.max_order(), 3);
        assert_eq!(reg.max_index(), Some(2));
    }

    #[test]
    fn instantiation_drops_negative_indices() {
        let reg = builtin_residuals();
        // R_0 -> 1 for any r
        assert_eq!(instantiate_residual(reg.get(0).unwrap(), 5), XClass::one());
        // R_1 at (any n, r) is c_{r-1}
        assert_eq!(
            instantiate_residual(reg.get(1).unwrap(), 3),
            virtual_normal_chern(2, 3)
        );
        // R_2 at r = 2 (l = 1): the -4,-3,-2 offset pairs die on negative
        // indices; 2 c_{-1} c_3 dies too; c_0 c_2 + c_1^2 remains with c_0 = 1
        let got = instantiate_residual(reg.get(2).unwrap(), 2);
        let expected = virtual_normal_chern(2, 2) + virtual_normal_chern(1, 2).pow(2);
        assert_eq!(got, expected);
    }

    #[test]
    fn first_class_is_the_image_class() {
        let reg = builtin_residuals();
        for (n, r) in [(1u32, 3u32), (2, 2), (3, 5)] {
            let y1 = multiple_point_class(1, n, r, &reg).unwrap();
            let expected = YClass::h_power(
                (n as usize) * (r as usize - 1),
                r as usize - 1,
                Poly::var(Symbol::C2V),
            );
            assert_eq!(y1, expected);
        }
    }

    #[test]
    fn double_class_agrees_with_herbert_ronga() {
        let reg = builtin_residuals();
        for r in 2..=12u32 {
            let n = 2;
            let y2 = multiple_point_class(2, n, r, &reg).unwrap();
            let f_x = pushforward(&XClass::one(), n, r, PushContext::ProjBundle);
            let f_cl = pushforward(
                &virtual_normal_chern(r as i64 - 1, r),
                n,
                r,
                PushContext::ProjBundle,
            );
            assert_eq!(y2, herbert_ronga_double(&f_x, &f_cl), "r={}", r);
        }
    }

    #[test]
    fn triple_class_agrees_with_kleiman() {
        let reg = builtin_residuals();
        for r in 2..=12u32 {
            let n = 3;
            let ell = r as i64 - 1;
            let y3 = multiple_point_class(3, n, r, &reg).unwrap();
            let push = |x: &XClass| pushforward(x, n, r, PushContext::ProjBundle);
            let cl = virtual_normal_chern(ell, r);
            let f_x = push(&XClass::one());
            let f_cl = push(&cl);
            let f_cl_sq = push(&cl.pow(2));
            let cross: Vec<_> = (1..=ell)
                .map(|k| {
                    push(&(virtual_normal_chern(ell - k, r) * virtual_normal_chern(ell + k, r)))
                })
                .collect();
            assert_eq!(y3, kleiman_triple(&f_x, &f_cl, &f_cl_sq, &cross), "r={}", r);
        }
    }

    #[test]
    fn counts_match_euler_characteristics_small() {
        let reg = builtin_residuals();
        for n in 1..=3u32 {
            for r in 2..=8u32 {
                let count = n_fold_count(n, r, &reg).unwrap();
                let chi = euler_char_hilb(n as usize, &Rank::numeric(r as i64)).unwrap();
                assert_eq!(count, chi, "n={} r={}", n, r);
            }
        }
    }

    #[test]
    fn missing_residual_is_reported() {
        let reg = builtin_residuals();
        assert_eq!(
            multiple_point_class(4, 4, 3, &reg),
            Err(MultipointError::MissingResidual(3))
        );
        assert_eq!(
            multiple_point_class(8, 8, 3, &reg),
            Err(MultipointError::OrderOutOfRange(8))
        );
    }

    #[test]
    fn classes_are_homogeneous() {
        let reg = builtin_residuals();
        for k in 1..=3usize {
            for (n, r) in [(3u32, 2u32), (3, 4), (5, 3), (7, 2)] {
                let y = multiple_point_class(k, n, r, &reg).unwrap();
                let expected_degree = k * (r as usize - 1);
                assert_eq!(
                    y.support(),
                    vec![expected_degree],
                    "k={} n={} r={}",
                    k,
                    n,
                    r
                );
            }
        }
    }

    #[test]
    fn herbert_ronga_with_zero_image_class() {
        let f_cl = YClass::h_power(4, 2, Poly::var(Symbol::C2V));
        let zero = YClass::zero(4);
        assert_eq!(
            herbert_ronga_double(&zero, &f_cl),
            f_cl.scale(&ratio(-1, 2))
        );
    }
}
