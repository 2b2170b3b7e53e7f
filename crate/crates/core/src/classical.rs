//! The three closed-form counts for (n, r) in {(2,2), (2,3), (3,2)}.
//!
//! Case (2,2) counts nodes of an immersed plane curve directly; the other
//! two run the double and triple point formulas on a blown-up surface
//! mapping to P^4 resp. P^3. Each raw count is then rewritten in
//! chi(L), L.K, K^2 by the stated substitutions.

use std::collections::BTreeMap;

use crate::chow::{pushforward, BaseElement, PushContext, XClass};
use crate::multipoint::{herbert_ronga_double, kleiman_triple};
use crate::poly::MultiPoly;
use crate::symbol::Symbol;
use crate::{rat, ratio, Poly};

#[derive(Clone, Copy, PartialEq, Eq, Debug)]
pub enum ClassicalCase {
    Case22,
    Case23,
    Case32,
}

impl ClassicalCase {
    pub fn pair(self) -> (u32, u32) {
        match self {
            ClassicalCase::Case22 => (2, 2),
            ClassicalCase::Case23 => (2, 3),
            ClassicalCase::Case32 => (3, 2),
        }
    }
}

/// The per-case substitutions that express the raw count in
/// chi(L), L.K, K^2.
pub fn substitution_rules(case: ClassicalCase) -> BTreeMap<Symbol, Poly> {
    let chi = Poly::var(Symbol::ChiL);
    let lk = Poly::var(Symbol::LK);
    let l2_rule = chi.scale(&rat(2)) + &lk - Poly::int(2);
    let mut rules = BTreeMap::new();
    match case {
        ClassicalCase::Case22 => {
            rules.insert(Symbol::C2V, &chi - &Poly::one());
        }
        ClassicalCase::Case23 | ClassicalCase::Case32 => {
            rules.insert(Symbol::C2V, &chi - &Poly::int(2));
            rules.insert(Symbol::W, &chi + &lk);
        }
    }
    rules.insert(Symbol::L2, l2_rule);
    rules
}

/// Total Chern class of the virtual normal sheaf on the blow-up:
/// `(1 + (L - E))^m (1 + K_X + 2(K_X^2 - 6 rho))` with `K_X = K + E`.
fn blowup_virtual_normal_total(m: u32) -> XClass {
    let d = XClass::from_base(BaseElement::divisor(
        Poly::one(),
        Poly::zero(),
        -Poly::one(),
    ));
    let mut first = XClass::one();
    let mut dp = XClass::one();
    for j in 1..=2u32 {
        dp = dp * &d;
        let mut b: i64 = 1;
        for i in 0..j as i64 {
            b = b * (m as i64 - i) / (i + 1);
        }
        first = first + dp.scale_poly(&Poly::int(b));
    }
    // inverse of c(T_X) on a surface: 1 + K_X + 2(K_X^2 - 6 rho)
    let kx = XClass::from_base(BaseElement::divisor(Poly::zero(), Poly::one(), Poly::one()));
    let kx2 = kx.pow(2);
    let second = XClass::one()
        + &kx
        + (kx2 - XClass::from_base(BaseElement::from_point(Poly::int(6))))
            .scale_poly(&Poly::int(2));
    first * second
}

/// Degree-graded pieces of a base-only class: (c_1 as divisor class,
/// c_2 as a multiple of the point class).
fn graded_pieces(total: &XClass) -> (XClass, XClass) {
    let b = total.base_coeff(0);
    let c1 = XClass::from_base(BaseElement::divisor(b.div_l, b.div_k, b.div_e));
    let c2 = XClass::from_base(BaseElement::from_point(b.point));
    (c1, c2)
}

/// The raw per-case count, before substitutions, in the symbols
/// c2(V*), |W'|, L^2, L.K, K^2.
pub fn classical_count_raw(case: ClassicalCase) -> Poly {
    match case {
        ClassicalCase::Case22 => {
            // nodes = binom(c2(V*) - 1, 2) - (L.(L+K)/2 + 1), genus by adjunction
            let c2v = Poly::var(Symbol::C2V);
            let genus =
                (Poly::var(Symbol::L2) + Poly::var(Symbol::LK)).scale(&ratio(1, 2)) + Poly::one();
            MultiPoly::generalized_binomial(&(&c2v - &Poly::one()), 2) - genus
        }
        ClassicalCase::Case23 => {
            let (n, r) = (2, 3);
            let (_c1, c2) = graded_pieces(&blowup_virtual_normal_total(5));
            let f_x = pushforward(&XClass::one(), n, r, PushContext::BlowUpSurface);
            let f_c2 = pushforward(&c2, n, r, PushContext::BlowUpSurface);
            let y2 = herbert_ronga_double(&f_x, &f_c2);
            y2.coeff(y2.dim_y())
        }
        ClassicalCase::Case32 => {
            let (n, r) = (3, 2);
            let (c1, c2) = graded_pieces(&blowup_virtual_normal_total(4));
            let push = |x: &XClass| pushforward(x, n, r, PushContext::BlowUpSurface);
            let f_x = push(&XClass::one());
            let f_c1 = push(&c1);
            let f_c1_sq = push(&c1.pow(2));
            // codimension 1: the cross sum is the single term 2 c_0 c_2
            let cross = vec![push(&c2)];
            let y3 = kleiman_triple(&f_x, &f_c1, &f_c1_sq, &cross);
            y3.coeff(y3.dim_y())
        }
    }
}

/// The count expressed in chi(L), L.K, K^2.
pub fn classical_count(case: ClassicalCase) -> Poly {
    classical_count_raw(case).substitute(&substitution_rules(case))
}

/// The curve-immersion double point route for case (2,2):
/// `y_2 = (c2(V*)^2 - (3 c2(V*) + L^2 + L.K)) / 2`.
pub fn remark_double_check_raw() -> Poly {
    let c2v = Poly::var(Symbol::C2V);
    let f_cl = c2v.scale(&rat(3)) + Poly::var(Symbol::L2) + Poly::var(Symbol::LK);
    (c2v.pow(2) - f_cl).scale(&ratio(1, 2))
}

/// [`remark_double_check_raw`] after the case (2,2) substitutions.
pub fn remark_double_check() -> Poly {
    remark_double_check_raw().substitute(&substitution_rules(ClassicalCase::Case22))
}

/// Intermediate of the (3,2) computation: the pushforward degree of c_1,
/// printed as `4 L^2 + L.K - 3 |W'|`.
pub fn case32_pushed_c1() -> Poly {
    let (c1, _) = graded_pieces(&blowup_virtual_normal_total(4));
    let f_c1 = pushforward(&c1, 3, 2, PushContext::BlowUpSurface);
    f_c1.coeff(2)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::hilb::{euler_char_hilb, Rank};

    #[test]
    fn raw_case22_is_half_node_polynomial() {
        // binom(c-1,2) - (L.(L+K)/2 + 1) = (c^2 - 3c - L^2 - L.K)/2
        let expected = Poly::from_terms(&[
            (1, 2, &[(Symbol::C2V, 2)]),
            (-3, 2, &[(Symbol::C2V, 1)]),
            (-1, 2, &[(Symbol::L2, 1)]),
            (-1, 2, &[(Symbol::LK, 1)]),
        ]);
        assert_eq!(classical_count_raw(ClassicalCase::Case22), expected);
    }

    #[test]
    fn remark_route_equals_direct_count() {
        assert_eq!(
            remark_double_check_raw(),
            classical_count_raw(ClassicalCase::Case22)
        );
    }

    #[test]
    fn blowup_chern_pieces_match_printed_values() {
        // m = 5 target: c_2 = 10 L^2 + 5 L.K + 2 K^2 - 7 |W'| - 12
        let (_, c2) = graded_pieces(&blowup_virtual_normal_total(5));
        let expected = Poly::from_terms(&[
            (10, 1, &[(Symbol::L2, 1)]),
            (5, 1, &[(Symbol::LK, 1)]),
            (2, 1, &[(Symbol::K2, 1)]),
            (-7, 1, &[(Symbol::W, 1)]),
            (-12, 1, &[]),
        ]);
        assert_eq!(c2.base_coeff(0).point, expected);

        // m = 4 target: c_1 = 4L + K - 3E, c_2 = 6L^2 + 4L.K + 2K^2 - 4|W'| - 12
        let (c1, c2) = graded_pieces(&blowup_virtual_normal_total(4));
        let b = c1.base_coeff(0);
        assert_eq!(b.div_l, Poly::int(4));
        assert_eq!(b.div_k, Poly::one());
        assert_eq!(b.div_e, Poly::int(-3));
        let expected = Poly::from_terms(&[
            (6, 1, &[(Symbol::L2, 1)]),
            (4, 1, &[(Symbol::LK, 1)]),
            (2, 1, &[(Symbol::K2, 1)]),
            (-4, 1, &[(Symbol::W, 1)]),
            (-12, 1, &[]),
        ]);
        assert_eq!(c2.base_coeff(0).point, expected);
    }

    #[test]
    fn pushed_c1_matches_printed_value() {
        let expected = Poly::from_terms(&[
            (4, 1, &[(Symbol::L2, 1)]),
            (1, 1, &[(Symbol::LK, 1)]),
            (-3, 1, &[(Symbol::W, 1)]),
        ]);
        assert_eq!(case32_pushed_c1(), expected);
    }

    /// The printed intermediate for (2,3): after rewriting |W'| = L^2 - c2(V*),
    /// y_2 = (c2(V*)^2 - 7 c2(V*) - 5 L.K - 2 K^2 - 3 L^2 + 12)/2.
    #[test]
    fn case23_matches_printed_intermediate() {
        let printed = Poly::from_terms(&[
            (1, 2, &[(Symbol::C2V, 2)]),
            (-7, 2, &[(Symbol::C2V, 1)]),
            (-5, 2, &[(Symbol::LK, 1)]),
            (-2, 2, &[(Symbol::K2, 1)]),
            (-3, 2, &[(Symbol::L2, 1)]),
            (12, 2, &[]),
        ]);
        // compare in the raw symbols by substituting c2(V*) -> L^2 - |W'|
        let back: BTreeMap<_, _> = [(Symbol::C2V, Poly::var(Symbol::L2) - Poly::var(Symbol::W))]
            .into_iter()
            .collect();
        assert_eq!(
            printed.substitute(&back),
            classical_count_raw(ClassicalCase::Case23)
        );
    }

    /// The printed intermediate for (3,2):
    /// y_3 = (c^3 - 3c(4L^2 + L.K - 3|W'|) + 44L^2 + 24L.K + 6K^2 - 26|W'| - 24)/6.
    #[test]
    fn case32_matches_printed_intermediate() {
        let c = Poly::var(Symbol::C2V);
        let printed = (c.pow(3) - c.scale(&rat(3)) * case32_pushed_c1()
            + Poly::from_terms(&[
                (44, 1, &[(Symbol::L2, 1)]),
                (24, 1, &[(Symbol::LK, 1)]),
                (6, 1, &[(Symbol::K2, 1)]),
                (-26, 1, &[(Symbol::W, 1)]),
                (-24, 1, &[]),
            ]))
        .scale(&ratio(1, 6));
        let back: BTreeMap<_, _> = [(Symbol::C2V, Poly::var(Symbol::L2) - Poly::var(Symbol::W))]
            .into_iter()
            .collect();
        assert_eq!(
            printed.substitute(&back),
            classical_count_raw(ClassicalCase::Case32)
        );
    }

    #[test]
    fn all_cases_match_the_euler_characteristics() {
        for (case, n, r) in [
            (ClassicalCase::Case22, 2usize, 2i64),
            (ClassicalCase::Case23, 2, 3),
            (ClassicalCase::Case32, 3, 2),
        ] {
            let count = classical_count(case);
            let chi = euler_char_hilb(n, &Rank::numeric(r)).unwrap();
            assert_eq!(count, chi, "case ({}, {})", n, r);
        }
        assert_eq!(
            remark_double_check(),
            euler_char_hilb(2, &Rank::numeric(2)).unwrap()
        );
    }

    #[test]
    fn numeric_cross_check_on_p2() {
        // S = P^2, L = O(1): chi = 3, L.K = -3, K^2 = 9; both (2,2) routes agree
        let point: BTreeMap<_, _> = [
            (Symbol::ChiL, rat(3)),
            (Symbol::LK, rat(-3)),
            (Symbol::K2, rat(9)),
        ]
        .into_iter()
        .collect();
        let a = classical_count(ClassicalCase::Case22)
            .evaluate(&point)
            .unwrap();
        let b = remark_double_check().evaluate(&point).unwrap();
        assert_eq!(a, b);
    }
}
