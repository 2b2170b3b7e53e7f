//! The fixed symbol set all polynomials are written in.
//!
//! The order is canonical and shared by every renderer and serializer:
//! exponent vectors in machine output list the exponents in exactly this
//! order.

/// Formal symbols of the engine.
///
/// `ChiL`, `LK`, `K2` are the surface invariants chi(L), L.K and K^2; `C2V`
/// is the second Chern number of the dual bundle; `W` the length of the
/// blown-up point set; `R` the rank parameter. `Ell` indexes
/// residual-polynomial coefficients and `L2` carries the self-intersection
/// L^2 until a substitution eliminates it.
#[derive(Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Debug)]
pub enum Symbol {
    ChiL,
    LK,
    K2,
    C2V,
    W,
    R,
    Ell,
    L2,
}

/// Number of symbols; exponent vectors have exactly this length.
pub const SYMBOL_COUNT: usize = 8;

/// All symbols in canonical order.
pub const SYMBOLS: [Symbol; SYMBOL_COUNT] = [
    Symbol::ChiL,
    Symbol::LK,
    Symbol::K2,
    Symbol::C2V,
    Symbol::W,
    Symbol::R,
    Symbol::Ell,
    Symbol::L2,
];

impl Symbol {
    /// Position in the canonical order.
    pub fn index(self) -> usize {
        match self {
            Symbol::ChiL => 0,
            Symbol::LK => 1,
            Symbol::K2 => 2,
            Symbol::C2V => 3,
            Symbol::W => 4,
            Symbol::R => 5,
            Symbol::Ell => 6,
            Symbol::L2 => 7,
        }
    }

    /// Name used in human-readable text output.
    pub fn name(self) -> &'static str {
        match self {
            Symbol::ChiL => "chi(L)",
            Symbol::LK => "L.K",
            Symbol::K2 => "K^2",
            Symbol::C2V => "c2(V*)",
            Symbol::W => "|W'|",
            Symbol::R => "r",
            Symbol::Ell => "ell",
            Symbol::L2 => "L^2",
        }
    }

    /// Name used in LaTeX output.
    pub fn latex(self) -> &'static str {
        match self {
            Symbol::ChiL => "\\chi(L)",
            Symbol::LK => "L.K_S",
            Symbol::K2 => "K_S^2",
            Symbol::C2V => "c_2(V^*)",
            Symbol::W => "|W'|",
            Symbol::R => "r",
            Symbol::Ell => "\\ell",
            Symbol::L2 => "L^2",
        }
    }
}
