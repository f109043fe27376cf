use crate::foundation::{Vector, ZSeries};

/// A conformal algebra presented by its elements, `∂`, and `Y⁺(·, z)`.
///
/// `yplus(a, b)` returns `Y⁺(a, z) b = Σ_{n≥0} a_n(b) z^{-n-1}`; implementations
/// are bilinear and supported on strictly negative exponents.
pub trait ConformalAlgebra: Sync {
    type Elem: Vector;

    fn label(&self) -> String;

    /// Basis of the generating space `V` that the checks iterate over.
    fn generators(&self) -> Vec<Self::Elem>;

    fn partial(&self, e: &Self::Elem) -> Self::Elem;

    fn yplus(&self, a: &Self::Elem, b: &Self::Elem) -> ZSeries<Self::Elem>;

    /// Weight of a homogeneous element; `None` when ungraded or mixed.
    fn weight(&self, _e: &Self::Elem) -> Option<u32> {
        None
    }

    fn describe(&self, e: &Self::Elem) -> String {
        e.to_string()
    }

    fn partial_pow(&self, e: &Self::Elem, i: u32) -> Self::Elem {
        (0..i).fold(e.clone(), |x, _| self.partial(&x))
    }

    /// `a_n(b)`.
    fn component(&self, a: &Self::Elem, b: &Self::Elem, n: u32) -> Self::Elem {
        self.yplus(a, b).coeff(-(n as i64) - 1)
    }

    /// Smallest `N` with `a_n(b) = 0` for all `n ≥ N`.
    fn locality(&self, a: &Self::Elem, b: &Self::Elem) -> u32 {
        locality_of(&self.yplus(a, b))
    }
}

pub fn locality_of<C: Vector>(s: &ZSeries<C>) -> u32 {
    s.min_exponent().map_or(0, |e| (-e).max(0) as u32)
}

/// `a_n` read off a product series.
pub fn component_of<C: Vector>(s: &ZSeries<C>, n: u32) -> C {
    s.coeff(-(n as i64) - 1)
}
