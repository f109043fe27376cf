//! Quadratic fields `Y(h₁(−m−1/2)h₂(−n−1/2), z)` and their components.

use std::fmt;

use serde::{Deserialize, Serialize};

use super::fock::{apply_mode, Basis, Factor, FockElement, Mode};
use super::FermionError;
use crate::foundation::{binom, rat, Rational, Vector};

/// `ς⁺_plus(−m−1/2) ς⁻_minus(−n−1/2)`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub struct QuadGen {
    pub plus: usize,
    pub m: u32,
    pub minus: usize,
    pub n: u32,
}

impl QuadGen {
    pub fn new(plus: usize, m: u32, minus: usize, n: u32) -> Self {
        Self { plus, m, minus, n }
    }

    pub fn state(&self) -> FockElement {
        FockElement::string(&[
            Factor::new(Basis::plus(self.plus), Mode::creation(self.m)),
            Factor::new(Basis::minus(self.minus), Mode::creation(self.n)),
        ])
    }

    pub fn weight(&self) -> u32 {
        self.m + self.n + 1
    }
}

impl fmt::Display for QuadGen {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "{}({}){}({})",
            Basis::plus(self.plus),
            Mode::creation(self.m),
            Basis::minus(self.minus),
            Mode::creation(self.n)
        )
    }
}

fn apply_pair(first: Basis, p: Mode, second: Basis, q: Mode, s: &FockElement) -> FockElement {
    apply_mode(first, p, &apply_mode(second, q, s))
}

/// Component `c` by the closed double sum. In the first sum the binomial
/// `C(j+m+n−c, m)` comes from `∂^m h₁⁻`, which holds creation modes only,
/// so it is dropped for negative upper argument. For `c < 0` the
/// creation–creation terms, empty for `c ≥ 0`, are added.
pub fn component_closed_form(g: QuadGen, c: i64, s: &FockElement) -> FockElement {
    let (h1, h2) = (Basis::plus(g.plus), Basis::minus(g.minus));
    let (m, n) = (g.m as i64, g.n as i64);
    let mut out = FockElement::zero();
    for j in 0..=s.max_mode() {
        let upper = j + m + n - c;
        if upper >= 0 {
            let coef = binom(-j - 1, g.n) * binom(upper, g.m);
            if !coef.is_zero() {
                let t = apply_pair(h1, Mode(c - m - n - j - 1), h2, Mode(j), s);
                out.add_scaled(&t, &coef);
            }
        }
        let coef = binom(-j - 1, g.m) * binom(upper, g.n);
        if !coef.is_zero() {
            let t = apply_pair(h2, Mode(c - m - n - j - 1), h1, Mode(j), s);
            out.add_scaled(&t, &-coef);
        }
    }
    for a in m..=m - c - 1 {
        let b = m + n - c - 1 - a;
        let coef = binom(a, g.m) * binom(b, g.n);
        let t = apply_pair(h1, Mode(-a - 1), h2, Mode(-b - 1), s);
        out.add_scaled(&t, &coef);
    }
    out
}

/// `z^e ↦ (1/p!) dᵖ/dzᵖ z^e`, coefficient only.
fn derived_monomial(e: i64, p: u32) -> Rational {
    let mut c = rat(1);
    for i in 0..p as i64 {
        c *= rat(e - i);
        c /= rat(i + 1);
    }
    c
}

/// Exponent carried by `(1/p!) ∂ᵖ h(n+1/2) z^{−n−1}`.
fn field_exponent(n: i64, p: u32) -> i64 {
    -n - 1 - p as i64
}

/// Component `c` by expanding the normal-ordered product of derived fields
/// `(1/m!n!)(∂ᵐh₁⁻ ∂ⁿh₂ − ∂ⁿh₂ ∂ᵐh₁⁺)` and reading off `z^{−c−1}`. Each
/// product runs over the modes of the field acting first, truncated at a
/// bound past which it kills `s`; the partner mode is the one whose exponent
/// completes `z^{−c−1}`.
pub fn component_series(g: QuadGen, c: i64, s: &FockElement) -> FockElement {
    let (h1, h2) = (Basis::plus(g.plus), Basis::minus(g.minus));
    let bound = g.m as i64 + g.n as i64 + c.abs() + s.max_mode() + 4;
    let target = -c - 1;
    let mut out = FockElement::zero();
    // ∂ᵐh₁⁻ ∂ⁿh₂: h₂ acts first, h₁ ranges over creation modes only
    for q in -bound..bound {
        let t = apply_mode(h2, Mode(q), s);
        if t.is_zero() {
            continue;
        }
        let eq = field_exponent(q, g.n);
        let p = -(target - eq) - 1 - g.m as i64;
        if p >= 0 {
            continue;
        }
        let coef = derived_monomial(-q - 1, g.n) * derived_monomial(-p - 1, g.m);
        if !coef.is_zero() {
            out.add_scaled(&apply_mode(h1, Mode(p), &t), &coef);
        }
    }
    // −∂ⁿh₂ ∂ᵐh₁⁺: h₁ acts first over annihilation modes
    for p in 0..bound {
        let t = apply_mode(h1, Mode(p), s);
        if t.is_zero() {
            continue;
        }
        let ep = field_exponent(p, g.m);
        let q = -(target - ep) - 1 - g.n as i64;
        let coef = derived_monomial(-p - 1, g.m) * derived_monomial(-q - 1, g.n);
        if !coef.is_zero() {
            out.add_scaled(&apply_mode(h2, Mode(q), &t), &-coef);
        }
    }
    out
}

/// Component `c` of `Y(g, z)` on `s`, computed both ways.
pub fn quadratic_component(g: QuadGen, c: i64, s: &FockElement) -> Result<FockElement, FermionError> {
    let closed = component_closed_form(g, c, s);
    let series = component_series(g, c, s);
    if closed != series {
        return Err(FermionError::PathDisagreement(format!(
            "{g} component {c} on {s}: closed form {closed}, series {series}"
        )));
    }
    Ok(closed)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn two(a: Basis, p: u32, b: Basis, q: u32) -> FockElement {
        FockElement::string(&[Factor::new(a, Mode::creation(p)), Factor::new(b, Mode::creation(q))])
    }

    #[test]
    fn literal_double_sum_would_double_count() {
        // The annihilation pair h₁(1/2)h₂(1/2) enters once, giving ±1.
        let g = QuadGen::new(1, 0, 1, 0);
        let s = two(Basis::minus(1), 0, Basis::plus(1), 0);
        let v = quadratic_component(g, 1, &s).unwrap();
        assert_eq!(v, FockElement::vacuum().scaled(&rat(-1)));
    }

    #[test]
    fn paths_agree_on_small_states() {
        let states = vec![
            FockElement::vacuum(),
            two(Basis::plus(1), 0, Basis::minus(2), 1),
            two(Basis::plus(2), 2, Basis::minus(1), 0),
            two(Basis::plus(1), 1, Basis::minus(1), 2),
        ];
        for m in 0..=2 {
            for n in 0..=2 {
                let g = QuadGen::new(1, m, 1, n);
                for c in -4..=4 {
                    for s in &states {
                        quadratic_component(g, c, s).unwrap();
                    }
                }
            }
        }
    }

    #[test]
    fn first_component_is_matrix_product() {
        let u = QuadGen::new(1, 0, 2, 0);
        let v = QuadGen::new(2, 0, 1, 0).state();
        let out = quadratic_component(u, 0, &v).unwrap();
        assert_eq!(out, QuadGen::new(1, 0, 1, 0).state().minus(&QuadGen::new(2, 0, 2, 0).state()));
    }
}
