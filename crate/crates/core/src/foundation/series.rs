//! Sparse formal series in one or two variables.

use std::collections::BTreeMap;
use std::fmt;

use serde::{Deserialize, Serialize};

use super::{format_rational, parse_rational, rat, FoundationError, Rational, Vector};

/// Finitely supported series `sum_j c_j var^j` with integer exponents.
#[derive(Clone, Debug, PartialEq)]
pub struct ZSeries<C> {
    var: char,
    coeffs: BTreeMap<i64, C>,
}

impl<C: Vector> ZSeries<C> {
    pub fn new(var: char) -> Self {
        Self { var, coeffs: BTreeMap::new() }
    }

    pub fn monomial(var: char, exponent: i64, c: C) -> Self {
        let mut s = Self::new(var);
        s.add_term(exponent, &c, &rat(1));
        s
    }

    pub fn from_terms(var: char, terms: impl IntoIterator<Item = (i64, C)>) -> Self {
        let mut s = Self::new(var);
        for (e, c) in terms {
            s.add_term(e, &c, &rat(1));
        }
        s
    }

    pub fn var(&self) -> char {
        self.var
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    pub fn len(&self) -> usize {
        self.coeffs.len()
    }

    pub fn is_empty(&self) -> bool {
        self.coeffs.is_empty()
    }

    /// Adds `scale * c` at `exponent`, pruning the entry if it cancels.
    pub fn add_term(&mut self, exponent: i64, c: &C, scale: &Rational) {
        if c.is_zero() || Vector::is_zero(scale) {
            return;
        }
        let entry = self.coeffs.entry(exponent).or_insert_with(C::zero);
        entry.add_scaled(c, scale);
        if entry.is_zero() {
            self.coeffs.remove(&exponent);
        }
    }

    pub fn get(&self, exponent: i64) -> Option<&C> {
        self.coeffs.get(&exponent)
    }

    pub fn coeff(&self, exponent: i64) -> C {
        self.coeffs.get(&exponent).cloned().unwrap_or_else(C::zero)
    }

    pub fn iter(&self) -> impl DoubleEndedIterator<Item = (i64, &C)> {
        self.coeffs.iter().map(|(e, c)| (*e, c))
    }

    pub fn min_exponent(&self) -> Option<i64> {
        self.coeffs.keys().next().copied()
    }

    pub fn max_exponent(&self) -> Option<i64> {
        self.coeffs.keys().next_back().copied()
    }

    /// Coefficient of `var^{-1}`.
    pub fn residue(&self) -> C {
        self.coeff(-1)
    }

    /// Keeps exactly the negative powers and renames the variable.
    pub fn negative_part(&self, new_var: char) -> Self {
        Self { var: new_var, coeffs: self.coeffs.range(..0).map(|(e, c)| (*e, c.clone())).collect() }
    }

    pub fn derivative(&self) -> Self {
        let mut out = Self::new(self.var);
        for (&e, c) in &self.coeffs {
            out.add_term(e - 1, c, &rat(e));
        }
        out
    }

    pub fn nth_derivative(&self, n: u32) -> Self {
        (0..n).fold(self.clone(), |s, _| s.derivative())
    }

    /// Multiplies by `var^k`.
    pub fn shift(&self, k: i64) -> Self {
        Self { var: self.var, coeffs: self.coeffs.iter().map(|(e, c)| (e + k, c.clone())).collect() }
    }

    /// Substitutes `var -> -var`.
    pub fn negate_variable(&self) -> Self {
        let mut out = Self::new(self.var);
        for (&e, c) in &self.coeffs {
            out.add_term(e, c, &rat(if e.rem_euclid(2) == 0 { 1 } else { -1 }));
        }
        out
    }

    pub fn with_var(mut self, var: char) -> Self {
        self.var = var;
        self
    }

    pub fn add_series(&mut self, other: &Self, scale: &Rational) {
        for (&e, c) in &other.coeffs {
            self.add_term(e, c, scale);
        }
    }

    pub fn plus(&self, other: &Self) -> Self {
        let mut out = self.clone();
        out.add_series(other, &rat(1));
        out
    }

    pub fn minus(&self, other: &Self) -> Self {
        let mut out = self.clone();
        out.add_series(other, &rat(-1));
        out
    }

    pub fn scaled(&self, c: &Rational) -> Self {
        let mut out = Self::new(self.var);
        out.add_series(self, c);
        out
    }

    /// Applies a linear map to every coefficient.
    pub fn map<D: Vector>(&self, mut f: impl FnMut(&C) -> D) -> ZSeries<D> {
        let mut out = ZSeries::new(self.var);
        for (&e, c) in &self.coeffs {
            out.add_term(e, &f(c), &rat(1));
        }
        out
    }

    /// Product with a scalar-valued series in the same variable.
    pub fn mul_scalar_series(&self, s: &ZSeries<Rational>) -> Self {
        let mut out = Self::new(self.var);
        for (&e, c) in &self.coeffs {
            for (f, r) in s.iter() {
                out.add_term(e + f, c, r);
            }
        }
        out
    }
}

impl ZSeries<Rational> {
    pub fn mul(&self, other: &Self) -> Self {
        self.mul_scalar_series(other)
    }
}

impl<C: Vector> fmt::Display for ZSeries<C> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.coeffs.is_empty() {
            return write!(f, "0");
        }
        for (i, (e, c)) in self.coeffs.iter().enumerate() {
            if i > 0 {
                write!(f, " + ")?;
            }
            write!(f, "({c})*{}^{e}", self.var)?;
        }
        Ok(())
    }
}

/// Serialized form: `[{exponent, coefficient}]`, ascending by exponent.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct SeriesTerm<T> {
    pub exponent: i64,
    pub coefficient: T,
}

impl<C: Vector> ZSeries<C> {
    pub fn to_terms<T>(&self, mut f: impl FnMut(&C) -> T) -> Vec<SeriesTerm<T>> {
        self.coeffs.iter().map(|(&e, c)| SeriesTerm { exponent: e, coefficient: f(c) }).collect()
    }
}

impl ZSeries<Rational> {
    pub fn to_json(&self) -> serde_json::Value {
        serde_json::to_value(self.to_terms(format_rational)).expect("series terms serialize")
    }

    pub fn from_json(var: char, v: &serde_json::Value) -> Result<Self, FoundationError> {
        let terms: Vec<SeriesTerm<String>> =
            serde_json::from_value(v.clone()).map_err(|e| FoundationError::Malformed(e.to_string()))?;
        let mut s = Self::new(var);
        for t in terms {
            s.add_term(t.exponent, &parse_rational(&t.coefficient)?, &rat(1));
        }
        Ok(s)
    }
}

/// Finitely supported two-variable series keyed by `(e1, e2)`.
#[derive(Clone, Debug, PartialEq)]
pub struct BiSeries<C> {
    coeffs: BTreeMap<(i64, i64), C>,
}

impl<C: Vector> Default for BiSeries<C> {
    fn default() -> Self {
        Self { coeffs: BTreeMap::new() }
    }
}

impl<C: Vector> BiSeries<C> {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn add_term(&mut self, e: (i64, i64), c: &C, scale: &Rational) {
        if c.is_zero() || Vector::is_zero(scale) {
            return;
        }
        let entry = self.coeffs.entry(e).or_insert_with(C::zero);
        entry.add_scaled(c, scale);
        if entry.is_zero() {
            self.coeffs.remove(&e);
        }
    }

    pub fn coeff(&self, e: (i64, i64)) -> C {
        self.coeffs.get(&e).cloned().unwrap_or_else(C::zero)
    }

    pub fn iter(&self) -> impl Iterator<Item = ((i64, i64), &C)> {
        self.coeffs.iter().map(|(e, c)| (*e, c))
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    pub fn len(&self) -> usize {
        self.coeffs.len()
    }

    pub fn is_empty(&self) -> bool {
        self.coeffs.is_empty()
    }

    pub fn add_series(&mut self, other: &Self, scale: &Rational) {
        for (&e, c) in &other.coeffs {
            self.add_term(e, c, scale);
        }
    }

    pub fn minus(&self, other: &Self) -> Self {
        let mut out = self.clone();
        out.add_series(other, &rat(-1));
        out
    }

    /// Union of the supports of two series.
    pub fn support_union(&self, other: &Self) -> Vec<(i64, i64)> {
        let mut keys: Vec<_> = self.coeffs.keys().chain(other.coeffs.keys()).copied().collect();
        keys.sort_unstable();
        keys.dedup();
        keys
    }
}

impl BiSeries<Rational> {
    /// Derivative in the first variable.
    pub fn d_first(&self) -> Self {
        let mut out = Self::new();
        for (&(a, b), c) in &self.coeffs {
            out.add_term((a - 1, b), c, &rat(a));
        }
        out
    }

    pub fn shift(&self, d1: i64, d2: i64) -> Self {
        Self { coeffs: self.coeffs.iter().map(|(&(a, b), c)| ((a + d1, b + d2), c.clone())).collect() }
    }

    /// Product with a coefficient-valued series in the second variable.
    pub fn times_second<C: Vector>(&self, s: &ZSeries<C>) -> BiSeries<C> {
        let mut out = BiSeries::new();
        for (&(a, b), r) in &self.coeffs {
            for (e, c) in s.iter() {
                out.add_term((a, b + e), c, r);
            }
        }
        out
    }

    /// `delta(z1/z2) = sum_j z1^j z2^{-j}`, materialized for `|j| <= half_width`.
    pub fn delta(half_width: i64) -> Self {
        let mut out = Self::new();
        for j in -half_width..=half_width {
            out.add_term((j, -j), &rat(1), &rat(1));
        }
        out
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn s(terms: &[(i64, i64)]) -> ZSeries<Rational> {
        ZSeries::from_terms('z', terms.iter().map(|&(e, c)| (e, rat(c))))
    }

    #[test]
    fn residue_examples() {
        assert_eq!(s(&[(-1, 5), (2, 3)]).residue(), rat(5));
        assert_eq!(s(&[(0, 1), (3, 1)]).residue(), rat(0));
    }

    #[test]
    fn negative_part_examples() {
        let x = ZSeries::from_terms('x', [(2, rat(1)), (-1, rat(7))]);
        let z = x.negative_part('z');
        assert_eq!(z, ZSeries::from_terms('z', [(-1, rat(7))]));
        assert_eq!(z.var(), 'z');
        assert!(s(&[(0, 1), (4, 2)]).negative_part('z').is_zero());
        assert_eq!(ZSeries::from_terms('x', [(-3, rat(1))]).negative_part('z'), s(&[(-3, 1)]));
    }

    #[test]
    fn derivative_examples() {
        assert_eq!(s(&[(-2, 2)]).derivative(), s(&[(-3, -4)]));
        assert!(s(&[(0, 9)]).derivative().is_zero());
    }

    #[test]
    fn zero_coefficients_are_pruned() {
        let mut a = s(&[(1, 2)]);
        a.add_term(1, &rat(-2), &rat(1));
        assert!(a.is_zero());
        assert_eq!(a, ZSeries::new('z'));
    }

    #[test]
    fn delta_and_derivative_coefficients() {
        let d = BiSeries::delta(5).d_first();
        // d/dz1 delta = sum_j j z1^{j-1} z2^{-j}
        assert_eq!(d.coeff((2, -3)), rat(3));
        assert_eq!(d.coeff((-4, 3)), rat(-3));
    }

    fn arb_series() -> impl Strategy<Value = ZSeries<Rational>> {
        prop::collection::vec((-6i64..6, -5i64..5), 0..6).prop_map(|v| s(&v))
    }

    proptest! {
        #[test]
        fn residue_of_derivative_vanishes(f in arb_series()) {
            prop_assert!(Vector::is_zero(&f.derivative().residue()));
        }

        #[test]
        fn residue_integration_by_parts(f in arb_series(), g in arb_series()) {
            let lhs = f.derivative().mul(&g).residue();
            let rhs = -f.mul(&g.derivative()).residue();
            prop_assert_eq!(lhs, rhs);
        }

        #[test]
        fn negative_part_splits_series(f in arb_series()) {
            let neg = f.negative_part('z');
            prop_assert_eq!(neg.negative_part('z'), neg.clone());
            prop_assert_eq!(neg.plus(&f.minus(&neg)), f);
        }
    }
}
