//! The conformal algebra spanned by `1` and the quadratic states.

use std::collections::{BTreeMap, HashMap};
use std::fmt;
use std::sync::RwLock;

use serde_json::json;

use super::fock::{Factor, FockElement, Polarity};
use super::quadratic::{quadratic_component, QuadGen};
use super::FermionError;
use crate::foundation::{rat, write_term, Rational, Vector, ZSeries};
use crate::kernel::ConformalAlgebra;

/// `unit·1 + Σ c·ς⁺(−·)ς⁻(−·)·1`.
#[derive(Clone, Debug, Default, PartialEq, Eq, Hash)]
pub struct HatElement {
    unit: Rational,
    quad: BTreeMap<QuadGen, Rational>,
}

impl HatElement {
    pub fn one() -> Self {
        Self { unit: rat(1), quad: BTreeMap::new() }
    }

    pub fn gen(g: QuadGen) -> Self {
        let mut out = Self::default();
        out.add_gen(g, &rat(1));
        out
    }

    pub fn add_gen(&mut self, g: QuadGen, c: &Rational) {
        if c.is_zero() {
            return;
        }
        let e = self.quad.entry(g).or_insert_with(|| rat(0));
        *e += c;
        if e.is_zero() {
            self.quad.remove(&g);
        }
    }

    pub fn unit(&self) -> &Rational {
        &self.unit
    }

    pub fn quad(&self) -> &BTreeMap<QuadGen, Rational> {
        &self.quad
    }

    /// The element modulo the span of `1`.
    pub fn without_unit(&self) -> Self {
        Self { unit: rat(0), quad: self.quad.clone() }
    }

    pub fn to_fock(&self) -> FockElement {
        let mut out = FockElement::vacuum().scaled(&self.unit);
        for (g, c) in &self.quad {
            out.add_scaled(&g.state(), c);
        }
        out
    }

    /// Straightens a Fock element into the span of `1` and the quadratic
    /// states; anything else contradicts closure.
    pub fn from_fock(f: &FockElement) -> Result<Self, FermionError> {
        let mut out = Self::default();
        for (string, c) in f.terms() {
            match string {
                [] => out.unit += c,
                [a, b] if a.polarity != b.polarity => {
                    let (p, q, sign) = if a.polarity == Polarity::Plus { (a, b, 1) } else { (b, a, -1) };
                    let g = QuadGen::new(p.index, creation_index(p)?, q.index, creation_index(q)?);
                    out.add_gen(g, &(c * rat(sign)));
                }
                _ => {
                    return Err(FermionError::Straightening(format!("term {c} · {}", render(string))));
                }
            }
        }
        Ok(out)
    }

    pub fn weight(&self) -> Option<u32> {
        let mut ws = self.quad.keys().map(|g| g.weight());
        let first = if self.unit.is_zero() { ws.next()? } else { 0 };
        ws.all(|w| w == first).then_some(first)
    }
}

fn creation_index(f: &Factor) -> Result<u32, FermionError> {
    if f.mode.is_creation() {
        Ok((-f.mode.0 - 1) as u32)
    } else {
        Err(FermionError::Straightening(format!("annihilator {f} left in a state")))
    }
}

fn render(string: &[Factor]) -> String {
    string.iter().map(|f| f.to_string()).collect()
}

impl fmt::Display for HatElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return write!(f, "0");
        }
        let mut first = true;
        if !self.unit.is_zero() {
            write_term(f, first, &self.unit, &"1")?;
            first = false;
        }
        for (g, c) in &self.quad {
            write_term(f, first, c, g)?;
            first = false;
        }
        Ok(())
    }
}

impl Vector for HatElement {
    fn zero() -> Self {
        Self::default()
    }

    fn is_zero(&self) -> bool {
        self.unit.is_zero() && self.quad.is_empty()
    }

    fn add_scaled(&mut self, other: &Self, s: &Rational) {
        self.unit += &other.unit * s;
        for (g, c) in &other.quad {
            self.add_gen(*g, &(c * s));
        }
    }
}

/// `∂1 = 0`, `∂(h₁(−m−1/2)h₂(−n−1/2)) = (m+1)h₁(−m−3/2)h₂(−n−1/2) + (n+1)h₁(−m−1/2)h₂(−n−3/2)`.
pub fn partial_hat(e: &HatElement) -> HatElement {
    let mut out = HatElement::default();
    for (g, c) in &e.quad {
        out.add_gen(QuadGen::new(g.plus, g.m + 1, g.minus, g.n), &(c * rat(g.m as i64 + 1)));
        out.add_gen(QuadGen::new(g.plus, g.m, g.minus, g.n + 1), &(c * rat(g.n as i64 + 1)));
    }
    out
}

/// `Y⁺(u, z) s = Σ_{c≥0} u_c(s) z^{−c−1}` for a Fock state `s`, returned as
/// Fock elements. Components past `u.m + u.n + 2·maxmode(s) + 1` vanish.
pub fn yplus_state(u: QuadGen, s: &FockElement) -> Result<ZSeries<FockElement>, FermionError> {
    let top = (u.m + u.n) as i64 + 2 * s.max_mode() + 1;
    let mut out = ZSeries::new('z');
    for c in 0..=top + 1 {
        let v = quadratic_component(u, c, s)?;
        if c > top && !v.is_zero() {
            return Err(FermionError::Straightening(format!("component {c} of {u} on {s} beyond locality bound")));
        }
        out.add_term(-c - 1, &v, &rat(1));
    }
    Ok(out)
}

/// `Y⁺(u, z) v` on generators, straightened into the span.
pub fn yplus_hat_gen(u: QuadGen, v: QuadGen) -> Result<ZSeries<HatElement>, FermionError> {
    let series = yplus_state(u, &v.state())?;
    let mut out = ZSeries::new('z');
    for (e, f) in series.iter() {
        out.add_term(e, &HatElement::from_fock(f)?, &rat(1));
    }
    Ok(out)
}

/// `Y⁺(u, z) v`, bilinear; the identity field contributes no negative powers
/// and `u_c(1) = 0` for every quadratic `u`.
pub fn yplus_hat(u: &HatElement, v: &HatElement) -> Result<ZSeries<HatElement>, FermionError> {
    let mut out = ZSeries::new('z');
    for (a, ca) in &u.quad {
        if !v.unit.is_zero() {
            let on_vacuum = yplus_state(*a, &FockElement::vacuum())?;
            if !on_vacuum.is_zero() {
                return Err(FermionError::Straightening(format!("{a} does not annihilate 1")));
            }
        }
        for (b, cb) in &v.quad {
            out.add_series(&yplus_hat_gen(*a, *b)?, &(ca * cb));
        }
    }
    Ok(out)
}

/// The span of `1` and the quadratic states as a conformal algebra, with
/// generator products cached.
pub struct HatAlgebra {
    rank: usize,
    max_mode: u32,
    cache: RwLock<HashMap<(QuadGen, QuadGen), ZSeries<HatElement>>>,
}

impl HatAlgebra {
    pub fn new(rank: usize, max_mode: u32) -> Self {
        Self { rank, max_mode, cache: RwLock::new(HashMap::new()) }
    }

    /// `1` and `ς⁺_a(−1/2)ς⁻_b(−n−1/2)`, which generate over `F[∂]`.
    pub fn v_generators(&self) -> Vec<HatElement> {
        let mut out = vec![HatElement::one()];
        for a in 1..=self.rank {
            for b in 1..=self.rank {
                for n in 0..=self.max_mode {
                    out.push(HatElement::gen(QuadGen::new(a, 0, b, n)));
                }
            }
        }
        out
    }

    fn gen_product(&self, u: QuadGen, v: QuadGen) -> ZSeries<HatElement> {
        if let Some(s) = self.cache.read().expect("cache lock").get(&(u, v)) {
            return s.clone();
        }
        let s = yplus_hat_gen(u, v).unwrap_or_else(|e| panic!("fermionic kernel: {e}"));
        self.cache.write().expect("cache lock").insert((u, v), s.clone());
        s
    }
}

impl ConformalAlgebra for HatAlgebra {
    type Elem = HatElement;

    fn label(&self) -> String {
        format!("fermionic-hat(r={}, modes<={})", self.rank, self.max_mode)
    }

    fn generators(&self) -> Vec<HatElement> {
        let mut out = vec![HatElement::one()];
        for a in 1..=self.rank {
            for b in 1..=self.rank {
                for m in 0..=self.max_mode {
                    for n in 0..=self.max_mode {
                        out.push(HatElement::gen(QuadGen::new(a, m, b, n)));
                    }
                }
            }
        }
        out
    }

    fn partial(&self, e: &HatElement) -> HatElement {
        partial_hat(e)
    }

    fn yplus(&self, a: &HatElement, b: &HatElement) -> ZSeries<HatElement> {
        let mut out = ZSeries::new('z');
        for (u, cu) in &a.quad {
            for (v, cv) in &b.quad {
                out.add_series(&self.gen_product(*u, *v), &(cu * cv));
            }
        }
        out
    }

    fn weight(&self, e: &HatElement) -> Option<u32> {
        e.weight()
    }
}

/// Fermionic index `j` (from 1) to matrix index (from 0).
pub(crate) fn to_matrix_index(j: usize) -> usize {
    j - 1
}

pub(crate) fn gen_json(g: QuadGen) -> serde_json::Value {
    json!({ "plus": g.plus, "m": g.m, "minus": g.minus, "n": g.n })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::kernel::{check_jacobi, check_skew};

    #[test]
    fn partial_examples() {
        assert!(partial_hat(&HatElement::one()).is_zero());
        let d = partial_hat(&HatElement::gen(QuadGen::new(1, 0, 2, 0)));
        let mut want = HatElement::gen(QuadGen::new(1, 1, 2, 0));
        want.add_gen(QuadGen::new(1, 0, 2, 1), &rat(1));
        assert_eq!(d, want);
    }

    #[test]
    fn unit_is_an_ideal_and_inert() {
        let alg = HatAlgebra::new(2, 2);
        for g in alg.generators() {
            assert!(yplus_hat(&HatElement::one(), &g).unwrap().is_zero());
            assert!(yplus_hat(&g, &HatElement::one()).unwrap().is_zero());
        }
    }

    #[test]
    fn full_contraction_exactly_when_indices_pair() {
        for j1 in 1..=2 {
            for j2 in 1..=2 {
                for j3 in 1..=2 {
                    for j4 in 1..=2 {
                        let s = yplus_hat_gen(QuadGen::new(j1, 0, j2, 0), QuadGen::new(j3, 0, j4, 0)).unwrap();
                        let has_unit = s.iter().any(|(_, e)| !e.unit().is_zero());
                        assert_eq!(has_unit, j1 == j4 && j2 == j3, "{j1}{j2}{j3}{j4}");
                    }
                }
            }
        }
    }

    #[test]
    fn axioms_on_small_sample() {
        let alg = HatAlgebra::new(2, 1);
        let g = alg.generators();
        for a in &g {
            for b in &g {
                assert!(check_skew(&alg, a, b).passed());
            }
        }
        let v = alg.v_generators();
        for a in &v {
            for b in &v {
                for c in &v {
                    let r = check_jacobi(&alg, a, b, c);
                    assert!(r.passed(), "{:?}", r.first_failure());
                }
            }
        }
    }
}
