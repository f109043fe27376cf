//! Algebras given by components on a generating space and extended to
//! `F[∂] ⊗ V` by translation covariance.

use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};

use super::{ConformalAlgebra, ConformalElement, KernelError};
use crate::foundation::{binom, format_rational, parse_rational, rat, Rational, Vector, ZSeries};

/// Components `u_n(v)` for generators `u, v` of `V`.
pub trait StructureMap: Send + Sync {
    fn name(&self, g: usize) -> String;

    fn weight(&self, _g: usize) -> Option<u32> {
        None
    }

    /// `[u_0(v), u_1(v), ...]`; trailing entries past the locality bound are omitted.
    fn components(&self, u: usize, v: usize) -> Vec<ConformalElement>;

    /// `Y⁺(u, z) v` on generators.
    fn generator_product(&self, u: usize, v: usize) -> ZSeries<ConformalElement> {
        ZSeries::from_terms('z', self.components(u, v).into_iter().enumerate().map(|(n, c)| (-(n as i64) - 1, c)))
    }
}

/// `Y⁺(∂^m u, z) ∂^n v = Σ_j (-1)^j C(n, j) (d/dz)^{m+j} ∂^{n-j} Y⁺(u, z) v`,
/// extended bilinearly.
pub fn extend_product<M: StructureMap + ?Sized>(
    a: &ConformalElement,
    b: &ConformalElement,
    map: &M,
) -> ZSeries<ConformalElement> {
    let mut out = ZSeries::new('z');
    for (m, u, ca) in a.terms() {
        for (n, v, cb) in b.terms() {
            let base = map.generator_product(u, v);
            if base.is_zero() {
                continue;
            }
            let c = ca * cb;
            for j in 0..=n {
                let sign = if j % 2 == 0 { rat(1) } else { rat(-1) };
                let coef = &c * sign * binom(n as i64, j);
                let shifted = base.map(|x| x.partial_pow(n - j)).nth_derivative(m + j);
                out.add_series(&shifted, &coef);
            }
        }
    }
    out
}

/// Explicit finite table of generator components.
#[derive(Clone, Debug, PartialEq)]
pub struct TableMap {
    names: Vec<String>,
    weights: Vec<Option<u32>>,
    table: BTreeMap<(usize, usize), Vec<ConformalElement>>,
}

impl TableMap {
    pub fn new(names: Vec<String>, weights: Vec<Option<u32>>) -> Self {
        assert_eq!(names.len(), weights.len());
        Self { names, weights, table: BTreeMap::new() }
    }

    pub fn len(&self) -> usize {
        self.names.len()
    }

    pub fn is_empty(&self) -> bool {
        self.names.is_empty()
    }

    pub fn index_of(&self, name: &str) -> Option<usize> {
        self.names.iter().position(|n| n == name)
    }

    pub fn set_component(&mut self, u: usize, v: usize, n: usize, value: ConformalElement) {
        let comps = self.table.entry((u, v)).or_default();
        if comps.len() <= n {
            comps.resize(n + 1, ConformalElement::zero());
        }
        comps[n] = value;
        while comps.last().is_some_and(|c| c.is_zero()) {
            comps.pop();
        }
        if comps.is_empty() {
            self.table.remove(&(u, v));
        }
    }
}

impl StructureMap for TableMap {
    fn name(&self, g: usize) -> String {
        self.names.get(g).cloned().unwrap_or_else(|| format!("v{g}"))
    }

    fn weight(&self, g: usize) -> Option<u32> {
        self.weights.get(g).copied().flatten()
    }

    fn components(&self, u: usize, v: usize) -> Vec<ConformalElement> {
        self.table.get(&(u, v)).cloned().unwrap_or_default()
    }
}

/// `F[∂] ⊗ V` with `Y⁺` determined by a [`StructureMap`] on `V`.
pub struct GeneratedAlgebra<M> {
    label: String,
    map: M,
    sample: Vec<usize>,
}

impl<M: StructureMap> GeneratedAlgebra<M> {
    pub fn new(label: impl Into<String>, map: M, sample: Vec<usize>) -> Self {
        Self { label: label.into(), map, sample }
    }

    pub fn map(&self) -> &M {
        &self.map
    }

    pub fn sample(&self) -> &[usize] {
        &self.sample
    }

    pub fn element_weight(&self, e: &ConformalElement) -> Option<u32> {
        let mut w = None;
        for (p, g, _) in e.terms() {
            let wg = self.map.weight(g)? + p;
            match w {
                None => w = Some(wg),
                Some(x) if x != wg => return None,
                _ => {}
            }
        }
        w
    }
}

impl<M: StructureMap> ConformalAlgebra for GeneratedAlgebra<M> {
    type Elem = ConformalElement;

    fn label(&self) -> String {
        self.label.clone()
    }

    fn generators(&self) -> Vec<ConformalElement> {
        self.sample.iter().map(|&g| ConformalElement::generator(g)).collect()
    }

    fn partial(&self, e: &ConformalElement) -> ConformalElement {
        e.partial()
    }

    fn partial_pow(&self, e: &ConformalElement, i: u32) -> ConformalElement {
        e.partial_pow(i)
    }

    fn yplus(&self, a: &ConformalElement, b: &ConformalElement) -> ZSeries<ConformalElement> {
        extend_product(a, b, &self.map)
    }

    fn weight(&self, e: &ConformalElement) -> Option<u32> {
        self.element_weight(e)
    }

    fn describe(&self, e: &ConformalElement) -> String {
        e.render(&|g| self.map.name(g))
    }
}

pub type TableAlgebra = GeneratedAlgebra<TableMap>;

/// Structure constants of a finite-dimensional Lie algebra:
/// `[b_i, b_j] = Σ_k c_{ij}^k b_k`.
#[derive(Clone, Debug, Default)]
pub struct LieTable {
    pub names: Vec<String>,
    pub brackets: BTreeMap<(usize, usize), BTreeMap<usize, Rational>>,
}

impl LieTable {
    pub fn new(names: &[&str]) -> Self {
        Self { names: names.iter().map(|s| s.to_string()).collect(), brackets: BTreeMap::new() }
    }

    /// Sets `[b_i, b_j]` and, antisymmetrically, `[b_j, b_i]`.
    pub fn set(&mut self, i: usize, j: usize, value: &[(usize, Rational)]) {
        let v: BTreeMap<usize, Rational> = value.iter().filter(|(_, c)| !Vector::is_zero(c)).cloned().collect();
        let neg: BTreeMap<usize, Rational> = v.iter().map(|(k, c)| (*k, -c)).collect();
        self.brackets.insert((i, j), v);
        self.brackets.insert((j, i), neg);
    }

    pub fn bracket(&self, x: &BTreeMap<usize, Rational>, y: &BTreeMap<usize, Rational>) -> BTreeMap<usize, Rational> {
        let mut out: BTreeMap<usize, Rational> = BTreeMap::new();
        for (i, a) in x {
            for (j, b) in y {
                if let Some(br) = self.brackets.get(&(*i, *j)) {
                    for (k, c) in br {
                        *out.entry(*k).or_insert_with(|| rat(0)) += a * b * c;
                    }
                }
            }
        }
        out.retain(|_, c| !Vector::is_zero(c));
        out
    }

    fn unit(i: usize) -> BTreeMap<usize, Rational> {
        [(i, rat(1))].into_iter().collect()
    }

    /// Checks antisymmetry and the Jacobi identity on basis triples.
    pub fn validate(&self) -> Result<(), KernelError> {
        let n = self.names.len();
        for i in 0..n {
            for j in 0..n {
                let a = self.bracket(&Self::unit(i), &Self::unit(j));
                let b = self.bracket(&Self::unit(j), &Self::unit(i));
                let sum: BTreeMap<usize, Rational> = {
                    let mut s = a.clone();
                    for (k, c) in b {
                        *s.entry(k).or_insert_with(|| rat(0)) += c;
                    }
                    s.retain(|_, c| !Vector::is_zero(c));
                    s
                };
                if !sum.is_empty() {
                    return Err(KernelError::NotLie {
                        triple: vec![self.names[i].clone(), self.names[j].clone()],
                        reason: "bracket is not antisymmetric".into(),
                    });
                }
            }
        }
        for i in 0..n {
            for j in 0..n {
                for k in 0..n {
                    let (x, y, z) = (Self::unit(i), Self::unit(j), Self::unit(k));
                    let mut total: BTreeMap<usize, Rational> = BTreeMap::new();
                    for t in [
                        self.bracket(&x, &self.bracket(&y, &z)),
                        self.bracket(&y, &self.bracket(&z, &x)),
                        self.bracket(&z, &self.bracket(&x, &y)),
                    ] {
                        for (idx, c) in t {
                            *total.entry(idx).or_insert_with(|| rat(0)) += c;
                        }
                    }
                    if total.values().any(|c| !Vector::is_zero(c)) {
                        return Err(KernelError::NotLie {
                            triple: vec![self.names[i].clone(), self.names[j].clone(), self.names[k].clone()],
                            reason: "Jacobi identity fails".into(),
                        });
                    }
                }
            }
        }
        Ok(())
    }

    fn into_table(self, weights: Option<u32>) -> TableMap {
        let n = self.names.len();
        let mut map = TableMap::new(self.names, vec![weights; n]);
        for ((i, j), v) in self.brackets {
            let mut e = ConformalElement::zero();
            for (k, c) in v {
                e.add_term(0, k, &c);
            }
            map.set_component(i, j, 0, e);
        }
        map
    }
}

/// The current algebra `R(G) = F[∂] ⊗ G` with `u_0(v) = [u, v]`; generators have weight one.
pub fn from_lie_algebra(label: &str, table: LieTable) -> Result<TableAlgebra, KernelError> {
    table.validate()?;
    Ok(from_lie_algebra_unchecked(label, table))
}

/// Skips validation; used to build deliberately broken algebras.
pub fn from_lie_algebra_unchecked(label: &str, table: LieTable) -> TableAlgebra {
    let n = table.names.len();
    GeneratedAlgebra::new(label, table.into_table(Some(1)), (0..n).collect())
}

/// `sl_2` with basis `e, f, h`.
pub fn sl2_table() -> LieTable {
    let mut t = LieTable::new(&["e", "f", "h"]);
    t.set(0, 1, &[(2, rat(1))]);
    t.set(2, 0, &[(0, rat(2))]);
    t.set(2, 1, &[(1, rat(-2))]);
    t
}

pub fn sl2_current() -> TableAlgebra {
    from_lie_algebra("R(sl2)", sl2_table()).expect("sl2 is a Lie algebra")
}

/// `sl_2` with `[h, f] = -3f`: antisymmetric but violates Jacobi.
pub fn sl2_mutant() -> TableAlgebra {
    let mut t = sl2_table();
    t.set(2, 1, &[(1, rat(-3))]);
    from_lie_algebra_unchecked("R(sl2)-mutant", t)
}

pub fn abelian_current(dim: usize) -> TableAlgebra {
    let names: Vec<String> = (0..dim).map(|i| format!("a{i}")).collect();
    let refs: Vec<&str> = names.iter().map(|s| s.as_str()).collect();
    from_lie_algebra("R(abelian)", LieTable::new(&refs)).expect("abelian bracket is Lie")
}

fn witt_with(label: &str, e1: i64) -> TableAlgebra {
    let mut map = TableMap::new(vec!["e".into()], vec![Some(2)]);
    map.set_component(0, 0, 0, ConformalElement::term(1, 0, rat(1)));
    map.set_component(0, 0, 1, ConformalElement::term(0, 0, rat(e1)));
    GeneratedAlgebra::new(label, map, vec![0])
}

/// `F[∂] e` with `Y⁺(e, z) e = ∂e z^{-1} + 2e z^{-2}`, weight of `e` two.
pub fn make_witt() -> TableAlgebra {
    witt_with("Witt", 2)
}

/// Witt with `e_1(e)` replaced by `3e`.
pub fn witt_mutant() -> TableAlgebra {
    witt_with("Witt-mutant", 3)
}

/// Declarative algebra description (TOML).
///
/// ```toml
/// label = "witt"
/// [[basis]]
/// name = "e"
/// weight = 2
/// [[component]]
/// a = "e"
/// b = "e"
/// n = 0
/// terms = [{ partial_power = 1, basis = "e", coefficient = "1" }]
/// ```
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct AlgebraDescription {
    pub label: String,
    pub basis: Vec<BasisEntry>,
    #[serde(default)]
    pub component: Vec<ComponentEntry>,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct BasisEntry {
    pub name: String,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub weight: Option<u32>,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ComponentEntry {
    pub a: String,
    pub b: String,
    pub n: usize,
    pub terms: Vec<TermEntry>,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct TermEntry {
    pub partial_power: u32,
    pub basis: String,
    pub coefficient: String,
}

impl AlgebraDescription {
    pub fn parse(text: &str) -> Result<Self, KernelError> {
        toml::from_str(text).map_err(|e| KernelError::Malformed(e.to_string()))
    }

    pub fn to_text(&self) -> String {
        toml::to_string(self).expect("description serializes")
    }

    pub fn build(&self) -> Result<TableAlgebra, KernelError> {
        let names: Vec<String> = self.basis.iter().map(|b| b.name.clone()).collect();
        for (i, n) in names.iter().enumerate() {
            if names[..i].contains(n) {
                return Err(KernelError::Malformed(format!("duplicate basis name {n}")));
            }
        }
        if self.basis.iter().any(|b| b.weight == Some(0)) {
            return Err(KernelError::Malformed("weights must be at least 1".into()));
        }
        let mut map = TableMap::new(names, self.basis.iter().map(|b| b.weight).collect());
        let idx = |s: &str| map.index_of(s).ok_or_else(|| KernelError::UnknownBasis(s.to_string()));
        let mut entries = Vec::new();
        for c in &self.component {
            let (a, b) = (idx(&c.a)?, idx(&c.b)?);
            let mut e = ConformalElement::zero();
            for t in &c.terms {
                let coef = parse_rational(&t.coefficient).map_err(|e| KernelError::Malformed(e.to_string()))?;
                e.add_term(t.partial_power, idx(&t.basis)?, &coef);
            }
            entries.push((a, b, c.n, e));
        }
        for (a, b, n, e) in entries {
            map.set_component(a, b, n, e);
        }
        let n = map.len();
        Ok(GeneratedAlgebra::new(self.label.clone(), map, (0..n).collect()))
    }

    pub fn describe(alg: &TableAlgebra) -> Self {
        let map = alg.map();
        let basis = (0..map.len()).map(|g| BasisEntry { name: map.name(g), weight: map.weight(g) }).collect();
        let mut component = Vec::new();
        for (&(a, b), comps) in &map.table {
            for (n, e) in comps.iter().enumerate() {
                if e.is_zero() {
                    continue;
                }
                component.push(ComponentEntry {
                    a: map.name(a),
                    b: map.name(b),
                    n,
                    terms: e
                        .terms()
                        .map(|(p, g, c)| TermEntry {
                            partial_power: p,
                            basis: map.name(g),
                            coefficient: format_rational(c),
                        })
                        .collect(),
                });
            }
        }
        Self { label: alg.label(), basis, component }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn gen(g: usize) -> ConformalElement {
        ConformalElement::generator(g)
    }

    #[test]
    fn sl2_generator_products() {
        let r = sl2_current();
        let s = r.yplus(&gen(0), &gen(1));
        assert_eq!(s, ZSeries::monomial('z', -1, gen(2)));
        let s = r.yplus(&gen(1), &gen(0));
        assert_eq!(s, ZSeries::monomial('z', -1, gen(2).scaled(&rat(-1))));
    }

    #[test]
    fn abelian_products_vanish() {
        let r = abelian_current(3);
        for a in 0..3 {
            for b in 0..3 {
                assert!(r.yplus(&gen(a), &gen(b)).is_zero());
            }
        }
    }

    #[test]
    fn witt_products() {
        let w = make_witt();
        let e = gen(0);
        let de = e.partial();
        let ee = w.yplus(&e, &e);
        assert_eq!(ee, ZSeries::from_terms('z', [(-1, de.clone()), (-2, e.scaled(&rat(2)))]));
        // Y⁺(∂e, z) e = d/dz (∂e z^-1 + 2e z^-2)
        assert_eq!(w.yplus(&de, &e), ZSeries::from_terms('z', [(-2, de.scaled(&rat(-1))), (-3, e.scaled(&rat(-4)))]));
        // Y⁺(e, z) ∂e = ∂(Y⁺(e,z)e) - d/dz Y⁺(e,z)e; the z^-3 term is -d/dz(2e z^-2) = 4e z^-3
        assert_eq!(
            w.yplus(&e, &de),
            ZSeries::from_terms('z', [(-1, e.partial_pow(2)), (-2, de.scaled(&rat(3))), (-3, e.scaled(&rat(4)))])
        );
    }

    #[test]
    fn undifferentiated_inputs_use_raw_components() {
        let w = make_witt();
        let raw = w.map().generator_product(0, 0);
        assert_eq!(w.yplus(&gen(0), &gen(0)), raw);
    }

    #[test]
    fn non_lie_input_rejected_with_triple() {
        let mut t = sl2_table();
        t.set(2, 1, &[(1, rat(-3))]);
        match from_lie_algebra("bad", t) {
            Err(KernelError::NotLie { triple, .. }) => assert_eq!(triple.len(), 3),
            other => panic!("expected rejection, got {:?}", other.map(|a| a.label())),
        }
        let mut t = LieTable::new(&["x", "y"]);
        t.brackets.insert((0, 1), [(0, rat(1))].into_iter().collect());
        assert!(matches!(from_lie_algebra("bad", t), Err(KernelError::NotLie { .. })));
    }

    #[test]
    fn description_round_trip() {
        let w = make_witt();
        let d = AlgebraDescription::describe(&w);
        let text = d.to_text();
        let back = AlgebraDescription::parse(&text).unwrap().build().unwrap();
        assert_eq!(back.map(), w.map());
        assert!(matches!(
            AlgebraDescription::parse(
                "label = \"x\"\n[[basis]]\nname = \"a\"\n[[component]]\na = \"a\"\nb = \"q\"\nn = 0\nterms = []\n"
            )
            .unwrap()
            .build(),
            Err(KernelError::UnknownBasis(_))
        ));
    }
}
