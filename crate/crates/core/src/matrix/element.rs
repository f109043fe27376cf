//! Elements of `M_k ⊗ F[t1, t2]`, the `∂`-action and the structure map.

use std::collections::{BTreeMap, HashMap};
use std::fmt;
use std::sync::{Arc, OnceLock, RwLock};

use serde::{Deserialize, Deserializer, Serialize, Serializer};

use super::MatrixError;
use crate::foundation::{
    axpy, binom, format_rational, parse_rational, rat, write_term, Rational, SparseVec, Vector, ZSeries,
};

/// `(m1, m2, i, j)`: the unit `E_ij` at bidegree `(m1, m2)`, indices from 0.
pub type MatKey = (u32, u32, usize, usize);

/// Finite combination of `E_ij(m1, m2) = E_ij ⊗ t1^m1 t2^m2`.
///
/// `k = 0` marks an element built without a size (the zero of [`Vector`]);
/// sizes combine by maximum, and equality ignores the size.
#[derive(Clone, Debug, Default)]
pub struct MatElement {
    k: usize,
    terms: SparseVec<MatKey>,
}

impl PartialEq for MatElement {
    fn eq(&self, other: &Self) -> bool {
        self.terms == other.terms
    }
}

impl Eq for MatElement {}

impl MatElement {
    pub fn new(k: usize) -> Self {
        Self { k, terms: BTreeMap::new() }
    }

    pub fn unit(k: usize, i: usize, j: usize, m1: u32, m2: u32) -> Self {
        Self::term(k, (m1, m2, i, j), rat(1))
    }

    pub fn term(k: usize, key: MatKey, c: Rational) -> Self {
        let mut out = Self::new(k);
        out.add(key, &c);
        out
    }

    /// `a(m1, m2)` for a dense `k × k` matrix `a`.
    pub fn from_matrix(a: &[Vec<Rational>], m1: u32, m2: u32) -> Self {
        let mut out = Self::new(a.len());
        for (i, row) in a.iter().enumerate() {
            for (j, c) in row.iter().enumerate() {
                out.add((m1, m2, i, j), c);
            }
        }
        out
    }

    pub fn from_terms(k: usize, terms: SparseVec<MatKey>) -> Self {
        let mut out = Self::new(k);
        for (key, c) in terms {
            out.add(key, &c);
        }
        out
    }

    pub fn k(&self) -> usize {
        self.k
    }

    pub fn with_k(mut self, k: usize) -> Self {
        self.k = k;
        self
    }

    pub fn add(&mut self, key: MatKey, c: &Rational) {
        if Vector::is_zero(c) {
            return;
        }
        let e = self.terms.entry(key).or_insert_with(|| rat(0));
        *e += c;
        if Vector::is_zero(&*e) {
            self.terms.remove(&key);
        }
    }

    pub fn terms(&self) -> &SparseVec<MatKey> {
        &self.terms
    }

    pub fn coefficient(&self, key: MatKey) -> Rational {
        self.terms.get(&key).cloned().unwrap_or_else(|| rat(0))
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    /// Bidegrees with a nonzero matrix.
    pub fn bidegrees(&self) -> Vec<(u32, u32)> {
        let mut out: Vec<(u32, u32)> = self.terms.keys().map(|&(a, b, _, _)| (a, b)).collect();
        out.dedup();
        out
    }

    /// Dense matrix at one bidegree.
    pub fn matrix_at(&self, m1: u32, m2: u32) -> Vec<Vec<Rational>> {
        let mut out = vec![vec![rat(0); self.k]; self.k];
        for (&(a, b, i, j), c) in &self.terms {
            if (a, b) == (m1, m2) {
                out[i][j] = c.clone();
            }
        }
        out
    }

    /// Weights `m1 + m2 + 1` occurring in the element.
    pub fn weights(&self) -> Vec<u32> {
        let mut w: Vec<u32> = self.terms.keys().map(|&(a, b, _, _)| a + b + 1).collect();
        w.sort_unstable();
        w.dedup();
        w
    }

    /// The common weight, if the element is nonzero and homogeneous.
    pub fn weight(&self) -> Option<u32> {
        match self.weights().as_slice() {
            [w] => Some(*w),
            _ => None,
        }
    }

    pub fn max_weight(&self) -> Option<u32> {
        self.weights().last().copied()
    }

    pub fn homogeneous_parts(&self) -> BTreeMap<u32, MatElement> {
        let mut out: BTreeMap<u32, MatElement> = BTreeMap::new();
        for (&key, c) in &self.terms {
            out.entry(key.0 + key.1 + 1).or_insert_with(|| MatElement::new(self.k)).add(key, c);
        }
        out
    }

    /// `∂ u(m, n) = (m+1) u(m+1, n) + (n+1) u(m, n+1)`.
    pub fn partial(&self) -> Self {
        let mut out = Self::new(self.k);
        for (&(m, n, i, j), c) in &self.terms {
            out.add((m + 1, n, i, j), &(c * rat(m as i64 + 1)));
            out.add((m, n + 1, i, j), &(c * rat(n as i64 + 1)));
        }
        out
    }

    pub fn partial_pow(&self, p: u32) -> Self {
        (0..p).fold(self.clone(), |x, _| x.partial())
    }

    /// Applies a signed index map `E_ij ↦ s E_{i'j'}` to every matrix, and
    /// moves bidegree `(m1, m2)` to `f(m1, m2)`.
    pub fn map_units(
        &self,
        units: impl Fn(usize, usize) -> (usize, usize, Rational),
        degrees: impl Fn(u32, u32) -> (u32, u32),
    ) -> Self {
        let mut out = Self::new(self.k);
        for (&(m1, m2, i, j), c) in &self.terms {
            let (a, b, s) = units(i, j);
            let (d1, d2) = degrees(m1, m2);
            out.add((d1, d2, a, b), &(c * s));
        }
        out
    }

    pub fn render(&self) -> String {
        self.to_string()
    }
}

impl fmt::Display for MatElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return write!(f, "0");
        }
        for (n, (&(m1, m2, i, j), c)) in self.terms.iter().enumerate() {
            write_term(f, n == 0, c, &format!("E{}{}({m1},{m2})", i + 1, j + 1))?;
        }
        Ok(())
    }
}

impl Vector for MatElement {
    fn zero() -> Self {
        Self::default()
    }

    fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    fn add_scaled(&mut self, other: &Self, s: &Rational) {
        self.k = self.k.max(other.k);
        axpy(&mut self.terms, s, &other.terms);
    }
}

#[derive(Serialize, Deserialize)]
struct TermRepr {
    m1: u32,
    m2: u32,
    matrix: Vec<String>,
}

#[derive(Serialize, Deserialize)]
struct ElementRepr {
    k: usize,
    terms: Vec<TermRepr>,
}

impl Serialize for MatElement {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        let terms = self
            .bidegrees()
            .into_iter()
            .map(|(m1, m2)| TermRepr {
                m1,
                m2,
                matrix: self.matrix_at(m1, m2).iter().flatten().map(format_rational).collect(),
            })
            .collect();
        ElementRepr { k: self.k, terms }.serialize(s)
    }
}

impl<'de> Deserialize<'de> for MatElement {
    fn deserialize<D: Deserializer<'de>>(d: D) -> Result<Self, D::Error> {
        use serde::de::Error;
        let repr = ElementRepr::deserialize(d)?;
        let mut out = MatElement::new(repr.k);
        for t in repr.terms {
            if t.matrix.len() != repr.k * repr.k {
                return Err(D::Error::custom(format!("matrix needs {} entries", repr.k * repr.k)));
            }
            for (idx, s) in t.matrix.iter().enumerate() {
                let c = parse_rational(s).map_err(D::Error::custom)?;
                out.add((t.m1, t.m2, idx / repr.k, idx % repr.k), &c);
            }
        }
        Ok(out)
    }
}

/// An anti-automorphism of `M_k` that sends matrix units to signed units.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Involution {
    Transpose,
    /// `u† = J uᵀ J⁻¹` with `J = [[0, -I], [I, 0]]`, for even `k`.
    Symplectic,
}

impl Involution {
    pub fn apply_unit(self, k: usize, i: usize, j: usize) -> (usize, usize, Rational) {
        match self {
            Involution::Transpose => (j, i, rat(1)),
            Involution::Symplectic => {
                let h = k / 2;
                // J E_ji J⁻¹ = (J e_j)(e_iᵀ J⁻¹)
                let (r, sr) = if j < h { (j + h, 1) } else { (j - h, -1) };
                let (c, sc) = if i < h { (i + h, 1) } else { (i - h, -1) };
                (r, c, rat(sr * sc))
            }
        }
    }

    pub fn apply_matrix(self, a: &[Vec<Rational>]) -> Vec<Vec<Rational>> {
        let k = a.len();
        let mut out = vec![vec![rat(0); k]; k];
        for (i, row) in a.iter().enumerate() {
            for (j, c) in row.iter().enumerate() {
                let (r, s, sign) = self.apply_unit(k, i, j);
                out[r][s] += c * sign;
            }
        }
        out
    }
}

/// Coefficient lists of the structure map on units, keyed by the four
/// bidegree entries: the first sum gives `(uv)(p, n2)` terms
/// `(exponent, p, coefficient)` and the second `(vu)(n1, q)` terms.
struct UnitProduct {
    first: Vec<(i64, u32, Rational)>,
    second: Vec<(i64, u32, Rational)>,
}

type ProductCache = RwLock<HashMap<(u32, u32, u32, u32, bool), Arc<UnitProduct>>>;

fn unit_product(m1: u32, m2: u32, n1: u32, n2: u32, mutant: bool) -> Arc<UnitProduct> {
    static CACHE: OnceLock<ProductCache> = OnceLock::new();
    let cache = CACHE.get_or_init(Default::default);
    let key = (m1, m2, n1, n2, mutant);
    if let Some(p) = cache.read().unwrap().get(&key) {
        return p.clone();
    }
    let (mi, ni) = ((m1 + m2) as i64, (n1, n2));
    let lead1 = binom(-(ni.0 as i64) - 1, m2);
    let first = (m1..=m1 + m2 + n1)
        .map(|p| (p as i64 - mi - n1 as i64 - 1, p, &lead1 * binom(p as i64, m1)))
        .filter(|t| !Vector::is_zero(&t.2))
        .collect();
    let sign = if mutant { rat(1) } else { rat(-1) };
    let lead2 = sign * binom(-(ni.1 as i64) - 1, m1);
    let second = (m2..=m1 + m2 + n2)
        .map(|q| (q as i64 - mi - n2 as i64 - 1, q, &lead2 * binom(q as i64, m2)))
        .filter(|t| !Vector::is_zero(&t.2))
        .collect();
    let p = Arc::new(UnitProduct { first, second });
    cache.write().unwrap().insert(key, p.clone());
    p
}

/// The structure map on `M_k ⊗ F[t1, t2]`, extended bilinearly:
///
/// `Y⁺(u(m1,m2), z) v(n1,n2) = C(-n1-1, m2) Σ_p C(p, m1) (uv)(p, n2) z^{p-m1-m2-n1-1}
///   - C(-n2-1, m1) Σ_q C(q, m2) (vu)(n1, q) z^{q-m1-m2-n2-1}`.
///
/// `mutant` flips the sign of the second sum (a deliberately broken map).
pub fn yplus_matrix_with(a: &MatElement, b: &MatElement, mutant: bool) -> Result<ZSeries<MatElement>, MatrixError> {
    if a.k != 0 && b.k != 0 && a.k != b.k {
        return Err(MatrixError::SizeMismatch { left: a.k, right: b.k });
    }
    let k = a.k.max(b.k);
    let mut coeffs: BTreeMap<i64, MatElement> = BTreeMap::new();
    for (&(m1, m2, i, j), ca) in &a.terms {
        for (&(n1, n2, r, s), cb) in &b.terms {
            // E_ij E_rs = δ_jr E_is, E_rs E_ij = δ_si E_rj
            if j != r && s != i {
                continue;
            }
            let c = ca * cb;
            let prod = unit_product(m1, m2, n1, n2, mutant);
            if j == r {
                for (e, p, x) in &prod.first {
                    coeffs.entry(*e).or_insert_with(|| MatElement::new(k)).add((*p, n2, i, s), &(&c * x));
                }
            }
            if s == i {
                for (e, q, x) in &prod.second {
                    coeffs.entry(*e).or_insert_with(|| MatElement::new(k)).add((n1, *q, r, j), &(&c * x));
                }
            }
        }
    }
    Ok(ZSeries::from_terms('z', coeffs.into_iter().filter(|(_, x)| !x.is_empty())))
}

pub fn yplus_matrix(a: &MatElement, b: &MatElement) -> Result<ZSeries<MatElement>, MatrixError> {
    yplus_matrix_with(a, b, false)
}

/// For homogeneous `a` of weight `ℓ`, `a(j) b = a_{j+ℓ-1} b`; zero for `j < 1 - ℓ`.
pub fn component_by_weight(a: &MatElement, j: i64, b: &MatElement) -> Result<MatElement, MatrixError> {
    let l = a.weight().ok_or(MatrixError::NotHomogeneous)? as i64;
    let n = j + l - 1;
    if n < 0 {
        return Ok(MatElement::new(a.k));
    }
    Ok(yplus_matrix(a, b)?.coeff(-n - 1))
}

/// Parses `[coef*]NAME:m1,m2` terms joined by `+`/`-`, where NAME is
/// `Eij` (matrix unit, indices from 1), or `sym-Eij`, `asym-Eij`,
/// `dag-Eij`, `adag-Eij` for `u ± uᵀ` and `u ± u†`.
pub fn parse_element(k: usize, text: &str) -> Result<MatElement, MatrixError> {
    let err = |m: &str| MatrixError::Parse(format!("{text}: {m}"));
    let mut out = MatElement::new(k);
    let cleaned = text.replace(' ', "").replace('−', "-");
    if cleaned.is_empty() {
        return Err(err("empty"));
    }
    let mut pieces = Vec::new();
    let mut cur = String::new();
    for (idx, ch) in cleaned.char_indices() {
        let after_name = cur.ends_with("sym") || cur.ends_with("dag");
        if (ch == '+' || ch == '-') && idx > 0 && !after_name && !cur.ends_with('*') && !cur.ends_with('/') {
            pieces.push(std::mem::take(&mut cur));
        }
        cur.push(ch);
    }
    pieces.push(cur);
    for piece in pieces {
        let (coef, body) = match piece.rsplit_once('*') {
            Some((c, b)) => {
                (parse_rational(c.trim_start_matches('+')).map_err(|e| err(&e.to_string()))?, b.to_string())
            }
            None => {
                let (sign, b) = match piece.strip_prefix('-') {
                    Some(b) => (rat(-1), b),
                    None => (rat(1), piece.trim_start_matches('+')),
                };
                (sign, b.to_string())
            }
        };
        let (name, deg) = body.split_once(':').ok_or_else(|| err("expected NAME:m1,m2"))?;
        let (d1, d2) = deg.split_once(',').ok_or_else(|| err("expected m1,m2"))?;
        let m1: u32 = d1.parse().map_err(|_| err("bad m1"))?;
        let m2: u32 = d2.parse().map_err(|_| err("bad m2"))?;
        let (prefix, unit) = match name.split_once('-') {
            Some((p, u)) => (p, u),
            None => ("", name),
        };
        let digits = unit.strip_prefix('E').ok_or_else(|| err("unit must be Eij"))?;
        let idx: Vec<usize> = digits
            .chars()
            .map(|c| c.to_digit(10).map(|d| d as usize))
            .collect::<Option<_>>()
            .ok_or_else(|| err("bad indices"))?;
        let [i, j] = idx[..] else { return Err(err("unit must be Eij with single-digit indices")) };
        if i == 0 || j == 0 || i > k || j > k {
            return Err(err("index out of range"));
        }
        let (i, j) = (i - 1, j - 1);
        let base = MatElement::unit(k, i, j, m1, m2);
        let twisted = |inv: Involution| -> Result<MatElement, MatrixError> {
            if inv == Involution::Symplectic && k % 2 == 1 {
                return Err(MatrixError::OddDagger(k));
            }
            let (a, b, s) = inv.apply_unit(k, i, j);
            Ok(MatElement::term(k, (m1, m2, a, b), s))
        };
        let elem = match prefix {
            "" => base,
            "sym" => base.plus(&twisted(Involution::Transpose)?),
            "asym" => base.minus(&twisted(Involution::Transpose)?),
            "dag" => base.plus(&twisted(Involution::Symplectic)?),
            "adag" => base.minus(&twisted(Involution::Symplectic)?),
            other => return Err(err(&format!("unknown prefix {other}"))),
        };
        out.add_scaled(&elem, &coef);
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn e(i: usize, j: usize, m1: u32, m2: u32) -> MatElement {
        MatElement::unit(2, i, j, m1, m2)
    }

    #[test]
    fn partial_examples() {
        assert_eq!(e(0, 0, 0, 0).partial(), e(0, 0, 1, 0).plus(&e(0, 0, 0, 1)));
        // ∂² u(0,0) = 2u(2,0) + 2u(1,1) + 2u(0,2)
        let expect =
            e(0, 0, 2, 0).scaled(&rat(2)).plus(&e(0, 0, 1, 1).scaled(&rat(2))).plus(&e(0, 0, 0, 2).scaled(&rat(2)));
        assert_eq!(e(0, 0, 0, 0).partial_pow(2), expect);
        assert!(MatElement::new(2).partial().is_empty());
    }

    #[test]
    fn structure_map_examples() {
        // u = E12, v = E21: uv = E11, vu = E22
        let (u, v) = ((0, 1), (1, 0));
        let y = yplus_matrix(&e(u.0, u.1, 0, 0), &e(v.0, v.1, 0, 0)).unwrap();
        assert_eq!(y, ZSeries::monomial('z', -1, e(0, 0, 0, 0).minus(&e(1, 1, 0, 0))));
        let y = yplus_matrix(&e(u.0, u.1, 0, 0), &e(v.0, v.1, 1, 0)).unwrap();
        let expect = ZSeries::from_terms('z', [(-1, e(0, 0, 1, 0).minus(&e(1, 1, 1, 0))), (-2, e(0, 0, 0, 0))]);
        assert_eq!(y, expect);
        let y = yplus_matrix(&e(u.0, u.1, 0, 1), &e(v.0, v.1, 0, 1)).unwrap();
        assert_eq!(y.coeff(-2), e(0, 0, 0, 1).plus(&e(1, 1, 0, 1)).scaled(&rat(-1)));
        assert!(yplus_matrix(&MatElement::new(2), &e(0, 0, 0, 0)).unwrap().is_zero());
        assert!(yplus_matrix(&e(0, 0, 0, 0), &MatElement::unit(3, 0, 0, 0, 0)).is_err());
    }

    #[test]
    fn circle_product_example() {
        // E11(0,1) ∘ E12(0,1) = -E12(0,1)
        let y = yplus_matrix(&e(0, 0, 0, 1), &e(0, 1, 0, 1)).unwrap();
        assert_eq!(y.coeff(-2), e(0, 1, 0, 1).scaled(&rat(-1)));
    }

    #[test]
    fn weights_and_components() {
        assert_eq!(e(0, 0, 0, 1).weight(), Some(2));
        let a = e(0, 1, 0, 1);
        let b = e(1, 0, 1, 0);
        for j in -1..=2 {
            let out = component_by_weight(&a, j, &b).unwrap();
            if !out.is_empty() {
                assert_eq!(out.weight(), Some((2 - j) as u32));
            }
        }
        assert!(component_by_weight(&a, -2, &b).unwrap().is_empty());
        assert!(component_by_weight(&a.plus(&e(0, 0, 0, 0)), 0, &b).is_err());
    }

    #[test]
    fn symplectic_is_adjugate_for_two() {
        let a: Vec<Vec<Rational>> = vec![vec![rat(1), rat(2)], vec![rat(3), rat(4)]];
        let adj = vec![vec![rat(4), rat(-2)], vec![rat(-3), rat(1)]];
        assert_eq!(Involution::Symplectic.apply_matrix(&a), adj);
    }

    fn mat_mul(a: &[Vec<Rational>], b: &[Vec<Rational>]) -> Vec<Vec<Rational>> {
        let n = a.len();
        (0..n).map(|i| (0..n).map(|j| (0..n).map(|t| &a[i][t] * &b[t][j]).sum()).collect()).collect()
    }

    #[test]
    fn involutions_are_anti_automorphisms() {
        let mut s = crate::sampler::RationalSampler::new(3);
        let mut rand =
            |k: usize| -> Vec<Vec<Rational>> { (0..k).map(|_| (0..k).map(|_| s.next_rational()).collect()).collect() };
        for inv in [Involution::Transpose, Involution::Symplectic] {
            let (a, b) = (rand(4), rand(4));
            assert_eq!(inv.apply_matrix(&inv.apply_matrix(&a)), a);
            assert_eq!(inv.apply_matrix(&mat_mul(&a, &b)), mat_mul(&inv.apply_matrix(&b), &inv.apply_matrix(&a)));
        }
    }

    #[test]
    fn literals_and_serde() {
        let x = parse_element(2, "E11:0,1").unwrap();
        assert_eq!(x, e(0, 0, 0, 1));
        let y = parse_element(2, "sym-E12:0,1 - 3/2*E21:1,0").unwrap();
        let expect =
            e(0, 1, 0, 1).plus(&e(1, 0, 0, 1)).minus(&e(1, 0, 1, 0).scaled(&Rational::new(3.into(), 2.into())));
        assert_eq!(y, expect);
        assert_eq!(parse_element(2, "adag-E11:0,0").unwrap(), e(0, 0, 0, 0).minus(&e(1, 1, 0, 0)));
        assert!(parse_element(3, "dag-E11:0,0").is_err());
        assert!(parse_element(2, "E31:0,0").is_err());
        let json = serde_json::to_value(&y).unwrap();
        assert_eq!(json["k"], 2);
        assert_eq!(json["terms"][0]["matrix"], serde_json::json!(["0", "1", "1", "0"]));
        let back: MatElement = serde_json::from_value(json).unwrap();
        assert_eq!(back, y);
        assert_eq!(back.k(), 2);
    }
}
