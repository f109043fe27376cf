//! The fermionic Fock module: creation strings on the vacuum.

use std::collections::BTreeMap;
use std::fmt;

use serde::{Deserialize, Deserializer, Serialize, Serializer};

use super::FermionError;
use crate::foundation::{format_rational, parse_rational, rat, write_term, Rational, Vector};

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub enum Polarity {
    #[serde(rename = "+")]
    Plus,
    #[serde(rename = "-")]
    Minus,
}

impl Polarity {
    pub fn symbol(self) -> char {
        match self {
            Polarity::Plus => '+',
            Polarity::Minus => '-',
        }
    }
}

/// Half-integer mode stored as `n`, standing for `n + 1/2`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Mode(pub i64);

impl Mode {
    /// `-m - 1/2`.
    pub fn creation(m: u32) -> Self {
        Mode(-(m as i64) - 1)
    }

    /// `m + 1/2`.
    pub fn annihilation(m: u32) -> Self {
        Mode(m as i64)
    }

    pub fn is_creation(self) -> bool {
        self.0 < 0
    }

    /// Numerator of the mode over 2; always odd.
    pub fn numerator(self) -> i64 {
        2 * self.0 + 1
    }

    pub fn from_numerator(p: i64) -> Result<Self, FermionError> {
        if p.rem_euclid(2) != 1 {
            return Err(FermionError::Malformed(format!("mode {p}/2 is not a half-integer")));
        }
        Ok(Mode((p - 1) / 2))
    }

    pub fn negated(self) -> Self {
        Mode(-self.0 - 1)
    }
}

impl fmt::Display for Mode {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}/2", self.numerator())
    }
}

/// A basis vector `ς^±_index` of `H` (indices from 1).
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub struct Basis {
    pub polarity: Polarity,
    pub index: usize,
}

impl Basis {
    pub fn plus(index: usize) -> Self {
        Self { polarity: Polarity::Plus, index }
    }

    pub fn minus(index: usize) -> Self {
        Self { polarity: Polarity::Minus, index }
    }

    /// `⟨ς^+_i, ς^-_j⟩ = δ_ij`, the form vanishing on `H_+` and on `H_-`.
    pub fn pairing(self, other: Basis) -> i64 {
        (self.polarity != other.polarity && self.index == other.index) as i64
    }
}

impl fmt::Display for Basis {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "ς{}{}", self.polarity.symbol(), self.index)
    }
}

/// One creation operator `h(mode)` in a string. The derived order (mode,
/// then polarity with `+` first, then index) is the canonical order: the
/// most negative mode, i.e. the largest absolute value, comes first.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Factor {
    pub mode: Mode,
    pub polarity: Polarity,
    pub index: usize,
}

impl Factor {
    pub fn new(h: Basis, mode: Mode) -> Self {
        Self { mode, polarity: h.polarity, index: h.index }
    }

    pub fn basis(self) -> Basis {
        Basis { polarity: self.polarity, index: self.index }
    }
}

impl fmt::Display for Factor {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}({})", self.basis(), self.mode)
    }
}

/// Rational combination of canonically ordered creation strings applied to
/// the vacuum `1`.
#[derive(Clone, Debug, Default, PartialEq, Eq, Hash)]
pub struct FockElement {
    terms: BTreeMap<Vec<Factor>, Rational>,
}

/// Sorts `v` into canonical order and returns the sign of the permutation;
/// `None` when a factor repeats.
fn canonical_sign(v: &mut [Factor]) -> Option<i64> {
    let mut sign = 1;
    for i in 1..v.len() {
        let mut j = i;
        while j > 0 && v[j - 1] > v[j] {
            v.swap(j - 1, j);
            sign = -sign;
            j -= 1;
        }
        if j > 0 && v[j - 1] == v[j] {
            return None;
        }
    }
    if v.windows(2).any(|w| w[0] == w[1]) {
        return None;
    }
    Some(sign)
}

impl FockElement {
    pub fn vacuum() -> Self {
        Self::string(&[])
    }

    /// The operator string `f1 f2 ... fk · 1`, brought to canonical order.
    pub fn string(factors: &[Factor]) -> Self {
        let mut out = Self::default();
        let mut v = factors.to_vec();
        if v.iter().any(|f| !f.mode.is_creation()) {
            // Annihilators act to the right; fold them in one at a time.
            let mut state = Self::vacuum();
            for f in factors.iter().rev() {
                state = apply_mode(f.basis(), f.mode, &state);
            }
            return state;
        }
        if let Some(s) = canonical_sign(&mut v) {
            out.terms.insert(v, rat(s));
        }
        out
    }

    pub fn add_string(&mut self, factors: Vec<Factor>, c: &Rational) {
        if Vector::is_zero(c) {
            return;
        }
        let e = self.terms.entry(factors.clone()).or_insert_with(|| rat(0));
        *e += c;
        if Vector::is_zero(&*e) {
            self.terms.remove(&factors);
        }
    }

    pub fn terms(&self) -> impl Iterator<Item = (&[Factor], &Rational)> {
        self.terms.iter().map(|(k, v)| (k.as_slice(), v))
    }

    pub fn coefficient(&self, factors: &[Factor]) -> Rational {
        self.terms.get(factors).cloned().unwrap_or_else(|| rat(0))
    }

    /// Largest `|n|` over encoded modes in the element.
    pub fn max_mode(&self) -> i64 {
        self.terms.keys().flatten().map(|f| f.mode.0.abs()).max().unwrap_or(0)
    }
}

/// `h(mode)` acting on a state. A creation mode is prepended and sorted
/// with Koszul signs; an annihilation mode anticommutes to the right with
/// `[h(m), h'(n)]₊ = ⟨h, h'⟩ δ_{m+n,0}` until it kills the vacuum.
pub fn apply_mode(h: Basis, mode: Mode, s: &FockElement) -> FockElement {
    let mut out = FockElement::default();
    for (string, c) in &s.terms {
        if mode.is_creation() {
            let mut v = Vec::with_capacity(string.len() + 1);
            v.push(Factor::new(h, mode));
            v.extend_from_slice(string);
            if let Some(sign) = canonical_sign(&mut v) {
                out.add_string(v, &(c * rat(sign)));
            }
        } else {
            for (i, f) in string.iter().enumerate() {
                if f.mode != mode.negated() {
                    continue;
                }
                let p = h.pairing(f.basis());
                if p == 0 {
                    continue;
                }
                let sign = if i % 2 == 0 { 1 } else { -1 };
                let mut v = string.clone();
                v.remove(i);
                out.add_string(v, &(c * rat(sign * p)));
            }
        }
    }
    out
}

impl fmt::Display for FockElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return write!(f, "0");
        }
        for (n, (string, c)) in self.terms.iter().enumerate() {
            let label = if string.is_empty() {
                "1".to_string()
            } else {
                string.iter().map(|x| x.to_string()).collect::<Vec<_>>().join("")
            };
            write_term(f, n == 0, c, &label)?;
        }
        Ok(())
    }
}

impl Vector for FockElement {
    fn zero() -> Self {
        Self::default()
    }

    fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    fn add_scaled(&mut self, other: &Self, s: &Rational) {
        for (k, c) in &other.terms {
            self.add_string(k.clone(), &(c * s));
        }
    }
}

#[derive(Serialize, Deserialize)]
struct FactorRepr {
    sign_basis: Polarity,
    index: usize,
    mode_numerator: i64,
    mode: String,
}

#[derive(Serialize, Deserialize)]
struct TermRepr {
    coefficient: String,
    factors: Vec<FactorRepr>,
}

impl Serialize for FockElement {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        let terms: Vec<TermRepr> = self
            .terms
            .iter()
            .map(|(string, c)| TermRepr {
                coefficient: format_rational(c),
                factors: string
                    .iter()
                    .map(|f| FactorRepr {
                        sign_basis: f.polarity,
                        index: f.index,
                        mode_numerator: f.mode.numerator(),
                        mode: f.mode.to_string(),
                    })
                    .collect(),
            })
            .collect();
        terms.serialize(s)
    }
}

impl<'de> Deserialize<'de> for FockElement {
    fn deserialize<D: Deserializer<'de>>(d: D) -> Result<Self, D::Error> {
        use serde::de::Error;
        let terms = Vec::<TermRepr>::deserialize(d)?;
        let mut out = FockElement::default();
        for t in terms {
            let c = parse_rational(&t.coefficient).map_err(D::Error::custom)?;
            let factors = t
                .factors
                .iter()
                .map(|f| {
                    Mode::from_numerator(f.mode_numerator).map(|m| Factor {
                        mode: m,
                        polarity: f.sign_basis,
                        index: f.index,
                    })
                })
                .collect::<Result<Vec<_>, _>>()
                .map_err(D::Error::custom)?;
            out.add_scaled(&FockElement::string(&factors), &c);
        }
        Ok(out)
    }
}
