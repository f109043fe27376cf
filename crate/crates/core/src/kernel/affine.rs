//! Mode Lie algebras read off from a conformal algebra.
//!
//! With `u(z) = Σ_n (u⊗t^n) z^{-n-1}` the component product determines
//! `[u⊗t^m, v⊗t^n] = Σ_j C(m, j) (u_j v)⊗t^{m+n-j}`, where a `∂`-power in
//! `u_j v` becomes a mode shift through `(∂w)⊗t^q = -q w⊗t^{q-1}`.
//! Modes are labelled by degree: a generator of weight `ℓ` at label `j`
//! stands for `u⊗t^{j+ℓ-1}` (unweighted generators use `ℓ = 1`).

use std::collections::BTreeMap;
use std::fmt;

use serde::{Deserialize, Serialize};
use serde_json::json;

use super::{ConformalAlgebra, ConformalElement, KernelError};
use crate::exec::par_map;
use crate::foundation::{binom, factorial, rat, write_term, Rational, Vector};
use crate::report::{Failure, VerificationReport};

/// Finite combination of `(basis, mode)` pairs plus a multiple of the
/// formal central symbol `κ`.
#[derive(Clone, Debug, Default, PartialEq, Eq, Hash)]
pub struct ModeElement {
    pub modes: BTreeMap<(usize, i64), Rational>,
    pub kappa: Rational,
}

impl ModeElement {
    pub fn mode(basis: usize, m: i64) -> Self {
        Self::term(basis, m, rat(1))
    }

    pub fn term(basis: usize, m: i64, c: Rational) -> Self {
        let mut out = Self::zero();
        out.add_mode(basis, m, &c);
        out
    }

    pub fn central(c: Rational) -> Self {
        Self { modes: BTreeMap::new(), kappa: c }
    }

    pub fn add_mode(&mut self, basis: usize, m: i64, c: &Rational) {
        if Vector::is_zero(c) {
            return;
        }
        let e = self.modes.entry((basis, m)).or_insert_with(|| rat(0));
        *e += c;
        if Vector::is_zero(&*e) {
            self.modes.remove(&(basis, m));
        }
    }

    pub fn without_center(&self) -> Self {
        Self { modes: self.modes.clone(), kappa: rat(0) }
    }

    pub fn render(&self, name: &dyn Fn(usize) -> String) -> String {
        struct R<'a>(&'a ModeElement, &'a dyn Fn(usize) -> String);
        impl fmt::Display for R<'_> {
            fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
                let mut first = true;
                for (&(b, m), c) in &self.0.modes {
                    write_term(f, first, c, &format!("{}({m})", (self.1)(b)))?;
                    first = false;
                }
                if !Vector::is_zero(&self.0.kappa) {
                    write_term(f, first, &self.0.kappa, &"κ")?;
                    first = false;
                }
                if first {
                    write!(f, "0")?;
                }
                Ok(())
            }
        }
        R(self, name).to_string()
    }
}

impl fmt::Display for ModeElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.render(&|b| format!("v{b}")))
    }
}

impl Vector for ModeElement {
    fn zero() -> Self {
        Self { modes: BTreeMap::new(), kappa: rat(0) }
    }

    fn is_zero(&self) -> bool {
        self.modes.is_empty() && Vector::is_zero(&self.kappa)
    }

    fn add_scaled(&mut self, other: &Self, s: &Rational) {
        for (&(b, m), c) in &other.modes {
            self.add_mode(b, m, &(c * s));
        }
        self.kappa += &other.kappa * s;
    }
}

/// Brackets of basis modes `(u, m)`, `(v, n)` with `|m|, |n|, |m+n| ≤ window`.
#[derive(Clone, Debug, PartialEq)]
pub struct ModeBracketTable {
    pub window: i64,
    pub names: Vec<String>,
    pub brackets: BTreeMap<(usize, i64, usize, i64), ModeElement>,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct BracketEntry {
    pub u: String,
    pub m: i64,
    pub v: String,
    pub n: i64,
    pub bracket: String,
}

impl ModeBracketTable {
    pub fn bracket(&self, u: usize, m: i64, v: usize, n: i64) -> Option<&ModeElement> {
        self.brackets.get(&(u, m, v, n))
    }

    pub fn render(&self, x: &ModeElement) -> String {
        x.render(&|b| self.names.get(b).cloned().unwrap_or_else(|| format!("v{b}")))
    }

    /// Bilinear extension to combinations; `κ` is central. `None` when some
    /// pair leaves the window.
    pub fn bracket_elements(&self, x: &ModeElement, y: &ModeElement) -> Option<ModeElement> {
        let mut out = ModeElement::zero();
        for (&(u, m), a) in &x.modes {
            for (&(v, n), b) in &y.modes {
                out.add_scaled(self.bracket(u, m, v, n)?, &(a * b));
            }
        }
        Some(out)
    }

    pub fn entries(&self) -> Vec<BracketEntry> {
        self.brackets
            .iter()
            .map(|(&(u, m, v, n), x)| BracketEntry {
                u: self.names[u].clone(),
                m,
                v: self.names[v].clone(),
                n,
                bracket: self.render(x),
            })
            .collect()
    }

    pub fn is_zero(&self) -> bool {
        self.brackets.values().all(|x| x.is_zero())
    }
}

fn generator_index(g: &ConformalElement) -> Result<usize, KernelError> {
    match g.terms().collect::<Vec<_>>().as_slice() {
        [(0, i, c)] if **c == rat(1) => Ok(*i),
        _ => Err(KernelError::InvalidCase(format!("generator {g} is not a basis element"))),
    }
}

/// `(∂^p w)⊗t^q = (-1)^p q(q-1)...(q-p+1) w⊗t^{q-p}`.
fn mode_shift_coefficient(q: i64, p: u32) -> Rational {
    let sign = if p % 2 == 0 { rat(1) } else { rat(-1) };
    sign * binom(q, p) * Rational::from_integer(factorial(p))
}

pub fn affinize<A>(alg: &A, window: i64) -> Result<ModeBracketTable, KernelError>
where
    A: ConformalAlgebra<Elem = ConformalElement>,
{
    let gens = alg.generators();
    let idx: Vec<usize> = gens.iter().map(generator_index).collect::<Result<_, _>>()?;
    let size = idx.iter().copied().max().map_or(0, |m| m + 1);
    let mut names: Vec<String> = (0..size).map(|i| format!("v{i}")).collect();
    let mut shift = vec![0i64; size];
    for (g, &i) in gens.iter().zip(&idx) {
        names[i] = alg.describe(g);
        shift[i] = alg.weight(g).map_or(0, |w| w as i64 - 1);
    }
    let mut jobs = Vec::new();
    for (gu, &u) in gens.iter().zip(&idx) {
        for (gv, &v) in gens.iter().zip(&idx) {
            jobs.push((gu, u, gv, v));
        }
    }
    let rows = par_map(&jobs, |&(gu, u, gv, v)| -> Result<Vec<_>, KernelError> {
        let y = alg.yplus(gu, gv);
        let mut out = Vec::new();
        for a in -window..=window {
            for b in -window..=window {
                if (a + b).abs() > window {
                    continue;
                }
                let (m, n) = (a + shift[u], b + shift[v]);
                let mut res = ModeElement::zero();
                for (e, comp) in y.iter() {
                    let j = (-e - 1) as u32;
                    let cj = binom(m, j);
                    if Vector::is_zero(&cj) {
                        continue;
                    }
                    let q = m + n - j as i64;
                    for (p, w, c) in comp.terms() {
                        let coef = &cj * c * mode_shift_coefficient(q, p);
                        let label = q - p as i64 - shift.get(w).copied().unwrap_or(0);
                        if label.abs() > window && !Vector::is_zero(&coef) {
                            return Err(KernelError::WidenWindow { mode: label, window });
                        }
                        res.add_mode(w, label, &coef);
                    }
                }
                out.push(((u, a, v, b), res));
            }
        }
        Ok(out)
    });
    let mut brackets = BTreeMap::new();
    for r in rows {
        brackets.extend(r?);
    }
    Ok(ModeBracketTable { window, names, brackets })
}

/// Antisymmetry and the Jacobi identity over every mode triple whose
/// pairwise and total sums stay inside the window.
pub fn check_mode_table(table: &ModeBracketTable) -> VerificationReport {
    let mut rep = VerificationReport::new("affinize").with_param("window", table.window);
    let w = table.window;
    for (&(u, m, v, n), x) in &table.brackets {
        let y = table.bracket(v, n, u, m).cloned().unwrap_or_default();
        rep.check(x.plus(&y).is_zero(), || {
            Failure::new(
                format!("affinize/antisymmetry/{}({m})/{}({n})", table.names[u], table.names[v]),
                json!({ "u": table.names[u], "m": m, "v": table.names[v], "n": n }),
                table.render(&x.scaled(&rat(-1))),
                table.render(&y),
            )
        });
    }
    let basis: Vec<usize> = {
        let mut b: Vec<usize> = table.brackets.keys().map(|k| k.0).collect();
        b.dedup();
        b
    };
    let mut triples = Vec::new();
    for &u in &basis {
        for &v in &basis {
            for &x in &basis {
                for a in -w..=w {
                    for b in -w..=w {
                        for c in -w..=w {
                            let ok = [a + b, b + c, a + c, a + b + c].iter().all(|s| s.abs() <= w);
                            if ok {
                                triples.push(((u, a), (v, b), (x, c)));
                            }
                        }
                    }
                }
            }
        }
    }
    let results = par_map(&triples, |&((u, a), (v, b), (x, c))| {
        let (p, q, r) = (ModeElement::mode(u, a), ModeElement::mode(v, b), ModeElement::mode(x, c));
        let cyc = |p: &ModeElement, q: &ModeElement, r: &ModeElement| -> Option<ModeElement> {
            let inner = table.bracket_elements(q, r)?.without_center();
            table.bracket_elements(p, &inner)
        };
        let sum = [cyc(&p, &q, &r), cyc(&q, &r, &p), cyc(&r, &p, &q)]
            .into_iter()
            .try_fold(ModeElement::zero(), |acc, t| Some(acc.plus(&t?)));
        (((u, a), (v, b), (x, c)), sum)
    });
    for (((u, a), (v, b), (x, c)), sum) in results {
        let (nu, nv, nx) = (&table.names[u], &table.names[v], &table.names[x]);
        rep.check(sum.as_ref().is_some_and(|s| s.is_zero()), || {
            Failure::new(
                format!("affinize/jacobi/{nu}({a})/{nv}({b})/{nx}({c})"),
                json!({ "u": nu, "m": a, "v": nv, "n": b, "w": nx, "l": c }),
                "0",
                sum.as_ref().map_or("outside window".to_string(), |s| table.render(s)),
            )
        });
    }
    rep.detail("entries", table.brackets.len());
    rep.finalize()
}

/// [`affinize`] followed by [`check_mode_table`]; a failing table is an error.
pub fn affinize_checked<A>(alg: &A, window: i64) -> Result<ModeBracketTable, KernelError>
where
    A: ConformalAlgebra<Elem = ConformalElement>,
{
    let table = affinize(alg, window)?;
    let rep = check_mode_table(&table);
    match rep.first_failure() {
        None => Ok(table),
        Some(f) => Err(KernelError::AffinizationViolation(f.check_id.clone())),
    }
}
