//! `M_k ⊗ F[t1, t2]` as a free `F[∂]`-module over `V = {u(0, n)}`, and the
//! adapters that expose it to the generic axiom checkers.

use std::collections::{BTreeMap, HashMap};
use std::sync::RwLock;

use serde_json::json;

use super::element::{yplus_matrix_with, MatElement, MatKey};
use crate::foundation::{rat, Echelon, Rational, Vector, ZSeries};
use crate::kernel::{check_weight_grading, ConformalAlgebra, ConformalElement, GeneratedAlgebra, StructureMap};
use crate::report::{Failure, VerificationReport};

/// Index of `E_ij(0, n)` as a generator of `V`.
pub fn v_index(k: usize, n: u32, i: usize, j: usize) -> usize {
    n as usize * k * k + i * k + j
}

pub fn v_unit(k: usize, g: usize) -> (u32, usize, usize) {
    let kk = k * k;
    ((g / kk) as u32, (g % kk) / k, g % k)
}

/// `u(m, n) = Σ c ∂^p u(0, n')`, from `u(m, n) = (∂u(m-1, n) - (n+1) u(m-1, n+1)) / m`.
fn expansion(
    m: u32,
    n: u32,
    memo: &mut HashMap<(u32, u32), BTreeMap<(u32, u32), Rational>>,
) -> BTreeMap<(u32, u32), Rational> {
    if let Some(x) = memo.get(&(m, n)) {
        return x.clone();
    }
    let out = if m == 0 {
        BTreeMap::from([((0, n), rat(1))])
    } else {
        let mut acc: BTreeMap<(u32, u32), Rational> = BTreeMap::new();
        let inv = Rational::new(1.into(), (m as i64).into());
        for ((p, q), c) in expansion(m - 1, n, memo) {
            *acc.entry((p + 1, q)).or_insert_with(|| rat(0)) += &c * &inv;
        }
        for ((p, q), c) in expansion(m - 1, n + 1, memo) {
            *acc.entry((p, q)).or_insert_with(|| rat(0)) -= &c * &inv * rat(n as i64 + 1);
        }
        acc.retain(|_, c| !Vector::is_zero(c));
        acc
    };
    memo.insert((m, n), out.clone());
    out
}

/// Writes `e` as `Σ ∂^p v_p` with each `v_p` in the span of `{u(0, n)}`.
pub fn canonicalize_over_v(e: &MatElement) -> ConformalElement {
    let k = e.k();
    let mut memo = HashMap::new();
    let mut out = ConformalElement::zero();
    for (&(m1, m2, i, j), c) in e.terms() {
        for ((p, n), a) in expansion(m1, m2, &mut memo) {
            out.add_term(p, v_index(k, n, i, j), &(c * a));
        }
    }
    out
}

/// Inverse of [`canonicalize_over_v`]: apply `∂` forward.
pub fn expand_from_v(ce: &ConformalElement, k: usize) -> MatElement {
    let mut out = MatElement::new(k);
    for (p, g, c) in ce.terms() {
        let (n, i, j) = v_unit(k, g);
        out.add_scaled(&MatElement::unit(k, i, j, 0, n).partial_pow(p), c);
    }
    out
}

/// `M_k ⊗ F[t1, t2]` with its own `∂` and structure map; generators are the
/// units `E_ij(m1, m2)` with `m1, m2 ≤ max_degree`.
pub struct MatrixAlgebra {
    pub k: usize,
    pub max_degree: u32,
    pub mutant: bool,
}

impl MatrixAlgebra {
    pub fn new(k: usize, max_degree: u32) -> Self {
        Self { k, max_degree, mutant: false }
    }

    /// The same algebra with the sign of the second sum flipped.
    pub fn mutant(k: usize, max_degree: u32) -> Self {
        Self { k, max_degree, mutant: true }
    }
}

impl ConformalAlgebra for MatrixAlgebra {
    type Elem = MatElement;

    fn label(&self) -> String {
        format!("{}R{}x{}", if self.mutant { "mutant-" } else { "" }, self.k, self.k)
    }

    fn generators(&self) -> Vec<MatElement> {
        let mut out = Vec::new();
        for m1 in 0..=self.max_degree {
            for m2 in 0..=self.max_degree {
                for i in 0..self.k {
                    for j in 0..self.k {
                        out.push(MatElement::unit(self.k, i, j, m1, m2));
                    }
                }
            }
        }
        out
    }

    fn partial(&self, e: &MatElement) -> MatElement {
        e.partial()
    }

    fn yplus(&self, a: &MatElement, b: &MatElement) -> ZSeries<MatElement> {
        yplus_matrix_with(a, b, self.mutant).expect("elements of one algebra share k")
    }

    fn weight(&self, e: &MatElement) -> Option<u32> {
        e.weight()
    }
}

/// The structure map of `M_k ⊗ F[t1, t2]` restricted to `V`, with products
/// rewritten over `V`. Generator `v_index(k, n, i, j)` is `E_ij(0, n)`.
pub struct MatrixGeneratorMap {
    k: usize,
    mutant: bool,
    memo: RwLock<HashMap<(usize, usize), Vec<ConformalElement>>>,
}

impl MatrixGeneratorMap {
    pub fn new(k: usize, mutant: bool) -> Self {
        Self { k, mutant, memo: RwLock::new(HashMap::new()) }
    }
}

impl StructureMap for MatrixGeneratorMap {
    fn name(&self, g: usize) -> String {
        let (n, i, j) = v_unit(self.k, g);
        format!("E{}{}(0,{n})", i + 1, j + 1)
    }

    fn weight(&self, g: usize) -> Option<u32> {
        Some(v_unit(self.k, g).0 + 1)
    }

    fn components(&self, u: usize, v: usize) -> Vec<ConformalElement> {
        if let Some(c) = self.memo.read().unwrap().get(&(u, v)) {
            return c.clone();
        }
        let unit = |g: usize| {
            let (n, i, j) = v_unit(self.k, g);
            MatElement::unit(self.k, i, j, 0, n)
        };
        let y = yplus_matrix_with(&unit(u), &unit(v), self.mutant).expect("shared k");
        let top = crate::kernel::locality_of(&y);
        let out: Vec<ConformalElement> =
            (0..top).map(|n| canonicalize_over_v(&crate::kernel::component_of(&y, n))).collect();
        self.memo.write().unwrap().insert((u, v), out.clone());
        out
    }
}

/// `F[∂] ⊗ V` for `M_k ⊗ F[t1, t2]`, sampling `E_ij(0, n)` with `n ≤ max_n`.
pub fn matrix_over_v(k: usize, max_n: u32, mutant: bool) -> GeneratedAlgebra<MatrixGeneratorMap> {
    let sample = (0..=max_n).flat_map(|n| (0..k).flat_map(move |i| (0..k).map(move |j| v_index(k, n, i, j)))).collect();
    let label = format!("{}R{k}x{k}/V", if mutant { "mutant-" } else { "" });
    GeneratedAlgebra::new(label, MatrixGeneratorMap::new(k, mutant), sample)
}

/// Weight shifts of products on `V` and on bidegree units with entries up
/// to 3, and the finite-growth certificate: at every weight `w ≤ max_weight`
/// the elements `∂^i E_ab(0, n)` with `i + n + 1 = w` form a basis of the
/// weight space, so the algebra is free over `V` with `dim V_w = k²`.
pub fn check_matrix_grading(k: usize, max_weight: u32) -> VerificationReport {
    let v = matrix_over_v(k, max_weight.saturating_sub(1), false);
    let mut rep = VerificationReport::new("grading").with_param("k", k).with_param("max_weight", max_weight);
    let on_v = check_weight_grading(&v, max_weight);
    let growth = on_v.details.get("growth_bound").cloned();
    rep.absorb(on_v);
    rep.absorb(check_weight_grading(&MatrixAlgebra::new(k, 3), max_weight));
    let mut v_dims = BTreeMap::new();
    for w in 1..=max_weight {
        let mut span = Echelon::<MatKey>::new();
        let mut count = 0;
        for n in 0..w {
            let i = w - 1 - n;
            for a in 0..k {
                for b in 0..k {
                    span.insert(MatElement::unit(k, a, b, 0, n).partial_pow(i).terms());
                    count += 1;
                }
            }
        }
        let dim = k * k * w as usize;
        rep.check(span.rank() == count && count == dim, || {
            Failure::new(
                format!("grading/free/w={w}"),
                json!({ "k": k, "weight": w }),
                format!("rank {dim}"),
                format!("rank {} from {count} elements", span.rank()),
            )
        });
        v_dims.insert(w, k * k);
    }
    let n0 = k * k;
    rep.check(growth.as_ref().and_then(|g| g.as_u64()) == Some(n0 as u64), || {
        Failure::new("grading/growth", json!({ "k": k }), n0, growth.clone().unwrap_or_default())
    });
    rep.details.clear();
    rep.detail("n0", n0);
    rep.detail("v_dimensions", v_dims);
    rep.finalize()
}
