//! The subalgebra families of `M_k ⊗ F[t1, t2]` and their finite checks.

use std::collections::BTreeMap;
use std::fmt;
use std::sync::{Arc, RwLock};

use serde::{Deserialize, Serialize};
use serde_json::json;

use super::element::{yplus_matrix, Involution, MatElement, MatKey};
use super::MatrixError;
use crate::exec::par_map;
use crate::foundation::{binom, rat, Echelon, Vector};
use crate::report::{Failure, VerificationReport};
use crate::sampler::RationalSampler;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Kind {
    Full,
    Star,
    Dagger,
}

impl std::str::FromStr for Kind {
    type Err = MatrixError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s.to_ascii_lowercase().as_str() {
            "full" => Ok(Kind::Full),
            "star" => Ok(Kind::Star),
            "dagger" => Ok(Kind::Dagger),
            other => Err(MatrixError::InvalidFamily(format!("unknown family {other}"))),
        }
    }
}

/// A family with label `L` (its minimal weight) on `k × k` matrices.
/// Internally the shift `s = L - 1` is the power of `t2` every element carries.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct FamilyKind {
    pub kind: Kind,
    #[serde(rename = "L")]
    pub label: u32,
    pub k: usize,
}

impl FamilyKind {
    pub fn new(kind: Kind, label: u32, k: usize) -> Result<Self, MatrixError> {
        if label == 0 {
            return Err(MatrixError::InvalidFamily("label L must be at least 1".into()));
        }
        if k == 0 {
            return Err(MatrixError::InvalidFamily("matrix size k must be at least 1".into()));
        }
        if kind == Kind::Dagger && k % 2 == 1 {
            return Err(MatrixError::OddDagger(k));
        }
        Ok(Self { kind, label, k })
    }

    pub fn shift(&self) -> u32 {
        self.label - 1
    }

    pub fn involution(&self) -> Option<Involution> {
        match self.kind {
            Kind::Full => None,
            Kind::Star => Some(Involution::Transpose),
            Kind::Dagger => Some(Involution::Symplectic),
        }
    }

    /// Spanning set at one weight, before pruning.
    fn spanning_set(&self, w: u32) -> Vec<MatElement> {
        let s = self.shift();
        if w < s + 1 {
            return Vec::new();
        }
        let k = self.k;
        let mut out = Vec::new();
        let units = || (0..k).flat_map(move |i| (0..k).map(move |j| (i, j)));
        match self.involution() {
            None => {
                for m in 0..=(w - 1 - s) {
                    for (i, j) in units() {
                        out.push(MatElement::unit(k, i, j, m, w - 1 - m));
                    }
                }
            }
            Some(inv) => {
                // C(n+s, s) u(m, n+s) - (-1)^s C(m+s, s) u*(n, m+s)
                let sign = if s % 2 == 0 { rat(-1) } else { rat(1) };
                for m in 0..=(w - 1 - s) {
                    let n = w - 1 - s - m;
                    let a = binom((n + s) as i64, s);
                    let b = &sign * binom((m + s) as i64, s);
                    for (i, j) in units() {
                        let mut x = MatElement::term(k, (m, n + s, i, j), a.clone());
                        let (p, q, c) = inv.apply_unit(k, i, j);
                        x.add((n, m + s, p, q), &(&b * c));
                        if !x.is_empty() {
                            out.push(x);
                        }
                    }
                }
            }
        }
        out
    }
}

impl fmt::Display for FamilyKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let name = match self.kind {
            Kind::Full => "full",
            Kind::Star => "star",
            Kind::Dagger => "dagger",
        };
        write!(f, "{name}(k={}, L={})", self.k, self.label)
    }
}

struct Level {
    basis: Vec<MatElement>,
    span: Echelon<MatKey>,
}

/// A family with per-weight bases computed on demand and cached.
pub struct Family {
    kind: FamilyKind,
    deleted: Option<(u32, usize)>,
    levels: RwLock<BTreeMap<u32, Arc<Level>>>,
}

impl Family {
    pub fn new(kind: FamilyKind) -> Self {
        Self { kind, deleted: None, levels: RwLock::new(BTreeMap::new()) }
    }

    /// The family with one basis vector removed at `weight`: a
    /// deliberately broken span used to exercise the closure check.
    pub fn with_deleted(kind: FamilyKind, weight: u32, index: usize) -> Self {
        Self { kind, deleted: Some((weight, index)), levels: RwLock::new(BTreeMap::new()) }
    }

    pub fn kind(&self) -> FamilyKind {
        self.kind
    }

    fn level(&self, w: u32) -> Arc<Level> {
        if let Some(l) = self.levels.read().unwrap().get(&w) {
            return l.clone();
        }
        let mut span = Echelon::new();
        let mut basis = Vec::new();
        for x in self.kind.spanning_set(w) {
            if span.insert(x.terms()) {
                basis.push(x);
            }
        }
        if let Some((dw, idx)) = self.deleted {
            if dw == w && idx < basis.len() {
                basis.remove(idx);
                span = Echelon::new();
                for x in &basis {
                    span.insert(x.terms());
                }
            }
        }
        let level = Arc::new(Level { basis, span });
        self.levels.write().unwrap().entry(w).or_insert(level).clone()
    }

    pub fn basis_at(&self, w: u32) -> Vec<MatElement> {
        self.level(w).basis.clone()
    }

    pub fn dim_at(&self, w: u32) -> usize {
        self.level(w).basis.len()
    }

    /// Bases for weights `L..=w_max`, keyed by weight.
    pub fn basis_upto(&self, w_max: u32) -> BTreeMap<u32, Vec<MatElement>> {
        (self.kind.label..=w_max).map(|w| (w, self.basis_at(w))).collect()
    }

    pub fn dim_upto(&self, w_max: u32) -> usize {
        (self.kind.label..=w_max).map(|w| self.dim_at(w)).sum()
    }

    /// Exact span membership, weight by weight.
    pub fn contains(&self, e: &MatElement) -> bool {
        e.homogeneous_parts().iter().all(|(&w, part)| self.level(w).span.contains(part.terms()))
    }

    pub fn minimal_weight_basis(&self) -> Vec<MatElement> {
        self.basis_at(self.kind.label)
    }

    /// A random nonzero member: a combination of three basis elements with
    /// weights `L` and `L + 1` (when `L + 1 ≤ cap`).
    pub fn random_member(&self, rng: &mut RationalSampler, cap: u32) -> MatElement {
        let mut pool = self.basis_at(self.kind.label);
        if self.kind.label < cap {
            pool.extend(self.basis_at(self.kind.label + 1));
        }
        loop {
            let mut x = MatElement::new(self.kind.k);
            for _ in 0..3 {
                let b = &pool[rng.index(pool.len())];
                x.add_scaled(b, &rng.next_nonzero());
            }
            if !x.is_empty() {
                return x;
            }
        }
    }
}

pub fn family_basis(kind: FamilyKind, w_max: u32) -> Result<BTreeMap<u32, Vec<MatElement>>, MatrixError> {
    if w_max < kind.label {
        return Err(MatrixError::InvalidFamily(format!("w_max {w_max} is below the label {}", kind.label)));
    }
    Ok(Family::new(kind).basis_upto(w_max))
}

pub fn membership(e: &MatElement, kind: FamilyKind) -> bool {
    Family::new(kind).contains(e)
}

fn family_params(rep: VerificationReport, kind: FamilyKind) -> VerificationReport {
    rep.with_param("family", kind.kind).with_param("k", kind.k).with_param("L", kind.label)
}

/// Every component of `Y⁺(a, z) b` and every `∂a` for basis elements of
/// weight at most `w_max` lies in the family.
pub fn closure_check(family: &Family, w_max: u32) -> VerificationReport {
    let kind = family.kind;
    let elems: Vec<MatElement> = family.basis_upto(w_max).into_values().flatten().collect();
    for w in kind.label..=2 * w_max {
        family.level(w);
    }
    let rows = par_map(&elems, |a| {
        let mut rep = VerificationReport::new("closure");
        let d = a.partial();
        rep.check(family.contains(&d), || {
            Failure::new(format!("closure/partial/{a}"), json!({ "a": a, "image": "partial" }), "member", d.to_string())
        });
        for b in &elems {
            let y = yplus_matrix(a, b).expect("family elements share k");
            for (e, c) in y.iter() {
                let n = -e - 1;
                rep.check(family.contains(c), || {
                    Failure::new(
                        format!("closure/product/{a}/{b}/n={n}"),
                        json!({ "a": a, "b": b, "n": n }),
                        "member",
                        c.to_string(),
                    )
                });
            }
        }
        rep
    });
    let mut rep = family_params(VerificationReport::new("closure"), kind).with_param("w_max", w_max);
    for r in rows {
        rep.absorb(r);
    }
    rep.detail("basis_elements", elems.len());
    rep.finalize()
}

/// Saturates `{seed}` under `∂`, the left components `a_n(·)` and the
/// skew-transported right components `(·)_n a` for family basis elements
/// `a` of weight at most `cap`, keeping only products whose weights all
/// stay at most `cap`. Passes when the saturation spans the family up to `cap`.
pub fn ideal_probe(family: &Family, seed: &MatElement, cap: u32) -> Result<VerificationReport, MatrixError> {
    let kind = family.kind;
    if seed.is_empty() {
        return Err(MatrixError::ZeroSeed);
    }
    if !family.contains(seed) {
        return Err(MatrixError::NotInFamily(seed.to_string()));
    }
    let basis: Vec<MatElement> = family.basis_upto(cap).into_values().flatten().collect();
    let target = family.dim_upto(cap);
    let fits = |x: &MatElement| x.max_weight().is_some_and(|w| w <= cap);
    let mut span: Echelon<MatKey> = Echelon::new();
    let mut queue = std::collections::VecDeque::new();
    let mut rep = family_params(VerificationReport::new("ideal-probe"), kind).with_param("w_max", cap);
    let mut outside = Vec::new();
    let mut offer = |x: MatElement, span: &mut Echelon<MatKey>, queue: &mut std::collections::VecDeque<MatElement>| {
        if fits(&x) && span.insert(x.terms()) {
            if !family.contains(&x) {
                outside.push(x.clone());
            }
            queue.push_back(x);
        }
    };
    if fits(seed) {
        offer(seed.clone(), &mut span, &mut queue);
    }
    let mut processed = 0u64;
    while let Some(x) = queue.pop_front() {
        if span.rank() >= target {
            break;
        }
        processed += 1;
        let images = par_map(&basis, |a| {
            let left = yplus_matrix(a, &x).expect("shared k");
            let right = skew_transport(&left);
            left.iter().chain(right.iter()).map(|(_, c)| c.clone()).collect::<Vec<_>>()
        });
        offer(x.partial(), &mut span, &mut queue);
        for c in images.into_iter().flatten() {
            offer(c, &mut span, &mut queue);
        }
    }
    rep.count(1);
    let rank = span.rank();
    if rank != target || !outside.is_empty() {
        rep.fail(Failure::new(
            format!("ideal-probe/{seed}"),
            json!({ "family": kind, "seed": seed, "w_max": cap }),
            format!("span of dimension {target}"),
            format!("span of dimension {rank}, {} element(s) outside the family", outside.len()),
        ));
    }
    rep.detail("saturation_rank", rank);
    rep.detail("family_dimension", target);
    rep.detail("elements_processed", processed);
    rep.detail("dimensions", (kind.label..=cap).map(|w| (w.to_string(), family.dim_at(w))).collect::<BTreeMap<_, _>>());
    Ok(rep.finalize())
}

/// `Y⁺(x, z) a` from `Y⁺(a, z) x` by the component form of skew-symmetry.
pub fn skew_transport(yax: &crate::foundation::ZSeries<MatElement>) -> crate::foundation::ZSeries<MatElement> {
    let top = crate::kernel::locality_of(yax);
    let mut out = crate::foundation::ZSeries::new('z');
    for n in 0..top {
        let mut acc = MatElement::zero();
        let mut fact = rat(1);
        for i in 0..(top - n) {
            if i > 0 {
                fact *= rat(i as i64);
            }
            let c = crate::kernel::component_of(yax, n + i);
            if c.is_empty() {
                continue;
            }
            let sign = if (n + i + 1) % 2 == 0 { rat(1) } else { rat(-1) };
            acc.add_scaled(&c.partial_pow(i), &(sign / &fact));
        }
        out.add_term(-(n as i64) - 1, &acc, &rat(1));
    }
    out
}

/// Homogeneous saturation from the minimal-weight space under all
/// components `a_n(b)`, truncated at `w_max`. Passes when every weight
/// reaches the family dimension.
pub fn generation_check(family: &Family, w_max: u32) -> Result<VerificationReport, MatrixError> {
    let kind = family.kind;
    if kind.label < 2 {
        return Err(MatrixError::InvalidFamily("generation needs L >= 2".into()));
    }
    let min_k = if kind.kind == Kind::Dagger { 4 } else { 2 };
    let hypotheses = kind.k >= min_k;
    if w_max < kind.label {
        return Err(MatrixError::InvalidFamily(format!("w_max {w_max} is below the label {}", kind.label)));
    }
    let mut spans: BTreeMap<u32, Echelon<MatKey>> = BTreeMap::new();
    let mut elems: Vec<MatElement> = Vec::new();
    for x in family.minimal_weight_basis() {
        if spans.entry(kind.label).or_default().insert(x.terms()) {
            elems.push(x);
        }
    }
    let target: BTreeMap<u32, usize> = (kind.label..=w_max).map(|w| (w, family.dim_at(w))).collect();
    let complete =
        |spans: &BTreeMap<u32, Echelon<MatKey>>| target.iter().all(|(w, d)| spans.get(w).map_or(0, |s| s.rank()) == *d);
    let mut done = 0usize;
    let mut rounds = 0u32;
    while done < elems.len() && !complete(&spans) {
        rounds += 1;
        let start = done;
        let fresh: Vec<usize> = (start..elems.len()).collect();
        let old = elems.clone();
        done = elems.len();
        // Ordered pairs with at least one newly obtained element, each once.
        let products = par_map(&fresh, |&i| {
            let mut out = Vec::new();
            let x = &old[i];
            for (j, y) in old.iter().enumerate() {
                if j >= start && j < i {
                    continue;
                }
                let orders: &[(&MatElement, &MatElement)] = if i == j { &[(x, y)] } else { &[(x, y), (y, x)] };
                for &(a, b) in orders {
                    let wa = a.weight().unwrap();
                    let wb = b.weight().unwrap();
                    for (e, c) in yplus_matrix(a, b).expect("shared k").iter() {
                        let w = wa + wb - (-e) as u32;
                        if w <= w_max {
                            out.push((w, c.clone()));
                        }
                    }
                }
            }
            out
        });
        for (w, c) in products.into_iter().flatten() {
            if spans.entry(w).or_default().insert(c.terms()) {
                elems.push(c);
            }
        }
    }
    let mut rep = family_params(VerificationReport::new("generate"), kind).with_param("w_max", w_max);
    let mut reached = BTreeMap::new();
    for (&w, &d) in &target {
        let got = spans.get(&w).map_or(0, |s| s.rank());
        let inside = elems.iter().filter(|e| e.weight() == Some(w)).all(|e| family.contains(e));
        reached.insert(w.to_string(), json!({ "expected": d, "reached": got }));
        rep.check(got == d && inside, || {
            Failure::new(
                format!("generate/weight={w:02}"),
                json!({ "family": kind, "w_max": w_max, "weight": w }),
                d,
                if inside { got.to_string() } else { format!("{got} (leaves the family)") },
            )
        });
    }
    rep.detail("dimensions", reached);
    rep.detail("rounds", rounds);
    rep.detail("theorem_hypotheses_hold", hypotheses);
    Ok(rep.finalize())
}

#[cfg(test)]
mod tests {
    use super::*;

    fn fam(kind: Kind, l: u32, k: usize) -> Family {
        Family::new(FamilyKind::new(kind, l, k).unwrap())
    }

    #[test]
    fn dagger_needs_even_size() {
        assert_eq!(FamilyKind::new(Kind::Dagger, 2, 3), Err(MatrixError::OddDagger(3)));
    }

    #[test]
    fn full_dimensions_by_lattice_count() {
        let f = fam(Kind::Full, 2, 2);
        // bidegrees (m, n) with m + n = w - 1 and n >= 1, times 4 units
        for w in 2..=6u32 {
            assert_eq!(f.dim_at(w), 4 * (w as usize - 1));
        }
        assert_eq!(f.dim_at(1), 0);
        assert_eq!(f.dim_at(3), 8);
    }

    #[test]
    fn star_label_one_elements() {
        let f = fam(Kind::Star, 1, 2);
        for x in f.basis_upto(3).into_values().flatten() {
            let t = x.map_units(|i, j| (j, i, rat(1)), |m, n| (n, m));
            assert_eq!(t, x.scaled(&rat(-1)), "{x}");
        }
    }

    #[test]
    fn minimal_weight_dimensions() {
        assert_eq!(fam(Kind::Full, 2, 2).minimal_weight_basis().len(), 4);
        assert_eq!(fam(Kind::Star, 2, 3).minimal_weight_basis().len(), 6);
        assert_eq!(fam(Kind::Star, 3, 3).minimal_weight_basis().len(), 3);
        assert_eq!(fam(Kind::Dagger, 2, 2).minimal_weight_basis().len(), 1);
        assert_eq!(fam(Kind::Dagger, 2, 4).minimal_weight_basis().len(), 6);
        assert_eq!(fam(Kind::Dagger, 3, 4).minimal_weight_basis().len(), 10);
    }

    #[test]
    fn membership_examples() {
        let full = FamilyKind::new(Kind::Full, 3, 2).unwrap();
        for s in 0..5 {
            assert_eq!(membership(&MatElement::unit(2, 0, 1, 0, s), full), s >= 2);
        }
        let star = FamilyKind::new(Kind::Star, 2, 2).unwrap();
        assert!(!membership(&MatElement::unit(2, 0, 1, 0, 1), star));
        assert!(membership(&MatElement::new(2), star));
    }

    #[test]
    fn closure_small_and_fault_injection() {
        let f = fam(Kind::Full, 2, 2);
        let rep = closure_check(&f, 4);
        assert!(rep.passed(), "{:?}", rep.first_failure());
        let broken = Family::with_deleted(FamilyKind::new(Kind::Full, 2, 2).unwrap(), 3, 0);
        let rep = closure_check(&broken, 4);
        assert!(!rep.passed());
        assert!(rep.first_failure().unwrap().check_id.starts_with("closure/"));
    }

    #[test]
    fn ideal_probe_scalar_invariance() {
        let f = fam(Kind::Full, 2, 2);
        let mut rng = RationalSampler::new(11);
        let seed = f.random_member(&mut rng, 4);
        let a = ideal_probe(&f, &seed, 4).unwrap();
        let b = ideal_probe(&f, &seed.scaled(&rat(7)), 4).unwrap();
        assert!(a.passed());
        assert_eq!(a.details["saturation_rank"], b.details["saturation_rank"]);
        assert_eq!(ideal_probe(&f, &MatElement::new(2), 4).unwrap_err(), MatrixError::ZeroSeed);
        assert!(matches!(ideal_probe(&f, &MatElement::unit(2, 0, 0, 0, 0), 4), Err(MatrixError::NotInFamily(_))));
    }

    #[test]
    fn generation_full_two() {
        let f = fam(Kind::Full, 2, 2);
        let rep = generation_check(&f, 5).unwrap();
        assert!(rep.passed(), "{:?}", rep.first_failure());
        assert!(generation_check(&f, 2).unwrap().passed());
    }
}
