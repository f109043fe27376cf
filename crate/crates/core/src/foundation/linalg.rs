//! Exact Gaussian elimination over the rationals.

use std::collections::BTreeMap;

use num_traits::{One, Zero};

use super::{FoundationError, Rational};

/// Sparse coordinate vector over an ordered monomial index.
pub type SparseVec<K> = BTreeMap<K, Rational>;

pub fn axpy<K: Ord + Clone>(y: &mut SparseVec<K>, a: &Rational, x: &SparseVec<K>) {
    for (k, v) in x {
        let e = y.entry(k.clone()).or_insert_with(Rational::zero);
        *e += a * v;
        if e.is_zero() {
            y.remove(k);
        }
    }
}

/// Reduced row echelon form of a growing set of sparse rows.
///
/// Rows are normalized to pivot coefficient one and are zero at every other
/// pivot, so reducing a vector is a single pass over its pivot entries.
#[derive(Clone, Debug)]
pub struct Echelon<K: Ord + Clone> {
    rows: Vec<SparseVec<K>>,
    pivots: BTreeMap<K, usize>,
}

impl<K: Ord + Clone> Default for Echelon<K> {
    fn default() -> Self {
        Self { rows: Vec::new(), pivots: BTreeMap::new() }
    }
}

impl<K: Ord + Clone> Echelon<K> {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn rank(&self) -> usize {
        self.rows.len()
    }

    pub fn rows(&self) -> &[SparseVec<K>] {
        &self.rows
    }

    pub fn reduce(&self, v: &SparseVec<K>) -> SparseVec<K> {
        let mut r = v.clone();
        let hits: Vec<(K, usize)> = v.keys().filter_map(|k| self.pivots.get(k).map(|&i| (k.clone(), i))).collect();
        // Rows vanish at foreign pivots, so subtracting one row never
        // re-introduces another pivot entry.
        for (k, i) in hits {
            if let Some(c) = r.get(&k).cloned() {
                axpy(&mut r, &-c, &self.rows[i]);
            }
        }
        r
    }

    pub fn contains(&self, v: &SparseVec<K>) -> bool {
        self.reduce(v).is_empty()
    }

    /// Adds `v` to the span. Returns false when it was already contained.
    pub fn insert(&mut self, v: &SparseVec<K>) -> bool {
        let mut r = self.reduce(v);
        let Some((pivot, lead)) = r.iter().next().map(|(k, c)| (k.clone(), c.clone())) else {
            return false;
        };
        let inv = Rational::one() / lead;
        for c in r.values_mut() {
            *c *= &inv;
        }
        for row in &mut self.rows {
            if let Some(c) = row.get(&pivot).cloned() {
                axpy(row, &-c, &r);
            }
        }
        self.pivots.insert(pivot, self.rows.len());
        self.rows.push(r);
        true
    }
}

/// Result of an exact span-membership solve.
#[derive(Clone, Debug, PartialEq)]
pub enum SpanSolution {
    Coefficients(Vec<Rational>),
    NotInSpan,
}

/// Expresses `target` as a rational combination of `generators`.
///
/// Free variables are set to zero, so dependent generator sets still yield
/// one valid solution.
pub fn solve_in_span(generators: &[Vec<Rational>], target: &[Rational]) -> Result<SpanSolution, FoundationError> {
    let dim = target.len();
    for g in generators {
        if g.len() != dim {
            return Err(FoundationError::DimensionMismatch { expected: dim, found: g.len() });
        }
    }
    let cols = generators.len();
    // Augmented matrix: rows are coordinates, columns are generators then target.
    let mut m: Vec<Vec<Rational>> = (0..dim)
        .map(|r| {
            let mut row: Vec<Rational> = generators.iter().map(|g| g[r].clone()).collect();
            row.push(target[r].clone());
            row
        })
        .collect();
    let mut pivot_cols = Vec::new();
    let mut row = 0;
    for col in 0..cols {
        let Some(p) = (row..dim).find(|&r| !m[r][col].is_zero()) else {
            continue;
        };
        m.swap(row, p);
        let inv = Rational::one() / m[row][col].clone();
        for c in col..=cols {
            m[row][c] *= &inv;
        }
        for r in 0..dim {
            if r != row && !m[r][col].is_zero() {
                let f = m[r][col].clone();
                for c in col..=cols {
                    let sub = &f * &m[row][c];
                    m[r][c] -= sub;
                }
            }
        }
        pivot_cols.push(col);
        row += 1;
        if row == dim {
            break;
        }
    }
    if (row..dim).any(|r| !m[r][cols].is_zero()) {
        return Ok(SpanSolution::NotInSpan);
    }
    let mut coeffs = vec![Rational::zero(); cols];
    for (r, &c) in pivot_cols.iter().enumerate() {
        coeffs[c] = m[r][cols].clone();
    }
    Ok(SpanSolution::Coefficients(coeffs))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::foundation::rat;
    use proptest::prelude::*;

    fn v(xs: &[i64]) -> Vec<Rational> {
        xs.iter().map(|&x| rat(x)).collect()
    }

    fn combine(gens: &[Vec<Rational>], c: &[Rational]) -> Vec<Rational> {
        let mut out = vec![Rational::zero(); gens.first().map_or(0, |g| g.len())];
        for (g, a) in gens.iter().zip(c) {
            for (o, x) in out.iter_mut().zip(g) {
                *o += a * x;
            }
        }
        out
    }

    #[test]
    fn span_examples() {
        let e1 = v(&[1, 0]);
        let e2 = v(&[0, 1]);
        assert_eq!(solve_in_span(&[e1.clone(), e2.clone()], &e1).unwrap(), SpanSolution::Coefficients(v(&[1, 0])));
        assert_eq!(solve_in_span(&[e1.clone()], &e2).unwrap(), SpanSolution::NotInSpan);
        let gens = vec![e1.clone(), v(&[1, 1]), e2.clone()];
        match solve_in_span(&gens, &e2).unwrap() {
            SpanSolution::Coefficients(c) => assert_eq!(combine(&gens, &c), e2),
            SpanSolution::NotInSpan => panic!("e2 is in the span"),
        }
        assert!(matches!(solve_in_span(&[v(&[1, 2, 3])], &e1), Err(FoundationError::DimensionMismatch { .. })));
    }

    #[test]
    fn echelon_membership() {
        let mut e: Echelon<u32> = Echelon::new();
        let a: SparseVec<u32> = [(0, rat(1)), (1, rat(2))].into_iter().collect();
        let b: SparseVec<u32> = [(1, rat(1)), (2, rat(1))].into_iter().collect();
        assert!(e.insert(&a));
        assert!(e.insert(&b));
        let mut c = a.clone();
        axpy(&mut c, &rat(3), &b);
        assert!(e.contains(&c));
        assert!(!e.insert(&c));
        let d: SparseVec<u32> = [(2, rat(1))].into_iter().collect();
        assert!(!e.contains(&d));
        assert_eq!(e.rank(), 2);
    }

    proptest! {
        #[test]
        fn solutions_reproduce_target(
            gens in prop::collection::vec(prop::collection::vec(-3i64..4, 4), 1..5),
            coef in prop::collection::vec(-3i64..4, 5),
        ) {
            let gens: Vec<Vec<Rational>> = gens.iter().map(|g| v(g)).collect();
            let c: Vec<Rational> = coef.iter().take(gens.len()).map(|&x| rat(x)).collect();
            let target = combine(&gens, &c);
            match solve_in_span(&gens, &target).unwrap() {
                SpanSolution::Coefficients(sol) => prop_assert_eq!(combine(&gens, &sol), target),
                SpanSolution::NotInSpan => prop_assert!(false, "constructed target must be in span"),
            }
        }
    }
}
