//! Verification suites over the Fock module and the quadratic span.

use std::collections::BTreeMap;

use serde_json::json;

use super::fock::{apply_mode, Basis, Factor, FockElement, Mode};
use super::hat::{gen_json, partial_hat, to_matrix_index, yplus_hat, yplus_hat_gen, HatAlgebra, HatElement};
use super::quadratic::{component_closed_form, component_series, QuadGen};
use super::FermionError;
use crate::exec::par_map;
use crate::foundation::{format_rational, rat, Rational, Vector, ZSeries};
use crate::kernel::{check_translation, jacobi_suite, skew_suite, ConformalAlgebra};
use crate::matrix::{yplus_matrix_with, MatElement};
use crate::report::{Failure, VerificationReport};

fn bases(rank: usize, plus: bool) -> Vec<Basis> {
    (1..=rank).map(|i| if plus { Basis::plus(i) } else { Basis::minus(i) }).collect()
}

fn two(a: Basis, p: u32, b: Basis, q: u32) -> FockElement {
    FockElement::string(&[Factor::new(a, Mode::creation(p)), Factor::new(b, Mode::creation(q))])
}

fn pair_op(a: Basis, p: Mode, b: Basis, q: Mode, s: &FockElement) -> FockElement {
    apply_mode(a, p, &apply_mode(b, q, s))
}

fn delta(a: u32, b: u32) -> i64 {
    (a == b) as i64
}

/// The four action identities for `h₁, h₃ ∈ H₊`, `h₂, h₄ ∈ H₋` over every
/// basis choice and every mode `p + 1/2` with `p ≤ max_mode`.
pub fn check_action_identities(rank: usize, max_mode: u32) -> VerificationReport {
    let mut rep = VerificationReport::new("fock-identities").with_param("rank", rank).with_param("max_mode", max_mode);
    let modes: Vec<u32> = (0..=max_mode).collect();
    for &h1 in &bases(rank, true) {
        for &h2 in &bases(rank, false) {
            for &h3 in &bases(rank, true) {
                for &h4 in &bases(rank, false) {
                    for &m in &modes {
                        for &n in &modes {
                            for &j in &modes {
                                for &k in &modes {
                                    identities_at(&mut rep, [h1, h2, h3, h4], [m, n, j, k]);
                                }
                            }
                        }
                    }
                }
            }
        }
    }
    for &j1 in &bases(rank, true) {
        for &j2 in &bases(rank, false) {
            for &j3 in &bases(rank, true) {
                for &j4 in &bases(rank, false) {
                    for &m in &modes {
                        let s = two(j3, m, j4, m);
                        let got = pair_op(j1, Mode::creation(m), j2, Mode::annihilation(m), &s);
                        let want = two(j1, m, j4, m).scaled(&rat(j2.pairing(j3)));
                        rep.check(got == want, || {
                            Failure::new(
                                format!("fock/matrix-unit/{j1}{j2}{j3}{j4}/m={m}"),
                                json!({ "h": [j1.to_string(), j2.to_string(), j3.to_string(), j4.to_string()], "m": m }),
                                want.to_string(),
                                got.to_string(),
                            )
                        });
                    }
                }
            }
        }
    }
    rep.finalize()
}

fn identities_at(rep: &mut VerificationReport, h: [Basis; 4], modes: [u32; 4]) {
    let [h1, h2, h3, h4] = h;
    let [m, n, j, k] = modes;
    let s = two(h3, j, h4, k);
    let inputs = || {
        json!({
            "h": [h1.to_string(), h2.to_string(), h3.to_string(), h4.to_string()],
            "modes": [m, n, j, k],
        })
    };
    let tag = format!("{h1}{h2}{h3}{h4}/{m},{n},{j},{k}");

    let got = pair_op(h1, Mode::annihilation(m), h2, Mode::annihilation(n), &s);
    let c = delta(m, k) * delta(n, j) * h1.pairing(h4) * h2.pairing(h3);
    let want = FockElement::vacuum().scaled(&rat(c));
    rep.check(got == want, || {
        Failure::new(format!("fock/double-contraction/{tag}"), inputs(), want.to_string(), got.to_string())
    });

    let got = pair_op(h1, Mode::creation(m), h2, Mode::annihilation(n), &s);
    let want = two(h1, m, h4, k).scaled(&rat(delta(n, j) * h2.pairing(h3)));
    rep.check(got == want, || {
        Failure::new(format!("fock/plus-contraction/{tag}"), inputs(), want.to_string(), got.to_string())
    });

    let got = pair_op(h2, Mode::creation(m), h1, Mode::annihilation(n), &s);
    let want = two(h3, j, h2, m).scaled(&rat(delta(n, k) * h1.pairing(h4)));
    rep.check(got == want, || {
        Failure::new(format!("fock/minus-contraction/{tag}"), inputs(), want.to_string(), got.to_string())
    });
}

/// States used for the path comparison: the vacuum, every one- and
/// two-particle state with modes up to `max_mode`, and two four-particle
/// states.
pub fn test_states(rank: usize, max_mode: u32) -> Vec<FockElement> {
    let mut singles = Vec::new();
    for plus in [true, false] {
        for h in bases(rank, plus) {
            for p in 0..=max_mode {
                singles.push(Factor::new(h, Mode::creation(p)));
            }
        }
    }
    let mut out = vec![FockElement::vacuum()];
    for (i, a) in singles.iter().enumerate() {
        out.push(FockElement::string(&[*a]));
        for b in &singles[i + 1..] {
            out.push(FockElement::string(&[*a, *b]));
        }
    }
    let f = |h: Basis, p| Factor::new(h, Mode::creation(p));
    out.push(FockElement::string(&[
        f(Basis::plus(1), 0),
        f(Basis::minus(1), 1),
        f(Basis::plus(rank), 2),
        f(Basis::minus(rank), 0),
    ]));
    out.push(FockElement::string(&[
        f(Basis::minus(1), 2),
        f(Basis::minus(rank), 1),
        f(Basis::plus(1), 1),
        f(Basis::plus(rank), 0),
    ]));
    out
}

/// Closed form against series extraction for every generator with
/// `m, n ≤ max_mn`, every component `|c| ≤ max_c`, on every test state.
pub fn check_component_paths(rank: usize, max_mn: u32, max_c: i64) -> VerificationReport {
    let states = test_states(rank, max_mn);
    let mut gens = Vec::new();
    for a in 1..=rank {
        for b in 1..=rank {
            for m in 0..=max_mn {
                for n in 0..=max_mn {
                    gens.push(QuadGen::new(a, m, b, n));
                }
            }
        }
    }
    let reports = par_map(&gens, |&g| {
        let mut rep = VerificationReport::new("component-paths");
        for c in -max_c..=max_c {
            for (i, s) in states.iter().enumerate() {
                let closed = component_closed_form(g, c, s);
                let series = component_series(g, c, s);
                rep.check(closed == series, || {
                    Failure::new(
                        format!("paths/{g}/c={c}/state={i}"),
                        json!({ "generator": gen_json(g), "c": c, "state": s }),
                        series.to_string(),
                        closed.to_string(),
                    )
                });
            }
        }
        rep
    });
    let mut rep = VerificationReport::new("component-paths")
        .with_param("rank", rank)
        .with_param("max_mn", max_mn)
        .with_param("max_c", max_c);
    rep.detail("states", states.len());
    reports.into_iter().fold(rep, |acc, r| acc.merge(r)).finalize()
}

/// `∂1 = 0` and `Y⁺(u, z)1 = 0` for every quadratic generator of `alg`.
pub fn check_unit_ideal(alg: &HatAlgebra) -> VerificationReport {
    let mut rep = VerificationReport::new("unit-ideal").with_param("algebra", alg.label());
    let d = partial_hat(&HatElement::one());
    rep.check(d.is_zero(), || Failure::new("ideal/partial", json!({}), "0", d.to_string()));
    for g in alg.generators() {
        let r = yplus_hat(&g, &HatElement::one());
        let ok = matches!(&r, Ok(s) if s.is_zero());
        rep.check(ok, || {
            let got = match r {
                Ok(s) => s.to_string(),
                Err(e) => e.to_string(),
            };
            Failure::new(format!("ideal/annihilates/{g}"), json!({ "u": g.to_string() }), "0", got)
        });
    }
    rep.finalize()
}

/// Skew-symmetry on all generator pairs, Jacobi on triples from the
/// generating space, and translation on `∂`-shifted generators.
pub fn check_hat_axioms(alg: &HatAlgebra, translation_depth: u32) -> VerificationReport {
    let g = alg.generators();
    let pairs: Vec<_> = g.iter().flat_map(|a| g.iter().map(move |b| (a.clone(), b.clone()))).collect();
    let v = alg.v_generators();
    let mut triples = Vec::new();
    for a in &v {
        for b in &v {
            for c in &v {
                triples.push((a.clone(), b.clone(), c.clone()));
            }
        }
    }
    let mut rep = VerificationReport::new("fermionic-axioms").with_param("algebra", alg.label());
    rep.detail("pairs", pairs.len());
    rep.detail("triples", triples.len());
    rep.absorb(skew_suite(alg, &pairs));
    rep.absorb(jacobi_suite(alg, &triples));
    rep.absorb(check_translation(alg, translation_depth));
    rep.absorb(check_unit_ideal(alg));
    rep.finalize()
}

fn transport(e: &HatElement, k: usize) -> MatElement {
    let mut out = MatElement::new(k);
    for (g, c) in e.quad() {
        out.add((g.m, g.n, to_matrix_index(g.plus), to_matrix_index(g.minus)), c);
    }
    out
}

/// Fermionic product against the matrix structure map through
/// `E_ab(m, n) ↔ ς⁺_a(−m−1/2)ς⁻_b(−n−1/2)`, modulo the span of `1`. Each
/// bidegree is compared up to a scalar, and the scalar is recorded; equality
/// requires every scalar to be 1.
pub fn oracle_compare(u: QuadGen, v: QuadGen, rank: usize) -> Result<VerificationReport, FermionError> {
    oracle_compare_with(u, v, rank, false)
}

/// [`oracle_compare`] against the matrix map, or its sign-flipped mutant.
pub fn oracle_compare_with(
    u: QuadGen,
    v: QuadGen,
    rank: usize,
    mutant: bool,
) -> Result<VerificationReport, FermionError> {
    for j in [u.plus, u.minus, v.plus, v.minus] {
        if j == 0 || j > rank {
            return Err(FermionError::IndexOutOfRange { index: j, rank });
        }
    }
    let hat = yplus_hat_gen(u, v)?;
    let fermionic: ZSeries<MatElement> = hat.map(|e| transport(&e.without_unit(), rank));
    let mu = MatElement::unit(rank, to_matrix_index(u.plus), to_matrix_index(u.minus), u.m, u.n);
    let mv = MatElement::unit(rank, to_matrix_index(v.plus), to_matrix_index(v.minus), v.m, v.n);
    let matrix = yplus_matrix_with(&mu, &mv, mutant)?;

    let mut rep = VerificationReport::new("oracle")
        .with_param("u", gen_json(u))
        .with_param("v", gen_json(v))
        .with_param("rank", rank);
    let inputs = json!({ "u": gen_json(u), "v": gen_json(v), "rank": rank });
    let mut scalars = BTreeMap::new();
    let mut exps: Vec<i64> = fermionic.iter().map(|(e, _)| e).chain(matrix.iter().map(|(e, _)| e)).collect();
    exps.sort_unstable();
    exps.dedup();
    for e in exps {
        let (f, m) = (fermionic.coeff(e), matrix.coeff(e));
        let mut degs: Vec<(u32, u32)> = f.bidegrees().into_iter().chain(m.bidegrees()).collect();
        degs.sort_unstable();
        degs.dedup();
        for (p, q) in degs {
            let (fm, mm) = (f.matrix_at(p, q), m.matrix_at(p, q));
            let id = format!("oracle/{u}/{v}/z^{e}/({p},{q})");
            match scalar_ratio(&fm, &mm) {
                Some(s) => {
                    rep.check(s == rat(1), || Failure::new(id.clone(), inputs.clone(), "1", format_rational(&s)));
                    scalars.insert(format!("z^{e} ({p},{q})"), format_rational(&s));
                }
                None => rep.fail(Failure::new(
                    format!("{id}/structure"),
                    inputs.clone(),
                    render_matrix(&mm),
                    render_matrix(&fm),
                )),
            }
        }
    }
    let unit_part: ZSeries<Rational> = hat.map(|e| e.unit().clone());
    rep.detail("scalars", scalars);
    rep.detail("unit_part", unit_part.to_string());
    Ok(rep.finalize())
}

/// `λ` with `f = λ·m`, when one exists and `m ≠ 0`; `Some(0)` covers
/// `f = 0 ≠ m`.
fn scalar_ratio(f: &[Vec<Rational>], m: &[Vec<Rational>]) -> Option<Rational> {
    let pivot = m.iter().flatten().zip(f.iter().flatten()).find(|(x, _)| !x.is_zero())?;
    let s = pivot.1 / pivot.0;
    let ok = m.iter().flatten().zip(f.iter().flatten()).all(|(x, y)| &(x * &s) == y);
    ok.then_some(s)
}

fn render_matrix(a: &[Vec<Rational>]) -> String {
    let rows: Vec<String> = a.iter().map(|r| r.iter().map(format_rational).collect::<Vec<_>>().join(" ")).collect();
    format!("[{}]", rows.join("; "))
}

/// [`oracle_compare`] over every index tuple at `rank` and every mode
/// quadruple up to `max_mode`.
pub fn oracle_suite(rank: usize, max_mode: u32, mutant: bool) -> Result<VerificationReport, FermionError> {
    let mut gens = Vec::new();
    for a in 1..=rank {
        for b in 1..=rank {
            for m in 0..=max_mode {
                for n in 0..=max_mode {
                    gens.push(QuadGen::new(a, m, b, n));
                }
            }
        }
    }
    let pairs: Vec<(QuadGen, QuadGen)> = gens.iter().flat_map(|u| gens.iter().map(move |v| (*u, *v))).collect();
    let results = par_map(&pairs, |&(u, v)| oracle_compare_with(u, v, rank, mutant));
    let mut rep = VerificationReport::new("oracle")
        .with_param("rank", rank)
        .with_param("max_mode", max_mode)
        .with_param("mutant", mutant);
    let mut seen: BTreeMap<String, u64> = BTreeMap::new();
    for r in results {
        let r = r?;
        if let Some(s) = r.details.get("scalars").and_then(|v| v.as_object()) {
            for v in s.values() {
                *seen.entry(v.as_str().unwrap_or("?").to_string()).or_default() += 1;
            }
        }
        let mut r = r;
        r.details.clear();
        rep.absorb(r);
    }
    rep.detail("pairs", pairs.len());
    rep.detail("scalar_histogram", seen);
    Ok(rep.finalize())
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn identities_hold() {
        let r = check_action_identities(2, 2);
        assert!(r.passed(), "{:?}", r.first_failure());
        assert_eq!(r.checks_run, 3 * 16 * 81 + 16 * 3);
    }

    #[test]
    fn oracle_examples() {
        // commutator pattern at bidegree (0, 0)
        let r = oracle_compare(QuadGen::new(1, 0, 2, 0), QuadGen::new(2, 0, 1, 0), 2).unwrap();
        assert!(r.passed(), "{:?}", r.first_failure());
        assert_eq!(r.details["unit_part"], "(1)*z^-2");
        // zero overlap
        let r = oracle_compare(QuadGen::new(1, 0, 1, 0), QuadGen::new(2, 0, 2, 0), 2).unwrap();
        assert!(r.passed());
        assert_eq!(r.checks_run, 0);
        assert!(oracle_compare(QuadGen::new(3, 0, 1, 0), QuadGen::new(1, 0, 1, 0), 2).is_err());
    }

    #[test]
    fn oracle_rejects_mutant() {
        let r = oracle_suite(2, 1, true).unwrap();
        assert!(!r.passed());
        let r = oracle_suite(2, 1, false).unwrap();
        assert!(r.passed());
    }

    #[test]
    fn oracle_sample_agrees() {
        let r = oracle_compare(QuadGen::new(1, 2, 2, 1), QuadGen::new(2, 1, 1, 2), 2).unwrap();
        assert!(r.passed(), "{:?} {:?}", r.first_failure(), r.details);
    }
}
