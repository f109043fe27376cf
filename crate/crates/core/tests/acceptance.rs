//! Acceptance suite: one line per criterion, exit status 1 if any fails.

use std::collections::BTreeMap;
use std::process::ExitCode;
use std::time::Instant;

use confjord::fermion::{check_action_identities, check_component_paths, check_hat_axioms, oracle_suite, HatAlgebra};
use confjord::foundation::{format_rational, rat, ratio, Rational};
use confjord::kernel::axioms::{generator_pairs, generator_triples};
use confjord::kernel::{
    affinize, check_delta_identity, check_mode_table, check_on_generators, check_translation, jacobi_suite, make_witt,
    skew_suite, sl2_current, sl2_mutant, sl2_table, witt_mutant, DeltaCase, ModeElement,
};
use confjord::matrix::{
    check_jordan, check_lie, check_matrix_grading, closure_check, generation_check, ideal_probe, identify_model,
    matrix_over_v, v_unit, Family, FamilyKind, Kind, MatElement, MatrixAlgebra, ModelLabel,
};
use confjord::sampler::RationalSampler;
use confjord::{Vector, VerificationReport};

type Outcome = Result<String, String>;

fn require(ok: bool, msg: impl FnOnce() -> String) -> Result<(), String> {
    if ok {
        Ok(())
    } else {
        Err(msg())
    }
}

fn passed(r: &VerificationReport, what: &str) -> Result<(), String> {
    require(r.passed(), || {
        let f = r.first_failure().map(|f| format!("{} (expected {}, got {})", f.check_id, f.expected, f.actual));
        format!("{what}: {} failures, first {:?}, error {:?}", r.failures.len(), f, r.error)
    })
}

fn family(kind: Kind, label: u32, k: usize) -> Family {
    Family::new(FamilyKind::new(kind, label, k).expect("valid family"))
}

fn configurations() -> Vec<(Kind, usize)> {
    vec![(Kind::Full, 2), (Kind::Full, 3), (Kind::Star, 2), (Kind::Star, 3), (Kind::Dagger, 2), (Kind::Dagger, 4)]
}

fn criterion_1() -> Outcome {
    let mut total = 0;
    for k in [2usize, 3] {
        let units = MatrixAlgebra::new(k, 3);
        let skew = skew_suite(&units, &generator_pairs(&units));
        passed(&skew, &format!("skew k={k}"))?;
        let v = matrix_over_v(k, 3, false);
        let via_v = jacobi_suite(&v, &generator_triples(&v));
        passed(&via_v, &format!("jacobi over V k={k}"))?;
        let gens: Vec<MatElement> = v
            .sample()
            .iter()
            .map(|&g| {
                let (n, i, j) = v_unit(k, g);
                MatElement::unit(k, i, j, 0, n)
            })
            .collect();
        let mut triples = Vec::new();
        for a in &gens {
            for b in &gens {
                for c in &gens {
                    triples.push((a.clone(), b.clone(), c.clone()));
                }
            }
        }
        let direct = jacobi_suite(&units, &triples);
        passed(&direct, &format!("jacobi on units k={k}"))?;
        total += skew.checks_run + via_v.checks_run + direct.checks_run;
    }
    let small = MatrixAlgebra::new(2, 1);
    let full = jacobi_suite(&small, &generator_triples(&small));
    passed(&full, "jacobi on all unit triples k=2, entries <= 1")?;
    total += full.checks_run;
    require(total >= 10_000, || format!("only {total} equalities"))?;
    Ok(format!("{total} component and residue equalities, both routes agree"))
}

fn criterion_2() -> Outcome {
    let mut notes = Vec::new();
    let mut run = |name: &str, rep: VerificationReport, expect_pass: bool, translation: Option<VerificationReport>| {
        let gl = rep.details.get("generator_level").cloned().unwrap_or_default();
        let el = rep.details.get("extended_level").cloned().unwrap_or_default();
        let want = if expect_pass { "pass" } else { "fail" };
        require(gl == want && el == want && rep.error.is_none(), || {
            format!("{name}: generator level {gl}, extended level {el}, error {:?}", rep.error)
        })?;
        if let Some(t) = translation {
            passed(&t, &format!("translation on {name}"))?;
        }
        notes.push(format!("{name} {want}"));
        Ok::<(), String>(())
    };
    let witt = make_witt();
    run("Witt", check_on_generators(&witt, 3), true, Some(check_translation(&witt, 3)))?;
    let sl2 = sl2_current();
    run("R(sl2)", check_on_generators(&sl2, 2), true, Some(check_translation(&sl2, 2)))?;
    let m = matrix_over_v(2, 2, false);
    run("R2x2", check_on_generators(&m, 1), true, Some(check_translation(&m, 1)))?;
    run("Witt mutant", check_on_generators(&witt_mutant(), 2), false, None)?;
    run("sl2 mutant", check_on_generators(&sl2_mutant(), 2), false, None)?;
    run("R2x2 mutant", check_on_generators(&matrix_over_v(2, 2, true), 1), false, None)?;
    Ok(notes.join(", "))
}

fn criterion_3() -> Outcome {
    let witt = affinize(&make_witt(), 12).map_err(|e| e.to_string())?;
    passed(&check_mode_table(&witt), "Witt mode table")?;
    let mut n = 0;
    for j in -6i64..=6 {
        for l in -6i64..=6 {
            let want = ModeElement::term(0, j + l, rat(j - l));
            require(witt.bracket(0, j, 0, l) == Some(&want), || format!("Witt [{j},{l}]"))?;
            n += 1;
        }
    }
    let loops = affinize(&sl2_current(), 12).map_err(|e| e.to_string())?;
    passed(&check_mode_table(&loops), "loop mode table")?;
    let lie = sl2_table();
    for u in 0..3 {
        for v in 0..3 {
            let br = lie.bracket(&BTreeMap::from([(u, rat(1))]), &BTreeMap::from([(v, rat(1))]));
            for j in -6i64..=6 {
                for l in -6i64..=6 {
                    let mut want = <ModeElement as Vector>::zero();
                    for (&w, c) in &br {
                        want.add_mode(w, j + l, c);
                    }
                    require(loops.bracket(u, j, v, l) == Some(&want), || format!("sl2 [{u}_{j},{v}_{l}]"))?;
                    n += 1;
                }
            }
        }
    }
    Ok(format!("{n} brackets match on |j|,|l| <= 6"))
}

fn criterion_4() -> Outcome {
    let affine = check_delta_identity(DeltaCase::AffineSl(2), 4).map_err(|e| e.to_string())?;
    passed(&affine, "affine sl2")?;
    // trace form: <H, H> = tr(diag(1,-1)^2) = 2, so the central term is 2l
    let ks = affine.details["kappa_coefficients"].as_object().cloned().unwrap_or_default();
    for l in -4i64..=4 {
        let got = ks.get(&l.to_string()).and_then(|v| v.as_str()).unwrap_or("missing");
        require(got == format_rational(&rat(2 * l)), || format!("affine kappa at l={l}: {got}"))?;
    }
    let vir = check_delta_identity(DeltaCase::Virasoro, 4).map_err(|e| e.to_string())?;
    passed(&vir, "Virasoro")?;
    let ks = vir.details["kappa_coefficients"].as_object().cloned().unwrap_or_default();
    for j in -4i64..=4 {
        let want: Rational = ratio(j * j * j - j, 12);
        let got = ks.get(&j.to_string()).and_then(|v| v.as_str()).unwrap_or("missing");
        require(got == format_rational(&want), || format!("Virasoro kappa at j={j}: {got}"))?;
    }
    let at = |j: &str| ks.get(j).and_then(|v| v.as_str()).unwrap_or("").to_string();
    Ok(format!(
        "{} coefficient checks; Virasoro kappa {} at j=2, {} at j=1; kappa sign {}",
        affine.checks_run + vir.checks_run,
        at("2"),
        at("1"),
        vir.details["kappa_sign"]
    ))
}

fn criterion_5() -> Outcome {
    let mut min = u64::MAX;
    let mut count = 0;
    for (kind, k) in configurations() {
        for l in 1..=3 {
            let r = closure_check(&family(kind, l, k), 6);
            passed(&r, &format!("closure {kind:?} k={k} L={l}"))?;
            require(r.checks_run >= 1000, || format!("{kind:?} k={k} L={l}: {} checks", r.checks_run))?;
            min = min.min(r.checks_run);
            count += 1;
        }
    }
    Ok(format!("{count} families closed to weight 6, at least {min} membership checks each"))
}

fn criterion_6() -> Outcome {
    let mut count = 0;
    for (kind, k) in configurations() {
        for l in 1..=3 {
            let f = family(kind, l, k);
            let mut rng = RationalSampler::new(1000 + 10 * l as u64 + k as u64);
            for t in 0..20 {
                let seed = f.random_member(&mut rng, 5);
                let r = ideal_probe(&f, &seed, 5).map_err(|e| e.to_string())?;
                passed(&r, &format!("probe {t} on {kind:?} k={k} L={l}"))?;
                count += 1;
            }
        }
    }
    Ok(format!("{count} probes saturate to the full span up to weight 5"))
}

fn criterion_7() -> Outcome {
    let cases = [
        (Kind::Full, 2, ModelLabel::JordanA),
        (Kind::Full, 3, ModelLabel::JordanA),
        (Kind::Star, 2, ModelLabel::JordanB),
        (Kind::Star, 3, ModelLabel::JordanB),
        (Kind::Dagger, 2, ModelLabel::JordanC),
        (Kind::Dagger, 4, ModelLabel::JordanC),
    ];
    let mut notes = Vec::new();
    for (kind, k, label) in cases {
        let mut labels = Vec::new();
        for l in [2, 4] {
            let f = family(kind, l, k);
            let r = check_jordan(&f, 50, 7).map_err(|e| e.to_string())?;
            passed(&r, &format!("Jordan {kind:?} k={k} L={l}"))?;
            let id = identify_model(&f).map_err(|e| e.to_string())?;
            require(id.label == label, || format!("{kind:?} k={k} L={l}: {}", id.label))?;
            require(id.lambda.is_some(), || format!("{kind:?} k={k} L={l}: no scalar"))?;
            if kind == Kind::Full {
                require(id.lambda == Some(rat(-1)), || format!("Full k={k} L={l}: scalar {:?}", id.lambda))?;
            }
            labels.push(id.label);
        }
        require(labels[0] == labels[1], || format!("{kind:?} k={k}: labels differ"))?;
        notes.push(format!("{kind:?}/{k} {label}"));
    }
    Ok(notes.join(", "))
}

fn criterion_8() -> Outcome {
    let cases = [
        (Kind::Full, 2, ModelLabel::Gl),
        (Kind::Full, 3, ModelLabel::Gl),
        (Kind::Star, 2, ModelLabel::O),
        (Kind::Star, 3, ModelLabel::O),
        (Kind::Dagger, 4, ModelLabel::Sp),
    ];
    let mut notes = Vec::new();
    for (kind, k, label) in cases {
        let mut labels = Vec::new();
        for l in [1, 3] {
            let f = family(kind, l, k);
            let r = check_lie(&f, 50, 7).map_err(|e| e.to_string())?;
            passed(&r, &format!("Lie {kind:?} k={k} L={l}"))?;
            let id = identify_model(&f).map_err(|e| e.to_string())?;
            require(id.label == label, || format!("{kind:?} k={k} L={l}: {}", id.label))?;
            labels.push(id.label);
        }
        require(labels[0] == labels[1], || format!("{kind:?} k={k}: labels differ"))?;
        notes.push(format!("{kind:?}/{k} {label}({k})"));
    }
    Ok(notes.join(", "))
}

/// `k²` units `E_ij(m1, m2)` for each split `m1 + m2 = w - 1` with
/// `m2 >= L - 1`.
fn full_lattice_dimension(k: usize, l: u32, w: u32) -> usize {
    k * k * (w - (l - 1)) as usize
}

fn criterion_9() -> Outcome {
    let mut notes = Vec::new();
    for (kind, k) in [(Kind::Full, 2), (Kind::Star, 2), (Kind::Dagger, 4)] {
        let l = 2;
        let f = family(kind, l, k);
        let r = generation_check(&f, l + 3).map_err(|e| e.to_string())?;
        passed(&r, &format!("generation {kind:?} k={k}"))?;
        let dims = r.details["dimensions"].as_object().cloned().unwrap_or_default();
        let mut reached = Vec::new();
        for w in l..=l + 3 {
            let d = &dims[&w.to_string()];
            require(d["expected"] == d["reached"], || format!("{kind:?} weight {w}: {d}"))?;
            require(d["expected"].as_u64() == Some(f.dim_at(w) as u64), || format!("{kind:?} weight {w}"))?;
            reached.push(d["reached"].to_string());
        }
        if kind == Kind::Full {
            let want: Vec<String> = (l..=l + 3).map(|w| full_lattice_dimension(k, l, w).to_string()).collect();
            require(reached == want, || format!("Full k=2 dimensions {reached:?}, lattice count {want:?}"))?;
        }
        notes.push(format!("{kind:?}/{k}: {}", reached.join(",")));
    }
    Ok(notes.join("; "))
}

fn criterion_10() -> Outcome {
    let ids = check_action_identities(2, 2);
    passed(&ids, "action identities")?;
    let paths = check_component_paths(2, 2, 4);
    passed(&paths, "component paths")?;
    let oracle = oracle_suite(2, 2, false).map_err(|e| e.to_string())?;
    passed(&oracle, "oracle")?;
    let hist = oracle.details["scalar_histogram"].clone();
    let alg = HatAlgebra::new(2, 2);
    let axioms = check_hat_axioms(&alg, 1);
    passed(&axioms, "fermionic axioms")?;
    Ok(format!(
        "{} identity, {} path, {} oracle, {} axiom checks; scalars {}",
        ids.checks_run, paths.checks_run, oracle.checks_run, axioms.checks_run, hist
    ))
}

fn criterion_11() -> Outcome {
    let mut notes = Vec::new();
    for k in [2usize, 3] {
        let r = check_matrix_grading(k, 8);
        passed(&r, &format!("grading k={k}"))?;
        require(r.details["n0"].as_u64() == Some((k * k) as u64), || format!("N0 for k={k}"))?;
        notes.push(format!("k={k}: {} checks, N0={}", r.checks_run, k * k));
    }
    Ok(notes.join("; "))
}

fn main() -> ExitCode {
    let criteria: Vec<(u32, &str, fn() -> Outcome)> = vec![
        (1, "matrix algebra axioms", criterion_1),
        (2, "generator-level and extended verdicts", criterion_2),
        (3, "Witt and loop recovery", criterion_3),
        (4, "delta identities", criterion_4),
        (5, "family closure", criterion_5),
        (6, "simplicity probes", criterion_6),
        (7, "minimal-weight Jordan algebras", criterion_7),
        (8, "minimal-weight Lie algebras", criterion_8),
        (9, "generation from minimal weight", criterion_9),
        (10, "fermionic oracle", criterion_10),
        (11, "grading and growth", criterion_11),
    ];
    let filter: Vec<u32> = std::env::args().skip(1).filter_map(|a| a.parse().ok()).collect();
    let mut failed = 0;
    for (n, name, f) in criteria {
        if !filter.is_empty() && !filter.contains(&n) {
            continue;
        }
        let start = Instant::now();
        let outcome = f();
        let secs = start.elapsed().as_secs_f64();
        match outcome {
            Ok(msg) => println!("criterion {n:>2} PASS {name} ({secs:.1}s): {msg}"),
            Err(msg) => {
                failed += 1;
                println!("criterion {n:>2} FAIL {name} ({secs:.1}s): {msg}");
            }
        }
    }
    if failed == 0 {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}
