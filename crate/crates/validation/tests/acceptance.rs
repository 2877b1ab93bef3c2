//! Acceptance suite: one PASS/FAIL line per criterion.
//!
//! Runs as a plain binary (no libtest harness) so that the lines come out in
//! order and unbuffered. Exits with status 1 if any criterion fails.

use std::path::PathBuf;
use std::time::{Duration, Instant};

use lmo_core::diagram::{standard_corpus, DiagramSum, JacobiGraph};
use lmo_core::error::LmoError;
use lmo_core::freelie::{solve_pentagon_constant, verify_depth1_identity};
use lmo_core::homology::{lens_torsion_data, torsion_data_qhs, LinkingMatrix};
use lmo_core::invariance::{kirby_fuzz, FuzzConfig, FuzzSource};
use lmo_core::json;
use lmo_core::operators::{check_axiom, d_h, jacobi3, Axiom, AxiomInputs, Verdict};
use lmo_core::rewrite::normal_form;
use lmo_core::weights::{closed_diagram_eval, dedekind_sum, theta_eval, ComplexValue};
use num_rational::BigRational;
use serde_json::json;

/// Published values are given to six significant digits.
const TOL_REFERENCE_156: f64 = 1e-10;
const TOL_SHARED_25: f64 = 1e-12;
const TOL_REFERENCE_25: f64 = 1e-7;
const TOL_DUAL_PATH: f64 = 1e-12;
const FUZZ_TRIALS: usize = 200;
const FUZZ_SEED: u64 = 2024;

struct Outcome {
    pass: bool,
    detail: String,
}

impl Outcome {
    fn new(pass: bool, detail: impl Into<String>) -> Self {
        Outcome { pass, detail: detail.into() }
    }
}

fn timed(budget: Option<Duration>, f: impl FnOnce() -> Outcome) -> Outcome {
    let t = Instant::now();
    let mut o = f();
    let dt = t.elapsed();
    o.detail = format!("{} [{:.3} s]", o.detail, dt.as_secs_f64());
    if let Some(b) = budget {
        if dt >= b {
            o.pass = false;
            o.detail = format!("{} exceeds {:.1} s budget", o.detail, b.as_secs_f64());
        }
    }
    o
}

fn lens_theta(p: u64, q: i64) -> ComplexValue {
    theta_eval(&lens_torsion_data(p, q).unwrap()).unwrap()
}

fn fmt_c(v: &ComplexValue) -> String {
    format!("{:+.6e}{:+.6e}i", v.re, v.im)
}

fn close(v: &ComplexValue, re: f64, im: f64, tol: f64) -> bool {
    (v.re - re).abs() <= tol && (v.im - im).abs() <= tol
}

fn lens_separation() -> Outcome {
    let a = lens_theta(156, 5);
    let b = lens_theta(156, 29);
    let ok_a = close(&a, -1.61110e-6, 2.13626e-6, TOL_REFERENCE_156);
    let ok_b = close(&b, -1.61110e-6, -2.13626e-6, TOL_REFERENCE_156);
    Outcome::new(
        ok_a && ok_b,
        format!(
            "theta(156,5) = {} (expect -1.61110e-6+2.13626e-6i), theta(156,29) = {} (expect -1.61110e-6-2.13626e-6i), tol {TOL_REFERENCE_156:e}",
            fmt_c(&a),
            fmt_c(&b)
        ),
    )
}

fn shared_failure() -> Outcome {
    let a = lens_theta(25, 4);
    let b = lens_theta(25, 9);
    let agree = a.dist(&b) <= TOL_SHARED_25;
    let ok_a = close(&a, -0.0001029, 0.0, TOL_REFERENCE_25);
    let ok_b = close(&b, -0.0001029, 0.0, TOL_REFERENCE_25);
    Outcome::new(
        agree && ok_a && ok_b,
        format!(
            "theta(25,4) = {}, theta(25,9) = {}, |diff| = {:.3e} (tol {TOL_SHARED_25:e}), expect -1.029e-4 within {TOL_REFERENCE_25:e}",
            fmt_c(&a),
            fmt_c(&b),
            a.dist(&b)
        ),
    )
}

fn dedekind_degeneracies() -> Outcome {
    let s = |q, p| dedekind_sum(q, p).unwrap();
    let (s4, s9) = (s(4, 25), s(9, 25));
    let (s5, s29, s7) = (s(5, 156), s(29, 156), s(7, 156));
    Outcome::new(
        s4 == s9 && s5 == s29 && s5 != s7,
        format!("S(4,25) = {s4}, S(9,25) = {s9}, S(5,156) = {s5}, S(29,156) = {s29}, S(7,156) = {s7}"),
    )
}

fn kirby_invariance() -> Outcome {
    let lens = vec![(25, 4), (25, 9), (156, 5), (156, 29), (7, 2)];
    let cfg = FuzzConfig::new(FUZZ_TRIALS, FUZZ_SEED, FuzzSource::Mixed { lens });
    match kirby_fuzz(&cfg) {
        Ok(r) => Outcome::new(
            r.passed(),
            format!(
                "{} trials (seed {}), all equivalent: {}, theta compared on {}, max |dtheta| = {:.3e} (tol 1e-9), {} violations, {} outside the generator orbit",
                r.trials, r.seed, r.all_equivalent, r.theta_compared, r.max_delta_theta, r.theta_violations, r.orbit_misses
            ),
        ),
        Err(e) => Outcome::new(false, format!("fuzz aborted: {e}")),
    }
}

fn nilpotency() -> Outcome {
    let corpus = standard_corpus();
    let bad: Vec<usize> = corpus
        .iter()
        .enumerate()
        .filter(|(_, g)| !d_h(&d_h(&DiagramSum::from_graph(g).unwrap())).is_zero())
        .map(|(i, _)| i)
        .collect();
    Outcome::new(bad.is_empty(), format!("{} corpus graphs, nonzero d_h^2 on {:?}", corpus.len(), bad))
}

fn artifact_dir() -> PathBuf {
    PathBuf::from(env!("CARGO_TARGET_TMPDIR")).join("acceptance")
}

fn termination() -> Outcome {
    let corpus = standard_corpus();
    let mut failures = Vec::new();
    let mut steps = 0;
    for (i, g) in corpus.iter().enumerate() {
        match normal_form(&DiagramSum::from_graph(g).unwrap()) {
            Ok((_, trace)) => steps += trace.steps.len(),
            Err(e) => {
                let mut rec = json!({"corpus_index": i, "graph": json::graph(g), "error": e.to_string()});
                if let LmoError::PotentialViolation { input, output, input_count, output_count } = &e {
                    rec["input"] = json::graph(input);
                    rec["output"] = json::graph(output);
                    rec["input_count"] = json!(input_count);
                    rec["output_count"] = json!(output_count);
                }
                failures.push(rec);
            }
        }
    }
    if failures.is_empty() {
        return Outcome::new(true, format!("{} corpus graphs normalized in {steps} steps", corpus.len()));
    }
    let dir = artifact_dir();
    let path = dir.join("termination_counterexamples.json");
    let written = std::fs::create_dir_all(&dir)
        .and_then(|_| std::fs::write(&path, serde_json::to_string_pretty(&failures).unwrap()))
        .is_ok();
    Outcome::new(
        false,
        format!(
            "{} of {} corpus graphs violate the potential; counterexamples {}",
            failures.len(),
            corpus.len(),
            if written { format!("written to {}", path.display()) } else { "could not be written".into() }
        ),
    )
}

fn small(max_vertices: usize) -> Vec<JacobiGraph> {
    standard_corpus().iter().filter(|g| g.num_vertices() <= max_vertices).cloned().collect()
}

fn connected_sum_axioms() -> Outcome {
    let gs = small(3);
    let mut notes = Vec::new();
    let mut ok = true;
    let mut run = |axiom: Axiom, graphs: Vec<JacobiGraph>, legs: Option<(usize, usize)>| -> (bool, bool) {
        match check_axiom(axiom, &AxiomInputs { graphs, legs }) {
            Ok(r) => (
                r.verdict == Verdict::EqualInNormalForm,
                r.graft.is_none_or(|p| p.surplus_vanishes),
            ),
            Err(e) => {
                notes.push(format!("{axiom:?}: {e}"));
                (false, false)
            }
        }
    };
    let (mut cs2, mut cs3) = ((0, 0), (0, 0));
    for a in &gs {
        for b in &gs {
            cs2.1 += 1;
            if run(Axiom::CS2, vec![a.clone(), b.clone()], None).0 {
                cs2.0 += 1;
            }
            for c in &gs {
                cs3.1 += 1;
                if run(Axiom::CS3, vec![a.clone(), b.clone(), c.clone()], None).0 {
                    cs3.0 += 1;
                }
            }
        }
    }
    let bubble = JacobiGraph::bubble();
    let (_, cs6) = run(Axiom::CS6, vec![bubble.clone(), bubble, JacobiGraph::theta()], Some((0, 0)));
    ok &= cs2.0 == cs2.1 && cs3.0 == cs3.1 && cs6;
    notes.sort();
    notes.dedup();
    Outcome::new(
        ok,
        format!(
            "CS2 {}/{}, CS3 {}/{}, CS6 surplus vanishes: {cs6}{}",
            cs2.0,
            cs2.1,
            cs3.0,
            cs3.1,
            if notes.is_empty() { String::new() } else { format!("; errors: {}", notes.join("; ")) }
        ),
    )
}

fn generalized_jacobi() -> Outcome {
    let gs = small(2);
    let (mut good, mut total) = (0, 0);
    let mut errors = Vec::new();
    for a in &gs {
        for b in &gs {
            for c in &gs {
                total += 1;
                match jacobi3([a, b, c]) {
                    Ok(s) if s.is_zero() => good += 1,
                    Ok(s) => errors.push(format!("nonzero ({} terms)", s.len())),
                    Err(e) => errors.push(e.to_string()),
                }
            }
        }
    }
    errors.sort();
    errors.dedup();
    Outcome::new(
        good == total,
        format!(
            "{good}/{total} triples vanish{}",
            if errors.is_empty() { String::new() } else { format!("; failures: {}", errors.join("; ")) }
        ),
    )
}

fn free_lie() -> Outcome {
    let r = verify_depth1_identity();
    let c = solve_pentagon_constant();
    let quarter = BigRational::new((-1).into(), 4.into());
    Outcome::new(
        r.lhs_matches_expected && r.rhs_matches_expected && r.equal && c == quarter,
        format!(
            "single depth-1 part = ({}, {}), bracket side = ({}, {}), equal: {}, constant = {c}",
            r.lhs_single.a, r.lhs_single.b, r.rhs.a, r.rhs.b, r.equal
        ),
    )
}

fn dual_path() -> Outcome {
    let theta = JacobiGraph::theta();
    let mut worst: f64 = 0.0;
    let mut count = 0;
    for p in 1..=30u64 {
        for q in 1..p.max(2) as i64 {
            if num_integer::gcd(p as i64, q) != 1 {
                continue;
            }
            let t = lens_torsion_data(p, q).unwrap();
            let d = closed_diagram_eval(&theta, &t).unwrap().dist(&theta_eval(&t).unwrap());
            worst = worst.max(d);
            count += 1;
        }
    }
    let mut matrix_ok = true;
    let (mut agree, mut differ) = (Vec::new(), Vec::new());
    for p in (1..=29u64).step_by(2) {
        let m = torsion_data_qhs(&LinkingMatrix::diagonal(&[p as i64])).unwrap();
        let l = lens_torsion_data(p, 1).unwrap();
        let same_qform = m.invariant_factors == l.invariant_factors && m.elements().iter().all(|g| m.qform(g) == l.qform(g));
        let d = theta_eval(&m).unwrap().dist(&theta_eval(&l).unwrap());
        if same_qform {
            matrix_ok &= d <= TOL_DUAL_PATH;
            agree.push(p);
        } else {
            differ.push(format!("{p}:{d:.1e}"));
        }
    }
    Outcome::new(
        worst <= TOL_DUAL_PATH && matrix_ok,
        format!(
            "{count} lens spaces, max |trace - theta| = {worst:.1e} (tol {TOL_DUAL_PATH:e}); matrix path agrees for p in {agree:?}; refinements differ (reported) for p:|dtheta| {}",
            differ.join(" ")
        ),
    )
}

fn main() {
    let criteria: Vec<(&str, Option<Duration>, fn() -> Outcome)> = vec![
        ("lens separation L(156,5) vs L(156,29)", Some(Duration::from_secs(1)), lens_separation),
        ("shared value L(25,4) and L(25,9)", Some(Duration::from_millis(100)), shared_failure),
        ("Dedekind sum degeneracies", None, dedekind_degeneracies),
        ("Kirby invariance fuzz", Some(Duration::from_secs(30)), kirby_invariance),
        ("nilpotency of d_h on the corpus", Some(Duration::from_secs(10)), nilpotency),
        ("IHX normal form termination", None, termination),
        ("connected-sum axioms", Some(Duration::from_secs(60)), connected_sum_axioms),
        ("generalized Jacobi identity, three inputs", None, generalized_jacobi),
        ("free Lie depth-1 identity and constant", Some(Duration::from_secs(1)), free_lie),
        ("dual-path theta consistency", None, dual_path),
    ];
    let mut failed = 0;
    for (i, (name, budget, f)) in criteria.into_iter().enumerate() {
        let o = timed(budget, f);
        if !o.pass {
            failed += 1;
        }
        println!("{} {:>2} {name}: {}", if o.pass { "PASS" } else { "FAIL" }, i + 1, o.detail);
    }
    println!("acceptance: {} passed, {failed} failed", 10 - failed);
    if failed > 0 {
        std::process::exit(1);
    }
}
