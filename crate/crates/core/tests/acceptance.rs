//! The twelve acceptance criteria, one PASS/FAIL line each.

mod common;

use common::*;
use proptest::test_runner::{Config, RngAlgorithm, TestError, TestRng, TestRunner};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use std::f64::consts::FRAC_1_SQRT_2;
use std::time::Instant;
use tribox::boxes::{family_box, Cut, FamilyParam, TripartiteBox};
use tribox::decomposition::{
    build_d4_model, canonical_strategies, certify_genuine, certify_super_unsteerable, conditional_box, search_dimension,
    solve_conditionals, verify_model, CaseOutcome, Conclusion, GenuineConclusion, PieceKind, SearchOptions, Status,
};
use tribox::inequalities::{lp_membership, mermin_value, steering_chsh_value, strength, Polytope, StrengthKind};
use tribox::quantum::{
    born_bipartite, born_tripartite, paper_measurements, paper_state, sigma_pair, tlm_realizable, PaperMeasurements,
    PaperState, TlmVerdict,
};

type Outcome = Result<String, String>;

fn ensure(ok: bool, msg: impl FnOnce() -> String) -> Result<(), String> {
    if ok {
        Ok(())
    } else {
        Err(msg())
    }
}

fn mermin(v: f64) -> TripartiteBox {
    family_box(&FamilyParam::mermin(v).expect("v in range"))
}

/// Midpoint of the final bracket `[lo, hi]` with `pred(lo)` true and
/// `pred(hi)` false.
fn bisect(mut lo: f64, mut hi: f64, width: f64, pred: impl Fn(f64) -> bool) -> Result<f64, String> {
    if !pred(lo) || pred(hi) {
        return Err(format!("predicate does not change sign on [{lo}, {hi}]"));
    }
    while hi - lo > width {
        let mid = 0.5 * (lo + hi);
        if pred(mid) {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    Ok(0.5 * (lo + hi))
}

fn born_ghz() -> Outcome {
    let mut worst = 0.0f64;
    for k in 1..=10 {
        let v = k as f64 / 10.0;
        let rho = paper_state(PaperState::GhzMixed, v).map_err(|e| e.to_string())?;
        let bx = born_tripartite(&rho, &[sigma_pair(), sigma_pair(), sigma_pair()]).map_err(|e| e.to_string())?;
        let d = bx.max_abs_diff(&family_box(&FamilyParam::mermin(v).unwrap())).max(bx.max_abs_diff(&mermin_from_correlators(v)));
        worst = worst.max(d);
    }
    ensure(worst <= 1e-12, || format!("max deviation {worst:.3e}"))?;
    Ok(format!("V = 0.1..1.0, max deviation {worst:.1e}"))
}

fn born_qutrit() -> Outcome {
    let mut worst = 0.0f64;
    for v in [0.2, 0.5, 0.7] {
        let rho = paper_state(PaperState::QutritMixed, v).map_err(|e| e.to_string())?;
        let meas = [paper_measurements(PaperMeasurements::AppendixDPovm), sigma_pair(), sigma_pair()];
        let bx = born_tripartite(&rho, &meas).map_err(|e| e.to_string())?;
        worst = worst.max(bx.max_abs_diff(&mermin_from_correlators(v)));
    }
    ensure(worst <= 1e-12, || format!("max deviation {worst:.3e}"))?;
    Ok(format!("V = 0.2, 0.5, 0.7, max deviation {worst:.1e}"))
}

fn mermin_threshold() -> Outcome {
    let mut worst = 0.0f64;
    for k in 1..=20 {
        let v = k as f64 / 20.0;
        let bx = mermin(v);
        let r = mermin_value(&bx, 1e-12);
        worst = worst.max((r.value - 4.0 * v).abs()).max((mermin_oracle(&bx) - 4.0 * v).abs());
    }
    ensure(worst <= 1e-9, || format!("value deviates from 4V by {worst:.3e}"))?;
    let below = mermin_value(&mermin(0.5 - 1e-9), 1e-12).violated;
    let above = mermin_value(&mermin(0.5 + 1e-9), 1e-12).violated;
    ensure(!below && above, || format!("violation at 1/2 - 1e-9: {below}, at 1/2 + 1e-9: {above}"))?;
    Ok(format!("|value - 4V| <= {worst:.1e}; flips at 1/2"))
}

fn membership() -> Outcome {
    let lp = |v: f64, p: Polytope| lp_membership(&mermin(v), p, tribox::tol::LP).map_err(|e| e.to_string());
    let inside = lp(0.5 - 1e-3, Polytope::FullyLocal)?;
    let outside = lp(0.5 + 1e-3, Polytope::FullyLocal)?;
    ensure(inside.feasible && !outside.feasible, || format!("fully local at 0.499: {}, at 0.501: {}", inside.feasible, outside.feasible))?;
    let mix: f64 = inside.weights.iter().map(|w| w.1).sum();
    ensure((mix - 1.0).abs() <= 1e-7 && inside.max_residual <= 1e-7, || format!("weights sum {mix}, residual {:.3e}", inside.max_residual))?;
    let mut failed = Vec::new();
    for k in 1..=20 {
        let v = k as f64 / 20.0;
        let r = lp(v, Polytope::TwoWayLocal)?;
        if !r.feasible || r.max_residual > 1e-7 {
            failed.push(format!("{v:.2}"));
        }
    }
    ensure(failed.is_empty(), || format!("two-way local fails at V = {}", failed.join(", ")))?;
    Ok("fully local flips at 1/2; two-way local for V = 0.05..1.0".into())
}

fn d4_model() -> Outcome {
    let mut recon = 0.0f64;
    let mut pieces = 0.0f64;
    let mut vs: Vec<f64> = (1..=14).map(|k| k as f64 * 0.05).collect();
    vs.push(FRAC_1_SQRT_2);
    for v in vs {
        let m = build_d4_model(&FamilyParam::mermin(v).unwrap(), Cut::AvsBC).map_err(|e| format!("V = {v}: {e}"))?;
        ensure(m.weights.iter().all(|w| (w - 0.25).abs() <= 1e-15), || format!("weights {:?}", m.weights))?;
        for (l, r) in canonical_strategies().iter().enumerate() {
            ensure(m.responders[l].max_abs_diff(r) == 0.0, || format!("responder {l} is not deterministic strategy {l}"))?;
        }
        recon = recon.max(m.reconstruct().max_abs_diff(&mermin_from_correlators(v)));
        let report = verify_model(&m, &mermin(v), 1e-12);
        ensure(report.ok, || format!("V = {v}: {:?}", report.problems))?;
        for (l, p) in m.pieces.iter().enumerate() {
            let PieceKind::Quantum { state, measurements } = &p.kind else {
                return Err(format!("V = {v}: piece {l} is {}", p.kind.label()));
            };
            let born = born_bipartite(state, measurements).map_err(|e| e.to_string())?;
            pieces = pieces.max(born.max_abs_diff(&expected_piece(l, v))).max(p.table.max_abs_diff(&expected_piece(l, v)));
        }
    }
    ensure(recon <= 1e-12 && pieces <= 1e-12, || format!("reconstruction {recon:.3e}, pieces {pieces:.3e}"))?;
    let above = build_d4_model(&FamilyParam::mermin(FRAC_1_SQRT_2 + 1e-12).unwrap(), Cut::AvsBC);
    ensure(matches!(above, Err(tribox::Error::VisibilityRange { .. })), || format!("above 1/√2: {above:?}"))?;
    Ok(format!("reconstruction {recon:.1e}, Born tables {pieces:.1e}; range error above 1/√2"))
}

fn d3_threshold() -> Outcome {
    let opts = SearchOptions::default();
    let target = 1.0 / 5f64.sqrt();
    let status = |v: f64, cut: Cut| search_dimension(&mermin(v), cut, 3, &opts).map(|r| r.status);
    let mut flips = Vec::new();
    for cut in Cut::ALL {
        let at = bisect(0.3, 0.6, 1e-9, |v| status(v, cut) == Ok(Status::FeasibleWithQuantumPieces))?;
        ensure((at - target).abs() <= 1e-6, || format!("{cut}: flip at {at:.9}, expected {target:.9}"))?;
        ensure(status(target + 1e-6, cut) == Ok(Status::Infeasible), || format!("{cut}: not infeasible just above 1/√5"))?;
        flips.push(at);
    }
    let mut worst = 0.0f64;
    for v in [0.1, 0.3, target, 0.6] {
        let s = solve_conditionals(&mermin(v), Cut::AvsBC, &canonical_strategies(), &[0.25; 4], &[(0, 2)], 1e-7)
            .map_err(|e| e.to_string())?;
        ensure(s.consistent && s.nullity == 0, || format!("V = {v}: consistent {}, nullity {}", s.consistent, s.nullity))?;
        ensure(s.groups == vec![vec![0, 2], vec![1], vec![3]], || format!("groups {:?}", s.groups))?;
        for (got, want) in s.pieces.iter().zip(expected_merged(v)) {
            worst = worst.max(got.max_abs_diff(&want));
        }
    }
    ensure(worst <= 1e-12, || format!("merged tables deviate by {worst:.3e}"))?;
    Ok(format!("flip at {:.9} on every cut (1/√5 = {target:.9}); merged tables {worst:.1e}", flips[0]))
}

fn low_dimensions() -> Outcome {
    let opts = SearchOptions::default();
    let mut checked = 0;
    for k in 1..=14 {
        let v = k as f64 * 0.05;
        for cut in Cut::ALL {
            for d in [1, 2] {
                let r = search_dimension(&mermin(v), cut, d, &opts).map_err(|e| e.to_string())?;
                ensure(r.status == Status::Infeasible, || format!("V = {v:.2}, {cut}, d = {d}: {:?}", r.status))?;
                ensure(!r.trace.is_empty() && r.trace.iter().all(|c| !c.case.is_empty()), || format!("V = {v:.2}, {cut}, d = {d}: unnamed trace"))?;
                ensure(r.trace.iter().all(|c| !matches!(c.outcome, CaseOutcome::FeasibleQuantum | CaseOutcome::FeasibleAbstract { .. })), || {
                    format!("V = {v:.2}, {cut}, d = {d}: a feasible case in an infeasible trace")
                })?;
                if d == 1 {
                    ensure(r.trace.iter().any(|c| c.case == "product"), || "d = 1 trace has no product case".into())?;
                }
                checked += 1;
            }
        }
    }
    Ok(format!("{checked} searches infeasible with named refutations"))
}

fn genuine() -> Outcome {
    let opts = SearchOptions::default();
    for v in [0.1, 0.3, 0.5, 0.7] {
        let g = certify_genuine(&mermin(v), [2, 2, 2], None, &opts).map_err(|e| e.to_string())?;
        ensure(g.conclusion == GenuineConclusion::GenuineSuperBiUnsteerable, || format!("V = {v}: {:?}", g.conclusion))?;
    }
    let g = certify_genuine(&mermin(0.75), [2, 2, 2], None, &opts).map_err(|e| e.to_string())?;
    ensure(g.conclusion != GenuineConclusion::GenuineSuperBiUnsteerable, || "V = 0.75 certified genuine".into())?;
    Ok(format!("genuine for V = 0.1, 0.3, 0.5, 0.7; V = 0.75 {:?}", g.conclusion))
}

fn two_qubit_pieces() -> Outcome {
    let opts = SearchOptions::default();
    for lambda in 0..4 {
        for v in [0.1, 0.3, 0.5, 0.6, 0.7] {
            let q = conditional_box(lambda, v).map_err(|e| e.to_string())?;
            ensure(q.max_abs_diff(&expected_piece(lambda, v)) <= 1e-12, || format!("Q{lambda} table at V = {v}"))?;
            let c = certify_super_unsteerable(&q, 2, None, &opts).map_err(|e| e.to_string())?;
            if v <= 0.5 {
                ensure(c.conclusion == Conclusion::SuperUnsteerable, || format!("Q{lambda}, V = {v}: {:?}", c.conclusion))?;
            } else {
                let s = steering_chsh_value(&q, 1e-9);
                ensure(c.conclusion == Conclusion::NotSuper, || format!("Q{lambda}, V = {v}: {:?}", c.conclusion))?;
                ensure(s.violated && (s.value - 4.0 * v).abs() <= 1e-9, || format!("Q{lambda}, V = {v}: steering value {}", s.value))?;
            }
        }
    }
    Ok("super-unsteerable at V <= 1/2, steering value 4V above".into())
}

fn random_unit(rng: &mut ChaCha8Rng) -> [f64; 3] {
    loop {
        let v: [f64; 3] = std::array::from_fn(|_| rng.random_range(-1.0..1.0));
        let n = (v[0] * v[0] + v[1] * v[1] + v[2] * v[2]).sqrt();
        if n > 1e-3 && n <= 1.0 {
            return v.map(|c| c / n);
        }
    }
}

fn tlm() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(2024);
    let mut min_margin = f64::INFINITY;
    for trial in 0..200 {
        let amps: Vec<f64> = (0..8).map(|_| rng.random_range(-1.0..1.0)).collect();
        let rho = ket_state(&amps);
        let m: Vec<_> = (0..4).map(|_| axis_measurement(&random_unit(&mut rng))).collect();
        let bx = born_bipartite(&rho, &[[m[0].clone(), m[1].clone()], [m[2].clone(), m[3].clone()]]).map_err(|e| e.to_string())?;
        let c = bx.correlators();
        let corrs = [c[0][0], c[0][1], c[1][0], c[1][1]];
        let verdict = tlm_realizable(corrs, true, tribox::tol::TLM).map_err(|e| e.to_string())?;
        ensure(verdict != TlmVerdict::NotRealizable, || format!("trial {trial}: quantum correlators {corrs:?} rejected"))?;
        min_margin = min_margin.min(-tribox::quantum::tlm_margin(corrs));
    }
    let at = bisect(0.3, 0.6, 1e-10, |v| tlm_realizable([-2.0 * v, -v, -v, 2.0 * v], true, tribox::tol::TLM) == Ok(TlmVerdict::Realizable))?;
    let target = 1.0 / 5f64.sqrt();
    ensure((at - target).abs() <= 1e-6, || format!("flip at {at:.9}, expected {target:.9}"))?;
    Ok(format!("200 random states accepted (smallest slack {min_margin:.2e}); flip at {at:.9}"))
}

fn mermin_strength() -> Outcome {
    let mut parts = Vec::new();
    for v in [0.1, 0.5, 0.9] {
        let bx = mermin(v);
        let r = strength(&bx, StrengthKind::Mermin).map_err(|e| e.to_string())?;
        ensure(r.p > 1e-6, || format!("V = {v}: strength {}", r.p))?;
        ensure(r.reconstruction_error <= 1e-7, || format!("V = {v}: reconstruction error {:.3e}", r.reconstruction_error))?;
        let oracle = mermin_strength_oracle(&bx);
        ensure((r.p - oracle).abs() <= 1e-4, || format!("V = {v}: LP {} vs grid {oracle}", r.p))?;
        parts.push(format!("{v}: {:.6}", r.p));
    }
    Ok(format!("p = {} (grid oracle within 1e-4)", parts.join(", ")))
}

fn run_suite<S: proptest::strategy::Strategy>(
    name: &str,
    cases: u32,
    strategy: S,
    check: impl Fn(S::Value) -> Result<(), proptest::test_runner::TestCaseError>,
) -> Result<String, String>
where
    S::Value: std::fmt::Debug,
{
    let config = Config { cases, failure_persistence: None, ..Config::default() };
    let mut runner = TestRunner::new_with_rng(config, TestRng::deterministic_rng(RngAlgorithm::ChaCha));
    match runner.run(&strategy, check) {
        Ok(()) => Ok(format!("{name} x{cases}")),
        Err(TestError::Fail(why, input)) => Err(format!("{name}: {why} on {input:?}")),
        Err(TestError::Abort(why)) => Err(format!("{name}: aborted, {why}")),
    }
}

fn properties() -> Outcome {
    let suites = [
        run_suite("round-trip", 128, arb_box(), prop_round_trip)?,
        run_suite("no-signalling", 100, arb_family(), prop_ns_exact)?,
        run_suite("group action", 32, arb_box(), prop_group_action)?,
        run_suite("monotonicity", 24, (arb_family(), arb_cut()), |(f, cut)| prop_monotone(&family_box(&f), cut))?,
        run_suite("monotonicity (mixtures)", 24, (arb_box(), arb_cut()), |(b, cut)| prop_monotone(&b, cut))?,
        run_suite("re-verification", 24, (arb_family(), arb_cut()), |(f, cut)| prop_witnesses_verify(&family_box(&f), cut))?,
    ];
    Ok(suites.join(", "))
}

fn main() {
    let criteria: [(&str, fn() -> Outcome); 12] = [
        ("Born rule reproduces noisy Mermin from the mixed GHZ state", born_ghz),
        ("qutrit state with dichotomic POVMs reproduces noisy Mermin", born_qutrit),
        ("Mermin value is 4V and violation flips at V = 1/2", mermin_threshold),
        ("fully local iff V <= 1/2; two-way local throughout", membership),
        ("four-valued model reconstructs noisy Mermin for V <= 1/√2", d4_model),
        ("three hidden values suffice iff V <= 1/√5", d3_threshold),
        ("one or two hidden values never suffice", low_dimensions),
        ("genuine super-bi-unsteerability for V <= 1/√2", genuine),
        ("two-qubit pieces: super-unsteerable iff V <= 1/2", two_qubit_pieces),
        ("arcsine test is sound and flips at 1/√5", tlm),
        ("Mermin strength is positive and matches a grid oracle", mermin_strength),
        ("property suites", properties),
    ];
    let mut failed = 0;
    for (k, (name, run)) in criteria.iter().enumerate() {
        let start = Instant::now();
        let outcome = std::panic::catch_unwind(run).unwrap_or_else(|_| Err("panicked".into()));
        let secs = start.elapsed().as_secs_f64();
        match outcome {
            Ok(detail) => println!("PASS {:>2} {name}: {detail} [{secs:.2}s]", k + 1),
            Err(why) => {
                failed += 1;
                println!("FAIL {:>2} {name}: {why} [{secs:.2}s]", k + 1);
            }
        }
    }
    println!("acceptance: {} passed, {failed} failed", criteria.len() - failed);
    if failed > 0 {
        std::process::exit(1);
    }
}
