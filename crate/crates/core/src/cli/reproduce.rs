use super::output::{to_csv, Format, Output};
use super::{CliError, CliResult};
use crate::boxes::{
    deterministic_box, family_box, BipartiteBox, Cut, DeterministicSpec, FamilyParam, TripartiteBox,
};
use crate::decomposition::{
    build_d4_model, build_d4_qubit_model, canonical_strategies, certify_genuine, certify_super_unsteerable,
    conditional_box, search_dimension, solve_conditionals, verify_model, verify_qubit_model, Conclusion,
    GenuineConclusion, SearchOptions, Status,
};
use crate::inequalities::{lp_membership, mermin_value, steering_chsh_value, strength, svetlichny_value, Polytope, StrengthKind};
use crate::quantum::{born_tripartite, paper_measurements, paper_state, sigma_pair, tlm_realizable, PaperMeasurements, PaperState, TlmVerdict};
use clap::Args;
use rayon::prelude::*;
use serde::Serialize;
use serde_json::{Map, Value};
use std::f64::consts::FRAC_1_SQRT_2;
use std::path::PathBuf;

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct ReproduceOptions {
    /// Tolerance for reconstruction claims.
    pub tol: f64,
    /// Weight of a deterministic box mixed into every family box; nonzero
    /// values are a negative control.
    pub perturb: f64,
}

impl Default for ReproduceOptions {
    fn default() -> Self {
        Self { tol: 1e-12, perturb: 0.0 }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Claim {
    pub id: &'static str,
    pub statement: &'static str,
    pub passed: bool,
    pub measured: String,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ReproduceReport {
    pub options: ReproduceOptions,
    pub claims: Vec<Claim>,
    pub passed: usize,
    pub failed: Vec<&'static str>,
}

impl ReproduceReport {
    pub fn all_passed(&self) -> bool {
        self.failed.is_empty()
    }

    pub fn table(&self) -> String {
        let width = self.claims.iter().map(|c| c.id.len()).max().unwrap_or(0);
        let mut s = String::new();
        for c in &self.claims {
            s.push_str(&format!("{}  {:width$}  {}\n", if c.passed { "PASS" } else { "FAIL" }, c.id, c.measured));
        }
        s.push_str(&format!("{}/{} claims passed\n", self.passed, self.claims.len()));
        s
    }
}

struct Ctx {
    opts: ReproduceOptions,
}

impl Ctx {
    fn mermin(&self, v: f64) -> TripartiteBox {
        self.target(FamilyParam::mermin(v).expect("v in range"))
    }

    fn target(&self, f: FamilyParam) -> TripartiteBox {
        let bx = family_box(&f);
        if self.opts.perturb == 0.0 {
            bx
        } else {
            bx.mix(&deterministic_box(&DeterministicSpec::default()), 1.0 - self.opts.perturb)
        }
    }
}

/// Midpoint of the bracket where `pred` switches from true to false, or NaN
/// if the endpoints do not bracket a switch.
fn flip(mut lo: f64, mut hi: f64, width: f64, pred: impl Fn(f64) -> bool) -> f64 {
    if !pred(lo) || pred(hi) {
        return f64::NAN;
    }
    while hi - lo > width {
        let mid = 0.5 * (lo + hi);
        if pred(mid) {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    0.5 * (lo + hi)
}

fn grid(from: f64, to: f64, step: f64) -> Vec<f64> {
    let n = ((to - from) / step).round() as usize;
    (0..=n).map(|i| from + i as f64 * step).collect()
}

fn claim(id: &'static str, statement: &'static str, passed: bool, measured: String) -> Claim {
    Claim { id, statement, passed, measured }
}

fn born_ghz(cx: &Ctx) -> Claim {
    let meas = [sigma_pair(), sigma_pair(), sigma_pair()];
    let worst = grid(0.1, 1.0, 0.1)
        .into_iter()
        .map(|v| {
            let b = born_tripartite(&paper_state(PaperState::GhzMixed, v).expect("state"), &meas).expect("born");
            b.max_abs_diff(&cx.mermin(v))
        })
        .fold(0.0, f64::max);
    claim("born-ghz", "noisy GHZ with σ_y, -σ_x on every qubit gives noisy Mermin", worst <= cx.opts.tol, format!("max deviation {worst:.2e}"))
}

fn born_qutrit(cx: &Ctx) -> Claim {
    let meas = [paper_measurements(PaperMeasurements::AppendixDPovm), sigma_pair(), sigma_pair()];
    let worst = [0.2, 0.5, 0.7]
        .into_iter()
        .map(|v| {
            let b = born_tripartite(&paper_state(PaperState::QutritMixed, v).expect("state"), &meas).expect("born");
            b.max_abs_diff(&cx.mermin(v))
        })
        .fold(0.0, f64::max);
    claim("born-qutrit", "qutrit-qubit-qubit state with two POVMs gives noisy Mermin", worst <= cx.opts.tol, format!("max deviation {worst:.2e}"))
}

fn mermin_threshold(cx: &Ctx) -> Claim {
    let value_err = grid(0.1, 1.0, 0.1).into_iter().map(|v| (mermin_value(&cx.mermin(v), 1e-9).value - 4.0 * v).abs()).fold(0.0, f64::max);
    let at = flip(0.3, 0.7, 1e-12, |v| !mermin_value(&cx.mermin(v), 1e-12).violated);
    let ok = value_err <= 1e-9 && (at - 0.5).abs() <= 1e-9;
    claim("mermin-threshold", "Mermin value 4V, violated exactly above V = 1/2", ok, format!("|value - 4V| <= {value_err:.1e}; flip at {at:.12}"))
}

fn membership(cx: &Ctx) -> Claim {
    let local = |v: f64| lp_membership(&cx.mermin(v), Polytope::FullyLocal, 1e-9).map(|r| r.feasible);
    let below = local(0.5 - 1e-3);
    let above = local(0.5 + 1e-3);
    let two_way = grid(0.1, 1.0, 0.1)
        .into_iter()
        .all(|v| lp_membership(&cx.mermin(v), Polytope::TwoWayLocal, 1e-9).is_ok_and(|r| r.feasible));
    let ok = below == Ok(true) && above == Ok(false) && two_way;
    claim(
        "membership",
        "fully local iff V <= 1/2; two-way local for all V",
        ok,
        format!("local(0.499) = {below:?}, local(0.501) = {above:?}, two-way all = {two_way}"),
    )
}

fn steering_threshold(_cx: &Ctx) -> Claim {
    let at = flip(0.3, 0.7, 1e-12, |v| !steering_chsh_value(&conditional_box(0, v).expect("q0"), 1e-12).violated);
    claim("steering-chsh-threshold", "steering-CHSH of Q_0 equals 4V, violated above V = 1/2", (at - 0.5).abs() <= 1e-9, format!("flip at {at:.12}"))
}

fn svetlichny_threshold(cx: &Ctx) -> Claim {
    let at = flip(0.5, 0.9, 1e-12, |v| !svetlichny_value(&cx.target(FamilyParam::svetlichny(v).expect("v")), 1e-12).violated);
    claim("svetlichny-threshold", "noisy Svetlichny violates the Svetlichny inequality above 1/√2", (at - FRAC_1_SQRT_2).abs() <= 1e-9, format!("flip at {at:.12}"))
}

fn d4_model(cx: &Ctx) -> Claim {
    let mut vs = grid(0.05, 0.7, 0.05);
    vs.push(FRAC_1_SQRT_2);
    let mut worst: f64 = 0.0;
    let mut piece_worst: f64 = 0.0;
    for &v in &vs {
        let m = build_d4_model(&FamilyParam::mermin(v).expect("v"), Cut::AvsBC).expect("in range");
        worst = worst.max(verify_model(&m, &cx.mermin(v), cx.opts.tol).max_residual);
        for (l, p) in m.pieces.iter().enumerate() {
            piece_worst = piece_worst.max(p.table.max_abs_diff(&conditional_box(l, v).expect("q")));
        }
    }
    let at = flip(0.5, 0.9, 1e-14, |v| build_d4_model(&FamilyParam::mermin(v).expect("v"), Cut::AvsBC).is_ok());
    let ok = worst <= cx.opts.tol && piece_worst <= cx.opts.tol && (at - FRAC_1_SQRT_2).abs() <= 1e-12;
    claim(
        "d4-model",
        "four-valued model reproduces noisy Mermin for V <= 1/√2",
        ok,
        format!("reconstruction {worst:.2e}, pieces {piece_worst:.2e}, range ends at {at:.14}"),
    )
}

fn merged_tables(v: f64) -> [BipartiteBox; 3] {
    let table = |c: [[f64; 2]; 2]| BipartiteBox::from_fn(|y, z, b, cc| (1.0 + if b == cc { c[y][z] } else { -c[y][z] }) / 4.0);
    [table([[0.0, v], [v, 0.0]]), table([[-2.0 * v, -v], [-v, 2.0 * v]]), table([[2.0 * v, -v], [-v, -2.0 * v]])]
}

fn d3_threshold(cx: &Ctx) -> Claim {
    let o = SearchOptions::default();
    let feasible =
        |v: f64| search_dimension(&cx.mermin(v), Cut::AvsBC, 3, &o).is_ok_and(|r| r.status == Status::FeasibleWithQuantumPieces);
    let at = flip(0.3, 0.6, 1e-9, feasible);
    let mut table_err: f64 = 0.0;
    for v in [0.2, 0.4, 0.6] {
        match solve_conditionals(&cx.mermin(v), Cut::AvsBC, &canonical_strategies(), &[0.25; 4], &[(0, 2)], 1e-9) {
            Ok(s) => {
                for (p, e) in s.pieces.iter().zip(merged_tables(v)) {
                    table_err = table_err.max(p.max_abs_diff(&e));
                }
            }
            Err(_) => table_err = f64::INFINITY,
        }
    }
    let target = 1.0 / 5f64.sqrt();
    let ok = (at - target).abs() <= 1e-6 && table_err <= cx.opts.tol.max(1e-12);
    claim("d3-threshold", "three hidden values suffice iff V <= 1/√5", ok, format!("flip at {at:.9} (1/√5 = {target:.9}); merged tables {table_err:.2e}"))
}

fn low_dims(cx: &Ctx) -> Claim {
    let o = SearchOptions::default();
    let mut bad = Vec::new();
    for v in grid(0.05, 0.7, 0.05) {
        for cut in Cut::ALL {
            for d in [1, 2] {
                match search_dimension(&cx.mermin(v), cut, d, &o) {
                    Ok(r) if r.status == Status::Infeasible && !r.trace.is_empty() => {}
                    _ => bad.push(format!("V={v:.2} {cut} d={d}")),
                }
            }
        }
    }
    let measured = if bad.is_empty() { "14 V values x 3 cuts infeasible".into() } else { bad.join("; ") };
    claim("d2-d1-infeasible", "one or two hidden values never suffice for V > 0", bad.is_empty(), measured)
}

fn genuine(cx: &Ctx) -> Claim {
    let o = SearchOptions::default();
    let mut states = Vec::new();
    let mut ok = true;
    for v in [0.1, 0.3, 0.5, 0.7, 0.75] {
        let c = certify_genuine(&cx.mermin(v), [2, 2, 2], None, &o).map(|g| g.conclusion);
        let want_genuine = v <= FRAC_1_SQRT_2;
        ok &= match c {
            Ok(GenuineConclusion::GenuineSuperBiUnsteerable) => want_genuine,
            Ok(_) => !want_genuine,
            Err(_) => false,
        };
        states.push(format!("{v}: {}", c.map_or("error".into(), |c| format!("{c:?}"))));
    }
    claim("genuine", "noisy Mermin is genuinely super-bi-unsteerable for V <= 1/√2", ok, states.join(", "))
}

fn pair_super_unsteerable(cx: &Ctx) -> Claim {
    let o = SearchOptions::default();
    let mut ok = true;
    let mut parts = Vec::new();
    for v in [0.1, 0.3, 0.5, 0.6, 0.7] {
        let q = conditional_box(0, v).expect("q0");
        let c = certify_super_unsteerable(&q, 2, None, &o);
        let chsh = steering_chsh_value(&q, 1e-9);
        let good = match &c {
            Ok(c) if v <= 0.5 => c.conclusion == Conclusion::SuperUnsteerable,
            Ok(c) => c.conclusion == Conclusion::NotSuper && chsh.violated && (chsh.value - 4.0 * v).abs() < 1e-9,
            Err(_) => false,
        };
        ok &= good;
        parts.push(format!("{v}: {}", c.map_or("error".into(), |c| format!("{:?}", c.conclusion))));
    }
    let recon = [0.1, 0.3, 0.5]
        .into_iter()
        .map(|v| verify_qubit_model(&build_d4_qubit_model(v).expect("v"), &conditional_box(0, v).expect("q0"), cx.opts.tol).max_residual)
        .fold(0.0, f64::max);
    ok &= recon <= cx.opts.tol;
    claim("pair-super-unsteerable", "Q_0 is super-unsteerable for V <= 1/2 and steerable above", ok, format!("{}; qubit model {recon:.2e}", parts.join(", ")))
}

fn tlm_threshold(_cx: &Ctx) -> Claim {
    let at = flip(0.3, 0.6, 1e-10, |v| {
        tlm_realizable([-2.0 * v, -v, -v, 2.0 * v], true, crate::tol::TLM) == Ok(TlmVerdict::Realizable)
    });
    let target = 1.0 / 5f64.sqrt();
    claim("tlm-threshold", "arcsine test on (-2V, -V, -V, 2V) flips at 1/√5", (at - target).abs() <= 1e-6, format!("flip at {at:.10}"))
}

fn strength_positive(cx: &Ctx) -> Claim {
    let ps: Vec<String> = [0.1, 0.5, 0.9]
        .into_iter()
        .map(|v| strength(&cx.mermin(v), StrengthKind::Mermin).map_or(f64::NAN, |r| r.p))
        .map(|p| format!("{p:.6}"))
        .collect();
    let ok = ps.iter().all(|p| p.parse::<f64>().is_ok_and(|p| p > 1e-6));
    claim("mermin-strength", "Mermin strength is positive for every V > 0", ok, format!("p = {}", ps.join(", ")))
}

fn svetlichny_genuine(cx: &Ctx) -> Claim {
    let o = SearchOptions::default();
    let c = certify_genuine(&cx.target(FamilyParam::svetlichny(0.5).expect("v")), [2, 2, 2], None, &o).map(|g| g.conclusion);
    claim(
        "svetlichny-genuine",
        "noisy Svetlichny at V = 0.5 is genuinely super-bi-unsteerable",
        c == Ok(GenuineConclusion::GenuineSuperBiUnsteerable),
        format!("{c:?}"),
    )
}

type ClaimFn = fn(&Ctx) -> Claim;

const CLAIMS: [ClaimFn; 14] = [
    born_ghz,
    born_qutrit,
    mermin_threshold,
    membership,
    steering_threshold,
    svetlichny_threshold,
    d4_model,
    d3_threshold,
    low_dims,
    genuine,
    svetlichny_genuine,
    pair_super_unsteerable,
    tlm_threshold,
    strength_positive,
];

pub fn reproduce(opts: ReproduceOptions) -> ReproduceReport {
    let cx = Ctx { opts };
    let claims: Vec<Claim> = CLAIMS.par_iter().map(|f| f(&cx)).collect();
    let failed = claims.iter().filter(|c| !c.passed).map(|c| c.id).collect::<Vec<_>>();
    ReproduceReport { options: opts, passed: claims.len() - failed.len(), claims, failed }
}

#[derive(Debug, Args)]
pub struct ReproduceArgs {
    /// Directory for `report.json` and `summary.csv`.
    #[arg(long)]
    pub out_dir: Option<PathBuf>,
    /// Mix this weight of a deterministic box into every family box.
    #[arg(long, default_value_t = 0.0)]
    pub perturb: f64,
}

pub(super) fn command(args: &ReproduceArgs, tol: Option<f64>, _format: Format) -> CliResult<Output> {
    if !(0.0..=1.0).contains(&args.perturb) {
        return Err(CliError::input(format!("--perturb must lie in [0, 1], got {}", args.perturb)));
    }
    let opts = ReproduceOptions { tol: tol.unwrap_or(1e-12), perturb: args.perturb };
    let report = reproduce(opts);
    let json = serde_json::to_value(&report).expect("report serialises");
    let rows: Vec<Map<String, Value>> = report
        .claims
        .iter()
        .map(|c| match serde_json::to_value(c).expect("claim") {
            Value::Object(m) => m,
            _ => unreachable!(),
        })
        .collect();
    if let Some(dir) = &args.out_dir {
        let io = |e: std::io::Error| CliError::failure(format!("{}: {e}", dir.display()));
        std::fs::create_dir_all(dir).map_err(io)?;
        std::fs::write(dir.join("report.json"), serde_json::to_string_pretty(&json).expect("json") + "\n").map_err(io)?;
        std::fs::write(dir.join("summary.csv"), to_csv(&rows)).map_err(io)?;
    }
    let mut out = Output::json(json);
    out.text = Some(report.table());
    out.prefer_text = true;
    out.rows = Some(rows);
    out.failed_claims = report.failed.iter().map(|s| s.to_string()).collect();
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::f64::consts::SQRT_2;

    #[test]
    fn bisection_brackets() {
        let at = flip(0.0, 1.0, 1e-12, |v| v <= SQRT_2 / 2.0);
        assert!((at - FRAC_1_SQRT_2).abs() < 1e-12);
        assert!(flip(0.0, 1.0, 1e-3, |_| true).is_nan());
    }
}
