use super::analyze::{run_analysis, Analysis, AnalysisParams};
use super::output::{flatten, Format, Output};
use super::CliResult;
use crate::boxes::{family_box, json::AnyBox, Cut, FamilyKind, FamilyParam};
use clap::Args;
use rayon::prelude::*;
use serde::Serialize;
use serde_json::{json, Map, Value};

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SweepSpec {
    pub family: FamilyKind,
    pub v_from: f64,
    pub v_to: f64,
    pub steps: usize,
    pub targets: Vec<&'static str>,
}

impl SweepSpec {
    pub fn new(family: FamilyKind, v_from: f64, v_to: f64, steps: usize, targets: &[Analysis]) -> crate::Result<Self> {
        let in_range = |v: f64| v > 0.0 && v <= 1.0;
        if !(in_range(v_from) && in_range(v_to) && v_from < v_to) {
            return Err(crate::Error::Input(format!("need 0 < from < to <= 1, got {v_from} and {v_to}")));
        }
        if !(2..=10_000).contains(&steps) {
            return Err(crate::Error::Input(format!("steps must be 2..=10000, got {steps}")));
        }
        if targets.is_empty() {
            return Err(crate::Error::Input("no sweep targets".into()));
        }
        Ok(Self { family, v_from, v_to, steps, targets: targets.iter().map(|t| t.name()).collect() })
    }

    pub fn values(&self) -> Vec<f64> {
        let h = (self.v_to - self.v_from) / (self.steps - 1) as f64;
        (0..self.steps).map(|i| if i + 1 == self.steps { self.v_to } else { self.v_from + i as f64 * h }).collect()
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SweepRow {
    pub v: f64,
    pub results: Map<String, Value>,
}

/// Evaluates every target at every visibility, in parallel; rows come back
/// ordered by `V`.
pub fn run_sweep(spec: &SweepSpec, params: &AnalysisParams) -> CliResult<Vec<SweepRow>> {
    let targets: Vec<Analysis> = spec.targets.iter().map(|t| t.parse().expect("names come from Analysis")).collect();
    spec.values()
        .into_par_iter()
        .map(|v| {
            let bx = AnyBox::Tripartite(family_box(&FamilyParam::new(spec.family, v)?));
            let mut results = Map::new();
            for &t in &targets {
                results.insert(t.name().into(), run_analysis(t, &bx, params)?);
            }
            Ok(SweepRow { v, results })
        })
        .collect()
}

/// Scalar columns for one analysis result. Dimension verdicts collapse to
/// their status per cut and `d`.
pub(super) fn summary(name: &str, v: &Value) -> Map<String, Value> {
    let mut out = Map::new();
    let verdict_status = |prefix: &str, arr: &[Value], out: &mut Map<String, Value>| {
        for verdict in arr {
            if let (Some(d), Some(s)) = (verdict.get("d"), verdict.get("status")) {
                out.insert(format!("{prefix}.d{d}"), s.clone());
            }
        }
    };
    match v {
        Value::Array(arr) if name == "dimension" => verdict_status(name, arr, &mut out),
        Value::Object(cuts) if name == "dimension" => {
            for (cut, arr) in cuts {
                if let Value::Array(arr) = arr {
                    verdict_status(&format!("{name}.{cut}"), arr, &mut out);
                }
            }
        }
        _ => {
            for (k, x) in flatten(v) {
                out.insert(format!("{name}.{k}"), x);
            }
        }
    }
    out
}

#[derive(Debug, Args)]
pub struct SweepArgs {
    /// Box family to sweep.
    pub family: FamilyKind,
    /// First value of V.
    #[arg(long)]
    pub from: f64,
    /// Last value of V.
    #[arg(long)]
    pub to: f64,
    /// Number of evenly spaced points, endpoints included.
    #[arg(long)]
    pub steps: usize,
    /// Comma-separated analysis names, e.g. `mermin,membership-local`.
    #[arg(long, value_delimiter = ',', required = true)]
    pub targets: Vec<Analysis>,
    /// Restrict `dimension` to one `d`.
    #[arg(long)]
    pub d: Option<usize>,
    /// Cut such as `A|BC`.
    #[arg(long)]
    pub cut: Option<Cut>,
    /// Local dimension of the untrusted party.
    #[arg(long, default_value_t = 2)]
    pub qdim: usize,
}

pub(super) fn command(args: &SweepArgs, tol: f64, _format: Format) -> CliResult<Output> {
    let spec = SweepSpec::new(args.family, args.from, args.to, args.steps, &args.targets)?;
    let params = AnalysisParams { tol, d: args.d, cut: args.cut, qdims: [args.qdim; 3], ..AnalysisParams::default() };
    let rows = run_sweep(&spec, &params)?;
    let csv_rows = rows
        .iter()
        .map(|r| {
            let mut m = Map::new();
            m.insert("v".into(), r.v.into());
            for (name, v) in &r.results {
                m.extend(summary(name, v));
            }
            m
        })
        .collect();
    let mut out = Output::json(json!({ "spec": spec, "rows": rows }));
    out.rows = Some(csv_rows);
    Ok(out)
}
