use super::output::Output;
use super::quantum::{parse_measurements, MeasName};
use super::{read_input, CliError, CliResult};
use crate::boxes::{json, json::AnyBox, BipartiteBox, Cut, Pair, TripartiteBox};
use crate::decomposition::{
    bipartite_search_dimension, certify_genuine, certify_genuine_all_cuts, certify_super_bi_unsteerable,
    certify_super_unsteerable, search_dimension, QuantumRealization, SearchOptions,
};
use crate::inequalities::{
    chsh_value, lp_membership, mermin_value, steering_chsh_value, strength, svetlichny_value, Polytope, StrengthKind,
};
use crate::quantum::DensityMatrixJson;
use clap::{Args, ValueEnum};
use serde_json::{json, Map, Value};
use std::path::PathBuf;

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Analysis {
    Validate,
    Correlators,
    Mermin,
    Svetlichny,
    Chsh,
    SteeringChsh,
    MembershipLocal,
    MembershipTwoWay,
    StrengthMermin,
    StrengthSvetlichny,
    Dimension,
    Certify,
    CertifyGenuine,
}

impl Analysis {
    pub const ALL: [Analysis; 13] = [
        Analysis::Validate,
        Analysis::Correlators,
        Analysis::Mermin,
        Analysis::Svetlichny,
        Analysis::Chsh,
        Analysis::SteeringChsh,
        Analysis::MembershipLocal,
        Analysis::MembershipTwoWay,
        Analysis::StrengthMermin,
        Analysis::StrengthSvetlichny,
        Analysis::Dimension,
        Analysis::Certify,
        Analysis::CertifyGenuine,
    ];

    pub fn name(self) -> &'static str {
        match self {
            Analysis::Validate => "validate",
            Analysis::Correlators => "correlators",
            Analysis::Mermin => "mermin",
            Analysis::Svetlichny => "svetlichny",
            Analysis::Chsh => "chsh",
            Analysis::SteeringChsh => "steering-chsh",
            Analysis::MembershipLocal => "membership-local",
            Analysis::MembershipTwoWay => "membership-two-way",
            Analysis::StrengthMermin => "strength-mermin",
            Analysis::StrengthSvetlichny => "strength-svetlichny",
            Analysis::Dimension => "dimension",
            Analysis::Certify => "certify",
            Analysis::CertifyGenuine => "certify-genuine",
        }
    }
}

impl std::str::FromStr for Analysis {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, String> {
        Analysis::ALL.into_iter().find(|a| a.name() == s).ok_or_else(|| {
            format!(
                "unknown analysis `{s}`; expected one of {}",
                Analysis::ALL.iter().map(|a| a.name()).collect::<Vec<_>>().join(", ")
            )
        })
    }
}

/// Settings shared by every analysis.
#[derive(Debug, Clone)]
pub struct AnalysisParams {
    pub tol: f64,
    /// `None` runs `d = 1..=4`.
    pub d: Option<usize>,
    /// `None` means every cut for `dimension`, `A|BC` for `certify`.
    pub cut: Option<Cut>,
    pub qdims: [usize; 3],
    pub all_cuts: bool,
    pub realization: Option<QuantumRealization>,
}

impl Default for AnalysisParams {
    fn default() -> Self {
        Self { tol: crate::tol::PROB, d: None, cut: None, qdims: [2; 3], all_cuts: false, realization: None }
    }
}

fn to_value<T: serde::Serialize>(v: &T) -> Value {
    serde_json::to_value(v).expect("results serialise")
}

fn tripartite_only(a: Analysis) -> CliError {
    CliError::input(format!("analysis `{}` needs a tripartite box", a.name()))
}

fn dims(p: &AnalysisParams) -> CliResult<Vec<usize>> {
    match p.d {
        Some(d) if (1..=4).contains(&d) => Ok(vec![d]),
        Some(d) => Err(CliError::input(format!("--d must be 1..=4, got {d}"))),
        None => Ok(vec![1, 2, 3, 4]),
    }
}

fn pair_marginals<F: Fn(&BipartiteBox) -> Value>(bx: &TripartiteBox, f: F) -> Value {
    let mut m = Map::new();
    for pair in Pair::ALL {
        m.insert(format!("{pair:?}"), f(&bx.pair_marginal(pair, 0)));
    }
    Value::Object(m)
}

/// Runs one analysis and returns its JSON result.
pub fn run_analysis(a: Analysis, input: &AnyBox, p: &AnalysisParams) -> CliResult<Value> {
    let tol = p.tol;
    let opts = SearchOptions { tol, ..SearchOptions::default() };
    match (a, input) {
        (Analysis::Validate, AnyBox::Tripartite(b)) => Ok(to_value(&b.validate(tol))),
        (Analysis::Validate, AnyBox::Bipartite(b)) => Ok(to_value(&b.validate(tol))),
        (Analysis::Correlators, AnyBox::Tripartite(b)) => Ok(to_value(&b.correlators())),
        (Analysis::Correlators, AnyBox::Bipartite(b)) => Ok(json!({ "yz": b.correlators() })),
        (Analysis::Mermin, AnyBox::Tripartite(b)) => Ok(to_value(&mermin_value(b, tol))),
        (Analysis::Svetlichny, AnyBox::Tripartite(b)) => Ok(to_value(&svetlichny_value(b, tol))),
        (Analysis::Chsh, AnyBox::Bipartite(b)) => Ok(to_value(&chsh_value(b, tol))),
        (Analysis::Chsh, AnyBox::Tripartite(b)) => Ok(pair_marginals(b, |m| to_value(&chsh_value(m, tol)))),
        (Analysis::SteeringChsh, AnyBox::Bipartite(b)) => Ok(to_value(&steering_chsh_value(b, tol))),
        (Analysis::SteeringChsh, AnyBox::Tripartite(b)) => {
            Ok(pair_marginals(b, |m| to_value(&steering_chsh_value(m, tol))))
        }
        (Analysis::MembershipLocal, AnyBox::Tripartite(b)) => Ok(to_value(&lp_membership(b, Polytope::FullyLocal, tol)?)),
        (Analysis::MembershipTwoWay, AnyBox::Tripartite(b)) => {
            Ok(to_value(&lp_membership(b, Polytope::TwoWayLocal, tol)?))
        }
        (Analysis::StrengthMermin, AnyBox::Tripartite(b)) => Ok(to_value(&strength(b, StrengthKind::Mermin)?)),
        (Analysis::StrengthSvetlichny, AnyBox::Tripartite(b)) => {
            Ok(to_value(&strength(b, StrengthKind::Svetlichny)?))
        }
        (Analysis::Dimension, AnyBox::Tripartite(b)) => {
            let cuts = p.cut.map_or(Cut::ALL.to_vec(), |c| vec![c]);
            let mut m = Map::new();
            for cut in cuts {
                let vs = dims(p)?
                    .into_iter()
                    .map(|d| search_dimension(b, cut, d, &opts).map(|v| to_value(&v)))
                    .collect::<crate::Result<Vec<_>>>()?;
                m.insert(cut.label().into(), Value::Array(vs));
            }
            Ok(Value::Object(m))
        }
        (Analysis::Dimension, AnyBox::Bipartite(b)) => {
            let vs = dims(p)?
                .into_iter()
                .map(|d| bipartite_search_dimension(b, d, &opts).map(|v| to_value(&v)))
                .collect::<crate::Result<Vec<_>>>()?;
            Ok(Value::Array(vs))
        }
        (Analysis::Certify, AnyBox::Tripartite(b)) => {
            let cut = p.cut.unwrap_or(Cut::AvsBC);
            let qdim = p.qdims[cut.single().index()];
            Ok(to_value(&certify_super_bi_unsteerable(b, cut, qdim, p.realization.as_ref(), &opts)?))
        }
        (Analysis::Certify, AnyBox::Bipartite(b)) => Ok(to_value(&certify_super_unsteerable(b, p.qdims[0], None, &opts)?)),
        (Analysis::CertifyGenuine, AnyBox::Tripartite(b)) => {
            let g = if p.all_cuts {
                certify_genuine_all_cuts(b, p.qdims, p.realization.as_ref(), &opts)?
            } else {
                certify_genuine(b, p.qdims, p.realization.as_ref(), &opts)?
            };
            Ok(to_value(&g))
        }
        (a, AnyBox::Bipartite(_)) => Err(tripartite_only(a)),
    }
}

#[derive(Debug, Args)]
pub struct AnalyzeArgs {
    /// Box file in the JSON wire format; `-` reads stdin.
    pub file: PathBuf,
    /// Shape, normalisation and no-signalling checks.
    #[arg(long)]
    pub validate: bool,
    /// One-, two- and three-party correlators.
    #[arg(long)]
    pub correlators: bool,
    /// Mermin value against the local bound.
    #[arg(long)]
    pub mermin: bool,
    /// Svetlichny value against the two-way bound.
    #[arg(long)]
    pub svetlichny: bool,
    /// CHSH value (pair marginals for a tripartite box).
    #[arg(long)]
    pub chsh: bool,
    /// Steering CHSH with trusted sigma measurements.
    #[arg(long)]
    pub steering_chsh: bool,
    /// LP membership in the fully local polytope.
    #[arg(long)]
    pub membership_local: bool,
    /// LP membership in the two-way local polytope.
    #[arg(long)]
    pub membership_two_way: bool,
    /// Largest local weight leaving a Mermin-respecting residual.
    #[arg(long)]
    pub strength_mermin: bool,
    /// Largest local weight leaving a Svetlichny-respecting residual.
    #[arg(long)]
    pub strength_svetlichny: bool,
    /// Hidden-variable dimension search.
    #[arg(long)]
    pub dimension: bool,
    /// Super-(bi-)unsteerability across one cut.
    #[arg(long)]
    pub certify: bool,
    /// Super-bi-unsteerability across every cut.
    #[arg(long)]
    pub certify_genuine: bool,
    /// Every analysis that applies to the box.
    #[arg(long)]
    pub all: bool,
    /// Restrict `--dimension` to one `d`.
    #[arg(long)]
    pub d: Option<usize>,
    /// Cut such as `A|BC`.
    #[arg(long)]
    pub cut: Option<Cut>,
    /// Local dimension of the untrusted party.
    #[arg(long, default_value_t = 2)]
    pub qdim: usize,
    /// Per-party dimensions `A,B,C` for `--certify-genuine`; overrides `--qdim`.
    #[arg(long, value_delimiter = ',', num_args = 3)]
    pub qdims: Option<Vec<usize>>,
    /// Analyse all three cuts even for a permutation-invariant box.
    #[arg(long)]
    pub all_cuts: bool,
    /// Density matrix JSON of a state producing the box.
    #[arg(long)]
    pub witness_state: Option<PathBuf>,
    /// Measurements for the witness, one name per party.
    #[arg(long, value_delimiter = ',', default_values_t = [MeasName::SigmaPair, MeasName::SigmaPair, MeasName::SigmaPair])]
    pub witness_meas: Vec<MeasName>,
}

impl AnalyzeArgs {
    fn selected(&self, bipartite: bool) -> Vec<Analysis> {
        let flags = [
            (Analysis::Validate, self.validate),
            (Analysis::Correlators, self.correlators),
            (Analysis::Mermin, self.mermin),
            (Analysis::Svetlichny, self.svetlichny),
            (Analysis::Chsh, self.chsh),
            (Analysis::SteeringChsh, self.steering_chsh),
            (Analysis::MembershipLocal, self.membership_local),
            (Analysis::MembershipTwoWay, self.membership_two_way),
            (Analysis::StrengthMermin, self.strength_mermin),
            (Analysis::StrengthSvetlichny, self.strength_svetlichny),
            (Analysis::Dimension, self.dimension),
            (Analysis::Certify, self.certify),
            (Analysis::CertifyGenuine, self.certify_genuine),
        ];
        if self.all {
            let bi = [Analysis::Validate, Analysis::Correlators, Analysis::Chsh, Analysis::SteeringChsh, Analysis::Dimension, Analysis::Certify];
            return Analysis::ALL.into_iter().filter(|a| !bipartite || bi.contains(a)).collect();
        }
        let chosen: Vec<Analysis> = flags.iter().filter(|f| f.1).map(|f| f.0).collect();
        if chosen.is_empty() {
            vec![Analysis::Validate]
        } else {
            chosen
        }
    }
}

pub(super) fn command(args: &AnalyzeArgs, tol: f64) -> CliResult<Output> {
    let text = read_input(&args.file)?;
    let input = json::parse(&text)?;
    let (parties, label) = match &input {
        AnyBox::Tripartite(b) => (3, b.label().unwrap_or("").to_string()),
        AnyBox::Bipartite(_) => (2, serde_json::from_str::<json::BoxFile>(&text).map(|f| f.label).unwrap_or_default()),
    };
    let qdims = match &args.qdims {
        Some(q) => [q[0], q[1], q[2]],
        None => [args.qdim; 3],
    };
    let realization = match &args.witness_state {
        None => None,
        Some(path) => {
            let dm: DensityMatrixJson = serde_json::from_str(&read_input(path)?)
                .map_err(|e| CliError::input(format!("{}: {e}", path.display())))?;
            let state = dm.into_state(crate::tol::MAT)?;
            let meas = parse_measurements(&args.witness_meas)?;
            let [a, b, c]: [_; 3] =
                meas.try_into().map_err(|_| CliError::input("--witness-meas needs three names for a tripartite box"))?;
            let dims = [a[0].dim(), b[0].dim(), c[0].dim()];
            Some(QuantumRealization { state, dims, measurements: [a, b, c] })
        }
    };
    let params = AnalysisParams { tol, d: args.d, cut: args.cut, qdims, all_cuts: args.all_cuts, realization };
    let mut results = Map::new();
    for a in args.selected(parties == 2) {
        results.insert(a.name().into(), run_analysis(a, &input, &params)?);
    }
    let mut row = Map::new();
    row.insert("file".into(), args.file.display().to_string().into());
    row.insert("label".into(), label.clone().into());
    for (name, v) in &results {
        row.extend(super::sweep::summary(name, v));
    }
    let mut out = Output::json(json!({
        "input": { "file": args.file.display().to_string(), "parties": parties, "label": label },
        "tol": tol,
        "results": results,
    }));
    out.rows = Some(vec![row]);
    Ok(out)
}
