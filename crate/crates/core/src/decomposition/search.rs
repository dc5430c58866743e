use super::linear::{lp_free_weights, lp_groups, marginal_weights, solve_groups, target_rank, Problem};
use super::model::{realize_pair, realize_qubit, Model, PairAngles, Piece, PieceKind, PieceTable, Realization};
use super::canonical_strategies;
use crate::boxes::{canonical_perm, permute_parties, BipartiteBox, Cut, SingleBox, TripartiteBox};
use crate::error::{Error, Result};
use crate::quantum::SIGMA_PAIR_ANGLES;
use serde::Serialize;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Status {
    FeasibleWithQuantumPieces,
    FeasibleAbstractOnly,
    Infeasible,
    Unknown,
}

impl Status {
    pub fn is_feasible(self) -> bool {
        matches!(self, Status::FeasibleWithQuantumPieces | Status::FeasibleAbstractOnly)
    }
}

/// Why a case of the analysis succeeded or failed.
#[derive(Debug, Clone, PartialEq, Serialize)]
#[serde(tag = "outcome", rename_all = "snake_case")]
pub enum CaseOutcome {
    LinearInconsistency { residual: f64 },
    NegativeEntry { piece: usize, index: Vec<usize>, value: f64 },
    Signalling { piece: usize, deviation: f64 },
    RealizabilityFailure { piece: usize, detail: String },
    NoConsistentWeights { detail: String },
    /// The `(x, a)` by trusted-entry matrix has rank above the dimension.
    RankBound { rank: usize, max_rank: usize, singular_values: Vec<f64> },
    FeasibleQuantum,
    FeasibleAbstract { detail: String },
}

impl CaseOutcome {
    fn is_feasible(&self) -> bool {
        matches!(self, CaseOutcome::FeasibleQuantum | CaseOutcome::FeasibleAbstract { .. })
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct CaseTrace {
    pub case: String,
    #[serde(flatten)]
    pub outcome: CaseOutcome,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub nullity: Option<usize>,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct DimensionVerdict<T: PieceTable> {
    pub d: usize,
    pub status: Status,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub witness: Option<Model<T>>,
    pub trace: Vec<CaseTrace>,
    #[serde(skip_serializing_if = "Vec::is_empty")]
    pub notes: Vec<String>,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SearchOptions {
    pub tol: f64,
    /// Trusted equatorial measurement angles for two-party pieces.
    pub pair_angles: PairAngles,
    /// Trusted angles for single-qubit pieces.
    pub qubit_angles: [f64; 2],
}

impl Default for SearchOptions {
    fn default() -> Self {
        Self { tol: crate::tol::PROB, pair_angles: [SIGMA_PAIR_ANGLES, SIGMA_PAIR_ANGLES], qubit_angles: SIGMA_PAIR_ANGLES }
    }
}

pub(crate) trait SearchTable: PieceTable {
    fn from_values(v: Vec<f64>) -> Self;
    fn defect(&self, piece: usize, tol: f64) -> Option<CaseOutcome>;
    fn realize(&self, opts: &SearchOptions) -> Realization<Self::Meas>;
}

impl SearchTable for BipartiteBox {
    fn from_values(v: Vec<f64>) -> Self {
        BipartiteBox::from_entries(v).expect("16 entries")
    }

    fn defect(&self, piece: usize, tol: f64) -> Option<CaseOutcome> {
        let (i, &value) = self.entries().iter().enumerate().min_by(|a, b| a.1.total_cmp(b.1))?;
        if value < -tol {
            return Some(CaseOutcome::NegativeEntry {
                piece,
                index: vec![(i >> 3) & 1, (i >> 2) & 1, (i >> 1) & 1, i & 1],
                value,
            });
        }
        let r = self.validate(tol);
        if !r.no_signalling {
            let deviation = r
                .issues
                .iter()
                .filter_map(|i| match i {
                    crate::boxes::Issue::Signalling { deviation, .. } => Some(*deviation),
                    _ => None,
                })
                .fold(0.0, f64::max);
            return Some(CaseOutcome::Signalling { piece, deviation });
        }
        None
    }

    fn realize(&self, opts: &SearchOptions) -> Realization<Self::Meas> {
        realize_pair(self, opts.pair_angles, opts.tol)
    }
}

impl SearchTable for SingleBox {
    fn from_values(v: Vec<f64>) -> Self {
        SingleBox::from_entries(v).expect("4 entries")
    }

    fn defect(&self, piece: usize, tol: f64) -> Option<CaseOutcome> {
        let (i, &value) = self.entries().iter().enumerate().min_by(|a, b| a.1.total_cmp(b.1))?;
        (value < -tol).then(|| CaseOutcome::NegativeEntry { piece, index: vec![i >> 1, i & 1], value })
    }

    fn realize(&self, opts: &SearchOptions) -> Realization<Self::Meas> {
        realize_qubit(self, opts.qubit_angles, opts.tol)
    }
}

const NAMES: [&str; 4] = ["00", "01", "10", "11"];

fn group_label(groups: &[Vec<usize>]) -> String {
    let merged: Vec<String> = groups
        .iter()
        .filter(|g| g.len() > 1)
        .map(|g| g.iter().map(|l| format!("Q{l}")).collect::<Vec<_>>().join("="))
        .collect();
    format!("merge {}", merged.join(", "))
}

fn build_model<T: SearchTable>(
    strategies: &[SingleBox],
    weights: &[f64],
    groups: &[Vec<usize>],
    pieces: Vec<Piece<T, T::Meas>>,
) -> Model<T> {
    let mut ws = Vec::new();
    let mut rs = Vec::new();
    for g in groups {
        let w: f64 = g.iter().map(|&l| weights[l]).sum();
        let resp = if g.len() == 1 {
            strategies[g[0]].clone()
        } else {
            SingleBox::from_fn(|x, a| g.iter().map(|&l| weights[l] * strategies[l].get(x, a)).sum::<f64>() / w)
        };
        ws.push(w);
        rs.push(resp);
    }
    Model { cut: None, weights: ws, responders: rs, pieces }
}

/// One case: fixed strategies, weights and merge groups.
fn run_case<T: SearchTable>(
    p: &Problem,
    strategies: &[SingleBox],
    weights: &[f64],
    groups: &[Vec<usize>],
    case: String,
    opts: &SearchOptions,
) -> (CaseTrace, Option<Model<T>>) {
    let tol = opts.tol;
    let sol = solve_groups(p, strategies, weights, groups);
    let nullity = Some(sol.nullity);
    let trace = |outcome| CaseTrace { case: case.clone(), outcome, nullity };
    if sol.residual > crate::tol::INCONSISTENT {
        return (trace(CaseOutcome::LinearInconsistency { residual: sol.residual }), None);
    }
    let mut tables: Vec<T> = sol.pieces.into_iter().map(T::from_values).collect();
    let mut from_lp = false;
    if let Some(defect) = tables.iter().enumerate().find_map(|(k, t)| t.defect(k, tol)) {
        let alt = (sol.nullity > 0).then(|| lp_groups(p, strategies, weights, groups, crate::tol::LP)).flatten();
        match alt {
            Some(lp) => {
                tables = lp.into_iter().map(T::from_values).collect();
                from_lp = true;
            }
            None => return (trace(defect), None),
        }
    }
    let mut pieces = Vec::with_capacity(tables.len());
    let mut failure: Option<(usize, String)> = None;
    for (k, t) in tables.into_iter().enumerate() {
        let kind = match t.realize(opts) {
            Realization::Piece(kind) => kind,
            Realization::NotRealizable(detail) => {
                failure.get_or_insert((k, detail.clone()));
                PieceKind::Abstract { reason: detail }
            }
        };
        pieces.push(Piece { table: t, kind });
    }
    let unique = sol.nullity == 0 && !from_lp;
    if let Some((piece, detail)) = failure.clone() {
        if unique {
            return (trace(CaseOutcome::RealizabilityFailure { piece, detail }), None);
        }
    }
    let model = build_model(strategies, weights, groups, pieces);
    let outcome = if model.all_quantum() {
        CaseOutcome::FeasibleQuantum
    } else {
        let detail = match failure {
            Some((k, d)) => format!("solution not unique; piece {k} of the chosen solution: {d}"),
            None => "pieces are valid no-signalling tables of undecided realizability".into(),
        };
        CaseOutcome::FeasibleAbstract { detail }
    };
    (trace(outcome), Some(model))
}

/// Set partitions of `{0, 1, 2, 3}` into `k` blocks, blocks in order of
/// their smallest element.
fn partitions(k: usize) -> Vec<Vec<Vec<usize>>> {
    let mut out = Vec::new();
    // Restricted growth strings of length 4.
    for code in 0..256usize {
        let rgs: Vec<usize> = (0..4).map(|i| (code >> (2 * i)) & 3).collect();
        let mut ok = rgs[0] == 0;
        let mut max = 0;
        for &v in &rgs[1..] {
            if v > max + 1 {
                ok = false;
            }
            max = max.max(v);
        }
        if ok && max + 1 == k {
            out.push((0..k).map(|b| (0..4).filter(|&i| rgs[i] == b).collect()).collect());
        }
    }
    out
}

fn subsets(k: usize) -> Vec<Vec<usize>> {
    (0..16usize).filter(|m| m.count_ones() as usize == k).map(|m| (0..4).filter(|i| m & (1 << i) != 0).collect()).collect()
}

fn decide<T: SearchTable>(d: usize, cases: Vec<(CaseTrace, Option<Model<T>>)>, refuted: bool, mut notes: Vec<String>) -> DimensionVerdict<T> {
    let mut trace = Vec::new();
    let mut quantum = None;
    let mut abstract_ = None;
    for (t, m) in cases {
        match (&t.outcome, m) {
            (CaseOutcome::FeasibleQuantum, Some(m)) if quantum.is_none() => quantum = Some(m),
            (CaseOutcome::FeasibleAbstract { .. }, Some(m)) if abstract_.is_none() => abstract_ = Some(m),
            _ => {}
        }
        trace.push(t);
    }
    let (status, witness) = if let Some(m) = quantum {
        (Status::FeasibleWithQuantumPieces, Some(m))
    } else if let Some(m) = abstract_ {
        (Status::FeasibleAbstractOnly, Some(m))
    } else if refuted {
        (Status::Infeasible, None)
    } else {
        notes.push("case analysis is exhaustive only for uniform untrusted marginals".into());
        (Status::Unknown, None)
    };
    DimensionVerdict { d, status, witness, trace, notes }
}

fn strength_of(s: Status) -> u8 {
    match s {
        Status::FeasibleWithQuantumPieces => 3,
        Status::FeasibleAbstractOnly => 2,
        Status::Unknown => 1,
        Status::Infeasible => 0,
    }
}

/// The case analysis at `d`, upgraded by a lifted witness from `d - 1` when
/// that one is stronger.
fn search_problem<T: SearchTable>(p: &Problem, d: usize, opts: &SearchOptions) -> Result<DimensionVerdict<T>> {
    if !(1..=4).contains(&d) {
        return Err(Error::Input(format!("hidden-variable dimension must be 1..=4, got {d}")));
    }
    let mut v = search_cases::<T>(p, d, opts)?;
    if d > 1 && v.status != Status::FeasibleWithQuantumPieces {
        let lower = search_problem::<T>(p, d - 1, opts)?;
        if strength_of(lower.status) > strength_of(v.status) {
            if let Some(w) = lower.witness {
                v.status = lower.status;
                v.witness = Some(w.lift());
                v.notes.push(format!("witness lifted from d = {}", d - 1));
            }
        }
    }
    Ok(v)
}

fn search_cases<T: SearchTable>(p: &Problem, d: usize, opts: &SearchOptions) -> Result<DimensionVerdict<T>> {
    let tol = opts.tol;
    let marginal = p.untrusted_marginal();
    let uniform = marginal.is_uniform(tol.max(1e-9));
    let st = canonical_strategies();
    let mut cases = Vec::new();
    let mut notes = Vec::new();

    match d {
        1 => {
            let (t, m) = run_case::<T>(p, &[marginal], &[1.0], &[vec![0]], "product".into(), opts);
            let refuted = !t.outcome.is_feasible();
            cases.push((t, m));
            return Ok(decide(1, cases, refuted, notes));
        }
        2 | 3 => {
            let (rank, sv) = target_rank(p, 1e-9);
            let rank_refutes = rank > d;
            if rank_refutes {
                cases.push((
                    CaseTrace {
                        case: "rank certificate".into(),
                        outcome: CaseOutcome::RankBound { rank, max_rank: d, singular_values: sv },
                        nullity: None,
                    },
                    None,
                ));
            }
            for set in subsets(d) {
                let label = format!(
                    "deterministic {} {{{}}}",
                    if d == 2 { "pair" } else { "triple" },
                    set.iter().map(|&l| NAMES[l]).collect::<Vec<_>>().join(",")
                );
                let strategies: Vec<SingleBox> = set.iter().map(|&l| st[l].clone()).collect();
                match marginal_weights(&marginal, &strategies, 1e-9) {
                    Some(w) if w.iter().all(|&x| x > 1e-9) => {
                        let groups: Vec<Vec<usize>> = (0..d).map(|l| vec![l]).collect();
                        cases.push(run_case::<T>(p, &strategies, &w, &groups, label, opts));
                    }
                    Some(w) => cases.push((
                        CaseTrace {
                            case: label,
                            outcome: CaseOutcome::NoConsistentWeights {
                                detail: format!(
                                    "marginals force weights {:.3?}, leaving a hidden value unused",
                                    w.iter().map(|x| x + 0.0).collect::<Vec<_>>()
                                ),
                            },
                            nullity: None,
                        },
                        None,
                    )),
                    None => cases.push((
                        CaseTrace {
                            case: label,
                            outcome: CaseOutcome::NoConsistentWeights { detail: "no weights reproduce the marginals".into() },
                            nullity: None,
                        },
                        None,
                    )),
                }
            }
            if uniform {
                notes.push("merge cases use weights 1/4 on the four deterministic strategies".into());
                for groups in partitions(d) {
                    let label = group_label(&groups);
                    cases.push(run_case::<T>(p, &st, &[0.25; 4], &groups, label, opts));
                }
            }
            let refuted = rank_refutes || uniform;
            return Ok(decide(d, cases, refuted, notes));
        }
        _ => {}
    }

    // d = 4.
    if uniform {
        notes.push("weights 1/4 chosen for the canonical assignment; uniform marginals leave one weight parameter free".into());
        let groups: Vec<Vec<usize>> = (0..4).map(|l| vec![l]).collect();
        let (t, m) = run_case::<T>(p, &st, &[0.25; 4], &groups, "canonical assignment".into(), opts);
        let done = t.outcome == CaseOutcome::FeasibleQuantum;
        cases.push((t, m));
        if done {
            return Ok(decide(4, cases, true, notes));
        }
    }
    match lp_free_weights(p, &st, crate::tol::LP) {
        None => {
            cases.push((
                CaseTrace {
                    case: "free-weight linear program".into(),
                    outcome: CaseOutcome::LinearInconsistency { residual: f64::NAN },
                    nullity: None,
                },
                None,
            ));
            notes.push("no decomposition with no-signalling pieces exists at any dimension".into());
        }
        Some((w, pieces)) => {
            let keep: Vec<usize> = (0..4).filter(|&l| w[l] > 1e-12).collect();
            let mut ps = Vec::new();
            let mut failure = None;
            for &l in &keep {
                let t = T::from_values(pieces[l].clone());
                let kind = match t.realize(opts) {
                    Realization::Piece(k) => k,
                    Realization::NotRealizable(d) => {
                        failure.get_or_insert(d.clone());
                        PieceKind::Abstract { reason: d }
                    }
                };
                ps.push(Piece { table: t, kind });
            }
            let strategies: Vec<SingleBox> = keep.iter().map(|&l| st[l].clone()).collect();
            let weights: Vec<f64> = keep.iter().map(|&l| w[l]).collect();
            let groups: Vec<Vec<usize>> = (0..keep.len()).map(|l| vec![l]).collect();
            let mut model = build_model(&strategies, &weights, &groups, ps);
            // Strategies with zero weight were dropped; split hidden values to refill.
            while model.dimension() < 4 {
                model = model.lift();
            }
            let outcome = if model.all_quantum() {
                CaseOutcome::FeasibleQuantum
            } else {
                CaseOutcome::FeasibleAbstract {
                    detail: failure.unwrap_or_else(|| "pieces of undecided realizability".into()),
                }
            };
            cases.push((CaseTrace { case: "free-weight linear program".into(), outcome, nullity: None }, Some(model)));
        }
    }
    Ok(decide(4, cases, true, notes))
}

/// Looks for an LHV-LHS model across `cut` with `d` hidden values.
pub fn search_dimension(bx: &TripartiteBox, cut: Cut, d: usize, opts: &SearchOptions) -> Result<DimensionVerdict<BipartiteBox>> {
    if !bx.validate(opts.tol.max(1e-9)).is_valid() {
        return Err(Error::Input("box is not a valid no-signalling box".into()));
    }
    let canonical = permute_parties(bx, canonical_perm(cut));
    let mut v = search_problem::<BipartiteBox>(&Problem::tripartite(&canonical), d, opts)?;
    if let Some(m) = v.witness.as_mut() {
        m.cut = Some(cut);
    }
    Ok(v)
}

/// Same analysis for a bipartite box: LHV for the first party, a single
/// qubit LHS for the second.
pub fn bipartite_search_dimension(bx: &BipartiteBox, d: usize, opts: &SearchOptions) -> Result<DimensionVerdict<SingleBox>> {
    if !bx.validate(opts.tol.max(1e-9)).is_valid() {
        return Err(Error::Input("box is not a valid no-signalling box".into()));
    }
    search_problem::<SingleBox>(&Problem::bipartite(bx), d, opts)
}

/// Pieces solving `Σ_λ r_λ P_λ(a|x) Q_λ(bc|yz) = P(abc|xyz)`, with pieces
/// `i` and `j` identified for every `(i, j)` in `equal`.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ConditionalSolution {
    /// One table per group of identified pieces, groups ordered by their
    /// smallest member.
    pub pieces: Vec<BipartiteBox>,
    pub groups: Vec<Vec<usize>>,
    pub residual: f64,
    pub consistent: bool,
    /// Dimension of the solution set; zero means the pieces are unique.
    pub nullity: usize,
    pub negative_entries: Vec<(usize, [usize; 4], f64)>,
}

pub fn solve_conditionals(
    bx: &TripartiteBox,
    cut: Cut,
    strategies: &[SingleBox],
    weights: &[f64],
    equal: &[(usize, usize)],
    tol: f64,
) -> Result<ConditionalSolution> {
    super::model::require_len(weights.len(), strategies.len())?;
    let n = strategies.len();
    if let Some(&(i, j)) = equal.iter().find(|(i, j)| *i >= n || *j >= n) {
        return Err(Error::Input(format!("constraint Q{i}=Q{j} refers to a missing strategy")));
    }
    for i in 0..n {
        for j in (i + 1)..n {
            if strategies[i].max_abs_diff(&strategies[j]) < 1e-12 {
                return Err(Error::Input(format!("strategies {i} and {j} coincide")));
            }
        }
    }
    let mut parent: Vec<usize> = (0..n).collect();
    fn find(p: &mut [usize], i: usize) -> usize {
        if p[i] != i {
            let r = find(p, p[i]);
            p[i] = r;
        }
        p[i]
    }
    for &(i, j) in equal {
        let (a, b) = (find(&mut parent, i), find(&mut parent, j));
        parent[a.max(b)] = a.min(b);
    }
    let mut groups: Vec<Vec<usize>> = Vec::new();
    for i in 0..n {
        let r = find(&mut parent, i);
        match groups.iter_mut().find(|g| g[0] == r) {
            Some(g) => g.push(i),
            None => groups.push(vec![i]),
        }
    }
    let canonical = permute_parties(bx, canonical_perm(cut));
    let p = Problem::tripartite(&canonical);
    let sol = solve_groups(&p, strategies, weights, &groups);
    let pieces: Vec<BipartiteBox> = sol.pieces.iter().map(|v| BipartiteBox::from_entries(v.clone()).expect("16")).collect();
    let mut negative_entries = Vec::new();
    for (k, t) in pieces.iter().enumerate() {
        for (i, &v) in t.entries().iter().enumerate() {
            if v < -tol {
                negative_entries.push((k, [(i >> 3) & 1, (i >> 2) & 1, (i >> 1) & 1, i & 1], v));
            }
        }
    }
    Ok(ConditionalSolution {
        pieces,
        groups,
        residual: sol.residual,
        consistent: sol.residual <= crate::tol::INCONSISTENT,
        nullity: sol.nullity,
        negative_entries,
    })
}
