use crate::boxes::{canonical_perm, permute_parties, BipartiteBox, Cut, SingleBox, TripartiteBox};
use crate::error::{Error, Result};
use crate::quantum::{
    born_bipartite, born_single, phased_ket, tlm_realizable, DensityMatrix, DichotomicMeasurement, MeasurementPair,
    TlmVerdict,
};
use nalgebra::{Matrix2, Matrix4x2, Vector2, Vector4};
use serde::{Serialize, Serializer};

/// Trusted equatorial measurement angles `α` of `cos α σx + sin α σy`.
pub type PairAngles = [[f64; 2]; 2];

/// How a piece of the trusted side is accounted for.
#[derive(Debug, Clone, PartialEq)]
pub enum PieceKind<M> {
    /// An explicit state whose Born table under `measurements` is the piece.
    Quantum { state: DensityMatrix, measurements: M },
    /// Correlators pass the arcsine test, no explicit state attached.
    TlmCertified,
    /// A valid no-signalling table of undecided quantum realizability.
    Abstract { reason: String },
}

impl<M> PieceKind<M> {
    pub fn is_quantum(&self) -> bool {
        matches!(self, PieceKind::Quantum { .. } | PieceKind::TlmCertified)
    }

    pub fn label(&self) -> &'static str {
        match self {
            PieceKind::Quantum { .. } => "quantum",
            PieceKind::TlmCertified => "tlm_certified",
            PieceKind::Abstract { .. } => "abstract",
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct Piece<T, M> {
    pub table: T,
    pub kind: PieceKind<M>,
}

/// Tables a piece can hold.
pub trait PieceTable: Clone + std::fmt::Debug + PartialEq {
    type Meas: Clone + std::fmt::Debug + PartialEq;
    fn values(&self) -> &[f64];
    fn born(state: &DensityMatrix, meas: &Self::Meas) -> Result<Self>;
}

impl PieceTable for BipartiteBox {
    type Meas = [MeasurementPair; 2];
    fn values(&self) -> &[f64] {
        self.entries()
    }
    fn born(state: &DensityMatrix, meas: &Self::Meas) -> Result<Self> {
        born_bipartite(state, meas)
    }
}

impl PieceTable for SingleBox {
    type Meas = MeasurementPair;
    fn values(&self) -> &[f64] {
        self.entries()
    }
    fn born(state: &DensityMatrix, meas: &Self::Meas) -> Result<Self> {
        born_single(state, meas)
    }
}

/// `P(a|x, trusted) = Σ_λ r_λ P_λ(a|x) Q_λ`.
#[derive(Debug, Clone, PartialEq)]
pub struct Model<T: PieceTable> {
    /// Bipartition the model is written across; `None` for bipartite boxes.
    pub cut: Option<Cut>,
    pub weights: Vec<f64>,
    pub responders: Vec<SingleBox>,
    pub pieces: Vec<Piece<T, T::Meas>>,
}

/// LHV for the single party, LHS for the pair.
pub type LhvLhsModel = Model<BipartiteBox>;
/// LHV for the first party, a single-qubit LHS for the second.
pub type QubitLhsModel = Model<SingleBox>;

impl<T: PieceTable> Model<T> {
    pub fn dimension(&self) -> usize {
        self.weights.len()
    }

    pub fn all_quantum(&self) -> bool {
        self.pieces.iter().all(|p| p.kind.is_quantum())
    }

    /// The same model written with one more hidden value: the first `λ` is
    /// split into two halves.
    pub fn lift(&self) -> Self {
        let mut m = self.clone();
        m.weights[0] /= 2.0;
        m.weights.push(m.weights[0]);
        m.responders.push(m.responders[0].clone());
        m.pieces.push(m.pieces[0].clone());
        m
    }

    /// Reconstructed entries `R[(x, a)][j]`.
    fn mixture(&self) -> Vec<Vec<f64>> {
        let m = self.pieces.first().map_or(0, |p| p.table.values().len());
        let mut out = vec![vec![0.0; m]; 4];
        for ((w, r), p) in self.weights.iter().zip(&self.responders).zip(&self.pieces) {
            for x in 0..2 {
                for a in 0..2 {
                    let f = w * r.get(x, a);
                    for (o, q) in out[2 * x + a].iter_mut().zip(p.table.values()) {
                        *o += f * q;
                    }
                }
            }
        }
        out
    }
}

impl LhvLhsModel {
    /// The tripartite box this model produces, in the original party order.
    pub fn reconstruct(&self) -> TripartiteBox {
        let mix = self.mixture();
        let canonical = TripartiteBox::from_fn(|x, y, z, a, b, c| mix[2 * x + a][crate::boxes::bi_index(y, z, b, c)]);
        match self.cut {
            Some(cut) if cut != Cut::AvsBC => permute_parties(&canonical, invert(canonical_perm(cut))),
            _ => canonical,
        }
    }
}

impl QubitLhsModel {
    pub fn reconstruct(&self) -> BipartiteBox {
        let mix = self.mixture();
        BipartiteBox::from_fn(|y, z, b, c| mix[2 * y + b][crate::boxes::single_index(z, c)])
    }
}

pub(crate) fn invert(perm: [usize; 3]) -> [usize; 3] {
    let mut inv = [0; 3];
    for (i, &p) in perm.iter().enumerate() {
        inv[p] = i;
    }
    inv
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct VerifyReport {
    pub ok: bool,
    pub max_residual: f64,
    /// Flat index of the worst entry of the reconstruction.
    pub worst_index: usize,
    pub weights_ok: bool,
    /// `(λ, max |Born table − recorded table|)` for each quantum piece.
    pub piece_mismatch: Vec<(usize, f64)>,
    pub problems: Vec<String>,
}

fn verify_common<T: PieceTable>(model: &Model<T>, recon: &[f64], target: &[f64], tol: f64) -> VerifyReport {
    let mut problems = Vec::new();
    let weights_ok = model.weights.iter().all(|&w| w >= -tol)
        && (model.weights.iter().sum::<f64>() - 1.0).abs() <= tol
        && model.weights.len() == model.responders.len()
        && model.weights.len() == model.pieces.len();
    if !weights_ok {
        problems.push("weights are not a probability vector over the hidden values".into());
    }
    let (worst_index, max_residual) = recon
        .iter()
        .zip(target)
        .map(|(a, b)| (a - b).abs())
        .enumerate()
        .fold((0, 0.0), |best, (i, d)| if d > best.1 { (i, d) } else { best });
    if max_residual > tol {
        problems.push(format!("reconstruction differs by {max_residual:.3e} at entry {worst_index}"));
    }
    let mut piece_mismatch = Vec::new();
    for (l, p) in model.pieces.iter().enumerate() {
        if let PieceKind::Quantum { state, measurements } = &p.kind {
            match T::born(state, measurements) {
                Ok(t) => {
                    let d = t.values().iter().zip(p.table.values()).map(|(a, b)| (a - b).abs()).fold(0.0, f64::max);
                    if d > tol {
                        problems.push(format!("piece {l}: Born table differs by {d:.3e}"));
                    }
                    piece_mismatch.push((l, d));
                }
                Err(e) => {
                    problems.push(format!("piece {l}: {e}"));
                    piece_mismatch.push((l, f64::INFINITY));
                }
            }
        }
    }
    VerifyReport { ok: problems.is_empty(), max_residual, worst_index, weights_ok, piece_mismatch, problems }
}

/// Reconstructs the model, compares it with `target` and re-derives every
/// quantum piece by the Born rule.
pub fn verify_model(model: &LhvLhsModel, target: &TripartiteBox, tol: f64) -> VerifyReport {
    verify_common(model, model.reconstruct().entries(), target.entries(), tol)
}

pub fn verify_qubit_model(model: &QubitLhsModel, target: &BipartiteBox, tol: f64) -> VerifyReport {
    verify_common(model, model.reconstruct().entries(), target.entries(), tol)
}

/// Outcome of trying to account for one piece quantumly.
#[derive(Debug, Clone, PartialEq)]
pub enum Realization<M> {
    Piece(PieceKind<M>),
    NotRealizable(String),
}

fn equatorial_pair(angles: [f64; 2]) -> MeasurementPair {
    [DichotomicMeasurement::equatorial(angles[0]), DichotomicMeasurement::equatorial(angles[1])]
}

/// Fits `c_yz = sin 2θ cos(φ − α_y − β_z)` to a piece with uniform marginals.
/// Returns `(sin 2θ, φ, residual)`.
pub fn fit_equatorial_pair(corrs: [[f64; 2]; 2], angles: PairAngles) -> (f64, f64, f64) {
    let g = |y: usize, z: usize| angles[0][y] + angles[1][z];
    let a = Matrix4x2::from_fn(|i, k| {
        let t = g(i >> 1, i & 1);
        if k == 0 {
            t.cos()
        } else {
            t.sin()
        }
    });
    let b = Vector4::from_fn(|i, _| corrs[i >> 1][i & 1]);
    let ata: Matrix2<f64> = a.transpose() * a;
    let sol: Vector2<f64> = ata.try_inverse().map_or(Vector2::zeros(), |inv| inv * a.transpose() * b);
    let residual = (a * sol - b).amax();
    (sol.norm(), sol[1].atan2(sol[0]), residual)
}

/// Decides whether a two-party piece is quantum for the trusted equatorial
/// measurements `angles`.
pub fn realize_pair(table: &BipartiteBox, angles: PairAngles, tol: f64) -> Realization<[MeasurementPair; 2]> {
    let meas = [equatorial_pair(angles[0]), equatorial_pair(angles[1])];
    let corrs = table.correlators();
    if table.has_uniform_marginals(tol) {
        let (s, phi, res) = fit_equatorial_pair(corrs, angles);
        if res <= tol && s <= 1.0 + tol {
            let theta = s.min(1.0).asin() / 2.0;
            if let Ok(state) = DensityMatrix::pure(&phased_ket(2, theta, phi)) {
                if born_bipartite(&state, &meas).is_ok_and(|t| t.max_abs_diff(table) <= tol) {
                    return Realization::Piece(PieceKind::Quantum { state, measurements: meas });
                }
            }
        }
        let flat = [corrs[0][0], corrs[0][1], corrs[1][0], corrs[1][1]];
        return match tlm_realizable(flat, true, crate::tol::TLM.max(tol)) {
            Ok(TlmVerdict::Realizable) => Realization::Piece(PieceKind::TlmCertified),
            Ok(_) => Realization::NotRealizable(format!(
                "arcsine test fails for correlators ({:.6}, {:.6}, {:.6}, {:.6})",
                flat[0], flat[1], flat[2], flat[3]
            )),
            Err(e) => Realization::NotRealizable(e.to_string()),
        };
    }
    if table.is_product(tol) {
        let (mb, mc) = (table.first_marginal(), table.second_marginal());
        if let (Realization::Piece(PieceKind::Quantum { state: sb, .. }), Realization::Piece(PieceKind::Quantum { state: sc, .. })) =
            (realize_qubit(&mb, angles[0], tol), realize_qubit(&mc, angles[1], tol))
        {
            let state = sb.tensor(&sc);
            return Realization::Piece(PieceKind::Quantum { state, measurements: meas });
        }
    }
    Realization::Piece(PieceKind::Abstract { reason: "biased marginals: arcsine test does not apply".into() })
}

/// Bloch vector in the equatorial plane with `⟨n(α_z)⟩ = e_z`; realizable iff
/// its length is at most one.
pub fn realize_qubit(table: &SingleBox, angles: [f64; 2], tol: f64) -> Realization<MeasurementPair> {
    let e = table.expectations();
    let m = Matrix2::new(angles[0].cos(), angles[0].sin(), angles[1].cos(), angles[1].sin());
    let Some(inv) = m.try_inverse().filter(|_| m.determinant().abs() > 1e-9) else {
        return Realization::Piece(PieceKind::Abstract { reason: "trusted measurements are parallel".into() });
    };
    let r = inv * Vector2::new(e[0], e[1]);
    let len = r.norm();
    if len > 1.0 + tol {
        return Realization::NotRealizable(format!("Bloch vector of length {len:.6} > 1"));
    }
    let scale = if len > 1.0 { 1.0 / len } else { 1.0 };
    match DensityMatrix::from_bloch([r[0] * scale, r[1] * scale, 0.0]) {
        Ok(state) => Realization::Piece(PieceKind::Quantum { state, measurements: equatorial_pair(angles) }),
        Err(e) => Realization::NotRealizable(e.to_string()),
    }
}

// Serialisation: tables as flat entry lists, states in the density-matrix wire format.

#[derive(Serialize)]
struct PieceOut<'a> {
    kind: &'static str,
    table: &'a [f64],
    #[serde(skip_serializing_if = "Option::is_none")]
    state: Option<crate::quantum::DensityMatrixJson>,
    #[serde(skip_serializing_if = "Option::is_none")]
    note: Option<&'a str>,
}

#[derive(Serialize)]
struct ModelOut<'a> {
    cut: Option<Cut>,
    dimension: usize,
    weights: &'a [f64],
    responders: Vec<&'a [f64]>,
    pieces: Vec<PieceOut<'a>>,
}

impl<T: PieceTable> Serialize for Model<T> {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        ModelOut {
            cut: self.cut,
            dimension: self.dimension(),
            weights: &self.weights,
            responders: self.responders.iter().map(|r| r.entries()).collect(),
            pieces: self
                .pieces
                .iter()
                .map(|p| PieceOut {
                    kind: p.kind.label(),
                    table: p.table.values(),
                    state: match &p.kind {
                        PieceKind::Quantum { state, .. } => Some(state.to_json()),
                        _ => None,
                    },
                    note: match &p.kind {
                        PieceKind::Abstract { reason } => Some(reason.as_str()),
                        _ => None,
                    },
                })
                .collect(),
        }
        .serialize(s)
    }
}

pub(crate) fn require_len(got: usize, expected: usize) -> Result<()> {
    if got == expected {
        Ok(())
    } else {
        Err(Error::Arity { expected, got })
    }
}
