use super::linalg::{self, c, hermitian_eigenvalues, is_hermitian, projector, trace, CMat, ONE, ZERO};
use crate::error::{Error, Result};
use serde::{Deserialize, Serialize};
use std::f64::consts::{FRAC_1_SQRT_2, FRAC_PI_2, FRAC_PI_4, PI, SQRT_2};

/// A validated density matrix.
#[derive(Debug, Clone, PartialEq)]
pub struct DensityMatrix {
    m: CMat,
}

impl DensityMatrix {
    /// Checks Hermiticity, unit trace and positivity within `tol`.
    pub fn new(m: CMat, tol: f64) -> Result<Self> {
        if !m.is_square() || m.nrows() == 0 {
            return Err(Error::InvalidState(format!("matrix is {}x{}", m.nrows(), m.ncols())));
        }
        if !is_hermitian(&m, tol) {
            return Err(Error::InvalidState("not Hermitian".into()));
        }
        let t = trace(&m);
        if (t - ONE).norm() > tol {
            return Err(Error::InvalidState(format!("trace {t}")));
        }
        let min = hermitian_eigenvalues(&m)[0];
        if min < -tol {
            return Err(Error::InvalidState(format!("smallest eigenvalue {min}")));
        }
        Ok(Self { m })
    }

    pub fn pure(ket: &[num_complex::Complex64]) -> Result<Self> {
        let norm: f64 = ket.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt();
        if !(norm > 0.0) {
            return Err(Error::InvalidState("zero vector".into()));
        }
        let kn: Vec<_> = ket.iter().map(|z| z / norm).collect();
        Ok(Self { m: projector(&kn) })
    }

    pub fn maximally_mixed(dim: usize) -> Self {
        Self { m: linalg::identity(dim).map(|z| z / dim as f64) }
    }

    /// `w · self + (1 - w) · other`.
    pub fn mix(&self, other: &DensityMatrix, w: f64) -> Result<Self> {
        if self.dim() != other.dim() {
            return Err(Error::Dimension(format!("mixing dims {} and {}", self.dim(), other.dim())));
        }
        Ok(Self { m: self.m.map(|z| z * w) + other.m.map(|z| z * (1.0 - w)) })
    }

    pub fn tensor(&self, other: &DensityMatrix) -> Self {
        Self { m: linalg::tensor(&self.m, &other.m) }
    }

    pub fn dim(&self) -> usize {
        self.m.nrows()
    }

    pub fn matrix(&self) -> &CMat {
        &self.m
    }

    pub fn partial_trace(&self, dims: &[usize], keep: &[usize]) -> Result<DensityMatrix> {
        Ok(Self { m: linalg::partial_trace(&self.m, dims, keep)? })
    }

    /// Bloch vector `(⟨σx⟩, ⟨σy⟩, ⟨σz⟩)` of a qubit state.
    pub fn bloch(&self) -> Result<[f64; 3]> {
        if self.dim() != 2 {
            return Err(Error::Dimension(format!("bloch vector of a {}-level state", self.dim())));
        }
        let e = |s: CMat| (trace(&(&self.m * s))).re;
        Ok([e(linalg::sigma_x()), e(linalg::sigma_y()), e(linalg::sigma_z())])
    }

    pub fn from_bloch(r: [f64; 3]) -> Result<Self> {
        let m = (linalg::identity(2) + linalg::sigma_x().map(|z| z * r[0]) + linalg::sigma_y().map(|z| z * r[1])
            + linalg::sigma_z().map(|z| z * r[2]))
        .map(|z| z * 0.5);
        Self::new(m, crate::tol::MAT)
    }

    pub fn to_json(&self) -> DensityMatrixJson {
        let n = self.dim();
        let mut re = Vec::with_capacity(n * n);
        let mut im = Vec::with_capacity(n * n);
        for i in 0..n {
            for j in 0..n {
                re.push(self.m[(i, j)].re);
                im.push(self.m[(i, j)].im);
            }
        }
        DensityMatrixJson { dim: n, re, im }
    }
}

/// Wire format: row-major real and imaginary parts.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct DensityMatrixJson {
    pub dim: usize,
    pub re: Vec<f64>,
    #[serde(default)]
    pub im: Vec<f64>,
}

impl DensityMatrixJson {
    pub fn into_state(self, tol: f64) -> Result<DensityMatrix> {
        let n = self.dim;
        let im = if self.im.is_empty() { vec![0.0; n * n] } else { self.im };
        if self.re.len() != n * n || im.len() != n * n {
            return Err(Error::Dimension(format!("dim {n} needs {} entries", n * n)));
        }
        DensityMatrix::new(CMat::from_fn(n, n, |i, j| c(self.re[i * n + j], im[i * n + j])), tol)
    }
}

/// The states used by the constructions, parametrised by visibility.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case", tag = "name")]
pub enum PaperState {
    /// `V |GHZ⟩⟨GHZ| + (1 - V) I/8`, dimension 8.
    GhzMixed,
    /// `V |GHZ⟩⟨GHZ| + (1 - V) |2⟩⟨2| ⊗ I/2 ⊗ I/2` on `C³ ⊗ C² ⊗ C²`.
    QutritMixed,
    /// Two-qubit hidden state `ρ^λ_BC` with `sin 2θ = √2 V`.
    LhsPair { lambda: usize },
    /// Single-qubit hidden state `ρ^λ_C` with `sin 2θ = 2V`.
    LhsQubit { lambda: usize },
}

/// Phases of the two-qubit hidden states for `λ = 0..3`.
pub const LHS_PAIR_PHASES: [f64; 4] = [5.0 * FRAC_PI_4, FRAC_PI_4, -FRAC_PI_4, 3.0 * FRAC_PI_4];
/// Phases of the single-qubit hidden states for `λ = 0..3`.
pub const LHS_QUBIT_PHASES: [f64; 4] = [FRAC_PI_2, -FRAC_PI_2, PI, 0.0];

fn ghz_ket(first_dim: usize) -> Vec<num_complex::Complex64> {
    let mut ket = vec![ZERO; first_dim * 4];
    ket[0] = c(FRAC_1_SQRT_2, 0.0);
    ket[4 + 3] = c(FRAC_1_SQRT_2, 0.0);
    ket
}

/// `cos θ |0..0⟩ + e^{iφ} sin θ |1..1⟩` on `n` qubits.
pub fn phased_ket(n: usize, theta: f64, phi: f64) -> Vec<num_complex::Complex64> {
    let dim = 1 << n;
    let mut ket = vec![ZERO; dim];
    ket[0] = c(theta.cos(), 0.0);
    ket[dim - 1] = num_complex::Complex64::from_polar(theta.sin(), phi);
    ket
}

fn check_v(v: f64, max: f64, bound: &str) -> Result<()> {
    if v > 0.0 && v <= max * (1.0 + 1e-15) {
        Ok(())
    } else {
        Err(Error::VisibilityRange { v, bound: bound.into() })
    }
}

/// θ with `sin 2θ = s`, `θ ∈ [0, π/4]`.
fn half_asin(s: f64) -> f64 {
    s.min(1.0).asin() / 2.0
}

pub fn paper_state(which: PaperState, v: f64) -> Result<DensityMatrix> {
    match which {
        PaperState::GhzMixed => {
            check_v(v, 1.0, "0 < V <= 1")?;
            let ghz = DensityMatrix::pure(&ghz_ket(2))?;
            ghz.mix(&DensityMatrix::maximally_mixed(8), v)
        }
        PaperState::QutritMixed => {
            check_v(v, 1.0, "0 < V <= 1")?;
            let ghz = DensityMatrix::pure(&ghz_ket(3))?;
            let two = DensityMatrix::pure(&[ZERO, ZERO, ONE])?;
            let noise = two.tensor(&DensityMatrix::maximally_mixed(4));
            ghz.mix(&noise, v)
        }
        PaperState::LhsPair { lambda } => {
            check_v(v, FRAC_1_SQRT_2, "sin 2θ = √2 V requires 0 < V <= 1/√2")?;
            let phi = *LHS_PAIR_PHASES.get(lambda).ok_or_else(|| Error::Input(format!("λ = {lambda} not in 0..4")))?;
            DensityMatrix::pure(&phased_ket(2, half_asin(SQRT_2 * v), phi))
        }
        PaperState::LhsQubit { lambda } => {
            check_v(v, 0.5, "sin 2θ = 2V requires 0 < V <= 1/2")?;
            let phi = *LHS_QUBIT_PHASES.get(lambda).ok_or_else(|| Error::Input(format!("λ = {lambda} not in 0..4")))?;
            DensityMatrix::pure(&phased_ket(1, half_asin(2.0 * v), phi))
        }
    }
}

/// `Σ_i p_i |i⟩⟨i| ⊗ ρ_B^i ⊗ ρ_C^i`, classical on the first subsystem.
pub fn cq_state(probs: &[f64], rho_b: &[DensityMatrix], rho_c: &[DensityMatrix]) -> Result<DensityMatrix> {
    let n = probs.len();
    if n == 0 || rho_b.len() != n || rho_c.len() != n {
        return Err(Error::Dimension(format!("{} weights, {} B states, {} C states", n, rho_b.len(), rho_c.len())));
    }
    if probs.iter().any(|&p| !(p >= 0.0)) || (probs.iter().sum::<f64>() - 1.0).abs() > crate::tol::MAT {
        return Err(Error::InvalidState("classical weights must be a probability vector".into()));
    }
    let (db, dc) = (rho_b[0].dim(), rho_c[0].dim());
    if rho_b.iter().any(|r| r.dim() != db) || rho_c.iter().any(|r| r.dim() != dc) {
        return Err(Error::Dimension("conditional states must share a dimension".into()));
    }
    let mut m = CMat::zeros(n * db * dc, n * db * dc);
    for i in 0..n {
        let mut e = vec![ZERO; n];
        e[i] = ONE;
        let block = linalg::tensor_all(&[&projector(&e), rho_b[i].matrix(), rho_c[i].matrix()]);
        m += block.map(|z| z * probs[i]);
    }
    DensityMatrix::new(m, crate::tol::MAT)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::quantum::linalg::max_abs_diff;

    #[test]
    fn lhs_pair_boundary_state() {
        let rho = paper_state(PaperState::LhsPair { lambda: 0 }, FRAC_1_SQRT_2).unwrap();
        let s = FRAC_1_SQRT_2;
        let ket = [c(s, 0.0), ZERO, ZERO, c(-0.5, -0.5)];
        assert!(max_abs_diff(rho.matrix(), &projector(&ket)) < 1e-15);
        assert!(matches!(
            paper_state(PaperState::LhsPair { lambda: 0 }, 0.8),
            Err(Error::VisibilityRange { bound, .. }) if bound.contains("√2 V")
        ));
    }

    #[test]
    fn lhs_qubit_boundary_state() {
        let rho = paper_state(PaperState::LhsQubit { lambda: 0 }, 0.5).unwrap();
        let s = FRAC_1_SQRT_2;
        assert!(max_abs_diff(rho.matrix(), &projector(&[c(s, 0.0), c(0.0, s)])) < 1e-15);
        assert!(paper_state(PaperState::LhsQubit { lambda: 0 }, 0.51).is_err());
    }

    #[test]
    fn dimensions_and_purity() {
        assert_eq!(paper_state(PaperState::GhzMixed, 0.3).unwrap().dim(), 8);
        assert_eq!(paper_state(PaperState::QutritMixed, 0.3).unwrap().dim(), 12);
        let ghz = paper_state(PaperState::GhzMixed, 1.0).unwrap();
        assert!(max_abs_diff(&(ghz.matrix() * ghz.matrix()), ghz.matrix()) < 1e-15);
        assert!(paper_state(PaperState::GhzMixed, 0.0).is_err());
    }

    #[test]
    fn json_round_trip_and_rejection() {
        let rho = paper_state(PaperState::LhsPair { lambda: 2 }, 0.4).unwrap();
        let back = rho.to_json().into_state(1e-9).unwrap();
        assert!(max_abs_diff(back.matrix(), rho.matrix()) < 1e-15);
        let bad = DensityMatrixJson { dim: 2, re: vec![1.5, 0.0, 0.0, -0.5], im: vec![] };
        assert!(matches!(bad.into_state(1e-9), Err(Error::InvalidState(_))));
    }

    #[test]
    fn cq_state_is_block_diagonal() {
        let b = [DensityMatrix::pure(&[ONE, ZERO]).unwrap(), DensityMatrix::maximally_mixed(2)];
        let rho = cq_state(&[0.25, 0.75], &b, &b).unwrap();
        assert_eq!(rho.dim(), 8);
        for i in 0..4 {
            for j in 4..8 {
                assert_eq!(rho.matrix()[(i, j)], ZERO);
            }
        }
    }
}
