use super::linalg::{self, c, from_rows, is_psd, max_abs_diff, CMat, ZERO};
use crate::error::{Error, Result};
use serde::Serialize;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum MeasurementKind {
    Projective,
    Povm,
}

/// A two-outcome measurement. For the projective kind outcome 0 is the `+1`
/// eigenspace of the observable.
#[derive(Debug, Clone, PartialEq)]
pub struct DichotomicMeasurement {
    kind: MeasurementKind,
    effects: [CMat; 2],
    observable: Option<CMat>,
}

impl DichotomicMeasurement {
    /// From a Hermitian observable with spectrum in `{+1, -1}`.
    pub fn projective(observable: CMat, tol: f64) -> Result<Self> {
        let n = observable.nrows();
        if !linalg::is_hermitian(&observable, tol) {
            return Err(Error::InvalidMeasurement("observable is not Hermitian".into()));
        }
        let sq = &observable * &observable;
        if max_abs_diff(&sq, &linalg::identity(n)) > tol {
            return Err(Error::InvalidMeasurement("observable must square to the identity".into()));
        }
        let id = linalg::identity(n);
        let e0 = (&id + &observable).map(|z| z * 0.5);
        let e1 = (&id - &observable).map(|z| z * 0.5);
        Ok(Self { kind: MeasurementKind::Projective, effects: [e0, e1], observable: Some(observable) })
    }

    pub fn povm(e0: CMat, e1: CMat, tol: f64) -> Result<Self> {
        if e0.shape() != e1.shape() || !e0.is_square() {
            return Err(Error::InvalidMeasurement("effects must be square and equally sized".into()));
        }
        for (k, e) in [&e0, &e1].into_iter().enumerate() {
            if !is_psd(e, tol) {
                return Err(Error::InvalidMeasurement(format!("effect {k} is not positive semidefinite")));
            }
        }
        if max_abs_diff(&(&e0 + &e1), &linalg::identity(e0.nrows())) > tol {
            return Err(Error::InvalidMeasurement("effects do not sum to the identity".into()));
        }
        Ok(Self { kind: MeasurementKind::Povm, effects: [e0, e1], observable: None })
    }

    /// Equatorial qubit observable `cos α σx + sin α σy`.
    pub fn equatorial(alpha: f64) -> Self {
        let obs = linalg::sigma_x().map(|z| z * alpha.cos()) + linalg::sigma_y().map(|z| z * alpha.sin());
        Self::projective(obs, 1e-12).expect("equatorial observable is valid")
    }

    /// Qubit observable `n · σ` for a unit vector `n`.
    pub fn qubit_axis(n: [f64; 3]) -> Result<Self> {
        let obs = linalg::sigma_x().map(|z| z * n[0]) + linalg::sigma_y().map(|z| z * n[1]) + linalg::sigma_z().map(|z| z * n[2]);
        Self::projective(obs, 1e-9)
    }

    pub fn kind(&self) -> MeasurementKind {
        self.kind
    }

    pub fn effect(&self, outcome: usize) -> &CMat {
        &self.effects[outcome]
    }

    pub fn dim(&self) -> usize {
        self.effects[0].nrows()
    }

    /// `E_0 - E_1`.
    pub fn observable(&self) -> CMat {
        self.observable.clone().unwrap_or_else(|| &self.effects[0] - &self.effects[1])
    }

    /// True when both effects are orthogonal projectors.
    pub fn is_projective(&self, tol: f64) -> bool {
        self.effects.iter().all(|e| max_abs_diff(&(e * e), e) <= tol)
    }
}

/// Whether two projective qubit measurements are mutually unbiased, i.e.
/// their Bloch axes are orthogonal. `None` for anything other than a pair of
/// projective qubit measurements.
pub fn mutually_unbiased(m0: &DichotomicMeasurement, m1: &DichotomicMeasurement, tol: f64) -> Option<bool> {
    if m0.dim() != 2 || m1.dim() != 2 || !m0.is_projective(tol) || !m1.is_projective(tol) {
        return None;
    }
    let (o0, o1) = (m0.observable(), m1.observable());
    if [&o0, &o1].iter().any(|o| linalg::trace(o).norm() > tol) {
        return None;
    }
    Some(linalg::trace(&(&o0 * &o1)).norm() <= tol)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum PaperMeasurements {
    /// `(σ_y, -σ_x)` as projective qubit measurements.
    SigmaPair,
    /// The two dichotomic qutrit POVMs.
    AppendixDPovm,
}

pub fn paper_measurements(which: PaperMeasurements) -> [DichotomicMeasurement; 2] {
    match which {
        PaperMeasurements::SigmaPair => sigma_pair(),
        PaperMeasurements::AppendixDPovm => {
            let h = |re: f64, im: f64| c(re, im);
            let half = h(0.5, 0.0);
            let e = |off: num_complex::Complex64| {
                from_rows(&[&[half, off, ZERO], &[off.conj(), half, ZERO], &[ZERO, ZERO, half]])
            };
            let m0 = DichotomicMeasurement::povm(e(h(0.0, -0.5)), e(h(0.0, 0.5)), 1e-12).expect("valid POVM");
            let m1 = DichotomicMeasurement::povm(e(h(-0.5, 0.0)), e(h(0.5, 0.0)), 1e-12).expect("valid POVM");
            [m0, m1]
        }
    }
}

/// `σ_y` for setting 0, `-σ_x` for setting 1.
pub fn sigma_pair() -> [DichotomicMeasurement; 2] {
    [
        DichotomicMeasurement::projective(linalg::sigma_y(), 1e-12).expect("σ_y"),
        DichotomicMeasurement::projective(-linalg::sigma_x(), 1e-12).expect("-σ_x"),
    ]
}

/// Angles `α` with `σ_y = n(π/2)` and `-σ_x = n(π)` in the equatorial plane.
pub const SIGMA_PAIR_ANGLES: [f64; 2] = [std::f64::consts::FRAC_PI_2, std::f64::consts::PI];
