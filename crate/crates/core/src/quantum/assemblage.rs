use super::born::MeasurementPair;
use super::linalg::{hermitian_eigenvalues, max_abs_diff, partial_trace, tensor, CMat};
use super::state::DensityMatrix;
use crate::boxes::SingleBox;
use crate::error::{Error, Result};
use serde::Serialize;

/// Unnormalised conditional states `σ_{a|x}` on the trusted side.
#[derive(Debug, Clone, PartialEq)]
pub struct Assemblage {
    /// `elements[x][a]`.
    pub elements: [[CMat; 2]; 2],
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct AssemblageReport {
    pub positive: bool,
    pub min_eigenvalue: f64,
    pub no_signalling: bool,
    /// Largest entry of `|Σ_a σ_{a|0} - Σ_a σ_{a|1}|`.
    pub setting_dependence: f64,
    pub trace: f64,
}

impl AssemblageReport {
    pub fn is_valid(&self) -> bool {
        self.positive && self.no_signalling
    }
}

/// `σ_{a|x} = Tr_U((E^a_x ⊗ I) ρ)` where the untrusted party holds the first
/// subsystem of dimension `dims[0]` and the trusted side the remaining `dims[1]`.
pub fn assemblage(rho: &DensityMatrix, untrusted: &MeasurementPair, dims: [usize; 2]) -> Result<Assemblage> {
    if dims[0] * dims[1] != rho.dim() {
        return Err(Error::Dimension(format!("dims {:?} do not multiply to state dim {}", dims, rho.dim())));
    }
    if untrusted.iter().any(|m| m.dim() != dims[0]) {
        return Err(Error::Dimension(format!("measurements do not act on a {}-level system", dims[0])));
    }
    let id = CMat::identity(dims[1], dims[1]);
    let el = |x: usize, a: usize| -> Result<CMat> {
        let op = tensor(untrusted[x].effect(a), &id);
        partial_trace(&(op * rho.matrix()), &dims, &[1])
    };
    Ok(Assemblage { elements: [[el(0, 0)?, el(0, 1)?], [el(1, 0)?, el(1, 1)?]] })
}

impl Assemblage {
    /// `Σ_a σ_{a|0}`.
    pub fn reduced_state(&self) -> CMat {
        &self.elements[0][0] + &self.elements[0][1]
    }
}

pub fn validate_assemblage(asm: &Assemblage, tol: f64) -> AssemblageReport {
    let min_eigenvalue = asm
        .elements
        .iter()
        .flatten()
        .map(|e| hermitian_eigenvalues(e)[0])
        .fold(f64::INFINITY, f64::min);
    let s0 = &asm.elements[0][0] + &asm.elements[0][1];
    let s1 = &asm.elements[1][0] + &asm.elements[1][1];
    let setting_dependence = max_abs_diff(&s0, &s1);
    AssemblageReport {
        positive: min_eigenvalue >= -tol,
        min_eigenvalue,
        no_signalling: setting_dependence <= tol,
        setting_dependence,
        trace: super::linalg::trace(&s0).re,
    }
}

/// A local-hidden-state ensemble: `σ_{a|x} = Σ_λ r_λ P_λ(a|x) ρ^λ`.
#[derive(Debug, Clone, PartialEq)]
pub struct LhsEnsemble {
    pub weights: Vec<f64>,
    pub states: Vec<DensityMatrix>,
    pub responders: Vec<SingleBox>,
}

impl LhsEnsemble {
    pub fn new(weights: Vec<f64>, states: Vec<DensityMatrix>, responders: Vec<SingleBox>) -> Result<Self> {
        if weights.len() != states.len() || weights.len() != responders.len() || weights.is_empty() {
            return Err(Error::Dimension("weights, states and responders must have equal nonzero length".into()));
        }
        if weights.iter().any(|&w| !(w >= 0.0)) || (weights.iter().sum::<f64>() - 1.0).abs() > crate::tol::PROB {
            return Err(Error::Input("weights must be a probability vector".into()));
        }
        let d = states[0].dim();
        if states.iter().any(|s| s.dim() != d) {
            return Err(Error::Dimension("hidden states must share a dimension".into()));
        }
        Ok(Self { weights, states, responders })
    }

    pub fn assemblage(&self) -> Assemblage {
        let d = self.states[0].dim();
        let el = |x: usize, a: usize| {
            let mut m = CMat::zeros(d, d);
            for ((w, s), r) in self.weights.iter().zip(&self.states).zip(&self.responders) {
                m += s.matrix().map(|z| z * (w * r.get(x, a)));
            }
            m
        };
        Assemblage { elements: [[el(0, 0), el(0, 1)], [el(1, 0), el(1, 1)]] }
    }
}
