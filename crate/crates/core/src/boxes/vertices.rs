//! Vertex catalogue: fully deterministic boxes, PR-box-sharing two-way
//! vertices and Svetlichny boxes.

use super::{BipartiteBox, Pair, SingleBox, TripartiteBox};
use crate::error::{Error, Result};
use serde::{Deserialize, Serialize};

fn bit(v: u8) -> Result<u8> {
    if v > 1 {
        Err(Error::NotABit(v))
    } else {
        Ok(v)
    }
}

/// Parameters of `P_D^{αβγεζη}`: `a = αx ⊕ β`, `b = γy ⊕ ε`, `c = ζz ⊕ η`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Default, Serialize, Deserialize)]
pub struct DeterministicSpec {
    pub alpha: u8,
    pub beta: u8,
    pub gamma: u8,
    pub epsilon: u8,
    pub zeta: u8,
    pub eta: u8,
}

impl DeterministicSpec {
    pub fn new(alpha: u8, beta: u8, gamma: u8, epsilon: u8, zeta: u8, eta: u8) -> Result<Self> {
        Ok(Self {
            alpha: bit(alpha)?,
            beta: bit(beta)?,
            gamma: bit(gamma)?,
            epsilon: bit(epsilon)?,
            zeta: bit(zeta)?,
            eta: bit(eta)?,
        })
    }

    /// The six bits read from `index` (0..64), `alpha` most significant.
    pub fn from_index(index: usize) -> Self {
        let b = |k: usize| ((index >> (5 - k)) & 1) as u8;
        Self { alpha: b(0), beta: b(1), gamma: b(2), epsilon: b(3), zeta: b(4), eta: b(5) }
    }

    pub fn index(&self) -> usize {
        [self.alpha, self.beta, self.gamma, self.epsilon, self.zeta, self.eta]
            .iter()
            .fold(0, |acc, &b| acc * 2 + b as usize)
    }

    /// The outcome triple produced for settings `(x, y, z)`.
    pub fn outcomes(&self, x: usize, y: usize, z: usize) -> (usize, usize, usize) {
        let f = |s: u8, o: u8, v: usize| (s as usize * v) ^ o as usize;
        (f(self.alpha, self.beta, x), f(self.gamma, self.epsilon, y), f(self.zeta, self.eta, z))
    }
}

/// Identifies one box of the catalogue.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(tag = "family", rename_all = "snake_case")]
pub enum VertexId {
    Deterministic { spec: DeterministicSpec },
    /// PR box `PR^{pr}` shared by `pair`, the third party deterministic with
    /// `c = det[0] z ⊕ det[1]`.
    TwoWay { pair: Pair, pr: [u8; 3], det: [u8; 2] },
    Svetlichny { bits: [u8; 4] },
    /// Box maximally violating the Mermin variant with this index.
    Mermin { variant: usize },
}

impl std::fmt::Display for VertexId {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            VertexId::Deterministic { spec: s } => {
                write!(f, "D^{}{}{}{}{}{}", s.alpha, s.beta, s.gamma, s.epsilon, s.zeta, s.eta)
            }
            VertexId::TwoWay { pair, pr, det } => {
                write!(f, "PR_{:?}^{}{}{}xD^{}{}", pair, pr[0], pr[1], pr[2], det[0], det[1])
            }
            VertexId::Svetlichny { bits } => write!(f, "Sv^{}{}{}{}", bits[0], bits[1], bits[2], bits[3]),
            VertexId::Mermin { variant } => write!(f, "Mermin#{variant}"),
        }
    }
}

pub fn deterministic_box(spec: &DeterministicSpec) -> TripartiteBox {
    TripartiteBox::from_fn(|x, y, z, a, b, c| if (a, b, c) == spec.outcomes(x, y, z) { 1.0 } else { 0.0 })
}

/// `PR^{αβγ}`: probability 1/2 iff `b ⊕ c = yz ⊕ αy ⊕ βz ⊕ γ`.
pub fn pr_box(alpha: u8, beta: u8, gamma: u8) -> BipartiteBox {
    let (al, be, ga) = ((alpha & 1) as usize, (beta & 1) as usize, (gamma & 1) as usize);
    BipartiteBox::from_fn(|y, z, b, c| if b ^ c == (y & z) ^ (al * y) ^ (be * z) ^ ga { 0.5 } else { 0.0 })
}

/// PR box on `pair` times a deterministic response `P_D^{det}` for the
/// remaining party.
pub fn two_way_vertex(pair: Pair, pr: [u8; 3], det: [u8; 2]) -> TripartiteBox {
    let prb = pr_box(pr[0], pr[1], pr[2]);
    let single = SingleBox::deterministic(det[0], det[1]);
    let (f, s) = pair.parties();
    let (f, s, d) = (f.index(), s.index(), pair.complement().index());
    TripartiteBox::from_fn(|x, y, z, a, b, c| {
        let set = [x, y, z];
        let out = [a, b, c];
        prb.get(set[f], set[s], out[f], out[s]) * single.get(set[d], out[d])
    })
}

/// `P_Sv^{αβγε}`: mass 1/4 on `a⊕b⊕c = xy⊕xz⊕yz⊕αx⊕βy⊕γz⊕ε`.
pub fn svetlichny_vertex(alpha: u8, beta: u8, gamma: u8, epsilon: u8) -> TripartiteBox {
    let [al, be, ga, ep] = [alpha, beta, gamma, epsilon].map(|b| (b & 1) as usize);
    TripartiteBox::from_fn(|x, y, z, a, b, c| {
        let rhs = (x & y) ^ (x & z) ^ (y & z) ^ (al * x) ^ (be * y) ^ (ga * z) ^ ep;
        if a ^ b ^ c == rhs {
            0.25
        } else {
            0.0
        }
    })
}

/// All 64 fully deterministic boxes, indexed by [`DeterministicSpec::from_index`].
pub fn all_deterministic() -> Vec<(VertexId, TripartiteBox)> {
    (0..64)
        .map(|i| {
            let spec = DeterministicSpec::from_index(i);
            (VertexId::Deterministic { spec }, deterministic_box(&spec))
        })
        .collect()
}

/// All 96 vertices with a PR box on one pair: 8 PR boxes times 4
/// deterministic responses, for each of the three pairs.
pub fn all_two_way() -> Vec<(VertexId, TripartiteBox)> {
    let mut out = Vec::with_capacity(96);
    for pair in Pair::ALL {
        for p in 0..8u8 {
            let pr = [(p >> 2) & 1, (p >> 1) & 1, p & 1];
            for d in 0..4u8 {
                let det = [(d >> 1) & 1, d & 1];
                out.push((VertexId::TwoWay { pair, pr, det }, two_way_vertex(pair, pr, det)));
            }
        }
    }
    out
}

/// All 16 Svetlichny boxes.
pub fn all_svetlichny() -> Vec<(VertexId, TripartiteBox)> {
    (0..16u8)
        .map(|i| {
            let bits = [(i >> 3) & 1, (i >> 2) & 1, (i >> 1) & 1, i & 1];
            (VertexId::Svetlichny { bits }, svetlichny_vertex(bits[0], bits[1], bits[2], bits[3]))
        })
        .collect()
}
