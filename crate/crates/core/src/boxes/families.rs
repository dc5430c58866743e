use super::TripartiteBox;
use crate::error::{Error, Result};
use serde::{Deserialize, Serialize};
use std::f64::consts::SQRT_2;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum FamilyKind {
    Mermin,
    Svetlichny,
}

impl std::str::FromStr for FamilyKind {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.to_ascii_lowercase().as_str() {
            "mermin" => Ok(FamilyKind::Mermin),
            "svetlichny" => Ok(FamilyKind::Svetlichny),
            other => Err(Error::Input(format!("unknown family `{other}` (expected mermin or svetlichny)"))),
        }
    }
}

impl std::fmt::Display for FamilyKind {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(match self {
            FamilyKind::Mermin => "mermin",
            FamilyKind::Svetlichny => "svetlichny",
        })
    }
}

/// A noisy family member: kind plus visibility `V ∈ (0, 1]`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct FamilyParam {
    kind: FamilyKind,
    v: f64,
}

impl FamilyParam {
    pub fn new(kind: FamilyKind, v: f64) -> Result<Self> {
        if !(v > 0.0 && v <= 1.0) {
            return Err(Error::VisibilityRange { v, bound: "0 < V <= 1".into() });
        }
        Ok(Self { kind, v })
    }

    pub fn mermin(v: f64) -> Result<Self> {
        Self::new(FamilyKind::Mermin, v)
    }

    pub fn svetlichny(v: f64) -> Result<Self> {
        Self::new(FamilyKind::Svetlichny, v)
    }

    pub fn kind(&self) -> FamilyKind {
        self.kind
    }

    pub fn v(&self) -> f64 {
        self.v
    }
}

fn parity_sign(bits: usize) -> f64 {
    if bits & 1 == 0 {
        1.0
    } else {
        -1.0
    }
}

/// The noisy Mermin or noisy Svetlichny box at visibility `V`.
pub fn family_box(p: &FamilyParam) -> TripartiteBox {
    let v = p.v;
    let bx = match p.kind {
        FamilyKind::Mermin => TripartiteBox::from_fn(|x, y, z, a, b, c| {
            let s = parity_sign(a ^ b ^ c ^ (x & y) ^ (y & z) ^ (x & z));
            let delta = if x ^ y ^ 1 == z { 1.0 } else { 0.0 };
            (1.0 + s * delta * v) / 8.0
        }),
        FamilyKind::Svetlichny => TripartiteBox::from_fn(|x, y, z, a, b, c| {
            let s = parity_sign(a ^ b ^ c ^ (x & y) ^ (y & z) ^ (x & z));
            (2.0 + s * SQRT_2 * v) / 16.0
        }),
    };
    bx.with_label(format!("{}(V={})", p.kind, v))
}
