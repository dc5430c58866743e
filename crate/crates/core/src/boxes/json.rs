//! Wire format for boxes:
//! `{"parties":3,"settings":2,"outcomes":2,"p":[...],"label":"..."}`.

use super::{BipartiteBox, TripartiteBox};
use crate::error::{Error, Result};
use serde::{Deserialize, Serialize};

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct BoxFile {
    pub parties: usize,
    pub settings: usize,
    pub outcomes: usize,
    pub p: Vec<f64>,
    #[serde(default)]
    pub label: String,
}

/// A parsed box of either arity.
#[derive(Debug, Clone, PartialEq)]
pub enum AnyBox {
    Tripartite(TripartiteBox),
    Bipartite(BipartiteBox),
}

impl BoxFile {
    pub fn from_tripartite(bx: &TripartiteBox) -> Self {
        Self { parties: 3, settings: 2, outcomes: 2, p: bx.entries().to_vec(), label: bx.label().unwrap_or("").into() }
    }

    pub fn from_bipartite(bx: &BipartiteBox, label: &str) -> Self {
        Self { parties: 2, settings: 2, outcomes: 2, p: bx.entries().to_vec(), label: label.into() }
    }

    pub fn into_box(self) -> Result<AnyBox> {
        if self.settings != 2 || self.outcomes != 2 {
            return Err(Error::Input(format!(
                "only 2 settings and 2 outcomes are supported, got {} and {}",
                self.settings, self.outcomes
            )));
        }
        if let Some(v) = self.p.iter().find(|v| !v.is_finite()) {
            return Err(Error::Input(format!("non-finite probability {v}")));
        }
        match self.parties {
            3 => {
                let bx = TripartiteBox::from_entries(self.p)?;
                Ok(AnyBox::Tripartite(if self.label.is_empty() { bx } else { bx.with_label(self.label) }))
            }
            2 => Ok(AnyBox::Bipartite(BipartiteBox::from_entries(self.p)?)),
            n => Err(Error::Input(format!("parties must be 2 or 3, got {n}"))),
        }
    }
}

pub fn to_json(bx: &TripartiteBox) -> String {
    serde_json::to_string_pretty(&BoxFile::from_tripartite(bx)).expect("box serialises")
}

pub fn bipartite_to_json(bx: &BipartiteBox, label: &str) -> String {
    serde_json::to_string_pretty(&BoxFile::from_bipartite(bx, label)).expect("box serialises")
}

pub fn parse(text: &str) -> Result<AnyBox> {
    let file: BoxFile = serde_json::from_str(text).map_err(|e| Error::Input(format!("box JSON: {e}")))?;
    file.into_box()
}

pub fn parse_tripartite(text: &str) -> Result<TripartiteBox> {
    match parse(text)? {
        AnyBox::Tripartite(b) => Ok(b),
        AnyBox::Bipartite(_) => Err(Error::Input("expected a tripartite box".into())),
    }
}
