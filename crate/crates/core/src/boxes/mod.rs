//! Conditional probability boxes for one, two and three parties with binary
//! settings and binary outcomes.
//!
//! Tripartite tables are stored flat in `(x, y, z, a, b, c)` row-major order,
//! bipartite tables in `(y, z, b, c)` order and single-party tables in
//! `(x, a)` order. The same layout is used on the wire (see [`json`]).

mod correlators;
mod families;
pub mod json;
mod symmetry;
mod validate;
mod vertices;

pub use correlators::{box_from_correlators, CorrelatorSet};
pub use families::{family_box, FamilyKind, FamilyParam};
pub use symmetry::{canonical_perm, compose, is_product, is_symmetric, permute_parties, PERMUTATIONS};
pub use validate::{Issue, ValidationReport};
pub use vertices::{
    all_deterministic, all_svetlichny, all_two_way, deterministic_box, pr_box, svetlichny_vertex,
    two_way_vertex, DeterministicSpec, VertexId,
};

use crate::error::{Error, Result};
use serde::{Deserialize, Serialize};

/// One of the three parties.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum Party {
    A,
    B,
    C,
}

impl Party {
    pub const ALL: [Party; 3] = [Party::A, Party::B, Party::C];

    pub fn index(self) -> usize {
        self as usize
    }

    pub fn from_index(i: usize) -> Party {
        Party::ALL[i]
    }
}

/// Unordered pair of parties.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Pair {
    AB,
    AC,
    BC,
}

impl Pair {
    pub const ALL: [Pair; 3] = [Pair::AB, Pair::AC, Pair::BC];

    /// The two parties, lower index first.
    pub fn parties(self) -> (Party, Party) {
        match self {
            Pair::AB => (Party::A, Party::B),
            Pair::AC => (Party::A, Party::C),
            Pair::BC => (Party::B, Party::C),
        }
    }

    /// The party not in the pair.
    pub fn complement(self) -> Party {
        match self {
            Pair::AB => Party::C,
            Pair::AC => Party::B,
            Pair::BC => Party::A,
        }
    }
}

/// A bipartition separating one (untrusted) party from the other two.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Cut {
    #[serde(rename = "A|BC")]
    AvsBC,
    #[serde(rename = "B|AC")]
    BvsAC,
    #[serde(rename = "C|AB")]
    CvsAB,
}

impl Cut {
    pub const ALL: [Cut; 3] = [Cut::AvsBC, Cut::BvsAC, Cut::CvsAB];

    pub fn single(self) -> Party {
        match self {
            Cut::AvsBC => Party::A,
            Cut::BvsAC => Party::B,
            Cut::CvsAB => Party::C,
        }
    }

    pub fn pair(self) -> Pair {
        match self {
            Cut::AvsBC => Pair::BC,
            Cut::BvsAC => Pair::AC,
            Cut::CvsAB => Pair::AB,
        }
    }

    /// Party permutation that moves the single party of the cut to slot A
    /// and keeps the other two in their original order.
    pub fn to_canonical(self) -> [Party; 3] {
        match self {
            Cut::AvsBC => [Party::A, Party::B, Party::C],
            Cut::BvsAC => [Party::B, Party::A, Party::C],
            Cut::CvsAB => [Party::C, Party::A, Party::B],
        }
    }

    pub fn label(self) -> &'static str {
        match self {
            Cut::AvsBC => "A|BC",
            Cut::BvsAC => "B|AC",
            Cut::CvsAB => "C|AB",
        }
    }
}

impl std::fmt::Display for Cut {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(self.label())
    }
}

impl std::str::FromStr for Cut {
    type Err = Error;

    fn from_str(s: &str) -> Result<Cut> {
        match s.trim().to_ascii_uppercase().replace(['-', '_'], "|").as_str() {
            "A|BC" | "A" => Ok(Cut::AvsBC),
            "B|AC" | "B" => Ok(Cut::BvsAC),
            "C|AB" | "C" => Ok(Cut::CvsAB),
            other => Err(Error::Input(format!("unknown cut `{other}` (expected A|BC, B|AC or C|AB)"))),
        }
    }
}

#[inline]
pub fn tri_index(x: usize, y: usize, z: usize, a: usize, b: usize, c: usize) -> usize {
    ((((x * 2 + y) * 2 + z) * 2 + a) * 2 + b) * 2 + c
}

#[inline]
pub fn bi_index(y: usize, z: usize, b: usize, c: usize) -> usize {
    ((y * 2 + z) * 2 + b) * 2 + c
}

#[inline]
pub fn single_index(x: usize, a: usize) -> usize {
    x * 2 + a
}

/// Inverse of [`tri_index`].
pub fn tri_coords(i: usize) -> [usize; 6] {
    [(i >> 5) & 1, (i >> 4) & 1, (i >> 3) & 1, (i >> 2) & 1, (i >> 1) & 1, i & 1]
}

fn max_abs_diff(a: &[f64], b: &[f64]) -> f64 {
    a.iter().zip(b).map(|(x, y)| (x - y).abs()).fold(0.0, f64::max)
}

/// `P(abc|A_x B_y C_z)` as 64 reals.
#[derive(Debug, Clone, PartialEq)]
pub struct TripartiteBox {
    p: Vec<f64>,
    label: Option<String>,
}

impl TripartiteBox {
    pub const LEN: usize = 64;

    pub fn from_entries(p: Vec<f64>) -> Result<Self> {
        if p.len() != Self::LEN {
            return Err(Error::Arity { expected: Self::LEN, got: p.len() });
        }
        Ok(Self { p, label: None })
    }

    pub fn from_fn(f: impl Fn(usize, usize, usize, usize, usize, usize) -> f64) -> Self {
        let p = (0..Self::LEN)
            .map(|i| {
                let [x, y, z, a, b, c] = tri_coords(i);
                f(x, y, z, a, b, c)
            })
            .collect();
        Self { p, label: None }
    }

    /// Every outcome equally likely for every setting triple.
    pub fn uniform() -> Self {
        Self::from_fn(|_, _, _, _, _, _| 0.125).with_label("uniform")
    }

    pub fn with_label(mut self, label: impl Into<String>) -> Self {
        self.label = Some(label.into());
        self
    }

    pub fn label(&self) -> Option<&str> {
        self.label.as_deref()
    }

    #[inline]
    pub fn get(&self, x: usize, y: usize, z: usize, a: usize, b: usize, c: usize) -> f64 {
        self.p[tri_index(x, y, z, a, b, c)]
    }

    pub fn entries(&self) -> &[f64] {
        &self.p
    }

    pub fn max_abs_diff(&self, other: &TripartiteBox) -> f64 {
        max_abs_diff(&self.p, &other.p)
    }

    /// `w * self + (1 - w) * other`.
    pub fn mix(&self, other: &TripartiteBox, w: f64) -> TripartiteBox {
        let p = self.p.iter().zip(&other.p).map(|(s, o)| w * s + (1.0 - w) * o).collect();
        TripartiteBox { p, label: None }
    }

    pub fn validate(&self, tol: f64) -> ValidationReport {
        validate::validate_tripartite(self, tol)
    }

    /// `P(a|A_x)` of one party, other settings fixed to 0.
    pub fn single_marginal(&self, party: Party) -> SingleBox {
        let mut out = vec![0.0; 4];
        for i in 0..Self::LEN {
            let co = tri_coords(i);
            let k = party.index();
            if (0..3).filter(|&j| j != k).all(|j| co[j] == 0) {
                out[single_index(co[k], co[3 + k])] += self.p[i];
            }
        }
        SingleBox { p: out }
    }

    /// Two-party marginal, the dropped party's setting fixed to `dropped_setting`.
    pub fn pair_marginal(&self, pair: Pair, dropped_setting: usize) -> BipartiteBox {
        let (first, second) = pair.parties();
        let (f, s, d) = (first.index(), second.index(), pair.complement().index());
        let mut out = vec![0.0; 16];
        for i in 0..Self::LEN {
            let co = tri_coords(i);
            if co[d] == dropped_setting {
                out[bi_index(co[f], co[s], co[3 + f], co[3 + s])] += self.p[i];
            }
        }
        BipartiteBox { p: out }
    }

    /// Marginal over the parties not in `keep`, with the dropped parties'
    /// settings given in party order.
    pub fn marginal(&self, keep: &[Party], settings_of_dropped: &[usize]) -> Result<MarginalBox> {
        let mut keep: Vec<Party> = keep.to_vec();
        keep.sort();
        keep.dedup();
        if keep.is_empty() {
            return Err(Error::EmptyPartySet);
        }
        let dropped = 3 - keep.len();
        if settings_of_dropped.len() != dropped {
            return Err(Error::Arity { expected: dropped, got: settings_of_dropped.len() });
        }
        if settings_of_dropped.iter().any(|&s| s > 1) {
            return Err(Error::Input("settings are binary".into()));
        }
        match keep.len() {
            3 => Ok(MarginalBox::Tripartite(self.clone())),
            2 => {
                let pair = match (keep[0], keep[1]) {
                    (Party::A, Party::B) => Pair::AB,
                    (Party::A, Party::C) => Pair::AC,
                    _ => Pair::BC,
                };
                Ok(MarginalBox::Bipartite(self.pair_marginal(pair, settings_of_dropped[0])))
            }
            _ => {
                let k = keep[0].index();
                let others: Vec<usize> = (0..3).filter(|&j| j != k).collect();
                let mut out = vec![0.0; 4];
                for i in 0..Self::LEN {
                    let co = tri_coords(i);
                    if co[others[0]] == settings_of_dropped[0] && co[others[1]] == settings_of_dropped[1] {
                        out[single_index(co[k], co[3 + k])] += self.p[i];
                    }
                }
                Ok(MarginalBox::Single(SingleBox { p: out }))
            }
        }
    }

    pub fn correlators(&self) -> CorrelatorSet {
        CorrelatorSet::of_box(self)
    }
}

/// Result of [`TripartiteBox::marginal`].
#[derive(Debug, Clone, PartialEq)]
pub enum MarginalBox {
    Single(SingleBox),
    Bipartite(BipartiteBox),
    Tripartite(TripartiteBox),
}

/// `P(bc|B_y C_z)` as 16 reals in `(y, z, b, c)` order.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct BipartiteBox {
    p: Vec<f64>,
}

impl BipartiteBox {
    pub const LEN: usize = 16;

    pub fn from_entries(p: Vec<f64>) -> Result<Self> {
        if p.len() != Self::LEN {
            return Err(Error::Arity { expected: Self::LEN, got: p.len() });
        }
        Ok(Self { p })
    }

    pub fn from_fn(f: impl Fn(usize, usize, usize, usize) -> f64) -> Self {
        let p = (0..Self::LEN).map(|i| f((i >> 3) & 1, (i >> 2) & 1, (i >> 1) & 1, i & 1)).collect();
        Self { p }
    }

    pub fn uniform() -> Self {
        Self::from_fn(|_, _, _, _| 0.25)
    }

    /// Build from a 4x4 table with rows indexed by settings `yz` and
    /// columns by outcomes `bc`.
    pub fn from_rows(rows: [[f64; 4]; 4]) -> Self {
        Self::from_fn(|y, z, b, c| rows[2 * y + z][2 * b + c])
    }

    #[inline]
    pub fn get(&self, y: usize, z: usize, b: usize, c: usize) -> f64 {
        self.p[bi_index(y, z, b, c)]
    }

    pub fn entries(&self) -> &[f64] {
        &self.p
    }

    pub fn rows(&self) -> [[f64; 4]; 4] {
        let mut r = [[0.0; 4]; 4];
        for (i, v) in self.p.iter().enumerate() {
            r[i / 4][i % 4] = *v;
        }
        r
    }

    pub fn max_abs_diff(&self, other: &BipartiteBox) -> f64 {
        max_abs_diff(&self.p, &other.p)
    }

    /// `⟨B_y C_z⟩` for all four setting pairs.
    pub fn correlators(&self) -> [[f64; 2]; 2] {
        let mut e = [[0.0; 2]; 2];
        for (y, row) in e.iter_mut().enumerate() {
            for (z, v) in row.iter_mut().enumerate() {
                *v = self.get(y, z, 0, 0) - self.get(y, z, 0, 1) - self.get(y, z, 1, 0) + self.get(y, z, 1, 1);
            }
        }
        e
    }

    /// `P(b|B_y)` (first party), second setting fixed to 0.
    pub fn first_marginal(&self) -> SingleBox {
        SingleBox::from_fn(|y, b| self.get(y, 0, b, 0) + self.get(y, 0, b, 1))
    }

    /// `P(c|C_z)` (second party), first setting fixed to 0.
    pub fn second_marginal(&self) -> SingleBox {
        SingleBox::from_fn(|z, c| self.get(0, z, 0, c) + self.get(0, z, 1, c))
    }

    pub fn has_uniform_marginals(&self, tol: f64) -> bool {
        (0..2).all(|y| {
            (0..2).all(|z| {
                let pb = self.get(y, z, 0, 0) + self.get(y, z, 0, 1);
                let pc = self.get(y, z, 0, 0) + self.get(y, z, 1, 0);
                (pb - 0.5).abs() <= tol && (pc - 0.5).abs() <= tol
            })
        })
    }

    pub fn validate(&self, tol: f64) -> ValidationReport {
        validate::validate_bipartite(self, tol)
    }

    /// True iff `P(bc|yz) = P(b|y) P(c|z)` within `tol`.
    pub fn is_product(&self, tol: f64) -> bool {
        let (mb, mc) = (self.first_marginal(), self.second_marginal());
        (0..Self::LEN).all(|i| {
            let (y, z, b, c) = ((i >> 3) & 1, (i >> 2) & 1, (i >> 1) & 1, i & 1);
            (self.p[i] - mb.get(y, b) * mc.get(z, c)).abs() <= tol
        })
    }
}

/// `P(a|A_x)` as 4 reals in `(x, a)` order.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SingleBox {
    p: Vec<f64>,
}

impl SingleBox {
    pub const LEN: usize = 4;

    pub fn from_entries(p: Vec<f64>) -> Result<Self> {
        if p.len() != Self::LEN {
            return Err(Error::Arity { expected: Self::LEN, got: p.len() });
        }
        Ok(Self { p })
    }

    pub fn from_fn(f: impl Fn(usize, usize) -> f64) -> Self {
        Self { p: (0..Self::LEN).map(|i| f(i >> 1, i & 1)).collect() }
    }

    /// `P_D^{αβ}`: outcome `a = αx ⊕ β` with certainty.
    pub fn deterministic(alpha: u8, beta: u8) -> Self {
        let (al, be) = ((alpha & 1) as usize, (beta & 1) as usize);
        Self::from_fn(|x, a| if a == (al * x) ^ be { 1.0 } else { 0.0 })
    }

    /// Probability of outcome 0 for each setting.
    pub fn from_p0(p0: [f64; 2]) -> Self {
        Self::from_fn(|x, a| if a == 0 { p0[x] } else { 1.0 - p0[x] })
    }

    #[inline]
    pub fn get(&self, x: usize, a: usize) -> f64 {
        self.p[single_index(x, a)]
    }

    pub fn entries(&self) -> &[f64] {
        &self.p
    }

    /// `⟨A_x⟩` for both settings.
    pub fn expectations(&self) -> [f64; 2] {
        [self.get(0, 0) - self.get(0, 1), self.get(1, 0) - self.get(1, 1)]
    }

    pub fn is_deterministic(&self, tol: f64) -> bool {
        self.p.iter().all(|v| v.abs() <= tol || (v - 1.0).abs() <= tol)
    }

    pub fn is_uniform(&self, tol: f64) -> bool {
        self.p.iter().all(|v| (v - 0.5).abs() <= tol)
    }

    pub fn max_abs_diff(&self, other: &SingleBox) -> f64 {
        max_abs_diff(&self.p, &other.p)
    }

    pub fn validate(&self, tol: f64) -> ValidationReport {
        validate::validate_single(self, tol)
    }
}
