use super::variants::{describe, evaluate, mermin_variants, svetlichny_variants, MERMIN_BOUND, SVETLICHNY_BOUND};
use crate::boxes::{BipartiteBox, TripartiteBox};
use serde::Serialize;

/// Value of the best variant of an inequality family.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct InequalityResult {
    pub name: &'static str,
    pub value: f64,
    pub bound: f64,
    pub variant_index: usize,
    pub variant: String,
    pub violated: bool,
}

fn result(name: &'static str, values: impl Iterator<Item = f64>, bound: f64, describe: impl Fn(usize) -> String, tol: f64) -> InequalityResult {
    let (variant_index, value) = values
        .enumerate()
        .fold((0, f64::NEG_INFINITY), |best, (i, v)| if v > best.1 + 1e-15 { (i, v) } else { best });
    InequalityResult { name, value, bound, variant_index, variant: describe(variant_index), violated: value > bound + tol }
}

/// Maximum over the 16 Mermin expressions; local bound 2.
pub fn mermin_value(bx: &TripartiteBox, tol: f64) -> InequalityResult {
    let cs = bx.correlators();
    let vs = mermin_variants();
    result("mermin", vs.iter().map(|m| evaluate(m, &cs)), MERMIN_BOUND, |i| describe(&vs[i]), tol)
}

/// Maximum over `S_{αβγε}`, indexed `8α + 4β + 2γ + ε`; two-way-local bound 4.
pub fn svetlichny_value(bx: &TripartiteBox, tol: f64) -> InequalityResult {
    let cs = bx.correlators();
    let vs = svetlichny_variants();
    result(
        "svetlichny",
        vs.iter().map(|m| evaluate(m, &cs)),
        SVETLICHNY_BOUND,
        |i| format!("S_{}{}{}{}", (i >> 3) & 1, (i >> 2) & 1, (i >> 1) & 1, i & 1),
        tol,
    )
}

/// CHSH sign pattern `(-1)^{yz ⊕ αy ⊕ βz ⊕ γ}` for index `4α + 2β + γ`.
pub fn chsh_sign(index: usize, y: usize, z: usize) -> f64 {
    let (al, be, ga) = ((index >> 2) & 1, (index >> 1) & 1, index & 1);
    if ((y & z) ^ (al * y) ^ (be * z) ^ ga) & 1 == 0 {
        1.0
    } else {
        -1.0
    }
}

/// Maximum over the 8 CHSH expressions; local bound 2.
pub fn chsh_value(bx: &BipartiteBox, tol: f64) -> InequalityResult {
    let e = bx.correlators();
    let vals = (0..8).map(|k| (0..4).map(|i| chsh_sign(k, i >> 1, i & 1) * e[i >> 1][i & 1]).sum::<f64>());
    result("chsh", vals, 2.0, |k| format!("CHSH_{}{}{}", (k >> 2) & 1, (k >> 1) & 1, k & 1), tol)
}

/// Formula used by [`steering_chsh_value`], with the first party steering
/// the second.
pub const STEERING_CHSH_FORMULA: &str =
    "sqrt(<(B0+B1)C0>^2 + <(B0+B1)C1>^2) + sqrt(<(B0-B1)C0>^2 + <(B0-B1)C1>^2) <= 2";

/// Steering analogue of CHSH; a valid bound for mutually unbiased trusted
/// measurements.
pub fn steering_chsh_value(bx: &BipartiteBox, tol: f64) -> InequalityResult {
    let e = bx.correlators();
    let plus = ((e[0][0] + e[1][0]).powi(2) + (e[0][1] + e[1][1]).powi(2)).sqrt();
    let minus = ((e[0][0] - e[1][0]).powi(2) + (e[0][1] - e[1][1]).powi(2)).sqrt();
    let value = plus + minus;
    InequalityResult {
        name: "steering_chsh",
        value,
        bound: 2.0,
        variant_index: 0,
        variant: STEERING_CHSH_FORMULA.into(),
        violated: value > 2.0 + tol,
    }
}
