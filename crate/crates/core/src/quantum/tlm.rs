use crate::error::{Error, Result};
use serde::Serialize;
use std::f64::consts::PI;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum TlmVerdict {
    Realizable,
    NotRealizable,
    /// The marginals are biased, where the arcsine test does not decide.
    Unknown,
}

/// Arcsine (Tsirelson-Landau-Masanes) test on `corrs = [c00, c01, c10, c11]`.
///
/// Realizable iff `|Σ asin c_yz − 2 asin c_{y*z*}| ≤ π` for every choice of
/// `(y*, z*)`; `slack` is added to `π`.
pub fn tlm_realizable(corrs: [f64; 4], marginals_unbiased: bool, slack: f64) -> Result<TlmVerdict> {
    if let Some(&v) = corrs.iter().find(|v| !(v.abs() <= 1.0 + slack)) {
        return Err(Error::CorrelatorRange { value: v });
    }
    if !marginals_unbiased {
        return Ok(TlmVerdict::Unknown);
    }
    Ok(if tlm_margin(corrs) <= slack { TlmVerdict::Realizable } else { TlmVerdict::NotRealizable })
}

/// `max_{y*z*} |Σ asin c − 2 asin c*| − π`; nonpositive iff the test passes.
pub fn tlm_margin(corrs: [f64; 4]) -> f64 {
    let s: Vec<f64> = corrs.iter().map(|c| c.clamp(-1.0, 1.0).asin()).collect();
    let total: f64 = s.iter().sum();
    s.iter().map(|a| (total - 2.0 * a).abs()).fold(f64::NEG_INFINITY, f64::max) - PI
}
