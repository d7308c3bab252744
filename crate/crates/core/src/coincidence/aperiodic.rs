//! Heuristic aperiodicity test.

use serde::Serialize;

use crate::algebra::PisotReport;
use crate::error::Result;
use crate::substitution::Substitution;

/// Longest prefix examined for integer dilatations.
const MAX_PREFIX: usize = 2_000_000;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum AperiodicVerdict {
    Aperiodic,
    Periodic,
    Unknown,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Aperiodicity {
    pub verdict: AperiodicVerdict,
    /// How the verdict was reached.
    pub evidence: String,
    pub period: Option<usize>,
}

/// Irrational dilatations force aperiodicity. For an integer dilatation `N`
/// a fixed-word prefix of length `max(10⁴, (N·|A|)³)` is searched for a
/// period up to `|A|·N²`; absence of one is reported as aperiodic.
pub fn aperiodicity_check(s: &Substitution, pisot: &PisotReport) -> Result<Aperiodicity> {
    if pisot.degree >= 2 {
        return Ok(Aperiodicity {
            verdict: AperiodicVerdict::Aperiodic,
            evidence: format!("dilatation is irrational (degree {})", pisot.degree),
            period: None,
        });
    }
    let n = usize::try_from(-pisot.a0.clone()).unwrap_or(usize::MAX);
    let k = s.size();
    let wanted = (n.saturating_mul(k)).saturating_pow(3).max(10_000);
    let len = wanted.min(MAX_PREFIX);
    let max_period = k.saturating_mul(n).saturating_mul(n);
    let fp = s.any_fixed_point_prefix(len)?;
    let w = &fp.word;
    for p in 1..=max_period.min(w.len() / 2) {
        if (p..w.len()).all(|i| w[i] == w[i - p]) {
            return Ok(Aperiodicity {
                verdict: AperiodicVerdict::Periodic,
                evidence: format!("fixed-word prefix of length {} has period {p}", w.len()),
                period: Some(p),
            });
        }
    }
    let mut evidence = format!(
        "no period up to {max_period} in a fixed-word prefix of length {} (heuristic)",
        w.len()
    );
    if len < wanted {
        evidence.push_str(&format!("; prefix capped below the target length {wanted}"));
    }
    Ok(Aperiodicity {
        verdict: AperiodicVerdict::Aperiodic,
        evidence,
        period: None,
    })
}
