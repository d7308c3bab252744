//! Checks coincidence rank against the norm of the dilatation.

use num_bigint::BigInt;
use serde::Serialize;

use super::pure_core::{pure_core, PureCore};
use super::semigroup::{coincidence_rank, quotient_by_classes, CoincidenceReport};
use crate::algebra::pisot::divides_power_of;
use crate::algebra::{FieldElement, PisotReport};
use crate::error::{Error, Result};
use crate::measure::letter_set_measure;
use crate::regularity::tile_geometry;
use crate::substitution::{LetterId, Substitution};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub enum CrcVerdict {
    #[serde(rename = "PASS")]
    Pass,
    #[serde(rename = "FAIL")]
    Fail,
    #[serde(rename = "not applicable")]
    NotApplicable,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub enum RankTwoCheck {
    /// cr ≠ 2 as required for homological Pisot substitutions of degree one.
    #[serde(rename = "consistent")]
    Consistent,
    #[serde(rename = "FLAG")]
    Flag,
    /// The substitution is outside the hypothesis.
    #[serde(rename = "vacuous")]
    Vacuous,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct CrcCheck {
    pub verdict: CrcVerdict,
    pub cr: Option<usize>,
    pub norm: String,
    pub cr_not_two: RankTwoCheck,
    pub note: String,
}

/// Verdict from already computed data; `cr` is only meaningful when exact.
pub fn crc_verdict(homological_pisot: bool, degree: usize, norm: &BigInt, cr: Option<usize>) -> CrcCheck {
    let exact = homological_pisot && degree == 1;
    match (exact, cr) {
        (true, Some(c)) => {
            let pass = divides_power_of(&BigInt::from(c), norm);
            CrcCheck {
                verdict: if pass { CrcVerdict::Pass } else { CrcVerdict::Fail },
                cr: Some(c),
                norm: norm.to_string(),
                cr_not_two: if c == 2 {
                    RankTwoCheck::Flag
                } else {
                    RankTwoCheck::Consistent
                },
                note: if pass {
                    format!("every prime factor of cr = {c} divides the norm {norm}")
                } else {
                    format!("cr = {c} has a prime factor not dividing the norm {norm}")
                },
            }
        }
        _ => {
            let reason = if !homological_pisot {
                "not homological Pisot"
            } else {
                "cr is not certified for irrational dilatations"
            };
            let note = match cr {
                Some(c) => format!("{reason}; cr = {c} computed, cr ≠ 2 check is vacuous"),
                None => format!("{reason}; cr ≠ 2 check is vacuous"),
            };
            CrcCheck {
                verdict: CrcVerdict::NotApplicable,
                cr,
                norm: norm.to_string(),
                cr_not_two: RankTwoCheck::Vacuous,
                note,
            }
        }
    }
}

/// Pure core, its coincidence data and the conjecture check for an integer dilatation.
#[derive(Clone, Debug, Serialize)]
pub struct CoincidenceAnalysis {
    #[serde(flatten)]
    pub report: CoincidenceReport,
    pub height: usize,
    pub pure_core: PureCore,
    pub crc: CrcCheck,
}

pub fn coincidence_analysis(
    s: &Substitution,
    pisot: &PisotReport,
    homological_pisot: bool,
) -> Result<CoincidenceAnalysis> {
    let core = pure_core(s, pisot)?;
    let report = coincidence_rank(&core.core)?;
    let crc = crc_verdict(homological_pisot, pisot.degree, &pisot.norm, Some(report.cr));
    Ok(CoincidenceAnalysis {
        height: core.height,
        report,
        pure_core: core,
        crc,
    })
}

/// Letter sets `B_j = {a : f(a) = b_j}` for the distinct values `b_j` of a minimal-image column.
pub fn witness_partition(witness: &[LetterId]) -> Vec<(LetterId, Vec<LetterId>)> {
    let mut values: Vec<LetterId> = witness.to_vec();
    values.sort_unstable();
    values.dedup();
    values
        .into_iter()
        .map(|b| (b, (0..witness.len()).filter(|&a| witness[a] == b).collect()))
        .collect()
}

/// One set `B_j` of the witness partition with its exact measure.
#[derive(Clone, Debug, PartialEq)]
pub struct WitnessSet {
    pub image: String,
    pub letters: Vec<String>,
    pub measure: FieldElement,
}

impl Serialize for WitnessSet {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        use serde::ser::SerializeStruct;
        let mut st = s.serialize_struct("WitnessSet", 4)?;
        st.serialize_field("image", &self.image)?;
        st.serialize_field("letters", &self.letters)?;
        st.serialize_field("measure", &self.measure)?;
        st.serialize_field("measure_display", &self.measure.to_string())?;
        st.end()
    }
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct MeasureWitness {
    pub cr: usize,
    pub sets: Vec<WitnessSet>,
    /// Every set has measure exactly `1/cr`.
    pub all_one_over_cr: bool,
    /// The substitution is homological Pisot, so equal measures are predicted.
    pub within_hypothesis: bool,
}

/// Partitions the alphabet by a minimal-image column and measures each part exactly.
///
/// Strongly coincident letters are identified first.
pub fn measure_fraction_witness(
    s: &Substitution,
    pisot: &PisotReport,
    homological_pisot: bool,
) -> Result<MeasureWitness> {
    let first = coincidence_rank(s)?;
    let (s, report) = if first.strong_classes.iter().any(|c| c.len() > 1) {
        let q = quotient_by_classes(s, &first.strong_classes, first.strong_relation_transitive)?;
        let r = coincidence_rank(&q)?;
        (q, r)
    } else {
        (s.clone(), first)
    };
    let g = tile_geometry(&s, pisot)?;
    let target = g.field.one().scale(&num_rational::BigRational::new(
        BigInt::from(1),
        BigInt::from(report.cr),
    ));
    let mut sets = Vec::new();
    for (b, letters) in witness_partition(&report.witness) {
        let measure = letter_set_measure(&s, &g, &letters)?;
        sets.push(WitnessSet {
            image: s.name(b).to_string(),
            letters: letters.iter().map(|&a| s.name(a).to_string()).collect(),
            measure,
        });
    }
    if sets.len() != report.cr {
        return Err(Error::Internal("witness partition size differs from cr".into()));
    }
    Ok(MeasureWitness {
        cr: report.cr,
        all_one_over_cr: sets.iter().all(|w| w.measure == target),
        sets,
        within_hypothesis: homological_pisot,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn prime_support() {
        assert!(divides_power_of(&3.into(), &9.into()));
        assert!(divides_power_of(&1.into(), &5.into()));
        assert!(divides_power_of(&6.into(), &(-12).into()));
        assert!(!divides_power_of(&2.into(), &9.into()));
    }

    #[test]
    fn verdicts() {
        let c = crc_verdict(true, 1, &9.into(), Some(3));
        assert_eq!(c.verdict, CrcVerdict::Pass);
        assert_eq!(c.cr_not_two, RankTwoCheck::Consistent);
        let c = crc_verdict(false, 1, &2.into(), Some(2));
        assert_eq!(c.verdict, CrcVerdict::NotApplicable);
        assert_eq!(c.cr_not_two, RankTwoCheck::Vacuous);
        assert_eq!(crc_verdict(true, 1, &2.into(), Some(2)).cr_not_two, RankTwoCheck::Flag);
        assert_eq!(crc_verdict(true, 1, &2.into(), Some(3)).verdict, CrcVerdict::Fail);
    }

    #[test]
    fn partition() {
        assert_eq!(
            witness_partition(&[2, 0, 2, 0]),
            vec![(0, vec![1, 3]), (2, vec![0, 2])]
        );
    }

    fn witness(s: &Substitution) -> MeasureWitness {
        let p = crate::algebra::minimal_polynomial_of_dilatation(s).unwrap();
        measure_fraction_witness(s, &p, false).unwrap()
    }

    #[test]
    fn equal_measure_sets() {
        use crate::catalog;
        let w = witness(&catalog::length_nine_cover());
        assert_eq!(w.cr, 3);
        assert!(w.all_one_over_cr);
        let w = witness(&catalog::thue_morse());
        assert_eq!(w.sets.len(), 2);
        assert!(w.all_one_over_cr);
        let w = witness(&catalog::period_doubling());
        assert_eq!(w.sets.len(), 1);
        assert_eq!(w.sets[0].measure.as_rational(), Some(num_rational::BigRational::from_integer(1.into())));
    }
}
