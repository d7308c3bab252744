//! The full analysis of one substitution, as a single serializable report.

use std::collections::BTreeMap;

use hpisot::algebra::{minimal_polynomial_of_dilatation, Factorization, PisotReport};
use hpisot::coincidence::{
    coincidence_analysis, measure_fraction_witness, CoincidenceAnalysis, CrcVerdict, MeasureWitness,
};
use hpisot::coincidence::crc::RankTwoCheck;
use hpisot::cohomology::{cohomology_report, CohomologyOptions, CohomologyReport};
use hpisot::measure::{
    cylinder_measure, describe_measure, lattice_hypothesis, CylinderMeasure, Divisibility,
    LatticeHypothesis,
};
use hpisot::regularity::{default_patches, tile_geometry, verify_erp, ErpReport, DEFAULT_SAMPLE_LEN};
use hpisot::substitution::{Primitivity, DEFAULT_MAX_WORD_LENGTH};
use hpisot::{Error, IntegerMatrix, Result, Substitution, Word};
use serde::{Deserialize, Serialize};

/// Longest patch measured by default.
const MEASURE_PATCH_LEN: usize = 2;

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct AnalysisOptions {
    pub assert_lattices_equal: bool,
    /// Number of patches fitted, in the order letters, 2-words, 3-words. `None` fits all.
    pub erp_patches: Option<usize>,
    pub sample_len: usize,
    pub max_word_length: usize,
}

impl Default for AnalysisOptions {
    fn default() -> Self {
        Self {
            assert_lattices_equal: false,
            erp_patches: None,
            sample_len: DEFAULT_SAMPLE_LEN,
            max_word_length: DEFAULT_MAX_WORD_LENGTH,
        }
    }
}

impl AnalysisOptions {
    /// The ERP fitter may enlarge the prefix fourfold.
    pub fn check(&self) -> Result<()> {
        if self.sample_len == 0 {
            return Err(Error::Validation("sample length must be positive".into()));
        }
        match self.sample_len.checked_mul(4) {
            Some(n) if n <= self.max_word_length => Ok(()),
            _ => Err(Error::ResourceLimit(format!(
                "sample length {} may grow to four times its size, beyond the word length cap {}",
                self.sample_len, self.max_word_length
            ))),
        }
    }
}

/// Results whose hypotheses were met; absent keys were not evaluated.
#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize)]
pub struct Verdicts {
    pub homological_pisot: bool,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub crc: Option<CrcVerdict>,
    /// Homological Pisot with equal tile and return lattices, the hypothesis of the measure bounds.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub measure_theorems_apply: Option<bool>,
    /// Every measured value has an integral numerator over `a₀ᵏ p′(λ)`.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub measure_numerators_integral: Option<bool>,
    /// Rational measure denominators divide `a₀ᵏ` times the content of `p′`.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub measure_denominators_derivative_bound: Option<Divisibility>,
    /// Rational measure denominators divide `d·a₀ᵏ`.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub measure_denominators_degree_bound: Option<Divisibility>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub witness_sets_equal_measure: Option<bool>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub cr_not_two: Option<RankTwoCheck>,
}

#[derive(Clone, Debug, Serialize)]
pub struct AnalysisReport {
    pub substitution: Substitution,
    pub abelianization: IntegerMatrix,
    /// Rational eigenvalues of the abelianization with multiplicity, largest first.
    pub rational_eigenvalues: Vec<String>,
    pub primitivity: Primitivity,
    pub pisot: PisotReport,
    pub cohomology: CohomologyReport,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub coincidence: Option<CoincidenceAnalysis>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub measure_witness: Option<MeasureWitness>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub erp: Option<ErpReport>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub measures: Option<Vec<CylinderMeasure>>,
    /// Analysis name ↦ why it did not run.
    pub skipped: BTreeMap<String, String>,
    pub verdicts: Verdicts,
}

/// Rational roots of a factorization, repeated by multiplicity, largest first.
pub fn rational_eigenvalues(f: &Factorization) -> Vec<String> {
    let mut roots: Vec<num_rational::BigRational> = Vec::new();
    for (p, e) in &f.factors {
        if p.deg() == 1 {
            let c = p.coeffs();
            let r = num_rational::BigRational::new(-c[0].clone(), c[1].clone());
            roots.extend(std::iter::repeat_n(r, *e as usize));
        }
    }
    roots.sort_by(|a, b| b.cmp(a));
    roots.iter().map(hpisot::rational::rational_display).collect()
}

/// Errors that make an optional analysis inapplicable rather than fatal.
fn skippable(e: &Error) -> bool {
    matches!(
        e,
        Error::Precondition(_) | Error::Indeterminate(_) | Error::ResourceLimit(_)
    )
}

fn optional<T>(skipped: &mut BTreeMap<String, String>, key: &str, r: Result<T>) -> Result<Option<T>> {
    match r {
        Ok(v) => Ok(Some(v)),
        Err(e) if skippable(&e) => {
            skipped.insert(key.into(), e.to_string());
            Ok(None)
        }
        Err(e) => Err(e),
    }
}

/// Combines per-measure verdicts: FAIL wins, then PASS; all inapplicable gives `None`.
fn combine(vs: impl IntoIterator<Item = Divisibility>) -> Option<Divisibility> {
    let mut out = None;
    for v in vs {
        match v {
            Divisibility::Fail => return Some(Divisibility::Fail),
            Divisibility::Pass => out = Some(Divisibility::Pass),
            Divisibility::NotApplicable => {}
        }
    }
    out
}

/// Letters, then allowed words up to `MEASURE_PATCH_LEN`.
fn measure_patches(s: &Substitution) -> Result<Vec<Word>> {
    let mut out: Vec<Word> = (0..s.size()).map(|a| vec![a]).collect();
    for len in 2..=MEASURE_PATCH_LEN {
        out.extend(s.words_of_length(len)?);
    }
    Ok(out)
}

pub fn measures(
    s: &Substitution,
    pisot: &PisotReport,
    patches: &[Word],
    lattice: LatticeHypothesis,
) -> Result<Vec<CylinderMeasure>> {
    let g = tile_geometry(s, pisot)?;
    patches
        .iter()
        .map(|p| cylinder_measure(s, &g, pisot, p, lattice))
        .collect()
}

pub fn analyze(s: &Substitution, opts: &AnalysisOptions) -> Result<AnalysisReport> {
    opts.check()?;
    let primitivity = s.is_primitive();
    if !primitivity.primitive {
        return Err(Error::Precondition("substitution is not primitive".into()));
    }
    let pisot = minimal_polynomial_of_dilatation(s)?;
    let cohomology = cohomology_report(s, &pisot, CohomologyOptions::default())?;
    let hp = cohomology.homological_pisot;
    let mut skipped = BTreeMap::new();
    let mut verdicts = Verdicts {
        homological_pisot: hp,
        ..Verdicts::default()
    };

    let (coincidence, measure_witness) = if pisot.degree == 1 {
        let c = optional(&mut skipped, "coincidence", coincidence_analysis(s, &pisot, hp))?;
        let w = if s.constant_length().is_some() {
            optional(&mut skipped, "measure_witness", measure_fraction_witness(s, &pisot, hp))?
        } else {
            skipped.insert(
                "measure_witness".into(),
                "rules are not of constant length".into(),
            );
            None
        };
        (c, w)
    } else {
        let why = "dilatation is irrational";
        skipped.insert("coincidence".into(), why.into());
        skipped.insert("measure_witness".into(), why.into());
        (None, None)
    };
    if let Some(c) = &coincidence {
        if c.crc.verdict != CrcVerdict::NotApplicable {
            verdicts.crc = Some(c.crc.verdict);
        }
        verdicts.cr_not_two = Some(c.crc.cr_not_two);
    }
    if let Some(w) = &measure_witness {
        if w.within_hypothesis {
            verdicts.witness_sets_equal_measure = Some(w.all_one_over_cr);
        }
    }

    let erp = if hp {
        let patches = default_patches(s, opts.erp_patches)?;
        optional(&mut skipped, "erp", verify_erp(s, &pisot, hp, &patches, opts.sample_len))?
    } else {
        skipped.insert("erp".into(), "not homological Pisot".into());
        None
    };

    let lattice = optional(
        &mut skipped,
        "measures",
        lattice_hypothesis(s, &pisot, opts.assert_lattices_equal),
    )?;
    let measures = match lattice {
        Some(l) => optional(&mut skipped, "measures", measures(s, &pisot, &measure_patches(s)?, l))?,
        None => None,
    };
    if let Some(ms) = &measures {
        verdicts.measure_theorems_apply = Some(hp);
        verdicts.measure_numerators_integral = Some(ms.iter().all(CylinderMeasure::integer_numerator));
        let mut described: Vec<CylinderMeasure> = ms.clone();
        if let Some(w) = &measure_witness {
            described.extend(w.sets.iter().map(|set| {
                describe_measure(set.image.clone(), set.measure.clone(), &pisot, ms[0].lattice)
            }));
        }
        verdicts.measure_denominators_derivative_bound =
            combine(described.iter().map(|m| m.derivative_content));
        verdicts.measure_denominators_degree_bound = combine(described.iter().map(|m| m.degree_bound));
    }

    Ok(AnalysisReport {
        substitution: s.clone(),
        abelianization: s.abelianization(),
        rational_eigenvalues: rational_eigenvalues(&pisot.factorization),
        primitivity,
        pisot,
        cohomology,
        coincidence,
        measure_witness,
        erp,
        measures,
        skipped,
        verdicts,
    })
}

/// Short exit-status class of an error.
pub fn exit_code(e: &Error) -> i32 {
    match e {
        Error::Parse(_) | Error::Validation(_) | Error::Cover(_) => 2,
        _ => 1,
    }
}

