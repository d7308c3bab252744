//! Exact tile lengths in ℚ(λ) and empirical fitting of patch-counting functionals.
//!
//! Consecutive supertile boundaries of one type in a fixed-word prefix give
//! return displacements `τ`. The number of occurrences of a patch `p` starting
//! in `[x₀, x₀ + τ)` is fitted, exactly over ℚ, as a linear functional
//! `Σ αᵢ cᵢ(τ)` of the power-basis coordinates of `τ / L`.

use std::collections::{BTreeMap, BTreeSet, HashMap};
use std::sync::Arc;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::Zero;
use serde::ser::SerializeStruct;
use serde::{Serialize, Serializer};

use crate::algebra::linalg::{kernel, rank, solve};
use crate::algebra::{FieldElement, NumberField, PisotReport, Rationals};
use crate::error::{Error, Result};
use crate::rational::{in_z_one_over_a0, rationals_json};
use crate::substitution::{LetterId, Substitution, Word};

/// Default fixed-word prefix length for fits.
pub const DEFAULT_SAMPLE_LEN: usize = 10_000;
/// Fewest return samples accepted from one anchor.
pub const MIN_SAMPLES: usize = 20;

/// Tile lengths `ωᵢ` as a left Perron–Frobenius eigenvector, with the last tile of length 1.
#[derive(Clone, Debug, PartialEq)]
pub struct TileGeometry {
    pub field: Arc<NumberField>,
    pub lengths: Vec<FieldElement>,
    pub base_length: FieldElement,
}

impl Serialize for TileGeometry {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        let mut st = s.serialize_struct("TileGeometry", 3)?;
        st.serialize_field("lengths", &self.lengths)?;
        let shown: Vec<String> = self.lengths.iter().map(|l| l.to_string()).collect();
        st.serialize_field("lengths_display", &shown)?;
        st.serialize_field("L", &self.base_length)?;
        st.end()
    }
}

impl TileGeometry {
    /// Power-basis coordinates of `x / L`.
    pub fn coordinates(&self, x: &FieldElement) -> Result<Vec<BigRational>> {
        Ok(x.div(&self.base_length)?.coords().to_vec())
    }

    /// Exact length of a word.
    pub fn word_length(&self, w: &[LetterId]) -> FieldElement {
        w.iter()
            .fold(self.field.zero(), |acc, &a| acc.add(&self.lengths[a]))
    }
}

pub fn tile_geometry(s: &Substitution, pisot: &PisotReport) -> Result<TileGeometry> {
    let k = &pisot.field;
    let a = s.abelianization();
    let n = s.size();
    let lambda = k.lambda();
    let m: Vec<Vec<FieldElement>> = (0..n)
        .map(|j| {
            (0..n)
                .map(|i| {
                    let e = k.from_int(a.get(i, j).clone());
                    if i == j {
                        e.sub(&lambda)
                    } else {
                        e
                    }
                })
                .collect()
        })
        .collect();
    let ker = kernel(k, &m, n);
    if ker.len() != 1 {
        return Err(Error::Internal(format!(
            "left eigenspace of λ has dimension {}",
            ker.len()
        )));
    }
    let last = ker[0][n - 1].clone();
    let lengths: Vec<FieldElement> = ker[0]
        .iter()
        .map(|x| x.div(&last))
        .collect::<Result<_>>()?;
    for (i, l) in lengths.iter().enumerate() {
        if !l.is_positive()? {
            return Err(Error::Internal(format!(
                "tile length of {} is not positive",
                s.name(i)
            )));
        }
    }
    Ok(TileGeometry {
        field: k.clone(),
        lengths,
        base_length: k.one(),
    })
}

/// Occurrences of `p` starting at positions `q` with `from ≤ q < to`.
pub fn count_occurrences(w: &[LetterId], p: &[LetterId], from: usize, to: usize) -> usize {
    if p.is_empty() || p.len() > w.len() {
        return 0;
    }
    (from..to.min(w.len() - p.len() + 1))
        .filter(|&q| &w[q..q + p.len()] == p)
        .count()
}

#[derive(Clone, Debug, PartialEq)]
pub struct ErpFit {
    pub patch: Word,
    pub patch_display: String,
    /// `None` when no exact functional fits the samples.
    pub alphas: Option<Vec<BigRational>>,
    pub residual_zero: bool,
    pub samples: usize,
    pub distinct_samples: usize,
    pub rank: usize,
    /// Supertile level of the sampled boundaries.
    pub level: u32,
    /// Number of boundary transition types `φᵐ(x)|φᵐ(y)` sampled.
    pub transitions: usize,
    pub sample_len: usize,
    pub base_length: FieldElement,
    pub a0_membership: Vec<bool>,
    pub notes: Vec<String>,
}

impl ErpFit {
    pub fn in_z_one_over_a0(&self) -> bool {
        self.alphas.is_some() && self.a0_membership.iter().all(|&b| b)
    }
}

impl Serialize for ErpFit {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        let mut st = s.serialize_struct("ErpFit", 12)?;
        st.serialize_field("patch", &self.patch_display)?;
        st.serialize_field("alphas", &self.alphas.as_deref().map(rationals_json))?;
        st.serialize_field("residual_zero", &self.residual_zero)?;
        st.serialize_field("samples", &self.samples)?;
        st.serialize_field("distinct_samples", &self.distinct_samples)?;
        st.serialize_field("rank", &self.rank)?;
        st.serialize_field("level", &self.level)?;
        st.serialize_field("transitions", &self.transitions)?;
        st.serialize_field("sample_len", &self.sample_len)?;
        st.serialize_field("L", &self.base_length)?;
        st.serialize_field("a0_membership", &self.a0_membership)?;
        st.serialize_field("notes", &self.notes)?;
        st.end()
    }
}

/// Returns between consecutive level-`m` supertile boundaries of the same transition type.
struct LevelSamples {
    /// Transition types contributing at least one window.
    transitions: usize,
    /// `φᵐ` applied to a fixed-word prefix.
    word: Word,
    windows: Vec<(usize, usize)>,
    coords: Vec<Vec<BigRational>>,
    rank: usize,
    distinct: usize,
}

fn level_samples(
    power: &Substitution,
    u: &[LetterId],
    tile_coords: &[Vec<BigRational>],
) -> LevelSamples {
    let d = tile_coords[0].len();
    let mut starts = Vec::with_capacity(u.len() + 1);
    let mut word = Vec::new();
    for &a in u {
        starts.push(word.len());
        word.extend_from_slice(power.rule(a));
    }
    starts.push(word.len());
    let k = tile_coords.len();
    let mut counts = vec![0u32; (u.len() + 1) * k];
    for (i, &a) in u.iter().enumerate() {
        let (done, next) = counts.split_at_mut((i + 1) * k);
        next[..k].copy_from_slice(&done[i * k..]);
        next[a] += 1;
    }
    let mut by_type: BTreeMap<(LetterId, LetterId), Vec<usize>> = BTreeMap::new();
    for i in 1..u.len() {
        by_type.entry((u[i - 1], u[i])).or_default().push(i);
    }
    let mut windows = Vec::new();
    let mut coords = Vec::new();
    let mut transitions = 0;
    for idx in by_type.values().filter(|v| v.len() > 1) {
        transitions += 1;
        for pair in idx.windows(2) {
            let (i, j) = (pair[0], pair[1]);
            let mut c = vec![BigRational::zero(); d];
            for (a, tc) in tile_coords.iter().enumerate() {
                let n = counts[j * k + a] - counts[i * k + a];
                if n > 0 {
                    let n = BigRational::from_integer(BigInt::from(n));
                    for (ci, t) in c.iter_mut().zip(tc) {
                        *ci += &n * t;
                    }
                }
            }
            windows.push((starts[i], starts[j]));
            coords.push(c);
        }
    }
    let distinct: Vec<Vec<BigRational>> = coords.iter().cloned().collect::<BTreeSet<_>>().into_iter().collect();
    LevelSamples {
        transitions,
        rank: if distinct.is_empty() { 0 } else { rank(&Rationals, &distinct) },
        distinct: distinct.len(),
        word,
        windows,
        coords,
    }
}

/// Exact fit of `count = Σ αᵢ cᵢ(τ)` over the sampled windows.
fn solve_counts(samples: &LevelSamples, p: &[LetterId]) -> Option<Vec<BigRational>> {
    let word = &samples.word;
    let mut occ_prefix = vec![0usize; word.len() + 1];
    for q in 0..word.len() {
        let hit = q + p.len() <= word.len() && &word[q..q + p.len()] == p;
        occ_prefix[q + 1] = occ_prefix[q] + usize::from(hit);
    }
    let rows: BTreeSet<(Vec<BigRational>, usize)> = samples
        .windows
        .iter()
        .zip(&samples.coords)
        .map(|(&(x0, x1), c)| (c.clone(), occ_prefix[x1] - occ_prefix[x0]))
        .collect();
    let m: Vec<Vec<BigRational>> = rows.iter().map(|(c, _)| c.clone()).collect();
    let b: Vec<BigRational> = rows
        .iter()
        .map(|(_, n)| BigRational::from_integer(BigInt::from(*n)))
        .collect();
    solve(&Rationals, &m, &b)
}

/// Deepest supertile level tried for one patch.
pub const MAX_LEVEL: u32 = 8;
/// Sampled words never exceed this multiple of the requested prefix length.
const MAX_PREFIX_FACTOR: usize = 64;

/// Fits patch-counting functionals, sharing sampled prefixes between patches.
///
/// Samples are the returns between level-`m` supertile boundaries `φᵐ(x)|φᵐ(y)`
/// of equal type, pooled over all types. A counting cochain differs from a length functional by a
/// coboundary, which becomes a function of the level-`m` transition once `m`
/// is large enough, so it cancels over such returns.
pub struct ErpFitter<'a> {
    s: &'a Substitution,
    geometry: &'a TileGeometry,
    a0: BigInt,
    sample_len: usize,
    levels: HashMap<u32, Option<LevelSamples>>,
}

impl<'a> ErpFitter<'a> {
    pub fn new(s: &'a Substitution, geometry: &'a TileGeometry, a0: &BigInt, sample_len: usize) -> Result<Self> {
        if sample_len == 0 {
            return Err(Error::Validation("sample length must be positive".into()));
        }
        Ok(Self {
            s,
            geometry,
            a0: a0.clone(),
            sample_len,
            levels: HashMap::new(),
        })
    }

    fn build_level(&self, m: u32) -> Result<Option<LevelSamples>> {
        let d = self.geometry.field.degree();
        let power = if m == 0 {
            Substitution::new(self.s.names().to_vec(), (0..self.s.size()).map(|a| vec![a]).collect())?
        } else {
            self.s.power(m as usize)?
        };
        let lambda_m = (0..m).fold(self.geometry.field.one(), |acc, _| acc.mul(&self.geometry.field.lambda()));
        let tile_coords = self
            .geometry
            .lengths
            .iter()
            .map(|l| self.geometry.coordinates(&l.mul(&lambda_m)))
            .collect::<Result<Vec<_>>>()?;
        let max_len = self.sample_len.saturating_mul(MAX_PREFIX_FACTOR);
        let growth = self.geometry.field.approx().powi(m as i32);
        let mut u_len = ((self.sample_len as f64 / growth).ceil() as usize).max(64);
        loop {
            let u = self.s.any_fixed_point_prefix(u_len)?.word;
            let image_len: usize = u.iter().map(|&a| power.rule(a).len()).sum();
            if image_len > max_len {
                return Ok(None);
            }
            let ls = level_samples(&power, &u, &tile_coords);
            if ls.windows.len() >= MIN_SAMPLES && ls.rank == d {
                return Ok(Some(ls));
            }
            u_len *= 2;
        }
    }

    fn level(&mut self, m: u32) -> Result<Option<&LevelSamples>> {
        if !self.levels.contains_key(&m) {
            let ls = self.build_level(m)?;
            self.levels.insert(m, ls);
        }
        Ok(self.levels[&m].as_ref())
    }

    /// Fits patch `p`, raising the supertile level until the fit is exact.
    pub fn fit(&mut self, p: &[LetterId]) -> Result<ErpFit> {
        let s = self.s;
        if p.is_empty() || !s.is_allowed(p)? {
            return Err(Error::Validation(format!(
                "patch {:?} is not an allowed word",
                s.display_word(p)
            )));
        }
        // the letters after a boundary that a straddling occurrence reads must lie in φᵐ(y)
        let mut first = 0u32;
        let mut shortest = 1usize;
        while shortest + 1 < p.len() {
            if first == 64 {
                return Err(Error::Precondition("rules do not grow".into()));
            }
            first += 1;
            shortest = s.power(first as usize)?.rule_lengths().into_iter().min().unwrap_or(0);
        }
        let mut notes = Vec::new();
        let mut last = None;
        for m in first..=first + MAX_LEVEL {
            let Some(ls) = self.level(m)? else {
                notes.push(format!("level {m} needs a prefix longer than the cap"));
                break;
            };
            let alphas = solve_counts(ls, p);
            let exact = alphas.is_some();
            last = Some((m, alphas));
            if exact {
                break;
            }
            notes.push(format!("no exact fit at level {m}"));
        }
        let Some((level, alphas)) = last else {
            return Err(Error::Indeterminate(format!(
                "too few independent returns for {}",
                s.display_word(p)
            )));
        };
        let ls = self.levels[&level].as_ref().expect("level sampled");
        let a0_membership = alphas
            .as_ref()
            .map(|v| v.iter().map(|q| in_z_one_over_a0(q, &self.a0)).collect())
            .unwrap_or_default();
        Ok(ErpFit {
            patch: p.to_vec(),
            patch_display: s.display_word(p),
            residual_zero: alphas.is_some(),
            alphas,
            samples: ls.windows.len(),
            distinct_samples: ls.distinct,
            rank: ls.rank,
            level,
            transitions: ls.transitions,
            sample_len: ls.word.len(),
            base_length: self.geometry.base_length.clone(),
            a0_membership,
            notes,
        })
    }
}

/// Fits the counting functional of one patch on a fixed-word prefix of length `sample_len`.
pub fn fit_erp_functional(
    s: &Substitution,
    geometry: &TileGeometry,
    a0: &BigInt,
    p: &[LetterId],
    sample_len: usize,
) -> Result<ErpFit> {
    ErpFitter::new(s, geometry, a0, sample_len)?.fit(p)
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub enum ErpVerdict {
    #[serde(rename = "ERP verified (empirically)")]
    Verified,
    /// An exact failure on a homological Pisot input.
    #[serde(rename = "FLAG")]
    Flag,
    /// Failures on an input that is not homological Pisot, which is expected.
    #[serde(rename = "fails, consistent with not homological Pisot")]
    ConsistentFailure,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct ErpReport {
    pub verdict: ErpVerdict,
    pub geometry: TileGeometry,
    pub fits: Vec<ErpFit>,
}

/// Letters, then allowed words of length 2 and 3, in lexicographic order of letter ids.
pub fn default_patches(s: &Substitution, limit: Option<usize>) -> Result<Vec<Word>> {
    let mut out: Vec<Word> = (0..s.size()).map(|a| vec![a]).collect();
    for len in 2..=3 {
        out.extend(s.words_of_length(len)?);
    }
    if let Some(n) = limit {
        out.truncate(n);
    }
    Ok(out)
}

pub fn verify_erp(
    s: &Substitution,
    pisot: &PisotReport,
    homological_pisot: bool,
    patches: &[Word],
    sample_len: usize,
) -> Result<ErpReport> {
    let geometry = tile_geometry(s, pisot)?;
    let mut fitter = ErpFitter::new(s, &geometry, &pisot.a0, sample_len)?;
    let fits = patches
        .iter()
        .map(|p| fitter.fit(p))
        .collect::<Result<Vec<_>>>()?;
    let ok = fits.iter().all(ErpFit::in_z_one_over_a0);
    let verdict = if ok {
        ErpVerdict::Verified
    } else if homological_pisot {
        ErpVerdict::Flag
    } else {
        ErpVerdict::ConsistentFailure
    };
    Ok(ErpReport {
        verdict,
        geometry,
        fits,
    })
}
