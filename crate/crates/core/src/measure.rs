//! Exact patch frequencies and cylinder-set measures in ℚ(λ).
//!
//! Frequencies of ℓ-words come from the collared substitution. The measure of
//! the set of tilings whose origin lies in an occurrence of `p` is the sum,
//! over allowed words `Q` of length `2|p| − 1` in which some occurrence of `p`
//! covers the middle letter, of `freq(Q)·ω(middle letter)`.

use std::collections::HashMap;
use std::sync::Arc;

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};
use serde::ser::SerializeStruct;
use serde::{Serialize, Serializer};

use crate::algebra::linalg::kernel;
use crate::algebra::{FieldElement, IntPolynomial, NumberField, PisotReport};
use crate::coincidence::pure_core::pure_core;
use crate::error::{Error, Result};
use crate::matrix::IntegerMatrix;
use crate::rational::{rational_display, RationalJson};
use crate::regularity::TileGeometry;
use crate::substitution::{LetterId, Substitution, Word};

/// Largest `k` tried when clearing powers of `a₀` from a measure.
pub const MAX_A0_POWER: u32 = 64;

/// Companion matrix of a monic `p`: ones below the diagonal, last column `−a₀, …, −a_{d−1}`.
pub fn companion_matrix(p: &IntPolynomial) -> Vec<Vec<BigInt>> {
    let d = p.deg();
    let mut c = vec![vec![BigInt::zero(); d]; d];
    for j in 1..d {
        c[j][j - 1] = BigInt::one();
    }
    for (j, row) in c.iter_mut().enumerate() {
        row[d - 1] = -p.coeff(j);
    }
    c
}

/// `r_j = (λ^{d−1−j} + a_{d−1}λ^{d−2−j} + ⋯ + a_{j+1}) / p′(λ)`, with
/// `C r = λ r` and `Σ λ^j r_j = 1` checked exactly.
pub fn companion_limit_vector(field: &Arc<NumberField>) -> Result<Vec<FieldElement>> {
    let p = field.min_poly();
    let d = field.degree();
    let lambda = field.lambda();
    let dp = field.p_prime_at_lambda();
    let mut r = Vec::with_capacity(d);
    for j in 0..d {
        let mut num = field.zero();
        for i in (j + 1..=d).rev() {
            num = num.mul(&lambda).add(&field.from_int(p.coeff(i)));
        }
        r.push(num.div(&dp)?);
    }
    let c = companion_matrix(p);
    for (i, row) in c.iter().enumerate() {
        let lhs = row
            .iter()
            .zip(&r)
            .fold(field.zero(), |acc, (cij, rj)| acc.add(&rj.scale(&BigRational::from_integer(cij.clone()))));
        if lhs != lambda.mul(&r[i]) {
            return Err(Error::Internal("companion limit vector is not an eigenvector".into()));
        }
    }
    let norm = r
        .iter()
        .enumerate()
        .fold(field.zero(), |acc, (j, rj)| acc.add(&lambda.pow(j as u32).mul(rj)));
    if norm != field.one() {
        return Err(Error::Internal("companion limit vector is not normalized".into()));
    }
    Ok(r)
}

/// The substitution induced on allowed ℓ-words.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CollaredSubstitution {
    pub ell: usize,
    pub words: Vec<Word>,
    /// Rule of each collared letter, as indices into `words`.
    pub rules: Vec<Vec<usize>>,
    index: HashMap<Word, usize>,
}

impl CollaredSubstitution {
    pub fn size(&self) -> usize {
        self.words.len()
    }

    pub fn index_of(&self, w: &[LetterId]) -> Option<usize> {
        self.index.get(w).copied()
    }

    /// Entry `(u, w)` counts `u` in the rule of `w`.
    pub fn abelianization(&self) -> IntegerMatrix {
        let n = self.size();
        let mut m = IntegerMatrix::zeros(n);
        for (w, rule) in self.rules.iter().enumerate() {
            for &u in rule {
                let v = m.get(u, w) + 1;
                m.set(u, w, v);
            }
        }
        m
    }
}

/// `w₁…w_ℓ` maps to the `|φ(w₁)|` consecutive ℓ-windows of `φ(w)` starting at offset 0.
pub fn collar(s: &Substitution, ell: usize) -> Result<CollaredSubstitution> {
    if ell == 0 {
        return Err(Error::Validation("collar length must be positive".into()));
    }
    let words = s.words_of_length(ell)?;
    let index: HashMap<Word, usize> = words.iter().cloned().zip(0..).collect();
    let mut rules = Vec::with_capacity(words.len());
    for w in &words {
        let image = s.apply(w);
        let first = s.rule(w[0]).len();
        let rule = (0..first)
            .map(|o| {
                index.get(&image[o..o + ell]).copied().ok_or_else(|| {
                    Error::Internal(format!(
                        "window {} of the image of {} is not allowed",
                        s.display_word(&image[o..o + ell]),
                        s.display_word(w)
                    ))
                })
            })
            .collect::<Result<Vec<_>>>()?;
        rules.push(rule);
    }
    Ok(CollaredSubstitution {
        ell,
        words,
        rules,
        index,
    })
}

/// Occurrences per unit length of each collared letter.
#[derive(Clone, Debug, PartialEq)]
pub struct FrequencyVector {
    pub freq: Vec<FieldElement>,
}

fn eigen_frequencies(c: &CollaredSubstitution, g: &TileGeometry) -> Result<Vec<FieldElement>> {
    let k = &g.field;
    let a = c.abelianization();
    let n = c.size();
    let lambda = k.lambda();
    let m: Vec<Vec<FieldElement>> = (0..n)
        .map(|i| {
            (0..n)
                .map(|j| {
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
            "eigenspace of λ for {}-words has dimension {}",
            c.ell,
            ker.len()
        )));
    }
    normalize(c, g, ker.into_iter().next().expect("one kernel vector"))
}

fn normalize(c: &CollaredSubstitution, g: &TileGeometry, v: Vec<FieldElement>) -> Result<Vec<FieldElement>> {
    let total = c
        .words
        .iter()
        .zip(&v)
        .fold(g.field.zero(), |acc, (w, f)| acc.add(&f.mul(&g.lengths[w[0]])));
    v.iter().map(|f| f.div(&total)).collect()
}

/// Frequencies of ℓ-words. For `ℓ ≤ 2` they are read from the eigenvector of
/// the collared matrix; longer words are counted inside `φⁿ(ab)` for allowed
/// pairs `ab`, with `n` large enough that every rule of `φⁿ` has length `≥ ℓ − 1`.
pub fn frequencies(s: &Substitution, c: &CollaredSubstitution, g: &TileGeometry) -> Result<FrequencyVector> {
    let freq = if c.ell <= 2 {
        eigen_frequencies(c, g)?
    } else {
        let pairs = collar(s, 2)?;
        let f2 = eigen_frequencies(&pairs, g)?;
        let mut n = 0u32;
        let mut min_len = 1usize;
        while min_len < c.ell - 1 {
            n += 1;
            min_len = (0..s.size())
                .map(|a| s.iterate(a, n as usize).map(|w| w.len()))
                .collect::<Result<Vec<_>>>()?
                .into_iter()
                .min()
                .unwrap_or(0);
        }
        let k = &g.field;
        let scale = k.lambda().pow(n).inv()?;
        let mut counts: Vec<FieldElement> = vec![k.zero(); c.size()];
        for (ab, fab) in pairs.words.iter().zip(&f2) {
            let first = s.iterate(ab[0], n as usize)?;
            let mut image = first.clone();
            image.extend(s.iterate(ab[1], n as usize)?);
            for o in 0..first.len() {
                let q = c.index_of(&image[o..o + c.ell]).ok_or_else(|| {
                    Error::Internal("window of an iterated pair is not allowed".into())
                })?;
                counts[q] = counts[q].add(fab);
            }
        }
        counts.iter().map(|x| x.mul(&scale)).collect()
    };
    let lambda = g.field.lambda();
    let a = c.abelianization();
    for i in 0..c.size() {
        let lhs = (0..c.size()).fold(g.field.zero(), |acc, j| {
            let e = a.get(i, j);
            if e.is_zero() {
                acc
            } else {
                acc.add(&freq[j].scale(&BigRational::from_integer(e.clone())))
            }
        });
        if lhs != lambda.mul(&freq[i]) {
            return Err(Error::Internal(format!(
                "frequency of {}-word {i} fails the eigen-equation",
                c.ell
            )));
        }
    }
    for f in &freq {
        if !f.is_positive()? {
            return Err(Error::Internal("nonpositive frequency".into()));
        }
    }
    Ok(FrequencyVector { freq })
}

/// How the equality of tile and return lattices was established.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum LatticeHypothesis {
    /// Constant length with height 1.
    PureCore,
    /// Asserted by the caller.
    Asserted,
}

pub fn lattice_hypothesis(s: &Substitution, pisot: &PisotReport, asserted: bool) -> Result<LatticeHypothesis> {
    if s.constant_length().is_some() && pisot.degree == 1 {
        match pure_core(s, pisot) {
            Ok(core) if core.height == 1 => return Ok(LatticeHypothesis::PureCore),
            Ok(core) if !asserted => {
                return Err(Error::Precondition(format!(
                    "height is {}, so the return lattice is smaller than the tile lattice; measure the pure core instead",
                    core.height
                )))
            }
            Err(e) if !asserted => return Err(e),
            _ => {}
        }
    }
    if asserted {
        Ok(LatticeHypothesis::Asserted)
    } else {
        Err(Error::Precondition(
            "equality of tile and return lattices is not established; assert it explicitly".into(),
        ))
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub enum Divisibility {
    #[serde(rename = "PASS")]
    Pass,
    #[serde(rename = "FAIL")]
    Fail,
    #[serde(rename = "not applicable")]
    NotApplicable,
}

impl Divisibility {
    fn from_bool(b: bool) -> Self {
        if b {
            Self::Pass
        } else {
            Self::Fail
        }
    }
}

/// `n` with every prime factor shared with `a` removed.
pub fn strip_common_primes(n: &BigInt, a: &BigInt) -> BigInt {
    let mut n = n.abs();
    loop {
        let g = n.gcd(a);
        if g.is_one() || g.is_zero() {
            return n;
        }
        n /= g;
    }
}

/// Whether `den` divides `a₀ᵏ · content(p′)` for some `k`.
pub fn divides_a0_power_times_derivative_content(den: &BigInt, a0: &BigInt, p: &IntPolynomial) -> bool {
    let content = p.derivative().content();
    (content.clone() % strip_common_primes(den, a0)).is_zero() || content.is_zero()
}

/// Whether `den` divides `d · a₀ᵏ` for some `k`.
pub fn divides_degree_times_a0_power(den: &BigInt, a0: &BigInt, d: usize) -> bool {
    (BigInt::from(d) % strip_common_primes(den, a0)).is_zero()
}

#[derive(Clone, Debug, PartialEq)]
pub struct CylinderMeasure {
    pub patch: String,
    pub value: FieldElement,
    /// `(q, k)` with `value = q(λ) / (a₀ᵏ p′(λ))`, `q` integral and `k` minimal.
    pub canonical: Option<(IntPolynomial, u32)>,
    pub rational: Option<BigRational>,
    pub derivative_content: Divisibility,
    pub degree_bound: Divisibility,
    pub lattice: LatticeHypothesis,
}

impl CylinderMeasure {
    pub fn integer_numerator(&self) -> bool {
        self.canonical.is_some()
    }
}

impl Serialize for CylinderMeasure {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        #[derive(Serialize)]
        struct Canonical {
            q: IntPolynomial,
            k: u32,
        }
        #[derive(Serialize)]
        struct Verdicts {
            integer_numerator: bool,
            divides_a0_power_times_derivative_content: Divisibility,
            divides_degree_times_a0_power: Divisibility,
        }
        let mut st = s.serialize_struct("CylinderMeasure", 7)?;
        st.serialize_field("patch", &self.patch)?;
        st.serialize_field("value", &self.value)?;
        st.serialize_field("value_display", &self.value.to_string())?;
        st.serialize_field(
            "canonical",
            &self.canonical.as_ref().map(|(q, k)| Canonical { q: q.clone(), k: *k }),
        )?;
        st.serialize_field("rational", &self.rational.clone().map(RationalJson))?;
        st.serialize_field(
            "verdicts",
            &Verdicts {
                integer_numerator: self.integer_numerator(),
                divides_a0_power_times_derivative_content: self.derivative_content,
                divides_degree_times_a0_power: self.degree_bound,
            },
        )?;
        st.serialize_field("lattice_hypothesis", &self.lattice)?;
        st.end()
    }
}

/// Smallest `k ≤ 64` with `a₀ᵏ p′(λ) · value` integral in the power basis.
pub fn canonical_form(value: &FieldElement) -> Option<(IntPolynomial, u32)> {
    let field = value.field();
    let a0 = BigRational::from_integer(field.a0());
    let mut t = value.mul(&field.p_prime_at_lambda());
    for k in 0..=MAX_A0_POWER {
        if t.coords().iter().all(|c| c.is_integer()) {
            let q = IntPolynomial::new(t.coords().iter().map(|c| c.to_integer()).collect());
            return Some((q, k));
        }
        t = t.scale(&a0);
    }
    None
}

/// Measure data for an exact value, with both divisibility verdicts when it is rational.
pub fn describe_measure(
    patch: String,
    value: FieldElement,
    pisot: &PisotReport,
    lattice: LatticeHypothesis,
) -> CylinderMeasure {
    let rational = value.as_rational();
    let (derivative_content, degree_bound) = match &rational {
        Some(r) => (
            Divisibility::from_bool(divides_a0_power_times_derivative_content(
                r.denom(),
                &pisot.a0,
                &pisot.min_poly,
            )),
            Divisibility::from_bool(divides_degree_times_a0_power(r.denom(), &pisot.a0, pisot.degree)),
        ),
        None => (Divisibility::NotApplicable, Divisibility::NotApplicable),
    };
    CylinderMeasure {
        patch,
        canonical: canonical_form(&value),
        value,
        rational,
        derivative_content,
        degree_bound,
        lattice,
    }
}

/// Exact `μ(S_p)` given tile lengths and the lattice hypothesis.
pub fn cylinder_measure_value(s: &Substitution, g: &TileGeometry, p: &[LetterId]) -> Result<FieldElement> {
    if p.is_empty() || !s.is_allowed(p)? {
        return Err(Error::Validation(format!(
            "patch {:?} is not an allowed word",
            s.display_word(p)
        )));
    }
    let l = p.len();
    let c = collar(s, 2 * l - 1)?;
    let f = frequencies(s, &c, g)?;
    let centre = l - 1;
    let mut value = g.field.zero();
    for (q, fq) in c.words.iter().zip(&f.freq) {
        let covers = (0..l).any(|j| &q[centre - j..centre - j + l] == p);
        if covers {
            value = value.add(&fq.mul(&g.lengths[q[centre]]));
        }
    }
    Ok(value)
}

pub fn cylinder_measure(
    s: &Substitution,
    g: &TileGeometry,
    pisot: &PisotReport,
    p: &[LetterId],
    lattice: LatticeHypothesis,
) -> Result<CylinderMeasure> {
    let value = cylinder_measure_value(s, g, p)?;
    Ok(describe_measure(s.display_word(p), value, pisot, lattice))
}

/// `μ` of the union of the letter cylinders of `letters`.
pub fn letter_set_measure(s: &Substitution, g: &TileGeometry, letters: &[LetterId]) -> Result<FieldElement> {
    let c = collar(s, 1)?;
    let f = frequencies(s, &c, g)?;
    Ok(letters.iter().fold(g.field.zero(), |acc, &a| {
        let i = c.index_of(&[a]).expect("letters are allowed");
        acc.add(&f.freq[i].mul(&g.lengths[a]))
    }))
}

pub fn measure_display(m: &CylinderMeasure) -> String {
    match &m.rational {
        Some(r) => rational_display(r),
        None => m.value.to_string(),
    }
}
