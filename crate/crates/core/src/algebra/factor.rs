//! Factorization of integer polynomials into irreducibles.
//!
//! After removing content, powers of `x` and repeated factors (Yun's
//! algorithm over ℚ), each squarefree part is split by grouping its complex
//! roots: every conjugation-closed set of roots yields a candidate factor
//! whose rounded coefficients are confirmed by exact division.

use num_bigint::BigInt;
use num_traits::{One, Signed, Zero};
use serde::ser::SerializeStruct;
use serde::{Serialize, Serializer};

use super::poly::IntPolynomial;
use super::roots::{complex_roots, default_precision, Fixed};
use crate::error::{Error, Result};

/// Largest squarefree degree split by the root-grouping search.
pub const MAX_SPLIT_DEGREE: usize = 16;

/// `p = unit · ∏ fᵢ^eᵢ` with primitive irreducible `fᵢ` of positive leading coefficient.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Factorization {
    pub unit: BigInt,
    pub factors: Vec<(IntPolynomial, u32)>,
}

impl Factorization {
    pub fn expand(&self) -> IntPolynomial {
        let mut acc = IntPolynomial::constant(self.unit.clone());
        for (f, e) in &self.factors {
            acc = &acc * &f.pow(*e);
        }
        acc
    }

    /// Multiplicity of `f` (0 when absent).
    pub fn multiplicity(&self, f: &IntPolynomial) -> u32 {
        self.factors
            .iter()
            .find(|(g, _)| g == f)
            .map_or(0, |(_, e)| *e)
    }

    pub fn display(&self) -> String {
        let mut parts = Vec::new();
        if !self.unit.is_one() {
            parts.push(self.unit.to_string());
        }
        for (f, e) in &self.factors {
            let base = if f.coeffs().iter().filter(|c| !c.is_zero()).count() > 1 {
                format!("({f})")
            } else {
                f.to_string()
            };
            parts.push(if *e > 1 { format!("{base}^{e}") } else { base });
        }
        if parts.is_empty() {
            "1".into()
        } else {
            parts.join(" ")
        }
    }
}

struct FactorEntry<'a>(&'a IntPolynomial, u32);

impl Serialize for FactorEntry<'_> {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        let mut st = s.serialize_struct("Factor", 3)?;
        st.serialize_field("poly", self.0)?;
        st.serialize_field("display", &self.0.to_string())?;
        st.serialize_field("multiplicity", &self.1)?;
        st.end()
    }
}

impl Serialize for Factorization {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        let mut st = s.serialize_struct("Factorization", 3)?;
        st.serialize_field("unit", &self.unit.to_string())?;
        let entries: Vec<FactorEntry<'_>> =
            self.factors.iter().map(|(f, e)| FactorEntry(f, *e)).collect();
        st.serialize_field("factors", &entries)?;
        st.serialize_field("display", &self.display())?;
        st.end()
    }
}

/// Squarefree decomposition over ℚ of a primitive polynomial: `(part, multiplicity)` pairs.
pub fn squarefree_decomposition(f: &IntPolynomial) -> Vec<(IntPolynomial, u32)> {
    let mut out = Vec::new();
    if f.deg() == 0 {
        return out;
    }
    let fr = f.to_rat();
    let df = fr.derivative();
    let b = fr.gcd(&df);
    let mut c = fr.divrem(&b).0;
    let mut d = &df.divrem(&b).0 - &c.derivative();
    let mut i = 1u32;
    while c.degree().unwrap_or(0) > 0 {
        let a = c.gcd(&d);
        if a.degree().unwrap_or(0) > 0 {
            out.push((a.to_primitive(), i));
        }
        c = c.divrem(&a).0;
        d = &d.divrem(&a).0 - &c.derivative();
        i += 1;
    }
    out
}

/// Complete factorization into irreducibles over ℤ.
pub fn factor_over_integers(p: &IntPolynomial) -> Result<Factorization> {
    if p.is_zero() {
        return Err(Error::Precondition("cannot factor the zero polynomial".into()));
    }
    let mut unit = p.content();
    if p.leading().unwrap().is_negative() {
        unit = -unit;
    }
    let prim = p.primitive_part();
    let zeros = prim.coeffs().iter().take_while(|c| c.is_zero()).count();
    let rest = IntPolynomial::new(prim.coeffs()[zeros..].to_vec());
    let mut factors = Vec::new();
    if zeros > 0 {
        factors.push((IntPolynomial::x(), zeros as u32));
    }
    for (part, mult) in squarefree_decomposition(&rest) {
        for f in split_squarefree(&part)? {
            factors.push((f, mult));
        }
    }
    factors.sort_by(|a, b| {
        (a.0.deg(), a.0.coeffs()).cmp(&(b.0.deg(), b.0.coeffs()))
    });
    let out = Factorization { unit, factors };
    if &out.expand() != p {
        return Err(Error::Internal(format!("factorization of {p} does not multiply back")));
    }
    Ok(out)
}

/// Irreducible factors of a primitive squarefree polynomial.
pub fn split_squarefree(g: &IntPolynomial) -> Result<Vec<IntPolynomial>> {
    let n = g.deg();
    if n <= 1 {
        return Ok(if n == 1 { vec![g.clone()] } else { vec![] });
    }
    if n > MAX_SPLIT_DEGREE {
        return Err(Error::ResourceLimit(format!(
            "squarefree part of degree {n} exceeds factoring limit {MAX_SPLIT_DEGREE}"
        )));
    }
    let prec = default_precision(g);
    let roots = complex_roots(g, prec)?;
    let mut units = group_conjugates(roots, prec)?;
    let mut rem = g.clone();
    let mut found = Vec::new();
    'search: loop {
        let d = rem.deg();
        for size in 1..=d / 2 {
            let mut chosen = Vec::new();
            if let Some((f, idx)) = try_subsets(&rem, &units, size, 0, &mut chosen, prec) {
                rem = rem.div_exact(&f).expect("candidate divides");
                let mut idx = idx;
                idx.sort_unstable_by(|a, b| b.cmp(a));
                for i in idx {
                    units.remove(i);
                }
                found.push(f);
                continue 'search;
            }
        }
        break;
    }
    if rem.deg() > 0 {
        found.push(rem.primitive_part());
    }
    Ok(found)
}

/// Each unit is either a real root or a conjugate pair.
fn group_conjugates(roots: Vec<Fixed>, prec: u32) -> Result<Vec<Vec<Fixed>>> {
    let real_tol = BigInt::one() << (3 * prec / 4);
    let mut units = Vec::new();
    let mut upper = Vec::new();
    let mut lower = Vec::new();
    for z in roots {
        if z.im.abs() < real_tol {
            units.push(vec![Fixed {
                re: z.re,
                im: BigInt::zero(),
            }]);
        } else if z.im.is_positive() {
            upper.push(z);
        } else {
            lower.push(z);
        }
    }
    if upper.len() != lower.len() {
        return Err(Error::Indeterminate(
            "complex roots do not pair into conjugates".into(),
        ));
    }
    for z in upper {
        let target = z.conj();
        let (k, _) = lower
            .iter()
            .enumerate()
            .map(|(k, w)| (k, target.sub(w).norm_sq(prec)))
            .min_by(|a, b| a.1.cmp(&b.1))
            .expect("nonempty");
        lower.remove(k);
        units.push(vec![z.clone(), target]);
    }
    Ok(units)
}

fn try_subsets(
    g: &IntPolynomial,
    units: &[Vec<Fixed>],
    remaining: usize,
    start: usize,
    chosen: &mut Vec<usize>,
    prec: u32,
) -> Option<(IntPolynomial, Vec<usize>)> {
    if remaining == 0 {
        let cand = candidate(g, units, chosen, prec);
        if cand.deg() > 0 && cand.deg() < g.deg() && cand.divides(g) {
            return Some((cand, chosen.clone()));
        }
        return None;
    }
    for i in start..units.len() {
        let k = units[i].len();
        if k <= remaining {
            chosen.push(i);
            if let Some(hit) = try_subsets(g, units, remaining - k, i + 1, chosen, prec) {
                return Some(hit);
            }
            chosen.pop();
        }
    }
    None
}

/// `round(lc(g) · ∏ (x − r))` over the chosen roots, reduced to its primitive part.
fn candidate(g: &IntPolynomial, units: &[Vec<Fixed>], chosen: &[usize], prec: u32) -> IntPolynomial {
    // real fixed-point coefficients, lowest degree first
    let mut acc: Vec<BigInt> = vec![BigInt::one() << prec];
    for &i in chosen {
        let unit = &units[i];
        let factor: Vec<BigInt> = if unit.len() == 1 {
            vec![-unit[0].re.clone(), BigInt::one() << prec]
        } else {
            let r = &unit[0];
            let sum = &r.re * BigInt::from(2);
            let norm = r.norm_sq(prec);
            vec![norm, -sum, BigInt::one() << prec]
        };
        let mut next = vec![BigInt::zero(); acc.len() + factor.len() - 1];
        for (a, x) in acc.iter().enumerate() {
            for (b, y) in factor.iter().enumerate() {
                next[a + b] += (x * y) >> prec;
            }
        }
        acc = next;
    }
    let lc = g.leading().unwrap();
    let half = BigInt::one() << (prec - 1);
    let coeffs = acc
        .iter()
        .map(|c| ((c * lc) + &half) >> prec)
        .collect();
    IntPolynomial::new(coeffs).primitive_part()
}

#[cfg(test)]
mod tests {
    use super::*;

    fn p(c: &[i64]) -> IntPolynomial {
        IntPolynomial::from_i64(c)
    }

    #[test]
    fn rational_roots() {
        let f = factor_over_integers(&p(&[0, -9, 1])).unwrap();
        assert_eq!(f.factors, vec![(p(&[-9, 1]), 1), (p(&[0, 1]), 1)]);
    }

    #[test]
    fn irreducible_quadratic() {
        let f = factor_over_integers(&p(&[-1, -1, 1])).unwrap();
        assert_eq!(f.factors, vec![(p(&[-1, -1, 1]), 1)]);
    }

    #[test]
    fn mixed_product_with_cyclotomic() {
        // (x-9)(x-1)(x^4+x^3+x^2+x+1) = x^6 - 9x^5 - x + 9
        let f = factor_over_integers(&p(&[9, -1, 0, 0, 0, -9, 1])).unwrap();
        assert_eq!(
            f.factors,
            vec![(p(&[-9, 1]), 1), (p(&[-1, 1]), 1), (p(&[1, 1, 1, 1, 1]), 1)]
        );
    }

    #[test]
    fn multiplicities_and_content() {
        let g = &(&p(&[-1, 1]).pow(2) * &p(&[0, 1]).pow(3)) * &p(&[-9, -12, 1]);
        let g = &g * &IntPolynomial::constant(BigInt::from(-6));
        let f = factor_over_integers(&g).unwrap();
        assert_eq!(f.unit, BigInt::from(-6));
        assert_eq!(f.multiplicity(&p(&[-1, 1])), 2);
        assert_eq!(f.multiplicity(&p(&[0, 1])), 3);
        assert_eq!(f.multiplicity(&p(&[-9, -12, 1])), 1);
        assert_eq!(f.expand(), g);
    }

    #[test]
    fn product_of_two_quartics() {
        // x^4 - 2 and x^4 + x + 1: no rational roots, splitting needs pairing of complex roots
        let a = p(&[-2, 0, 0, 0, 1]);
        let b = p(&[1, 1, 0, 0, 1]);
        let f = factor_over_integers(&(&a * &b)).unwrap();
        assert_eq!(f.factors.len(), 2);
        assert_eq!(f.multiplicity(&a), 1);
        assert_eq!(f.multiplicity(&b), 1);
    }

    #[test]
    fn swinnerton_dyer_style_irreducible() {
        // x^4 - 10x^2 + 1 is irreducible over Q but splits modulo every prime
        let f = factor_over_integers(&p(&[1, 0, -10, 0, 1])).unwrap();
        assert_eq!(f.factors, vec![(p(&[1, 0, -10, 0, 1]), 1)]);
    }
}
