//! The dilatation of a primitive substitution and its minimal polynomial.

use std::cmp::Ordering;
use std::sync::Arc;

use num_bigint::BigInt;
use serde::ser::SerializeStruct;
use serde::{Serialize, Serializer};

use super::charpoly::char_poly;
use super::factor::{factor_over_integers, Factorization};
use super::field::{FieldElement, NumberField, MAX_ISOLATION_BITS};
use super::pisot::{pisot_check, PisotCheck};
use super::poly::IntPolynomial;
use super::sturm::{compare_roots, largest_real_root, RootInterval};
use crate::error::{Error, Result};
use crate::matrix::IntegerMatrix;
use crate::substitution::Substitution;

/// Algebraic data of the Perron–Frobenius eigenvalue λ.
#[derive(Clone, Debug)]
pub struct PisotReport {
    pub degree: usize,
    pub min_poly: IntPolynomial,
    pub field: Arc<NumberField>,
    /// λ itself, as an element of ℚ(λ).
    pub dilatation: FieldElement,
    /// Constant coefficient of `min_poly`.
    pub a0: BigInt,
    /// `(-1)^d a₀`
    pub norm: BigInt,
    pub is_pisot: bool,
    pub check: PisotCheck,
    pub char_poly: IntPolynomial,
    pub factorization: Factorization,
}

impl Serialize for PisotReport {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        let mut st = s.serialize_struct("PisotReport", 11)?;
        st.serialize_field("degree", &self.degree)?;
        st.serialize_field("min_poly", &self.min_poly)?;
        st.serialize_field("min_poly_display", &self.min_poly.to_string())?;
        st.serialize_field("dilatation_approx", &format!("{:.12}", self.field.approx()))?;
        st.serialize_field("a0", &self.a0.to_string())?;
        st.serialize_field("norm", &self.norm.to_string())?;
        st.serialize_field("is_pisot", &self.is_pisot)?;
        st.serialize_field("conjugate_modulus_bound", &self.check.modulus_bound)?;
        st.serialize_field("certification", &self.check.method)?;
        st.serialize_field("char_poly", &self.char_poly)?;
        st.serialize_field("factorization", &self.factorization)?;
        st.end()
    }
}

/// The irreducible factor of `char_poly` whose largest real root is the spectral radius.
///
/// Returns the factor with an isolating interval for that root.
pub fn perron_factor(fac: &Factorization) -> Result<(IntPolynomial, RootInterval)> {
    let mut best: Option<(IntPolynomial, RootInterval)> = None;
    for (f, _) in &fac.factors {
        let Some(mut iv) = largest_real_root(f, 64) else {
            continue;
        };
        best = Some(match best {
            None => (f.clone(), iv),
            Some((g, mut jv)) => {
                match compare_roots(f, &mut iv, &g, &mut jv, 64, MAX_ISOLATION_BITS) {
                    Some(Ordering::Greater) => (f.clone(), iv),
                    Some(_) => (g, jv),
                    None => {
                        return Err(Error::Indeterminate(format!(
                            "roots of {f} and {g} not separated at {MAX_ISOLATION_BITS} bits"
                        )))
                    }
                }
            }
        });
    }
    best.ok_or_else(|| Error::Precondition("characteristic polynomial has no real root".into()))
}

/// Pisot data for the Perron–Frobenius eigenvalue of a nonnegative integer matrix.
pub fn pisot_report_for_matrix(m: &IntegerMatrix) -> Result<PisotReport> {
    let cp = char_poly(m);
    let factorization = factor_over_integers(&cp)?;
    let (min_poly, iv) = perron_factor(&factorization)?;
    if !min_poly.divides(&cp) {
        return Err(Error::Internal("minimal polynomial does not divide the characteristic polynomial".into()));
    }
    let field = NumberField::with_root(min_poly.clone(), iv);
    let check = pisot_check(&min_poly)?;
    let a0 = field.a0();
    Ok(PisotReport {
        degree: field.degree(),
        dilatation: field.lambda(),
        norm: field.norm(),
        a0,
        is_pisot: check.is_pisot,
        check,
        min_poly,
        field,
        char_poly: cp,
        factorization,
    })
}

/// λ, its minimal polynomial and the Pisot verdict for a primitive substitution.
pub fn minimal_polynomial_of_dilatation(s: &Substitution) -> Result<PisotReport> {
    if !s.is_primitive().primitive {
        return Err(Error::Precondition("substitution is not primitive".into()));
    }
    pisot_report_for_matrix(&s.abelianization())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::catalog;

    #[test]
    fn fibonacci() {
        let r = minimal_polynomial_of_dilatation(&catalog::fibonacci()).unwrap();
        assert_eq!(r.degree, 2);
        assert_eq!(r.min_poly, IntPolynomial::from_i64(&[-1, -1, 1]));
        assert_eq!(r.a0, BigInt::from(-1));
        assert_eq!(r.norm, BigInt::from(-1));
        assert!(r.is_pisot);
    }

    #[test]
    fn dilatation_nine() {
        let r = minimal_polynomial_of_dilatation(&catalog::length_nine_base()).unwrap();
        assert_eq!(r.degree, 1);
        assert_eq!(r.min_poly, IntPolynomial::from_i64(&[-9, 1]));
        assert_eq!(r.a0, BigInt::from(-9));
        assert_eq!(r.norm, BigInt::from(9));
        assert!(r.is_pisot);
    }

    #[test]
    fn quadratic_dilatation() {
        let r = minimal_polynomial_of_dilatation(&catalog::quadratic_base()).unwrap();
        assert_eq!(r.min_poly, IntPolynomial::from_i64(&[-9, -12, 1]));
        assert!((r.field.approx() - (6.0 + 3.0 * 5f64.sqrt())).abs() < 1e-12);
    }

    #[test]
    fn non_primitive_rejected() {
        let s = Substitution::from_pairs(&[("a", "ab"), ("b", "b")]).unwrap();
        assert!(matches!(
            minimal_polynomial_of_dilatation(&s),
            Err(Error::Precondition(_))
        ));
    }
}
