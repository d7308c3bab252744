//! The number field ℚ(λ) in the power basis `1, λ, …, λ^{d-1}`.

use std::cmp::Ordering;
use std::fmt;
use std::sync::Arc;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};
use serde::{Serialize, Serializer};

use super::poly::{IntPolynomial, RatPoly};
use super::sturm::{largest_real_root, RootInterval};
use crate::error::{Error, Result};
use crate::rational::{rational_display, RationalJson};

/// Precision at which λ is stored.
const STORED_BITS: u32 = 128;
/// Sign decisions refine λ up to this many bits before giving up.
pub const MAX_ISOLATION_BITS: u32 = 4096;

/// ℚ(λ) for a monic irreducible `p` and its largest real root `λ`.
#[derive(Debug)]
pub struct NumberField {
    min_poly: IntPolynomial,
    modulus: RatPoly,
    root: RootInterval,
}

impl PartialEq for NumberField {
    fn eq(&self, other: &Self) -> bool {
        self.min_poly == other.min_poly
    }
}

impl NumberField {
    /// Field generated by the largest real root of the monic irreducible `min_poly`.
    pub fn new(min_poly: IntPolynomial) -> Result<Arc<Self>> {
        if !min_poly.is_monic() {
            return Err(Error::Precondition(format!("{min_poly} is not monic")));
        }
        let root = largest_real_root(&min_poly, STORED_BITS)
            .ok_or_else(|| Error::Precondition(format!("{min_poly} has no real root")))?;
        Ok(Self::with_root(min_poly, root))
    }

    pub fn with_root(min_poly: IntPolynomial, mut root: RootInterval) -> Arc<Self> {
        root.refine(&min_poly, STORED_BITS);
        let modulus = min_poly.to_rat();
        Arc::new(Self {
            min_poly,
            modulus,
            root,
        })
    }

    pub fn degree(&self) -> usize {
        self.min_poly.deg()
    }

    pub fn min_poly(&self) -> &IntPolynomial {
        &self.min_poly
    }

    /// Constant coefficient of the minimal polynomial.
    pub fn a0(&self) -> BigInt {
        self.min_poly.coeff(0)
    }

    /// `(-1)^d a₀`, the product of λ and its conjugates.
    pub fn norm(&self) -> BigInt {
        let a0 = self.a0();
        if self.degree().is_multiple_of(2) {
            a0
        } else {
            -a0
        }
    }

    pub fn root_interval(&self) -> &RootInterval {
        &self.root
    }

    pub fn approx(&self) -> f64 {
        self.root.approx()
    }

    fn reduce(&self, p: &RatPoly) -> Vec<BigRational> {
        let r = p.rem(&self.modulus);
        (0..self.degree()).map(|i| r.coeff(i)).collect()
    }

    pub fn element(self: &Arc<Self>, coords: Vec<BigRational>) -> FieldElement {
        let coords = self.reduce(&RatPoly::new(coords));
        FieldElement {
            coords,
            field: Arc::clone(self),
        }
    }

    pub fn from_poly(self: &Arc<Self>, p: &RatPoly) -> FieldElement {
        FieldElement {
            coords: self.reduce(p),
            field: Arc::clone(self),
        }
    }

    pub fn from_rational(self: &Arc<Self>, q: BigRational) -> FieldElement {
        self.element(vec![q])
    }

    pub fn from_int(self: &Arc<Self>, n: impl Into<BigInt>) -> FieldElement {
        self.from_rational(BigRational::from_integer(n.into()))
    }

    pub fn zero(self: &Arc<Self>) -> FieldElement {
        self.element(vec![])
    }

    pub fn one(self: &Arc<Self>) -> FieldElement {
        self.from_int(1)
    }

    pub fn lambda(self: &Arc<Self>) -> FieldElement {
        self.element(vec![BigRational::zero(), BigRational::one()])
    }

    /// `p′(λ)`
    pub fn p_prime_at_lambda(self: &Arc<Self>) -> FieldElement {
        self.from_poly(&self.min_poly.derivative().to_rat())
    }
}

/// An element of ℚ(λ), stored by its `d` power-basis coordinates.
#[derive(Clone)]
pub struct FieldElement {
    coords: Vec<BigRational>,
    field: Arc<NumberField>,
}

impl PartialEq for FieldElement {
    fn eq(&self, other: &Self) -> bool {
        self.coords == other.coords && self.field == other.field
    }
}

impl Eq for FieldElement {}

impl fmt::Debug for FieldElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{self}")
    }
}

impl FieldElement {
    pub fn field(&self) -> &Arc<NumberField> {
        &self.field
    }

    pub fn coords(&self) -> &[BigRational] {
        &self.coords
    }

    pub fn coord(&self, i: usize) -> &BigRational {
        &self.coords[i]
    }

    pub fn as_poly(&self) -> RatPoly {
        RatPoly::new(self.coords.clone())
    }

    pub fn is_zero(&self) -> bool {
        self.coords.iter().all(Zero::is_zero)
    }

    /// `Some(q)` when the element lies in ℚ.
    pub fn as_rational(&self) -> Option<BigRational> {
        self.coords[1..]
            .iter()
            .all(Zero::is_zero)
            .then(|| self.coords[0].clone())
    }

    fn same_field(&self, other: &Self) {
        assert!(
            Arc::ptr_eq(&self.field, &other.field) || self.field == other.field,
            "elements of different number fields"
        );
    }

    fn with(&self, coords: Vec<BigRational>) -> Self {
        Self {
            coords,
            field: Arc::clone(&self.field),
        }
    }

    pub fn add(&self, other: &Self) -> Self {
        self.same_field(other);
        self.with(
            self.coords
                .iter()
                .zip(&other.coords)
                .map(|(a, b)| a + b)
                .collect(),
        )
    }

    pub fn sub(&self, other: &Self) -> Self {
        self.same_field(other);
        self.with(
            self.coords
                .iter()
                .zip(&other.coords)
                .map(|(a, b)| a - b)
                .collect(),
        )
    }

    pub fn neg(&self) -> Self {
        self.with(self.coords.iter().map(|a| -a).collect())
    }

    pub fn mul(&self, other: &Self) -> Self {
        self.same_field(other);
        let prod = &self.as_poly() * &other.as_poly();
        self.with(self.field.reduce(&prod))
    }

    pub fn scale(&self, q: &BigRational) -> Self {
        self.with(self.coords.iter().map(|a| a * q).collect())
    }

    pub fn inv(&self) -> Result<Self> {
        if self.is_zero() {
            return Err(Error::DivisionByZero("number field inverse"));
        }
        let (g, s, _) = self.as_poly().ext_gcd(&self.field.modulus);
        debug_assert_eq!(g, RatPoly::one());
        Ok(self.with(self.field.reduce(&s)))
    }

    pub fn div(&self, other: &Self) -> Result<Self> {
        Ok(self.mul(&other.inv()?))
    }

    pub fn pow(&self, e: u32) -> Self {
        let mut acc = self.field.one();
        for _ in 0..e {
            acc = acc.mul(self);
        }
        acc
    }

    /// Rational interval containing the real value, using λ ∈ `root`.
    fn enclosure(&self, root: &RootInterval) -> (BigRational, BigRational) {
        let (lo, hi) = (&root.lo, &root.hi);
        let mut a = BigRational::zero();
        let mut b = BigRational::zero();
        for c in self.coords.iter().rev() {
            let p = [&a * lo, &a * hi, &b * lo, &b * hi];
            let mn = p.iter().min().unwrap().clone();
            let mx = p.iter().max().unwrap().clone();
            a = mn + c;
            b = mx + c;
        }
        (a, b)
    }

    /// Exact sign of the real value at λ.
    pub fn signum(&self) -> Result<Ordering> {
        if self.is_zero() {
            return Ok(Ordering::Equal);
        }
        let mut root = self.field.root.clone();
        let mut bits = STORED_BITS;
        loop {
            let (a, b) = self.enclosure(&root);
            if a.is_positive() {
                return Ok(Ordering::Greater);
            }
            if b.is_negative() {
                return Ok(Ordering::Less);
            }
            if bits >= MAX_ISOLATION_BITS {
                return Err(Error::Indeterminate(format!(
                    "sign of {self} undecided at {bits} bits"
                )));
            }
            bits *= 2;
            root.refine(&self.field.min_poly, bits);
        }
    }

    pub fn is_positive(&self) -> Result<bool> {
        Ok(self.signum()? == Ordering::Greater)
    }

    /// Exact comparison of real values.
    pub fn cmp_value(&self, other: &Self) -> Result<Ordering> {
        self.sub(other).signum()
    }

    pub fn to_f64(&self) -> f64 {
        let mut root = self.field.root.clone();
        root.refine(&self.field.min_poly, 256);
        let (a, b) = self.enclosure(&root);
        ((a + b) / BigRational::from_integer(BigInt::from(2)))
            .to_f64()
            .unwrap_or(f64::NAN)
    }
}

impl fmt::Display for FieldElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut first = true;
        for (i, c) in self.coords.iter().enumerate().rev() {
            if c.is_zero() {
                continue;
            }
            let mag = c.abs();
            if first {
                if c.is_negative() {
                    write!(f, "-")?;
                }
            } else {
                write!(f, " {} ", if c.is_negative() { "-" } else { "+" })?;
            }
            first = false;
            let m = rational_display(&mag);
            match (i, mag.is_one()) {
                (0, _) => write!(f, "{m}")?,
                (1, true) => write!(f, "λ")?,
                (1, false) => write!(f, "{m}·λ")?,
                (_, true) => write!(f, "λ^{i}")?,
                (_, false) => write!(f, "{m}·λ^{i}")?,
            }
        }
        if first {
            write!(f, "0")?;
        }
        Ok(())
    }
}

impl Serialize for FieldElement {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        let v: Vec<RationalJson> = self.coords.iter().cloned().map(RationalJson).collect();
        v.serialize(s)
    }
}

/// Field operations needed by exact elimination.
pub trait FieldOps {
    type Elem: Clone + PartialEq + fmt::Debug;
    fn zero(&self) -> Self::Elem;
    fn one(&self) -> Self::Elem;
    fn is_zero(&self, a: &Self::Elem) -> bool;
    fn add(&self, a: &Self::Elem, b: &Self::Elem) -> Self::Elem;
    fn sub(&self, a: &Self::Elem, b: &Self::Elem) -> Self::Elem;
    fn mul(&self, a: &Self::Elem, b: &Self::Elem) -> Self::Elem;
    fn neg(&self, a: &Self::Elem) -> Self::Elem;
    /// Panics when `b` is zero.
    fn div(&self, a: &Self::Elem, b: &Self::Elem) -> Self::Elem;
}

/// The field ℚ.
#[derive(Clone, Copy, Debug, Default)]
pub struct Rationals;

impl FieldOps for Rationals {
    type Elem = BigRational;
    fn zero(&self) -> BigRational {
        BigRational::zero()
    }
    fn one(&self) -> BigRational {
        BigRational::one()
    }
    fn is_zero(&self, a: &BigRational) -> bool {
        a.is_zero()
    }
    fn add(&self, a: &BigRational, b: &BigRational) -> BigRational {
        a + b
    }
    fn sub(&self, a: &BigRational, b: &BigRational) -> BigRational {
        a - b
    }
    fn mul(&self, a: &BigRational, b: &BigRational) -> BigRational {
        a * b
    }
    fn neg(&self, a: &BigRational) -> BigRational {
        -a
    }
    fn div(&self, a: &BigRational, b: &BigRational) -> BigRational {
        a / b
    }
}

impl FieldOps for Arc<NumberField> {
    type Elem = FieldElement;
    fn zero(&self) -> FieldElement {
        NumberField::zero(self)
    }
    fn one(&self) -> FieldElement {
        NumberField::one(self)
    }
    fn is_zero(&self, a: &FieldElement) -> bool {
        a.is_zero()
    }
    fn add(&self, a: &FieldElement, b: &FieldElement) -> FieldElement {
        a.add(b)
    }
    fn sub(&self, a: &FieldElement, b: &FieldElement) -> FieldElement {
        a.sub(b)
    }
    fn mul(&self, a: &FieldElement, b: &FieldElement) -> FieldElement {
        a.mul(b)
    }
    fn neg(&self, a: &FieldElement) -> FieldElement {
        a.neg()
    }
    fn div(&self, a: &FieldElement, b: &FieldElement) -> FieldElement {
        a.div(b).expect("nonzero divisor")
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn golden() -> Arc<NumberField> {
        NumberField::new(IntPolynomial::from_i64(&[-1, -1, 1])).unwrap()
    }

    fn q(n: i64, d: i64) -> BigRational {
        BigRational::new(n.into(), d.into())
    }

    #[test]
    fn reduction_and_inverse() {
        let k = golden();
        let l = k.lambda();
        assert_eq!(l.mul(&l), l.add(&k.one()));
        let inv = l.add(&k.from_int(2)).inv().unwrap();
        assert_eq!(inv, k.element(vec![q(3, 5), q(-1, 5)]));
        assert!(k.zero().inv().is_err());
    }

    #[test]
    fn derivative_at_root() {
        let k = golden();
        assert_eq!(k.p_prime_at_lambda(), k.element(vec![q(-1, 1), q(2, 1)]));
        let k2 = NumberField::new(IntPolynomial::from_i64(&[-2, 1])).unwrap();
        assert_eq!(k2.p_prime_at_lambda(), k2.one());
        let k3 = NumberField::new(IntPolynomial::from_i64(&[-9, -12, 1])).unwrap();
        assert_eq!(k3.p_prime_at_lambda(), k3.element(vec![q(-12, 1), q(2, 1)]));
    }

    #[test]
    fn exact_signs() {
        let k = golden();
        // λ - 1.618 > 0 and λ - 1.6181 < 0
        let a = k.lambda().sub(&k.from_rational(q(1618, 1000)));
        let b = k.lambda().sub(&k.from_rational(q(16181, 10000)));
        assert_eq!(a.signum().unwrap(), Ordering::Greater);
        assert_eq!(b.signum().unwrap(), Ordering::Less);
        assert!((k.lambda().to_f64() - 1.618_033_988_749_895).abs() < 1e-15);
    }

    #[test]
    fn display() {
        let k = golden();
        assert_eq!(k.element(vec![q(3, 5), q(-1, 5)]).to_string(), "-1/5·λ + 3/5");
        assert_eq!(k.lambda().to_string(), "λ");
        assert_eq!(k.zero().to_string(), "0");
    }
}
