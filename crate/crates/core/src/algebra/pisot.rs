//! Exact location of polynomial roots relative to the unit circle.
//!
//! Graeffe root squaring replaces the roots by their `2^k`-th powers, which
//! drives roots inside the unit disk towards 0 and roots outside towards
//! infinity. Once one coefficient exceeds the sum of all others in absolute
//! value, Rouché's theorem on the unit circle says exactly that many roots
//! lie strictly inside. Polynomials with roots on the circle never reach
//! dominance; those cases are settled by reciprocity or by certified disks.

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};
use serde::Serialize;

use super::poly::IntPolynomial;
use super::roots::{complex_roots, default_precision, distance_lower, inclusion_radii, Fixed};
use crate::error::{Error, Result};
use crate::rational::RationalJson;

/// Root-squaring rounds before falling back to certified numerics.
pub const GRAEFFE_MAX_ROUNDS: u32 = 32;
/// Coefficient bit-size at which root squaring is abandoned.
const GRAEFFE_MAX_BITS: u64 = 1 << 22;
/// Denominator of the published modulus bound.
const BOUND_DENOMINATOR_BITS: u32 = 32;

/// Verdict of [`pisot_check`].
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct PisotCheck {
    pub is_pisot: bool,
    /// Upper bound on the modulus of every conjugate of the dominant root (0 for degree 1).
    pub modulus_bound: RationalJson,
    /// How the verdict was certified.
    pub method: String,
}

/// One Graeffe step: a polynomial whose roots are the squares of the roots of `p`.
pub fn graeffe_step(p: &IntPolynomial) -> IntPolynomial {
    let c = p.coeffs();
    let even = IntPolynomial::new(c.iter().step_by(2).cloned().collect());
    let odd = IntPolynomial::new(c.iter().skip(1).step_by(2).cloned().collect());
    let e2 = &even * &even;
    let o2 = &(&odd * &odd) * &IntPolynomial::x();
    let q = &e2 - &o2;
    if p.deg() % 2 == 1 {
        -&q
    } else {
        q
    }
}

/// `Some(m)` if `|b_m| > Σ_{j≠m} |b_j|`: then exactly `m` roots lie strictly inside the unit circle.
pub fn dominant_index(p: &IntPolynomial) -> Option<usize> {
    let total: BigInt = p.coeffs().iter().map(|c| c.abs()).sum();
    p.coeffs()
        .iter()
        .position(|c| {
            let a = c.abs();
            a.clone() > &total - &a
        })
}

/// Number of roots strictly inside the unit disk, certified by root squaring.
///
/// Returns `None` when dominance is not reached within the round and size limits.
pub fn graeffe_inside_count(p: &IntPolynomial) -> Option<usize> {
    let mut q = p.clone();
    for _ in 0..=GRAEFFE_MAX_ROUNDS {
        if let Some(m) = dominant_index(&q) {
            return Some(m);
        }
        if q.max_abs_coeff().bits() > GRAEFFE_MAX_BITS {
            return None;
        }
        q = graeffe_step(&q);
    }
    None
}

/// Certified root disks: approximations with radii, pairwise disjoint.
struct RootDisks {
    prec: u32,
    centers: Vec<Fixed>,
    radii: Vec<BigRational>,
}

impl RootDisks {
    fn compute(p: &IntPolynomial) -> Result<Self> {
        let mut prec = default_precision(p);
        for _ in 0..4 {
            let centers = complex_roots(p, prec)?;
            if let Some(radii) = inclusion_radii(p, &centers, prec) {
                let disjoint = (0..centers.len()).all(|i| {
                    (i + 1..centers.len()).all(|j| {
                        distance_lower(&centers[i], &centers[j], prec) > &radii[i] + &radii[j]
                    })
                });
                if disjoint {
                    return Ok(Self {
                        prec,
                        centers,
                        radii,
                    });
                }
            }
            prec *= 2;
        }
        Err(Error::Indeterminate(format!(
            "could not separate the roots of {p}"
        )))
    }

    fn upper(&self, i: usize) -> BigRational {
        self.centers[i].modulus_upper(self.prec) + &self.radii[i]
    }

    fn lower(&self, i: usize) -> BigRational {
        let zero = Fixed::zero();
        distance_lower(&self.centers[i], &zero, self.prec) - &self.radii[i]
    }

    /// Index of the disk around the largest real root, given its approximate value.
    fn nearest_real(&self, x: &BigRational) -> usize {
        let target = Fixed {
            re: (x * BigRational::from_integer(BigInt::one() << self.prec)).to_integer(),
            im: BigInt::zero(),
        };
        (0..self.centers.len())
            .min_by_key(|&i| self.centers[i].sub(&target).norm_sq(self.prec))
            .expect("nonempty")
    }
}

fn round_up(x: &BigRational) -> BigRational {
    let den = BigInt::one() << BOUND_DENOMINATOR_BITS;
    let scaled = x * BigRational::from_integer(den.clone());
    BigRational::new(scaled.ceil().to_integer(), den)
}

/// Decides whether the largest real root of an irreducible polynomial is a Pisot number.
pub fn pisot_check(p: &IntPolynomial) -> Result<PisotCheck> {
    let d = p
        .degree()
        .ok_or_else(|| Error::Precondition("Pisot test of the zero polynomial".into()))?;
    if d == 0 {
        return Err(Error::Precondition("Pisot test of a constant".into()));
    }
    let dominant = super::sturm::largest_real_root(p, 64)
        .filter(|iv| iv.lo >= BigRational::one())
        .ok_or_else(|| Error::Precondition(format!("{p} has no real root greater than 1")))?;
    if d == 1 {
        return Ok(PisotCheck {
            is_pisot: p.is_monic(),
            modulus_bound: RationalJson(BigRational::zero()),
            method: "degree one".into(),
        });
    }
    let disks = RootDisks::compute(p)?;
    let top = disks.nearest_real(&dominant.midpoint());
    let bound = (0..d)
        .filter(|&i| i != top)
        .map(|i| disks.upper(i))
        .max()
        .expect("degree at least two");
    let bound = round_up(&bound);
    let done = |is_pisot: bool, method: &str| {
        Ok(PisotCheck {
            is_pisot,
            modulus_bound: RationalJson(bound.clone()),
            method: method.into(),
        })
    };
    if !p.is_monic() {
        return done(false, "not an algebraic integer");
    }
    if d >= 3 && p.is_reciprocal() {
        // conjugates pair up as r and 1/r, so some conjugate has modulus at least 1
        return done(false, "reciprocal minimal polynomial");
    }
    if let Some(m) = graeffe_inside_count(p) {
        return done(m == d - 1, "Graeffe root squaring");
    }
    let others: Vec<usize> = (0..d).filter(|&i| i != top).collect();
    if others.iter().all(|&i| disks.upper(i) < BigRational::one()) {
        return done(true, "certified root disks");
    }
    if others.iter().any(|&i| disks.lower(i) > BigRational::one()) {
        return done(false, "certified root disks");
    }
    Err(Error::Indeterminate(format!(
        "conjugates of the largest root of {p} are too close to the unit circle"
    )))
}

/// Number of roots of a squarefree polynomial strictly inside the unit circle.
pub fn roots_inside_unit_circle(p: &IntPolynomial) -> Result<usize> {
    let d = p.deg();
    if d == 0 {
        return Ok(0);
    }
    if d == 1 {
        let (r, s) = (p.coeff(0), p.coeff(1));
        return Ok(usize::from(r.abs() < s.abs()));
    }
    if let Some(m) = graeffe_inside_count(p) {
        return Ok(m);
    }
    let disks = RootDisks::compute(p)?;
    let mut inside = 0;
    for i in 0..d {
        if disks.upper(i) < BigRational::one() {
            inside += 1;
        } else if disks.lower(i) <= BigRational::one() {
            return Err(Error::Indeterminate(format!(
                "a root of {p} is too close to the unit circle"
            )));
        }
    }
    Ok(inside)
}

/// True when every prime factor of `n` divides `m` (`n` divides some power of `m`).
pub fn divides_power_of(n: &BigInt, m: &BigInt) -> bool {
    let mut n = n.abs();
    if n.is_zero() {
        return false;
    }
    loop {
        let g = n.gcd(m);
        if g.is_one() {
            return n.is_one();
        }
        while (&n % &g).is_zero() {
            n /= &g;
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use num_traits::ToPrimitive;

    fn p(c: &[i64]) -> IntPolynomial {
        IntPolynomial::from_i64(c)
    }

    #[test]
    fn golden_ratio_is_pisot() {
        let v = pisot_check(&p(&[-1, -1, 1])).unwrap();
        assert!(v.is_pisot);
        let b = v.modulus_bound.0.to_f64().unwrap();
        assert!((0.618..0.62).contains(&b), "{b}");
    }

    #[test]
    fn quadratic_with_large_conjugate() {
        let v = pisot_check(&p(&[-3, -1, 1])).unwrap();
        assert!(!v.is_pisot);
        assert!(v.modulus_bound.0 > BigRational::one());
    }

    #[test]
    fn degree_one() {
        let v = pisot_check(&p(&[-9, 1])).unwrap();
        assert!(v.is_pisot);
        assert!(v.modulus_bound.0.is_zero());
    }

    #[test]
    fn salem_polynomial_is_rejected() {
        // Lehmer's polynomial: reciprocal, two real roots off the circle, eight on it
        let lehmer = p(&[1, 1, 0, -1, -1, -1, -1, -1, 0, 1, 1]);
        let v = pisot_check(&lehmer).unwrap();
        assert!(!v.is_pisot);
    }

    #[test]
    fn tribonacci_and_dilated_power() {
        assert!(pisot_check(&p(&[-1, -1, -1, 1])).unwrap().is_pisot);
        // x^2 - 12x - 9: conjugate 6 - 3√5 ≈ -0.708
        assert!(pisot_check(&p(&[-9, -12, 1])).unwrap().is_pisot);
    }

    #[test]
    fn graeffe_preserves_squared_roots() {
        // roots 2 and 3 -> 4 and 9
        assert_eq!(graeffe_step(&p(&[6, -5, 1])), p(&[36, -13, 1]));
        assert_eq!(roots_inside_unit_circle(&p(&[1, 0, -10, 0, 1])).unwrap(), 2);
    }

    #[test]
    fn power_divisibility() {
        assert!(divides_power_of(&BigInt::from(27), &BigInt::from(-9)));
        assert!(!divides_power_of(&BigInt::from(2), &BigInt::from(-9)));
        assert!(divides_power_of(&BigInt::from(1), &BigInt::from(5)));
    }
}
