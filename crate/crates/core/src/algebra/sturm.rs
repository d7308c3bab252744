//! Exact real-root isolation with Sturm sequences.

use std::cmp::Ordering;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

use super::poly::{IntPolynomial, RatPoly};

/// Sturm sequence of a squarefree polynomial.
pub struct Sturm {
    seq: Vec<RatPoly>,
}

impl Sturm {
    pub fn new(p: &IntPolynomial) -> Self {
        let p0 = p.to_rat();
        let p1 = p0.derivative();
        let mut seq = vec![p0, p1];
        loop {
            let n = seq.len();
            if seq[n - 1].is_zero() {
                seq.pop();
                break;
            }
            let r = seq[n - 2].rem(&seq[n - 1]);
            if r.is_zero() {
                break;
            }
            seq.push(r.scale(&-BigRational::one()));
        }
        Self { seq }
    }

    fn sign_changes(&self, x: &BigRational) -> usize {
        let mut changes = 0;
        let mut last = 0i8;
        for q in &self.seq {
            let v = q.eval(x);
            let s = if v.is_positive() {
                1
            } else if v.is_negative() {
                -1
            } else {
                0
            };
            if s != 0 {
                if last != 0 && s != last {
                    changes += 1;
                }
                last = s;
            }
        }
        changes
    }

    /// Number of distinct real roots in `(a, b]`.
    pub fn count(&self, a: &BigRational, b: &BigRational) -> usize {
        self.sign_changes(a).saturating_sub(self.sign_changes(b))
    }
}

/// Rational bound `1 + max |cᵢ / c_n|` on the modulus of every root.
pub fn root_bound(p: &IntPolynomial) -> BigRational {
    let n = p.deg();
    let lc = p.coeff(n).abs();
    let m = p.coeffs()[..n]
        .iter()
        .map(|c| c.abs())
        .max()
        .unwrap_or_default();
    BigRational::one() + BigRational::new(m, lc)
}

/// Isolating interval `(lo, hi]` for a real root, refined by bisection.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct RootInterval {
    pub lo: BigRational,
    pub hi: BigRational,
}

impl RootInterval {
    pub fn width(&self) -> BigRational {
        &self.hi - &self.lo
    }

    pub fn midpoint(&self) -> BigRational {
        (&self.lo + &self.hi) / BigRational::from_integer(BigInt::from(2))
    }

    /// Narrows the interval to width below `2^-bits` using the sign of the squarefree `p`.
    pub fn refine(&mut self, p: &IntPolynomial, bits: u32) {
        let target = BigRational::new(BigInt::one(), BigInt::one() << bits);
        let s_hi = p.eval(&self.hi).signum();
        if s_hi.is_zero() {
            self.lo = self.hi.clone();
            return;
        }
        while self.width() > target {
            let mid = self.midpoint();
            let s = p.eval(&mid).signum();
            if s.is_zero() {
                self.lo = mid.clone();
                self.hi = mid;
                return;
            }
            if s == s_hi {
                self.hi = mid;
            } else {
                self.lo = mid;
            }
        }
    }

    pub fn approx(&self) -> f64 {
        use num_traits::ToPrimitive;
        self.midpoint().to_f64().unwrap_or(f64::NAN)
    }
}

/// Isolating interval for the largest real root of a squarefree polynomial, if it has one.
pub fn largest_real_root(p: &IntPolynomial, bits: u32) -> Option<RootInterval> {
    if p.deg() == 0 {
        return None;
    }
    if p.deg() == 1 {
        let r = BigRational::new(-p.coeff(0), p.coeff(1));
        return Some(RootInterval { lo: r.clone(), hi: r });
    }
    let sturm = Sturm::new(p);
    let b = root_bound(p);
    let mut iv = RootInterval { lo: -b.clone(), hi: b };
    if sturm.count(&iv.lo, &iv.hi) == 0 {
        return None;
    }
    // keep exactly the largest root inside (lo, hi]
    while sturm.count(&iv.lo, &iv.hi) > 1 {
        let mid = iv.midpoint();
        if sturm.count(&mid, &iv.hi) >= 1 {
            iv.lo = mid;
        } else {
            iv.hi = mid;
        }
    }
    iv.refine(p, bits);
    Some(iv)
}

/// Compares the largest real roots of two coprime squarefree polynomials.
///
/// Returns `None` when the intervals still overlap at `max_bits` of precision.
pub fn compare_roots(
    p: &IntPolynomial,
    a: &mut RootInterval,
    q: &IntPolynomial,
    b: &mut RootInterval,
    start_bits: u32,
    max_bits: u32,
) -> Option<Ordering> {
    let mut bits = start_bits;
    loop {
        a.refine(p, bits);
        b.refine(q, bits);
        if a.lo == a.hi && b.lo == b.hi {
            return Some(a.lo.cmp(&b.lo));
        }
        if a.hi < b.lo || (a.hi == b.lo && b.lo < b.hi) {
            return Some(Ordering::Less);
        }
        if b.hi < a.lo || (b.hi == a.lo && a.lo < a.hi) {
            return Some(Ordering::Greater);
        }
        if bits >= max_bits {
            return None;
        }
        bits = (bits * 2).min(max_bits);
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn golden_ratio_isolated() {
        let p = IntPolynomial::from_i64(&[-1, -1, 1]);
        let iv = largest_real_root(&p, 64).unwrap();
        assert!((iv.approx() - 1.618_033_988_749_895).abs() < 1e-15);
        assert_eq!(Sturm::new(&p).count(&BigRational::from_integer((-2).into()), &BigRational::from_integer(2.into())), 2);
    }

    #[test]
    fn rational_root_is_exact() {
        let p = IntPolynomial::from_i64(&[-9, 1]);
        let iv = largest_real_root(&p, 64).unwrap();
        assert_eq!(iv.lo, BigRational::from_integer(9.into()));
        assert_eq!(iv.hi, iv.lo);
    }

    #[test]
    fn no_real_roots() {
        assert!(largest_real_root(&IntPolynomial::from_i64(&[1, 0, 1]), 32).is_none());
    }

    #[test]
    fn ordering_of_roots() {
        let p = IntPolynomial::from_i64(&[-2, 0, 1]);
        let q = IntPolynomial::from_i64(&[-3, 0, 1]);
        let mut a = largest_real_root(&p, 8).unwrap();
        let mut b = largest_real_root(&q, 8).unwrap();
        assert_eq!(compare_roots(&p, &mut a, &q, &mut b, 8, 4096), Some(Ordering::Less));
    }
}
