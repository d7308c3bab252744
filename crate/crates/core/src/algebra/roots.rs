//! Complex root approximation for integer polynomials.
//!
//! Roots are first located in `f64` by the Aberth–Ehrlich iteration and then
//! polished by the same iteration in binary fixed point (`value · 2^prec`
//! held in a `BigInt`). Inclusion radii turn the approximations into
//! disks that provably contain one root each.

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};

use super::poly::IntPolynomial;
use crate::error::{Error, Result};

/// Complex number `(re + i·im) / 2^prec`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Fixed {
    pub re: BigInt,
    pub im: BigInt,
}

impl Fixed {
    pub fn zero() -> Self {
        Self {
            re: BigInt::zero(),
            im: BigInt::zero(),
        }
    }

    pub fn from_int(v: &BigInt, prec: u32) -> Self {
        Self {
            re: v << prec,
            im: BigInt::zero(),
        }
    }

    pub fn from_f64(re: f64, im: f64, prec: u32) -> Self {
        Self {
            re: f64_to_fixed(re, prec),
            im: f64_to_fixed(im, prec),
        }
    }

    pub fn to_f64(&self, prec: u32) -> (f64, f64) {
        (fixed_to_f64(&self.re, prec), fixed_to_f64(&self.im, prec))
    }

    pub fn add(&self, o: &Self) -> Self {
        Self {
            re: &self.re + &o.re,
            im: &self.im + &o.im,
        }
    }

    pub fn sub(&self, o: &Self) -> Self {
        Self {
            re: &self.re - &o.re,
            im: &self.im - &o.im,
        }
    }

    pub fn mul(&self, o: &Self, prec: u32) -> Self {
        Self {
            re: (&self.re * &o.re - &self.im * &o.im) >> prec,
            im: (&self.re * &o.im + &self.im * &o.re) >> prec,
        }
    }

    /// Squared modulus, scaled by `2^prec`.
    pub fn norm_sq(&self, prec: u32) -> BigInt {
        (&self.re * &self.re + &self.im * &self.im) >> prec
    }

    pub fn div(&self, o: &Self, prec: u32) -> Option<Self> {
        let den = &o.re * &o.re + &o.im * &o.im;
        if den.is_zero() {
            return None;
        }
        let re = ((&self.re * &o.re + &self.im * &o.im) << prec) / &den;
        let im = ((&self.im * &o.re - &self.re * &o.im) << prec) / &den;
        Some(Self { re, im })
    }

    pub fn conj(&self) -> Self {
        Self {
            re: self.re.clone(),
            im: -&self.im,
        }
    }

    /// Upper bound for the modulus as an exact rational, valid up to one unit in the last place.
    pub fn modulus_upper(&self, prec: u32) -> BigRational {
        let n2 = &self.re * &self.re + &self.im * &self.im;
        let s = n2.sqrt() + BigInt::from(2);
        BigRational::new(s, BigInt::one() << prec)
    }
}

fn f64_to_fixed(x: f64, prec: u32) -> BigInt {
    if x == 0.0 || !x.is_finite() {
        return BigInt::zero();
    }
    let (mant, exp) = frexp(x);
    // x = mant · 2^exp with mant in [0.5, 1): take 53 bits of mantissa
    let m = (mant * (1u64 << 53) as f64) as i64;
    let shift = exp - 53 + prec as i32;
    let m = BigInt::from(m);
    if shift >= 0 {
        m << shift as u32
    } else {
        m >> (-shift) as u32
    }
}

fn frexp(x: f64) -> (f64, i32) {
    let e = x.abs().log2().floor() as i32 + 1;
    let m = x / 2f64.powi(e);
    (m, e)
}

fn fixed_to_f64(v: &BigInt, prec: u32) -> f64 {
    let bits = v.bits() as i64;
    if bits <= 1000 {
        let drop = (bits - 60).max(0) as u32;
        let top = (v >> drop).to_f64().unwrap_or(0.0);
        return top * 2f64.powi(drop as i32 - prec as i32);
    }
    f64::INFINITY.copysign(if v.is_negative() { -1.0 } else { 1.0 })
}

/// Cauchy bound `1 + max |c_i / c_n|` as `f64`.
fn cauchy_bound(p: &IntPolynomial) -> f64 {
    let n = p.deg();
    let lc = p.coeff(n).abs().to_f64().unwrap_or(f64::MAX);
    let m = p.coeffs()[..n]
        .iter()
        .map(|c| c.abs().to_f64().unwrap_or(f64::MAX))
        .fold(0.0, f64::max);
    1.0 + m / lc
}

type C64 = (f64, f64);

fn cmul(a: C64, b: C64) -> C64 {
    (a.0 * b.0 - a.1 * b.1, a.0 * b.1 + a.1 * b.0)
}

fn cdiv(a: C64, b: C64) -> C64 {
    let d = b.0 * b.0 + b.1 * b.1;
    ((a.0 * b.0 + a.1 * b.1) / d, (a.1 * b.0 - a.0 * b.1) / d)
}

fn aberth_f64(coeffs: &[f64], iterations: usize) -> Vec<C64> {
    let n = coeffs.len() - 1;
    let deriv: Vec<f64> = (1..=n).map(|i| coeffs[i] * i as f64).collect();
    let eval = |c: &[f64], z: C64| {
        let mut acc = (0.0, 0.0);
        for &k in c.iter().rev() {
            acc = cmul(acc, z);
            acc.0 += k;
        }
        acc
    };
    let lc = coeffs[n].abs();
    let r = 1.0 + coeffs[..n].iter().map(|c| c.abs() / lc).fold(0.0, f64::max);
    let radius = r.min(1e12) * 0.8;
    let mut z: Vec<C64> = (0..n)
        .map(|k| {
            let t = 2.0 * std::f64::consts::PI * (k as f64 + 0.25) / n as f64 + 0.4;
            (radius * t.cos(), radius * t.sin())
        })
        .collect();
    for _ in 0..iterations {
        let mut moved = 0.0f64;
        for i in 0..n {
            let f = eval(coeffs, z[i]);
            let df = eval(&deriv, z[i]);
            if f == (0.0, 0.0) {
                continue;
            }
            let ratio = if df == (0.0, 0.0) { (1e-8, 1e-8) } else { cdiv(f, df) };
            let mut s = (0.0, 0.0);
            for (j, zj) in z.iter().enumerate() {
                if j != i {
                    let d = (z[i].0 - zj.0, z[i].1 - zj.1);
                    if d != (0.0, 0.0) {
                        let inv = cdiv((1.0, 0.0), d);
                        s.0 += inv.0;
                        s.1 += inv.1;
                    }
                }
            }
            let rs = cmul(ratio, s);
            let w = cdiv(ratio, (1.0 - rs.0, -rs.1));
            if w.0.is_finite() && w.1.is_finite() {
                z[i] = (z[i].0 - w.0, z[i].1 - w.1);
                let mag = (w.0 * w.0 + w.1 * w.1).sqrt() / (1.0 + (z[i].0.hypot(z[i].1)));
                moved = moved.max(mag);
            }
        }
        if moved < 1e-15 {
            break;
        }
    }
    z
}

/// Horner evaluation of `p` and `p'` at a fixed-point complex argument.
fn eval_with_derivative(p: &[BigInt], z: &Fixed, prec: u32) -> (Fixed, Fixed) {
    let mut f = Fixed::zero();
    let mut df = Fixed::zero();
    for c in p.iter().rev() {
        df = df.mul(z, prec).add(&f);
        f = f.mul(z, prec);
        f.re += c << prec;
    }
    (f, df)
}

pub fn eval_fixed(p: &IntPolynomial, z: &Fixed, prec: u32) -> Fixed {
    let mut f = Fixed::zero();
    for c in p.coeffs().iter().rev() {
        f = f.mul(z, prec);
        f.re += c << prec;
    }
    f
}

/// Approximates every complex root of a squarefree polynomial to about `prec` bits.
pub fn complex_roots(p: &IntPolynomial, prec: u32) -> Result<Vec<Fixed>> {
    let n = p
        .degree()
        .filter(|&d| d >= 1)
        .ok_or_else(|| Error::Precondition("root finding needs a nonconstant polynomial".into()))?;
    let bound = cauchy_bound(p);
    // Start from unit-circle points when f64 evaluation would overflow.
    let coeffs: Vec<f64> = p
        .coeffs()
        .iter()
        .map(|c| c.to_f64().unwrap_or(f64::MAX))
        .collect();
    let usable = coeffs.iter().all(|c| c.is_finite()) && bound.powi(n as i32).is_finite();
    let start: Vec<C64> = if usable {
        aberth_f64(&coeffs, 2000)
    } else {
        (0..n)
            .map(|k| {
                let t = 2.0 * std::f64::consts::PI * (k as f64 + 0.25) / n as f64 + 0.4;
                (t.cos(), t.sin())
            })
            .collect()
    };
    let mut z: Vec<Fixed> = start
        .iter()
        .map(|&(re, im)| Fixed::from_f64(re, im, prec))
        .collect();
    let tol = BigInt::one() << (prec / 2).max(8);
    let one = Fixed::from_int(&BigInt::one(), prec);
    let max_rounds = 200 + 4 * prec as usize;
    let mut polish = false;
    for _ in 0..max_rounds {
        let mut worst = BigInt::zero();
        for i in 0..n {
            let (f, df) = eval_with_derivative(p.coeffs(), &z[i], prec);
            if f.re.is_zero() && f.im.is_zero() {
                continue;
            }
            let ratio = match f.div(&df, prec) {
                Some(r) => r,
                None => Fixed::from_f64(1e-6, 1e-6, prec),
            };
            let mut s = Fixed::zero();
            for j in 0..n {
                if j != i {
                    let d = z[i].sub(&z[j]);
                    if let Some(inv) = one.div(&d, prec) {
                        s = s.add(&inv);
                    }
                }
            }
            let denom = one.sub(&ratio.mul(&s, prec));
            let w = ratio.div(&denom, prec).unwrap_or(ratio);
            let size = w.re.abs().max(w.im.abs());
            if size > worst {
                worst = size;
            }
            z[i] = z[i].sub(&w);
        }
        // Quadratic convergence: once corrections fall to half precision one more sweep suffices.
        if polish || worst.is_zero() {
            break;
        }
        polish = worst <= tol;
    }
    Ok(z)
}

/// Inclusion radius of every approximation: disk `i` contains at least one root,
/// and when disks are pairwise disjoint each contains exactly one.
///
/// Radius `n·|f(zᵢ)| / |lc·∏_{j≠i}(zᵢ − zⱼ)|`, doubled and padded by `2^{-prec/2}`
/// to absorb fixed-point rounding.
pub fn inclusion_radii(p: &IntPolynomial, z: &[Fixed], prec: u32) -> Option<Vec<BigRational>> {
    let n = z.len();
    let lc = Fixed::from_int(p.leading()?, prec);
    let pad = BigRational::new(BigInt::one(), BigInt::one() << (prec / 2));
    let mut out = Vec::with_capacity(n);
    for i in 0..n {
        let f = eval_fixed(p, &z[i], prec);
        let mut den = lc.clone();
        for j in 0..n {
            if j != i {
                den = den.mul(&z[i].sub(&z[j]), prec);
            }
        }
        let w = f.div(&den, prec)?;
        let r = w.modulus_upper(prec) * BigRational::from_integer(BigInt::from(2 * n));
        out.push(r + &pad);
    }
    Some(out)
}

/// Lower bound for `|a - b|`, exact rational.
pub fn distance_lower(a: &Fixed, b: &Fixed, prec: u32) -> BigRational {
    let d = a.sub(b);
    let n2 = &d.re * &d.re + &d.im * &d.im;
    let s = n2.sqrt() - BigInt::from(2);
    BigRational::new(s.max(BigInt::zero()), BigInt::one() << prec)
}

/// Working precision adequate for a polynomial: grows with degree and coefficient size.
pub fn default_precision(p: &IntPolynomial) -> u32 {
    let bits = p.max_abs_coeff().bits() as u32;
    let n = p.deg() as u32;
    (128 + 4 * n * (bits + 2)).min(16384)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn golden_ratio_roots() {
        let p = IntPolynomial::from_i64(&[-1, -1, 1]);
        let prec = 200;
        let mut roots: Vec<f64> = complex_roots(&p, prec)
            .unwrap()
            .iter()
            .map(|z| z.to_f64(prec).0)
            .collect();
        roots.sort_by(|a, b| a.partial_cmp(b).unwrap());
        let phi = (1.0 + 5f64.sqrt()) / 2.0;
        assert!((roots[1] - phi).abs() < 1e-14);
        assert!((roots[0] + 1.0 / phi).abs() < 1e-14);
    }

    #[test]
    fn cyclotomic_roots_have_unit_modulus() {
        let p = IntPolynomial::from_i64(&[1, 1, 1, 1, 1]);
        let prec = 160;
        let z = complex_roots(&p, prec).unwrap();
        let radii = inclusion_radii(&p, &z, prec).unwrap();
        for (zi, r) in z.iter().zip(&radii) {
            let (re, im) = zi.to_f64(prec);
            assert!((re.hypot(im) - 1.0).abs() < 1e-20_f64.max(1e-15));
            assert!(r < &BigRational::new(BigInt::one(), BigInt::from(1u64 << 40)));
        }
    }

    #[test]
    fn high_precision_agrees_with_exact_square_root() {
        // x^2 - 2: the positive root squared must be 2 to nearly full precision
        let p = IntPolynomial::from_i64(&[-2, 0, 1]);
        let prec = 512;
        let z = complex_roots(&p, prec).unwrap();
        let pos = z.iter().find(|w| w.re.is_positive()).unwrap();
        let sq = pos.mul(pos, prec);
        let err = (&sq.re - (BigInt::from(2) << prec)).abs();
        assert!(err.bits() < 16, "error has {} bits", err.bits());
    }
}
