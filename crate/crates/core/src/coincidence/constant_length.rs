//! Subdivision of an integer-dilatation substitution into unit tiles.

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};

use crate::algebra::linalg::kernel;
use crate::algebra::{PisotReport, Rationals};
use crate::error::{Error, Result};
use crate::substitution::{LetterId, Substitution};

/// A substitution on unit tiles together with where each unit came from.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct UnitSubstitution {
    pub substitution: Substitution,
    /// Integer tile lengths, gcd 1.
    pub lengths: Vec<usize>,
    /// Unit letter ↦ (original letter, offset inside its tile).
    pub provenance: Vec<(LetterId, usize)>,
}

impl UnitSubstitution {
    /// Replaces each letter of `w` by its unit letters.
    pub fn expand(&self, w: &[LetterId]) -> Vec<LetterId> {
        let first = self.first_units();
        w.iter()
            .flat_map(|&a| first[a]..first[a] + self.lengths[a])
            .collect()
    }

    fn first_units(&self) -> Vec<usize> {
        let mut acc = 0;
        self.lengths
            .iter()
            .map(|&l| {
                let start = acc;
                acc += l;
                start
            })
            .collect()
    }
}

/// Left Perron–Frobenius eigenvector scaled to positive integers with gcd 1.
pub fn integer_tile_lengths(s: &Substitution, n: &BigInt) -> Result<Vec<BigInt>> {
    let a = s.abelianization();
    let k = s.size();
    let nq = BigRational::from_integer(n.clone());
    let m: Vec<Vec<BigRational>> = (0..k)
        .map(|j| {
            (0..k)
                .map(|i| {
                    let v = BigRational::from_integer(a.get(i, j).clone());
                    if i == j {
                        v - &nq
                    } else {
                        v
                    }
                })
                .collect()
        })
        .collect();
    let ker = kernel(&Rationals, &m, k);
    if ker.len() != 1 {
        return Err(Error::Internal(format!(
            "left eigenspace for {n} has dimension {}",
            ker.len()
        )));
    }
    let v = &ker[0];
    let den = v.iter().fold(BigInt::one(), |acc, q| acc.lcm(q.denom()));
    let mut ints: Vec<BigInt> = v.iter().map(|q| (q * &den).to_integer()).collect();
    let g = ints.iter().fold(BigInt::zero(), |acc, x| acc.gcd(x));
    for x in ints.iter_mut() {
        *x = &*x / &g;
    }
    if ints.iter().all(|x| x.is_negative()) {
        ints = ints.into_iter().map(|x| -x).collect();
    }
    if !ints.iter().all(|x| x.is_positive()) {
        return Err(Error::Internal("left eigenvector is not positive".into()));
    }
    Ok(ints)
}

fn integer_dilatation(pisot: &PisotReport) -> Result<BigInt> {
    if pisot.degree != 1 {
        return Err(Error::Precondition(format!(
            "dilatation has degree {}, constant-length reduction needs an integer",
            pisot.degree
        )));
    }
    Ok(-pisot.a0.clone())
}

/// Constant-length substitution on unit tiles, `N` the integer dilatation.
pub fn to_constant_length(s: &Substitution, pisot: &PisotReport) -> Result<UnitSubstitution> {
    let n_big = integer_dilatation(pisot)?;
    let n = n_big
        .to_usize()
        .ok_or_else(|| Error::ResourceLimit(format!("dilatation {n_big} too large")))?;
    let lengths: Vec<usize> = integer_tile_lengths(s, &n_big)?
        .iter()
        .map(|x| {
            x.to_usize()
                .ok_or_else(|| Error::ResourceLimit("tile length too large".into()))
        })
        .collect::<Result<_>>()?;
    let mut names = Vec::new();
    let mut provenance = Vec::new();
    for a in 0..s.size() {
        for i in 0..lengths[a] {
            names.push(if lengths[a] == 1 {
                s.name(a).to_string()
            } else {
                format!("{}({})", s.name(a), i + 1)
            });
            provenance.push((a, i));
        }
    }
    let placeholder = UnitSubstitution {
        substitution: s.clone(),
        lengths: lengths.clone(),
        provenance: provenance.clone(),
    };
    let mut rules = Vec::with_capacity(names.len());
    for &(a, i) in &provenance {
        let units = placeholder.expand(s.rule(a));
        if units.len() != n * lengths[a] {
            return Err(Error::Internal(format!(
                "unit expansion of {} has length {}, expected {}",
                s.name(a),
                units.len(),
                n * lengths[a]
            )));
        }
        rules.push(units[i * n..(i + 1) * n].to_vec());
    }
    Ok(UnitSubstitution {
        substitution: Substitution::new(names, rules)?,
        lengths,
        provenance,
    })
}
