//! Height and pure core of an integer-dilatation substitution.

use std::collections::HashMap;

use num_integer::Integer;
use serde::ser::SerializeStruct;
use serde::{Serialize, Serializer};

use super::aperiodic::{aperiodicity_check, AperiodicVerdict};
use super::constant_length::{to_constant_length, UnitSubstitution};
use crate::algebra::PisotReport;
use crate::error::{Error, Result};
use crate::substitution::{LetterId, Substitution};

/// Prefixes longer than this are not examined when computing the height.
const MAX_HEIGHT_PREFIX: usize = 4_000_000;

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PureCore {
    pub unit: UnitSubstitution,
    pub height: usize,
    pub core: Substitution,
    /// Core letter ↦ the block of unit letters it stands for.
    pub blocks: Vec<Vec<LetterId>>,
    /// Length of the fixed-word prefix used for the return positions.
    pub prefix_length: usize,
}

impl Serialize for PureCore {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        let unit = &self.unit.substitution;
        let mut st = s.serialize_struct("PureCore", 5)?;
        st.serialize_field("height", &self.height)?;
        st.serialize_field("prefix_length", &self.prefix_length)?;
        st.serialize_field("tile_lengths", &self.unit.lengths)?;
        st.serialize_field("unit_substitution", unit)?;
        st.serialize_field("core_substitution", &self.core)?;
        st.end()
    }
}

/// Part of `g` coprime to `n`.
pub fn coprime_part(mut g: usize, n: usize) -> usize {
    loop {
        let c = g.gcd(&n);
        if c == 1 {
            return g;
        }
        g /= c;
    }
}

/// `gcd{k > 0 : w_k = w_0}` over the given word, 0 if `w_0` never returns.
pub fn return_gcd(w: &[LetterId]) -> usize {
    w.iter()
        .enumerate()
        .skip(1)
        .filter(|(_, &x)| x == w[0])
        .fold(0, |g, (k, _)| g.gcd(&k))
}

fn block_name(s: &Substitution, block: &[LetterId]) -> String {
    let parts: Vec<&str> = block.iter().map(|&a| s.name(a)).collect();
    if parts.iter().all(|p| p.chars().count() == 1) {
        parts.concat()
    } else {
        parts.join("_")
    }
}

/// Rewrites a constant-length substitution on `h`-blocks read from its fixed word.
pub fn regroup(s: &Substitution, word: &[LetterId], h: usize) -> Result<(Substitution, Vec<Vec<LetterId>>)> {
    let mut index: HashMap<Vec<LetterId>, usize> = HashMap::new();
    let mut blocks: Vec<Vec<LetterId>> = Vec::new();
    for chunk in word.chunks_exact(h) {
        if !index.contains_key(chunk) {
            index.insert(chunk.to_vec(), blocks.len());
            blocks.push(chunk.to_vec());
        }
    }
    let mut rules: Vec<Vec<LetterId>> = Vec::new();
    let mut i = 0;
    while i < blocks.len() {
        let image = s.apply(&blocks[i]);
        let mut rule = Vec::with_capacity(image.len() / h);
        for chunk in image.chunks_exact(h) {
            let id = match index.get(chunk) {
                Some(&id) => id,
                None => {
                    index.insert(chunk.to_vec(), blocks.len());
                    blocks.push(chunk.to_vec());
                    blocks.len() - 1
                }
            };
            rule.push(id);
        }
        rules.push(rule);
        i += 1;
    }
    let names = blocks.iter().map(|b| block_name(s, b)).collect();
    Ok((Substitution::new(names, rules)?, blocks))
}

/// Reduces to unit tiles and regroups by the height so that the result has height 1.
pub fn pure_core(s: &Substitution, pisot: &PisotReport) -> Result<PureCore> {
    let ap = aperiodicity_check(s, pisot)?;
    if ap.verdict == AperiodicVerdict::Periodic {
        return Err(Error::Precondition(format!(
            "substitution is periodic: {}",
            ap.evidence
        )));
    }
    let unit = to_constant_length(s, pisot)?;
    let n = unit
        .substitution
        .constant_length()
        .expect("unit substitution has constant length");
    let len = n.saturating_pow(4).clamp(10_000, MAX_HEIGHT_PREFIX);
    let fp = unit.substitution.any_fixed_point_prefix(len)?;
    let g = return_gcd(&fp.word);
    if g == 0 {
        return Err(Error::Precondition(
            "first letter of the fixed word does not recur in the examined prefix".into(),
        ));
    }
    let height = coprime_part(g, n);
    let (core, blocks) = if height == 1 {
        let blocks = (0..unit.substitution.size()).map(|a| vec![a]).collect();
        (unit.substitution.clone(), blocks)
    } else {
        regroup(&unit.substitution, &fp.word, height)?
    };
    Ok(PureCore {
        unit,
        height,
        core,
        blocks,
        prefix_length: fp.word.len(),
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebra::minimal_polynomial_of_dilatation;
    use crate::catalog;

    fn core_of(s: &Substitution) -> PureCore {
        pure_core(s, &minimal_polynomial_of_dilatation(s).unwrap()).unwrap()
    }

    #[test]
    fn height_one_examples() {
        for s in [catalog::thue_morse(), catalog::period_doubling(), catalog::length_nine_cover()] {
            let c = core_of(&s);
            assert_eq!(c.height, 1);
            assert_eq!(c.core, s);
        }
    }

    #[test]
    fn height_three_regroups_to_period_doubling() {
        let s = Substitution::from_pairs(&[("a", "ab"), ("b", "ca"), ("c", "bd"), ("d", "bc")]).unwrap();
        let c = core_of(&s);
        assert_eq!(c.height, 3);
        assert_eq!(c.core.size(), 2);
        assert_eq!(c.core.constant_length(), Some(2));
        let again = core_of(&c.core);
        assert_eq!(again.height, 1);
        assert_eq!(again.core, c.core);
    }

    #[test]
    fn coprime_parts() {
        assert_eq!(coprime_part(12, 2), 3);
        assert_eq!(coprime_part(9, 3), 1);
        assert_eq!(coprime_part(7, 10), 7);
        assert_eq!(return_gcd(&[0, 1, 1, 0, 1, 0]), 1);
    }
}
