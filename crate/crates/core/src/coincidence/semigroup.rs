//! Column semigroup of a constant-length substitution and coincidence rank.
//!
//! Column `r` of `φ` is the map `a ↦ φ(a)_r`. Position `qN + r` of
//! `φⁿ⁺¹(a)` is column `r` applied to position `q` of `φⁿ(a)`, so the
//! columns of all powers form the semigroup generated by the `N` columns.

use std::collections::{BTreeSet, HashMap, VecDeque};

use num_bigint::BigUint;
use serde::ser::SerializeStruct;
use serde::{Serialize, Serializer};

use crate::error::{Error, Result};
use crate::substitution::{LetterId, Substitution};

/// Closure sizes beyond this are reported as a resource error.
pub const MAX_SEMIGROUP_SIZE: usize = 2_000_000;

/// A total map on the alphabet, `f[a]` the image of `a`.
pub type ColumnFunction = Vec<LetterId>;

pub struct ColumnSemigroup {
    pub length: usize,
    /// Elements in breadth-first order of discovery.
    pub elements: Vec<ColumnFunction>,
    /// For each element, `(n, k)` with element = column `k` of `φⁿ`.
    pub origin: Vec<(u32, BigUint)>,
}

impl ColumnSemigroup {
    pub fn len(&self) -> usize {
        self.elements.len()
    }

    pub fn is_empty(&self) -> bool {
        self.elements.is_empty()
    }
}

fn require_constant_length(s: &Substitution) -> Result<usize> {
    s.constant_length()
        .ok_or_else(|| Error::Precondition("substitution does not have constant length".into()))
}

pub fn generators(s: &Substitution) -> Result<Vec<ColumnFunction>> {
    let n = require_constant_length(s)?;
    Ok((0..n)
        .map(|r| (0..s.size()).map(|a| s.rule(a)[r]).collect())
        .collect())
}

/// Closure of the generator columns under composition, by worklist.
pub fn column_semigroup(s: &Substitution) -> Result<ColumnSemigroup> {
    let gens = generators(s)?;
    let n = gens.len();
    let mut index: HashMap<ColumnFunction, usize> = HashMap::new();
    let mut elements = Vec::new();
    let mut origin = Vec::new();
    let mut queue = VecDeque::new();
    for (r, g) in gens.iter().enumerate() {
        if !index.contains_key(g) {
            index.insert(g.clone(), elements.len());
            queue.push_back(elements.len());
            elements.push(g.clone());
            origin.push((1u32, BigUint::from(r)));
        }
    }
    while let Some(h) = queue.pop_front() {
        for (r, g) in gens.iter().enumerate() {
            let next: ColumnFunction = elements[h].iter().map(|&x| g[x]).collect();
            if index.contains_key(&next) {
                continue;
            }
            if elements.len() >= MAX_SEMIGROUP_SIZE {
                return Err(Error::ResourceLimit(format!(
                    "column semigroup exceeds {MAX_SEMIGROUP_SIZE} elements"
                )));
            }
            let (pow, pos) = &origin[h];
            let o = (pow + 1, pos * BigUint::from(n) + BigUint::from(r));
            index.insert(next.clone(), elements.len());
            queue.push_back(elements.len());
            elements.push(next);
            origin.push(o);
        }
    }
    Ok(ColumnSemigroup {
        length: n,
        elements,
        origin,
    })
}

fn image_size(f: &ColumnFunction) -> usize {
    f.iter().collect::<BTreeSet<_>>().len()
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CoincidenceReport {
    names: Vec<String>,
    pub cr: usize,
    pub semigroup_size: usize,
    pub witness: ColumnFunction,
    /// The witness is column `witness_position` of `φ^witness_power`.
    pub witness_power: u32,
    pub witness_position: BigUint,
    pub eventually_coincident_pairs: Vec<(LetterId, LetterId)>,
    pub strong_classes: Vec<Vec<LetterId>>,
    /// Whether strong coincidence turned out transitive on this input.
    pub strong_relation_transitive: bool,
    pub stable_tuple: Vec<LetterId>,
}

impl Serialize for CoincidenceReport {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        let name = |a: &LetterId| self.names[*a].clone();
        let mut st = s.serialize_struct("CoincidenceReport", 9)?;
        st.serialize_field("cr", &self.cr)?;
        st.serialize_field("semigroup_size", &self.semigroup_size)?;
        let column: Vec<[String; 2]> = self
            .witness
            .iter()
            .enumerate()
            .map(|(a, b)| [name(&a), name(b)])
            .collect();
        st.serialize_field("witness_column", &column)?;
        st.serialize_field("witness_power", &self.witness_power)?;
        st.serialize_field("witness_position", &self.witness_position.to_string())?;
        let pairs: Vec<[String; 2]> = self
            .eventually_coincident_pairs
            .iter()
            .map(|(a, b)| [name(a), name(b)])
            .collect();
        st.serialize_field("eventually_coincident_pairs", &pairs)?;
        let classes: Vec<Vec<String>> = self
            .strong_classes
            .iter()
            .map(|c| c.iter().map(name).collect())
            .collect();
        st.serialize_field("strong_classes", &classes)?;
        st.serialize_field("strong_relation_transitive", &self.strong_relation_transitive)?;
        let tuple: Vec<String> = self.stable_tuple.iter().map(name).collect();
        st.serialize_field("stable_tuple", &tuple)?;
        st.end()
    }
}

/// Pairs `a < b` merged by some element of the semigroup.
pub fn eventually_coincident(k: usize, sg: &ColumnSemigroup) -> Vec<Vec<bool>> {
    let mut ec = vec![vec![false; k]; k];
    for f in &sg.elements {
        for a in 0..k {
            for b in a + 1..k {
                if f[a] == f[b] {
                    ec[a][b] = true;
                    ec[b][a] = true;
                }
            }
        }
    }
    ec
}

/// Strong coincidence relation: every pair reachable from `(a, b)` under
/// simultaneous columns is diagonal or eventually coincident.
pub fn strong_relation(s: &Substitution, ec: &[Vec<bool>]) -> Result<Vec<Vec<bool>>> {
    let gens = generators(s)?;
    let k = s.size();
    let mut strong = vec![vec![false; k]; k];
    for a in 0..k {
        strong[a][a] = true;
        for b in a + 1..k {
            let mut seen = BTreeSet::new();
            let mut stack = vec![(a, b)];
            let mut ok = true;
            while let Some((x, y)) = stack.pop() {
                if x == y || !seen.insert((x, y)) {
                    continue;
                }
                if !ec[x][y] {
                    ok = false;
                    break;
                }
                for g in &gens {
                    let (u, v) = (g[x], g[y]);
                    stack.push((u.min(v), u.max(v)));
                }
            }
            strong[a][b] = ok;
            strong[b][a] = ok;
        }
    }
    Ok(strong)
}

/// Classes of the transitive closure of strong coincidence, and whether the
/// relation was already transitive.
pub fn strongly_coincident_classes(
    s: &Substitution,
    ec: &[Vec<bool>],
) -> Result<(Vec<Vec<LetterId>>, bool)> {
    let strong = strong_relation(s, ec)?;
    let k = s.size();
    let mut class_of: Vec<usize> = (0..k).collect();
    for a in 0..k {
        for b in a + 1..k {
            if strong[a][b] {
                let (ca, cb) = (class_of[a], class_of[b]);
                if ca != cb {
                    let (keep, drop) = (ca.min(cb), ca.max(cb));
                    for c in class_of.iter_mut() {
                        if *c == drop {
                            *c = keep;
                        }
                    }
                }
            }
        }
    }
    let mut classes: Vec<Vec<LetterId>> = Vec::new();
    for rep in 0..k {
        let members: Vec<LetterId> = (0..k).filter(|&a| class_of[a] == rep).collect();
        if !members.is_empty() {
            classes.push(members);
        }
    }
    let transitive = classes
        .iter()
        .all(|c| c.iter().all(|&a| c.iter().all(|&b| strong[a][b])));
    Ok((classes, transitive))
}

pub fn coincidence_rank(s: &Substitution) -> Result<CoincidenceReport> {
    let sg = column_semigroup(s)?;
    let k = s.size();
    let (wi, cr) = sg
        .elements
        .iter()
        .enumerate()
        .map(|(i, f)| (i, image_size(f)))
        .min_by_key(|&(i, c)| (c, i))
        .expect("semigroup is nonempty");
    let ec = eventually_coincident(k, &sg);
    let pairs = (0..k)
        .flat_map(|a| (a + 1..k).map(move |b| (a, b)))
        .filter(|&(a, b)| ec[a][b])
        .collect();
    let (strong_classes, transitive) = strongly_coincident_classes(s, &ec)?;
    let witness = sg.elements[wi].clone();
    let stable_tuple: Vec<LetterId> = witness.iter().copied().collect::<BTreeSet<_>>().into_iter().collect();
    let (witness_power, witness_position) = sg.origin[wi].clone();
    Ok(CoincidenceReport {
        names: s.names().to_vec(),
        cr,
        semigroup_size: sg.len(),
        witness,
        witness_power,
        witness_position,
        eventually_coincident_pairs: pairs,
        strong_classes,
        strong_relation_transitive: transitive,
        stable_tuple,
    })
}

/// Identifies strongly coincident letters; each class is named after its first member.
pub fn quotient_substitution(s: &Substitution) -> Result<Substitution> {
    let report = coincidence_rank(s)?;
    quotient_by_classes(s, &report.strong_classes, report.strong_relation_transitive)
}

pub fn quotient_by_classes(
    s: &Substitution,
    classes: &[Vec<LetterId>],
    transitive: bool,
) -> Result<Substitution> {
    if !transitive {
        return Err(Error::Precondition(
            "strong coincidence is not transitive on this substitution".into(),
        ));
    }
    let mut class_of = vec![0; s.size()];
    for (c, members) in classes.iter().enumerate() {
        for &a in members {
            class_of[a] = c;
        }
    }
    let mut rules = Vec::with_capacity(classes.len());
    for members in classes {
        let image: Vec<usize> = s.rule(members[0]).iter().map(|&x| class_of[x]).collect();
        for &a in &members[1..] {
            let other: Vec<usize> = s.rule(a).iter().map(|&x| class_of[x]).collect();
            if other != image {
                return Err(Error::Precondition(format!(
                    "letters {} and {} are identified but their images differ classwise",
                    s.name(members[0]),
                    s.name(a)
                )));
            }
        }
        rules.push(image);
    }
    let names = classes.iter().map(|c| s.name(c[0]).to_string()).collect();
    Substitution::new(names, rules)
}

/// Minimum image size over columns of `φⁿ`, `1 ≤ n ≤ max_power`, by direct expansion.
pub fn brute_force_cr(s: &Substitution, max_power: usize) -> Result<usize> {
    require_constant_length(s)?;
    let mut best = s.size();
    for n in 1..=max_power {
        let words: Vec<Vec<LetterId>> = (0..s.size())
            .map(|a| s.iterate(a, n))
            .collect::<Result<_>>()?;
        for k in 0..words[0].len() {
            let col: BTreeSet<LetterId> = words.iter().map(|w| w[k]).collect();
            best = best.min(col.len());
        }
    }
    Ok(best)
}

/// True when the letters keep pairwise distinct images in every column of `φⁿ`, `n ≤ max_power`.
pub fn is_stable_tuple(s: &Substitution, tuple: &[LetterId], max_power: usize) -> Result<bool> {
    for n in 1..=max_power {
        let words: Vec<Vec<LetterId>> = tuple
            .iter()
            .map(|&a| s.iterate(a, n))
            .collect::<Result<_>>()?;
        for k in 0..words[0].len() {
            let col: BTreeSet<LetterId> = words.iter().map(|w| w[k]).collect();
            if col.len() != tuple.len() {
                return Ok(false);
            }
        }
    }
    Ok(true)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::catalog;

    #[test]
    fn thue_morse() {
        let s = catalog::thue_morse();
        let sg = column_semigroup(&s).unwrap();
        assert_eq!(sg.elements, vec![vec![0, 1], vec![1, 0]]);
        let r = coincidence_rank(&s).unwrap();
        assert_eq!(r.cr, 2);
        assert_eq!(r.strong_classes, vec![vec![0], vec![1]]);
        assert!(r.eventually_coincident_pairs.is_empty());
        assert_eq!(quotient_substitution(&s).unwrap(), s);
    }

    #[test]
    fn period_doubling() {
        let s = catalog::period_doubling();
        let sg = column_semigroup(&s).unwrap();
        assert!(sg.elements.contains(&vec![0, 0]));
        let r = coincidence_rank(&s).unwrap();
        assert_eq!(r.cr, 1);
        assert_eq!(r.strong_classes, vec![vec![0, 1]]);
        let q = quotient_substitution(&s).unwrap();
        assert_eq!(q, Substitution::from_pairs(&[("a", "aa")]).unwrap());
    }

    #[test]
    fn single_letter() {
        let s = Substitution::from_pairs(&[("a", "aa")]).unwrap();
        assert_eq!(column_semigroup(&s).unwrap().elements, vec![vec![0]]);
    }

    #[test]
    fn witness_origin_is_a_real_column() {
        let s = catalog::length_nine_cover();
        let r = coincidence_rank(&s).unwrap();
        assert_eq!(r.cr, 3);
        let n = r.witness_power as usize;
        let k: usize = r.witness_position.to_string().parse().unwrap();
        let col: Vec<LetterId> = (0..s.size()).map(|a| s.iterate(a, n).unwrap()[k]).collect();
        assert_eq!(col, r.witness);
        assert!(is_stable_tuple(&s, &r.stable_tuple, 3).unwrap());
    }
}
