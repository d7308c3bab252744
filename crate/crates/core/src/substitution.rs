//! Substitutions on a finite alphabet and their word combinatorics.
//!
//! Letters are indexed internally by `0..alphabet_size`; display names are
//! only consulted when reading or writing documents.

use std::collections::{BTreeSet, HashMap};

use num_bigint::BigInt;
use serde::ser::{SerializeMap, SerializeStruct};
use serde::{Deserialize, Serialize, Serializer};

use crate::error::{Error, Result};
use crate::matrix::IntegerMatrix;

/// Default cap on the length of any word produced by iteration.
pub const DEFAULT_MAX_WORD_LENGTH: usize = 10_000_000;

/// Iteration cap for language generation.
const LANGUAGE_MAX_ROUNDS: usize = 64;

pub type LetterId = usize;

/// A finite word, stored as letter ids.
pub type Word = Vec<LetterId>;

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Letter {
    pub id: LetterId,
    pub name: String,
}

/// An ordered pair `(i, j)` such that the two-letter word `ij` is allowed.
pub type Transition = (LetterId, LetterId);

/// The set of allowed two-letter words.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct TransitionSet {
    pub pairs: BTreeSet<Transition>,
}

impl TransitionSet {
    pub fn contains(&self, i: LetterId, j: LetterId) -> bool {
        self.pairs.contains(&(i, j))
    }

    pub fn len(&self) -> usize {
        self.pairs.len()
    }

    pub fn is_empty(&self) -> bool {
        self.pairs.is_empty()
    }

    pub fn iter(&self) -> impl Iterator<Item = &Transition> {
        self.pairs.iter()
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub struct Primitivity {
    pub primitive: bool,
    /// Least `m` with `A^m` strictly positive.
    pub witness_power: Option<u32>,
}

/// Prefix of a one-sided fixed word of some power of a substitution.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FixedPointPrefix {
    pub seed: LetterId,
    /// The power of the substitution whose rule for `seed` begins with `seed`.
    pub power: usize,
    pub word: Word,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Substitution {
    names: Vec<String>,
    rules: Vec<Word>,
    lookup: HashMap<String, LetterId>,
}

#[derive(Deserialize)]
#[serde(untagged)]
enum RuleDoc {
    Text(String),
    Letters(Vec<String>),
}

#[derive(Deserialize)]
struct SubstitutionDoc {
    alphabet: Vec<String>,
    rules: HashMap<String, RuleDoc>,
}

impl Substitution {
    /// Validates and builds a substitution from display names and rules given as ids.
    pub fn new(names: Vec<String>, rules: Vec<Word>) -> Result<Self> {
        if names.is_empty() {
            return Err(Error::Validation("empty alphabet".into()));
        }
        if names.len() != rules.len() {
            return Err(Error::Validation(format!(
                "{} letters but {} rules",
                names.len(),
                rules.len()
            )));
        }
        let mut lookup = HashMap::with_capacity(names.len());
        for (id, name) in names.iter().enumerate() {
            if name.is_empty() {
                return Err(Error::Validation("empty letter name".into()));
            }
            if lookup.insert(name.clone(), id).is_some() {
                return Err(Error::Validation(format!("duplicate letter {name:?}")));
            }
        }
        for (id, rule) in rules.iter().enumerate() {
            if rule.is_empty() {
                return Err(Error::Validation(format!(
                    "empty rule for letter {:?}",
                    names[id]
                )));
            }
            if let Some(bad) = rule.iter().find(|&&l| l >= names.len()) {
                return Err(Error::Validation(format!(
                    "rule for {:?} references unknown letter id {bad}",
                    names[id]
                )));
            }
        }
        Ok(Self {
            names,
            rules,
            lookup,
        })
    }

    /// Builds a substitution from single-character letters, e.g. `[("a", "ab"), ("b", "a")]`.
    pub fn from_pairs(pairs: &[(&str, &str)]) -> Result<Self> {
        let names: Vec<String> = pairs.iter().map(|(n, _)| n.to_string()).collect();
        let lookup: HashMap<&str, usize> = pairs
            .iter()
            .enumerate()
            .map(|(i, (n, _))| (*n, i))
            .collect();
        let mut rules = Vec::with_capacity(pairs.len());
        for (name, rhs) in pairs {
            let mut rule = Vec::new();
            for ch in rhs.chars() {
                let key = ch.to_string();
                let id = lookup.get(key.as_str()).ok_or_else(|| {
                    Error::Validation(format!("rule for {name:?} uses unknown letter {key:?}"))
                })?;
                rule.push(*id);
            }
            rules.push(rule);
        }
        Self::new(names, rules)
    }

    /// Parses a substitution document:
    /// `{"alphabet": [...], "rules": {"a": "ab", "b": ["a"]}}`.
    pub fn from_json(text: &str) -> Result<Self> {
        let doc: SubstitutionDoc = serde_json::from_str(text)?;
        Self::from_value_doc(doc)
    }

    pub fn from_value(value: &serde_json::Value) -> Result<Self> {
        let doc: SubstitutionDoc = serde_json::from_value(value.clone())?;
        Self::from_value_doc(doc)
    }

    fn from_value_doc(doc: SubstitutionDoc) -> Result<Self> {
        let index: HashMap<&str, usize> = doc
            .alphabet
            .iter()
            .enumerate()
            .map(|(i, n)| (n.as_str(), i))
            .collect();
        if index.len() != doc.alphabet.len() {
            return Err(Error::Validation("duplicate letters in alphabet".into()));
        }
        let single_char = doc.alphabet.iter().all(|n| n.chars().count() == 1);
        for key in doc.rules.keys() {
            if !index.contains_key(key.as_str()) {
                return Err(Error::Validation(format!(
                    "rule given for unknown letter {key:?}"
                )));
            }
        }
        let mut rules = Vec::with_capacity(doc.alphabet.len());
        for name in &doc.alphabet {
            let rule = doc
                .rules
                .get(name)
                .ok_or_else(|| Error::Validation(format!("no rule for letter {name:?}")))?;
            let tokens: Vec<String> = match rule {
                RuleDoc::Letters(v) => v.clone(),
                RuleDoc::Text(s) if single_char => s.chars().map(|c| c.to_string()).collect(),
                RuleDoc::Text(_) => {
                    return Err(Error::Validation(format!(
                        "rule for {name:?} must use the array form: letter names are multi-character"
                    )))
                }
            };
            let mut word = Vec::with_capacity(tokens.len());
            for t in &tokens {
                let id = index.get(t.as_str()).ok_or_else(|| {
                    Error::Validation(format!("rule for {name:?} uses unknown letter {t:?}"))
                })?;
                word.push(*id);
            }
            rules.push(word);
        }
        Self::new(doc.alphabet, rules)
    }

    /// Serializes to the substitution document format, keys in alphabet order.
    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("substitution serializes")
    }

    pub fn size(&self) -> usize {
        self.names.len()
    }

    pub fn names(&self) -> &[String] {
        &self.names
    }

    pub fn name(&self, id: LetterId) -> &str {
        &self.names[id]
    }

    pub fn letters(&self) -> Vec<Letter> {
        self.names
            .iter()
            .enumerate()
            .map(|(id, name)| Letter {
                id,
                name: name.clone(),
            })
            .collect()
    }

    pub fn letter_id(&self, name: &str) -> Option<LetterId> {
        self.lookup.get(name).copied()
    }

    pub fn rule(&self, id: LetterId) -> &[LetterId] {
        &self.rules[id]
    }

    pub fn rules(&self) -> &[Word] {
        &self.rules
    }

    pub fn rule_lengths(&self) -> Vec<usize> {
        self.rules.iter().map(Vec::len).collect()
    }

    pub fn max_rule_length(&self) -> usize {
        self.rules.iter().map(Vec::len).max().unwrap_or(0)
    }

    /// `Some(N)` if every rule has length `N`.
    pub fn constant_length(&self) -> Option<usize> {
        let n = self.rules[0].len();
        self.rules.iter().all(|r| r.len() == n).then_some(n)
    }

    fn single_char_names(&self) -> bool {
        self.names.iter().all(|n| n.chars().count() == 1)
    }

    /// Human-readable rendering: concatenated for one-character names, space separated otherwise.
    pub fn display_word(&self, w: &[LetterId]) -> String {
        let parts = w.iter().map(|&l| self.names[l].as_str());
        if self.single_char_names() {
            parts.collect()
        } else {
            parts.collect::<Vec<_>>().join(" ")
        }
    }

    /// Inverse of [`display_word`](Self::display_word).
    pub fn parse_word(&self, text: &str) -> Result<Word> {
        let tokens: Vec<String> = if self.single_char_names() && !text.contains(' ') {
            text.chars().map(|c| c.to_string()).collect()
        } else {
            text.split_whitespace().map(str::to_string).collect()
        };
        if tokens.is_empty() {
            return Err(Error::Parse("empty word".into()));
        }
        tokens
            .iter()
            .map(|t| {
                self.letter_id(t)
                    .ok_or_else(|| Error::Parse(format!("unknown letter {t:?}")))
            })
            .collect()
    }

    /// Applies the substitution to a word letter by letter.
    pub fn apply(&self, w: &[LetterId]) -> Word {
        let mut out = Vec::with_capacity(w.iter().map(|&l| self.rules[l].len()).sum());
        for &l in w {
            out.extend_from_slice(&self.rules[l]);
        }
        out
    }

    fn apply_capped(&self, w: &[LetterId], cap: usize) -> Result<Word> {
        let len: usize = w.iter().map(|&l| self.rules[l].len()).sum();
        if len > cap {
            return Err(Error::ResourceLimit(format!(
                "word of length {len} exceeds cap {cap}"
            )));
        }
        Ok(self.apply(w))
    }

    /// Abelianization: entry `(i, j)` counts letter `i` in the rule for `j`.
    pub fn abelianization(&self) -> IntegerMatrix {
        let n = self.size();
        let mut counts = vec![vec![0u64; n]; n];
        for (j, rule) in self.rules.iter().enumerate() {
            for &i in rule {
                counts[i][j] += 1;
            }
        }
        let rows: Vec<Vec<BigInt>> = counts
            .into_iter()
            .map(|r| r.into_iter().map(BigInt::from).collect())
            .collect();
        IntegerMatrix::from_rows(&rows)
    }

    /// Primitivity with the least positive power, searched up to `n^2 - 2n + 2`.
    pub fn is_primitive(&self) -> Primitivity {
        matrix_primitivity(&self.abelianization())
    }

    /// `φⁿ(a)` with the default length cap.
    pub fn iterate(&self, a: LetterId, n: usize) -> Result<Word> {
        self.iterate_capped(a, n, DEFAULT_MAX_WORD_LENGTH)
    }

    pub fn iterate_capped(&self, a: LetterId, n: usize, cap: usize) -> Result<Word> {
        let mut w = vec![a];
        for _ in 0..n {
            w = self.apply_capped(&w, cap)?;
        }
        Ok(w)
    }

    /// The substitution `φᵏ`.
    pub fn power(&self, k: usize) -> Result<Self> {
        if k == 0 {
            return Err(Error::Precondition("power must be at least 1".into()));
        }
        let rules = (0..self.size())
            .map(|a| self.iterate(a, k))
            .collect::<Result<Vec<_>>>()?;
        Self::new(self.names.clone(), rules)
    }

    /// All allowed words of length at most `maxlen`.
    ///
    /// Iterates `φ` on the factor set until it stops growing.
    pub fn language(&self, maxlen: usize) -> Result<BTreeSet<Word>> {
        if maxlen == 0 {
            return Ok(BTreeSet::new());
        }
        let mut known: BTreeSet<Word> = (0..self.size()).map(|a| vec![a]).collect();
        let mut frontier: Vec<Word> = known.iter().cloned().collect();
        for _ in 0..LANGUAGE_MAX_ROUNDS {
            let mut fresh = Vec::new();
            for w in &frontier {
                let image = self.apply(w);
                for start in 0..image.len() {
                    let top = (start + maxlen).min(image.len());
                    for end in start + 1..=top {
                        let f = &image[start..end];
                        if !known.contains(f) {
                            known.insert(f.to_vec());
                            fresh.push(f.to_vec());
                        }
                    }
                }
            }
            if fresh.is_empty() {
                return Ok(known);
            }
            frontier = fresh;
        }
        Err(Error::ResourceLimit(format!(
            "language of length {maxlen} did not stabilize in {LANGUAGE_MAX_ROUNDS} rounds"
        )))
    }

    /// Allowed words of length exactly `len`, in lexicographic order of ids.
    pub fn words_of_length(&self, len: usize) -> Result<Vec<Word>> {
        Ok(self
            .language(len)?
            .into_iter()
            .filter(|w| w.len() == len)
            .collect())
    }

    pub fn is_allowed(&self, w: &[LetterId]) -> Result<bool> {
        Ok(self.language(w.len())?.contains(w))
    }

    pub fn transitions(&self) -> Result<TransitionSet> {
        let pairs = self
            .words_of_length(2)?
            .into_iter()
            .map(|w| (w[0], w[1]))
            .collect();
        Ok(TransitionSet { pairs })
    }

    /// Least `k ≥ 1` such that `φᵏ(a)` begins with `a`, if any.
    pub fn prefix_power(&self, a: LetterId) -> Option<usize> {
        let mut cur = a;
        for k in 1..=self.size() {
            cur = self.rules[cur][0];
            if cur == a {
                return Some(k);
            }
        }
        None
    }

    /// Length-`len` prefix of the one-sided fixed word grown from `a`.
    pub fn fixed_point_prefix(&self, a: LetterId, len: usize) -> Result<FixedPointPrefix> {
        let power = self.prefix_power(a).ok_or_else(|| {
            Error::Precondition(format!(
                "no power of the substitution has a rule for {:?} starting with itself",
                self.names[a]
            ))
        })?;
        let mut w = vec![a];
        while w.len() < len {
            let mut next = w.clone();
            for _ in 0..power {
                let cap = len.saturating_mul(self.max_rule_length()).max(len);
                // only the prefix matters; truncate to keep memory bounded
                next = self.apply_capped(&next, cap.max(DEFAULT_MAX_WORD_LENGTH))?;
                next.truncate(len);
            }
            if next.len() <= w.len() {
                return Err(Error::Precondition(format!(
                    "fixed word from {:?} does not grow",
                    self.names[a]
                )));
            }
            w = next;
        }
        w.truncate(len);
        Ok(FixedPointPrefix {
            seed: a,
            power,
            word: w,
        })
    }

    /// Fixed-word prefix from the first letter (in alphabet order) that admits one.
    pub fn any_fixed_point_prefix(&self, len: usize) -> Result<FixedPointPrefix> {
        for a in 0..self.size() {
            if self.prefix_power(a).is_some() {
                return self.fixed_point_prefix(a, len);
            }
        }
        Err(Error::Precondition("no letter generates a fixed word".into()))
    }
}

/// Primitivity of a nonnegative matrix, searching powers up to `n^2 - 2n + 2`.
pub fn matrix_primitivity(m: &IntegerMatrix) -> Primitivity {
    let n = m.size();
    let bound = (n * n + 2).saturating_sub(2 * n).max(1) as u32;
    let base = m.support();
    let mut cur = base.clone();
    for k in 1..=bound {
        if cur.iter().all(|r| r.iter().all(|&b| b)) {
            return Primitivity {
                primitive: true,
                witness_power: Some(k),
            };
        }
        cur = bool_mul(&cur, &base);
    }
    Primitivity {
        primitive: false,
        witness_power: None,
    }
}

fn bool_mul(a: &[Vec<bool>], b: &[Vec<bool>]) -> Vec<Vec<bool>> {
    let n = a.len();
    let mut out = vec![vec![false; n]; n];
    for i in 0..n {
        for k in 0..n {
            if a[i][k] {
                for j in 0..n {
                    out[i][j] |= b[k][j];
                }
            }
        }
    }
    out
}

struct RulesInOrder<'a>(&'a Substitution);

impl Serialize for RulesInOrder<'_> {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        let sub = self.0;
        let single = sub.single_char_names();
        let mut map = s.serialize_map(Some(sub.size()))?;
        for (id, name) in sub.names.iter().enumerate() {
            if single {
                map.serialize_entry(name, &sub.display_word(&sub.rules[id]))?;
            } else {
                let parts: Vec<&str> = sub.rules[id].iter().map(|&l| sub.name(l)).collect();
                map.serialize_entry(name, &parts)?;
            }
        }
        map.end()
    }
}

impl Serialize for Substitution {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        let mut st = s.serialize_struct("Substitution", 2)?;
        st.serialize_field("alphabet", &self.names)?;
        st.serialize_field("rules", &RulesInOrder(self))?;
        st.end()
    }
}
