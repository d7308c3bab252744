//! First rational Čech cohomology of a substitution tiling space.
//!
//! The transition complex has one edge per letter and one transition edge
//! `v_ij` per allowed two-letter word, joining the node `out(i)` to `in(j)`.
//! Substitution sends `v_ij` to `v_kl` where `k` ends `φ(i)` and `l` begins
//! `φ(j)`. With `G₀^ER` the eventual range of the transition graph, the exact sequence
//!
//! `0 → H̃⁰(G₀^ER) → lim→ Aᵀ → Ȟ¹(Ω) → H¹(G₀^ER) → 0`
//!
//! gives `dim Ȟ¹ = rank(Aⁿ) − (C − 1) + cycles(G₀^ER)` over ℚ.

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use serde::Serialize;

use crate::algebra::dilatation::{perron_factor, PisotReport};
use crate::algebra::factor::{factor_over_integers, Factorization};
use crate::algebra::linalg::rank;
use crate::algebra::{char_poly, IntPolynomial, Rationals};
use crate::coincidence::aperiodic::{aperiodicity_check, Aperiodicity, AperiodicVerdict};
use crate::error::{Error, Result};
use crate::matrix::IntegerMatrix;
use crate::substitution::{Substitution, Transition};

/// Tile edges are implicit (one per letter); transition edges are stored sorted.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct TransitionComplex {
    pub letters: usize,
    pub transitions: Vec<Transition>,
}

impl TransitionComplex {
    pub fn edge_index(&self, t: Transition) -> Option<usize> {
        self.transitions.binary_search(&t).ok()
    }
}

/// Image of each transition edge, by index into [`TransitionComplex::transitions`].
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct EdgeMap {
    pub image: Vec<usize>,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ERData {
    pub er_edges: Vec<Transition>,
    /// Least power of the edge map fixing every eventual-range edge.
    pub fixing_power: u64,
    pub components: usize,
    pub vertices: usize,
    pub independent_cycles: usize,
}

#[derive(Clone, Debug, Serialize)]
pub struct CohomologyReport {
    pub dim_h1: usize,
    /// Rank of `Aⁿ` over ℚ, `n` the alphabet size.
    pub eventual_rank: usize,
    pub components: usize,
    pub independent_cycles: usize,
    pub fixing_power: u64,
    /// Eventual-range edges, rendered as two-letter words.
    pub er_edges: Vec<String>,
    /// Factored characteristic polynomial of the abelianization.
    pub eigenvalues: Factorization,
    /// Factored characteristic polynomial of the abelianization of the fixing power.
    pub power_eigenvalues: Factorization,
    /// (1) nonzero eigenvalues are 1 and conjugates of λ; (2) eigenvalue 1 has
    /// multiplicity `C − 1`; (3) `G₀^ER` has no cycles. Evaluated for the fixing power.
    pub three_conditions: [bool; 3],
    /// Whether `dim_h1 = d` agrees with all three conditions holding.
    pub conditions_consistent: bool,
    pub degree: usize,
    pub homological_pisot: bool,
    pub aperiodicity: Aperiodicity,
}

pub fn build_transition_complex(s: &Substitution) -> Result<TransitionComplex> {
    let transitions = s.transitions()?.iter().copied().collect();
    Ok(TransitionComplex {
        letters: s.size(),
        transitions,
    })
}

pub fn edge_dynamics(s: &Substitution, c: &TransitionComplex) -> Result<EdgeMap> {
    let image = c
        .transitions
        .iter()
        .map(|&(i, j)| {
            let k = *s.rule(i).last().expect("rules are nonempty");
            let l = s.rule(j)[0];
            c.edge_index((k, l)).ok_or_else(|| {
                Error::Internal(format!(
                    "image of v_{}{} is not an allowed transition",
                    s.name(i),
                    s.name(j)
                ))
            })
        })
        .collect::<Result<_>>()?;
    Ok(EdgeMap { image })
}

struct UnionFind {
    parent: Vec<usize>,
}

impl UnionFind {
    fn new(n: usize) -> Self {
        Self {
            parent: (0..n).collect(),
        }
    }

    fn find(&mut self, x: usize) -> usize {
        let mut r = x;
        while self.parent[r] != r {
            r = self.parent[r];
        }
        let mut y = x;
        while self.parent[y] != r {
            let next = self.parent[y];
            self.parent[y] = r;
            y = next;
        }
        r
    }

    fn union(&mut self, a: usize, b: usize) {
        let (ra, rb) = (self.find(a), self.find(b));
        if ra != rb {
            self.parent[ra.max(rb)] = ra.min(rb);
        }
    }
}

/// Components and first Betti number of the graph spanned by `edges`.
///
/// Node `out(i)` is `i` and node `in(j)` is `letters + j`.
fn graph_counts(letters: usize, edges: &[Transition]) -> (usize, usize, usize) {
    let mut uf = UnionFind::new(2 * letters);
    let mut touched = vec![false; 2 * letters];
    for &(i, j) in edges {
        touched[i] = true;
        touched[letters + j] = true;
        uf.union(i, letters + j);
    }
    let vertices = touched.iter().filter(|&&t| t).count();
    let components = (0..2 * letters)
        .filter(|&v| touched[v] && uf.find(v) == v)
        .count();
    let cycles = edges.len() + components - vertices;
    (components, vertices, cycles)
}

pub fn eventual_range(c: &TransitionComplex, m: &EdgeMap) -> ERData {
    let n = c.transitions.len();
    // after n steps every orbit has entered its cycle
    let mut on_cycle = vec![false; n];
    for e in 0..n {
        let mut x = e;
        for _ in 0..n {
            x = m.image[x];
        }
        on_cycle[x] = true;
    }
    let mut fixing_power = 1u64;
    for e in (0..n).filter(|&e| on_cycle[e]) {
        let mut len = 1u64;
        let mut x = m.image[e];
        while x != e {
            x = m.image[x];
            len += 1;
        }
        fixing_power = fixing_power.lcm(&len);
    }
    let er_edges: Vec<Transition> = (0..n)
        .filter(|&e| on_cycle[e])
        .map(|e| c.transitions[e])
        .collect();
    let (components, vertices, independent_cycles) = graph_counts(c.letters, &er_edges);
    ERData {
        er_edges,
        fixing_power,
        components,
        vertices,
        independent_cycles,
    }
}

fn rational_rows(m: &IntegerMatrix) -> Vec<Vec<BigRational>> {
    m.rows()
        .into_iter()
        .map(|r| r.into_iter().map(BigRational::from_integer).collect())
        .collect()
}

/// Rank of `Aⁿ` over ℚ, checked to be stable at `n + 1`.
pub fn eventual_rank(a: &IntegerMatrix) -> Result<usize> {
    let n = a.size() as u32;
    let an = a.pow(n);
    let r = rank(&Rationals, &rational_rows(&an));
    let r1 = rank(&Rationals, &rational_rows(&an.mul(a)));
    if r != r1 {
        return Err(Error::Internal(format!(
            "rank of A^n not stable: {r} then {r1}"
        )));
    }
    Ok(r)
}

/// Options for [`cohomology_report`].
#[derive(Clone, Copy, Debug, Default)]
pub struct CohomologyOptions {
    /// Skip the aperiodicity precondition.
    pub assume_aperiodic: bool,
}

/// `dim Ȟ¹` with the three-condition characterization, given the Pisot data of `s`.
pub fn cohomology_report(
    s: &Substitution,
    pisot: &PisotReport,
    opts: CohomologyOptions,
) -> Result<CohomologyReport> {
    let aperiodicity = aperiodicity_check(s, pisot)?;
    if aperiodicity.verdict == AperiodicVerdict::Periodic && !opts.assume_aperiodic {
        return Err(Error::Precondition(format!(
            "substitution is periodic ({})",
            aperiodicity.evidence
        )));
    }
    let complex = build_transition_complex(s)?;
    let map = edge_dynamics(s, &complex)?;
    let er = eventual_range(&complex, &map);
    let a = s.abelianization();
    let eventual_rank = eventual_rank(&a)?;
    let dim_h1 = (eventual_rank + er.independent_cycles)
        .checked_sub(er.components - 1)
        .ok_or_else(|| Error::Internal("negative cohomology dimension".into()))?;

    let power = u32::try_from(er.fixing_power)
        .map_err(|_| Error::ResourceLimit("fixing power too large".into()))?;
    let power_eigenvalues = if power == 1 {
        pisot.factorization.clone()
    } else {
        factor_over_integers(&char_poly(&a.pow(power)))?
    };
    let (power_min_poly, _) = perron_factor(&power_eigenvalues)?;
    let x = IntPolynomial::x();
    let x_minus_one = IntPolynomial::from_i64(&[-1, 1]);
    let only_expected = power_eigenvalues
        .factors
        .iter()
        .all(|(f, _)| *f == x || *f == x_minus_one || *f == power_min_poly);
    let ones = power_eigenvalues.multiplicity(&x_minus_one) as usize;
    let three_conditions = [
        only_expected,
        ones + 1 == er.components,
        er.independent_cycles == 0,
    ];
    let conditions_consistent =
        three_conditions.iter().all(|&b| b) == (dim_h1 == pisot.degree);
    Ok(CohomologyReport {
        dim_h1,
        eventual_rank,
        components: er.components,
        independent_cycles: er.independent_cycles,
        fixing_power: er.fixing_power,
        er_edges: er
            .er_edges
            .iter()
            .map(|&(i, j)| s.display_word(&[i, j]))
            .collect(),
        eigenvalues: pisot.factorization.clone(),
        power_eigenvalues,
        three_conditions,
        conditions_consistent,
        degree: pisot.degree,
        homological_pisot: pisot.is_pisot && dim_h1 == pisot.degree,
        aperiodicity,
    })
}

/// `dim Ȟ¹(Ω_φ; ℚ)` and the related data for a primitive aperiodic substitution.
pub fn cech_h1_dimension(s: &Substitution) -> Result<CohomologyReport> {
    let pisot = crate::algebra::minimal_polynomial_of_dilatation(s)?;
    cohomology_report(s, &pisot, CohomologyOptions::default())
}

/// Homological Pisot: Pisot of degree `d` with `dim Ȟ¹ = d`.
pub fn is_homological_pisot(s: &Substitution) -> Result<(bool, CohomologyReport, PisotReport)> {
    let pisot = crate::algebra::minimal_polynomial_of_dilatation(s)?;
    let report = cohomology_report(s, &pisot, CohomologyOptions::default())?;
    Ok((report.homological_pisot, report, pisot))
}

/// Multiplicity of the eigenvalue `r` in a factorization (for integer `r`).
pub fn integer_eigenvalue_multiplicity(f: &Factorization, r: i64) -> u32 {
    f.multiplicity(&IntPolynomial::linear_root(BigInt::from(r)))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::catalog;

    fn names(s: &Substitution, edges: &[Transition]) -> Vec<String> {
        edges.iter().map(|&(i, j)| s.display_word(&[i, j])).collect()
    }

    #[test]
    fn fibonacci_complex() {
        let s = catalog::fibonacci();
        let c = build_transition_complex(&s).unwrap();
        assert_eq!(names(&s, &c.transitions), ["aa", "ab", "ba"]);
        let m = edge_dynamics(&s, &c).unwrap();
        let img: Vec<String> = m
            .image
            .iter()
            .map(|&e| names(&s, &[c.transitions[e]])[0].clone())
            .collect();
        // v_aa -> v_ba, v_ab -> v_ba, v_ba -> v_aa
        assert_eq!(img, ["ba", "ba", "aa"]);
        let er = eventual_range(&c, &m);
        assert_eq!(names(&s, &er.er_edges), ["aa", "ba"]);
        assert_eq!(er.fixing_power, 2);
        assert_eq!((er.components, er.independent_cycles), (1, 0));
        let r = cech_h1_dimension(&s).unwrap();
        assert_eq!(r.dim_h1, 2);
        assert!(r.homological_pisot);
        assert!(r.conditions_consistent);
    }

    #[test]
    fn thue_morse_has_a_cycle() {
        let s = catalog::thue_morse();
        let r = cech_h1_dimension(&s).unwrap();
        assert_eq!(r.eventual_rank, 1);
        assert_eq!(r.independent_cycles, 1);
        assert_eq!(r.components, 1);
        assert_eq!(r.dim_h1, 2);
        assert!(!r.homological_pisot);
        assert_eq!(r.three_conditions, [true, true, false]);
    }

    #[test]
    fn single_letter() {
        let s = Substitution::from_pairs(&[("a", "aa")]).unwrap();
        let c = build_transition_complex(&s).unwrap();
        assert_eq!(c.transitions, [(0, 0)]);
        let m = edge_dynamics(&s, &c).unwrap();
        assert_eq!(m.image, [0]);
    }

    #[test]
    fn asymptotic_cycle_example() {
        let r = cech_h1_dimension(&catalog::asymptotic_cycle()).unwrap();
        assert_eq!(r.dim_h1, 3);
        assert_eq!(r.degree, 2);
        assert!(!r.homological_pisot);
    }
}
