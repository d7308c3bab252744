//! Named substitutions used throughout the test-suite and the shipped corpus.

use crate::substitution::Substitution;

fn build(pairs: &[(&str, &str)]) -> Substitution {
    Substitution::from_pairs(pairs).expect("catalog substitution is valid")
}

fn build_multi(rules: &[(&str, &str)]) -> Substitution {
    let names: Vec<String> = rules.iter().map(|(n, _)| n.to_string()).collect();
    let words = rules
        .iter()
        .map(|(_, rhs)| {
            rhs.split_whitespace()
                .map(|t| names.iter().position(|n| n == t).expect("known letter"))
                .collect()
        })
        .collect();
    Substitution::new(names, words).expect("catalog substitution is valid")
}

/// a → ab, b → a
pub fn fibonacci() -> Substitution {
    build(&[("a", "ab"), ("b", "a")])
}

/// a → ab, b → ba
pub fn thue_morse() -> Substitution {
    build(&[("a", "ab"), ("b", "ba")])
}

/// a → ab, b → aa
pub fn period_doubling() -> Substitution {
    build(&[("a", "ab"), ("b", "aa")])
}

/// a → ab, b → ac, c → a
pub fn tribonacci() -> Substitution {
    build(&[("a", "ab"), ("b", "ac"), ("c", "a")])
}

/// 1 → 21112, 2 → 121: irreducible quadratic Pisot with three-dimensional H¹.
pub fn asymptotic_cycle() -> Substitution {
    build(&[("1", "21112"), ("2", "121")])
}

/// Base of the one-dimensional triple cover example, dilatation 9.
pub fn length_nine_base() -> Substitution {
    build(&[("A", "ABABAAABA"), ("B", "BAAABAABA")])
}

/// The triple cover of [`length_nine_base`], transcribed rule by rule.
pub fn length_nine_cover() -> Substitution {
    build_multi(&[
        ("a1", "a1 b2 a2 b1 a3 a1 a3 b3 a1"),
        ("a2", "a2 b1 a3 b3 a1 a3 a1 b2 a2"),
        ("a3", "a3 b3 a1 b2 a2 a2 a2 b1 a3"),
        ("b1", "b1 a3 a1 a3 b3 a1 a3 b3 a1"),
        ("b2", "b2 a2 a2 a2 b1 a3 a1 b2 a2"),
        ("b3", "b3 a1 a3 a1 b2 a2 a2 b1 a3"),
    ])
}

/// Quadratic base, dilatation 6 + 3√5: [`length_nine_base`] with a BABABA suffix on A.
pub fn quadratic_base() -> Substitution {
    build(&[("A", "ABABAAABABABABA"), ("B", "BAAABAABA")])
}

/// Cubic base with spectator letter C, dilatation 3θ⁴ for the tribonacci number θ.
pub fn cubic_base() -> Substitution {
    let a = format!("ABABAAABA{}{}", "CBA".repeat(6), "BAAA".repeat(3));
    let b = format!("BAAABAABA{}{}", "CBA".repeat(3), "CBAAA".repeat(3));
    let c = format!("{}{}", "CBA".repeat(3), "BAAA".repeat(3));
    build(&[("A", &a), ("B", &b), ("C", &c)])
}

/// Every catalog entry with a stable identifier.
pub fn all() -> Vec<(&'static str, Substitution)> {
    vec![
        ("fibonacci", fibonacci()),
        ("thue_morse", thue_morse()),
        ("period_doubling", period_doubling()),
        ("tribonacci", tribonacci()),
        ("asymptotic_cycle", asymptotic_cycle()),
        ("length_nine_base", length_nine_base()),
        ("length_nine_cover", length_nine_cover()),
        ("quadratic_base", quadratic_base()),
        ("cubic_base", cubic_base()),
    ]
}

pub fn by_name(name: &str) -> Option<Substitution> {
    all().into_iter().find(|(n, _)| *n == name).map(|(_, s)| s)
}
