//! Random grammar generation for tests and harnesses.
//!
//! Grammars are emitted as text and parsed, so generated inputs exercise
//! the same code path as user files and round-trip by construction. Every
//! nonterminal gets at least one rule; productivity is not forced, since
//! the library must cope with unproductive parts anyway.

use crate::grammar::Grammar;
use rand::Rng;

/// Shape parameters for [`random_grammar`].
#[derive(Debug, Clone)]
pub struct GrammarSpec {
    pub nonterminals: usize,
    pub terminals: usize,
    pub rules: usize,
    /// Per linear rule: maximum terminals on each side of the kept
    /// nonterminal. Per general rule: maximum RHS length.
    pub max_segment_len: usize,
    pub linear: bool,
}

impl GrammarSpec {
    pub fn linear(nonterminals: usize, terminals: usize, rules: usize) -> GrammarSpec {
        GrammarSpec {
            nonterminals,
            terminals,
            rules,
            max_segment_len: 2,
            linear: true,
        }
    }

    pub fn general(nonterminals: usize, terminals: usize, rules: usize) -> GrammarSpec {
        GrammarSpec {
            nonterminals,
            terminals,
            rules,
            max_segment_len: 4,
            linear: false,
        }
    }
}

/// Draws a grammar with `spec.rules` rules (at least one per nonterminal),
/// start symbol `N0`. Deterministic given the RNG state.
pub fn random_grammar(spec: &GrammarSpec, rng: &mut impl Rng) -> Grammar {
    assert!(spec.nonterminals >= 1 && spec.terminals >= 1);
    assert!(spec.rules >= spec.nonterminals, "need one rule per nonterminal");
    assert!(spec.terminals <= 26);

    let mut lines = vec!["start: N0".to_string()];
    for i in 0..spec.rules {
        let lhs = if i < spec.nonterminals {
            // Guarantee every nonterminal owns a rule.
            i
        } else {
            rng.random_range(0..spec.nonterminals)
        };
        let rhs = if spec.linear {
            random_linear_rhs(spec, rng)
        } else {
            random_general_rhs(spec, rng)
        };
        lines.push(format!("N{lhs} -> {rhs}"));
    }
    let text = lines.join("\n");
    Grammar::parse(&text).expect("generated grammar parses")
}

fn random_linear_rhs(spec: &GrammarSpec, rng: &mut impl Rng) -> String {
    let west_len = rng.random_range(0..=spec.max_segment_len);
    let east_len = rng.random_range(0..=spec.max_segment_len);
    let with_nonterminal = rng.random_bool(0.6);
    let mut parts: Vec<String> = (0..west_len).map(|_| terminal_token(spec, rng)).collect();
    if with_nonterminal {
        parts.push(format!("N{}", rng.random_range(0..spec.nonterminals)));
        parts.extend((0..east_len).map(|_| terminal_token(spec, rng)));
    }
    if parts.is_empty() {
        "eps".to_string()
    } else {
        parts.join(" ")
    }
}

fn random_general_rhs(spec: &GrammarSpec, rng: &mut impl Rng) -> String {
    let len = rng.random_range(0..=spec.max_segment_len);
    let parts: Vec<String> = (0..len)
        .map(|_| {
            if rng.random_bool(0.4) {
                format!("N{}", rng.random_range(0..spec.nonterminals))
            } else {
                terminal_token(spec, rng)
            }
        })
        .collect();
    if parts.is_empty() {
        "eps".to_string()
    } else {
        parts.join(" ")
    }
}

fn terminal_token(spec: &GrammarSpec, rng: &mut impl Rng) -> String {
    let letter = (b'a' + rng.random_range(0..spec.terminals) as u8) as char;
    format!("'{letter}'")
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    #[test]
    fn generated_grammars_respect_the_spec() {
        for seed in 0..40 {
            let mut rng = ChaCha8Rng::seed_from_u64(seed);
            let spec = GrammarSpec::linear(4, 3, 9);
            let g = random_grammar(&spec, &mut rng);
            assert!(g.is_linear());
            assert_eq!(g.rule_count(), 9);
            assert!(g.nonterminal_count() <= 4);
            assert!(g.terminal_count() <= 3);

            let mut rng = ChaCha8Rng::seed_from_u64(seed);
            let spec = GrammarSpec::general(3, 3, 8);
            let g = random_grammar(&spec, &mut rng);
            assert_eq!(g.rule_count(), 8);
        }
    }

    #[test]
    fn generation_is_deterministic() {
        let spec = GrammarSpec::general(4, 3, 10);
        let a = random_grammar(&spec, &mut ChaCha8Rng::seed_from_u64(99));
        let b = random_grammar(&spec, &mut ChaCha8Rng::seed_from_u64(99));
        assert_eq!(a, b);
    }

    #[test]
    fn generated_text_round_trips() {
        for seed in 0..20 {
            let mut rng = ChaCha8Rng::seed_from_u64(seed);
            let g = random_grammar(&GrammarSpec::general(4, 3, 10), &mut rng);
            assert_eq!(Grammar::parse(&g.to_text()).unwrap(), g);
        }
    }
}
