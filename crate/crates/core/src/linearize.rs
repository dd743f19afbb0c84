//! Rewrites an arbitrary context-free grammar into a linear grammar that
//! produces a subset of the original language and is a test set for it.
//!
//! Every productive nonterminal `A` gets a fixed witness word `x_A` (its
//! shortest derivable word, lexicographic tie-break). A rule with `n >= 1`
//! productive nonterminal occurrences becomes `n` rules, the i-th keeping
//! the i-th occurrence and substituting the witness word for every other.
//! Terminal-only rules are copied verbatim; rules mentioning an
//! unproductive nonterminal derive nothing and are dropped.

use crate::grammar::{Grammar, NtId, Symbol, Word};

/// Where a produced rule came from: the source rule index in the original
/// grammar and, for rules with a kept nonterminal, its RHS position.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct RuleOrigin {
    pub source_rule: usize,
    pub kept_position: Option<usize>,
}

/// A linear grammar produced by [`linearize`], with per-rule provenance.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct LinearGrammar {
    grammar: Grammar,
    origins: Vec<RuleOrigin>,
}

impl LinearGrammar {
    pub fn grammar(&self) -> &Grammar {
        &self.grammar
    }

    pub fn origins(&self) -> &[RuleOrigin] {
        &self.origins
    }

    pub fn into_grammar(self) -> Grammar {
        self.grammar
    }
}

/// The chosen witness word `x_A` for every productive nonterminal.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct WitnessTable {
    words: Vec<Option<Word>>,
}

impl WitnessTable {
    pub fn word(&self, nt: NtId) -> Option<&Word> {
        self.words.get(nt.0).and_then(|w| w.as_ref())
    }

    /// Productive nonterminals with their witnesses, in id order.
    pub fn iter(&self) -> impl Iterator<Item = (NtId, &Word)> {
        self.words
            .iter()
            .enumerate()
            .filter_map(|(i, w)| w.as_ref().map(|w| (NtId(i), w)))
    }
}

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum LinearizeError {
    #[error("the start symbol derives no terminal word; the language is empty")]
    EmptyLanguage,
}

/// Builds the linear grammar and the witness table.
///
/// Produced rules are ordered by source rule index, then by kept-occurrence
/// position, which fixes the total rule order downstream constructions
/// depend on. The result shares the original grammar's symbol tables, so
/// words are directly comparable across the two grammars.
pub fn linearize(g: &Grammar) -> Result<(LinearGrammar, WitnessTable), LinearizeError> {
    let witnesses = WitnessTable {
        words: g.shortest_words(),
    };
    if witnesses.word(g.start()).is_none() {
        return Err(LinearizeError::EmptyLanguage);
    }

    let mut rules: Vec<(NtId, Vec<Symbol>)> = Vec::new();
    let mut origins: Vec<RuleOrigin> = Vec::new();
    for rule in g.rules() {
        let occurrences = rule.nonterminal_occurrences();
        if occurrences.iter().any(|(_, id)| witnesses.word(*id).is_none()) {
            continue;
        }
        if occurrences.is_empty() {
            rules.push((rule.lhs, rule.rhs.clone()));
            origins.push(RuleOrigin {
                source_rule: rule.index,
                kept_position: None,
            });
            continue;
        }
        for &(kept, _) in &occurrences {
            let mut rhs = Vec::with_capacity(rule.rhs.len());
            for (pos, sym) in rule.rhs.iter().enumerate() {
                match sym {
                    Symbol::Terminal(_) => rhs.push(*sym),
                    Symbol::Nonterminal(_) if pos == kept => rhs.push(*sym),
                    Symbol::Nonterminal(id) => {
                        let x = witnesses.word(*id).expect("occurrence checked productive");
                        rhs.extend(x.0.iter().map(|t| Symbol::Terminal(*t)));
                    }
                }
            }
            rules.push((rule.lhs, rhs));
            origins.push(RuleOrigin {
                source_rule: rule.index,
                kept_position: Some(kept),
            });
        }
    }

    let nt_names = (0..g.nonterminal_count())
        .map(|i| g.nonterminal_name(NtId(i)).to_string())
        .collect();
    let term_names = (0..g.terminal_count())
        .map(|i| g.terminal_name(crate::grammar::TermId(i)).to_string())
        .collect();
    let grammar = Grammar::from_parts(nt_names, term_names, rules, g.start());
    debug_assert!(grammar.is_linear());
    Ok((LinearGrammar { grammar, origins }, witnesses))
}

/// True iff the produced grammar respects the rule-count bound: each source
/// rule is duplicated at most `|rhs|` times, so `|R'| <= |G|`.
pub fn rule_count_bound_check(g: &Grammar, lin: &LinearGrammar) -> bool {
    lin.grammar().rule_count() <= g.size()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::grammar::Grammar;

    fn rules_of(g: &Grammar) -> Vec<String> {
        (0..g.rule_count()).map(|i| g.format_rule(i)).collect()
    }

    #[test]
    fn doubling_rule_splits_into_left_and_right_keeps() {
        let g = Grammar::parse("S -> S S | 'a'").unwrap();
        let (lin, witnesses) = linearize(&g).unwrap();
        assert_eq!(
            rules_of(lin.grammar()),
            ["S -> S 'a'", "S -> 'a' S", "S -> 'a'"]
        );
        let x_s = witnesses.word(g.start()).unwrap();
        assert_eq!(g.word_to_string(x_s), "a");
        assert_eq!(
            lin.origins(),
            [
                RuleOrigin { source_rule: 0, kept_position: Some(0) },
                RuleOrigin { source_rule: 0, kept_position: Some(1) },
                RuleOrigin { source_rule: 1, kept_position: None },
            ]
        );
        // The produced language is a subset of the original.
        for w in lin.grammar().enumerate_words(6, usize::MAX).words {
            assert!(g.contains(&w));
        }
    }

    #[test]
    fn linear_input_is_unchanged() {
        let g = Grammar::parse("S -> 'a' S 'b' | 'c'").unwrap();
        let (lin, _) = linearize(&g).unwrap();
        assert_eq!(rules_of(lin.grammar()), rules_of(&g));
    }

    #[test]
    fn two_nonterminal_rule_substitutes_each_side() {
        let g = Grammar::parse("S -> A B\nA -> 'a'\nB -> 'b'").unwrap();
        let (lin, witnesses) = linearize(&g).unwrap();
        assert_eq!(
            rules_of(lin.grammar()),
            ["S -> A 'b'", "S -> 'a' B", "A -> 'a'", "B -> 'b'"]
        );
        let name = |nt: &str| g.nonterminal_id(nt).unwrap();
        assert_eq!(g.word_to_string(witnesses.word(name("A")).unwrap()), "a");
        assert_eq!(g.word_to_string(witnesses.word(name("B")).unwrap()), "b");
        for w in lin.grammar().enumerate_words(4, usize::MAX).words {
            assert!(g.contains(&w));
        }
    }

    #[test]
    fn unproductive_rules_are_dropped() {
        let g = Grammar::parse("S -> A 'a' | B\nA -> 'b'\nB -> B").unwrap();
        let (lin, _) = linearize(&g).unwrap();
        assert_eq!(rules_of(lin.grammar()), ["S -> A 'a'", "A -> 'b'"]);
    }

    #[test]
    fn empty_language_is_an_error() {
        let g = Grammar::parse("S -> 'a' S").unwrap();
        assert_eq!(linearize(&g).unwrap_err(), LinearizeError::EmptyLanguage);
    }

    #[test]
    fn rule_count_bound_examples() {
        for (text, size) in [
            ("S -> S S | 'a'", 5),
            ("S -> 'a' S 'b' | 'c'", 6),
            ("S -> A B\nA -> 'a'\nB -> 'b'", 7),
        ] {
            let g = Grammar::parse(text).unwrap();
            assert_eq!(g.size(), size);
            let (lin, _) = linearize(&g).unwrap();
            assert!(rule_count_bound_check(&g, &lin), "{text}");
        }
    }
}
