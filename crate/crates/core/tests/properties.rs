//! Randomized cross-module properties over generated grammars.

use cfg_testset::grammar::{Grammar, TermId, Word};
use cfg_testset::linearize::{linearize, rule_count_bound_check};
use cfg_testset::path_graph::{all_pairs_optimal, build_graph, Vertex};
use cfg_testset::random::{random_grammar, GrammarSpec};
use cfg_testset::testset::{phi_k, phi_k_with, test_set, BuildOptions};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

fn general_grammars(count: u64, base_seed: u64) -> impl Iterator<Item = Grammar> {
    (0..count).map(move |i| {
        let spec = GrammarSpec::general(1 + (i as usize % 4), 1 + (i as usize % 3), 4 + (i as usize % 5));
        random_grammar(&spec, &mut ChaCha8Rng::seed_from_u64(base_seed + i))
    })
}

fn linear_grammars(count: u64, base_seed: u64) -> impl Iterator<Item = Grammar> {
    (0..count).map(move |i| {
        let rules = 2 + (i as usize % 7);
        let spec = GrammarSpec::linear((1 + (i as usize % 4)).min(rules), 1 + (i as usize % 3), rules);
        random_grammar(&spec, &mut ChaCha8Rng::seed_from_u64(base_seed + i))
    })
}

/// Enumeration and membership describe the same language: exhaustive over
/// every candidate word up to length 6.
#[test]
fn enumeration_agrees_with_membership_on_random_grammars() {
    for g in general_grammars(25, 0xACE) {
        let max_len = 6;
        let enumerated = g.enumerate_words(max_len, usize::MAX);
        assert!(!enumerated.truncated);
        for w in &enumerated.words {
            assert!(g.contains(w), "enumerated word fails membership in\n{g}");
        }
        let mut expected: Vec<Word> = Vec::new();
        let mut stack: Vec<Vec<usize>> = vec![Vec::new()];
        while let Some(prefix) = stack.pop() {
            let word = Word(prefix.iter().map(|&t| TermId(t)).collect());
            if g.contains(&word) {
                expected.push(word);
            }
            if prefix.len() < max_len {
                for t in 0..g.terminal_count() {
                    let mut next = prefix.clone();
                    next.push(t);
                    stack.push(next);
                }
            }
        }
        expected.sort_by(|a, b| a.len_lex_cmp(b));
        assert_eq!(enumerated.words, expected, "language mismatch for\n{g}");
    }
}

#[test]
fn size_and_linearity_survive_rule_reordering() {
    for g in general_grammars(20, 0xBEA) {
        // Rotate the rule lines; the start directive pins the start symbol.
        let text = g.to_text();
        let mut lines: Vec<&str> = text.lines().collect();
        let rules = &mut lines[1..];
        rules.rotate_left(1.min(rules.len().saturating_sub(1)));
        let rotated = Grammar::parse(&lines.join("\n")).unwrap();
        assert_eq!(g.size(), rotated.size());
        assert_eq!(g.is_linear(), rotated.is_linear());
    }
}

#[test]
fn linearization_is_linear_and_produces_a_sublanguage() {
    for g in general_grammars(40, 0xCAB) {
        let Ok((lin, witnesses)) = linearize(&g) else {
            // Empty language: nothing to check.
            continue;
        };
        assert!(lin.grammar().is_linear());
        assert!(rule_count_bound_check(&g, &lin), "rule bound for\n{g}");
        for (nt, word) in witnesses.iter() {
            assert!(
                g.with_start(nt).contains(word),
                "witness for {} not derivable",
                g.nonterminal_name(nt)
            );
        }
        for w in lin.grammar().enumerate_words(10, 2000).words {
            assert!(g.contains(&w), "linearized word escapes the language of\n{g}");
        }
    }
}

#[test]
fn linearization_fixes_productive_linear_grammars() {
    let mut checked = 0;
    for g in linear_grammars(60, 0xDAD) {
        let productive = g.productive_nonterminals();
        if productive.len() != g.nonterminal_count() {
            continue;
        }
        let (lin, _) = linearize(&g).expect("productive start");
        let original: Vec<_> = g.rules().iter().map(|r| (r.lhs, r.rhs.clone())).collect();
        let produced: Vec<_> = lin.grammar().rules().iter().map(|r| (r.lhs, r.rhs.clone())).collect();
        assert_eq!(original, produced, "rule multiset changed for\n{g}");
        checked += 1;
    }
    assert!(checked >= 10, "sample too thin: {checked}");
}

/// Every accepting path assembled from table entries spells a language
/// word.
#[test]
fn table_paths_spell_language_words() {
    for g in linear_grammars(40, 0xEAF) {
        let graph = build_graph(&g).unwrap();
        let table = all_pairs_optimal(&graph);
        let start = Vertex::Nonterminal(g.start());
        // Direct accepting path, when the language is nonempty.
        if let Some(p) = table.path(&graph, start, Vertex::Sink) {
            let w = graph.word_of_path(&p).unwrap();
            assert!(g.contains(&w), "optimal accepting path of\n{g}");
        }
        // One-edge stitchings through each rule.
        for rule in 0..g.rule_count() {
            let edge = graph.edge(rule);
            let Some(head) = table.path(&graph, start, Vertex::Nonterminal(edge.source)) else {
                continue;
            };
            let Some(tail) = table.path(&graph, edge.target, Vertex::Sink) else {
                continue;
            };
            let mut rules = head.rules().to_vec();
            rules.push(rule);
            rules.extend_from_slice(tail.rules());
            let p = graph.path_from_rules(start, &rules);
            let w = graph.word_of_path(&p).unwrap();
            assert!(g.contains(&w), "stitched path through rule {rule} of\n{g}");
        }
    }
}

#[test]
fn test_sets_grow_monotonically_in_k() {
    for g in general_grammars(30, 0xFAB) {
        let smaller = test_set(&g, 2);
        let larger = test_set(&g, 3);
        assert_eq!(
            larger.words()[..smaller.len()],
            smaller.words()[..],
            "k = 3 does not extend k = 2 for\n{g}"
        );
    }
}

#[test]
fn optimal_prefix_filter_never_changes_the_word_set() {
    for g in linear_grammars(40, 0x1CE) {
        let plain = phi_k(&g, 3).unwrap();
        let filtered = phi_k_with(&g, 3, BuildOptions { filter_optimal: true }).unwrap();
        let mut a = plain.words().to_vec();
        let mut b = filtered.words().to_vec();
        a.sort();
        b.sort();
        assert_eq!(a, b, "filter changed the words of\n{g}");
        assert!(filtered.len() <= plain.len() || a == b);
    }
}
