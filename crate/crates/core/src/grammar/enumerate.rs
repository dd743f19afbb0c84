//! Bounded language enumeration.
//!
//! Words are produced length layer by length layer with a Kleene iteration
//! per layer, so cyclic and epsilon-heavy grammars terminate. Rules that
//! mention unproductive nonterminals are dropped up front, and each
//! nonterminal gets a length budget (the maximum length usable in any
//! context reaching it from the start symbol) to bound wasted work.

use super::{Grammar, Symbol, Word};
use std::collections::BTreeSet;

/// Result of [`Grammar::enumerate_words`]: the words of the language up to
/// the requested length, sorted shortest-first then lexicographically.
/// `truncated` is set iff words beyond `max_count` were cut off.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Enumeration {
    pub words: Vec<Word>,
    pub truncated: bool,
}

pub(super) fn enumerate(g: &Grammar, max_len: usize, max_count: usize) -> Enumeration {
    let productive = g.productive_mask();
    if !productive[g.start().0] {
        return Enumeration {
            words: Vec::new(),
            truncated: false,
        };
    }
    let surviving: Vec<usize> = g
        .rules()
        .iter()
        .filter(|r| {
            r.rhs.iter().all(|s| match s {
                Symbol::Terminal(_) => true,
                Symbol::Nonterminal(id) => productive[id.0],
            })
        })
        .map(|r| r.index)
        .collect();

    let min_len = minimal_lengths(g, &surviving);
    let budget = length_budgets(g, &surviving, &min_len, max_len);

    // layers[nt][len]: all words of exactly `len` derivable from `nt`.
    let nt_count = g.nonterminal_count();
    let mut layers: Vec<Vec<BTreeSet<Word>>> = vec![Vec::new(); nt_count];
    let mut out: Vec<Word> = Vec::new();
    let mut truncated = false;

    'layers: for len in 0..=max_len {
        for nt_layers in &mut layers {
            nt_layers.push(BTreeSet::new());
        }
        // Same-length dependencies (through epsilon-yielding context) need
        // iteration to a fixpoint; sets only grow, so this terminates.
        loop {
            let mut changed = false;
            for &ri in &surviving {
                let rule = g.rule(ri);
                if budget[rule.lhs.0].map_or(true, |b| len > b) {
                    continue;
                }
                for word in rule_words(&rule.rhs, len, &layers, &min_len) {
                    if layers[rule.lhs.0][len].insert(word) {
                        changed = true;
                    }
                }
            }
            if !changed {
                break;
            }
        }
        // BTreeSet iteration is lexicographic, and all words in a layer
        // have equal length, so appending layers keeps the output sorted
        // by (length, lex).
        for word in &layers[g.start().0][len] {
            out.push(word.clone());
            if out.len() > max_count {
                truncated = true;
                break 'layers;
            }
        }
    }

    out.truncate(max_count);
    Enumeration {
        words: out,
        truncated,
    }
}

/// All words of exactly `len` derivable from `rhs`, given the layers
/// computed so far. Standard prefix DP over the RHS with a remaining
/// minimal-yield cut.
fn rule_words(
    rhs: &[Symbol],
    len: usize,
    layers: &[Vec<BTreeSet<Word>>],
    min_len: &[usize],
) -> Vec<Word> {
    let suffix_min: Vec<usize> = {
        let mut acc = vec![0usize; rhs.len() + 1];
        for (i, sym) in rhs.iter().enumerate().rev() {
            let m = match sym {
                Symbol::Terminal(_) => 1,
                Symbol::Nonterminal(id) => min_len[id.0],
            };
            acc[i] = acc[i + 1].saturating_add(m);
        }
        acc
    };
    if suffix_min[0] > len {
        return Vec::new();
    }

    let mut cur: Vec<Vec<Word>> = vec![Vec::new(); len + 1];
    cur[0].push(Word::empty());
    for (i, sym) in rhs.iter().enumerate() {
        let mut next: Vec<Vec<Word>> = vec![Vec::new(); len + 1];
        for (m, words) in cur.iter().enumerate() {
            if words.is_empty() {
                continue;
            }
            match sym {
                Symbol::Terminal(t) => {
                    if m + 1 + suffix_min[i + 1] <= len {
                        for w in words {
                            let mut ext = w.clone();
                            ext.0.push(*t);
                            next[m + 1].push(ext);
                        }
                    }
                }
                Symbol::Nonterminal(id) => {
                    for (part_len, parts) in layers[id.0].iter().enumerate() {
                        if m + part_len + suffix_min[i + 1] > len {
                            break;
                        }
                        for part in parts {
                            for w in words {
                                next[m + part_len].push(w.concat(part));
                            }
                        }
                    }
                }
            }
        }
        cur = next;
    }
    cur.swap_remove(len)
}

/// Minimal derivable length per nonterminal over the surviving rules
/// (`usize::MAX` marks unproductive).
fn minimal_lengths(g: &Grammar, surviving: &[usize]) -> Vec<usize> {
    let mut min_len = vec![usize::MAX; g.nonterminal_count()];
    let mut changed = true;
    while changed {
        changed = false;
        for &ri in surviving {
            let rule = g.rule(ri);
            let mut total = 0usize;
            let mut ok = true;
            for sym in &rule.rhs {
                match sym {
                    Symbol::Terminal(_) => total += 1,
                    Symbol::Nonterminal(id) => {
                        if min_len[id.0] == usize::MAX {
                            ok = false;
                            break;
                        }
                        total += min_len[id.0];
                    }
                }
            }
            if ok && total < min_len[rule.lhs.0] {
                min_len[rule.lhs.0] = total;
                changed = true;
            }
        }
    }
    min_len
}

/// Largest word length of each nonterminal that can appear inside some
/// start-symbol word of length `max_len`; `None` for nonterminals that are
/// unreachable within the budget.
fn length_budgets(
    g: &Grammar,
    surviving: &[usize],
    min_len: &[usize],
    max_len: usize,
) -> Vec<Option<usize>> {
    let mut budget: Vec<Option<usize>> = vec![None; g.nonterminal_count()];
    budget[g.start().0] = Some(max_len);
    let mut changed = true;
    while changed {
        changed = false;
        for &ri in surviving {
            let rule = g.rule(ri);
            let Some(b) = budget[rule.lhs.0] else {
                continue;
            };
            let total_min: usize = rule
                .rhs
                .iter()
                .map(|s| match s {
                    Symbol::Terminal(_) => 1,
                    Symbol::Nonterminal(id) => min_len[id.0],
                })
                .sum();
            for sym in &rule.rhs {
                let Symbol::Nonterminal(id) = sym else {
                    continue;
                };
                let context = total_min - min_len[id.0];
                if context > b {
                    continue;
                }
                let cand = b - context;
                if budget[id.0].map_or(true, |cur| cand > cur) {
                    budget[id.0] = Some(cand);
                    changed = true;
                }
            }
        }
    }
    budget
}

#[cfg(test)]
mod tests {
    use super::super::Grammar;

    fn words(g: &Grammar, max_len: usize) -> Vec<String> {
        let e = g.enumerate_words(max_len, usize::MAX);
        assert!(!e.truncated);
        e.words.iter().map(|w| g.word_to_string(w)).collect()
    }

    #[test]
    fn nested_pairs_up_to_length_five() {
        let g = Grammar::parse("S -> 'a' S 'b' | 'c'").unwrap();
        assert_eq!(words(&g, 5), ["c", "acb", "aacbb"]);
    }

    #[test]
    fn epsilon_language() {
        let g = Grammar::parse("S -> eps").unwrap();
        assert_eq!(words(&g, 3), ["eps"]);
    }

    #[test]
    fn unproductive_start_gives_empty_language() {
        let g = Grammar::parse("S -> 'a' S").unwrap();
        assert_eq!(words(&g, 10), Vec::<String>::new());
    }

    #[test]
    fn cyclic_unit_rules_terminate() {
        let g = Grammar::parse("S -> A\nA -> S | 'a'").unwrap();
        assert_eq!(words(&g, 4), ["a"]);
    }

    #[test]
    fn epsilon_cycles_terminate() {
        let g = Grammar::parse("S -> A S | 'b'\nA -> eps | 'a'").unwrap();
        assert_eq!(words(&g, 2), ["b", "ab"]);
    }

    #[test]
    fn truncation_reports_and_keeps_smallest() {
        let g = Grammar::parse("S -> S S | 'a' | 'b'").unwrap();
        let e = g.enumerate_words(4, 3);
        assert!(e.truncated);
        let rendered: Vec<String> = e.words.iter().map(|w| g.word_to_string(w)).collect();
        assert_eq!(rendered, ["a", "b", "aa"]);
    }

    #[test]
    fn exact_count_is_not_truncation() {
        let g = Grammar::parse("S -> 'a' | 'b'").unwrap();
        let e = g.enumerate_words(5, 2);
        assert!(!e.truncated);
        assert_eq!(e.words.len(), 2);
    }
}
