//! Context-free grammar model: symbols, rules, the size metric, linearity,
//! productivity analysis, shortest derivable words, bounded language
//! enumeration, and a chart-based membership oracle.
//!
//! A [`Grammar`] is immutable after construction. Nonterminal and terminal
//! names are interned into id tables sorted by byte order, so comparing id
//! sequences is the same as comparing name sequences lexicographically.

mod enumerate;
mod parse;
mod recognize;

pub use enumerate::Enumeration;
pub use parse::ParseError;

use std::collections::BTreeSet;
use std::fmt;

/// Index of a nonterminal in a grammar's nonterminal table.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct NtId(pub usize);

/// Index of a terminal in a grammar's terminal table.
///
/// Terminal ids are assigned in sorted name order, so ordering ids orders
/// terminals by name.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct TermId(pub usize);

/// A grammar symbol: one entry of a rule's right-hand side.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Symbol {
    Nonterminal(NtId),
    Terminal(TermId),
}

impl Symbol {
    pub fn as_nonterminal(&self) -> Option<NtId> {
        match self {
            Symbol::Nonterminal(id) => Some(*id),
            Symbol::Terminal(_) => None,
        }
    }
}

/// A production rule. `index` is the rule's position in the grammar's rule
/// list and realizes the total order on rules.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Rule {
    pub index: usize,
    pub lhs: NtId,
    pub rhs: Vec<Symbol>,
}

impl Rule {
    /// Positions and ids of the nonterminal occurrences in the RHS.
    pub fn nonterminal_occurrences(&self) -> Vec<(usize, NtId)> {
        self.rhs
            .iter()
            .enumerate()
            .filter_map(|(i, s)| s.as_nonterminal().map(|id| (i, id)))
            .collect()
    }
}

/// A word: a sequence of terminals of the grammar it was produced from.
///
/// The derived ordering is lexicographic over terminal ids, which matches
/// bytewise name order because ids are assigned in sorted name order.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Default)]
pub struct Word(pub Vec<TermId>);

impl Word {
    pub fn empty() -> Word {
        Word(Vec::new())
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn letters(&self) -> &[TermId] {
        &self.0
    }

    pub fn concat(&self, other: &Word) -> Word {
        let mut out = self.0.clone();
        out.extend_from_slice(&other.0);
        Word(out)
    }

    /// Shorter first, then lexicographic; the canonical order on words.
    pub fn len_lex_cmp(&self, other: &Word) -> std::cmp::Ordering {
        self.len().cmp(&other.len()).then_with(|| self.cmp(other))
    }
}

/// Errors from grammar analyses (parsing has its own [`ParseError`]).
#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum GrammarError {
    #[error("nonterminal `{0}` is unproductive: it derives no terminal word")]
    Unproductive(String),
}

/// An immutable context-free grammar `(N, Sigma, R, S)`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Grammar {
    nt_names: Vec<String>,
    term_names: Vec<String>,
    rules: Vec<Rule>,
    start: NtId,
    rules_by_lhs: Vec<Vec<usize>>,
}

impl Grammar {
    /// Parses the textual grammar format. See the crate docs for the format.
    pub fn parse(text: &str) -> Result<Grammar, ParseError> {
        parse::parse(text)
    }

    pub(crate) fn from_parts(
        nt_names: Vec<String>,
        term_names: Vec<String>,
        rules: Vec<(NtId, Vec<Symbol>)>,
        start: NtId,
    ) -> Grammar {
        debug_assert!(nt_names.windows(2).all(|w| w[0] < w[1]));
        debug_assert!(term_names.windows(2).all(|w| w[0] < w[1]));
        debug_assert!(start.0 < nt_names.len());
        let rules: Vec<Rule> = rules
            .into_iter()
            .enumerate()
            .map(|(index, (lhs, rhs))| Rule { index, lhs, rhs })
            .collect();
        let mut rules_by_lhs = vec![Vec::new(); nt_names.len()];
        for rule in &rules {
            rules_by_lhs[rule.lhs.0].push(rule.index);
        }
        Grammar {
            nt_names,
            term_names,
            rules,
            start,
            rules_by_lhs,
        }
    }

    pub fn start(&self) -> NtId {
        self.start
    }

    /// The same grammar with a different start symbol.
    pub fn with_start(&self, start: NtId) -> Grammar {
        assert!(start.0 < self.nt_names.len());
        let mut g = self.clone();
        g.start = start;
        g
    }

    pub fn rules(&self) -> &[Rule] {
        &self.rules
    }

    pub fn rule(&self, index: usize) -> &Rule {
        &self.rules[index]
    }

    pub fn rule_count(&self) -> usize {
        self.rules.len()
    }

    pub fn rules_for(&self, nt: NtId) -> &[usize] {
        &self.rules_by_lhs[nt.0]
    }

    pub fn nonterminal_count(&self) -> usize {
        self.nt_names.len()
    }

    pub fn terminal_count(&self) -> usize {
        self.term_names.len()
    }

    pub fn nonterminal_name(&self, id: NtId) -> &str {
        &self.nt_names[id.0]
    }

    pub fn terminal_name(&self, id: TermId) -> &str {
        &self.term_names[id.0]
    }

    pub fn nonterminal_id(&self, name: &str) -> Option<NtId> {
        self.nt_names
            .binary_search_by(|n| n.as_str().cmp(name))
            .ok()
            .map(NtId)
    }

    pub fn terminal_id(&self, name: &str) -> Option<TermId> {
        self.term_names
            .binary_search_by(|n| n.as_str().cmp(name))
            .ok()
            .map(TermId)
    }

    pub fn nonterminal_ids(&self) -> impl Iterator<Item = NtId> {
        (0..self.nt_names.len()).map(NtId)
    }

    /// The size metric `|G|`: the sum over rules of `|rhs| + 1`.
    pub fn size(&self) -> usize {
        self.rules.iter().map(|r| r.rhs.len() + 1).sum()
    }

    /// True iff every rule's RHS contains at most one nonterminal occurrence.
    pub fn is_linear(&self) -> bool {
        self.rules.iter().all(|r| {
            r.rhs
                .iter()
                .filter(|s| matches!(s, Symbol::Nonterminal(_)))
                .count()
                <= 1
        })
    }

    /// Least fixpoint of "some rule's RHS nonterminals are all productive".
    /// A productive nonterminal derives at least one terminal word.
    pub fn productive_nonterminals(&self) -> BTreeSet<NtId> {
        self.productive_mask()
            .iter()
            .enumerate()
            .filter(|(_, &p)| p)
            .map(|(i, _)| NtId(i))
            .collect()
    }

    pub(crate) fn productive_mask(&self) -> Vec<bool> {
        let mut productive = vec![false; self.nt_names.len()];
        let mut changed = true;
        while changed {
            changed = false;
            for rule in &self.rules {
                if productive[rule.lhs.0] {
                    continue;
                }
                let grounded = rule.rhs.iter().all(|s| match s {
                    Symbol::Terminal(_) => true,
                    Symbol::Nonterminal(id) => productive[id.0],
                });
                if grounded {
                    productive[rule.lhs.0] = true;
                    changed = true;
                }
            }
        }
        productive
    }

    /// For each nonterminal, the minimal derivable word under the order
    /// "shorter first, then lexicographic by terminal name"; `None` for
    /// unproductive nonterminals.
    pub fn shortest_words(&self) -> Vec<Option<Word>> {
        // Bellman-Ford style relaxation. Every candidate is derivable, and
        // after enough sweeps each entry reaches the minimum of a monotone
        // well-founded order, so iterating to a fixpoint is exact.
        let mut best: Vec<Option<Word>> = vec![None; self.nt_names.len()];
        let mut changed = true;
        while changed {
            changed = false;
            for rule in &self.rules {
                let mut word = Word::empty();
                let mut ok = true;
                for sym in &rule.rhs {
                    match sym {
                        Symbol::Terminal(t) => word.0.push(*t),
                        Symbol::Nonterminal(id) => match &best[id.0] {
                            Some(w) => word.0.extend_from_slice(&w.0),
                            None => {
                                ok = false;
                                break;
                            }
                        },
                    }
                }
                if !ok {
                    continue;
                }
                let better = match &best[rule.lhs.0] {
                    None => true,
                    Some(cur) => word.len_lex_cmp(cur) == std::cmp::Ordering::Less,
                };
                if better {
                    best[rule.lhs.0] = Some(word);
                    changed = true;
                }
            }
        }
        best
    }

    /// The minimal word derivable from `nt` (length first, then
    /// lexicographic tie-break on terminal names).
    pub fn shortest_word(&self, nt: NtId) -> Result<Word, GrammarError> {
        self.shortest_words()[nt.0]
            .clone()
            .ok_or_else(|| GrammarError::Unproductive(self.nonterminal_name(nt).to_string()))
    }

    /// All words of the language with length at most `max_len`, sorted
    /// shortest-first then lexicographically, truncated to `max_count`.
    pub fn enumerate_words(&self, max_len: usize, max_count: usize) -> Enumeration {
        enumerate::enumerate(self, max_len, max_count)
    }

    /// Membership: true iff `w` is derivable from the start symbol.
    pub fn contains(&self, w: &Word) -> bool {
        recognize::contains(self, w)
    }

    /// Serializes to the textual grammar format; `parse` round-trips it.
    pub fn to_text(&self) -> String {
        parse::to_text(self)
    }

    /// Renders a word: concatenated when every terminal name of the grammar
    /// is a single character, space-separated otherwise; `eps` when empty.
    /// Letters outside the terminal table render as `?`.
    pub fn word_to_string(&self, w: &Word) -> String {
        if w.is_empty() {
            return "eps".to_string();
        }
        let single = self.term_names.iter().all(|n| n.chars().count() == 1);
        let sep = if single { "" } else { " " };
        w.0.iter()
            .map(|t| self.term_names.get(t.0).map_or("?", String::as_str))
            .collect::<Vec<_>>()
            .join(sep)
    }

    /// Builds a word from terminal names; `None` if a name is unknown.
    pub fn word_from_names(&self, names: &[&str]) -> Option<Word> {
        names
            .iter()
            .map(|n| self.terminal_id(n))
            .collect::<Option<Vec<_>>>()
            .map(Word)
    }

    /// Builds a word from a string of single-character terminal names.
    pub fn word_from_chars(&self, s: &str) -> Option<Word> {
        s.chars()
            .map(|c| self.terminal_id(&c.to_string()))
            .collect::<Option<Vec<_>>>()
            .map(Word)
    }

    pub fn format_rule(&self, index: usize) -> String {
        let rule = &self.rules[index];
        let mut out = format!("{} ->", self.nonterminal_name(rule.lhs));
        if rule.rhs.is_empty() {
            out.push_str(" eps");
        } else {
            for sym in &rule.rhs {
                match sym {
                    Symbol::Nonterminal(id) => {
                        out.push(' ');
                        out.push_str(self.nonterminal_name(*id));
                    }
                    Symbol::Terminal(id) => {
                        out.push_str(" '");
                        out.push_str(self.terminal_name(*id));
                        out.push('\'');
                    }
                }
            }
        }
        out
    }
}

impl fmt::Display for Grammar {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.to_text())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn g(text: &str) -> Grammar {
        Grammar::parse(text).expect("test grammar parses")
    }

    #[test]
    fn size_counts_rhs_plus_one() {
        assert_eq!(g("S -> 'a' S 'b' | 'c'").size(), 6);
        assert_eq!(g("S -> eps").size(), 1);
        assert_eq!(g("S -> S S | 'a'").size(), 5);
    }

    #[test]
    fn linearity_counts_nonterminal_occurrences() {
        assert!(g("S -> 'a' S 'b' | 'c'").is_linear());
        assert!(!g("S -> S S | 'a'").is_linear());
        assert!(g("S -> eps").is_linear());
    }

    #[test]
    fn productive_fixpoint() {
        let gr = g("S -> 'a' S 'b' | 'c'");
        let productive = gr.productive_nonterminals();
        assert_eq!(productive, [gr.nonterminal_id("S").unwrap()].into());

        let gr = g("S -> 'a' S");
        assert!(gr.productive_nonterminals().is_empty());

        // B -> B never grounds; A and S do.
        let gr = g("S -> A 'a'\nA -> 'b'\nB -> B");
        let productive = gr.productive_nonterminals();
        let expect: BTreeSet<NtId> = ["A", "S"]
            .iter()
            .map(|n| gr.nonterminal_id(n).unwrap())
            .collect();
        assert_eq!(productive, expect);
        // Cross-check against a depth-bounded derivation search.
        for nt in gr.nonterminal_ids() {
            assert_eq!(
                productive.contains(&nt),
                derives_terminal_word(&gr, nt, 3),
                "{}",
                gr.nonterminal_name(nt)
            );
        }
    }

    /// Independent oracle: can `nt` derive a terminal-only string using a
    /// derivation tree of height at most `depth`?
    fn derives_terminal_word(g: &Grammar, nt: NtId, depth: usize) -> bool {
        if depth == 0 {
            return false;
        }
        g.rules_for(nt).iter().any(|&ri| {
            g.rule(ri).rhs.iter().all(|s| match s {
                Symbol::Terminal(_) => true,
                Symbol::Nonterminal(id) => derives_terminal_word(g, *id, depth - 1),
            })
        })
    }

    #[test]
    fn shortest_word_minimal_length() {
        let gr = g("S -> 'a' S 'b' | 'c'");
        let w = gr.shortest_word(gr.start()).unwrap();
        assert_eq!(gr.word_to_string(&w), "c");

        let gr = g("S -> S S | 'a'");
        let w = gr.shortest_word(gr.start()).unwrap();
        assert_eq!(gr.word_to_string(&w), "a");
    }

    #[test]
    fn shortest_word_lex_tie_break() {
        // Both "ac" and "bc" have length 2; the lexicographic tie-break on
        // terminal names picks "ac". Oracle: minimum of the full
        // enumeration up to length 2.
        let gr = g("S -> A B\nA -> 'a' | 'b'\nB -> 'c'");
        let w = gr.shortest_word(gr.start()).unwrap();
        assert_eq!(gr.word_to_string(&w), "ac");

        let all = gr.enumerate_words(2, usize::MAX);
        assert!(!all.truncated);
        assert_eq!(all.words.first(), Some(&w));
    }

    #[test]
    fn shortest_word_unproductive_is_error() {
        let gr = g("S -> 'a' S");
        assert_eq!(
            gr.shortest_word(gr.start()),
            Err(GrammarError::Unproductive("S".to_string()))
        );
    }

    #[test]
    fn shortest_word_agrees_with_enumeration_from_each_nonterminal() {
        let texts = [
            "S -> 'a' S 'b' | 'c'",
            "S -> S S | 'a'",
            "S -> A B\nA -> 'a' | 'b' | eps\nB -> 'c' B | 'd'",
            "S -> A 'a'\nA -> 'b'\nB -> B",
        ];
        for text in texts {
            let gr = g(text);
            let words = gr.shortest_words();
            for nt in gr.nonterminal_ids() {
                let enumerated = gr.with_start(nt).enumerate_words(6, 10_000);
                match &words[nt.0] {
                    Some(w) => assert_eq!(enumerated.words.first(), Some(w), "{text}"),
                    None => assert!(enumerated.words.is_empty(), "{text}"),
                }
            }
        }
    }

    #[test]
    fn size_and_linearity_invariant_under_rule_reordering() {
        let gr = g("S -> 'a' S 'b' | 'c'\nA -> S A | eps");
        let reordered = g("A -> S A | eps\nS -> 'c' | 'a' S 'b'\nstart: S");
        assert_eq!(gr.size(), reordered.size());
        assert_eq!(gr.is_linear(), reordered.is_linear());
    }

    #[test]
    fn word_rendering() {
        let gr = g("S -> 'a' 'c' 'b'");
        assert_eq!(gr.word_to_string(&gr.word_from_chars("acb").unwrap()), "acb");
        assert_eq!(gr.word_to_string(&Word::empty()), "eps");

        let gr = g("S -> 'if' 'then'");
        let w = gr.word_from_names(&["if", "then"]).unwrap();
        assert_eq!(gr.word_to_string(&w), "if then");
    }

    #[test]
    fn word_order_is_name_order() {
        // Ids are assigned in sorted name order, so comparing id sequences
        // compares name sequences.
        let gr = g("S -> 'b' | 'ab'");
        let ab = gr.word_from_names(&["ab"]).unwrap();
        let b = gr.word_from_names(&["b"]).unwrap();
        assert!(ab < b);
    }
}
