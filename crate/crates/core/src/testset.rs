//! Test-set construction.
//!
//! For a linear grammar, every choice of at most `k` distinguished edges
//! `e_1, ..., e_n` determines at most one accepting path
//! `P_1 e_1 P_2 ... P_n e_n P_{n+1}`, where `P_i` is the optimal path from
//! the target of `e_{i-1}` to the source of `e_i` (the start symbol
//! precedes `P_1`, the sink follows `P_{n+1}`). Collecting the words of
//! all stitchable choices yields a test set of at most
//! `sum_{i<=k} |R|^i <= 2|R|^k` words; `k = 3` suffices. Arbitrary
//! grammars are linearized first, giving at most `2|G|^3` words.

use crate::grammar::{Grammar, Word};
use crate::linearize::{linearize, LinearizeError};
use crate::path_graph::{all_pairs_optimal, build_graph, Path, PathGraph, PathGraphError, Vertex};
use std::collections::HashMap;

/// How a test-set word was first produced: the chosen edges and the full
/// stitched path, both as rule index sequences over the linear grammar.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Provenance {
    pub edges: Vec<usize>,
    pub path: Vec<usize>,
}

/// A deduplicated test set with per-word provenance.
///
/// Words are kept in first-production order: choices are enumerated by
/// edge count ascending, then lexicographically by rule index, so the
/// order is deterministic and a run with a larger `k` extends the word
/// list of a smaller one.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct TestSet {
    k: usize,
    rule_count: usize,
    words: Vec<Word>,
    provenance: Vec<Provenance>,
}

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum TestSetError {
    #[error(transparent)]
    NotLinear(#[from] PathGraphError),
}

/// Options for the construction.
#[derive(Debug, Clone, Copy, Default)]
pub struct BuildOptions {
    /// Skip choices where some stitched prefix `P_i e_i` is itself optimal.
    /// Every word such a choice produces is also produced by the choice's
    /// canonical form with fewer edges, so this never changes the word set.
    pub filter_optimal: bool,
}

/// Exact choice count: `sum_{i=0..=k} rule_count^i` (saturating).
pub fn count_bound(rule_count: u64, k: u32) -> u64 {
    let mut total: u64 = 0;
    let mut power: u64 = 1;
    for _ in 0..=k {
        total = total.saturating_add(power);
        power = power.saturating_mul(rule_count);
    }
    total
}

/// The headline bound `2 * rule_count^k`, valid for `rule_count >= 2`;
/// degenerate rule counts fall back to the exact sum.
pub fn theorem_bound(rule_count: u64, k: u32) -> u64 {
    if rule_count >= 2 {
        2u64.saturating_mul(rule_count.saturating_pow(k))
    } else {
        count_bound(rule_count, k)
    }
}

/// Builds the test set of a linear grammar by enumerating all edge choices
/// of size at most `k`.
pub fn phi_k(g: &Grammar, k: usize) -> Result<TestSet, TestSetError> {
    phi_k_with(g, k, BuildOptions::default())
}

pub fn phi_k_with(g: &Grammar, k: usize, options: BuildOptions) -> Result<TestSet, TestSetError> {
    let graph = build_graph(g)?;
    let table = all_pairs_optimal(&graph);

    // Materialize optimal paths once; stitching then only concatenates.
    let n = graph.vertex_count();
    let mut optimal: Vec<Option<Path>> = Vec::with_capacity(n * n);
    for from in 0..n {
        for to in 0..n {
            optimal.push(table.path(&graph, graph.vertex_at(from), graph.vertex_at(to)));
        }
    }
    let optimal_at = |from: Vertex, to: Vertex| -> Option<&Path> {
        optimal[graph.vertex_index(from) * n + graph.vertex_index(to)].as_ref()
    };

    let rule_count = g.rule_count();
    let start = Vertex::Nonterminal(graph.start());
    let mut words: Vec<Word> = Vec::new();
    let mut provenance: Vec<Provenance> = Vec::new();
    let mut index_of: HashMap<Word, usize> = HashMap::new();

    let mut choice: Vec<usize> = Vec::new();
    for size in 0..=k {
        choice.clear();
        choice.resize(size, 0);
        if size > 0 && rule_count == 0 {
            break;
        }
        loop {
            if let Some((path_rules, word)) = stitch(&graph, &table, optimal_at, start, &choice, options)
            {
                if !index_of.contains_key(&word) {
                    index_of.insert(word.clone(), words.len());
                    words.push(word);
                    provenance.push(Provenance {
                        edges: choice.clone(),
                        path: path_rules,
                    });
                }
            }
            // Advance the odometer: lexicographic enumeration of choices.
            let mut pos = size;
            loop {
                if pos == 0 {
                    break;
                }
                pos -= 1;
                choice[pos] += 1;
                if choice[pos] < rule_count {
                    break;
                }
                choice[pos] = 0;
            }
            if size == 0 || (pos == 0 && choice[0] == 0) {
                break;
            }
        }
    }

    let set = TestSet {
        k,
        rule_count,
        words,
        provenance,
    };
    debug_assert!(set.len() as u64 <= count_bound(rule_count as u64, k as u32));
    Ok(set)
}

/// Stitches one edge choice into an accepting path and its word, or `None`
/// when a required optimal path is absent (or, with `filter_optimal`, when
/// the choice is not in canonical form).
fn stitch<'a>(
    graph: &PathGraph,
    table: &crate::path_graph::OptimalPathTable,
    optimal_at: impl Fn(Vertex, Vertex) -> Option<&'a Path>,
    start: Vertex,
    choice: &[usize],
    options: BuildOptions,
) -> Option<(Vec<usize>, Word)> {
    let mut at = start;
    let mut path_rules: Vec<usize> = Vec::new();
    let mut west: Vec<crate::grammar::TermId> = Vec::new();
    let mut east_segments: Vec<&Word> = Vec::new();

    for &rule in choice {
        let edge = graph.edge(rule);
        let connector = optimal_at(at, Vertex::Nonterminal(edge.source))?;
        if options.filter_optimal && table.extension_is_optimal(graph, at, rule) {
            return None;
        }
        path_rules.extend_from_slice(connector.rules());
        west.extend_from_slice(&connector.west().0);
        east_segments.push(connector.east());

        path_rules.push(rule);
        west.extend_from_slice(&graph.west(rule).0);
        east_segments.push(graph.east(rule));
        at = edge.target;
    }

    let tail = optimal_at(at, Vertex::Sink)?;
    path_rules.extend_from_slice(tail.rules());
    west.extend_from_slice(&tail.west().0);
    east_segments.push(tail.east());

    let mut word = Word(west);
    for segment in east_segments.iter().rev() {
        word.0.extend_from_slice(&segment.0);
    }
    Some((path_rules, word))
}

/// Builds the test set of an arbitrary grammar: linearize, then
/// enumerate edge choices. An empty language yields the empty set.
pub fn test_set(g: &Grammar, k: usize) -> TestSet {
    test_set_with(g, k, BuildOptions::default())
}

pub fn test_set_with(g: &Grammar, k: usize, options: BuildOptions) -> TestSet {
    match linearize(g) {
        Ok((lin, _)) => phi_k_with(lin.grammar(), k, options)
            .expect("linearized grammar is linear by construction"),
        Err(LinearizeError::EmptyLanguage) => TestSet {
            k,
            rule_count: 0,
            words: Vec::new(),
            provenance: Vec::new(),
        },
    }
}

impl TestSet {
    pub fn k(&self) -> usize {
        self.k
    }

    /// Rule count of the linear grammar the set was built from.
    pub fn rule_count(&self) -> usize {
        self.rule_count
    }

    pub fn len(&self) -> usize {
        self.words.len()
    }

    pub fn is_empty(&self) -> bool {
        self.words.is_empty()
    }

    pub fn words(&self) -> &[Word] {
        &self.words
    }

    pub fn provenance(&self) -> &[Provenance] {
        &self.provenance
    }

    pub fn max_word_len(&self) -> usize {
        self.words.iter().map(Word::len).max().unwrap_or(0)
    }

    /// The headline size bound for this set's rule count and `k`.
    pub fn bound(&self) -> u64 {
        theorem_bound(self.rule_count as u64, self.k as u32)
    }

    /// Checks the structural size invariants; violations indicate an
    /// internal bug, never bad input.
    pub fn validate(&self) -> Result<(), String> {
        let exact = count_bound(self.rule_count as u64, self.k as u32);
        if self.len() as u64 > exact {
            return Err(format!(
                "test set has {} words, above the exact bound {exact}",
                self.len()
            ));
        }
        if self.len() as u64 > self.bound() {
            return Err(format!(
                "test set has {} words, above the size bound {}",
                self.len(),
                self.bound()
            ));
        }
        if self.words.len() != self.provenance.len() {
            return Err("provenance out of step with words".to_string());
        }
        Ok(())
    }

    pub fn to_json(&self, g: &Grammar) -> serde_json::Value {
        let words: Vec<Vec<&str>> = self
            .words
            .iter()
            .map(|w| w.letters().iter().map(|t| g.terminal_name(*t)).collect())
            .collect();
        let provenance: Vec<serde_json::Value> = self
            .provenance
            .iter()
            .enumerate()
            .map(|(i, p)| {
                serde_json::json!({
                    "word_index": i,
                    "edges": p.edges,
                    "path": p.path,
                })
            })
            .collect();
        serde_json::json!({
            "k": self.k,
            "rule_count": self.rule_count,
            "bound": self.bound(),
            "words": words,
            "provenance": provenance,
        })
    }
}
