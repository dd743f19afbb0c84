//! The rule graph of a linear grammar and its optimal-path table.
//!
//! Vertices are the nonterminals plus a sink. Each rule `A -> u B v`
//! contributes the edge `A -> B` and each terminal-only rule `A -> u` the
//! edge `A -> sink`. A path spells the word `west(P) . east(P)`, where
//! `west` concatenates the `u` parts front to back and `east` the `v`
//! parts back to front; accepting paths (start symbol to sink) spell
//! exactly the words of the language.
//!
//! Paths are ordered shortest first, then lexicographically by rule index
//! sequence. The optimal path between two vertices is the unique minimum
//! under that order.

use crate::grammar::{Grammar, NtId, Rule, Symbol, Word};
use std::cmp::Ordering;

/// A vertex of the rule graph: a nonterminal or the sink.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Vertex {
    Nonterminal(NtId),
    Sink,
}

/// A rule-labeled edge. The source is never the sink.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Edge {
    pub source: NtId,
    pub rule: usize,
    pub target: Vertex,
}

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum PathGraphError {
    #[error("rule {rule} has more than one nonterminal occurrence")]
    NotLinear { rule: usize },
    #[error("path from {from} to {to} is not accepting")]
    NotAccepting { from: String, to: String },
}

/// The terminal prefix and suffix around a linear rule's nonterminal:
/// `(u, v)` for `A -> u B v`, and `(u, eps)` for `A -> u`.
pub fn west_east(rule: &Rule) -> Result<(Word, Word), PathGraphError> {
    let mut west = Vec::new();
    let mut east = Vec::new();
    let mut seen_nt = false;
    for sym in &rule.rhs {
        match sym {
            Symbol::Terminal(t) => {
                if seen_nt {
                    east.push(*t);
                } else {
                    west.push(*t);
                }
            }
            Symbol::Nonterminal(_) => {
                if seen_nt {
                    return Err(PathGraphError::NotLinear { rule: rule.index });
                }
                seen_nt = true;
            }
        }
    }
    Ok((Word(west), Word(east)))
}

/// The rule graph of a linear grammar; edge `i` is rule `i`.
#[derive(Debug, Clone)]
pub struct PathGraph {
    start: NtId,
    nonterminal_count: usize,
    edges: Vec<Edge>,
    out_edges: Vec<Vec<usize>>,
    west: Vec<Word>,
    east: Vec<Word>,
}

pub fn build_graph(g: &Grammar) -> Result<PathGraph, PathGraphError> {
    let mut edges = Vec::with_capacity(g.rule_count());
    let mut out_edges = vec![Vec::new(); g.nonterminal_count()];
    let mut west = Vec::with_capacity(g.rule_count());
    let mut east = Vec::with_capacity(g.rule_count());
    for rule in g.rules() {
        let (w, e) = west_east(rule)?;
        let target = match rule.nonterminal_occurrences().first() {
            Some((_, id)) => Vertex::Nonterminal(*id),
            None => Vertex::Sink,
        };
        edges.push(Edge {
            source: rule.lhs,
            rule: rule.index,
            target,
        });
        out_edges[rule.lhs.0].push(rule.index);
        west.push(w);
        east.push(e);
    }
    Ok(PathGraph {
        start: g.start(),
        nonterminal_count: g.nonterminal_count(),
        edges,
        out_edges,
        west,
        east,
    })
}

impl PathGraph {
    pub fn start(&self) -> NtId {
        self.start
    }

    /// Vertex count: one per nonterminal plus the sink.
    pub fn vertex_count(&self) -> usize {
        self.nonterminal_count + 1
    }

    pub fn nonterminal_count(&self) -> usize {
        self.nonterminal_count
    }

    pub fn edges(&self) -> &[Edge] {
        &self.edges
    }

    pub fn edge(&self, rule: usize) -> &Edge {
        &self.edges[rule]
    }

    /// Outgoing edges of a nonterminal vertex, in ascending rule order.
    pub fn out_edges(&self, source: NtId) -> &[usize] {
        &self.out_edges[source.0]
    }

    pub fn west(&self, rule: usize) -> &Word {
        &self.west[rule]
    }

    pub fn east(&self, rule: usize) -> &Word {
        &self.east[rule]
    }

    pub fn vertex_index(&self, v: Vertex) -> usize {
        match v {
            Vertex::Nonterminal(id) => id.0,
            Vertex::Sink => self.nonterminal_count,
        }
    }

    pub fn vertex_at(&self, index: usize) -> Vertex {
        if index == self.nonterminal_count {
            Vertex::Sink
        } else {
            Vertex::Nonterminal(NtId(index))
        }
    }

    /// Materializes a path from its rule sequence, computing the cached
    /// west and east words. The sequence must chain from `first`.
    pub fn path_from_rules(&self, first: Vertex, rules: &[usize]) -> Path {
        let mut at = first;
        let mut west = Word::empty();
        let mut east_parts: Vec<usize> = Vec::with_capacity(rules.len());
        for &r in rules {
            let edge = &self.edges[r];
            debug_assert_eq!(Vertex::Nonterminal(edge.source), at);
            west.0.extend_from_slice(&self.west[r].0);
            east_parts.push(r);
            at = edge.target;
        }
        let mut east = Word::empty();
        for &r in east_parts.iter().rev() {
            east.0.extend_from_slice(&self.east[r].0);
        }
        Path {
            first,
            last: at,
            edges: rules.to_vec(),
            west,
            east,
        }
    }

    /// The word an accepting path spells: `west(P) . east(P)`.
    pub fn word_of_path(&self, p: &Path) -> Result<Word, PathGraphError> {
        if p.first != Vertex::Nonterminal(self.start) || p.last != Vertex::Sink {
            return Err(PathGraphError::NotAccepting {
                from: format!("{:?}", p.first),
                to: format!("{:?}", p.last),
            });
        }
        Ok(p.west.concat(&p.east))
    }
}

/// A chained edge sequence with cached west/east words. The empty path is
/// anchored at a single vertex.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Path {
    first: Vertex,
    last: Vertex,
    edges: Vec<usize>,
    west: Word,
    east: Word,
}

impl Path {
    pub fn empty(at: Vertex) -> Path {
        Path {
            first: at,
            last: at,
            edges: Vec::new(),
            west: Word::empty(),
            east: Word::empty(),
        }
    }

    pub fn first(&self) -> Vertex {
        self.first
    }

    pub fn last(&self) -> Vertex {
        self.last
    }

    pub fn rules(&self) -> &[usize] {
        &self.edges
    }

    pub fn len(&self) -> usize {
        self.edges.len()
    }

    pub fn is_empty(&self) -> bool {
        self.edges.is_empty()
    }

    pub fn west(&self) -> &Word {
        &self.west
    }

    pub fn east(&self) -> &Word {
        &self.east
    }

    pub fn compare(&self, other: &Path) -> Ordering {
        path_compare(&self.edges, &other.edges)
    }
}

/// The total order on edge sequences: shorter first, equal lengths
/// lexicographic by rule index from the front.
pub fn path_compare(a: &[usize], b: &[usize]) -> Ordering {
    a.len().cmp(&b.len()).then_with(|| a.cmp(b))
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
struct TableEntry {
    len: u32,
    // Vertex index of the second-to-last vertex; meaningless when len = 0.
    parent: u32,
    last_rule: u32,
}

/// For every ordered vertex pair, the unique optimal path (absent when the
/// pair is disconnected). Entries store parent pointers; [`OptimalPathTable::path`]
/// materializes them.
#[derive(Debug, Clone)]
pub struct OptimalPathTable {
    vertex_count: usize,
    entries: Vec<Option<TableEntry>>,
}

/// Computes the all-pairs optimal-path table by layered relaxation over
/// path length. For each source, paths settled in one layer are produced
/// in lexicographic order, so the first candidate reaching a vertex in the
/// next layer is its optimal path; total work stays within a constant
/// factor of `|N|^2 * |R|`.
pub fn all_pairs_optimal(graph: &PathGraph) -> OptimalPathTable {
    let n = graph.vertex_count();
    let mut entries: Vec<Option<TableEntry>> = vec![None; n * n];
    for source in 0..n {
        entries[source * n + source] = Some(TableEntry {
            len: 0,
            parent: 0,
            last_rule: 0,
        });
        // Optimal paths are vertex-simple, so |N| layers suffice.
        let mut frontier = vec![source];
        for depth in 1..=graph.nonterminal_count() {
            let mut next = Vec::new();
            for &at in &frontier {
                let Vertex::Nonterminal(nt) = graph.vertex_at(at) else {
                    continue;
                };
                for &rule in graph.out_edges(nt) {
                    let target = graph.vertex_index(graph.edge(rule).target);
                    if entries[source * n + target].is_none() {
                        entries[source * n + target] = Some(TableEntry {
                            len: depth as u32,
                            parent: at as u32,
                            last_rule: rule as u32,
                        });
                        next.push(target);
                    }
                }
            }
            if next.is_empty() {
                break;
            }
            frontier = next;
        }
    }
    OptimalPathTable {
        vertex_count: n,
        entries,
    }
}

impl OptimalPathTable {
    fn entry(&self, from: usize, to: usize) -> Option<TableEntry> {
        self.entries[from * self.vertex_count + to]
    }

    pub fn has_path(&self, graph: &PathGraph, from: Vertex, to: Vertex) -> bool {
        self.entry(graph.vertex_index(from), graph.vertex_index(to))
            .is_some()
    }

    /// Length of the optimal path, if the pair is connected.
    pub fn distance(&self, graph: &PathGraph, from: Vertex, to: Vertex) -> Option<usize> {
        self.entry(graph.vertex_index(from), graph.vertex_index(to))
            .map(|e| e.len as usize)
    }

    /// The rule sequence of the optimal path, if the pair is connected.
    pub fn rules(&self, graph: &PathGraph, from: Vertex, to: Vertex) -> Option<Vec<usize>> {
        let from_idx = graph.vertex_index(from);
        let mut to_idx = graph.vertex_index(to);
        let mut entry = self.entry(from_idx, to_idx)?;
        let mut rules = vec![0usize; entry.len as usize];
        for slot in rules.iter_mut().rev() {
            *slot = entry.last_rule as usize;
            to_idx = entry.parent as usize;
            entry = self.entry(from_idx, to_idx).expect("prefix of optimal path");
        }
        Some(rules)
    }

    /// The optimal path, materialized with its west/east words.
    pub fn path(&self, graph: &PathGraph, from: Vertex, to: Vertex) -> Option<Path> {
        let rules = self.rules(graph, from, to)?;
        Some(graph.path_from_rules(from, &rules))
    }

    /// True iff `p` is the optimal path between its endpoints.
    pub fn is_optimal(&self, graph: &PathGraph, p: &Path) -> bool {
        match self.rules(graph, p.first(), p.last()) {
            Some(rules) => rules == p.rules(),
            None => false,
        }
    }

    /// Whether extending the optimal path `from -> edge.source` by `edge`
    /// yields the optimal path `from -> edge.target`. Constant time via the
    /// stored parent pointers.
    pub(crate) fn extension_is_optimal(
        &self,
        graph: &PathGraph,
        from: Vertex,
        rule: usize,
    ) -> bool {
        let edge = graph.edge(rule);
        let from_idx = graph.vertex_index(from);
        let source_idx = graph.vertex_index(Vertex::Nonterminal(edge.source));
        let target_idx = graph.vertex_index(edge.target);
        let Some(prefix) = self.entry(from_idx, source_idx) else {
            return false;
        };
        match self.entry(from_idx, target_idx) {
            Some(e) => {
                e.len == prefix.len + 1
                    && e.last_rule as usize == rule
                    && e.parent as usize == source_idx
            }
            None => false,
        }
    }

    /// Connected ordered pairs, in vertex-index order.
    pub fn pairs<'a>(
        &'a self,
        graph: &'a PathGraph,
    ) -> impl Iterator<Item = (Vertex, Vertex)> + 'a {
        let n = self.vertex_count;
        (0..n * n).filter_map(move |i| {
            self.entries[i].map(|_| (graph.vertex_at(i / n), graph.vertex_at(i % n)))
        })
    }
}
