//! Chart-based membership: an Earley recognizer.
//!
//! Epsilon rules and cycles are handled with the nullable-prediction fix:
//! whenever the dot sits before a nullable nonterminal, the dot-advanced
//! item is added alongside the prediction.

use super::{Grammar, Symbol, Word};
use std::collections::HashSet;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
struct Item {
    rule: usize,
    dot: usize,
    origin: usize,
}

pub(super) fn contains(g: &Grammar, w: &Word) -> bool {
    if w.0.iter().any(|t| t.0 >= g.terminal_count()) {
        return false;
    }
    let nullable = nullable_mask(g);
    let n = w.len();

    let mut charts: Vec<Vec<Item>> = vec![Vec::new(); n + 1];
    let mut seen: Vec<HashSet<Item>> = vec![HashSet::new(); n + 1];

    let push = |charts: &mut Vec<Vec<Item>>, seen: &mut Vec<HashSet<Item>>, pos: usize, item: Item| {
        if seen[pos].insert(item) {
            charts[pos].push(item);
        }
    };

    for &ri in g.rules_for(g.start()) {
        push(&mut charts, &mut seen, 0, Item { rule: ri, dot: 0, origin: 0 });
    }

    for pos in 0..=n {
        let mut cursor = 0;
        while cursor < charts[pos].len() {
            let item = charts[pos][cursor];
            cursor += 1;
            let rule = g.rule(item.rule);
            match rule.rhs.get(item.dot) {
                Some(Symbol::Terminal(t)) => {
                    if pos < n && w.0[pos] == *t {
                        push(
                            &mut charts,
                            &mut seen,
                            pos + 1,
                            Item { dot: item.dot + 1, ..item },
                        );
                    }
                }
                Some(Symbol::Nonterminal(nt)) => {
                    for &ri in g.rules_for(*nt) {
                        push(&mut charts, &mut seen, pos, Item { rule: ri, dot: 0, origin: pos });
                    }
                    if nullable[nt.0] {
                        push(
                            &mut charts,
                            &mut seen,
                            pos,
                            Item { dot: item.dot + 1, ..item },
                        );
                    }
                }
                None => {
                    // Completion: advance every item waiting on this LHS at
                    // the origin position. Same-position waiters only arise
                    // from epsilon derivations, which the nullable fix
                    // already advanced.
                    let lhs = rule.lhs;
                    if item.origin < pos {
                        let waiting: Vec<Item> = charts[item.origin]
                            .iter()
                            .filter(|it| {
                                g.rule(it.rule).rhs.get(it.dot)
                                    == Some(&Symbol::Nonterminal(lhs))
                            })
                            .copied()
                            .collect();
                        for it in waiting {
                            push(
                                &mut charts,
                                &mut seen,
                                pos,
                                Item { dot: it.dot + 1, ..it },
                            );
                        }
                    }
                }
            }
        }
    }

    charts[n].iter().any(|item| {
        item.origin == 0
            && g.rule(item.rule).lhs == g.start()
            && item.dot == g.rule(item.rule).rhs.len()
    })
}

fn nullable_mask(g: &Grammar) -> Vec<bool> {
    let mut nullable = vec![false; g.nonterminal_count()];
    let mut changed = true;
    while changed {
        changed = false;
        for rule in g.rules() {
            if nullable[rule.lhs.0] {
                continue;
            }
            let erasable = rule.rhs.iter().all(|s| match s {
                Symbol::Terminal(_) => false,
                Symbol::Nonterminal(id) => nullable[id.0],
            });
            if erasable {
                nullable[rule.lhs.0] = true;
                changed = true;
            }
        }
    }
    nullable
}
