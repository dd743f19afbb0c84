//! Textual grammar format.
//!
//! One rule group per line: `LHS -> alt1 | alt2 | ...`. Tokens are
//! whitespace-separated. Nonterminals match `[A-Z][A-Za-z0-9_]*`; terminals
//! are single-quoted (`'a'`, `'while'`) or bare `[a-z][a-z0-9_]*`
//! identifiers. `eps` (alias `_`) alone denotes an empty RHS. `#` starts a
//! comment. A line beginning with `|` continues the previous rule group.
//! An optional `start: Name` directive overrides the default start symbol
//! (the first rule's LHS).

use super::{Grammar, NtId, Symbol, TermId};
use std::collections::{BTreeMap, BTreeSet};

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum ParseError {
    #[error("line {line}, column {col}: {msg}")]
    Syntax { line: usize, col: usize, msg: String },
    #[error("symbol `{name}` is used as both a terminal and a nonterminal")]
    SymbolClash { name: String },
    #[error("grammar has no rules")]
    EmptyRuleSet,
}

fn syntax(line: usize, col: usize, msg: impl Into<String>) -> ParseError {
    ParseError::Syntax {
        line,
        col,
        msg: msg.into(),
    }
}

#[derive(Debug, Clone, PartialEq)]
enum Token {
    Arrow,
    Pipe,
    Colon,
    Quoted(String),
    Word(String),
}

/// Tokenizes one line; comments are stripped. Columns are 1-based chars.
fn tokenize(line_no: usize, line: &str) -> Result<Vec<(usize, Token)>, ParseError> {
    let mut tokens = Vec::new();
    let chars: Vec<char> = line.chars().collect();
    let mut i = 0;
    while i < chars.len() {
        let c = chars[i];
        let col = i + 1;
        match c {
            ' ' | '\t' | '\r' => i += 1,
            '#' => break,
            '|' => {
                tokens.push((col, Token::Pipe));
                i += 1;
            }
            ':' => {
                tokens.push((col, Token::Colon));
                i += 1;
            }
            '-' => {
                if chars.get(i + 1) == Some(&'>') {
                    tokens.push((col, Token::Arrow));
                    i += 2;
                } else {
                    return Err(syntax(line_no, col, "expected `->`"));
                }
            }
            '\'' => {
                let mut name = String::new();
                i += 1;
                loop {
                    match chars.get(i) {
                        Some('\'') => {
                            i += 1;
                            break;
                        }
                        Some(&ch) => {
                            name.push(ch);
                            i += 1;
                        }
                        None => return Err(syntax(line_no, col, "unterminated quote")),
                    }
                }
                if name.is_empty() {
                    return Err(syntax(line_no, col, "empty terminal name"));
                }
                if name.chars().any(char::is_whitespace) {
                    return Err(syntax(line_no, col, "whitespace in terminal name"));
                }
                tokens.push((col, Token::Quoted(name)));
            }
            _ if c.is_ascii_alphanumeric() || c == '_' => {
                let mut name = String::new();
                while let Some(&ch) = chars.get(i) {
                    if ch.is_ascii_alphanumeric() || ch == '_' {
                        name.push(ch);
                        i += 1;
                    } else {
                        break;
                    }
                }
                tokens.push((col, Token::Word(name)));
            }
            _ => return Err(syntax(line_no, col, format!("unexpected character `{c}`"))),
        }
    }
    Ok(tokens)
}

fn is_nonterminal_name(name: &str) -> bool {
    let mut chars = name.chars();
    matches!(chars.next(), Some(c) if c.is_ascii_uppercase())
        && chars.all(|c| c.is_ascii_alphanumeric() || c == '_')
}

fn is_bare_terminal_name(name: &str) -> bool {
    let mut chars = name.chars();
    matches!(chars.next(), Some(c) if c.is_ascii_lowercase())
        && chars.all(|c| c.is_ascii_lowercase() || c.is_ascii_digit() || c == '_')
}

/// A symbol as written, before name interning.
#[derive(Debug, Clone, PartialEq, Eq)]
enum RawSymbol {
    Nonterminal(String),
    Terminal(String),
}

pub(super) fn parse(text: &str) -> Result<Grammar, ParseError> {
    let mut raw_rules: Vec<(String, Vec<RawSymbol>)> = Vec::new();
    let mut current_lhs: Option<String> = None;
    let mut start_directive: Option<String> = None;

    for (idx, line) in text.lines().enumerate() {
        let line_no = idx + 1;
        let tokens = tokenize(line_no, line)?;
        if tokens.is_empty() {
            continue;
        }

        // `start: Name` directive.
        if let (Token::Word(w), Some((_, Token::Colon))) = (&tokens[0].1, tokens.get(1)) {
            if w != "start" {
                return Err(syntax(line_no, tokens[0].0, format!("unknown directive `{w}:`")));
            }
            let name = match tokens.get(2) {
                Some((col, Token::Word(n))) if is_nonterminal_name(n) => {
                    if tokens.len() > 3 {
                        return Err(syntax(line_no, tokens[3].0, "trailing tokens after directive"));
                    }
                    (*col, n.clone())
                }
                Some((col, _)) => {
                    return Err(syntax(line_no, *col, "expected a nonterminal name"))
                }
                None => return Err(syntax(line_no, tokens[1].0 + 1, "expected a nonterminal name")),
            };
            if start_directive.is_some() {
                return Err(syntax(line_no, name.0, "duplicate `start:` directive"));
            }
            start_directive = Some(name.1);
            continue;
        }

        // Either `LHS -> alts` or a `| alts` continuation.
        let (lhs, rest) = match &tokens[0].1 {
            Token::Pipe => {
                let lhs = current_lhs.clone().ok_or_else(|| {
                    syntax(line_no, tokens[0].0, "`|` continuation without a preceding rule")
                })?;
                (lhs, &tokens[1..])
            }
            Token::Word(w) if is_nonterminal_name(w) => {
                match tokens.get(1) {
                    Some((_, Token::Arrow)) => {}
                    Some((col, _)) => return Err(syntax(line_no, *col, "expected `->`")),
                    None => {
                        return Err(syntax(line_no, tokens[0].0 + w.len(), "expected `->`"))
                    }
                }
                (w.clone(), &tokens[2..])
            }
            Token::Word(w) => {
                return Err(syntax(
                    line_no,
                    tokens[0].0,
                    format!("rule left-hand side `{w}` is not a nonterminal name"),
                ));
            }
            _ => return Err(syntax(line_no, tokens[0].0, "expected a rule or directive")),
        };
        current_lhs = Some(lhs.clone());

        // Split the remaining tokens into alternatives on `|`.
        let mut alternatives: Vec<Vec<(usize, Token)>> = vec![Vec::new()];
        for tok in rest {
            if tok.1 == Token::Pipe {
                alternatives.push(Vec::new());
            } else {
                alternatives.last_mut().unwrap().push(tok.clone());
            }
        }

        for alt in alternatives {
            let Some(first) = alt.first() else {
                return Err(syntax(line_no, tokens[0].0, "empty alternative; use `eps`"));
            };
            // `eps` / `_` must stand alone.
            if let Token::Word(w) = &first.1 {
                if w == "eps" || w == "_" {
                    if alt.len() > 1 {
                        return Err(syntax(line_no, alt[1].0, "`eps` must be the whole alternative"));
                    }
                    raw_rules.push((lhs.clone(), Vec::new()));
                    continue;
                }
            }
            let mut rhs = Vec::new();
            for (col, tok) in &alt {
                let sym = match tok {
                    Token::Quoted(name) => RawSymbol::Terminal(name.clone()),
                    Token::Word(w) if w == "eps" || w == "_" => {
                        return Err(syntax(line_no, *col, "`eps` must be the whole alternative"))
                    }
                    Token::Word(w) if is_nonterminal_name(w) => RawSymbol::Nonterminal(w.clone()),
                    Token::Word(w) if is_bare_terminal_name(w) => RawSymbol::Terminal(w.clone()),
                    Token::Word(w) => {
                        return Err(syntax(line_no, *col, format!("invalid symbol `{w}`")))
                    }
                    _ => return Err(syntax(line_no, *col, "unexpected token in rule body")),
                };
                rhs.push(sym);
            }
            raw_rules.push((lhs.clone(), rhs));
        }
    }

    if raw_rules.is_empty() {
        return Err(ParseError::EmptyRuleSet);
    }

    // Collect and intern names; ids follow sorted name order.
    let mut nt_names: BTreeSet<String> = raw_rules.iter().map(|(lhs, _)| lhs.clone()).collect();
    let mut term_names: BTreeSet<String> = BTreeSet::new();
    for (_, rhs) in &raw_rules {
        for sym in rhs {
            match sym {
                RawSymbol::Nonterminal(n) => {
                    nt_names.insert(n.clone());
                }
                RawSymbol::Terminal(n) => {
                    term_names.insert(n.clone());
                }
            }
        }
    }
    if let Some(name) = &start_directive {
        nt_names.insert(name.clone());
    }
    if let Some(clash) = nt_names.intersection(&term_names).next() {
        return Err(ParseError::SymbolClash {
            name: clash.clone(),
        });
    }

    let nt_names: Vec<String> = nt_names.into_iter().collect();
    let term_names: Vec<String> = term_names.into_iter().collect();
    let nt_index: BTreeMap<&str, usize> = nt_names
        .iter()
        .enumerate()
        .map(|(i, n)| (n.as_str(), i))
        .collect();
    let term_index: BTreeMap<&str, usize> = term_names
        .iter()
        .enumerate()
        .map(|(i, n)| (n.as_str(), i))
        .collect();

    let rules: Vec<(NtId, Vec<Symbol>)> = raw_rules
        .into_iter()
        .map(|(lhs, rhs)| {
            let lhs = NtId(nt_index[lhs.as_str()]);
            let rhs = rhs
                .into_iter()
                .map(|sym| match sym {
                    RawSymbol::Nonterminal(n) => Symbol::Nonterminal(NtId(nt_index[n.as_str()])),
                    RawSymbol::Terminal(n) => Symbol::Terminal(TermId(term_index[n.as_str()])),
                })
                .collect();
            (lhs, rhs)
        })
        .collect();

    let start = match start_directive {
        Some(name) => NtId(nt_index[name.as_str()]),
        None => rules_first_lhs(&rules),
    };
    Ok(Grammar::from_parts(nt_names, term_names, rules, start))
}

fn rules_first_lhs(rules: &[(NtId, Vec<Symbol>)]) -> NtId {
    rules[0].0
}

/// Serializes one rule per line in index order, always quoting terminals
/// and always emitting the start directive, so parsing the output
/// reconstructs the grammar exactly.
pub(super) fn to_text(g: &Grammar) -> String {
    let mut out = format!("start: {}\n", g.nonterminal_name(g.start()));
    for rule in g.rules() {
        out.push_str(&g.format_rule(rule.index));
        out.push('\n');
    }
    out
}

#[cfg(test)]
mod tests {
    use super::super::Grammar;
    use super::*;

    #[test]
    fn rule_order_follows_text_order() {
        let g = Grammar::parse("S -> 'a' S 'b' | 'c'").unwrap();
        assert_eq!(g.rule_count(), 2);
        assert_eq!(g.format_rule(0), "S -> 'a' S 'b'");
        assert_eq!(g.format_rule(1), "S -> 'c'");
        assert_eq!(g.nonterminal_name(g.start()), "S");
    }

    #[test]
    fn eps_keyword_and_alias() {
        let g = Grammar::parse("S -> eps").unwrap();
        assert_eq!(g.rule_count(), 1);
        assert!(g.rule(0).rhs.is_empty());

        let g = Grammar::parse("S -> _").unwrap();
        assert!(g.rule(0).rhs.is_empty());
    }

    #[test]
    fn alternatives_expand_left_to_right() {
        let g = Grammar::parse("S -> S S | 'a'").unwrap();
        assert_eq!(g.format_rule(0), "S -> S S");
        assert_eq!(g.format_rule(1), "S -> 'a'");
    }

    #[test]
    fn continuation_lines_extend_previous_lhs() {
        let g = Grammar::parse("S -> 'a'\n  | 'b'\nA -> 'c'").unwrap();
        assert_eq!(g.rule_count(), 3);
        assert_eq!(g.format_rule(1), "S -> 'b'");
        assert_eq!(g.format_rule(2), "A -> 'c'");
    }

    #[test]
    fn start_directive_overrides_first_lhs() {
        let g = Grammar::parse("A -> 'a'\nS -> A\nstart: S").unwrap();
        assert_eq!(g.nonterminal_name(g.start()), "S");
    }

    #[test]
    fn comments_and_blank_lines_ignored() {
        let g = Grammar::parse("# header\n\nS -> 'a' # trailing\n").unwrap();
        assert_eq!(g.rule_count(), 1);
    }

    #[test]
    fn bare_and_quoted_terminals_share_a_namespace() {
        let g = Grammar::parse("S -> abc | 'abc'").unwrap();
        assert_eq!(g.terminal_count(), 1);
    }

    #[test]
    fn quoted_eps_is_an_ordinary_terminal() {
        let g = Grammar::parse("S -> 'eps'").unwrap();
        assert_eq!(g.rule(0).rhs.len(), 1);
        assert!(g.terminal_id("eps").is_some());
    }

    #[test]
    fn syntax_errors_carry_position() {
        let err = Grammar::parse("S -> 'a\n").unwrap_err();
        assert_eq!(
            err,
            ParseError::Syntax {
                line: 1,
                col: 6,
                msg: "unterminated quote".to_string()
            }
        );

        let err = Grammar::parse("S -> 'a'\nS - 'b'").unwrap_err();
        assert!(matches!(err, ParseError::Syntax { line: 2, col: 3, .. }));
    }

    #[test]
    fn rejects_symbol_clash() {
        let err = Grammar::parse("S -> 'S'").unwrap_err();
        assert_eq!(
            err,
            ParseError::SymbolClash {
                name: "S".to_string()
            }
        );
    }

    #[test]
    fn rejects_empty_input_and_empty_alternatives() {
        assert_eq!(Grammar::parse("# nothing\n").unwrap_err(), ParseError::EmptyRuleSet);
        assert!(matches!(
            Grammar::parse("S -> 'a' |").unwrap_err(),
            ParseError::Syntax { .. }
        ));
        assert!(matches!(
            Grammar::parse("S ->").unwrap_err(),
            ParseError::Syntax { .. }
        ));
    }

    #[test]
    fn rejects_eps_mixed_into_an_alternative() {
        assert!(matches!(
            Grammar::parse("S -> 'a' eps").unwrap_err(),
            ParseError::Syntax { .. }
        ));
    }

    #[test]
    fn round_trip_is_identity() {
        let texts = [
            "S -> 'a' S 'b' | 'c'",
            "S -> eps",
            "A -> 'x' B\nB -> eps\nstart: B",
            "S -> 'if' Cond 'then' S | skip\nCond -> 'true' | 'false'",
        ];
        for text in texts {
            let g = Grammar::parse(text).unwrap();
            let again = Grammar::parse(&g.to_text()).unwrap();
            assert_eq!(g, again, "round trip of {text:?}");
        }
    }
}
