//! Command-line interface: `testset`, `linearize`, `graph`, `verify`,
//! and `enumerate` subcommands over the library.
//!
//! Results go to stdout, diagnostics to stderr. Exit codes: 0 success,
//! 2 parse or usage error, 3 internal invariant violation, 4 verification
//! violations found. Identical invocations produce byte-identical output.

use crate::grammar::Grammar;
use crate::linearize::linearize;
use crate::path_graph::{all_pairs_optimal, build_graph, PathGraph, Vertex};
use crate::testset::{test_set_with, BuildOptions};
use crate::verify::{check_t4_lemma, check_test_set_property, CheckReport};
use clap::{Parser, Subcommand, ValueEnum};
use std::io::Read;

const EXIT_OK: i32 = 0;
const EXIT_INPUT: i32 = 2;
const EXIT_INVARIANT: i32 = 3;
const EXIT_VIOLATIONS: i32 = 4;

#[derive(Parser)]
#[command(
    name = "cfg-testset",
    version,
    about = "Compute and check small test sets for context-free grammars"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Format {
    Text,
    Json,
}

#[derive(Subcommand)]
enum Command {
    /// Build the test set of a grammar (at most 2|G|^3 words).
    Testset {
        /// Grammar file, or `-` for standard input.
        input: String,
        /// Maximum number of distinguished edges per stitched path.
        #[arg(short, default_value_t = 3)]
        k: usize,
        /// Skip edge choices whose stitched prefix is already optimal;
        /// never changes the word set.
        #[arg(long)]
        filter_optimal: bool,
        #[arg(long, value_enum, default_value_t = Format::Text)]
        format: Format,
        /// Prepend summary statistics in text mode.
        #[arg(long)]
        stats: bool,
    },
    /// Rewrite a grammar into its linear test-set grammar.
    Linearize {
        /// Grammar file, or `-` for standard input.
        input: String,
    },
    /// Dump the rule graph and optimal-path table of a linear grammar.
    Graph {
        /// Grammar file, or `-` for standard input.
        input: String,
        #[arg(long, value_enum, default_value_t = Format::Text)]
        format: Format,
    },
    /// Check test-set semantics with random morphism pairs.
    Verify {
        /// Grammar file, or `-` for standard input. Omit with `--t4`.
        input: Option<String>,
        #[arg(long, default_value_t = 1000)]
        trials: u64,
        /// Language enumeration length limit.
        #[arg(long, default_value_t = 12)]
        max_len: usize,
        /// Maximum morphism image length.
        #[arg(long, default_value_t = 3)]
        max_image_len: usize,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        /// Check the 16-word witness language instead of a grammar.
        #[arg(long, conflicts_with = "input")]
        t4: bool,
        #[arg(long, value_enum, default_value_t = Format::Text)]
        format: Format,
    },
    /// List all words of the language up to a length bound.
    Enumerate {
        /// Grammar file, or `-` for standard input.
        input: String,
        #[arg(long, default_value_t = 10)]
        max_len: usize,
        #[arg(long, default_value_t = 1000)]
        max_count: usize,
        #[arg(long, value_enum, default_value_t = Format::Text)]
        format: Format,
    },
}

/// Runs the CLI and returns the process exit code.
pub fn run<I, T>(argv: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    let cli = match Cli::try_parse_from(argv) {
        Ok(cli) => cli,
        Err(err) => {
            let code = if err.use_stderr() { EXIT_INPUT } else { EXIT_OK };
            let _ = err.print();
            return code;
        }
    };
    match cli.command {
        Command::Testset {
            input,
            k,
            filter_optimal,
            format,
            stats,
        } => cmd_testset(&input, k, filter_optimal, format, stats),
        Command::Linearize { input } => cmd_linearize(&input),
        Command::Graph { input, format } => cmd_graph(&input, format),
        Command::Verify {
            input,
            trials,
            max_len,
            max_image_len,
            seed,
            t4,
            format,
        } => cmd_verify(input.as_deref(), trials, max_len, max_image_len, seed, t4, format),
        Command::Enumerate {
            input,
            max_len,
            max_count,
            format,
        } => cmd_enumerate(&input, max_len, max_count, format),
    }
}

fn load_grammar(input: &str) -> Result<Grammar, i32> {
    let text = if input == "-" {
        let mut buf = String::new();
        if let Err(err) = std::io::stdin().read_to_string(&mut buf) {
            eprintln!("error: cannot read standard input: {err}");
            return Err(EXIT_INPUT);
        }
        buf
    } else {
        match std::fs::read_to_string(input) {
            Ok(text) => text,
            Err(err) => {
                eprintln!("error: cannot read `{input}`: {err}");
                return Err(EXIT_INPUT);
            }
        }
    };
    Grammar::parse(&text).map_err(|err| {
        eprintln!("error: {input}: {err}");
        EXIT_INPUT
    })
}

fn cmd_testset(input: &str, k: usize, filter_optimal: bool, format: Format, stats: bool) -> i32 {
    let g = match load_grammar(input) {
        Ok(g) => g,
        Err(code) => return code,
    };
    let set = test_set_with(&g, k, BuildOptions { filter_optimal });
    if let Err(msg) = set.validate() {
        eprintln!("error: internal invariant violated: {msg}");
        return EXIT_INVARIANT;
    }
    match format {
        Format::Json => println!(
            "{}",
            serde_json::to_string_pretty(&set.to_json(&g)).expect("valid json")
        ),
        Format::Text => {
            if stats {
                println!("# words: {}", set.len());
                println!("# max word length: {}", set.max_word_len());
                println!("# k: {}", set.k());
                println!("# linear rule count: {}", set.rule_count());
                println!("# bound: {}", set.bound());
            }
            for w in set.words() {
                println!("{}", g.word_to_string(w));
            }
        }
    }
    EXIT_OK
}

fn cmd_linearize(input: &str) -> i32 {
    let g = match load_grammar(input) {
        Ok(g) => g,
        Err(code) => return code,
    };
    let (lin, witnesses) = match linearize(&g) {
        Ok(result) => result,
        Err(err) => {
            eprintln!("error: {input}: {err}");
            return EXIT_INPUT;
        }
    };
    println!("start: {}", g.nonterminal_name(g.start()));
    for (nt, word) in witnesses.iter() {
        println!("# x_{} = {}", g.nonterminal_name(nt), g.word_to_string(word));
    }
    let out = lin.grammar();
    for (rule, origin) in out.rules().iter().zip(lin.origins()) {
        let provenance = match origin.kept_position {
            Some(pos) => {
                let kept = g.rule(origin.source_rule).rhs[pos]
                    .as_nonterminal()
                    .expect("kept position holds a nonterminal");
                format!(
                    "# from rule {}, kept {}",
                    origin.source_rule,
                    g.nonterminal_name(kept)
                )
            }
            None => format!("# from rule {}", origin.source_rule),
        };
        println!("{}  {}", out.format_rule(rule.index), provenance);
    }
    EXIT_OK
}

fn vertex_name(g: &Grammar, v: Vertex) -> String {
    match v {
        Vertex::Nonterminal(id) => g.nonterminal_name(id).to_string(),
        Vertex::Sink => "bot".to_string(),
    }
}

fn cmd_graph(input: &str, format: Format) -> i32 {
    let g = match load_grammar(input) {
        Ok(g) => g,
        Err(code) => return code,
    };
    let graph: PathGraph = match build_graph(&g) {
        Ok(graph) => graph,
        Err(err) => {
            eprintln!("error: {input}: {err}");
            return EXIT_INPUT;
        }
    };
    let table = all_pairs_optimal(&graph);
    match format {
        Format::Json => {
            let edges: Vec<serde_json::Value> = graph
                .edges()
                .iter()
                .map(|e| {
                    serde_json::json!({
                        "src": g.nonterminal_name(e.source),
                        "rule": e.rule,
                        "dst": vertex_name(&g, e.target),
                    })
                })
                .collect();
            let optimal: Vec<serde_json::Value> = table
                .pairs(&graph)
                .map(|(from, to)| {
                    serde_json::json!({
                        "from": vertex_name(&g, from),
                        "to": vertex_name(&g, to),
                        "rules": table.rules(&graph, from, to).expect("pair is connected"),
                    })
                })
                .collect();
            let doc = serde_json::json!({ "edges": edges, "optimal": optimal });
            println!("{}", serde_json::to_string_pretty(&doc).expect("valid json"));
        }
        Format::Text => {
            let vertices: Vec<String> = (0..graph.vertex_count())
                .map(|i| vertex_name(&g, graph.vertex_at(i)))
                .collect();
            println!("vertices: {}", vertices.join(" "));
            println!("edges:");
            for e in graph.edges() {
                println!(
                    "  r{}: {} -> {}",
                    e.rule,
                    g.nonterminal_name(e.source),
                    vertex_name(&g, e.target)
                );
            }
            println!("optimal paths:");
            for (from, to) in table.pairs(&graph) {
                let rules = table.rules(&graph, from, to).expect("pair is connected");
                let rendered: Vec<String> = rules.iter().map(|r| format!("r{r}")).collect();
                println!(
                    "  {} -> {}: [{}]",
                    vertex_name(&g, from),
                    vertex_name(&g, to),
                    rendered.join(" ")
                );
            }
        }
    }
    EXIT_OK
}

fn emit_report(report: &CheckReport, format: Format) -> i32 {
    match format {
        Format::Json => println!(
            "{}",
            serde_json::to_string_pretty(&report.to_json()).expect("valid json")
        ),
        Format::Text => {
            println!("trials: {}", report.trials);
            println!("seed: {}", report.seed);
            if report.truncated {
                println!("note: language enumeration was truncated");
            }
            println!("violations: {}", report.violations.len());
            for v in &report.violations {
                println!("  {}: witness {}", v.context, v.witness.join(" "));
                for (letter, image) in &v.first {
                    println!("    f({letter}) = {image:?}");
                }
                for (letter, image) in &v.second {
                    println!("    g({letter}) = {image:?}");
                }
            }
        }
    }
    if report.passed() {
        EXIT_OK
    } else {
        EXIT_VIOLATIONS
    }
}

fn cmd_verify(
    input: Option<&str>,
    trials: u64,
    max_len: usize,
    max_image_len: usize,
    seed: u64,
    t4: bool,
    format: Format,
) -> i32 {
    if t4 {
        let report = check_t4_lemma(trials, 2, max_image_len, seed);
        return emit_report(&report, format);
    }
    let Some(input) = input else {
        eprintln!("error: provide a grammar file or `--t4`");
        return EXIT_INPUT;
    };
    let g = match load_grammar(input) {
        Ok(g) => g,
        Err(code) => return code,
    };
    let set = crate::testset::test_set(&g, 3);
    match check_test_set_property(&g, &set, trials, max_len, max_image_len, seed) {
        Ok(report) => emit_report(&report, format),
        Err(err) => {
            // The set under test is our own construction, so a subset
            // failure is an internal bug, not bad input.
            eprintln!("error: internal invariant violated: {err}");
            EXIT_INVARIANT
        }
    }
}

fn cmd_enumerate(input: &str, max_len: usize, max_count: usize, format: Format) -> i32 {
    let g = match load_grammar(input) {
        Ok(g) => g,
        Err(code) => return code,
    };
    let enumeration = g.enumerate_words(max_len, max_count);
    match format {
        Format::Json => {
            let words: Vec<Vec<&str>> = enumeration
                .words
                .iter()
                .map(|w| w.letters().iter().map(|t| g.terminal_name(*t)).collect())
                .collect();
            let doc = serde_json::json!({
                "max_len": max_len,
                "max_count": max_count,
                "truncated": enumeration.truncated,
                "words": words,
            });
            println!("{}", serde_json::to_string_pretty(&doc).expect("valid json"));
        }
        Format::Text => {
            for w in &enumeration.words {
                println!("{}", g.word_to_string(w));
            }
            if enumeration.truncated {
                eprintln!("note: output truncated at {max_count} words");
            }
        }
    }
    EXIT_OK
}
