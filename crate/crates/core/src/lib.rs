//! Test-set construction for context-free languages.
//!
//! A test set for a language `L` is a subset `T` of `L` such that any two
//! string homomorphisms that agree on every word of `T` agree on all of
//! `L`. This crate builds, for any context-free grammar `G`, a test set
//! with at most `2|G|^3` words:
//!
//! 1. [`linearize`] rewrites `G` into a linear grammar producing a subset
//!    of `L(G)` that is itself a test set for `L(G)`;
//! 2. [`path_graph`] turns the linear grammar into a rule-labeled graph
//!    whose accepting paths spell exactly the language, and tabulates the
//!    unique optimal (shortest, then lexicographically least) path between
//!    every vertex pair;
//! 3. [`testset`] enumerates all stitchings of at most `k` distinguished
//!    edges joined by optimal paths (`k = 3` by default) and collects the
//!    corresponding words;
//! 4. [`verify`] checks test sets empirically with randomized morphism
//!    pairs.
//!
//! The `cfg-testset` binary exposes the same pipeline as subcommands:
//! `testset`, `linearize`, `graph`, `verify`, and `enumerate`.

pub mod cli;
pub mod grammar;
pub mod linearize;
pub mod path_graph;
pub mod random;
pub mod testset;
pub mod verify;

pub use grammar::{Enumeration, Grammar, GrammarError, NtId, ParseError, Rule, Symbol, TermId, Word};
pub use linearize::{linearize, LinearGrammar, LinearizeError, WitnessTable};
pub use path_graph::{
    all_pairs_optimal, build_graph, path_compare, west_east, OptimalPathTable, Path, PathGraph,
    PathGraphError, Vertex,
};
pub use testset::{count_bound, phi_k, test_set, theorem_bound, BuildOptions, TestSet, TestSetError};
pub use verify::{
    apply_morphism, check_t4_lemma, check_test_set_property, random_morphism, CheckReport,
    Morphism, SigmaFour, VerifyError, Violation,
};
