//! Randomized verification of test-set semantics.
//!
//! A test set `T` for a language `L` must make any two morphisms that
//! agree on `T` agree on all of `L`. That universal claim is not decidable
//! by sampling, but its contrapositive is falsifiable: drawing random
//! morphism pairs and checking "disagree on `L` implies disagree on `T`"
//! can only ever refute a claimed test set. This module implements that
//! harness, plus a sanity check of the 16-word witness language over a
//! 16-letter alphabet whose 15-word subset is a known test set.

use crate::grammar::{Grammar, TermId, Word};
use crate::testset::TestSet;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

/// Number of language words the property check enumerates per grammar.
pub const ENUMERATION_CAP: usize = 20_000;

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum VerifyError {
    #[error("letter {letter} is outside the morphism's domain of {domain} letters")]
    UnknownLetter { letter: usize, domain: usize },
    #[error("test-set word `{word}` is not in the grammar's language")]
    SubsetViolation { word: String },
}

/// A string homomorphism from an indexed source alphabet into byte
/// strings. Evaluation concatenates per-letter images, so
/// `f(u . v) = f(u) . f(v)` and `f(eps) = eps` hold by construction.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Morphism {
    images: Vec<Vec<u8>>,
}

impl Morphism {
    pub fn new(images: Vec<Vec<u8>>) -> Morphism {
        Morphism { images }
    }

    pub fn domain_size(&self) -> usize {
        self.images.len()
    }

    pub fn image(&self, letter: usize) -> Option<&[u8]> {
        self.images.get(letter).map(Vec::as_slice)
    }

    /// Applies the morphism to a word given as letter indices.
    pub fn apply(&self, letters: &[usize]) -> Result<Vec<u8>, VerifyError> {
        let mut out = Vec::new();
        for &l in letters {
            let image = self.images.get(l).ok_or(VerifyError::UnknownLetter {
                letter: l,
                domain: self.images.len(),
            })?;
            out.extend_from_slice(image);
        }
        Ok(out)
    }

    /// Applies the morphism to a grammar word (terminal ids as letters).
    pub fn apply_word(&self, w: &Word) -> Result<Vec<u8>, VerifyError> {
        let mut out = Vec::new();
        for t in w.letters() {
            let image = self.images.get(t.0).ok_or(VerifyError::UnknownLetter {
                letter: t.0,
                domain: self.images.len(),
            })?;
            out.extend_from_slice(image);
        }
        Ok(out)
    }

    fn apply_into(&self, letters: impl Iterator<Item = usize>, out: &mut Vec<u8>) {
        out.clear();
        for l in letters {
            out.extend_from_slice(&self.images[l]);
        }
    }
}

/// Free-function form of [`Morphism::apply_word`].
pub fn apply_morphism(f: &Morphism, w: &Word) -> Result<Vec<u8>, VerifyError> {
    f.apply_word(w)
}

/// Draws a morphism whose images are uniform over all target words of
/// length `0..=max_image_len`. Deterministic given the RNG state.
pub fn random_morphism(
    domain_size: usize,
    target: &[u8],
    max_image_len: usize,
    rng: &mut impl Rng,
) -> Morphism {
    let t = target.len() as u64;
    let mut total: u64 = 0;
    let mut power: u64 = 1;
    for _ in 0..=max_image_len {
        total += power;
        power *= t;
    }
    let images = (0..domain_size)
        .map(|_| {
            let mut idx = rng.random_range(0..total);
            let mut len = 0;
            let mut count: u64 = 1;
            while idx >= count {
                idx -= count;
                count *= t;
                len += 1;
            }
            // idx now selects one of the t^len words of this length.
            let mut image = vec![0u8; len];
            for slot in image.iter_mut().rev() {
                *slot = target[(idx % t) as usize];
                idx /= t;
            }
            image
        })
        .collect();
    Morphism::new(images)
}

/// One refutation found by a check: the morphism pair and the word they
/// disagree on while agreeing on the whole test set.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Violation {
    pub context: String,
    pub witness: Vec<String>,
    pub first: Vec<(String, String)>,
    pub second: Vec<(String, String)>,
}

/// Outcome of a randomized check. `violations` empty means the check
/// passed; reports are bit-for-bit reproducible for a given seed.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct CheckReport {
    pub trials: u64,
    pub seed: u64,
    pub truncated: bool,
    pub violations: Vec<Violation>,
}

impl CheckReport {
    pub fn passed(&self) -> bool {
        self.violations.is_empty()
    }

    pub fn to_json(&self) -> serde_json::Value {
        serde_json::to_value(self).expect("report serializes")
    }
}

fn trial_rng(seed: u64, stream: u64) -> ChaCha8Rng {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(stream);
    rng
}

fn image_table(m: &Morphism, name_of: impl Fn(usize) -> String) -> Vec<(String, String)> {
    (0..m.domain_size())
        .map(|l| {
            let image = String::from_utf8_lossy(m.image(l).unwrap()).into_owned();
            (name_of(l), image)
        })
        .collect()
}

/// Checks one explicit morphism pair against a test set: if the pair
/// agrees on every word of `test_words` but disagrees on some word of
/// `language_words`, that word refutes the test set and is returned.
pub fn find_test_set_violation(
    f: &Morphism,
    h: &Morphism,
    test_words: &[Word],
    language_words: &[Word],
) -> Option<Word> {
    let mut buf_f = Vec::new();
    let mut buf_h = Vec::new();
    for w in test_words {
        f.apply_into(w.letters().iter().map(|t| t.0), &mut buf_f);
        h.apply_into(w.letters().iter().map(|t| t.0), &mut buf_h);
        if buf_f != buf_h {
            return None;
        }
    }
    for w in language_words {
        f.apply_into(w.letters().iter().map(|t| t.0), &mut buf_f);
        h.apply_into(w.letters().iter().map(|t| t.0), &mut buf_h);
        if buf_f != buf_h {
            return Some(w.clone());
        }
    }
    None
}

/// Property check of a claimed test set: the words of `t` must all be in
/// the language (checked first), and across `trials` random morphism
/// pairs into `{0,1}`, no pair may agree on `t` yet disagree on a language
/// word of length at most `max_len`. Violations refute the test set;
/// a clean report is evidence, not proof.
pub fn check_test_set_property(
    g: &Grammar,
    t: &TestSet,
    trials: u64,
    max_len: usize,
    max_image_len: usize,
    seed: u64,
) -> Result<CheckReport, VerifyError> {
    for w in t.words() {
        if !g.contains(w) {
            return Err(VerifyError::SubsetViolation {
                word: g.word_to_string(w),
            });
        }
    }
    let enumeration = g.enumerate_words(max_len, ENUMERATION_CAP);
    let target = b"01";
    let mut violations = Vec::new();
    for trial in 0..trials {
        let mut rng = trial_rng(seed, trial);
        let f = random_morphism(g.terminal_count(), target, max_image_len, &mut rng);
        let h = random_morphism(g.terminal_count(), target, max_image_len, &mut rng);
        if let Some(witness) = find_test_set_violation(&f, &h, t.words(), &enumeration.words) {
            let name_of = |l: usize| g.terminal_name(TermId(l)).to_string();
            violations.push(Violation {
                context: format!("test-set property, trial {trial}"),
                witness: witness
                    .letters()
                    .iter()
                    .map(|t| g.terminal_name(*t).to_string())
                    .collect(),
                first: image_table(&f, name_of),
                second: image_table(&h, name_of),
            });
        }
    }
    Ok(CheckReport {
        trials,
        seed,
        truncated: enumeration.truncated,
        violations,
    })
}

/// The 16-letter alphabet `{a_i, abar_i, b_i, bbar_i | i in 1..=4}`, the
/// 16-word witness language of shape `x4 x3 x2 x1 xbar1 xbar2 xbar3 xbar4`,
/// and its test set: all words except the all-b one.
#[derive(Debug, Clone)]
pub struct SigmaFour {
    names: Vec<String>,
    language: Vec<Vec<usize>>,
    test_words: Vec<Vec<usize>>,
    omitted: Vec<usize>,
}

impl SigmaFour {
    pub fn new() -> SigmaFour {
        // Letter layout: for i in 1..=4, indices 4(i-1).. hold
        // a_i, abar_i, b_i, bbar_i.
        let mut names = Vec::with_capacity(16);
        for i in 1..=4 {
            for prefix in ["a", "abar", "b", "bbar"] {
                names.push(format!("{prefix}{i}"));
            }
        }
        let a = |i: usize| 4 * (i - 1);
        let abar = |i: usize| 4 * (i - 1) + 1;
        let b = |i: usize| 4 * (i - 1) + 2;
        let bbar = |i: usize| 4 * (i - 1) + 3;

        let mut language = Vec::with_capacity(16);
        for mask in 0..16u32 {
            let pick = |i: usize| {
                if mask & (1 << (i - 1)) == 0 {
                    (a(i), abar(i))
                } else {
                    (b(i), bbar(i))
                }
            };
            let mut word = Vec::with_capacity(8);
            for i in [4, 3, 2, 1] {
                word.push(pick(i).0);
            }
            for i in [1, 2, 3, 4] {
                word.push(pick(i).1);
            }
            language.push(word);
        }
        let omitted = vec![b(4), b(3), b(2), b(1), bbar(1), bbar(2), bbar(3), bbar(4)];
        let test_words: Vec<Vec<usize>> = language
            .iter()
            .filter(|w| **w != omitted)
            .cloned()
            .collect();
        assert_eq!(language.len(), 16);
        assert_eq!(test_words.len(), 15);
        SigmaFour {
            names,
            language,
            test_words,
            omitted,
        }
    }

    pub fn alphabet_size(&self) -> usize {
        self.names.len()
    }

    pub fn letter_name(&self, letter: usize) -> &str {
        &self.names[letter]
    }

    /// The full 16-word language.
    pub fn language(&self) -> &[Vec<usize>] {
        &self.language
    }

    /// The 15-word test set.
    pub fn test_words(&self) -> &[Vec<usize>] {
        &self.test_words
    }

    /// The omitted all-b word.
    pub fn omitted(&self) -> &[usize] {
        &self.omitted
    }
}

impl Default for SigmaFour {
    fn default() -> Self {
        SigmaFour::new()
    }
}

/// Randomized sanity check that the 15-word subset is a test set for the
/// 16-word language: any pair agreeing on the 15 must agree on the
/// omitted word. Runs `trials` uniform pairs plus `trials / 4` near-miss
/// pairs (a copy of the first morphism with one image redrawn), which
/// concentrate sampling near the agreement boundary. A violation would be
/// a fatal inconsistency.
pub fn check_t4_lemma(
    trials: u64,
    target_alphabet_size: usize,
    max_image_len: usize,
    seed: u64,
) -> CheckReport {
    let sigma = SigmaFour::new();
    let target: Vec<u8> = (0..target_alphabet_size)
        .map(|i| b"0123456789abcdefghijklmnopqrstuvwxyz"[i % 36])
        .collect();
    let near_miss_trials = trials / 4;
    let mut violations = Vec::new();
    let mut buf_f = Vec::new();
    let mut buf_h = Vec::new();

    let mut run_pair = |f: &Morphism, h: &Morphism, label: &str, violations: &mut Vec<Violation>| {
        let agree_on_test_set = sigma.test_words().iter().all(|w| {
            f.apply_into(w.iter().copied(), &mut buf_f);
            h.apply_into(w.iter().copied(), &mut buf_h);
            buf_f == buf_h
        });
        if !agree_on_test_set {
            return;
        }
        f.apply_into(sigma.omitted().iter().copied(), &mut buf_f);
        h.apply_into(sigma.omitted().iter().copied(), &mut buf_h);
        if buf_f != buf_h {
            let name_of = |l: usize| sigma.letter_name(l).to_string();
            violations.push(Violation {
                context: label.to_string(),
                witness: sigma.omitted().iter().map(|&l| name_of(l)).collect(),
                first: image_table(f, name_of),
                second: image_table(h, name_of),
            });
        }
    };

    for trial in 0..trials {
        let mut rng = trial_rng(seed, trial);
        let f = random_morphism(sigma.alphabet_size(), &target, max_image_len, &mut rng);
        let h = random_morphism(sigma.alphabet_size(), &target, max_image_len, &mut rng);
        run_pair(&f, &h, &format!("t4 uniform, trial {trial}"), &mut violations);
    }
    for trial in 0..near_miss_trials {
        let mut rng = trial_rng(seed, trials + trial);
        let f = random_morphism(sigma.alphabet_size(), &target, max_image_len, &mut rng);
        let mut h = f.clone();
        let letter = rng.random_range(0..sigma.alphabet_size());
        for _ in 0..8 {
            let replacement = random_morphism(1, &target, max_image_len, &mut rng);
            if replacement.image(0) != h.image(letter) {
                h.images[letter] = replacement.images[0].clone();
                break;
            }
        }
        run_pair(&f, &h, &format!("t4 near-miss, trial {trial}"), &mut violations);
    }

    CheckReport {
        trials: trials + near_miss_trials,
        seed,
        truncated: false,
        violations,
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::grammar::Grammar;
    use crate::testset::test_set;
    use proptest::prelude::*;

    fn morphism_of(g: &Grammar, images: &[(&str, &str)]) -> Morphism {
        let mut table = vec![Vec::new(); g.terminal_count()];
        for (name, image) in images {
            let id = g.terminal_id(name).expect("known terminal");
            table[id.0] = image.as_bytes().to_vec();
        }
        Morphism::new(table)
    }

    #[test]
    fn application_concatenates_images() {
        let g = Grammar::parse("S -> 'a' 'b'").unwrap();
        let f = morphism_of(&g, &[("a", "xy"), ("b", "")]);
        let w = g.word_from_chars("aba").unwrap();
        assert_eq!(f.apply_word(&w).unwrap(), b"xyxy");
        assert_eq!(f.apply_word(&Word::empty()).unwrap(), b"");

        let f = morphism_of(&g, &[("a", "x"), ("b", "")]);
        let w = g.word_from_chars("aaa").unwrap();
        assert_eq!(f.apply_word(&w).unwrap(), b"xxx");
    }

    #[test]
    fn unknown_letters_are_reported() {
        let f = Morphism::new(vec![b"x".to_vec()]);
        assert_eq!(
            f.apply(&[1]),
            Err(VerifyError::UnknownLetter { letter: 1, domain: 1 })
        );
    }

    #[test]
    fn zero_image_length_gives_the_erasing_morphism() {
        let mut rng = trial_rng(9, 0);
        let f = random_morphism(5, b"01", 0, &mut rng);
        for l in 0..5 {
            assert_eq!(f.image(l).unwrap(), b"");
        }
    }

    #[test]
    fn single_letter_images_stay_in_range() {
        for stream in 0..64 {
            let mut rng = trial_rng(3, stream);
            let f = random_morphism(1, b"x", 1, &mut rng);
            assert!(f.image(0).unwrap() == b"" || f.image(0).unwrap() == b"x");
        }
    }

    #[test]
    fn fixed_seed_reproduces_morphisms() {
        let mut rng_a = trial_rng(42, 7);
        let mut rng_b = trial_rng(42, 7);
        let f = random_morphism(8, b"01", 3, &mut rng_a);
        let h = random_morphism(8, b"01", 3, &mut rng_b);
        assert_eq!(f, h);
    }

    #[test]
    fn good_test_set_passes_the_property_check() {
        let g = Grammar::parse("S -> 'a' S 'b' | 'c'").unwrap();
        let t = test_set(&g, 3);
        let report = check_test_set_property(&g, &t, 1000, 12, 3, 11).unwrap();
        assert!(report.passed(), "{:?}", report.violations.first());
        assert_eq!(report.trials, 1000);
    }

    /// The documented counterexample: with the broken test set {"c"}, the
    /// pair f = {a->x, b->eps, c->z}, h = {a->eps, b->x, c->z} agrees on
    /// "c" but maps "acb" to "xz" and "zx" respectively.
    #[test]
    fn broken_test_set_is_refuted_by_the_documented_pair() {
        let g = Grammar::parse("S -> 'a' S 'b' | 'c'").unwrap();
        let f = morphism_of(&g, &[("a", "x"), ("b", ""), ("c", "z")]);
        let h = morphism_of(&g, &[("a", ""), ("b", "x"), ("c", "z")]);
        let acb = g.word_from_chars("acb").unwrap();
        assert_eq!(f.apply_word(&acb).unwrap(), b"xz");
        assert_eq!(h.apply_word(&acb).unwrap(), b"zx");

        let broken = vec![g.word_from_chars("c").unwrap()];
        let language = g.enumerate_words(12, 1000).words;
        let witness = find_test_set_violation(&f, &h, &broken, &language).expect("violation");
        assert_eq!(g.word_to_string(&witness), "acb");
    }

    #[test]
    fn identical_pairs_never_violate() {
        let g = Grammar::parse("S -> 'a' S 'b' | 'c'").unwrap();
        let mut rng = trial_rng(5, 0);
        let f = random_morphism(g.terminal_count(), b"01", 3, &mut rng);
        let words = g.enumerate_words(10, 1000).words;
        assert_eq!(find_test_set_violation(&f, &f, &[], &words), None);
    }

    #[test]
    fn subset_violation_is_reported_before_trials() {
        let g = Grammar::parse("S -> 'a'").unwrap();
        let other = Grammar::parse("S -> 'a' | 'b'").unwrap();
        let t = test_set(&other, 3);
        let err = check_test_set_property(&g, &t, 10, 5, 2, 0).unwrap_err();
        assert!(matches!(err, VerifyError::SubsetViolation { .. }));
    }

    #[test]
    fn sigma_four_shape() {
        let sigma = SigmaFour::new();
        assert_eq!(sigma.alphabet_size(), 16);
        assert_eq!(sigma.language().len(), 16);
        assert_eq!(sigma.test_words().len(), 15);
        for w in sigma.language() {
            assert_eq!(w.len(), 8);
        }
        assert_eq!(
            sigma.omitted().iter().map(|&l| sigma.letter_name(l)).collect::<Vec<_>>(),
            ["b4", "b3", "b2", "b1", "bbar1", "bbar2", "bbar3", "bbar4"]
        );
    }

    #[test]
    fn t4_check_runs_clean() {
        let report = check_t4_lemma(2000, 2, 2, 17);
        assert!(report.passed());
        assert_eq!(report.trials, 2500);
    }

    #[test]
    fn reports_are_reproducible() {
        let a = check_t4_lemma(500, 2, 2, 23);
        let b = check_t4_lemma(500, 2, 2, 23);
        assert_eq!(a, b);

        let g = Grammar::parse("S -> 'a' S 'b' | 'c'").unwrap();
        let t = test_set(&g, 3);
        let r1 = check_test_set_property(&g, &t, 200, 10, 3, 3).unwrap();
        let r2 = check_test_set_property(&g, &t, 200, 10, 3, 3).unwrap();
        assert_eq!(r1, r2);
    }

    proptest! {
        /// Morphisms distribute over concatenation.
        #[test]
        fn application_distributes_over_concatenation(
            u in proptest::collection::vec(0usize..4, 0..12),
            v in proptest::collection::vec(0usize..4, 0..12),
            seed in any::<u64>(),
        ) {
            let mut rng = trial_rng(seed, 0);
            let f = random_morphism(4, b"01", 3, &mut rng);
            let mut uv = u.clone();
            uv.extend_from_slice(&v);
            let mut expected = f.apply(&u).unwrap();
            expected.extend_from_slice(&f.apply(&v).unwrap());
            prop_assert_eq!(f.apply(&uv).unwrap(), expected);
        }
    }
}
