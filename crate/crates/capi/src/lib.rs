//! C ABI over the cfg-testset library.
//!
//! Handles are opaque pointers owned by the caller and released with the
//! matching `_free` function. Functions that can fail return a
//! [`CfgStatus`]; on failure, [`cfg_last_error_message`] gives a
//! human-readable description for the current thread. Returned strings
//! are NUL-terminated, owned by the caller, and released with
//! [`cfg_string_free`].

use cfg_testset::testset::{test_set_with, BuildOptions, TestSet};
use cfg_testset::verify::check_test_set_property;
use cfg_testset::Grammar;
use std::cell::RefCell;
use std::ffi::{c_char, CStr, CString};

/// Status code of a fallible call.
#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum CfgStatus {
    Ok = 0,
    /// A required pointer argument was NULL.
    NullArgument = 1,
    /// An input string was not valid UTF-8.
    InvalidUtf8 = 2,
    /// The grammar text did not parse.
    ParseError = 3,
    /// The start symbol derives no word; the operation needs a nonempty
    /// language.
    EmptyLanguage = 4,
    /// An index was out of range.
    OutOfRange = 5,
    /// An internal invariant failed; report this as a bug.
    Internal = 6,
}

/// An immutable context-free grammar.
pub struct CfgGrammar {
    inner: Grammar,
}

/// A test set together with the grammar it was built from.
pub struct CfgTestSet {
    grammar: Grammar,
    set: TestSet,
}

thread_local! {
    static LAST_ERROR: RefCell<CString> = RefCell::new(CString::default());
}

fn set_error(message: impl Into<String>) {
    let message = message.into().replace('\0', " ");
    LAST_ERROR.with(|slot| {
        *slot.borrow_mut() = CString::new(message).expect("NUL stripped");
    });
}

/// Message describing the most recent failure in this thread. The pointer
/// stays valid until the next failing call on the same thread. Never NULL.
#[no_mangle]
pub extern "C" fn cfg_last_error_message() -> *const c_char {
    LAST_ERROR.with(|slot| slot.borrow().as_ptr())
}

/// Releases a string returned by this library. NULL is ignored.
///
/// # Safety
/// `s` must have been returned by a function of this library and not yet
/// freed.
#[no_mangle]
pub unsafe extern "C" fn cfg_string_free(s: *mut c_char) {
    if !s.is_null() {
        drop(CString::from_raw(s));
    }
}

fn export_string(s: String) -> *mut c_char {
    CString::new(s.replace('\0', " "))
        .expect("NUL stripped")
        .into_raw()
}

/// Parses a grammar from UTF-8 text and stores a new handle in `*out`.
///
/// # Safety
/// `text` must point to a NUL-terminated string and `out` to writable
/// pointer storage.
#[no_mangle]
pub unsafe extern "C" fn cfg_grammar_parse(
    text: *const c_char,
    out: *mut *mut CfgGrammar,
) -> CfgStatus {
    if text.is_null() || out.is_null() {
        set_error("NULL argument to cfg_grammar_parse");
        return CfgStatus::NullArgument;
    }
    let Ok(text) = CStr::from_ptr(text).to_str() else {
        set_error("grammar text is not valid UTF-8");
        return CfgStatus::InvalidUtf8;
    };
    match Grammar::parse(text) {
        Ok(inner) => {
            *out = Box::into_raw(Box::new(CfgGrammar { inner }));
            CfgStatus::Ok
        }
        Err(err) => {
            set_error(err.to_string());
            CfgStatus::ParseError
        }
    }
}

/// Releases a grammar handle. NULL is ignored.
///
/// # Safety
/// `g` must have come from [`cfg_grammar_parse`] and not yet been freed.
#[no_mangle]
pub unsafe extern "C" fn cfg_grammar_free(g: *mut CfgGrammar) {
    if !g.is_null() {
        drop(Box::from_raw(g));
    }
}

/// The grammar size metric: the sum over rules of `|rhs| + 1`. Returns 0
/// for NULL.
///
/// # Safety
/// `g` must be a live grammar handle or NULL.
#[no_mangle]
pub unsafe extern "C" fn cfg_grammar_size(g: *const CfgGrammar) -> usize {
    g.as_ref().map_or(0, |g| g.inner.size())
}

/// Number of rules. Returns 0 for NULL.
///
/// # Safety
/// `g` must be a live grammar handle or NULL.
#[no_mangle]
pub unsafe extern "C" fn cfg_grammar_rule_count(g: *const CfgGrammar) -> usize {
    g.as_ref().map_or(0, |g| g.inner.rule_count())
}

/// True iff every rule has at most one nonterminal occurrence. Returns
/// false for NULL.
///
/// # Safety
/// `g` must be a live grammar handle or NULL.
#[no_mangle]
pub unsafe extern "C" fn cfg_grammar_is_linear(g: *const CfgGrammar) -> bool {
    g.as_ref().is_some_and(|g| g.inner.is_linear())
}

/// Serializes the grammar back to its textual format.
///
/// # Safety
/// `g` must be a live grammar handle; `out` must point to writable
/// pointer storage.
#[no_mangle]
pub unsafe extern "C" fn cfg_grammar_to_text(
    g: *const CfgGrammar,
    out: *mut *mut c_char,
) -> CfgStatus {
    let (Some(g), false) = (g.as_ref(), out.is_null()) else {
        set_error("NULL argument to cfg_grammar_to_text");
        return CfgStatus::NullArgument;
    };
    *out = export_string(g.inner.to_text());
    CfgStatus::Ok
}

/// Rewrites the grammar into its linear test-set grammar and returns the
/// textual form, witness words and provenance included as comments.
///
/// # Safety
/// `g` must be a live grammar handle; `out` must point to writable
/// pointer storage.
#[no_mangle]
pub unsafe extern "C" fn cfg_grammar_linearize_text(
    g: *const CfgGrammar,
    out: *mut *mut c_char,
) -> CfgStatus {
    let (Some(g), false) = (g.as_ref(), out.is_null()) else {
        set_error("NULL argument to cfg_grammar_linearize_text");
        return CfgStatus::NullArgument;
    };
    let (lin, witnesses) = match cfg_testset::linearize(&g.inner) {
        Ok(result) => result,
        Err(err) => {
            set_error(err.to_string());
            return CfgStatus::EmptyLanguage;
        }
    };
    let grammar = &g.inner;
    let mut text = format!("start: {}\n", grammar.nonterminal_name(grammar.start()));
    for (nt, word) in witnesses.iter() {
        text.push_str(&format!(
            "# x_{} = {}\n",
            grammar.nonterminal_name(nt),
            grammar.word_to_string(word)
        ));
    }
    for rule in lin.grammar().rules() {
        text.push_str(&lin.grammar().format_rule(rule.index));
        text.push('\n');
    }
    *out = export_string(text);
    CfgStatus::Ok
}

/// Builds the test set of the grammar with the given `k` (3 gives the
/// `2|G|^3` bound). An empty language yields an empty set, not an error.
///
/// # Safety
/// `g` must be a live grammar handle; `out` must point to writable
/// pointer storage.
#[no_mangle]
pub unsafe extern "C" fn cfg_test_set_build(
    g: *const CfgGrammar,
    k: usize,
    filter_optimal: bool,
    out: *mut *mut CfgTestSet,
) -> CfgStatus {
    let (Some(g), false) = (g.as_ref(), out.is_null()) else {
        set_error("NULL argument to cfg_test_set_build");
        return CfgStatus::NullArgument;
    };
    let set = test_set_with(&g.inner, k, BuildOptions { filter_optimal });
    if let Err(msg) = set.validate() {
        set_error(msg);
        return CfgStatus::Internal;
    }
    *out = Box::into_raw(Box::new(CfgTestSet {
        grammar: g.inner.clone(),
        set,
    }));
    CfgStatus::Ok
}

/// Releases a test-set handle. NULL is ignored.
///
/// # Safety
/// `ts` must have come from [`cfg_test_set_build`] and not yet been freed.
#[no_mangle]
pub unsafe extern "C" fn cfg_test_set_free(ts: *mut CfgTestSet) {
    if !ts.is_null() {
        drop(Box::from_raw(ts));
    }
}

/// Number of words in the set. Returns 0 for NULL.
///
/// # Safety
/// `ts` must be a live test-set handle or NULL.
#[no_mangle]
pub unsafe extern "C" fn cfg_test_set_len(ts: *const CfgTestSet) -> usize {
    ts.as_ref().map_or(0, |ts| ts.set.len())
}

/// The size bound the construction guarantees for this set. Returns 0
/// for NULL.
///
/// # Safety
/// `ts` must be a live test-set handle or NULL.
#[no_mangle]
pub unsafe extern "C" fn cfg_test_set_bound(ts: *const CfgTestSet) -> u64 {
    ts.as_ref().map_or(0, |ts| ts.set.bound())
}

/// Renders word `index` of the set (single-character alphabets
/// concatenated, otherwise space-separated; `eps` for the empty word).
///
/// # Safety
/// `ts` must be a live test-set handle; `out` must point to writable
/// pointer storage.
#[no_mangle]
pub unsafe extern "C" fn cfg_test_set_word(
    ts: *const CfgTestSet,
    index: usize,
    out: *mut *mut c_char,
) -> CfgStatus {
    let (Some(ts), false) = (ts.as_ref(), out.is_null()) else {
        set_error("NULL argument to cfg_test_set_word");
        return CfgStatus::NullArgument;
    };
    let Some(word) = ts.set.words().get(index) else {
        set_error(format!(
            "word index {index} out of range for a set of {} words",
            ts.set.len()
        ));
        return CfgStatus::OutOfRange;
    };
    *out = export_string(ts.grammar.word_to_string(word));
    CfgStatus::Ok
}

/// Serializes the whole set (words, provenance, bound) as a JSON document.
///
/// # Safety
/// `ts` must be a live test-set handle; `out` must point to writable
/// pointer storage.
#[no_mangle]
pub unsafe extern "C" fn cfg_test_set_to_json(
    ts: *const CfgTestSet,
    out: *mut *mut c_char,
) -> CfgStatus {
    let (Some(ts), false) = (ts.as_ref(), out.is_null()) else {
        set_error("NULL argument to cfg_test_set_to_json");
        return CfgStatus::NullArgument;
    };
    let doc = ts.set.to_json(&ts.grammar);
    *out = export_string(doc.to_string());
    CfgStatus::Ok
}

/// Runs the randomized morphism check against this set's own grammar and
/// stores the number of violations in `*out_violations` (zero means the
/// check passed).
///
/// # Safety
/// `ts` must be a live test-set handle; `out_violations` must point to
/// writable storage.
#[no_mangle]
pub unsafe extern "C" fn cfg_test_set_check(
    ts: *const CfgTestSet,
    trials: u64,
    max_len: usize,
    max_image_len: usize,
    seed: u64,
    out_violations: *mut u64,
) -> CfgStatus {
    let (Some(ts), false) = (ts.as_ref(), out_violations.is_null()) else {
        set_error("NULL argument to cfg_test_set_check");
        return CfgStatus::NullArgument;
    };
    match check_test_set_property(&ts.grammar, &ts.set, trials, max_len, max_image_len, seed) {
        Ok(report) => {
            *out_violations = report.violations.len() as u64;
            CfgStatus::Ok
        }
        Err(err) => {
            set_error(err.to_string());
            CfgStatus::Internal
        }
    }
}
