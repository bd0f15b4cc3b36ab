//! C ABI for condlint.
//!
//! Handles are opaque and owned by the caller until passed to the matching
//! `*_free` function. Every function returns a [`CondlintStatus`] or a value
//! with a documented sentinel; after a failure,
//! [`condlint_last_error_message`] describes it. Strings returned through
//! out-parameters must be released with [`condlint_string_free`]; strings in
//! a [`CondlintDiagnosticView`] are borrowed from their handle.
#![allow(clippy::missing_safety_doc)]

use std::{
    cell::RefCell,
    ffi::{c_char, CStr, CString},
    panic::{catch_unwind, AssertUnwindSafe},
    ptr,
};

use condlint::{
    detect::{detect_all_with, DetectOptions, PatternSet},
    report::{emit_diagnostics, ReportFormat},
    Diagnostic, ParsedModule, PatternKind,
};

/// Result of every fallible call.
#[repr(C)]
#[derive(Copy, Clone, Debug, PartialEq, Eq)]
pub enum CondlintStatus {
    Ok = 0,
    NullPointer = 1,
    InvalidUtf8 = 2,
    /// The module has syntax errors and cannot be analyzed.
    ParseError = 3,
    OutOfRange = 4,
    InvalidArgument = 5,
    /// A Rust panic was caught at the boundary.
    Panic = 6,
}

/// Pattern identifiers; bit `n` of a pattern mask selects value `n`.
#[repr(C)]
#[derive(Copy, Clone, Debug, PartialEq, Eq)]
pub enum CondlintPattern {
    IfElseReturnBool = 0,
    ConfusingElse = 1,
    NestedIf = 2,
    DuplicateIfElseStatement = 3,
    IfReturnBool = 4,
    EmptyIfBody = 5,
    UnnecessaryElif = 6,
    ElseIf = 7,
    EmptyElseBody = 8,
    UnnecessaryElse = 9,
    SeveralDuplicateIfElseStatements = 10,
    IfElseAssignReturn = 11,
    DuplicateIfElseBody = 12,
    IfElseAssignBool = 13,
    IfElseAssignBoolReturn = 14,
}

/// Output formats for [`condlint_diagnostics_to_text`].
#[repr(C)]
#[derive(Copy, Clone, Debug, PartialEq, Eq)]
pub enum CondlintFormat {
    Json = 0,
    Csv = 1,
    Markdown = 2,
}

/// Number of patterns.
pub const CONDLINT_PATTERN_COUNT: u32 = 15;
/// Mask selecting every pattern.
pub const CONDLINT_ALL_PATTERNS: u32 = (1 << CONDLINT_PATTERN_COUNT) - 1;

/// Inclusive source range; lines and columns are 1-based, columns count
/// Unicode scalar values.
#[repr(C)]
#[derive(Copy, Clone, Debug, Default, PartialEq, Eq)]
pub struct CondlintSpan {
    pub line_start: u32,
    pub col_start: u32,
    pub line_end: u32,
    pub col_end: u32,
}

/// A borrowed view of one diagnostic. Pointers stay valid until the owning
/// [`CondlintDiagnostics`] is freed.
#[repr(C)]
#[derive(Copy, Clone, Debug)]
pub struct CondlintDiagnosticView {
    /// A [`CondlintPattern`] value.
    pub pattern: u32,
    pub span: CondlintSpan,
    pub message: *const c_char,
    /// Suggested replacement for the span, or NULL.
    pub replacement: *const c_char,
    /// Rationale or hint for the suggestion, or NULL.
    pub rationale: *const c_char,
}

/// A parsed source file.
pub struct CondlintModule {
    module: ParsedModule,
}

struct Entry {
    message: CString,
    replacement: Option<CString>,
    rationale: Option<CString>,
}

/// The diagnostics of one module.
pub struct CondlintDiagnostics {
    items: Vec<Diagnostic>,
    strings: Vec<Entry>,
}

thread_local! {
    static LAST_ERROR: RefCell<CString> = RefCell::new(CString::default());
}

fn set_error(message: impl Into<String>) {
    let message = message.into().replace('\0', " ");
    LAST_ERROR.with(|e| *e.borrow_mut() = CString::new(message).unwrap_or_default());
}

fn fail(status: CondlintStatus, message: impl Into<String>) -> CondlintStatus {
    set_error(message);
    status
}

fn guard(f: impl FnOnce() -> CondlintStatus) -> CondlintStatus {
    match catch_unwind(AssertUnwindSafe(f)) {
        Ok(status) => {
            if status == CondlintStatus::Ok {
                set_error("");
            }
            status
        }
        Err(_) => fail(CondlintStatus::Panic, "internal error"),
    }
}

fn c_string(s: &str) -> CString {
    CString::new(s.replace('\0', "\\0")).expect("interior NULs replaced")
}

fn pattern_of(index: u32) -> Option<PatternKind> {
    PatternKind::ALL.get(index as usize).copied()
}

/// Parse `len` bytes of UTF-8 Python source. `path` (nullable,
/// NUL-terminated) labels diagnostics. Syntax errors do not fail this call;
/// query them with [`condlint_module_error_count`].
#[no_mangle]
pub unsafe extern "C" fn condlint_module_parse(
    source: *const c_char,
    len: usize,
    path: *const c_char,
    out: *mut *mut CondlintModule,
) -> CondlintStatus {
    guard(|| {
        if out.is_null() || (source.is_null() && len > 0) {
            return fail(CondlintStatus::NullPointer, "null argument");
        }
        let bytes: &[u8] = if len == 0 {
            &[]
        } else {
            std::slice::from_raw_parts(source.cast::<u8>(), len)
        };
        let path = if path.is_null() {
            String::from("<input>")
        } else {
            match CStr::from_ptr(path).to_str() {
                Ok(p) => p.to_string(),
                Err(_) => return fail(CondlintStatus::InvalidUtf8, "path is not UTF-8"),
            }
        };
        let module = ParsedModule::from_bytes(bytes, path);
        *out = Box::into_raw(Box::new(CondlintModule { module }));
        CondlintStatus::Ok
    })
}

/// Number of syntax errors in the module, or 0 for NULL.
#[no_mangle]
pub unsafe extern "C" fn condlint_module_error_count(module: *const CondlintModule) -> usize {
    module.as_ref().map_or(0, |m| m.module.parse_errors.len())
}

/// Logical lines of code in the module, or 0 for NULL.
#[no_mangle]
pub unsafe extern "C" fn condlint_module_lloc(module: *const CondlintModule) -> usize {
    module.as_ref().map_or(0, |m| m.module.lloc)
}

#[no_mangle]
pub unsafe extern "C" fn condlint_module_free(module: *mut CondlintModule) {
    if !module.is_null() {
        drop(Box::from_raw(module));
    }
}

/// Run detection. `patterns` is a mask over [`CondlintPattern`] values;
/// pass [`CONDLINT_ALL_PATTERNS`] for all. Fails with `ParseError` if the
/// module has syntax errors.
#[no_mangle]
pub unsafe extern "C" fn condlint_detect(
    module: *const CondlintModule,
    patterns: u32,
    with_suggestions: bool,
    out: *mut *mut CondlintDiagnostics,
) -> CondlintStatus {
    guard(|| {
        let Some(m) = module.as_ref() else {
            return fail(CondlintStatus::NullPointer, "null module");
        };
        if out.is_null() {
            return fail(CondlintStatus::NullPointer, "null out pointer");
        }
        if patterns & !CONDLINT_ALL_PATTERNS != 0 {
            return fail(
                CondlintStatus::InvalidArgument,
                "unknown bits in pattern mask",
            );
        }
        let options = DetectOptions {
            suggestions: with_suggestions,
            patterns: (0..CONDLINT_PATTERN_COUNT)
                .filter(|i| patterns & (1 << i) != 0)
                .filter_map(pattern_of)
                .collect::<PatternSet>(),
        };
        let items = match detect_all_with(&m.module, &options) {
            Ok(d) => d,
            Err(e) => return fail(CondlintStatus::ParseError, e.to_string()),
        };
        let strings = items
            .iter()
            .map(|d| Entry {
                message: c_string(&d.message),
                replacement: d
                    .suggestion
                    .as_ref()
                    .and_then(|s| s.replacement.as_deref())
                    .map(c_string),
                rationale: d.suggestion.as_ref().map(|s| c_string(&s.rationale)),
            })
            .collect();
        *out = Box::into_raw(Box::new(CondlintDiagnostics { items, strings }));
        CondlintStatus::Ok
    })
}

/// Number of diagnostics, or 0 for NULL.
#[no_mangle]
pub unsafe extern "C" fn condlint_diagnostics_len(diags: *const CondlintDiagnostics) -> usize {
    diags.as_ref().map_or(0, |d| d.items.len())
}

#[no_mangle]
pub unsafe extern "C" fn condlint_diagnostics_get(
    diags: *const CondlintDiagnostics,
    index: usize,
    out: *mut CondlintDiagnosticView,
) -> CondlintStatus {
    guard(|| {
        let Some(d) = diags.as_ref() else {
            return fail(CondlintStatus::NullPointer, "null diagnostics");
        };
        if out.is_null() {
            return fail(CondlintStatus::NullPointer, "null out pointer");
        }
        let (Some(item), Some(strings)) = (d.items.get(index), d.strings.get(index)) else {
            return fail(
                CondlintStatus::OutOfRange,
                format!("index {index} out of range (len {})", d.items.len()),
            );
        };
        let s = item.span;
        *out = CondlintDiagnosticView {
            pattern: item.pattern.index() as u32,
            span: CondlintSpan {
                line_start: s.line_start,
                col_start: s.col_start,
                line_end: s.line_end,
                col_end: s.col_end,
            },
            message: strings.message.as_ptr(),
            replacement: strings
                .replacement
                .as_ref()
                .map_or(ptr::null(), |c| c.as_ptr()),
            rationale: strings
                .rationale
                .as_ref()
                .map_or(ptr::null(), |c| c.as_ptr()),
        };
        CondlintStatus::Ok
    })
}

/// Render the diagnostics as a report in `format` (a [`CondlintFormat`]
/// value). Release the result with [`condlint_string_free`].
#[no_mangle]
pub unsafe extern "C" fn condlint_diagnostics_to_text(
    diags: *const CondlintDiagnostics,
    format: u32,
    out: *mut *mut c_char,
) -> CondlintStatus {
    guard(|| {
        let Some(d) = diags.as_ref() else {
            return fail(CondlintStatus::NullPointer, "null diagnostics");
        };
        if out.is_null() {
            return fail(CondlintStatus::NullPointer, "null out pointer");
        }
        let format = match format {
            0 => ReportFormat::Json,
            1 => ReportFormat::Csv,
            2 => ReportFormat::Markdown,
            other => {
                return fail(
                    CondlintStatus::InvalidArgument,
                    format!("unknown format {other}"),
                )
            }
        };
        *out = c_string(&emit_diagnostics(&d.items, format)).into_raw();
        CondlintStatus::Ok
    })
}

#[no_mangle]
pub unsafe extern "C" fn condlint_diagnostics_free(diags: *mut CondlintDiagnostics) {
    if !diags.is_null() {
        drop(Box::from_raw(diags));
    }
}

#[no_mangle]
pub unsafe extern "C" fn condlint_string_free(s: *mut c_char) {
    if !s.is_null() {
        drop(CString::from_raw(s));
    }
}

/// Stable identifier of a pattern (for example `"nested_if"`), or NULL for
/// an unknown value. The string is static.
#[no_mangle]
pub extern "C" fn condlint_pattern_name(pattern: u32) -> *const c_char {
    const NAMES: [&CStr; 15] = [
        c"if_else_return_bool",
        c"confusing_else",
        c"nested_if",
        c"duplicate_if_else_statement",
        c"if_return_bool",
        c"empty_if_body",
        c"unnecessary_elif",
        c"else_if",
        c"empty_else_body",
        c"unnecessary_else",
        c"several_duplicate_if_else_statements",
        c"if_else_assign_return",
        c"duplicate_if_else_body",
        c"if_else_assign_bool",
        c"if_else_assign_bool_return",
    ];
    NAMES
        .get(pattern as usize)
        .map_or(ptr::null(), |n| n.as_ptr())
}

/// Message for the last failed call on this thread, or an empty string.
/// Valid until the next call on the same thread.
#[no_mangle]
pub extern "C" fn condlint_last_error_message() -> *const c_char {
    LAST_ERROR.with(|e| e.borrow().as_ptr())
}

/// Library version as a static string.
#[no_mangle]
pub extern "C" fn condlint_version() -> *const c_char {
    concat!(env!("CARGO_PKG_VERSION"), "\0").as_ptr().cast()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn names_match_core() {
        for k in PatternKind::ALL {
            let name = unsafe { CStr::from_ptr(condlint_pattern_name(k.index() as u32)) };
            assert_eq!(name.to_str().unwrap(), k.id());
        }
        assert!(condlint_pattern_name(CONDLINT_PATTERN_COUNT).is_null());
    }

    #[test]
    fn enum_matches_core_order() {
        assert_eq!(
            CondlintPattern::IfElseAssignBoolReturn as usize,
            PatternKind::IfElseAssignBoolReturn.index()
        );
        assert_eq!(
            CondlintPattern::UnnecessaryElse as usize,
            PatternKind::UnnecessaryElse.index()
        );
        assert_eq!(PatternKind::ALL.len() as u32, CONDLINT_PATTERN_COUNT);
    }
}
