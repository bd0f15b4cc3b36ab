#ifndef CONDLINT_H
#define CONDLINT_H

/* Generated by cbindgen from crates/ffi/src/lib.rs; do not edit. */

#include <stdarg.h>
#include <stdbool.h>
#include <stddef.h>
#include <stdint.h>
#include <stdlib.h>

// Number of patterns.
#define CONDLINT_PATTERN_COUNT 15

// Mask selecting every pattern.
#define CONDLINT_ALL_PATTERNS ((1 << CONDLINT_PATTERN_COUNT) - 1)

// Result of every fallible call.
typedef enum CondlintStatus {
  CONDLINT_STATUS_OK = 0,
  CONDLINT_STATUS_NULL_POINTER = 1,
  CONDLINT_STATUS_INVALID_UTF8 = 2,
  // The module has syntax errors and cannot be analyzed.
  CONDLINT_STATUS_PARSE_ERROR = 3,
  CONDLINT_STATUS_OUT_OF_RANGE = 4,
  CONDLINT_STATUS_INVALID_ARGUMENT = 5,
  // A Rust panic was caught at the boundary.
  CONDLINT_STATUS_PANIC = 6,
} CondlintStatus;

// Pattern identifiers; bit `n` of a pattern mask selects value `n`.
typedef enum CondlintPattern {
  CONDLINT_PATTERN_IF_ELSE_RETURN_BOOL = 0,
  CONDLINT_PATTERN_CONFUSING_ELSE = 1,
  CONDLINT_PATTERN_NESTED_IF = 2,
  CONDLINT_PATTERN_DUPLICATE_IF_ELSE_STATEMENT = 3,
  CONDLINT_PATTERN_IF_RETURN_BOOL = 4,
  CONDLINT_PATTERN_EMPTY_IF_BODY = 5,
  CONDLINT_PATTERN_UNNECESSARY_ELIF = 6,
  CONDLINT_PATTERN_ELSE_IF = 7,
  CONDLINT_PATTERN_EMPTY_ELSE_BODY = 8,
  CONDLINT_PATTERN_UNNECESSARY_ELSE = 9,
  CONDLINT_PATTERN_SEVERAL_DUPLICATE_IF_ELSE_STATEMENTS = 10,
  CONDLINT_PATTERN_IF_ELSE_ASSIGN_RETURN = 11,
  CONDLINT_PATTERN_DUPLICATE_IF_ELSE_BODY = 12,
  CONDLINT_PATTERN_IF_ELSE_ASSIGN_BOOL = 13,
  CONDLINT_PATTERN_IF_ELSE_ASSIGN_BOOL_RETURN = 14,
} CondlintPattern;

// Output formats for [`condlint_diagnostics_to_text`].
typedef enum CondlintFormat {
  CONDLINT_FORMAT_JSON = 0,
  CONDLINT_FORMAT_CSV = 1,
  CONDLINT_FORMAT_MARKDOWN = 2,
} CondlintFormat;

// The diagnostics of one module.
typedef struct CondlintDiagnostics CondlintDiagnostics;

// A parsed source file.
typedef struct CondlintModule CondlintModule;

// Inclusive source range; lines and columns are 1-based, columns count
// Unicode scalar values.
typedef struct CondlintSpan {
  uint32_t line_start;
  uint32_t col_start;
  uint32_t line_end;
  uint32_t col_end;
} CondlintSpan;

// A borrowed view of one diagnostic. Pointers stay valid until the owning
// [`CondlintDiagnostics`] is freed.
typedef struct CondlintDiagnosticView {
  // A [`CondlintPattern`] value.
  uint32_t pattern;
  struct CondlintSpan span;
  const char *message;
  // Suggested replacement for the span, or NULL.
  const char *replacement;
  // Rationale or hint for the suggestion, or NULL.
  const char *rationale;
} CondlintDiagnosticView;

#ifdef __cplusplus
extern "C" {
#endif // __cplusplus

// Parse `len` bytes of UTF-8 Python source. `path` (nullable,
// NUL-terminated) labels diagnostics. Syntax errors do not fail this call;
// query them with [`condlint_module_error_count`].
enum CondlintStatus condlint_module_parse(const char *source,
                                          size_t len,
                                          const char *path,
                                          struct CondlintModule **out);

// Number of syntax errors in the module, or 0 for NULL.
size_t condlint_module_error_count(const struct CondlintModule *module);

// Logical lines of code in the module, or 0 for NULL.
size_t condlint_module_lloc(const struct CondlintModule *module);

void condlint_module_free(struct CondlintModule *module);

// Run detection. `patterns` is a mask over [`CondlintPattern`] values;
// pass [`CONDLINT_ALL_PATTERNS`] for all. Fails with `ParseError` if the
// module has syntax errors.
enum CondlintStatus condlint_detect(const struct CondlintModule *module,
                                    uint32_t patterns,
                                    bool with_suggestions,
                                    struct CondlintDiagnostics **out);

// Number of diagnostics, or 0 for NULL.
size_t condlint_diagnostics_len(const struct CondlintDiagnostics *diags);

enum CondlintStatus condlint_diagnostics_get(const struct CondlintDiagnostics *diags,
                                             size_t index,
                                             struct CondlintDiagnosticView *out);

// Render the diagnostics as a report in `format` (a [`CondlintFormat`]
// value). Release the result with [`condlint_string_free`].
enum CondlintStatus condlint_diagnostics_to_text(const struct CondlintDiagnostics *diags,
                                                 uint32_t format,
                                                 char **out);

void condlint_diagnostics_free(struct CondlintDiagnostics *diags);

void condlint_string_free(char *s);

// Stable identifier of a pattern (for example `"nested_if"`), or NULL for
// an unknown value. The string is static.
const char *condlint_pattern_name(uint32_t pattern);

// Message for the last failed call on this thread, or an empty string.
// Valid until the next call on the same thread.
const char *condlint_last_error_message(void);

// Library version as a static string.
const char *condlint_version(void);

#ifdef __cplusplus
}  // extern "C"
#endif  // __cplusplus

#endif  /* CONDLINT_H */
