#ifndef FGAMMA_H
#define FGAMMA_H

/* Generated by cbindgen from crates/ffi/src/lib.rs; do not edit. */

#include <stdarg.h>
#include <stdbool.h>
#include <stddef.h>
#include <stdint.h>
#include <stdlib.h>

typedef enum FgStatus {
  FG_STATUS_OK = 0,
  // A required pointer was null.
  FG_STATUS_NULL_POINTER = 1,
  FG_STATUS_PARSE = 2,
  FG_STATUS_INVALID_ARGUMENT = 3,
  FG_STATUS_INADMISSIBLE = 4,
  // A symbol could not be certified within the precision budget.
  FG_STATUS_UNRESOLVABLE = 5,
  // Any other library error.
  FG_STATUS_FAILED = 6,
  FG_STATUS_PANIC = 7,
} FgStatus;

// A computed orbit.
typedef struct FgOrbit FgOrbit;

// An extended real: rational, quadratic surd, certified real or infinity.
typedef struct FgValue FgValue;

#ifdef __cplusplus
extern "C" {
#endif // __cplusplus

// Message of the last failed call on this thread, or null. The pointer is
// valid until the next failing call on the same thread.
const char *fg_last_error(void);

// # Safety
// `s` must be null or a string returned by this library and not yet freed.
void fg_string_free(char *s);

// Parses a number literal such as `sqrt(2)`, `9/7`, `cbrt(3)` or `pi`.
//
// # Safety
// `literal` must be a NUL-terminated string; `out` must be writable.
enum FgStatus fg_value_parse(const char *literal, struct FgValue **out);

// # Safety
// `v` must be null or a handle from `fg_value_parse` not yet freed.
void fg_value_free(struct FgValue *v);

// Exact form of the value (`9/7`, `(1+sqrt(5))/2`, `inf`) or the name of
// a certified constant.
//
// # Safety
// `v` must be a live handle; `out` must be writable.
enum FgStatus fg_value_to_string(const struct FgValue *v, char **out);

// Steps `0..=steps` of the orbit at `bits` bits of working precision.
//
// # Safety
// `v` must be a live handle; `out` must be writable.
enum FgStatus fg_orbit(const struct FgValue *v, size_t steps, uint32_t bits, struct FgOrbit **out);

// # Safety
// `o` must be null or a handle from `fg_orbit` not yet freed.
void fg_orbit_free(struct FgOrbit *o);

// Number of rows, or 0 for a null handle.
//
// # Safety
// `o` must be null or a live handle.
size_t fg_orbit_len(const struct FgOrbit *o);

// Symbol digit (0, 2 or 4) of row `i`, or -1 when out of range.
//
// # Safety
// `o` must be null or a live handle.
int32_t fg_orbit_symbol(const struct FgOrbit *o, size_t i);

// Decimal value of row `i` with `digits` significant digits; only certified
// digits are printed.
//
// # Safety
// `o` must be a live handle; `out` must be writable.
enum FgStatus fg_orbit_value(const struct FgOrbit *o, size_t i, size_t digits, char **out);

// The first `len` itinerary symbols, in the text form `402204...`,
// `40222044` + `0...`, or `(402204)*`.
//
// # Safety
// `v` must be a live handle; `out` must be writable.
enum FgStatus fg_itinerary(const struct FgValue *v, size_t len, uint32_t bits, char **out);

// At most `terms` minus continued fraction terms, as `[a0; a1 : ...]`.
//
// # Safety
// `v` must be a live handle; `out` must be writable.
enum FgStatus fg_cf(const struct FgValue *v, size_t terms, uint32_t bits, char **out);

// Decodes an itinerary (`(402204)*`) or a continued fraction
// (`[1; (-2 : 2)*]`). Writes the continued fraction and, when the input
// determines one, the exact value; otherwise `*value_out` is null.
//
// # Safety
// `input` must be a NUL-terminated string; both outputs must be writable.
enum FgStatus fg_decode(const char *input, char **cf_out, char **value_out);

#ifdef __cplusplus
}  // extern "C"
#endif  // __cplusplus

#endif  /* FGAMMA_H */
