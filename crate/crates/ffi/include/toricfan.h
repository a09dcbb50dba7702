#ifndef TORICFAN_H
#define TORICFAN_H

#include <stdarg.h>
#include <stdbool.h>
#include <stddef.h>
#include <stdint.h>
#include <stdlib.h>

typedef enum TfStatus {
  TF_STATUS_OK = 0,
  TF_STATUS_NULL_POINTER = 1,
  TF_STATUS_INVALID_UTF8 = 2,
  TF_STATUS_PARSE = 3,
  // Cones overlap, contain a line or have the wrong length.
  TF_STATUS_INVALID_FAN = 4,
  // The fan lacks a property the operation needs (complete, simplicial, ...).
  TF_STATUS_PRECONDITION = 5,
  // A check-style command ran and its check failed; the report is still returned.
  TF_STATUS_CHECK_FAILED = 6,
  TF_STATUS_BUFFER_TOO_SMALL = 7,
  TF_STATUS_INTERNAL = 8,
} TfStatus;

// Opaque fan handle.
typedef struct TfFan TfFan;

#ifdef __cplusplus
extern "C" {
#endif // __cplusplus

// Parses a fan file given as a JSON string. On success `*out` owns a new handle.
//
// # Safety
// `json` must be a NUL-terminated string and `out` a valid pointer.
enum TfStatus tf_fan_from_json(const char *json, struct TfFan **out);

// Releases a handle. Null is ignored.
//
// # Safety
// `fan` must come from [`tf_fan_from_json`] and not be used afterwards.
void tf_fan_free(struct TfFan *fan);

// # Safety
// `fan` must be a live handle and `out` a valid pointer.
enum TfStatus tf_fan_ambient_rank(const struct TfFan *fan, size_t *out);

// Number of cones, including the zero cone.
//
// # Safety
// `fan` must be a live handle and `out` a valid pointer.
enum TfStatus tf_fan_cone_count(const struct TfFan *fan, size_t *out);

// # Safety
// `fan` must be a live handle and `out` a valid pointer.
enum TfStatus tf_fan_is_complete(const struct TfFan *fan, bool *out);

// Writes the ranks of piecewise polynomials for degrees `0..=max_degree`
// into `out`, which must hold `max_degree + 1` entries.
//
// # Safety
// `fan` must be a live handle and `out` must point to `out_len` writable values.
enum TfStatus tf_fan_hilbert(const struct TfFan *fan,
                             uint32_t max_degree,
                             uint64_t *out,
                             size_t out_len);

// Runs a command given as JSON, e.g. `{"command":"hilbert","max_degree":3}`,
// and stores the JSON report in `*out_json`. The report is also returned
// when the status is `CheckFailed`.
//
// # Safety
// `fan` must be a live handle, `command` a NUL-terminated string and
// `out_json` a valid pointer.
enum TfStatus tf_fan_run_command(const struct TfFan *fan, const char *command, char **out_json);

// Releases a string returned by this library. Null is ignored.
//
// # Safety
// `s` must come from this library and not be used afterwards.
void tf_string_free(char *s);

// Message of the last failure on this thread, or null. The pointer stays
// valid until the next failing call on the same thread.
const char *tf_last_error_message(void);

#ifdef __cplusplus
}  // extern "C"
#endif  // __cplusplus

#endif  /* TORICFAN_H */
