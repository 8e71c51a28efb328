#ifndef GOLOG_SYNTH_H
#define GOLOG_SYNTH_H

#include <stdarg.h>
#include <stdbool.h>
#include <stddef.h>
#include <stdint.h>
#include <stdlib.h>

typedef enum GsStatus {
  GS_STATUS_OK = 0,
  /**
   * No controller exists.
   */
  GS_STATUS_UNREALIZABLE = 1,
  /**
   * Malformed or inconsistent input.
   */
  GS_STATUS_INVALID_INPUT = 2,
  /**
   * A node budget or expansion bound was exhausted.
   */
  GS_STATUS_RESOURCE_EXHAUSTED = 3,
  GS_STATUS_NULL_POINTER = 4,
  /**
   * A controller failed validation.
   */
  GS_STATUS_VALIDATION_FAILED = 5,
  GS_STATUS_INTERNAL = 6,
} GsStatus;

typedef struct GsAutomaton GsAutomaton;

/**
 * A loaded project: theory, program, constraints and platform models.
 */
typedef struct GsBundle GsBundle;

#ifdef __cplusplus
extern "C" {
#endif // __cplusplus

/**
 * Message of the last failed call on this thread, or null. Valid until the
 * next call into the library on the same thread.
 */
const char *gs_last_error(void);

/**
 * Loads every project file found in `dir`.
 *
 * # Safety
 * `dir` must be a valid C string and `out` a valid pointer.
 */
enum GsStatus gs_bundle_load(const char *dir, struct GsBundle **out);

/**
 * # Safety
 * `b` must come from [`gs_bundle_load`] and not be used afterwards.
 */
void gs_bundle_free(struct GsBundle *b);

/**
 * Program automaton of the project's program.
 *
 * # Safety
 * `b` must be a live bundle handle and `out` a valid pointer.
 */
enum GsStatus gs_compile(const struct GsBundle *b, size_t max_expansions, struct GsAutomaton **out);

/**
 * Plant of the project: the program automaton combined with the platform.
 *
 * # Safety
 * `b` must be a live bundle handle and `out` a valid pointer.
 */
enum GsStatus gs_plant(const struct GsBundle *b, size_t max_expansions, struct GsAutomaton **out);

/**
 * Synthesizes a controller for the project's plant and constraints.
 * With `m == 0` the granularity is derived from the constants. Returns
 * `Unrealizable` and leaves `*out` untouched when no controller exists.
 *
 * # Safety
 * `b` must be a live bundle handle and `out` a valid pointer.
 */
enum GsStatus gs_synthesize(const struct GsBundle *b,
                            uint32_t m,
                            uint32_t k,
                            size_t node_budget,
                            struct GsAutomaton **out);

/**
 * Checks a controller against the project's plant and constraints on all
 * closed-loop words of at most `bound` letters.
 *
 * # Safety
 * `b` and `controller` must be live handles.
 */
enum GsStatus gs_verify(const struct GsBundle *b,
                        const struct GsAutomaton *controller,
                        size_t bound);

/**
 * Parses an automaton from its JSON form.
 *
 * # Safety
 * `json` must be a valid C string and `out` a valid pointer.
 */
enum GsStatus gs_automaton_from_json(const char *json, struct GsAutomaton **out);

/**
 * JSON form of an automaton; release with [`gs_string_free`].
 *
 * # Safety
 * `a` must be a live automaton handle.
 */
char *gs_automaton_to_json(const struct GsAutomaton *a);

/**
 * Graphviz form of an automaton; release with [`gs_string_free`].
 *
 * # Safety
 * `a` must be a live automaton handle and `name` a valid C string or null.
 */
char *gs_automaton_to_dot(const struct GsAutomaton *a, const char *name);

/**
 * Number of locations of an automaton, or 0 for null.
 *
 * # Safety
 * `a` must be a live automaton handle or null.
 */
size_t gs_automaton_location_count(const struct GsAutomaton *a);

/**
 * # Safety
 * `a` must come from this library and not be used afterwards.
 */
void gs_automaton_free(struct GsAutomaton *a);

/**
 * # Safety
 * `s` must be a string returned by this library and not be used afterwards.
 */
void gs_string_free(char *s);

#ifdef __cplusplus
}  // extern "C"
#endif  // __cplusplus

#endif  /* GOLOG_SYNTH_H */
