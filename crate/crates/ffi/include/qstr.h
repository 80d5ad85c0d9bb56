#ifndef QSTR_H
#define QSTR_H

/* Generated by cbindgen from crates/ffi/src/lib.rs. Do not edit. */

#include <stdarg.h>
#include <stdbool.h>
#include <stddef.h>
#include <stdint.h>
#include <stdlib.h>

typedef enum QstrMethod {
  QSTR_METHOD_PC = 0,
  QSTR_METHOD_PPC,
  QSTR_METHOD_VE,
  QSTR_METHOD_BACKTRACK,
} QstrMethod;

typedef enum QstrStatus {
  QSTR_STATUS_OK = 0,
  QSTR_STATUS_NULL_POINTER,
  QSTR_STATUS_INVALID_UTF8,
  /**
   * Unknown calculus, atom or subalgebra name.
   */
  QSTR_STATUS_UNKNOWN_NAME,
  QSTR_STATUS_PARSE,
  QSTR_STATUS_OUT_OF_RANGE,
  QSTR_STATUS_INVALID_ARGUMENT,
  QSTR_STATUS_UNSUPPORTED,
  /**
   * A closure cap or enumeration guard was hit.
   */
  QSTR_STATUS_LIMIT_EXCEEDED,
  QSTR_STATUS_FAILURE,
  /**
   * A Rust panic was caught at the boundary.
   */
  QSTR_STATUS_PANIC,
} QstrStatus;

typedef enum QstrVerdict {
  QSTR_VERDICT_INCONSISTENT = 0,
  QSTR_VERDICT_CONSISTENT = 1,
} QstrVerdict;

/**
 * A qualitative calculus.
 */
typedef struct QstrCalculus QstrCalculus;

/**
 * A constraint network over one calculus.
 */
typedef struct QstrNetwork QstrNetwork;

#ifdef __cplusplus
extern "C" {
#endif // __cplusplus

/**
 * Message of the last failed call on this thread, or NULL after a
 * successful one. Valid until the next call into the library.
 */
const char *qstr_last_error(void);

/**
 * Library version as a static string.
 */
const char *qstr_version(void);

/**
 * # Safety
 * `s` must be NULL or a string returned by this library, freed once.
 */
void qstr_string_free(char *s);

/**
 * Looks up a built-in calculus: PA, IA, RCC5, RCC8, CRA or RA.
 *
 * # Safety
 * `name` must be a valid C string and `out` writable.
 */
enum QstrStatus qstr_calculus_new(const char *name, struct QstrCalculus **out);

/**
 * # Safety
 * `calc` must be NULL or a handle from [`qstr_calculus_new`], freed once.
 */
void qstr_calculus_free(struct QstrCalculus *calc);

/**
 * Number of atoms, or 0 for NULL.
 *
 * # Safety
 * `calc` must be NULL or a live handle.
 */
size_t qstr_calculus_atom_count(const struct QstrCalculus *calc);

/**
 * Counts the maximal distributive subalgebras.
 *
 * # Safety
 * `calc` must be a live handle and `out` writable.
 */
enum QstrStatus qstr_maximal_subalgebra_count(const struct QstrCalculus *calc, size_t *out);

/**
 * A network of `n` variables with every constraint universal.
 *
 * # Safety
 * `calc` must be a live handle and `out` writable.
 */
enum QstrStatus qstr_network_new(const struct QstrCalculus *calc,
                                 size_t n,
                                 struct QstrNetwork **out);

/**
 * Parses the textual network format.
 *
 * # Safety
 * `src` must be a valid C string and `out` writable.
 */
enum QstrStatus qstr_network_parse(const char *src, struct QstrNetwork **out);

/**
 * A random network over a named label pool, as produced by `qstr gen`.
 *
 * # Safety
 * `calc` must be a live handle, `pool` a valid C string, `out` writable.
 */
enum QstrStatus qstr_network_random(const struct QstrCalculus *calc,
                                    size_t n,
                                    double density,
                                    const char *pool,
                                    uint64_t seed,
                                    struct QstrNetwork **out);

/**
 * # Safety
 * `net` must be NULL or a network handle from this library, freed once.
 */
void qstr_network_free(struct QstrNetwork *net);

/**
 * Number of variables, or 0 for NULL.
 *
 * # Safety
 * `net` must be NULL or a live handle.
 */
size_t qstr_network_size(const struct QstrNetwork *net);

/**
 * Sets the constraint between `i` and `j` (and its converse) from a
 * space-separated atom list; an empty list is the empty relation.
 *
 * # Safety
 * `net` must be a live handle and `atoms` a valid C string.
 */
enum QstrStatus qstr_network_set(struct QstrNetwork *net, size_t i, size_t j, const char *atoms);

/**
 * The constraint between `i` and `j` as a space-separated atom list.
 * Release with [`qstr_string_free`].
 *
 * # Safety
 * `net` must be a live handle and `out` writable.
 */
enum QstrStatus qstr_network_get(const struct QstrNetwork *net, size_t i, size_t j, char **out);

/**
 * The network in the textual format. Release with [`qstr_string_free`].
 *
 * # Safety
 * `net` must be a live handle and `out` writable.
 */
enum QstrStatus qstr_network_to_text(const struct QstrNetwork *net, char **out);

/**
 * Decides consistency. When `refined` is not NULL it receives the refined
 * network, or NULL if the network is inconsistent.
 *
 * # Safety
 * `net` must be a live handle, `verdict` writable, `refined` NULL or
 * writable.
 */
enum QstrStatus qstr_network_solve(const struct QstrNetwork *net,
                                   enum QstrMethod method,
                                   enum QstrVerdict *verdict,
                                   struct QstrNetwork **refined);

/**
 * Finds one scenario. With a `subalgebra` name and all path-consistent
 * entries inside it, the scenario is built directly; otherwise by search.
 * `scenario` receives NULL when the network is inconsistent.
 *
 * # Safety
 * `net` must be a live handle, `subalgebra` NULL or a valid C string,
 * `verdict` and `scenario` writable.
 */
enum QstrStatus qstr_network_scenario(const struct QstrNetwork *net,
                                      const char *subalgebra,
                                      enum QstrVerdict *verdict,
                                      struct QstrNetwork **scenario);

#ifdef __cplusplus
}  // extern "C"
#endif  // __cplusplus

#endif  /* QSTR_H */
