/* Generated by cbindgen from crates/ffi/src/lib.rs; do not edit. */

#ifndef EQUIVARIUM_H
#define EQUIVARIUM_H

#include <stdbool.h>
#include <stddef.h>
#include <stdint.h>

/**
 * Status codes; 1–3 match the command-line exit codes.
 */
typedef enum EqvStatus {
  EQV_STATUS_OK = 0,
  EQV_STATUS_VERIFICATION_FAILED = 1,
  EQV_STATUS_INVALID_INPUT = 2,
  EQV_STATUS_SIZE_GUARD = 3,
  EQV_STATUS_NULL_POINTER = 4,
  EQV_STATUS_INTERNAL = 5,
} EqvStatus;

/**
 * The G-category `C X` of a presheaf on the orbit category.
 */
typedef struct EqvElmendorfCat EqvElmendorfCat;

/**
 * A finite group.
 */
typedef struct EqvGroup EqvGroup;

/**
 * The orbit category of a group.
 */
typedef struct EqvOrbitCategory EqvOrbitCategory;

#ifdef __cplusplus
extern "C" {
#endif // __cplusplus

/**
 * Message for the last failed call on this thread; empty after a success.
 * The pointer stays valid until the next call on this thread.
 */
const char *eqv_last_error(void);

/**
 * Library version as a static string.
 */
const char *eqv_version(void);

/**
 * Releases a string returned by this library. `NULL` is ignored.
 *
 * # Safety
 * `s` must come from this library and not have been freed.
 */
void eqv_string_free(char *s);

/**
 * A group from a key (`C4`, `D3`, `S3`) or a path to a group JSON file.
 *
 * # Safety
 * `key` must be a NUL-terminated string; `out` must be writable.
 */
enum EqvStatus eqv_group_new(const char *key, struct EqvGroup **out);

/**
 * A group from JSON text `{"name": ..., "order": n, "mult": [[...]]}`.
 *
 * # Safety
 * `json` must be a NUL-terminated string; `out` must be writable.
 */
enum EqvStatus eqv_group_from_json(const char *json, struct EqvGroup **out);

/**
 * Order of the group, or 0 for `NULL`.
 *
 * # Safety
 * `g` must be `NULL` or a live handle.
 */
size_t eqv_group_order(const struct EqvGroup *g);

/**
 * # Safety
 * `g` must be `NULL` or a live handle, which is invalid afterwards.
 */
void eqv_group_free(struct EqvGroup *g);

/**
 * # Safety
 * `g` must be a live handle; `out` must be writable.
 */
enum EqvStatus eqv_orbit_category_new(const struct EqvGroup *g, struct EqvOrbitCategory **out);

/**
 * Number of subgroups (objects `G/H`), or 0 for `NULL`.
 *
 * # Safety
 * `o` must be `NULL` or a live handle.
 */
size_t eqv_orbit_category_num_objects(const struct EqvOrbitCategory *o);

/**
 * Number of `G`-maps between coset spaces, or 0 for `NULL`.
 *
 * # Safety
 * `o` must be `NULL` or a live handle.
 */
size_t eqv_orbit_category_num_morphisms(const struct EqvOrbitCategory *o);

/**
 * # Safety
 * `o` must be `NULL` or a live handle, which is invalid afterwards.
 */
void eqv_orbit_category_free(struct EqvOrbitCategory *o);

/**
 * Builds `C X` for a presheaf descriptor such as `family:e` or `constant:chain2`.
 *
 * # Safety
 * `o` must be a live handle, `presheaf` a NUL-terminated string, `out` writable.
 */
enum EqvStatus eqv_c_cat_new(const struct EqvOrbitCategory *o,
                             const char *presheaf,
                             struct EqvElmendorfCat **out);

/**
 * # Safety
 * `c` must be `NULL` or a live handle.
 */
size_t eqv_c_cat_num_objects(const struct EqvElmendorfCat *c);

/**
 * # Safety
 * `c` must be `NULL` or a live handle.
 */
size_t eqv_c_cat_num_morphisms(const struct EqvElmendorfCat *c);

/**
 * Whether `C X` is a preorder; false for `NULL`.
 *
 * # Safety
 * `c` must be `NULL` or a live handle.
 */
bool eqv_c_cat_is_thin(const struct EqvElmendorfCat *c);

/**
 * Category JSON plus the action table.
 *
 * # Safety
 * `c` must be a live handle; `out` must be writable.
 */
enum EqvStatus eqv_c_cat_to_json(const struct EqvElmendorfCat *c, char **out);

/**
 * # Safety
 * `c` must be `NULL` or a live handle, which is invalid afterwards.
 */
void eqv_c_cat_free(struct EqvElmendorfCat *c);

/**
 * Builds an artifact (`orbit-cat`, `marked-orbit-cat`, `c-cat`, `c-pos`,
 * `milnor`, `quotient`, `nerve`, `hocolim`) as JSON. `presheaf` may be
 * `NULL` for `family:e`.
 *
 * # Safety
 * `g` must be a live handle, strings NUL-terminated, `out` writable.
 */
enum EqvStatus eqv_build(const struct EqvGroup *g,
                         const char *what,
                         const char *presheaf,
                         size_t depth,
                         size_t dim,
                         char **out);

/**
 * Runs a verification suite and writes its JSON report to `out`.
 *
 * `groups` may be `NULL` with `n_groups == 0` for the default corpus;
 * `presheaf` may be `NULL` for each suite's corpus. Returns
 * `VerificationFailed` (with the report still written) when a check fails.
 *
 * # Safety
 * `groups` must point to `n_groups` live handles; strings NUL-terminated; `out` writable.
 */
enum EqvStatus eqv_verify(const char *suite,
                          const struct EqvGroup *const *groups,
                          size_t n_groups,
                          const char *presheaf,
                          size_t depth,
                          size_t dim,
                          char **out);

#ifdef __cplusplus
}  // extern "C"
#endif  // __cplusplus

#endif  /* EQUIVARIUM_H */
