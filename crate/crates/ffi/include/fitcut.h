/* SPDX-License-Identifier: Apache-2.0 */

#ifndef FITCUT_H
#define FITCUT_H

/* Generated by cbindgen from crates/ffi/src/lib.rs. Do not edit. */

#include <stdarg.h>
#include <stdbool.h>
#include <stddef.h>
#include <stdint.h>
#include <stdlib.h>

typedef enum FitcutStatus {
  FITCUT_STATUS_OK = 0,
  FITCUT_STATUS_NULL_POINTER = 1,
  FITCUT_STATUS_INVALID_UTF8 = 2,
  FITCUT_STATUS_PARSE = 3,
  FITCUT_STATUS_INVALID_CIRCUIT = 4,
  FITCUT_STATUS_INVALID_POOL = 5,
  FITCUT_STATUS_INVALID_ARGUMENT = 6,
  FITCUT_STATUS_UNSCHEDULABLE = 7,
  FITCUT_STATUS_PANIC = 8,
} FitcutStatus;

typedef struct FitcutCircuit FitcutCircuit;

typedef struct FitcutPlan FitcutPlan;

typedef struct FitcutPool FitcutPool;

#ifdef __cplusplus
extern "C" {
#endif // __cplusplus

// Message of the last failed call on this thread, or null. The pointer is
// valid until the next failing call on the same thread.
const char *fitcut_last_error(void);

// Library version as a static NUL-terminated string.
const char *fitcut_version(void);

// Parses a circuit in the text format.
//
// # Safety
// `text` must be a NUL-terminated string and `out` a writable pointer.
enum FitcutStatus fitcut_circuit_parse(const char *text, struct FitcutCircuit **out);

// Bernstein-Vazirani on `qubits` qubits. `secret` is `ones`, `zeros` or a
// bitstring; null means `ones`.
//
// # Safety
// `secret` must be null or NUL-terminated; `out` must be writable.
enum FitcutStatus fitcut_circuit_bv(size_t qubits, const char *secret, struct FitcutCircuit **out);

// Ripple-carry adder on an even number of qubits.
//
// # Safety
// `out` must be writable.
enum FitcutStatus fitcut_circuit_adder(size_t qubits, struct FitcutCircuit **out);

// Hardware-efficient ansatz with `layers` entangling layers.
//
// # Safety
// `out` must be writable.
enum FitcutStatus fitcut_circuit_hwea(size_t qubits, size_t layers, struct FitcutCircuit **out);

// Seeded `rows x cols` supremacy-style random circuit.
//
// # Safety
// `out` must be writable.
enum FitcutStatus fitcut_circuit_supremacy(size_t rows,
                                           size_t cols,
                                           size_t depth,
                                           uint64_t seed,
                                           struct FitcutCircuit **out);

// Number of qubits, or 0 for a null handle.
//
// # Safety
// `circuit` must be null or a live handle.
size_t fitcut_circuit_num_qubits(const struct FitcutCircuit *circuit);

// Number of two-qubit gates, or 0 for a null handle.
//
// # Safety
// `circuit` must be null or a live handle.
size_t fitcut_circuit_two_qubit_count(const struct FitcutCircuit *circuit);

// The circuit in the text format, to be released with
// [`fitcut_string_free`].
//
// # Safety
// `circuit` must be a live handle and `out` writable.
enum FitcutStatus fitcut_circuit_to_text(const struct FitcutCircuit *circuit, char **out);

// # Safety
// `circuit` must be null or a handle not yet freed.
void fitcut_circuit_free(struct FitcutCircuit *circuit);

// Worker pool from JSON: a list of `{"id", "capacity"}` objects or an
// object with a `workers` list.
//
// # Safety
// `json` must be NUL-terminated and `out` writable.
enum FitcutStatus fitcut_pool_from_json(const char *json, struct FitcutPool **out);

// Worker pool named `W1..Wn` from `len` capacities.
//
// # Safety
// `capacities` must point to `len` readable values and `out` be writable.
enum FitcutStatus fitcut_pool_from_capacities(const uint32_t *capacities,
                                              size_t len,
                                              struct FitcutPool **out);

// # Safety
// `pool` must be null or a handle not yet freed.
void fitcut_pool_free(struct FitcutPool *pool);

// Runs the cut search for seeds `seed..seed + runs` on up to `jobs`
// threads (0 means one) and keeps the best plan.
//
// # Safety
// `circuit` and `pool` must be live handles and `out` writable.
enum FitcutStatus fitcut_cut(const struct FitcutCircuit *circuit,
                             const struct FitcutPool *pool,
                             uint64_t seed,
                             size_t runs,
                             size_t jobs,
                             struct FitcutPlan **out);

// Number of wire cuts in the plan, or -1 for a null handle.
//
// # Safety
// `plan` must be null or a live handle.
int64_t fitcut_plan_num_cuts(const struct FitcutPlan *plan);

// Idle qubit slots of the plan's schedule, or 0 for a null handle.
//
// # Safety
// `plan` must be null or a live handle.
uint64_t fitcut_plan_idle_qubits(const struct FitcutPlan *plan);

// Number of subcircuits, or 0 for a null handle.
//
// # Safety
// `plan` must be null or a live handle.
size_t fitcut_plan_num_subcircuits(const struct FitcutPlan *plan);

// Copies up to `len` subcircuit widths into `widths` and returns the total
// number of subcircuits.
//
// # Safety
// `plan` must be a live handle; `widths` must be null or point to `len`
// writable values.
size_t fitcut_plan_widths(const struct FitcutPlan *plan, uint32_t *widths, size_t len);

// The plan as JSON, to be released with [`fitcut_string_free`].
//
// # Safety
// `plan` must be a live handle and `out` writable.
enum FitcutStatus fitcut_plan_to_json(const struct FitcutPlan *plan, char **out);

// # Safety
// `plan` must be null or a handle not yet freed.
void fitcut_plan_free(struct FitcutPlan *plan);

// Releases a string returned by this library.
//
// # Safety
// `s` must be null or a string from this library not yet freed.
void fitcut_string_free(char *s);

#ifdef __cplusplus
} // extern "C"
#endif // __cplusplus

#endif /* FITCUT_H */
