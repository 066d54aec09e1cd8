#ifndef SLICSIM_H
#define SLICSIM_H

/* Generated by cbindgen from crates/ffi/src/lib.rs; do not edit. */

#include <stdarg.h>
#include <stdbool.h>
#include <stdint.h>
#include <stdlib.h>

/*
 Result code of every fallible call.
 */
typedef enum SlicStatus {
  SLIC_STATUS_OK = 0,
  SLIC_STATUS_NULL_POINTER = 1,
  SLIC_STATUS_INVALID_ARGUMENT = 2,
  SLIC_STATUS_PARSE = 3,
  SLIC_STATUS_NUMERIC = 4,
  SLIC_STATUS_IO = 5,
  SLIC_STATUS_PANIC = 6,
} SlicStatus;

typedef struct SlicMap SlicMap;

typedef struct SlicSequence SlicSequence;

typedef struct SlicSystem SlicSystem;

#ifdef __cplusplus
extern "C" {
#endif // __cplusplus

/*
 Message for the last failed call on this thread, or NULL. The pointer
 stays valid until the next failing call on the same thread.
 */
const char *slicsim_last_error(void);

/*
 Homonuclear pair with coupling `j_hz` and shift difference `delta_hz`.

 # Safety
 `out` must be a valid pointer to writable storage.
 */
enum SlicStatus slicsim_system_ab(double j_hz, double delta_hz, struct SlicSystem **out);

/*
 System from TOML text (`num_spins`, `channels`, `offsets_hz`, `j_hz`).

 # Safety
 `toml` must be a NUL-terminated string; `out` must be writable.
 */
enum SlicStatus slicsim_system_from_toml(const char *toml, struct SlicSystem **out);

/*
 # Safety
 `sys` must come from a `slicsim_system_*` constructor or be NULL.
 */
void slicsim_system_free(struct SlicSystem *sys);

/*
 # Safety
 `out` must be writable.
 */
enum SlicStatus slicsim_sequence_slic(double j_hz,
                                      double duration_s,
                                      double phase_rad,
                                      struct SlicSequence **out);

/*
 # Safety
 `out` must be writable.
 */
enum SlicStatus slicsim_sequence_adslic(double j_hz,
                                        double delta_max,
                                        double xi,
                                        double duration_s,
                                        uintptr_t samples,
                                        struct SlicSequence **out);

/*
 `n_reps` cSLIC elements; the strong amplitude follows from α.

 # Safety
 `out` must be writable.
 */
enum SlicStatus slicsim_sequence_cslic(double j_hz,
                                       double alpha,
                                       uint32_t n_reps,
                                       struct SlicSequence **out);

/*
 Cycle string over `A`, `B`, `C1`–`C3`, `S1`–`S3`.

 # Safety
 `text` must be NUL-terminated; `out` must be writable.
 */
enum SlicStatus slicsim_sequence_parse(const char *text,
                                       double weak_nut_hz,
                                       double strong_nut_hz,
                                       double alpha,
                                       struct SlicSequence **out);

/*
 # Safety
 `seq` must be a live handle; `out` must be writable.
 */
enum SlicStatus slicsim_sequence_duration(const struct SlicSequence *seq, double *out);

/*
 # Safety
 `seq` must be a live handle; `out` must be writable.
 */
enum SlicStatus slicsim_sequence_len(const struct SlicSequence *seq, uintptr_t *out);

/*
 # Safety
 `seq` must come from a `slicsim_sequence_*` constructor or be NULL.
 */
void slicsim_sequence_free(struct SlicSequence *seq);

/*
 Excited-magnetization to singlet-order amplitude of spins 1 and 2 at
 resonance offset `offset_hz` and rf error `eps_rf`.

 # Safety
 `sys` and `seq` must be live handles; `out` must be writable.
 */
enum SlicStatus slicsim_transfer_amplitude(const struct SlicSystem *sys,
                                           const struct SlicSequence *seq,
                                           double offset_hz,
                                           double eps_rf,
                                           double *out);

/*
 Transfer map on evenly spaced offset and ε axes.

 # Safety
 `sys` and `seq` must be live handles; `out` must be writable.
 */
enum SlicStatus slicsim_map_sweep(const struct SlicSystem *sys,
                                  const struct SlicSequence *seq,
                                  double offset_start_hz,
                                  double offset_stop_hz,
                                  uintptr_t offset_points,
                                  double eps_start,
                                  double eps_stop,
                                  uintptr_t eps_points,
                                  struct SlicMap **out);

/*
 # Safety
 `map` must be a live handle; the out pointers must be writable.
 */
enum SlicStatus slicsim_map_dims(const struct SlicMap *map,
                                 uintptr_t *offset_points,
                                 uintptr_t *eps_points);

/*
 Copies the amplitudes (ε-major, offset fastest) into `buf`, which must
 hold exactly `offset_points * eps_points` values.

 # Safety
 `map` must be a live handle; `buf` must point to `len` writable doubles.
 */
enum SlicStatus slicsim_map_values(const struct SlicMap *map, double *buf, uintptr_t len);

/*
 Writes `offset_hz,eps_rf,amplitude` CSV.

 # Safety
 `map` must be a live handle; `path` must be NUL-terminated.
 */
enum SlicStatus slicsim_map_write_csv(const struct SlicMap *map, const char *path);

/*
 # Safety
 `map` must come from `slicsim_map_sweep` or be NULL.
 */
void slicsim_map_free(struct SlicMap *map);

/*
 round(J / (√2 |Δ|)), at least 1.

 # Safety
 `out` must be writable.
 */
enum SlicStatus slicsim_optimal_repetitions(double j_hz, double delta_hz, uint32_t *out);

/*
 Closed-form SLIC response at the nominal duration (ω in rad/s).
 */
double slicsim_xi_slic_nominal(double rabi_rad, double resonance_rad, double eps_rf);

/*
 Closed-form cSLIC response at the nominal duration.
 */
double slicsim_xi_cslic_nominal(double rabi_rad, double eps_rf);

#ifdef __cplusplus
}  // extern "C"
#endif  // __cplusplus

#endif  /* SLICSIM_H */
