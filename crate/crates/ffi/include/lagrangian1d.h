#ifndef LAGRANGIAN1D_H
#define LAGRANGIAN1D_H

#include <stdarg.h>
#include <stdbool.h>
#include <stddef.h>
#include <stdint.h>
#include <stdlib.h>

typedef enum L1dStatus {
  L1D_STATUS_OK = 0,
  L1D_STATUS_NULL_POINTER = 1,
  // The integration failed (positivity loss, tangling, step collapse).
  L1D_STATUS_SOLVER_FAILURE = 2,
  L1D_STATUS_INVALID_CONFIG = 3,
  L1D_STATUS_BUFFER_TOO_SMALL = 4,
  L1D_STATUS_PANIC = 5,
  L1D_STATUS_IO = 6,
} L1dStatus;

// Opaque simulation handle.
typedef struct L1dSimulation L1dSimulation;

// Conserved totals over the whole domain.
typedef struct L1dTotals {
  double mass;
  double momentum;
  double energy;
} L1dTotals;

#ifdef __cplusplus
extern "C" {
#endif // __cplusplus

// Copies the last error message of this thread into `buf` (NUL
// terminated, truncated to `len`). Returns the full message length
// without the terminator.
//
// # Safety
// `buf` must be null or point to `len` writable bytes.
size_t l1d_last_error_message(char *buf, size_t len);

// Creates a simulation of a named benchmark with default settings.
//
// # Safety
// `problem` and `method` must be NUL-terminated strings, `out` a valid
// pointer. On success `*out` owns a handle to release with
// [`l1d_simulation_free`].
enum L1dStatus l1d_simulation_new(const char *problem,
                                  const char *method,
                                  size_t n_cells,
                                  struct L1dSimulation **out);

// Creates a simulation from TOML run-configuration text.
//
// # Safety
// As for [`l1d_simulation_new`].
enum L1dStatus l1d_simulation_new_from_toml(const char *text, struct L1dSimulation **out);

// # Safety
// `sim` must be null or a handle from `l1d_simulation_new*` not yet freed.
void l1d_simulation_free(struct L1dSimulation *sim);

// Takes one time step that does not pass `t_stop`; the step size goes to
// `dt_out` when it is not null.
//
// # Safety
// `sim` must be a live handle; `dt_out` null or writable.
enum L1dStatus l1d_simulation_step(struct L1dSimulation *sim, double t_stop, double *dt_out);

// Integrates up to time `t`.
//
// # Safety
// `sim` must be a live handle.
enum L1dStatus l1d_simulation_advance_to(struct L1dSimulation *sim, double t);

// Integrates to the configured end time.
//
// # Safety
// `sim` must be a live handle.
enum L1dStatus l1d_simulation_run(struct L1dSimulation *sim);

// Current time, or NaN for a null handle.
//
// # Safety
// `sim` must be null or a live handle.
double l1d_simulation_time(const struct L1dSimulation *sim);

// Number of cells, or 0 for a null handle.
//
// # Safety
// `sim` must be null or a live handle.
size_t l1d_simulation_n_cells(const struct L1dSimulation *sim);

// Steps taken so far, or 0 for a null handle.
//
// # Safety
// `sim` must be null or a live handle.
size_t l1d_simulation_steps(const struct L1dSimulation *sim);

// # Safety
// `sim` must be a live handle, `out` writable.
enum L1dStatus l1d_simulation_totals(const struct L1dSimulation *sim, struct L1dTotals *out);

// Copies a field into `buf`.
//
// Cell fields: `x` (centers), `rho`, `u`, `p`, `eps`, `e_total`. Node
// fields: `node_x`, and `node_u` for staggered runs. `*written` receives
// the field length, also when `buf` is too small.
//
// # Safety
// `sim` must be a live handle, `name` a NUL-terminated string, `buf`
// null or `len` writable doubles, `written` null or writable.
enum L1dStatus l1d_simulation_copy_field(const struct L1dSimulation *sim,
                                         const char *name,
                                         double *buf,
                                         size_t len,
                                         size_t *written);

// Star pressure and velocity of the exact Riemann problem. When the data
// generate vacuum, `*vacuum` is set and both star values are zero.
//
// # Safety
// `p_star` and `u_star` must be writable, `vacuum` null or writable.
enum L1dStatus l1d_riemann_star(double rho_l,
                                double u_l,
                                double p_l,
                                double rho_r,
                                double u_r,
                                double p_r,
                                double gamma,
                                double *p_star,
                                double *u_star,
                                bool *vacuum);

#ifdef __cplusplus
}  // extern "C"
#endif  // __cplusplus

#endif  /* LAGRANGIAN1D_H */
