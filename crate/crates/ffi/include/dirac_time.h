#ifndef DIRAC_TIME_H
#define DIRAC_TIME_H

/* Generated by cbindgen from crates/ffi/src/lib.rs; do not edit. */

#include <stdbool.h>
#include <stddef.h>
#include <stdint.h>

typedef enum DtBranch {
  DT_BRANCH_PLUS = 0,
  DT_BRANCH_MINUS = 1,
  // Both branches; the negative one carries weight `mix_weight`.
  DT_BRANCH_MIXED = 2,
} DtBranch;

typedef enum DtStatus {
  DT_STATUS_OK = 0,
  DT_STATUS_NULL_POINTER = 1,
  DT_STATUS_VALIDATION = 2,
  DT_STATUS_LOCALIZATION = 3,
  DT_STATUS_SINGULAR_PROJECTOR = 4,
  DT_STATUS_RUNTIME = 5,
  DT_STATUS_BUFFER_TOO_SMALL = 6,
  DT_STATUS_PANIC = 7,
} DtStatus;

// Opaque spinor field in the momentum representation.
typedef struct DtField DtField;

// Opaque momentum grid.
typedef struct DtGrid DtGrid;

typedef struct DtPacketSpec {
  double p_center[3];
  double sigma_p[3];
  double r_center[3];
  enum DtBranch branch;
  double mix_weight;
  double spin_axis[3];
  // +1 or −1.
  double spin_sign;
} DtPacketSpec;

typedef struct DtModelParams {
  double m0;
  double tau0;
  double q;
} DtModelParams;

typedef struct DtUncertainty {
  double delta_t;
  double delta_h;
  double product;
  // `½|⟨[T, H]⟩|`
  double robertson_bound;
  // `½|⟨3 + 2Σ·L⟩|`
  double spin_orbit_bound;
  bool robertson_ok;
  bool spin_orbit_ok;
} DtUncertainty;

// Eigen-system of `T` at the point `r ẑ`. Row `k` of `spinor_re`/`spinor_im`
// is the eigenvector with eigenvalue `tau[k]` and `Σ_z/2` value `spin[k]`.
typedef struct DtTimeEigensystem {
  double tau_r;
  double normalization;
  double tau[4];
  double spin[4];
  double spinor_re[4][4];
  double spinor_im[4][4];
} DtTimeEigensystem;

// Copies the last error message of this thread into `buf` (NUL-terminated,
// truncated to `len`). Returns the full message length excluding the NUL,
// or 0 if no error has been recorded.
uintptr_t dt_last_error_message(char *buf, uintptr_t len);

void dt_clear_last_error(void);

// Library version as a static NUL-terminated string.
const char *dt_version(void);

// Cubic grid with `n` nodes per axis covering `[-p_max, p_max)`.
enum DtStatus dt_grid_new(uintptr_t n, double p_max, struct DtGrid **out_grid);

enum DtStatus dt_grid_new_anisotropic(const uintptr_t *n,
                                      const double *p_max,
                                      struct DtGrid **out_grid);

// Smallest power-of-two grid on which the packet stays localized up to
// time `t_max`.
enum DtStatus dt_grid_plan(const struct DtPacketSpec *spec,
                           const struct DtModelParams *params,
                           double t_max,
                           uintptr_t min_n,
                           struct DtGrid **out_grid);

// Writes nodes per axis and the momentum half-extent per axis.
enum DtStatus dt_grid_shape(const struct DtGrid *grid, uintptr_t *n, double *p_max);

void dt_grid_free(struct DtGrid *grid);

// Gaussian packet projected onto the requested energy branch(es),
// normalized.
enum DtStatus dt_field_gaussian(const struct DtGrid *grid,
                                const struct DtPacketSpec *spec,
                                const struct DtModelParams *params,
                                struct DtField **out_field);

enum DtStatus dt_field_clone(const struct DtField *field, struct DtField **out_field);

void dt_field_free(struct DtField *field);

// Number of grid nodes; the field holds four complex components per node.
uintptr_t dt_field_len(const struct DtField *field);

enum DtStatus dt_field_norm_sqr(const struct DtField *field, double *out_value);

// Copies the momentum amplitudes into `re`/`im`, each of length
// `4 * dt_field_len`, node-major with the spinor component fastest.
enum DtStatus dt_field_copy_amplitudes(const struct DtField *field,
                                       double *re,
                                       double *im,
                                       uintptr_t len);

// Free evolution by time `t` into a new field.
enum DtStatus dt_evolve_free(const struct DtField *field,
                             double t,
                             const struct DtModelParams *params,
                             struct DtField **out_field);

// `⟨T⟩` for the current state.
enum DtStatus dt_expect_time_operator(const struct DtField *field,
                                      const struct DtModelParams *params,
                                      double *out_value);

enum DtStatus dt_expect_hamiltonian(const struct DtField *field,
                                    const struct DtModelParams *params,
                                    double *out_value);

// `⟨ψ₀|T(t)|ψ₀⟩` from the closed-form Heisenberg operator.
enum DtStatus dt_heisenberg_time(const struct DtField *field,
                                 double t,
                                 const struct DtModelParams *params,
                                 double *out_value);

enum DtStatus dt_uncertainty(const struct DtField *field,
                             const struct DtModelParams *params,
                             struct DtUncertainty *out_report);

// Weight of the positive-energy branch, in `[0, 1]`.
enum DtStatus dt_branch_purity(const struct DtField *field,
                               const struct DtModelParams *params,
                               double *out_value);

// Applies `exp(−iεT)` into a new field.
enum DtStatus dt_momentum_shift(const struct DtField *field,
                                double epsilon,
                                const struct DtModelParams *params,
                                struct DtField **out_field);

enum DtStatus dt_time_eigensystem(double r,
                                  const struct DtModelParams *params,
                                  struct DtTimeEigensystem *out_system);

#endif /* DIRAC_TIME_H */
