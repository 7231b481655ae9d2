#ifndef SASC_H
#define SASC_H

#include <stdarg.h>
#include <stdbool.h>
#include <stddef.h>
#include <stdint.h>
#include <stdlib.h>

typedef enum SascAsymmetry {
  // Two-mode models only.
  SASC_ASYMMETRY_AB = 0,
  // Three-mode models only.
  SASC_ASYMMETRY_MB = 1,
  SASC_ASYMMETRY_BC = 2,
} SascAsymmetry;

typedef enum SascConvention {
  SASC_CONVENTION_ALTERNATING = 0,
  SASC_CONVENTION_PHYSICAL = 1,
} SascConvention;

typedef enum SascStatus {
  SASC_STATUS_OK = 0,
  // Null pointer, wrong buffer length or out-of-range index.
  SASC_STATUS_INVALID_ARGUMENT = 1,
  SASC_STATUS_INVALID_PARAMETER = 2,
  SASC_STATUS_UNSTABLE = 3,
  // Asymmetry requested where both transmissions vanish.
  SASC_STATUS_UNDEFINED = 4,
  SASC_STATUS_NUMERICAL = 5,
  SASC_STATUS_PANIC = 6,
} SascStatus;

// Opaque model handle.
typedef struct SascModel SascModel;

// Mode parameters in units of the low-mode frequency, except
// `absolute_frequency` (rad/s), which only enters thermal occupations.
typedef struct SascMode {
  double absolute_frequency;
  double kappa;
  double detuning;
} SascMode;

typedef struct SascCoupling {
  double magnitude;
  double phase;
} SascCoupling;

#ifdef __cplusplus
extern "C" {
#endif // __cplusplus

// Last error message on this thread, or null. Valid until the next failing
// call on the same thread.
const char *sasc_last_error(void);

// Two-mode unit: high mode `a`, low mode `b`.
//
// # Safety
// `a` and `b` must be null or valid pointers.
struct SascModel *sasc_model_du(const struct SascMode *a,
                                const struct SascMode *b,
                                struct SascCoupling g,
                                double temperature);

// Three-mode system `m`-`b`-`c`.
//
// # Safety
// `m`, `b` and `c` must be null or valid pointers.
struct SascModel *sasc_model_three_mode(const struct SascMode *m,
                                        const struct SascMode *b,
                                        const struct SascMode *c,
                                        struct SascCoupling g_m,
                                        struct SascCoupling g_c,
                                        double temperature);

// Chain of `n_modes` modes alternating high/low, with `n_modes - 1`
// couplings.
//
// # Safety
// `modes` must point to `n_modes` values and `couplings` to `n_modes - 1`.
struct SascModel *sasc_model_chain(const struct SascMode *modes,
                                   size_t n_modes,
                                   const struct SascCoupling *couplings,
                                   double temperature);

// # Safety
// `model` must be null or a handle from a `sasc_model_*` constructor not
// yet freed.
void sasc_model_free(struct SascModel *model);

// # Safety
// `model` must be a valid handle or null.
size_t sasc_model_mode_count(const struct SascModel *model);

// # Safety
// `model` must be a valid handle or null.
enum SascStatus sasc_model_set_convention(struct SascModel *model, enum SascConvention convention);

// Homodyne phase ψ in rad.
//
// # Safety
// `model` must be a valid handle or null.
enum SascStatus sasc_model_set_psi(struct SascModel *model, double psi);

// Writes 1 to `stable` if every drift eigenvalue lies in the open left
// half-plane, and the spectral abscissa to `abscissa`.
//
// # Safety
// `model` must be a valid handle; outputs must be valid pointers.
enum SascStatus sasc_stability(const struct SascModel *model, int32_t *stable, double *abscissa);

// `Γ(ω)` as row-major real and imaginary parts; `len` must equal
// `(2 n_modes)²`.
//
// # Safety
// `re` and `im` must each point to `len` writable doubles.
enum SascStatus sasc_transfer_matrix(const struct SascModel *model,
                                     double omega,
                                     double *re,
                                     double *im,
                                     size_t len);

// `|Γ_{2p,k} + Γ_{2p+1,k}|²` for zero-based mode `port` and channel `channel`.
//
// # Safety
// `model` must be a valid handle; `out` a valid pointer.
enum SascStatus sasc_transmission(const struct SascModel *model,
                                  double omega,
                                  size_t port,
                                  size_t channel,
                                  double *out);

// Asymmetry factor at `ω`.
//
// # Safety
// `model` must be a valid handle; `out` a valid pointer.
enum SascStatus sasc_asymmetry(const struct SascModel *model,
                               double omega,
                               enum SascAsymmetry which,
                               double *out);

// Bose–Einstein occupation at angular frequency `omega` (rad/s) and
// temperature `t` (K).
double sasc_thermal_occupation(double omega, double t);

// Symmetrized homodyne output spectrum of `port` at each of `n` frequencies.
//
// # Safety
// `omega` and `out` must each point to `n` doubles.
enum SascStatus sasc_output_spectrum(const struct SascModel *model,
                                     const double *omega,
                                     size_t n,
                                     size_t port,
                                     double *out);

// Amplification `S_AP` and `S_SNR` for a Hermitian unit signal entering
// `signal` and read out at `readout`.
//
// # Safety
// `model` must be a valid handle; outputs must be valid pointers.
enum SascStatus sasc_snr(const struct SascModel *model,
                         double omega,
                         size_t signal,
                         size_t readout,
                         double *s_ap,
                         double *snr);

// First-to-last quadrature gain of the model at `ω`.
//
// # Safety
// `model` must be a valid handle; `out` a valid pointer.
enum SascStatus sasc_chain_gain(const struct SascModel *model, double omega, double *out);

#ifdef __cplusplus
}  // extern "C"
#endif  // __cplusplus

#endif  /* SASC_H */
