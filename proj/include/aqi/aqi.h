#ifndef AQI_AQI_H
#define AQI_AQI_H

#include <stddef.h>
#include <stdint.h>

#if defined(_WIN32)
#  if defined(AQI_BUILDING)
#    define AQI_API __declspec(dllexport)
#  else
#    define AQI_API __declspec(dllimport)
#  endif
#else
#  define AQI_API __attribute__((visibility("default")))
#endif

#ifdef __cplusplus
extern "C" {
#endif

typedef enum aqi_status {
    AQI_OK = 0,
    AQI_E_ARGUMENT = 1,
    AQI_E_VALIDATION = 2,
    AQI_E_NUMERICAL = 3,
    AQI_E_CACHE = 4,
    AQI_E_DOMAIN = 5,
    AQI_E_TRUNCATION = 6,
    AQI_E_UNDEFINED_CORRELATION = 7,
    AQI_E_INVERSION_DOMAIN = 8,
    AQI_E_INSUFFICIENT_PROJECTIONS = 9,
    AQI_E_IO = 10,
    AQI_E_INTERNAL = 11
} aqi_status;

typedef struct aqi_config aqi_config;
typedef struct aqi_ensemble aqi_ensemble;
typedef struct aqi_mixture aqi_mixture;
typedef struct aqi_trace aqi_trace;

/* Message and offending field of the last failure on the calling thread. */
AQI_API const char* aqi_last_error(void);
AQI_API const char* aqi_last_error_field(void);
AQI_API const char* aqi_status_name(aqi_status status);
AQI_API const char* aqi_version(void);

/* Soft warnings (validation notes, cache recovery, truncation risk). The
   handler may be called from worker threads, one call at a time. */
typedef void (*aqi_warning_fn)(const char* message, void* user);
AQI_API void aqi_set_warning_handler(aqi_warning_fn fn, void* user);

/* ---- config ----------------------------------------------------------- */

AQI_API aqi_status aqi_config_default(aqi_config** out);
AQI_API aqi_status aqi_config_from_json(const char* text, aqi_config** out);
AQI_API aqi_status aqi_config_load(const char* path, aqi_config** out);
AQI_API aqi_status aqi_config_clone(const aqi_config* config, aqi_config** out);
AQI_API void aqi_config_free(aqi_config* config);

/* Numeric keys: omega, E_omega, epsilon_ratio, phi, Ip, n_cycles,
   rho_coupling, n_samples, squeezing.I_squ, time_grid.t_start,
   time_grid.t_end, time_grid.n_steps. */
AQI_API aqi_status aqi_config_set(aqi_config* config, const char* key, double value);
AQI_API aqi_status aqi_config_get(const aqi_config* config, const char* key, double* value);
/* Enumerated keys: envelope, squeezing.kind, squeezing.axis. */
AQI_API aqi_status aqi_config_set_option(aqi_config* config, const char* key, const char* value);

AQI_API aqi_status aqi_config_validate(const aqi_config* config, size_t* n_warnings);

/* Strings are copied into buf (NUL-terminated, truncated to cap);
   *needed receives the full length excluding the terminator. */
AQI_API aqi_status aqi_config_to_json(const aqi_config* config, char* buf, size_t cap, size_t* needed);
AQI_API aqi_status aqi_config_hash(const aqi_config* config, char out[17]);
AQI_API int aqi_cutoff_estimate(const aqi_config* config);

/* ---- ensemble --------------------------------------------------------- */

typedef struct aqi_run_options {
    const char* cache_dir; /* NULL disables the dipole cache */
    unsigned jobs;         /* 0: hardware concurrency */
} aqi_run_options;

AQI_API aqi_status aqi_ensemble_compute(const aqi_config* config, const aqi_run_options* opts, aqi_ensemble** out);
AQI_API void aqi_ensemble_free(aqi_ensemble* ensemble);

AQI_API size_t aqi_ensemble_size(const aqi_ensemble* ensemble);
AQI_API aqi_status aqi_ensemble_sample(const aqi_ensemble* ensemble, size_t k, double* gamma_x, double* gamma_y,
                                       double* weight);
AQI_API size_t aqi_ensemble_time_points(const aqi_ensemble* ensemble);
AQI_API aqi_status aqi_ensemble_times(const aqi_ensemble* ensemble, double* t);
AQI_API aqi_status aqi_ensemble_field(const aqi_ensemble* ensemble, size_t k, double* e);
AQI_API aqi_status aqi_ensemble_dipole(const aqi_ensemble* ensemble, size_t k, double* d);
AQI_API aqi_status aqi_ensemble_mean_dipole(const aqi_ensemble* ensemble, double* d);
AQI_API size_t aqi_ensemble_orders(const aqi_ensemble* ensemble);
AQI_API aqi_status aqi_ensemble_spectrum(const aqi_ensemble* ensemble, size_t k, double* q, double* re, double* im);
/* 0: no window, 1: hann */
AQI_API int aqi_ensemble_window(const aqi_ensemble* ensemble);
AQI_API int aqi_ensemble_measured_cutoff(const aqi_ensemble* ensemble, size_t k);

/* Coupling giving the reference even harmonic its reference photon number
   on this ensemble. */
AQI_API aqi_status aqi_ensemble_calibrate_rho(const aqi_ensemble* ensemble, double* rho);

/* rho_coupling of the config, or the calibration on its phi = 0 ensemble. */
AQI_API aqi_status aqi_resolve_rho(const aqi_config* config, const aqi_run_options* opts, double* rho);

/* ---- mixtures and observables ------------------------------------------ */

AQI_API aqi_status aqi_mixture_from_ensemble(const aqi_ensemble* ensemble, double q, double rho, aqi_mixture** out);
AQI_API aqi_status aqi_mixture_from_components(size_t n, const double* weights, const double* re, const double* im,
                                               double q, aqi_mixture** out);
AQI_API void aqi_mixture_free(aqi_mixture* mixture);
AQI_API size_t aqi_mixture_size(const aqi_mixture* mixture);
AQI_API aqi_status aqi_mixture_component(const aqi_mixture* mixture, size_t k, size_t* sample_id, double* weight,
                                         double* re, double* im);

AQI_API aqi_status aqi_mean_photon(const aqi_mixture* mixture, double* value);
AQI_API aqi_status aqi_quadrature_variance(const aqi_mixture* mixture, double theta, double* value);

typedef struct aqi_variance_extrema {
    double var_min;
    double var_max;
    double theta_min;
    double theta_max;
} aqi_variance_extrema;

AQI_API aqi_status aqi_variance_extrema_of(const aqi_mixture* mixture, aqi_variance_extrema* out);
AQI_API aqi_status aqi_g2(const aqi_mixture* m1, const aqi_mixture* m2, double* value);
AQI_API aqi_status aqi_linear_entropy(const aqi_mixture* mixture, double* value);

/* n x n row-major matrices; undefined entries are NaN. */
AQI_API aqi_status aqi_csi_matrix(const aqi_mixture* const* mixtures, size_t n, unsigned jobs, double* g2,
                                  double* delta_csi);

/* ---- phase-space representations --------------------------------------- */

AQI_API aqi_status aqi_wigner_axis(const aqi_mixture* mixture, size_t n_points, double* axis);
/* values[i * np + j] = W(x_i, p_j) */
AQI_API aqi_status aqi_wigner_grid(const aqi_mixture* mixture, const double* x, size_t nx, const double* p, size_t np,
                                   unsigned jobs, double* values);
AQI_API aqi_status aqi_wigner_max_angle(const double* x, size_t nx, const double* p, size_t np, const double* values,
                                        double* angle);
/* re/im receive n_cutoff^2 row-major entries and may both be NULL. */
AQI_API aqi_status aqi_fock_density(const aqi_mixture* mixture, size_t n_cutoff, double* re, double* im,
                                    double* trace_deficit);

/* ---- tomography ------------------------------------------------------- */

typedef enum aqi_pdf_method { AQI_PDF_ANALYTIC = 0, AQI_PDF_FOCK = 1 } aqi_pdf_method;

AQI_API aqi_status aqi_quadrature_pdf(const aqi_mixture* mixture, double theta, aqi_pdf_method method,
                                      size_t n_cutoff, const double* x, size_t nx, double* pdf);
AQI_API aqi_status aqi_sample_outcomes(const double* x, const double* pdf, size_t n, size_t n_shots, uint64_t seed,
                                       double* outcomes);

typedef struct aqi_trace_options {
    size_t n_phases;       /* 0: 20 */
    size_t n_shots;        /* 0: 500 */
    uint64_t seed;
    aqi_pdf_method method;
    size_t n_cutoff;       /* 0: 200 */
} aqi_trace_options;

AQI_API aqi_status aqi_trace_collect(const aqi_config* config, const aqi_run_options* opts, double q, double theta,
                                     const aqi_trace_options* trace_opts, aqi_trace** out);
/* Fixed state measured along X_phi for each phase (homodyne emulation). */
AQI_API aqi_status aqi_trace_rotated(const aqi_mixture* mixture, const aqi_trace_options* trace_opts,
                                     aqi_trace** out);
AQI_API void aqi_trace_free(aqi_trace* trace);
AQI_API size_t aqi_trace_phases(const aqi_trace* trace);
AQI_API size_t aqi_trace_shots(const aqi_trace* trace);
AQI_API aqi_status aqi_trace_phi(const aqi_trace* trace, double* phi);
AQI_API aqi_status aqi_trace_outcomes(const aqi_trace* trace, size_t j, double* outcomes);
AQI_API aqi_status aqi_trace_variance(const aqi_trace* trace, size_t n_boot, uint64_t seed, double* variance,
                                      double* error);
AQI_API aqi_status aqi_inverse_radon(const aqi_trace* trace, const double* x, size_t nx, const double* p, size_t np,
                                     double k_c, int subtract_mean, unsigned jobs, double* values);
AQI_API double aqi_radon_kernel(double u, double k_c);

/* ---- analysis ----------------------------------------------------------- */

/* magnitude[i * n_omega + j] = |G(omega_j, tau_i)| of the weight-averaged dipole. */
AQI_API aqi_status aqi_ensemble_gabor(const aqi_ensemble* ensemble, double delta, const double* tau, size_t n_tau,
                                      const double* omega, size_t n_omega, unsigned jobs, double* magnitude);
AQI_API aqi_status aqi_sigma_inversion(double I_odd, double I_even, double I_0, double* sigma_x, double* sigma_y);
/* parity: 1 odd, 0 even */
AQI_API aqi_status aqi_intensity_model(double sigma_x, double sigma_y, double I_0, int odd, double* intensity);
AQI_API aqi_status aqi_homodyne_probe(const aqi_ensemble* ensemble, const aqi_mixture* even_mixture,
                                      const double* theta, size_t n, double* values, double* amplitude,
                                      double* phase);

#ifdef __cplusplus
}
#endif

#endif
