/*
 * Copyright 2026 The ranksel Authors
 * SPDX-License-Identifier: Apache-2.0
 *
 * ranksel -- ranking-and-selection procedures for Gaussian populations.
 *
 * C interface of the shared library. Every function returns an rs_status;
 * results travel through out-pointers. On any failure rs_last_error() gives
 * a thread-local description of what went wrong. Aggregate inputs for the
 * partial-maxima limit laws are built through the opaque rs_combo handle.
 */
#ifndef RANKSEL_RANKSEL_H
#define RANKSEL_RANKSEL_H

#include <stddef.h>
#include <stdint.h>

#if defined(_WIN32)
#define RANKSEL_API __declspec(dllexport)
#else
#define RANKSEL_API __attribute__((visibility("default")))
#endif

#ifdef __cplusplus
extern "C" {
#endif

typedef enum rs_status {
  RS_OK = 0,
  RS_ERR_INVALID = 1,     /* domain/argument violation */
  RS_ERR_NUMERIC = 2,     /* quadrature/series/root-finding failure */
  RS_ERR_UNSUPPORTED = 3  /* limit descriptor outside the closed grammar */
} rs_status;

RANKSEL_API const char* rs_version(void);
RANKSEL_API const char* rs_last_error(void);

/* Numerical controls. Zero-initialized fields fall back to the defaults
 * (abs/rel tol 1e-10, 4000 subdivisions, root tol 1e-10, 200 iterations). */
typedef struct rs_num_opts {
  double quad_abs_tol;
  double quad_rel_tol;
  int quad_max_subdivisions;
  double root_tol;
  int root_max_iter;
} rs_num_opts;
RANKSEL_API void rs_num_opts_init(rs_num_opts* opts);

typedef struct rs_mc_opts {
  int64_t replications;
  uint64_t seed;
  int workers; /* <= 0: all hardware threads */
} rs_mc_opts;
RANKSEL_API void rs_mc_opts_init(rs_mc_opts* opts);

/* --- special-function kernel --- */

RANKSEL_API rs_status rs_ln_gamma(double x, double* out);
RANKSEL_API rs_status rs_digamma(double x, double* out);
RANKSEL_API rs_status rs_trigamma(double x, double* out);
RANKSEL_API rs_status rs_normal_cdf(double x, double* value, double* log_value);
RANKSEL_API rs_status rs_normal_pdf(double x, double* out);
RANKSEL_API rs_status rs_normal_quantile(double p, double* out);
RANKSEL_API rs_status rs_student_t_cdf(double t, double nu, double* value, double* log_value);
RANKSEL_API rs_status rs_student_t_pdf(double t, double nu, double* out);
RANKSEL_API rs_status rs_two_t_sum_pdf(double t, double nu, double* out);
RANKSEL_API rs_status rs_gauss_hypergeometric(double a, double b, double c, double z, double* out);
RANKSEL_API rs_status rs_frechet_cdf(double x, double nu, double* out);
RANKSEL_API rs_status rs_frechet_quantile(double p, double nu, double* out);
RANKSEL_API rs_status rs_gumbel_cdf(double x, double* out);
RANKSEL_API rs_status rs_gumbel_quantile(double p, double* out);
RANKSEL_API rs_status rs_chi2_cdf(double x, double nu, double* out);
RANKSEL_API rs_status rs_gamma_nu(double nu, double* out);

/* --- extreme-value normalizing constants --- */

RANKSEL_API rs_status rs_gaussian_norm_constants(int64_t k, double* a_k, double* b_k);
RANKSEL_API rs_status rs_student_norm_constants(int64_t k, double nu, int summed,
                                                double* a_k, double* b_k);

/* --- single-stage (generalized Robbins-Siegmund) --- */

typedef struct rs_sample_size_result {
  double n_exact;
  double n_asymptotic;
  double relative_error;
  double n_ceil;
  double residual;
  int iterations;
  int no_solution; /* pcs >= p all the way down to n -> 0+ */
} rs_sample_size_result;

/* c_limit: the known limit of ln(s_k)/ln(k-s_k) for an s-rule, or NaN to use
 * the finite-(k,s) ratio. See the library notes on the two conventions. */
RANKSEL_API rs_status rs_single_stage_pcs(int64_t k, int64_t s, double delta, double sigma2,
                                          double n, const rs_num_opts* opts, double* out);
RANKSEL_API rs_status rs_single_stage_solve_n(int64_t k, int64_t s, double delta,
                                              double sigma2, double p, double c_limit,
                                              const rs_num_opts* opts,
                                              rs_sample_size_result* out);
RANKSEL_API rs_status rs_single_stage_lfc(int64_t k, int64_t s, double delta, double c,
                                          double* means_out /* length k */);

/* --- two-stage constants and asymptotics --- */

typedef struct rs_h_result {
  double h1, h2;
  double h1_tilde, h2_tilde;
  double ratio_sq;
  double residual1, residual2;
  int iterations1, iterations2;
} rs_h_result;

#define RS_VARIANT_DD 0
#define RS_VARIANT_RINOTT 1

RANKSEL_API rs_status rs_two_stage_f1(double h, int64_t k, double nu,
                                      const rs_num_opts* opts, double* out);
RANKSEL_API rs_status rs_two_stage_f2(double h, int64_t k, double nu,
                                      const rs_num_opts* opts, double* out);
RANKSEL_API rs_status rs_two_stage_solve_h(int64_t k, double nu, double p,
                                           const rs_num_opts* opts, rs_h_result* out);
RANKSEL_API rs_status rs_two_stage_h_tilde(int64_t k, double nu, double p, int variant,
                                           double* out);
RANKSEL_API rs_status rs_two_stage_h_gaussian_asymptotic(int64_t k, int variant, double* out);

typedef struct rs_nu_choice {
  double nu_approx;
  double nu_exact; /* NaN unless exact mode */
  double h_at_choice;
  double mu_tilde;
} rs_nu_choice;

#define RS_NU_MODE_APPROX 0
#define RS_NU_MODE_EXACT 1

RANKSEL_API rs_status rs_two_stage_optimal_nu(int64_t k, double p, int mode,
                                              double sum_sigma2, double delta,
                                              const rs_num_opts* opts, rs_nu_choice* out);

#define RS_ESS_PAPER 0
#define RS_ESS_CHI2 1

RANKSEL_API rs_status rs_two_stage_expected_n(double h, double nu, double delta,
                                              const double* sigma2, size_t n_pops,
                                              int mode, double* out);

/* --- executable procedures over simulated Gaussian populations --- */

typedef struct rs_procedure_config {
  double delta;
  int64_t n0;
  double p;
  double h;
  int variant; /* RS_VARIANT_DD or RS_VARIANT_RINOTT */
} rs_procedure_config;

typedef struct rs_pcs_estimate {
  double p_hat;
  int64_t replications;
  double ci_half_width; /* 95% Wilson */
  uint64_t seed;
} rs_pcs_estimate;

RANKSEL_API rs_status rs_compute_weights(int64_t n0, int64_t ni, double s2, double delta,
                                         double h, double* weights_out /* length ni */);

/* Arrays chosen/n_out/weighted_means_out/s2_out are caller-allocated with
 * n_pops entries (n_out et al. may be NULL when not wanted). */
RANKSEL_API rs_status rs_run_procedure(const double* means, const double* variances,
                                       size_t n_pops, const rs_procedure_config* config,
                                       uint64_t seed, uint64_t replication, int* chosen,
                                       int64_t* n_out, double* weighted_means_out,
                                       double* s2_out, int64_t* total_samples);

RANKSEL_API rs_status rs_estimate_pcs(const double* means, const double* variances,
                                      size_t n_pops, const rs_procedure_config* config,
                                      const rs_mc_opts* mc, rs_pcs_estimate* out);

/* --- limit laws for linear combinations of partial maxima --- */

typedef struct rs_combo rs_combo; /* opaque */

#define RS_FAMILY_GAUSSIAN 0
#define RS_FAMILY_STUDENT 1

#define RS_GROWTH_REMAINDER 0
#define RS_GROWTH_POW 1
#define RS_GROWTH_LOG 2

RANKSEL_API rs_combo* rs_combo_new(int family, double nu);
RANKSEL_API void rs_combo_free(rs_combo* combo);
RANKSEL_API rs_status rs_combo_add_group_finite(rs_combo* combo, int64_t size, double alpha);
RANKSEL_API rs_status rs_combo_add_group_infinite(rs_combo* combo, int growth_kind,
                                                  double coeff, double beta, double alpha);
RANKSEL_API rs_status rs_combo_xi_set_constant(rs_combo* combo, double c);
RANKSEL_API rs_status rs_combo_xi_add_pow(rs_combo* combo, double coeff, double beta);
RANKSEL_API rs_status rs_combo_xi_add_log(rs_combo* combo, double coeff);
RANKSEL_API rs_status rs_combo_xi_add_b_term(rs_combo* combo, int group, double coeff);
RANKSEL_API rs_status rs_combo_xi_add_inv_a_term(rs_combo* combo, int group, double coeff);

typedef struct rs_limit_law_result {
  double L;
  double L_star;    /* +-HUGE_VAL when divergent */
  int l_star_kind;  /* -1, 0 (finite), +1 */
  char v_descriptor[192];
} rs_limit_law_result;

RANKSEL_API rs_status rs_combo_limit_cdf(const rs_combo* combo, const rs_num_opts* opts,
                                         rs_limit_law_result* out);
RANKSEL_API rs_status rs_combo_mc(const rs_combo* combo, int64_t k, const rs_mc_opts* mc,
                                  rs_pcs_estimate* out);
/* Finite-k threshold and group sizes implied by the descriptors. */
RANKSEL_API rs_status rs_combo_xi_at(const rs_combo* combo, int64_t k, double* out);

#ifdef __cplusplus
} /* extern "C" */
#endif

#endif /* RANKSEL_RANKSEL_H */
