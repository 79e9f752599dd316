// Copyright 2026 The ranksel Authors
// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <stdexcept>

namespace ranksel::sf {

// Raised when an iterative evaluation (series, continued fraction) fails to
// meet tolerance within its iteration cap.
struct NumericError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// A quantity together with its natural log. Powers like Phi^k with k up to
// 1e7 underflow in the value domain; integrands assemble them from log_value.
struct DistEval {
  double value;
  double log_value;
};

// Degrees of freedom at or above this use the Gaussian limit of Student's t
// (with an O(1/nu) correction in the body). The incomplete-beta continued
// fraction loses efficiency long before this point.
inline constexpr double kStudentNormalSwitch = 1e6;

double ln_gamma(double x);  // x > 0
double digamma(double x);   // x > 0
double trigamma(double x);  // x > 0

double normal_pdf(double x);
double normal_log_pdf(double x);
DistEval normal_cdf(double x);
double normal_log_cdf(double x);
// Phi^{-1}(p). The upper-tail form takes q = 1 - p directly so callers can
// hit the far tail without cancellation.
double normal_quantile(double p);
double normal_upper_quantile(double q);

double student_t_pdf(double t, double nu);
double student_t_log_pdf(double t, double nu);
DistEval student_t_cdf(double t, double nu);
double student_t_log_cdf(double t, double nu);
double student_t_log_sf(double t, double nu);  // log survival 1 - G
double student_t_quantile(double p, double nu);
double student_t_upper_quantile(double q, double nu);  // G^{-1}(1-q)

// Density of the sum of two i.i.d. Student-t variables with nu d.f.
double two_t_sum_pdf(double t, double nu);

// Gauss hypergeometric 2F1(a,b;c;z) for z in [0,1]. Direct series away from
// z=1; Euler transformation and 1-z connection formulas near z=1; Gauss'
// theorem at z=1 (requires c-a-b > 0 unless the series terminates).
double gauss_hypergeometric(double a, double b, double c, double z);

double frechet_cdf(double x, double nu);
double frechet_pdf(double x, double nu);
double frechet_quantile(double p, double nu);
double gumbel_cdf(double x);
double gumbel_pdf(double x);
double gumbel_quantile(double p);
double chi2_cdf(double x, double nu);

namespace detail {
// Regularized incomplete beta I_x(a,b); xc = 1-x supplied by the caller to
// keep precision when x is near 1.
double ibeta(double a, double b, double x, double xc);
// log I_x(a,b) evaluated on the convergent side of the continued fraction.
double log_ibeta_direct(double a, double b, double x, double xc);
// Regularized lower incomplete gamma P(a,x).
double gammp(double a, double x);
double ln_beta(double a, double b);
}  // namespace detail

}  // namespace ranksel::sf
