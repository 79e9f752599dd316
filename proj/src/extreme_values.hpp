// Copyright 2026 The ranksel Authors
// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "quadrature.hpp"

namespace ranksel::evt {

enum class EvtFamily { GaussianGumbel, StudentFrechet, TwoTSumFrechet };

// Normalizing constants a_k, b_k with a_k (max - b_k) converging in law.
struct EvtConstants {
  double a_k;
  double b_k;
  EvtFamily family;
};

// Tail constant of Student's t: 1 - G_nu(t) ~ gamma_nu^nu t^(-nu).
double gamma_nu(double nu);
double log_gamma_nu(double nu);

// Gaussian maxima: a_k = sqrt(2 ln k),
// b_k = sqrt(2 ln k) - (ln ln k + ln 4pi) / (2 sqrt(2 ln k)).  Requires k >= 2.
EvtConstants gaussian_norm_constants(std::int64_t k);

// Student-t maxima: a_k = gamma_nu^{-1} k^{-1/nu}, b_k = 0; the summed variant
// (max of sums of two t's) carries an extra 2^{-1/nu}.
EvtConstants student_norm_constants(std::int64_t k, double nu, bool summed = false);

// --- linear combinations of partial maxima ----------------------------------

// Growth descriptors form a small closed grammar so the limits L*/L** can be
// resolved symbolically. Exactly one infinite group must be the Remainder
// (it absorbs k minus the other groups at finite k).
struct GrowthSpec {
  enum class Kind { Remainder, PowK, LogK };
  Kind kind = Kind::Remainder;
  double coeff = 1.0;  // PowK: coeff * k^beta ; LogK: coeff * ln k
  double beta = 1.0;   // PowK only, 0 < beta <= 1
};

struct GroupSpec {
  bool finite = false;
  std::int64_t size = 1;  // finite groups
  GrowthSpec growth;      // infinite groups
  double alpha = 0.0;
};

// Threshold sequence xi_k = constant + pow_coeff*k^pow_beta + log_coeff*ln k
//   + sum_j b_coeff[j] * b_{delta_k^{(group)}} + sum_j inv_a_coeff[j] / a_{delta_k^{(group)}}.
struct XiDescriptor {
  double constant = 0.0;
  double pow_coeff = 0.0;
  double pow_beta = 0.0;
  double log_coeff = 0.0;
  std::vector<std::pair<int, double>> b_terms;
  std::vector<std::pair<int, double>> inv_a_terms;
};

struct LimitCombinationSpec {
  EvtFamily family = EvtFamily::GaussianGumbel;  // TwoTSumFrechet not allowed here
  double nu = 1.0;                               // StudentFrechet only
  std::vector<GroupSpec> groups;
  XiDescriptor xi;
};

struct LimitLawResult {
  double L;
  double L_star;     // finite value when l_star_kind == 0
  int l_star_kind;   // -1: -inf, 0: finite, +1: +inf
  std::string v_descriptor;
};

struct UnsupportedDescriptor : std::runtime_error {
  using std::runtime_error::runtime_error;
};

void validate(const LimitCombinationSpec& spec);

// Group sizes of the partition of {1..k} at finite k.
std::vector<std::int64_t> group_sizes_at(const LimitCombinationSpec& spec, std::int64_t k);

// Finite-k threshold value xi_k.
double xi_at(const LimitCombinationSpec& spec, std::int64_t k);

// L = lim P(sum_t alpha_t M_k^(t) <= xi_k), resolved symbolically and then
// evaluated by numerical convolution of the limiting component laws.
LimitLawResult limit_combo_cdf(const LimitCombinationSpec& spec,
                               const quad::QuadOptions& opt = {});

struct McEstimate {
  double p_hat;
  double ci_half_width;  // 95% Wilson
  std::int64_t replications;
  std::uint64_t seed;
};

// Empirical P(sum_t alpha_t M_k^(t) <= xi_k) at finite k; deterministic for a
// fixed seed, independent of the worker count.
McEstimate mc_partial_maxima(const LimitCombinationSpec& spec, std::int64_t k,
                             std::int64_t replications, std::uint64_t seed,
                             int workers = 0);

// 95% Wilson score half-width for p_hat out of n trials (shared helper).
double wilson_half_width(double p_hat, std::int64_t n);

}  // namespace ranksel::evt
