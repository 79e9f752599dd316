// Copyright 2026 The ranksel Authors
// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <cstdint>
#include <vector>

#include "quadrature.hpp"
#include "roots.hpp"

namespace ranksel::single_stage {

// Selection of the s populations with the largest means out of k independent
// Gaussian populations with known common variance.
struct SingleStageProblem {
  std::int64_t k;
  std::int64_t s;
  double delta;
  double sigma2;
  double p;
  // When the caller knows the limit C = lim ln(s_k)/ln(k - s_k) of an s-rule
  // (e.g. C = beta for s_k ~ psi k^beta), the asymptotic sample size is
  // 2 sigma^2 (1+sqrt(C))^2 ln(k) / delta^2, matching the published tables.
  // Left NaN, C is taken at the finite (k, s) and ln(k-s) is used instead.
  double c_limit = std::numeric_limits<double>::quiet_NaN();
};

void validate(const SingleStageProblem& p);

// Least favorable configuration: ordered means c + delta * 1{i > k - s}.
std::vector<double> lfc(const SingleStageProblem& p, double c);

// P(correct selection) under the LFC with n samples per population:
//   f(n,k) = int Phi^{k-s}(delta sqrt(n)/sigma - t) s Phi^{s-1}(t) phi(t) dt.
double pcs(const SingleStageProblem& p, double n, const quad::QuadOptions& opt = {});

// Same integral with explicit group sizes and shift; the proof's symmetry
// swaps the two roles, which tests exercise directly.
double pcs_shift(double shift, std::int64_t cdf_pow, std::int64_t density_pow,
                 const quad::QuadOptions& opt = {});

struct SampleSizeResult {
  double n_exact;
  double n_asymptotic;
  double relative_error;  // (n_asymptotic - n_exact) / n_exact
  double n_ceil;
  roots::RootResult diagnostics;
  bool no_solution;  // pcs stays >= p down to n -> 0+: n_exact reports the probe bound
};

// Solve pcs(n) = p as a continuous equation in n (bracket expansion from
// n = 1, then Brent).
SampleSizeResult solve_sample_size(const SingleStageProblem& p,
                                   const quad::QuadOptions& qopt = {},
                                   const roots::RootOptions& ropt = {});

double n_asymptotic(const SingleStageProblem& p);

}  // namespace ranksel::single_stage
