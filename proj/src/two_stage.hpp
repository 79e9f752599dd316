// Copyright 2026 The ranksel Authors
// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <cstdint>
#include <span>
#include <vector>

#include "quadrature.hpp"
#include "roots.hpp"

namespace ranksel::two_stage {

enum class Variant { DudewiczDalal, Rinott };

// k competitor populations (k+1 total), first-stage d.f. nu = N0 - 1.
struct TwoStageProblem {
  std::int64_t k;
  double nu;
  double p;
  double delta = 1.0;
};

void validate(const TwoStageProblem& p);

// f1(h,k) = int G_nu^k(t+h) g_nu(t) dt  (Dudewicz-Dalal equation).
double f1(double h, std::int64_t k, double nu, const quad::QuadOptions& opt = {});

// Inner integral of Rinott's equation as a complement:
//   C(h) = 1 - int G_nu(t+h) g_nu(t) dt = P(T1 + T2 > h),
// kept as a complement so f2 = (1 - C)^k stays accurate for k up to 1e7.
double f2_inner_complement(double h, double nu, const quad::QuadOptions& opt = {});

// f2(h,k) = [int G_nu(t+h) g_nu(t) dt]^k  (Rinott's simpler equation).
double f2(double h, std::int64_t k, double nu, const quad::QuadOptions& opt = {});

roots::RootResult solve_h1(const TwoStageProblem& p, const quad::QuadOptions& qopt = {},
                           const roots::RootOptions& ropt = {});
roots::RootResult solve_h2(const TwoStageProblem& p, const quad::QuadOptions& qopt = {},
                           const roots::RootOptions& ropt = {});

struct HConstants {
  double h1, h2;
  double h1_tilde, h2_tilde;
  double ratio_sq;  // (h2/h1)^2
  roots::RootResult diag1, diag2;
};

// Solve both constants and attach the Frechet asymptotes.
HConstants solve_h_constants(const TwoStageProblem& p, const quad::QuadOptions& qopt = {},
                             const roots::RootOptions& ropt = {});

// Frechet asymptotes: h1 ~ gamma_nu k^{1/nu} q_p, h2 ~ 2^{1/nu} h1.
double h_tilde(std::int64_t k, double nu, double p, Variant variant);

// Gaussian (nu = infinity) asymptotes: DD sqrt(2 ln k), Rinott 2 sqrt(ln k).
double h_gaussian_asymptotic(std::int64_t k, Variant variant);

// First-order condition H_k(nu) for the optimal first-stage d.f. (zero of the
// derivative of ln h1_tilde; strictly increasing with slope > 1).
double optimal_nu_condition(double nu, std::int64_t k, double p);

enum class NuMode { Approx, Exact };

struct NuChoice {
  double nu_approx;   // root of H_k(nu) = 0
  double nu_exact;    // root of nu + 2 = h1(nu)^2 (NaN in Approx mode)
  double h_at_choice; // h1_tilde(nu_approx) or solved h1(nu_exact)
  double mu_tilde;    // h_at_choice^2 * sum(sigma2) / delta^2
};

NuChoice optimal_nu(std::int64_t k, double p, NuMode mode, double sum_sigma2 = 1.0,
                    double delta = 1.0, const quad::QuadOptions& qopt = {},
                    const roots::RootOptions& ropt = {});

enum class SampleSizeMode {
  PaperDeterministic,  // sum_i max(N0+1, (sigma_i h / delta)^2)
  ChiSquareExact       // sum_i E[max(N0+1, (h/delta)^2 S_i^2)], S_i^2 ~ sigma_i^2 chi^2_nu / nu
};

double expected_sample_size(double h, double nu, double delta,
                            std::span<const double> sigma2, SampleSizeMode mode);

// Sample-size ratio simulation: approximate sample size under a user
// nu-sequence relative to the approximate-optimal sequence.
enum class NuSequence { Optimal, LogK, PowK };

struct NuSeqCheckRow {
  std::int64_t k;
  double nu_k;
  double nu_star;
  double ratio_min;
  double ratio_mean;
};

std::vector<NuSeqCheckRow> approx_optimal_sample_check(
    std::span<const std::int64_t> k_grid, double sigma2, double delta,
    NuSequence seq, double coeff, double beta, double p, int replications,
    std::uint64_t seed);

}  // namespace ranksel::two_stage
