// Copyright 2026 The ranksel Authors
// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <cstdint>
#include <vector>

#include "two_stage.hpp"

namespace ranksel::proc {

using two_stage::Variant;

struct PopulationSpec {
  std::vector<double> means;
  std::vector<double> variances;
};

struct ProcedureConfig {
  double delta;
  std::int64_t n0;  // first-stage sample size, >= 2
  double p;
  double h;  // precomputed constant (h_k^(1) or h_k^(2)) for nu = n0 - 1
  Variant variant;
};

struct SelectionOutcome {
  int chosen;
  std::vector<std::int64_t> per_population_n;
  std::vector<double> weighted_means;
  std::int64_t total_samples;
  std::vector<double> first_stage_variances;
};

struct PcsEstimate {
  double p_hat;
  std::int64_t replications;
  double ci_half_width;  // 95% Wilson
  std::uint64_t seed;
};

void validate(const PopulationSpec& spec);
void validate(const ProcedureConfig& config);

// Second-stage weights: a_1..a_N0 equal (= u) and a_{N0+1}..a_Ni equal (= v),
// solving sum a = 1 and S^2 sum a^2 = (delta/h)^2. Of the two quadratic roots
// the one with the larger (always nonnegative) stage-two weight is returned;
// both share sum a^2, so this is the deterministic representative.
std::vector<double> compute_weights(std::int64_t n0, std::int64_t ni, double s2,
                                    double delta, double h);

// One run of the two-stage procedure over simulated Gaussian populations.
// Deterministic in (seed, replication): draw j of population i is addressed
// by the counter (replication, i, j).
SelectionOutcome run_procedure(const PopulationSpec& spec, const ProcedureConfig& config,
                               std::uint64_t seed, std::uint64_t replication = 0);

// Monte Carlo estimate of P(CS); requires a unique best mean. Replications
// are distributed over workers; the result is identical for any worker count.
PcsEstimate estimate_pcs(const PopulationSpec& spec, const ProcedureConfig& config,
                         std::int64_t replications, std::uint64_t seed, int workers = 0);

}  // namespace ranksel::proc
