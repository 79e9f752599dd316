// Copyright 2026 The ranksel Authors
// SPDX-License-Identifier: Apache-2.0
#include "procedures.hpp"

#include <algorithm>
#include <cmath>
#include <thread>

#include "extreme_values.hpp"
#include "rng.hpp"
#include "special_functions.hpp"

namespace ranksel::proc {

namespace {

[[noreturn]] void invalid(const char* msg) { throw std::invalid_argument(msg); }

constexpr std::uint64_t kTagProcedure = 0xA1C0;

double normal_draw(std::uint64_t seed, std::uint64_t rep, std::uint64_t pop,
                   std::uint64_t j) {
  return sf::normal_quantile(rng::uniform_at(seed, rep, pop, j, kTagProcedure));
}

}  // namespace

void validate(const PopulationSpec& spec) {
  if (spec.means.size() != spec.variances.size())
    invalid("procedures: means and variances must have equal length");
  if (spec.means.size() < 2) invalid("procedures: need at least two populations");
  for (double v : spec.variances)
    if (!(v > 0.0)) invalid("procedures: variances must be positive");
}

void validate(const ProcedureConfig& config) {
  if (config.n0 < 2) invalid("procedures: requires N0 >= 2");
  if (!(config.delta > 0.0)) invalid("procedures: requires delta > 0");
  if (!(config.h > 0.0)) invalid("procedures: requires h > 0");
  if (!(config.p > 0.0 && config.p < 1.0)) invalid("procedures: requires p in (0,1)");
}

std::vector<double> compute_weights(std::int64_t n0, std::int64_t ni, double s2,
                                    double delta, double h) {
  if (n0 < 2 || ni < n0 + 1) invalid("compute_weights: requires N_i >= N0 + 1 >= 3");
  if (!(s2 > 0.0) || !(delta > 0.0) || !(h > 0.0))
    invalid("compute_weights: requires positive S^2, delta, h");
  const double m = static_cast<double>(n0);
  const double r = static_cast<double>(ni - n0);
  const double n = static_cast<double>(ni);
  const double q = (delta / h) * (delta / h) / s2;  // target sum of squares
  const double disc = 1.0 - n * (1.0 - q * m) / r;
  if (disc < -1e-12 * n)
    throw std::runtime_error("compute_weights: infeasible (delta/h)^2 < S^2/N_i");
  const double v = (1.0 + std::sqrt(std::max(0.0, disc))) / n;
  const double u = (1.0 - r * v) / m;
  std::vector<double> w(static_cast<size_t>(ni), v);
  std::fill(w.begin(), w.begin() + static_cast<size_t>(n0), u);
  return w;
}

SelectionOutcome run_procedure(const PopulationSpec& spec, const ProcedureConfig& config,
                               std::uint64_t seed, std::uint64_t replication) {
  validate(spec);
  validate(config);
  const size_t pops = spec.means.size();
  const std::int64_t n0 = config.n0;
  SelectionOutcome out;
  out.per_population_n.resize(pops);
  out.weighted_means.resize(pops);
  out.first_stage_variances.resize(pops);
  out.total_samples = 0;

  std::vector<double> stage_one(static_cast<size_t>(n0));
  for (size_t i = 0; i < pops; ++i) {
    const double sd = std::sqrt(spec.variances[i]);
    double sum = 0.0;
    for (std::int64_t j = 0; j < n0; ++j) {
      stage_one[static_cast<size_t>(j)] =
          spec.means[i] + sd * normal_draw(seed, replication, i, static_cast<std::uint64_t>(j));
      sum += stage_one[static_cast<size_t>(j)];
    }
    const double mean1 = sum / static_cast<double>(n0);
    double ss = 0.0;
    for (std::int64_t j = 0; j < n0; ++j) {
      const double d = stage_one[static_cast<size_t>(j)] - mean1;
      ss += d * d;
    }
    const double s2 = ss / static_cast<double>(n0 - 1);  // unbiased
    out.first_stage_variances[i] = s2;

    const double raw = (config.h / config.delta) * (config.h / config.delta) * s2;
    const std::int64_t ni =
        std::max<std::int64_t>(n0 + 1, static_cast<std::int64_t>(std::ceil(raw)));
    out.per_population_n[i] = ni;
    out.total_samples += ni;

    double sum2 = 0.0;
    for (std::int64_t j = n0; j < ni; ++j)
      sum2 += spec.means[i] + sd * normal_draw(seed, replication, i, static_cast<std::uint64_t>(j));

    if (config.variant == Variant::Rinott) {
      out.weighted_means[i] = (sum + sum2) / static_cast<double>(ni);
    } else {
      const auto w = compute_weights(n0, ni, s2, config.delta, config.h);
      // two-level weights: one inner product without materializing draws twice
      double acc = w[0] * sum;  // stage-one weights are all equal
      acc += w[static_cast<size_t>(n0)] * sum2;
      out.weighted_means[i] = acc;
    }
  }
  out.chosen = static_cast<int>(std::max_element(out.weighted_means.begin(),
                                                 out.weighted_means.end()) -
                                out.weighted_means.begin());
  return out;
}

PcsEstimate estimate_pcs(const PopulationSpec& spec, const ProcedureConfig& config,
                         std::int64_t replications, std::uint64_t seed, int workers) {
  validate(spec);
  validate(config);
  if (replications < 100) invalid("estimate_pcs: requires replications >= 100");
  const auto best_it = std::max_element(spec.means.begin(), spec.means.end());
  const int best = static_cast<int>(best_it - spec.means.begin());
  for (size_t i = 0; i < spec.means.size(); ++i)
    if (static_cast<int>(i) != best && spec.means[i] == *best_it)
      invalid("estimate_pcs: best mean is not unique");

  if (workers <= 0) workers = std::max(1u, std::thread::hardware_concurrency());
  workers = static_cast<int>(std::min<std::int64_t>(workers, replications));

  std::vector<std::int64_t> partial(workers, 0);
  std::vector<std::thread> pool;
  const std::int64_t chunk = (replications + workers - 1) / workers;
  for (int w = 0; w < workers; ++w) {
    const std::int64_t lo = w * chunk;
    const std::int64_t hi = std::min(replications, lo + chunk);
    if (lo >= hi) break;
    pool.emplace_back([&, w, lo, hi] {
      std::int64_t hits = 0;
      for (std::int64_t r = lo; r < hi; ++r)
        if (run_procedure(spec, config, seed, static_cast<std::uint64_t>(r)).chosen == best)
          ++hits;
      partial[w] = hits;
    });
  }
  for (auto& th : pool) th.join();
  std::int64_t hits = 0;
  for (auto h : partial) hits += h;

  PcsEstimate est;
  est.p_hat = static_cast<double>(hits) / static_cast<double>(replications);
  est.replications = replications;
  est.ci_half_width = evt::wilson_half_width(est.p_hat, replications);
  est.seed = seed;
  return est;
}

}  // namespace ranksel::proc
