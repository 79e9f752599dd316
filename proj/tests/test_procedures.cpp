// Copyright 2026 The ranksel Authors
// SPDX-License-Identifier: Apache-2.0
#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <numeric>
#include <vector>

#include "procedures.hpp"
#include "rng.hpp"
#include "special_functions.hpp"
#include "two_stage.hpp"

using namespace ranksel;
using proc::PopulationSpec;
using proc::ProcedureConfig;
using two_stage::Variant;

TEST_CASE("philox4x64-10 reference blocks") {
  // vectors cross-checked against numpy.random.Philox raw output
  const auto b1 = rng::philox4x64_10({1, 0, 0, 0}, {0, 0});
  CHECK(b1.w[0] == 0x02f4ba6408e4d89bULL);
  CHECK(b1.w[1] == 0x3dd62b0b9ca8c5b2ULL);
  CHECK(b1.w[2] == 0x1c8667a55d902e79ULL);
  CHECK(b1.w[3] == 0x907d7a052fd5b4dcULL);
  const auto b2 = rng::philox4x64_10({2, 2, 3, 4}, {0xdeadbeefULL, 0xcafef00dULL});
  CHECK(b2.w[0] == 0xbe50cc8d71b94ed3ULL);
  CHECK(b2.w[1] == 0x24145edfdabb5069ULL);
  CHECK(b2.w[2] == 0x2dc42591c5253a4bULL);
  CHECK(b2.w[3] == 0x925d19fbe559e7a9ULL);
  // unit mapping stays inside the open interval
  CHECK(rng::to_unit(0) > 0.0);
  CHECK(rng::to_unit(~0ULL) < 1.0);
  // moments sanity for the addressed-draw helper
  double sum = 0.0, sumsq = 0.0;
  constexpr int n = 200000;
  for (int i = 0; i < n; ++i) {
    const double u = rng::uniform_at(3, i, 0, 0, 0xFACE);
    sum += u;
    sumsq += u * u;
  }
  CHECK(sum / n == doctest::Approx(0.5).epsilon(0.01));
  CHECK(sumsq / n == doctest::Approx(1.0 / 3.0).epsilon(0.01));
}

TEST_CASE("compute_weights solves the two constraints") {
  // hand-solved example: N0 = 2, N_i = 3, S^2 = 1, (delta/h)^2 = 1/2
  const auto w = proc::compute_weights(2, 3, 1.0, 1.0, std::sqrt(2.0));
  REQUIRE(w.size() == 3);
  CHECK(w[0] == doctest::Approx(1.0 / 6.0).epsilon(1e-12));
  CHECK(w[1] == doctest::Approx(1.0 / 6.0).epsilon(1e-12));
  CHECK(w[2] == doctest::Approx(2.0 / 3.0).epsilon(1e-12));

  // uniform weights exactly when (delta/h)^2 = S^2 / N_i
  const auto u = proc::compute_weights(3, 8, 2.0, 1.0, std::sqrt(8.0 / 2.0));
  for (double x : u) CHECK(x == doctest::Approx(1.0 / 8.0).epsilon(1e-12));

  // the two constraints hold for generic inputs
  for (double s2 : {0.3, 1.0, 4.2}) {
    const std::int64_t n0 = 5, ni = 23;
    const double h = 3.7, delta = 1.1;
    if ((delta / h) * (delta / h) < s2 / double(ni)) continue;
    const auto ww = proc::compute_weights(n0, ni, s2, delta, h);
    const double sum = std::accumulate(ww.begin(), ww.end(), 0.0);
    double sumsq = 0.0;
    for (double x : ww) sumsq += x * x;
    CHECK(sum == doctest::Approx(1.0).epsilon(1e-12));
    CHECK(s2 * sumsq == doctest::Approx((delta / h) * (delta / h)).epsilon(1e-12));
    CHECK(ww[static_cast<size_t>(n0)] >= 0.0);
  }
  CHECK_THROWS_AS(proc::compute_weights(2, 10, 100.0, 1.0, 100.0), std::runtime_error);
}

TEST_CASE("run_procedure honors the sample-size floor and determinism") {
  PopulationSpec spec{{0.0, 0.3, 1.0}, {1.0, 0.7, 2.0}};
  ProcedureConfig cfg{1.0, 6, 0.9, 3.0, Variant::DudewiczDalal};
  const auto a = proc::run_procedure(spec, cfg, 77, 5);
  const auto b = proc::run_procedure(spec, cfg, 77, 5);
  CHECK(a.chosen == b.chosen);
  CHECK(a.per_population_n == b.per_population_n);
  CHECK(a.weighted_means == b.weighted_means);
  std::int64_t total = 0;
  for (size_t i = 0; i < spec.means.size(); ++i) {
    CHECK(a.per_population_n[i] >= cfg.n0 + 1);
    // N_i = max(N0+1, ceil((h/delta)^2 S_i^2))
    const std::int64_t expect = std::max<std::int64_t>(
        cfg.n0 + 1, static_cast<std::int64_t>(std::ceil(9.0 * a.first_stage_variances[i])));
    CHECK(a.per_population_n[i] == expect);
    total += a.per_population_n[i];
  }
  CHECK(a.total_samples == total);
  CHECK(a.chosen ==
        static_cast<int>(std::max_element(a.weighted_means.begin(), a.weighted_means.end()) -
                         a.weighted_means.begin()));
}

TEST_CASE("DD weighted mean is studentized by h/delta") {
  // (mean_i - theta_i) * h / delta should follow t_{N0-1}; check variance and
  // one cdf point over seeded replications
  PopulationSpec spec{{0.0, 0.0}, {1.7, 0.6}};
  const std::int64_t n0 = 8;  // nu = 7
  ProcedureConfig cfg{1.0, n0, 0.9, 2.5, Variant::DudewiczDalal};
  constexpr int kReps = 40000;
  double sum = 0.0, sumsq = 0.0;
  int below1 = 0;
  for (int r = 0; r < kReps; ++r) {
    const auto out = proc::run_procedure(spec, cfg, 2024, r);
    const double w = (out.weighted_means[0] - spec.means[0]) * cfg.h / cfg.delta;
    sum += w;
    sumsq += w * w;
    if (w <= 1.0) ++below1;
  }
  const double var = sumsq / kReps - (sum / kReps) * (sum / kReps);
  CHECK(var == doctest::Approx(7.0 / 5.0).epsilon(0.05));  // nu/(nu-2)
  const double g1 = sf::student_t_cdf(1.0, 7.0).value;
  CHECK(double(below1) / kReps ==
        doctest::Approx(g1).epsilon(3.0 * std::sqrt(g1 * (1 - g1) / kReps) / g1 + 0.01));
}

TEST_CASE("identical populations are chosen uniformly (Rinott)") {
  PopulationSpec spec{{1.0, 1.0, 1.0}, {1.0, 1.0, 1.0}};
  ProcedureConfig cfg{1.0, 5, 0.9, 2.0, Variant::Rinott};
  std::vector<int> counts(3, 0);
  constexpr int kReps = 10000;
  for (int r = 0; r < kReps; ++r) ++counts[proc::run_procedure(spec, cfg, 99, r).chosen];
  double chi2 = 0.0;
  for (int c : counts) {
    const double e = kReps / 3.0;
    chi2 += (c - e) * (c - e) / e;
  }
  CHECK(chi2 < 13.815);  // chi^2_2 at the 0.001 level
}

TEST_CASE("overwhelming separation is always found") {
  PopulationSpec spec{{0.0, 10.0, 0.0, 0.0}, {1.0, 1.0, 1.0, 1.0}};
  ProcedureConfig cfg{1.0, 5, 0.9, 2.0, Variant::DudewiczDalal};
  int hits = 0;
  constexpr int kReps = 10000;
  for (int r = 0; r < kReps; ++r)
    if (proc::run_procedure(spec, cfg, 4, r).chosen == 1) ++hits;
  CHECK(double(hits) / kReps >= 0.999);
}

TEST_CASE("estimate_pcs contracts") {
  PopulationSpec spec{{0.0, 0.0, 1.0}, {1.0, 1.5, 0.5}};
  ProcedureConfig cfg{1.0, 5, 0.75, 2.5, Variant::Rinott};
  const auto w1 = proc::estimate_pcs(spec, cfg, 2000, 31, 1);
  const auto w2 = proc::estimate_pcs(spec, cfg, 2000, 31, 2);
  CHECK(w1.p_hat == w2.p_hat);  // counter-based: independent of worker count
  CHECK(w1.ci_half_width > 0.0);
  CHECK(w1.replications == 2000);

  PopulationSpec tied{{0.0, 1.0, 1.0}, {1.0, 1.0, 1.0}};
  CHECK_THROWS_AS(proc::estimate_pcs(tied, cfg, 1000, 1), std::invalid_argument);
  CHECK_THROWS_AS(proc::estimate_pcs(spec, cfg, 50, 1), std::invalid_argument);

  // more separation cannot hurt
  PopulationSpec wide{{0.0, 0.0, 10.0}, {1.0, 1.5, 0.5}};
  const auto far = proc::estimate_pcs(wide, cfg, 2000, 31, 2);
  CHECK(far.p_hat >= w1.p_hat - 3.0 * w1.ci_half_width);
}

TEST_CASE("guarantee and conservatism under the LFC (reduced replications)") {
  // full-scale (1e5) runs live in the acceptance suite
  const std::int64_t k = 5;
  const double nu = 9.0, p = 0.9;
  const auto hs = two_stage::solve_h_constants({k, nu, p, 1.0});
  PopulationSpec spec;
  spec.means = {0.0, 0.0, 0.0, 0.0, 0.0, 1.0};
  spec.variances = {0.5, 0.8, 1.1, 1.4, 1.7, 2.0};
  ProcedureConfig dd{1.0, static_cast<std::int64_t>(nu) + 1, p, hs.h1,
                     Variant::DudewiczDalal};
  ProcedureConfig ri{1.0, static_cast<std::int64_t>(nu) + 1, p, hs.h2, Variant::Rinott};
  const auto edd = proc::estimate_pcs(spec, dd, 20000, 123);
  const auto eri = proc::estimate_pcs(spec, ri, 20000, 123);
  CHECK(edd.p_hat + 3.0 * edd.ci_half_width >= p);
  CHECK(eri.p_hat + 3.0 * eri.ci_half_width >= p);
  // Rinott is the more conservative procedure (h2 >= h1)
  CHECK(eri.p_hat >= edd.p_hat - 3.0 * edd.ci_half_width);
}
