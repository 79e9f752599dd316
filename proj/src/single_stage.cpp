// Copyright 2026 The ranksel Authors
// SPDX-License-Identifier: Apache-2.0
#include "single_stage.hpp"

#include <algorithm>
#include <cmath>

#include "extreme_values.hpp"
#include "special_functions.hpp"

namespace ranksel::single_stage {

namespace {
[[noreturn]] void invalid(const char* msg) { throw std::invalid_argument(msg); }
}

void validate(const SingleStageProblem& p) {
  if (p.k < 2) invalid("single_stage: requires k >= 2");
  if (p.s < 1 || p.s > p.k - p.s) invalid("single_stage: requires 1 <= s <= k - s");
  if (!(p.delta > 0.0)) invalid("single_stage: requires delta > 0");
  if (!(p.sigma2 > 0.0)) invalid("single_stage: requires sigma2 > 0");
  if (!(p.p > 0.0 && p.p < 1.0)) invalid("single_stage: requires p in (0,1)");
}

std::vector<double> lfc(const SingleStageProblem& p, double c) {
  validate(p);
  std::vector<double> means(p.k, c);
  for (std::int64_t i = p.k - p.s; i < p.k; ++i) means[i] = c + p.delta;
  return means;
}

double pcs_shift(double shift, std::int64_t cdf_pow, std::int64_t density_pow,
                 const quad::QuadOptions& opt) {
  if (cdf_pow < 1 || density_pow < 1) invalid("pcs_shift: requires positive powers");
  const double m = static_cast<double>(cdf_pow);
  const double s = static_cast<double>(density_pow);
  const double log_s = std::log(s);

  auto integrand = [&](double t) {
    const double lp = m * sf::normal_log_cdf(shift - t) +
                      (s - 1.0) * sf::normal_log_cdf(t) + log_s +
                      sf::normal_log_pdf(t);
    return std::exp(lp);
  };

  // support of the density factor (max of density_pow Gaussians)
  constexpr double kEps = 1e-15;
  const double lo = sf::normal_upper_quantile(-std::expm1(std::log(kEps) / s));
  const double hi = sf::normal_upper_quantile(-std::expm1(std::log1p(-kEps) / s));
  std::vector<double> pts{lo, hi};
  // body quantiles of the density factor
  for (double q : {0.05, 0.5, 0.95}) {
    const double v = sf::normal_upper_quantile(-std::expm1(std::log(q) / s));
    if (v > lo && v < hi) pts.push_back(v);
  }
  // sigmoid transition of the cdf-power factor
  if (cdf_pow >= 2) {
    const auto nc = evt::gaussian_norm_constants(cdf_pow);
    for (double off : {-6.0, 0.0, 6.0}) {
      const double v = shift - nc.b_k + off / nc.a_k;
      if (v > lo && v < hi) pts.push_back(v);
    }
  }
  const double v = quad::integrate(integrand, std::span<const double>(pts), opt).value;
  return std::clamp(v, 0.0, 1.0);
}

double pcs(const SingleStageProblem& p, double n, const quad::QuadOptions& opt) {
  validate(p);
  if (!(n > 0.0)) invalid("pcs: requires n > 0");
  const double shift = p.delta * std::sqrt(n / p.sigma2);
  return pcs_shift(shift, p.k - p.s, p.s, opt);
}

double n_asymptotic(const SingleStageProblem& p) {
  const double kd = static_cast<double>(p.k);
  const double sd = static_cast<double>(p.s);
  if (std::isfinite(p.c_limit)) {
    const double root = std::sqrt(std::max(0.0, p.c_limit));
    return 2.0 * p.sigma2 * (1.0 + root) * (1.0 + root) / (p.delta * p.delta) *
           std::log(kd);
  }
  const double c = (p.s == 1) ? 0.0 : std::log(sd) / std::log(kd - sd);
  const double root = std::sqrt(c);
  return 2.0 * p.sigma2 * (1.0 + root) * (1.0 + root) / (p.delta * p.delta) *
         std::log(kd - sd);
}

SampleSizeResult solve_sample_size(const SingleStageProblem& p,
                                   const quad::QuadOptions& qopt,
                                   const roots::RootOptions& ropt) {
  validate(p);
  SampleSizeResult out{};
  out.n_asymptotic = n_asymptotic(p);
  out.no_solution = false;

  auto f = [&](double n) { return pcs(p, n, qopt) - p.p; };

  double lo = 1.0, hi = 1.0;
  double flo = f(lo), fhi = flo;
  int steps = 0;
  while (flo > 0.0 && lo > 1e-12) {  // shrink below n = 1 if needed
    hi = lo;
    fhi = flo;
    lo *= 0.5;
    flo = f(lo);
    ++steps;
  }
  if (flo > 0.0) {
    // inf_n pcs >= p: no solution (existence of N*(p) is only an eventual
    // property in k); report the probe bound with the flag set.
    out.no_solution = true;
    out.n_exact = lo;
    out.n_ceil = 1.0;
    out.relative_error = (out.n_asymptotic - out.n_exact) / out.n_exact;
    out.diagnostics.root = lo;
    out.diagnostics.residual = flo;
    out.diagnostics.converged = false;
    return out;
  }
  while (fhi < 0.0 && steps < 400) {
    lo = hi;
    flo = fhi;
    hi *= 2.0;
    fhi = f(hi);
    ++steps;
  }
  roots::RootOptions r = ropt;
  r.x_tol = std::max(r.x_tol, 1e-11 * hi);
  out.diagnostics = roots::brent(f, lo, hi, flo, fhi, r);
  out.n_exact = out.diagnostics.root;
  out.n_ceil = std::ceil(out.n_exact);
  out.relative_error = (out.n_asymptotic - out.n_exact) / out.n_exact;
  return out;
}

}  // namespace ranksel::single_stage
