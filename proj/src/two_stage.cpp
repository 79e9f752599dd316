// Copyright 2026 The ranksel Authors
// SPDX-License-Identifier: Apache-2.0
#include "two_stage.hpp"

#include <algorithm>
#include <cmath>

#include "extreme_values.hpp"
#include "rng.hpp"
#include "special_functions.hpp"

namespace ranksel::two_stage {

namespace {

[[noreturn]] void invalid(const char* msg) { throw std::invalid_argument(msg); }

constexpr std::uint64_t kTagNuCheck = 0x9C;

// Break points shared by the f1/f2 integrands: the body of g_nu plus the
// far-tail quantiles, bridged by geometric rungs (the t tails are power laws,
// so the cutoffs sit many decades out). eps_lo widens the left cutoff when
// the integral itself is tiny (Rinott complement at large h).
std::vector<double> student_body_points(double nu, double eps_lo, double eps_hi) {
  const double lo = -sf::student_t_upper_quantile(eps_lo, nu);
  const double hi = sf::student_t_upper_quantile(eps_hi, nu);
  std::vector<double> pts{lo, hi, 0.0};
  const double body = std::max(5.0, sf::student_t_quantile(0.95, nu));
  pts.push_back(-body);
  pts.push_back(body);
  quad::add_geometric_points(pts, -body, lo);
  quad::add_geometric_points(pts, body, hi);
  return pts;
}

}  // namespace

void validate(const TwoStageProblem& p) {
  if (p.k < 1) invalid("two_stage: requires k >= 1");
  if (!(p.nu >= 1.0)) invalid("two_stage: requires nu >= 1");
  if (!(p.p > 0.0 && p.p < 1.0)) invalid("two_stage: requires p in (0,1)");
  if (!(p.delta > 0.0)) invalid("two_stage: requires delta > 0");
}

double f1(double h, std::int64_t k, double nu, const quad::QuadOptions& opt) {
  if (k < 1) invalid("f1: requires k >= 1");
  if (!(nu > 0.0)) invalid("f1: requires nu > 0");
  const double kd = static_cast<double>(k);
  auto integrand = [&](double t) {
    return std::exp(kd * sf::student_t_log_cdf(t + h, nu) +
                    sf::student_t_log_pdf(t, nu));
  };
  auto pts = student_body_points(nu, 1e-15, 1e-15);
  // center of the G^k transition: k ln G = -1 at t0
  const double t0 = sf::student_t_upper_quantile(std::min(0.5, 1.0 / kd), nu) - h;
  const double width = std::max(1.0, std::fabs(t0 + h) / nu);
  const double lo = pts.front();
  for (double off : {-3.0, 0.0, 3.0}) {
    const double v = t0 + off * width;
    if (v > lo && v < pts[1]) pts.push_back(v);
  }
  const double v = quad::integrate(integrand, std::span<const double>(pts), opt).value;
  return std::clamp(v, 0.0, 1.0);
}

double f2_inner_complement(double h, double nu, const quad::QuadOptions& opt) {
  if (!(nu > 0.0)) invalid("f2: requires nu > 0");
  auto integrand = [&](double t) {
    return std::exp(sf::student_t_log_sf(t + h, nu) + sf::student_t_log_pdf(t, nu));
  };
  // The complement can be ~ h^{-nu}; push the left cutoff far enough that the
  // truncated mass (bounded by G(t_lo)) is negligible relative to it.
  double eps_lo = 1e-16;
  if (h > 2.0) {
    const double approx = 2.0 * std::exp(nu * evt::log_gamma_nu(nu)) * std::pow(h, -nu);
    eps_lo = std::min(eps_lo, std::max(1e-280, approx * 1e-13));
  }
  auto pts = student_body_points(nu, eps_lo, 1e-16);
  const double lo = pts.front();
  const double hi = pts[1];
  for (double off : {-5.0, 0.0, 5.0}) {
    const double v = -h + off;
    if (v > lo && v < hi) pts.push_back(v);
  }
  quad::QuadOptions o = opt;
  o.abs_tol = 0.0;  // the complement needs relative accuracy at any scale
  o.rel_tol = std::max(opt.rel_tol, 1e-12);
  const double v = quad::integrate(integrand, std::span<const double>(pts), o).value;
  return std::clamp(v, 0.0, 1.0);
}

double f2(double h, std::int64_t k, double nu, const quad::QuadOptions& opt) {
  if (k < 1) invalid("f2: requires k >= 1");
  const double c = f2_inner_complement(h, nu, opt);
  return std::exp(static_cast<double>(k) * std::log1p(-c));
}

double h_tilde(std::int64_t k, double nu, double p, Variant variant) {
  if (k < 1) invalid("h_tilde: requires k >= 1");
  if (!(p > 0.0 && p < 1.0)) invalid("h_tilde: requires p in (0,1)");
  const double lg = evt::log_gamma_nu(nu);
  const double lq = -std::log(-std::log(p)) / nu;
  const double extra = variant == Variant::Rinott ? std::log(2.0) / nu : 0.0;
  return std::exp(lg + std::log(static_cast<double>(k)) / nu + lq + extra);
}

double h_gaussian_asymptotic(std::int64_t k, Variant variant) {
  if (k < 2) invalid("h_gaussian_asymptotic: requires k >= 2");
  const double lk = std::log(static_cast<double>(k));
  return variant == Variant::DudewiczDalal ? std::sqrt(2.0 * lk) : 2.0 * std::sqrt(lk);
}

roots::RootResult solve_h1(const TwoStageProblem& p, const quad::QuadOptions& qopt,
                           const roots::RootOptions& ropt) {
  validate(p);
  auto f = [&](double h) { return f1(h, p.k, p.nu, qopt) - p.p; };
  const double seed = p.nu < sf::kStudentNormalSwitch
                          ? h_tilde(p.k, p.nu, p.p, Variant::DudewiczDalal)
                          : (p.k >= 2 ? h_gaussian_asymptotic(p.k, Variant::DudewiczDalal)
                                      : 1.0);
  double lo = seed, hi = seed, flo, fhi;
  if (!roots::expand_bracket(f, lo, hi, flo, fhi))
    throw roots::BracketError("solve_h1: failed to bracket the root");
  return roots::brent(f, lo, hi, flo, fhi, ropt);
}

roots::RootResult solve_h2(const TwoStageProblem& p, const quad::QuadOptions& qopt,
                           const roots::RootOptions& ropt) {
  validate(p);
  // Solve in the complement: C(h) = -expm1(ln p / k), monotone decreasing in
  // h, well-conditioned for any k; then report the f2 residual.
  const double c_target = -std::expm1(std::log(p.p) / static_cast<double>(p.k));
  const double lct = std::log(c_target);
  auto g = [&](double h) { return lct - std::log(f2_inner_complement(h, p.nu, qopt)); };
  const double seed = p.nu < sf::kStudentNormalSwitch
                          ? h_tilde(p.k, p.nu, p.p, Variant::Rinott)
                          : (p.k >= 2 ? h_gaussian_asymptotic(p.k, Variant::Rinott) : 1.0);
  double lo = seed, hi = seed, flo, fhi;
  roots::RootOptions r = ropt;
  r.f_tol = std::min(ropt.f_tol, 1e-11) / std::max(1.0, -std::log(p.p));
  if (!roots::expand_bracket(g, lo, hi, flo, fhi))
    throw roots::BracketError("solve_h2: failed to bracket the root");
  auto res = roots::brent(g, lo, hi, flo, fhi, r);
  res.residual = f2(res.root, p.k, p.nu, qopt) - p.p;
  return res;
}

HConstants solve_h_constants(const TwoStageProblem& p, const quad::QuadOptions& qopt,
                             const roots::RootOptions& ropt) {
  HConstants out{};
  out.diag1 = solve_h1(p, qopt, ropt);
  out.diag2 = solve_h2(p, qopt, ropt);
  out.h1 = out.diag1.root;
  out.h2 = out.diag2.root;
  if (p.nu < sf::kStudentNormalSwitch) {
    out.h1_tilde = h_tilde(p.k, p.nu, p.p, Variant::DudewiczDalal);
    out.h2_tilde = h_tilde(p.k, p.nu, p.p, Variant::Rinott);
  } else if (p.k >= 2) {
    out.h1_tilde = h_gaussian_asymptotic(p.k, Variant::DudewiczDalal);
    out.h2_tilde = h_gaussian_asymptotic(p.k, Variant::Rinott);
  }
  out.ratio_sq = (out.h2 / out.h1) * (out.h2 / out.h1);
  return out;
}

double optimal_nu_condition(double nu, std::int64_t k, double p) {
  if (!(nu > 0.0)) invalid("optimal_nu_condition: requires nu > 0");
  // -k / (sqrt(pi) ln p) is positive because ln p < 0
  const double lead =
      std::log(-static_cast<double>(k) / (std::sqrt(3.14159265358979323846) * std::log(p)));
  return -2.0 - 2.0 * lead + nu + 2.0 * std::log(nu) +
         2.0 * (sf::ln_gamma(0.5 * nu) - sf::ln_gamma(0.5 * (nu + 1.0))) +
         nu * (sf::digamma(0.5 * (nu + 1.0)) - sf::digamma(0.5 * nu));
}

NuChoice optimal_nu(std::int64_t k, double p, NuMode mode, double sum_sigma2,
                    double delta, const quad::QuadOptions& qopt,
                    const roots::RootOptions& ropt) {
  if (k < 2) invalid("optimal_nu: requires k >= 2");
  if (!(p > 0.0 && p < 1.0)) invalid("optimal_nu: requires p in (0,1)");
  NuChoice out{};
  out.nu_exact = std::numeric_limits<double>::quiet_NaN();

  auto H = [&](double nu) { return optimal_nu_condition(nu, k, p); };
  if (!(H(1.0) < 0.0))
    invalid("optimal_nu: k too small (H_k(1) >= 0, no interior optimum)");
  double lo = 1.0, hi = 2.0 * std::log(static_cast<double>(k)) + 10.0;
  while (H(hi) < 0.0) hi *= 2.0;
  auto ra = roots::brent(H, lo, hi, H(lo), H(hi), ropt);
  out.nu_approx = ra.root;
  out.h_at_choice = h_tilde(k, out.nu_approx, p, Variant::DudewiczDalal);

  if (mode == NuMode::Exact) {
    auto r = [&](double nu) {
      TwoStageProblem prob{k, nu, p, 1.0};
      return nu + 2.0 - std::pow(solve_h1(prob, qopt, ropt).root, 2.0);
    };
    double elo = 1.0, ehi = std::max(4.0, 2.0 * out.nu_approx);
    double flo = r(elo);
    if (flo > 0.0) invalid("optimal_nu: exact condition has no root above nu = 1");
    double fhi = r(ehi);
    int guard = 0;
    while (fhi < 0.0 && guard++ < 40) {
      elo = ehi;
      flo = fhi;
      ehi *= 2.0;
      fhi = r(ehi);
    }
    roots::RootOptions re = ropt;
    re.x_tol = std::max(re.x_tol, 1e-7);  // each eval solves an integral equation
    auto rx = roots::brent(r, elo, ehi, flo, fhi, re);
    out.nu_exact = rx.root;
    TwoStageProblem prob{k, out.nu_exact, p, 1.0};
    out.h_at_choice = solve_h1(prob, qopt, ropt).root;
  }
  out.mu_tilde = out.h_at_choice * out.h_at_choice * sum_sigma2 / (delta * delta);
  return out;
}

double expected_sample_size(double h, double nu, double delta,
                            std::span<const double> sigma2, SampleSizeMode mode) {
  if (!(h > 0.0)) invalid("expected_sample_size: requires h > 0");
  if (!(nu >= 1.0)) invalid("expected_sample_size: requires nu >= 1");
  if (!(delta > 0.0)) invalid("expected_sample_size: requires delta > 0");
  const double n0p1 = nu + 2.0;  // N0 + 1 with N0 = nu + 1
  double total = 0.0;
  for (double s2 : sigma2) {
    if (!(s2 > 0.0)) invalid("expected_sample_size: requires positive variances");
    if (mode == SampleSizeMode::PaperDeterministic) {
      total += std::max(n0p1, s2 * h * h / (delta * delta));
    } else {
      // E[max(a, c S^2)] with S^2 ~ sigma^2 chi^2_nu / nu:
      //   a F_{chi2,nu}(x0) + c sigma^2 (1 - F_{chi2,nu+2}(x0)),
      //   x0 = nu a delta^2 / (h^2 sigma^2).
      const double c = h * h / (delta * delta);
      const double x0 = nu * n0p1 / (c * s2);
      total += n0p1 * sf::chi2_cdf(x0, nu) + c * s2 * (1.0 - sf::chi2_cdf(x0, nu + 2.0));
    }
  }
  return total;
}

namespace {

// Marsaglia-Tsang gamma(alpha, 1) draw on a dedicated substream.
double gamma_draw(rng::SubStream& st, double alpha) {
  double boost = 1.0;
  if (alpha < 1.0) {
    boost = std::pow(st.next_uniform(), 1.0 / alpha);
    alpha += 1.0;
  }
  const double d = alpha - 1.0 / 3.0;
  const double c = 1.0 / std::sqrt(9.0 * d);
  for (;;) {
    const double z = sf::normal_quantile(st.next_uniform());
    const double v = std::pow(1.0 + c * z, 3.0);
    if (v <= 0.0) continue;
    const double u = st.next_uniform();
    if (std::log(u) < 0.5 * z * z + d - d * v + d * std::log(v))
      return boost * d * v;
  }
}

}  // namespace

std::vector<NuSeqCheckRow> approx_optimal_sample_check(
    std::span<const std::int64_t> k_grid, double sigma2, double delta,
    NuSequence seq, double coeff, double beta, double p, int replications,
    std::uint64_t seed) {
  if (!(2.0 * 2.718281828459045 * sigma2 > delta * delta))
    invalid("approx_optimal_sample_check: requires 2 e sigma^2 > delta^2");
  if (replications < 1) invalid("approx_optimal_sample_check: requires replications >= 1");
  std::vector<NuSeqCheckRow> rows;
  for (size_t i = 0; i < k_grid.size(); ++i) {
    const std::int64_t k = k_grid[i];
    const double nu_star = optimal_nu(k, p, NuMode::Approx).nu_approx;
    double nu_k = nu_star;
    if (seq == NuSequence::LogK) nu_k = coeff * std::log(static_cast<double>(k));
    if (seq == NuSequence::PowK) nu_k = coeff * std::pow(static_cast<double>(k), beta);
    if (!(nu_k > 1.0)) invalid("approx_optimal_sample_check: nu_k must exceed 1");
    const double h_k = h_tilde(k, nu_k, p, Variant::DudewiczDalal);
    const double h_s = h_tilde(k, nu_star, p, Variant::DudewiczDalal);
    double min_ratio = std::numeric_limits<double>::infinity();
    double sum_ratio = 0.0;
    for (int r = 0; r < replications; ++r) {
      rng::SubStream st(seed, static_cast<std::uint64_t>(i),
                        static_cast<std::uint64_t>(r), kTagNuCheck);
      // One first-stage variance estimate per replication, shared by both
      // sample-size rules, which compare the same population:
      // S^2 ~ sigma^2 chi^2_nu / nu with chi^2_nu = 2 Gamma(nu/2).
      const double s2 = sigma2 * 2.0 * gamma_draw(st, 0.5 * nu_k) / nu_k;
      const double n_k = std::max(nu_k + 2.0, h_k * h_k * s2 / (delta * delta));
      const double n_s = std::max(nu_star + 2.0, h_s * h_s * s2 / (delta * delta));
      const double ratio = n_k / n_s;
      min_ratio = std::min(min_ratio, ratio);
      sum_ratio += ratio;
    }
    rows.push_back({k, nu_k, nu_star, min_ratio, sum_ratio / replications});
  }
  return rows;
}

}  // namespace ranksel::two_stage
