// Copyright 2026 The ranksel Authors
// SPDX-License-Identifier: Apache-2.0
#include "extreme_values.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <thread>

#include "rng.hpp"
#include "special_functions.hpp"

namespace ranksel::evt {

namespace {

constexpr double kPi = 3.14159265358979323846;
constexpr double kLn4Pi = 2.53102424696929153;  // ln(4 pi)
constexpr double kCoefTol = 1e-12;              // exact-cancellation tolerance
constexpr std::uint64_t kTagMc = 0xE57;

[[noreturn]] void invalid(const std::string& msg) { throw std::invalid_argument(msg); }

}  // namespace

double log_gamma_nu(double nu) {
  if (!(nu > 0.0)) invalid("gamma_nu: requires nu > 0");
  return (sf::ln_gamma(0.5 * (nu + 1.0)) - (1.0 - 0.5 * nu) * std::log(nu) -
          0.5 * std::log(kPi) - sf::ln_gamma(0.5 * nu)) /
         nu;
}

double gamma_nu(double nu) { return std::exp(log_gamma_nu(nu)); }

EvtConstants gaussian_norm_constants(std::int64_t k) {
  if (k < 2) invalid("gaussian_norm_constants: requires k >= 2");
  const double lk = std::log(static_cast<double>(k));
  const double a = std::sqrt(2.0 * lk);
  // classical Gumbel centering (Leadbetter et al., Example 1.7.1)
  const double b = a - (std::log(lk) + kLn4Pi) / (2.0 * a);
  return {a, b, EvtFamily::GaussianGumbel};
}

EvtConstants student_norm_constants(std::int64_t k, double nu, bool summed) {
  if (k < 1) invalid("student_norm_constants: requires k >= 1");
  const double lg = log_gamma_nu(nu);
  const double la = -lg - std::log(static_cast<double>(k)) / nu -
                    (summed ? std::log(2.0) / nu : 0.0);
  return {std::exp(la), 0.0,
          summed ? EvtFamily::TwoTSumFrechet : EvtFamily::StudentFrechet};
}

double wilson_half_width(double p_hat, std::int64_t n) {
  constexpr double z = 1.959963984540054;  // Phi^{-1}(0.975)
  const double nn = static_cast<double>(n);
  const double denom = 1.0 + z * z / nn;
  return z / denom * std::sqrt(p_hat * (1.0 - p_hat) / nn + z * z / (4.0 * nn * nn));
}

// --- descriptor validation and finite-k evaluation ---------------------------

void validate(const LimitCombinationSpec& spec) {
  if (spec.family == EvtFamily::TwoTSumFrechet)
    invalid("limit spec: base family must be GaussianGumbel or StudentFrechet");
  if (spec.family == EvtFamily::StudentFrechet && !(spec.nu > 0.0))
    invalid("limit spec: requires nu > 0");
  if (spec.groups.empty() || spec.groups.size() > 4)
    invalid("limit spec: between 1 and 4 groups supported");
  int remainders = 0, infinite = 0;
  double linear_sum = 0.0;
  for (const auto& g : spec.groups) {
    if (g.finite) {
      if (g.size < 1) invalid("limit spec: finite group size must be >= 1");
      continue;
    }
    ++infinite;
    switch (g.growth.kind) {
      case GrowthSpec::Kind::Remainder:
        ++remainders;
        break;
      case GrowthSpec::Kind::PowK:
        if (!(g.growth.coeff > 0.0) || !(g.growth.beta > 0.0) || g.growth.beta > 1.0)
          invalid("limit spec: PowK growth needs coeff > 0 and beta in (0,1]");
        if (g.growth.beta == 1.0) linear_sum += g.growth.coeff;
        break;
      case GrowthSpec::Kind::LogK:
        if (!(g.growth.coeff > 0.0)) invalid("limit spec: LogK growth needs coeff > 0");
        break;
    }
  }
  if (infinite == 0)
    invalid("limit spec: at least one infinite (Remainder) group is required");
  if (remainders != 1)
    invalid("limit spec: exactly one Remainder group is required");
  if (linear_sum >= 1.0)
    invalid("limit spec: linear growth coefficients must sum below 1");
  const int t_count = static_cast<int>(spec.groups.size());
  for (const auto& [idx, c] : spec.xi.b_terms)
    if (idx < 0 || idx >= t_count) invalid("limit spec: xi b-term references unknown group");
  for (const auto& [idx, c] : spec.xi.inv_a_terms)
    if (idx < 0 || idx >= t_count) invalid("limit spec: xi 1/a-term references unknown group");
  if (spec.xi.pow_coeff != 0.0 && !(spec.xi.pow_beta > 0.0))
    invalid("limit spec: xi power term needs beta > 0");
}

std::vector<std::int64_t> group_sizes_at(const LimitCombinationSpec& spec, std::int64_t k) {
  std::vector<std::int64_t> sizes(spec.groups.size(), 0);
  std::int64_t used = 0;
  int rem_index = -1;
  for (size_t t = 0; t < spec.groups.size(); ++t) {
    const auto& g = spec.groups[t];
    if (g.finite) {
      sizes[t] = g.size;
    } else if (g.growth.kind == GrowthSpec::Kind::PowK) {
      sizes[t] = std::max<std::int64_t>(
          1, std::llround(g.growth.coeff * std::pow(static_cast<double>(k), g.growth.beta)));
    } else if (g.growth.kind == GrowthSpec::Kind::LogK) {
      sizes[t] = std::max<std::int64_t>(
          1, std::llround(g.growth.coeff * std::log(static_cast<double>(k))));
    } else {
      rem_index = static_cast<int>(t);
      continue;
    }
    used += sizes[t];
  }
  if (k - used < 1) invalid("limit spec: k too small for the requested partition");
  sizes[rem_index] = k - used;
  return sizes;
}

namespace {

double b_of(const LimitCombinationSpec& spec, std::int64_t m) {
  if (spec.family == EvtFamily::StudentFrechet) return 0.0;
  if (m < 2) invalid("limit spec: normalizing-constant reference needs group size >= 2");
  return gaussian_norm_constants(m).b_k;
}

double a_of(const LimitCombinationSpec& spec, std::int64_t m) {
  if (spec.family == EvtFamily::StudentFrechet)
    return student_norm_constants(m, spec.nu).a_k;
  if (m < 2) invalid("limit spec: normalizing-constant reference needs group size >= 2");
  return gaussian_norm_constants(m).a_k;
}

}  // namespace

double xi_at(const LimitCombinationSpec& spec, std::int64_t k) {
  const auto sizes = group_sizes_at(spec, k);
  const double kd = static_cast<double>(k);
  double v = spec.xi.constant;
  if (spec.xi.pow_coeff != 0.0) v += spec.xi.pow_coeff * std::pow(kd, spec.xi.pow_beta);
  if (spec.xi.log_coeff != 0.0) v += spec.xi.log_coeff * std::log(kd);
  for (const auto& [idx, c] : spec.xi.b_terms) v += c * b_of(spec, sizes[idx]);
  for (const auto& [idx, c] : spec.xi.inv_a_terms) v += c / a_of(spec, sizes[idx]);
  return v;
}

// --- limiting components and their convolution -------------------------------

namespace {

struct Component {
  enum class Kind { Gumbel, Frechet, GaussMax };
  Kind kind;
  double weight;  // nonzero
  double param;   // Frechet: nu ; GaussMax: delta (integer group size)
};

double std_cdf(const Component& c, double y) {
  switch (c.kind) {
    case Component::Kind::Gumbel:
      return sf::gumbel_cdf(y);
    case Component::Kind::Frechet:
      return sf::frechet_cdf(y, c.param);
    case Component::Kind::GaussMax:
      return std::exp(c.param * sf::normal_log_cdf(y));
  }
  return 0.0;
}

double std_log_pdf(const Component& c, double y) {
  switch (c.kind) {
    case Component::Kind::Gumbel:
      return -y - std::exp(-y);
    case Component::Kind::Frechet: {
      if (y <= 0.0) return -std::numeric_limits<double>::infinity();
      const double p = std::pow(y, -c.param);
      return std::log(c.param) + std::log(p / y) - p;
    }
    case Component::Kind::GaussMax:
      return std::log(c.param) + (c.param - 1.0) * sf::normal_log_cdf(y) +
             sf::normal_log_pdf(y);
  }
  return -std::numeric_limits<double>::infinity();
}

double std_quantile(const Component& c, double p) {
  switch (c.kind) {
    case Component::Kind::Gumbel:
      return sf::gumbel_quantile(p);
    case Component::Kind::Frechet:
      return sf::frechet_quantile(p, c.param);
    case Component::Kind::GaussMax: {
      const double q = -std::expm1(std::log(p) / c.param);
      return sf::normal_upper_quantile(q);
    }
  }
  return 0.0;
}

double comp_cdf(const Component& c, double x) {
  return c.weight > 0.0 ? std_cdf(c, x / c.weight) : 1.0 - std_cdf(c, x / c.weight);
}

double comp_pdf(const Component& c, double x) {
  return std::exp(std_log_pdf(c, x / c.weight)) / std::fabs(c.weight);
}

// Probability-ladder break points of the scaled component's support; dense
// enough toward both ends that heavy Frechet tails never hide inside one
// panel.
std::vector<double> comp_breaks(const Component& c) {
  static constexpr double kLadder[] = {
      1e-10,      1e-8,       1e-6,       1e-4,       1e-3,       0.01, 0.05,
      0.25,       0.5,        0.75,       0.95,       0.99,       1.0 - 1e-3,
      1.0 - 1e-4, 1.0 - 1e-6, 1.0 - 1e-8, 1.0 - 1e-10};
  std::vector<double> out;
  for (double p : kLadder) out.push_back(c.weight * std_quantile(c, p));
  std::sort(out.begin(), out.end());
  return out;
}

// P(sum of independent scaled components <= x) by nested adaptive quadrature.
double sum_cdf(const std::vector<Component>& comps, size_t from, double x,
               const quad::QuadOptions& opt) {
  if (from + 1 == comps.size()) return comp_cdf(comps[from], x);
  const Component& c = comps[from];
  const auto breaks = comp_breaks(c);
  quad::QuadOptions inner = opt;
  inner.abs_tol = std::max(opt.abs_tol * 0.5, 1e-12);
  auto integrand = [&](double u) {
    const double tail = sum_cdf(comps, from + 1, x - u, inner);
    return tail <= 0.0 ? 0.0 : comp_pdf(c, u) * tail;
  };
  return quad::integrate(integrand, std::span<const double>(breaks), opt).value;
}

double convolved_cdf(const std::vector<Component>& comps, double x,
                     const quad::QuadOptions& opt) {
  const double v = sum_cdf(comps, 0, x, opt);
  return std::clamp(v, 0.0, 1.0);
}

std::string describe(const std::vector<Component>& comps) {
  if (comps.empty()) return "V degenerate at 0";
  std::string out = "V = ";
  char buf[96];
  for (size_t i = 0; i < comps.size(); ++i) {
    const auto& c = comps[i];
    const char* name = c.kind == Component::Kind::Gumbel ? "Gumbel"
                       : c.kind == Component::Kind::Frechet ? "Frechet"
                                                            : "GaussMax";
    if (c.kind == Component::Kind::Gumbel)
      std::snprintf(buf, sizeof buf, "%s%.6g*%s", i ? " + " : "", c.weight, name);
    else
      std::snprintf(buf, sizeof buf, "%s%.6g*%s(%.6g)", i ? " + " : "", c.weight, name,
                    c.param);
    out += buf;
  }
  return out;
}

struct InfiniteGroupInfo {
  int index;
  double beta;   // growth exponent; 0 marks LogK
  double coeff;  // growth coefficient (Remainder: 1 - sum of linear PowK)
  bool is_log;
};

std::vector<InfiniteGroupInfo> infinite_groups(const LimitCombinationSpec& spec) {
  double linear_sum = 0.0;
  for (const auto& g : spec.groups)
    if (!g.finite && g.growth.kind == GrowthSpec::Kind::PowK && g.growth.beta == 1.0)
      linear_sum += g.growth.coeff;
  std::vector<InfiniteGroupInfo> out;
  for (size_t t = 0; t < spec.groups.size(); ++t) {
    const auto& g = spec.groups[t];
    if (g.finite) continue;
    InfiniteGroupInfo info{static_cast<int>(t), 0.0, 0.0, false};
    switch (g.growth.kind) {
      case GrowthSpec::Kind::Remainder:
        info.beta = 1.0;
        info.coeff = 1.0 - linear_sum;
        break;
      case GrowthSpec::Kind::PowK:
        info.beta = g.growth.beta;
        info.coeff = g.growth.coeff;
        break;
      case GrowthSpec::Kind::LogK:
        info.is_log = true;
        info.coeff = g.growth.coeff;
        break;
    }
    out.push_back(info);
  }
  return out;
}

LimitLawResult finish(double L, int kind, double l_star, std::string desc) {
  LimitLawResult r;
  r.L = std::clamp(L, 0.0, 1.0);
  r.l_star_kind = kind;
  r.L_star = kind == 0 ? l_star
                       : (kind > 0 ? std::numeric_limits<double>::infinity()
                                   : -std::numeric_limits<double>::infinity());
  r.v_descriptor = std::move(desc);
  return r;
}

}  // namespace

LimitLawResult limit_combo_cdf(const LimitCombinationSpec& spec,
                               const quad::QuadOptions& opt) {
  validate(spec);
  const size_t t_count = spec.groups.size();
  std::vector<double> bcoef(t_count, 0.0), xcoef(t_count, 0.0);
  for (const auto& [idx, c] : spec.xi.b_terms) bcoef[idx] += c;
  for (const auto& [idx, c] : spec.xi.inv_a_terms) xcoef[idx] += c;
  const auto infos = infinite_groups(spec);

  if (spec.family == EvtFamily::StudentFrechet) {
    // heavy-tail (Frechet) path: b == 0, finite groups vanish under the a-scaling.
    const double nu = spec.nu;
    const InfiniteGroupInfo* star = nullptr;
    for (const auto& gi : infos) {
      if (!star) { star = &gi; continue; }
      const double b0 = star->is_log ? 0.0 : star->beta;
      const double b1 = gi.is_log ? 0.0 : gi.beta;
      if (b1 > b0 + kCoefTol) star = &gi;
    }
    auto lambda_of = [&](const InfiniteGroupInfo& gi) -> double {
      if (gi.is_log) return star->is_log ? std::pow(gi.coeff / star->coeff, 1.0 / nu) : 0.0;
      if (star->is_log) {
        throw UnsupportedDescriptor("limit spec: power group grows faster than t*");
      }
      if (gi.beta < star->beta - kCoefTol) return 0.0;
      return std::pow(gi.coeff / star->coeff, 1.0 / nu);
    };

    // L** = lim a_{delta(t*)} * xi_k
    int kind = 0;
    double l2 = 0.0;
    const double scale_beta = star->is_log ? 0.0 : star->beta;
    if (spec.xi.pow_coeff != 0.0) {
      const double target = scale_beta / nu;
      if (spec.xi.pow_beta > target + kCoefTol)
        kind = spec.xi.pow_coeff > 0.0 ? 1 : -1;
      else if (std::fabs(spec.xi.pow_beta - target) <= kCoefTol) {
        if (star->is_log)
          throw UnsupportedDescriptor("limit spec: power threshold against log-growth group");
        l2 += spec.xi.pow_coeff * std::exp(-log_gamma_nu(nu)) *
              std::pow(star->coeff, -1.0 / nu);
      }
    }
    if (kind == 0)
      for (const auto& gi : infos) l2 += xcoef[gi.index] * lambda_of(gi);

    std::vector<Component> comps;
    for (const auto& gi : infos) {
      const double w = spec.groups[gi.index].alpha * lambda_of(gi);
      if (w != 0.0) comps.push_back({Component::Kind::Frechet, w, nu});
    }
    const std::string desc = describe(comps);
    if (kind != 0) return finish(kind > 0 ? 1.0 : 0.0, kind, 0.0, desc);
    if (comps.empty()) {
      if (l2 > 0.0) return finish(1.0, 0, l2, desc);
      if (l2 < 0.0) return finish(0.0, 0, l2, desc);
      // degenerate at the boundary: decide by the pre-limit sign
      const double s = xi_at(spec, std::int64_t(1) << 40);
      return finish(s >= 0.0 ? 1.0 : 0.0, 0, 0.0, desc);
    }
    return finish(convolved_cdf(comps, l2, opt), 0, l2, desc);
  }

  // Gaussian / Gumbel path (with the refined scaling when the
  // coarse limit is degenerate).
  double c0 = spec.xi.constant;
  for (size_t t = 0; t < t_count; ++t) {
    if (!spec.groups[t].finite) continue;
    if (bcoef[t] != 0.0) c0 += bcoef[t] * b_of(spec, spec.groups[t].size);
    if (xcoef[t] != 0.0) c0 += xcoef[t] / a_of(spec, spec.groups[t].size);
  }
  double A = 0.0, B = 0.0, log_w_sum = 0.0;
  bool log_w_nonzero = false, log_x_nonzero = false;
  for (const auto& gi : infos) {
    const double w = bcoef[gi.index] - spec.groups[gi.index].alpha;
    if (gi.is_log) {
      log_w_sum += w;
      if (std::fabs(w) > kCoefTol) log_w_nonzero = true;
      if (std::fabs(xcoef[gi.index]) > kCoefTol) log_x_nonzero = true;
    } else {
      A += w * std::sqrt(gi.beta);
      B += w / std::sqrt(gi.beta);
    }
  }

  int kind = 0;
  if (spec.xi.pow_coeff != 0.0)
    kind = spec.xi.pow_coeff > 0.0 ? 1 : -1;
  else if (spec.xi.log_coeff != 0.0)
    kind = spec.xi.log_coeff > 0.0 ? 1 : -1;
  else if (std::fabs(A) > kCoefTol)
    kind = A > 0.0 ? 1 : -1;
  else if (std::fabs(log_w_sum) > kCoefTol)
    kind = log_w_sum > 0.0 ? 1 : -1;

  std::vector<Component> finite_comps;
  for (size_t t = 0; t < t_count; ++t)
    if (spec.groups[t].finite && spec.groups[t].alpha != 0.0)
      finite_comps.push_back({Component::Kind::GaussMax, spec.groups[t].alpha,
                              static_cast<double>(spec.groups[t].size)});

  if (kind != 0)
    return finish(kind > 0 ? 1.0 : 0.0, kind, 0.0, describe(finite_comps));
  if (!finite_comps.empty())
    return finish(convolved_cdf(finite_comps, c0, opt), 0, c0, describe(finite_comps));
  if (c0 != 0.0) return finish(c0 > 0.0 ? 1.0 : 0.0, 0, c0, "V degenerate at 0");

  // Refined scaling by a_{delta(t*)}: Gumbel components with kappa weights.
  if (log_w_nonzero || log_x_nonzero)
    throw UnsupportedDescriptor(
        "limit spec: refined limit with log-growth references is not resolvable");
  if (std::fabs(B) > kCoefTol)
    return finish(B < 0.0 ? 1.0 : 0.0, B < 0.0 ? 1 : -1, 0.0, "V degenerate at 0");

  double beta_star = 0.0;
  for (const auto& gi : infos)
    if (!gi.is_log) beta_star = std::max(beta_star, gi.beta);
  const double sqrt_bstar = std::sqrt(beta_star);
  double l2 = 0.0;
  std::vector<Component> comps;
  for (const auto& gi : infos) {
    if (gi.is_log) continue;
    const double kappa = sqrt_bstar / std::sqrt(gi.beta);
    const double w = bcoef[gi.index] - spec.groups[gi.index].alpha;
    l2 += xcoef[gi.index] * kappa;
    l2 += sqrt_bstar * (w / std::sqrt(gi.beta)) *
          (std::log(gi.coeff) - 0.5 * (std::log(gi.beta) - kLn4Pi));
    const double aw = spec.groups[gi.index].alpha * kappa;
    if (aw != 0.0) comps.push_back({Component::Kind::Gumbel, aw, 0.0});
  }
  const std::string desc = describe(comps);
  if (comps.empty()) {
    if (l2 != 0.0) return finish(l2 > 0.0 ? 1.0 : 0.0, 0, l2, desc);
    throw UnsupportedDescriptor("limit spec: fully degenerate boundary case");
  }
  return finish(convolved_cdf(comps, l2, opt), 0, l2, desc);
}

// --- Monte Carlo comparison ---------------------------------------------------

McEstimate mc_partial_maxima(const LimitCombinationSpec& spec, std::int64_t k,
                             std::int64_t replications, std::uint64_t seed,
                             int workers) {
  validate(spec);
  if (replications < 1) invalid("mc_partial_maxima: requires replications >= 1");
  const auto sizes = group_sizes_at(spec, k);
  const double xi = xi_at(spec, k);
  const bool student = spec.family == EvtFamily::StudentFrechet;
  const double nu = spec.nu;

  struct Draw {
    int index;
    double alpha;
    double size;
  };
  std::vector<Draw> draws;
  for (size_t t = 0; t < spec.groups.size(); ++t)
    if (spec.groups[t].alpha != 0.0)
      draws.push_back({static_cast<int>(t), spec.groups[t].alpha,
                       static_cast<double>(sizes[t])});

  if (workers <= 0)
    workers = std::max(1u, std::thread::hardware_concurrency());
  workers = static_cast<int>(std::min<std::int64_t>(workers, replications));

  auto count_range = [&](std::int64_t lo, std::int64_t hi) {
    std::int64_t hits = 0;
    for (std::int64_t r = lo; r < hi; ++r) {
      double total = 0.0;
      for (const auto& d : draws) {
        const double u = rng::uniform_at(seed, static_cast<std::uint64_t>(r),
                                         static_cast<std::uint64_t>(d.index), 0, kTagMc);
        // max of m iid draws: F^{-1}(u^{1/m}), complement kept exact
        const double q = -std::expm1(std::log(u) / d.size);
        const double m = student ? sf::student_t_upper_quantile(q, nu)
                                 : sf::normal_upper_quantile(q);
        total += d.alpha * m;
      }
      if (total <= xi) ++hits;
    }
    return hits;
  };

  std::vector<std::int64_t> partial(workers, 0);
  std::vector<std::thread> pool;
  const std::int64_t chunk = (replications + workers - 1) / workers;
  for (int w = 0; w < workers; ++w) {
    const std::int64_t lo = w * chunk;
    const std::int64_t hi = std::min<std::int64_t>(replications, lo + chunk);
    if (lo >= hi) break;
    pool.emplace_back([&, w, lo, hi] { partial[w] = count_range(lo, hi); });
  }
  for (auto& th : pool) th.join();
  std::int64_t hits = 0;
  for (auto h : partial) hits += h;

  McEstimate est;
  est.p_hat = static_cast<double>(hits) / static_cast<double>(replications);
  est.ci_half_width = wilson_half_width(est.p_hat, replications);
  est.replications = replications;
  est.seed = seed;
  return est;
}

}  // namespace ranksel::evt
