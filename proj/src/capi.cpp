// Copyright 2026 The ranksel Authors
// SPDX-License-Identifier: Apache-2.0
#include "ranksel/ranksel.h"

#include <cmath>
#include <cstdio>
#include <cstring>
#include <string>

#include "extreme_values.hpp"
#include "procedures.hpp"
#include "single_stage.hpp"
#include "special_functions.hpp"
#include "two_stage.hpp"

namespace {

thread_local std::string g_last_error;

rs_status fail(rs_status code, const char* what) {
  g_last_error = what;
  return code;
}

// Map C++ exceptions from the core onto status codes.
template <class Fn>
rs_status guarded(Fn&& fn) {
  try {
    fn();
    return RS_OK;
  } catch (const ranksel::evt::UnsupportedDescriptor& e) {
    return fail(RS_ERR_UNSUPPORTED, e.what());
  } catch (const std::invalid_argument& e) {
    return fail(RS_ERR_INVALID, e.what());
  } catch (const std::domain_error& e) {
    return fail(RS_ERR_INVALID, e.what());
  } catch (const std::exception& e) {
    return fail(RS_ERR_NUMERIC, e.what());
  }
}

ranksel::quad::QuadOptions quad_opts(const rs_num_opts* o) {
  ranksel::quad::QuadOptions q;
  if (o) {
    if (o->quad_abs_tol > 0) q.abs_tol = o->quad_abs_tol;
    if (o->quad_rel_tol > 0) q.rel_tol = o->quad_rel_tol;
    if (o->quad_max_subdivisions > 0) q.max_subdivisions = o->quad_max_subdivisions;
  }
  return q;
}

ranksel::roots::RootOptions root_opts(const rs_num_opts* o) {
  ranksel::roots::RootOptions r;
  if (o) {
    if (o->root_tol > 0) {
      r.x_tol = o->root_tol;
      r.f_tol = o->root_tol;
    }
    if (o->root_max_iter > 0) r.max_iter = o->root_max_iter;
  }
  return r;
}

ranksel::two_stage::Variant to_variant(int v) {
  if (v != RS_VARIANT_DD && v != RS_VARIANT_RINOTT)
    throw std::invalid_argument("variant must be RS_VARIANT_DD or RS_VARIANT_RINOTT");
  return v == RS_VARIANT_DD ? ranksel::two_stage::Variant::DudewiczDalal
                            : ranksel::two_stage::Variant::Rinott;
}

}  // namespace

struct rs_combo {
  ranksel::evt::LimitCombinationSpec spec;
};

extern "C" {

const char* rs_version(void) { return "0.1.0"; }

const char* rs_last_error(void) { return g_last_error.c_str(); }

void rs_num_opts_init(rs_num_opts* opts) {
  if (!opts) return;
  opts->quad_abs_tol = 1e-10;
  opts->quad_rel_tol = 1e-10;
  opts->quad_max_subdivisions = 4000;
  opts->root_tol = 1e-10;
  opts->root_max_iter = 200;
}

void rs_mc_opts_init(rs_mc_opts* opts) {
  if (!opts) return;
  opts->replications = 100000;
  opts->seed = 20240101;
  opts->workers = 0;
}

#define RS_REQUIRE_OUT(ptr) \
  if (!(ptr)) return fail(RS_ERR_INVALID, "null output pointer")

rs_status rs_ln_gamma(double x, double* out) {
  RS_REQUIRE_OUT(out);
  return guarded([&] { *out = ranksel::sf::ln_gamma(x); });
}

rs_status rs_digamma(double x, double* out) {
  RS_REQUIRE_OUT(out);
  return guarded([&] { *out = ranksel::sf::digamma(x); });
}

rs_status rs_trigamma(double x, double* out) {
  RS_REQUIRE_OUT(out);
  return guarded([&] { *out = ranksel::sf::trigamma(x); });
}

rs_status rs_normal_cdf(double x, double* value, double* log_value) {
  RS_REQUIRE_OUT(value);
  return guarded([&] {
    const auto e = ranksel::sf::normal_cdf(x);
    *value = e.value;
    if (log_value) *log_value = e.log_value;
  });
}

rs_status rs_normal_pdf(double x, double* out) {
  RS_REQUIRE_OUT(out);
  return guarded([&] { *out = ranksel::sf::normal_pdf(x); });
}

rs_status rs_normal_quantile(double p, double* out) {
  RS_REQUIRE_OUT(out);
  return guarded([&] { *out = ranksel::sf::normal_quantile(p); });
}

rs_status rs_student_t_cdf(double t, double nu, double* value, double* log_value) {
  RS_REQUIRE_OUT(value);
  return guarded([&] {
    const auto e = ranksel::sf::student_t_cdf(t, nu);
    *value = e.value;
    if (log_value) *log_value = e.log_value;
  });
}

rs_status rs_student_t_pdf(double t, double nu, double* out) {
  RS_REQUIRE_OUT(out);
  return guarded([&] { *out = ranksel::sf::student_t_pdf(t, nu); });
}

rs_status rs_two_t_sum_pdf(double t, double nu, double* out) {
  RS_REQUIRE_OUT(out);
  return guarded([&] { *out = ranksel::sf::two_t_sum_pdf(t, nu); });
}

rs_status rs_gauss_hypergeometric(double a, double b, double c, double z, double* out) {
  RS_REQUIRE_OUT(out);
  return guarded([&] { *out = ranksel::sf::gauss_hypergeometric(a, b, c, z); });
}

rs_status rs_frechet_cdf(double x, double nu, double* out) {
  RS_REQUIRE_OUT(out);
  return guarded([&] { *out = ranksel::sf::frechet_cdf(x, nu); });
}

rs_status rs_frechet_quantile(double p, double nu, double* out) {
  RS_REQUIRE_OUT(out);
  return guarded([&] { *out = ranksel::sf::frechet_quantile(p, nu); });
}

rs_status rs_gumbel_cdf(double x, double* out) {
  RS_REQUIRE_OUT(out);
  return guarded([&] { *out = ranksel::sf::gumbel_cdf(x); });
}

rs_status rs_gumbel_quantile(double p, double* out) {
  RS_REQUIRE_OUT(out);
  return guarded([&] { *out = ranksel::sf::gumbel_quantile(p); });
}

rs_status rs_chi2_cdf(double x, double nu, double* out) {
  RS_REQUIRE_OUT(out);
  return guarded([&] { *out = ranksel::sf::chi2_cdf(x, nu); });
}

rs_status rs_gamma_nu(double nu, double* out) {
  RS_REQUIRE_OUT(out);
  return guarded([&] { *out = ranksel::evt::gamma_nu(nu); });
}

rs_status rs_gaussian_norm_constants(int64_t k, double* a_k, double* b_k) {
  RS_REQUIRE_OUT(a_k);
  RS_REQUIRE_OUT(b_k);
  return guarded([&] {
    const auto c = ranksel::evt::gaussian_norm_constants(k);
    *a_k = c.a_k;
    *b_k = c.b_k;
  });
}

rs_status rs_student_norm_constants(int64_t k, double nu, int summed, double* a_k,
                                    double* b_k) {
  RS_REQUIRE_OUT(a_k);
  RS_REQUIRE_OUT(b_k);
  return guarded([&] {
    const auto c = ranksel::evt::student_norm_constants(k, nu, summed != 0);
    *a_k = c.a_k;
    *b_k = c.b_k;
  });
}

rs_status rs_single_stage_pcs(int64_t k, int64_t s, double delta, double sigma2, double n,
                              const rs_num_opts* opts, double* out) {
  RS_REQUIRE_OUT(out);
  return guarded([&] {
    ranksel::single_stage::SingleStageProblem prob{k, s, delta, sigma2, 0.5, NAN};
    *out = ranksel::single_stage::pcs(prob, n, quad_opts(opts));
  });
}

rs_status rs_single_stage_solve_n(int64_t k, int64_t s, double delta, double sigma2,
                                  double p, double c_limit, const rs_num_opts* opts,
                                  rs_sample_size_result* out) {
  RS_REQUIRE_OUT(out);
  return guarded([&] {
    ranksel::single_stage::SingleStageProblem prob{k, s, delta, sigma2, p, c_limit};
    const auto r =
        ranksel::single_stage::solve_sample_size(prob, quad_opts(opts), root_opts(opts));
    out->n_exact = r.n_exact;
    out->n_asymptotic = r.n_asymptotic;
    out->relative_error = r.relative_error;
    out->n_ceil = r.n_ceil;
    out->residual = r.diagnostics.residual;
    out->iterations = r.diagnostics.iterations;
    out->no_solution = r.no_solution ? 1 : 0;
  });
}

rs_status rs_single_stage_lfc(int64_t k, int64_t s, double delta, double c,
                              double* means_out) {
  RS_REQUIRE_OUT(means_out);
  return guarded([&] {
    ranksel::single_stage::SingleStageProblem prob{k, s, delta, 1.0, 0.5, NAN};
    const auto m = ranksel::single_stage::lfc(prob, c);
    std::memcpy(means_out, m.data(), m.size() * sizeof(double));
  });
}

rs_status rs_two_stage_f1(double h, int64_t k, double nu, const rs_num_opts* opts,
                          double* out) {
  RS_REQUIRE_OUT(out);
  return guarded([&] { *out = ranksel::two_stage::f1(h, k, nu, quad_opts(opts)); });
}

rs_status rs_two_stage_f2(double h, int64_t k, double nu, const rs_num_opts* opts,
                          double* out) {
  RS_REQUIRE_OUT(out);
  return guarded([&] { *out = ranksel::two_stage::f2(h, k, nu, quad_opts(opts)); });
}

rs_status rs_two_stage_solve_h(int64_t k, double nu, double p, const rs_num_opts* opts,
                               rs_h_result* out) {
  RS_REQUIRE_OUT(out);
  return guarded([&] {
    ranksel::two_stage::TwoStageProblem prob{k, nu, p, 1.0};
    const auto r = ranksel::two_stage::solve_h_constants(prob, quad_opts(opts), root_opts(opts));
    out->h1 = r.h1;
    out->h2 = r.h2;
    out->h1_tilde = r.h1_tilde;
    out->h2_tilde = r.h2_tilde;
    out->ratio_sq = r.ratio_sq;
    out->residual1 = r.diag1.residual;
    out->residual2 = r.diag2.residual;
    out->iterations1 = r.diag1.iterations;
    out->iterations2 = r.diag2.iterations;
  });
}

rs_status rs_two_stage_h_tilde(int64_t k, double nu, double p, int variant, double* out) {
  RS_REQUIRE_OUT(out);
  return guarded([&] { *out = ranksel::two_stage::h_tilde(k, nu, p, to_variant(variant)); });
}

rs_status rs_two_stage_h_gaussian_asymptotic(int64_t k, int variant, double* out) {
  RS_REQUIRE_OUT(out);
  return guarded(
      [&] { *out = ranksel::two_stage::h_gaussian_asymptotic(k, to_variant(variant)); });
}

rs_status rs_two_stage_optimal_nu(int64_t k, double p, int mode, double sum_sigma2,
                                  double delta, const rs_num_opts* opts, rs_nu_choice* out) {
  RS_REQUIRE_OUT(out);
  if (mode != RS_NU_MODE_APPROX && mode != RS_NU_MODE_EXACT)
    return fail(RS_ERR_INVALID, "mode must be RS_NU_MODE_APPROX or RS_NU_MODE_EXACT");
  return guarded([&] {
    const auto r = ranksel::two_stage::optimal_nu(
        k, p,
        mode == RS_NU_MODE_APPROX ? ranksel::two_stage::NuMode::Approx
                                  : ranksel::two_stage::NuMode::Exact,
        sum_sigma2, delta, quad_opts(opts), root_opts(opts));
    out->nu_approx = r.nu_approx;
    out->nu_exact = r.nu_exact;
    out->h_at_choice = r.h_at_choice;
    out->mu_tilde = r.mu_tilde;
  });
}

rs_status rs_two_stage_expected_n(double h, double nu, double delta, const double* sigma2,
                                  size_t n_pops, int mode, double* out) {
  RS_REQUIRE_OUT(out);
  if (!sigma2 || n_pops == 0) return fail(RS_ERR_INVALID, "sigma2 array required");
  if (mode != RS_ESS_PAPER && mode != RS_ESS_CHI2)
    return fail(RS_ERR_INVALID, "mode must be RS_ESS_PAPER or RS_ESS_CHI2");
  return guarded([&] {
    *out = ranksel::two_stage::expected_sample_size(
        h, nu, delta, std::span<const double>(sigma2, n_pops),
        mode == RS_ESS_PAPER ? ranksel::two_stage::SampleSizeMode::PaperDeterministic
                             : ranksel::two_stage::SampleSizeMode::ChiSquareExact);
  });
}

rs_status rs_compute_weights(int64_t n0, int64_t ni, double s2, double delta, double h,
                             double* weights_out) {
  RS_REQUIRE_OUT(weights_out);
  return guarded([&] {
    const auto w = ranksel::proc::compute_weights(n0, ni, s2, delta, h);
    std::memcpy(weights_out, w.data(), w.size() * sizeof(double));
  });
}

namespace {

ranksel::proc::PopulationSpec make_spec(const double* means, const double* variances,
                                        size_t n_pops) {
  if (!means || !variances || n_pops == 0)
    throw std::invalid_argument("population arrays required");
  ranksel::proc::PopulationSpec spec;
  spec.means.assign(means, means + n_pops);
  spec.variances.assign(variances, variances + n_pops);
  return spec;
}

ranksel::proc::ProcedureConfig make_config(const rs_procedure_config* config) {
  if (!config) throw std::invalid_argument("procedure config required");
  return ranksel::proc::ProcedureConfig{config->delta, config->n0, config->p, config->h,
                                        to_variant(config->variant)};
}

}  // namespace

rs_status rs_run_procedure(const double* means, const double* variances, size_t n_pops,
                           const rs_procedure_config* config, uint64_t seed,
                           uint64_t replication, int* chosen, int64_t* n_out,
                           double* weighted_means_out, double* s2_out,
                           int64_t* total_samples) {
  RS_REQUIRE_OUT(chosen);
  return guarded([&] {
    const auto out = ranksel::proc::run_procedure(make_spec(means, variances, n_pops),
                                                  make_config(config), seed, replication);
    *chosen = out.chosen;
    if (n_out)
      std::memcpy(n_out, out.per_population_n.data(), n_pops * sizeof(int64_t));
    if (weighted_means_out)
      std::memcpy(weighted_means_out, out.weighted_means.data(), n_pops * sizeof(double));
    if (s2_out)
      std::memcpy(s2_out, out.first_stage_variances.data(), n_pops * sizeof(double));
    if (total_samples) *total_samples = out.total_samples;
  });
}

rs_status rs_estimate_pcs(const double* means, const double* variances, size_t n_pops,
                          const rs_procedure_config* config, const rs_mc_opts* mc,
                          rs_pcs_estimate* out) {
  RS_REQUIRE_OUT(out);
  rs_mc_opts defaults;
  rs_mc_opts_init(&defaults);
  if (!mc) mc = &defaults;
  return guarded([&] {
    const auto est =
        ranksel::proc::estimate_pcs(make_spec(means, variances, n_pops), make_config(config),
                                    mc->replications, mc->seed, mc->workers);
    out->p_hat = est.p_hat;
    out->replications = est.replications;
    out->ci_half_width = est.ci_half_width;
    out->seed = est.seed;
  });
}

rs_combo* rs_combo_new(int family, double nu) {
  if (family != RS_FAMILY_GAUSSIAN && family != RS_FAMILY_STUDENT) {
    g_last_error = "family must be RS_FAMILY_GAUSSIAN or RS_FAMILY_STUDENT";
    return nullptr;
  }
  auto* combo = new rs_combo;
  combo->spec.family = family == RS_FAMILY_GAUSSIAN
                           ? ranksel::evt::EvtFamily::GaussianGumbel
                           : ranksel::evt::EvtFamily::StudentFrechet;
  combo->spec.nu = nu;
  return combo;
}

void rs_combo_free(rs_combo* combo) { delete combo; }

#define RS_REQUIRE_COMBO(combo) \
  if (!(combo)) return fail(RS_ERR_INVALID, "null combo handle")

rs_status rs_combo_add_group_finite(rs_combo* combo, int64_t size, double alpha) {
  RS_REQUIRE_COMBO(combo);
  return guarded([&] {
    ranksel::evt::GroupSpec g;
    g.finite = true;
    g.size = size;
    g.alpha = alpha;
    combo->spec.groups.push_back(g);
  });
}

rs_status rs_combo_add_group_infinite(rs_combo* combo, int growth_kind, double coeff,
                                      double beta, double alpha) {
  RS_REQUIRE_COMBO(combo);
  return guarded([&] {
    ranksel::evt::GroupSpec g;
    g.finite = false;
    g.alpha = alpha;
    switch (growth_kind) {
      case RS_GROWTH_REMAINDER:
        g.growth.kind = ranksel::evt::GrowthSpec::Kind::Remainder;
        break;
      case RS_GROWTH_POW:
        g.growth = {ranksel::evt::GrowthSpec::Kind::PowK, coeff, beta};
        break;
      case RS_GROWTH_LOG:
        g.growth = {ranksel::evt::GrowthSpec::Kind::LogK, coeff, 0.0};
        break;
      default:
        throw std::invalid_argument("unknown growth kind");
    }
    combo->spec.groups.push_back(g);
  });
}

rs_status rs_combo_xi_set_constant(rs_combo* combo, double c) {
  RS_REQUIRE_COMBO(combo);
  combo->spec.xi.constant = c;
  return RS_OK;
}

rs_status rs_combo_xi_add_pow(rs_combo* combo, double coeff, double beta) {
  RS_REQUIRE_COMBO(combo);
  combo->spec.xi.pow_coeff = coeff;
  combo->spec.xi.pow_beta = beta;
  return RS_OK;
}

rs_status rs_combo_xi_add_log(rs_combo* combo, double coeff) {
  RS_REQUIRE_COMBO(combo);
  combo->spec.xi.log_coeff = coeff;
  return RS_OK;
}

rs_status rs_combo_xi_add_b_term(rs_combo* combo, int group, double coeff) {
  RS_REQUIRE_COMBO(combo);
  combo->spec.xi.b_terms.emplace_back(group, coeff);
  return RS_OK;
}

rs_status rs_combo_xi_add_inv_a_term(rs_combo* combo, int group, double coeff) {
  RS_REQUIRE_COMBO(combo);
  combo->spec.xi.inv_a_terms.emplace_back(group, coeff);
  return RS_OK;
}

rs_status rs_combo_limit_cdf(const rs_combo* combo, const rs_num_opts* opts,
                             rs_limit_law_result* out) {
  RS_REQUIRE_COMBO(combo);
  RS_REQUIRE_OUT(out);
  return guarded([&] {
    ranksel::quad::QuadOptions q = quad_opts(opts);
    // limit-law convolutions only need a few digits more than the report
    q.abs_tol = std::max(q.abs_tol, 1e-9);
    const auto r = ranksel::evt::limit_combo_cdf(combo->spec, q);
    out->L = r.L;
    out->L_star = r.L_star;
    out->l_star_kind = r.l_star_kind;
    std::snprintf(out->v_descriptor, sizeof out->v_descriptor, "%s",
                  r.v_descriptor.c_str());
  });
}

rs_status rs_combo_mc(const rs_combo* combo, int64_t k, const rs_mc_opts* mc,
                      rs_pcs_estimate* out) {
  RS_REQUIRE_COMBO(combo);
  RS_REQUIRE_OUT(out);
  rs_mc_opts defaults;
  rs_mc_opts_init(&defaults);
  if (!mc) mc = &defaults;
  return guarded([&] {
    const auto est = ranksel::evt::mc_partial_maxima(combo->spec, k, mc->replications,
                                                     mc->seed, mc->workers);
    out->p_hat = est.p_hat;
    out->replications = est.replications;
    out->ci_half_width = est.ci_half_width;
    out->seed = est.seed;
  });
}

rs_status rs_combo_xi_at(const rs_combo* combo, int64_t k, double* out) {
  RS_REQUIRE_COMBO(combo);
  RS_REQUIRE_OUT(out);
  return guarded([&] { *out = ranksel::evt::xi_at(combo->spec, k); });
}

}  // extern "C"
