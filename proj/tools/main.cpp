// Copyright 2026 The ranksel Authors
// SPDX-License-Identifier: Apache-2.0
//
// ranksel command-line tool. Talks to the library exclusively through the
// C API in ranksel/ranksel.h.

#include <CLI11.hpp>
#include <cmath>
#include <cstdint>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <iostream>
#include <map>
#include <memory>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "ranksel/ranksel.h"

namespace {

constexpr int kExitOk = 0;
constexpr int kExitBadArgs = 2;
constexpr int kExitNumeric = 3;

struct CliError {
  int code;
  std::string message;
};

[[noreturn]] void bail(int code, const std::string& msg) { throw CliError{code, msg}; }

void check(rs_status st) {
  if (st == RS_OK) return;
  bail(st == RS_ERR_INVALID ? kExitBadArgs : kExitNumeric, rs_last_error());
}

// 9 significant digits, locale-independent; shared by all CSV/row output.
std::string fmt9(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.9g", v);
  return buf;
}

struct RunConfig {
  rs_num_opts num;
  rs_mc_opts mc;
  std::string output_path;
};

void load_config_file(const std::string& path, RunConfig& cfg) {
  std::ifstream in(path);
  if (!in) bail(kExitBadArgs, "cannot open config file: " + path);
  std::string line;
  int lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    const auto hash = line.find('#');
    if (hash != std::string::npos) line.erase(hash);
    const auto eq = line.find('=');
    if (eq == std::string::npos) {
      if (line.find_first_not_of(" \t\r") != std::string::npos)
        bail(kExitBadArgs, "config line " + std::to_string(lineno) + ": expected key = value");
      continue;
    }
    auto trim = [](std::string s) {
      const auto b = s.find_first_not_of(" \t\r");
      const auto e = s.find_last_not_of(" \t\r");
      return b == std::string::npos ? std::string() : s.substr(b, e - b + 1);
    };
    const std::string key = trim(line.substr(0, eq));
    const std::string value = trim(line.substr(eq + 1));
    try {
      if (key == "abs_tol") cfg.num.quad_abs_tol = std::stod(value);
      else if (key == "rel_tol") cfg.num.quad_rel_tol = std::stod(value);
      else if (key == "max_subdivisions") cfg.num.quad_max_subdivisions = std::stoi(value);
      else if (key == "root_tol") cfg.num.root_tol = std::stod(value);
      else if (key == "root_max_iter") cfg.num.root_max_iter = std::stoi(value);
      else if (key == "replications") cfg.mc.replications = std::stoll(value);
      else if (key == "seed") cfg.mc.seed = std::stoull(value);
      else if (key == "workers") cfg.mc.workers = std::stoi(value);
      else if (key == "output_path") cfg.output_path = value;
      else if (key == "format") {
        if (value != "csv") bail(kExitBadArgs, "config: only format = csv is supported");
      } else bail(kExitBadArgs, "config: unknown key '" + key + "'");
    } catch (const CliError&) {
      throw;
    } catch (const std::exception&) {
      bail(kExitBadArgs, "config: bad value for '" + key + "'");
    }
  }
}

struct OutStream {
  std::ofstream file;
  std::ostream* os = &std::cout;
  explicit OutStream(const std::string& path) {
    if (!path.empty()) {
      file.open(path, std::ios::binary);  // binary: byte-identical re-emission
      if (!file) bail(kExitBadArgs, "cannot open output file: " + path);
      os = &file;
    }
  }
};

void emit_row(std::ostream& os, const std::vector<std::string>& cells) {
  for (size_t i = 0; i < cells.size(); ++i) {
    if (i) os << ',';
    os << cells[i];
  }
  os << '\n';
}

// --- problem-size helpers -----------------------------------------------------

int64_t s_from_rule(const std::string& rule, int64_t k, double* c_limit) {
  double psi, beta;
  if (rule == "half-sqrt") {
    psi = 0.5;
    beta = 0.5;
  } else if (rule.rfind("pow:", 0) == 0) {
    if (std::sscanf(rule.c_str() + 4, "%lf,%lf", &psi, &beta) != 2)
      bail(kExitBadArgs, "bad --s-rule, expected half-sqrt or pow:<psi>,<beta>");
  } else {
    bail(kExitBadArgs, "bad --s-rule, expected half-sqrt or pow:<psi>,<beta>");
  }
  *c_limit = beta;
  const auto s = static_cast<int64_t>(std::ceil(psi * std::pow(double(k), beta)));
  return std::max<int64_t>(1, s);
}

std::vector<int64_t> k_grid(int64_t max_k) {
  std::vector<int64_t> grid;
  for (int64_t k = 10; k <= max_k; k *= 10) grid.push_back(k);
  return grid;
}

// --- subcommands ----------------------------------------------------------------

int cmd_solve_n(const RunConfig& cfg, int64_t k, int64_t s, const std::string& s_rule,
                double p, double delta, double sigma2) {
  double c_limit = std::nan("");
  if (!s_rule.empty()) s = s_from_rule(s_rule, k, &c_limit);
  if (s <= 0) bail(kExitBadArgs, "provide --s or --s-rule");
  rs_sample_size_result r;
  check(rs_single_stage_solve_n(k, s, delta, sigma2, p, c_limit, &cfg.num, &r));
  OutStream out(cfg.output_path);
  emit_row(*out.os, {"k", "s", "p", "n_exact", "n_asymptotic", "rel_err"});
  emit_row(*out.os, {std::to_string(k), std::to_string(s), fmt9(p), fmt9(r.n_exact),
                     fmt9(r.n_asymptotic), fmt9(r.relative_error)});
  if (r.no_solution)
    std::cerr << "note: pcs stays above p for every n > 0; n_exact reports the probe bound\n";
  return kExitOk;
}

int cmd_solve_h(const RunConfig& cfg, int64_t k, double nu, double p,
                const std::string& which) {
  if (which != "dd" && which != "rinott" && which != "both")
    bail(kExitBadArgs, "--which must be dd, rinott or both");
  rs_h_result r;
  check(rs_two_stage_solve_h(k, nu, p, &cfg.num, &r));
  OutStream out(cfg.output_path);
  std::vector<std::string> head{"k", "nu", "p"};
  std::vector<std::string> row{std::to_string(k), fmt9(nu), fmt9(p)};
  if (which != "rinott") {
    head.insert(head.end(), {"h1", "h1_tilde", "h1_rel_err"});
    row.insert(row.end(), {fmt9(r.h1), fmt9(r.h1_tilde), fmt9((r.h1_tilde - r.h1) / r.h1)});
  }
  if (which != "dd") {
    head.insert(head.end(), {"h2", "h2_tilde", "h2_rel_err"});
    row.insert(row.end(), {fmt9(r.h2), fmt9(r.h2_tilde), fmt9((r.h2_tilde - r.h2) / r.h2)});
  }
  if (which == "both") {
    head.insert(head.end(), {"ratio_sq", "ratio_sq_limit"});
    row.insert(row.end(), {fmt9(r.ratio_sq), fmt9(std::pow(2.0, 2.0 / nu))});
  }
  emit_row(*out.os, head);
  emit_row(*out.os, row);
  return kExitOk;
}

int cmd_optimal_nu(const RunConfig& cfg, int64_t k, double p, const std::string& mode,
                   double sum_sigma2, double delta) {
  if (mode != "approx" && mode != "exact") bail(kExitBadArgs, "--mode must be approx or exact");
  rs_nu_choice r;
  check(rs_two_stage_optimal_nu(k, p, mode == "approx" ? RS_NU_MODE_APPROX : RS_NU_MODE_EXACT,
                                sum_sigma2, delta, &cfg.num, &r));
  OutStream out(cfg.output_path);
  emit_row(*out.os, {"k", "p", "nu_approx", "nu_exact", "h_at_choice", "mu_tilde"});
  emit_row(*out.os, {std::to_string(k), fmt9(p), fmt9(r.nu_approx), fmt9(r.nu_exact),
                     fmt9(r.h_at_choice), fmt9(r.mu_tilde)});
  return kExitOk;
}

int cmd_expected_n(const RunConfig& cfg, int64_t k, double nu, double p, double delta,
                   double h, const std::string& which, const std::string& mode,
                   const std::string& sigma2_list, double sigma2_all) {
  if (which != "dd" && which != "rinott") bail(kExitBadArgs, "--which must be dd or rinott");
  if (mode != "paper" && mode != "chi2") bail(kExitBadArgs, "--mode must be paper or chi2");
  std::vector<double> sigma2;
  if (!sigma2_list.empty()) {
    std::stringstream ss(sigma2_list);
    std::string cell;
    while (std::getline(ss, cell, ',')) sigma2.push_back(std::stod(cell));
  } else {
    sigma2.assign(static_cast<size_t>(k + 1), sigma2_all);
  }
  if (!(h > 0.0)) {
    rs_h_result r;
    check(rs_two_stage_solve_h(k, nu, p, &cfg.num, &r));
    h = which == "dd" ? r.h1 : r.h2;
  }
  double total;
  check(rs_two_stage_expected_n(h, nu, delta, sigma2.data(), sigma2.size(),
                                mode == "paper" ? RS_ESS_PAPER : RS_ESS_CHI2, &total));
  OutStream out(cfg.output_path);
  emit_row(*out.os, {"k", "nu", "p", "which", "mode", "h", "expected_total"});
  emit_row(*out.os, {std::to_string(k), fmt9(nu), fmt9(p), which, mode, fmt9(h), fmt9(total)});
  return kExitOk;
}

std::pair<std::vector<double>, std::vector<double>> load_population_spec(
    const std::string& path) {
  std::ifstream in(path);
  if (!in) bail(kExitBadArgs, "cannot open population spec: " + path);
  std::vector<double> means, variances;
  std::string line;
  int lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    const auto hash = line.find('#');
    if (hash != std::string::npos) line.erase(hash);
    std::stringstream ss(line);
    double m, v;
    if (ss >> m >> v) {
      means.push_back(m);
      variances.push_back(v);
    } else if (line.find_first_not_of(" \t\r") != std::string::npos) {
      bail(kExitBadArgs, "population spec line " + std::to_string(lineno) +
                             ": expected '<mean> <variance>'");
    }
  }
  if (means.size() < 2) bail(kExitBadArgs, "population spec needs at least two populations");
  return {means, variances};
}

int cmd_simulate(const RunConfig& cfg, const std::string& spec_path,
                 const std::string& variant, int64_t n0, double p, double delta, double h) {
  if (variant != "dd" && variant != "rinott") bail(kExitBadArgs, "--variant must be dd or rinott");
  auto [means, variances] = load_population_spec(spec_path);
  const auto k = static_cast<int64_t>(means.size()) - 1;
  if (!(h > 0.0)) {
    rs_h_result r;
    check(rs_two_stage_solve_h(k, static_cast<double>(n0 - 1), p, &cfg.num, &r));
    h = variant == "dd" ? r.h1 : r.h2;
  }
  rs_procedure_config pc{delta, n0, p, h,
                         variant == "dd" ? RS_VARIANT_DD : RS_VARIANT_RINOTT};
  rs_pcs_estimate est;
  check(rs_estimate_pcs(means.data(), variances.data(), means.size(), &pc, &cfg.mc, &est));
  OutStream out(cfg.output_path);
  emit_row(*out.os, {"populations", "variant", "p", "h", "p_hat", "ci_half_width",
                     "replications", "seed"});
  emit_row(*out.os, {std::to_string(means.size()), variant, fmt9(p), fmt9(h), fmt9(est.p_hat),
                     fmt9(est.ci_half_width), std::to_string(est.replications),
                     std::to_string(est.seed)});
  return kExitOk;
}

using ComboPtr = std::unique_ptr<rs_combo, decltype(&rs_combo_free)>;

ComboPtr load_combo_spec(const std::string& path) {
  std::ifstream in(path);
  if (!in) bail(kExitBadArgs, "cannot open limit-law spec: " + path);
  ComboPtr combo(nullptr, &rs_combo_free);
  std::string line;
  int lineno = 0;
  auto need_combo = [&]() -> rs_combo* {
    if (!combo) bail(kExitBadArgs, "limit-law spec: set 'family' first");
    return combo.get();
  };
  double nu = 1.0;
  std::string family;
  while (std::getline(in, line)) {
    ++lineno;
    const auto hash = line.find('#');
    if (hash != std::string::npos) line.erase(hash);
    std::stringstream ss(line);
    std::string key;
    if (!(ss >> key)) continue;
    auto barf = [&](const char* what) {
      bail(kExitBadArgs,
           "limit-law spec line " + std::to_string(lineno) + ": " + what);
    };
    if (key == "family") {
      if (!(ss >> family)) barf("expected gaussian or student");
    } else if (key == "nu") {
      if (!(ss >> nu)) barf("expected a number");
    } else if (key == "group") {
      if (!combo) {
        if (family == "gaussian")
          combo.reset(rs_combo_new(RS_FAMILY_GAUSSIAN, 0.0));
        else if (family == "student")
          combo.reset(rs_combo_new(RS_FAMILY_STUDENT, nu));
        else
          barf("set 'family gaussian|student' before groups");
      }
      std::string kind;
      double alpha = 0.0;
      if (!(ss >> kind)) barf("expected group kind");
      if (kind == "finite") {
        int64_t size;
        if (!(ss >> size >> alpha)) barf("expected: group finite <size> <alpha>");
        check(rs_combo_add_group_finite(combo.get(), size, alpha));
      } else if (kind == "remainder") {
        if (!(ss >> alpha)) barf("expected: group remainder <alpha>");
        check(rs_combo_add_group_infinite(combo.get(), RS_GROWTH_REMAINDER, 0, 0, alpha));
      } else if (kind == "pow") {
        double c, b;
        if (!(ss >> c >> b >> alpha)) barf("expected: group pow <coeff> <beta> <alpha>");
        check(rs_combo_add_group_infinite(combo.get(), RS_GROWTH_POW, c, b, alpha));
      } else if (kind == "log") {
        double c;
        if (!(ss >> c >> alpha)) barf("expected: group log <coeff> <alpha>");
        check(rs_combo_add_group_infinite(combo.get(), RS_GROWTH_LOG, c, 0, alpha));
      } else {
        barf("unknown group kind");
      }
    } else if (key == "xi.const") {
      double c;
      if (!(ss >> c)) barf("expected a number");
      check(rs_combo_xi_set_constant(need_combo(), c));
    } else if (key == "xi.pow") {
      double c, b;
      if (!(ss >> c >> b)) barf("expected: xi.pow <coeff> <beta>");
      check(rs_combo_xi_add_pow(need_combo(), c, b));
    } else if (key == "xi.log") {
      double c;
      if (!(ss >> c)) barf("expected: xi.log <coeff>");
      check(rs_combo_xi_add_log(need_combo(), c));
    } else if (key == "xi.b") {
      int g;
      double c;
      if (!(ss >> g >> c)) barf("expected: xi.b <group> <coeff>");
      check(rs_combo_xi_add_b_term(need_combo(), g, c));
    } else if (key == "xi.inva") {
      int g;
      double c;
      if (!(ss >> g >> c)) barf("expected: xi.inva <group> <coeff>");
      check(rs_combo_xi_add_inv_a_term(need_combo(), g, c));
    } else {
      barf("unknown key");
    }
  }
  if (!combo) bail(kExitBadArgs, "limit-law spec: no groups defined");
  return combo;
}

int cmd_limit_law(const RunConfig& cfg, const std::string& spec_path, int64_t mc_k) {
  auto combo = load_combo_spec(spec_path);
  rs_limit_law_result r;
  check(rs_combo_limit_cdf(combo.get(), &cfg.num, &r));
  OutStream out(cfg.output_path);
  const std::string lstar = r.l_star_kind == 0 ? fmt9(r.L_star)
                            : r.l_star_kind > 0 ? "+inf"
                                                : "-inf";
  if (mc_k > 0) {
    rs_pcs_estimate est;
    check(rs_combo_mc(combo.get(), mc_k, &cfg.mc, &est));
    emit_row(*out.os, {"L", "L_star", "V", "mc_k", "mc_p_hat", "mc_ci_half_width",
                       "replications", "seed"});
    emit_row(*out.os, {fmt9(r.L), lstar, r.v_descriptor, std::to_string(mc_k),
                       fmt9(est.p_hat), fmt9(est.ci_half_width),
                       std::to_string(est.replications), std::to_string(est.seed)});
  } else {
    emit_row(*out.os, {"L", "L_star", "V"});
    emit_row(*out.os, {fmt9(r.L), lstar, r.v_descriptor});
  }
  return kExitOk;
}

int cmd_reproduce(const RunConfig& cfg, const std::string& target, int64_t max_k,
                  double table2_nu) {
  std::string path = cfg.output_path.empty() ? target + ".csv" : cfg.output_path;
  OutStream out(path);
  std::ostream& os = *out.os;

  auto table1_like = [&](const std::vector<std::pair<double, double>>& rules, bool with_rule) {
    if (with_rule)
      emit_row(os, {"k", "alpha", "s", "p", "n_exact", "n_asymptotic", "rel_err"});
    else
      emit_row(os, {"k", "p", "n_exact", "n_asymptotic", "rel_err"});
    for (const auto& [psi, beta] : rules) {
      for (int64_t k : k_grid(max_k)) {
        const auto s = std::max<int64_t>(
            1, static_cast<int64_t>(std::ceil(psi * std::pow(double(k), beta))));
        if (s > k - s) continue;
        for (double p : {0.5, 0.9, 0.95, 0.99}) {
          rs_sample_size_result r;
          check(rs_single_stage_solve_n(k, s, 1.0, 1.0, p, beta, &cfg.num, &r));
          if (with_rule)
            emit_row(os, {std::to_string(k), fmt9(beta), std::to_string(s), fmt9(p),
                          fmt9(r.n_exact), fmt9(r.n_asymptotic), fmt9(r.relative_error)});
          else
            emit_row(os, {std::to_string(k), fmt9(p), fmt9(r.n_exact), fmt9(r.n_asymptotic),
                          fmt9(r.relative_error)});
        }
      }
    }
  };

  auto table2_like = [&](const std::vector<double>& nus) {
    emit_row(os, {"k", "nu", "p", "h1", "h1_tilde", "h1_rel_err", "h2", "h2_tilde",
                  "h2_rel_err", "ratio_sq", "ratio_sq_limit"});
    for (double nu : nus) {
      for (int64_t k : k_grid(max_k)) {
        for (double p : {0.5, 0.95}) {
          rs_h_result r;
          check(rs_two_stage_solve_h(k, nu, p, &cfg.num, &r));
          emit_row(os, {std::to_string(k), fmt9(nu), fmt9(p), fmt9(r.h1), fmt9(r.h1_tilde),
                        fmt9((r.h1_tilde - r.h1) / r.h1), fmt9(r.h2), fmt9(r.h2_tilde),
                        fmt9((r.h2_tilde - r.h2) / r.h2), fmt9(r.ratio_sq),
                        fmt9(std::pow(2.0, 2.0 / nu))});
        }
      }
    }
  };

  if (target == "table1") {
    table1_like({{0.5, 0.5}}, false);
  } else if (target == "fig1") {
    table1_like({{1.0, 0.25}, {1.0, 0.5}, {1.0, 0.75}, {0.5, 0.5}}, true);
  } else if (target == "table2") {
    table2_like({table2_nu});
  } else if (target == "fig2") {
    table2_like({2.0, 5.0, 10.0, 25.0});
  } else if (target == "fig3") {
    emit_row(os, {"k", "p", "nu_exact", "nu_approx", "h1_at_exact", "h1_tilde_at_approx",
                  "mu_exact", "mu_tilde"});
    for (int64_t k : k_grid(max_k)) {
      for (double p : {0.5, 0.9, 0.95}) {
        rs_nu_choice approx, exact;
        const double sum_sigma2 = static_cast<double>(k + 1);  // sigma_i^2 = delta^2 = 1
        if (rs_two_stage_optimal_nu(k, p, RS_NU_MODE_APPROX, sum_sigma2, 1.0, &cfg.num,
                                    &approx) != RS_OK)
          continue;  // k below the H_k(1) < 0 threshold
        check(rs_two_stage_optimal_nu(k, p, RS_NU_MODE_EXACT, sum_sigma2, 1.0, &cfg.num,
                                      &exact));
        emit_row(os, {std::to_string(k), fmt9(p), fmt9(exact.nu_exact), fmt9(approx.nu_approx),
                      fmt9(exact.h_at_choice), fmt9(approx.h_at_choice), fmt9(exact.mu_tilde),
                      fmt9(approx.mu_tilde)});
      }
    }
  } else {
    bail(kExitBadArgs, "reproduce target must be table1|table2|fig1|fig2|fig3");
  }
  if (&os != &std::cout) std::cerr << "wrote " << path << "\n";
  return kExitOk;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"ranking-and-selection procedures: constants, asymptotics, simulation"};
  app.require_subcommand(1);
  app.fallthrough();  // global flags may follow the subcommand

  RunConfig cfg;
  rs_num_opts_init(&cfg.num);
  rs_mc_opts_init(&cfg.mc);

  std::string config_path;
  if (const char* env = std::getenv("RANKSEL_CONFIG")) config_path = env;

  app.add_option("--config", config_path, "config file (key = value per line)");
  app.add_option("--abs-tol", cfg.num.quad_abs_tol, "quadrature absolute tolerance");
  app.add_option("--rel-tol", cfg.num.quad_rel_tol, "quadrature relative tolerance");
  app.add_option("--max-subdiv", cfg.num.quad_max_subdivisions, "quadrature subdivisions");
  app.add_option("--root-tol", cfg.num.root_tol, "root-finding tolerance");
  app.add_option("--root-max-iter", cfg.num.root_max_iter, "root-finding iteration cap");
  app.add_option("--reps", cfg.mc.replications, "Monte Carlo replications");
  app.add_option("--seed", cfg.mc.seed, "Monte Carlo seed");
  app.add_option("--workers", cfg.mc.workers, "worker threads (0 = all cores)");
  app.add_option("--out", cfg.output_path, "output file (default: stdout)");

  // solve-n
  auto* sn = app.add_subcommand("solve-n", "single-stage sample size N*(p)");
  int64_t sn_k = 0, sn_s = 0;
  std::string sn_rule;
  double sn_p = 0.95, sn_delta = 1.0, sn_sigma2 = 1.0;
  sn->add_option("--k", sn_k, "number of populations")->required();
  sn->add_option("--s", sn_s, "number selected");
  sn->add_option("--s-rule", sn_rule, "half-sqrt or pow:<psi>,<beta>");
  sn->add_option("--p", sn_p, "target P(CS)");
  sn->add_option("--delta", sn_delta, "indifference width");
  sn->add_option("--sigma2", sn_sigma2, "common known variance");

  // solve-h
  auto* sh = app.add_subcommand("solve-h", "two-stage constants h1/h2");
  int64_t sh_k = 0;
  double sh_nu = 0, sh_p = 0.95;
  std::string sh_which = "both";
  sh->add_option("--k", sh_k, "competitor count (populations - 1)")->required();
  sh->add_option("--nu", sh_nu, "first-stage degrees of freedom")->required();
  sh->add_option("--p", sh_p, "target P(CS)");
  sh->add_option("--which", sh_which, "dd, rinott or both");

  // optimal-nu
  auto* on = app.add_subcommand("optimal-nu", "first-stage size minimizing expected samples");
  int64_t on_k = 0;
  double on_p = 0.5, on_sum_sigma2 = 1.0, on_delta = 1.0;
  std::string on_mode = "approx";
  on->add_option("--k", on_k)->required();
  on->add_option("--p", on_p);
  on->add_option("--mode", on_mode, "approx or exact");
  on->add_option("--sum-sigma2", on_sum_sigma2, "sum of population variances");
  on->add_option("--delta", on_delta);

  // expected-n
  auto* en = app.add_subcommand("expected-n", "expected total sample size");
  int64_t en_k = 0;
  double en_nu = 0, en_p = 0.95, en_delta = 1.0, en_h = 0.0, en_sigma2_all = 1.0;
  std::string en_which = "dd", en_mode = "chi2", en_sigma2_list;
  en->add_option("--k", en_k)->required();
  en->add_option("--nu", en_nu)->required();
  en->add_option("--p", en_p);
  en->add_option("--delta", en_delta);
  en->add_option("--h-const", en_h, "procedure constant (solved when omitted)");
  en->add_option("--which", en_which, "dd or rinott");
  en->add_option("--mode", en_mode, "paper or chi2");
  en->add_option("--sigma2-list", en_sigma2_list, "comma-separated variances (k+1 values)");
  en->add_option("--sigma2", en_sigma2_all, "common variance for all k+1 populations");

  // simulate
  auto* sim = app.add_subcommand("simulate", "Monte Carlo P(CS) of a procedure");
  std::string sim_spec, sim_variant = "dd";
  int64_t sim_n0 = 10;
  double sim_p = 0.9, sim_delta = 1.0, sim_h = 0.0;
  sim->add_option("--spec", sim_spec, "population file: '<mean> <variance>' per line")
      ->required();
  sim->add_option("--variant", sim_variant, "dd or rinott");
  sim->add_option("--n0", sim_n0, "first-stage sample size");
  sim->add_option("--p", sim_p, "target P(CS)");
  sim->add_option("--delta", sim_delta);
  sim->add_option("--h-const", sim_h, "procedure constant (solved when omitted)");

  // limit-law
  auto* ll = app.add_subcommand("limit-law", "limit of a partial-maxima combination");
  std::string ll_spec;
  int64_t ll_mc_k = 0;
  ll->add_option("--spec", ll_spec, "descriptor file")->required();
  ll->add_option("--mc-k", ll_mc_k, "also run the finite-k Monte Carlo check at this k");

  // reproduce
  auto* rep = app.add_subcommand("reproduce", "emit table/figure data as CSV");
  std::string rep_target;
  int64_t rep_max_k = 1000000;
  double rep_nu = 10.0;
  rep->add_option("target", rep_target, "table1|table2|fig1|fig2|fig3")->required();
  rep->add_option("--max-k", rep_max_k, "largest k in the sweep");
  rep->add_option("--nu", rep_nu, "degrees of freedom for table2");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    if (e.get_exit_code() == 0) return app.exit(e);  // --help
    app.exit(e);
    return kExitBadArgs;
  }

  try {
    if (!config_path.empty()) {
      RunConfig file_cfg;
      rs_num_opts_init(&file_cfg.num);
      rs_mc_opts_init(&file_cfg.mc);
      load_config_file(config_path, file_cfg);
      // flags override the file: re-apply any flag the user passed
      auto keep = [&](auto& target, const auto& flag_value, const char* name) {
        if (app.count_all() && app.get_option_no_throw(name) &&
            app.get_option_no_throw(name)->count())
          target = flag_value;
      };
      RunConfig merged = file_cfg;
      merged.output_path = file_cfg.output_path;
      keep(merged.num.quad_abs_tol, cfg.num.quad_abs_tol, "--abs-tol");
      keep(merged.num.quad_rel_tol, cfg.num.quad_rel_tol, "--rel-tol");
      keep(merged.num.quad_max_subdivisions, cfg.num.quad_max_subdivisions, "--max-subdiv");
      keep(merged.num.root_tol, cfg.num.root_tol, "--root-tol");
      keep(merged.num.root_max_iter, cfg.num.root_max_iter, "--root-max-iter");
      keep(merged.mc.replications, cfg.mc.replications, "--reps");
      keep(merged.mc.seed, cfg.mc.seed, "--seed");
      keep(merged.mc.workers, cfg.mc.workers, "--workers");
      keep(merged.output_path, cfg.output_path, "--out");
      cfg = merged;
    }

    if (sn->parsed()) return cmd_solve_n(cfg, sn_k, sn_s, sn_rule, sn_p, sn_delta, sn_sigma2);
    if (sh->parsed()) return cmd_solve_h(cfg, sh_k, sh_nu, sh_p, sh_which);
    if (on->parsed()) return cmd_optimal_nu(cfg, on_k, on_p, on_mode, on_sum_sigma2, on_delta);
    if (en->parsed())
      return cmd_expected_n(cfg, en_k, en_nu, en_p, en_delta, en_h, en_which, en_mode,
                            en_sigma2_list, en_sigma2_all);
    if (sim->parsed()) return cmd_simulate(cfg, sim_spec, sim_variant, sim_n0, sim_p,
                                           sim_delta, sim_h);
    if (ll->parsed()) return cmd_limit_law(cfg, ll_spec, ll_mc_k);
    if (rep->parsed()) return cmd_reproduce(cfg, rep_target, rep_max_k, rep_nu);
    return kExitBadArgs;
  } catch (const CliError& e) {
    std::cerr << "error: " << e.message << "\n";
    return e.code;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitNumeric;
  }
}
