// Copyright 2026 The ranksel Authors
// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <algorithm>
#include <cmath>
#include <queue>
#include <span>
#include <stdexcept>
#include <vector>

namespace ranksel::quad {

struct QuadOptions {
  double abs_tol = 1e-10;
  double rel_tol = 1e-10;
  int max_subdivisions = 4000;
};

struct QuadResult {
  double value = 0.0;
  double error_estimate = 0.0;
  long evaluations = 0;
  int subdivisions = 0;
  bool converged = false;
};

struct QuadratureError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

namespace detail {

// 15-point Kronrod rule with embedded 7-point Gauss rule (QUADPACK QK15).
inline constexpr double kXgk[8] = {
    0.991455371120813, 0.949107912342759, 0.864864423359769,
    0.741531185599394, 0.586087235467691, 0.405845151377397,
    0.207784955007898, 0.0};
inline constexpr double kWgk[8] = {
    0.022935322010529, 0.063092092629979, 0.104790010322250,
    0.140653259715525, 0.169004726639267, 0.190350578064785,
    0.204432940075298, 0.209482141084728};
inline constexpr double kWg[4] = {
    0.129484966168870, 0.279705391489277, 0.381830050505119,
    0.417959183673469};

struct Panel {
  double a, b, value, error;
};
struct PanelLess {
  bool operator()(const Panel& x, const Panel& y) const { return x.error < y.error; }
};

template <class F>
Panel gk15(F& f, double a, double b, long& evals) {
  const double center = 0.5 * (a + b);
  const double half = 0.5 * (b - a);
  const double fc = f(center);
  double resk = kWgk[7] * fc;
  double resg = kWg[3] * fc;
  double resabs = kWgk[7] * std::fabs(fc);
  double fv1[7], fv2[7];
  for (int j = 0; j < 7; ++j) {
    const double dx = half * kXgk[j];
    fv1[j] = f(center - dx);
    fv2[j] = f(center + dx);
    const double sum = fv1[j] + fv2[j];
    resk += kWgk[j] * sum;
    resabs += kWgk[j] * (std::fabs(fv1[j]) + std::fabs(fv2[j]));
    if (j % 2 == 1) resg += kWg[j / 2] * sum;
  }
  evals += 15;
  const double reskh = resk * 0.5;
  double resasc = kWgk[7] * std::fabs(fc - reskh);
  for (int j = 0; j < 7; ++j)
    resasc += kWgk[j] * (std::fabs(fv1[j] - reskh) + std::fabs(fv2[j] - reskh));
  const double habs = std::fabs(half);
  resasc *= habs;
  resabs *= habs;
  double err = std::fabs((resk - resg) * half);
  if (resasc != 0.0 && err != 0.0)
    err = resasc * std::min(1.0, std::pow(200.0 * err / resasc, 1.5));
  const double eps = std::numeric_limits<double>::epsilon();
  err = std::max(err, 50.0 * eps * resabs);
  return Panel{a, b, resk * half, err};
}

}  // namespace detail

// Adaptive quadrature over the union of [points[i], points[i+1]] segments.
// Break points let callers pin known features (peaks, sigmoid transitions)
// so the refinement does not miss narrow structure in wide domains.
template <class F>
QuadResult integrate(F&& f, std::span<const double> points, const QuadOptions& opt = {}) {
  std::vector<double> pts(points.begin(), points.end());
  std::sort(pts.begin(), pts.end());
  pts.erase(std::unique(pts.begin(), pts.end()), pts.end());
  if (pts.size() < 2) throw QuadratureError("integrate: need at least two break points");

  QuadResult res;
  std::priority_queue<detail::Panel, std::vector<detail::Panel>, detail::PanelLess> heap;
  double total = 0.0, total_err = 0.0;
  for (size_t i = 0; i + 1 < pts.size(); ++i) {
    if (!(pts[i] < pts[i + 1])) continue;
    auto p = detail::gk15(f, pts[i], pts[i + 1], res.evaluations);
    total += p.value;
    total_err += p.error;
    heap.push(p);
  }
  while (total_err > std::max(opt.abs_tol, opt.rel_tol * std::fabs(total)) &&
         res.subdivisions < opt.max_subdivisions && !heap.empty()) {
    detail::Panel worst = heap.top();
    heap.pop();
    const double mid = 0.5 * (worst.a + worst.b);
    if (mid <= worst.a || mid >= worst.b) continue;  // interval at ulp resolution
    auto left = detail::gk15(f, worst.a, mid, res.evaluations);
    auto right = detail::gk15(f, mid, worst.b, res.evaluations);
    total += left.value + right.value - worst.value;
    total_err += left.error + right.error - worst.error;
    heap.push(left);
    heap.push(right);
    ++res.subdivisions;
  }
  res.value = total;
  res.error_estimate = total_err;
  res.converged = total_err <= std::max(opt.abs_tol, opt.rel_tol * std::fabs(total));
  return res;
}

template <class F>
QuadResult integrate(F&& f, double a, double b, const QuadOptions& opt = {}) {
  const double pts[2] = {a, b};
  return integrate(static_cast<F&&>(f), std::span<const double>(pts, 2), opt);
}

// Geometric intermediate points between |from| and |to| (same sign), so that
// heavy-tailed integrands never face a panel whose width dwarfs the feature
// scale; Gauss-Kronrod nodes are interior and would otherwise report a clean
// zero for a panel whose mass sits at one edge.
inline void add_geometric_points(std::vector<double>& pts, double from, double to,
                                 double factor = 4.0) {
  if (from == 0.0 || to == 0.0 || (from < 0.0) != (to < 0.0)) return;
  double v = from;
  const double limit = std::fabs(to);
  for (int guard = 0; guard < 400 && std::fabs(v) * factor < limit; ++guard) {
    v *= factor;
    pts.push_back(v);
  }
}

}  // namespace ranksel::quad
