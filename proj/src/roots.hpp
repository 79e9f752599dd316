// Copyright 2026 The ranksel Authors
// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <cmath>
#include <limits>
#include <stdexcept>

namespace ranksel::roots {

struct RootOptions {
  double x_tol = 1e-12;
  double f_tol = 1e-10;
  int max_iter = 200;
};

struct RootResult {
  double root = std::numeric_limits<double>::quiet_NaN();
  double residual = std::numeric_limits<double>::quiet_NaN();
  int iterations = 0;
  bool converged = false;
};

struct BracketError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// Expand [lo, hi] geometrically around a seed until f changes sign.
// Assumes f is nondecreasing; lo == hi == seed is the usual starting state.
template <class F>
bool expand_bracket(F&& f, double& lo, double& hi, double& flo, double& fhi,
                    int max_steps = 200) {
  flo = f(lo);
  fhi = (hi == lo) ? flo : f(hi);
  double step = std::max(1.0, 0.5 * std::fabs(lo));
  for (int n = 0; flo > 0.0 && n < max_steps; ++n) {
    hi = lo;
    fhi = flo;
    lo -= step;
    step *= 2.0;
    flo = f(lo);
  }
  step = std::max(1.0, 0.5 * std::fabs(hi));
  for (int n = 0; fhi < 0.0 && n < max_steps; ++n) {
    lo = hi;
    flo = fhi;
    hi += step;
    step *= 2.0;
    fhi = f(hi);
  }
  return flo <= 0.0 && fhi >= 0.0;
}

// Brent's method on a sign-changing bracket.
template <class F>
RootResult brent(F&& f, double a, double b, double fa, double fb,
                 const RootOptions& opt = {}) {
  RootResult res;
  if (fa == 0.0) { res.root = a; res.residual = 0.0; res.converged = true; return res; }
  if (fb == 0.0) { res.root = b; res.residual = 0.0; res.converged = true; return res; }
  if (fa * fb > 0.0) throw BracketError("brent: root not bracketed");

  double c = a, fc = fa, d = b - a, e = d;
  const double eps = std::numeric_limits<double>::epsilon();
  for (int iter = 1; iter <= opt.max_iter; ++iter) {
    res.iterations = iter;
    if ((fb > 0.0) == (fc > 0.0)) { c = a; fc = fa; d = b - a; e = d; }
    if (std::fabs(fc) < std::fabs(fb)) {
      a = b; b = c; c = a;
      fa = fb; fb = fc; fc = fa;
    }
    const double tol1 = 2.0 * eps * std::fabs(b) + 0.5 * opt.x_tol;
    const double xm = 0.5 * (c - b);
    if (std::fabs(xm) <= tol1 || std::fabs(fb) <= opt.f_tol) {
      res.root = b;
      res.residual = fb;
      res.converged = true;
      return res;
    }
    if (std::fabs(e) >= tol1 && std::fabs(fa) > std::fabs(fb)) {
      double p, q, r;
      const double s = fb / fa;
      if (a == c) {
        p = 2.0 * xm * s;
        q = 1.0 - s;
      } else {
        q = fa / fc;
        r = fb / fc;
        p = s * (2.0 * xm * q * (q - r) - (b - a) * (r - 1.0));
        q = (q - 1.0) * (r - 1.0) * (s - 1.0);
      }
      if (p > 0.0) q = -q;
      p = std::fabs(p);
      if (2.0 * p < std::min(3.0 * xm * q - std::fabs(tol1 * q), std::fabs(e * q))) {
        e = d;
        d = p / q;
      } else {
        d = xm;
        e = d;
      }
    } else {
      d = xm;
      e = d;
    }
    a = b;
    fa = fb;
    b += (std::fabs(d) > tol1) ? d : (xm > 0.0 ? tol1 : -tol1);
    fb = f(b);
  }
  res.root = b;
  res.residual = fb;
  res.converged = false;
  return res;
}

}  // namespace ranksel::roots
