#pragma once

#include <cmath>
#include <limits>

// Derivative-free scalar minimization: geometric bracket expansion from a
// starting point, then golden-section contraction.  Objectives here are
// smooth and unimodal on (lower_limit, inf) whenever an interior optimum
// exists, so this is both simple and reliable.

namespace greencell {

struct ScalarSearchOptions {
  double growth = 2.0;       // bracket expansion factor, > 1
  int max_expansions = 200;  // probes before giving up on a bracket
  double rel_tol = 1e-8;     // stop when width <= rel_tol * (1 + |midpoint|)
  int max_iterations = 500;  // golden-section iterations
  double lower_limit = 0.0;  // domain is the open interval (lower_limit, inf)
};

struct ScalarMinimum {
  double argmin = std::numeric_limits<double>::quiet_NaN();
  double value = std::numeric_limits<double>::quiet_NaN();
  double bracket_lo = std::numeric_limits<double>::quiet_NaN();
  double bracket_hi = std::numeric_limits<double>::quiet_NaN();
  bool bracket_found = false;
  bool converged = false;
  int evaluations = 0;
};

template <class F>
ScalarMinimum minimize_scalar(F f, double x0, ScalarSearchOptions opts = {}) {
  ScalarMinimum out;
  const double base = opts.lower_limit;
  if (!(x0 > base) || !std::isfinite(x0) || !(opts.growth > 1.0)) {
    return out;
  }

  // Work with the offset d = x - lower_limit so downward probes shrink
  // geometrically toward the open end of the domain without crossing it.
  auto eval = [&](double d) {
    ++out.evaluations;
    return f(base + d);
  };

  double d_mid = x0 - base;
  double f_mid = eval(d_mid);
  double d_lo = d_mid / opts.growth;
  double f_lo = eval(d_lo);
  double d_hi = d_mid * opts.growth;
  double f_hi = eval(d_hi);

  if (f_hi < f_mid) {  // walk up until the objective rises
    int step = 0;
    while (f_hi < f_mid && step++ < opts.max_expansions) {
      d_lo = d_mid;
      f_lo = f_mid;
      d_mid = d_hi;
      f_mid = f_hi;
      d_hi = d_mid * opts.growth;
      f_hi = eval(d_hi);
    }
    if (f_hi < f_mid) {
      out.argmin = base + d_hi;
      out.value = f_hi;
      return out;  // still descending: no bracket
    }
  } else if (f_lo < f_mid) {  // walk down toward the open boundary
    int step = 0;
    while (f_lo < f_mid && step++ < opts.max_expansions) {
      d_hi = d_mid;
      f_hi = f_mid;
      d_mid = d_lo;
      f_mid = f_lo;
      d_lo = d_mid / opts.growth;
      f_lo = eval(d_lo);
    }
    if (f_lo < f_mid) {
      out.argmin = base + d_lo;
      out.value = f_lo;
      return out;
    }
  }
  // Now f(d_mid) <= min(f(d_lo), f(d_hi)): a bracket.
  out.bracket_found = true;
  out.bracket_lo = base + d_lo;
  out.bracket_hi = base + d_hi;

  const double inv_phi = 0.5 * (std::sqrt(5.0) - 1.0);
  double a = d_lo;
  double b = d_hi;
  double c = b - inv_phi * (b - a);
  double d = a + inv_phi * (b - a);
  double fc = eval(c);
  double fd = eval(d);
  int iterations = 0;
  auto width_ok = [&] {
    return (b - a) <= opts.rel_tol * (1.0 + std::abs(base + 0.5 * (a + b)));
  };
  while (!width_ok() && iterations++ < opts.max_iterations) {
    if (fc < fd) {
      b = d;
      d = c;
      fd = fc;
      c = b - inv_phi * (b - a);
      fc = eval(c);
    } else {
      a = c;
      c = d;
      fc = fd;
      d = a + inv_phi * (b - a);
      fd = eval(d);
    }
  }
  if (fc < fd) {
    out.argmin = base + c;
    out.value = fc;
  } else {
    out.argmin = base + d;
    out.value = fd;
  }
  out.converged = width_ok();
  return out;
}

// Symmetric difference quotient, used to cross-check closed-form
// derivatives.
template <class F>
double central_difference(F f, double x, double h = 0.0) {
  if (h <= 0.0) {
    h = 1e-5 * (1.0 + std::abs(x));
  }
  return (f(x + h) - f(x - h)) / (2.0 * h);
}

}  // namespace greencell
