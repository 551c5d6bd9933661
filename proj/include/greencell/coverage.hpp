#pragma once

#include <algorithm>
#include <cmath>
#include <numbers>
#include <stdexcept>

#include "greencell/network.hpp"
#include "greencell/quadrature.hpp"

// Coverage probability of the max-SINR association.  With r denoting the
// SQUARED distance to the serving station, the probability that some station
// exceeds the threshold reduces to a single semi-infinite integral
//
//   P_cov = pi * lambda_b * Integral_0^inf exp(-q(r)) dr,
//   q(r)  = gamma * sigma^2 * r^(alpha/2) / (P * b)
//         + lambda_b * gamma^(2/alpha) * C(alpha) * r,
//
// where the linear term is the interference field integrated in closed form.

namespace greencell {

struct CoverageQuery {
  NetworkParams network;
  double power = 50.0;  // transmit power P, > 0
};

inline ValidationReport validate(const CoverageQuery& q) {
  ValidationReport r = validate(q.network);
  r.require(std::isfinite(q.power) && q.power > 0.0,
            "transmit power must be finite and > 0");
  return r;
}

// Exponent of the coverage integrand at squared distance r >= 0.
inline double coverage_exponent(const CoverageQuery& q, double r) {
  const NetworkParams& n = q.network;
  const double noise_term =
      n.gamma * n.sigma_sq() * std::pow(r, 0.5 * n.alpha) / (q.power * n.b);
  const double interference_term =
      n.lambda_b * std::pow(n.gamma, 2.0 / n.alpha) * c_alpha(n.alpha) * r;
  return noise_term + interference_term;
}

// Full coverage probability by adaptive quadrature.  Throws
// std::invalid_argument on bad parameters and NonConvergence if the
// integrator's evaluation budget is exhausted.
inline double coverage_exact(const CoverageQuery& q,
                             QuadratureOptions options = {}) {
  ValidationReport r = validate(q);
  if (!r.ok()) {
    throw std::invalid_argument("coverage_exact: " + r.to_string());
  }
  const double scale = std::numbers::pi * q.network.lambda_b;
  auto integrand = [&q, scale](double rsq) {
    return scale * std::exp(-coverage_exponent(q, rsq));
  };
  const QuadratureResult result = integrate_semi_infinite(integrand, options);
  return std::clamp(result.value, 0.0, 1.0);
}

// No-noise closed form pi * gamma^(-2/alpha) / C(alpha); the beta = 0 limit
// of coverage_exact, independent of both densities.
inline double coverage_nn(double gamma, double alpha) {
  if (!(gamma > 1.0) || !std::isfinite(gamma)) {
    throw std::invalid_argument("coverage_nn: gamma must be finite and > 1");
  }
  return detail::pcov_no_noise(gamma, alpha);
}

inline double coverage_nn(const NetworkParams& p) {
  ValidationReport r = validate(p);
  if (!r.ok()) {
    throw std::invalid_argument("coverage_nn: " + r.to_string());
  }
  return detail::pcov_no_noise(p.gamma, p.alpha);
}

// First-order low-noise expansion
//   P_cov ~ pcov_nn * (1 - correction / P),
// with correction = a_prime * lambda_b^(1 - alpha/2) (threshold-free).
// The value is returned unclamped; `breakdown` marks the regime where the
// correction reaches the transmit power and the expansion stops being a
// probability.
struct LowNoiseCoverage {
  double value = 0.0;
  bool breakdown = false;
};

inline LowNoiseCoverage coverage_lownoise(
    const CoverageQuery& q,
    CorrectionConvention convention = CorrectionConvention::a_prime) {
  ValidationReport r = validate(q);
  if (!r.ok()) {
    throw std::invalid_argument("coverage_lownoise: " + r.to_string());
  }
  const double correction = noise_correction(q.network, convention);
  const double relative = correction / q.power;
  LowNoiseCoverage out;
  out.value = detail::pcov_no_noise(q.network.gamma, q.network.alpha) *
              (1.0 - relative);
  out.breakdown = !(relative < 1.0);
  return out;
}

// Density at which the low-noise coverage loss would consume the whole
// no-noise coverage for transmit power P: lambda_b* = a * P^(-2/(alpha-2)).
// Deployments denser than this keep a positive expansion value; the
// expansion hits exactly zero at the boundary.
inline double optimal_density(const NetworkParams& p, double power) {
  if (!(std::isfinite(power)) || !(power > 0.0)) {
    throw std::invalid_argument("optimal_density: power must be > 0");
  }
  const double a_prime =
      detail::noise_expansion_coefficient(p.beta(), p.b, p.alpha);
  const double a = std::pow(a_prime, 2.0 / (p.alpha - 2.0));
  return a * std::pow(power, -2.0 / (p.alpha - 2.0));
}

}  // namespace greencell
