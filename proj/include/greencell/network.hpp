#pragma once

#include <cmath>
#include <numbers>
#include <stdexcept>

#include "greencell/validation.hpp"

// Spatial model: stations form a planar Poisson process of density lambda_b,
// users one of density lambda_u, power decays as b * r^-alpha, fading is
// unit-mean exponential, and each user listens to the station with the best
// instantaneous SINR.  Noise power is tied to deployment density through
// sigma^2 = beta * lambda_b, which keeps the noise-to-interference balance
// fixed as the network densifies.

namespace greencell {

// Noise variance coefficient: either prescribed directly (normalized studies)
// or assembled from physical receiver constituents as
// beta = bandwidth * noise_figure * k * temperature / (lambda_u * b).
class NoiseModel {
 public:
  static NoiseModel direct(double beta) {
    NoiseModel m;
    m.direct_ = true;
    m.beta_ = beta;
    return m;
  }

  static NoiseModel physical(double bandwidth_hz, double noise_figure,
                             double temperature_k,
                             double boltzmann = 1.380649e-23) {
    NoiseModel m;
    m.direct_ = false;
    m.bandwidth_hz_ = bandwidth_hz;
    m.noise_figure_ = noise_figure;
    m.temperature_k_ = temperature_k;
    m.boltzmann_ = boltzmann;
    return m;
  }

  bool is_direct() const { return direct_; }

  double beta(double lambda_u, double pathloss_coeff) const {
    if (direct_) {
      return beta_;
    }
    return bandwidth_hz_ * noise_figure_ * boltzmann_ * temperature_k_ /
           (lambda_u * pathloss_coeff);
  }

  ValidationReport validate() const {
    ValidationReport r;
    if (direct_) {
      r.require(std::isfinite(beta_) && beta_ >= 0.0,
                "noise coefficient beta must be finite and >= 0");
    } else {
      r.require(std::isfinite(bandwidth_hz_) && bandwidth_hz_ > 0.0,
                "noise bandwidth must be finite and > 0");
      r.require(std::isfinite(noise_figure_) && noise_figure_ > 0.0,
                "noise figure must be finite and > 0");
      r.require(std::isfinite(temperature_k_) && temperature_k_ > 0.0,
                "noise temperature must be finite and > 0");
      r.require(std::isfinite(boltzmann_) && boltzmann_ > 0.0,
                "Boltzmann constant must be finite and > 0");
    }
    return r;
  }

 private:
  bool direct_ = true;
  double beta_ = 0.0;
  double bandwidth_hz_ = 0.0;
  double noise_figure_ = 0.0;
  double temperature_k_ = 0.0;
  double boltzmann_ = 1.380649e-23;
};

inline constexpr double kMaxPathlossExponent = 200.0;

struct NetworkParams {
  double lambda_b = 0.5;  // station density, per unit area
  double lambda_u = 0.6;  // user density, per unit area
  double alpha = 4.75;    // pathloss exponent, 2 < alpha <= 200
  double gamma = 2.0;     // detection threshold (linear), > 1
  double b = 1.0;         // pathloss coefficient
  NoiseModel noise = NoiseModel::direct(1.0);

  // Mean users per station; also the popularity exponent of the content
  // model.
  double eta() const { return lambda_u / lambda_b; }
  double beta() const { return noise.beta(lambda_u, b); }
  double sigma_sq() const { return beta() * lambda_b; }
};

inline ValidationReport validate(const NetworkParams& p) {
  ValidationReport r;
  r.require(std::isfinite(p.lambda_b) && p.lambda_b > 0.0,
            "station density lambda_b must be finite and > 0");
  r.require(std::isfinite(p.lambda_u) && p.lambda_u > 0.0,
            "user density lambda_u must be finite and > 0");
  if (r.ok()) {
    r.require(p.lambda_u > p.lambda_b,
              "user density must exceed station density (eta > 1)");
  }
  r.require(std::isfinite(p.alpha) && p.alpha > 2.0 &&
                p.alpha <= kMaxPathlossExponent,
            "pathloss exponent alpha must lie in (2, 200]");
  r.require(std::isfinite(p.gamma) && p.gamma > 1.0,
            "detection threshold gamma must be finite and > 1");
  r.require(std::isfinite(p.b) && p.b > 0.0,
            "pathloss coefficient b must be finite and > 0");
  r.merge(p.noise.validate());
  return r;
}

// Interference geometry constant C(alpha) = (2 pi^2 / alpha) csc(2 pi /
// alpha), written as pi * t / sin(t) with t = 2 pi / alpha for stability.
// Strictly decreasing on (2, inf) with limit pi, so C(alpha) > pi always.
inline double c_alpha(double alpha) {
  if (!(alpha > 2.0) || !(alpha <= kMaxPathlossExponent)) {
    throw std::invalid_argument("c_alpha: alpha must lie in (2, 200]");
  }
  const double t = 2.0 * std::numbers::pi / alpha;
  return std::numbers::pi * t / std::sin(t);
}

namespace detail {

// Coverage probability of the best-station association when noise is
// negligible: pi * gamma^(-2/alpha) / C(alpha).  Independent of both
// densities and always in (0, 1) for gamma > 1.
inline double pcov_no_noise(double gamma, double alpha) {
  return std::numbers::pi * std::pow(gamma, -2.0 / alpha) / c_alpha(alpha);
}

// Leading noise coefficient of the low-noise coverage expansion:
// a_prime = beta * Gamma(1 + alpha/2) / (b * C(alpha)^(alpha/2)).
// The detection threshold cancels out of this term.
inline double noise_expansion_coefficient(double beta, double b, double alpha) {
  return beta * std::tgamma(1.0 + 0.5 * alpha) /
         (b * std::pow(c_alpha(alpha), 0.5 * alpha));
}

}  // namespace detail

struct DerivedConstants {
  double c_alpha = 0.0;   // interference geometry constant
  double eta = 0.0;       // users per station
  double sigma_sq = 0.0;  // noise variance beta * lambda_b
  double pcov_nn = 0.0;   // no-noise coverage probability
  double a_prime = 0.0;   // noise coefficient of the coverage expansion
  double a = 0.0;         // a_prime^(2/(alpha-2)); scales the QoS boundary
                          // density a * P^(-2/(alpha-2))
};

inline DerivedConstants derive(const NetworkParams& p) {
  ValidationReport r = validate(p);
  if (!r.ok()) {
    throw std::invalid_argument("derive: " + r.to_string());
  }
  DerivedConstants d;
  d.c_alpha = c_alpha(p.alpha);
  d.eta = p.eta();
  d.sigma_sq = p.sigma_sq();
  d.pcov_nn = detail::pcov_no_noise(p.gamma, p.alpha);
  d.a_prime = detail::noise_expansion_coefficient(p.beta(), p.b, p.alpha);
  d.a = std::pow(d.a_prime, 2.0 / (p.alpha - 2.0));
  return d;
}

// Which constant scales the noise correction c = coeff * lambda_b^(1-alpha/2).
// The expansion itself produces a_prime; the rescaled a variant is kept
// because parts of the efficiency analysis are conventionally written with
// it.
enum class CorrectionConvention { a_prime, a };

inline double noise_correction(
    const NetworkParams& p,
    CorrectionConvention convention = CorrectionConvention::a_prime) {
  const DerivedConstants d = derive(p);
  const double coeff =
      convention == CorrectionConvention::a_prime ? d.a_prime : d.a;
  return coeff * std::pow(p.lambda_b, 1.0 - 0.5 * p.alpha);
}

}  // namespace greencell
