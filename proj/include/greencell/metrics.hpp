#pragma once

#include <cmath>
#include <limits>
#include <optional>
#include <stdexcept>
#include <string>

#include "greencell/cache.hpp"
#include "greencell/coverage.hpp"
#include "greencell/network.hpp"
#include "greencell/optimize.hpp"

// Area power consumption (APC) and energy efficiency (EE) of a cache-enabled
// deployment, as functions of the per-station transmit power P.
//
// Under the qos_boundary density rule the deployment is kept exactly dense
// enough for the coverage target, lambda_b(P) = a * P^-s with s = 2/(alpha-2),
// which couples the popularity exponent to P through eta(P) = (lambda_u/a) *
// P^s.  Under the fixed rule lambda_b stays at its configured value.

namespace greencell {

enum class DensityRule { qos_boundary, fixed };
enum class CacheMode { cached, uncached };

struct ApcQuery {
  NetworkParams network;
  CachePowerParams power;
  DensityRule density_rule = DensityRule::qos_boundary;
  std::optional<double> a_override;  // replaces the derived boundary scale a

  // epsilon > 0 is the regime where an interior APC minimum exists.
  double epsilon() const { return network.alpha - 4.0; }
  double exponent_s() const { return 2.0 / (network.alpha - 2.0); }

  double qos_a() const {
    if (a_override) {
      return *a_override;
    }
    return derive(network).a;
  }
};

inline ValidationReport validate(const ApcQuery& q) {
  ValidationReport r = validate(q.network);
  r.merge(validate(q.power));
  if (q.a_override) {
    r.require(std::isfinite(*q.a_override) && *q.a_override > 0.0,
              "density scale override must be finite and > 0");
  }
  return r;
}

namespace detail {

inline void check_power_arg(double power, const char* where) {
  if (!std::isfinite(power) || !(power > 0.0)) {
    throw std::invalid_argument(std::string(where) +
                                ": transmit power must be finite and > 0");
  }
}

inline void check_query(const ValidationReport& r, const char* where) {
  if (!r.ok()) {
    throw std::invalid_argument(std::string(where) + ": " + r.to_string());
  }
}

}  // namespace detail

// Mean power drawn per unit area, cache enabled.  Under qos_boundary the
// popularity exponent seen by a station is eta(P) = (lambda_u / a) * P^s.
inline double apc_cached(const ApcQuery& q, double power) {
  detail::check_query(validate(q), "apc_cached");
  detail::check_power_arg(power, "apc_cached");
  const double ps = q.power.p_s();
  const double pd = q.power.p_d();
  if (q.density_rule == DensityRule::fixed) {
    return q.network.lambda_b *
           (power + ps + pd * miss_probability(q.power.f0, q.network.eta()));
  }
  const double a = q.qos_a();
  const double s = q.exponent_s();
  const double eta_p = (q.network.lambda_u / a) * std::pow(power, s);
  // The miss factor f0^(1-eta_p) is kept as written even where eta_p <= 1;
  // outside that regime the popularity model itself is improper.
  const double miss = std::pow(q.power.f0, 1.0 - eta_p);
  return a * std::pow(power, -s) * (power + ps + pd * miss);
}

inline double apc_uncached(const ApcQuery& q, double power) {
  detail::check_query(validate(q), "apc_uncached");
  detail::check_power_arg(power, "apc_uncached");
  const double load = power + q.power.p_s() + q.power.p_d();
  if (q.density_rule == DensityRule::fixed) {
    return q.network.lambda_b * load;
  }
  const double a = q.qos_a();
  return a * std::pow(power, -q.exponent_s()) * load;
}

// Closed-form d(APC)/dP for the qos_boundary rule; cross-checked against
// central differences in the test-suite.
inline double apc_derivative(const ApcQuery& q, double power, CacheMode mode) {
  detail::check_query(validate(q), "apc_derivative");
  detail::check_power_arg(power, "apc_derivative");
  if (q.density_rule == DensityRule::fixed) {
    return q.network.lambda_b;  // affine in P at fixed density
  }
  const double a = q.qos_a();
  const double s = q.exponent_s();
  const double ps = q.power.p_s();
  const double pd = q.power.p_d();
  if (mode == CacheMode::uncached) {
    return a * std::pow(power, -s - 1.0) *
           ((1.0 - s) * power - s * (ps + pd));
  }
  const double eta_p = (q.network.lambda_u / a) * std::pow(power, s);
  const double miss = std::pow(q.power.f0, 1.0 - eta_p);
  const double log_f0 = std::log(q.power.f0);
  return a * ((1.0 - s) * std::pow(power, -s) -
              s * ps * std::pow(power, -s - 1.0) -
              s * pd * miss *
                  (std::pow(power, -s - 1.0) +
                   (q.network.lambda_u / a) * log_f0 / power));
}

struct EeQuery {
  NetworkParams network;
  CachePowerParams power;
  double correction_c = 1.0;  // noise correction in the (1 - c/P) numerator
  double pcov_nn = 1.0;       // no-noise coverage factor of the rate term

  // Normalized convention: unit correction and unit coverage factor, the
  // form in which the closed-form optima P* = 1 + sqrt(1 + K) are usually
  // quoted.
  static EeQuery normalized(NetworkParams n, CachePowerParams p) {
    return EeQuery{std::move(n), std::move(p), 1.0, 1.0};
  }

  // Self-consistent convention: correction and coverage factor both derived
  // from the network parameters.
  static EeQuery derived_convention(
      NetworkParams n, CachePowerParams p,
      CorrectionConvention convention = CorrectionConvention::a_prime) {
    EeQuery q{std::move(n), std::move(p), 1.0, 1.0};
    q.correction_c = noise_correction(q.network, convention);
    q.pcov_nn = derive(q.network).pcov_nn;
    return q;
  }
};

inline ValidationReport validate(const EeQuery& q) {
  ValidationReport r = validate(q.network);
  r.merge(validate(q.power));
  r.require(std::isfinite(q.correction_c) && q.correction_c >= 0.0,
            "noise correction c must be finite and >= 0");
  r.require(std::isfinite(q.pcov_nn) && q.pcov_nn > 0.0,
            "coverage factor must be finite and > 0");
  return r;
}

namespace detail {

inline double ee_rest_power(const EeQuery& q, CacheMode mode) {
  if (mode == CacheMode::cached) {
    return q.power.p_s() +
           q.power.p_d() * miss_probability(q.power.f0, q.network.eta());
  }
  return q.power.p_s() + q.power.p_d();
}

}  // namespace detail

// Bits per joule per unit area (up to the bandwidth factor):
//   EE(P) = lambda_b * log(1 + gamma) * pcov * (1 - c/P) / (P + K),
// where K is the non-transmit power per station.  Negative below P = c,
// where the low-noise coverage factor is out of its validity range.
inline double ee_value(const EeQuery& q, double power, CacheMode mode) {
  detail::check_query(validate(q), "ee_value");
  detail::check_power_arg(power, "ee_value");
  const double rest = detail::ee_rest_power(q, mode);
  const double rate = q.network.lambda_b * std::log1p(q.network.gamma) *
                      q.pcov_nn * (1.0 - q.correction_c / power);
  return rate / (power + rest);
}

inline double ee_cached(const EeQuery& q, double power) {
  return ee_value(q, power, CacheMode::cached);
}

inline double ee_uncached(const EeQuery& q, double power) {
  return ee_value(q, power, CacheMode::uncached);
}

inline double ee_derivative(const EeQuery& q, double power, CacheMode mode) {
  detail::check_query(validate(q), "ee_derivative");
  detail::check_power_arg(power, "ee_derivative");
  const double rest = detail::ee_rest_power(q, mode);
  const double c = q.correction_c;
  const double pref = q.network.lambda_b * std::log1p(q.network.gamma) *
                      q.pcov_nn;
  const double total = power + rest;
  return pref * ((c / (power * power)) * total - (1.0 - c / power)) /
         (total * total);
}

enum class OptimumStatus {
  ok,              // interior optimum found
  none,            // objective has no interior optimum for these parameters
  bracket_failure  // search could not enclose an optimum
};

inline const char* to_string(OptimumStatus s) {
  switch (s) {
    case OptimumStatus::ok:
      return "ok";
    case OptimumStatus::none:
      return "none";
    default:
      return "bracket_failure";
  }
}

struct OptimumReport {
  OptimumStatus status = OptimumStatus::none;
  double argopt = std::numeric_limits<double>::quiet_NaN();
  double value = std::numeric_limits<double>::quiet_NaN();
  // Exact closed-form optimum when one exists for the mode (uncached APC,
  // both EE modes); NaN otherwise.
  double closed_form = std::numeric_limits<double>::quiet_NaN();
  // Strict lower bound on the optimum when only that is available in closed
  // form (cached APC).
  double lower_bound = std::numeric_limits<double>::quiet_NaN();
  double bracket_lo = std::numeric_limits<double>::quiet_NaN();
  double bracket_hi = std::numeric_limits<double>::quiet_NaN();
  // |argopt - closed_form| / closed_form when both are available.
  double agreement_rel = std::numeric_limits<double>::quiet_NaN();
  bool converged = false;
  int evaluations = 0;
  std::string note;
};

namespace detail {

inline void finish_report(OptimumReport& report, const ScalarMinimum& m) {
  report.evaluations = m.evaluations;
  if (!m.bracket_found) {
    report.status = OptimumStatus::bracket_failure;
    report.note = "no bracket: objective monotone over the searched range";
    report.value = std::numeric_limits<double>::quiet_NaN();
    return;
  }
  report.status = OptimumStatus::ok;
  report.argopt = m.argmin;
  report.bracket_lo = m.bracket_lo;
  report.bracket_hi = m.bracket_hi;
  report.converged = m.converged;
  if (std::isfinite(report.closed_form) && report.closed_form > 0.0) {
    report.agreement_rel =
        std::abs(report.argopt - report.closed_form) / report.closed_form;
  }
}

}  // namespace detail

// Transmit power minimizing APC under the qos_boundary rule.  An interior
// minimum requires alpha > 4 (epsilon > 0): uncached it sits exactly at
// 2(p_s + p_d)/epsilon, cached strictly above 2 p_s / epsilon.
inline OptimumReport minimize_apc(const ApcQuery& q, CacheMode mode,
                                  ScalarSearchOptions opts = {}) {
  detail::check_query(validate(q), "minimize_apc");
  OptimumReport report;
  if (q.density_rule == DensityRule::fixed) {
    report.note = "area power is affine increasing in P at fixed density";
    return report;
  }
  const double eps = q.epsilon();
  if (!(eps > 0.0)) {
    report.note = "no interior minimum for alpha <= 4";
    return report;
  }
  const double ps = q.power.p_s();
  const double pd = q.power.p_d();
  if (mode == CacheMode::uncached) {
    report.closed_form = 2.0 * (ps + pd) / eps;
    auto objective = [&](double p) { return apc_uncached(q, p); };
    const ScalarMinimum m = minimize_scalar(objective, report.closed_form, opts);
    report.value = m.value;
    detail::finish_report(report, m);
    return report;
  }
  report.lower_bound = 2.0 * ps / eps;
  auto objective = [&](double p) { return apc_cached(q, p); };
  const double start =
      report.lower_bound > 0.0 ? 1.5 * report.lower_bound : 2.0 * pd / eps;
  const ScalarMinimum m = minimize_scalar(objective, start, opts);
  report.value = m.value;
  detail::finish_report(report, m);
  if (report.status == OptimumStatus::ok &&
      !(report.argopt > report.lower_bound)) {
    report.note = "minimizer did not clear its analytic lower bound";
  }
  return report;
}

// Transmit power maximizing EE.  Stationarity gives
//   P* = c + sqrt(c^2 + c K),
// which the numeric search must reproduce; with the normalized convention
// (c = 1) this is the familiar 1 + sqrt(1 + K).
inline OptimumReport maximize_ee(const EeQuery& q, CacheMode mode,
                                 ScalarSearchOptions opts = {}) {
  detail::check_query(validate(q), "maximize_ee");
  OptimumReport report;
  const double c = q.correction_c;
  if (!(c > 0.0)) {
    report.note = "efficiency is strictly decreasing when c = 0";
    return report;
  }
  const double rest = detail::ee_rest_power(q, mode);
  report.closed_form = c + std::sqrt(c * c + c * rest);
  opts.lower_limit = c;  // EE is negative below c and -> 0 at both ends
  auto objective = [&](double p) { return -ee_value(q, p, mode); };
  const ScalarMinimum m = minimize_scalar(objective, report.closed_form, opts);
  report.value = -m.value;
  detail::finish_report(report, m);
  return report;
}

}  // namespace greencell
