#pragma once

#include <cmath>
#include <concepts>
#include <stdexcept>

#include "greencell/validation.hpp"

// Content popularity and the station power model.  Requests target a
// continuum of contents ranked by popularity; the rank distribution is the
// Pareto-type law with density (eta-1) f^-eta on [1, inf), where eta is the
// mean number of users per station.  A station caches the f0 most popular
// contents and pays a cheaper retrieval cost on hits.

namespace greencell {

template <class T>
concept UniformDoubleSource = requires(T t) {
  { t.next_double() } -> std::convertible_to<double>;
};

struct PopularityModel {
  double eta = 1.2;  // popularity exponent, > 1

  bool valid() const { return std::isfinite(eta) && eta > 1.0; }

  double pdf(double f) const {
    check();
    if (f < 1.0) {
      return 0.0;
    }
    return (eta - 1.0) * std::pow(f, -eta);
  }

  double cdf(double f) const {
    check();
    if (f < 1.0) {
      return 0.0;
    }
    return 1.0 - std::pow(f, 1.0 - eta);
  }

  // Maps u in [0, 1) to a content rank in [1, inf): (1-u)^(-1/(eta-1)).
  double inverse_cdf(double u) const {
    check();
    if (!(u >= 0.0) || !(u < 1.0)) {
      throw std::invalid_argument("inverse_cdf: u must lie in [0, 1)");
    }
    return std::pow(1.0 - u, -1.0 / (eta - 1.0));
  }

 private:
  void check() const {
    if (!valid()) {
      throw std::invalid_argument("popularity exponent eta must be > 1");
    }
  }
};

template <UniformDoubleSource Rng>
double sample_content_rank(const PopularityModel& model, Rng& rng) {
  return model.inverse_cdf(rng.next_double());
}

namespace detail {

inline void check_cache_args(double f0, double eta) {
  if (!(f0 >= 1.0) || !std::isfinite(f0)) {
    throw std::invalid_argument("cache size f0 must be finite and >= 1");
  }
  if (!(eta > 1.0) || !std::isfinite(eta)) {
    throw std::invalid_argument("popularity exponent eta must be > 1");
  }
}

}  // namespace detail

// Probability that a request misses a cache holding the f0 most popular
// contents: f0^(1-eta).
inline double miss_probability(double f0, double eta) {
  detail::check_cache_args(f0, eta);
  return std::pow(f0, 1.0 - eta);
}

inline double hit_probability(double f0, double eta) {
  return 1.0 - miss_probability(f0, eta);
}

// Station power decomposition.  p_s = p_o + p_hd is the power drawn
// regardless of where content comes from; p_d = p_bh - p_hd is the extra
// cost of going to the backhaul instead of local disk.
struct CachePowerParams {
  double p_tx = 50.0;  // transmit power budget
  double p_o = 25.0;   // static operating power
  double p_hd = 0.0;   // local retrieval power
  double p_bh = 10.0;  // backhaul retrieval power
  double f0 = 10.0;    // cache size, >= 1

  double p_s() const { return p_o + p_hd; }
  double p_d() const { return p_bh - p_hd; }

  // Convenience constructor for studies parameterized directly by the
  // aggregates (p_s, p_d).
  static CachePowerParams from_aggregates(double p_tx, double p_s, double p_d,
                                          double f0) {
    return CachePowerParams{p_tx, p_s, 0.0, p_d, f0};
  }
};

inline ValidationReport validate(const CachePowerParams& p) {
  ValidationReport r;
  r.require(std::isfinite(p.p_tx) && p.p_tx > 0.0,
            "transmit power p_tx must be finite and > 0");
  r.require(std::isfinite(p.p_o) && p.p_o >= 0.0,
            "operating power p_o must be finite and >= 0");
  r.require(std::isfinite(p.p_hd) && p.p_hd >= 0.0,
            "local retrieval power p_hd must be finite and >= 0");
  r.require(std::isfinite(p.p_bh) && p.p_bh > p.p_hd,
            "backhaul retrieval power p_bh must exceed p_hd");
  r.require(std::isfinite(p.f0) && p.f0 >= 1.0,
            "cache size f0 must be finite and >= 1");
  return r;
}

// Mean station power with a cache: the backhaul premium is only paid on
// misses.
inline double total_power_cached(const CachePowerParams& p, double eta) {
  return p.p_tx + p.p_s() + p.p_d() * miss_probability(p.f0, eta);
}

// Mean station power without a cache: every request goes to the backhaul.
inline double total_power_uncached(const CachePowerParams& p) {
  return p.p_tx + p.p_s() + p.p_d();
}

}  // namespace greencell
