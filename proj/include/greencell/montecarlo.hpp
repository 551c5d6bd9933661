#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <cstdlib>
#include <limits>
#include <numbers>
#include <stdexcept>
#include <string>
#include <thread>
#include <vector>

#include "greencell/cache.hpp"
#include "greencell/network.hpp"
#include "greencell/rng.hpp"
#include "greencell/validation.hpp"

// Monte Carlo cross-validation of the analytical model.  Stations are drawn
// in a disk around a probe user at the origin; each trial and each content
// request owns a private counter-based stream, and per-thread results are
// integer counts, so estimates are bit-identical for any thread count.

namespace greencell {

class EmptyWindow : public std::runtime_error {
 public:
  explicit EmptyWindow(const std::string& what) : std::runtime_error(what) {}
};

struct SimConfig {
  NetworkParams network;
  CachePowerParams power;
  double window_radius = 0.0;     // 0: use default_window_radius
  double truncation_guard = 1e-3; // admissible interference tail, relative
  std::uint64_t trials = 100000;
  std::uint64_t seed = 1;
  int threads = 0;                // 0: hardware concurrency
  double gamma_scale = 1.0;       // perturbs the detection threshold used by
                                  // the simulation only; a self-test knob
};

// Simulation window radius: at least 10 mean station spacings, grown until
// the expected interference from beyond the window is below `guard` times
// the signal from a station at the mean nearest-station distance, and capped
// at 60 spacings.  Transmit power cancels from the ratio.
inline double default_window_radius(const NetworkParams& p,
                                    double guard = 1e-3) {
  const double spacing = 1.0 / std::sqrt(p.lambda_b);
  const double base = 10.0 * spacing;
  const double cap = 60.0 * spacing;
  // Tail-to-signal ratio 2 pi lambda R^(2-alpha) / ((alpha-2) (2
  // sqrt(lambda))^alpha) == guard, solved for R.
  const double rhs = guard * (p.alpha - 2.0) *
                     std::pow(2.0 * std::sqrt(p.lambda_b), p.alpha) /
                     (2.0 * std::numbers::pi * p.lambda_b);
  const double guard_radius = std::pow(rhs, 1.0 / (2.0 - p.alpha));
  return std::min(std::max(base, guard_radius), cap);
}

struct Point {
  double x = 0.0;
  double y = 0.0;
};

struct NetworkRealization {
  std::vector<Point> positions;
  std::vector<double> fading;  // unit-mean exponential, one per station
  double window_radius = 0.0;
};

namespace detail {

// Stream-index layout: the top byte partitions independent random domains so
// coverage trials and content requests never share a stream.
inline constexpr std::uint64_t kCoverageDomain = 0;
inline constexpr std::uint64_t kRequestDomain = 1;

inline std::uint64_t stream_index(std::uint64_t domain, std::uint64_t index) {
  return (domain << 56) | index;
}

inline int resolve_threads(int requested, std::uint64_t items) {
  long t = requested;
  if (t <= 0) {
    if (const char* env = std::getenv("GREENCELL_MC_THREADS")) {
      t = std::strtol(env, nullptr, 10);
    }
  }
  if (t <= 0) {
    t = static_cast<long>(std::thread::hardware_concurrency());
  }
  t = std::clamp<long>(t, 1, 256);
  if (items < static_cast<std::uint64_t>(t)) {
    t = items > 0 ? static_cast<long>(items) : 1;
  }
  return static_cast<int>(t);
}

// Runs fn(begin, end) -> count over a contiguous partition of [0, n) and
// sums the counts.  Integer addition commutes, so the partition (and hence
// the thread count) cannot affect the result.
template <class Fn>
std::uint64_t parallel_count(std::uint64_t n, int threads, Fn fn) {
  if (threads <= 1 || n == 0) {
    return fn(std::uint64_t{0}, n);
  }
  std::vector<std::uint64_t> partial(static_cast<std::size_t>(threads), 0);
  std::vector<std::thread> pool;
  pool.reserve(static_cast<std::size_t>(threads));
  const std::uint64_t chunk = n / static_cast<std::uint64_t>(threads);
  const std::uint64_t remainder = n % static_cast<std::uint64_t>(threads);
  std::uint64_t begin = 0;
  for (int i = 0; i < threads; ++i) {
    const std::uint64_t size =
        chunk + (static_cast<std::uint64_t>(i) < remainder ? 1 : 0);
    const std::uint64_t end = begin + size;
    pool.emplace_back(
        [&partial, &fn, i, begin, end] { partial[static_cast<std::size_t>(i)] = fn(begin, end); });
    begin = end;
  }
  for (auto& th : pool) {
    th.join();
  }
  std::uint64_t total = 0;
  for (std::uint64_t c : partial) {
    total += c;
  }
  return total;
}

inline ValidationReport validate_sim(const SimConfig& cfg) {
  ValidationReport r = validate(cfg.network);
  r.merge(validate(cfg.power));
  r.require(std::isfinite(cfg.window_radius) && cfg.window_radius >= 0.0,
            "window radius must be finite and >= 0");
  r.require(cfg.trials > 0, "trial count must be > 0");
  r.require(std::isfinite(cfg.truncation_guard) && cfg.truncation_guard > 0.0,
            "truncation guard must be finite and > 0");
  r.require(std::isfinite(cfg.gamma_scale) && cfg.gamma_scale > 0.0,
            "gamma scale must be finite and > 0");
  return r;
}

}  // namespace detail

inline double resolved_window_radius(const SimConfig& cfg) {
  return cfg.window_radius > 0.0
             ? cfg.window_radius
             : default_window_radius(cfg.network, cfg.truncation_guard);
}

// Stations of one trial: Poisson count in the disk, uniform positions,
// independent fading.  Deterministic in (seed, trial).
inline NetworkRealization sample_realization(const SimConfig& cfg,
                                             std::uint64_t trial) {
  const double radius = resolved_window_radius(cfg);
  Philox rng(cfg.seed,
             detail::stream_index(detail::kCoverageDomain, trial));
  const double mean =
      cfg.network.lambda_b * std::numbers::pi * radius * radius;
  const std::uint64_t n = sample_poisson(mean, rng);
  NetworkRealization out;
  out.window_radius = radius;
  out.positions.reserve(n);
  out.fading.reserve(n);
  for (std::uint64_t i = 0; i < n; ++i) {
    const double r = radius * std::sqrt(rng.next_double());
    const double theta = 2.0 * std::numbers::pi * rng.next_double();
    out.positions.push_back({r * std::cos(theta), r * std::sin(theta)});
    out.fading.push_back(rng.next_exponential());
  }
  return out;
}

// Best instantaneous SINR over all stations for a probe user at the origin.
// Throws EmptyWindow when the realization holds no stations.
inline double max_sinr(const NetworkRealization& real, const NetworkParams& p,
                       double transmit_power) {
  if (real.positions.empty()) {
    throw EmptyWindow("max_sinr: realization contains no stations");
  }
  const double noise = p.sigma_sq();
  const std::size_t n = real.positions.size();
  std::vector<double> received(n);
  double total = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    const Point& pt = real.positions[i];
    const double dist_sq = pt.x * pt.x + pt.y * pt.y;
    if (dist_sq == 0.0) {
      return std::numeric_limits<double>::infinity();
    }
    received[i] = transmit_power * p.b * real.fading[i] *
                  std::pow(dist_sq, -0.5 * p.alpha);
    total += received[i];
  }
  double best = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    const double sinr = received[i] / (noise + (total - received[i]));
    best = std::max(best, sinr);
  }
  return best;
}

struct SimEstimate {
  double value = 0.0;
  double std_error = 0.0;
  std::uint64_t trials = 0;
};

namespace detail {

inline SimEstimate binomial_estimate(std::uint64_t successes,
                                     std::uint64_t n) {
  const double p = static_cast<double>(successes) / static_cast<double>(n);
  return {p, std::sqrt(p * (1.0 - p) / static_cast<double>(n)), n};
}

inline std::uint64_t covered_count(const SimConfig& cfg) {
  const double threshold = cfg.network.gamma * cfg.gamma_scale;
  const int threads = resolve_threads(cfg.threads, cfg.trials);
  return parallel_count(
      cfg.trials, threads,
      [&cfg, threshold](std::uint64_t begin, std::uint64_t end) {
        std::uint64_t covered = 0;
        for (std::uint64_t t = begin; t < end; ++t) {
          const NetworkRealization real = sample_realization(cfg, t);
          if (real.positions.empty()) {
            continue;  // no station in the window: not covered
          }
          if (max_sinr(real, cfg.network, cfg.power.p_tx) >= threshold) {
            ++covered;
          }
        }
        return covered;
      });
}

inline std::uint64_t hit_count(const SimConfig& cfg, std::uint64_t requests) {
  const PopularityModel model{cfg.network.eta()};
  const double f0 = cfg.power.f0;
  const int threads = resolve_threads(cfg.threads, requests);
  return parallel_count(
      requests, threads,
      [&cfg, model, f0](std::uint64_t begin, std::uint64_t end) {
        std::uint64_t hits = 0;
        for (std::uint64_t i = begin; i < end; ++i) {
          Philox rng(cfg.seed,
                     stream_index(kRequestDomain, i));
          if (sample_content_rank(model, rng) <= f0) {
            ++hits;
          }
        }
        return hits;
      });
}

}  // namespace detail

// Empirical coverage probability P[max SINR >= gamma].
inline SimEstimate estimate_coverage(const SimConfig& cfg) {
  ValidationReport r = detail::validate_sim(cfg);
  if (!r.ok()) {
    throw std::invalid_argument("estimate_coverage: " + r.to_string());
  }
  return detail::binomial_estimate(detail::covered_count(cfg), cfg.trials);
}

// Empirical cache hit rate over independent content requests.
inline SimEstimate estimate_hit_rate(const SimConfig& cfg,
                                     std::uint64_t requests) {
  ValidationReport r = detail::validate_sim(cfg);
  if (!r.ok()) {
    throw std::invalid_argument("estimate_hit_rate: " + r.to_string());
  }
  if (requests == 0) {
    throw std::invalid_argument("estimate_hit_rate: requests must be > 0");
  }
  return detail::binomial_estimate(detail::hit_count(cfg, requests),
                                   requests);
}

struct PowerEfficiencyEstimate {
  SimEstimate coverage;
  SimEstimate hit_rate;
  SimEstimate mean_total_power;  // per station
  SimEstimate apc;               // per unit area
  SimEstimate ee;
};

// Joint simulation of area power and energy efficiency at the configured
// density: coverage from network trials, the retrieval power mix from
// content requests.  Standard errors of the ratios use the delta method.
inline PowerEfficiencyEstimate estimate_apc_ee(const SimConfig& cfg,
                                               std::uint64_t requests) {
  ValidationReport r = detail::validate_sim(cfg);
  if (!r.ok()) {
    throw std::invalid_argument("estimate_apc_ee: " + r.to_string());
  }
  if (requests == 0) {
    throw std::invalid_argument("estimate_apc_ee: requests must be > 0");
  }
  PowerEfficiencyEstimate out;
  out.coverage = detail::binomial_estimate(detail::covered_count(cfg),
                                           cfg.trials);
  const std::uint64_t hits = detail::hit_count(cfg, requests);
  out.hit_rate = detail::binomial_estimate(hits, requests);

  const CachePowerParams& pw = cfg.power;
  const double m = static_cast<double>(requests);
  const double mean_retrieval =
      (static_cast<double>(hits) * pw.p_hd +
       static_cast<double>(requests - hits) * pw.p_bh) /
      m;
  const double mean_power = pw.p_tx + pw.p_o + mean_retrieval;
  const double se_power =
      (pw.p_bh - pw.p_hd) * out.hit_rate.std_error;
  out.mean_total_power = {mean_power, se_power, requests};

  const double lambda_b = cfg.network.lambda_b;
  out.apc = {lambda_b * mean_power, lambda_b * se_power, requests};

  const double rate = lambda_b * std::log1p(cfg.network.gamma);
  const double ee = rate * out.coverage.value / mean_power;
  double se_ee = 0.0;
  if (out.coverage.value > 0.0) {
    const double rel_cov = out.coverage.std_error / out.coverage.value;
    const double rel_pow = se_power / mean_power;
    se_ee = ee * std::sqrt(rel_cov * rel_cov + rel_pow * rel_pow);
  } else {
    se_ee = rate * out.coverage.std_error / mean_power;
  }
  out.ee = {ee, se_ee, cfg.trials};
  return out;
}

}  // namespace greencell
