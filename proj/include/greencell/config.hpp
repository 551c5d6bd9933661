#pragma once

#include <cmath>
#include <cstdint>
#include <cstdio>
#include <fstream>
#include <optional>
#include <sstream>
#include <string>
#include <utility>
#include <vector>

#include "greencell/cache.hpp"
#include "greencell/metrics.hpp"
#include "greencell/network.hpp"

// Experiment configuration: flat key=value text files plus programmatic
// overrides, resolved into the typed parameter structs of the library.
// Precedence is defaults < file < overrides, applied in call order.

namespace greencell {

class ConfigError : public std::runtime_error {
 public:
  explicit ConfigError(const std::string& what) : std::runtime_error(what) {}
};

enum class ExperimentKind { apc_sweep, ee_sweep, optimize, mc_validate };

inline const char* to_string(ExperimentKind k) {
  switch (k) {
    case ExperimentKind::apc_sweep:
      return "apc-sweep";
    case ExperimentKind::ee_sweep:
      return "ee-sweep";
    case ExperimentKind::optimize:
      return "optimize";
    default:
      return "mc-validate";
  }
}

namespace detail {

inline std::string trim(const std::string& s) {
  const auto first = s.find_first_not_of(" \t\r\n");
  if (first == std::string::npos) {
    return "";
  }
  const auto last = s.find_last_not_of(" \t\r\n");
  return s.substr(first, last - first + 1);
}

inline double parse_double(const std::string& key, const std::string& value) {
  std::size_t used = 0;
  double v = 0.0;
  try {
    v = std::stod(value, &used);
  } catch (const std::exception&) {
    throw ConfigError("key '" + key + "': cannot parse '" + value +
                      "' as a number");
  }
  if (used != value.size()) {
    throw ConfigError("key '" + key + "': trailing characters in '" + value +
                      "'");
  }
  return v;
}

inline std::uint64_t parse_u64(const std::string& key,
                               const std::string& value) {
  const double v = parse_double(key, value);
  if (v < 0.0 || v != std::floor(v) || v > 1.8e19) {
    throw ConfigError("key '" + key + "': '" + value +
                      "' is not a non-negative integer");
  }
  return static_cast<std::uint64_t>(v);
}

inline std::vector<double> parse_list(const std::string& key,
                                      const std::string& value) {
  std::vector<double> out;
  std::stringstream ss(value);
  std::string item;
  while (std::getline(ss, item, ',')) {
    const std::string t = trim(item);
    if (t.empty()) {
      throw ConfigError("key '" + key + "': empty element in list '" + value +
                        "'");
    }
    out.push_back(parse_double(key, t));
  }
  if (out.empty()) {
    throw ConfigError("key '" + key + "': empty list");
  }
  return out;
}

inline std::string fmt_double(double v) {
  char buf[64];
  std::snprintf(buf, sizeof(buf), "%.12g", v);
  return buf;
}

}  // namespace detail

struct ExperimentConfig {
  ExperimentKind kind = ExperimentKind::apc_sweep;

  // Network.
  double lambda_b = 0.5;
  double lambda_u = 0.6;
  double alpha = 4.75;
  double gamma = 2.0;
  double b = 1.0;
  std::optional<double> beta;
  std::optional<double> noise_bandwidth_hz;
  std::optional<double> noise_figure;
  std::optional<double> noise_temperature_k;

  // Station power: aggregate and constituent forms are mutually exclusive.
  double p_tx = 50.0;
  std::optional<double> p_s_agg;
  std::optional<double> p_d_agg;
  std::optional<double> p_o;
  std::optional<double> p_hd;
  std::optional<double> p_bh;
  std::vector<double> f0_values{10.0, 100.0, 1000.0};

  // Density rule and sweep grid.
  std::string density = "qos";  // qos | fixed
  std::optional<double> a_override;
  std::vector<double> alpha_list;  // empty: just `alpha`
  std::optional<double> sweep_min;
  std::optional<double> sweep_max;
  std::optional<double> sweep_step;

  // Efficiency conventions.
  std::string convention = "derived";  // normalized | derived
  std::string correction = "aprime";   // aprime | a
  std::optional<double> pcov_nn_override;

  // Optimization selection.
  std::string objective = "both";  // apc | ee | both
  std::string mode = "both";       // cached | uncached | both

  // Simulation.
  std::uint64_t trials = 200000;
  std::uint64_t requests = 1000000;
  double window_radius = 0.0;
  int threads = 0;
  double guard = 1e-3;
  double gamma_scale = 1.0;

  // Common.
  std::uint64_t seed = 1;
  std::string out;
  std::string format = "csv";

  static ExperimentConfig defaults(ExperimentKind kind) {
    ExperimentConfig cfg;
    cfg.kind = kind;
    return cfg;
  }

  // Grid bounds fall back to the conventional window for each experiment.
  double grid_min() const {
    return sweep_min.value_or(kind == ExperimentKind::ee_sweep ? 2.0 : 0.5);
  }
  double grid_max() const {
    return sweep_max.value_or(kind == ExperimentKind::ee_sweep ? 60.0 : 99.0);
  }
  double grid_step() const {
    return sweep_step.value_or(kind == ExperimentKind::ee_sweep ? 0.25 : 0.5);
  }

  std::vector<double> grid() const {
    const double lo = grid_min();
    const double hi = grid_max();
    const double step = grid_step();
    std::vector<double> out;
    const double count = std::floor((hi - lo) / step + 1e-9);
    for (double i = 0; i <= count; ++i) {
      out.push_back(lo + i * step);
    }
    return out;
  }

  std::vector<double> alphas() const {
    return alpha_list.empty() ? std::vector<double>{alpha} : alpha_list;
  }

  void set(const std::string& key, const std::string& value) {
    using detail::parse_double;
    using detail::parse_list;
    using detail::parse_u64;
    if (key == "lambda_b") {
      lambda_b = parse_double(key, value);
    } else if (key == "lambda_u") {
      lambda_u = parse_double(key, value);
    } else if (key == "alpha") {
      alpha = parse_double(key, value);
    } else if (key == "gamma") {
      gamma = parse_double(key, value);
    } else if (key == "gamma_db") {
      gamma = std::pow(10.0, parse_double(key, value) / 10.0);
    } else if (key == "b") {
      b = parse_double(key, value);
    } else if (key == "beta") {
      beta = parse_double(key, value);
    } else if (key == "noise_bandwidth_hz") {
      noise_bandwidth_hz = parse_double(key, value);
    } else if (key == "noise_figure") {
      noise_figure = parse_double(key, value);
    } else if (key == "noise_temperature_k") {
      noise_temperature_k = parse_double(key, value);
    } else if (key == "p_tx") {
      p_tx = parse_double(key, value);
    } else if (key == "p_s") {
      p_s_agg = parse_double(key, value);
    } else if (key == "p_d") {
      p_d_agg = parse_double(key, value);
    } else if (key == "p_o") {
      p_o = parse_double(key, value);
    } else if (key == "p_hd") {
      p_hd = parse_double(key, value);
    } else if (key == "p_bh") {
      p_bh = parse_double(key, value);
    } else if (key == "f0") {
      f0_values = parse_list(key, value);
    } else if (key == "density") {
      density = value;
    } else if (key == "a_override") {
      a_override = parse_double(key, value);
    } else if (key == "alpha_list") {
      alpha_list = parse_list(key, value);
    } else if (key == "sweep_min") {
      sweep_min = parse_double(key, value);
    } else if (key == "sweep_max") {
      sweep_max = parse_double(key, value);
    } else if (key == "sweep_step") {
      sweep_step = parse_double(key, value);
    } else if (key == "convention") {
      convention = value;
    } else if (key == "correction") {
      correction = value;
    } else if (key == "pcov_nn") {
      pcov_nn_override = parse_double(key, value);
    } else if (key == "objective") {
      objective = value;
    } else if (key == "mode") {
      mode = value;
    } else if (key == "trials") {
      trials = parse_u64(key, value);
    } else if (key == "requests") {
      requests = parse_u64(key, value);
    } else if (key == "window_radius") {
      window_radius = parse_double(key, value);
    } else if (key == "threads") {
      threads = static_cast<int>(parse_u64(key, value));
    } else if (key == "guard") {
      guard = parse_double(key, value);
    } else if (key == "gamma_scale") {
      gamma_scale = parse_double(key, value);
    } else if (key == "seed") {
      seed = parse_u64(key, value);
    } else if (key == "out") {
      out = value;
    } else if (key == "format") {
      format = value;
    } else {
      throw ConfigError("unknown key '" + key + "'");
    }
  }

  void apply_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) {
      throw ConfigError("cannot open config file '" + path + "'");
    }
    std::string line;
    int line_no = 0;
    while (std::getline(in, line)) {
      ++line_no;
      const auto hash = line.find('#');
      if (hash != std::string::npos) {
        line = line.substr(0, hash);
      }
      line = detail::trim(line);
      if (line.empty()) {
        continue;
      }
      const auto eq = line.find('=');
      if (eq == std::string::npos) {
        throw ConfigError(path + ":" + std::to_string(line_no) +
                          ": expected key = value");
      }
      const std::string key = detail::trim(line.substr(0, eq));
      const std::string value = detail::trim(line.substr(eq + 1));
      if (key.empty()) {
        throw ConfigError(path + ":" + std::to_string(line_no) +
                          ": empty key");
      }
      try {
        set(key, value);
      } catch (const ConfigError& e) {
        throw ConfigError(path + ":" + std::to_string(line_no) + ": " +
                          e.what());
      }
    }
  }

  bool physical_noise() const {
    return noise_bandwidth_hz || noise_figure || noise_temperature_k;
  }

  NoiseModel noise_model() const {
    if (physical_noise()) {
      return NoiseModel::physical(noise_bandwidth_hz.value_or(0.0),
                                  noise_figure.value_or(0.0),
                                  noise_temperature_k.value_or(0.0));
    }
    return NoiseModel::direct(beta.value_or(1.0));
  }

  NetworkParams network(double alpha_value) const {
    return NetworkParams{lambda_b, lambda_u, alpha_value,
                         gamma,    b,        noise_model()};
  }
  NetworkParams network() const { return network(alpha); }

  bool constituent_power() const { return p_o || p_hd || p_bh; }

  CachePowerParams power_for(double f0) const {
    if (constituent_power()) {
      return CachePowerParams{p_tx, p_o.value_or(25.0), p_hd.value_or(0.0),
                              p_bh.value_or(10.0), f0};
    }
    return CachePowerParams::from_aggregates(p_tx, p_s_agg.value_or(25.0),
                                             p_d_agg.value_or(10.0), f0);
  }

  DensityRule density_rule() const {
    return density == "fixed" ? DensityRule::fixed : DensityRule::qos_boundary;
  }

  ValidationReport validate() const {
    ValidationReport r;
    r.require(!(constituent_power() && (p_s_agg || p_d_agg)),
              "give either aggregate (p_s, p_d) or constituent (p_o, p_hd, "
              "p_bh) station powers, not both");
    if (physical_noise()) {
      r.require(beta == std::nullopt,
                "give either beta or the physical noise parameters, not both");
      r.require(noise_bandwidth_hz && noise_figure && noise_temperature_k,
                "physical noise needs noise_bandwidth_hz, noise_figure and "
                "noise_temperature_k together");
    }
    r.require(density == "qos" || density == "fixed",
              "density must be 'qos' or 'fixed'");
    r.require(convention == "normalized" || convention == "derived",
              "convention must be 'normalized' or 'derived'");
    r.require(correction == "aprime" || correction == "a",
              "correction must be 'aprime' or 'a'");
    r.require(format == "csv", "format must be 'csv'");
    r.require(objective == "apc" || objective == "ee" || objective == "both",
              "objective must be 'apc', 'ee' or 'both'");
    r.require(mode == "cached" || mode == "uncached" || mode == "both",
              "mode must be 'cached', 'uncached' or 'both'");
    r.require(!f0_values.empty(), "f0 list must not be empty");
    const double step = grid_step();
    r.require(std::isfinite(step) && step > 0.0, "sweep_step must be > 0");
    r.require(std::isfinite(grid_min()) && grid_min() > 0.0,
              "sweep_min must be > 0");
    r.require(grid_max() >= grid_min(), "sweep_max must be >= sweep_min");
    r.require(trials > 0, "trials must be > 0");
    r.require(requests > 0, "requests must be > 0");
    r.require(std::isfinite(window_radius) && window_radius >= 0.0,
              "window_radius must be >= 0");
    r.require(std::isfinite(guard) && guard > 0.0, "guard must be > 0");
    r.require(std::isfinite(gamma_scale) && gamma_scale > 0.0,
              "gamma_scale must be > 0");
    r.require(threads >= 0, "threads must be >= 0");
    if (pcov_nn_override) {
      r.require(std::isfinite(*pcov_nn_override) && *pcov_nn_override > 0.0,
                "pcov_nn must be > 0");
    }
    if (a_override) {
      r.require(std::isfinite(*a_override) && *a_override > 0.0,
                "a_override must be > 0");
    }
    for (double a_value : alphas()) {
      r.merge(greencell::validate(network(a_value)));
    }
    for (double f0 : f0_values) {
      r.merge(greencell::validate(power_for(f0)));
    }
    return r;
  }

  // Canonical ordered echo of every effective setting; embedded in outputs
  // so that a result file pins down the run that produced it.
  std::vector<std::pair<std::string, std::string>> echo() const {
    using detail::fmt_double;
    std::vector<std::pair<std::string, std::string>> kv;
    kv.emplace_back("experiment", to_string(kind));
    kv.emplace_back("lambda_b", fmt_double(lambda_b));
    kv.emplace_back("lambda_u", fmt_double(lambda_u));
    {
      std::string joined;
      for (double a_value : alphas()) {
        if (!joined.empty()) {
          joined += ",";
        }
        joined += fmt_double(a_value);
      }
      kv.emplace_back("alpha", joined);
    }
    kv.emplace_back("gamma", fmt_double(gamma));
    kv.emplace_back("b", fmt_double(b));
    if (physical_noise()) {
      kv.emplace_back("noise_bandwidth_hz",
                      fmt_double(noise_bandwidth_hz.value_or(0.0)));
      kv.emplace_back("noise_figure", fmt_double(noise_figure.value_or(0.0)));
      kv.emplace_back("noise_temperature_k",
                      fmt_double(noise_temperature_k.value_or(0.0)));
    } else {
      kv.emplace_back("beta", fmt_double(beta.value_or(1.0)));
    }
    kv.emplace_back("density", density);
    if (a_override) {
      kv.emplace_back("a_override", fmt_double(*a_override));
    }
    kv.emplace_back("p_tx", fmt_double(p_tx));
    const CachePowerParams pw = power_for(f0_values.front());
    kv.emplace_back("p_o", fmt_double(pw.p_o));
    kv.emplace_back("p_hd", fmt_double(pw.p_hd));
    kv.emplace_back("p_bh", fmt_double(pw.p_bh));
    {
      std::string joined;
      for (double f0 : f0_values) {
        if (!joined.empty()) {
          joined += ",";
        }
        joined += fmt_double(f0);
      }
      kv.emplace_back("f0", joined);
    }
    if (kind == ExperimentKind::apc_sweep || kind == ExperimentKind::ee_sweep) {
      kv.emplace_back("sweep_min", fmt_double(grid_min()));
      kv.emplace_back("sweep_max", fmt_double(grid_max()));
      kv.emplace_back("sweep_step", fmt_double(grid_step()));
    }
    if (kind == ExperimentKind::ee_sweep || kind == ExperimentKind::optimize) {
      kv.emplace_back("convention", convention);
      kv.emplace_back("correction", correction);
      if (pcov_nn_override) {
        kv.emplace_back("pcov_nn", fmt_double(*pcov_nn_override));
      }
    }
    if (kind == ExperimentKind::optimize) {
      kv.emplace_back("objective", objective);
      kv.emplace_back("mode", mode);
    }
    if (kind == ExperimentKind::mc_validate) {
      kv.emplace_back("trials", std::to_string(trials));
      kv.emplace_back("requests", std::to_string(requests));
      kv.emplace_back("window_radius", fmt_double(window_radius));
      kv.emplace_back("guard", fmt_double(guard));
      kv.emplace_back("gamma_scale", fmt_double(gamma_scale));
      kv.emplace_back("seed", std::to_string(seed));
    }
    return kv;
  }
};

}  // namespace greencell
