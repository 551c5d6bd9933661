#pragma once

#include <cmath>
#include <string>
#include <vector>

#include "greencell/config.hpp"
#include "greencell/coverage.hpp"
#include "greencell/metrics.hpp"
#include "greencell/montecarlo.hpp"
#include "greencell/sweep.hpp"

// Experiment drivers: each takes a validated ExperimentConfig and produces a
// deterministic text payload (CSV table or line report) plus an exit code.

namespace greencell {

inline constexpr const char* kVersion = "0.1.0";

struct ExperimentOutput {
  SweepResult table;  // populated by the sweep experiments
  std::string text;   // rendered payload
  bool pass = true;   // false only when mc-validate rejects
  int exit_code = 0;
};

namespace detail {

inline void check_config(const ExperimentConfig& cfg) {
  const ValidationReport r = cfg.validate();
  if (!r.ok()) {
    throw ConfigError(r.to_string());
  }
}

inline std::vector<std::pair<std::string, std::string>> standard_metadata(
    const ExperimentConfig& cfg) {
  std::vector<std::pair<std::string, std::string>> md;
  md.emplace_back("generator", std::string("greencell/") + kVersion);
  const auto echo = cfg.echo();
  md.insert(md.end(), echo.begin(), echo.end());
  return md;
}

inline std::string series_suffix(const ExperimentConfig& cfg, double alpha,
                                 double f0, bool with_f0) {
  std::string s = "(";
  if (with_f0) {
    s += "f0=" + fmt_double(f0);
  }
  if (cfg.alphas().size() > 1) {
    if (with_f0) {
      s += ";";
    }
    s += "alpha=" + fmt_double(alpha);
  } else if (!with_f0) {
    return "";
  }
  s += ")";
  return s == "()" ? "" : s;
}

}  // namespace detail

// Area power consumption versus transmit power, one cached series per
// (alpha, f0) pair plus an uncached series per alpha.
inline ExperimentOutput run_apc_sweep(const ExperimentConfig& cfg) {
  detail::check_config(cfg);
  ExperimentOutput out;
  out.table.metadata = detail::standard_metadata(cfg);

  std::vector<ApcQuery> queries;
  out.table.columns.push_back("P");
  for (double alpha : cfg.alphas()) {
    for (double f0 : cfg.f0_values) {
      ApcQuery q{cfg.network(alpha), cfg.power_for(f0), cfg.density_rule(),
                 cfg.a_override};
      queries.push_back(q);
      out.table.columns.push_back(
          "apc_cached" + detail::series_suffix(cfg, alpha, f0, true));
    }
  }
  std::vector<ApcQuery> uncached_queries;
  for (double alpha : cfg.alphas()) {
    ApcQuery q{cfg.network(alpha), cfg.power_for(cfg.f0_values.front()),
               cfg.density_rule(), cfg.a_override};
    uncached_queries.push_back(q);
    out.table.columns.push_back(
        "apc_uncached" + detail::series_suffix(cfg, alpha, 0.0, false));
  }
  out.table.columns.push_back("flag");

  for (double p : cfg.grid()) {
    std::vector<double> row;
    row.push_back(p);
    for (const ApcQuery& q : queries) {
      row.push_back(apc_cached(q, p));
    }
    for (const ApcQuery& q : uncached_queries) {
      row.push_back(apc_uncached(q, p));
    }
    row.push_back(0.0);  // analytical everywhere: nothing to flag
    out.table.rows.push_back(std::move(row));
  }
  out.text = render_csv(out.table);
  return out;
}

// Energy efficiency versus transmit power, one cached series per f0 plus the
// uncached series.  The flag column marks rows with P <= c, where the
// low-noise factor (1 - c/P) is outside its validity range.
inline ExperimentOutput run_ee_sweep(const ExperimentConfig& cfg) {
  detail::check_config(cfg);
  ExperimentOutput out;
  out.table.metadata = detail::standard_metadata(cfg);

  const NetworkParams net = cfg.network();
  const CorrectionConvention conv = cfg.correction == "a"
                                        ? CorrectionConvention::a
                                        : CorrectionConvention::a_prime;
  std::vector<EeQuery> queries;
  for (double f0 : cfg.f0_values) {
    EeQuery q = cfg.convention == "normalized"
                    ? EeQuery::normalized(net, cfg.power_for(f0))
                    : EeQuery::derived_convention(net, cfg.power_for(f0), conv);
    if (cfg.pcov_nn_override) {
      q.pcov_nn = *cfg.pcov_nn_override;
    }
    queries.push_back(q);
  }

  out.table.columns.push_back("P");
  for (double f0 : cfg.f0_values) {
    out.table.columns.push_back("ee_cached(f0=" + detail::fmt_double(f0) +
                                ")");
  }
  out.table.columns.push_back("ee_uncached");
  out.table.columns.push_back("flag");

  const double c = queries.front().correction_c;
  for (double p : cfg.grid()) {
    std::vector<double> row;
    row.push_back(p);
    for (const EeQuery& q : queries) {
      row.push_back(ee_cached(q, p));
    }
    row.push_back(ee_uncached(queries.front(), p));
    row.push_back(p <= c ? 1.0 : 0.0);
    out.table.rows.push_back(std::move(row));
  }
  out.text = render_csv(out.table);
  return out;
}

namespace detail {

inline std::string render_optimum_line(const std::string& objective,
                                       const std::string& mode,
                                       const std::string& convention,
                                       const OptimumReport& r) {
  std::string line = "result objective=" + objective + " mode=" + mode;
  if (!convention.empty()) {
    line += " convention=" + convention;
  }
  line += std::string(" status=") + to_string(r.status);
  line += " argopt=" + fmt_double(r.argopt);
  line += " value=" + fmt_double(r.value);
  line += " closed_form=" + fmt_double(r.closed_form);
  line += " lower_bound=" + fmt_double(r.lower_bound);
  line += " bracket=[" + fmt_double(r.bracket_lo) + "," +
          fmt_double(r.bracket_hi) + "]";
  line += " agreement_rel=" + fmt_double(r.agreement_rel);
  line += std::string(" converged=") + (r.converged ? "1" : "0");
  line += " evaluations=" + std::to_string(r.evaluations);
  if (!r.note.empty()) {
    line += " note=\"" + r.note + "\"";
  }
  return line;
}

}  // namespace detail

// Closed-form and numeric optima of the selected objectives.  A `none`
// status is a legitimate answer (for example alpha <= 4), not a failure.
inline ExperimentOutput run_optimize(const ExperimentConfig& cfg) {
  detail::check_config(cfg);
  ExperimentOutput out;
  std::string text;
  for (const auto& [key, value] : detail::standard_metadata(cfg)) {
    text += "# " + key + "=" + value + "\n";
  }

  const bool want_apc = cfg.objective == "apc" || cfg.objective == "both";
  const bool want_ee = cfg.objective == "ee" || cfg.objective == "both";
  const bool want_cached = cfg.mode == "cached" || cfg.mode == "both";
  const bool want_uncached = cfg.mode == "uncached" || cfg.mode == "both";
  const NetworkParams net = cfg.network();
  const CorrectionConvention conv = cfg.correction == "a"
                                        ? CorrectionConvention::a
                                        : CorrectionConvention::a_prime;

  if (want_apc) {
    ApcQuery q{net, cfg.power_for(cfg.f0_values.front()), cfg.density_rule(),
               cfg.a_override};
    if (want_cached) {
      text += detail::render_optimum_line(
                  "apc", "cached", "", minimize_apc(q, CacheMode::cached)) +
              "\n";
    }
    if (want_uncached) {
      text += detail::render_optimum_line(
                  "apc", "uncached", "",
                  minimize_apc(q, CacheMode::uncached)) +
              "\n";
    }
  }
  if (want_ee) {
    EeQuery q =
        cfg.convention == "normalized"
            ? EeQuery::normalized(net, cfg.power_for(cfg.f0_values.front()))
            : EeQuery::derived_convention(
                  net, cfg.power_for(cfg.f0_values.front()), conv);
    if (cfg.pcov_nn_override) {
      q.pcov_nn = *cfg.pcov_nn_override;
    }
    if (want_cached) {
      text += detail::render_optimum_line("ee", "cached", cfg.convention,
                                          maximize_ee(q, CacheMode::cached)) +
              "\n";
    }
    if (want_uncached) {
      text +=
          detail::render_optimum_line("ee", "uncached", cfg.convention,
                                      maximize_ee(q, CacheMode::uncached)) +
          "\n";
    }
  }
  out.text = text;
  return out;
}

// Simulation cross-checks of the analytical pipeline.  Each row compares one
// simulated quantity with its analytical value at a tolerance combining the
// Monte Carlo error with a small model floor.
inline ExperimentOutput run_mc_validate(const ExperimentConfig& cfg) {
  detail::check_config(cfg);
  ExperimentOutput out;
  std::string text;
  for (const auto& [key, value] : detail::standard_metadata(cfg)) {
    text += "# " + key + "=" + value + "\n";
  }

  struct Row {
    std::string quantity;
    double analytic = 0.0;
    double simulated = 0.0;
    double se = 0.0;
    double tol = 0.0;
    bool pass = false;
  };
  std::vector<Row> rows;
  auto add_row = [&rows](const std::string& quantity, double analytic,
                         const SimEstimate& est, double floor_abs) {
    Row row;
    row.quantity = quantity;
    row.analytic = analytic;
    row.simulated = est.value;
    row.se = est.std_error;
    row.tol = std::max(3.0 * est.std_error, floor_abs);
    row.pass = std::abs(est.value - analytic) <= row.tol;
    rows.push_back(row);
  };

  SimConfig sim;
  sim.network = cfg.network();
  sim.power = cfg.power_for(cfg.f0_values.front());
  sim.window_radius = cfg.window_radius;
  sim.truncation_guard = cfg.guard;
  sim.trials = cfg.trials;
  sim.seed = cfg.seed;
  sim.threads = cfg.threads;
  sim.gamma_scale = cfg.gamma_scale;

  // 1. Coverage against the no-noise closed form.
  {
    SimConfig no_noise = sim;
    no_noise.network.noise = NoiseModel::direct(0.0);
    add_row("coverage_nonoise", coverage_nn(sim.network),
            estimate_coverage(no_noise), 0.005);
  }
  // 2-5. One joint simulation supplies the noisy coverage, hit rate, area
  // power and efficiency rows (its streams coincide with the standalone
  // estimators').
  {
    const PowerEfficiencyEstimate joint = estimate_apc_ee(sim, cfg.requests);
    add_row("coverage_noise",
            coverage_exact(CoverageQuery{sim.network, sim.power.p_tx}),
            joint.coverage, 0.005);
    add_row("hit_rate", hit_probability(sim.power.f0, sim.network.eta()),
            joint.hit_rate, 0.0);
    const double apc_analytic =
        sim.network.lambda_b *
        total_power_cached(sim.power, sim.network.eta());
    add_row("apc_fixed_density", apc_analytic, joint.apc,
            1e-9 * std::abs(apc_analytic));
    const EeQuery ee_query =
        EeQuery::derived_convention(sim.network, sim.power);
    const double ee_analytic = ee_cached(ee_query, sim.power.p_tx);
    add_row("ee_fixed_density", ee_analytic, joint.ee,
            0.02 * std::abs(ee_analytic));
  }

  bool all_pass = true;
  for (const Row& row : rows) {
    all_pass = all_pass && row.pass;
    text += "row quantity=" + row.quantity +
            " analytic=" + detail::fmt_double(row.analytic) +
            " simulated=" + detail::fmt_double(row.simulated) +
            " se=" + detail::fmt_double(row.se) +
            " tol=" + detail::fmt_double(row.tol) +
            " pass=" + (row.pass ? "1" : "0") + "\n";
  }
  text += "overall pass=" + std::string(all_pass ? "1" : "0") +
          " rows=" + std::to_string(rows.size()) + "\n";
  out.text = text;
  out.pass = all_pass;
  out.exit_code = all_pass ? 0 : 1;
  return out;
}

inline ExperimentOutput run(const ExperimentConfig& cfg) {
  switch (cfg.kind) {
    case ExperimentKind::apc_sweep:
      return run_apc_sweep(cfg);
    case ExperimentKind::ee_sweep:
      return run_ee_sweep(cfg);
    case ExperimentKind::optimize:
      return run_optimize(cfg);
    default:
      return run_mc_validate(cfg);
  }
}

}  // namespace greencell
