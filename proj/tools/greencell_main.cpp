// Command-line front end: analytical sweeps, optimizer reports, and Monte
// Carlo cross-validation, driven by key=value config files with full flag
// override.  Exit codes: 0 success, 1 validation failure, 2 config error.

#include <cstdio>
#include <exception>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "greencell/greencell.hpp"

namespace {

struct CommonFlags {
  std::string config;
  std::string out;
  std::string seed;
  std::string convention;
  std::string format;
  std::string gamma_db;
  std::vector<std::string> sets;
};

void add_common_flags(CLI::App* sub, CommonFlags* flags) {
  sub->add_option("--config", flags->config,
                  "key=value configuration file (see README)");
  sub->add_option("--out", flags->out, "output file path");
  sub->add_option("--seed", flags->seed, "random seed (integer)");
  sub->add_option("--convention", flags->convention,
                  "efficiency convention: normalized (c=1, unit coverage factor) "
                  "or derived");
  sub->add_option("--format", flags->format, "output format (csv)");
  sub->add_option("--gamma-db", flags->gamma_db,
                  "detection threshold in dB (sugar for gamma)");
  sub->add_option("--set", flags->sets,
                  "override any config key, KEY=VALUE (repeatable)")
      ->take_all();
}

greencell::ExperimentConfig build_config(greencell::ExperimentKind kind,
                                         const CommonFlags& flags) {
  greencell::ExperimentConfig cfg = greencell::ExperimentConfig::defaults(kind);
  if (!flags.config.empty()) {
    cfg.apply_file(flags.config);
  }
  for (const std::string& kv : flags.sets) {
    const auto eq = kv.find('=');
    if (eq == std::string::npos) {
      throw greencell::ConfigError("--set expects KEY=VALUE, got '" + kv +
                                   "'");
    }
    cfg.set(kv.substr(0, eq), kv.substr(eq + 1));
  }
  if (!flags.seed.empty()) {
    cfg.set("seed", flags.seed);
  }
  if (!flags.convention.empty()) {
    cfg.set("convention", flags.convention);
  }
  if (!flags.format.empty()) {
    cfg.set("format", flags.format);
  }
  if (!flags.gamma_db.empty()) {
    cfg.set("gamma_db", flags.gamma_db);
  }
  if (!flags.out.empty()) {
    cfg.out = flags.out;
  }
  const greencell::ValidationReport report = cfg.validate();
  if (!report.ok()) {
    throw greencell::ConfigError(report.to_string());
  }
  return cfg;
}

std::string default_out_name(greencell::ExperimentKind kind) {
  switch (kind) {
    case greencell::ExperimentKind::apc_sweep:
      return "apc_sweep.csv";
    case greencell::ExperimentKind::ee_sweep:
      return "ee_sweep.csv";
    case greencell::ExperimentKind::optimize:
      return "";  // report goes to stdout unless --out is given
    default:
      return "";
  }
}

int run_experiment(greencell::ExperimentKind kind, const CommonFlags& flags) {
  greencell::ExperimentConfig cfg = build_config(kind, flags);
  const greencell::ExperimentOutput result = greencell::run(cfg);

  std::string out_path = cfg.out;
  if (out_path.empty()) {
    out_path = default_out_name(kind);
  }
  if (!out_path.empty()) {
    greencell::write_text_file(out_path, result.text);
    std::printf("wrote %s (%zu rows)\n", out_path.c_str(),
                result.table.rows.size());
  }
  const bool is_sweep = kind == greencell::ExperimentKind::apc_sweep ||
                        kind == greencell::ExperimentKind::ee_sweep;
  if (!is_sweep) {
    std::fputs(result.text.c_str(), stdout);
  }
  return result.exit_code;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{
      "Coverage, area power and energy-efficiency models for cache-enabled "
      "cellular deployments"};
  app.require_subcommand(1);

  CommonFlags flags;
  CLI::App* apc = app.add_subcommand(
      "apc-sweep", "Area power consumption versus transmit power (CSV)");
  CLI::App* ee = app.add_subcommand(
      "ee-sweep", "Energy efficiency versus transmit power (CSV)");
  CLI::App* opt = app.add_subcommand(
      "optimize", "Closed-form and numeric optimal transmit powers");
  CLI::App* mc = app.add_subcommand(
      "mc-validate", "Monte Carlo cross-check of the analytical model");
  for (CLI::App* sub : {apc, ee, opt, mc}) {
    add_common_flags(sub, &flags);
  }

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    std::fprintf(stderr, "error: config: %s\n", e.what());
    return 2;
  }

  greencell::ExperimentKind kind = greencell::ExperimentKind::apc_sweep;
  if (ee->parsed()) {
    kind = greencell::ExperimentKind::ee_sweep;
  } else if (opt->parsed()) {
    kind = greencell::ExperimentKind::optimize;
  } else if (mc->parsed()) {
    kind = greencell::ExperimentKind::mc_validate;
  }

  try {
    return run_experiment(kind, flags);
  } catch (const greencell::ConfigError& e) {
    std::fprintf(stderr, "error: config: %s\n", e.what());
    return 2;
  } catch (const std::exception& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return 1;
  }
}
