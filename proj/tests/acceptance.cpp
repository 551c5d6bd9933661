// Acceptance gate for the release: every check below must pass.  Each
// criterion prints exactly one [PASS]/[FAIL] line; the process exits nonzero
// if any criterion fails.  Criterion 12 drives the installed CLI binary,
// located through argv[1] or the GREENCELL_CLI environment variable.

#include <sys/wait.h>

#include <chrono>
#include <cmath>
#include <cstdarg>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <limits>
#include <numbers>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "greencell/greencell.hpp"

using namespace greencell;

namespace {

int g_failures = 0;

std::string fmt(const char* f, ...) {
  char buf[512];
  va_list ap;
  va_start(ap, f);
  std::vsnprintf(buf, sizeof buf, f, ap);
  va_end(ap);
  return buf;
}

void report(int criterion, bool pass, const std::string& detail) {
  std::printf("[%s] criterion %d: %s\n", pass ? "PASS" : "FAIL", criterion,
              detail.c_str());
  std::fflush(stdout);
  if (!pass) {
    ++g_failures;
  }
}

double seconds_since(std::chrono::steady_clock::time_point t0) {
  return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0)
      .count();
}

NetworkParams base_network(double lambda_b, double lambda_u, double alpha,
                           double gamma, double beta) {
  NetworkParams n;
  n.lambda_b = lambda_b;
  n.lambda_u = lambda_u;
  n.alpha = alpha;
  n.gamma = gamma;
  n.noise = NoiseModel::direct(beta);
  return n;
}

// 1. Coverage quadrature against the no-noise closed form.
void criterion_1() {
  const auto t0 = std::chrono::steady_clock::now();
  double worst = 0.0;
  for (double gamma : {1.5, 2.0, 5.0}) {
    for (double alpha : {3.0, 4.0, 4.75, 6.0}) {
      const CoverageQuery q{base_network(0.5, 0.6, alpha, gamma, 0.0), 50.0};
      const double exact = coverage_exact(q);
      const double closed = coverage_nn(gamma, alpha);
      worst = std::max(worst, std::abs(exact - closed) / closed);
    }
  }
  const double elapsed = seconds_since(t0);
  report(1, worst <= 1e-6 && elapsed < 10.0,
         fmt("zero-noise quadrature vs closed form on 12 (gamma, alpha) "
             "pairs, worst rel err %.2e (tol 1e-06), %.2f s (limit 10 s)",
             worst, elapsed));
}

// 2. Brute-force reduction of the interference integral.
void criterion_2() {
  Philox rng(1002, 0);
  double worst = 0.0;
  for (int i = 0; i < 6; ++i) {
    const double gamma = 1.2 + 3.8 * rng.next_double();
    const double alpha = 3.05 + 2.95 * rng.next_double();
    const double r = 0.1 + 3.9 * rng.next_double();
    auto integrand = [gamma, alpha, r](double t) {
      const double one_minus = 1.0 - t;
      const double x = r * (t / one_minus) * (t / one_minus);
      const double h = std::numbers::pi * gamma /
                       (std::pow(r, -0.5 * alpha) * std::pow(x, 0.5 * alpha) +
                        gamma);
      return h * r * 2.0 * t / (one_minus * one_minus * one_minus);
    };
    QuadratureOptions opts;
    opts.abs_tol = 1e-8;
    const double brute = integrate(integrand, 0.0, 1.0, opts).value;
    const double closed = r * std::pow(gamma, 2.0 / alpha) * c_alpha(alpha);
    worst = std::max(worst, std::abs(brute - closed) / closed);
  }
  report(2, worst <= 1e-6,
         fmt("interference integral, brute force vs closed form at 6 random "
             "points, worst rel err %.2e (tol 1e-06)",
             worst));
}

// 3. Monte Carlo coverage against quadrature, with and without noise.
void criterion_3() {
  const auto t0 = std::chrono::steady_clock::now();
  SimConfig no_noise;
  no_noise.network = base_network(1.0, 1.2, 4.0, 2.0, 0.0);
  no_noise.power.p_tx = 50.0;
  no_noise.trials = 200000;
  no_noise.seed = 1;
  const SimEstimate est0 = estimate_coverage(no_noise);
  const double tol0 = std::max(3.0 * est0.std_error, 0.005);
  const double err0 = std::abs(est0.value - 0.450158);

  SimConfig noisy = no_noise;
  noisy.network.noise = NoiseModel::direct(1.0);
  const double exact = coverage_exact(CoverageQuery{noisy.network, 50.0});
  const SimEstimate est1 = estimate_coverage(noisy);
  const double tol1 = std::max(3.0 * est1.std_error, 0.005);
  const double err1 = std::abs(est1.value - exact);

  const double elapsed = seconds_since(t0);
  report(3, err0 <= tol0 && err1 <= tol1 && elapsed < 120.0,
         fmt("simulated coverage, 2e5 trials: zero-noise |%.6f - 0.450158| = "
             "%.4f (tol %.4f), noisy |%.6f - %.6f| = %.4f (tol %.4f), %.0f s "
             "(limit 120 s)",
             est0.value, err0, tol0, est1.value, exact, err1, tol1, elapsed));
}

// 4. Caching strictly lowers area power and never lowers efficiency.
void criterion_4() {
  Philox rng(1004, 0);
  const int tuples = 1200;
  int apc_failures = 0;
  int ee_failures = 0;
  for (int i = 0; i < tuples; ++i) {
    NetworkParams net;
    net.lambda_b = 0.1 + rng.next_double();
    net.lambda_u = net.lambda_b * (1.05 + 4.0 * rng.next_double());
    net.alpha = 3.0 + 3.0 * rng.next_double();
    net.gamma = 1.2 + 4.0 * rng.next_double();
    const double f0 = 1.0 + 1e4 * rng.next_double();
    const CachePowerParams power =
        CachePowerParams::from_aggregates(50.0, 25.0, 10.0, f0);

    const ApcQuery apc_q{net, power, DensityRule::qos_boundary, std::nullopt};
    // Stay where the power-coupled popularity exponent exceeds 1.
    const double p_floor =
        std::pow(apc_q.qos_a() / net.lambda_u, 1.0 / apc_q.exponent_s());
    const double p_apc = p_floor * (1.01 + 10.0 * rng.next_double());
    if (!(apc_cached(apc_q, p_apc) < apc_uncached(apc_q, p_apc))) {
      ++apc_failures;
    }

    const EeQuery ee_q = EeQuery::derived_convention(net, power);
    const double p_ee =
        ee_q.correction_c * 1.01 + 80.0 * rng.next_double();
    if (!(ee_cached(ee_q, p_ee) >= ee_uncached(ee_q, p_ee))) {
      ++ee_failures;
    }
  }
  report(4, apc_failures == 0 && ee_failures == 0,
         fmt("cache ordering on %d random tuples: cached area power strictly "
             "lower in %d/%d, cached efficiency not lower in %d/%d",
             tuples, tuples - apc_failures, tuples, tuples - ee_failures,
             tuples));
}

// 5. Uncached area-power minimizer equals its closed form.
void criterion_5() {
  double worst = 0.0;
  bool all_ok = true;
  for (double eps : {0.5, 0.75, 1.0, 2.0}) {
    ApcQuery q{base_network(0.5, 0.6, 4.0 + eps, 2.0, 1.0),
               CachePowerParams::from_aggregates(50.0, 25.0, 10.0, 10.0),
               DensityRule::qos_boundary, std::nullopt};
    const OptimumReport r = minimize_apc(q, CacheMode::uncached);
    all_ok = all_ok && r.status == OptimumStatus::ok;
    const double closed = 2.0 * 35.0 / eps;
    worst = std::max(worst, std::abs(r.argopt - closed) / closed);
  }
  report(5, all_ok && worst <= 1e-3,
         fmt("uncached area-power minimizer vs 2(Ps+Pd)/eps over eps in "
             "{0.5, 0.75, 1, 2}, worst rel err %.2e (tol 1e-03)",
             worst));
}

// 6. Cached area-power minimizer clears its analytic lower bound.
void criterion_6() {
  // Boundary-density scale 2 and lambda_u = 0.14 keep the miss term alive
  // near the bound, so the cached minimum is genuinely interior.
  NetworkParams net = base_network(0.1, 0.14, 4.75, 2.0, 1.0);
  const double bound = 2.0 * 25.0 / 0.75;
  double min_margin = std::numeric_limits<double>::infinity();
  bool all_ok = true;
  for (double f0 : {10.0, 100.0, 1000.0}) {
    ApcQuery q{net, CachePowerParams::from_aggregates(50.0, 25.0, 10.0, f0),
               DensityRule::qos_boundary, 2.0};
    const OptimumReport r = minimize_apc(q, CacheMode::cached);
    all_ok = all_ok && r.status == OptimumStatus::ok && r.argopt > bound;
    min_margin = std::min(min_margin, r.argopt - bound);
  }
  report(6, all_ok,
         fmt("cached area-power minimizer above 2Ps/eps = %.3f W for f0 in "
             "{10, 100, 1000}, smallest margin %.3f W",
             bound, min_margin));
}

// 7. Efficiency maximizers: unit-correction closed forms and generalized
// stationarity.
void criterion_7() {
  const NetworkParams net = base_network(0.5, 0.6, 4.75, 2.0, 1.0);
  const CachePowerParams power =
      CachePowerParams::from_aggregates(50.0, 25.0, 10.0, 10.0);

  const EeQuery unit = EeQuery::normalized(net, power);
  const OptimumReport cached = maximize_ee(unit, CacheMode::cached);
  const OptimumReport uncached = maximize_ee(unit, CacheMode::uncached);
  const double err_cached = std::abs(cached.argopt - 6.6841510751212386);
  const double err_uncached = std::abs(uncached.argopt - 7.0);

  const EeQuery derived = EeQuery::derived_convention(net, power);
  double worst_stationarity = 0.0;
  for (CacheMode mode : {CacheMode::cached, CacheMode::uncached}) {
    const OptimumReport r = maximize_ee(derived, mode);
    const double slope = std::abs(ee_derivative(derived, r.closed_form, mode));
    worst_stationarity = std::max(
        worst_stationarity, slope / ee_value(derived, r.closed_form, mode));
  }
  report(7,
         err_cached <= 1e-4 && err_uncached <= 1e-4 &&
             worst_stationarity <= 1e-10,
         fmt("unit-correction efficiency maximizers |%.6f - 6.684151| = "
             "%.1e, |%.6f - 7| = %.1e (tol 1e-04); generalized stationarity "
             "|dE/dP| / E = %.1e (tol 1e-10)",
             cached.argopt, err_cached, uncached.argopt, err_uncached,
             worst_stationarity));
}

// 8. Monotone response to the catalog size on the default sweep grids.
void criterion_8() {
  const NetworkParams net = base_network(0.5, 0.6, 4.75, 2.0, 1.0);
  const double f0s[] = {10.0, 100.0, 1000.0};
  int apc_violations = 0;
  for (double p : ExperimentConfig::defaults(ExperimentKind::apc_sweep).grid()) {
    double previous = std::numeric_limits<double>::infinity();
    for (double f0 : f0s) {
      const ApcQuery q{net,
                       CachePowerParams::from_aggregates(50.0, 25.0, 10.0, f0),
                       DensityRule::qos_boundary, std::nullopt};
      const double v = apc_cached(q, p);
      if (v > previous) {
        ++apc_violations;
      }
      previous = v;
    }
  }
  int ee_violations = 0;
  for (double p : ExperimentConfig::defaults(ExperimentKind::ee_sweep).grid()) {
    double previous = -std::numeric_limits<double>::infinity();
    for (double f0 : f0s) {
      const EeQuery q = EeQuery::normalized(
          net, CachePowerParams::from_aggregates(50.0, 25.0, 10.0, f0));
      const double v = ee_cached(q, p);
      if (v < previous) {
        ++ee_violations;
      }
      previous = v;
    }
  }
  report(8, apc_violations == 0 && ee_violations == 0,
         fmt("catalog-size monotonicity on the default grids: %d area-power "
             "violations over 198 points, %d efficiency violations over 233 "
             "points",
             apc_violations, ee_violations));
}

// 9. Area power is strictly decreasing when alpha <= 4.
void criterion_9() {
  int violations = 0;
  for (double alpha : {3.0, 3.5, 4.0}) {
    const ApcQuery q{base_network(0.5, 0.6, alpha, 2.0, 1.0),
                     CachePowerParams::from_aggregates(50.0, 25.0, 10.0, 10.0),
                     DensityRule::qos_boundary, std::nullopt};
    for (int k = 0; k <= 24; ++k) {
      const double p = std::pow(10.0, -2.0 + 6.0 * k / 24.0);
      if (!(apc_derivative(q, p, CacheMode::cached) < 0.0)) {
        ++violations;
      }
      if (!(apc_derivative(q, p, CacheMode::uncached) < 0.0)) {
        ++violations;
      }
    }
  }
  report(9, violations == 0,
         fmt("no-minimum regime: %d non-negative derivative values over 150 "
             "log-spaced (alpha, P, mode) checks",
             violations));
}

// 10. Analytic area-power derivatives against central differences.
void criterion_10() {
  Philox rng(1010, 0);
  const int points = 120;
  double worst_excess = 0.0;
  int failures = 0;
  for (int i = 0; i < points; ++i) {
    NetworkParams net;
    net.lambda_b = 0.2 + rng.next_double();
    net.lambda_u = net.lambda_b * (1.1 + 3.0 * rng.next_double());
    net.alpha = 3.05 + 2.9 * rng.next_double();
    net.gamma = 1.5 + 2.0 * rng.next_double();
    const double f0 = 2.0 + 500.0 * rng.next_double();
    const ApcQuery q{net,
                     CachePowerParams::from_aggregates(50.0, 25.0, 10.0, f0),
                     DensityRule::qos_boundary, std::nullopt};
    const double p = 5.0 + 150.0 * rng.next_double();
    const double h = 1e-6 * (1.0 + p);
    for (CacheMode mode : {CacheMode::cached, CacheMode::uncached}) {
      const double d = apc_derivative(q, p, mode);
      auto value = [&](double x) {
        return mode == CacheMode::cached ? apc_cached(q, x)
                                         : apc_uncached(q, x);
      };
      const double fd = central_difference(value, p, h);
      const double tol = std::max(1e-6 * std::abs(d), 1e-9);
      const double err = std::abs(d - fd);
      if (err > tol) {
        ++failures;
      }
      worst_excess = std::max(worst_excess, err / tol);
    }
  }
  report(10, failures == 0,
         fmt("analytic vs central-difference derivatives at %d random "
             "points (both cache modes): %d failures, worst err/tol %.2e",
             points, failures, worst_excess));
}

// 11. Simulated hit rate against the closed form.
void criterion_11() {
  bool all_ok = true;
  double worst_z = 0.0;
  for (double f0 : {10.0, 100.0}) {
    for (double eta : {1.2, 2.0, 5.0}) {
      SimConfig cfg;
      cfg.network = base_network(0.5, 0.5 * eta, 4.75, 2.0, 1.0);
      cfg.power = CachePowerParams::from_aggregates(50.0, 25.0, 10.0, f0);
      cfg.seed = 1;
      const SimEstimate est = estimate_hit_rate(cfg, 1000000);
      const double expected = hit_probability(f0, eta);
      // Binomial deviation under the closed form: stays positive even when
      // every request hits and the plug-in standard error degenerates to 0.
      const double se =
          std::sqrt(expected * (1.0 - expected) / 1000000.0);
      const double z = std::abs(est.value - expected) / se;
      worst_z = std::max(worst_z, z);
      all_ok = all_ok && z <= 3.0;
    }
  }
  report(11, all_ok,
         fmt("simulated hit rate vs 1 - f0^(1-eta) over 6 (f0, eta) pairs at "
             "1e6 requests each, worst deviation %.2f standard errors (tol "
             "3)",
             worst_z));
}

// 12. CLI runs are byte-identical under identical config and seed.
struct CliRun {
  int code = -1;
  bool ran = false;
};

CliRun run_cli(const std::string& cli, const std::string& args,
               const std::string& stdout_path) {
  const std::string cmd = "\"" + cli + "\" " + args + " > " + stdout_path +
                          " 2> acceptance_tmp/stderr.txt";
  const int status = std::system(cmd.c_str());
  CliRun r;
  r.ran = status != -1;
  r.code = WIFEXITED(status) ? WEXITSTATUS(status) : -1;
  return r;
}

std::string slurp(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

void criterion_12(const char* cli_path) {
  if (cli_path == nullptr || cli_path[0] == '\0') {
    report(12, false,
           "CLI binary not located; pass its path as argv[1] or set "
           "GREENCELL_CLI");
    return;
  }
  const std::string cli = cli_path;
  std::filesystem::create_directories("acceptance_tmp");

  struct Job {
    std::string name;
    std::string args;       // without output redirection
    std::string out_flag;   // "" => compare captured stdout
  };
  const std::vector<Job> jobs = {
      {"apc-sweep",
       "apc-sweep --set sweep_min=10 --set sweep_max=20 --set sweep_step=5",
       "--out"},
      {"ee-sweep",
       "ee-sweep --set sweep_min=2 --set sweep_max=8 --set sweep_step=1",
       "--out"},
      {"optimize", "optimize", ""},
      {"mc-validate",
       "mc-validate --set trials=400 --set requests=4000 --set threads=1 "
       "--seed 3",
       ""},
  };
  bool all_ok = true;
  std::string detail;
  for (const Job& job : jobs) {
    std::string first_path = "acceptance_tmp/" + job.name + "_1.txt";
    std::string second_path = "acceptance_tmp/" + job.name + "_2.txt";
    std::string args1 = job.args;
    std::string args2 = job.args;
    std::string cap1 = first_path;
    std::string cap2 = second_path;
    if (!job.out_flag.empty()) {
      args1 += " " + job.out_flag + " " + first_path;
      args2 += " " + job.out_flag + " " + second_path;
      cap1 = "acceptance_tmp/ignored_1.txt";
      cap2 = "acceptance_tmp/ignored_2.txt";
    }
    const CliRun r1 = run_cli(cli, args1, cap1);
    const CliRun r2 = run_cli(cli, args2, cap2);
    const bool same_bytes =
        r1.ran && r2.ran && slurp(first_path) == slurp(second_path);
    const bool codes_ok = r1.code == r2.code && r1.code >= 0 &&
                          (job.name == "mc-validate" ? r1.code <= 1
                                                     : r1.code == 0);
    if (!(same_bytes && codes_ok)) {
      all_ok = false;
      detail += (detail.empty() ? "" : ", ") + job.name + " differs";
    }
  }
  report(12, all_ok,
         all_ok ? "all four CLI experiments byte-identical across reruns "
                  "with identical config and seed"
                : "CLI rerun mismatch: " + detail);
}

}  // namespace

int main(int argc, char** argv) {
  const char* cli = argc > 1 ? argv[1] : std::getenv("GREENCELL_CLI");

  criterion_1();
  criterion_2();
  criterion_3();
  criterion_4();
  criterion_5();
  criterion_6();
  criterion_7();
  criterion_8();
  criterion_9();
  criterion_10();
  criterion_11();
  criterion_12(cli);

  std::printf("acceptance: %d/12 criteria passed\n", 12 - g_failures);
  return g_failures == 0 ? 0 : 1;
}
