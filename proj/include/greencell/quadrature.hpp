#pragma once

#include <cmath>
#include <cstddef>
#include <limits>
#include <queue>
#include <stdexcept>
#include <string>
#include <vector>

// Adaptive Gauss-Kronrod 7/15 quadrature with a global error heap: the
// segment with the worst error estimate is bisected until the summed
// estimate meets the absolute tolerance.  Handles the smooth, rapidly
// decaying coverage integrands as well as integrable endpoint behaviour from
// compactified heavy tails.

namespace greencell {

class NonConvergence : public std::runtime_error {
 public:
  explicit NonConvergence(const std::string& what)
      : std::runtime_error(what) {}
};

struct QuadratureOptions {
  double abs_tol = 1e-9;
  std::size_t max_evaluations = 1000000;
};

struct QuadratureResult {
  double value = 0.0;
  double error_estimate = 0.0;
  std::size_t evaluations = 0;
};

namespace detail {

// Kronrod-15 nodes on the positive half of [-1, 1] and their weights; the
// odd-index nodes carry the embedded Gauss-7 rule.
inline constexpr double kKronrodNodes[8] = {
    0.991455371120812639206854697526329,
    0.949107912342758524526189684047851,
    0.864864423359769072789712788640926,
    0.741531185599394439863864773280788,
    0.586087235467691130294144838258730,
    0.405845151377397166906606412076961,
    0.207784955007898467600689403773245,
    0.000000000000000000000000000000000,
};

inline constexpr double kKronrodWeights[8] = {
    0.022935322010529224963732008058970,
    0.063092092629978553290700663189204,
    0.104790010322250183839876322541518,
    0.140653259715525918745189590510238,
    0.169004726639267902826583426598550,
    0.190350578064785409913256402421014,
    0.204432940075298892414161999234649,
    0.209482141084727828012999174891714,
};

inline constexpr double kGaussWeights[4] = {
    0.129484966168869693270611432679082,
    0.279705391489276667901467771423780,
    0.381830050505118944950369775488975,
    0.417959183673469387755102040816327,
};

struct Segment {
  double a = 0.0;
  double b = 0.0;
  double value = 0.0;
  double error = 0.0;
};

struct SegmentWorse {
  bool operator()(const Segment& l, const Segment& r) const {
    return l.error < r.error;
  }
};

template <class F>
Segment evaluate_segment(F& f, double a, double b) {
  const double center = 0.5 * (a + b);
  const double half = 0.5 * (b - a);
  double fv[15];
  for (int i = 0; i < 7; ++i) {
    fv[i] = f(center - half * kKronrodNodes[i]);
    fv[14 - i] = f(center + half * kKronrodNodes[i]);
  }
  fv[7] = f(center);

  double gauss = kGaussWeights[3] * fv[7];
  for (int i = 0; i < 3; ++i) {
    gauss += kGaussWeights[i] * (fv[2 * i + 1] + fv[13 - 2 * i]);
  }
  double kronrod = kKronrodWeights[7] * fv[7];
  for (int i = 0; i < 7; ++i) {
    kronrod += kKronrodWeights[i] * (fv[i] + fv[14 - i]);
  }
  Segment s;
  s.a = a;
  s.b = b;
  s.value = kronrod * half;
  s.error = std::abs((kronrod - gauss) * half);
  return s;
}

}  // namespace detail

// Integrate f over [a, b] until the summed error estimate drops to abs_tol.
// Throws std::invalid_argument on a reversed interval and NonConvergence if
// the evaluation budget runs out or a segment can no longer be split.
template <class F>
QuadratureResult integrate(F&& f, double a, double b,
                           QuadratureOptions options = {}) {
  if (!(a <= b)) {
    throw std::invalid_argument("quadrature: interval is reversed");
  }
  if (a == b) {
    return {0.0, 0.0, 0};
  }
  std::size_t used = 15;
  if (options.max_evaluations < used) {
    throw NonConvergence("quadrature: evaluation budget below one rule");
  }

  std::priority_queue<detail::Segment, std::vector<detail::Segment>,
                      detail::SegmentWorse>
      heap;
  heap.push(detail::evaluate_segment(f, a, b));
  double total_error = heap.top().error;

  while (total_error > options.abs_tol) {
    const detail::Segment worst = heap.top();
    const double mid = 0.5 * (worst.a + worst.b);
    const double scale =
        std::max({std::abs(worst.a), std::abs(worst.b), 1.0});
    if (!(worst.b - worst.a >
          4.0 * std::numeric_limits<double>::epsilon() * scale)) {
      throw NonConvergence(
          "quadrature: tolerance unreachable (segment at resolution limit)");
    }
    if (used + 30 > options.max_evaluations) {
      throw NonConvergence("quadrature: evaluation budget exhausted");
    }
    heap.pop();
    const detail::Segment left = detail::evaluate_segment(f, worst.a, mid);
    const detail::Segment right = detail::evaluate_segment(f, mid, worst.b);
    used += 30;
    total_error += left.error + right.error - worst.error;
    heap.push(left);
    heap.push(right);
  }

  // Re-sum from the final partition so the result does not carry the
  // round-off of incremental updates.
  QuadratureResult result;
  result.evaluations = used;
  while (!heap.empty()) {
    result.value += heap.top().value;
    result.error_estimate += heap.top().error;
    heap.pop();
  }
  return result;
}

// Integrate f over [0, inf) via the compactifying substitution r = u/(1-u),
// dr = du/(1-u)^2.  Requires f(r) * (1+r)^2 -> 0 as r -> inf; integrands
// here decay exponentially.  Quadrature nodes are strictly interior, so f is
// never evaluated at infinity.
template <class F>
QuadratureResult integrate_semi_infinite(F&& f,
                                         QuadratureOptions options = {}) {
  auto mapped = [&f](double u) {
    const double s = 1.0 - u;
    const double r = u / s;
    const double fval = f(r);
    if (fval == 0.0) {
      return 0.0;  // avoid 0 * inf at the far edge
    }
    return fval / (s * s);
  };
  return integrate(mapped, 0.0, 1.0, options);
}

}  // namespace greencell
