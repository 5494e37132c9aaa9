#pragma once

#include <cstddef>
#include <vector>

namespace rotorkick {

// Gauss-Legendre rule on [-1, 1].
struct GaussLegendreRule {
  std::vector<double> nodes;
  std::vector<double> weights;
};

/// Returns the n-point Gauss-Legendre rule.  Rules are cached process-wide;
/// the call is thread-safe.  Requires n >= 1.
const GaussLegendreRule& gauss_legendre(std::size_t n);

/// Integrates fn over [a, b] with an n-point Gauss-Legendre rule.
template <typename Fn>
auto gl_integrate(Fn&& fn, double a, double b, std::size_t n)
    -> decltype(fn(0.0)) {
  const GaussLegendreRule& rule = gauss_legendre(n);
  const double mid = 0.5 * (a + b);
  const double half = 0.5 * (b - a);
  decltype(fn(0.0)) sum{};
  for (std::size_t i = 0; i < rule.nodes.size(); ++i) {
    sum += rule.weights[i] * fn(mid + half * rule.nodes[i]);
  }
  return half * sum;
}

}  // namespace rotorkick
