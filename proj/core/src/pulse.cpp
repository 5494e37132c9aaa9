#include "rotorkick/pulse.hpp"

#include <array>
#include <cmath>
#include <cstddef>
#include <numbers>
#include <string>

#include "rotorkick/errors.hpp"
#include "rotorkick/quadrature.hpp"

namespace rotorkick {

namespace {

using std::numbers::pi;
constexpr std::complex<double> kI{0.0, 1.0};

void require_valid(const PulseSpec& p) {
  if (!(p.f > 0.0) || !std::isfinite(p.f) || p.e0r < 0.0 ||
      !std::isfinite(p.e0r)) {
    throw ConfigError("pulse needs f > 0 and e0r >= 0, got f=" +
                      std::to_string(p.f) + " e0r=" + std::to_string(p.e0r));
  }
}

// sin^2(pi u) sin(2 pi f u) splits into three harmonics
//   1/2 sin(2 pi f u) - 1/4 sin(2 pi (f+1) u) - 1/4 sin(2 pi (f-1) u);
// everything below integrates these term by term.  A harmonic with
// frequency ~0 (f = 1) is identically zero and is skipped.
struct Harmonic {
  double amp;  // in units of e0r
  double g;    // frequency in cycles per pulse window
};

constexpr double kGTiny = 1e-12;

std::array<Harmonic, 3> harmonics(const PulseSpec& p) {
  return {Harmonic{0.5 * p.e0r, p.f}, Harmonic{-0.25 * p.e0r, p.f + 1.0},
          Harmonic{-0.25 * p.e0r, p.f - 1.0}};
}

bool integer_f(double f) { return std::abs(f - std::round(f)) < 1e-9; }

std::size_t node_count(const PulseSpec& p, double omega) {
  const double scale = std::abs(omega) + 2.0 * pi * p.f;
  const auto n = static_cast<std::size_t>(4.0 * std::ceil(scale));
  return n < 16 ? 16 : n;
}

}  // namespace

double field(const PulseSpec& p, double tau) {
  require_valid(p);
  if (tau <= kTauI || tau >= kTauF) {
    return 0.0;
  }
  const double s = std::sin(pi * tau);
  return p.e0r * s * s * std::sin(2.0 * pi * p.f * tau);
}

double area(const PulseSpec& p, double tau) {
  require_valid(p);
  if (tau <= kTauI) {
    return 0.0;
  }
  const double t = tau < kTauF ? tau : kTauF;
  double sum = 0.0;
  for (const auto& h : harmonics(p)) {
    if (std::abs(h.g) < kGTiny) {
      continue;
    }
    const double w = 2.0 * pi * h.g;
    sum += h.amp * (1.0 - std::cos(w * t)) / w;
  }
  return sum;
}

double area_integral(const PulseSpec& p, double tau_upper) {
  require_valid(p);
  if (tau_upper < 0.0) {
    throw ConfigError("area_integral needs tau_upper >= 0");
  }
  const double t = tau_upper < kTauF ? tau_upper : kTauF;
  double sum = 0.0;
  for (const auto& h : harmonics(p)) {
    if (std::abs(h.g) < kGTiny) {
      continue;
    }
    const double w = 2.0 * pi * h.g;
    sum += (h.amp / w) * (t - std::sin(w * t) / w);
  }
  if (tau_upper > kTauF) {
    sum += (tau_upper - kTauF) * area(p, kTauF);
  }
  return sum;
}

double area_squared_integral(const PulseSpec& p, double tau_upper) {
  require_valid(p);
  if (tau_upper < 0.0) {
    throw ConfigError("area_squared_integral needs tau_upper >= 0");
  }
  const double t = tau_upper < kTauF ? tau_upper : kTauF;
  double sum = gl_integrate(
      [&](double u) {
        const double a = area(p, u);
        return a * a;
      },
      0.0, t, node_count(p, 0.0));
  if (tau_upper > kTauF) {
    const double af = area(p, kTauF);
    sum += (tau_upper - kTauF) * af * af;
  }
  return sum;
}

double area_time_integral(const PulseSpec& p) {
  require_valid(p);
  if (integer_f(p.f)) {
    const double f = std::round(p.f);
    if (f == 1.0) {
      return p.e0r * 3.0 / (16.0 * pi);
    }
    return -p.e0r / (4.0 * pi * f * (f * f - 1.0));
  }
  return weighted_integrals(p, 0.0).i1.real();
}

std::complex<double> area_fourier(const PulseSpec& p, double k) {
  const double norm = 1.0 / std::sqrt(2.0 * pi);
  return norm * weighted_integrals(p, -k).i1;
}

WeightedIntegrals weighted_integrals(const PulseSpec& p, double omega,
                                     double tau_upper) {
  require_valid(p);
  if (tau_upper < 0.0 || tau_upper > kTauF) {
    throw ConfigError("weighted_integrals needs 0 <= tau_upper <= 1");
  }
  const GaussLegendreRule& rule = gauss_legendre(node_count(p, omega));
  const double mid = 0.5 * tau_upper;
  const double half = 0.5 * tau_upper;
  WeightedIntegrals out{};
  for (std::size_t i = 0; i < rule.nodes.size(); ++i) {
    const double u = mid + half * rule.nodes[i];
    const double a = area(p, u);
    const std::complex<double> ph =
        rule.weights[i] * std::exp(kI * (omega * u));
    out.i1 += a * ph;
    out.i2 += a * a * ph;
  }
  out.i1 *= half;
  out.i2 *= half;
  return out;
}

}  // namespace rotorkick
