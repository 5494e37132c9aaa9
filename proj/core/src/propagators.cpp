#include "rotorkick/propagators.hpp"

#include <algorithm>
#include <cmath>
#include <complex>
#include <cstddef>
#include <map>
#include <numbers>
#include <string>
#include <utility>

#include "rotorkick/errors.hpp"
#include "rotorkick/quadrature.hpp"

namespace rotorkick {

namespace {

constexpr std::complex<double> kI{0.0, 1.0};
constexpr double kTimeEps = 1e-12;
constexpr double kNormTol = 1e-8;
constexpr double kTailTol = 1e-10;

RealMatrix real_cos_matrix(const RotorBasis& b) {
  const int n = b.dimension();
  RealMatrix c = RealMatrix::Zero(n, n);
  for (int k = 0; k + 1 < n; ++k) {
    const double v = c_coeff(b.j_of(k + 1), b.m);
    c(k + 1, k) = v;
    c(k, k + 1) = v;
  }
  return c;
}

RealMatrix coupling_from(const RotorBasis& b) {
  const int n = b.dimension();
  RealMatrix x = RealMatrix::Zero(n, n);
  for (int k = 0; k + 1 < n; ++k) {
    const double j = b.j_of(k);
    const double v = (j + 1.0) * c_coeff(b.j_of(k + 1), b.m);
    x(k + 1, k) = v;
    x(k, k + 1) = -v;
  }
  return x;
}

void require_unit_interval(double value, const char* name) {
  if (value < -kTimeEps || value > kTauF + kTimeEps) {
    throw ConfigError(std::string(name) + " must lie in [0, 1], got " +
                      std::to_string(value));
  }
}

double tail_population(const StateVector& psi) {
  const Eigen::Index n = psi.size();
  double tail = std::norm(psi(n - 1));
  if (n >= 2) {
    tail += std::norm(psi(n - 2));
  }
  return tail;
}

}  // namespace

RotorOperators::RotorOperators(const RotorBasis& b)
    : basis_(b),
      j2_(b.dimension()),
      coupling_(coupling_from(b)),
      anisotropy_(RealMatrix::Identity(b.dimension(), b.dimension()) -
                  real_cos_matrix(b) * real_cos_matrix(b)),
      cos_eigen_(real_cos_matrix(b)) {
  for (int k = 0; k < basis_.dimension(); ++k) {
    const double j = basis_.j_of(k);
    j2_(k) = j * (j + 1.0);
  }
}

ComplexMatrix RotorOperators::h1_at_area(double a) const {
  ComplexMatrix h = (2.0 * a) * kI * coupling_.cast<std::complex<double>>() +
                    (a * a) * anisotropy_.cast<std::complex<double>>();
  h.diagonal() += j2_.cast<std::complex<double>>();
  return h;
}

Eigen::VectorXcd RotorOperators::free_phases(double eps, double dtau) const {
  Eigen::VectorXcd ph(j2_.size());
  for (Eigen::Index k = 0; k < j2_.size(); ++k) {
    ph(k) = std::exp(-kI * eps * j2_(k) * dtau);
  }
  return ph;
}

ComplexMatrix kick_propagator(const RotorOperators& ops, double area_value) {
  return ops.cos_eigen().unitary(area_value);
}

OperatorMatrix h1(const RotorOperators& ops, const PulseSpec& p, double tau) {
  return {ops.h1_at_area(area(p, tau)), true};
}

std::vector<StateVector> reference_states(const RotorOperators& ops,
                                          const PulseSpec& p, double eps,
                                          double dt,
                                          const std::vector<double>& times,
                                          const StateVector& psi0,
                                          double* max_tail) {
  if (!(dt > 0.0)) {
    throw ConfigError("reference step size must be positive");
  }
  if (psi0.size() != ops.dimension()) {
    throw ConfigError("initial state dimension does not match the basis");
  }
  if (std::abs(psi0.norm() - 1.0) > kNormTol) {
    throw ConvergenceError("initial state is not normalized");
  }
  if (!std::is_sorted(times.begin(), times.end())) {
    throw ConfigError("sample times must be ascending");
  }
  if (!times.empty() && times.front() < 0.0) {
    throw ConfigError("sample times must be non-negative");
  }

  StateVector psi = psi0;
  double tcur = 0.0;
  double tail = tail_population(psi);

  // Strang step sequence from tcur to t2 <= 1.
  const auto advance_to = [&](double t2) {
    if (t2 <= tcur + kTimeEps) {
      return;
    }
    const auto nsteps = std::max(
        1L, static_cast<long>(std::ceil((t2 - tcur) / dt - kTimeEps)));
    const double h = (t2 - tcur) / static_cast<double>(nsteps);
    const Eigen::VectorXcd half = ops.free_phases(eps, 0.5 * h);
    const double t0 = tcur;
    for (long s = 0; s < nsteps; ++s) {
      const double ta = t0 + h * static_cast<double>(s);
      const double tb = s + 1 == nsteps ? t2 : ta + h;
      const double da = area(p, tb) - area(p, ta);
      psi.array() *= half.array();
      psi = ops.cos_eigen().apply(da, psi);
      psi.array() *= half.array();
      tail = std::max(tail, tail_population(psi));
    }
    tcur = t2;
    if (std::abs(psi.norm() - 1.0) > kNormTol) {
      throw ConvergenceError("reference propagation norm drift at tau=" +
                             std::to_string(tcur));
    }
  };

  std::vector<StateVector> out;
  out.reserve(times.size());
  StateVector psi_end;  // state at the end of the pulse, filled on demand
  bool have_end = false;
  for (double t : times) {
    if (t <= kTauF) {
      advance_to(t);
      out.push_back(psi);
    } else {
      if (!have_end) {
        advance_to(kTauF);
        psi_end = psi;
        have_end = true;
      }
      StateVector s = psi_end;
      s.array() *= ops.free_phases(eps, t - kTauF).array();
      out.push_back(std::move(s));
    }
  }
  if (max_tail != nullptr) {
    *max_tail = tail;
  }
  return out;
}

StateVector reference_state(const RotorOperators& ops, const PulseSpec& p,
                            double eps, double dt, double tau,
                            const StateVector& psi0, double* max_tail) {
  return reference_states(ops, p, eps, dt, {tau}, psi0, max_tail).front();
}

ComplexMatrix magnus_u(const RotorOperators& ops, const PulseSpec& p,
                       double eps, double tau) {
  require_unit_interval(tau, "tau");
  ComplexMatrix m =
      (2.0 * area_integral(p, tau)) * kI *
          ops.coupling().cast<std::complex<double>>() +
      area_squared_integral(p, tau) * ops.anisotropy().cast<std::complex<double>>();
  m.diagonal() += tau * ops.j2().cast<std::complex<double>>();
  return kick_propagator(ops, area(p, tau)) *
         herm_expm({std::move(m), true}, -eps).mat;
}

ComplexMatrix secular_u(const RotorOperators& ops, const PulseSpec& p,
                        double eps, double tau, double tau2) {
  require_unit_interval(tau, "tau");
  require_unit_interval(tau2, "tau2");
  if (tau2 > tau + kTimeEps) {
    throw ConfigError("secular split time tau2 must not exceed tau");
  }
  const auto window = [&](double a, double b) -> ComplexMatrix {
    return (2.0 * (area_integral(p, b) - area_integral(p, a))) * kI *
               ops.coupling().cast<std::complex<double>>() +
           (area_squared_integral(p, b) - area_squared_integral(p, a)) *
               ops.anisotropy().cast<std::complex<double>>();
  };
  const ComplexMatrix late = herm_expm({window(tau2, tau), true}, -eps).mat;
  const ComplexMatrix early = herm_expm({window(0.0, tau2), true}, -eps).mat;
  return kick_propagator(ops, area(p, tau)) * late *
         ops.free_phases(eps, tau).asDiagonal() * early;
}

namespace {

// Pulse samples on the Gauss-Legendre rule of a given order, mapped to
// [0, tau]: abscissas, area and squared-area values.  Shared by all matrix
// elements that resolve to the same rule order.
struct PulseSamples {
  std::vector<double> u;
  std::vector<double> a;
  std::vector<double> a2;
  std::vector<double> w;
  double half = 0.0;
};

std::size_t wi_node_count(const PulseSpec& p, double omega) {
  const double scale =
      std::abs(omega) + 2.0 * std::numbers::pi * p.f;
  const auto n = static_cast<std::size_t>(4.0 * std::ceil(scale));
  return n < 16 ? 16 : n;
}

const PulseSamples& pulse_samples(std::map<std::size_t, PulseSamples>& cache,
                                  const PulseSpec& p, double tau,
                                  std::size_t order) {
  auto it = cache.find(order);
  if (it != cache.end()) {
    return it->second;
  }
  const GaussLegendreRule& rule = gauss_legendre(order);
  PulseSamples s;
  s.half = 0.5 * tau;
  const double mid = 0.5 * tau;
  s.u.resize(order);
  s.a.resize(order);
  s.a2.resize(order);
  s.w = rule.weights;
  for (std::size_t i = 0; i < order; ++i) {
    s.u[i] = mid + s.half * rule.nodes[i];
    s.a[i] = area(p, s.u[i]);
    s.a2[i] = s.a[i] * s.a[i];
  }
  return cache.emplace(order, std::move(s)).first->second;
}

}  // namespace

ComplexMatrix improved_u(const RotorOperators& ops, const PulseSpec& p,
                         double eps, double tau, double tau1) {
  require_unit_interval(tau, "tau");
  require_unit_interval(tau1, "tau1");
  const int n = ops.dimension();

  if (std::abs(tau1) < kTimeEps) {
    // Expansion around h1(0) = J^2: the conjugation is diagonal and the
    // remainder exponent assembles band by band from weighted integrals at
    // the level-spacing frequencies.
    ComplexMatrix w = ComplexMatrix::Zero(n, n);
    const double i2_0 = weighted_integrals(p, 0.0, tau).i2.real();
    for (int k = 0; k < n; ++k) {
      w(k, k) = ops.anisotropy()(k, k) * i2_0;
    }
    for (int k = 0; k + 1 < n; ++k) {
      const double omega = eps * (ops.j2()(k + 1) - ops.j2()(k));
      const std::complex<double> i1 = weighted_integrals(p, omega, tau).i1;
      w(k + 1, k) = 2.0 * kI * ops.coupling()(k + 1, k) * i1;
      w(k, k + 1) = std::conj(w(k + 1, k));
    }
    for (int k = 0; k + 2 < n; ++k) {
      const double omega = eps * (ops.j2()(k + 2) - ops.j2()(k));
      const std::complex<double> i2 = weighted_integrals(p, omega, tau).i2;
      w(k + 2, k) = ops.anisotropy()(k + 2, k) * i2;
      w(k, k + 2) = std::conj(w(k + 2, k));
    }
    return kick_propagator(ops, area(p, tau)) *
           ops.free_phases(eps, tau).asDiagonal() *
           herm_expm({std::move(w), true}, -eps).mat;
  }

  // General expansion time: work in the eigenbasis of h1(tau1).
  const double a1 = area(p, tau1);
  Eigen::SelfAdjointEigenSolver<ComplexMatrix> es(ops.h1_at_area(a1));
  const Eigen::VectorXd& lam = es.eigenvalues();
  const ComplexMatrix& v = es.eigenvectors();
  const ComplexMatrix xt =
      v.adjoint() * ops.coupling().cast<std::complex<double>>() * v;
  const ComplexMatrix yt =
      v.adjoint() * ops.anisotropy().cast<std::complex<double>>() * v;

  std::map<std::size_t, PulseSamples> cache;
  ComplexMatrix wt(n, n);
  for (int r = 0; r < n; ++r) {
    for (int c = r; c < n; ++c) {
      const double omega = eps * (lam(r) - lam(c));
      const PulseSamples& s =
          pulse_samples(cache, p, tau, wi_node_count(p, omega));
      std::complex<double> i1{}, i2{}, ph_int{};
      for (std::size_t i = 0; i < s.u.size(); ++i) {
        const std::complex<double> ph =
            s.w[i] * std::exp(kI * (omega * s.u[i]));
        i1 += s.a[i] * ph;
        i2 += s.a2[i] * ph;
        ph_int += ph;
      }
      i1 *= s.half;
      i2 *= s.half;
      ph_int *= s.half;
      wt(r, c) = 2.0 * kI * xt(r, c) * (i1 - a1 * ph_int) +
                 yt(r, c) * (i2 - a1 * a1 * ph_int);
      if (c != r) {
        wt(c, r) = std::conj(wt(r, c));
      }
    }
  }

  Eigen::VectorXcd dphase(n);
  for (int k = 0; k < n; ++k) {
    dphase(k) = std::exp(-kI * eps * lam(k) * tau);
  }
  return kick_propagator(ops, area(p, tau)) * v * dphase.asDiagonal() *
         herm_expm({std::move(wt), true}, -eps).mat * v.adjoint();
}

ComplexMatrix sudden_impact_u(const RotorOperators& ops, const PulseSpec& p,
                              double eps, double tau, double tau_h) {
  require_unit_interval(tau_h, "tau_h");
  if (tau < -kTimeEps) {
    throw ConfigError("sudden_impact_u needs tau >= 0");
  }
  const double late = std::max(tau, tau_h) - tau_h;
  const double early = std::min(tau, tau_h);
  return ops.free_phases(eps, late).asDiagonal() *
         kick_propagator(ops, area(p, tau)) *
         ops.free_phases(eps, early).asDiagonal();
}

FOperatorCoeffs f_operator_coeffs(int j, int m, const PulseSpec& p,
                                  double eps) {
  const int mabs = m < 0 ? -m : m;
  if (j < mabs || j < 0) {
    throw ConfigError("f_operator_coeffs needs j >= |m| >= 0");
  }
  FOperatorCoeffs out{};
  const double cj = j >= 1 ? c_coeff(j, m) : 0.0;
  const double cj1 = c_coeff(j + 1, m);
  if (j >= 1) {
    out.a = 2.0 * j * cj * weighted_integrals(p, -2.0 * eps * j).i1;
  }
  out.b = -2.0 * (j + 1.0) * cj1 *
          weighted_integrals(p, 2.0 * eps * (j + 1.0)).i1;
  if (j >= 2 && mabs <= j - 1) {
    out.alpha = -kI * c_coeff(j - 1, m) * cj *
                weighted_integrals(p, -2.0 * eps * (2.0 * j - 1.0)).i2;
  }
  out.beta = -kI * cj1 * c_coeff(j + 2, m) *
             weighted_integrals(p, 2.0 * eps * (2.0 * j + 3.0)).i2;
  out.gamma =
      kI * (1.0 - cj * cj - cj1 * cj1) * weighted_integrals(p, 0.0).i2;
  return out;
}

ComplexMatrix f_operator_matrix(const RotorOperators& ops, const PulseSpec& p,
                                double eps) {
  const int n = ops.dimension();
  const RotorBasis& b = ops.basis();
  ComplexMatrix f = ComplexMatrix::Zero(n, n);
  for (int k = 0; k < n; ++k) {
    const FOperatorCoeffs c = f_operator_coeffs(b.j_of(k), b.m, p, eps);
    if (k - 1 >= 0) f(k - 1, k) = c.a;
    if (k + 1 < n) f(k + 1, k) = c.b;
    if (k - 2 >= 0) f(k - 2, k) = c.alpha;
    if (k + 2 < n) f(k + 2, k) = c.beta;
    f(k, k) = c.gamma;
  }
  return f;
}

double error_delta(const StateVector& psi, const StateVector& ref) {
  if (psi.size() != ref.size()) {
    throw ConfigError("error_delta needs states of equal dimension");
  }
  return (psi - ref).squaredNorm();
}

ComplexMatrix build_propagator(const RotorOperators& ops, const PulseSpec& p,
                               double eps, double tau, PropagatorKind kind,
                               const PropagatorConfig& cfg) {
  switch (kind) {
    case PropagatorKind::kMagnus:
      return magnus_u(ops, p, eps, tau);
    case PropagatorKind::kSecular:
      return secular_u(ops, p, eps, tau, cfg.tau2);
    case PropagatorKind::kImproved:
      return improved_u(ops, p, eps, tau, cfg.tau1);
    case PropagatorKind::kSuddenImpact:
      return sudden_impact_u(ops, p, eps, tau, cfg.tau_h);
    case PropagatorKind::kReference:
      break;
  }
  throw ConfigError("the reference propagator is not a matrix builder");
}

int adaptive_jmax(const PulseSpec& p, double eps, int m, int j_init,
                  int jmax_floor) {
  const int mabs = m < 0 ? -m : m;
  int jmax = std::max({jmax_floor, mabs + 8, j_init + 8, 12});
  constexpr int kJmaxCap = 1024;
  constexpr double kProbeDt = 1e-3;
  while (jmax <= kJmaxCap) {
    const RotorBasis b(m, jmax);
    const RotorOperators ops(b);
    double tail = 0.0;
    reference_states(ops, p, eps, kProbeDt, {kTauF}, b.unit_state(j_init),
                     &tail);
    if (tail < kTailTol) {
      return jmax;
    }
    jmax *= 2;
  }
  throw ConvergenceError(
      "basis does not converge below jmax=1024; the pulse is too strong "
      "for this truncation scheme");
}

}  // namespace rotorkick
