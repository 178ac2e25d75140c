#include "ojj/bragg.hpp"

#include <array>
#include <cmath>
#include <numbers>

#include <boost/numeric/odeint.hpp>

#include "ojj/errors.hpp"
#include "ojj/parallel.hpp"

namespace ojj {
namespace {

namespace odeint = boost::numeric::odeint;

template <std::size_t Dim>
using Amplitudes = std::array<Complex, Dim>;

// i da/dt = H a with constant H, integrated from t0 to t1.
template <std::size_t Dim>
Amplitudes<Dim> integrate_linear(const ComplexMatrix& h, Amplitudes<Dim> a, double t0, double t1) {
  if (t1 == t0) return a;
  const auto rhs = [&h](const Amplitudes<Dim>& x, Amplitudes<Dim>& dxdt, double) {
    for (std::size_t r = 0; r < Dim; ++r) {
      Complex acc{0.0, 0.0};
      for (std::size_t c = 0; c < Dim; ++c) acc += h(r, c) * x[c];
      dxdt[r] = -kI * acc;
    }
  };
  const double scale = std::max(h.cwiseAbs().maxCoeff(), 1e-300);
  const double span = t1 - t0;
  const double dt0 = std::copysign(std::min(std::abs(span), 0.01 / scale), span);
  auto stepper =
      odeint::make_controlled(kLadderAbsTol, kLadderRelTol, odeint::runge_kutta_fehlberg78<Amplitudes<Dim>>());
  odeint::integrate_adaptive(stepper, rhs, a, t0, t1, dt0);
  return a;
}

void require_increasing(const std::vector<double>& t_grid, const char* where) {
  for (std::size_t k = 0; k < t_grid.size(); ++k) {
    if (!std::isfinite(t_grid[k])) throw PreconditionError(std::string(where) + ": times must be finite");
    if (k > 0 && !(t_grid[k] > t_grid[k - 1])) {
      throw PreconditionError(std::string(where) + ": time grid must be increasing");
    }
  }
}

}  // namespace

void BraggLadderParams::validate() const {
  for (double v : {omega_pump, omega_probe, detuning, nu, omega_k}) {
    if (!std::isfinite(v)) throw PreconditionError("BraggLadderParams: parameters must be finite");
  }
  if (!(omega_k > 0.0)) throw PreconditionError("BraggLadderParams: omega_k must be > 0");
  if (order < 1) throw PreconditionError("BraggLadderParams: order M must be >= 1");
}

bool BraggLadderParams::adiabatic() const {
  return delta_1() >= 10.0 * std::max(std::abs(omega_pump), std::abs(omega_probe));
}

ComplexMatrix first_order_generator(const BraggLadderParams& p) {
  p.validate();
  ComplexMatrix h = ComplexMatrix::Zero(3, 3);
  h(1, 1) = p.delta_1();
  h(2, 2) = p.delta_1() - p.delta_2();
  h(0, 1) = h(1, 0) = p.omega_pump;
  h(1, 2) = h(2, 1) = p.omega_probe;
  return h;
}

ComplexMatrix reduced_generator(const BraggLadderParams& p) {
  p.validate();
  const double d1 = p.delta_1();
  if (d1 == 0.0) {
    throw PreconditionError("reduced_two_level_dynamics: delta_1 = 0, the excited state cannot be eliminated");
  }
  const double w = p.omega_pump;
  const double wp = p.omega_probe;
  ComplexMatrix h(2, 2);
  h(0, 0) = -w * w / d1;
  h(0, 1) = h(1, 0) = -w * wp / d1;
  h(1, 1) = -wp * wp / d1 + (p.delta_1() - p.delta_2());
  return h;
}

AmplitudeTriple integrate_first_order(const BraggLadderParams& p, const AmplitudeTriple& start,
                                      double t_start, double t_end) {
  if (!std::isfinite(t_start) || !std::isfinite(t_end)) {
    throw PreconditionError("integrate_first_order: times must be finite");
  }
  const auto out =
      integrate_linear<3>(first_order_generator(p), {start.g0, start.ek, start.g2k}, t_start, t_end);
  return {out[0], out[1], out[2]};
}

std::vector<AmplitudeTriple> first_order_dynamics(const BraggLadderParams& p,
                                                  const std::vector<double>& t_grid) {
  require_increasing(t_grid, "first_order_dynamics");
  const ComplexMatrix h = first_order_generator(p);
  std::vector<AmplitudeTriple> out;
  out.reserve(t_grid.size());
  Amplitudes<3> a{Complex{1.0, 0.0}, Complex{0.0, 0.0}, Complex{0.0, 0.0}};
  double t = 0.0;
  for (double target : t_grid) {
    a = integrate_linear<3>(h, a, t, target);
    t = target;
    out.push_back({a[0], a[1], a[2]});
  }
  return out;
}

std::vector<GroundPair> reduced_two_level_dynamics(const BraggLadderParams& p,
                                                   const std::vector<double>& t_grid) {
  require_increasing(t_grid, "reduced_two_level_dynamics");
  const ComplexMatrix h = reduced_generator(p);
  std::vector<GroundPair> out;
  out.reserve(t_grid.size());
  Amplitudes<2> a{Complex{1.0, 0.0}, Complex{0.0, 0.0}};
  double t = 0.0;
  for (double target : t_grid) {
    a = integrate_linear<2>(h, a, t, target);
    t = target;
    out.push_back({a[0], a[1]});
  }
  return out;
}

double resonance_detuning(const BraggLadderParams& p) {
  p.validate();
  return 4.0 * p.omega_k - p.nu;
}

double effective_gamma(const BraggLadderParams& p) {
  p.validate();
  if (p.detuning == 0.0) throw PreconditionError("effective_gamma: Delta must be nonzero");
  const double coupling = std::abs(p.omega_pump * p.omega_probe);
  if (coupling == 0.0) return 0.0;
  const int m = p.order;
  // Direct product while it stays in range (exact for M = 1), log space otherwise.
  const double direct = std::pow(coupling / std::abs(p.detuning), m) /
                        (std::pow(std::tgamma(static_cast<double>(m)), 2) *
                         std::pow(p.omega_2k(), m - 1));
  if (std::isfinite(direct) && direct > 0.0) return direct;
  const double log_gamma = m * (std::log(coupling) - std::log(std::abs(p.detuning))) -
                           2.0 * std::lgamma(static_cast<double>(m)) -
                           (m - 1) * std::log(p.omega_2k());
  return std::exp(log_gamma);
}

double transfer_time(const BraggLadderParams& p) {
  p.validate();
  const double coupling = p.omega_pump * p.omega_probe;
  if (coupling == 0.0) throw PreconditionError("transfer_time: Omega * Omega' must be nonzero");
  return std::numbers::pi * std::abs(p.delta_1()) / (2.0 * std::abs(coupling));
}

std::vector<BraggScanPoint> bragg_scan(const BraggLadderParams& base, BraggScanVariable variable,
                                       const std::vector<double>& values, double t, bool parallel) {
  base.validate();
  if (!(t >= 0.0) || !std::isfinite(t)) throw PreconditionError("bragg_scan: time must be finite and >= 0");
  return parallel_map<BraggScanPoint>(
      values.size(),
      [&](std::size_t i) {
        BraggLadderParams p = base;
        (variable == BraggScanVariable::kNu ? p.nu : p.detuning) = values[i];
        const AmplitudeTriple a = integrate_first_order(p, AmplitudeTriple{}, 0.0, t);
        BraggScanPoint point;
        point.value = values[i];
        point.transfer_probability = std::norm(a.g2k);
        point.gamma_eff = p.detuning != 0.0 ? effective_gamma(p) : 0.0;
        point.norm_drift = std::abs(a.norm_squared() - 1.0);
        return point;
      },
      parallel);
}

}  // namespace ojj
