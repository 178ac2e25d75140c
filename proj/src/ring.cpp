#include "ojj/ring.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <map>
#include <optional>
#include <numbers>
#include <sstream>

#include "ojj/errors.hpp"

namespace ojj {

void RingCouplingModel::validate() const {
  for (double v : {gamma_prime_1, gamma_prime_2, omega_k1, omega_k2, theta, kappa}) {
    if (!std::isfinite(v)) throw PreconditionError("RingCouplingModel: parameters must be finite");
  }
  if (!(omega_k1 > 0.0) || !(omega_k2 > 0.0)) {
    throw PreconditionError("RingCouplingModel: ring frequencies must be > 0");
  }
  if (n_particles < 0) throw PreconditionError("RingCouplingModel: n_particles must be >= 0");
  if (ring_cutoff < 1) {
    throw PreconditionError("RingCouplingModel: ring_cutoff must be >= 1 for the coupling to act");
  }
}

double RingCouplingModel::epsilon() const {
  return std::max(std::abs(gamma_prime_1), std::abs(gamma_prime_2)) / std::min(omega_k1, omega_k2);
}

double effective_coupling_g(const RingCouplingModel& model) {
  model.validate();
  return 2.0 * (model.gamma_prime_1 * model.gamma_prime_1 / model.omega_k1 +
                model.gamma_prime_2 * model.gamma_prime_2 / model.omega_k2);
}

double phase_from_geometry(double delta_k, double r) {
  if (!std::isfinite(delta_k) || !std::isfinite(r)) {
    throw PreconditionError("phase_from_geometry: inputs must be finite");
  }
  constexpr double two_pi = 2.0 * std::numbers::pi;
  double phase = std::fmod(std::numbers::pi * delta_k * r, two_pi);
  if (phase < 0.0) phase += two_pi;
  if (phase >= two_pi) phase -= two_pi;
  return phase;
}

std::vector<RingOccupation> ring_basis(const RingCouplingModel& model) {
  model.validate();
  const int total = model.n_particles;
  const int cap = std::min(model.ring_cutoff, total);
  std::vector<RingOccupation> basis;
  for (int n1 = total; n1 >= 0; --n1) {
    for (int n2 = total - n1; n2 >= 0; --n2) {
      const int rest = total - n1 - n2;
      for (int r1 = std::min(cap, rest); r1 >= 0; --r1) {
        const int r2 = rest - r1;
        if (r2 <= cap) basis.push_back({n1, n2, r1, r2});
      }
    }
  }
  return basis;
}

HermitianOperator build_ring_hamiltonian(const RingCouplingModel& model) {
  const auto basis = ring_basis(model);
  std::map<RingOccupation, Eigen::Index> index;
  for (std::size_t k = 0; k < basis.size(); ++k) index[basis[k]] = static_cast<Eigen::Index>(k);

  const auto dim = static_cast<Eigen::Index>(basis.size());
  ComplexMatrix h = ComplexMatrix::Zero(dim, dim);
  const std::array<double, 2> gamma{model.gamma_prime_1, model.gamma_prime_2};
  const std::array<double, 2> omega{model.omega_k1, model.omega_k2};
  const std::array<Complex, 2> trap_phase{Complex{1.0, 0.0}, std::polar(1.0, model.theta)};

  for (Eigen::Index k = 0; k < dim; ++k) {
    const RingOccupation& s = basis[k];
    h(k, k) = omega[0] * s[2] + omega[1] * s[3] +
              0.5 * model.kappa * (static_cast<double>(s[0]) * s[0] + static_cast<double>(s[1]) * s[1]);
    // c_t^dag g_j moves one particle from ring mode j into trap t.
    for (int j = 0; j < 2; ++j) {
      if (s[2 + j] == 0) continue;
      for (int trap = 0; trap < 2; ++trap) {
        RingOccupation target = s;
        target[2 + j] -= 1;
        target[trap] += 1;
        const auto it = index.find(target);
        if (it == index.end()) continue;
        const Complex amp = gamma[j] * trap_phase[trap] *
                            std::sqrt(static_cast<double>(s[2 + j]) * target[trap]);
        h(it->second, k) += amp;
        h(k, it->second) += std::conj(amp);
      }
    }
  }
  return HermitianOperator(std::move(h));
}

RingPopulationTrace ring_population_trace(const RingCouplingModel& model,
                                          const std::vector<double>& times) {
  const auto basis = ring_basis(model);
  const HermitianOperator h = build_ring_hamiltonian(model);
  const Propagator propagator(h);

  ComplexVector psi0 = ComplexVector::Zero(h.dim());
  psi0(0) = 1.0;  // basis[0] is (N, 0, 0, 0)

  RingPopulationTrace trace;
  trace.t = times;
  trace.occupation.reserve(times.size());
  for (double t : times) {
    const ComplexVector psi = propagator.apply(psi0, t);
    std::array<double, 4> occ{0.0, 0.0, 0.0, 0.0};
    double norm = 0.0;
    for (Eigen::Index k = 0; k < psi.size(); ++k) {
      const double p = std::norm(psi(k));
      norm += p;
      for (int m = 0; m < 4; ++m) occ[m] += p * basis[k][m];
    }
    trace.max_norm_drift = std::max(trace.max_norm_drift, std::abs(norm - 1.0));
    const double number = occ[0] + occ[1] + occ[2] + occ[3];
    trace.max_number_drift = std::max(trace.max_number_drift, std::abs(number - model.n_particles));
    trace.occupation.push_back(occ);
  }
  return trace;
}

double default_adiabatic_duration(const RingCouplingModel& model) {
  const double g = effective_coupling_g(model);
  if (!(g > 0.0)) throw PreconditionError("default_adiabatic_duration: effective g is zero");
  return 4.0 * 2.0 * std::numbers::pi / g;
}

AdiabaticReport validate_adiabatic(const RingCouplingModel& model, double duration,
                                   int grid_points) {
  model.validate();
  if (model.n_particles != 1) {
    throw PreconditionError("validate_adiabatic: frequency fitting needs n_particles = 1");
  }
  if (!(duration > 0.0) || grid_points < 3) {
    throw PreconditionError("validate_adiabatic: duration must be > 0 and grid_points >= 3");
  }

  AdiabaticReport report;
  report.effective_g = effective_coupling_g(model);
  report.epsilon = model.epsilon();

  std::vector<double> times(grid_points);
  for (int k = 0; k < grid_points; ++k) times[k] = duration * k / (grid_points - 1);
  const RingPopulationTrace trace = ring_population_trace(model, times);

  std::vector<double> p2(times.size());
  for (std::size_t k = 0; k < times.size(); ++k) {
    p2[k] = trace.occupation[k][1];
    report.max_ring_population =
        std::max(report.max_ring_population, trace.occupation[k][2] + trace.occupation[k][3]);
  }

  std::vector<double> peaks;
  std::optional<double> rise;
  for (std::size_t k = 1; k < p2.size(); ++k) {
    const bool up = p2[k - 1] < 0.5 && p2[k] >= 0.5;
    const bool down = p2[k - 1] >= 0.5 && p2[k] < 0.5;
    if (!up && !down) continue;
    const double s = (0.5 - p2[k - 1]) / (p2[k] - p2[k - 1]);
    const double crossing = times[k - 1] + s * (times[k] - times[k - 1]);
    if (up) {
      rise = crossing;
    } else if (rise) {
      peaks.push_back(0.5 * (*rise + crossing));
      rise.reset();
    }
  }
  if (peaks.size() < 2) {
    std::ostringstream os;
    os << "validate_adiabatic: could not resolve two trap-2 population peaks (epsilon = "
       << report.epsilon << ", found " << peaks.size()
       << "); the elimination regime needs epsilon << 1 and a duration of several 2*pi/g";
    throw FitError(os.str());
  }
  const double spacing = (peaks.back() - peaks.front()) / static_cast<double>(peaks.size() - 1);
  report.fitted_rabi_frequency = 2.0 * std::numbers::pi / spacing;
  report.relative_error = report.effective_g > 0.0
                              ? std::abs(report.fitted_rabi_frequency - report.effective_g) /
                                    report.effective_g
                              : std::numeric_limits<double>::infinity();
  return report;
}

}  // namespace ojj
