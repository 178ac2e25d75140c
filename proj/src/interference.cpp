#include "ojj/interference.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <string>

#include "ojj/errors.hpp"

namespace ojj {
namespace {

constexpr double kRealityTolerance = 1e-10;
constexpr double kRevivalFraction = 0.9;

double hop_weight(int n, int total_atoms) {
  return std::sqrt(static_cast<double>(n + 1) * (total_atoms - n));
}

double crossing_time(const std::vector<double>& t, const std::vector<double>& y, std::size_t i0,
                     std::size_t i1, double level) {
  const double dy = y[i1] - y[i0];
  if (dy == 0.0) return t[i1];
  const double s = (level - y[i0]) / dy;
  return t[i0] + std::clamp(s, 0.0, 1.0) * (t[i1] - t[i0]);
}

}  // namespace

std::vector<double> linspace(double start, double stop, int count) {
  if (count < 1) throw PreconditionError("linspace: count must be >= 1");
  std::vector<double> out(count);
  if (count == 1) {
    out[0] = start;
    return out;
  }
  const double step = (stop - start) / (count - 1);
  for (int k = 0; k < count; ++k) out[k] = start + k * step;
  out.back() = stop;
  return out;
}

std::vector<double> default_tau_grid(double kappa, int count) {
  if (!(kappa > 0.0)) throw PreconditionError("default_tau_grid: kappa must be > 0");
  return linspace(0.0, 1.2 * std::numbers::pi / kappa, count);
}

IntensityTrace intensity_trace(const FockStateVector& state, double kappa,
                               const std::vector<double>& tau_grid, double prefactor) {
  if (!state.is_normalized(1e-6)) {
    throw PreconditionError("intensity_trace: state is not normalized");
  }
  if (!std::isfinite(kappa) || !std::isfinite(prefactor)) {
    throw PreconditionError("intensity_trace: kappa and prefactor must be finite");
  }
  if (tau_grid.empty()) throw PreconditionError("intensity_trace: tau grid is empty");
  for (std::size_t k = 1; k < tau_grid.size(); ++k) {
    if (!(tau_grid[k] > tau_grid[k - 1])) {
      throw PreconditionError("intensity_trace: tau grid must be strictly increasing");
    }
  }

  const int total = state.total_atoms();
  const auto& a = state.amplitudes();
  IntensityTrace trace;
  trace.tau = tau_grid;
  trace.intensity.reserve(tau_grid.size());
  trace.prefactor = prefactor;
  trace.kappa = kappa;
  trace.total_atoms = total;

  ComplexVector held(total + 1);
  for (double tau : tau_grid) {
    for (int n = 0; n <= total; ++n) {
      const double occupation = static_cast<double>(n) * n + static_cast<double>(total - n) * (total - n);
      held(n) = a(n) * std::polar(1.0, -0.5 * kappa * occupation * tau);
    }
    Complex raise{0.0, 0.0};  // <c1^dag c2>
    Complex lower{0.0, 0.0};  // <c2^dag c1>
    for (int n = 0; n < total; ++n) {
      const double w = hop_weight(n, total);
      raise += std::conj(held(n + 1)) * held(n) * w;
      lower += std::conj(held(n)) * held(n + 1) * w;
    }
    const Complex value = raise + lower;
    trace.max_imaginary_residue = std::max(trace.max_imaginary_residue, std::abs(value.imag()));
    trace.intensity.push_back(prefactor * value.real());
  }
  if (!(trace.max_imaginary_residue < kRealityTolerance)) {
    throw IntegrityError("intensity_trace: interference term has imaginary residue " +
                         std::to_string(trace.max_imaginary_residue));
  }
  return trace;
}

ClosedFormIntensity intensity_closed_form_terms(const ComplexVector& d, int total_atoms,
                                                double kappa, double tau) {
  if (d.size() != total_atoms + 1) {
    throw DimensionError("intensity_closed_form: expected N+1 amplitudes");
  }
  Complex first{0.0, 0.0};
  Complex second{0.0, 0.0};
  for (int n = 0; n <= total_atoms; ++n) {
    if (n + 1 <= total_atoms) {
      first += std::conj(d(n + 1)) * d(n) * hop_weight(n, total_atoms) *
               std::polar(1.0, kappa * (2 * n + 1 - total_atoms) * tau);
    }
    if (n >= 1) {
      second += std::conj(d(n - 1)) * d(n) *
                std::sqrt(static_cast<double>(n) * (total_atoms - n + 1)) *
                std::polar(1.0, kappa * (total_atoms - 2 * n + 1) * tau);
    }
  }
  return {first + second, 2.0 * first.real()};
}

double intensity_closed_form(const ComplexVector& amplitudes, int total_atoms, double kappa,
                             double tau) {
  const auto terms = intensity_closed_form_terms(amplitudes, total_atoms, kappa, tau);
  const double scale = std::max(total_atoms, 1);
  if (std::abs(terms.as_written.imag()) > kRealityTolerance * scale ||
      std::abs(terms.as_written.real() - terms.twice_real_first) > kRealityTolerance * scale) {
    throw IntegrityError("intensity_closed_form: the two adjacent-amplitude sums are not conjugate");
  }
  return terms.as_written.real();
}

double collapse_time_estimate(double kappa, double delta_n) {
  if (!(kappa > 0.0) || !(delta_n > 0.0)) {
    throw PreconditionError(
        "collapse_time_estimate: no dephasing scale, kappa and delta_n must both be > 0");
  }
  return std::numbers::pi / (2.0 * kappa * delta_n);
}

std::vector<double> intensity_envelope(const IntensityTrace& trace) {
  const auto& t = trace.tau;
  const std::size_t count = t.size();
  std::vector<double> mag(count);
  for (std::size_t k = 0; k < count; ++k) mag[k] = std::abs(trace.intensity[k]);
  if (count < 3) return mag;

  std::vector<std::size_t> knots{0};
  for (std::size_t k = 1; k + 1 < count; ++k) {
    if (mag[k] > mag[k - 1] && mag[k] >= mag[k + 1]) knots.push_back(k);
  }
  knots.push_back(count - 1);

  std::vector<double> env(count);
  for (std::size_t j = 0; j + 1 < knots.size(); ++j) {
    const std::size_t k0 = knots[j];
    const std::size_t k1 = knots[j + 1];
    for (std::size_t k = k0; k <= k1; ++k) {
      const double s = (t[k] - t[k0]) / (t[k1] - t[k0]);
      env[k] = mag[k0] + s * (mag[k1] - mag[k0]);
    }
  }
  return env;
}

CollapseReport detect_collapse_revival(const IntensityTrace& trace, double threshold_fraction,
                                       std::optional<double> delta_n) {
  if (!(threshold_fraction > 0.0 && threshold_fraction < 1.0)) {
    throw PreconditionError("detect_collapse_revival: threshold_fraction must lie in (0, 1)");
  }
  if (!(trace.kappa > 0.0)) {
    throw PreconditionError("detect_collapse_revival: trace needs kappa > 0");
  }
  const double revival_time = std::numbers::pi / trace.kappa;
  const double required_end = 1.2 * revival_time;
  const auto& t = trace.tau;
  if (t.size() < 3 || t.front() > 0.0 || t.back() < required_end * (1.0 - 1e-12)) {
    throw PreconditionError("detect_collapse_revival: tau grid must cover [0, 1.2*pi/kappa] = [0, " +
                            std::to_string(required_end) + "]");
  }

  CollapseReport report;
  if (delta_n && *delta_n > 0.0) {
    report.t_coll_estimate = collapse_time_estimate(trace.kappa, *delta_n);
  }

  const std::vector<double> env = intensity_envelope(trace);
  const std::size_t count = env.size();
  report.envelope_peak = *std::max_element(env.begin(), env.end());
  report.envelope_threshold = threshold_fraction * report.envelope_peak;
  const double floor =
      kRealityTolerance * std::abs(trace.prefactor) * std::max(trace.total_atoms, 1);
  report.signal_resolved = report.envelope_peak > floor;
  if (!report.signal_resolved) return report;

  // Envelope window: mean spacing of the knots (local maxima of |I|).
  std::size_t knot_count = 2;
  for (std::size_t k = 1; k + 1 < count; ++k) {
    const double a = std::abs(trace.intensity[k]);
    if (a > std::abs(trace.intensity[k - 1]) && a >= std::abs(trace.intensity[k + 1])) ++knot_count;
  }
  const double window = (t.back() - t.front()) / static_cast<double>(knot_count - 1);

  const double threshold = report.envelope_threshold;
  bool seen_above = false;
  for (std::size_t k = 0; k < count && !report.t_coll_measured; ++k) {
    if (env[k] >= threshold) {
      seen_above = true;
      continue;
    }
    if (!seen_above) continue;
    if (t[k] + window > t.back()) break;
    bool stays_below = true;
    for (std::size_t j = k; j < count && t[j] <= t[k] + window; ++j) {
      if (env[j] >= threshold) {
        stays_below = false;
        break;
      }
    }
    if (stays_below) report.t_coll_measured = crossing_time(t, env, k - 1, k, threshold);
  }

  // Runs of the envelope at or above the revival level.
  const double level = kRevivalFraction * report.envelope_peak;
  struct Run {
    std::size_t first, last;
  };
  std::vector<Run> runs;
  for (std::size_t k = 0; k < count; ++k) {
    if (env[k] < level) continue;
    if (!runs.empty() && runs.back().last + 1 == k) {
      runs.back().last = k;
    } else {
      runs.push_back({k, k});
    }
  }
  const double search_radius = 0.25 * revival_time;
  const Run* best = nullptr;
  double best_distance = search_radius;
  for (std::size_t r = 1; r < runs.size(); ++r) {  // runs[0] precedes any dip
    const double lo = t[runs[r].first];
    const double hi = t[runs[r].last];
    const double distance = revival_time < lo ? lo - revival_time
                            : revival_time > hi ? revival_time - hi
                                                : 0.0;
    if (distance <= best_distance) {
      best_distance = distance;
      best = &runs[r];
    }
  }
  if (best != nullptr) {
    const double left = best->first == 0 ? t.front()
                                         : crossing_time(t, env, best->first - 1, best->first, level);
    const double right = best->last + 1 == count
                             ? t.back()
                             : crossing_time(t, env, best->last, best->last + 1, level);
    report.t_revival_measured = 0.5 * (left + right);
  }
  return report;
}

}  // namespace ojj
