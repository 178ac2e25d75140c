#include "ojj/fock.hpp"

#include <cmath>
#include <string>

#include "ojj/errors.hpp"

namespace ojj {

double hermiticity_residual(const ComplexMatrix& m) {
  if (m.rows() != m.cols()) {
    throw DimensionError("hermiticity_residual: matrix is not square");
  }
  if (m.size() == 0) return 0.0;
  return (m - m.adjoint()).cwiseAbs().maxCoeff();
}

HermitianOperator::HermitianOperator(ComplexMatrix m) : m_(std::move(m)) {
  residual_ = hermiticity_residual(m_);
  if (!(residual_ < kTolerance)) {
    throw IntegrityError("operator is not Hermitian: max |H - H^dag| = " +
                         std::to_string(residual_));
  }
}

double HermitianOperator::max_abs_entry() const {
  return m_.size() == 0 ? 0.0 : m_.cwiseAbs().maxCoeff();
}

FockStateVector::FockStateVector(int total_atoms, ComplexVector amplitudes)
    : total_atoms_(total_atoms), amplitudes_(std::move(amplitudes)) {
  if (total_atoms_ < 0) {
    throw PreconditionError("FockStateVector: negative atom number");
  }
  if (amplitudes_.size() != total_atoms_ + 1) {
    throw DimensionError("FockStateVector: expected " + std::to_string(total_atoms_ + 1) +
                         " amplitudes, got " + std::to_string(amplitudes_.size()));
  }
}

bool FockStateVector::is_normalized(double tol) const {
  return std::abs(amplitudes_.squaredNorm() - 1.0) <= tol;
}

ComplexMatrix tunneling_operator(int total_atoms) {
  if (total_atoms < 0) throw PreconditionError("tunneling_operator: N < 0");
  const int dim = total_atoms + 1;
  ComplexMatrix t = ComplexMatrix::Zero(dim, dim);
  // c1^dag c2 |n, N-n> = sqrt((n+1)(N-n)) |n+1, N-n-1>
  for (int n = 0; n < total_atoms; ++n) {
    t(n + 1, n) = std::sqrt(static_cast<double>(n + 1) * (total_atoms - n));
  }
  return t;
}

AngularMomentumOps build_angular_ops(int total_atoms) {
  if (total_atoms < 0) throw PreconditionError("build_angular_ops: N < 0");
  const int dim = total_atoms + 1;
  const ComplexMatrix raise_n = tunneling_operator(total_atoms);  // c1^dag c2
  const ComplexMatrix lower_n = raise_n.adjoint();                // c2^dag c1

  AngularMomentumOps ops;
  ops.jx = 0.5 * (raise_n + lower_n);
  ops.jy = (lower_n - raise_n) / (2.0 * kI);
  ops.jz = ComplexMatrix::Zero(dim, dim);
  for (int n = 0; n < dim; ++n) {
    ops.jz(n, n) = 0.5 * (total_atoms - 2 * n);
  }
  return ops;
}

void TwoModeParams::validate() const {
  if (total_atoms < 0) throw PreconditionError("TwoModeParams: N must be >= 0");
  if (!std::isfinite(kappa) || !std::isfinite(g) || !std::isfinite(theta) ||
      !std::isfinite(e0)) {
    throw PreconditionError("TwoModeParams: kappa, g, theta and e0 must be finite");
  }
}

HermitianOperator build_two_mode_hamiltonian(const TwoModeParams& p) {
  p.validate();
  const int dim = p.total_atoms + 1;
  const ComplexMatrix hop = tunneling_operator(p.total_atoms);
  const Complex phase = std::polar(1.0, -p.theta);

  ComplexMatrix h = ComplexMatrix::Zero(dim, dim);
  for (int n = 0; n < dim; ++n) {
    const double jz = 0.5 * (p.total_atoms - 2 * n);
    h(n, n) = p.kappa * jz * jz;
  }
  // Build the coupling from one triangle and mirror it so H is exactly
  // Hermitian in floating point.
  for (int n = 0; n < p.total_atoms; ++n) {
    const Complex up = -0.5 * p.g * phase * hop(n + 1, n);
    h(n + 1, n) = up;
    h(n, n + 1) = std::conj(up);
  }
  return HermitianOperator(std::move(h));
}

Propagator::Propagator(const HermitianOperator& h) {
  Eigen::SelfAdjointEigenSolver<ComplexMatrix> solver(h.matrix());
  if (solver.info() != Eigen::Success) {
    throw IntegrityError("Propagator: Hermitian eigendecomposition did not converge");
  }
  eigenvalues_ = solver.eigenvalues();
  eigenvectors_ = solver.eigenvectors();
}

ComplexVector Propagator::apply(const ComplexVector& psi, double t) const {
  if (psi.size() != dim()) {
    throw DimensionError("evolve: state has dimension " + std::to_string(psi.size()) +
                         " but operator has dimension " + std::to_string(dim()));
  }
  if (!std::isfinite(t)) throw PreconditionError("evolve: time must be finite");
  if (t == 0.0) return psi;
  ComplexVector coeffs = eigenvectors_.adjoint() * psi;
  for (Eigen::Index k = 0; k < coeffs.size(); ++k) {
    coeffs(k) *= std::polar(1.0, -eigenvalues_(k) * t);
  }
  return eigenvectors_ * coeffs;
}

ComplexVector evolve(const ComplexVector& psi, const HermitianOperator& h, double t) {
  if (psi.size() != h.dim()) {
    throw DimensionError("evolve: state has dimension " + std::to_string(psi.size()) +
                         " but operator has dimension " + std::to_string(h.dim()));
  }
  if (t == 0.0) return psi;
  return Propagator(h).apply(psi, t);
}

FockStateVector evolve(const FockStateVector& state, const HermitianOperator& h, double t) {
  return FockStateVector(state.total_atoms(), evolve(state.amplitudes(), h, t));
}

double expectation(const ComplexVector& psi, const HermitianOperator& h) {
  if (psi.size() != h.dim()) throw DimensionError("expectation: dimension mismatch");
  return psi.dot(h.matrix() * psi).real();
}

FockStateVector twin_fock_state(int total_atoms) {
  if (total_atoms < 2 || total_atoms % 2 != 0) {
    throw PreconditionError("twin_fock_state: unsupported initial state, N must be even and >= 2 (got " +
                            std::to_string(total_atoms) + ")");
  }
  ComplexVector amps = ComplexVector::Zero(total_atoms + 1);
  amps(total_atoms / 2) = 1.0;
  return FockStateVector(total_atoms, std::move(amps));
}

NumberStatistics number_statistics(const FockStateVector& state) {
  constexpr double kNormTolerance = 1e-6;
  if (!state.is_normalized(kNormTolerance)) {
    throw PreconditionError("number_statistics: state is not normalized (|psi|^2 = " +
                            std::to_string(state.amplitudes().squaredNorm()) + ")");
  }
  const auto& a = state.amplitudes();
  NumberStatistics s;
  for (Eigen::Index n = 0; n < a.size(); ++n) s.mean_n += n * std::norm(a(n));
  // Centered second moment; avoids cancellation when delta_n << mean_n.
  double variance = 0.0;
  for (Eigen::Index n = 0; n < a.size(); ++n) {
    const double d = n - s.mean_n;
    variance += d * d * std::norm(a(n));
  }
  s.delta_n = std::sqrt(std::max(variance, 0.0));
  return s;
}

}  // namespace ojj
