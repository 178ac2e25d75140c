#pragma once

// Two-mode Fock space for a pair of trapped condensates at fixed total atom
// number N. Basis index n counts atoms in trap 1 (trap 2 holds N - n).

#include <complex>

#include <Eigen/Dense>

namespace ojj {

using Complex = std::complex<double>;
using ComplexVector = Eigen::VectorXcd;
using ComplexMatrix = Eigen::MatrixXcd;
using RealVector = Eigen::VectorXd;
using RealMatrix = Eigen::MatrixXd;

inline constexpr Complex kI{0.0, 1.0};

/// Largest |M(i,j) - conj(M(j,i))| over all entries.
double hermiticity_residual(const ComplexMatrix& m);

/// Dense Hermitian matrix. Construction fails with IntegrityError when the
/// input is not Hermitian to within kTolerance (absolute, max-entry).
class HermitianOperator {
 public:
  static constexpr double kTolerance = 1e-12;

  explicit HermitianOperator(ComplexMatrix m);

  const ComplexMatrix& matrix() const { return m_; }
  Eigen::Index dim() const { return m_.rows(); }
  double residual() const { return residual_; }
  double max_abs_entry() const;

 private:
  ComplexMatrix m_;
  double residual_ = 0.0;
};

/// Amplitudes over |n>_1 |N-n>_2, n = 0..N.
///
/// The constructor checks only the length. Library factories and evolution
/// produce normalized states; operations that need normalization check it.
class FockStateVector {
 public:
  FockStateVector(int total_atoms, ComplexVector amplitudes);

  int total_atoms() const { return total_atoms_; }
  const ComplexVector& amplitudes() const { return amplitudes_; }
  Complex operator[](Eigen::Index n) const { return amplitudes_(n); }
  double norm() const { return amplitudes_.norm(); }
  bool is_normalized(double tol) const;

 private:
  int total_atoms_;
  ComplexVector amplitudes_;
};

/// Schwinger spin operators on the fixed-N sector:
///   jz = (n2 - n1)/2,  jx = (c1^dag c2 + c2^dag c1)/2,
///   jy = (c2^dag c1 - c1^dag c2)/(2i)
/// so that [jx, jy] = i jz.
struct AngularMomentumOps {
  ComplexMatrix jx;
  ComplexMatrix jy;
  ComplexMatrix jz;
};

AngularMomentumOps build_angular_ops(int total_atoms);

/// c1^dag c2 on the fixed-N sector (raises n by one).
ComplexMatrix tunneling_operator(int total_atoms);

struct TwoModeParams {
  int total_atoms = 0;
  double kappa = 0.0;  // self-interaction, rad/time
  double g = 0.0;      // Josephson coupling, rad/time
  double theta = 0.0;  // coupling phase, rad
  double e0 = 0.0;     // single-mode energy; only a global phase at fixed N

  void validate() const;
};

/// H = kappa jz^2 - (g/2) (e^{-i theta} c1^dag c2 + e^{i theta} c2^dag c1),
/// with hbar = 1 and the number-only terms dropped. At theta = pi this is
/// kappa jz^2 + g jx.
HermitianOperator build_two_mode_hamiltonian(const TwoModeParams& p);

/// exp(-i H t) from one Hermitian eigendecomposition, reusable across times.
class Propagator {
 public:
  explicit Propagator(const HermitianOperator& h);

  Eigen::Index dim() const { return eigenvalues_.size(); }
  const RealVector& eigenvalues() const { return eigenvalues_; }
  ComplexVector apply(const ComplexVector& psi, double t) const;

 private:
  RealVector eigenvalues_;
  ComplexMatrix eigenvectors_;
};

ComplexVector evolve(const ComplexVector& psi, const HermitianOperator& h, double t);
FockStateVector evolve(const FockStateVector& state, const HermitianOperator& h, double t);

/// <psi|H|psi>, real part; psi need not be normalized.
double expectation(const ComplexVector& psi, const HermitianOperator& h);

/// |N/2>_1 |N/2>_2. Requires even N >= 2.
FockStateVector twin_fock_state(int total_atoms);

struct NumberStatistics {
  double mean_n = 0.0;
  double delta_n = 0.0;
};

/// Mean and standard deviation of the trap-1 atom number.
NumberStatistics number_statistics(const FockStateVector& state);

}  // namespace ojj
