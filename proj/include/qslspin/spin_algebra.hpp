#pragma once

#include <Eigen/Dense>
#include <array>
#include <vector>

namespace qslspin {

using ComplexMatrix = Eigen::MatrixXcd;
using ComplexVector = Eigen::VectorXcd;
using Vector3 = Eigen::Vector3d;

// Spin quantum number stored as the integer 2S, so half-integers are exact.
class Spin {
 public:
  static constexpr int kMaxTwice = 20;  // S <= 10, d <= 21

  // Throws Error(InvalidSpin) unless 1 <= twice_s <= kMaxTwice.
  static Spin from_twice(int twice_s);
  // Throws Error(InvalidSpin) unless s is a positive half-integer <= 10.
  static Spin from_value(double s);

  int twice() const noexcept { return twice_; }
  double value() const noexcept { return 0.5 * twice_; }
  int dimension() const noexcept { return twice_ + 1; }
  double casimir() const noexcept { return value() * (value() + 1.0); }

  friend bool operator==(Spin, Spin) = default;

 private:
  explicit Spin(int twice) : twice_(twice) {}
  int twice_;
};

// r_B = sqrt(3S/(S+1)).
double bloch_radius(Spin spin) noexcept;

namespace spin {

// Spin-S operator matrices in the |S, S>, |S, S-1>, ..., |S, -S> basis.
class SpinSystem {
 public:
  explicit SpinSystem(Spin spin);

  Spin spin() const noexcept { return spin_; }
  int dimension() const noexcept { return spin_.dimension(); }
  // i in {1, 2, 3}.
  const ComplexMatrix& component(int i) const;
  const ComplexMatrix& c1() const noexcept { return components_[0]; }
  const ComplexMatrix& c2() const noexcept { return components_[1]; }
  const ComplexMatrix& c3() const noexcept { return components_[2]; }
  double bloch_radius() const noexcept { return qslspin::bloch_radius(spin_); }

 private:
  Spin spin_;
  std::array<ComplexMatrix, 3> components_;
};

// d^2 trace-orthogonal Hermitian matrices: C_0 = I, C_1..C_3 the spin
// components, then a Gram-Schmidt completion over generalized Gell-Mann
// matrices (unit Hilbert-Schmidt norm). Built on each call.
std::vector<ComplexMatrix> hermitian_basis(const SpinSystem& sys);

SpinSystem make_spin_system(double s);

// A density matrix: Hermitian, unit trace, positive semidefinite.
class QuantumState {
 public:
  struct Tolerances {
    double trace = 1e-13;
    double hermiticity = 1e-13;
    double min_eigenvalue = -1e-12;
  };

  // Validates every invariant; throws Error(InvalidParameter).
  static QuantumState from_matrix(ComplexMatrix rho, Tolerances tol);
  static QuantumState from_matrix(ComplexMatrix rho) { return from_matrix(std::move(rho), {}); }
  // |psi><psi| for a normalized (or normalizable) nonzero vector.
  static QuantumState pure(const ComplexVector& psi);
  // rho_{jj} = 1 for basis index j (0 is |S, S>).
  static QuantumState basis_state(const SpinSystem& sys, int index);
  static QuantumState highest_weight(const SpinSystem& sys) { return basis_state(sys, 0); }
  static QuantumState maximally_mixed(const SpinSystem& sys);
  // For matrices produced by exactly unitary maps of a valid state; skips the
  // eigenvalue check. Callers own the invariant.
  static QuantumState from_unitary_image(ComplexMatrix rho);

  const ComplexMatrix& matrix() const noexcept { return rho_; }
  int dimension() const noexcept { return static_cast<int>(rho_.rows()); }
  double purity() const;
  // <O> = Tr(rho O) (real part; O assumed Hermitian).
  double expectation(const ComplexMatrix& op) const;

 private:
  explicit QuantumState(ComplexMatrix rho) : rho_(std::move(rho)) {}
  ComplexMatrix rho_;
};

struct CoherenceVector {
  Vector3 r = Vector3::Zero();
  double bloch_radius = 0.0;

  double norm() const { return r.norm(); }
};

// (Tr rho C_1, Tr rho C_2, Tr rho C_3).
Vector3 spin_expectations(const QuantumState& rho, const SpinSystem& sys);

// R_i = sqrt(3/(S(S+1))) Tr(rho C_i); puts |S,S> at radius r_B.
CoherenceVector coherence_vector(const QuantumState& rho, const SpinSystem& sys);

ComplexMatrix commutator(const ComplexMatrix& a, const ComplexMatrix& b);

}  // namespace spin
}  // namespace qslspin
