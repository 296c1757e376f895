#include "qslspin/spin_algebra.hpp"

#include <cmath>
#include <complex>
#include <string>

#include "qslspin/errors.hpp"

namespace qslspin {

Spin Spin::from_twice(int twice_s) {
  if (twice_s < 1 || twice_s > kMaxTwice) {
    throw Error(ErrorCode::InvalidSpin,
                "spin must satisfy 1/2 <= S <= 10, got 2S = " + std::to_string(twice_s));
  }
  return Spin(twice_s);
}

Spin Spin::from_value(double s) {
  const double twice = 2.0 * s;
  if (!std::isfinite(twice) || std::abs(twice - std::round(twice)) > 1e-12) {
    throw Error(ErrorCode::InvalidSpin, "spin must be a half-integer, got " + std::to_string(s));
  }
  return from_twice(static_cast<int>(std::lround(twice)));
}

double bloch_radius(Spin spin) noexcept {
  const double s = spin.value();
  return std::sqrt(3.0 * s / (s + 1.0));
}

namespace spin {

namespace {

using cd = std::complex<double>;

double hs_inner(const ComplexMatrix& a, const ComplexMatrix& b) {
  return (a.adjoint() * b).trace().real();
}

// Generalized Gell-Mann matrices: symmetric, antisymmetric and diagonal.
std::vector<ComplexMatrix> gell_mann(int d) {
  std::vector<ComplexMatrix> out;
  for (int j = 0; j < d; ++j) {
    for (int k = j + 1; k < d; ++k) {
      ComplexMatrix sym = ComplexMatrix::Zero(d, d);
      sym(j, k) = sym(k, j) = 1.0;
      out.push_back(sym);
      ComplexMatrix anti = ComplexMatrix::Zero(d, d);
      anti(j, k) = cd(0.0, -1.0);
      anti(k, j) = cd(0.0, 1.0);
      out.push_back(anti);
    }
  }
  for (int l = 1; l < d; ++l) {
    ComplexMatrix diag = ComplexMatrix::Zero(d, d);
    for (int j = 0; j < l; ++j) diag(j, j) = 1.0;
    diag(l, l) = -static_cast<double>(l);
    out.push_back(diag);
  }
  return out;
}

}  // namespace

SpinSystem::SpinSystem(Spin spin) : spin_(spin) {
  const int d = spin.dimension();
  const double s = spin.value();
  ComplexMatrix raise = ComplexMatrix::Zero(d, d);
  ComplexMatrix c3 = ComplexMatrix::Zero(d, d);
  for (int j = 0; j < d; ++j) {
    const double m = s - j;
    c3(j, j) = m;
    if (j > 0) {
      // C+ |m> = sqrt(S(S+1) - m(m+1)) |m+1>; |m+1> sits at index j-1.
      raise(j - 1, j) = std::sqrt(s * (s + 1.0) - m * (m + 1.0));
    }
  }
  const ComplexMatrix lower = raise.adjoint();
  components_[0] = 0.5 * (raise + lower);
  components_[1] = cd(0.0, -0.5) * (raise - lower);
  components_[2] = c3;
}

std::vector<ComplexMatrix> hermitian_basis(const SpinSystem& sys) {
  const int d = sys.dimension();
  std::vector<ComplexMatrix> basis;
  basis.reserve(static_cast<std::size_t>(d) * d);
  basis.push_back(ComplexMatrix::Identity(d, d));
  basis.push_back(sys.c1());
  basis.push_back(sys.c2());
  basis.push_back(sys.c3());
  for (const ComplexMatrix& candidate : gell_mann(d)) {
    if (static_cast<int>(basis.size()) == d * d) break;
    ComplexMatrix v = candidate;
    for (const ComplexMatrix& b : basis) {
      v -= (hs_inner(b, v) / hs_inner(b, b)) * b;
    }
    const double norm2 = hs_inner(v, v);
    if (norm2 < 1e-10) continue;
    basis.push_back(v / std::sqrt(norm2));
  }
  return basis;
}

const ComplexMatrix& SpinSystem::component(int i) const {
  if (i < 1 || i > 3) {
    throw Error(ErrorCode::InvalidParameter, "spin component index must be 1, 2 or 3");
  }
  return components_[static_cast<std::size_t>(i - 1)];
}

SpinSystem make_spin_system(double s) { return SpinSystem(Spin::from_value(s)); }

QuantumState QuantumState::from_matrix(ComplexMatrix rho, Tolerances tol) {
  if (rho.rows() != rho.cols() || rho.rows() == 0) {
    throw Error(ErrorCode::DimensionMismatch, "density matrix must be square and nonempty");
  }
  if ((rho - rho.adjoint()).cwiseAbs().maxCoeff() > tol.hermiticity) {
    throw Error(ErrorCode::InvalidParameter, "density matrix is not Hermitian");
  }
  if (std::abs(rho.trace() - cd(1.0, 0.0)) > tol.trace) {
    throw Error(ErrorCode::InvalidParameter, "density matrix trace differs from 1");
  }
  const ComplexMatrix hermitian = 0.5 * (rho + rho.adjoint());
  Eigen::SelfAdjointEigenSolver<ComplexMatrix> eig(hermitian, Eigen::EigenvaluesOnly);
  if (eig.eigenvalues().minCoeff() < tol.min_eigenvalue) {
    throw Error(ErrorCode::InvalidParameter, "density matrix is not positive semidefinite");
  }
  return QuantumState(hermitian);
}

QuantumState QuantumState::pure(const ComplexVector& psi) {
  const double norm = psi.norm();
  if (!(norm > 0.0)) {
    throw Error(ErrorCode::InvalidParameter, "pure state vector must be nonzero");
  }
  const ComplexVector unit = psi / norm;
  return QuantumState(unit * unit.adjoint());
}

QuantumState QuantumState::basis_state(const SpinSystem& sys, int index) {
  const int d = sys.dimension();
  if (index < 0 || index >= d) {
    throw Error(ErrorCode::DimensionMismatch, "basis index out of range");
  }
  ComplexMatrix rho = ComplexMatrix::Zero(d, d);
  rho(index, index) = 1.0;
  return QuantumState(rho);
}

QuantumState QuantumState::maximally_mixed(const SpinSystem& sys) {
  const int d = sys.dimension();
  return QuantumState(ComplexMatrix::Identity(d, d) / static_cast<double>(d));
}

QuantumState QuantumState::from_unitary_image(ComplexMatrix rho) { return QuantumState(std::move(rho)); }

double QuantumState::purity() const { return (rho_ * rho_).trace().real(); }

double QuantumState::expectation(const ComplexMatrix& op) const {
  if (op.rows() != rho_.rows() || op.cols() != rho_.cols()) {
    throw Error(ErrorCode::DimensionMismatch, "operator and state dimensions differ");
  }
  // Tr(rho O) without forming the product.
  return rho_.cwiseProduct(op.transpose()).sum().real();
}

Vector3 spin_expectations(const QuantumState& rho, const SpinSystem& sys) {
  if (rho.dimension() != sys.dimension()) {
    throw Error(ErrorCode::DimensionMismatch, "state dimension differs from spin system");
  }
  return {rho.expectation(sys.c1()), rho.expectation(sys.c2()), rho.expectation(sys.c3())};
}

CoherenceVector coherence_vector(const QuantumState& rho, const SpinSystem& sys) {
  const double scale = std::sqrt(3.0 / sys.spin().casimir());
  return {scale * spin_expectations(rho, sys), sys.bloch_radius()};
}

ComplexMatrix commutator(const ComplexMatrix& a, const ComplexMatrix& b) { return a * b - b * a; }

}  // namespace spin
}  // namespace qslspin
