#include "qslspin/dynamics.hpp"

#include <algorithm>
#include <cmath>
#include <complex>
#include <string>

#include "qslspin/errors.hpp"
#include "qslspin/kernels.hpp"

namespace qslspin::dynamics {

namespace {

using cd = std::complex<double>;

constexpr double kRelativeMatch = 1e-12;

bool nearly_equal(double a, double b) {
  return std::abs(a - b) <= kRelativeMatch * std::max({1.0, std::abs(a), std::abs(b)});
}

ComplexMatrix exp_minus_i(const ComplexMatrix& hermitian, double dt) {
  Eigen::SelfAdjointEigenSolver<ComplexMatrix> eig(hermitian);
  const Eigen::VectorXd& values = eig.eigenvalues();
  ComplexVector phases(values.size());
  for (Eigen::Index i = 0; i < values.size(); ++i) {
    phases(i) = std::polar(1.0, -dt * values(i));
  }
  const ComplexMatrix& v = eig.eigenvectors();
  return v * phases.asDiagonal() * v.adjoint();
}

void record(Trajectory& traj, double t, const ComplexMatrix& rho) {
  traj.times.push_back(t);
  traj.states.push_back(spin::QuantumState::from_unitary_image(rho));
  traj.coherence.push_back(spin::coherence_vector(traj.states.back(), traj.system));
}

double spectral_norm_hermitian(const ComplexMatrix& m) {
  Eigen::SelfAdjointEigenSolver<ComplexMatrix> eig(m, Eigen::EigenvaluesOnly);
  return eig.eigenvalues().cwiseAbs().maxCoeff();
}

}  // namespace

FieldParams FieldParams::make(double h1, double h2, double H, double omega, double k) {
  if (!(h1 >= 0.0 && h2 >= 0.0 && H >= 0.0) || !std::isfinite(h1 + h2 + H)) {
    throw Error(ErrorCode::InvalidParameter, "field amplitudes must be finite and nonnegative");
  }
  if (!(omega > 0.0) || !std::isfinite(omega)) {
    throw Error(ErrorCode::InvalidParameter, "field frequency must be positive");
  }
  return FieldParams{h1, h2, H, omega, elliptic::EllipticModulus(k)};
}

FieldParams FieldParams::consistent_field(double h, double H, double omega, double k) {
  return make(h, h, H, omega, k);
}

bool FieldParams::consistent() const noexcept { return nearly_equal(h1, h2); }

bool FieldParams::resonant() const noexcept { return nearly_equal(H, omega); }

double FieldParams::fastest_rate() const noexcept { return std::max({h1, h2, H, omega}); }

Vector3 field_at(double t, const FieldParams& p) {
  const auto f = elliptic::jacobi_sncndn(p.omega * t, p.k);
  return {p.h1 * f.cn, p.h2 * f.sn, p.H * f.dn};
}

std::vector<Vector3> field_on_grid(std::span<const double> times, const FieldParams& p) {
  const std::size_t n = times.size();
  std::vector<double> u(n), sn(n), cn(n), dn(n);
  for (std::size_t i = 0; i < n; ++i) u[i] = p.omega * times[i];
  kernels::sncndn_batch(u, p.k.k(), sn, cn, dn);
  std::vector<Vector3> out(n);
  for (std::size_t i = 0; i < n; ++i) out[i] = {p.h1 * cn[i], p.h2 * sn[i], p.H * dn[i]};
  return out;
}

ComplexMatrix hamiltonian_from_field(const Vector3& field, const spin::SpinSystem& sys) {
  return field(0) * sys.c1() + field(1) * sys.c2() + field(2) * sys.c3();
}

ComplexMatrix hamiltonian_at(double t, const FieldParams& p, const spin::SpinSystem& sys) {
  return hamiltonian_from_field(field_at(t, p), sys);
}

int default_step_count(const FieldParams& p, double t_end) {
  const double n = std::ceil(100.0 * std::abs(t_end) * p.fastest_rate());
  return std::max(1, static_cast<int>(n));
}

ComplexMatrix midpoint_step(const FieldParams& p, const spin::SpinSystem& sys, double t_mid,
                            double dt) {
  return exp_minus_i(hamiltonian_at(t_mid, p, sys), dt);
}

Trajectory propagate_segment(const spin::QuantumState& rho0, const FieldParams& p,
                             const spin::SpinSystem& sys, double t_start, double t_end, int n_steps,
                             int record_stride) {
  if (n_steps < 1 || record_stride < 1) {
    throw Error(ErrorCode::InvalidGrid, "n_steps and record_stride must be positive");
  }
  if (!std::isfinite(t_start) || !std::isfinite(t_end)) {
    throw Error(ErrorCode::InvalidGrid, "propagation interval must be finite");
  }
  if (rho0.dimension() != sys.dimension()) {
    throw Error(ErrorCode::DimensionMismatch, "initial state dimension differs from spin system");
  }
  const double dt = (t_end - t_start) / n_steps;
  std::vector<double> midpoints(static_cast<std::size_t>(n_steps));
  for (int j = 0; j < n_steps; ++j) midpoints[j] = t_start + (j + 0.5) * dt;
  const std::vector<Vector3> fields = field_on_grid(midpoints, p);

  Trajectory traj{{}, {}, {}, p, sys};
  const std::size_t expected = static_cast<std::size_t>(n_steps / record_stride + 2);
  traj.times.reserve(expected);
  traj.states.reserve(expected);
  traj.coherence.reserve(expected);

  ComplexMatrix rho = rho0.matrix();
  record(traj, t_start, rho);
  for (int j = 0; j < n_steps; ++j) {
    const ComplexMatrix u = exp_minus_i(hamiltonian_from_field(fields[j], sys), dt);
    rho = (u * rho * u.adjoint()).eval();
    rho = 0.5 * (rho + rho.adjoint()).eval();
    const int done = j + 1;
    if (done % record_stride == 0 || done == n_steps) {
      const double t = (done == n_steps) ? t_end : t_start + done * dt;
      record(traj, t, rho);
    }
  }
  return traj;
}

Trajectory propagate_numeric(const spin::QuantumState& rho0, const FieldParams& p,
                             const spin::SpinSystem& sys, double t_end, int n_steps,
                             int record_stride) {
  if (!(t_end > 0.0)) {
    throw Error(ErrorCode::InvalidGrid, "t_end must be positive");
  }
  return propagate_segment(rho0, p, sys, 0.0, t_end, n_steps, record_stride);
}

AlphaPropagator::AlphaPropagator(const FieldParams& p, const spin::SpinSystem& sys,
                                 std::span<const double> probe_grid)
    : field_(p), system_(sys) {
  if (probe_grid.empty()) {
    throw Error(ErrorCode::InvalidGrid, "alpha propagator needs a nonempty probe grid");
  }
  h0_ = transformed_hamiltonian(0.0);
  h0_ = 0.5 * (h0_ + h0_.adjoint()).eval();
  for (double t : probe_grid) {
    const ComplexMatrix diff = transformed_hamiltonian(t) - h0_;
    max_deviation_ = std::max(max_deviation_, spectral_norm_hermitian(0.5 * (diff + diff.adjoint())));
  }
  validity_ = max_deviation_ <= kConstancyTolerance ? AlphaValidity::Exact
                                                    : AlphaValidity::NotApplicable;
  Eigen::SelfAdjointEigenSolver<ComplexMatrix> eig(h0_);
  h0_values_ = eig.eigenvalues();
  h0_vectors_ = eig.eigenvectors();
}

ComplexVector AlphaPropagator::alpha(double t) const {
  const int d = system_.dimension();
  const double s = system_.spin().value();
  ComplexVector diag(d);
  for (int j = 0; j < d; ++j) {
    const auto f = elliptic::jacobi_sncndn((s - j) * field_.omega * t, field_.k);
    diag(j) = cd(f.cn, f.sn);
  }
  return diag;
}

ComplexMatrix AlphaPropagator::transformed_hamiltonian(double t) const {
  const int d = system_.dimension();
  const double s = system_.spin().value();
  const ComplexVector a = alpha(t);
  ComplexMatrix h = hamiltonian_at(t, field_, system_);
  for (int j = 0; j < d; ++j) {
    for (int l = 0; l < d; ++l) h(j, l) *= a(j) * std::conj(a(l));
  }
  // d/dt f(m) = i m w dn(m w t) f(m), so -i alpha d/dt alpha^-1 = -diag(m w dn(m w t)).
  for (int j = 0; j < d; ++j) {
    const double m = s - j;
    const auto f = elliptic::jacobi_sncndn(m * field_.omega * t, field_.k);
    h(j, j) -= m * field_.omega * f.dn;
  }
  return h;
}

ComplexMatrix AlphaPropagator::unitary(double t) const {
  if (validity_ != AlphaValidity::Exact) {
    throw Error(ErrorCode::NotApplicable,
                "transformed Hamiltonian is time dependent; alpha propagator is not exact");
  }
  ComplexVector phases(h0_values_.size());
  for (Eigen::Index i = 0; i < h0_values_.size(); ++i) phases(i) = std::polar(1.0, -t * h0_values_(i));
  const ComplexMatrix evolution = h0_vectors_ * phases.asDiagonal() * h0_vectors_.adjoint();
  return alpha(t).conjugate().asDiagonal() * evolution;
}

Trajectory AlphaPropagator::evolve(const spin::QuantumState& rho0,
                                   std::span<const double> times) const {
  if (rho0.dimension() != system_.dimension()) {
    throw Error(ErrorCode::DimensionMismatch, "initial state dimension differs from spin system");
  }
  Trajectory traj{{}, {}, {}, field_, system_};
  traj.times.reserve(times.size());
  traj.states.reserve(times.size());
  traj.coherence.reserve(times.size());
  for (double t : times) {
    const ComplexMatrix u = unitary(t);
    ComplexMatrix rho = u * rho0.matrix() * u.adjoint();
    record(traj, t, 0.5 * (rho + rho.adjoint()));
  }
  return traj;
}

AlphaPropagator build_alpha_propagator(const FieldParams& p, const spin::SpinSystem& sys,
                                       std::span<const double> probe_grid) {
  return AlphaPropagator(p, sys, probe_grid);
}

bool analytic_resonance_applicable(const FieldParams& p, Spin spin) noexcept {
  return p.consistent() && p.resonant() && (spin.twice() <= 2 || p.k.k() == 0.0);
}

spin::CoherenceVector analytic_resonance_spin(double t, const FieldParams& p,
                                              const spin::SpinSystem& sys) {
  if (!analytic_resonance_applicable(p, sys.spin())) {
    throw Error(ErrorCode::NotApplicable,
                "resonance closed form needs a consistent resonant field and S <= 1 or k = 0");
  }
  const double r_b = sys.bloch_radius();
  const auto f = elliptic::jacobi_sncndn(p.omega * t, p.k);
  const double nutation = p.h() * t;
  const double sine = std::sin(nutation);
  return {Vector3(r_b * f.sn * sine, -r_b * f.cn * sine, r_b * std::cos(nutation)), r_b};
}

}  // namespace qslspin::dynamics
