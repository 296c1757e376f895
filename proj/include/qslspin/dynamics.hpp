#pragma once

#include <span>
#include <vector>

#include "qslspin/elliptic.hpp"
#include "qslspin/spin_algebra.hpp"

namespace qslspin::dynamics {

// Driving field h(t) = (h1 cn(wt|k), h2 sn(wt|k), H dn(wt|k)) in frequency
// units; the magnetic moment and hbar are 1.
struct FieldParams {
  double h1 = 0.0;
  double h2 = 0.0;
  double H = 0.0;
  double omega = 1.0;
  elliptic::EllipticModulus k{0.0};

  // Throws Error(InvalidParameter) for negative amplitudes or omega <= 0.
  static FieldParams make(double h1, double h2, double H, double omega, double k);
  // h1 = h2 = h.
  static FieldParams consistent_field(double h, double H, double omega, double k);

  // Detuning H - omega.
  double delta() const noexcept { return H - omega; }
  bool consistent() const noexcept;
  bool resonant() const noexcept;
  // Transverse amplitude of a consistent field.
  double h() const noexcept { return h1; }
  double fastest_rate() const noexcept;
};

Vector3 field_at(double t, const FieldParams& p);
// Batched over a time grid through the sn/cn/dn kernels.
std::vector<Vector3> field_on_grid(std::span<const double> times, const FieldParams& p);

ComplexMatrix hamiltonian_from_field(const Vector3& field, const spin::SpinSystem& sys);
ComplexMatrix hamiltonian_at(double t, const FieldParams& p, const spin::SpinSystem& sys);

struct Trajectory {
  std::vector<double> times;
  std::vector<spin::QuantumState> states;
  std::vector<spin::CoherenceVector> coherence;
  FieldParams field;
  spin::SpinSystem system;

  std::size_t size() const noexcept { return times.size(); }
};

// ceil(100 * t_end * max(h1, h2, H, omega)), at least 1.
int default_step_count(const FieldParams& p, double t_end);

// exp(-i dt H(t_mid)) through the eigendecomposition of H(t_mid).
ComplexMatrix midpoint_step(const FieldParams& p, const spin::SpinSystem& sys, double t_mid,
                            double dt);

// Second-order exponential midpoint scheme on a uniform grid. Records every
// record_stride-th step plus the final one. t_end may precede t_start.
Trajectory propagate_segment(const spin::QuantumState& rho0, const FieldParams& p,
                             const spin::SpinSystem& sys, double t_start, double t_end, int n_steps,
                             int record_stride = 1);
Trajectory propagate_numeric(const spin::QuantumState& rho0, const FieldParams& p,
                             const spin::SpinSystem& sys, double t_end, int n_steps,
                             int record_stride = 1);

enum class AlphaValidity { Exact, NotApplicable };

// U = alpha(t)^-1 exp(-i t h0) with alpha = diag(f(S), ..., f(-S)),
// f(m) = cn(m w t|k) + i sn(m w t|k), and h0 the transformed Hamiltonian
// alpha H alpha^-1 - i alpha d/dt alpha^-1 at t = 0. The transformed
// Hamiltonian is checked for constancy on a probe grid.
class AlphaPropagator {
 public:
  static constexpr double kConstancyTolerance = 1e-8;

  AlphaPropagator(const FieldParams& p, const spin::SpinSystem& sys,
                  std::span<const double> probe_grid);

  AlphaValidity validity() const noexcept { return validity_; }
  // max over the probe grid of the spectral norm of h(t) - h(0).
  double max_deviation() const noexcept { return max_deviation_; }
  const ComplexMatrix& h0() const noexcept { return h0_; }

  // Diagonal entries of alpha(t).
  ComplexVector alpha(double t) const;
  ComplexMatrix transformed_hamiltonian(double t) const;
  // Throws Error(NotApplicable) unless validity() == Exact.
  ComplexMatrix unitary(double t) const;
  Trajectory evolve(const spin::QuantumState& rho0, std::span<const double> times) const;

 private:
  FieldParams field_;
  spin::SpinSystem system_;
  AlphaValidity validity_ = AlphaValidity::NotApplicable;
  double max_deviation_ = 0.0;
  ComplexMatrix h0_;
  ComplexMatrix h0_vectors_;
  Eigen::VectorXd h0_values_;
};

AlphaPropagator build_alpha_propagator(const FieldParams& p, const spin::SpinSystem& sys,
                                       std::span<const double> probe_grid);

// Closed form at resonance from |S, S>:
//   R = r_B (sn(wt|k) sin ht, -cn(wt|k) sin ht, cos ht).
// Requires a consistent, resonant field and (S <= 1 or k = 0); otherwise
// throws Error(NotApplicable).
spin::CoherenceVector analytic_resonance_spin(double t, const FieldParams& p,
                                              const spin::SpinSystem& sys);
bool analytic_resonance_applicable(const FieldParams& p, Spin spin) noexcept;

}  // namespace qslspin::dynamics
