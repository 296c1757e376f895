#pragma once

#include <array>
#include <cstddef>
#include <span>

#include <Eigen/Core>

#include "qslspin/dynamics.hpp"
#include "qslspin/geometry.hpp"
#include "qslspin/spin_algebra.hpp"

namespace qslspin::uncertainty {

// Round-off below zero down to this depth is clamped before square roots.
inline constexpr double kVarianceClamp = 1e-12;

struct CovarianceReport {
  Eigen::Matrix3d cov = Eigen::Matrix3d::Zero();
  Vector3 eigenvalues = Vector3::Zero();  // descending
  Vector3 std_devs = Vector3::Zero();
  double sum_of_variances = 0.0;
  int clamped = 0;  // diagonal entries clamped to 0
};

// Cov(S_i, S_k) = Tr[rho (C_i C_k + C_k C_i)] / 2 - <C_i><C_k>.
CovarianceReport covariance(const spin::QuantumState& rho, const spin::SpinSystem& sys);

struct DeviationCurve {
  geometry::Curve3D curve;  // (dS1, dS2, dS3)(t)
  // Whether the sum rule sum dS_i^2 = S is expected: consistent resonant
  // field with k = 0 (any S) or S <= 1.
  bool conservation_applicable = false;
};

DeviationCurve deviation_curve(const dynamics::Trajectory& traj);

// k = 0 resonance closed form from |S, S>:
//   (1/2) sqrt(S/2) (sqrt(3 + cos 2ht + 2 sin^2 ht cos 2wt),
//                    sqrt(3 + cos 2ht - 2 sin^2 ht cos 2wt), 2 |sin ht|).
// Throws Error(NotApplicable) off resonance or for k != 0.
Vector3 deviation_closed_form(double t, const dynamics::FieldParams& p, Spin s);

struct Means {
  double harmonic = 0.0;
  double geometric = 0.0;
  double arithmetic = 0.0;
};

// Means of two or three standard deviations; HM = 0 when any is 0. Throws
// Error(InvalidParameter) for other sizes or negative entries.
Means product_bounds(std::span<const double> std_devs);

struct UncertaintyReport {
  Vector3 std_devs = Vector3::Zero();
  Eigen::Matrix3d mutual = Eigen::Matrix3d::Zero();                // M(S_i : S_k)
  Eigen::Matrix3d conditional = Eigen::Matrix3d::Zero();           // Delta(S_i | S_k)
  Eigen::Matrix3d conditional_variance = Eigen::Matrix3d::Zero();  // Var(S_i | S_k)
  // Variance of C_i + C_k taken directly from the operator.
  Eigen::Matrix3d sum_variance = Eigen::Matrix3d::Zero();
  int clamped = 0;
};

//   M(S_i:S_k)   = dS_i + dS_k - d(S_i + S_k)
//   D(S_i|S_k)   = d(S_i + S_k) - dS_k
//   Var(S_i|S_k) = Var(S_i + S_k) - Var S_k
// with indices 0..2 for S_1..S_3.
UncertaintyReport conditional_measures(const spin::QuantumState& rho, const spin::SpinSystem& sys);

// Var(S_i) + 2 Cov(S_i, S_k), the same conditional variance from covariance
// entries.
double conditional_variance_from_covariance(const Eigen::Matrix3d& cov, int i, int k);

}  // namespace qslspin::uncertainty
