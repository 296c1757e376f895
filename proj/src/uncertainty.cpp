#include "qslspin/uncertainty.hpp"

#include <Eigen/Eigenvalues>
#include <algorithm>
#include <cmath>

#include "qslspin/errors.hpp"

namespace qslspin::uncertainty {

namespace {

double clamped_sqrt(double variance, int& clamped) {
  if (variance < 0.0) {
    ++clamped;
    return 0.0;
  }
  return std::sqrt(variance);
}

void require_same_dimension(const spin::QuantumState& rho, const spin::SpinSystem& sys) {
  if (rho.dimension() != sys.dimension()) {
    throw Error(ErrorCode::DimensionMismatch, "state dimension differs from spin system");
  }
}

double operator_variance(const spin::QuantumState& rho, const ComplexMatrix& op) {
  const double mean = rho.expectation(op);
  return rho.expectation(op * op) - mean * mean;
}

}  // namespace

CovarianceReport covariance(const spin::QuantumState& rho, const spin::SpinSystem& sys) {
  require_same_dimension(rho, sys);
  CovarianceReport rep;
  const Vector3 mean = spin::spin_expectations(rho, sys);
  for (int i = 0; i < 3; ++i) {
    for (int k = i; k < 3; ++k) {
      const ComplexMatrix& a = sys.component(i + 1);
      const ComplexMatrix& b = sys.component(k + 1);
      const double sym = 0.5 * rho.expectation(a * b + b * a);
      rep.cov(i, k) = rep.cov(k, i) = sym - mean(i) * mean(k);
    }
  }
  Eigen::SelfAdjointEigenSolver<Eigen::Matrix3d> eig(rep.cov, Eigen::EigenvaluesOnly);
  rep.eigenvalues = eig.eigenvalues().reverse();
  for (int i = 0; i < 3; ++i) rep.std_devs(i) = clamped_sqrt(rep.cov(i, i), rep.clamped);
  rep.sum_of_variances = rep.cov.trace();
  return rep;
}

DeviationCurve deviation_curve(const dynamics::Trajectory& traj) {
  DeviationCurve out;
  out.curve.times = traj.times;
  out.curve.points.reserve(traj.size());
  for (const auto& state : traj.states) {
    out.curve.points.push_back(covariance(state, traj.system).std_devs);
  }
  out.conservation_applicable = dynamics::analytic_resonance_applicable(traj.field, traj.system.spin());
  return out;
}

Vector3 deviation_closed_form(double t, const dynamics::FieldParams& p, Spin s) {
  if (!p.consistent() || !p.resonant() || p.k.k() != 0.0) {
    throw Error(ErrorCode::NotApplicable,
                "deviation closed form holds for a consistent resonant field at k = 0");
  }
  const double ht = p.h() * t;
  const double sin_ht = std::sin(ht);
  const double cross = 2.0 * sin_ht * sin_ht * std::cos(2.0 * p.omega * t);
  const double base = 3.0 + std::cos(2.0 * ht);
  const double scale = 0.5 * std::sqrt(0.5 * s.value());
  return scale * Vector3(std::sqrt(std::max(0.0, base + cross)),
                         std::sqrt(std::max(0.0, base - cross)), 2.0 * std::abs(sin_ht));
}

Means product_bounds(std::span<const double> d) {
  if (d.size() != 2 && d.size() != 3) {
    throw Error(ErrorCode::InvalidParameter, "product bounds take two or three deviations");
  }
  const double n = static_cast<double>(d.size());
  double sum = 0.0, product = 1.0, inverse_sum = 0.0;
  bool has_zero = false;
  for (double x : d) {
    if (!(x >= 0.0)) {
      throw Error(ErrorCode::InvalidParameter, "standard deviations must be nonnegative");
    }
    sum += x;
    product *= x;
    if (x == 0.0) {
      has_zero = true;
    } else {
      inverse_sum += 1.0 / x;
    }
  }
  Means m;
  m.arithmetic = sum / n;
  m.geometric = std::pow(product, 1.0 / n);
  m.harmonic = has_zero ? 0.0 : n / inverse_sum;
  return m;
}

UncertaintyReport conditional_measures(const spin::QuantumState& rho, const spin::SpinSystem& sys) {
  require_same_dimension(rho, sys);
  UncertaintyReport rep;
  Vector3 variance;
  for (int i = 0; i < 3; ++i) {
    variance(i) = operator_variance(rho, sys.component(i + 1));
    rep.std_devs(i) = clamped_sqrt(variance(i), rep.clamped);
  }
  for (int i = 0; i < 3; ++i) {
    for (int k = 0; k < 3; ++k) {
      const ComplexMatrix sum = sys.component(i + 1) + sys.component(k + 1);
      const double var_sum = operator_variance(rho, sum);
      const double dev_sum = clamped_sqrt(var_sum, rep.clamped);
      rep.sum_variance(i, k) = var_sum;
      rep.mutual(i, k) = rep.std_devs(i) + rep.std_devs(k) - dev_sum;
      rep.conditional(i, k) = dev_sum - rep.std_devs(k);
      rep.conditional_variance(i, k) = var_sum - variance(k);
    }
  }
  return rep;
}

double conditional_variance_from_covariance(const Eigen::Matrix3d& cov, int i, int k) {
  if (i < 0 || i > 2 || k < 0 || k > 2) {
    throw Error(ErrorCode::InvalidParameter, "component index must be 0, 1 or 2");
  }
  return cov(i, i) + 2.0 * cov(i, k);
}

}  // namespace qslspin::uncertainty
