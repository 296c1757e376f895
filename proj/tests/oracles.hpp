#pragma once

// Reference implementations used only by the tests. They share no code with
// the library: quadrature is double-exponential (tanh-sinh) instead of
// Gauss-Kronrod, Jacobi functions come from inverting the first-kind
// integral, and time evolution is classical RK4 on the state vector.

#include <algorithm>
#include <array>
#include <cmath>
#include <complex>
#include <functional>
#include <numbers>

#include <Eigen/Dense>

namespace oracle {

inline constexpr double kPi = std::numbers::pi;

// tanh-sinh on [a, b], refined until two levels agree to `tol` (relative).
template <class F>
double tanh_sinh(F&& f, double a, double b, double tol = 1e-15) {
  if (a == b) return 0.0;
  if (b < a) return -tanh_sinh(f, b, a, tol);
  const double c = 0.5 * (a + b);
  const double half = 0.5 * (b - a);
  const double t_max = 3.5;
  auto node_sum = [&](double t) {
    const double s = 0.5 * kPi * std::sinh(t);
    const double ch = std::cosh(s);
    const double w = 0.5 * kPi * std::cosh(t) / (ch * ch);
    const double x = std::tanh(s);
    return w * (f(c + half * x) + f(c - half * x));
  };
  double h = 0.5;
  double sum = 0.5 * kPi * f(c);
  for (double t = h; t <= t_max; t += h) sum += node_sum(t);
  double estimate = h * sum * half;
  for (int level = 0; level < 14; ++level) {
    h *= 0.5;
    for (double t = h; t <= t_max; t += 2.0 * h) sum += node_sum(t);
    const double next = h * sum * half;
    if (std::abs(next - estimate) <= tol * std::max(1.0, std::abs(next)) && level >= 2) return next;
    estimate = next;
  }
  return estimate;
}

// Splits long intervals so each piece spans at most a quarter period.
template <class F>
double integrate_pieces(F&& f, double a, double b) {
  const int pieces = std::max(1, static_cast<int>(std::ceil(std::abs(b - a) / (0.5 * kPi))));
  double total = 0.0;
  for (int i = 0; i < pieces; ++i) {
    const double lo = a + (b - a) * i / pieces;
    const double hi = a + (b - a) * (i + 1) / pieces;
    total += tanh_sinh(f, lo, hi);
  }
  return total;
}

inline double E(double phi, double m) {
  return integrate_pieces([m](double v) { return std::sqrt(1.0 - m * std::sin(v) * std::sin(v)); },
                          0.0, phi);
}

inline double F(double phi, double m) {
  return integrate_pieces(
      [m](double v) { return 1.0 / std::sqrt(1.0 - m * std::sin(v) * std::sin(v)); }, 0.0, phi);
}

inline double K(double k) { return F(0.5 * kPi, k * k); }

struct SnCnDn {
  double sn, cn, dn;
};

// Amplitude am(u|k) by Newton on F(phi|k^2) = u after reducing u by 2K.
// Meant for k <= 0.95 and moderate |u|.
inline SnCnDn sncndn(double u, double k) {
  const double m = k * k;
  const double quarter = K(k);
  const double n = std::round(u / (2.0 * quarter));
  const double r = u - 2.0 * quarter * n;
  double phi = r * 0.5 * kPi / quarter;
  for (int it = 0; it < 60; ++it) {
    const double step = (F(phi, m) - r) * std::sqrt(1.0 - m * std::sin(phi) * std::sin(phi));
    phi -= step;
    if (std::abs(step) < 1e-16) break;
  }
  const double am = n * kPi + phi;
  const double s = std::sin(am);
  return {s, std::cos(am), std::sqrt(1.0 - m * s * s)};
}

// Spin matrices written out explicitly for S = 1/2 and S = 1.
inline std::array<Eigen::MatrixXcd, 3> spin_half() {
  using cd = std::complex<double>;
  Eigen::MatrixXcd x(2, 2), y(2, 2), z(2, 2);
  x << 0, 0.5, 0.5, 0;
  y << 0, cd(0, -0.5), cd(0, 0.5), 0;
  z << 0.5, 0, 0, -0.5;
  return {x, y, z};
}

inline std::array<Eigen::MatrixXcd, 3> spin_one() {
  using cd = std::complex<double>;
  const double a = 1.0 / std::sqrt(2.0);
  Eigen::MatrixXcd x(3, 3), y(3, 3), z(3, 3);
  x << 0, a, 0, a, 0, a, 0, a, 0;
  y << 0, cd(0, -a), 0, cd(0, a), 0, cd(0, -a), 0, cd(0, a), 0;
  z << 1, 0, 0, 0, 0, 0, 0, 0, -1;
  return {x, y, z};
}

// Classical RK4 for i psi' = H(t) psi.
inline Eigen::VectorXcd rk4(const std::function<Eigen::MatrixXcd(double)>& hamiltonian,
                            Eigen::VectorXcd psi, double t0, double t1, int steps) {
  const std::complex<double> minus_i(0.0, -1.0);
  const double dt = (t1 - t0) / steps;
  for (int j = 0; j < steps; ++j) {
    const double t = t0 + j * dt;
    const Eigen::MatrixXcd h0 = hamiltonian(t);
    const Eigen::MatrixXcd hm = hamiltonian(t + 0.5 * dt);
    const Eigen::MatrixXcd h1 = hamiltonian(t + dt);
    const Eigen::VectorXcd k1 = minus_i * (h0 * psi);
    const Eigen::VectorXcd k2 = minus_i * (hm * (psi + 0.5 * dt * k1));
    const Eigen::VectorXcd k3 = minus_i * (hm * (psi + 0.5 * dt * k2));
    const Eigen::VectorXcd k4 = minus_i * (h1 * (psi + dt * k3));
    psi += dt / 6.0 * (k1 + 2.0 * k2 + 2.0 * k3 + k4);
  }
  return psi;
}

}  // namespace oracle
