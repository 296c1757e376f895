#include <cmath>
#include <cstddef>

#include "qslspin/kernels.hpp"

namespace qslspin::kernels::scalar {

namespace {

// Below this |sin| the backward recurrence would overflow; sn is then within
// 1e-100 of zero and cn of +-1.
constexpr double kTinySine = 1e-100;

}  // namespace

void sncndn(std::span<const double> u, const LandenTable& table, std::span<double> sn,
            std::span<double> cn, std::span<double> dn) {
  const std::size_t n = u.size();
  if (table.unit_modulus) {
    for (std::size_t i = 0; i < n; ++i) {
      sn[i] = std::tanh(u[i]);
      cn[i] = 1.0 / std::cosh(u[i]);
      dn[i] = cn[i];
    }
    return;
  }
  for (std::size_t i = 0; i < n; ++i) {
    const double x = u[i] * table.scale;
    const double s = std::sin(x);
    const double co = std::cos(x);
    if (std::abs(s) < kTinySine) {
      sn[i] = s / table.scale;
      cn[i] = co;
      dn[i] = 1.0;
      continue;
    }
    double a = co / s;
    double c = table.scale * a;
    double d = 1.0;
    for (int level = table.levels - 1; level >= 0; --level) {
      const double b = table.arithmetic[level];
      a *= c;
      c *= d;
      d = (table.geometric[level] + a) / (b + a);
      a = c / b;
    }
    // sn = sign(s) / sqrt(1 + c^2), cn = c sn, written to survive |c| >> 1.
    if (std::abs(c) <= 1.0) {
      const double r = 1.0 / std::sqrt(1.0 + c * c);
      sn[i] = std::copysign(r, s);
      cn[i] = c * sn[i];
    } else {
      const double q = 1.0 / c;
      const double r = 1.0 / std::sqrt(1.0 + q * q);
      sn[i] = std::copysign(std::abs(q) * r, s);
      cn[i] = std::copysign(r, c) * std::copysign(1.0, s);
    }
    dn[i] = d;
  }
}

void norm3(std::span<const double> x, std::span<const double> y, std::span<const double> z,
           std::span<double> out) {
  for (std::size_t i = 0; i < x.size(); ++i) {
    out[i] = std::sqrt(x[i] * x[i] + y[i] * y[i] + z[i] * z[i]);
  }
}

}  // namespace qslspin::kernels::scalar
