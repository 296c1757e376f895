#include "qslspin/elliptic.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

#include "qslspin/errors.hpp"
#include "qslspin/kernels.hpp"

namespace qslspin::elliptic {

namespace {

constexpr double kRelativeTarget = 1e-16;
constexpr int kMaxDuplications = 128;

}  // namespace

EllipticModulus::EllipticModulus(double k) : k_(k), m_(k * k) {
  if (!(k >= 0.0 && k <= 1.0)) {
    throw Error(ErrorCode::InvalidParameter, "elliptic modulus k must lie in [0, 1]");
  }
}

EllipticParameter::EllipticParameter(double m) : m_(m) {
  if (!std::isfinite(m) || m > 1.0) {
    throw Error(ErrorCode::InvalidParameter, "elliptic parameter m must be finite and <= 1");
  }
}

SnCnDn jacobi_sncndn(double u, EllipticModulus k) {
  const kernels::LandenTable table = kernels::make_landen_table(k.k());
  SnCnDn out{};
  kernels::scalar::sncndn(std::span<const double>(&u, 1), table, std::span<double>(&out.sn, 1),
                          std::span<double>(&out.cn, 1), std::span<double>(&out.dn, 1));
  return out;
}

double complete_K(EllipticModulus k) {
  if (k.k() == 1.0) {
    throw Error(ErrorCode::DivergentInput, "K(k) diverges at k = 1");
  }
  double a = 1.0;
  double b = std::sqrt(k.complementary_m());
  for (int i = 0; i < 64 && std::abs(a - b) > 1e-16 * a; ++i) {
    const double next = 0.5 * (a + b);
    b = std::sqrt(a * b);
    a = next;
  }
  return std::numbers::pi / (2.0 * a);
}

// Carlson (1995) duplication with the fifth-order series tail.
double carlson_rf(double x, double y, double z) {
  if (x < 0.0 || y < 0.0 || z < 0.0 || (x + y == 0.0) || (x + z == 0.0) || (y + z == 0.0)) {
    throw Error(ErrorCode::InvalidParameter, "carlson_rf: invalid arguments");
  }
  const double a0 = (x + y + z) / 3.0;
  const double q = std::pow(3.0 * kRelativeTarget, -1.0 / 6.0) *
                   std::max({std::abs(a0 - x), std::abs(a0 - y), std::abs(a0 - z)});
  double a = a0;
  double scale = 1.0;  // 4^-n
  for (int n = 0; n < kMaxDuplications && scale * q >= std::abs(a); ++n) {
    const double sx = std::sqrt(x);
    const double sy = std::sqrt(y);
    const double sz = std::sqrt(z);
    const double lambda = sx * sy + sy * sz + sz * sx;
    x = 0.25 * (x + lambda);
    y = 0.25 * (y + lambda);
    z = 0.25 * (z + lambda);
    a = 0.25 * (a + lambda);
    scale *= 0.25;
  }
  const double X = 1.0 - x / a;
  const double Y = 1.0 - y / a;
  const double Z = -X - Y;
  const double e2 = X * Y - Z * Z;
  const double e3 = X * Y * Z;
  return (1.0 - e2 / 10.0 + e3 / 14.0 + e2 * e2 / 24.0 - 3.0 * e2 * e3 / 44.0) / std::sqrt(a);
}

double carlson_rd(double x, double y, double z) {
  if (x < 0.0 || y < 0.0 || z <= 0.0 || (x + y == 0.0)) {
    throw Error(ErrorCode::InvalidParameter, "carlson_rd: invalid arguments");
  }
  const double a0 = (x + y + 3.0 * z) / 5.0;
  const double q = std::pow(0.25 * kRelativeTarget, -1.0 / 6.0) *
                   std::max({std::abs(a0 - x), std::abs(a0 - y), std::abs(a0 - z)});
  double a = a0;
  double scale = 1.0;
  double sum = 0.0;
  for (int n = 0; n < kMaxDuplications && scale * q >= std::abs(a); ++n) {
    const double sx = std::sqrt(x);
    const double sy = std::sqrt(y);
    const double sz = std::sqrt(z);
    const double lambda = sx * sy + sy * sz + sz * sx;
    sum += scale / (sz * (z + lambda));
    x = 0.25 * (x + lambda);
    y = 0.25 * (y + lambda);
    z = 0.25 * (z + lambda);
    a = 0.25 * (a + lambda);
    scale *= 0.25;
  }
  const double X = 1.0 - x / a;
  const double Y = 1.0 - y / a;
  const double Z = -(X + Y) / 3.0;
  const double xy = X * Y;
  const double z2 = Z * Z;
  const double e2 = xy - 6.0 * z2;
  const double e3 = (3.0 * xy - 8.0 * z2) * Z;
  const double e4 = 3.0 * (xy - z2) * z2;
  const double e5 = xy * z2 * Z;
  const double series = 1.0 - 3.0 * e2 / 14.0 + e3 / 6.0 + 9.0 * e2 * e2 / 88.0 - 3.0 * e4 / 22.0 -
                        9.0 * e2 * e3 / 52.0 + 3.0 * e5 / 26.0;
  return scale * series / (a * std::sqrt(a)) + 3.0 * sum;
}

double complete_E(EllipticParameter m) {
  const double mm = m.m();
  if (mm == 1.0) return 1.0;
  if (mm == 0.0) return 0.5 * std::numbers::pi;
  const double y = 1.0 - mm;
  return carlson_rf(0.0, y, 1.0) - mm / 3.0 * carlson_rd(0.0, y, 1.0);
}

double incomplete_E(double phi, EllipticParameter m) {
  const double mm = m.m();
  if (mm == 0.0) return phi;
  const double periods = std::nearbyint(phi / std::numbers::pi);
  const double psi = phi - periods * std::numbers::pi;
  const double s = std::sin(psi);
  double principal;
  if (mm == 1.0) {
    principal = s;
  } else if (s == 0.0) {
    principal = 0.0;
  } else {
    const double c = std::cos(psi);
    const double x = c * c;
    const double y = 1.0 - mm * s * s;
    principal = s * carlson_rf(x, y, 1.0) - mm / 3.0 * s * s * s * carlson_rd(x, y, 1.0);
  }
  if (periods == 0.0) return principal;
  return principal + 2.0 * periods * complete_E(m);
}

}  // namespace qslspin::elliptic
