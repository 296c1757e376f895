#pragma once

// Jacobi elliptic functions and Legendre elliptic integrals.
//
// Conventions: the Jacobi functions and K take the modulus k (with the
// parameter m = k^2 kept alongside it); the second-kind integral takes the
// parameter m directly, because it is routinely called with m = -H^2/h^2 < 0.
//
//   sn(u|k), cn(u|k), dn(u|k)       descending Landen / AGM
//   K(k) = pi / (2 AGM(1, sqrt(1-k^2)))
//   E(phi|m) = int_0^phi sqrt(1 - m sin^2 v) dv     (Carlson R_F / R_D)

namespace qslspin::elliptic {

class EllipticModulus {
 public:
  // Throws Error(InvalidParameter) unless 0 <= k <= 1.
  explicit EllipticModulus(double k);

  double k() const noexcept { return k_; }
  double m() const noexcept { return m_; }
  // 1 - k^2 evaluated as (1-k)(1+k) to keep relative accuracy near k = 1.
  double complementary_m() const noexcept { return (1.0 - k_) * (1.0 + k_); }

 private:
  double k_;
  double m_;
};

class EllipticParameter {
 public:
  // Throws Error(InvalidParameter) for m > 1 or non-finite m.
  explicit EllipticParameter(double m);

  double m() const noexcept { return m_; }

 private:
  double m_;
};

struct SnCnDn {
  double sn;
  double cn;
  double dn;
};

SnCnDn jacobi_sncndn(double u, EllipticModulus k);

// Throws Error(DivergentInput) at k = 1.
double complete_K(EllipticModulus k);

double complete_E(EllipticParameter m);

// Valid for every real phi; uses E(phi + n pi|m) = E(phi|m) + 2n E(m).
double incomplete_E(double phi, EllipticParameter m);

// Carlson symmetric integrals. R_F needs at most one zero argument, R_D
// needs z > 0 and x + y > 0.
double carlson_rf(double x, double y, double z);
double carlson_rd(double x, double y, double z);

}  // namespace qslspin::elliptic
