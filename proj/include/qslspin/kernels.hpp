#pragma once

// Data-parallel inner loops. Every kernel has a scalar reference
// implementation and, on x86-64 builds, an AVX2+FMA variant. The public
// entry points dispatch once at runtime on CPU support; setting the
// environment variable QSLSPIN_KERNELS=scalar pins the scalar path.

#include <array>
#include <span>
#include <string_view>

namespace qslspin::kernels {

enum class Isa { Scalar, Avx2 };

std::string_view to_string(Isa isa) noexcept;

// True when the variant was compiled in and the running CPU supports it.
bool isa_available(Isa isa) noexcept;

Isa active_isa() noexcept;

// Descending-Landen table for one modulus. All lanes of a batch share it, so
// only the final sine/cosine and the backward recurrence run per element.
struct LandenTable {
  static constexpr int kMaxLevels = 16;

  double k = 0.0;
  bool unit_modulus = false;  // k == 1: sn = tanh, cn = dn = sech
  int levels = 0;
  double scale = 1.0;         // final arithmetic-geometric mean
  std::array<double, kMaxLevels> arithmetic{};
  std::array<double, kMaxLevels> geometric{};
};

LandenTable make_landen_table(double k);

// sn/cn/dn of every u at one modulus k in [0, 1]. Output spans must be at
// least as long as u.
void sncndn_batch(std::span<const double> u, double k, std::span<double> sn, std::span<double> cn,
                  std::span<double> dn);
void sncndn_batch(Isa isa, std::span<const double> u, const LandenTable& table,
                  std::span<double> sn, std::span<double> cn, std::span<double> dn);

// out[i] = |(x[i], y[i], z[i])|.
void norm3_batch(std::span<const double> x, std::span<const double> y, std::span<const double> z,
                 std::span<double> out);
void norm3_batch(Isa isa, std::span<const double> x, std::span<const double> y,
                 std::span<const double> z, std::span<double> out);

namespace scalar {
void sncndn(std::span<const double> u, const LandenTable& table, std::span<double> sn,
            std::span<double> cn, std::span<double> dn);
void norm3(std::span<const double> x, std::span<const double> y, std::span<const double> z,
           std::span<double> out);
}  // namespace scalar

#if defined(QSLSPIN_HAVE_AVX2_KERNELS)
namespace avx2 {
void sncndn(std::span<const double> u, const LandenTable& table, std::span<double> sn,
            std::span<double> cn, std::span<double> dn);
void norm3(std::span<const double> x, std::span<const double> y, std::span<const double> z,
           std::span<double> out);
// Exposed for equivalence tests against std::sin / std::cos.
void sincos(std::span<const double> x, std::span<double> s, std::span<double> c);
}  // namespace avx2
#endif

}  // namespace qslspin::kernels
