#include <cstdlib>
#include <string_view>

#include "qslspin/errors.hpp"
#include "qslspin/kernels.hpp"

namespace qslspin::kernels {

namespace {

bool cpu_has_avx2() noexcept {
#if defined(QSLSPIN_HAVE_AVX2_KERNELS) && (defined(__GNUC__) || defined(__clang__))
  __builtin_cpu_init();
  return __builtin_cpu_supports("avx2") && __builtin_cpu_supports("fma");
#else
  return false;
#endif
}

Isa select_isa() noexcept {
  if (const char* forced = std::getenv("QSLSPIN_KERNELS")) {
    if (std::string_view(forced) == "scalar") return Isa::Scalar;
  }
  return cpu_has_avx2() ? Isa::Avx2 : Isa::Scalar;
}

void require(Isa isa) {
  if (!isa_available(isa)) {
    throw Error(ErrorCode::InvalidParameter,
                std::string("kernel variant not available: ") + std::string(to_string(isa)));
  }
}

void check_lengths(std::size_t n, std::size_t a, std::size_t b, std::size_t c) {
  if (a < n || b < n || c < n) {
    throw Error(ErrorCode::DimensionMismatch, "kernel output span shorter than input");
  }
}

}  // namespace

std::string_view to_string(Isa isa) noexcept {
  switch (isa) {
    case Isa::Scalar: return "scalar";
    case Isa::Avx2: return "avx2";
  }
  return "unknown";
}

bool isa_available(Isa isa) noexcept {
  switch (isa) {
    case Isa::Scalar: return true;
    case Isa::Avx2: return cpu_has_avx2();
  }
  return false;
}

Isa active_isa() noexcept {
  static const Isa isa = select_isa();
  return isa;
}

void sncndn_batch(Isa isa, std::span<const double> u, const LandenTable& table,
                  std::span<double> sn, std::span<double> cn, std::span<double> dn) {
  require(isa);
  check_lengths(u.size(), sn.size(), cn.size(), dn.size());
#if defined(QSLSPIN_HAVE_AVX2_KERNELS)
  if (isa == Isa::Avx2) {
    avx2::sncndn(u, table, sn, cn, dn);
    return;
  }
#endif
  scalar::sncndn(u, table, sn, cn, dn);
}

void sncndn_batch(std::span<const double> u, double k, std::span<double> sn, std::span<double> cn,
                  std::span<double> dn) {
  sncndn_batch(active_isa(), u, make_landen_table(k), sn, cn, dn);
}

void norm3_batch(Isa isa, std::span<const double> x, std::span<const double> y,
                 std::span<const double> z, std::span<double> out) {
  require(isa);
  check_lengths(x.size(), y.size(), z.size(), out.size());
#if defined(QSLSPIN_HAVE_AVX2_KERNELS)
  if (isa == Isa::Avx2) {
    avx2::norm3(x, y, z, out);
    return;
  }
#endif
  scalar::norm3(x, y, z, out);
}

void norm3_batch(std::span<const double> x, std::span<const double> y, std::span<const double> z,
                 std::span<double> out) {
  norm3_batch(active_isa(), x, y, z, out);
}

}  // namespace qslspin::kernels
