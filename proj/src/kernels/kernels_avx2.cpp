#include <immintrin.h>

#include <cmath>
#include <cstddef>

#include "qslspin/kernels.hpp"

namespace qslspin::kernels::avx2 {

namespace {

constexpr std::size_t kLanes = 4;
constexpr double kTinySine = 1e-100;

// Above this |x| the three-term pi/2 reduction loses digits; such batches go
// through the scalar kernel.
constexpr double kMaxReducibleArgument = 1e9;

// pi/2 split into three pieces (fdlibm), each exactly representable in few bits.
constexpr double kPio2Hi = 1.57079632673412561417e+00;
constexpr double kPio2Mid = 6.07710050630396597660e-11;
constexpr double kPio2Lo = 2.02226624879595063154e-21;
constexpr double kTwoOverPi = 6.36619772367581382433e-01;

// Minimax coefficients of the fdlibm sin/cos kernels on [-pi/4, pi/4].
constexpr double kS1 = -1.66666666666666324348e-01;
constexpr double kS2 = 8.33333333332248946124e-03;
constexpr double kS3 = -1.98412698298579493134e-04;
constexpr double kS4 = 2.75573137070700676789e-06;
constexpr double kS5 = -2.50507602534068634195e-08;
constexpr double kS6 = 1.58969099521155010221e-10;
constexpr double kC1 = 4.16666666666666019037e-02;
constexpr double kC2 = -1.38888888888741095749e-03;
constexpr double kC3 = 2.48015872894767294178e-05;
constexpr double kC4 = -2.75573143513906633035e-07;
constexpr double kC5 = 2.08757232129817482790e-09;
constexpr double kC6 = -1.13596475577881948265e-11;

inline __m256d abs_pd(__m256d v) {
  return _mm256_andnot_pd(_mm256_set1_pd(-0.0), v);
}

inline __m256d copysign_pd(__m256d magnitude, __m256d sign_source) {
  const __m256d sign_mask = _mm256_set1_pd(-0.0);
  return _mm256_or_pd(_mm256_andnot_pd(sign_mask, magnitude), _mm256_and_pd(sign_mask, sign_source));
}

inline void sincos_pd(__m256d x, __m256d& sine, __m256d& cosine) {
  const __m256d q = _mm256_round_pd(_mm256_mul_pd(x, _mm256_set1_pd(kTwoOverPi)),
                                    _MM_FROUND_TO_NEAREST_INT | _MM_FROUND_NO_EXC);
  __m256d r = _mm256_fnmadd_pd(q, _mm256_set1_pd(kPio2Hi), x);
  r = _mm256_fnmadd_pd(q, _mm256_set1_pd(kPio2Mid), r);
  r = _mm256_fnmadd_pd(q, _mm256_set1_pd(kPio2Lo), r);

  const __m256d z = _mm256_mul_pd(r, r);

  __m256d ps = _mm256_fmadd_pd(z, _mm256_set1_pd(kS6), _mm256_set1_pd(kS5));
  ps = _mm256_fmadd_pd(z, ps, _mm256_set1_pd(kS4));
  ps = _mm256_fmadd_pd(z, ps, _mm256_set1_pd(kS3));
  ps = _mm256_fmadd_pd(z, ps, _mm256_set1_pd(kS2));
  ps = _mm256_fmadd_pd(z, ps, _mm256_set1_pd(kS1));
  const __m256d sin_r = _mm256_fmadd_pd(_mm256_mul_pd(r, z), ps, r);

  __m256d pc = _mm256_fmadd_pd(z, _mm256_set1_pd(kC6), _mm256_set1_pd(kC5));
  pc = _mm256_fmadd_pd(z, pc, _mm256_set1_pd(kC4));
  pc = _mm256_fmadd_pd(z, pc, _mm256_set1_pd(kC3));
  pc = _mm256_fmadd_pd(z, pc, _mm256_set1_pd(kC2));
  pc = _mm256_fmadd_pd(z, pc, _mm256_set1_pd(kC1));
  // cos r = w + ((1 - w) - z/2 + z^2 P(z)) with w = 1 - z/2 (fdlibm ordering).
  const __m256d one = _mm256_set1_pd(1.0);
  const __m256d half_z = _mm256_mul_pd(_mm256_set1_pd(0.5), z);
  const __m256d w = _mm256_sub_pd(one, half_z);
  const __m256d tail = _mm256_fmadd_pd(_mm256_mul_pd(z, z), pc,
                                       _mm256_sub_pd(_mm256_sub_pd(one, w), half_z));
  const __m256d cos_r = _mm256_add_pd(w, tail);

  // Quadrant n = q mod 4: odd n swaps sin/cos, n in {2,3} negates sin,
  // n in {1,2} negates cos.
  const __m128i qi = _mm256_cvtpd_epi32(q);
  const __m256i n = _mm256_cvtepi32_epi64(qi);
  const __m256i one_i = _mm256_set1_epi64x(1);
  const __m256i two_i = _mm256_set1_epi64x(2);
  const __m256d swap = _mm256_castsi256_pd(
      _mm256_cmpeq_epi64(_mm256_and_si256(n, one_i), one_i));
  const __m256d negate_sin = _mm256_castsi256_pd(
      _mm256_cmpeq_epi64(_mm256_and_si256(n, two_i), two_i));
  const __m256d negate_cos = _mm256_castsi256_pd(_mm256_cmpeq_epi64(
      _mm256_and_si256(_mm256_add_epi64(n, one_i), two_i), two_i));

  const __m256d s = _mm256_blendv_pd(sin_r, cos_r, swap);
  const __m256d c = _mm256_blendv_pd(cos_r, sin_r, swap);
  const __m256d sign_bit = _mm256_set1_pd(-0.0);
  sine = _mm256_xor_pd(s, _mm256_and_pd(negate_sin, sign_bit));
  cosine = _mm256_xor_pd(c, _mm256_and_pd(negate_cos, sign_bit));
}

bool arguments_reducible(std::span<const double> u, double scale) {
  for (double v : u) {
    if (!(std::abs(v * scale) <= kMaxReducibleArgument)) return false;
  }
  return true;
}

}  // namespace

void sincos(std::span<const double> x, std::span<double> s, std::span<double> c) {
  const std::size_t n = x.size();
  std::size_t i = 0;
  for (; i + kLanes <= n; i += kLanes) {
    __m256d sv, cv;
    sincos_pd(_mm256_loadu_pd(x.data() + i), sv, cv);
    _mm256_storeu_pd(s.data() + i, sv);
    _mm256_storeu_pd(c.data() + i, cv);
  }
  for (; i < n; ++i) {
    s[i] = std::sin(x[i]);
    c[i] = std::cos(x[i]);
  }
}

void sncndn(std::span<const double> u, const LandenTable& table, std::span<double> sn,
            std::span<double> cn, std::span<double> dn) {
  if (table.unit_modulus || !arguments_reducible(u, table.scale)) {
    scalar::sncndn(u, table, sn, cn, dn);
    return;
  }
  const std::size_t n = u.size();
  const __m256d scale = _mm256_set1_pd(table.scale);
  const __m256d one = _mm256_set1_pd(1.0);
  const __m256d tiny = _mm256_set1_pd(kTinySine);
  std::size_t i = 0;
  for (; i + kLanes <= n; i += kLanes) {
    const __m256d x = _mm256_mul_pd(_mm256_loadu_pd(u.data() + i), scale);
    __m256d s, co;
    sincos_pd(x, s, co);
    const __m256d is_tiny = _mm256_cmp_pd(abs_pd(s), tiny, _CMP_LT_OQ);
    // Tiny-sine lanes divide by a harmless 1 and are overwritten below.
    const __m256d safe_s = _mm256_blendv_pd(s, one, is_tiny);

    __m256d a = _mm256_div_pd(co, safe_s);
    __m256d c = _mm256_mul_pd(scale, a);
    __m256d d = one;
    for (int level = table.levels - 1; level >= 0; --level) {
      const __m256d b = _mm256_set1_pd(table.arithmetic[level]);
      a = _mm256_mul_pd(a, c);
      c = _mm256_mul_pd(c, d);
      d = _mm256_div_pd(_mm256_add_pd(_mm256_set1_pd(table.geometric[level]), a),
                        _mm256_add_pd(b, a));
      a = _mm256_div_pd(c, b);
    }

    const __m256d small_c = _mm256_cmp_pd(abs_pd(c), one, _CMP_LE_OQ);
    const __m256d r_small = _mm256_div_pd(one, _mm256_sqrt_pd(_mm256_fmadd_pd(c, c, one)));
    const __m256d q = _mm256_div_pd(one, c);
    const __m256d r_large = _mm256_div_pd(one, _mm256_sqrt_pd(_mm256_fmadd_pd(q, q, one)));
    const __m256d sn_small = copysign_pd(r_small, s);
    const __m256d cn_small = _mm256_mul_pd(c, sn_small);
    const __m256d sn_large = copysign_pd(_mm256_mul_pd(abs_pd(q), r_large), s);
    const __m256d cn_large = _mm256_mul_pd(copysign_pd(r_large, c), copysign_pd(one, s));

    __m256d sn_v = _mm256_blendv_pd(sn_large, sn_small, small_c);
    __m256d cn_v = _mm256_blendv_pd(cn_large, cn_small, small_c);
    __m256d dn_v = d;
    sn_v = _mm256_blendv_pd(sn_v, _mm256_div_pd(s, scale), is_tiny);
    cn_v = _mm256_blendv_pd(cn_v, co, is_tiny);
    dn_v = _mm256_blendv_pd(dn_v, one, is_tiny);

    _mm256_storeu_pd(sn.data() + i, sn_v);
    _mm256_storeu_pd(cn.data() + i, cn_v);
    _mm256_storeu_pd(dn.data() + i, dn_v);
  }
  if (i < n) {
    scalar::sncndn(u.subspan(i), table, sn.subspan(i), cn.subspan(i), dn.subspan(i));
  }
}

void norm3(std::span<const double> x, std::span<const double> y, std::span<const double> z,
           std::span<double> out) {
  const std::size_t n = x.size();
  std::size_t i = 0;
  for (; i + kLanes <= n; i += kLanes) {
    const __m256d xv = _mm256_loadu_pd(x.data() + i);
    const __m256d yv = _mm256_loadu_pd(y.data() + i);
    const __m256d zv = _mm256_loadu_pd(z.data() + i);
    __m256d acc = _mm256_mul_pd(xv, xv);
    acc = _mm256_fmadd_pd(yv, yv, acc);
    acc = _mm256_fmadd_pd(zv, zv, acc);
    _mm256_storeu_pd(out.data() + i, _mm256_sqrt_pd(acc));
  }
  if (i < n) {
    scalar::norm3(x.subspan(i), y.subspan(i), z.subspan(i), out.subspan(i));
  }
}

}  // namespace qslspin::kernels::avx2
