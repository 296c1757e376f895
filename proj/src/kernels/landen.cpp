#include <cmath>

#include "qslspin/errors.hpp"
#include "qslspin/kernels.hpp"

namespace qslspin::kernels {

LandenTable make_landen_table(double k) {
  if (!(k >= 0.0 && k <= 1.0)) {
    throw Error(ErrorCode::InvalidParameter, "elliptic modulus must lie in [0, 1]");
  }
  LandenTable table;
  table.k = k;
  double complement = (1.0 - k) * (1.0 + k);
  if (complement == 0.0) {
    table.unit_modulus = true;
    return table;
  }
  // The means converge quadratically, so stopping at a relative gap of 1e-9
  // leaves the next mean accurate to roundoff.
  constexpr double kGapTolerance = 1e-9;
  double a = 1.0;
  double c = 1.0;
  for (int level = 0; level < LandenTable::kMaxLevels; ++level) {
    table.levels = level + 1;
    table.arithmetic[level] = a;
    complement = std::sqrt(complement);
    table.geometric[level] = complement;
    c = 0.5 * (a + complement);
    if (std::abs(a - complement) <= kGapTolerance * a) break;
    complement *= a;
    a = c;
  }
  table.scale = c;
  return table;
}

}  // namespace qslspin::kernels
