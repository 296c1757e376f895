#include "qslspin/quadrature.hpp"

#include <array>
#include <cmath>
#include <queue>
#include <vector>

#include "qslspin/errors.hpp"

namespace qslspin::quadrature {

namespace {

constexpr std::array<double, 8> kKronrodNodes = {
    0.991455371120812639206854697526329, 0.949107912342758524526189684047851,
    0.864864423359769072789712788640926, 0.741531185599394439863864773280788,
    0.586087235467691130294144845693013, 0.405845151377397166906606412076961,
    0.207784955007898467600689403773245, 0.0};
constexpr std::array<double, 8> kKronrodWeights = {
    0.022935322010529224963732008058970, 0.063092092629978553290700663189204,
    0.104790010322250183839876322541518, 0.140653259715525918745189590510238,
    0.169004726639267902826583426598550, 0.190350578064785409913256402421014,
    0.204432940075298892414161999234649, 0.209482141084727828012999174891714};
// Gauss weights for the nodes kKronrodNodes[1], [3], [5], [7].
constexpr std::array<double, 4> kGaussWeights = {
    0.129484966168869693270611432679082, 0.279705391489276667901467771423780,
    0.381830050505118944950369775488975, 0.417959183673469387755102040816327};

struct Segment {
  double a;
  double b;
  double value;
  double error;
  bool operator<(const Segment& other) const { return error < other.error; }
};

Segment rule(const BatchIntegrand& f, double a, double b) {
  const double centre = 0.5 * (a + b);
  const double half = 0.5 * (b - a);
  std::array<double, 15> nodes{};
  for (int i = 0; i < 7; ++i) {
    nodes[2 * i] = centre - half * kKronrodNodes[i];
    nodes[2 * i + 1] = centre + half * kKronrodNodes[i];
  }
  nodes[14] = centre;
  std::array<double, 15> values{};
  f(nodes, values);
  double kronrod = kKronrodWeights[7] * values[14];
  double gauss = kGaussWeights[3] * values[14];
  for (int i = 0; i < 7; ++i) {
    const double pair = values[2 * i] + values[2 * i + 1];
    kronrod += kKronrodWeights[i] * pair;
    if (i % 2 == 1) gauss += kGaussWeights[i / 2] * pair;
  }
  return {a, b, kronrod * half, std::abs((kronrod - gauss) * half)};
}

}  // namespace

Result gauss_kronrod(const BatchIntegrand& f, double a, double b, double abs_tol, double rel_tol,
                     int max_subdivisions) {
  if (!(std::isfinite(a) && std::isfinite(b))) {
    throw Error(ErrorCode::InvalidParameter, "gauss_kronrod: infinite limits");
  }
  if (a == b) return {};
  std::priority_queue<Segment> queue;
  Segment first = rule(f, a, b);
  double total = first.value;
  double error = first.error;
  queue.push(first);
  int evaluations = 15;
  for (int split = 0; split < max_subdivisions; ++split) {
    if (error <= std::max(abs_tol, rel_tol * std::abs(total))) break;
    const Segment worst = queue.top();
    queue.pop();
    const double mid = 0.5 * (worst.a + worst.b);
    const Segment left = rule(f, worst.a, mid);
    const Segment right = rule(f, mid, worst.b);
    evaluations += 30;
    total += left.value + right.value - worst.value;
    error += left.error + right.error - worst.error;
    queue.push(left);
    queue.push(right);
  }
  // Re-sum to shed the drift of the running updates.
  total = 0.0;
  error = 0.0;
  while (!queue.empty()) {
    total += queue.top().value;
    error += queue.top().error;
    queue.pop();
  }
  return {total, error, evaluations};
}

Result gauss_kronrod(const std::function<double(double)>& f, double a, double b, double abs_tol,
                     double rel_tol, int max_subdivisions) {
  const BatchIntegrand batch = [&f](std::span<const double> x, std::span<double> y) {
    for (std::size_t i = 0; i < x.size(); ++i) y[i] = f(x[i]);
  };
  return gauss_kronrod(batch, a, b, abs_tol, rel_tol, max_subdivisions);
}

double trapezoid(std::span<const double> x, std::span<const double> y) {
  if (x.size() != y.size()) {
    throw Error(ErrorCode::DimensionMismatch, "trapezoid: abscissa/ordinate length mismatch");
  }
  double sum = 0.0;
  for (std::size_t i = 1; i < x.size(); ++i) {
    sum += 0.5 * (x[i] - x[i - 1]) * (y[i] + y[i - 1]);
  }
  return sum;
}

}  // namespace qslspin::quadrature
