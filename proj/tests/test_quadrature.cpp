#include <cmath>
#include <numbers>
#include <vector>

#include "doctest.h"
#include "oracles.hpp"
#include "qslspin/quadrature.hpp"

using namespace qslspin::quadrature;
using doctest::Approx;

TEST_CASE("Gauss-Kronrod on smooth integrands") {
  const auto r = gauss_kronrod([](double x) { return std::exp(x); }, 0.0, 1.0, 1e-14, 1e-14);
  CHECK(r.value == Approx(std::exp(1.0) - 1.0).epsilon(1e-14));
  CHECK(r.evaluations >= 15);
  const auto p = gauss_kronrod([](double x) { return x * x * x; }, -1.0, 2.0, 1e-14, 1e-14);
  CHECK(p.value == Approx(15.0 / 4.0).epsilon(1e-14));
}

TEST_CASE("Gauss-Kronrod handles reversed bounds and kinks") {
  const auto r = gauss_kronrod([](double x) { return std::abs(std::sin(x)); }, 3.0 * std::numbers::pi,
                               0.0, 1e-12, 1e-12);
  CHECK(r.value == Approx(-6.0).epsilon(1e-11));
}

TEST_CASE("batched integrand agrees with the scalar form") {
  const BatchIntegrand f = [](std::span<const double> x, std::span<double> y) {
    for (std::size_t i = 0; i < x.size(); ++i) y[i] = 1.0 / (1.0 + x[i] * x[i]);
  };
  const auto r = gauss_kronrod(f, -5.0, 5.0, 1e-14, 1e-14);
  CHECK(r.value == Approx(2.0 * std::atan(5.0)).epsilon(1e-14));
  CHECK(r.value == Approx(oracle::tanh_sinh([](double x) { return 1.0 / (1.0 + x * x); }, -5.0, 5.0))
                       .epsilon(1e-14));
}

TEST_CASE("trapezoid") {
  std::vector<double> x{0.0, 0.5, 2.0}, y{1.0, 1.0, 4.0};
  CHECK(trapezoid(x, y) == Approx(0.5 + 1.5 * 2.5));
}
