// SPDX-License-Identifier: Apache-2.0
#include <doctest.h>

#include <cmath>
#include <random>

#include "strmor/errors.hpp"
#include "strmor/scalar_term.hpp"

using namespace strmor;

namespace {

// Central finite difference check used as the derivative oracle.
void check_derivative(const ScalarTerm& term, Complex s)
{
  const double h = 1e-6 * (1.0 + std::abs(s));
  const Complex fd = (term.value(s + h) - term.value(s - h)) / (2.0 * h);
  const Complex analytic = term.derivative(s);
  CHECK(std::abs(analytic - fd) <= 1e-6 * (1.0 + std::abs(analytic)));
}

}  // namespace

TEST_CASE("scalar term values")
{
  const Complex s{1.5, 2.0};
  CHECK(ScalarTerm::constant().value(s) == Complex{1.0, 0.0});
  CHECK(ScalarTerm::monomial(1).value(s) == s);
  CHECK(ScalarTerm::monomial(3).value(s) == s * s * s);
  CHECK(std::abs(ScalarTerm::exp_delay(2.0).value(s) - std::exp(-2.0 * s)) < 1e-15);

  const ScalarTerm fk = ScalarTerm::fractional_kelvin(3.0, 7.0, 0.5, 0.75);
  const Complex u = std::pow(s * 0.5, 0.75);
  CHECK(std::abs(fk.value(s) - (3.0 + 7.0 * u) / (1.0 + u)) < 1e-14);

  const ScalarTerm gun = ScalarTerm::sqrt_shift(2.0, true);
  CHECK(std::abs(gun.value(s) - kImaginaryUnit * std::sqrt(s * s - 4.0)) < 1e-14);
  // On the imaginary axis the gun term is real-valued and negative.
  const Complex on_axis = gun.value(Complex{0.0, 3.0});
  CHECK(on_axis.imag() == doctest::Approx(0.0));
  CHECK(on_axis.real() == doctest::Approx(-std::sqrt(9.0 + 4.0)));
}

TEST_CASE("monomial derivative at the origin")
{
  CHECK(ScalarTerm::monomial(1).derivative(Complex{0.0, 0.0}) == Complex{1.0, 0.0});
  CHECK(ScalarTerm::monomial(2).derivative(Complex{0.0, 0.0}) == Complex{0.0, 0.0});
}

TEST_CASE("derivatives match finite differences at regular points")
{
  std::mt19937_64 rng(7);
  std::uniform_real_distribution<double> re(0.2, 3.0);
  std::uniform_real_distribution<double> im(0.2, 3.0);
  const ScalarTerm terms[] = {
      ScalarTerm::constant(),
      ScalarTerm::monomial(1),
      ScalarTerm::monomial(4),
      ScalarTerm::exp_delay(1.3),
      ScalarTerm::fractional_kelvin(2.0, 9.0, 0.8, 0.6),
      ScalarTerm::fractional_kelvin(1.0, 4.0, 1.0, 1.5),
      ScalarTerm::sqrt_shift(1.0, true),
      ScalarTerm::sqrt_shift(0.0, false),
  };
  for (const auto& term : terms)
  {
    for (int k = 0; k < 20; ++k)
    {
      check_derivative(term, Complex{re(rng), im(rng)});
    }
  }
}

TEST_CASE("singular sets raise instead of returning NaN")
{
  const ScalarTerm gun = ScalarTerm::sqrt_shift(2.0, true);
  CHECK_THROWS_AS(gun.value(Complex{1.0, 0.0}), SingularTermPoint);
  CHECK_THROWS_AS(gun.value(Complex{-2.0, 0.0}), SingularTermPoint);
  CHECK_THROWS_AS(gun.derivative(Complex{0.5, 0.0}), SingularTermPoint);
  CHECK_NOTHROW(gun.value(Complex{3.0, 0.0}));
  CHECK_NOTHROW(gun.value(Complex{0.0, 1.0}));

  const ScalarTerm fk = ScalarTerm::fractional_kelvin(1.0, 2.0, 1.0, 0.5);
  CHECK_THROWS_AS(fk.value(Complex{-1.0, 0.0}), SingularTermPoint);
  CHECK_THROWS_AS(fk.value(Complex{0.0, 0.0}), SingularTermPoint);
  CHECK_NOTHROW(fk.value(Complex{0.0, 1.0}));

  // Kelvin pole off the axis: (s tau)^alpha = -1 at arg(s) = pi / alpha.
  const ScalarTerm fk_pole = ScalarTerm::fractional_kelvin(1.0, 2.0, 1.0, 1.5);
  const Complex pole = std::polar(1.0, M_PI / 1.5);
  CHECK_THROWS_AS(fk_pole.value(pole), SingularTermPoint);
}

TEST_CASE("reflectivity classification")
{
  CHECK(ScalarTerm::constant().reflective());
  CHECK(ScalarTerm::monomial(2).reflective());
  CHECK(ScalarTerm::exp_delay(1.0).reflective());
  CHECK(ScalarTerm::fractional_kelvin(1.0, 2.0, 1.0, 0.5).reflective());
  CHECK(ScalarTerm::sqrt_shift(1.0, false).reflective());
  CHECK_FALSE(ScalarTerm::sqrt_shift(1.0, true).reflective());
}

TEST_CASE("parameter validation")
{
  CHECK_THROWS(ScalarTerm::monomial(0));
  CHECK_THROWS(ScalarTerm::exp_delay(0.0));
  CHECK_THROWS(ScalarTerm::fractional_kelvin(1.0, 1.0, 1.0, 2.0));
  CHECK_THROWS(ScalarTerm::sqrt_shift(-1.0, true));
}
