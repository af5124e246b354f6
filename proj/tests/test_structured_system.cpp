// SPDX-License-Identifier: Apache-2.0
#include <doctest.h>

#include <cmath>
#include <random>

#include "strmor/errors.hpp"
#include "strmor/structured_system.hpp"
#include "test_helpers.hpp"

using namespace strmor;
using test::scalar;

TEST_CASE("eval_K on the canonical structures")
{
  // First order: K(0) = -A.
  Matrix e2 = Matrix::Identity(2, 2);
  Matrix a2 = Matrix::Zero(2, 2);
  a2(0, 0) = Complex{-1.0, 0.0};
  a2(1, 1) = Complex{-2.0, 0.0};
  const auto first = make_first_order(e2, a2, Matrix::Ones(2, 1), Matrix::Ones(1, 2));
  const Matrix k0 = first.eval_K(Complex{0.0, 0.0});
  CHECK(k0(0, 0) == Complex{1.0, 0.0});
  CHECK(k0(1, 1) == Complex{2.0, 0.0});
  CHECK(k0(0, 1) == Complex{0.0, 0.0});

  // Second order scalar: K(2) = 4 * 1 + 4 = 8.
  const auto second = make_second_order(scalar(1), scalar(0), scalar(4), scalar(1), scalar(1),
                                        scalar(0));
  CHECK(second.eval_K(Complex{2.0, 0.0})(0, 0) == Complex{8.0, 0.0});
  CHECK(second.k_terms().size() == 2);  // zero damping term dropped

  // Delay scalar: K(0) = 0 - 0 - e^0 * (-1) = 1.
  const auto delay = make_delay(scalar(1), scalar(0), scalar(-1), 1.0, scalar(1), scalar(1));
  CHECK(delay.eval_K(Complex{0.0, 0.0})(0, 0) == Complex{1.0, 0.0});
}

TEST_CASE("eval_transfer on scalar examples")
{
  const auto first = make_first_order(scalar(1), scalar(-1), scalar(1), scalar(1));
  CHECK(std::abs(first.eval_transfer(Complex{1.0, 0.0})(0, 0) - 0.5) < 1e-15);

  const auto second = make_second_order(scalar(1), scalar(0), scalar(4), scalar(1), scalar(1),
                                        scalar(0));
  CHECK(std::abs(second.eval_transfer(Complex{0.0, 0.0})(0, 0) - 0.25) < 1e-15);

  const auto delay = make_delay(scalar(1), scalar(0), scalar(-1), 1.0, scalar(1), scalar(1));
  CHECK(std::abs(delay.eval_transfer(Complex{0.0, 0.0})(0, 0) - 1.0) < 1e-15);
  // H(1) = 1 / (1 + e^{-1})
  CHECK(std::abs(delay.eval_transfer(Complex{1.0, 0.0})(0, 0) - 1.0 / (1.0 + std::exp(-1.0))) <
        1e-15);
}

TEST_CASE("eval_transfer_derivative on scalar examples")
{
  // H(s) = 1/(s+1): H'(1) = -1/4.
  const auto first = make_first_order(scalar(1), scalar(-1), scalar(1), scalar(1));
  CHECK(std::abs(first.eval_transfer_derivative(Complex{1.0, 0.0})(0, 0) - (-0.25)) < 1e-14);

  // H(s) = 1/(s^2+4): H'(1) = -2/25.
  const auto second = make_second_order(scalar(1), scalar(0), scalar(4), scalar(1), scalar(1),
                                        scalar(0));
  CHECK(std::abs(second.eval_transfer_derivative(Complex{1.0, 0.0})(0, 0) - (-2.0 / 25.0)) <
        1e-14);

  // H(s) = 1/(s+e^{-s}): H'(0) = 0.
  const auto delay = make_delay(scalar(1), scalar(0), scalar(-1), 1.0, scalar(1), scalar(1));
  CHECK(std::abs(delay.eval_transfer_derivative(Complex{0.0, 0.0})(0, 0)) < 1e-15);
}

TEST_CASE("derivative consistency against finite differences")
{
  const auto sys = test::random_second_order(12, 2, 2, 101);
  std::mt19937_64 rng(5);
  std::uniform_real_distribution<double> unif(0.3, 2.5);
  for (int k = 0; k < 10; ++k)
  {
    const Complex s{unif(rng), unif(rng)};
    const Matrix analytic = sys.eval_transfer_derivative(s);
    const Matrix fd = test::fd_transfer_derivative(sys, s);
    CHECK((analytic - fd).norm() <= 1e-5 * (1.0 + analytic.norm()));
  }

  const auto delay = make_delay(scalar(1), scalar(-0.5), scalar(-0.3), 0.7, scalar(2),
                                scalar(1.5));
  for (int k = 0; k < 5; ++k)
  {
    const Complex s{unif(rng), unif(rng)};
    const Matrix analytic = delay.eval_transfer_derivative(s);
    const Matrix fd = test::fd_transfer_derivative(delay, s);
    CHECK((analytic - fd).norm() <= 1e-5 * (1.0 + analytic.norm()));
  }
}

TEST_CASE("reflection principle for real systems")
{
  const auto sys = test::random_second_order(10, 2, 2, 77);
  REQUIRE(sys.is_real());
  REQUIRE(sys.is_reflective());
  std::mt19937_64 rng(9);
  std::uniform_real_distribution<double> unif(-2.0, 2.0);
  for (int k = 0; k < 20; ++k)
  {
    const Complex s{std::abs(unif(rng)) + 0.5, unif(rng)};
    const Matrix h = sys.eval_transfer(s);
    const Matrix h_conj = sys.eval_transfer(std::conj(s));
    CHECK((h.conjugate() - h_conj).norm() <= 1e-12 * h.norm());
  }
}

TEST_CASE("second-order system matches its companion linearization")
{
  std::mt19937_64 rng(31);
  const Index n = 6;
  const Matrix mass = Matrix::Identity(n, n);
  Matrix k0 = test::real_mat(n, n, rng);
  const Matrix k = (k0 * k0.adjoint() + 4.0 * Matrix::Identity(n, n)).eval();
  const Matrix d = (0.05 * k).eval();
  const Matrix b = test::real_mat(n, 2, rng);
  const Matrix cp = test::real_mat(2, n, rng);
  const Matrix cv = test::real_mat(2, n, rng);

  const auto second = make_second_order(mass, d, k, b, cp, cv);
  const auto first = test::companion_linearization(mass, d, k, b, cp, cv);
  for (int g = 0; g <= 10; ++g)
  {
    const Complex s{0.1, 0.2 + 0.5 * g};
    const Matrix h2 = second.eval_transfer(s);
    const Matrix h1 = first.eval_transfer(s);
    CHECK((h2 - h1).norm() <= 1e-10 * (1.0 + h2.norm()));
  }
}

TEST_CASE("gun constructor degenerates to second order when W terms vanish")
{
  std::mt19937_64 rng(13);
  const Index n = 5;
  const Matrix mass = Matrix::Identity(n, n);
  Matrix k0 = test::real_mat(n, n, rng);
  const Matrix k = (k0 * k0.adjoint() + 2.0 * Matrix::Identity(n, n)).eval();
  const Matrix b = test::real_mat(n, 1, rng);
  const Matrix c = test::real_mat(1, n, rng);
  const Matrix zero = Matrix::Zero(n, n);

  const auto gun = make_gun(mass, zero, zero, k, 0.0, 108.8774, b, c);
  const auto second = make_second_order(mass, Matrix::Zero(n, n), k, b, c, Matrix::Zero(1, n));
  CHECK(gun.k_terms().size() == 2);  // zero W matrices dropped
  for (int g = 0; g < 10; ++g)
  {
    const Complex s{0.0, 1.0 + 10.0 * g};
    CHECK((gun.eval_transfer(s) - second.eval_transfer(s)).norm() <=
          1e-12 * (1.0 + second.eval_transfer(s).norm()));
  }
}

TEST_CASE("viscoelastic constructor assembles the Kelvin term")
{
  const auto sys = make_viscoelastic(scalar(1), scalar(4), scalar(2), 3.0, 7.0, 0.5, 0.75,
                                     scalar(1), scalar(1));
  const Complex s{0.0, 2.0};
  const Complex u = std::pow(s * 0.5, 0.75);
  const Complex expected = 1.0 / (s * s + 4.0 + 2.0 * (3.0 + 7.0 * u) / (1.0 + u));
  CHECK(std::abs(sys.eval_transfer(s)(0, 0) - expected) < 1e-14);
}

TEST_CASE("singular K raises SingularK")
{
  // K(s) = s * 0 - A with A singular at s = 0 when A itself is singular.
  Matrix a = Matrix::Zero(2, 2);
  a(0, 0) = Complex{1.0, 0.0};
  const auto sys = make_first_order(Matrix::Identity(2, 2), a, Matrix::Ones(2, 1),
                                    Matrix::Ones(1, 2));
  CHECK_THROWS_AS(sys.eval_transfer(Complex{0.0, 0.0}), SingularK);
}

TEST_CASE("dimension mismatches are rejected at construction")
{
  CHECK_THROWS_AS(make_first_order(Matrix::Identity(2, 2), Matrix::Identity(3, 3),
                                   Matrix::Ones(2, 1), Matrix::Ones(1, 2)),
                  DimensionMismatch);
  CHECK_THROWS_AS(make_first_order(Matrix::Identity(2, 2), Matrix::Identity(2, 2),
                                   Matrix::Ones(3, 1), Matrix::Ones(1, 2)),
                  DimensionMismatch);
}

TEST_CASE("eval stats scope counts transfer evaluations")
{
  const auto sys = make_first_order(scalar(1), scalar(-1), scalar(1), scalar(1));
  EvalStats stats;
  {
    EvalStatsScope scope(stats);
    sys.eval_transfer(Complex{1.0, 0.0});
    sys.eval_transfer(Complex{2.0, 0.0});
    sys.eval_transfer_derivative(Complex{1.0, 0.0});
  }
  CHECK(stats.transfer_evals == 2);
  CHECK(stats.derivative_evals == 1);
  sys.eval_transfer(Complex{3.0, 0.0});  // outside the scope: not counted
  CHECK(stats.transfer_evals == 2);
}
