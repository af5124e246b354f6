// SPDX-License-Identifier: Apache-2.0
#ifndef STRMOR_TEST_HELPERS_HPP
#define STRMOR_TEST_HELPERS_HPP

#include <random>
#include <vector>

#include "strmor/interpolation.hpp"
#include "strmor/structured_system.hpp"
#include "strmor/types.hpp"

namespace strmor::test {

inline Matrix scalar(double re, double im = 0.0)
{
  Matrix m(1, 1);
  m(0, 0) = Complex{re, im};
  return m;
}

inline Matrix real_mat(Index rows, Index cols, std::mt19937_64& rng, double scale = 1.0)
{
  std::normal_distribution<double> normal(0.0, 1.0);
  Matrix m(rows, cols);
  for (Index j = 0; j < cols; ++j)
  {
    for (Index i = 0; i < rows; ++i)
    {
      m(i, j) = Complex{scale * normal(rng), 0.0};
    }
  }
  return m;
}

/// Random real stable first-order system: A = R - c I with c pushing all
/// eigenvalues into the open left half-plane.
inline StructuredSystem random_stable_first_order(Index n, Index m, Index p,
                                                  std::uint64_t seed)
{
  std::mt19937_64 rng(seed);
  Matrix a = real_mat(n, n, rng);
  a -= Matrix::Identity(n, n) * (a.cwiseAbs().rowwise().sum().real().maxCoeff() + 0.5);
  const Matrix b = real_mat(n, m, rng);
  const Matrix c = real_mat(p, n, rng);
  return make_first_order(Matrix::Identity(n, n), a, b, c);
}

/// Block-diagonal stable first-order system with prescribed conjugate pole
/// pairs and random real input/output maps; poles are known exactly.
inline StructuredSystem modal_first_order(const std::vector<Complex>& upper_poles, Index m,
                                          Index p, std::uint64_t seed)
{
  const Index n = 2 * static_cast<Index>(upper_poles.size());
  Matrix a = Matrix::Zero(n, n);
  for (std::size_t k = 0; k < upper_poles.size(); ++k)
  {
    const double re = upper_poles[k].real();
    const double im = upper_poles[k].imag();
    const Index i = 2 * static_cast<Index>(k);
    a(i, i) = Complex{re, 0.0};
    a(i, i + 1) = Complex{im, 0.0};
    a(i + 1, i) = Complex{-im, 0.0};
    a(i + 1, i + 1) = Complex{re, 0.0};
  }
  std::mt19937_64 rng(seed);
  const Matrix b = real_mat(n, m, rng);
  const Matrix c = real_mat(p, n, rng);
  return make_first_order(Matrix::Identity(n, n), a, b, c);
}

/// Random real second-order MIMO system with positive-definite-ish K and
/// light damping.
inline StructuredSystem random_second_order(Index n, Index m, Index p, std::uint64_t seed)
{
  std::mt19937_64 rng(seed);
  const Matrix mass = Matrix::Identity(n, n);
  Matrix k0 = real_mat(n, n, rng);
  Matrix k = (k0 * k0.adjoint()).eval();
  k += Matrix::Identity(n, n) * static_cast<double>(n);
  const Matrix d = 0.02 * k + 0.01 * mass;
  const Matrix b = real_mat(n, m, rng);
  const Matrix cp = real_mat(p, n, rng);
  const Matrix cv = Matrix::Zero(p, n);
  return make_second_order(mass, d, k, b, cp, cv);
}

/// Test-only companion linearization of a second-order system
/// (s^2 M + s D + K, B, Cp + s Cv) into first-order form.
inline StructuredSystem companion_linearization(const Matrix& m, const Matrix& d,
                                                const Matrix& k, const Matrix& b,
                                                const Matrix& cp, const Matrix& cv)
{
  const Index n = m.rows();
  Matrix e = Matrix::Zero(2 * n, 2 * n);
  e.topLeftCorner(n, n) = Matrix::Identity(n, n);
  e.bottomRightCorner(n, n) = m;
  Matrix a = Matrix::Zero(2 * n, 2 * n);
  a.topRightCorner(n, n) = Matrix::Identity(n, n);
  a.bottomLeftCorner(n, n) = -k;
  a.bottomRightCorner(n, n) = -d;
  Matrix bb = Matrix::Zero(2 * n, b.cols());
  bb.bottomRows(n) = b;
  Matrix cc = Matrix::Zero(cp.rows(), 2 * n);
  cc.leftCols(n) = cp;
  cc.rightCols(n) = cv;
  return make_first_order(e, a, bb, cc);
}

/// Central finite difference of the transfer function; the independent
/// oracle for analytic derivatives.
inline Matrix fd_transfer_derivative(const StructuredSystem& sys, Complex s)
{
  const double h = 1e-6 * (1.0 + std::abs(s));
  return (sys.eval_transfer(s + h) - sys.eval_transfer(s - h)) / (2.0 * h);
}

/// Conjugation-closed interpolation data from upper-half-plane seeds.
inline InterpolationData pair_data(const std::vector<Complex>& upper, Index m, Index p,
                                   std::uint64_t seed)
{
  std::mt19937_64 rng(seed);
  std::normal_distribution<double> normal(0.0, 1.0);
  const auto draw = [&](Index dim) {
    Vector v(dim);
    for (Index i = 0; i < dim; ++i)
    {
      v(i) = Complex{normal(rng), normal(rng)};
    }
    return Vector(v / v.norm());
  };
  InterpolationData data;
  for (const Complex& s : upper)
  {
    const Vector b = draw(m);
    const Vector c = draw(p);
    data.points.push_back(s);
    data.right_dirs.push_back(b);
    data.left_dirs.push_back(c);
    data.points.push_back(std::conj(s));
    data.right_dirs.push_back(b.conjugate());
    data.left_dirs.push_back(c.conjugate());
  }
  return data;
}

inline InterpolationData siso_points(const std::vector<Complex>& points)
{
  InterpolationData data;
  for (const Complex& s : points)
  {
    data.points.push_back(s);
    data.right_dirs.push_back(Vector::Ones(1));
    data.left_dirs.push_back(Vector::Ones(1));
  }
  return data;
}

}  // namespace strmor::test

#endif  // STRMOR_TEST_HELPERS_HPP
