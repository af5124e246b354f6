// SPDX-License-Identifier: Apache-2.0
#ifndef STRMOR_TYPES_HPP
#define STRMOR_TYPES_HPP

#include <complex>

#include <Eigen/Core>
#include <Eigen/SparseCore>

namespace strmor {

using Complex = std::complex<double>;
using Index = Eigen::Index;

using Matrix = Eigen::MatrixXcd;
using Vector = Eigen::VectorXcd;
using RowVector = Eigen::RowVectorXcd;
using RealMatrix = Eigen::MatrixXd;
using RealVector = Eigen::VectorXd;
using SparseMatrix = Eigen::SparseMatrix<Complex>;

inline constexpr Complex kImaginaryUnit{0.0, 1.0};

/// Integer power by repeated multiplication; well defined for s = 0, k = 0.
inline Complex ipow(Complex s, int k)
{
  Complex out{1.0, 0.0};
  for (int i = 0; i < k; ++i)
  {
    out *= s;
  }
  return out;
}

}  // namespace strmor

#endif  // STRMOR_TYPES_HPP
