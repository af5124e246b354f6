// SPDX-License-Identifier: Apache-2.0
#ifndef STRMOR_NUMERICS_HPP
#define STRMOR_NUMERICS_HPP

#include <optional>
#include <vector>

#include "strmor/types.hpp"

namespace strmor::numerics {

/// Tolerances of the dense kernel layer, collected in one place.
struct Config
{
  /// Relative pivot threshold below which an LU factorization is declared
  /// singular (relative to the largest matrix entry).
  double pivot_rtol = 1e-14;
  /// Orthonormality target for basis construction.
  double orth_tol = 1e-12;
  /// Eigenvalues with |lambda| above this multiple of |A|/|E| are flagged
  /// as infinite.
  double infinite_eig_rtol = 1e12;
  /// |det| threshold (relative) for the pencil regularity probe.
  double pencil_probe_rtol = 1e-12;
};

constexpr Config default_config{};

/// Generalized eigentriple of a pencil (A, E): A x = lambda E x and
/// y^H A = lambda y^H E, with x and y normalized to unit length.
/// finite == false marks eigenvalues flagged infinite or overflowing.
struct EigenTriple
{
  Complex lambda{};
  Vector x;
  Vector y;
  bool finite = true;
};

/// Solve A X = RHS (or A^H X = RHS when adjoint) by partial-pivot LU.
/// Throws SingularK when a pivot falls below pivot_rtol * max|A|.
Matrix solve_linear(const Matrix& a, const Matrix& rhs, bool adjoint = false,
                    const Config& cfg = default_config);

/// Rank-revealing orthonormal basis of the columns of m. Columns whose
/// norm after orthogonalization against previously accepted columns falls
/// below drop_tol * max-column-norm(m) are discarded. A zero input yields
/// a matrix with zero columns.
Matrix orthonormal_basis(const Matrix& m, double drop_tol);

/// Real-valued variant; used where exact realness must be preserved.
RealMatrix orthonormal_basis_real(const RealMatrix& m, double drop_tol);

struct TruncatedSvd
{
  Matrix u;
  RealVector singular_values;  // retained values, descending
  Matrix v;
  RealVector all_singular_values;  // full spectrum, for gap inspection
};

/// SVD truncated at rel_tol * sigma_max, optionally capped at max_rank.
TruncatedSvd truncated_svd(const Matrix& m, double rel_tol,
                           std::optional<Index> max_rank = std::nullopt);

/// Full set of eigentriples of the pencil (A, E) via QZ (LAPACK zggev).
/// Throws SingularPencil when det(A - lambda E) vanishes identically along
/// fixed probe points.
std::vector<EigenTriple> generalized_eig(const Matrix& a, const Matrix& e,
                                         const Config& cfg = default_config);

}  // namespace strmor::numerics

#endif  // STRMOR_NUMERICS_HPP
