// SPDX-License-Identifier: Apache-2.0
#ifndef STRMOR_INTERPOLATION_HPP
#define STRMOR_INTERPOLATION_HPP

#include <vector>

#include "strmor/structured_system.hpp"
#include "strmor/types.hpp"

namespace strmor {

/// Interpolation points with right/left tangential directions.
struct InterpolationData
{
  std::vector<Complex> points;
  std::vector<Vector> right_dirs;  // b_j, length m
  std::vector<Vector> left_dirs;   // c_j, length p

  Index size() const { return static_cast<Index>(points.size()); }

  /// Every non-real point has exactly one partner carrying the exact
  /// conjugate point and directions.
  bool closed_under_conjugation() const;

  /// Scales every direction to unit length; zero directions are rejected.
  void normalize_directions();

  void validate() const;
};

/// Petrov-Galerkin trial/test bases with orthonormal columns.
struct ProjectionBases
{
  Matrix v;
  Matrix w;
  bool real_valued = false;
};

/// Build V spanning {K(sigma_j)^{-1} B(sigma_j) b_j} and W spanning
/// {K(sigma_j)^{-H} C(sigma_j)^H c_j}, orthonormalized with the given drop
/// tolerance and truncated to a common column count.
ProjectionBases build_tangential_bases(const StructuredSystem& sys,
                                       const InterpolationData& data,
                                       double drop_tol = 1e-12);

/// Turn complex bases for conjugation-closed data into real bases by
/// orthonormalizing [Re V, Im V] (likewise W); the enlarged real span keeps
/// all complex interpolation conditions intact.
ProjectionBases realify_bases(const ProjectionBases& bases, const InterpolationData& data,
                              double drop_tol = 1e-12);

/// Term-by-term projection K_j -> W^H K_j V, B_j -> W^H B_j, C_j -> C_j V;
/// the scalar functions are copied unchanged, so the reduced system has the
/// same structure by construction.
StructuredSystem project(const StructuredSystem& sys, const ProjectionBases& bases);

}  // namespace strmor

#endif  // STRMOR_INTERPOLATION_HPP
