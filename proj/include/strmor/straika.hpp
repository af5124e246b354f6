// SPDX-License-Identifier: Apache-2.0
#ifndef STRMOR_STRAIKA_HPP
#define STRMOR_STRAIKA_HPP

#include <cstdint>
#include <utility>
#include <vector>

#include "strmor/irka.hpp"
#include "strmor/numerics.hpp"

namespace strmor {

/// Union of closed frequency intervals [w1, w2] in rad/s; w2 may be
/// infinite. Construction merges overlapping intervals into canonical form.
class FrequencyRegion
{
public:
  explicit FrequencyRegion(std::vector<std::pair<double, double>> intervals);

  const std::vector<std::pair<double, double>>& intervals() const { return intervals_; }
  bool contains(double omega) const;

private:
  std::vector<std::pair<double, double>> intervals_;
};

enum class DominanceScaling
{
  /// || lambda (C y)(x^H B) ||_2 / |Re lambda| with unit-norm eigenvectors,
  /// which is eigenvector-scale dependent as written.
  literal,
  /// Same expression divided by |y^H E x|, removing the scale dependence.
  normalized,
};

struct StraikaOptions
{
  /// Loewner sampling points theta_j; empty means the default of
  /// q log-spaced points per region interval on the imaginary axis plus
  /// their conjugates.
  std::vector<Complex> sampling_points;
  Index r_max = 0;  // required, >= 1
  bool include_boundary_pair = true;
  double loewner_tol = 1e-8;
  IterationOptions iteration = IterationOptions::sptf_outer_defaults();
  std::uint64_t seed = 0;
  Index q_per_interval = 40;
  DominanceScaling dominance = DominanceScaling::literal;
};

/// Default theta grid for a region: q log-spaced points on i*[w1, w2] per
/// interval, closed under conjugation. Zero and infinite endpoints are
/// substituted by finite decade offsets.
std::vector<Complex> default_sampling_points(const FrequencyRegion& region,
                                             Index q_per_interval);

/// Keep the finite eigentriples with |Im lambda| inside the region; with
/// include_boundary, additionally keep the nearest outside triple (one
/// conjugate pair) per interval endpoint.
std::vector<numerics::EigenTriple> select_in_region(
    const std::vector<numerics::EigenTriple>& triples, const FrequencyRegion& region,
    bool include_boundary);

/// Dominance d = || lambda (C_L y)(x^H B_L) ||_2 / |Re lambda| of a pole of
/// a first-order realization. Throws ImaginaryAxisPole when |Re lambda| is
/// negligible against |lambda|.
double pole_dominance(const numerics::EigenTriple& triple, const LoewnerRealization& rom,
                      DominanceScaling scaling = DominanceScaling::literal);

/// Adaptive structure-preserving iteration: project at the current points,
/// sample the reduced transfer function on the theta grid, identify a
/// Loewner surrogate, and mirror its region-selected poles (dominance-capped
/// at r_max) into the next point set. The reduced order adapts to the number
/// of selected poles. No transfer function derivatives are evaluated.
std::pair<StructuredSystem, ReductionReport> straika(const StructuredSystem& sys,
                                                     const InterpolationData& init,
                                                     const FrequencyRegion& region,
                                                     const StraikaOptions& opts);

}  // namespace strmor

#endif  // STRMOR_STRAIKA_HPP
