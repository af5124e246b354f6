// SPDX-License-Identifier: Apache-2.0
#ifndef STRMOR_IRKA_HPP
#define STRMOR_IRKA_HPP

#include <cstdint>
#include <functional>
#include <memory>
#include <string>
#include <utility>
#include <vector>

#include "strmor/interpolation.hpp"
#include "strmor/loewner.hpp"
#include "strmor/structured_system.hpp"

namespace strmor {

struct IterationOptions
{
  int max_iter = 100;
  double conv_tol = 1e-3;
  bool realify = true;
  /// Reflect updated points with Re sigma < 0 across the imaginary axis.
  /// Off by default: the mirror update is applied unconditionally. Needed
  /// for structures whose scalar terms overflow deep in the left half-plane
  /// (e.g. delay terms).
  bool strict_rhp_points = false;

  static IterationOptions tf_irka_defaults() { return IterationOptions{100, 1e-3, true}; }
  static IterationOptions sptf_outer_defaults() { return IterationOptions{50, 1e-3, true}; }
};

/// Bookkeeping for solves against the full-order (order-n) system.
struct SolveCounter
{
  long long count = 0;
};

/// Black-box access to a transfer function and (optionally) its derivative.
struct TransferFunctionHandle
{
  Index output_dim = 1;
  Index input_dim = 1;
  std::function<Matrix(Complex)> value;
  std::function<Matrix(Complex)> derivative;
  std::shared_ptr<SolveCounter> large_solves;  // set when evaluations hit order n

  Matrix eval(Complex s) const;
  /// Throws MissingDerivative when no derivative is available.
  Matrix eval_derivative(Complex s) const;
};

/// Handle over a structured system. When count_as_large is set, every evaluation
/// is tallied in the returned handle's solve counter (one per value, one
/// extra per derivative).
TransferFunctionHandle make_transfer_handle(const StructuredSystem& sys,
                                            bool count_as_large = false);
TransferFunctionHandle make_transfer_handle(const LoewnerRealization& rom);

struct IterationRecord
{
  std::vector<Complex> points;  // set used in this iteration
  double metric = 0.0;          // relative change towards the next set
  Index order = 0;              // reduced order produced in this iteration
};

struct ReductionReport
{
  std::vector<IterationRecord> iterations;
  std::vector<Complex> final_points;  // set after the last update
  bool converged = false;
  long long n_large_solves = 0;
  double wall_time_seconds = 0.0;
  std::uint64_t seed = 0;
  std::vector<std::string> warnings;
};

/// Relative difference between two point sets: both sorted by (Re, Im),
/// stacked, || new - old ||_2 / || old ||_2. Sets of unequal size give
/// +infinity (an order change can never signal convergence).
double convergence_metric(const std::vector<Complex>& old_points,
                          const std::vector<Complex>& new_points);
double convergence_metric(const InterpolationData& old_data, const InterpolationData& new_data);

/// Mirror the finite eigentriples of a realization into new interpolation
/// data: sigma = -lambda, b = B^H y, c = C x, directions normalized and the
/// set repaired to exact conjugation closure. Closure is forced (see
/// repair_conjugation_closure) when the realization is real-valued or the
/// caller asserts a reflective transfer function via force_closure.
InterpolationData update_points_from_rom(const LoewnerRealization& rom,
                                         bool force_closure = false,
                                         bool strict_rhp = false);

/// Restore exact conjugation closure broken by floating-point eigensolves:
/// near-real points snap onto the axis, near-conjugate point pairs are
/// replaced by exact (z, conj z) averages. Directions are normalized.
/// With force_closure (used when the source pencil is real-valued, whose
/// spectrum is closed by construction), leftover unpaired complex points
/// are snapped onto the real axis unconditionally.
InterpolationData repair_conjugation_closure(InterpolationData data,
                                             bool force_closure = false);

/// Hermite-Loewner fixed-point iteration on a transfer function handle.
/// Returns the realization built in the last iteration (realified when
/// requested and the point set allows it) and the iteration report.
std::pair<LoewnerRealization, ReductionReport> tf_irka(const TransferFunctionHandle& tf,
                                                       const InterpolationData& init,
                                                       const IterationOptions& opts);

/// Structure-preserving outer iteration: project at the current points,
/// run tf_irka on the reduced transfer function, and mirror the poles of
/// the resulting order-r realization into the next point set. Only the
/// order-n solves of the basis construction are counted as large.
std::pair<StructuredSystem, ReductionReport> sptf_irka(const StructuredSystem& sys,
                                                       const InterpolationData& init,
                                                       const IterationOptions& opts);

}  // namespace strmor

#endif  // STRMOR_IRKA_HPP
