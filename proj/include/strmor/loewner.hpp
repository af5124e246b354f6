// SPDX-License-Identifier: Apache-2.0
#ifndef STRMOR_LOEWNER_HPP
#define STRMOR_LOEWNER_HPP

#include <optional>
#include <random>
#include <vector>

#include "strmor/interpolation.hpp"
#include "strmor/structured_system.hpp"
#include "strmor/types.hpp"

namespace strmor {

/// Right tangential datum: w = H(kappa) r.
struct RightDatum
{
  Complex kappa{};
  Vector r;  // length m
  Vector w;  // length p
};

/// Left tangential datum: vrow = l^H H(mu).
struct LeftDatum
{
  Complex mu{};
  Vector l;       // length p
  RowVector vrow;  // length m
};

/// Tangential data split into disjoint right/left sets of equal size.
struct TangentialDataset
{
  std::vector<RightDatum> right;
  std::vector<LeftDatum> left;
};

/// Tangential directions accompanying a list of transfer samples; the i-th
/// sample uses right[i] if it lands in the right set and left[i] otherwise.
struct TangentialDirections
{
  std::vector<Vector> right;  // length m each
  std::vector<Vector> left;   // length p each
};

/// Unstructured first-order realization (E, A, B, C) built from samples;
/// E = -L and A = -L_sigma for the Loewner pencil (L, L_sigma).
struct LoewnerRealization
{
  Matrix e;
  Matrix a;
  Matrix b;  // q x m
  Matrix c;  // p x q
  bool is_real = false;

  Index order() const { return e.rows(); }
  Index num_inputs() const { return b.cols(); }
  Index num_outputs() const { return c.rows(); }
};

/// H_L(s) = C (sE - A)^{-1} B.
Matrix loewner_transfer(const LoewnerRealization& rom, Complex s);
/// H_L'(s) = -C (sE - A)^{-1} E (sE - A)^{-1} B.
Matrix loewner_transfer_derivative(const LoewnerRealization& rom, Complex s);

/// Conjugate-pair index blocks; singletons carry second == -1.
struct ConjugatePairing
{
  std::vector<std::pair<Index, Index>> blocks;
};

/// Pairing by exact conjugate matching of points. Throws
/// NotConjugationClosed when a non-real point has no exact partner.
ConjugatePairing make_conjugate_pairing(const std::vector<Complex>& points);

/// Sort samples by (|s|, |Im s|, sign Im descending, Re s), group exact
/// conjugate pairs into blocks, and assign blocks alternately so both sets
/// stay conjugation-closed and of equal size.
TangentialDataset partition_samples(const std::vector<TransferSample>& samples,
                                    const TangentialDirections& dirs);

/// Loewner and shifted Loewner matrices from partitioned data; the result
/// tangentially interpolates the data at every right/left point.
LoewnerRealization build_loewner(const TangentialDataset& data);

struct TruncatedLoewner
{
  LoewnerRealization rom;
  RealVector row_singular_values;  // spectrum of [L, L_sigma]
  Index rank = 0;                  // numerical rank before any max_order cap
};

/// Rank-revealing reduction of a (possibly redundant) Loewner realization
/// via SVDs of [L, L_sigma] and [L; L_sigma].
TruncatedLoewner truncate_loewner(const LoewnerRealization& rom, double rel_tol,
                                  std::optional<Index> max_order = std::nullopt);

/// Blockwise J = (1/sqrt 2) [[1, -i], [1, i]] transform over conjugate
/// pairs; output matrices are exactly real (imaginary parts re-zeroed after
/// verifying they are below tolerance) and realize the same transfer
/// function.
LoewnerRealization realify_loewner(const LoewnerRealization& rom,
                                   const ConjugatePairing& row_pairing,
                                   const ConjugatePairing& col_pairing);

/// Hermite (two-sided) Loewner realization from value+derivative samples at
/// a single point set: the diagonal entries use H' and (sH)'.
LoewnerRealization build_hermite_loewner(const std::vector<TransferSample>& samples,
                                         const InterpolationData& data);

struct IdentifyOptions
{
  double rel_tol = 1e-8;
  std::optional<Index> max_order;
  bool realify = false;
};

/// Identification backend seam: sample-based construction of a first-order
/// realization. Only the Loewner backend is implemented; the options and
/// return shape are the stable interface for alternatives.
TruncatedLoewner identify(const std::vector<TransferSample>& samples,
                          const IdentifyOptions& options, std::mt19937_64& rng);

/// Unit-norm pseudo-random tangential directions for a sample list,
/// conjugation-consistent: conjugate sample points receive conjugate
/// directions and real points receive real directions.
TangentialDirections random_directions(const std::vector<TransferSample>& samples, Index m,
                                       Index p, std::mt19937_64& rng);

}  // namespace strmor

#endif  // STRMOR_LOEWNER_HPP
