// SPDX-License-Identifier: Apache-2.0
#include "strmor/loewner.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <sstream>

#include <Eigen/SVD>

#include "strmor/errors.hpp"
#include "strmor/numerics.hpp"

namespace strmor {

namespace {

constexpr double kRealifyImagTol = 1e-12;

int sign_of(double x)
{
  if (x > 0.0)
  {
    return 1;
  }
  if (x < 0.0)
  {
    return -1;
  }
  return 0;
}

// Ordering used for the alternating partition: absolute value first, then a
// tie-break keeping conjugate pairs adjacent with the upper half-plane
// member first.
bool sample_less(Complex a, Complex b)
{
  const double abs_a = std::abs(a);
  const double abs_b = std::abs(b);
  if (abs_a != abs_b)
  {
    return abs_a < abs_b;
  }
  const double im_a = std::abs(a.imag());
  const double im_b = std::abs(b.imag());
  if (im_a != im_b)
  {
    return im_a < im_b;
  }
  const int sa = sign_of(a.imag());
  const int sb = sign_of(b.imag());
  if (sa != sb)
  {
    return sa > sb;
  }
  return a.real() < b.real();
}

}  // namespace

Matrix loewner_transfer(const LoewnerRealization& rom, Complex s)
{
  if (auto* stats = active_eval_stats())
  {
    ++stats->transfer_evals;
  }
  const Matrix k = s * rom.e - rom.a;
  return rom.c * numerics::solve_linear(k, rom.b);
}

Matrix loewner_transfer_derivative(const LoewnerRealization& rom, Complex s)
{
  if (auto* stats = active_eval_stats())
  {
    ++stats->derivative_evals;
  }
  const Matrix k = s * rom.e - rom.a;
  const Matrix x = numerics::solve_linear(k, rom.b);
  return -rom.c * numerics::solve_linear(k, Matrix(rom.e * x));
}

ConjugatePairing make_conjugate_pairing(const std::vector<Complex>& points)
{
  const Index n = static_cast<Index>(points.size());
  std::vector<bool> used(points.size(), false);
  ConjugatePairing pairing;
  for (Index i = 0; i < n; ++i)
  {
    if (used[static_cast<std::size_t>(i)])
    {
      continue;
    }
    if (points[static_cast<std::size_t>(i)].imag() == 0.0)
    {
      pairing.blocks.emplace_back(i, Index{-1});
      used[static_cast<std::size_t>(i)] = true;
      continue;
    }
    Index partner = -1;
    for (Index j = i + 1; j < n; ++j)
    {
      if (!used[static_cast<std::size_t>(j)] &&
          points[static_cast<std::size_t>(j)] == std::conj(points[static_cast<std::size_t>(i)]))
      {
        partner = j;
        break;
      }
    }
    if (partner < 0)
    {
      std::ostringstream msg;
      msg << "point (" << points[static_cast<std::size_t>(i)].real() << ", "
          << points[static_cast<std::size_t>(i)].imag() << ") has no conjugate partner";
      throw NotConjugationClosed(msg.str());
    }
    pairing.blocks.emplace_back(i, partner);
    used[static_cast<std::size_t>(i)] = true;
    used[static_cast<std::size_t>(partner)] = true;
  }
  return pairing;
}

TangentialDataset partition_samples(const std::vector<TransferSample>& samples,
                                    const TangentialDirections& dirs)
{
  const std::size_t n = samples.size();
  if (n < 2 || n % 2 != 0)
  {
    throw OddSampleCount("partition requires an even sample count of at least 2");
  }
  if (dirs.right.size() != n || dirs.left.size() != n)
  {
    throw DimensionMismatch("one tangential direction pair per sample required");
  }
  for (std::size_t i = 0; i < n; ++i)
  {
    for (std::size_t j = i + 1; j < n; ++j)
    {
      if (samples[i].point == samples[j].point)
      {
        throw DuplicatePoint("duplicate sample point in partition input");
      }
    }
  }

  std::vector<std::size_t> order(n);
  std::iota(order.begin(), order.end(), 0);
  std::sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
    return sample_less(samples[a].point, samples[b].point);
  });

  // Group exact conjugate pairs, which are adjacent after sorting, into
  // blocks so that each block lands in one set.
  std::vector<std::vector<std::size_t>> blocks;
  for (std::size_t k = 0; k < n;)
  {
    const std::size_t i = order[k];
    if (k + 1 < n && samples[order[k + 1]].point == std::conj(samples[i].point) &&
        samples[i].point.imag() != 0.0)
    {
      blocks.push_back({i, order[k + 1]});
      k += 2;
    }
    else
    {
      blocks.push_back({i});
      ++k;
    }
  }

  // Alternate blocks between the sets, always filling the smaller one so
  // uneven block sizes still balance out where possible.
  std::vector<std::size_t> right_idx, left_idx;
  for (const auto& block : blocks)
  {
    auto& target = (right_idx.size() <= left_idx.size()) ? right_idx : left_idx;
    target.insert(target.end(), block.begin(), block.end());
  }
  if (right_idx.size() != left_idx.size())
  {
    throw OddSampleCount("sample set cannot be split into equal conjugation-closed halves");
  }

  TangentialDataset data;
  data.right.reserve(right_idx.size());
  data.left.reserve(left_idx.size());
  for (std::size_t i : right_idx)
  {
    RightDatum d;
    d.kappa = samples[i].point;
    d.r = dirs.right[i];
    d.w = samples[i].value * d.r;
    data.right.push_back(std::move(d));
  }
  for (std::size_t j : left_idx)
  {
    LeftDatum d;
    d.mu = samples[j].point;
    d.l = dirs.left[j];
    d.vrow = d.l.adjoint() * samples[j].value;
    data.left.push_back(std::move(d));
  }
  return data;
}

LoewnerRealization build_loewner(const TangentialDataset& data)
{
  const Index q_r = static_cast<Index>(data.right.size());
  const Index q_l = static_cast<Index>(data.left.size());
  if (q_r == 0 || q_l == 0)
  {
    throw OddSampleCount("both tangential data sets must be nonempty");
  }
  const Index m = data.right.front().r.size();
  const Index p = data.right.front().w.size();

  Matrix loew(q_l, q_r);
  Matrix loew_s(q_l, q_r);
  for (Index j = 0; j < q_l; ++j)
  {
    const auto& lj = data.left[static_cast<std::size_t>(j)];
    for (Index i = 0; i < q_r; ++i)
    {
      const auto& ri = data.right[static_cast<std::size_t>(i)];
      const Complex den = lj.mu - ri.kappa;
      if (den == Complex{0.0, 0.0})
      {
        throw CoincidentPoints("left and right sample points coincide");
      }
      const Complex vr = (lj.vrow * ri.r)(0, 0);
      const Complex lw = (lj.l.adjoint() * ri.w)(0, 0);
      loew(j, i) = (vr - lw) / den;
      loew_s(j, i) = (lj.mu * vr - ri.kappa * lw) / den;
    }
  }

  LoewnerRealization rom;
  rom.e = -loew;
  rom.a = -loew_s;
  rom.b = Matrix(q_l, m);
  for (Index j = 0; j < q_l; ++j)
  {
    rom.b.row(j) = data.left[static_cast<std::size_t>(j)].vrow;
  }
  rom.c = Matrix(p, q_r);
  for (Index i = 0; i < q_r; ++i)
  {
    rom.c.col(i) = data.right[static_cast<std::size_t>(i)].w;
  }
  rom.is_real = false;
  return rom;
}

TruncatedLoewner truncate_loewner(const LoewnerRealization& rom, double rel_tol,
                                  std::optional<Index> max_order)
{
  const Index q_l = rom.e.rows();
  const Index q_r = rom.e.cols();
  Matrix row_stack(q_l, 2 * q_r);
  row_stack << -rom.e, -rom.a;  // [L, L_sigma]
  Matrix col_stack(2 * q_l, q_r);
  col_stack << -rom.e, -rom.a;

  TruncatedLoewner out;
  Matrix y, x;
  if (rom.is_real)
  {
    // Real SVD keeps the projected realization exactly real.
    Eigen::JacobiSVD<RealMatrix> svd_row(row_stack.real(),
                                         Eigen::ComputeThinU | Eigen::ComputeThinV);
    Eigen::JacobiSVD<RealMatrix> svd_col(col_stack.real(),
                                         Eigen::ComputeThinU | Eigen::ComputeThinV);
    out.row_singular_values = svd_row.singularValues();
    const auto count_rank = [&](const RealVector& sigma) {
      Index r = 0;
      if (sigma.size() > 0 && sigma(0) > 0.0)
      {
        const double cutoff = rel_tol * sigma(0);
        while (r < sigma.size() && sigma(r) >= cutoff && sigma(r) > 0.0)
        {
          ++r;
        }
      }
      return r;
    };
    out.rank = std::min(count_rank(svd_row.singularValues()),
                        count_rank(svd_col.singularValues()));
    Index keep = out.rank;
    if (max_order)
    {
      keep = std::min(keep, std::max<Index>(*max_order, 0));
    }
    y = svd_row.matrixU().leftCols(keep).cast<Complex>();
    x = svd_col.matrixV().leftCols(keep).cast<Complex>();
  }
  else
  {
    const auto svd_row = numerics::truncated_svd(row_stack, rel_tol);
    const auto svd_col = numerics::truncated_svd(col_stack, rel_tol);
    out.row_singular_values = svd_row.all_singular_values;
    out.rank = std::min(svd_row.u.cols(), svd_col.v.cols());
    Index keep = out.rank;
    if (max_order)
    {
      keep = std::min(keep, std::max<Index>(*max_order, 0));
    }
    y = svd_row.u.leftCols(keep);
    x = svd_col.v.leftCols(keep);
  }

  out.rom.e = y.adjoint() * rom.e * x;
  out.rom.a = y.adjoint() * rom.a * x;
  out.rom.b = y.adjoint() * rom.b;
  out.rom.c = rom.c * x;
  out.rom.is_real = rom.is_real;
  if (out.rom.is_real)
  {
    out.rom.e.imag().setZero();
    out.rom.a.imag().setZero();
    out.rom.b.imag().setZero();
    out.rom.c.imag().setZero();
  }
  return out;
}

namespace {

Matrix pairing_transform(const ConjugatePairing& pairing, Index n)
{
  const double inv_sqrt2 = 1.0 / std::sqrt(2.0);
  Matrix j = Matrix::Zero(n, n);
  Index covered = 0;
  for (const auto& [a, b] : pairing.blocks)
  {
    if (b < 0)
    {
      j(a, a) = Complex{1.0, 0.0};
      covered += 1;
    }
    else
    {
      j(a, a) = Complex{inv_sqrt2, 0.0};
      j(b, a) = Complex{inv_sqrt2, 0.0};
      j(a, b) = Complex{0.0, -inv_sqrt2};
      j(b, b) = Complex{0.0, inv_sqrt2};
      covered += 2;
    }
  }
  if (covered != n)
  {
    throw NotConjugationClosed("pairing does not cover all data indices");
  }
  return j;
}

void enforce_real(Matrix& m, const char* what)
{
  const double scale = std::max(1.0, m.cwiseAbs().maxCoeff());
  const double max_imag = m.imag().cwiseAbs().maxCoeff();
  if (max_imag > kRealifyImagTol * scale)
  {
    std::ostringstream msg;
    msg << "realification left " << what << " with imaginary residue " << max_imag;
    throw NotConjugationClosed(msg.str());
  }
  m.imag().setZero();
}

}  // namespace

LoewnerRealization realify_loewner(const LoewnerRealization& rom,
                                   const ConjugatePairing& row_pairing,
                                   const ConjugatePairing& col_pairing)
{
  const Matrix j_l = pairing_transform(row_pairing, rom.e.rows());
  const Matrix j_r = pairing_transform(col_pairing, rom.e.cols());
  LoewnerRealization out;
  out.e = j_l.adjoint() * rom.e * j_r;
  out.a = j_l.adjoint() * rom.a * j_r;
  out.b = j_l.adjoint() * rom.b;
  out.c = rom.c * j_r;
  enforce_real(out.e, "E");
  enforce_real(out.a, "A");
  enforce_real(out.b, "B");
  enforce_real(out.c, "C");
  out.is_real = true;
  return out;
}

LoewnerRealization build_hermite_loewner(const std::vector<TransferSample>& samples,
                                         const InterpolationData& data)
{
  data.validate();
  const Index r = data.size();
  if (static_cast<Index>(samples.size()) != r)
  {
    throw DimensionMismatch("one sample per interpolation point required");
  }
  for (Index i = 0; i < r; ++i)
  {
    if (!samples[static_cast<std::size_t>(i)].derivative)
    {
      throw MissingDerivative("Hermite Loewner construction requires derivative samples");
    }
    for (Index j = i + 1; j < r; ++j)
    {
      if (data.points[static_cast<std::size_t>(i)] == data.points[static_cast<std::size_t>(j)])
      {
        throw CoincidentPoints("interpolation points must be pairwise distinct");
      }
    }
  }

  const Index m = samples.front().value.cols();
  const Index p = samples.front().value.rows();
  LoewnerRealization rom;
  rom.e = Matrix(r, r);
  rom.a = Matrix(r, r);
  rom.b = Matrix(r, m);
  rom.c = Matrix(p, r);

  for (Index i = 0; i < r; ++i)
  {
    const auto& si = samples[static_cast<std::size_t>(i)];
    const Complex sigma_i = data.points[static_cast<std::size_t>(i)];
    const Vector& ci = data.left_dirs[static_cast<std::size_t>(i)];
    rom.b.row(i) = ci.adjoint() * si.value;
    rom.c.col(i) = si.value * data.right_dirs[static_cast<std::size_t>(i)];
    for (Index j = 0; j < r; ++j)
    {
      const auto& sj = samples[static_cast<std::size_t>(j)];
      const Complex sigma_j = data.points[static_cast<std::size_t>(j)];
      const Vector& bj = data.right_dirs[static_cast<std::size_t>(j)];
      if (i == j)
      {
        const Matrix& dh = *si.derivative;
        rom.e(i, i) = -(ci.adjoint() * dh * bj)(0, 0);
        // (sH)'(sigma) = H(sigma) + sigma H'(sigma)
        rom.a(i, i) = -(ci.adjoint() * (si.value + sigma_i * dh) * bj)(0, 0);
      }
      else
      {
        const Complex den = sigma_i - sigma_j;
        rom.e(i, j) = -(ci.adjoint() * (si.value - sj.value) * bj)(0, 0) / den;
        rom.a(i, j) =
            -(ci.adjoint() * (sigma_i * si.value - sigma_j * sj.value) * bj)(0, 0) / den;
      }
    }
  }
  rom.is_real = false;
  return rom;
}

TangentialDirections random_directions(const std::vector<TransferSample>& samples, Index m,
                                       Index p, std::mt19937_64& rng)
{
  std::normal_distribution<double> normal(0.0, 1.0);
  const auto draw = [&](Index dim, bool real_valued) {
    Vector v(dim);
    for (Index i = 0; i < dim; ++i)
    {
      const double re = normal(rng);
      const double im = real_valued ? 0.0 : normal(rng);
      v(i) = Complex{re, im};
    }
    const double n = v.norm();
    return Vector(v / (n > 0.0 ? n : 1.0));
  };

  TangentialDirections dirs;
  dirs.right.resize(samples.size());
  dirs.left.resize(samples.size());
  for (std::size_t i = 0; i < samples.size(); ++i)
  {
    // Conjugate points reuse the conjugated directions of their partner so
    // the dataset stays closed under conjugation.
    std::size_t partner = i;
    bool found = false;
    for (std::size_t j = 0; j < i; ++j)
    {
      if (samples[j].point == std::conj(samples[i].point) && samples[i].point.imag() != 0.0)
      {
        partner = j;
        found = true;
        break;
      }
    }
    if (found)
    {
      dirs.right[i] = dirs.right[partner].conjugate();
      dirs.left[i] = dirs.left[partner].conjugate();
    }
    else
    {
      const bool real_point = samples[i].point.imag() == 0.0;
      dirs.right[i] = draw(m, real_point);
      dirs.left[i] = draw(p, real_point);
    }
  }
  return dirs;
}

TruncatedLoewner identify(const std::vector<TransferSample>& samples,
                          const IdentifyOptions& options, std::mt19937_64& rng)
{
  if (samples.empty())
  {
    throw OddSampleCount("identification requires samples");
  }
  const Index p = samples.front().value.rows();
  const Index m = samples.front().value.cols();
  const TangentialDirections dirs = random_directions(samples, m, p, rng);
  const TangentialDataset data = partition_samples(samples, dirs);
  LoewnerRealization rom = build_loewner(data);
  if (options.realify)
  {
    std::vector<Complex> right_points, left_points;
    right_points.reserve(data.right.size());
    left_points.reserve(data.left.size());
    for (const auto& d : data.right)
    {
      right_points.push_back(d.kappa);
    }
    for (const auto& d : data.left)
    {
      left_points.push_back(d.mu);
    }
    rom = realify_loewner(rom, make_conjugate_pairing(left_points),
                          make_conjugate_pairing(right_points));
  }
  return truncate_loewner(rom, options.rel_tol, options.max_order);
}

}  // namespace strmor
