// SPDX-License-Identifier: Apache-2.0
#include "strmor/generators.hpp"

#include <cmath>
#include <vector>

#include "strmor/errors.hpp"

namespace strmor {

namespace {

// Split n nodes into count contiguous sections; the first (n mod count)
// sections get one extra node.
std::vector<std::pair<Index, Index>> sections(Index n, Index count)
{
  std::vector<std::pair<Index, Index>> out;
  const Index base = n / count;
  const Index extra = n % count;
  Index start = 0;
  for (Index s = 0; s < count; ++s)
  {
    const Index len = base + (s < extra ? 1 : 0);
    out.emplace_back(start, len);
    start += len;
  }
  return out;
}

SparseMatrix identity_sparse(Index n, Complex scale)
{
  SparseMatrix eye(n, n);
  eye.setIdentity();
  return SparseMatrix(scale * eye);
}

SparseMatrix tridiag_sparse(Index n, double off, double diag, double scale)
{
  std::vector<Eigen::Triplet<Complex>> trip;
  trip.reserve(static_cast<std::size_t>(3 * n));
  for (Index i = 0; i < n; ++i)
  {
    trip.emplace_back(i, i, Complex{scale * diag, 0.0});
    if (i + 1 < n)
    {
      trip.emplace_back(i, i + 1, Complex{scale * off, 0.0});
      trip.emplace_back(i + 1, i, Complex{scale * off, 0.0});
    }
  }
  SparseMatrix m(n, n);
  m.setFromTriplets(trip.begin(), trip.end());
  m.makeCompressed();
  return m;
}

}  // namespace

StructuredSystem generate_heated_rod(Index n, double tau, double gain, Index m, Index p)
{
  if (n < 3)
  {
    throw BadSectioning("heated rod requires n >= 3");
  }
  if (m < 1 || p < 1 || m > n || p > n)
  {
    throw BadSectioning("section counts must lie in [1, n]");
  }
  const double inv_h2 = static_cast<double>((n + 1) * (n + 1));
  const SparseMatrix e = identity_sparse(n, Complex{1.0, 0.0});
  const SparseMatrix a0 = tridiag_sparse(n, 1.0, -2.0, inv_h2);
  const SparseMatrix ad = identity_sparse(n, Complex{-gain, 0.0});

  Matrix b = Matrix::Zero(n, m);
  for (Index s = 0; s < m; ++s)
  {
    const auto [start, len] = sections(n, m)[static_cast<std::size_t>(s)];
    for (Index i = 0; i < len; ++i)
    {
      b(start + i, s) = Complex{1.0, 0.0};
    }
  }
  Matrix c = Matrix::Zero(p, n);
  for (Index s = 0; s < p; ++s)
  {
    const auto [start, len] = sections(n, p)[static_cast<std::size_t>(s)];
    for (Index i = 0; i < len; ++i)
    {
      c(s, start + i) = Complex{1.0 / static_cast<double>(len), 0.0};
    }
  }
  return make_delay_sparse(e, a0, ad, tau, b, c);
}

StructuredSystem generate_msd_chain(Index k_masses, double mass, double stiffness,
                                    double damping_ratio, const IOSpec& io_spec)
{
  if (k_masses < 1)
  {
    throw BadIOSpec("chain needs at least one mass");
  }
  if (io_spec.inputs.empty() || io_spec.outputs.empty())
  {
    throw BadIOSpec("io_spec must name at least one input and one output");
  }
  for (Index i : io_spec.inputs)
  {
    if (i < 0 || i >= k_masses)
    {
      throw BadIOSpec("input index out of range");
    }
  }
  for (Index i : io_spec.outputs)
  {
    if (i < 0 || i >= k_masses)
    {
      throw BadIOSpec("output index out of range");
    }
  }

  const Matrix m_mat = mass * Matrix::Identity(k_masses, k_masses);
  Matrix k_mat = Matrix::Zero(k_masses, k_masses);
  for (Index i = 0; i < k_masses; ++i)
  {
    k_mat(i, i) = Complex{2.0 * stiffness, 0.0};
    if (i + 1 < k_masses)
    {
      k_mat(i, i + 1) = Complex{-stiffness, 0.0};
      k_mat(i + 1, i) = Complex{-stiffness, 0.0};
    }
  }

  // Stiffness-proportional Rayleigh damping D = beta K with
  // beta = 2 zeta / omega_1; the first mode of tridiag(-1, 2, -1) is
  // 4 sin^2(pi / (2 (k + 1))).
  Matrix d_mat = Matrix::Zero(k_masses, k_masses);
  if (damping_ratio != 0.0)
  {
    const double lambda1 =
        4.0 * std::pow(std::sin(M_PI / (2.0 * static_cast<double>(k_masses + 1))), 2);
    const double omega1 = std::sqrt(stiffness * lambda1 / mass);
    const double beta = 2.0 * damping_ratio / omega1;
    d_mat = beta * k_mat;
  }

  Matrix b = Matrix::Zero(k_masses, static_cast<Index>(io_spec.inputs.size()));
  for (std::size_t j = 0; j < io_spec.inputs.size(); ++j)
  {
    b(io_spec.inputs[j], static_cast<Index>(j)) = Complex{1.0, 0.0};
  }
  Matrix cp = Matrix::Zero(static_cast<Index>(io_spec.outputs.size()), k_masses);
  for (std::size_t j = 0; j < io_spec.outputs.size(); ++j)
  {
    cp(static_cast<Index>(j), io_spec.outputs[j]) = Complex{1.0, 0.0};
  }
  const Matrix cv = Matrix::Zero(cp.rows(), k_masses);
  return make_second_order(m_mat, d_mat, k_mat, b, cp, cv);
}

}  // namespace strmor
