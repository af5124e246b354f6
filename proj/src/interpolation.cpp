// SPDX-License-Identifier: Apache-2.0
#include "strmor/interpolation.hpp"

#include <algorithm>
#include <sstream>
#include <vector>

#include "strmor/errors.hpp"
#include "strmor/numerics.hpp"

namespace strmor {

bool InterpolationData::closed_under_conjugation() const
{
  const Index r = size();
  std::vector<bool> matched(static_cast<std::size_t>(r), false);
  for (Index j = 0; j < r; ++j)
  {
    if (points[j].imag() == 0.0)
    {
      continue;
    }
    if (matched[j])
    {
      continue;
    }
    bool found = false;
    for (Index k = 0; k < r; ++k)
    {
      if (k == j || matched[k])
      {
        continue;
      }
      if (points[k] == std::conj(points[j]) && right_dirs[k] == right_dirs[j].conjugate() &&
          left_dirs[k] == left_dirs[j].conjugate())
      {
        matched[j] = true;
        matched[k] = true;
        found = true;
        break;
      }
    }
    if (!found)
    {
      return false;
    }
  }
  return true;
}

void InterpolationData::normalize_directions()
{
  for (auto& b : right_dirs)
  {
    const double n = b.norm();
    if (n == 0.0)
    {
      throw DimensionMismatch("tangential direction must be nonzero");
    }
    b /= n;
  }
  for (auto& c : left_dirs)
  {
    const double n = c.norm();
    if (n == 0.0)
    {
      throw DimensionMismatch("tangential direction must be nonzero");
    }
    c /= n;
  }
}

void InterpolationData::validate() const
{
  if (points.empty())
  {
    throw DimensionMismatch("interpolation data must contain at least one point");
  }
  if (points.size() != right_dirs.size() || points.size() != left_dirs.size())
  {
    throw DimensionMismatch("interpolation point/direction lists have unequal lengths");
  }
  for (const auto& b : right_dirs)
  {
    if (b.norm() == 0.0)
    {
      throw DimensionMismatch("right tangential direction is zero");
    }
  }
  for (const auto& c : left_dirs)
  {
    if (c.norm() == 0.0)
    {
      throw DimensionMismatch("left tangential direction is zero");
    }
  }
}

ProjectionBases build_tangential_bases(const StructuredSystem& sys,
                                       const InterpolationData& data, double drop_tol)
{
  data.validate();
  const Index r = data.size();
  Matrix v_raw(sys.order(), r);
  Matrix w_raw(sys.order(), r);
  for (Index j = 0; j < r; ++j)
  {
    const Complex sigma = data.points[j];
    if (sys.has_singular_term_at(sigma))
    {
      std::ostringstream msg;
      msg << "interpolation point (" << sigma.real() << ", " << sigma.imag()
          << ") hits a scalar term singularity";
      throw SingularTermPoint(msg.str());
    }
    try
    {
      const auto solver = sys.factorize(sigma);
      v_raw.col(j) = solver.solve(sys.eval_B(sigma) * data.right_dirs[j]);
      w_raw.col(j) = solver.solve_adjoint(sys.eval_C(sigma).adjoint() * data.left_dirs[j]);
    }
    catch (const SingularK&)
    {
      std::ostringstream msg;
      msg << "K singular at interpolation point (" << sigma.real() << ", " << sigma.imag()
          << ")";
      throw SingularK(msg.str());
    }
  }
  ProjectionBases bases;
  bases.v = numerics::orthonormal_basis(v_raw, drop_tol);
  bases.w = numerics::orthonormal_basis(w_raw, drop_tol);
  // A square projected K requires equal column counts; drop the last-added
  // columns of the larger basis.
  const Index cols = std::min(bases.v.cols(), bases.w.cols());
  bases.v = bases.v.leftCols(cols).eval();
  bases.w = bases.w.leftCols(cols).eval();
  bases.real_valued = false;
  return bases;
}

ProjectionBases realify_bases(const ProjectionBases& bases, const InterpolationData& data,
                              double drop_tol)
{
  if (!data.closed_under_conjugation())
  {
    throw NotConjugationClosed(
        "realify_bases requires interpolation data closed under conjugation");
  }
  const auto realify = [&](const Matrix& m) {
    RealMatrix stacked(m.rows(), 2 * m.cols());
    stacked << m.real(), m.imag();
    return numerics::orthonormal_basis_real(stacked, drop_tol);
  };
  RealMatrix v_r = realify(bases.v);
  RealMatrix w_r = realify(bases.w);
  const Index cols = std::min(v_r.cols(), w_r.cols());
  ProjectionBases out;
  out.v = v_r.leftCols(cols).cast<Complex>();
  out.w = w_r.leftCols(cols).cast<Complex>();
  out.real_valued = true;
  return out;
}

StructuredSystem project(const StructuredSystem& sys, const ProjectionBases& bases)
{
  if (bases.v.rows() != sys.order() || bases.w.rows() != sys.order())
  {
    throw DimensionMismatch("projection basis row count does not match system order");
  }
  if (bases.v.cols() != bases.w.cols() || bases.v.cols() == 0)
  {
    throw DimensionMismatch("projection bases must have equal, positive column counts");
  }
  std::vector<TermMatrix> k_terms, b_terms, c_terms;
  k_terms.reserve(sys.k_terms().size());
  b_terms.reserve(sys.b_terms().size());
  c_terms.reserve(sys.c_terms().size());
  for (const auto& t : sys.k_terms())
  {
    const Matrix reduced = bases.w.adjoint() * (t.mat * bases.v);
    k_terms.push_back(TermMatrix{t.g, reduced.sparseView(1.0, 0.0)});
  }
  for (const auto& t : sys.b_terms())
  {
    const Matrix reduced = bases.w.adjoint() * Matrix(t.mat);
    b_terms.push_back(TermMatrix{t.g, reduced.sparseView(1.0, 0.0)});
  }
  for (const auto& t : sys.c_terms())
  {
    const Matrix reduced = Matrix(t.mat) * bases.v;
    c_terms.push_back(TermMatrix{t.g, reduced.sparseView(1.0, 0.0)});
  }
  return StructuredSystem(std::move(k_terms), std::move(b_terms), std::move(c_terms),
                          bases.v.cols(), sys.num_inputs(), sys.num_outputs());
}

}  // namespace strmor
