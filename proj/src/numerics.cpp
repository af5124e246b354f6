// SPDX-License-Identifier: Apache-2.0
#include "strmor/numerics.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include <Eigen/Dense>
#include <Eigen/SVD>

#include "strmor/errors.hpp"

// Eigen does not provide a complex-valued two-sided generalized eigenvalue
// solver, so LAPACK's QZ driver is used directly.
extern "C"
{
  void zggev_(const char* jobvl, const char* jobvr, const int* n, std::complex<double>* a,
              const int* lda, std::complex<double>* b, const int* ldb,
              std::complex<double>* alpha, std::complex<double>* beta,
              std::complex<double>* vl, const int* ldvl, std::complex<double>* vr,
              const int* ldvr, std::complex<double>* work, const int* lwork, double* rwork,
              int* info);
}

namespace strmor::numerics {

namespace {

void check_pivots(const Eigen::PartialPivLU<Matrix>& lu, double max_abs, double pivot_rtol)
{
  const double tol = pivot_rtol * max_abs;
  const auto diag = lu.matrixLU().diagonal();
  for (Index i = 0; i < diag.size(); ++i)
  {
    if (std::abs(diag(i)) <= tol)
    {
      std::ostringstream msg;
      msg << "matrix numerically singular: pivot " << std::abs(diag(i)) << " below "
          << tol;
      throw SingularK(msg.str());
    }
  }
}

// det(A - lambda E) probed at fixed points; all vanishing means the pencil
// is singular as a polynomial in lambda.
bool pencil_is_singular(const Matrix& a, const Matrix& e, double rtol)
{
  const Complex probes[] = {{0.731, 0.327}, {-1.113, 2.219}, {3.317, -0.451}};
  const double scale = std::max(a.cwiseAbs().maxCoeff(), e.cwiseAbs().maxCoeff());
  if (scale == 0.0)
  {
    return true;
  }
  const Index n = a.rows();
  for (const Complex& lambda : probes)
  {
    const Matrix shifted = a - lambda * e;
    Eigen::PartialPivLU<Matrix> lu(shifted);
    // |det|^(1/n) compared against the entry scale keeps the test
    // dimension-independent.
    double log_abs_det = 0.0;
    bool zero_pivot = false;
    const auto diag = lu.matrixLU().diagonal();
    for (Index i = 0; i < n; ++i)
    {
      const double p = std::abs(diag(i));
      if (p == 0.0)
      {
        zero_pivot = true;
        break;
      }
      log_abs_det += std::log(p);
    }
    if (!zero_pivot && std::exp(log_abs_det / static_cast<double>(n)) > rtol * scale)
    {
      return false;
    }
  }
  return true;
}

}  // namespace

Matrix solve_linear(const Matrix& a, const Matrix& rhs, bool adjoint, const Config& cfg)
{
  if (a.rows() != a.cols())
  {
    throw DimensionMismatch("solve_linear: matrix must be square");
  }
  if (rhs.rows() != a.rows())
  {
    throw DimensionMismatch("solve_linear: RHS row count does not match matrix order");
  }
  Eigen::PartialPivLU<Matrix> lu(a);
  check_pivots(lu, a.cwiseAbs().maxCoeff(), cfg.pivot_rtol);
  if (adjoint)
  {
    return lu.adjoint().solve(rhs);
  }
  return lu.solve(rhs);
}

namespace {

// Modified Gram-Schmidt with one reorthogonalization pass. Shared by the
// complex and real variants.
template <typename Mat>
Mat mgs_basis(const Mat& m, double drop_tol)
{
  const Index rows = m.rows();
  const Index cols = m.cols();
  double scale = 0.0;
  for (Index j = 0; j < cols; ++j)
  {
    scale = std::max(scale, m.col(j).norm());
  }
  Mat q(rows, cols);
  Index accepted = 0;
  if (scale == 0.0)
  {
    return Mat(rows, 0);
  }
  const double threshold = drop_tol * scale;
  for (Index j = 0; j < cols; ++j)
  {
    typename Mat::PlainObject v = m.col(j);
    for (int pass = 0; pass < 2; ++pass)
    {
      for (Index i = 0; i < accepted; ++i)
      {
        v -= q.col(i) * (q.col(i).adjoint() * v)(0, 0);
      }
    }
    const double norm = v.norm();
    if (norm > threshold)
    {
      q.col(accepted) = v / norm;
      ++accepted;
    }
  }
  return q.leftCols(accepted);
}

}  // namespace

Matrix orthonormal_basis(const Matrix& m, double drop_tol)
{
  return mgs_basis(m, drop_tol);
}

RealMatrix orthonormal_basis_real(const RealMatrix& m, double drop_tol)
{
  return mgs_basis(m, drop_tol);
}

TruncatedSvd truncated_svd(const Matrix& m, double rel_tol, std::optional<Index> max_rank)
{
  Eigen::JacobiSVD<Matrix> svd(m, Eigen::ComputeThinU | Eigen::ComputeThinV);
  const RealVector& sigma = svd.singularValues();
  Index rank = 0;
  if (sigma.size() > 0 && sigma(0) > 0.0)
  {
    const double cutoff = rel_tol * sigma(0);
    while (rank < sigma.size() && sigma(rank) >= cutoff && sigma(rank) > 0.0)
    {
      ++rank;
    }
  }
  if (max_rank)
  {
    rank = std::min(rank, std::max<Index>(*max_rank, 0));
  }
  TruncatedSvd out;
  out.u = svd.matrixU().leftCols(rank);
  out.v = svd.matrixV().leftCols(rank);
  out.singular_values = sigma.head(rank);
  out.all_singular_values = sigma;
  return out;
}

std::vector<EigenTriple> generalized_eig(const Matrix& a, const Matrix& e, const Config& cfg)
{
  if (a.rows() != a.cols() || e.rows() != e.cols() || a.rows() != e.rows())
  {
    throw DimensionMismatch("generalized_eig: A and E must be square of equal order");
  }
  const Index n = a.rows();
  if (n == 0)
  {
    return {};
  }
  if (pencil_is_singular(a, e, cfg.pencil_probe_rtol))
  {
    throw SingularPencil("pencil (A, E) is singular: det(A - lambda E) vanishes identically");
  }

  Matrix a_work = a;
  Matrix e_work = e;
  const int n_int = static_cast<int>(n);
  std::vector<Complex> alpha(n), beta(n);
  Matrix vl(n, n), vr(n, n);
  std::vector<double> rwork(8 * static_cast<std::size_t>(n));
  int lwork = std::max(4 * n_int, 1);
  std::vector<Complex> work(static_cast<std::size_t>(lwork));
  int info = 0;
  const char jobvl = 'V';
  const char jobvr = 'V';
  zggev_(&jobvl, &jobvr, &n_int, a_work.data(), &n_int, e_work.data(), &n_int, alpha.data(),
         beta.data(), vl.data(), &n_int, vr.data(), &n_int, work.data(), &lwork, rwork.data(),
         &info);
  if (info != 0)
  {
    std::ostringstream msg;
    msg << "zggev failed with info = " << info;
    throw SingularPencil(msg.str());
  }

  const double norm_a = a.norm();
  const double norm_e = e.norm();
  const double infinite_threshold =
      cfg.infinite_eig_rtol * norm_a / std::max(norm_e, 1e-300);

  std::vector<EigenTriple> triples;
  triples.reserve(static_cast<std::size_t>(n));
  for (Index j = 0; j < n; ++j)
  {
    EigenTriple t;
    const Complex al = alpha[static_cast<std::size_t>(j)];
    const Complex be = beta[static_cast<std::size_t>(j)];
    if (be == Complex{0.0, 0.0})
    {
      t.finite = false;
      t.lambda = Complex{std::numeric_limits<double>::infinity(), 0.0};
    }
    else
    {
      t.lambda = al / be;
      t.finite = std::isfinite(t.lambda.real()) && std::isfinite(t.lambda.imag()) &&
                 std::abs(t.lambda) <= infinite_threshold;
    }
    t.x = vr.col(j);
    t.y = vl.col(j);
    const double nx = t.x.norm();
    const double ny = t.y.norm();
    if (nx > 0.0)
    {
      t.x /= nx;
    }
    if (ny > 0.0)
    {
      t.y /= ny;
    }
    triples.push_back(std::move(t));
  }
  return triples;
}

}  // namespace strmor::numerics
