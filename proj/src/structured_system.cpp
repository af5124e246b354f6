// SPDX-License-Identifier: Apache-2.0
#include "strmor/structured_system.hpp"

#include <cmath>
#include <sstream>
#include <utility>

#include "strmor/errors.hpp"

namespace strmor {

namespace {

thread_local EvalStats* g_active_stats = nullptr;

bool sparse_is_real(const SparseMatrix& m)
{
  for (Index k = 0; k < m.outerSize(); ++k)
  {
    for (SparseMatrix::InnerIterator it(m, k); it; ++it)
    {
      if (it.value().imag() != 0.0)
      {
        return false;
      }
    }
  }
  return true;
}

bool sparse_is_zero(const SparseMatrix& m)
{
  for (Index k = 0; k < m.outerSize(); ++k)
  {
    for (SparseMatrix::InnerIterator it(m, k); it; ++it)
    {
      if (it.value() != Complex{0.0, 0.0})
      {
        return false;
      }
    }
  }
  return true;
}

SparseMatrix to_sparse(const Matrix& dense)
{
  SparseMatrix out = dense.sparseView(1.0, 0.0);
  out.makeCompressed();
  return out;
}

void append_term(std::vector<TermMatrix>& terms, ScalarTerm g, SparseMatrix mat)
{
  if (!sparse_is_zero(mat))
  {
    mat.makeCompressed();
    terms.push_back(TermMatrix{std::move(g), std::move(mat)});
  }
}

[[noreturn]] void throw_singular_k(Complex s)
{
  std::ostringstream msg;
  msg << "K(s) numerically singular at s = (" << s.real() << ", " << s.imag() << ")";
  throw SingularK(msg.str());
}

}  // namespace

TransferSample::TransferSample(Complex s, Matrix h) : point(s), value(std::move(h))
{
  if (!value.allFinite())
  {
    throw SingularK("transfer sample value is not finite");
  }
}

TransferSample::TransferSample(Complex s, Matrix h, Matrix dh)
    : TransferSample(s, std::move(h))
{
  derivative = std::move(dh);
}

EvalStatsScope::EvalStatsScope(EvalStats& stats) : previous_(g_active_stats)
{
  g_active_stats = &stats;
}

EvalStatsScope::~EvalStatsScope()
{
  g_active_stats = previous_;
}

EvalStats* active_eval_stats()
{
  return g_active_stats;
}

StructuredSystem::StructuredSystem(std::vector<TermMatrix> k_terms,
                                   std::vector<TermMatrix> b_terms,
                                   std::vector<TermMatrix> c_terms, Index n, Index m, Index p)
    : k_terms_(std::move(k_terms)),
      b_terms_(std::move(b_terms)),
      c_terms_(std::move(c_terms)),
      n_(n),
      m_(m),
      p_(p)
{
  if (n_ < 1 || m_ < 1 || p_ < 1)
  {
    throw DimensionMismatch("system dimensions must be positive");
  }
  for (const auto& t : k_terms_)
  {
    if (t.mat.rows() != n_ || t.mat.cols() != n_)
    {
      throw DimensionMismatch("K term is not n x n");
    }
  }
  for (const auto& t : b_terms_)
  {
    if (t.mat.rows() != n_ || t.mat.cols() != m_)
    {
      throw DimensionMismatch("B term is not n x m");
    }
  }
  for (const auto& t : c_terms_)
  {
    if (t.mat.rows() != p_ || t.mat.cols() != n_)
    {
      throw DimensionMismatch("C term is not p x n");
    }
  }
  is_real_ = true;
  for (const auto* list : {&k_terms_, &b_terms_, &c_terms_})
  {
    for (const auto& t : *list)
    {
      if (!sparse_is_real(t.mat))
      {
        is_real_ = false;
        break;
      }
    }
  }
}

bool StructuredSystem::is_reflective() const
{
  if (!is_real_)
  {
    return false;
  }
  for (const auto* list : {&k_terms_, &b_terms_, &c_terms_})
  {
    for (const auto& t : *list)
    {
      if (!t.g.reflective())
      {
        return false;
      }
    }
  }
  return true;
}

bool StructuredSystem::has_singular_term_at(Complex s) const
{
  for (const auto* list : {&k_terms_, &b_terms_, &c_terms_})
  {
    for (const auto& t : *list)
    {
      if (t.g.is_singular_at(s))
      {
        return true;
      }
    }
  }
  return false;
}

SparseMatrix StructuredSystem::eval_K_sparse(Complex s) const
{
  SparseMatrix k(n_, n_);
  for (const auto& t : k_terms_)
  {
    k += t.g.value(s) * t.mat;
  }
  k.makeCompressed();
  return k;
}

Matrix StructuredSystem::eval_K(Complex s) const
{
  return Matrix(eval_K_sparse(s));
}

SparseMatrix StructuredSystem::eval_K_derivative_sparse(Complex s) const
{
  SparseMatrix k(n_, n_);
  for (const auto& t : k_terms_)
  {
    k += t.g.derivative(s) * t.mat;
  }
  k.makeCompressed();
  return k;
}

Matrix StructuredSystem::eval_B(Complex s) const
{
  Matrix b = Matrix::Zero(n_, m_);
  for (const auto& t : b_terms_)
  {
    b += t.g.value(s) * Matrix(t.mat);
  }
  return b;
}

Matrix StructuredSystem::eval_B_derivative(Complex s) const
{
  Matrix b = Matrix::Zero(n_, m_);
  for (const auto& t : b_terms_)
  {
    b += t.g.derivative(s) * Matrix(t.mat);
  }
  return b;
}

Matrix StructuredSystem::eval_C(Complex s) const
{
  Matrix c = Matrix::Zero(p_, n_);
  for (const auto& t : c_terms_)
  {
    c += t.g.value(s) * Matrix(t.mat);
  }
  return c;
}

Matrix StructuredSystem::eval_C_derivative(Complex s) const
{
  Matrix c = Matrix::Zero(p_, n_);
  for (const auto& t : c_terms_)
  {
    c += t.g.derivative(s) * Matrix(t.mat);
  }
  return c;
}

StructuredSystem::KSolver StructuredSystem::factorize(Complex s) const
{
  const SparseMatrix k = eval_K_sparse(s);
  auto lu = std::make_shared<Eigen::SparseLU<SparseMatrix>>();
  lu->compute(k);
  if (lu->info() != Eigen::Success)
  {
    throw_singular_k(s);
  }
  KSolver solver;
  solver.lu_ = std::move(lu);
  return solver;
}

Matrix StructuredSystem::KSolver::solve(const Matrix& rhs) const
{
  Matrix x = lu_->solve(rhs);
  if (!x.allFinite())
  {
    throw SingularK("K(s) solve produced non-finite values");
  }
  return x;
}

Matrix StructuredSystem::KSolver::solve_adjoint(const Matrix& rhs) const
{
  Matrix x = lu_->adjoint().solve(rhs);
  if (!x.allFinite())
  {
    throw SingularK("K(s)^H solve produced non-finite values");
  }
  return x;
}

Matrix StructuredSystem::eval_transfer(Complex s) const
{
  if (auto* stats = active_eval_stats())
  {
    ++stats->transfer_evals;
  }
  const KSolver solver = factorize(s);
  const Matrix x = solver.solve(eval_B(s));
  return eval_C(s) * x;
}

Matrix StructuredSystem::eval_transfer_derivative(Complex s) const
{
  if (auto* stats = active_eval_stats())
  {
    ++stats->derivative_evals;
  }
  const KSolver solver = factorize(s);
  const Matrix x = solver.solve(eval_B(s));
  const Matrix rhs = eval_B_derivative(s) - eval_K_derivative_sparse(s) * x;
  const Matrix z = solver.solve(rhs);
  return eval_C_derivative(s) * x + eval_C(s) * z;
}

namespace {

StructuredSystem build(std::vector<TermMatrix> k, std::vector<TermMatrix> b,
                       std::vector<TermMatrix> c, Index n, Index m, Index p)
{
  return StructuredSystem(std::move(k), std::move(b), std::move(c), n, m, p);
}

}  // namespace

StructuredSystem make_first_order(const Matrix& e, const Matrix& a, const Matrix& b,
                                  const Matrix& c)
{
  std::vector<TermMatrix> k_terms, b_terms, c_terms;
  append_term(k_terms, ScalarTerm::monomial(1), to_sparse(e));
  append_term(k_terms, ScalarTerm::constant(), to_sparse(-a));
  append_term(b_terms, ScalarTerm::constant(), to_sparse(b));
  append_term(c_terms, ScalarTerm::constant(), to_sparse(c));
  return build(std::move(k_terms), std::move(b_terms), std::move(c_terms), e.rows(), b.cols(),
               c.rows());
}

StructuredSystem make_second_order(const Matrix& m, const Matrix& d, const Matrix& k,
                                   const Matrix& b, const Matrix& cp, const Matrix& cv)
{
  std::vector<TermMatrix> k_terms, b_terms, c_terms;
  append_term(k_terms, ScalarTerm::monomial(2), to_sparse(m));
  append_term(k_terms, ScalarTerm::monomial(1), to_sparse(d));
  append_term(k_terms, ScalarTerm::constant(), to_sparse(k));
  append_term(b_terms, ScalarTerm::constant(), to_sparse(b));
  append_term(c_terms, ScalarTerm::constant(), to_sparse(cp));
  append_term(c_terms, ScalarTerm::monomial(1), to_sparse(cv));
  return build(std::move(k_terms), std::move(b_terms), std::move(c_terms), m.rows(), b.cols(),
               cp.rows());
}

StructuredSystem make_delay(const Matrix& e, const Matrix& a0, const Matrix& ad, double tau,
                            const Matrix& b, const Matrix& c)
{
  std::vector<TermMatrix> k_terms, b_terms, c_terms;
  append_term(k_terms, ScalarTerm::monomial(1), to_sparse(e));
  append_term(k_terms, ScalarTerm::constant(), to_sparse(-a0));
  append_term(k_terms, ScalarTerm::exp_delay(tau), to_sparse(-ad));
  append_term(b_terms, ScalarTerm::constant(), to_sparse(b));
  append_term(c_terms, ScalarTerm::constant(), to_sparse(c));
  return build(std::move(k_terms), std::move(b_terms), std::move(c_terms), e.rows(), b.cols(),
               c.rows());
}

StructuredSystem make_viscoelastic(const Matrix& m, const Matrix& k, const Matrix& g,
                                   double g0, double ginf, double tau, double alpha,
                                   const Matrix& b, const Matrix& c)
{
  std::vector<TermMatrix> k_terms, b_terms, c_terms;
  append_term(k_terms, ScalarTerm::monomial(2), to_sparse(m));
  append_term(k_terms, ScalarTerm::constant(), to_sparse(k));
  append_term(k_terms, ScalarTerm::fractional_kelvin(g0, ginf, tau, alpha), to_sparse(g));
  append_term(b_terms, ScalarTerm::constant(), to_sparse(b));
  append_term(c_terms, ScalarTerm::constant(), to_sparse(c));
  return build(std::move(k_terms), std::move(b_terms), std::move(c_terms), m.rows(), b.cols(),
               c.rows());
}

StructuredSystem make_gun(const Matrix& m, const Matrix& w1, const Matrix& w2,
                          const Matrix& k, double sigma1, double sigma2, const Matrix& b,
                          const Matrix& c)
{
  std::vector<TermMatrix> k_terms, b_terms, c_terms;
  append_term(k_terms, ScalarTerm::monomial(2), to_sparse(m));
  append_term(k_terms, ScalarTerm::sqrt_shift(sigma1, true), to_sparse(w1));
  append_term(k_terms, ScalarTerm::sqrt_shift(sigma2, true), to_sparse(w2));
  append_term(k_terms, ScalarTerm::constant(), to_sparse(k));
  append_term(b_terms, ScalarTerm::constant(), to_sparse(b));
  append_term(c_terms, ScalarTerm::constant(), to_sparse(c));
  return build(std::move(k_terms), std::move(b_terms), std::move(c_terms), m.rows(), b.cols(),
               c.rows());
}

StructuredSystem make_first_order_sparse(const SparseMatrix& e, const SparseMatrix& a,
                                         const Matrix& b, const Matrix& c)
{
  std::vector<TermMatrix> k_terms, b_terms, c_terms;
  append_term(k_terms, ScalarTerm::monomial(1), e);
  append_term(k_terms, ScalarTerm::constant(), SparseMatrix(-a));
  append_term(b_terms, ScalarTerm::constant(), to_sparse(b));
  append_term(c_terms, ScalarTerm::constant(), to_sparse(c));
  return build(std::move(k_terms), std::move(b_terms), std::move(c_terms), e.rows(), b.cols(),
               c.rows());
}

StructuredSystem make_delay_sparse(const SparseMatrix& e, const SparseMatrix& a0,
                                   const SparseMatrix& ad, double tau, const Matrix& b,
                                   const Matrix& c)
{
  std::vector<TermMatrix> k_terms, b_terms, c_terms;
  append_term(k_terms, ScalarTerm::monomial(1), e);
  append_term(k_terms, ScalarTerm::constant(), SparseMatrix(-a0));
  append_term(k_terms, ScalarTerm::exp_delay(tau), SparseMatrix(-ad));
  append_term(b_terms, ScalarTerm::constant(), to_sparse(b));
  append_term(c_terms, ScalarTerm::constant(), to_sparse(c));
  return build(std::move(k_terms), std::move(b_terms), std::move(c_terms), e.rows(), b.cols(),
               c.rows());
}

}  // namespace strmor
