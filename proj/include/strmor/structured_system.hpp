// SPDX-License-Identifier: Apache-2.0
#ifndef STRMOR_STRUCTURED_SYSTEM_HPP
#define STRMOR_STRUCTURED_SYSTEM_HPP

#include <memory>
#include <optional>
#include <vector>

#include <Eigen/SparseLU>

#include "strmor/scalar_term.hpp"
#include "strmor/types.hpp"

namespace strmor {

/// One transfer function measurement: H(s), optionally with H'(s).
struct TransferSample
{
  Complex point{};
  Matrix value;
  std::optional<Matrix> derivative;

  TransferSample() = default;
  TransferSample(Complex s, Matrix h);
  TransferSample(Complex s, Matrix h, Matrix dh);
};

/// Counters for transfer function evaluations, used by tests and by the
/// benchmark harness to verify algorithmic claims (e.g. that an algorithm
/// never evaluates transfer function derivatives).
struct EvalStats
{
  long long transfer_evals = 0;
  long long derivative_evals = 0;
};

/// Installs an EvalStats sink for the current thread; all transfer function
/// evaluations (structured or first-order realizations) are counted while
/// the scope is alive.
class EvalStatsScope
{
public:
  explicit EvalStatsScope(EvalStats& stats);
  ~EvalStatsScope();
  EvalStatsScope(const EvalStatsScope&) = delete;
  EvalStatsScope& operator=(const EvalStatsScope&) = delete;

private:
  EvalStats* previous_;
};

EvalStats* active_eval_stats();

/// A scalar-function-tagged constant matrix, one summand of a
/// frequency-affine matrix function.
struct TermMatrix
{
  ScalarTerm g;
  SparseMatrix mat;
};

/// Structured dynamical system in frequency-affine form:
///   K(s) = sum_j g_j(s) K_j,  B(s) = sum_j g_j(s) B_j,  C(s) = sum_j g_j(s) C_j,
/// with transfer function H(s) = C(s) K(s)^{-1} B(s).
///
/// Immutable after construction; all evaluations are pure and reentrant.
class StructuredSystem
{
public:
  StructuredSystem(std::vector<TermMatrix> k_terms, std::vector<TermMatrix> b_terms,
                   std::vector<TermMatrix> c_terms, Index n, Index m, Index p);

  Index order() const { return n_; }
  Index num_inputs() const { return m_; }
  Index num_outputs() const { return p_; }

  /// True when every stored matrix has exactly zero imaginary part.
  bool is_real() const { return is_real_; }
  /// True when the transfer function obeys conj(H(s)) = H(conj(s)):
  /// real matrices and reflective scalar terms only.
  bool is_reflective() const;

  const std::vector<TermMatrix>& k_terms() const { return k_terms_; }
  const std::vector<TermMatrix>& b_terms() const { return b_terms_; }
  const std::vector<TermMatrix>& c_terms() const { return c_terms_; }

  /// True when s is a singular point of any scalar term of the system.
  bool has_singular_term_at(Complex s) const;

  /// Dense K(s); throws SingularTermPoint at term singularities.
  Matrix eval_K(Complex s) const;
  SparseMatrix eval_K_sparse(Complex s) const;
  Matrix eval_B(Complex s) const;
  Matrix eval_C(Complex s) const;
  /// Term-derivative sums K'(s), B'(s), C'(s).
  SparseMatrix eval_K_derivative_sparse(Complex s) const;
  Matrix eval_B_derivative(Complex s) const;
  Matrix eval_C_derivative(Complex s) const;

  /// H(s) via one sparse factorization of K(s); never forms K(s)^{-1}.
  /// Throws SingularK when the factorization detects singularity.
  Matrix eval_transfer(Complex s) const;

  /// Analytic H'(s) = C'K^{-1}B + CK^{-1}B' - CK^{-1}K'K^{-1}B assembled
  /// from the scalar term derivatives (two solves with one factorization).
  Matrix eval_transfer_derivative(Complex s) const;

  /// Factorization of K(s) reusable for multiple right-hand sides,
  /// including adjoint solves K(s)^H X = R.
  class KSolver
  {
  public:
    Matrix solve(const Matrix& rhs) const;
    Matrix solve_adjoint(const Matrix& rhs) const;

  private:
    friend class StructuredSystem;
    std::shared_ptr<Eigen::SparseLU<SparseMatrix>> lu_;
  };

  KSolver factorize(Complex s) const;

private:
  std::vector<TermMatrix> k_terms_;
  std::vector<TermMatrix> b_terms_;
  std::vector<TermMatrix> c_terms_;
  Index n_ = 0;
  Index m_ = 0;
  Index p_ = 0;
  bool is_real_ = false;
};

/// Canonical constructors for the standard structures. Terms with an
/// all-zero matrix are omitted from the term lists. The realness flag is
/// set iff all inputs are real-valued.
StructuredSystem make_first_order(const Matrix& e, const Matrix& a, const Matrix& b,
                                  const Matrix& c);
StructuredSystem make_second_order(const Matrix& m, const Matrix& d, const Matrix& k,
                                   const Matrix& b, const Matrix& cp, const Matrix& cv);
StructuredSystem make_delay(const Matrix& e, const Matrix& a0, const Matrix& ad, double tau,
                            const Matrix& b, const Matrix& c);
StructuredSystem make_viscoelastic(const Matrix& m, const Matrix& k, const Matrix& g,
                                   double g0, double ginf, double tau, double alpha,
                                   const Matrix& b, const Matrix& c);
StructuredSystem make_gun(const Matrix& m, const Matrix& w1, const Matrix& w2,
                          const Matrix& k, double sigma1, double sigma2, const Matrix& b,
                          const Matrix& c);

/// Sparse-input variants for large generated systems.
StructuredSystem make_first_order_sparse(const SparseMatrix& e, const SparseMatrix& a,
                                         const Matrix& b, const Matrix& c);
StructuredSystem make_delay_sparse(const SparseMatrix& e, const SparseMatrix& a0,
                                   const SparseMatrix& ad, double tau, const Matrix& b,
                                   const Matrix& c);

}  // namespace strmor

#endif  // STRMOR_STRUCTURED_SYSTEM_HPP
