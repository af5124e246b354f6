// SPDX-License-Identifier: Apache-2.0
#ifndef STRMOR_SCALAR_TERM_HPP
#define STRMOR_SCALAR_TERM_HPP

#include <string>

#include "strmor/types.hpp"

namespace strmor {

/// Scalar coefficient function g(s) attached to a constant system matrix.
///
/// Each kind defines g and its analytic derivative g'. Evaluation at a
/// branch cut, branch point, or pole raises SingularTermPoint instead of
/// returning a silent NaN.
///
/// Branch conventions: fractional powers and square roots use the principal
/// branch. For sqrt_shift the real interval [-cutoff, cutoff] is treated as
/// singular; for fractional_kelvin the closed negative real axis is.
class ScalarTerm
{
public:
  enum class Kind
  {
    constant,
    monomial,
    exp_delay,
    fractional_kelvin,
    sqrt_shift,
  };

  static ScalarTerm constant();
  static ScalarTerm monomial(int power);
  static ScalarTerm exp_delay(double tau);
  static ScalarTerm fractional_kelvin(double g0, double ginf, double tau, double alpha);
  static ScalarTerm sqrt_shift(double cutoff, bool imaginary_unit_factor);

  Kind kind() const { return kind_; }
  int power() const { return power_; }
  double tau() const { return tau_; }
  double g0() const { return g0_; }
  double ginf() const { return ginf_; }
  double alpha() const { return alpha_; }
  double cutoff() const { return cutoff_; }
  bool imaginary_unit_factor() const { return unit_factor_; }

  /// g(s); throws SingularTermPoint on the kind's singular set.
  Complex value(Complex s) const;

  /// g'(s); throws SingularTermPoint on the kind's singular set.
  Complex derivative(Complex s) const;

  /// True when s lies on the singular set (branch cut / pole) of this term.
  bool is_singular_at(Complex s) const;

  /// True when g satisfies conj(g(s)) = g(conj(s)); the exponential, power
  /// and rational kinds do, sqrt_shift with the imaginary-unit factor does not.
  bool reflective() const;

  /// Exact structural equality (kind and all parameters).
  bool operator==(const ScalarTerm& other) const;

  std::string describe() const;

private:
  ScalarTerm() = default;

  Kind kind_ = Kind::constant;
  int power_ = 0;
  double tau_ = 0.0;
  double g0_ = 0.0;
  double ginf_ = 0.0;
  double alpha_ = 0.0;
  double cutoff_ = 0.0;
  bool unit_factor_ = false;
};

}  // namespace strmor

#endif  // STRMOR_SCALAR_TERM_HPP
