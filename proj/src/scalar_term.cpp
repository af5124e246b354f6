// SPDX-License-Identifier: Apache-2.0
#include "strmor/scalar_term.hpp"

#include <cmath>
#include <sstream>

#include "strmor/errors.hpp"

namespace strmor {

namespace {

// Pole detection threshold for the Kelvin denominator 1 + (s tau)^alpha.
constexpr double kDenominatorTol = 1e-14;

[[noreturn]] void throw_singular(const ScalarTerm& term, Complex s)
{
  std::ostringstream msg;
  msg << "scalar term " << term.describe() << " is singular at s = (" << s.real() << ", "
      << s.imag() << ")";
  throw SingularTermPoint(msg.str());
}

}  // namespace

ScalarTerm ScalarTerm::constant()
{
  ScalarTerm t;
  t.kind_ = Kind::constant;
  return t;
}

ScalarTerm ScalarTerm::monomial(int power)
{
  if (power < 1)
  {
    throw DimensionMismatch("monomial power must be >= 1");
  }
  ScalarTerm t;
  t.kind_ = Kind::monomial;
  t.power_ = power;
  return t;
}

ScalarTerm ScalarTerm::exp_delay(double tau)
{
  if (!(tau > 0.0))
  {
    throw DimensionMismatch("exp_delay requires tau > 0");
  }
  ScalarTerm t;
  t.kind_ = Kind::exp_delay;
  t.tau_ = tau;
  return t;
}

ScalarTerm ScalarTerm::fractional_kelvin(double g0, double ginf, double tau, double alpha)
{
  if (!(tau > 0.0) || !(alpha > 0.0 && alpha < 2.0))
  {
    throw DimensionMismatch("fractional_kelvin requires tau > 0 and alpha in (0, 2)");
  }
  ScalarTerm t;
  t.kind_ = Kind::fractional_kelvin;
  t.g0_ = g0;
  t.ginf_ = ginf;
  t.tau_ = tau;
  t.alpha_ = alpha;
  return t;
}

ScalarTerm ScalarTerm::sqrt_shift(double cutoff, bool imaginary_unit_factor)
{
  if (!(cutoff >= 0.0))
  {
    throw DimensionMismatch("sqrt_shift requires cutoff >= 0");
  }
  ScalarTerm t;
  t.kind_ = Kind::sqrt_shift;
  t.cutoff_ = cutoff;
  t.unit_factor_ = imaginary_unit_factor;
  return t;
}

bool ScalarTerm::is_singular_at(Complex s) const
{
  switch (kind_)
  {
    case Kind::constant:
    case Kind::monomial:
    case Kind::exp_delay:
      return false;
    case Kind::fractional_kelvin:
    {
      // Principal branch of (s tau)^alpha: cut on the closed negative real
      // axis of s (tau > 0), plus poles of the rational envelope.
      if (s.imag() == 0.0 && s.real() <= 0.0)
      {
        return true;
      }
      const Complex u = std::pow(s * tau_, alpha_);
      return std::abs(1.0 + u) < kDenominatorTol * (1.0 + std::abs(u));
    }
    case Kind::sqrt_shift:
      // Branch points at +-cutoff and the cut between them.
      return s.imag() == 0.0 && std::abs(s.real()) <= cutoff_;
  }
  return false;
}

Complex ScalarTerm::value(Complex s) const
{
  if (is_singular_at(s))
  {
    throw_singular(*this, s);
  }
  switch (kind_)
  {
    case Kind::constant:
      return Complex{1.0, 0.0};
    case Kind::monomial:
      return ipow(s, power_);
    case Kind::exp_delay:
      return std::exp(-tau_ * s);
    case Kind::fractional_kelvin:
    {
      const Complex u = std::pow(s * tau_, alpha_);
      return (g0_ + ginf_ * u) / (1.0 + u);
    }
    case Kind::sqrt_shift:
    {
      const Complex root = std::sqrt(s * s - cutoff_ * cutoff_);
      return unit_factor_ ? kImaginaryUnit * root : root;
    }
  }
  throw_singular(*this, s);
}

Complex ScalarTerm::derivative(Complex s) const
{
  if (is_singular_at(s))
  {
    throw_singular(*this, s);
  }
  switch (kind_)
  {
    case Kind::constant:
      return Complex{0.0, 0.0};
    case Kind::monomial:
      return static_cast<double>(power_) * ipow(s, power_ - 1);
    case Kind::exp_delay:
      return -tau_ * std::exp(-tau_ * s);
    case Kind::fractional_kelvin:
    {
      // g = (G0 + Ginf u) / (1 + u), u = (s tau)^alpha, u' = alpha u / s.
      const Complex u = std::pow(s * tau_, alpha_);
      const Complex du = alpha_ * u / s;
      const Complex den = 1.0 + u;
      return (ginf_ - g0_) * du / (den * den);
    }
    case Kind::sqrt_shift:
    {
      const Complex root = std::sqrt(s * s - cutoff_ * cutoff_);
      if (std::abs(root) == 0.0)
      {
        throw_singular(*this, s);
      }
      const Complex d = s / root;
      return unit_factor_ ? kImaginaryUnit * d : d;
    }
  }
  throw_singular(*this, s);
}

bool ScalarTerm::reflective() const
{
  if (kind_ == Kind::sqrt_shift)
  {
    return !unit_factor_;
  }
  return true;
}

bool ScalarTerm::operator==(const ScalarTerm& other) const
{
  return kind_ == other.kind_ && power_ == other.power_ && tau_ == other.tau_ &&
         g0_ == other.g0_ && ginf_ == other.ginf_ && alpha_ == other.alpha_ &&
         cutoff_ == other.cutoff_ && unit_factor_ == other.unit_factor_;
}

std::string ScalarTerm::describe() const
{
  std::ostringstream out;
  switch (kind_)
  {
    case Kind::constant:
      out << "constant";
      break;
    case Kind::monomial:
      out << "monomial(" << power_ << ")";
      break;
    case Kind::exp_delay:
      out << "exp_delay(tau=" << tau_ << ")";
      break;
    case Kind::fractional_kelvin:
      out << "fractional_kelvin(G0=" << g0_ << ", Ginf=" << ginf_ << ", tau=" << tau_
          << ", alpha=" << alpha_ << ")";
      break;
    case Kind::sqrt_shift:
      out << "sqrt_shift(cutoff=" << cutoff_ << ", i_factor=" << (unit_factor_ ? 1 : 0) << ")";
      break;
  }
  return out.str();
}

}  // namespace strmor
