// SPDX-License-Identifier: Apache-2.0
#ifndef STRMOR_ERRORS_HPP
#define STRMOR_ERRORS_HPP

#include <stdexcept>
#include <string>

namespace strmor {

/// Base class for all errors raised by the library.
class Error : public std::runtime_error
{
public:
  using std::runtime_error::runtime_error;
};

/// Evaluation of a scalar coefficient function at a branch point, on a
/// branch cut, or at a pole of the function.
class SingularTermPoint : public Error
{
public:
  using Error::Error;
};

/// K(s) (or a dense system matrix) detected as numerically singular.
class SingularK : public Error
{
public:
  using Error::Error;
};

class DimensionMismatch : public Error
{
public:
  using Error::Error;
};

class NotConjugationClosed : public Error
{
public:
  using Error::Error;
};

class DuplicatePoint : public Error
{
public:
  using Error::Error;
};

class OddSampleCount : public Error
{
public:
  using Error::Error;
};

class CoincidentPoints : public Error
{
public:
  using Error::Error;
};

class MissingDerivative : public Error
{
public:
  using Error::Error;
};

class SingularPencil : public Error
{
public:
  using Error::Error;
};

class NoFiniteEigenvalues : public Error
{
public:
  using Error::Error;
};

/// Dominance is undefined for poles on (or numerically on) the imaginary axis.
class ImaginaryAxisPole : public Error
{
public:
  using Error::Error;
};

/// No eigentriple fell inside (or near, with the boundary rule) the
/// requested frequency region.
class EmptySelection : public Error
{
public:
  using Error::Error;
};

class BadSectioning : public Error
{
public:
  using Error::Error;
};

class BadIOSpec : public Error
{
public:
  using Error::Error;
};

class FileNotFound : public Error
{
public:
  using Error::Error;
};

class ParseError : public Error
{
public:
  using Error::Error;
};

}  // namespace strmor

#endif  // STRMOR_ERRORS_HPP
