// SPDX-License-Identifier: Apache-2.0
#ifndef STRMOR_MATRIX_MARKET_HPP
#define STRMOR_MATRIX_MARKET_HPP

#include <string>

#include "strmor/types.hpp"

namespace strmor {

/// Read a Matrix Market file (coordinate or array; real, integer or
/// complex; general, symmetric, skew-symmetric or hermitian).
/// Throws FileNotFound or ParseError with the offending path.
SparseMatrix read_matrix_market(const std::string& path);

/// Write in coordinate format; real-valued matrices are written with the
/// "real" field qualifier, others as "complex".
void write_matrix_market(const std::string& path, const SparseMatrix& matrix);

}  // namespace strmor

#endif  // STRMOR_MATRIX_MARKET_HPP
