// SPDX-License-Identifier: Apache-2.0
#ifndef STRMOR_SYSTEM_IO_HPP
#define STRMOR_SYSTEM_IO_HPP

#include <string>

#include "strmor/structured_system.hpp"

namespace strmor {

/// Assemble a structured system from a JSON structure descriptor:
///   {"n": .., "m": .., "p": ..,
///    "terms": [{"kind": .., "params": {..}, "matrix_file": .., "slot": "K"|"B"|"C"}, ..]}
/// Matrix files are Matrix Market, resolved relative to the descriptor.
/// Throws FileNotFound, ParseError or DimensionMismatch naming the files.
StructuredSystem load_system(const std::string& descriptor_path);

/// Write a system as a descriptor plus one matrix file per term into dir;
/// returns the descriptor path. load_system(save_system(..)) reproduces the
/// system matrix-for-matrix.
std::string save_system(const StructuredSystem& sys, const std::string& dir,
                        const std::string& basename = "system");

}  // namespace strmor

#endif  // STRMOR_SYSTEM_IO_HPP
