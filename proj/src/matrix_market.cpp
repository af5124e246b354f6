// SPDX-License-Identifier: Apache-2.0
#include "strmor/matrix_market.hpp"

#include <algorithm>
#include <cctype>
#include <cstdio>
#include <fstream>
#include <sstream>
#include <vector>

#include "strmor/errors.hpp"

namespace strmor {

namespace {

std::string lower(std::string s)
{
  std::transform(s.begin(), s.end(), s.begin(),
                 [](unsigned char c) { return static_cast<char>(std::tolower(c)); });
  return s;
}

[[noreturn]] void parse_fail(const std::string& path, const std::string& detail)
{
  throw ParseError("matrix market file '" + path + "': " + detail);
}

}  // namespace

SparseMatrix read_matrix_market(const std::string& path)
{
  std::ifstream in(path);
  if (!in)
  {
    throw FileNotFound("matrix file not found: " + path);
  }

  std::string header;
  if (!std::getline(in, header))
  {
    parse_fail(path, "empty file");
  }
  std::istringstream hs(header);
  std::string banner, object, format, field, symmetry;
  hs >> banner >> object >> format >> field >> symmetry;
  if (banner != "%%MatrixMarket" || lower(object) != "matrix")
  {
    parse_fail(path, "missing %%MatrixMarket matrix banner");
  }
  format = lower(format);
  field = lower(field);
  symmetry = lower(symmetry);
  const bool coordinate = format == "coordinate";
  if (!coordinate && format != "array")
  {
    parse_fail(path, "unsupported format '" + format + "'");
  }
  const bool complex_field = field == "complex";
  if (!complex_field && field != "real" && field != "integer")
  {
    parse_fail(path, "unsupported field '" + field + "'");
  }
  if (symmetry != "general" && symmetry != "symmetric" && symmetry != "skew-symmetric" &&
      symmetry != "hermitian")
  {
    parse_fail(path, "unsupported symmetry '" + symmetry + "'");
  }

  std::string line;
  while (std::getline(in, line))
  {
    if (!line.empty() && line[0] != '%')
    {
      break;
    }
  }
  if (line.empty() || line[0] == '%')
  {
    parse_fail(path, "missing size line");
  }

  std::istringstream sizes(line);
  long rows = 0, cols = 0, nnz = 0;
  if (coordinate)
  {
    if (!(sizes >> rows >> cols >> nnz) || rows < 0 || cols < 0 || nnz < 0)
    {
      parse_fail(path, "bad coordinate size line");
    }
  }
  else
  {
    if (!(sizes >> rows >> cols) || rows < 0 || cols < 0)
    {
      parse_fail(path, "bad array size line");
    }
  }

  std::vector<Eigen::Triplet<Complex>> triplets;
  const auto add_entry = [&](long i, long j, Complex v) {
    triplets.emplace_back(static_cast<int>(i), static_cast<int>(j), v);
    if (i != j)
    {
      if (symmetry == "symmetric")
      {
        triplets.emplace_back(static_cast<int>(j), static_cast<int>(i), v);
      }
      else if (symmetry == "skew-symmetric")
      {
        triplets.emplace_back(static_cast<int>(j), static_cast<int>(i), -v);
      }
      else if (symmetry == "hermitian")
      {
        triplets.emplace_back(static_cast<int>(j), static_cast<int>(i), std::conj(v));
      }
    }
  };

  if (coordinate)
  {
    triplets.reserve(static_cast<std::size_t>(nnz) * (symmetry == "general" ? 1 : 2));
    for (long k = 0; k < nnz; ++k)
    {
      long i = 0, j = 0;
      double re = 0.0, im = 0.0;
      if (!(in >> i >> j >> re))
      {
        parse_fail(path, "truncated entry list");
      }
      if (complex_field && !(in >> im))
      {
        parse_fail(path, "truncated complex entry");
      }
      if (i < 1 || i > rows || j < 1 || j > cols)
      {
        parse_fail(path, "entry index out of range");
      }
      add_entry(i - 1, j - 1, Complex{re, im});
    }
  }
  else
  {
    // Array format stores dense columns; symmetric variants store the lower
    // triangle only.
    for (long j = 0; j < cols; ++j)
    {
      const long i_start = symmetry == "general" ? 0 : j;
      for (long i = i_start; i < rows; ++i)
      {
        double re = 0.0, im = 0.0;
        if (!(in >> re))
        {
          parse_fail(path, "truncated array data");
        }
        if (complex_field && !(in >> im))
        {
          parse_fail(path, "truncated complex array data");
        }
        if (re != 0.0 || im != 0.0)
        {
          add_entry(i, j, Complex{re, im});
        }
      }
    }
  }

  SparseMatrix out(rows, cols);
  out.setFromTriplets(triplets.begin(), triplets.end());
  out.makeCompressed();
  return out;
}

void write_matrix_market(const std::string& path, const SparseMatrix& matrix)
{
  std::ofstream out(path);
  if (!out)
  {
    throw FileNotFound("cannot open matrix file for writing: " + path);
  }
  bool complex_field = false;
  for (Index k = 0; k < matrix.outerSize(); ++k)
  {
    for (SparseMatrix::InnerIterator it(matrix, k); it; ++it)
    {
      if (it.value().imag() != 0.0)
      {
        complex_field = true;
        break;
      }
    }
  }
  out << "%%MatrixMarket matrix coordinate " << (complex_field ? "complex" : "real")
      << " general\n";
  out << matrix.rows() << ' ' << matrix.cols() << ' ' << matrix.nonZeros() << '\n';
  char buf[96];
  for (Index k = 0; k < matrix.outerSize(); ++k)
  {
    for (SparseMatrix::InnerIterator it(matrix, k); it; ++it)
    {
      if (complex_field)
      {
        std::snprintf(buf, sizeof(buf), "%ld %ld %.17g %.17g\n",
                      static_cast<long>(it.row() + 1), static_cast<long>(it.col() + 1),
                      it.value().real(), it.value().imag());
      }
      else
      {
        std::snprintf(buf, sizeof(buf), "%ld %ld %.17g\n", static_cast<long>(it.row() + 1),
                      static_cast<long>(it.col() + 1), it.value().real());
      }
      out << buf;
    }
  }
}

}  // namespace strmor
