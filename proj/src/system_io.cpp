// SPDX-License-Identifier: Apache-2.0
#include "strmor/system_io.hpp"

#include <filesystem>
#include <fstream>
#include <sstream>

#include <json.hpp>

#include "strmor/errors.hpp"
#include "strmor/matrix_market.hpp"

namespace strmor {

namespace {

namespace fs = std::filesystem;
using nlohmann::ordered_json;

ordered_json term_to_json(const ScalarTerm& g)
{
  ordered_json out;
  switch (g.kind())
  {
    case ScalarTerm::Kind::constant:
      out["kind"] = "constant";
      break;
    case ScalarTerm::Kind::monomial:
      out["kind"] = "monomial";
      out["params"]["power"] = g.power();
      break;
    case ScalarTerm::Kind::exp_delay:
      out["kind"] = "exp_delay";
      out["params"]["tau"] = g.tau();
      break;
    case ScalarTerm::Kind::fractional_kelvin:
      out["kind"] = "fractional_kelvin";
      out["params"]["G0"] = g.g0();
      out["params"]["Ginf"] = g.ginf();
      out["params"]["tau"] = g.tau();
      out["params"]["alpha"] = g.alpha();
      break;
    case ScalarTerm::Kind::sqrt_shift:
      out["kind"] = "sqrt_shift";
      out["params"]["cutoff"] = g.cutoff();
      out["params"]["imaginary_unit_factor"] = g.imaginary_unit_factor();
      break;
  }
  return out;
}

ScalarTerm term_from_json(const ordered_json& j, const std::string& where)
{
  if (!j.contains("kind"))
  {
    throw ParseError(where + ": term without 'kind'");
  }
  const std::string kind = j.at("kind").get<std::string>();
  const auto params = j.value("params", ordered_json::object());
  try
  {
    if (kind == "constant")
    {
      return ScalarTerm::constant();
    }
    if (kind == "monomial")
    {
      return ScalarTerm::monomial(params.at("power").get<int>());
    }
    if (kind == "exp_delay")
    {
      return ScalarTerm::exp_delay(params.at("tau").get<double>());
    }
    if (kind == "fractional_kelvin")
    {
      return ScalarTerm::fractional_kelvin(
          params.at("G0").get<double>(), params.at("Ginf").get<double>(),
          params.at("tau").get<double>(), params.at("alpha").get<double>());
    }
    if (kind == "sqrt_shift")
    {
      return ScalarTerm::sqrt_shift(params.at("cutoff").get<double>(),
                                    params.at("imaginary_unit_factor").get<bool>());
    }
  }
  catch (const ordered_json::exception& err)
  {
    throw ParseError(where + ": bad term parameters for kind '" + kind + "': " + err.what());
  }
  throw ParseError(where + ": unknown term kind '" + kind + "'");
}

}  // namespace

StructuredSystem load_system(const std::string& descriptor_path)
{
  std::ifstream in(descriptor_path);
  if (!in)
  {
    throw FileNotFound("descriptor not found: " + descriptor_path);
  }
  ordered_json desc;
  try
  {
    in >> desc;
  }
  catch (const ordered_json::exception& err)
  {
    throw ParseError("descriptor '" + descriptor_path + "': " + err.what());
  }

  Index n = 0, m = 0, p = 0;
  try
  {
    n = desc.at("n").get<Index>();
    m = desc.at("m").get<Index>();
    p = desc.at("p").get<Index>();
  }
  catch (const ordered_json::exception& err)
  {
    throw ParseError("descriptor '" + descriptor_path + "' misses n/m/p: " + err.what());
  }

  const fs::path base = fs::path(descriptor_path).parent_path();
  std::vector<TermMatrix> k_terms, b_terms, c_terms;
  if (!desc.contains("terms") || !desc["terms"].is_array())
  {
    throw ParseError("descriptor '" + descriptor_path + "' misses a 'terms' array");
  }
  for (const auto& jt : desc["terms"])
  {
    const ScalarTerm g = term_from_json(jt, descriptor_path);
    const std::string file = jt.value("matrix_file", std::string{});
    if (file.empty())
    {
      throw ParseError("descriptor '" + descriptor_path + "': term without matrix_file");
    }
    const std::string slot = jt.value("slot", std::string{});
    const fs::path matrix_path = base / file;
    SparseMatrix mat = read_matrix_market(matrix_path.string());
    const auto expect = [&](Index rows, Index cols) {
      if (mat.rows() != rows || mat.cols() != cols)
      {
        std::ostringstream msg;
        msg << "matrix '" << matrix_path.string() << "' is " << mat.rows() << "x" << mat.cols()
            << " but descriptor '" << descriptor_path << "' requires " << rows << "x" << cols
            << " for slot " << slot;
        throw DimensionMismatch(msg.str());
      }
    };
    if (slot == "K")
    {
      expect(n, n);
      k_terms.push_back(TermMatrix{g, std::move(mat)});
    }
    else if (slot == "B")
    {
      expect(n, m);
      b_terms.push_back(TermMatrix{g, std::move(mat)});
    }
    else if (slot == "C")
    {
      expect(p, n);
      c_terms.push_back(TermMatrix{g, std::move(mat)});
    }
    else
    {
      throw ParseError("descriptor '" + descriptor_path + "': slot must be K, B or C");
    }
  }
  return StructuredSystem(std::move(k_terms), std::move(b_terms), std::move(c_terms), n, m, p);
}

std::string save_system(const StructuredSystem& sys, const std::string& dir,
                        const std::string& basename)
{
  fs::create_directories(dir);
  ordered_json desc;
  desc["n"] = sys.order();
  desc["m"] = sys.num_inputs();
  desc["p"] = sys.num_outputs();
  desc["terms"] = ordered_json::array();

  const auto dump_terms = [&](const std::vector<TermMatrix>& terms, const char* slot) {
    int idx = 0;
    for (const auto& t : terms)
    {
      std::ostringstream name;
      name << basename << "_" << slot << idx++ << ".mtx";
      write_matrix_market((fs::path(dir) / name.str()).string(), t.mat);
      ordered_json jt = term_to_json(t.g);
      jt["matrix_file"] = name.str();
      jt["slot"] = slot;
      desc["terms"].push_back(std::move(jt));
    }
  };
  dump_terms(sys.k_terms(), "K");
  dump_terms(sys.b_terms(), "B");
  dump_terms(sys.c_terms(), "C");

  const std::string descriptor_path = (fs::path(dir) / (basename + ".json")).string();
  std::ofstream out(descriptor_path);
  if (!out)
  {
    throw FileNotFound("cannot write descriptor: " + descriptor_path);
  }
  out << desc.dump(2) << '\n';
  return descriptor_path;
}

}  // namespace strmor
