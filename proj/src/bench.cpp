// SPDX-License-Identifier: Apache-2.0
#include "strmor/bench.hpp"

#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <limits>
#include <random>
#include <sstream>

#include <Eigen/SVD>
#include <json.hpp>

#include "strmor/errors.hpp"
#include "strmor/irka.hpp"

namespace strmor {

namespace {

namespace fs = std::filesystem;
using nlohmann::ordered_json;

std::string format_double(double v)
{
  char buf[40];
  if (std::isnan(v))
  {
    return "nan";
  }
  std::snprintf(buf, sizeof(buf), "%.17g", v);
  return buf;
}

std::vector<double> linspace(double lo, double hi, Index count)
{
  std::vector<double> out;
  out.reserve(static_cast<std::size_t>(count));
  if (count == 1)
  {
    out.push_back(lo);
    return out;
  }
  for (Index i = 0; i < count; ++i)
  {
    const double t = static_cast<double>(i) / static_cast<double>(count - 1);
    out.push_back(lo + t * (hi - lo));
  }
  return out;
}

Vector unit_direction(Index dim, bool real_valued, std::mt19937_64& rng)
{
  std::normal_distribution<double> normal(0.0, 1.0);
  Vector v(dim);
  for (Index i = 0; i < dim; ++i)
  {
    const double re = normal(rng);
    const double im = real_valued ? 0.0 : normal(rng);
    v(i) = Complex{re, im};
  }
  const double n = v.norm();
  return v / (n > 0.0 ? n : 1.0);
}

ordered_json points_to_json(const std::vector<Complex>& points)
{
  ordered_json arr = ordered_json::array();
  for (const Complex& s : points)
  {
    arr.push_back({s.real(), s.imag()});
  }
  return arr;
}

}  // namespace

double spectral_norm(const Matrix& m)
{
  if (m.size() == 0)
  {
    return 0.0;
  }
  Eigen::JacobiSVD<Matrix> svd(m);
  return svd.singularValues()(0);
}

namespace {

ErrorSeries relerr_from_values(const std::vector<double>& omegas,
                               const std::vector<Matrix>& full_values,
                               const StructuredSystem& reduced)
{
  ErrorSeries series;
  series.omegas = omegas;
  series.relerr.reserve(omegas.size());
  for (std::size_t i = 0; i < omegas.size(); ++i)
  {
    const Complex s{0.0, omegas[i]};
    try
    {
      const Matrix err = full_values[i] - reduced.eval_transfer(s);
      series.relerr.push_back(spectral_norm(err) / spectral_norm(full_values[i]));
    }
    catch (const Error&)
    {
      series.relerr.push_back(std::numeric_limits<double>::quiet_NaN());
    }
  }
  return series;
}

}  // namespace

ErrorSeries pointwise_relerr(const StructuredSystem& full, const StructuredSystem& reduced,
                             const std::vector<double>& omegas)
{
  ErrorSeries series;
  series.omegas = omegas;
  series.relerr.reserve(omegas.size());
  for (double omega : omegas)
  {
    const Complex s{0.0, omega};
    try
    {
      const Matrix h = full.eval_transfer(s);
      const Matrix err = h - reduced.eval_transfer(s);
      series.relerr.push_back(spectral_norm(err) / spectral_norm(h));
    }
    catch (const Error&)
    {
      series.relerr.push_back(std::numeric_limits<double>::quiet_NaN());
    }
  }
  return series;
}

ErrorSeries pointwise_relerr(const std::vector<TransferSample>& full_samples,
                             const StructuredSystem& reduced)
{
  std::vector<double> omegas;
  std::vector<Matrix> values;
  omegas.reserve(full_samples.size());
  values.reserve(full_samples.size());
  for (const auto& sample : full_samples)
  {
    omegas.push_back(sample.point.imag());
    values.push_back(sample.value);
  }
  return relerr_from_values(omegas, values, reduced);
}

double linf_region_error(const StructuredSystem& full, const StructuredSystem& reduced,
                         const FrequencyRegion& region, Index n_grid)
{
  if (n_grid < 2)
  {
    throw DimensionMismatch("linf_region_error requires n_grid >= 2");
  }
  double max_err = 0.0;
  double max_ref = 0.0;
  for (const auto& [lo, hi] : region.intervals())
  {
    if (!std::isfinite(hi))
    {
      throw DimensionMismatch("cannot discretize an unbounded frequency interval");
    }
    for (double omega : linspace(lo, hi, n_grid))
    {
      const Complex s{0.0, omega};
      try
      {
        const Matrix h = full.eval_transfer(s);
        const Matrix err = h - reduced.eval_transfer(s);
        max_ref = std::max(max_ref, spectral_norm(h));
        max_err = std::max(max_err, spectral_norm(err));
      }
      catch (const Error&)
      {
        // Singular grid point: skipped in both maxima.
      }
    }
  }
  if (max_ref == 0.0)
  {
    return max_err == 0.0 ? 0.0 : std::numeric_limits<double>::infinity();
  }
  return max_err / max_ref;
}

std::vector<double> EvalGrid::points() const
{
  if (count < 2)
  {
    throw DimensionMismatch("evaluation grid needs at least 2 points");
  }
  std::vector<double> out;
  out.reserve(static_cast<std::size_t>(count));
  if (log_spacing)
  {
    if (!(omega_min > 0.0))
    {
      throw DimensionMismatch("log grid requires omega_min > 0");
    }
    const double l0 = std::log10(omega_min);
    const double l1 = std::log10(omega_max);
    for (Index i = 0; i < count; ++i)
    {
      const double t = static_cast<double>(i) / static_cast<double>(count - 1);
      out.push_back(std::pow(10.0, l0 + t * (l1 - l0)));
    }
  }
  else
  {
    out = linspace(omega_min, omega_max, count);
  }
  return out;
}

ExperimentConfig parse_experiment_config(const std::string& path)
{
  std::ifstream in(path);
  if (!in)
  {
    throw FileNotFound("config not found: " + path);
  }
  ordered_json j;
  try
  {
    in >> j;
  }
  catch (const ordered_json::exception& err)
  {
    throw ParseError("config '" + path + "': " + err.what());
  }

  ExperimentConfig cfg;
  try
  {
    if (j.contains("system"))
    {
      const auto& sys = j["system"];
      if (sys.contains("generator"))
      {
        cfg.generator = sys["generator"].get<std::string>();
        const auto params = sys.value("params", ordered_json::object());
        if (cfg.generator == "heated_rod")
        {
          cfg.rod_n = params.value("n", cfg.rod_n);
          cfg.rod_tau = params.value("tau", cfg.rod_tau);
          cfg.rod_gain = params.value("gain", cfg.rod_gain);
          cfg.rod_m = params.value("m", cfg.rod_m);
          cfg.rod_p = params.value("p", cfg.rod_p);
        }
        else if (cfg.generator == "msd_chain")
        {
          cfg.msd_k = params.value("k", cfg.msd_k);
          cfg.msd_mass = params.value("mass", cfg.msd_mass);
          cfg.msd_stiffness = params.value("stiffness", cfg.msd_stiffness);
          cfg.msd_damping_ratio = params.value("damping_ratio", cfg.msd_damping_ratio);
          for (const auto& v : params.value("inputs", ordered_json::array()))
          {
            cfg.msd_io.inputs.push_back(v.get<Index>());
          }
          for (const auto& v : params.value("outputs", ordered_json::array()))
          {
            cfg.msd_io.outputs.push_back(v.get<Index>());
          }
        }
        else
        {
          throw ParseError("config '" + path + "': unknown generator '" + cfg.generator + "'");
        }
      }
      else if (sys.contains("descriptor"))
      {
        cfg.descriptor_path = sys["descriptor"].get<std::string>();
      }
      else
      {
        throw ParseError("config '" + path + "': system needs generator or descriptor");
      }
    }
    else
    {
      throw ParseError("config '" + path + "': missing system section");
    }

    const std::string alg = j.value("algorithm", std::string("straika"));
    if (alg == "tfirka")
    {
      cfg.algorithm = Algorithm::tfirka;
    }
    else if (alg == "sptfirka")
    {
      cfg.algorithm = Algorithm::sptfirka;
    }
    else if (alg == "straika")
    {
      cfg.algorithm = Algorithm::straika;
    }
    else
    {
      throw ParseError("config '" + path + "': unknown algorithm '" + alg + "'");
    }

    if (j.contains("region"))
    {
      cfg.region_intervals.clear();
      for (const auto& iv : j["region"])
      {
        const double lo = iv.at(0).get<double>();
        double hi;
        if (iv.at(1).is_string())
        {
          hi = std::numeric_limits<double>::infinity();
        }
        else
        {
          hi = iv.at(1).get<double>();
        }
        cfg.region_intervals.emplace_back(lo, hi);
      }
    }

    cfg.r = j.value("r", j.value("r_max", cfg.r));

    if (j.contains("initial_points"))
    {
      const auto& init = j["initial_points"];
      const std::string scheme = init.value("scheme", std::string("log_equidistant"));
      if (scheme == "log_equidistant")
      {
        cfg.init_scheme = InitScheme::log_equidistant;
      }
      else if (scheme == "lin_equidistant")
      {
        cfg.init_scheme = InitScheme::lin_equidistant;
      }
      else if (scheme == "single_center_pair")
      {
        cfg.init_scheme = InitScheme::single_center_pair;
      }
      else if (scheme == "explicit")
      {
        cfg.init_scheme = InitScheme::explicit_list;
        for (const auto& pt : init.value("points", ordered_json::array()))
        {
          cfg.init_points.emplace_back(pt.at(0).get<double>(), pt.at(1).get<double>());
        }
      }
      else
      {
        throw ParseError("config '" + path + "': unknown initial-point scheme '" + scheme +
                         "'");
      }
      cfg.init_omega_min = init.value("omega_min", cfg.init_omega_min);
      cfg.init_omega_max = init.value("omega_max", cfg.init_omega_max);
    }

    if (j.contains("grid"))
    {
      const auto& grid = j["grid"];
      cfg.grid.omega_min = grid.value("omega_min", cfg.grid.omega_min);
      cfg.grid.omega_max = grid.value("omega_max", cfg.grid.omega_max);
      cfg.grid.count = grid.value("count", cfg.grid.count);
      cfg.grid.log_spacing = grid.value("spacing", std::string("log")) != "lin";
    }
    cfg.linf_grid = j.value("linf_grid", cfg.linf_grid);

    cfg.seed = j.value("seed", cfg.seed);
    cfg.max_iter = j.value("max_iter", cfg.max_iter);
    cfg.conv_tol = j.value("conv_tol", cfg.conv_tol);
    cfg.realify = j.value("realify", cfg.realify);
    cfg.include_boundary_pair = j.value("include_boundary_pair", cfg.include_boundary_pair);
    cfg.loewner_tol = j.value("loewner_tol", cfg.loewner_tol);
    cfg.q_per_interval = j.value("q_per_interval", cfg.q_per_interval);
    cfg.out_dir = j.value("out_dir", cfg.out_dir);
  }
  catch (const ordered_json::exception& err)
  {
    throw ParseError("config '" + path + "': " + err.what());
  }

  if (const char* env_seed = std::getenv("STRMOR_SEED"))
  {
    cfg.seed = std::strtoull(env_seed, nullptr, 10);
  }
  return cfg;
}

StructuredSystem make_system(const ExperimentConfig& config)
{
  if (config.generator == "heated_rod")
  {
    return generate_heated_rod(config.rod_n, config.rod_tau, config.rod_gain, config.rod_m,
                               config.rod_p);
  }
  if (config.generator == "msd_chain")
  {
    IOSpec io = config.msd_io;
    if (io.inputs.empty())
    {
      io.inputs.push_back(0);
    }
    if (io.outputs.empty())
    {
      io.outputs.push_back(config.msd_k - 1);
    }
    return generate_msd_chain(config.msd_k, config.msd_mass, config.msd_stiffness,
                              config.msd_damping_ratio, io);
  }
  if (!config.descriptor_path.empty())
  {
    return load_system(config.descriptor_path);
  }
  throw ParseError("experiment config does not define a system");
}

InterpolationData make_initial_data(const ExperimentConfig& config, Index m, Index p)
{
  std::vector<Complex> points;
  switch (config.init_scheme)
  {
    case InitScheme::explicit_list:
      points = config.init_points;
      break;
    case InitScheme::single_center_pair:
    {
      const double center = config.init_omega_min > 0.0
                                ? std::sqrt(config.init_omega_min * config.init_omega_max)
                                : 0.5 * (config.init_omega_min + config.init_omega_max);
      points.emplace_back(0.0, center);
      points.emplace_back(0.0, -center);
      break;
    }
    case InitScheme::lin_equidistant:
    case InitScheme::log_equidistant:
    {
      const Index pairs = config.r / 2;
      const bool odd = config.r % 2 != 0;
      std::vector<double> omegas;
      if (config.init_scheme == InitScheme::lin_equidistant)
      {
        omegas = linspace(config.init_omega_min, config.init_omega_max, std::max<Index>(pairs, 1));
      }
      else
      {
        if (!(config.init_omega_min > 0.0))
        {
          throw DimensionMismatch("log-equidistant initial points need omega_min > 0");
        }
        const double l0 = std::log10(config.init_omega_min);
        const double l1 = std::log10(config.init_omega_max);
        for (Index i = 0; i < std::max<Index>(pairs, 1); ++i)
        {
          const double t = pairs > 1
                               ? static_cast<double>(i) / static_cast<double>(pairs - 1)
                               : 0.5;
          omegas.push_back(std::pow(10.0, l0 + t * (l1 - l0)));
        }
      }
      for (Index i = 0; i < pairs; ++i)
      {
        points.emplace_back(0.0, omegas[static_cast<std::size_t>(i)]);
        points.emplace_back(0.0, -omegas[static_cast<std::size_t>(i)]);
      }
      if (odd)
      {
        // Odd orders receive one extra real point; the set stays closed.
        const double center = config.init_omega_min > 0.0
                                  ? std::sqrt(config.init_omega_min * config.init_omega_max)
                                  : 0.5 * (config.init_omega_min + config.init_omega_max);
        points.emplace_back(center, 0.0);
      }
      break;
    }
  }
  if (points.empty())
  {
    throw DimensionMismatch("initial point scheme produced no points");
  }

  std::mt19937_64 rng(config.seed);
  InterpolationData data;
  data.points = points;
  for (std::size_t i = 0; i < points.size(); ++i)
  {
    // Conjugate partners get conjugate directions; real points real ones.
    std::size_t partner = i;
    bool found = false;
    for (std::size_t j = 0; j < i; ++j)
    {
      if (points[j] == std::conj(points[i]) && points[i].imag() != 0.0)
      {
        partner = j;
        found = true;
        break;
      }
    }
    if (found)
    {
      data.right_dirs.push_back(data.right_dirs[partner].conjugate());
      data.left_dirs.push_back(data.left_dirs[partner].conjugate());
    }
    else if (m == 1 && p == 1)
    {
      data.right_dirs.push_back(Vector::Ones(1));
      data.left_dirs.push_back(Vector::Ones(1));
    }
    else
    {
      const bool real_point = points[i].imag() == 0.0;
      data.right_dirs.push_back(unit_direction(m, real_point, rng));
      data.left_dirs.push_back(unit_direction(p, real_point, rng));
    }
  }
  return data;
}

std::vector<double> sigma_series(const StructuredSystem& sys, const std::vector<double>& omegas)
{
  std::vector<double> out;
  out.reserve(omegas.size());
  for (double omega : omegas)
  {
    try
    {
      out.push_back(spectral_norm(sys.eval_transfer(Complex{0.0, omega})));
    }
    catch (const Error&)
    {
      out.push_back(std::numeric_limits<double>::quiet_NaN());
    }
  }
  return out;
}

void write_curve_csv(const std::string& path, const std::vector<double>& omegas,
                     const std::vector<double>& values)
{
  if (omegas.size() != values.size())
  {
    throw DimensionMismatch("curve CSV needs equally long columns");
  }
  std::ofstream out(path);
  if (!out)
  {
    throw FileNotFound("cannot open CSV for writing: " + path);
  }
  out << "omega,value\n";
  for (std::size_t i = 0; i < omegas.size(); ++i)
  {
    out << format_double(omegas[i]) << ',' << format_double(values[i]) << '\n';
  }
}

namespace {

const char* algorithm_name(Algorithm alg)
{
  switch (alg)
  {
    case Algorithm::tfirka:
      return "tfirka";
    case Algorithm::sptfirka:
      return "sptfirka";
    case Algorithm::straika:
      return "straika";
  }
  return "unknown";
}

void write_report_json(const std::string& path, const ExperimentResult& result,
                       Index final_order)
{
  ordered_json j;
  j["algorithm"] = result.algorithm_name;
  j["seed"] = result.report.seed;
  j["converged"] = result.report.converged;
  j["n_iter"] = result.report.iterations.size();
  j["n_large_solves"] = result.report.n_large_solves;
  j["final_order"] = final_order;
  j["linf_error"] = result.linf_error;
  j["final_points"] = points_to_json(result.report.final_points);
  j["warnings"] = result.report.warnings;
  ordered_json iterations = ordered_json::array();
  for (const auto& it : result.report.iterations)
  {
    ordered_json rec;
    rec["points"] = points_to_json(it.points);
    rec["metric"] = std::isfinite(it.metric) ? ordered_json(it.metric) : ordered_json("inf");
    rec["order"] = it.order;
    iterations.push_back(std::move(rec));
  }
  j["iterations"] = std::move(iterations);
  j["wall_time_seconds"] = result.report.wall_time_seconds;

  std::ofstream out(path);
  if (!out)
  {
    throw FileNotFound("cannot write report: " + path);
  }
  out << j.dump(2) << '\n';
}

void write_summary_csv(const std::string& path, const ExperimentResult& result)
{
  std::ofstream out(path);
  if (!out)
  {
    throw FileNotFound("cannot write summary: " + path);
  }
  char tc[32];
  std::snprintf(tc, sizeof(tc), "%.3f", result.report.wall_time_seconds);
  out << "algorithm,linf_error,n_iter,n_ls,t_c,mark_maxiter\n";
  out << result.algorithm_name << ',' << format_double(result.linf_error) << ','
      << result.report.iterations.size() << ',' << result.report.n_large_solves << ',' << tc
      << ',' << (result.converged ? "" : "*") << '\n';
}

}  // namespace

ExperimentResult run_experiment(const ExperimentConfig& config)
{
  const StructuredSystem sys = make_system(config);
  const InterpolationData init = make_initial_data(config, sys.num_inputs(), sys.num_outputs());
  const FrequencyRegion region(config.region_intervals);

  ExperimentResult result;
  result.algorithm_name = algorithm_name(config.algorithm);

  StructuredSystem reduced = sys;  // replaced below
  switch (config.algorithm)
  {
    case Algorithm::tfirka:
    {
      IterationOptions opts = IterationOptions::tf_irka_defaults();
      if (config.max_iter > 0)
      {
        opts.max_iter = config.max_iter;
      }
      opts.conv_tol = config.conv_tol;
      opts.realify = config.realify;
      const TransferFunctionHandle handle = make_transfer_handle(sys, true);
      auto [rom, report] = tf_irka(handle, init, opts);
      result.report = std::move(report);
      reduced = make_first_order(rom.e, rom.a, rom.b, rom.c);
      break;
    }
    case Algorithm::sptfirka:
    {
      IterationOptions opts = IterationOptions::sptf_outer_defaults();
      if (config.max_iter > 0)
      {
        opts.max_iter = config.max_iter;
      }
      opts.conv_tol = config.conv_tol;
      opts.realify = config.realify;
      auto [red, report] = sptf_irka(sys, init, opts);
      result.report = std::move(report);
      reduced = std::move(red);
      break;
    }
    case Algorithm::straika:
    {
      StraikaOptions opts;
      opts.r_max = config.r;
      opts.include_boundary_pair = config.include_boundary_pair;
      opts.loewner_tol = config.loewner_tol;
      opts.q_per_interval = config.q_per_interval;
      opts.seed = config.seed;
      opts.iteration = IterationOptions::sptf_outer_defaults();
      if (config.max_iter > 0)
      {
        opts.iteration.max_iter = config.max_iter;
      }
      opts.iteration.conv_tol = config.conv_tol;
      opts.iteration.realify = config.realify;
      auto [red, report] = straika(sys, init, region, opts);
      result.report = std::move(report);
      reduced = std::move(red);
      break;
    }
  }
  result.report.seed = config.seed;
  result.converged = result.report.converged;
  result.exit_code = result.converged ? 0 : 2;

  const std::vector<double> grid = config.grid.points();
  result.series = pointwise_relerr(sys, reduced, grid);
  result.linf_error = linf_region_error(sys, reduced, region, config.linf_grid);
  result.series.linf_region = result.linf_error;

  fs::create_directories(config.out_dir);
  const fs::path dir(config.out_dir);
  write_curve_csv((dir / "relerr.csv").string(), result.series.omegas, result.series.relerr);
  write_curve_csv((dir / "sigma_full.csv").string(), grid, sigma_series(sys, grid));
  write_curve_csv((dir / "sigma_reduced.csv").string(), grid, sigma_series(reduced, grid));
  write_report_json((dir / "report.json").string(), result, reduced.order());
  write_summary_csv((dir / "summary.csv").string(), result);
  save_system(reduced, (dir / "reduced_system").string());
  return result;
}

}  // namespace strmor
