// SPDX-License-Identifier: Apache-2.0
//
// Command-line harness: generate benchmark systems, run reduction
// experiments, evaluate sigma plots, and compare models.

#include <cstdlib>
#include <exception>
#include <filesystem>
#include <iostream>
#include <string>

#include <CLI11.hpp>

#include "strmor/bench.hpp"
#include "strmor/errors.hpp"

namespace {

namespace fs = std::filesystem;

std::uint64_t resolve_seed(std::uint64_t config_seed, bool seed_given, std::uint64_t flag_seed)
{
  if (const char* env = std::getenv("STRMOR_SEED"))
  {
    return std::strtoull(env, nullptr, 10);
  }
  return seed_given ? flag_seed : config_seed;
}

int run_generate(const std::string& config_path, const std::string& out_dir)
{
  const strmor::ExperimentConfig cfg = strmor::parse_experiment_config(config_path);
  const strmor::StructuredSystem sys = strmor::make_system(cfg);
  const std::string dir = out_dir.empty() ? cfg.out_dir : out_dir;
  const std::string descriptor = strmor::save_system(sys, dir);
  std::cout << "wrote " << descriptor << " (n=" << sys.order() << ", m=" << sys.num_inputs()
            << ", p=" << sys.num_outputs() << ")\n";
  return 0;
}

int run_reduce(const std::string& config_path, const std::string& out_dir, bool seed_given,
               std::uint64_t flag_seed)
{
  strmor::ExperimentConfig cfg = strmor::parse_experiment_config(config_path);
  cfg.seed = resolve_seed(cfg.seed, seed_given, flag_seed);
  if (!out_dir.empty())
  {
    cfg.out_dir = out_dir;
  }
  const strmor::ExperimentResult result = strmor::run_experiment(cfg);
  std::cout << result.algorithm_name << ": linf_error=" << result.linf_error
            << " n_iter=" << result.report.iterations.size()
            << " n_ls=" << result.report.n_large_solves
            << (result.converged ? "" : " (max iterations reached)") << '\n';
  return result.exit_code;
}

int run_eval(const std::string& config_path, const std::string& out_dir)
{
  const strmor::ExperimentConfig cfg = strmor::parse_experiment_config(config_path);
  const strmor::StructuredSystem sys = strmor::make_system(cfg);
  const std::vector<double> grid = cfg.grid.points();
  const std::string dir = out_dir.empty() ? cfg.out_dir : out_dir;
  fs::create_directories(dir);
  const std::string path = (fs::path(dir) / "sigma.csv").string();
  strmor::write_curve_csv(path, grid, strmor::sigma_series(sys, grid));
  std::cout << "wrote " << path << '\n';
  return 0;
}

int run_compare(const std::string& config_path, const std::string& reduced_descriptor,
                const std::string& out_dir)
{
  const strmor::ExperimentConfig cfg = strmor::parse_experiment_config(config_path);
  const strmor::StructuredSystem full = strmor::make_system(cfg);
  const strmor::StructuredSystem reduced = strmor::load_system(reduced_descriptor);
  const strmor::FrequencyRegion region(cfg.region_intervals);
  const std::vector<double> grid = cfg.grid.points();
  strmor::ErrorSeries series = strmor::pointwise_relerr(full, reduced, grid);
  series.linf_region = strmor::linf_region_error(full, reduced, region, cfg.linf_grid);
  const std::string dir = out_dir.empty() ? cfg.out_dir : out_dir;
  fs::create_directories(dir);
  strmor::write_curve_csv((fs::path(dir) / "relerr.csv").string(), series.omegas,
                          series.relerr);
  std::cout << "linf_region_error=" << series.linf_region << '\n';
  return 0;
}

}  // namespace

int main(int argc, char** argv)
{
  CLI::App app{"Structured model order reduction benchmark harness"};
  app.require_subcommand(1);

  std::string config_path;
  std::string out_dir;
  std::uint64_t seed = 0;
  bool seed_given = false;
  std::string reduced_descriptor;

  auto add_common = [&](CLI::App* cmd, bool with_seed) {
    cmd->add_option("--config", config_path, "experiment config JSON")->required();
    cmd->add_option("--out-dir", out_dir, "output directory (overrides config)");
    if (with_seed)
    {
      cmd->add_option("--seed", seed, "seed override")->each([&](const std::string&) {
        seed_given = true;
      });
    }
  };

  CLI::App* generate = app.add_subcommand("generate", "write a generated system to disk");
  add_common(generate, false);
  CLI::App* reduce = app.add_subcommand("reduce", "run a reduction experiment");
  add_common(reduce, true);
  CLI::App* eval = app.add_subcommand("eval", "evaluate a sigma plot over the config grid");
  add_common(eval, false);
  CLI::App* compare = app.add_subcommand("compare", "pointwise errors full vs reduced");
  add_common(compare, false);
  compare->add_option("--reduced", reduced_descriptor, "reduced system descriptor JSON")
      ->required();

  CLI11_PARSE(app, argc, argv);

  try
  {
    if (generate->parsed())
    {
      return run_generate(config_path, out_dir);
    }
    if (reduce->parsed())
    {
      return run_reduce(config_path, out_dir, seed_given, seed);
    }
    if (eval->parsed())
    {
      return run_eval(config_path, out_dir);
    }
    if (compare->parsed())
    {
      return run_compare(config_path, reduced_descriptor, out_dir);
    }
  }
  catch (const strmor::Error& err)
  {
    std::cerr << "error: " << err.what() << '\n';
    return 1;
  }
  catch (const std::exception& err)
  {
    std::cerr << "internal error: " << err.what() << '\n';
    return 1;
  }
  return 0;
}
