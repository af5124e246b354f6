// SPDX-License-Identifier: Apache-2.0
#ifndef STRMOR_BENCH_HPP
#define STRMOR_BENCH_HPP

#include <cstdint>
#include <string>
#include <vector>

#include "strmor/generators.hpp"
#include "strmor/straika.hpp"
#include "strmor/structured_system.hpp"
#include "strmor/system_io.hpp"

namespace strmor {

/// Pointwise relative errors over a frequency grid plus the local L-infinity
/// error over the region of interest.
struct ErrorSeries
{
  std::vector<double> omegas;
  std::vector<double> relerr;   // NaN marks grid points where K was singular
  double linf_region = 0.0;
};

/// Largest singular value of a matrix.
double spectral_norm(const Matrix& m);

/// relerr(w) = ||H(iw) - Hr(iw)||_2 / ||H(iw)||_2 per grid point; singular
/// evaluation points are recorded as NaN and the run continues.
ErrorSeries pointwise_relerr(const StructuredSystem& full, const StructuredSystem& reduced,
                             const std::vector<double>& omegas);

/// Same metric evaluated against persisted full-order samples.
ErrorSeries pointwise_relerr(const std::vector<TransferSample>& full_samples,
                             const StructuredSystem& reduced);

/// Ratio of maxima max_w ||H - Hr||_2 / max_w ||H||_2 over equidistant
/// discretizations of the region intervals (n_grid points each).
double linf_region_error(const StructuredSystem& full, const StructuredSystem& reduced,
                         const FrequencyRegion& region, Index n_grid);

struct EvalGrid
{
  double omega_min = 1e-2;
  double omega_max = 1e2;
  Index count = 500;
  bool log_spacing = true;

  std::vector<double> points() const;
};

enum class Algorithm
{
  tfirka,
  sptfirka,
  straika,
};

enum class InitScheme
{
  log_equidistant,
  lin_equidistant,
  single_center_pair,
  explicit_list,
};

struct ExperimentConfig
{
  // System source: either a generator name with parameters or a descriptor.
  std::string generator;  // "heated_rod" | "msd_chain" | "" when loading
  double rod_tau = 1.0;
  double rod_gain = 1.0;
  Index rod_n = 1000;
  Index rod_m = 5;
  Index rod_p = 4;
  Index msd_k = 10;
  double msd_mass = 1.0;
  double msd_stiffness = 1.0;
  double msd_damping_ratio = 0.0;
  IOSpec msd_io;
  std::string descriptor_path;

  Algorithm algorithm = Algorithm::straika;
  std::vector<std::pair<double, double>> region_intervals{{1e-2, 1e2}};
  Index r = 10;  // reduced order target; r_max for straika

  InitScheme init_scheme = InitScheme::log_equidistant;
  double init_omega_min = 1e-2;
  double init_omega_max = 1e2;
  std::vector<Complex> init_points;  // for explicit_list

  EvalGrid grid;
  Index linf_grid = 500;

  std::uint64_t seed = 0;
  int max_iter = -1;  // -1: per-algorithm default (100 tfirka, 50 outer)
  double conv_tol = 1e-3;
  bool realify = true;

  bool include_boundary_pair = true;
  double loewner_tol = 1e-8;
  Index q_per_interval = 40;

  std::string out_dir = "out";
};

/// Parse config JSON (see README for the schema); the STRMOR_SEED
/// environment variable overrides the config seed.
ExperimentConfig parse_experiment_config(const std::string& path);

/// Conjugation-closed initial interpolation data for a scheme; directions
/// are deterministic unit vectors drawn from the seed for MIMO systems.
InterpolationData make_initial_data(const ExperimentConfig& config, Index m, Index p);

/// Construct or load the configured full-order system.
StructuredSystem make_system(const ExperimentConfig& config);

struct ExperimentResult
{
  ReductionReport report;
  double linf_error = 0.0;
  ErrorSeries series;
  std::string algorithm_name;
  bool converged = false;
  int exit_code = 0;  // 0 ok, 2 algorithm hit the iteration cap
};

/// Run the configured experiment and write report.json, relerr.csv,
/// sigma_full.csv, sigma_reduced.csv, summary.csv and the reduced system
/// descriptor into the output directory.
ExperimentResult run_experiment(const ExperimentConfig& config);

/// Sigma series ||H(iw)||_2 over a grid, as "omega,value" CSV rows.
std::vector<double> sigma_series(const StructuredSystem& sys,
                                 const std::vector<double>& omegas);

void write_curve_csv(const std::string& path, const std::vector<double>& omegas,
                     const std::vector<double>& values);

}  // namespace strmor

#endif  // STRMOR_BENCH_HPP
