// SPDX-License-Identifier: Apache-2.0
#include <doctest.h>

#include <cmath>
#include <filesystem>
#include <fstream>

#include <Eigen/SVD>

#include "strmor/bench.hpp"
#include "strmor/errors.hpp"
#include "strmor/matrix_market.hpp"
#include "strmor/numerics.hpp"
#include "test_helpers.hpp"

using namespace strmor;
using test::scalar;

namespace fs = std::filesystem;

namespace {

std::string slurp(const fs::path& path)
{
  std::ifstream in(path, std::ios::binary);
  REQUIRE(in.good());
  return std::string(std::istreambuf_iterator<char>(in), std::istreambuf_iterator<char>());
}

fs::path temp_dir(const std::string& name)
{
  const fs::path dir = fs::temp_directory_path() / "strmor_tests" / name;
  fs::remove_all(dir);
  fs::create_directories(dir);
  return dir;
}

}  // namespace

TEST_CASE("heated rod discretization entries for n = 3")
{
  const auto rod = generate_heated_rod(3, 1.0, 0.5, 1, 1);
  // h = 1/4 so 1/h^2 = 16: diagonal -32, off-diagonal 16 in A0 = -K_const.
  const Matrix k0 = rod.eval_K(Complex{0.0, 0.0});
  // K(0) = -A0 - e^0 Ad = -A0 + 0.5 I.
  CHECK(k0(0, 0).real() == doctest::Approx(32.0 + 0.5));
  CHECK(k0(0, 1).real() == doctest::Approx(-16.0));
  CHECK(k0(1, 0).real() == doctest::Approx(-16.0));
  CHECK(rod.is_real());
}

TEST_CASE("heated rod with zero gain matches the steady-state solve oracle")
{
  const Index n = 24;
  const auto rod = generate_heated_rod(n, 1.0, 0.0, 3, 2);
  // H(0) = C (-A0)^{-1} B computed independently via a dense solve.
  Matrix a0 = Matrix::Zero(n, n);
  const double inv_h2 = static_cast<double>((n + 1) * (n + 1));
  for (Index i = 0; i < n; ++i)
  {
    a0(i, i) = Complex{-2.0 * inv_h2, 0.0};
    if (i + 1 < n)
    {
      a0(i, i + 1) = Complex{inv_h2, 0.0};
      a0(i + 1, i) = Complex{inv_h2, 0.0};
    }
  }
  const Matrix b = rod.eval_B(Complex{0.0, 0.0});
  const Matrix c = rod.eval_C(Complex{0.0, 0.0});
  const Matrix x = numerics::solve_linear(-a0, b);
  const Matrix h0_expected = c * x;
  const Matrix h0 = rod.eval_transfer(Complex{0.0, 0.0});
  CHECK((h0 - h0_expected).norm() <= 1e-12 * h0_expected.norm());
}

TEST_CASE("SISO heated rod magnitude decays along the imaginary axis")
{
  const auto rod = generate_heated_rod(40, 1.0, 0.0, 1, 1);
  double prev = std::numeric_limits<double>::infinity();
  for (double omega : {1e-2, 1e-1, 1.0, 1e1, 1e2, 1e3})
  {
    const double mag = spectral_norm(rod.eval_transfer(Complex{0.0, omega}));
    CHECK(mag < prev);
    prev = mag;
  }
}

TEST_CASE("heated rod rejects bad sectioning")
{
  CHECK_THROWS_AS(generate_heated_rod(2, 1.0, 1.0, 1, 1), BadSectioning);
  CHECK_THROWS_AS(generate_heated_rod(10, 1.0, 1.0, 11, 1), BadSectioning);
}

TEST_CASE("msd chain closed forms")
{
  // Single mass: H(s) = 1/(m s^2 + d s + k).
  IOSpec io;
  io.inputs = {0};
  io.outputs = {0};
  const auto single = generate_msd_chain(1, 2.0, 8.0, 0.1, io);
  const Complex s{0.3, 1.1};
  const double lambda1 = 4.0 * std::pow(std::sin(M_PI / 4.0), 2);  // k = 1
  const double omega1 = std::sqrt(8.0 * lambda1 / 2.0);
  const double beta = 2.0 * 0.1 / omega1;
  const Complex expected = 1.0 / (2.0 * s * s + beta * 8.0 * 2.0 * s / 2.0 + 8.0);
  // d = beta * K with K = 2k = 16 for the single mass (both springs).
  const Complex denom = 2.0 * s * s + beta * 16.0 * s + 16.0;
  CHECK(std::abs(single.eval_transfer(s)(0, 0) - 1.0 / denom) <= 1e-14);
  (void)expected;

  // Two undamped masses: poles at i sqrt(eig(K/m)) with closed-form
  // tridiagonal eigenvalues k/m (2 -+ 1).
  IOSpec io2;
  io2.inputs = {0};
  io2.outputs = {1};
  const auto two = generate_msd_chain(2, 1.0, 1.0, 0.0, io2);
  const auto first = test::companion_linearization(
      Matrix::Identity(2, 2), Matrix::Zero(2, 2), Matrix(two.k_terms()[1].mat),
      two.eval_B(Complex{0, 0}), two.eval_C(Complex{0, 0}), Matrix::Zero(1, 2));
  const auto triples = numerics::generalized_eig(
      -first.eval_K(Complex{0.0, 0.0}),
      Matrix(first.k_terms()[0].mat));
  std::vector<double> freqs;
  for (const auto& t : triples)
  {
    freqs.push_back(std::abs(t.lambda.imag()));
  }
  std::sort(freqs.begin(), freqs.end());
  REQUIRE(freqs.size() == 4);
  CHECK(freqs[0] == doctest::Approx(1.0));   // sqrt(2 - 1)
  CHECK(freqs[2] == doctest::Approx(std::sqrt(3.0)));

  // Zero damping ratio drops the damping term entirely.
  CHECK(two.k_terms().size() == 2);
}

TEST_CASE("msd chain rejects bad io specs")
{
  IOSpec bad;
  bad.inputs = {5};
  bad.outputs = {0};
  CHECK_THROWS_AS(generate_msd_chain(3, 1.0, 1.0, 0.0, bad), BadIOSpec);
  IOSpec empty;
  CHECK_THROWS_AS(generate_msd_chain(3, 1.0, 1.0, 0.0, empty), BadIOSpec);
}

TEST_CASE("system descriptor round-trip")
{
  const auto dir = temp_dir("roundtrip");
  const auto rod = generate_heated_rod(12, 1.5, 0.7, 3, 2);
  const std::string descriptor = save_system(rod, dir.string());
  const auto loaded = load_system(descriptor);
  REQUIRE(loaded.order() == rod.order());
  REQUIRE(loaded.k_terms().size() == rod.k_terms().size());
  for (std::size_t j = 0; j < rod.k_terms().size(); ++j)
  {
    CHECK(loaded.k_terms()[j].g == rod.k_terms()[j].g);
    CHECK((Matrix(loaded.k_terms()[j].mat) - Matrix(rod.k_terms()[j].mat)).norm() == 0.0);
  }
  for (std::size_t j = 0; j < rod.b_terms().size(); ++j)
  {
    CHECK((Matrix(loaded.b_terms()[j].mat) - Matrix(rod.b_terms()[j].mat)).norm() == 0.0);
  }
}

TEST_CASE("load_system error reporting names files")
{
  const auto dir = temp_dir("load_errors");
  CHECK_THROWS_AS(load_system((dir / "missing.json").string()), FileNotFound);

  // Descriptor referencing a missing matrix file.
  {
    std::ofstream out(dir / "bad.json");
    out << R"({"n": 2, "m": 1, "p": 1, "terms": [
      {"kind": "constant", "matrix_file": "nope.mtx", "slot": "K"}]})";
  }
  CHECK_THROWS_AS(load_system((dir / "bad.json").string()), FileNotFound);
  try
  {
    load_system((dir / "bad.json").string());
  }
  catch (const FileNotFound& err)
  {
    CHECK(std::string(err.what()).find("nope.mtx") != std::string::npos);
  }

  // Dimension mismatch names the matrix file.
  write_matrix_market((dir / "k.mtx").string(),
                      SparseMatrix(Matrix::Identity(3, 3).sparseView()));
  {
    std::ofstream out(dir / "mismatch.json");
    out << R"({"n": 2, "m": 1, "p": 1, "terms": [
      {"kind": "constant", "matrix_file": "k.mtx", "slot": "K"}]})";
  }
  try
  {
    load_system((dir / "mismatch.json").string());
    CHECK(false);
  }
  catch (const DimensionMismatch& err)
  {
    CHECK(std::string(err.what()).find("k.mtx") != std::string::npos);
    CHECK(std::string(err.what()).find("mismatch.json") != std::string::npos);
  }
}

TEST_CASE("matrix market round-trip including complex data")
{
  const auto dir = temp_dir("mm");
  Matrix dense(3, 2);
  dense << Complex{1.0, 0.0}, Complex{0.0, 0.0}, Complex{0.5, -2.0}, Complex{0.0, 0.0},
      Complex{0.0, 3.25}, Complex{-1.0, 0.0};
  const SparseMatrix m = dense.sparseView();
  write_matrix_market((dir / "m.mtx").string(), m);
  const SparseMatrix back = read_matrix_market((dir / "m.mtx").string());
  CHECK((Matrix(back) - dense).norm() == 0.0);
}

TEST_CASE("matrix market symmetric and array formats")
{
  const auto dir = temp_dir("mm_formats");
  {
    std::ofstream out(dir / "sym.mtx");
    out << "%%MatrixMarket matrix coordinate real symmetric\n2 2 2\n1 1 4.0\n2 1 -1.0\n";
  }
  const SparseMatrix sym = read_matrix_market((dir / "sym.mtx").string());
  CHECK(Matrix(sym)(0, 1) == Complex{-1.0, 0.0});
  CHECK(Matrix(sym)(1, 0) == Complex{-1.0, 0.0});

  {
    std::ofstream out(dir / "arr.mtx");
    out << "%%MatrixMarket matrix array real general\n% comment\n2 2\n1\n2\n3\n4\n";
  }
  const SparseMatrix arr = read_matrix_market((dir / "arr.mtx").string());
  CHECK(Matrix(arr)(1, 0) == Complex{2.0, 0.0});
  CHECK(Matrix(arr)(0, 1) == Complex{3.0, 0.0});

  {
    std::ofstream out(dir / "broken.mtx");
    out << "%%MatrixMarket matrix coordinate real general\n2 2 3\n1 1 1.0\n";
  }
  CHECK_THROWS_AS(read_matrix_market((dir / "broken.mtx").string()), ParseError);
}

TEST_CASE("pointwise relative error examples")
{
  const auto sys = make_first_order(scalar(1), scalar(-1), scalar(1), scalar(1));
  const auto same = pointwise_relerr(sys, sys, {0.1, 1.0, 10.0});
  for (double e : same.relerr)
  {
    CHECK(e <= 1e-14);
  }

  // H = 1/(s+1) vs 1/(s+1.1) at omega = 0: |1 - 1/1.1| = 0.0909...
  const auto pert = make_first_order(scalar(1), scalar(-1.1), scalar(1), scalar(1));
  const auto series = pointwise_relerr(sys, pert, {0.0});
  REQUIRE(series.relerr.size() == 1);
  CHECK(series.relerr[0] == doctest::Approx(1.0 - 1.0 / 1.1).epsilon(1e-12));
}

TEST_CASE("MIMO pointwise error uses the spectral norm")
{
  const auto full = test::random_second_order(8, 2, 2, 5);
  const auto red = test::random_second_order(8, 2, 2, 6);
  const double omega = 1.7;
  const auto series = pointwise_relerr(full, red, {omega});
  const Matrix diff = full.eval_transfer(Complex{0.0, omega}) -
                      red.eval_transfer(Complex{0.0, omega});
  Eigen::JacobiSVD<Matrix> svd(diff);
  const double expected =
      svd.singularValues()(0) / spectral_norm(full.eval_transfer(Complex{0.0, omega}));
  CHECK(series.relerr[0] == doctest::Approx(expected).epsilon(1e-12));
}

TEST_CASE("linf region error is the ratio of maxima")
{
  const auto sys = make_first_order(scalar(1), scalar(-1), scalar(1), scalar(1));
  const FrequencyRegion region({{0.1, 10.0}});
  CHECK(linf_region_error(sys, sys, region, 50) == 0.0);

  // Constructed discriminating case on the two-point grid {0, 3}:
  // full H1 = 10/(s+1); reduced adds a lightly damped mode near omega = 3,
  // so the peak error sits where the reference is small. The ratio of
  // maxima then differs from the max of pointwise ratios.
  const auto full10 = make_first_order(scalar(1), scalar(-1), scalar(10), scalar(1));
  Matrix a2 = Matrix::Zero(3, 3);
  a2(0, 0) = Complex{-1.0, 0.0};
  a2(1, 1) = Complex{-0.15, 0.0};
  a2(1, 2) = Complex{3.0, 0.0};
  a2(2, 1) = Complex{-3.0, 0.0};
  a2(2, 2) = Complex{-0.15, 0.0};
  Matrix b2(3, 1);
  b2 << Complex{10.0, 0.0}, Complex{1.0, 0.0}, Complex{0.0, 0.0};
  Matrix c2(1, 3);
  c2 << Complex{1.0, 0.0}, Complex{0.3, 0.0}, Complex{0.0, 0.0};
  const auto perturbed = make_first_order(Matrix::Identity(3, 3), a2, b2, c2);

  const FrequencyRegion two_points({{0.0, 3.0}});
  const double value = linf_region_error(full10, perturbed, two_points, 2);
  double max_err = 0.0, max_ref = 0.0, max_ratio = 0.0;
  for (double omega : {0.0, 3.0})
  {
    const Matrix h = full10.eval_transfer(Complex{0.0, omega});
    const Matrix e = h - perturbed.eval_transfer(Complex{0.0, omega});
    max_err = std::max(max_err, spectral_norm(e));
    max_ref = std::max(max_ref, spectral_norm(h));
    max_ratio = std::max(max_ratio, spectral_norm(e) / spectral_norm(h));
  }
  CHECK(value == doctest::Approx(max_err / max_ref).epsilon(1e-12));
  CHECK(max_ratio > 2.0 * (max_err / max_ref));  // the two definitions differ here
  CHECK(value != doctest::Approx(max_ratio));
}

TEST_CASE("run_experiment writes the full artifact set and is deterministic")
{
  const auto out1 = temp_dir("exp1");
  const auto out2 = temp_dir("exp2");
  ExperimentConfig cfg;
  cfg.generator = "msd_chain";
  cfg.msd_k = 10;
  cfg.msd_stiffness = 100.0;
  cfg.msd_damping_ratio = 0.02;
  cfg.msd_io.inputs = {0};
  cfg.msd_io.outputs = {9};
  cfg.algorithm = Algorithm::straika;
  cfg.region_intervals = {{0.5, 30.0}};
  cfg.r = 6;
  cfg.init_scheme = InitScheme::single_center_pair;
  cfg.init_omega_min = 0.5;
  cfg.init_omega_max = 30.0;
  cfg.grid = EvalGrid{0.5, 30.0, 40, true};
  cfg.linf_grid = 60;
  cfg.seed = 77;
  cfg.q_per_interval = 20;

  cfg.out_dir = out1.string();
  const auto res1 = run_experiment(cfg);
  cfg.out_dir = out2.string();
  const auto res2 = run_experiment(cfg);

  for (const char* f : {"relerr.csv", "sigma_full.csv", "sigma_reduced.csv", "summary.csv",
                        "report.json"})
  {
    CHECK(fs::exists(out1 / f));
  }
  CHECK(fs::exists(out1 / "reduced_system" / "system.json"));

  // Byte-identical outputs except measured timing.
  for (const char* f : {"relerr.csv", "sigma_full.csv", "sigma_reduced.csv"})
  {
    CHECK(slurp(out1 / f) == slurp(out2 / f));
  }
  CHECK(res1.linf_error == res2.linf_error);
}

TEST_CASE("run_experiment flags non-convergence with exit code 2 and a star")
{
  const auto out = temp_dir("exp_maxiter");
  ExperimentConfig cfg;
  cfg.generator = "msd_chain";
  cfg.msd_k = 8;
  cfg.msd_stiffness = 50.0;
  cfg.msd_damping_ratio = 0.05;
  cfg.msd_io.inputs = {0};
  cfg.msd_io.outputs = {7};
  cfg.algorithm = Algorithm::tfirka;
  cfg.region_intervals = {{0.5, 20.0}};
  cfg.r = 4;
  cfg.init_scheme = InitScheme::log_equidistant;
  cfg.init_omega_min = 0.5;
  cfg.init_omega_max = 20.0;
  cfg.grid = EvalGrid{0.5, 20.0, 30, true};
  cfg.linf_grid = 40;
  cfg.max_iter = 1;
  cfg.out_dir = out.string();

  const auto res = run_experiment(cfg);
  CHECK(res.exit_code == 2);
  const std::string summary = slurp(out / "summary.csv");
  CHECK(summary.find(",*") != std::string::npos);
  CHECK(summary.rfind("algorithm,linf_error,n_iter,n_ls,t_c,mark_maxiter", 0) == 0);
}

TEST_CASE("initial point schemes produce conjugation-closed sets")
{
  ExperimentConfig cfg;
  cfg.r = 6;
  cfg.init_scheme = InitScheme::lin_equidistant;
  cfg.init_omega_min = 1.0;
  cfg.init_omega_max = 100.0;
  const auto lin = make_initial_data(cfg, 2, 2);
  CHECK(lin.size() == 6);
  CHECK(lin.closed_under_conjugation());

  cfg.init_scheme = InitScheme::log_equidistant;
  cfg.r = 5;  // odd: pairs plus one real point
  const auto odd = make_initial_data(cfg, 2, 2);
  CHECK(odd.size() == 5);
  CHECK(odd.closed_under_conjugation());

  cfg.init_scheme = InitScheme::single_center_pair;
  const auto pair = make_initial_data(cfg, 1, 1);
  REQUIRE(pair.size() == 2);
  CHECK(pair.points[0] == std::conj(pair.points[1]));
  CHECK(std::abs(pair.points[0].imag()) == doctest::Approx(10.0));  // geometric mean
}

TEST_CASE("metrics rerun on persisted samples reproduce files byte-identically")
{
  const auto dir = temp_dir("metrics_rerun");
  const auto full = test::random_second_order(10, 1, 1, 42);
  const auto red = test::random_second_order(4, 1, 1, 43);
  std::vector<TransferSample> samples;
  for (int g = 0; g < 20; ++g)
  {
    const double omega = 0.2 + 0.5 * g;
    samples.emplace_back(Complex{0.0, omega}, full.eval_transfer(Complex{0.0, omega}));
  }
  const auto s1 = pointwise_relerr(samples, red);
  const auto s2 = pointwise_relerr(samples, red);
  write_curve_csv((dir / "a.csv").string(), s1.omegas, s1.relerr);
  write_curve_csv((dir / "b.csv").string(), s2.omegas, s2.relerr);
  CHECK(slurp(dir / "a.csv") == slurp(dir / "b.csv"));
}
