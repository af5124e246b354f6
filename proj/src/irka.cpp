// SPDX-License-Identifier: Apache-2.0
#include "strmor/irka.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <limits>
#include <sstream>

#include "strmor/errors.hpp"
#include "strmor/numerics.hpp"

namespace strmor {

namespace {

// Relative tolerance used to repair conjugation closure broken by
// floating-point eigensolves.
constexpr double kClosureTol = 1e-6;

using Clock = std::chrono::steady_clock;

double seconds_since(Clock::time_point start)
{
  return std::chrono::duration<double>(Clock::now() - start).count();
}

// Rotate the phase of a vector so its largest component is real, which
// makes eigenvectors of real pencils real up to roundoff.
Vector phase_align(const Vector& v)
{
  Index imax = 0;
  v.cwiseAbs().maxCoeff(&imax);
  const Complex pivot = v(imax);
  if (std::abs(pivot) == 0.0)
  {
    return v;
  }
  return v * (std::conj(pivot) / std::abs(pivot));
}

struct PointTriple
{
  Complex sigma;
  Vector b;
  Vector c;
};

// Greedy conjugate pairing within tolerance; paired triples are replaced by
// exact (z, conj z) averages, leftover near-real points are snapped onto
// the axis. Pairing runs first so a near-real pair straddling the snap
// threshold is still matched.
std::vector<PointTriple> repair_conjugation(std::vector<PointTriple> triples,
                                            bool force_closure)
{
  const std::size_t n = triples.size();
  std::vector<bool> handled(n, false);

  struct Candidate
  {
    double dist;
    std::size_t i;
    std::size_t j;
  };
  std::vector<Candidate> candidates;
  for (std::size_t i = 0; i < n; ++i)
  {
    if (triples[i].sigma.imag() == 0.0)
    {
      continue;
    }
    for (std::size_t j = i + 1; j < n; ++j)
    {
      if (triples[j].sigma.imag() == 0.0)
      {
        continue;
      }
      // Opposite half-planes only; two near-real points on the same side
      // are handled by the axis snap below.
      if (triples[i].sigma.imag() * triples[j].sigma.imag() > 0.0)
      {
        continue;
      }
      const double dist = std::abs(triples[i].sigma - std::conj(triples[j].sigma));
      const double scale = 1.0 + std::abs(triples[i].sigma) + std::abs(triples[j].sigma);
      if (dist <= kClosureTol * scale)
      {
        candidates.push_back({dist, i, j});
      }
    }
  }
  std::sort(candidates.begin(), candidates.end(), [](const Candidate& a, const Candidate& b) {
    if (a.dist != b.dist)
    {
      return a.dist < b.dist;
    }
    return std::tie(a.i, a.j) < std::tie(b.i, b.j);
  });
  for (const auto& cand : candidates)
  {
    if (handled[cand.i] || handled[cand.j])
    {
      continue;
    }
    auto& ti = triples[cand.i];
    auto& tj = triples[cand.j];
    const Complex z = 0.5 * (ti.sigma + std::conj(tj.sigma));
    const Vector b = 0.5 * (ti.b + tj.b.conjugate());
    const Vector c = 0.5 * (ti.c + tj.c.conjugate());
    ti.sigma = z;
    ti.b = b;
    ti.c = c;
    tj.sigma = std::conj(z);
    tj.b = b.conjugate();
    tj.c = c.conjugate();
    handled[cand.i] = true;
    handled[cand.j] = true;
  }

  for (std::size_t i = 0; i < n; ++i)
  {
    if (handled[i])
    {
      continue;
    }
    auto& t = triples[i];
    if (force_closure || std::abs(t.sigma.imag()) <= kClosureTol * (1.0 + std::abs(t.sigma)))
    {
      t.sigma = Complex{t.sigma.real(), 0.0};
      t.b = phase_align(t.b);
      t.c = phase_align(t.c);
      const double bi = t.b.imag().cwiseAbs().maxCoeff();
      const double ci = t.c.imag().cwiseAbs().maxCoeff();
      if (bi <= kClosureTol && ci <= kClosureTol)
      {
        t.b.imag().setZero();
        t.c.imag().setZero();
      }
    }
  }
  return triples;
}

InterpolationData triples_to_data(const std::vector<PointTriple>& triples)
{
  InterpolationData data;
  data.points.reserve(triples.size());
  data.right_dirs.reserve(triples.size());
  data.left_dirs.reserve(triples.size());
  // A direction can vanish exactly when an eigenvector is orthogonal to the
  // input or output map; fall back to the first coordinate direction so the
  // iteration can continue.
  const auto or_unit = [](Vector v) {
    if (v.norm() == 0.0)
    {
      return Vector(Vector::Unit(v.size(), 0));
    }
    return v;
  };
  for (const auto& t : triples)
  {
    data.points.push_back(t.sigma);
    data.right_dirs.push_back(or_unit(t.b));
    data.left_dirs.push_back(or_unit(t.c));
  }
  data.normalize_directions();
  return data;
}

}  // namespace

Matrix TransferFunctionHandle::eval(Complex s) const
{
  if (!value)
  {
    throw MissingDerivative("transfer function handle has no value callback");
  }
  if (large_solves)
  {
    ++large_solves->count;
  }
  return value(s);
}

Matrix TransferFunctionHandle::eval_derivative(Complex s) const
{
  if (!derivative)
  {
    throw MissingDerivative("transfer function handle has no derivative callback");
  }
  if (large_solves)
  {
    ++large_solves->count;
  }
  return derivative(s);
}

TransferFunctionHandle make_transfer_handle(const StructuredSystem& sys, bool count_as_large)
{
  TransferFunctionHandle handle;
  handle.output_dim = sys.num_outputs();
  handle.input_dim = sys.num_inputs();
  handle.value = [&sys](Complex s) { return sys.eval_transfer(s); };
  handle.derivative = [&sys](Complex s) { return sys.eval_transfer_derivative(s); };
  if (count_as_large)
  {
    handle.large_solves = std::make_shared<SolveCounter>();
  }
  return handle;
}

TransferFunctionHandle make_transfer_handle(const LoewnerRealization& rom)
{
  TransferFunctionHandle handle;
  handle.output_dim = rom.num_outputs();
  handle.input_dim = rom.num_inputs();
  handle.value = [&rom](Complex s) { return loewner_transfer(rom, s); };
  handle.derivative = [&rom](Complex s) { return loewner_transfer_derivative(rom, s); };
  return handle;
}

double convergence_metric(const std::vector<Complex>& old_points,
                          const std::vector<Complex>& new_points)
{
  if (old_points.size() != new_points.size())
  {
    return std::numeric_limits<double>::infinity();
  }
  if (old_points.empty())
  {
    return 0.0;
  }
  auto sorted = [](std::vector<Complex> pts) {
    std::sort(pts.begin(), pts.end(), [](Complex a, Complex b) {
      if (a.real() != b.real())
      {
        return a.real() < b.real();
      }
      return a.imag() < b.imag();
    });
    return pts;
  };
  const std::vector<Complex> a = sorted(old_points);
  const std::vector<Complex> b = sorted(new_points);
  double diff2 = 0.0;
  double norm2 = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i)
  {
    diff2 += std::norm(b[i] - a[i]);
    norm2 += std::norm(a[i]);
  }
  if (norm2 == 0.0)
  {
    return diff2 == 0.0 ? 0.0 : std::numeric_limits<double>::infinity();
  }
  return std::sqrt(diff2 / norm2);
}

double convergence_metric(const InterpolationData& old_data, const InterpolationData& new_data)
{
  return convergence_metric(old_data.points, new_data.points);
}

InterpolationData repair_conjugation_closure(InterpolationData data, bool force_closure)
{
  std::vector<PointTriple> triples;
  triples.reserve(data.points.size());
  for (std::size_t i = 0; i < data.points.size(); ++i)
  {
    triples.push_back(PointTriple{data.points[i], data.right_dirs[i], data.left_dirs[i]});
  }
  return triples_to_data(repair_conjugation(std::move(triples), force_closure));
}

InterpolationData update_points_from_rom(const LoewnerRealization& rom, bool force_closure,
                                         bool strict_rhp)
{
  const auto triples = numerics::generalized_eig(rom.a, rom.e);
  std::vector<PointTriple> mirrored;
  mirrored.reserve(triples.size());
  for (const auto& t : triples)
  {
    if (!t.finite)
    {
      continue;
    }
    PointTriple pt;
    pt.sigma = -t.lambda;
    if (strict_rhp && pt.sigma.real() < 0.0)
    {
      pt.sigma = Complex{-pt.sigma.real(), pt.sigma.imag()};
    }
    pt.b = rom.b.adjoint() * t.y;
    pt.c = rom.c * t.x;
    mirrored.push_back(std::move(pt));
  }
  if (mirrored.empty())
  {
    throw NoFiniteEigenvalues("reduced pencil has no finite eigenvalues");
  }
  return triples_to_data(repair_conjugation(std::move(mirrored), rom.is_real || force_closure));
}

std::pair<LoewnerRealization, ReductionReport> tf_irka(const TransferFunctionHandle& tf,
                                                       const InterpolationData& init,
                                                       const IterationOptions& opts)
{
  if (opts.max_iter < 1 || !(opts.conv_tol > 0.0))
  {
    throw DimensionMismatch("iteration options require max_iter >= 1 and conv_tol > 0");
  }
  const auto start = Clock::now();
  InterpolationData data = init;
  data.validate();
  data.normalize_directions();

  ReductionReport report;
  const long long solves_before = tf.large_solves ? tf.large_solves->count : 0;
  LoewnerRealization rom;
  std::vector<Complex> rom_points;

  for (int it = 0; it < opts.max_iter; ++it)
  {
    std::vector<TransferSample> samples;
    samples.reserve(static_cast<std::size_t>(data.size()));
    for (const Complex& sigma : data.points)
    {
      try
      {
        samples.emplace_back(sigma, tf.eval(sigma), tf.eval_derivative(sigma));
      }
      catch (const Error& err)
      {
        std::ostringstream msg;
        msg << "iteration " << (it + 1) << ": " << err.what();
        throw SingularK(msg.str());
      }
    }
    rom = build_hermite_loewner(samples, data);
    rom_points = data.points;

    InterpolationData next;
    try
    {
      next = update_points_from_rom(rom, opts.realify, opts.strict_rhp_points);
    }
    catch (const Error& err)
    {
      std::ostringstream msg;
      msg << "iteration " << (it + 1) << ": " << err.what();
      throw SingularPencil(msg.str());
    }
    if (next.size() < data.size())
    {
      std::ostringstream warn;
      warn << "iteration " << (it + 1) << ": only " << next.size() << " finite eigenvalues for "
           << data.size() << " points";
      report.warnings.push_back(warn.str());
    }
    const double metric = convergence_metric(data, next);
    report.iterations.push_back(IterationRecord{data.points, metric, rom.order()});
    data = std::move(next);
    if (metric < opts.conv_tol)
    {
      report.converged = true;
      break;
    }
  }

  report.final_points = data.points;
  if (opts.realify)
  {
    try
    {
      const ConjugatePairing pairing = make_conjugate_pairing(rom_points);
      rom = realify_loewner(rom, pairing, pairing);
    }
    catch (const NotConjugationClosed& err)
    {
      report.warnings.push_back(std::string("realification skipped: ") + err.what());
    }
  }
  report.n_large_solves = (tf.large_solves ? tf.large_solves->count : 0) - solves_before;
  report.wall_time_seconds = seconds_since(start);
  return {std::move(rom), std::move(report)};
}

std::pair<StructuredSystem, ReductionReport> sptf_irka(const StructuredSystem& sys,
                                                       const InterpolationData& init,
                                                       const IterationOptions& opts)
{
  if (opts.max_iter < 1 || !(opts.conv_tol > 0.0))
  {
    throw DimensionMismatch("iteration options require max_iter >= 1 and conv_tol > 0");
  }
  const auto start = Clock::now();
  InterpolationData data = init;
  data.validate();
  data.normalize_directions();
  if (opts.realify && !data.closed_under_conjugation())
  {
    throw NotConjugationClosed("sptf_irka with realification needs conjugation-closed data");
  }

  IterationOptions inner = IterationOptions::tf_irka_defaults();
  inner.conv_tol = opts.conv_tol;
  inner.realify = opts.realify;

  ReductionReport report;
  std::unique_ptr<StructuredSystem> reduced;

  for (int it = 0; it < opts.max_iter; ++it)
  {
    ProjectionBases bases = build_tangential_bases(sys, data);
    if (opts.realify && sys.is_real())
    {
      bases = realify_bases(bases, data);
    }
    report.n_large_solves += 2 * data.size();
    reduced = std::make_unique<StructuredSystem>(project(sys, bases));

    const TransferFunctionHandle handle = make_transfer_handle(*reduced);
    auto [rom, inner_report] = tf_irka(handle, data, inner);
    if (!inner_report.converged)
    {
      std::ostringstream warn;
      warn << "inner tf_irka did not converge in outer iteration " << (it + 1);
      report.warnings.push_back(warn.str());
    }

    InterpolationData next = update_points_from_rom(rom, opts.realify, opts.strict_rhp_points);
    if (next.size() < data.size())
    {
      std::ostringstream warn;
      warn << "outer iteration " << (it + 1) << ": point set shrank to " << next.size();
      report.warnings.push_back(warn.str());
    }
    const double metric = convergence_metric(data, next);
    report.iterations.push_back(IterationRecord{data.points, metric, reduced->order()});
    data = std::move(next);
    if (metric < opts.conv_tol)
    {
      report.converged = true;
      break;
    }
  }

  report.final_points = data.points;
  report.wall_time_seconds = seconds_since(start);
  return {std::move(*reduced), std::move(report)};
}

}  // namespace strmor
