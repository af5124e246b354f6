// SPDX-License-Identifier: Apache-2.0
#include "strmor/straika.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <limits>
#include <memory>
#include <numeric>
#include <random>
#include <sstream>

#include "strmor/errors.hpp"

namespace strmor {

namespace {

using Clock = std::chrono::steady_clock;

constexpr double kBoundaryMatchRtol = 1e-12;
constexpr double kPairMatchRtol = 1e-8;

double seconds_since(Clock::time_point start)
{
  return std::chrono::duration<double>(Clock::now() - start).count();
}

std::vector<double> logspace(double lo, double hi, Index count)
{
  std::vector<double> out;
  out.reserve(static_cast<std::size_t>(count));
  if (count == 1)
  {
    out.push_back(lo);
    return out;
  }
  const double l0 = std::log10(lo);
  const double l1 = std::log10(hi);
  for (Index i = 0; i < count; ++i)
  {
    const double t = static_cast<double>(i) / static_cast<double>(count - 1);
    out.push_back(std::pow(10.0, l0 + t * (l1 - l0)));
  }
  return out;
}

// Group selected triples into conjugate-pair blocks so a dominance cap never
// splits a pair.
std::vector<std::vector<std::size_t>> conjugate_blocks(
    const std::vector<numerics::EigenTriple>& triples)
{
  const std::size_t n = triples.size();
  std::vector<bool> used(n, false);
  std::vector<std::vector<std::size_t>> blocks;
  for (std::size_t i = 0; i < n; ++i)
  {
    if (used[i])
    {
      continue;
    }
    used[i] = true;
    std::size_t partner = n;
    double best = std::numeric_limits<double>::infinity();
    for (std::size_t j = i + 1; j < n; ++j)
    {
      if (used[j])
      {
        continue;
      }
      const double dist = std::abs(triples[i].lambda - std::conj(triples[j].lambda));
      const double scale = 1.0 + std::abs(triples[i].lambda) + std::abs(triples[j].lambda);
      if (dist <= kPairMatchRtol * scale && dist < best)
      {
        best = dist;
        partner = j;
      }
    }
    if (partner < n && triples[i].lambda.imag() != 0.0)
    {
      used[partner] = true;
      blocks.push_back({i, partner});
    }
    else
    {
      blocks.push_back({i});
    }
  }
  return blocks;
}

}  // namespace

FrequencyRegion::FrequencyRegion(std::vector<std::pair<double, double>> intervals)
{
  if (intervals.empty())
  {
    throw DimensionMismatch("frequency region needs at least one interval");
  }
  for (const auto& [lo, hi] : intervals)
  {
    if (!(lo >= 0.0) || !(hi >= lo))
    {
      throw DimensionMismatch("frequency interval must satisfy 0 <= w1 <= w2");
    }
  }
  std::sort(intervals.begin(), intervals.end());
  for (const auto& iv : intervals)
  {
    if (!intervals_.empty() && iv.first <= intervals_.back().second)
    {
      intervals_.back().second = std::max(intervals_.back().second, iv.second);
    }
    else
    {
      intervals_.push_back(iv);
    }
  }
}

bool FrequencyRegion::contains(double omega) const
{
  for (const auto& [lo, hi] : intervals_)
  {
    if (omega >= lo && omega <= hi)
    {
      return true;
    }
  }
  return false;
}

std::vector<Complex> default_sampling_points(const FrequencyRegion& region,
                                             Index q_per_interval)
{
  if (q_per_interval < 1)
  {
    throw DimensionMismatch("q_per_interval must be >= 1");
  }
  std::vector<Complex> points;
  for (const auto& [lo_raw, hi_raw] : region.intervals())
  {
    // Substitute degenerate endpoints: logarithmic spacing needs a finite,
    // positive interval.
    double hi = std::isfinite(hi_raw) ? hi_raw : std::max(1e6, lo_raw * 1e6);
    double lo = lo_raw > 0.0 ? lo_raw : hi * 1e-6;
    if (lo >= hi)
    {
      hi = lo * (1.0 + 1e-6);
    }
    for (double omega : logspace(lo, hi, q_per_interval))
    {
      points.emplace_back(0.0, omega);
      points.emplace_back(0.0, -omega);
    }
  }
  return points;
}

std::vector<numerics::EigenTriple> select_in_region(
    const std::vector<numerics::EigenTriple>& triples, const FrequencyRegion& region,
    bool include_boundary)
{
  const std::size_t n = triples.size();
  std::vector<bool> keep(n, false);
  for (std::size_t i = 0; i < n; ++i)
  {
    if (triples[i].finite && region.contains(std::abs(triples[i].lambda.imag())))
    {
      keep[i] = true;
    }
  }

  if (include_boundary)
  {
    // Per interval endpoint: the nearest outside |Im lambda| value, with
    // every triple sharing that value (i.e. the whole conjugate pair).
    const auto mark_nearest = [&](double endpoint, bool below) {
      double best = std::numeric_limits<double>::infinity();
      double best_value = 0.0;
      bool found = false;
      for (std::size_t i = 0; i < n; ++i)
      {
        if (!triples[i].finite)
        {
          continue;
        }
        const double im = std::abs(triples[i].lambda.imag());
        if (region.contains(im))
        {
          continue;
        }
        if ((below && im < endpoint) || (!below && im > endpoint))
        {
          const double dist = std::abs(im - endpoint);
          if (dist < best)
          {
            best = dist;
            best_value = im;
            found = true;
          }
        }
      }
      if (found)
      {
        for (std::size_t i = 0; i < n; ++i)
        {
          if (!triples[i].finite)
          {
            continue;
          }
          const double im = std::abs(triples[i].lambda.imag());
          if (std::abs(im - best_value) <= kBoundaryMatchRtol * (1.0 + best_value))
          {
            keep[i] = true;
          }
        }
      }
    };
    for (const auto& [lo, hi] : region.intervals())
    {
      if (lo > 0.0)
      {
        mark_nearest(lo, true);
      }
      if (std::isfinite(hi))
      {
        mark_nearest(hi, false);
      }
    }
  }

  std::vector<numerics::EigenTriple> selected;
  for (std::size_t i = 0; i < n; ++i)
  {
    if (keep[i])
    {
      selected.push_back(triples[i]);
    }
  }
  return selected;
}

double pole_dominance(const numerics::EigenTriple& triple, const LoewnerRealization& rom,
                      DominanceScaling scaling)
{
  const double abs_lambda = std::abs(triple.lambda);
  const double abs_re = std::abs(triple.lambda.real());
  if (abs_re < 1e-14 * abs_lambda)
  {
    throw ImaginaryAxisPole("pole too close to the imaginary axis for dominance");
  }
  // (C y)(x^H B) is rank one, so its spectral norm is the product of the
  // factor norms.
  const double cy = (rom.c * triple.y).norm();
  const double xb = (triple.x.adjoint() * rom.b).norm();
  double d = abs_lambda * cy * xb / abs_re;
  if (scaling == DominanceScaling::normalized)
  {
    const Complex yex = (triple.y.adjoint() * rom.e * triple.x)(0, 0);
    const double denom = std::abs(yex);
    if (denom == 0.0)
    {
      throw ImaginaryAxisPole("normalized dominance undefined: y^H E x vanishes");
    }
    d /= denom;
  }
  return d;
}

std::pair<StructuredSystem, ReductionReport> straika(const StructuredSystem& sys,
                                                     const InterpolationData& init,
                                                     const FrequencyRegion& region,
                                                     const StraikaOptions& opts)
{
  if (opts.r_max < 1)
  {
    throw DimensionMismatch("straika requires r_max >= 1");
  }
  if (opts.iteration.max_iter < 1 || !(opts.iteration.conv_tol > 0.0))
  {
    throw DimensionMismatch("iteration options require max_iter >= 1 and conv_tol > 0");
  }
  InterpolationData data = init;
  data.validate();
  data.normalize_directions();
  const bool realify = opts.iteration.realify && sys.is_real();
  if (opts.iteration.realify && !data.closed_under_conjugation())
  {
    throw NotConjugationClosed("straika with realification needs conjugation-closed data");
  }

  const std::vector<Complex> theta = opts.sampling_points.empty()
                                         ? default_sampling_points(region, opts.q_per_interval)
                                         : opts.sampling_points;
  if (theta.size() < 2)
  {
    throw OddSampleCount("straika needs at least two Loewner sampling points");
  }

  const auto start = Clock::now();
  std::mt19937_64 rng(opts.seed);
  ReductionReport report;
  report.seed = opts.seed;
  std::unique_ptr<StructuredSystem> reduced;

  for (int it = 0; it < opts.iteration.max_iter; ++it)
  {
    ProjectionBases bases = build_tangential_bases(sys, data);
    if (realify)
    {
      bases = realify_bases(bases, data);
    }
    report.n_large_solves += 2 * data.size();
    reduced = std::make_unique<StructuredSystem>(project(sys, bases));

    std::vector<TransferSample> samples;
    samples.reserve(theta.size());
    for (const Complex& t : theta)
    {
      samples.emplace_back(t, reduced->eval_transfer(t));
    }

    IdentifyOptions ident;
    ident.rel_tol = opts.loewner_tol;
    ident.realify = realify;
    const TruncatedLoewner surrogate = identify(samples, ident, rng);

    const auto triples = numerics::generalized_eig(surrogate.rom.a, surrogate.rom.e);
    std::vector<numerics::EigenTriple> selected =
        select_in_region(triples, region, opts.include_boundary_pair);
    if (selected.empty())
    {
      std::ostringstream msg;
      msg << "no surrogate pole falls in the frequency region; available |Im lambda|:";
      std::vector<double> imags;
      for (const auto& t : triples)
      {
        if (t.finite)
        {
          imags.push_back(std::abs(t.lambda.imag()));
        }
      }
      std::sort(imags.begin(), imags.end());
      const std::size_t shown = std::min<std::size_t>(imags.size(), 20);
      for (std::size_t i = 0; i < shown; ++i)
      {
        msg << ' ' << imags[i];
      }
      if (imags.size() > shown)
      {
        msg << " ... (" << imags.size() << " total)";
      }
      throw EmptySelection(msg.str());
    }

    if (static_cast<Index>(selected.size()) > opts.r_max)
    {
      std::vector<double> dom(selected.size(), 0.0);
      for (std::size_t i = 0; i < selected.size(); ++i)
      {
        dom[i] = pole_dominance(selected[i], surrogate.rom, opts.dominance);
      }
      if (realify)
      {
        // Keep conjugate pairs atomic: rank pair blocks by their best member
        // and fill up to r_max without splitting a block.
        const auto blocks = conjugate_blocks(selected);
        std::vector<std::size_t> order(blocks.size());
        std::iota(order.begin(), order.end(), std::size_t{0});
        std::stable_sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
          double da = 0.0, db = 0.0;
          for (std::size_t i : blocks[a])
          {
            da = std::max(da, dom[i]);
          }
          for (std::size_t i : blocks[b])
          {
            db = std::max(db, dom[i]);
          }
          return da > db;
        });
        std::vector<numerics::EigenTriple> capped;
        for (std::size_t bi : order)
        {
          if (static_cast<Index>(capped.size() + blocks[bi].size()) > opts.r_max)
          {
            break;
          }
          for (std::size_t i : blocks[bi])
          {
            capped.push_back(selected[i]);
          }
        }
        if (capped.empty())
        {
          throw EmptySelection("dominance cap left no conjugation-closed selection");
        }
        selected = std::move(capped);
      }
      else
      {
        std::vector<std::size_t> order(selected.size());
        std::iota(order.begin(), order.end(), std::size_t{0});
        std::stable_sort(order.begin(), order.end(),
                         [&](std::size_t a, std::size_t b) { return dom[a] > dom[b]; });
        std::vector<numerics::EigenTriple> capped;
        for (Index i = 0; i < opts.r_max; ++i)
        {
          capped.push_back(selected[order[static_cast<std::size_t>(i)]]);
        }
        selected = std::move(capped);
      }
    }

    // Mirror only the selected triples, with the usual update conventions.
    InterpolationData next;
    for (const auto& t : selected)
    {
      next.points.push_back(-t.lambda);
      next.right_dirs.emplace_back(surrogate.rom.b.adjoint() * t.y);
      next.left_dirs.emplace_back(surrogate.rom.c * t.x);
    }
    next = repair_conjugation_closure(std::move(next), surrogate.rom.is_real);

    const double metric = convergence_metric(data.points, next.points);
    report.iterations.push_back(IterationRecord{data.points, metric, reduced->order()});
    data = std::move(next);
    if (metric < opts.iteration.conv_tol)
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
