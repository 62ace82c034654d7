#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <limits>
#include <vector>

#include <omp.h>

#include "sudlerlab/errors.hpp"

namespace sudlerlab {

struct ScanConfig {
  std::uint64_t chunk_size = std::uint64_t{1} << 16;
  int workers = 1;
};

// Aggregates over the prefix values v_0 = 0, v_1, ..., v_N where
// v_n = v_{n-1} + f(n).
struct StreamSummary {
  std::uint64_t count = 0;
  long double last = 0;
  long double max = 0;
  std::uint64_t argmax = 0;
  long double min = 0;
  std::uint64_t argmin = 0;
  long double sum = 0;
  // log sum_n exp(c_j v_n) for each requested weight c_j.
  std::vector<long double> log_sum_exp;
};

namespace detail {

struct LogSumExp {
  long double shift = -std::numeric_limits<long double>::infinity();
  long double scaled = 0;

  void add(long double x) {
    if (x > shift) {
      scaled = scaled * static_cast<long double>(std::exp(static_cast<double>(shift - x))) + 1;
      shift = x;
    } else {
      scaled += std::exp(static_cast<double>(x - shift));
    }
  }
  void merge(const LogSumExp& o) {
    if (o.scaled == 0) return;
    if (scaled == 0) {
      *this = o;
      return;
    }
    if (o.shift > shift) {
      scaled = scaled * std::exp(shift - o.shift) + o.scaled;
      shift = o.shift;
    } else {
      scaled += o.scaled * std::exp(o.shift - shift);
    }
  }
  long double value() const { return shift + std::log(scaled); }
};

struct ChunkSummary {
  long double max = -std::numeric_limits<long double>::infinity();
  std::uint64_t argmax = 0;
  long double min = std::numeric_limits<long double>::infinity();
  std::uint64_t argmin = 0;
  long double sum = 0;
  std::vector<LogSumExp> lse;

  void add(std::uint64_t n, long double v, const std::vector<double>& weights) {
    if (v > max) {
      max = v;
      argmax = n;
    }
    if (v < min) {
      min = v;
      argmin = n;
    }
    sum += v;
    for (std::size_t j = 0; j < weights.size(); ++j) lse[j].add(weights[j] * v);
  }
  // Chunks are merged in ascending order, so ties keep the earlier index.
  void merge(const ChunkSummary& o) {
    if (o.max > max) {
      max = o.max;
      argmax = o.argmax;
    }
    if (o.min < min) {
      min = o.min;
      argmin = o.argmin;
    }
    sum += o.sum;
    for (std::size_t j = 0; j < lse.size(); ++j) lse[j].merge(o.lse[j]);
  }
};

inline std::uint64_t chunk_count(std::uint64_t n_max, std::uint64_t chunk) {
  return n_max == 0 ? 0 : (n_max + chunk - 1) / chunk;
}

// Pass 1: per-chunk factor totals, plus the first singular index.
template <class Source>
std::vector<long double> chunk_totals(const Source& src, std::uint64_t n_max,
                                      const ScanConfig& cfg) {
  const std::uint64_t chunk = std::max<std::uint64_t>(cfg.chunk_size, 1);
  const auto chunks = static_cast<std::int64_t>(chunk_count(n_max, chunk));
  std::vector<long double> totals(static_cast<std::size_t>(chunks), 0);
  std::uint64_t first_bad = std::numeric_limits<std::uint64_t>::max();

#pragma omp parallel for schedule(static) num_threads(std::max(cfg.workers, 1)) \
    reduction(min : first_bad)
  for (std::int64_t j = 0; j < chunks; ++j) {
    const std::uint64_t lo = 1 + static_cast<std::uint64_t>(j) * chunk;
    const std::uint64_t hi = std::min(n_max, lo + chunk - 1);
    auto cur = src.cursor(lo);
    long double t = 0;
    for (std::uint64_t n = lo; n <= hi; ++n) {
      const double f = cur.next();
      if (std::isnan(f) && n < first_bad) first_bad = n;
      t += f;
    }
    totals[static_cast<std::size_t>(j)] = t;
  }
  if (first_bad != std::numeric_limits<std::uint64_t>::max()) throw SingularFactorError(first_bad);

  long double running = 0;
  for (auto& t : totals) {
    const long double here = t;
    t = running;
    running += here;
  }
  return totals;
}

}  // namespace detail

// All prefix values v_0..v_N.  Bit-identical for a fixed chunk size,
// whatever the worker count.
template <class Source>
std::vector<long double> prefix_values(const Source& src, std::uint64_t n_max,
                                       const ScanConfig& cfg = {}) {
  const std::uint64_t chunk = std::max<std::uint64_t>(cfg.chunk_size, 1);
  const std::vector<long double> offsets = detail::chunk_totals(src, n_max, cfg);
  std::vector<long double> out(n_max + 1, 0);
  const auto chunks = static_cast<std::int64_t>(offsets.size());

#pragma omp parallel for schedule(static) num_threads(std::max(cfg.workers, 1))
  for (std::int64_t j = 0; j < chunks; ++j) {
    const std::uint64_t lo = 1 + static_cast<std::uint64_t>(j) * chunk;
    const std::uint64_t hi = std::min(n_max, lo + chunk - 1);
    auto cur = src.cursor(lo);
    long double v = offsets[static_cast<std::size_t>(j)];
    for (std::uint64_t n = lo; n <= hi; ++n) {
      v += cur.next();
      out[n] = v;
    }
  }
  return out;
}

// Streaming aggregates without materializing the values.
template <class Source>
StreamSummary summarize(const Source& src, std::uint64_t n_max,
                        const std::vector<double>& weights = {}, const ScanConfig& cfg = {}) {
  const std::uint64_t chunk = std::max<std::uint64_t>(cfg.chunk_size, 1);
  const std::vector<long double> offsets = detail::chunk_totals(src, n_max, cfg);
  const auto chunks = static_cast<std::int64_t>(offsets.size());

  detail::ChunkSummary seed;
  seed.lse.resize(weights.size());
  std::vector<detail::ChunkSummary> parts(static_cast<std::size_t>(chunks), seed);
  std::vector<long double> lasts(static_cast<std::size_t>(chunks), 0);

#pragma omp parallel for schedule(static) num_threads(std::max(cfg.workers, 1))
  for (std::int64_t j = 0; j < chunks; ++j) {
    const std::uint64_t lo = 1 + static_cast<std::uint64_t>(j) * chunk;
    const std::uint64_t hi = std::min(n_max, lo + chunk - 1);
    auto cur = src.cursor(lo);
    auto& part = parts[static_cast<std::size_t>(j)];
    long double v = offsets[static_cast<std::size_t>(j)];
    for (std::uint64_t n = lo; n <= hi; ++n) {
      v += cur.next();
      part.add(n, v, weights);
    }
    lasts[static_cast<std::size_t>(j)] = v;
  }

  detail::ChunkSummary total = seed;
  total.add(0, 0, weights);
  for (const auto& part : parts) total.merge(part);

  StreamSummary s;
  s.count = n_max + 1;
  s.last = chunks ? lasts.back() : 0;
  s.max = total.max;
  s.argmax = total.argmax;
  s.min = total.min;
  s.argmin = total.argmin;
  s.sum = total.sum;
  for (const auto& l : total.lse) s.log_sum_exp.push_back(l.value());
  return s;
}

}  // namespace sudlerlab
