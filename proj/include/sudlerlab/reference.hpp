#pragma once

#include <cmath>
#include <cstdint>
#include <vector>

#include "sudlerlab/errors.hpp"
#include "sudlerlab/scan.hpp"

namespace sudlerlab::reference {

// One-pass serial versions of the scan kernels.  Each factor is evaluated
// from its own index instead of a cursor carried along the chunk.  With a
// single chunk they agree with the parallel path bit for bit.
template <class Source>
std::vector<long double> prefix_values(const Source& src, std::uint64_t n_max) {
  std::vector<long double> out(n_max + 1, 0);
  long double v = 0;
  for (std::uint64_t n = 1; n <= n_max; ++n) {
    const double f = src.at(n);
    if (std::isnan(f)) throw SingularFactorError(n);
    v += f;
    out[n] = v;
  }
  return out;
}

template <class Source>
StreamSummary summarize(const Source& src, std::uint64_t n_max,
                        const std::vector<double>& weights = {}) {
  const std::vector<long double> values = reference::prefix_values(src, n_max);
  StreamSummary s;
  s.count = n_max + 1;
  s.last = values.back();
  s.max = s.min = 0;
  std::vector<detail::LogSumExp> lse(weights.size());
  for (std::uint64_t n = 0; n <= n_max; ++n) {
    const long double v = values[n];
    if (v > s.max) {
      s.max = v;
      s.argmax = n;
    }
    if (v < s.min) {
      s.min = v;
      s.argmin = n;
    }
    s.sum += v;
    for (std::size_t j = 0; j < weights.size(); ++j) lse[j].add(weights[j] * v);
  }
  for (const auto& l : lse) s.log_sum_exp.push_back(l.value());
  return s;
}

}  // namespace sudlerlab::reference
