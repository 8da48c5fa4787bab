// Copyright 2026 The tempograph Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#pragma once

#include <algorithm>
#include <cmath>
#include <span>

#include "tempograph/model.hpp"

namespace tempograph {

enum class StddevMode { Population, Sample };

/// Neumaier-compensated running sum.
class CompensatedSum {
 public:
  void add(double x) {
    double t = sum_ + x;
    if (std::abs(sum_) >= std::abs(x)) {
      comp_ += (sum_ - t) + x;
    } else {
      comp_ += (x - t) + sum_;
    }
    sum_ = t;
  }
  double value() const noexcept { return sum_ + comp_; }

 private:
  double sum_ = 0.0;
  double comp_ = 0.0;
};

/// Two-pass statistics over `samples` (seconds). Throws on empty input.
inline DistanceStats stats_of(std::span<const double> samples, StddevMode mode = StddevMode::Population) {
  if (samples.empty()) throw Error("stats_of: empty sample list");
  CompensatedSum sum;
  double lo = samples.front(), hi = samples.front();
  for (double x : samples) {
    sum.add(x);
    lo = std::min(lo, x);
    hi = std::max(hi, x);
  }
  const double n = static_cast<double>(samples.size());
  double mean = sum.value() / n;
  // Rounding can push the mean of near-constant data a hair outside [min, max].
  mean = std::clamp(mean, lo, hi);

  CompensatedSum sq;
  for (double x : samples) {
    double d = x - mean;
    sq.add(d * d);
  }
  double denom = mode == StddevMode::Population ? n : n - 1.0;
  double var = denom > 0.0 ? sq.value() / denom : 0.0;
  return DistanceStats{samples.size(), mean, std::sqrt(std::max(var, 0.0)), lo, hi};
}

}  // namespace tempograph
