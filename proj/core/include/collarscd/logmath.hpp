// Copyright 2026 The collarscd Authors
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
#include <limits>
#include <span>

namespace collarscd {

inline constexpr double kNegInf = -std::numeric_limits<double>::infinity();

// Max-subtracted log(sum(exp(x))). Empty input gives -inf.
inline double LogSumExp(std::span<const double> values) {
  double hi = kNegInf;
  for (double v : values) hi = std::max(hi, v);
  if (!std::isfinite(hi)) return hi;
  double acc = 0.0;
  for (double v : values) acc += std::exp(v - hi);
  return hi + std::log(acc);
}

// In-place softmax on the same stabilization as LogSumExp; returns the
// normalizer.
inline double SoftmaxInPlace(std::span<double> values) {
  const double norm = LogSumExp(values);
  for (double& v : values) v = std::exp(v - norm);
  return norm;
}

inline double LogSigmoid(double a) {
  // log(1 / (1 + e^-a)) without overflow for either sign.
  return a >= 0.0 ? -std::log1p(std::exp(-a)) : a - std::log1p(std::exp(a));
}

inline double Sigmoid(double a) {
  if (a >= 0.0) return 1.0 / (1.0 + std::exp(-a));
  const double e = std::exp(a);
  return e / (1.0 + e);
}

// Neumaier compensated summation. Results do not depend on whether partial
// sums were formed serially or merged from independent accumulators, to
// within the compensation error.
class KahanSum {
 public:
  void Add(double x) {
    const double t = sum_ + x;
    if (std::abs(sum_) >= std::abs(x)) {
      comp_ += (sum_ - t) + x;
    } else {
      comp_ += (x - t) + sum_;
    }
    sum_ = t;
  }
  void Merge(const KahanSum& other) {
    Add(other.sum_);
    Add(other.comp_);
  }
  double value() const { return sum_ + comp_; }

 private:
  double sum_ = 0.0;
  double comp_ = 0.0;
};

}  // namespace collarscd
