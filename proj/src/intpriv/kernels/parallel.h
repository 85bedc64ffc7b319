// Copyright 2026 The Interval Privacy Authors.
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#ifndef INTPRIV_KERNELS_PARALLEL_H_
#define INTPRIV_KERNELS_PARALLEL_H_

#include <algorithm>
#include <array>
#include <cmath>
#include <cstddef>
#include <cstdint>
#include <span>
#include <vector>

#include "absl/status/status.h"
#include "absl/status/statusor.h"
#include "intpriv/core/rng.h"

namespace intpriv {

// Work is cut into fixed-size blocks and partial results are combined in
// block order, so every reduction below returns the same bits for any
// thread count, including the serial path.
inline constexpr size_t kBlockSize = 2048;

enum class Execution { kParallel, kSerial };

inline size_t NumBlocks(size_t n) { return (n + kBlockSize - 1) / kBlockSize; }

// Sets the OpenMP team size; 0 keeps the runtime default.
void SetThreadCount(int threads);
int ThreadCount();

// Calls body(block, begin, end) for every block.
template <class F>
void ForEachBlock(size_t n, Execution exec, F&& body) {
  const auto blocks = static_cast<std::ptrdiff_t>(NumBlocks(n));
  if (exec == Execution::kParallel) {
#pragma omp parallel for schedule(static)
    for (std::ptrdiff_t b = 0; b < blocks; ++b) {
      const size_t begin = static_cast<size_t>(b) * kBlockSize;
      body(static_cast<size_t>(b), begin, std::min(n, begin + kBlockSize));
    }
  } else {
    for (std::ptrdiff_t b = 0; b < blocks; ++b) {
      const size_t begin = static_cast<size_t>(b) * kBlockSize;
      body(static_cast<size_t>(b), begin, std::min(n, begin + kBlockSize));
    }
  }
}

// Sum of f(i) for i in [0, n).
template <class F>
double BlockedSum(size_t n, Execution exec, F&& f) {
  std::vector<double> partial(NumBlocks(n), 0.0);
  ForEachBlock(n, exec, [&](size_t b, size_t begin, size_t end) {
    double s = 0.0;
    for (size_t i = begin; i < end; ++i) s += f(i);
    partial[b] = s;
  });
  double total = 0.0;
  for (double s : partial) total += s;
  return total;
}

inline double BlockedSum(std::span<const double> x, Execution exec = Execution::kParallel) {
  return BlockedSum(x.size(), exec, [x](size_t i) { return x[i]; });
}

// Plain left-to-right loop, the reference the blocked sum is tested against.
inline double NaiveSum(std::span<const double> x) {
  double s = 0.0;
  for (double v : x) s += v;
  return s;
}

// Welford accumulator with the pairwise merge of Chan et al.
struct RunningMoments {
  double count = 0.0;
  double mean = 0.0;
  double m2 = 0.0;

  void Add(double x) {
    count += 1.0;
    const double d = x - mean;
    mean += d / count;
    m2 += d * (x - mean);
  }
  void Merge(const RunningMoments& o) {
    if (o.count == 0.0) return;
    if (count == 0.0) {
      *this = o;
      return;
    }
    const double n = count + o.count;
    const double d = o.mean - mean;
    mean += d * o.count / n;
    m2 += o.m2 + d * d * count * o.count / n;
    count = n;
  }
  double Variance() const { return count > 1.0 ? m2 / (count - 1.0) : 0.0; }
  double StdErr() const { return count > 0.0 ? std::sqrt(Variance() / count) : 0.0; }
};

// Monte Carlo driver: draw i runs body(rng, i, acc) where rng is the stream
// of i's block, seeded from (seed, block). The K accumulators of each block
// are merged in block order. The first failing draw (in draw order) aborts
// the run with its status.
template <size_t K, class F>
absl::StatusOr<std::array<RunningMoments, K>> BlockedMonteCarlo(
    size_t draws, uint64_t seed, F&& body, Execution exec = Execution::kParallel) {
  const size_t blocks = NumBlocks(draws);
  std::vector<std::array<RunningMoments, K>> partial(blocks);
  std::vector<absl::Status> errors(blocks);
  ForEachBlock(draws, exec, [&](size_t b, size_t begin, size_t end) {
    Rng rng(DeriveSeed(seed, {b}));
    for (size_t i = begin; i < end; ++i) {
      absl::Status st = body(rng, i, partial[b]);
      if (!st.ok()) {
        errors[b] = std::move(st);
        return;
      }
    }
  });
  std::array<RunningMoments, K> total{};
  for (size_t b = 0; b < blocks; ++b) {
    if (!errors[b].ok()) return errors[b];
    for (size_t k = 0; k < K; ++k) total[k].Merge(partial[b][k]);
  }
  return total;
}

}  // namespace intpriv

#endif  // INTPRIV_KERNELS_PARALLEL_H_
