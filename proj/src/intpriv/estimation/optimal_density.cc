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

#include "intpriv/estimation/optimal_density.h"

#include <cmath>

#include "absl/strings/str_cat.h"
#include "intpriv/core/errors.h"

namespace intpriv {

namespace {

double Trapezoid(const std::function<double(double)>& g, double lo, double hi, size_t steps) {
  const double h = (hi - lo) / static_cast<double>(steps);
  double s = 0.5 * (g(lo) + g(hi));
  for (size_t i = 1; i < steps; ++i) s += g(lo + h * static_cast<double>(i));
  return s * h;
}

}  // namespace

absl::StatusOr<OptimalDensity> OptimalAnchorDensity(const std::function<double(double)>& cdf,
                                                    const std::function<double(double)>& dphi,
                                                    std::vector<double> grid) {
  if (grid.size() < 3) return InvalidArgument("ValidationError", "grid: need >= 3 points");
  const auto raw = [&](double u) {
    const double f = std::clamp(cdf(u), 0.0, 1.0);
    return std::sqrt(f * (1.0 - f)) * std::abs(dphi(u));
  };
  std::vector<double> dens(grid.size());
  for (size_t i = 0; i < grid.size(); ++i) {
    if (i > 0 && !(grid[i] > grid[i - 1])) {
      return InvalidArgument("ValidationError", "grid: must strictly increase");
    }
    dens[i] = raw(grid[i]);
    if (!std::isfinite(dens[i])) {
      return InvalidArgument("NotIntegrable", absl::StrCat("density not finite at ", grid[i]));
    }
  }
  double total = 0.0;
  for (size_t i = 1; i < grid.size(); ++i) {
    total += 0.5 * (dens[i - 1] + dens[i]) * (grid[i] - grid[i - 1]);
  }
  if (!(total > 0.0)) return InvalidArgument("NotIntegrable", "density vanishes on the grid");
  const double width = grid.back() - grid.front();
  const size_t steps = 4 * grid.size();
  const double tail = Trapezoid(raw, grid.front() - width, grid.front(), steps) +
                      Trapezoid(raw, grid.back(), grid.back() + width, steps);
  if (!(tail < 1e-6 * total)) {
    return InvalidArgument("NotIntegrable",
                           absl::StrCat("tail mass ", tail, " against ", total,
                                        " on the grid; widen the grid"));
  }
  INTPRIV_ASSIGN_OR_RETURN(Distribution law, Distribution::Grid(grid, dens));
  INTPRIV_ASSIGN_OR_RETURN(AnchorSampler sampler, AnchorSampler::Iid(law, 1));
  for (double& d : dens) d /= total;
  return OptimalDensity{std::move(law), std::move(grid), std::move(dens), total,
                        std::move(sampler)};
}

}  // namespace intpriv
