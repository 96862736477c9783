// Copyright 2026 The seedcomp Authors
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

#include "seedcomp/losses/metrics.hpp"

#include <cmath>

#include "seedcomp/core/errors.hpp"
#include "seedcomp/kernels/neighbors.hpp"
#include "seedcomp/losses/losses.hpp"

namespace seedcomp::metrics {

namespace {

// Share of `from` points whose nearest `to` point lies within threshold.
double covered_fraction(const PointCloud& from, const PointCloud& to, double threshold) {
  std::vector<std::size_t> idx(from.size());
  std::vector<double> d2(from.size());
  kernels::parallel::nearest(from.xyz(), to.xyz(), idx, d2);
  std::size_t hits = 0;
  for (double v : d2) {
    if (std::sqrt(v) <= threshold) ++hits;
  }
  return static_cast<double>(hits) / static_cast<double>(from.size());
}

}  // namespace

FScore fscore(const PointCloud& pred, const PointCloud& gt, double threshold) {
  if (pred.empty() || gt.empty()) throw ContractError("fscore: empty cloud");
  if (!(threshold > 0.0)) throw ContractError("fscore: threshold must be positive");
  FScore f;
  f.precision = covered_fraction(pred, gt, threshold);
  f.recall = covered_fraction(gt, pred, threshold);
  const double pr = f.precision + f.recall;
  f.value = pr > 0.0 ? 2.0 * f.precision * f.recall / pr : 0.0;
  return f;
}

double default_fscore_threshold(const PointCloud& gt) { return 0.01 * bbox_diagonal(gt); }

double fidelity(const PointCloud& input_partial, const PointCloud& pred) {
  if (input_partial.empty() || pred.empty()) throw ContractError("fidelity: empty cloud");
  std::vector<std::size_t> idx(input_partial.size());
  std::vector<double> d2(input_partial.size());
  kernels::parallel::nearest(input_partial.xyz(), pred.xyz(), idx, d2);
  double acc = 0.0;
  for (double v : d2) acc += std::sqrt(v);
  return acc / static_cast<double>(input_partial.size());
}

MatchResult mmd(const PointCloud& pred, const std::vector<PointCloud>& library) {
  if (library.empty()) throw ContractError("mmd: empty reference library");
  MatchResult best{losses::chamfer(pred, library[0], losses::ChamferNorm::kL2), 0};
  for (std::size_t i = 1; i < library.size(); ++i) {
    const double cd = losses::chamfer(pred, library[i], losses::ChamferNorm::kL2);
    if (cd < best.value) best = {cd, i};
  }
  return best;
}

}  // namespace seedcomp::metrics
