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

#pragma once

#include <cstddef>
#include <vector>

#include "seedcomp/geometry/point_cloud.hpp"

// Evaluation metrics. Values are raw; table-style reporting multiplies CD
// values by 1000 at the presentation layer.

namespace seedcomp::metrics {

struct FScore {
  double precision = 0.0;
  double recall = 0.0;
  double value = 0.0;
};

/// Precision: share of pred within `threshold` of gt; recall: the converse.
/// F = 2PR / (P + R), 0 when P + R = 0.
FScore fscore(const PointCloud& pred, const PointCloud& gt, double threshold);

/// 1% of the ground truth bounding-box diagonal.
double default_fscore_threshold(const PointCloud& gt);

/// Mean distance from each input point to its nearest predicted point.
double fidelity(const PointCloud& input_partial, const PointCloud& pred);

struct MatchResult {
  double value = 0.0;
  std::size_t index = 0;
};

/// Minimal matching distance: smallest CD-L2 between pred and a library
/// shape, with the index of that shape (first on ties).
MatchResult mmd(const PointCloud& pred, const std::vector<PointCloud>& library);

}  // namespace seedcomp::metrics
