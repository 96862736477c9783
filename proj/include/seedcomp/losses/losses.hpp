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

#include "seedcomp/autodiff/tensor.hpp"
#include "seedcomp/geometry/point_cloud.hpp"

namespace seedcomp::losses {

enum class ChamferNorm { kL1, kL2 };

/// Symmetric Chamfer distance with the 1/2 prefactor:
///   CD = 1/2 [ mean_{x in a} m(x, b) + mean_{y in b} m(y, a) ]
/// m is the nearest-neighbor distance (L1) or its square (L2).
/// Differentiable in the coordinates of both (N, 3) tensors.
ad::Tensor chamfer(const ad::Tensor& a, const ad::Tensor& b, ChamferNorm norm);
double chamfer(const PointCloud& a, const PointCloud& b, ChamferNorm norm);

/// mean_{x in from} min_{y in to} |x - y|
ad::Tensor directed_distance(const ad::Tensor& from, const ad::Tensor& to);

/// Per-term values of the training objective; total is their sum.
struct LossBreakdown {
  std::vector<double> stage_cds;  // seeds first, then P_1 .. P_L
  double partial_matching = 0.0;
  double total = 0.0;
};

struct CompletionLoss {
  ad::Tensor value;
  std::vector<double> terms;
};

/// Ground truth reduced by FPS to `count` points when it is larger.
PointCloud downsample_ground_truth(const PointCloud& gt, std::size_t count);

/// Sum of CD-L1 between each output (seeds, then stages) and the ground
/// truth downsampled to that output's size.
CompletionLoss completion_loss(const ad::Tensor& seeds, const std::vector<ad::Tensor>& stages,
                               const PointCloud& gt);

/// Input-to-prediction directed distance; covers the input without
/// penalizing predicted points away from it.
ad::Tensor partial_matching_loss(const PointCloud& input_partial,
                                 const ad::Tensor& prediction);

}  // namespace seedcomp::losses
