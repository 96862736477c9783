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

#include "seedcomp/losses/losses.hpp"

#include "seedcomp/autodiff/ops.hpp"
#include "seedcomp/core/errors.hpp"
#include "seedcomp/geometry/geometry.hpp"

namespace seedcomp::losses {

namespace {

void require_cloud_tensor(const ad::Tensor& t, const char* op) {
  if (!t.defined() || t.rank() != 2 || t.dim(1) != 3) {
    throw ShapeError(std::string(op) + ": expected an (N, 3) tensor");
  }
  if (t.dim(0) == 0) throw ContractError(std::string(op) + ": empty cloud");
}

ad::Tensor directed_term(const ad::Tensor& from, const ad::Tensor& to, ChamferNorm norm) {
  const auto idx = geometry::nearest_indices(from.values(), to.values());
  auto diff = ad::sub(from, ad::gather_rows(to, idx));
  if (norm == ChamferNorm::kL1) return ad::mean(ad::row_norm(diff));
  return ad::mean(ad::sum(ad::mul(diff, diff), 1));
}

}  // namespace

ad::Tensor chamfer(const ad::Tensor& a, const ad::Tensor& b, ChamferNorm norm) {
  require_cloud_tensor(a, "chamfer");
  require_cloud_tensor(b, "chamfer");
  return ad::scale(ad::add(directed_term(a, b, norm), directed_term(b, a, norm)), 0.5);
}

double chamfer(const PointCloud& a, const PointCloud& b, ChamferNorm norm) {
  ad::NoGradGuard no_grad;
  return chamfer(a.to_tensor(), b.to_tensor(), norm).item();
}

ad::Tensor directed_distance(const ad::Tensor& from, const ad::Tensor& to) {
  require_cloud_tensor(from, "directed_distance");
  require_cloud_tensor(to, "directed_distance");
  return directed_term(from, to, ChamferNorm::kL1);
}

PointCloud downsample_ground_truth(const PointCloud& gt, std::size_t count) {
  if (gt.empty()) throw ContractError("downsample_ground_truth: empty ground truth");
  if (gt.size() <= count) return gt;
  return gt.subset(geometry::farthest_point_sample(gt, count, 0));
}

CompletionLoss completion_loss(const ad::Tensor& seeds, const std::vector<ad::Tensor>& stages,
                               const PointCloud& gt) {
  if (gt.empty()) throw ContractError("completion_loss: empty ground truth");
  std::vector<ad::Tensor> outputs;
  outputs.push_back(seeds);
  outputs.insert(outputs.end(), stages.begin(), stages.end());

  CompletionLoss loss;
  for (const auto& out : outputs) {
    require_cloud_tensor(out, "completion_loss");
    const auto target = downsample_ground_truth(gt, out.dim(0));
    auto cd = chamfer(out, target.to_tensor(), ChamferNorm::kL1);
    loss.terms.push_back(cd.item());
    loss.value = loss.value.defined() ? ad::add(loss.value, cd) : cd;
  }
  return loss;
}

ad::Tensor partial_matching_loss(const PointCloud& input_partial,
                                 const ad::Tensor& prediction) {
  return directed_distance(input_partial.to_tensor(), prediction);
}

}  // namespace seedcomp::losses
