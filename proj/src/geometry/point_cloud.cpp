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

#include "seedcomp/geometry/point_cloud.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>

#include "seedcomp/core/errors.hpp"

namespace seedcomp {

namespace {
void check_finite(std::span<const double> xyz) {
  for (double v : xyz) {
    if (!std::isfinite(v)) throw NumericsError("point cloud: non-finite coordinate");
  }
}
}  // namespace

PointCloud::PointCloud(std::vector<double> xyz) : xyz_(std::move(xyz)) {
  if (xyz_.size() % 3 != 0) {
    throw ShapeError("point cloud: " + std::to_string(xyz_.size()) +
                     " values is not a multiple of 3");
  }
  check_finite(xyz_);
}

PointCloud::PointCloud(std::initializer_list<Vec3> points) {
  reserve(points.size());
  for (const auto& p : points) push_back(p);
}

PointCloud PointCloud::from_tensor(const ad::Tensor& t) {
  if (t.rank() != 2 || t.dim(1) != 3) {
    throw ShapeError("point cloud: expected (N, 3) tensor, got " + ad::shape_str(t.shape()));
  }
  return PointCloud(std::vector<double>(t.values().begin(), t.values().end()));
}

void PointCloud::push_back(const Vec3& p) {
  check_finite(p);
  xyz_.insert(xyz_.end(), p.begin(), p.end());
}

ad::Tensor PointCloud::to_tensor(bool requires_grad) const {
  return ad::Tensor::from({size(), 3}, xyz_, requires_grad);
}

PointCloud PointCloud::subset(std::span<const std::size_t> index) const {
  std::vector<double> out;
  out.reserve(3 * index.size());
  for (auto i : index) {
    if (i >= size()) throw IndexError("point cloud: subset index out of range");
    out.insert(out.end(), xyz_.begin() + 3 * i, xyz_.begin() + 3 * i + 3);
  }
  return PointCloud(std::move(out));
}

PointCloud PointCloud::translated(const Vec3& t) const {
  std::vector<double> out(xyz_);
  for (std::size_t i = 0; i < out.size(); ++i) out[i] += t[i % 3];
  return PointCloud(std::move(out));
}

PointCloud concat(const PointCloud& a, const PointCloud& b) {
  std::vector<double> out(a.xyz().begin(), a.xyz().end());
  out.insert(out.end(), b.xyz().begin(), b.xyz().end());
  return PointCloud(std::move(out));
}

Vec3 centroid(const PointCloud& cloud) {
  if (cloud.empty()) throw ContractError("centroid: empty cloud");
  Vec3 c{0.0, 0.0, 0.0};
  for (std::size_t i = 0; i < cloud.size(); ++i) {
    const auto p = cloud[i];
    for (int a = 0; a < 3; ++a) c[a] += p[a];
  }
  for (auto& v : c) v /= static_cast<double>(cloud.size());
  return c;
}

double bbox_diagonal(const PointCloud& cloud) {
  if (cloud.empty()) throw ContractError("bbox_diagonal: empty cloud");
  Vec3 lo{std::numeric_limits<double>::infinity(), std::numeric_limits<double>::infinity(),
          std::numeric_limits<double>::infinity()};
  Vec3 hi{-lo[0], -lo[1], -lo[2]};
  for (std::size_t i = 0; i < cloud.size(); ++i) {
    const auto p = cloud[i];
    for (int a = 0; a < 3; ++a) {
      lo[a] = std::min(lo[a], p[a]);
      hi[a] = std::max(hi[a], p[a]);
    }
  }
  double d2 = 0.0;
  for (int a = 0; a < 3; ++a) d2 += (hi[a] - lo[a]) * (hi[a] - lo[a]);
  return std::sqrt(d2);
}

}  // namespace seedcomp
