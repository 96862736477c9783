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

#include <array>
#include <cstddef>
#include <initializer_list>
#include <span>
#include <vector>

#include "seedcomp/autodiff/tensor.hpp"

namespace seedcomp {

using Vec3 = std::array<double, 3>;

/// Ordered list of 3D points stored packed as x0 y0 z0 x1 y1 z1 ...
/// Coordinates are always finite.
class PointCloud {
 public:
  PointCloud() = default;
  explicit PointCloud(std::vector<double> xyz);
  PointCloud(std::initializer_list<Vec3> points);

  static PointCloud from_tensor(const ad::Tensor& t);

  std::size_t size() const { return xyz_.size() / 3; }
  bool empty() const { return xyz_.empty(); }
  Vec3 operator[](std::size_t i) const {
    return {xyz_[3 * i], xyz_[3 * i + 1], xyz_[3 * i + 2]};
  }
  std::span<const double> xyz() const { return xyz_; }

  void push_back(const Vec3& p);
  void reserve(std::size_t n) { xyz_.reserve(3 * n); }

  /// (N, 3) tensor leaf.
  ad::Tensor to_tensor(bool requires_grad = false) const;
  PointCloud subset(std::span<const std::size_t> index) const;
  PointCloud translated(const Vec3& t) const;

  friend bool operator==(const PointCloud&, const PointCloud&) = default;

 private:
  std::vector<double> xyz_;
};

PointCloud concat(const PointCloud& a, const PointCloud& b);

Vec3 centroid(const PointCloud& cloud);

/// Length of the axis-aligned bounding box diagonal.
double bbox_diagonal(const PointCloud& cloud);

}  // namespace seedcomp
