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
#include <cstdint>
#include <string>
#include <vector>

#include "seedcomp/geometry/point_cloud.hpp"

namespace seedcomp::data {

enum class ShapeFamily { kSphere, kBox, kCylinder, kTable, kComposite };

ShapeFamily parse_family(const std::string& name);
std::string family_name(ShapeFamily family);

struct SyntheticShapeSpec {
  ShapeFamily family = ShapeFamily::kSphere;
  /// Sphere: radius in x. Box: edge lengths. Cylinder: radius in x, height
  /// in z. Table and composite: overall extents.
  Vec3 size{1.0, 1.0, 1.0};
  std::uint64_t seed = 0;
  std::size_t gt_points = 2048;
  std::size_t partial_points = 1024;

  void validate() const;
};

/// Points sampled uniformly by area on the shape's surface, centered at the
/// origin. Deterministic in the seed.
PointCloud generate_shape(const SyntheticShapeSpec& spec);

/// The eight canonical unit view directions.
std::vector<Vec3> canonical_viewpoints();

/// Keeps the `keep` points whose direction from the centroid best faces
/// `viewpoint`, in their original order.
PointCloud occlude_viewpoint(const PointCloud& gt, const Vec3& viewpoint, std::size_t keep);

/// Exactly `n` points: random duplicates appended, or a random subset in
/// original order.
PointCloud resample_input(const PointCloud& cloud, std::size_t n, std::uint64_t seed);

struct ShapePair {
  std::string id;
  PointCloud partial;
  PointCloud gt;
};

struct SyntheticSetOptions {
  std::size_t count = 64;
  std::uint64_t seed = 0;
  std::size_t gt_points = 512;
  std::size_t visible_points = 256;  // points kept by occlusion
  std::size_t input_points = 512;    // partial size after resampling
};

/// Shapes cycle through the families with random extents and viewpoints.
std::vector<ShapePair> synthetic_dataset(const SyntheticSetOptions& options);

}  // namespace seedcomp::data
