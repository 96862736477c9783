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

#include <filesystem>
#include <iosfwd>
#include <string>
#include <vector>

#include "seedcomp/data/shapes.hpp"
#include "seedcomp/geometry/point_cloud.hpp"

namespace seedcomp::data {

/// One "x y z" line per point. Blank lines are skipped.
PointCloud parse_xyz(std::istream& is);
void format_xyz(std::ostream& os, const PointCloud& cloud);

/// ASCII PLY with a vertex element; properties other than x, y, z and any
/// elements after the vertices are ignored.
PointCloud parse_ply(std::istream& is);
void format_ply(std::ostream& os, const PointCloud& cloud);

PointCloud read_xyz(const std::filesystem::path& path);
void write_xyz(const std::filesystem::path& path, const PointCloud& cloud);
PointCloud read_ply(const std::filesystem::path& path);
void write_ply(const std::filesystem::path& path, const PointCloud& cloud);

/// Dispatches on the extension (.ply, otherwise xyz).
PointCloud read_cloud(const std::filesystem::path& path);
void write_cloud(const std::filesystem::path& path, const PointCloud& cloud);

/// `<root>/<split>/<id>_partial.xyz` and `<id>_gt.xyz`, sorted by id.
std::vector<ShapePair> read_dataset(const std::filesystem::path& root, const std::string& split);
void write_dataset(const std::filesystem::path& root, const std::string& split,
                   const std::vector<ShapePair>& pairs);

/// Every `*.xyz` or `*.ply` file in a directory, sorted by name.
std::vector<PointCloud> read_cloud_directory(const std::filesystem::path& dir);

}  // namespace seedcomp::data
