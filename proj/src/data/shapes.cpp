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

#include "seedcomp/data/shapes.hpp"

#include <algorithm>
#include <cstdio>
#include <cmath>
#include <functional>
#include <numbers>
#include <numeric>
#include <random>

#include "seedcomp/core/errors.hpp"

namespace seedcomp::data {

namespace {

using Rng = std::mt19937_64;

struct SurfacePart {
  double area;
  std::function<Vec3(Rng&)> sample;
};

double unit(Rng& rng) { return std::uniform_real_distribution<double>(0.0, 1.0)(rng); }

Vec3 add(const Vec3& a, const Vec3& b) { return {a[0] + b[0], a[1] + b[1], a[2] + b[2]}; }

/// origin + a*u + b*v over the unit square.
SurfacePart rectangle(Vec3 origin, Vec3 u, Vec3 v) {
  const Vec3 n{u[1] * v[2] - u[2] * v[1], u[2] * v[0] - u[0] * v[2], u[0] * v[1] - u[1] * v[0]};
  const double area = std::sqrt(n[0] * n[0] + n[1] * n[1] + n[2] * n[2]);
  return {area, [=](Rng& rng) {
            const double a = unit(rng), b = unit(rng);
            return Vec3{origin[0] + a * u[0] + b * v[0], origin[1] + a * u[1] + b * v[1],
                        origin[2] + a * u[2] + b * v[2]};
          }};
}

void box_faces(std::vector<SurfacePart>& parts, const Vec3& center, const Vec3& size) {
  const double hx = size[0] / 2, hy = size[1] / 2, hz = size[2] / 2;
  const double cx = center[0], cy = center[1], cz = center[2];
  for (double s : {-1.0, 1.0}) {
    parts.push_back(rectangle({cx + s * hx, cy - hy, cz - hz}, {0, size[1], 0}, {0, 0, size[2]}));
    parts.push_back(rectangle({cx - hx, cy + s * hy, cz - hz}, {size[0], 0, 0}, {0, 0, size[2]}));
    parts.push_back(rectangle({cx - hx, cy - hy, cz + s * hz}, {size[0], 0, 0}, {0, size[1], 0}));
  }
}

void sphere_surface(std::vector<SurfacePart>& parts, const Vec3& center, double r) {
  parts.push_back({4 * std::numbers::pi * r * r, [=](Rng& rng) {
                     std::normal_distribution<double> g(0.0, 1.0);
                     Vec3 p{};
                     double len = 0.0;
                     while (len < 1e-12) {
                       p = {g(rng), g(rng), g(rng)};
                       len = std::sqrt(p[0] * p[0] + p[1] * p[1] + p[2] * p[2]);
                     }
                     return add(center, {r * p[0] / len, r * p[1] / len, r * p[2] / len});
                   }});
}

void cylinder_surface(std::vector<SurfacePart>& parts, const Vec3& center, double r, double h) {
  parts.push_back({2 * std::numbers::pi * r * h, [=](Rng& rng) {
                     const double t = 2 * std::numbers::pi * unit(rng);
                     const double z = (unit(rng) - 0.5) * h;
                     return add(center, {r * std::cos(t), r * std::sin(t), z});
                   }});
  for (double s : {-1.0, 1.0}) {
    parts.push_back({std::numbers::pi * r * r, [=](Rng& rng) {
                       const double t = 2 * std::numbers::pi * unit(rng);
                       const double rho = r * std::sqrt(unit(rng));
                       return add(center, {rho * std::cos(t), rho * std::sin(t), s * h / 2});
                     }});
  }
}

std::vector<SurfacePart> surface_of(const SyntheticShapeSpec& spec) {
  std::vector<SurfacePart> parts;
  const auto& s = spec.size;
  switch (spec.family) {
    case ShapeFamily::kSphere:
      sphere_surface(parts, {0, 0, 0}, s[0]);
      break;
    case ShapeFamily::kBox:
      box_faces(parts, {0, 0, 0}, s);
      break;
    case ShapeFamily::kCylinder:
      cylinder_surface(parts, {0, 0, 0}, s[0], s[2]);
      break;
    case ShapeFamily::kTable: {
      const double top = 0.1 * s[2];
      const double lx = 0.1 * s[0], ly = 0.1 * s[1];
      box_faces(parts, {0, 0, s[2] / 2 - top / 2}, {s[0], s[1], top});
      const double leg_h = s[2] - top;
      for (double sx : {-1.0, 1.0}) {
        for (double sy : {-1.0, 1.0}) {
          box_faces(parts, {sx * (s[0] - lx) / 2, sy * (s[1] - ly) / 2, -s[2] / 2 + leg_h / 2},
                    {lx, ly, leg_h});
        }
      }
      break;
    }
    case ShapeFamily::kComposite: {
      const double r = std::min(s[0], s[1]) / 3;
      const double base = s[2] - 2 * r;
      // Box spans [-s/2, -s/2 + base], the sphere sits on top of it.
      const double top = -s[2] / 2 + base;
      box_faces(parts, {0, 0, -s[2] / 2 + base / 2}, {s[0], s[1], base});
      sphere_surface(parts, {0, 0, top + r}, r);
      break;
    }
  }
  return parts;
}

}  // namespace

ShapeFamily parse_family(const std::string& name) {
  if (name == "sphere") return ShapeFamily::kSphere;
  if (name == "box") return ShapeFamily::kBox;
  if (name == "cylinder") return ShapeFamily::kCylinder;
  if (name == "table") return ShapeFamily::kTable;
  if (name == "composite") return ShapeFamily::kComposite;
  throw ContractError("unknown shape family '" + name + "'");
}

std::string family_name(ShapeFamily family) {
  switch (family) {
    case ShapeFamily::kSphere: return "sphere";
    case ShapeFamily::kBox: return "box";
    case ShapeFamily::kCylinder: return "cylinder";
    case ShapeFamily::kTable: return "table";
    case ShapeFamily::kComposite: return "composite";
  }
  return "unknown";
}

void SyntheticShapeSpec::validate() const {
  if (partial_points < 16 || gt_points < partial_points) {
    throw ContractError("shape spec: need gt_points >= partial_points >= 16");
  }
  for (double v : size) {
    if (!(v > 0.0) || !std::isfinite(v)) throw ContractError("shape spec: sizes must be positive");
  }
  if (family == ShapeFamily::kComposite && size[2] <= 2 * std::min(size[0], size[1]) / 3) {
    throw ContractError("shape spec: composite height too small for its sphere");
  }
}

PointCloud generate_shape(const SyntheticShapeSpec& spec) {
  spec.validate();
  const auto parts = surface_of(spec);
  std::vector<double> cumulative;
  double total = 0.0;
  for (const auto& p : parts) cumulative.push_back(total += p.area);

  Rng rng(spec.seed);
  PointCloud cloud;
  cloud.reserve(spec.gt_points);
  for (std::size_t i = 0; i < spec.gt_points; ++i) {
    const double pick = unit(rng) * total;
    auto it = std::upper_bound(cumulative.begin(), cumulative.end(), pick);
    if (it == cumulative.end()) --it;
    cloud.push_back(parts[static_cast<std::size_t>(it - cumulative.begin())].sample(rng));
  }
  return cloud;
}

std::vector<Vec3> canonical_viewpoints() {
  const double d = 1.0 / std::sqrt(3.0);
  return {{1, 0, 0},  {-1, 0, 0}, {0, 1, 0},  {0, -1, 0},
          {d, d, d},  {-d, d, d}, {d, -d, d}, {-d, -d, d}};
}

PointCloud occlude_viewpoint(const PointCloud& gt, const Vec3& viewpoint, std::size_t keep) {
  if (keep == 0) throw ContractError("occlude_viewpoint: keep must be >= 1");
  const double len = std::sqrt(viewpoint[0] * viewpoint[0] + viewpoint[1] * viewpoint[1] +
                               viewpoint[2] * viewpoint[2]);
  if (!(len > 0.0)) throw ContractError("occlude_viewpoint: zero view direction");
  if (keep >= gt.size()) return gt;

  const Vec3 c = centroid(gt);
  std::vector<double> score(gt.size());
  for (std::size_t i = 0; i < gt.size(); ++i) {
    const auto p = gt[i];
    const Vec3 r{p[0] - c[0], p[1] - c[1], p[2] - c[2]};
    const double n = std::sqrt(r[0] * r[0] + r[1] * r[1] + r[2] * r[2]);
    const double dot = (r[0] * viewpoint[0] + r[1] * viewpoint[1] + r[2] * viewpoint[2]) / len;
    score[i] = n > 0.0 ? dot / n : 0.0;
  }
  std::vector<std::size_t> order(gt.size());
  std::iota(order.begin(), order.end(), 0);
  std::stable_sort(order.begin(), order.end(),
                   [&](std::size_t a, std::size_t b) { return score[a] > score[b]; });
  order.resize(keep);
  std::sort(order.begin(), order.end());
  return gt.subset(order);
}

PointCloud resample_input(const PointCloud& cloud, std::size_t n, std::uint64_t seed) {
  if (cloud.empty()) throw ContractError("resample_input: empty cloud");
  if (n == 0) throw ContractError("resample_input: n must be >= 1");
  if (n == cloud.size()) return cloud;
  Rng rng(seed);
  std::vector<std::size_t> index;
  if (n > cloud.size()) {
    index.resize(cloud.size());
    std::iota(index.begin(), index.end(), 0);
    std::uniform_int_distribution<std::size_t> pick(0, cloud.size() - 1);
    while (index.size() < n) index.push_back(pick(rng));
  } else {
    std::vector<std::size_t> all(cloud.size());
    std::iota(all.begin(), all.end(), 0);
    for (std::size_t i = 0; i < n; ++i) {
      std::uniform_int_distribution<std::size_t> pick(i, all.size() - 1);
      std::swap(all[i], all[pick(rng)]);
    }
    index.assign(all.begin(), all.begin() + static_cast<std::ptrdiff_t>(n));
    std::sort(index.begin(), index.end());
  }
  return cloud.subset(index);
}

std::vector<ShapePair> synthetic_dataset(const SyntheticSetOptions& options) {
  Rng rng(options.seed);
  auto in = [&](double lo, double hi) { return lo + (hi - lo) * unit(rng); };
  const auto views = canonical_viewpoints();
  std::vector<ShapePair> out;
  out.reserve(options.count);
  for (std::size_t i = 0; i < options.count; ++i) {
    SyntheticShapeSpec spec;
    spec.family = static_cast<ShapeFamily>(i % 5);
    switch (spec.family) {
      case ShapeFamily::kSphere: spec.size = {in(0.35, 0.5), 0, 0}; break;
      case ShapeFamily::kBox: spec.size = {in(0.5, 1.0), in(0.5, 1.0), in(0.5, 1.0)}; break;
      case ShapeFamily::kCylinder: spec.size = {in(0.25, 0.45), 0, in(0.5, 1.0)}; break;
      case ShapeFamily::kTable: spec.size = {in(0.7, 1.0), in(0.5, 0.9), in(0.5, 0.8)}; break;
      case ShapeFamily::kComposite: spec.size = {in(0.5, 0.8), in(0.5, 0.8), in(0.8, 1.0)}; break;
    }
    for (auto& v : spec.size) {
      if (v == 0.0) v = spec.size[0];
    }
    spec.seed = rng();
    spec.gt_points = options.gt_points;
    spec.partial_points = std::min(options.visible_points, options.gt_points);
    const auto view = views[rng() % views.size()];
    const auto resample_seed = rng();

    ShapePair pair;
    char id[32];
    std::snprintf(id, sizeof id, "%04zu", i);
    pair.id = std::string(id) + "_" + family_name(spec.family);
    pair.gt = generate_shape(spec);
    pair.partial = resample_input(occlude_viewpoint(pair.gt, view, spec.partial_points),
                                  options.input_points, resample_seed);
    out.push_back(std::move(pair));
  }
  return out;
}

}  // namespace seedcomp::data
