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

#include "seedcomp/kernels/neighbors.hpp"

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <limits>
#include <numeric>

#ifdef _OPENMP
#include <omp.h>
#endif

namespace seedcomp::kernels {

namespace {

inline double sq_dist3(const double* a, const double* b) {
  const double dx = a[0] - b[0];
  const double dy = a[1] - b[1];
  const double dz = a[2] - b[2];
  return dx * dx + dy * dy + dz * dz;
}

// Selects the k smallest of `d2` ordered by (distance, index).
void knn_row(const double* q, std::span<const double> reference, std::size_t k,
             std::vector<double>& d2, std::vector<std::size_t>& order,
             std::size_t* out_idx, double* out_dist) {
  const std::size_t m = reference.size() / 3;
  for (std::size_t j = 0; j < m; ++j) d2[j] = sq_dist3(q, reference.data() + 3 * j);
  std::iota(order.begin(), order.end(), std::size_t{0});
  auto less = [&](std::size_t a, std::size_t b) {
    return d2[a] < d2[b] || (d2[a] == d2[b] && a < b);
  };
  std::partial_sort(order.begin(), order.begin() + static_cast<std::ptrdiff_t>(k),
                    order.end(), less);
  for (std::size_t t = 0; t < k; ++t) {
    out_idx[t] = order[t];
    out_dist[t] = std::sqrt(d2[order[t]]);
  }
}

inline void nearest_row(const double* q, std::span<const double> reference,
                        std::size_t* idx, double* dist) {
  const std::size_t m = reference.size() / 3;
  double best = std::numeric_limits<double>::infinity();
  std::size_t arg = 0;
  for (std::size_t j = 0; j < m; ++j) {
    const double d = sq_dist3(q, reference.data() + 3 * j);
    if (d < best) {
      best = d;
      arg = j;
    }
  }
  *idx = arg;
  *dist = best;
}

// Marks selected points with a negative key so they can never be re-chosen,
// even when duplicates leave the remaining minimum distances at zero.
constexpr double kSelected = -1.0;

}  // namespace

namespace serial {

KnnTable knn(std::span<const double> queries, std::span<const double> reference,
             std::size_t k) {
  const std::size_t n = queries.size() / 3;
  const std::size_t m = reference.size() / 3;
  KnnTable table{k, std::vector<std::size_t>(n * k), std::vector<double>(n * k)};
  std::vector<double> d2(m);
  std::vector<std::size_t> order(m);
  for (std::size_t i = 0; i < n; ++i) {
    knn_row(queries.data() + 3 * i, reference, k, d2, order,
            table.indices.data() + i * k, table.distances.data() + i * k);
  }
  return table;
}

std::vector<std::size_t> farthest_point_sample(std::span<const double> points,
                                               std::size_t count,
                                               std::size_t start) {
  const std::size_t n = points.size() / 3;
  std::vector<double> min_d2(n, std::numeric_limits<double>::infinity());
  std::vector<std::size_t> picked;
  picked.reserve(count);
  std::size_t last = start;
  for (std::size_t s = 0; s < count; ++s) {
    picked.push_back(last);
    min_d2[last] = kSelected;
    if (s + 1 == count) break;
    const double* lp = points.data() + 3 * last;
    double best = kSelected;
    std::size_t arg = 0;
    for (std::size_t j = 0; j < n; ++j) {
      if (min_d2[j] == kSelected) continue;
      const double d = sq_dist3(lp, points.data() + 3 * j);
      if (d < min_d2[j]) min_d2[j] = d;
      if (min_d2[j] > best) {
        best = min_d2[j];
        arg = j;
      }
    }
    last = arg;
  }
  return picked;
}

void nearest(std::span<const double> queries, std::span<const double> reference,
             std::span<std::size_t> index, std::span<double> sq_dist) {
  const std::size_t n = queries.size() / 3;
  for (std::size_t i = 0; i < n; ++i) {
    nearest_row(queries.data() + 3 * i, reference, &index[i], &sq_dist[i]);
  }
}

}  // namespace serial

namespace parallel {

KnnTable knn(std::span<const double> queries, std::span<const double> reference,
             std::size_t k) {
  const std::size_t n = queries.size() / 3;
  const std::size_t m = reference.size() / 3;
  KnnTable table{k, std::vector<std::size_t>(n * k), std::vector<double>(n * k)};
  const auto rows = static_cast<std::int64_t>(n);
#pragma omp parallel if (n * m > 16384)
  {
    std::vector<double> d2(m);
    std::vector<std::size_t> order(m);
#pragma omp for schedule(static)
    for (std::int64_t i = 0; i < rows; ++i) {
      knn_row(queries.data() + 3 * i, reference, k, d2, order,
              table.indices.data() + i * k, table.distances.data() + i * k);
    }
  }
  return table;
}

std::vector<std::size_t> farthest_point_sample(std::span<const double> points,
                                               std::size_t count,
                                               std::size_t start) {
  const std::size_t n = points.size() / 3;
  const auto total = static_cast<std::int64_t>(n);
  std::vector<double> min_d2(n, std::numeric_limits<double>::infinity());
  std::vector<std::size_t> picked;
  picked.reserve(count);
  std::size_t last = start;
  for (std::size_t s = 0; s < count; ++s) {
    picked.push_back(last);
    min_d2[last] = kSelected;
    if (s + 1 == count) break;
    const double* lp = points.data() + 3 * last;
    double best = kSelected;
    std::size_t arg = 0;
#pragma omp parallel if (n > 4096)
    {
      double local_best = kSelected;
      std::size_t local_arg = 0;
#pragma omp for schedule(static) nowait
      for (std::int64_t j = 0; j < total; ++j) {
        if (min_d2[j] == kSelected) continue;
        const double d = sq_dist3(lp, points.data() + 3 * j);
        if (d < min_d2[j]) min_d2[j] = d;
        if (min_d2[j] > local_best) {
          local_best = min_d2[j];
          local_arg = static_cast<std::size_t>(j);
        }
      }
      // Static chunks are contiguous and ascending, so the lowest-index rule
      // survives the merge: strict > keeps an earlier winner on ties.
#pragma omp critical
      {
        if (local_best > best || (local_best == best && local_arg < arg)) {
          best = local_best;
          arg = local_arg;
        }
      }
    }
    last = arg;
  }
  return picked;
}

void nearest(std::span<const double> queries, std::span<const double> reference,
             std::span<std::size_t> index, std::span<double> sq_dist) {
  const std::size_t n = queries.size() / 3;
  const std::size_t m = reference.size() / 3;
  const auto rows = static_cast<std::int64_t>(n);
#pragma omp parallel for schedule(static) if (n * m > 16384)
  for (std::int64_t i = 0; i < rows; ++i) {
    nearest_row(queries.data() + 3 * i, reference, &index[i], &sq_dist[i]);
  }
}

}  // namespace parallel

}  // namespace seedcomp::kernels
