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

#include "seedcomp/kernels/dense.hpp"

#include <cstdint>

namespace seedcomp::kernels {

namespace {

inline void forward_row(const double* xr, std::span<const double> w,
                        std::span<const double> b, DenseDims d, double* yr) {
  for (std::size_t o = 0; o < d.out; ++o) {
    const double* wo = w.data() + o * d.in;
    double acc = 0.0;
    for (std::size_t i = 0; i < d.in; ++i) acc += xr[i] * wo[i];
    yr[o] = (b.empty() ? 0.0 : b[o]) + acc;
  }
}

inline void backward_input_row(const double* gr, std::span<const double> w,
                               DenseDims d, double* dxr) {
  for (std::size_t o = 0; o < d.out; ++o) {
    const double go = gr[o];
    if (go == 0.0) continue;
    const double* wo = w.data() + o * d.in;
    for (std::size_t i = 0; i < d.in; ++i) dxr[i] += go * wo[i];
  }
}

inline void backward_params_unit(std::span<const double> g,
                                 std::span<const double> x, DenseDims d,
                                 std::size_t o, std::span<double> dw,
                                 std::span<double> db) {
  double* dwo = dw.data() + o * d.in;
  double bacc = 0.0;
  for (std::size_t r = 0; r < d.rows; ++r) {
    const double gro = g[r * d.out + o];
    bacc += gro;
    if (gro == 0.0) continue;
    const double* xr = x.data() + r * d.in;
    for (std::size_t i = 0; i < d.in; ++i) dwo[i] += gro * xr[i];
  }
  if (!db.empty()) db[o] += bacc;
}

}  // namespace

namespace serial {

void linear_forward(std::span<const double> x, std::span<const double> w,
                    std::span<const double> b, DenseDims d, std::span<double> y) {
  for (std::size_t r = 0; r < d.rows; ++r) {
    forward_row(x.data() + r * d.in, w, b, d, y.data() + r * d.out);
  }
}

void linear_backward_input(std::span<const double> g, std::span<const double> w,
                           DenseDims d, std::span<double> dx) {
  for (std::size_t r = 0; r < d.rows; ++r) {
    backward_input_row(g.data() + r * d.out, w, d, dx.data() + r * d.in);
  }
}

void linear_backward_params(std::span<const double> g, std::span<const double> x,
                            DenseDims d, std::span<double> dw,
                            std::span<double> db) {
  for (std::size_t o = 0; o < d.out; ++o) backward_params_unit(g, x, d, o, dw, db);
}

}  // namespace serial

namespace parallel {

void linear_forward(std::span<const double> x, std::span<const double> w,
                    std::span<const double> b, DenseDims d, std::span<double> y) {
  const auto rows = static_cast<std::int64_t>(d.rows);
#pragma omp parallel for schedule(static) if (d.rows * d.out * d.in > 32768)
  for (std::int64_t r = 0; r < rows; ++r) {
    forward_row(x.data() + r * d.in, w, b, d, y.data() + r * d.out);
  }
}

void linear_backward_input(std::span<const double> g, std::span<const double> w,
                           DenseDims d, std::span<double> dx) {
  const auto rows = static_cast<std::int64_t>(d.rows);
#pragma omp parallel for schedule(static) if (d.rows * d.out * d.in > 32768)
  for (std::int64_t r = 0; r < rows; ++r) {
    backward_input_row(g.data() + r * d.out, w, d, dx.data() + r * d.in);
  }
}

void linear_backward_params(std::span<const double> g, std::span<const double> x,
                            DenseDims d, std::span<double> dw,
                            std::span<double> db) {
  const auto outs = static_cast<std::int64_t>(d.out);
#pragma omp parallel for schedule(static) if (d.rows * d.out * d.in > 32768)
  for (std::int64_t o = 0; o < outs; ++o) {
    backward_params_unit(g, x, d, static_cast<std::size_t>(o), dw, db);
  }
}

}  // namespace parallel

}  // namespace seedcomp::kernels
