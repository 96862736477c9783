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
#include <span>

// Row-major affine map kernels behind the `linear` primitive.
//
//   y[r, o]  = b[o] + sum_i x[r, i] * w[o, i]
//   dx[r, i] += sum_o g[r, o] * w[o, i]
//   dw[o, i] += sum_r g[r, o] * x[r, i]      db[o] += sum_r g[r, o]
//
// Every output element is accumulated in the same index order by both
// variants, so `parallel` is bitwise-equal to `serial` for any thread count.

namespace seedcomp::kernels {

struct DenseDims {
  std::size_t rows;
  std::size_t in;
  std::size_t out;
};

namespace serial {
void linear_forward(std::span<const double> x, std::span<const double> w,
                    std::span<const double> b, DenseDims d, std::span<double> y);
void linear_backward_input(std::span<const double> g, std::span<const double> w,
                           DenseDims d, std::span<double> dx);
void linear_backward_params(std::span<const double> g, std::span<const double> x,
                            DenseDims d, std::span<double> dw,
                            std::span<double> db);
}  // namespace serial

namespace parallel {
void linear_forward(std::span<const double> x, std::span<const double> w,
                    std::span<const double> b, DenseDims d, std::span<double> y);
void linear_backward_input(std::span<const double> g, std::span<const double> w,
                           DenseDims d, std::span<double> dx);
void linear_backward_params(std::span<const double> g, std::span<const double> x,
                            DenseDims d, std::span<double> dw,
                            std::span<double> db);
}  // namespace parallel

}  // namespace seedcomp::kernels
