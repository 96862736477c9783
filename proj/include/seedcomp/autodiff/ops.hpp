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
#include <vector>

#include "seedcomp/autodiff/tensor.hpp"

// Differentiable primitives. All tensors are dense row-major. Binary
// elementwise ops require identical shapes; the only implicit broadcast is
// tensor-with-scalar (`scale`, `add_scalar`). Anything else raises
// ShapeError.

namespace seedcomp::ad {

/// y = x W^T + b over the last axis. x: (..., in), W: (out, in), b: (out)
/// or undefined.
Tensor linear(const Tensor& x, const Tensor& weight, const Tensor& bias);

Tensor relu(const Tensor& x);

Tensor add(const Tensor& a, const Tensor& b);
Tensor sub(const Tensor& a, const Tensor& b);
Tensor mul(const Tensor& a, const Tensor& b);
Tensor scale(const Tensor& x, double s);
Tensor add_scalar(const Tensor& x, double s);

/// Sum of all elements, rank-0 result.
Tensor sum(const Tensor& x);
Tensor mean(const Tensor& x);
/// Sum over one axis; the axis is removed from the shape.
Tensor sum(const Tensor& x, std::size_t axis);
/// Max over one axis; gradient routes to the first maximal element.
Tensor max(const Tensor& x, std::size_t axis);

Tensor softmax(const Tensor& x, std::size_t axis);
Tensor log_softmax(const Tensor& x, std::size_t axis);
inline Tensor softmax_last(const Tensor& x) { return softmax(x, x.rank() - 1); }

Tensor concat(const std::vector<Tensor>& xs, std::size_t axis);

/// Rows along axis 0 picked by `index` (repeats allowed).
Tensor gather_rows(const Tensor& x, std::span<const std::size_t> index);

Tensor reshape(const Tensor& x, Shape shape);

/// (..., 1) -> (..., width) by repeating the single trailing element.
Tensor broadcast_last(const Tensor& x, std::size_t width);

/// Euclidean norm over the last axis, which is removed. The adjoint at a
/// zero vector is taken as zero.
Tensor row_norm(const Tensor& x);

}  // namespace seedcomp::ad
