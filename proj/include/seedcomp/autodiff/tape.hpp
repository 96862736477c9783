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

#include <span>
#include <vector>

#include "seedcomp/autodiff/tensor.hpp"

namespace seedcomp::ad {

/// Executed primitives reachable from a root, in topological order: every
/// node appears after all of its inputs. Only nodes that require gradients
/// are recorded.
class Tape {
 public:
  static Tape record(const Tensor& root);

  std::span<Node* const> order() const { return order_; }
  std::size_t size() const { return order_.size(); }

 private:
  std::vector<Node*> order_;
};

/// Reverse pass from a scalar loss. Interior gradients are reset; leaf
/// gradients accumulate, so callers zero parameter grads between steps.
void backward(const Tensor& loss);

}  // namespace seedcomp::ad
