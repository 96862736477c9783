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

#include "seedcomp/autodiff/tape.hpp"

#include <algorithm>
#include <unordered_set>
#include <utility>

#include "seedcomp/core/errors.hpp"

namespace seedcomp::ad {

Tape Tape::record(const Tensor& root) {
  Tape tape;
  if (!root.defined() || !root.requires_grad()) return tape;
  // Iterative post-order DFS; inputs are visited in declaration order so the
  // resulting order is a pure function of the graph.
  std::unordered_set<const Node*> visited;
  std::vector<std::pair<Node*, std::size_t>> stack;
  stack.emplace_back(root.node().get(), 0);
  visited.insert(root.node().get());
  while (!stack.empty()) {
    auto& [node, next] = stack.back();
    if (next < node->inputs.size()) {
      Node* child = node->inputs[next++].get();
      if (child->requires_grad && visited.insert(child).second) {
        stack.emplace_back(child, 0);
      }
      continue;
    }
    tape.order_.push_back(node);
    stack.pop_back();
  }
  return tape;
}

void backward(const Tensor& loss) {
  if (!loss.defined() || loss.numel() != 1 || loss.rank() != 0) {
    throw ContractError("backward: loss must be a scalar tensor, got shape " +
                        (loss.defined() ? shape_str(loss.shape()) : "<undefined>"));
  }
  auto tape = Tape::record(loss);
  if (tape.size() == 0) {
    throw ContractError("backward: loss does not depend on any tensor that requires grad");
  }
  for (Node* node : tape.order()) {
    if (!node->is_leaf()) node->grad.assign(node->value.size(), 0.0);
    else detail::grad_of(*node);
  }
  loss.node()->grad[0] += 1.0;
  auto order = tape.order();
  for (auto it = order.rbegin(); it != order.rend(); ++it) {
    Node* node = *it;
    if (node->is_leaf()) continue;
    node->adjoint(*node);
    for (auto& in : node->inputs) {
      if (in->requires_grad) detail::apply_precision(in->grad);
    }
  }
}

}  // namespace seedcomp::ad
