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
#include <functional>
#include <memory>
#include <span>
#include <string>
#include <vector>

namespace seedcomp::ad {

using Shape = std::vector<std::size_t>;

std::size_t shape_numel(const Shape& shape);
std::string shape_str(const Shape& shape);

/// Arithmetic precision of primitive results. Storage is always double;
/// in kSingle mode every primitive rounds its outputs (and every adjoint
/// its contributions) to the nearest float.
enum class Precision { kDouble, kSingle };

Precision current_precision();

/// Sets the thread's precision for the lifetime of the scope.
class PrecisionScope {
 public:
  explicit PrecisionScope(Precision p);
  ~PrecisionScope();
  PrecisionScope(const PrecisionScope&) = delete;
  PrecisionScope& operator=(const PrecisionScope&) = delete;

 private:
  Precision saved_;
};

bool grad_enabled();

/// Disables graph recording on this thread (evaluation, finite differences).
class NoGradGuard {
 public:
  NoGradGuard();
  ~NoGradGuard();
  NoGradGuard(const NoGradGuard&) = delete;
  NoGradGuard& operator=(const NoGradGuard&) = delete;

 private:
  bool saved_;
};

/// One value in the computation graph. Interior nodes keep their inputs and
/// an adjoint closure that reads `grad` of this node and accumulates into
/// the inputs' `grad`.
struct Node {
  Shape shape;
  std::vector<double> value;
  std::vector<double> grad;
  bool requires_grad = false;
  std::string op = "leaf";
  std::vector<std::shared_ptr<Node>> inputs;
  std::function<void(const Node&)> adjoint;

  bool is_leaf() const { return !adjoint; }
};

/// Shared handle to a graph node. Copies alias the same storage.
class Tensor {
 public:
  Tensor() = default;
  explicit Tensor(std::shared_ptr<Node> node) : node_(std::move(node)) {}

  static Tensor zeros(Shape shape, bool requires_grad = false);
  static Tensor full(Shape shape, double value, bool requires_grad = false);
  static Tensor from(Shape shape, std::vector<double> values,
                     bool requires_grad = false);
  static Tensor scalar(double value, bool requires_grad = false);

  bool defined() const { return node_ != nullptr; }
  const Shape& shape() const { return node_->shape; }
  std::size_t rank() const { return node_->shape.size(); }
  std::size_t dim(std::size_t axis) const;
  std::size_t numel() const { return node_->value.size(); }

  std::span<const double> values() const { return node_->value; }
  /// Direct write access; only meaningful for leaves (parameters, inputs).
  std::span<double> mutable_values() { return node_->value; }
  double item() const;
  double at(std::size_t row, std::size_t col) const;

  bool requires_grad() const { return node_->requires_grad; }
  void set_requires_grad(bool on);
  std::span<const double> grad() const { return node_->grad; }
  std::span<double> mutable_grad() { return node_->grad; }
  void zero_grad();

  const std::string& op() const { return node_->op; }
  const std::shared_ptr<Node>& node() const { return node_; }

  /// Copy of the values as a fresh leaf without history.
  Tensor detach() const;

 private:
  std::shared_ptr<Node> node_;
};

namespace detail {

/// Builds a primitive result. Applies precision rounding and the finiteness
/// check; records inputs and the adjoint only when recording is enabled and
/// some input requires a gradient.
Tensor make_result(Shape shape, std::vector<double> values,
                   std::vector<Tensor> inputs, std::string op,
                   std::function<void(const Node&)> adjoint);

/// Rounds in place when the thread is in single precision.
void apply_precision(std::span<double> values);

/// Grad buffer of an input, allocated on first use.
std::vector<double>& grad_of(Node& node);

}  // namespace detail

}  // namespace seedcomp::ad
