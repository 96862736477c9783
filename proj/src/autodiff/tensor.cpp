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

#include "seedcomp/autodiff/tensor.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include "seedcomp/core/errors.hpp"

namespace seedcomp::ad {

namespace {
thread_local Precision tl_precision = Precision::kDouble;
thread_local bool tl_grad_enabled = true;
}  // namespace

std::size_t shape_numel(const Shape& shape) {
  std::size_t n = 1;
  for (auto e : shape) n *= e;
  return n;
}

std::string shape_str(const Shape& shape) {
  std::ostringstream os;
  os << '(';
  for (std::size_t i = 0; i < shape.size(); ++i) {
    if (i) os << ", ";
    os << shape[i];
  }
  os << ')';
  return os.str();
}

Precision current_precision() { return tl_precision; }

PrecisionScope::PrecisionScope(Precision p) : saved_(tl_precision) {
  tl_precision = p;
}
PrecisionScope::~PrecisionScope() { tl_precision = saved_; }

bool grad_enabled() { return tl_grad_enabled; }

NoGradGuard::NoGradGuard() : saved_(tl_grad_enabled) { tl_grad_enabled = false; }
NoGradGuard::~NoGradGuard() { tl_grad_enabled = saved_; }

Tensor Tensor::zeros(Shape shape, bool requires_grad) {
  return full(std::move(shape), 0.0, requires_grad);
}

Tensor Tensor::full(Shape shape, double value, bool requires_grad) {
  auto n = shape_numel(shape);
  return from(std::move(shape), std::vector<double>(n, value), requires_grad);
}

Tensor Tensor::from(Shape shape, std::vector<double> values,
                    bool requires_grad) {
  if (shape_numel(shape) != values.size()) {
    throw ShapeError("tensor: shape " + shape_str(shape) + " holds " +
                     std::to_string(shape_numel(shape)) + " values, got " +
                     std::to_string(values.size()));
  }
  auto node = std::make_shared<Node>();
  node->shape = std::move(shape);
  node->value = std::move(values);
  Tensor t(std::move(node));
  t.set_requires_grad(requires_grad);
  return t;
}

Tensor Tensor::scalar(double value, bool requires_grad) {
  return from({}, {value}, requires_grad);
}

std::size_t Tensor::dim(std::size_t axis) const {
  if (axis >= rank()) {
    throw IndexError("tensor: axis " + std::to_string(axis) +
                     " out of range for shape " + shape_str(shape()));
  }
  return node_->shape[axis];
}

double Tensor::item() const {
  if (numel() != 1) {
    throw ShapeError("tensor: item() on shape " + shape_str(shape()));
  }
  return node_->value[0];
}

double Tensor::at(std::size_t row, std::size_t col) const {
  if (rank() != 2) throw ShapeError("tensor: at() needs rank 2");
  if (row >= dim(0) || col >= dim(1)) throw IndexError("tensor: at() out of range");
  return node_->value[row * dim(1) + col];
}

void Tensor::set_requires_grad(bool on) {
  node_->requires_grad = on;
  if (on && node_->grad.size() != node_->value.size()) {
    node_->grad.assign(node_->value.size(), 0.0);
  }
}

void Tensor::zero_grad() {
  std::fill(node_->grad.begin(), node_->grad.end(), 0.0);
}

Tensor Tensor::detach() const {
  return from(shape(), node_->value, false);
}

namespace detail {

void apply_precision(std::span<double> values) {
  if (tl_precision != Precision::kSingle) return;
  for (auto& v : values) v = static_cast<double>(static_cast<float>(v));
}

std::vector<double>& grad_of(Node& node) {
  if (node.grad.size() != node.value.size()) {
    node.grad.assign(node.value.size(), 0.0);
  }
  return node.grad;
}

Tensor make_result(Shape shape, std::vector<double> values,
                   std::vector<Tensor> inputs, std::string op,
                   std::function<void(const Node&)> adjoint) {
  apply_precision(values);
  for (double v : values) {
    if (!std::isfinite(v)) {
      throw NumericsError(op + ": produced a non-finite value");
    }
  }
  auto node = std::make_shared<Node>();
  node->shape = std::move(shape);
  node->value = std::move(values);
  node->op = std::move(op);
  bool track = false;
  if (tl_grad_enabled) {
    track = std::any_of(inputs.begin(), inputs.end(),
                        [](const Tensor& t) { return t.requires_grad(); });
  }
  if (track) {
    node->requires_grad = true;
    node->inputs.reserve(inputs.size());
    for (auto& t : inputs) node->inputs.push_back(t.node());
    node->adjoint = std::move(adjoint);
  }
  return Tensor(std::move(node));
}

}  // namespace detail

}  // namespace seedcomp::ad
