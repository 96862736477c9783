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
#include <cstdint>
#include <string>
#include <unordered_map>
#include <vector>

#include "seedcomp/autodiff/tensor.hpp"

namespace seedcomp::nn {

/// Named learned tensor, e.g. "encoder.sa1.mlp.0.weight".
struct Parameter {
  std::string name;
  ad::Tensor tensor;
};

/// Owns every parameter of a model in registration order. Initial values
/// come from a seeded generator and are rounded to float so that a float32
/// checkpoint reproduces them exactly.
class ParameterStore {
 public:
  explicit ParameterStore(std::uint64_t seed = 0) : state_(seed) {}

  /// Uniform in [-bound, bound].
  ad::Tensor create(const std::string& name, ad::Shape shape, double bound);
  ad::Tensor create_zeros(const std::string& name, ad::Shape shape);

  const std::vector<Parameter>& parameters() const { return params_; }
  const Parameter* find(const std::string& name) const;
  /// Total number of scalar parameters.
  std::size_t scalar_count() const;
  void zero_grad();

 private:
  double uniform(double bound);
  ad::Tensor add(const std::string& name, ad::Tensor t);

  std::vector<Parameter> params_;
  std::unordered_map<std::string, std::size_t> by_name_;
  std::uint64_t state_;
};

/// y = x W^T + b, W initialized U(-1/sqrt(in), 1/sqrt(in)).
class Linear {
 public:
  Linear() = default;
  Linear(ParameterStore& store, const std::string& prefix, std::size_t in, std::size_t out,
         bool zero_init = false);

  ad::Tensor operator()(const ad::Tensor& x) const;
  std::size_t in() const { return in_; }
  std::size_t out() const { return out_; }

 private:
  ad::Tensor weight_;
  ad::Tensor bias_;
  std::size_t in_ = 0;
  std::size_t out_ = 0;
};

/// Two-layer per-point map: linear -> relu -> linear [-> relu].
class Mlp2 {
 public:
  Mlp2() = default;
  Mlp2(ParameterStore& store, const std::string& prefix, std::size_t in, std::size_t hidden,
       std::size_t out, bool final_relu = false, bool zero_last = false);

  ad::Tensor operator()(const ad::Tensor& x) const;
  std::size_t in() const { return first_.in(); }
  std::size_t out() const { return second_.out(); }

 private:
  Linear first_;
  Linear second_;
  bool final_relu_ = false;
};

}  // namespace seedcomp::nn
