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

#include "seedcomp/nn/layers.hpp"

#include <cmath>

#include "seedcomp/autodiff/ops.hpp"
#include "seedcomp/core/errors.hpp"

namespace seedcomp::nn {

double ParameterStore::uniform(double bound) {
  // splitmix64; fixed so initial weights do not depend on the standard
  // library's distribution implementation.
  state_ += 0x9e3779b97f4a7c15ULL;
  std::uint64_t z = state_;
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
  z ^= z >> 31;
  const double unit = static_cast<double>(z >> 11) * 0x1.0p-53;
  return static_cast<double>(static_cast<float>((2.0 * unit - 1.0) * bound));
}

ad::Tensor ParameterStore::add(const std::string& name, ad::Tensor t) {
  if (name.empty()) throw ContractError("parameter name must be nonempty");
  if (by_name_.count(name)) throw ContractError("duplicate parameter name: " + name);
  by_name_.emplace(name, params_.size());
  params_.push_back({name, t});
  return t;
}

ad::Tensor ParameterStore::create(const std::string& name, ad::Shape shape, double bound) {
  std::vector<double> values(ad::shape_numel(shape));
  for (auto& v : values) v = uniform(bound);
  return add(name, ad::Tensor::from(std::move(shape), std::move(values), true));
}

ad::Tensor ParameterStore::create_zeros(const std::string& name, ad::Shape shape) {
  return add(name, ad::Tensor::zeros(std::move(shape), true));
}

const Parameter* ParameterStore::find(const std::string& name) const {
  auto it = by_name_.find(name);
  return it == by_name_.end() ? nullptr : &params_[it->second];
}

std::size_t ParameterStore::scalar_count() const {
  std::size_t n = 0;
  for (const auto& p : params_) n += p.tensor.numel();
  return n;
}

void ParameterStore::zero_grad() {
  for (auto& p : params_) {
    auto t = p.tensor;
    t.zero_grad();
  }
}

Linear::Linear(ParameterStore& store, const std::string& prefix, std::size_t in,
               std::size_t out, bool zero_init)
    : in_(in), out_(out) {
  const double bound = 1.0 / std::sqrt(static_cast<double>(in));
  if (zero_init) {
    weight_ = store.create_zeros(prefix + ".weight", {out, in});
    bias_ = store.create_zeros(prefix + ".bias", {out});
  } else {
    weight_ = store.create(prefix + ".weight", {out, in}, bound);
    bias_ = store.create(prefix + ".bias", {out}, bound);
  }
}

ad::Tensor Linear::operator()(const ad::Tensor& x) const {
  return ad::linear(x, weight_, bias_);
}

Mlp2::Mlp2(ParameterStore& store, const std::string& prefix, std::size_t in,
           std::size_t hidden, std::size_t out, bool final_relu, bool zero_last)
    : first_(store, prefix + ".0", in, hidden),
      second_(store, prefix + ".1", hidden, out, zero_last),
      final_relu_(final_relu) {}

ad::Tensor Mlp2::operator()(const ad::Tensor& x) const {
  auto y = second_(ad::relu(first_(x)));
  return final_relu_ ? ad::relu(y) : y;
}

}  // namespace seedcomp::nn
