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

#include "seedcomp/autodiff/gradcheck.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <random>
#include <sstream>

#include "seedcomp/autodiff/tape.hpp"
#include "seedcomp/core/errors.hpp"

namespace seedcomp::ad {

namespace {

double evaluate(const ScalarFn& fn, const std::vector<Tensor>& inputs) {
  Tensor out = fn(inputs);
  if (!out.defined() || out.numel() != 1) {
    throw ContractError("grad_check: function must return a scalar");
  }
  const double v = out.values()[0];
  if (!std::isfinite(v)) throw NumericsError("grad_check: function value is not finite");
  return v;
}

std::vector<std::size_t> pick_coordinates(std::size_t n, std::size_t limit,
                                          std::mt19937_64& rng) {
  std::vector<std::size_t> idx(n);
  std::iota(idx.begin(), idx.end(), std::size_t{0});
  if (limit == 0 || limit >= n) return idx;
  std::shuffle(idx.begin(), idx.end(), rng);
  idx.resize(limit);
  std::sort(idx.begin(), idx.end());
  return idx;
}

}  // namespace

double relative_error(double analytic, double numeric) {
  const double denom = std::max({std::abs(analytic), std::abs(numeric), 1e-8});
  return std::abs(analytic - numeric) / denom;
}

std::string GradCheckReport::summary() const {
  std::ostringstream os;
  os << "checked=" << checked << " failures=" << failures.size()
     << " max_rel_error=" << max_rel_error;
  if (checked > 0) {
    os << " worst(input=" << worst.input << ", index=" << worst.index
       << ", analytic=" << worst.analytic << ", numeric=" << worst.numeric << ")";
  }
  return os.str();
}

GradCheckReport grad_check(const ScalarFn& fn, const std::vector<Tensor>& inputs,
                           const GradCheckOptions& options) {
  if (!(options.eps > 0.0)) throw ContractError("grad_check: eps must be positive");
  for (const auto& t : inputs) {
    if (!t.defined() || !t.requires_grad() || !t.node()->is_leaf()) {
      throw ContractError("grad_check: inputs must be leaves that require grad");
    }
  }
  PrecisionScope precision(Precision::kDouble);

  for (auto t : inputs) t.zero_grad();
  {
    Tensor out = fn(inputs);
    if (!out.defined() || out.numel() != 1) {
      throw ContractError("grad_check: function must return a scalar");
    }
    if (!std::isfinite(out.values()[0])) {
      throw NumericsError("grad_check: function value is not finite");
    }
    backward(out);
  }
  std::vector<std::vector<double>> analytic;
  analytic.reserve(inputs.size());
  for (const auto& t : inputs) analytic.emplace_back(t.grad().begin(), t.grad().end());

  GradCheckReport report;
  std::mt19937_64 rng(options.seed);
  NoGradGuard no_grad;
  for (std::size_t k = 0; k < inputs.size(); ++k) {
    Tensor t = inputs[k];
    auto values = t.mutable_values();
    for (std::size_t i : pick_coordinates(values.size(), options.max_coords_per_input, rng)) {
      const double saved = values[i];
      values[i] = saved + options.eps;
      const double plus = evaluate(fn, inputs);
      values[i] = saved - options.eps;
      const double minus = evaluate(fn, inputs);
      values[i] = saved;

      GradCheckEntry e{k, i, analytic[k][i], (plus - minus) / (2.0 * options.eps), 0.0};
      e.rel_error = relative_error(e.analytic, e.numeric);
      ++report.checked;
      if (e.rel_error >= report.max_rel_error) {
        report.max_rel_error = e.rel_error;
        report.worst = e;
      }
      if (e.rel_error > options.tol) report.failures.push_back(e);
    }
  }
  return report;
}

}  // namespace seedcomp::ad
