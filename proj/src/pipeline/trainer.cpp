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

#include "seedcomp/pipeline/trainer.hpp"

#include <cmath>
#include <cstdio>

#include "seedcomp/autodiff/ops.hpp"
#include "seedcomp/autodiff/tape.hpp"
#include "seedcomp/core/errors.hpp"

namespace seedcomp::pipeline {

namespace {

std::string format_double(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

std::string describe(const losses::LossBreakdown& b) {
  std::string s = "stage_cds=[";
  for (std::size_t i = 0; i < b.stage_cds.size(); ++i) {
    if (i) s += ',';
    s += format_double(b.stage_cds[i]);
  }
  return s + "] partial=" + format_double(b.partial_matching) + " total=" + format_double(b.total);
}

void round_if_single(std::vector<double>& values, ad::Precision p) {
  if (p == ad::Precision::kSingle) {
    for (auto& x : values) x = static_cast<double>(static_cast<float>(x));
  }
}

}  // namespace

LossTerms training_loss(const ForwardResult& result, const PointCloud& partial,
                        const PointCloud& gt) {
  auto comp = losses::completion_loss(result.seeds.coords, result.stage_clouds(), gt);
  auto part = losses::partial_matching_loss(partial, result.prediction());
  LossTerms out;
  out.total = ad::add(comp.value, part);
  out.breakdown.stage_cds = std::move(comp.terms);
  out.breakdown.partial_matching = part.item();
  out.breakdown.total = out.total.item();
  return out;
}

Trainer::Trainer(CompletionModel& model, const TrainOptions& options)
    : model_(model), options_(options) {
  if (options.learning_rate < 0.0 || options.beta1 < 0.0 ||
      options.beta1 >= 1.0 || options.beta2 < 0.0 || options.beta2 >= 1.0) {
    throw ContractError("trainer: invalid optimizer options");
  }
  for (const auto& p : model_.parameters().parameters()) {
    state_.m.emplace_back(p.tensor.numel(), 0.0);
    state_.v.emplace_back(p.tensor.numel(), 0.0);
  }
  model_.parameters().zero_grad();
}

losses::LossBreakdown Trainer::accumulate(const Sample& sample) {
  ad::PrecisionScope precision(model_.config().precision);
  LossTerms loss;
  try {
    const auto result = model_.forward(sample.partial);
    loss = training_loss(result, sample.partial, sample.gt);
  } catch (const NumericsError& e) {
    throw NumericsError(std::string("train_step: non-finite value in forward pass: ") + e.what());
  }
  if (!std::isfinite(loss.breakdown.total)) {
    throw NumericsError("train_step: non-finite loss " + describe(loss.breakdown));
  }
  ad::backward(loss.total);
  for (const auto& p : model_.parameters().parameters()) {
    for (double g : p.tensor.grad()) {
      if (!std::isfinite(g)) {
        throw NumericsError("train_step: non-finite gradient in " + p.name + " at " +
                            describe(loss.breakdown));
      }
    }
  }
  ++pending_;
  return loss.breakdown;
}

double Trainer::current_learning_rate() const {
  double lr = options_.learning_rate;
  if (options_.decay_every > 0) {
    lr *= std::pow(options_.decay, static_cast<double>(state_.step / options_.decay_every));
  }
  return lr;
}

void Trainer::apply() {
  if (pending_ == 0) throw ContractError("trainer: apply() without accumulated gradients");
  const auto precision = model_.config().precision;
  const double lr = current_learning_rate();
  ++state_.step;
  const double t = static_cast<double>(state_.step);
  const double c1 = 1.0 - std::pow(options_.beta1, t);
  const double c2 = 1.0 - std::pow(options_.beta2, t);
  const double inv = 1.0 / static_cast<double>(pending_);

  auto& params = model_.parameters().parameters();
  for (std::size_t i = 0; i < params.size(); ++i) {
    auto tensor = params[i].tensor;
    auto values = tensor.mutable_values();
    auto grad = tensor.grad();
    auto& m = state_.m[i];
    auto& v = state_.v[i];
    std::vector<double> next(values.begin(), values.end());
    for (std::size_t j = 0; j < next.size(); ++j) {
      const double g = grad[j] * inv;
      m[j] = options_.beta1 * m[j] + (1.0 - options_.beta1) * g;
      v[j] = options_.beta2 * v[j] + (1.0 - options_.beta2) * g * g;
      next[j] -= lr * (m[j] / c1) / (std::sqrt(v[j] / c2) + options_.epsilon);
    }
    round_if_single(m, precision);
    round_if_single(v, precision);
    round_if_single(next, precision);
    std::copy(next.begin(), next.end(), values.begin());
  }
  model_.parameters().zero_grad();
  pending_ = 0;
}

losses::LossBreakdown Trainer::step(const std::vector<Sample>& batch) {
  if (batch.empty()) throw ContractError("trainer: empty batch");
  losses::LossBreakdown mean;
  for (const auto& s : batch) {
    const auto b = accumulate(s);
    if (mean.stage_cds.empty()) mean.stage_cds.assign(b.stage_cds.size(), 0.0);
    for (std::size_t i = 0; i < b.stage_cds.size(); ++i) mean.stage_cds[i] += b.stage_cds[i];
    mean.partial_matching += b.partial_matching;
    mean.total += b.total;
  }
  const double n = static_cast<double>(batch.size());
  for (auto& x : mean.stage_cds) x /= n;
  mean.partial_matching /= n;
  mean.total /= n;
  apply();
  return mean;
}

void Trainer::set_state(AdamState state) {
  const auto& params = model_.parameters().parameters();
  if (state.m.size() != params.size() || state.v.size() != params.size()) {
    throw ContractError("trainer: optimizer state does not match the model");
  }
  for (std::size_t i = 0; i < params.size(); ++i) {
    if (state.m[i].size() != params[i].tensor.numel() ||
        state.v[i].size() != params[i].tensor.numel()) {
      throw ContractError("trainer: optimizer state size mismatch at " + params[i].name);
    }
  }
  state_ = std::move(state);
}

std::string loss_log_header(std::size_t stage_count) {
  std::string h = "step,cd_seeds";
  for (std::size_t l = 1; l <= stage_count; ++l) h += ",cd_p" + std::to_string(l);
  return h + ",partial_matching,total";
}

std::string loss_log_row(std::size_t step, const losses::LossBreakdown& b) {
  std::string row = std::to_string(step);
  for (double cd : b.stage_cds) row += ',' + format_double(cd);
  row += ',' + format_double(b.partial_matching);
  row += ',' + format_double(b.total);
  return row;
}

}  // namespace seedcomp::pipeline
