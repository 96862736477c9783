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
#include <vector>

#include "seedcomp/geometry/point_cloud.hpp"
#include "seedcomp/losses/losses.hpp"
#include "seedcomp/pipeline/model.hpp"

namespace seedcomp::pipeline {

struct TrainOptions {
  double learning_rate = 1e-3;
  double beta1 = 0.9;
  double beta2 = 0.999;
  double epsilon = 1e-8;
  double decay = 0.1;
  /// Multiply the rate by `decay` every this many optimizer steps; 0 disables.
  std::size_t decay_every = 0;
};

/// Adam moments, one pair per parameter in store order.
struct AdamState {
  std::uint64_t step = 0;
  std::vector<std::vector<double>> m;
  std::vector<std::vector<double>> v;
};

struct Sample {
  PointCloud partial;
  PointCloud gt;
};

/// Seeds + stage Chamfer terms against `gt` plus partial matching to P_L.
struct LossTerms {
  ad::Tensor total;
  losses::LossBreakdown breakdown;
};
LossTerms training_loss(const ForwardResult& result, const PointCloud& partial,
                        const PointCloud& gt);

class Trainer {
 public:
  Trainer(CompletionModel& model, const TrainOptions& options);

  /// Forward, loss, backward for one cloud; gradients add up until apply().
  losses::LossBreakdown accumulate(const Sample& sample);
  /// One Adam update from the averaged accumulated gradients.
  void apply();
  /// accumulate() over the batch then apply(); returns the mean breakdown.
  losses::LossBreakdown step(const std::vector<Sample>& batch);
  losses::LossBreakdown step(const Sample& sample) { return step(std::vector<Sample>{sample}); }

  double current_learning_rate() const;
  const AdamState& state() const { return state_; }
  void set_state(AdamState state);
  const TrainOptions& options() const { return options_; }

 private:
  CompletionModel& model_;
  TrainOptions options_;
  AdamState state_;
  std::size_t pending_ = 0;
};

/// Header row of the loss log.
std::string loss_log_header(std::size_t stage_count);
/// One comma-delimited row; doubles are printed with round-trip precision.
std::string loss_log_row(std::size_t step, const losses::LossBreakdown& b);

}  // namespace seedcomp::pipeline
