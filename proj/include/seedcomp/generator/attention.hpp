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

#include <string>

#include "seedcomp/autodiff/tensor.hpp"

namespace seedcomp::generator {

enum class AttentionKind { kSoftmax, kNone, kScaled, kLog };

/// How raw attention logits are turned into aggregation weights.
struct AttentionMode {
  AttentionKind kind = AttentionKind::kSoftmax;
  double lambda = 1.0;  // scaled-softmax temperature, > 0

  static AttentionMode softmax() { return {AttentionKind::kSoftmax, 1.0}; }
  static AttentionMode none() { return {AttentionKind::kNone, 1.0}; }
  static AttentionMode scaled(double lambda);
  static AttentionMode log() { return {AttentionKind::kLog, 1.0}; }

  /// "softmax", "none", "scaled" (uses `lambda`), "log".
  static AttentionMode parse(const std::string& name, double lambda = 1.0);
  std::string name() const;

  friend bool operator==(const AttentionMode&, const AttentionMode&) = default;
};

/// Normalizes logits over `axis` (the neighbor axis) according to `mode`.
/// kNone returns the logits tensor itself.
ad::Tensor normalize_attention(const ad::Tensor& logits, std::size_t axis,
                               const AttentionMode& mode);

}  // namespace seedcomp::generator
