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

#include "seedcomp/generator/attention.hpp"

#include "seedcomp/autodiff/ops.hpp"
#include "seedcomp/core/errors.hpp"

namespace seedcomp::generator {

AttentionMode AttentionMode::scaled(double lambda) {
  if (!(lambda > 0.0)) throw ContractError("scaled attention requires lambda > 0");
  return {AttentionKind::kScaled, lambda};
}

AttentionMode AttentionMode::parse(const std::string& name, double lambda) {
  if (name == "softmax") return softmax();
  if (name == "none") return none();
  if (name == "scaled") return scaled(lambda);
  if (name == "log") return log();
  throw ContractError("unknown attention mode: " + name);
}

std::string AttentionMode::name() const {
  switch (kind) {
    case AttentionKind::kSoftmax:
      return "softmax";
    case AttentionKind::kNone:
      return "none";
    case AttentionKind::kScaled:
      return "scaled";
    case AttentionKind::kLog:
      return "log";
  }
  return "softmax";
}

ad::Tensor normalize_attention(const ad::Tensor& logits, std::size_t axis,
                               const AttentionMode& mode) {
  switch (mode.kind) {
    case AttentionKind::kSoftmax:
      return ad::softmax(logits, axis);
    case AttentionKind::kNone:
      return logits;
    case AttentionKind::kScaled:
      return ad::softmax(ad::scale(logits, mode.lambda), axis);
    case AttentionKind::kLog:
      return ad::log_softmax(logits, axis);
  }
  return logits;
}

}  // namespace seedcomp::generator
