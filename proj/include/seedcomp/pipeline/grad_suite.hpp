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

#include <functional>
#include <string>
#include <vector>

#include "seedcomp/autodiff/gradcheck.hpp"
#include "seedcomp/pipeline/config.hpp"

namespace seedcomp::pipeline {

/// One registered finite-difference check over a small random instance.
struct GradCase {
  std::string name;
  std::function<ad::GradCheckReport(const ad::GradCheckOptions&)> run;
};

/// interpolation, uptrans.{softmax,none,scaled,log}, folding, deconv,
/// graphconv, pointwise, chamfer.{l1,l2}, partial_matching, forward.
std::vector<GradCase> gradient_suite();

/// Smallest configuration the encoder accepts, in double precision.
ModelConfig gradcheck_config();

}  // namespace seedcomp::pipeline
