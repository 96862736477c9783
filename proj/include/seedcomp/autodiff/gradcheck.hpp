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

#include <cstdint>
#include <functional>
#include <string>
#include <vector>

#include "seedcomp/autodiff/tensor.hpp"

namespace seedcomp::ad {

struct GradCheckOptions {
  double eps = 1e-5;
  double tol = 1e-4;
  /// Coordinates probed per input; 0 probes all of them. A subset is drawn
  /// without replacement from a generator seeded with `seed`.
  std::size_t max_coords_per_input = 0;
  std::uint64_t seed = 0;
};

struct GradCheckEntry {
  std::size_t input = 0;
  std::size_t index = 0;
  double analytic = 0.0;
  double numeric = 0.0;
  double rel_error = 0.0;
};

struct GradCheckReport {
  double max_rel_error = 0.0;
  std::size_t checked = 0;
  /// Coordinates whose relative error exceeds the tolerance.
  std::vector<GradCheckEntry> failures;
  GradCheckEntry worst;

  bool passed() const { return failures.empty(); }
  std::string summary() const;
};

/// |a - n| / max(|a|, |n|, 1e-8)
double relative_error(double analytic, double numeric);

using ScalarFn = std::function<Tensor(const std::vector<Tensor>&)>;

/// Compares the reverse-mode gradient of `fn` at `inputs` with central
/// differences. Inputs must be leaves with requires_grad set; they are
/// perturbed in place and restored. Runs in double precision. Throws
/// NumericsError if fn yields a non-finite value.
GradCheckReport grad_check(const ScalarFn& fn, const std::vector<Tensor>& inputs,
                           const GradCheckOptions& options = {});

}  // namespace seedcomp::ad
