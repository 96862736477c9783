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
#include <filesystem>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include "seedcomp/cli/run_config.hpp"
#include "seedcomp/data/shapes.hpp"

namespace seedcomp::cli {

namespace fs = std::filesystem;

/// Training pairs come from `data/split`, or from the synthetic generator
/// when `synthetic` is nonzero.
struct TrainArgs {
  RunConfig run;
  fs::path data;
  std::string split = "train";
  std::size_t synthetic = 0;
  std::uint64_t seed = 0;
  fs::path out;  // checkpoint; the loss log and config land beside it
  fs::path resume;
};

struct TrainSummary {
  fs::path checkpoint;
  fs::path loss_log;
  fs::path config;
  double first_total = 0.0;
  double last_total = 0.0;
};

/// The sidecar files written next to an output file.
fs::path config_echo_path(const fs::path& output);
fs::path loss_log_path(const fs::path& checkpoint);

TrainSummary train(const TrainArgs& args, std::ostream& log);

struct CompleteArgs {
  fs::path checkpoint;
  fs::path input;
  fs::path output;
  fs::path export_stages;  // coarse.xyz, stage_1.xyz, ...
  fs::path export_seeds;   // seeds cloud plus <stem>_provenance.csv
};

void complete(const CompleteArgs& args);

enum class Metric { kCdL1, kCdL2, kFScore, kFidelity };

/// "cd-l1,cd-l2,fscore,fidelity"; unknown names throw UsageError.
std::vector<Metric> parse_metrics(const std::string& list);

/// Predictions come from the checkpoint, or from `<predictions>/<id>.xyz`.
struct EvalArgs {
  fs::path checkpoint;
  fs::path predictions;
  fs::path data;
  std::string split = "test";
  std::vector<Metric> metrics{Metric::kCdL1, Metric::kCdL2, Metric::kFScore, Metric::kFidelity};
  fs::path mmd_library;
  fs::path out;  // optional CSV copy of the table
};

struct EvalRow {
  std::string id;
  std::vector<double> values;  // in header order
};

struct EvalTable {
  std::vector<std::string> header;  // "id", then one column per metric
  std::vector<EvalRow> rows;
  EvalRow mean;
};

EvalTable evaluate(const EvalArgs& args);
void write_eval_table(std::ostream& os, const EvalTable& table);

struct GradcheckArgs {
  std::string op;  // empty runs every case
  double tol = 1e-4;
};

/// One line per case; returns true when every case passes.
bool gradcheck(const GradcheckArgs& args, std::ostream& os);

struct SynthArgs {
  data::SyntheticSetOptions options;
  fs::path out;
  std::string split = "train";
};

void synth(const SynthArgs& args);

}  // namespace seedcomp::cli
