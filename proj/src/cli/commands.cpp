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


#include "seedcomp/cli/commands.hpp"

#include <algorithm>
#include <cstdio>
#include <fstream>
#include <numeric>
#include <ostream>
#include <random>
#include <sstream>

#include "seedcomp/autodiff/tensor.hpp"
#include "seedcomp/data/io.hpp"
#include "seedcomp/generator/decoder.hpp"
#include "seedcomp/losses/losses.hpp"
#include "seedcomp/losses/metrics.hpp"
#include "seedcomp/pipeline/checkpoint.hpp"
#include "seedcomp/pipeline/grad_suite.hpp"
#include "seedcomp/pipeline/model.hpp"
#include "seedcomp/pipeline/trainer.hpp"

namespace seedcomp::cli {

namespace {

void require_file(const fs::path& p, const char* what) {
  if (p.empty()) throw UsageError(std::string("missing ") + what);
  if (!fs::is_regular_file(p)) throw UsageError(std::string(what) + " not found: " + p.string());
}

void require_output(const fs::path& p, const char* what) {
  if (p.empty()) throw UsageError(std::string("missing ") + what);
  if (fs::is_directory(p)) throw UsageError(std::string(what) + " is a directory: " + p.string());
}

void make_parent(const fs::path& p) {
  if (p.has_parent_path()) fs::create_directories(p.parent_path());
}

void write_text(const fs::path& p, const std::string& text) {
  make_parent(p);
  std::ofstream os(p);
  os << text;
  if (!os) throw Error("cannot write " + p.string());
}

std::vector<data::ShapePair> load_pairs(const fs::path& root, const std::string& split) {
  if (root.empty()) throw UsageError("missing --data");
  if (!fs::is_directory(root / split)) {
    throw UsageError("dataset split not found: " + (root / split).string());
  }
  auto pairs = data::read_dataset(root, split);
  if (pairs.empty()) throw UsageError("dataset split is empty: " + (root / split).string());
  return pairs;
}

struct LoadedModel {
  std::unique_ptr<pipeline::CompletionModel> model;
  std::optional<pipeline::AdamState> optimizer;
};

LoadedModel load_model(const fs::path& checkpoint) {
  require_file(checkpoint, "checkpoint");
  LoadedModel out;
  out.model = std::make_unique<pipeline::CompletionModel>(pipeline::read_checkpoint_config(checkpoint));
  out.optimizer = pipeline::load_into(checkpoint, *out.model);
  return out;
}

void check_input_size(const pipeline::CompletionModel& model, const PointCloud& cloud,
                      const std::string& what) {
  if (cloud.size() < model.min_input_points()) {
    throw ContractError(what + " has " + std::to_string(cloud.size()) +
                        " points; the model needs at least " +
                        std::to_string(model.min_input_points()));
  }
}

std::string metric_column(Metric m) {
  switch (m) {
    case Metric::kCdL1:
      return "cd_l1_x1000";
    case Metric::kCdL2:
      return "cd_l2_x1000";
    case Metric::kFScore:
      return "fscore";
    case Metric::kFidelity:
      return "fidelity";
  }
  return "?";
}

}  // namespace

fs::path config_echo_path(const fs::path& output) {
  return output.parent_path() / (output.stem().string() + ".config.txt");
}

fs::path loss_log_path(const fs::path& checkpoint) {
  return checkpoint.parent_path() / (checkpoint.stem().string() + ".loss.csv");
}

TrainSummary train(const TrainArgs& args, std::ostream& log) {
  require_output(args.out, "--out");
  std::vector<data::ShapePair> pairs;
  if (args.synthetic > 0) {
    if (!args.data.empty()) throw UsageError("--data and --synthetic are exclusive");
    data::SyntheticSetOptions o;
    o.count = args.synthetic;
    o.seed = args.seed;
    o.input_points = args.run.model.input_points;
    pairs = data::synthetic_dataset(o);
  } else {
    pairs = load_pairs(args.data, args.split);
  }

  pipeline::CompletionModel model(args.run.model);
  for (const auto& p : pairs) check_input_size(model, p.partial, "sample " + p.id);
  pipeline::Trainer trainer(model, args.run.train);
  if (!args.resume.empty()) {
    require_file(args.resume, "--resume checkpoint");
    if (pipeline::read_checkpoint_config(args.resume).entries() != model.config().entries()) {
      throw ContractError("--resume checkpoint was trained with a different configuration");
    }
    if (auto state = pipeline::load_into(args.resume, model)) trainer.set_state(std::move(*state));
  }

  TrainSummary summary{args.out, loss_log_path(args.out), config_echo_path(args.out), 0.0, 0.0};
  std::string echo = args.run.to_text();
  echo += "data = " + (args.synthetic ? "synthetic:" + std::to_string(args.synthetic)
                                      : (args.data / args.split).string()) + "\n";
  echo += "data_seed = " + std::to_string(args.seed) + "\n";
  write_text(summary.config, echo);
  std::ofstream csv(summary.loss_log);
  if (!csv) throw Error("cannot write " + summary.loss_log.string());
  csv << pipeline::loss_log_header(args.run.model.rates.size()) << '\n';

  std::mt19937_64 rng(args.seed);
  std::vector<std::size_t> order(pairs.size());
  std::iota(order.begin(), order.end(), 0);
  std::size_t cursor = order.size();
  for (std::size_t s = 0; s < args.run.steps; ++s) {
    std::vector<pipeline::Sample> batch;
    for (std::size_t b = 0; b < args.run.batch; ++b) {
      if (cursor == order.size()) {
        std::shuffle(order.begin(), order.end(), rng);
        cursor = 0;
      }
      const auto& p = pairs[order[cursor++]];
      batch.push_back({p.partial, p.gt});
    }
    const auto r = trainer.step(batch);
    const auto row = pipeline::loss_log_row(trainer.state().step, r);
    csv << row << '\n';
    csv.flush();
    log << row << '\n';
    if (s == 0) summary.first_total = r.total;
    summary.last_total = r.total;
  }
  pipeline::save_checkpoint(args.out, model, &trainer.state());
  return summary;
}

void complete(const CompleteArgs& args) {
  require_file(args.input, "--input");
  require_output(args.output, "--output");
  const auto loaded = load_model(args.checkpoint);
  const auto& model = *loaded.model;
  const auto partial = data::read_cloud(args.input);
  check_input_size(model, partial, args.input.string());

  ad::NoGradGuard no_grad;
  const auto result = model.forward(partial);

  write_text(config_echo_path(args.output), model.config().to_text() +
                                                "checkpoint = " + args.checkpoint.string() +
                                                "\ninput = " + args.input.string() + "\n");
  data::write_cloud(args.output, PointCloud::from_tensor(result.prediction()));
  if (!args.export_stages.empty()) {
    fs::create_directories(args.export_stages);
    data::write_xyz(args.export_stages / "coarse.xyz", result.coarse.points());
    for (std::size_t l = 0; l < result.stages.size(); ++l) {
      data::write_xyz(args.export_stages / ("stage_" + std::to_string(l + 1) + ".xyz"),
                      result.stages[l].points());
    }
  }
  if (!args.export_seeds.empty()) {
    make_parent(args.export_seeds);
    data::write_cloud(args.export_seeds, result.seeds.cloud());
    const auto table = args.export_seeds.parent_path() /
                       (args.export_seeds.stem().string() + "_provenance.csv");
    std::ofstream os(table);
    generator::write_seed_provenance(
        os, generator::seed_provenance(model.config().patches, model.config().seed_rate));
    if (!os) throw Error("cannot write " + table.string());
  }
}

std::vector<Metric> parse_metrics(const std::string& list) {
  std::vector<Metric> out;
  std::stringstream ss(list);
  std::string name;
  while (std::getline(ss, name, ',')) {
    if (name == "cd-l1") out.push_back(Metric::kCdL1);
    else if (name == "cd-l2") out.push_back(Metric::kCdL2);
    else if (name == "fscore") out.push_back(Metric::kFScore);
    else if (name == "fidelity") out.push_back(Metric::kFidelity);
    else throw UsageError("unknown metric '" + name + "' (cd-l1, cd-l2, fscore, fidelity)");
  }
  if (out.empty()) throw UsageError("no metrics requested");
  return out;
}

EvalTable evaluate(const EvalArgs& args) {
  if (args.checkpoint.empty() == args.predictions.empty()) {
    throw UsageError("eval needs exactly one of --ckpt or --predictions");
  }
  const auto pairs = load_pairs(args.data, args.split);
  LoadedModel loaded;
  std::vector<PointCloud> given;
  if (!args.checkpoint.empty()) {
    loaded = load_model(args.checkpoint);
    for (const auto& p : pairs) check_input_size(*loaded.model, p.partial, "sample " + p.id);
  } else {
    for (const auto& p : pairs) {
      const auto file = args.predictions / (p.id + ".xyz");
      require_file(file, "prediction");
      given.push_back(data::read_xyz(file));
    }
  }
  std::vector<PointCloud> library;
  if (!args.mmd_library.empty()) {
    if (!fs::is_directory(args.mmd_library)) {
      throw UsageError("--mmd-library not found: " + args.mmd_library.string());
    }
    library = data::read_cloud_directory(args.mmd_library);
    if (library.empty()) throw UsageError("--mmd-library holds no clouds");
  }
  if (!args.out.empty()) require_output(args.out, "--out");

  EvalTable table;
  table.header.push_back("id");
  for (auto m : args.metrics) table.header.push_back(metric_column(m));
  if (!library.empty()) table.header.push_back("mmd_x1000");
  table.rows.resize(pairs.size());

  std::string failure;
#pragma omp parallel for schedule(dynamic)
  for (std::size_t i = 0; i < pairs.size(); ++i) {
    try {
      const auto& p = pairs[i];
      PointCloud pred;
      if (loaded.model) {
        ad::NoGradGuard no_grad;
        pred = PointCloud::from_tensor(loaded.model->forward(p.partial).prediction());
      } else {
        pred = given[i];
      }
      EvalRow row{p.id, {}};
      for (auto m : args.metrics) {
        switch (m) {
          case Metric::kCdL1:
            row.values.push_back(1000.0 * losses::chamfer(pred, p.gt, losses::ChamferNorm::kL1));
            break;
          case Metric::kCdL2:
            row.values.push_back(1000.0 * losses::chamfer(pred, p.gt, losses::ChamferNorm::kL2));
            break;
          case Metric::kFScore:
            row.values.push_back(
                metrics::fscore(pred, p.gt, metrics::default_fscore_threshold(p.gt)).value);
            break;
          case Metric::kFidelity:
            row.values.push_back(metrics::fidelity(p.partial, pred));
            break;
        }
      }
      if (!library.empty()) row.values.push_back(1000.0 * metrics::mmd(pred, library).value);
      table.rows[i] = std::move(row);
    } catch (const std::exception& e) {
#pragma omp critical(seedcomp_eval_failure)
      if (failure.empty()) failure = pairs[i].id + ": " + e.what();
    }
  }
  if (!failure.empty()) throw NumericsError("eval failed on " + failure);

  table.mean.id = "mean";
  table.mean.values.assign(table.header.size() - 1, 0.0);
  for (const auto& r : table.rows) {
    for (std::size_t c = 0; c < r.values.size(); ++c) {
      table.mean.values[c] += r.values[c] / static_cast<double>(table.rows.size());
    }
  }

  if (!args.out.empty()) {
    make_parent(args.out);
    std::ofstream os(args.out);
    write_eval_table(os, table);
    if (!os) throw Error("cannot write " + args.out.string());
    std::string echo = loaded.model ? loaded.model->config().to_text() : std::string();
    echo += "checkpoint = " + args.checkpoint.string() + "\n";
    echo += "predictions = " + args.predictions.string() + "\n";
    echo += "data = " + (args.data / args.split).string() + "\n";
    echo += "mmd_library = " + args.mmd_library.string() + "\n";
    write_text(config_echo_path(args.out), echo);
  }
  return table;
}

void write_eval_table(std::ostream& os, const EvalTable& table) {
  for (std::size_t c = 0; c < table.header.size(); ++c) {
    os << (c ? "," : "") << table.header[c];
  }
  os << '\n';
  auto emit = [&os](const EvalRow& r) {
    os << r.id;
    char buf[32];
    for (double v : r.values) {
      std::snprintf(buf, sizeof buf, ",%.9g", v);
      os << buf;
    }
    os << '\n';
  };
  for (const auto& r : table.rows) emit(r);
  emit(table.mean);
}

bool gradcheck(const GradcheckArgs& args, std::ostream& os) {
  const auto suite = pipeline::gradient_suite();
  if (!args.op.empty() &&
      std::none_of(suite.begin(), suite.end(), [&](const auto& c) { return c.name == args.op; })) {
    std::string names;
    for (const auto& c : suite) names += (names.empty() ? "" : ", ") + c.name;
    throw UsageError("unknown op '" + args.op + "' (" + names + ")");
  }
  if (!(args.tol > 0.0)) throw UsageError("--tol must be positive");
  ad::GradCheckOptions opts;
  opts.tol = args.tol;
  bool ok = true;
  for (const auto& c : suite) {
    if (!args.op.empty() && c.name != args.op) continue;
    const auto rep = c.run(opts);
    char buf[160];
    std::snprintf(buf, sizeof buf, "%-18s %s checked=%zu max_rel_error=%.3e", c.name.c_str(),
                  rep.passed() ? "PASS" : "FAIL", rep.checked, rep.max_rel_error);
    os << buf << '\n';
    if (!rep.passed()) os << "  " << rep.summary() << '\n';
    ok = ok && rep.passed();
  }
  return ok;
}

void synth(const SynthArgs& args) {
  if (args.out.empty()) throw UsageError("missing --out");
  if (args.options.count == 0) throw UsageError("--count must be positive");
  const auto pairs = data::synthetic_dataset(args.options);
  data::write_dataset(args.out, args.split, pairs);
  const auto& o = args.options;
  write_text(args.out / (args.split + ".config.txt"),
             "count = " + std::to_string(o.count) + "\nseed = " + std::to_string(o.seed) +
                 "\ngt_points = " + std::to_string(o.gt_points) + "\nvisible_points = " +
                 std::to_string(o.visible_points) + "\ninput_points = " +
                 std::to_string(o.input_points) + "\n");
}

}  // namespace seedcomp::cli
