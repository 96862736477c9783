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


#include <CLI11.hpp>

#include <iostream>
#include <optional>
#include <string>
#include <vector>

#include "seedcomp/cli/commands.hpp"
#include "seedcomp/core/errors.hpp"

namespace {

using namespace seedcomp;

struct ConfigFlags {
  std::string preset = "desk";
  std::string file;
  std::vector<std::string> overrides;
  std::optional<std::size_t> steps;
  std::optional<std::size_t> batch;
  std::optional<std::string> lr;
  std::optional<std::uint64_t> seed;

  void attach(CLI::App* app) {
    app->add_option("--preset", preset, "Base configuration: desk, paper or paper_8k")
        ->capture_default_str();
    app->add_option("--config", file, "Flat key = value file applied over the preset");
    app->add_option("--set", overrides, "key=value override, applied last")->take_all();
    app->add_option("--steps", steps, "Optimizer steps");
    app->add_option("--batch", batch, "Clouds averaged into one update");
    app->add_option("--lr", lr, "Learning rate");
    app->add_option("--seed", seed, "Seed for weights and sample order");
  }

  cli::RunConfig resolve(std::vector<std::string> extra = {}) const {
    auto all = overrides;
    if (steps) all.push_back("steps=" + std::to_string(*steps));
    if (batch) all.push_back("batch=" + std::to_string(*batch));
    if (lr) all.push_back("learning_rate=" + *lr);
    if (seed) all.push_back("seed=" + std::to_string(*seed));
    all.insert(all.end(), extra.begin(), extra.end());
    return cli::resolve_config(preset, file, all);
  }
};

struct TrainFlags {
  ConfigFlags config;
  std::string data;
  std::string split = "train";
  std::size_t synthetic = 0;
  std::string out;
  std::string resume;

  void attach(CLI::App* app) {
    config.attach(app);
    app->add_option("--data", data, "Dataset root holding <split>/<id>_partial.xyz and _gt.xyz");
    app->add_option("--split", split, "Dataset split")->capture_default_str();
    app->add_option("--synthetic", synthetic, "Train on this many generated shapes instead");
    app->add_option("--out", out, "Checkpoint to write")->required();
    app->add_option("--resume", resume, "Checkpoint to continue from");
  }

  int run(std::vector<std::string> extra = {}) const {
    cli::TrainArgs a;
    a.run = config.resolve(std::move(extra));
    a.data = data;
    a.split = split;
    a.synthetic = synthetic;
    a.seed = a.run.model.seed;
    a.out = out;
    a.resume = resume;
    const auto s = cli::train(a, std::cout);
    std::cerr << "checkpoint " << s.checkpoint.string() << "\nloss log " << s.loss_log.string()
              << "\nconfig " << s.config.string() << '\n';
    return cli::kExitOk;
  }
};

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Point cloud completion with patch seeds and upsample transformers"};
  app.require_subcommand(1);

  TrainFlags train_flags;
  auto* train = app.add_subcommand("train", "Train a model and write a checkpoint");
  train_flags.attach(train);

  TrainFlags ablate_flags;
  std::string generator = "uptrans";
  std::string attention = "softmax";
  double lambda = 1.0;
  auto* ablate = app.add_subcommand("ablate", "Train one generator/attention variant");
  ablate_flags.attach(ablate);
  ablate->add_option("--generator", generator, "uptrans, folding, deconv, graphconv, pointwise")
      ->capture_default_str();
  ablate->add_option("--attention", attention, "softmax, none, scaled, log")
      ->capture_default_str();
  ablate->add_option("--lambda", lambda, "Temperature for scaled attention")
      ->capture_default_str();

  cli::CompleteArgs complete_args;
  std::string ckpt, input, output, stages, seeds;
  auto* complete = app.add_subcommand("complete", "Complete one partial cloud");
  complete->add_option("--ckpt", ckpt, "Checkpoint")->required();
  complete->add_option("--input", input, "Partial cloud (.xyz or .ply)")->required();
  complete->add_option("--output", output, "Completed cloud (.xyz or .ply)")->required();
  complete->add_option("--export-stages", stages, "Directory for P_0 .. P_L clouds");
  complete->add_option("--export-seeds", seeds, "Seed cloud; a provenance table goes beside it");

  std::string eval_ckpt, eval_predictions, eval_data, eval_split = "test", eval_metrics =
      "cd-l1,cd-l2,fscore,fidelity", eval_library, eval_out;
  auto* eval = app.add_subcommand("eval", "Per-sample and mean metrics (CD x1000)");
  eval->add_option("--ckpt", eval_ckpt, "Checkpoint to run");
  eval->add_option("--predictions", eval_predictions, "Directory of <id>.xyz predictions");
  eval->add_option("--data", eval_data, "Dataset root")->required();
  eval->add_option("--split", eval_split, "Dataset split")->capture_default_str();
  eval->add_option("--metrics", eval_metrics, "Comma list")->capture_default_str();
  eval->add_option("--mmd-library", eval_library, "Directory of reference shapes for MMD");
  eval->add_option("--out", eval_out, "CSV copy of the table");

  cli::GradcheckArgs grad_args;
  auto* grad = app.add_subcommand("gradcheck", "Finite-difference audit of every gradient");
  grad->add_option("--op", grad_args.op, "Run one case");
  grad->add_option("--tol", grad_args.tol, "Relative tolerance")->capture_default_str();

  cli::SynthArgs synth_args;
  std::string synth_out;
  auto* synth = app.add_subcommand("synth", "Write a synthetic partial/complete dataset");
  synth->add_option("--out", synth_out, "Dataset root")->required();
  synth->add_option("--split", synth_args.split, "Split name")->capture_default_str();
  synth->add_option("--count", synth_args.options.count, "Shapes")->capture_default_str();
  synth->add_option("--seed", synth_args.options.seed, "Seed")->capture_default_str();
  synth->add_option("--gt-points", synth_args.options.gt_points, "Complete cloud size")
      ->capture_default_str();
  synth->add_option("--visible-points", synth_args.options.visible_points,
                    "Points kept by occlusion")
      ->capture_default_str();
  synth->add_option("--input-points", synth_args.options.input_points,
                    "Partial size after resampling")
      ->capture_default_str();

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForAllHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return cli::kExitUsage;
  }

  try {
    if (*train) return train_flags.run();
    if (*ablate) {
      if (attention == "scaled") attention += ":" + std::to_string(lambda);
      return ablate_flags.run({"generator=" + generator, "stage_attention=" + attention});
    }
    if (*complete) {
      complete_args.checkpoint = ckpt;
      complete_args.input = input;
      complete_args.output = output;
      complete_args.export_stages = stages;
      complete_args.export_seeds = seeds;
      cli::complete(complete_args);
      return cli::kExitOk;
    }
    if (*eval) {
      cli::EvalArgs a;
      a.checkpoint = eval_ckpt;
      a.predictions = eval_predictions;
      a.data = eval_data;
      a.split = eval_split;
      a.metrics = cli::parse_metrics(eval_metrics);
      a.mmd_library = eval_library;
      a.out = eval_out;
      cli::write_eval_table(std::cout, cli::evaluate(a));
      return cli::kExitOk;
    }
    if (*grad) return cli::gradcheck(grad_args, std::cout) ? cli::kExitOk : cli::kExitFailure;
    if (*synth) {
      synth_args.out = synth_out;
      cli::synth(synth_args);
      return cli::kExitOk;
    }
  } catch (const cli::UsageError& e) {
    std::cerr << "usage error: " << e.what() << '\n';
    return cli::kExitUsage;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return cli::kExitFailure;
  }
  return cli::kExitUsage;
}
