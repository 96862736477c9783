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


#include <gtest/gtest.h>

#include <filesystem>
#include <fstream>
#include <sstream>

#include "seedcomp/cli/commands.hpp"
#include "seedcomp/cli/run_config.hpp"
#include "seedcomp/data/io.hpp"
#include "seedcomp/pipeline/checkpoint.hpp"
#include "seedcomp/pipeline/grad_suite.hpp"

namespace seedcomp {
namespace {

namespace fs = std::filesystem;

fs::path scratch(const std::string& name) {
  auto dir = fs::temp_directory_path() / ("seedcomp_cli_" + name);
  fs::remove_all(dir);
  fs::create_directories(dir);
  return dir;
}

std::string slurp(const fs::path& p) {
  std::ifstream is(p);
  std::stringstream ss;
  ss << is.rdbuf();
  return ss.str();
}

cli::RunConfig tiny_run(std::size_t steps) {
  cli::RunConfig run;
  run.model = pipeline::gradcheck_config();
  run.model.precision = ad::Precision::kSingle;
  run.steps = steps;
  run.batch = 2;
  return run;
}

TEST(RunConfig, LayersApplyInOrder) {
  const auto dir = scratch("config");
  std::ofstream(dir / "c.txt") << "# run\nchannels = 48\nlearning_rate = 0.002\nsteps = 7\n";
  const auto run = cli::resolve_config("desk", dir / "c.txt", {"steps=9", "rates = 1,2"});
  EXPECT_EQ(run.model.channels, 48u);
  EXPECT_EQ(run.model.patches, pipeline::ModelConfig::desk().patches);
  EXPECT_EQ(run.train.learning_rate, 0.002);
  EXPECT_EQ(run.steps, 9u);
  EXPECT_EQ(run.model.rates, (std::vector<std::size_t>{1, 2}));

  std::ofstream(dir / "echo.txt") << run.to_text();
  EXPECT_EQ(cli::resolve_config("paper", dir / "echo.txt", {}).entries(), run.entries());
  fs::remove_all(dir);
}

TEST(RunConfig, Rejections) {
  EXPECT_THROW(cli::resolve_config("desk", {}, {"color=red"}), cli::UsageError);
  EXPECT_THROW(cli::resolve_config("huge", {}, {}), cli::UsageError);
  EXPECT_THROW(cli::resolve_config("desk", {}, {"steps"}), cli::UsageError);
  EXPECT_THROW(cli::resolve_config("desk", {}, {"learning_rate=fast"}), cli::UsageError);
  EXPECT_THROW(cli::resolve_config("desk", "/nonexistent/c.txt", {}), cli::UsageError);
  EXPECT_THROW(cli::resolve_config("desk", {}, {"patches=100000"}), ContractError);
  EXPECT_THROW(cli::resolve_config("desk", {}, {"batch=0"}), ContractError);
  const auto dir = scratch("badfile");
  std::ofstream(dir / "c.txt") << "channels = 8\nwhat\n";
  EXPECT_THROW(cli::resolve_config("desk", dir / "c.txt", {}), ParseError);
  fs::remove_all(dir);
}

TEST(Commands, TrainWritesCheckpointLogAndConfig) {
  const auto dir = scratch("train");
  cli::TrainArgs a;
  a.run = tiny_run(2);
  a.synthetic = 3;
  a.seed = 1;
  a.out = dir / "run" / "m.ckpt";
  std::ostringstream log;
  const auto s = cli::train(a, log);
  ASSERT_TRUE(fs::exists(s.checkpoint));
  const auto text = slurp(s.loss_log);
  EXPECT_EQ(text.substr(0, text.find('\n')), "step,cd_seeds,cd_p1,cd_p2,partial_matching,total");
  EXPECT_EQ(std::count(text.begin(), text.end(), '\n'), 3);
  EXPECT_NE(slurp(s.config).find("batch = 2"), std::string::npos);
  EXPECT_EQ(pipeline::read_checkpoint_config(s.checkpoint).entries(), a.run.model.entries());

  // A second run with the same flags reproduces the log byte for byte.
  auto b = a;
  b.out = dir / "again" / "m.ckpt";
  std::ostringstream log2;
  EXPECT_EQ(slurp(cli::train(b, log2).loss_log), text);

  // Resuming continues the optimizer step count.
  auto c = a;
  c.out = dir / "resumed.ckpt";
  c.resume = s.checkpoint;
  c.run.steps = 1;
  std::ostringstream log3;
  cli::train(c, log3);
  EXPECT_EQ(log3.str().substr(0, 2), "3,");
  fs::remove_all(dir);
}

TEST(Commands, ValidationPrecedesOutput) {
  const auto dir = scratch("validate");
  cli::TrainArgs a;
  a.run = tiny_run(1);
  a.data = dir / "missing";
  a.out = dir / "out" / "m.ckpt";
  std::ostringstream log;
  EXPECT_THROW(cli::train(a, log), cli::UsageError);
  EXPECT_FALSE(fs::exists(dir / "out"));

  data::SyntheticSetOptions o;
  o.count = 2;
  o.input_points = 64;
  data::write_dataset(dir / "small", "train", data::synthetic_dataset(o));
  a.data = dir / "small";
  EXPECT_THROW(cli::train(a, log), ContractError);
  EXPECT_FALSE(fs::exists(dir / "out"));

  cli::CompleteArgs c;
  c.checkpoint = dir / "none.ckpt";
  c.input = dir / "small" / "train" / "0000_sphere_partial.xyz";
  c.output = dir / "out" / "c.xyz";
  EXPECT_THROW(cli::complete(c), cli::UsageError);
  EXPECT_FALSE(fs::exists(dir / "out"));
  fs::remove_all(dir);
}

// A model whose offsets are still zero repeats P_0 at every stage.
TEST(Commands, CompleteWithFreshModelDuplicatesCoarse) {
  const auto dir = scratch("complete");
  const auto cfg = tiny_run(0).model;
  pipeline::CompletionModel model(cfg);
  pipeline::save_checkpoint(dir / "m.ckpt", model);
  data::SyntheticSetOptions o;
  o.count = 1;
  o.input_points = 128;
  const auto pair = data::synthetic_dataset(o).front();
  data::write_xyz(dir / "in.xyz", pair.partial);

  cli::CompleteArgs c{dir / "m.ckpt", dir / "in.xyz", dir / "out.ply", dir / "stages",
                      dir / "seeds.xyz"};
  cli::complete(c);
  const auto coarse = data::read_xyz(dir / "stages" / "coarse.xyz");
  const auto out = data::read_ply(dir / "out.ply");
  const auto sizes = cfg.stage_sizes();
  ASSERT_EQ(out.size(), sizes.back());
  const std::size_t repeat = sizes.back() / sizes.front();
  for (std::size_t i = 0; i < out.size(); ++i) EXPECT_EQ(out[i], coarse[i / repeat]);
  EXPECT_EQ(data::read_xyz(dir / "seeds.xyz").size(), cfg.seed_count());
  const auto table = slurp(dir / "seeds_provenance.csv");
  EXPECT_EQ(std::count(table.begin(), table.end(), '\n'),
            static_cast<long>(cfg.seed_count() + 1));
  EXPECT_TRUE(fs::exists(dir / "out.config.txt"));
  fs::remove_all(dir);
}

TEST(Commands, EvalGroundTruthFixture) {
  const auto dir = scratch("eval");
  data::SyntheticSetOptions o;
  o.count = 3;
  const auto pairs = data::synthetic_dataset(o);
  data::write_dataset(dir / "data", "test", pairs);
  fs::create_directories(dir / "pred");
  for (const auto& p : pairs) data::write_xyz(dir / "pred" / (p.id + ".xyz"), p.gt);

  cli::EvalArgs a;
  a.predictions = dir / "pred";
  a.data = dir / "data";
  a.mmd_library = dir / "pred";
  a.out = dir / "report" / "t.csv";
  const auto t = cli::evaluate(a);
  EXPECT_EQ(t.header, (std::vector<std::string>{"id", "cd_l1_x1000", "cd_l2_x1000", "fscore",
                                                "fidelity", "mmd_x1000"}));
  ASSERT_EQ(t.rows.size(), 3u);
  EXPECT_EQ(t.mean.values[0], 0.0);
  EXPECT_EQ(t.mean.values[1], 0.0);
  EXPECT_EQ(t.mean.values[2], 1.0);
  EXPECT_EQ(t.mean.values[4], 0.0);
  EXPECT_TRUE(fs::exists(dir / "report" / "t.config.txt"));
  std::ostringstream os;
  cli::write_eval_table(os, t);
  EXPECT_EQ(os.str(), slurp(a.out));

  a.checkpoint = dir / "m.ckpt";
  EXPECT_THROW(cli::evaluate(a), cli::UsageError);
  fs::remove_all(dir);
}

TEST(Commands, MetricNames) {
  EXPECT_EQ(cli::parse_metrics("fscore,cd-l1"),
            (std::vector<cli::Metric>{cli::Metric::kFScore, cli::Metric::kCdL1}));
  EXPECT_THROW(cli::parse_metrics("emd"), cli::UsageError);
}

TEST(Commands, GradcheckSelectsCases) {
  std::ostringstream os;
  EXPECT_TRUE(cli::gradcheck({"chamfer.l2", 1e-4}, os));
  EXPECT_EQ(os.str().substr(0, 10), "chamfer.l2");
  EXPECT_THROW(cli::gradcheck({"nope", 1e-4}, os), cli::UsageError);
  EXPECT_THROW(cli::gradcheck({"chamfer.l2", 0.0}, os), cli::UsageError);
}

}  // namespace
}  // namespace seedcomp
