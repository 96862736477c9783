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

#include <cmath>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include "seedcomp/autodiff/ops.hpp"
#include "seedcomp/autodiff/tape.hpp"
#include "seedcomp/core/errors.hpp"
#include "seedcomp/generator/attention.hpp"
#include "seedcomp/generator/decoder.hpp"
#include "seedcomp/generator/generators.hpp"
#include "attention_oracle.hpp"

namespace seedcomp {
namespace {

using generator::AttentionKind;
using generator::AttentionMode;
using generator::AttentionTrace;
using generator::GeneratorDims;
using generator::GeneratorInput;
using generator::GeneratorKind;
using generator::make_generator;

using testing::Row;
using testing::row;

struct Case {
  std::size_t n = 8, cq = 5, ck = 4, c = 4, cs = 3, rate = 2, k = 4;
  GeneratorDims dims() const { return {cq, ck, c, cs, rate, k}; }
};

GeneratorInput random_input(std::mt19937_64& rng, const Case& t) {
  GeneratorInput in;
  in.queries = testing::random_tensor(rng, {t.n, t.cq}, -1, 1);
  in.keys = testing::random_tensor(rng, {t.n, t.ck}, -1, 1);
  in.positions = testing::random_cloud(rng, t.n).to_tensor();
  if (t.cs) in.seed_features = testing::random_tensor(rng, {t.n, t.cs}, -1, 1);
  return in;
}


class UptransOracle : public ::testing::TestWithParam<std::pair<AttentionMode, std::size_t>> {};

TEST_P(UptransOracle, MatchesLoops) {
  const auto [mode, seed_channels] = GetParam();
  for (std::uint64_t trial = 0; trial < 5; ++trial) {
    Case t;
    t.cs = seed_channels;
    t.rate = 1 + trial % 3;
    std::mt19937_64 rng(100 + trial);
    nn::ParameterStore store(trial);
    auto gen = make_generator(GeneratorKind::kUpsampleTransformer, store, "g", t.dims(), mode);
    const auto in = random_input(rng, t);
    AttentionTrace trace;
    const auto out = gen->generate(in, &trace);
    const auto ref = testing::uptrans_oracle(store, "g", in, t.dims(), mode);
    ASSERT_EQ(out.shape(), (ad::Shape{t.n * t.rate, t.c}));
    for (std::size_t r = 0; r < t.n * t.rate; ++r) {
      for (std::size_t ch = 0; ch < t.c; ++ch) {
        EXPECT_NEAR(out.at(r, ch), ref.features[r][ch], 1e-9);
      }
    }
    ASSERT_EQ(trace.logits.size(), t.rate);
    for (std::size_t m = 0; m < t.rate; ++m) {
      for (std::size_t e = 0; e < t.n * t.k; ++e) {
        for (std::size_t ch = 0; ch < t.c; ++ch) {
          EXPECT_NEAR(trace.logits[m].values()[e * t.c + ch], ref.logits[m][e][ch], 1e-9);
        }
      }
    }
  }
}

INSTANTIATE_TEST_SUITE_P(
    Modes, UptransOracle,
    ::testing::Values(std::pair{AttentionMode::softmax(), std::size_t{3}},
                      std::pair{AttentionMode::none(), std::size_t{3}},
                      std::pair{AttentionMode::scaled(0.7), std::size_t{3}},
                      std::pair{AttentionMode::log(), std::size_t{3}},
                      std::pair{AttentionMode::softmax(), std::size_t{0}}));

TEST(Attention, SoftmaxWeightsSumToOne) {
  for (std::uint64_t trial = 0; trial < 10; ++trial) {
    Case t;
    t.n = 12;
    t.k = 6;
    t.rate = 3;
    std::mt19937_64 rng(trial);
    nn::ParameterStore store(trial + 50);
    auto gen = make_generator(GeneratorKind::kUpsampleTransformer, store, "g", t.dims(),
                              AttentionMode::softmax());
    AttentionTrace trace;
    gen->generate(random_input(rng, t), &trace);
    ASSERT_EQ(trace.weights.size(), t.rate);
    for (const auto& w : trace.weights) {
      ASSERT_EQ(w.shape(), (ad::Shape{t.n, t.k, t.c}));
      for (std::size_t i = 0; i < t.n; ++i) {
        for (std::size_t ch = 0; ch < t.c; ++ch) {
          double s = 0.0;
          for (std::size_t a = 0; a < t.k; ++a) s += w.values()[(i * t.k + a) * t.c + ch];
          EXPECT_NEAR(s, 1.0, 1e-6);
        }
      }
    }
  }
}

TEST(Attention, ScaledAtOneIsSoftmaxBitwise) {
  Case t;
  std::mt19937_64 rng(3);
  const auto in = random_input(rng, t);
  nn::ParameterStore a(9), b(9);
  auto ga = make_generator(GeneratorKind::kUpsampleTransformer, a, "g", t.dims(),
                           AttentionMode::softmax());
  auto gb = make_generator(GeneratorKind::kUpsampleTransformer, b, "g", t.dims(),
                           AttentionMode::scaled(1.0));
  AttentionTrace ta, tb;
  const auto oa = ga->generate(in, &ta);
  const auto ob = gb->generate(in, &tb);
  ASSERT_EQ(oa.numel(), ob.numel());
  for (std::size_t i = 0; i < oa.numel(); ++i) EXPECT_EQ(oa.values()[i], ob.values()[i]);
  for (std::size_t m = 0; m < t.rate; ++m) {
    for (std::size_t i = 0; i < ta.weights[m].numel(); ++i) {
      EXPECT_EQ(ta.weights[m].values()[i], tb.weights[m].values()[i]);
    }
  }
}

TEST(Attention, NoneModeWeightsAreLogits) {
  Case t;
  std::mt19937_64 rng(4);
  nn::ParameterStore store(4);
  auto gen = make_generator(GeneratorKind::kUpsampleTransformer, store, "g", t.dims(),
                            AttentionMode::none());
  AttentionTrace trace;
  gen->generate(random_input(rng, t), &trace);
  for (std::size_t m = 0; m < t.rate; ++m) {
    ASSERT_EQ(trace.weights[m].numel(), trace.logits[m].numel());
    for (std::size_t i = 0; i < trace.logits[m].numel(); ++i) {
      EXPECT_EQ(trace.weights[m].values()[i], trace.logits[m].values()[i]);
    }
  }
}

TEST(Attention, LogModeExponentiatesToDistribution) {
  Case t;
  std::mt19937_64 rng(5);
  nn::ParameterStore store(5);
  auto gen = make_generator(GeneratorKind::kUpsampleTransformer, store, "g", t.dims(),
                            AttentionMode::log());
  AttentionTrace trace;
  gen->generate(random_input(rng, t), &trace);
  for (const auto& w : trace.weights) {
    for (std::size_t i = 0; i < t.n; ++i) {
      for (std::size_t ch = 0; ch < t.c; ++ch) {
        double s = 0.0;
        for (std::size_t a = 0; a < t.k; ++a) {
          const double v = w.values()[(i * t.k + a) * t.c + ch];
          EXPECT_LE(v, 0.0);
          s += std::exp(v);
        }
        EXPECT_NEAR(s, 1.0, 1e-12);
      }
    }
  }
}

TEST(Attention, SingleNeighborGetsUnitWeight) {
  Case t;
  t.k = 1;
  std::mt19937_64 rng(6);
  nn::ParameterStore store(6);
  auto gen = make_generator(GeneratorKind::kUpsampleTransformer, store, "g", t.dims(),
                            AttentionMode::softmax());
  AttentionTrace trace;
  gen->generate(random_input(rng, t), &trace);
  for (std::size_t i = 0; i < t.n; ++i) EXPECT_EQ(trace.neighbors[i], i);
  for (const auto& w : trace.weights) {
    for (double v : w.values()) EXPECT_EQ(v, 1.0);
  }
}

TEST(Attention, ModeParsing) {
  EXPECT_EQ(AttentionMode::parse("softmax"), AttentionMode::softmax());
  EXPECT_EQ(AttentionMode::parse("scaled", 0.5).lambda, 0.5);
  EXPECT_EQ(AttentionMode::parse("log").name(), "log");
  EXPECT_THROW(AttentionMode::parse("sparsemax"), ContractError);
  EXPECT_THROW(AttentionMode::scaled(0.0), ContractError);
}

TEST(Attention, PointwiseWeightsAreScalarDistributions) {
  Case t;
  std::mt19937_64 rng(7);
  nn::ParameterStore store(7);
  auto gen =
      make_generator(GeneratorKind::kPointwise, store, "g", t.dims(), AttentionMode::softmax());
  AttentionTrace trace;
  gen->generate(random_input(rng, t), &trace);
  ASSERT_EQ(trace.weights.size(), t.rate);
  for (const auto& w : trace.weights) {
    ASSERT_EQ(w.shape(), (ad::Shape{t.n, t.k, 1}));
    for (std::size_t i = 0; i < t.n; ++i) {
      double s = 0.0;
      for (std::size_t a = 0; a < t.k; ++a) s += w.values()[i * t.k + a];
      EXPECT_NEAR(s, 1.0, 1e-12);
    }
  }
}

const GeneratorKind kAllKinds[] = {GeneratorKind::kUpsampleTransformer, GeneratorKind::kFolding,
                                   GeneratorKind::kDeconv, GeneratorKind::kGraphConv,
                                   GeneratorKind::kPointwise};

TEST(Generators, OutputShapes) {
  Case t;
  for (auto kind : kAllKinds) {
    std::mt19937_64 rng(8);
    nn::ParameterStore store(8);
    auto gen = make_generator(kind, store, "g", t.dims(), AttentionMode::softmax());
    const auto out = gen->generate(random_input(rng, t));
    EXPECT_EQ(out.shape(), (ad::Shape{t.n * t.rate, t.c})) << generator::generator_name(kind);
  }
}

TEST(Generators, NamesRoundTrip) {
  for (auto kind : kAllKinds) {
    EXPECT_EQ(generator::parse_generator(generator::generator_name(kind)), kind);
  }
  EXPECT_THROW(generator::parse_generator("transformer"), ContractError);
}

TEST(Generators, InputContract) {
  Case t;
  nn::ParameterStore store(1);
  auto gen = make_generator(GeneratorKind::kUpsampleTransformer, store, "g", t.dims(),
                            AttentionMode::softmax());
  std::mt19937_64 rng(1);
  auto in = random_input(rng, t);
  auto bad = in;
  bad.queries = testing::random_tensor(rng, {t.n, t.cq + 1}, -1, 1);
  EXPECT_THROW(gen->generate(bad), ShapeError);
  bad = in;
  bad.seed_features = ad::Tensor();
  EXPECT_THROW(gen->generate(bad), ShapeError);

  Case wide = t;
  wide.k = t.n + 1;
  nn::ParameterStore s2(1);
  auto greedy = make_generator(GeneratorKind::kUpsampleTransformer, s2, "g", wide.dims(),
                               AttentionMode::softmax());
  EXPECT_THROW(greedy->generate(in), ContractError);

  Case zero = t;
  zero.rate = 0;
  nn::ParameterStore s3(1);
  EXPECT_THROW(make_generator(GeneratorKind::kDeconv, s3, "g", zero.dims(),
                              AttentionMode::softmax()),
               ContractError);
}

TEST(Generators, GraphConvIdenticalFeaturesGiveIdenticalRows) {
  Case t;
  t.cs = 0;
  std::mt19937_64 rng(9);
  nn::ParameterStore store(9);
  auto gen =
      make_generator(GeneratorKind::kGraphConv, store, "g", t.dims(), AttentionMode::softmax());
  auto in = random_input(rng, t);
  in.queries = ad::Tensor::full({t.n, t.cq}, 0.3);
  in.keys = ad::Tensor::full({t.n, t.ck}, -0.2);
  const auto out = gen->generate(in);
  for (std::size_t i = 1; i < t.n; ++i) {
    for (std::size_t m = 0; m < t.rate; ++m) {
      EXPECT_EQ(row(out, i * t.rate + m), row(out, m));
    }
  }
}

TEST(Generators, FoldingGrid) {
  EXPECT_EQ(generator::FoldingGenerator::grid(1), (std::vector<double>{0.0, 0.0}));
  EXPECT_EQ(generator::FoldingGenerator::grid(4),
            (std::vector<double>{-0.2, -0.2, -0.2, 0.2, 0.2, -0.2, 0.2, 0.2}));
  const auto g2 = generator::FoldingGenerator::grid(2);
  ASSERT_EQ(g2.size(), 4u);
  EXPECT_NE(g2[1], g2[3]);
  const auto g8 = generator::FoldingGenerator::grid(8);
  for (std::size_t a = 0; a < 8; ++a) {
    for (std::size_t b = a + 1; b < 8; ++b) {
      EXPECT_FALSE(g8[2 * a] == g8[2 * b] && g8[2 * a + 1] == g8[2 * b + 1]);
    }
  }
}

// Every parameter should influence a generic loss; the final alpha bias of
// a softmax kernel is the exception, since softmax ignores per-channel shifts.
TEST(Generators, EveryParameterReceivesGradient) {
  for (auto kind : kAllKinds) {
    for (auto mode : {AttentionMode::none(), AttentionMode::softmax()}) {
      Case t;
      std::mt19937_64 rng(10);
      nn::ParameterStore store(10);
      auto gen = make_generator(kind, store, "g", t.dims(), mode);
      const auto out = gen->generate(random_input(rng, t));
      const auto w = testing::random_tensor(rng, out.shape(), -1, 1);
      ad::backward(ad::sum(ad::mul(out, w)));
      for (const auto& p : store.parameters()) {
        double g = 0.0;
        for (double v : p.tensor.grad()) g = std::max(g, std::abs(v));
        const bool attends = kind == GeneratorKind::kUpsampleTransformer ||
                             kind == GeneratorKind::kPointwise;
        const bool shift_free = attends && mode.kind == AttentionKind::kSoftmax &&
                                p.name.find(".alpha.") != std::string::npos &&
                                p.name.ends_with(".1.bias");
        if (shift_free) {
          EXPECT_LT(g, 1e-12) << p.name;
        } else {
          EXPECT_GT(g, 0.0) << generator::generator_name(kind) << ' ' << mode.name() << ' '
                            << p.name;
        }
      }
    }
  }
}

TEST(SeedProvenance, TableLayout) {
  const auto rows = generator::seed_provenance(3, 2);
  ASSERT_EQ(rows.size(), 6u);
  EXPECT_EQ(rows[5].seed_index, 5u);
  EXPECT_EQ(rows[5].patch_index, 2u);
  EXPECT_EQ(rows[5].kernel, 1u);
  std::ostringstream os;
  generator::write_seed_provenance(os, generator::seed_provenance(2, 2));
  EXPECT_EQ(os.str(),
            "seed_index,source_patch_index,kernel_m\n0,0,0\n1,0,1\n2,1,0\n3,1,1\n");
}

TEST(Decoder, SeedGeneratorShapes) {
  std::mt19937_64 rng(11);
  nn::ParameterStore store(11);
  generator::SeedGeneratorConfig cfg{8, 6, 3, 4, GeneratorKind::kUpsampleTransformer,
                                     AttentionMode::none()};
  generator::SeedGenerator seeds(store, "seed", cfg);
  encoder::PatchFeatures patches{testing::random_cloud(rng, 10),
                                 testing::random_tensor(rng, {10, 8}, -1, 1)};
  const auto s = seeds(patches);
  EXPECT_EQ(s.coords.shape(), (ad::Shape{30, 3}));
  EXPECT_EQ(s.features.shape(), (ad::Shape{30, 6}));
  patches.features = testing::random_tensor(rng, {10, 7}, -1, 1);
  EXPECT_THROW(seeds(patches), ShapeError);
}

// Offsets start at zero, so each layer initially copies every parent r times.
TEST(Decoder, ZeroOffsetsDuplicateParents) {
  std::mt19937_64 rng(12);
  nn::ParameterStore store(12);
  generator::SeedSet seeds{testing::random_cloud(rng, 12).to_tensor(),
                           testing::random_tensor(rng, {12, 5}, -1, 1)};
  generator::CoarseEmbedding embed(store, "embed", 6, 5, 3);
  const auto coarse = testing::random_cloud(rng, 10).to_tensor();
  auto state = embed(coarse, seeds);
  EXPECT_EQ(state.features.shape(), (ad::Shape{10, 6}));
  EXPECT_EQ(state.interpolated_seed_features.shape(), (ad::Shape{10, 5}));
  for (std::size_t rate : {1u, 2u, 4u}) {
    generator::UpsampleLayerConfig cfg;
    cfg.channels = 6;
    cfg.seed_channels = 5;
    cfg.rate = rate;
    cfg.k_attention = 4;
    cfg.k_interp = 3;
    generator::UpsampleLayer layer(store, "stage" + std::to_string(rate), cfg);
    AttentionTrace trace;
    const auto next = layer(state, seeds, &trace);
    ASSERT_EQ(next.size(), state.size() * rate);
    EXPECT_EQ(next.rate, rate);
    EXPECT_EQ(next.features.shape(), (ad::Shape{state.size() * rate, 6}));
    for (std::size_t i = 0; i < next.size(); ++i) {
      EXPECT_EQ(row(next.cloud, i), row(state.cloud, i / rate));
    }
    EXPECT_EQ(trace.weights.size(), rate);
    state = next;
  }
}

}  // namespace
}  // namespace seedcomp
