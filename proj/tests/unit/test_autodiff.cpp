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

#include "seedcomp/autodiff/gradcheck.hpp"
#include "seedcomp/autodiff/ops.hpp"
#include "seedcomp/autodiff/tape.hpp"
#include "seedcomp/core/errors.hpp"
#include "test_support.hpp"

namespace seedcomp {
namespace {

using ad::Tensor;
using testing::away_from_zero;
using testing::random_tensor;

std::vector<double> vec(std::span<const double> s) { return {s.begin(), s.end()}; }

TEST(Primitives, SoftmaxOfUniformLogits) {
  auto y = ad::softmax_last(Tensor::from({3}, {0, 0, 0}));
  for (double v : y.values()) EXPECT_DOUBLE_EQ(v, 1.0 / 3.0);
}

TEST(Primitives, LinearIdentity) {
  auto x = Tensor::from({2, 3}, {1, 2, 3, 4, 5, 6});
  auto w = Tensor::from({3, 3}, {1, 0, 0, 0, 1, 0, 0, 0, 1});
  auto y = ad::linear(x, w, Tensor::zeros({3}));
  EXPECT_EQ(vec(y.values()), vec(x.values()));
  EXPECT_EQ(vec(ad::linear(x, w, {}).values()), vec(x.values()));
}

TEST(Primitives, GatherRows) {
  auto x = Tensor::from({3, 2}, {1, 2, 3, 4, 5, 6});
  const std::vector<std::size_t> idx{2, 0};
  auto y = ad::gather_rows(x, idx);
  EXPECT_EQ(y.shape(), (ad::Shape{2, 2}));
  EXPECT_EQ(vec(y.values()), (std::vector<double>{5, 6, 1, 2}));
}

TEST(Primitives, ShapeAndIndexErrors) {
  auto a = Tensor::zeros({2, 3});
  auto b = Tensor::zeros({3, 2});
  EXPECT_THROW(ad::add(a, b), ShapeError);
  EXPECT_THROW(ad::mul(a, Tensor::zeros({2})), ShapeError);
  EXPECT_THROW(ad::linear(a, Tensor::zeros({4, 2}), {}), ShapeError);
  EXPECT_THROW(ad::concat({a, b}, 0), ShapeError);
  EXPECT_THROW(ad::reshape(a, {5}), ShapeError);
  const std::vector<std::size_t> bad{0, 2};
  EXPECT_THROW(ad::gather_rows(a, bad), IndexError);
}

TEST(Primitives, NonFiniteValuesRaise) {
  auto x = Tensor::from({2}, {1e308, 1e308});
  EXPECT_THROW(ad::scale(x, 10.0), NumericsError);
}

TEST(Primitives, MaxAndSumOverAxis) {
  auto x = Tensor::from({2, 3}, {1, 5, 2, 7, 0, 7});
  EXPECT_EQ(vec(ad::max(x, 1).values()), (std::vector<double>{5, 7}));
  EXPECT_EQ(vec(ad::max(x, 0).values()), (std::vector<double>{7, 5, 7}));
  EXPECT_EQ(vec(ad::sum(x, 0).values()), (std::vector<double>{8, 5, 9}));
}

TEST(Primitives, MaxRoutesGradientToFirstMaximum) {
  auto x = Tensor::from({1, 3}, {2, 7, 7}, true);
  ad::backward(ad::sum(ad::max(x, 1)));
  EXPECT_EQ(vec(x.grad()), (std::vector<double>{0, 1, 0}));
}

TEST(Backward, SumOfSquares) {
  auto x = Tensor::from({3}, {1, 2, 3}, true);
  ad::backward(ad::sum(ad::mul(x, x)));
  EXPECT_EQ(vec(x.grad()), (std::vector<double>{2, 4, 6}));
}

TEST(Backward, Mean) {
  auto x = Tensor::from({4}, {1, -2, 3, 0.5}, true);
  ad::backward(ad::mean(x));
  for (double g : x.grad()) EXPECT_DOUBLE_EQ(g, 0.25);
}

TEST(Backward, NonScalarLossRejected) {
  auto x = Tensor::from({2}, {1, 2}, true);
  EXPECT_THROW(ad::backward(ad::scale(x, 2.0)), ContractError);
}

TEST(Backward, UnreachableLeafKeepsZeroGrad) {
  auto x = Tensor::from({2}, {1, 2}, true);
  auto unused = Tensor::from({2}, {3, 4}, true);
  ad::backward(ad::sum(x));
  for (double g : unused.grad()) EXPECT_EQ(g, 0.0);
}

TEST(Backward, LeafGradientsAccumulate) {
  auto x = Tensor::from({2}, {1, 2}, true);
  ad::backward(ad::sum(x));
  ad::backward(ad::sum(x));
  EXPECT_EQ(vec(x.grad()), (std::vector<double>{2, 2}));
  x.zero_grad();
  EXPECT_EQ(vec(x.grad()), (std::vector<double>{0, 0}));
}

TEST(Backward, SharedSubexpression) {
  auto x = Tensor::from({2}, {3, -1}, true);
  auto y = ad::add(x, x);
  ad::backward(ad::sum(ad::mul(y, x)));  // 2 x^2
  EXPECT_EQ(vec(x.grad()), (std::vector<double>{12, -4}));
}

TEST(Backward, Deterministic) {
  std::mt19937_64 rng(4);
  auto w = random_tensor(rng, {5, 4}, -1, 1, true);
  auto x = random_tensor(rng, {6, 4}, -1, 1);
  auto run = [&] {
    w.zero_grad();
    ad::backward(ad::sum(ad::softmax(ad::relu(ad::linear(x, w, {})), 0)));
    return vec(w.grad());
  };
  EXPECT_EQ(run(), run());
}

TEST(Tape, TopologicalOrder) {
  auto x = Tensor::from({2}, {1, 2}, true);
  auto a = ad::scale(x, 2.0);
  auto b = ad::mul(a, x);
  auto loss = ad::sum(ad::add(a, b));
  const auto tape = ad::Tape::record(loss);
  std::vector<const ad::Node*> seen;
  for (const auto* node : tape.order()) {
    for (const auto& in : node->inputs) {
      if (in->requires_grad) {
        EXPECT_NE(std::find(seen.begin(), seen.end(), in.get()), seen.end());
      }
    }
    seen.push_back(node);
  }
  EXPECT_EQ(seen.back(), loss.node().get());
}

TEST(Precision, SingleModeRoundsResults) {
  auto x = Tensor::from({1}, {0.1});
  {
    ad::PrecisionScope single(ad::Precision::kSingle);
    EXPECT_EQ(ad::scale(x, 1.0).values()[0], static_cast<double>(0.1f));
  }
  EXPECT_EQ(ad::scale(x, 1.0).values()[0], 0.1);
}

TEST(NoGrad, RecordsNothing) {
  auto x = Tensor::from({2}, {1, 2}, true);
  ad::NoGradGuard guard;
  auto y = ad::scale(x, 3.0);
  EXPECT_FALSE(y.requires_grad());
}

// Finite-difference checks of every primitive.

ad::GradCheckReport check(const ad::ScalarFn& fn, const std::vector<Tensor>& in) {
  return ad::grad_check(fn, in, {});
}

class PrimitiveGrad : public ::testing::TestWithParam<int> {};

TEST_P(PrimitiveGrad, MatchesFiniteDifferences) {
  std::mt19937_64 rng(100 + GetParam());
  auto a = away_from_zero(rng, {3, 4}, 1e-2);
  auto b = away_from_zero(rng, {3, 4}, 1e-2);
  auto w = random_tensor(rng, {5, 4}, -1, 1, true);
  auto bias = random_tensor(rng, {5}, -1, 1, true);
  auto r = random_tensor(rng, {3, 4}, -1, 1);
  auto proj = [&](const Tensor& t) { return ad::sum(ad::mul(t, r)); };
  const std::vector<std::size_t> idx{2, 0, 2, 1};
  auto r4 = random_tensor(rng, {4, 4}, -1, 1);

  std::vector<std::pair<const char*, ad::GradCheckReport>> reports;
  reports.push_back({"linear", check([&](const std::vector<Tensor>& x) {
                       return ad::sum(ad::linear(x[0], x[1], x[2]));
                     }, {a, w, bias})});
  reports.push_back({"relu", check([&](const auto& x) { return proj(ad::relu(x[0])); }, {a})});
  reports.push_back({"add", check([&](const auto& x) { return proj(ad::add(x[0], x[1])); }, {a, b})});
  reports.push_back({"sub", check([&](const auto& x) { return proj(ad::sub(x[0], x[1])); }, {a, b})});
  reports.push_back({"mul", check([&](const auto& x) { return proj(ad::mul(x[0], x[1])); }, {a, b})});
  reports.push_back({"scale", check([&](const auto& x) { return proj(ad::scale(x[0], -1.5)); }, {a})});
  reports.push_back({"add_scalar", check([&](const auto& x) { return proj(ad::add_scalar(x[0], 2.0)); }, {a})});
  reports.push_back({"mean", check([&](const auto& x) { return ad::mean(ad::mul(x[0], x[0])); }, {a})});
  reports.push_back({"sum_axis", check([&](const auto& x) {
                       return ad::sum(ad::mul(ad::sum(x[0], 0), ad::sum(x[0], 0)));
                     }, {a})});
  reports.push_back({"max_axis", check([&](const auto& x) {
                       return ad::sum(ad::mul(ad::max(x[0], 1), ad::max(x[0], 1)));
                     }, {a})});
  reports.push_back({"softmax", check([&](const auto& x) { return proj(ad::softmax(x[0], 0)); }, {a})});
  reports.push_back({"softmax_last", check([&](const auto& x) { return proj(ad::softmax_last(x[0])); }, {a})});
  reports.push_back({"log_softmax", check([&](const auto& x) { return proj(ad::log_softmax(x[0], 1)); }, {a})});
  reports.push_back({"concat", check([&](const auto& x) {
                       auto c = ad::concat({x[0], x[1]}, 1);
                       return ad::sum(ad::mul(c, c));
                     }, {a, b})});
  reports.push_back({"gather_rows", check([&](const auto& x) {
                       return ad::sum(ad::mul(ad::gather_rows(x[0], idx), r4));
                     }, {a})});
  reports.push_back({"reshape", check([&](const auto& x) {
                       return proj(ad::reshape(ad::reshape(x[0], {2, 6}), {3, 4}));
                     }, {a})});
  reports.push_back({"broadcast_last", check([&](const auto& x) {
                       return proj(ad::broadcast_last(ad::reshape(ad::sum(x[0], 1), {3, 1}), 4));
                     }, {a})});
  reports.push_back({"row_norm", check([&](const auto& x) {
                       return ad::sum(ad::mul(ad::row_norm(x[0]), ad::sum(r, 1)));
                     }, {a})});
  for (const auto& [name, rep] : reports) {
    EXPECT_TRUE(rep.passed()) << name << ": " << rep.summary();
    EXPECT_GT(rep.checked, 0u) << name;
  }
}

INSTANTIATE_TEST_SUITE_P(RandomInputs, PrimitiveGrad, ::testing::Range(0, 5));

TEST(GradCheck, ReluOnPositiveInputs) {
  std::mt19937_64 rng(8);
  auto x = random_tensor(rng, {10}, 0.1, 1.0, true);
  auto rep = ad::grad_check([](const auto& in) { return ad::sum(ad::relu(in[0])); }, {x});
  EXPECT_LT(rep.max_rel_error, 1e-6);
}

TEST(GradCheck, ConstantSoftmaxSum) {
  std::mt19937_64 rng(9);
  auto x = random_tensor(rng, {6}, -1, 1, true);
  // Scaled down so round-off in the unit-valued sum stays under the error floor.
  auto rep = ad::grad_check(
      [](const auto& in) { return ad::scale(ad::sum(ad::softmax_last(in[0])), 1e-2); }, {x});
  EXPECT_TRUE(rep.passed()) << rep.summary();
  for (double g : x.grad()) EXPECT_NEAR(g, 0.0, 1e-12);
}

TEST(GradCheck, DetectsWrongGradient) {
  // relu's kink at zero: the central difference sees slope 1/2.
  auto x = Tensor::from({1}, {0.0}, true);
  auto rep = ad::grad_check([](const auto& in) { return ad::sum(ad::relu(in[0])); }, {x});
  EXPECT_FALSE(rep.passed());
}

TEST(GradCheck, NonFiniteOutputRaises) {
  auto x = Tensor::from({1}, {1.0}, true);
  auto fn = [](const std::vector<Tensor>& in) {
    ad::NoGradGuard g;
    (void)in;
    return Tensor::scalar(std::numeric_limits<double>::quiet_NaN());
  };
  EXPECT_THROW(ad::grad_check(fn, {x}), NumericsError);
}

TEST(GradCheck, RelativeErrorFloor) {
  EXPECT_DOUBLE_EQ(ad::relative_error(1.0, 1.0), 0.0);
  EXPECT_DOUBLE_EQ(ad::relative_error(2.0, 1.0), 0.5);
  EXPECT_DOUBLE_EQ(ad::relative_error(0.0, 1e-12), 1e-4);
}

TEST(SoftmaxProperty, RowsNonnegativeAndSumToOne) {
  std::mt19937_64 rng(10);
  for (int t = 0; t < 20; ++t) {
    auto x = random_tensor(rng, {7, 9}, -30, 30);
    auto y = ad::softmax_last(x);
    for (std::size_t i = 0; i < 7; ++i) {
      double s = 0.0;
      for (std::size_t j = 0; j < 9; ++j) {
        EXPECT_GE(y.at(i, j), 0.0);
        s += y.at(i, j);
      }
      EXPECT_NEAR(s, 1.0, 1e-6);
    }
  }
}

}  // namespace
}  // namespace seedcomp
