// Copyright 2026 The skpk Authors.
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

#include <cmath>
#include <filesystem>
#include <fstream>
#include <functional>
#include <map>

#include <gtest/gtest.h>

#include "oracle.hpp"
#include "skpk/error.hpp"
#include "skpk/source_model.hpp"

namespace skpk {
namespace {

ErrorCode code_of(const std::function<void()>& fn) {
  try {
    fn();
  } catch (const Error& e) {
    return e.code();
  }
  ADD_FAILURE() << "no skpk::Error thrown";
  return ErrorCode::kInternalConsistency;
}

TEST(SourceModel, PointMassTable) {
  JointPmf3 pmf = make_joint_pmf({1, 1, 1}, {1.0});
  EXPECT_EQ(pmf.probs().size(), 1u);
  EXPECT_EQ(pmf(0, 0, 0), 1.0);
}

TEST(SourceModel, UniformTripleAccepted) {
  JointPmf3 pmf = make_joint_pmf({2, 2, 2}, std::vector<double>(8, 0.125));
  for (double p : pmf.probs()) EXPECT_EQ(p, 0.125);
}

TEST(SourceModel, RejectsBadSum) {
  std::vector<double> p(8, 0.125);
  p[0] -= 0.03;
  EXPECT_EQ(code_of([&] { make_joint_pmf({2, 2, 2}, p); }), ErrorCode::kBadSum);
}

TEST(SourceModel, RenormalizesTinyDeviation) {
  std::vector<double> p(8, 0.125);
  p[3] += 5e-10;
  JointPmf3 pmf = make_joint_pmf({2, 2, 2}, p);
  double total = 0;
  for (double v : pmf.probs()) total += v;
  EXPECT_NEAR(total, 1.0, 1e-12);
}

TEST(SourceModel, RejectsNegativeAndNonFinite) {
  std::vector<double> p(8, 0.125);
  p[0] = -0.125;
  p[1] = 0.375;
  EXPECT_EQ(code_of([&] { make_joint_pmf({2, 2, 2}, p); }), ErrorCode::kNegativeMass);
  p = std::vector<double>(8, 0.125);
  p[2] = std::nan("");
  EXPECT_EQ(code_of([&] { make_joint_pmf({2, 2, 2}, p); }), ErrorCode::kNegativeMass);
}

TEST(SourceModel, RejectsShapeMismatch) {
  EXPECT_EQ(code_of([] { make_joint_pmf({2, 2, 2}, std::vector<double>(7, 1.0 / 7)); }),
            ErrorCode::kShapeMismatch);
  EXPECT_EQ(code_of([] { make_joint_pmf({0, 2, 2}, {}); }), ErrorCode::kShapeMismatch);
}

TEST(SourceModel, XorTable) {
  JointPmf3 pmf = xor_source();
  EXPECT_EQ(pmf(0, 1, 1), 0.25);
  EXPECT_EQ(pmf(0, 1, 0), 0.0);
  double total = 0;
  for (double v : pmf.probs()) total += v;
  EXPECT_EQ(total, 1.0);
  // Marginal over Z is the independent uniform pair.
  for (Symbol x = 0; x < 2; ++x) {
    for (Symbol y = 0; y < 2; ++y) EXPECT_EQ(pmf(x, y, 0) + pmf(x, y, 1), 0.25);
  }
}

TEST(SourceModel, CascadePairwiseMarginal) {
  JointPmf3 pmf = cascade_bsc_source(0.25, 0.1);
  EXPECT_NEAR(pmf(0, 0, 0) + pmf(0, 0, 1), 0.375, 1e-15);
  EXPECT_NEAR(pmf(0, 1, 0) + pmf(0, 1, 1), 0.125, 1e-15);
  EXPECT_NEAR(pmf(1, 1, 1) + pmf(0, 1, 1) + pmf(1, 0, 1) + pmf(0, 0, 1), 0.5, 1e-15);
  // I(Y;Z|X) = 0 from the Markov factorization.
  EXPECT_NEAR(oracle::mi_bits(pmf, 2, 4, 1), 0.0, 1e-12);
}

TEST(SourceModel, CascadeSingleMarginalsUniform) {
  for (double p : {0.05, 0.2, 0.45}) {
    for (double q : {0.01, 0.3}) {
      JointPmf3 pmf = cascade_bsc_source(p, q);
      double mx = 0, my = 0, mz = 0;
      for (Symbol a = 0; a < 2; ++a) {
        for (Symbol b = 0; b < 2; ++b) {
          mx += pmf(0, a, b);
          my += pmf(a, 0, b);
          mz += pmf(a, b, 0);
        }
      }
      EXPECT_NEAR(mx, 0.5, 1e-15);
      EXPECT_NEAR(my, 0.5, 1e-15);
      EXPECT_NEAR(mz, 0.5, 1e-15);
    }
  }
}

TEST(SourceModel, CascadeZeroNoise) {
  JointPmf3 pmf = cascade_bsc_source(0, 0);
  EXPECT_EQ(pmf(0, 0, 0), 0.5);
  EXPECT_EQ(pmf(1, 1, 1), 0.5);
}

TEST(SourceModel, CascadeParamRange) {
  EXPECT_EQ(code_of([] { cascade_bsc_source(-0.1, 0.1); }), ErrorCode::kParamOutOfRange);
  EXPECT_EQ(code_of([] { cascade_bsc_source(0.2, 1.5); }), ErrorCode::kParamOutOfRange);
  EXPECT_NO_THROW(cascade_bsc_source(0.1, 0.25));
  EXPECT_TRUE(cascade_bsc_in_ordered_regime(0.25, 0.1));
  EXPECT_FALSE(cascade_bsc_in_ordered_regime(0.1, 0.25));
  EXPECT_FALSE(cascade_bsc_in_ordered_regime(0.5, 0.1));
  EXPECT_FALSE(cascade_bsc_in_ordered_regime(0.25, 0.0));
}

TEST(SourceModel, SamplePointMassIsConstant) {
  SampleBlock b = sample_iid(point_mass_source(), 50, 123);
  ASSERT_EQ(b.n(), 50u);
  for (std::size_t i = 0; i < 50; ++i) {
    EXPECT_EQ(b.xs[i], 0u);
    EXPECT_EQ(b.ys[i], 0u);
    EXPECT_EQ(b.zs[i], 0u);
  }
}

TEST(SourceModel, SampleDeterministic) {
  JointPmf3 pmf = cascade_bsc_source(0.25, 0.1);
  SampleBlock a = sample_iid(pmf, 1000, 42);
  SampleBlock b = sample_iid(pmf, 1000, 42);
  SampleBlock c = sample_iid(pmf, 1000, 43);
  EXPECT_EQ(a.xs, b.xs);
  EXPECT_EQ(a.ys, b.ys);
  EXPECT_EQ(a.zs, b.zs);
  EXPECT_NE(a.xs, c.xs);
  EXPECT_EQ(code_of([&] { sample_iid(pmf, 0, 1); }), ErrorCode::kParamOutOfRange);
}

TEST(SourceModel, SampleStaysOnSupport) {
  JointPmf3 pmf = xor_source();
  SampleBlock b = sample_iid(pmf, 5000, 9);
  for (std::size_t i = 0; i < b.n(); ++i) EXPECT_EQ(b.zs[i], b.xs[i] ^ b.ys[i]);
}

TEST(SourceModel, XorFrequenciesWithinThreeSigma) {
  const std::size_t n = 100000;
  const double sigma = std::sqrt(0.25 * 0.75 / n);
  for (std::uint64_t seed : {1u, 2u, 77u}) {
    SampleBlock b = sample_iid(xor_source(), n, seed);
    std::map<std::pair<Symbol, Symbol>, std::size_t> counts;
    for (std::size_t i = 0; i < n; ++i) ++counts[{b.xs[i], b.ys[i]}];
    ASSERT_EQ(counts.size(), 4u);
    for (const auto& [cell, k] : counts) {
      EXPECT_LE(std::abs(double(k) / n - 0.25), 3 * sigma) << "seed " << seed;
    }
  }
}

TEST(SourceModel, TotalVariationShrinks) {
  for (std::uint64_t seed : {3u, 4u}) {
    JointPmf3 pmf = random_pmf({3, 2, 3}, seed);
    for (std::size_t n : {10000u, 40000u}) {
      SampleBlock b = sample_iid(pmf, n, seed * 31 + n);
      std::vector<double> freq(pmf.probs().size(), 0.0);
      for (std::size_t i = 0; i < n; ++i) freq[pmf.index(b.xs[i], b.ys[i], b.zs[i])] += 1.0 / n;
      double tv = 0;
      for (std::size_t k = 0; k < freq.size(); ++k) tv += std::abs(freq[k] - pmf.probs()[k]);
      EXPECT_LE(tv / 2, 5.0 / std::sqrt(double(n)));
    }
  }
}

TEST(SourceModel, RandomPmfContract) {
  JointPmf3 one = random_pmf({1, 1, 1}, 99);
  EXPECT_EQ(one(0, 0, 0), 1.0);
  EXPECT_EQ(code_of([] { random_pmf({5, 1, 1}, 1); }), ErrorCode::kCardTooLarge);
  EXPECT_EQ(code_of([] { random_pmf({2, 0, 1}, 1); }), ErrorCode::kCardTooLarge);
  int distinct = 0;
  for (std::uint64_t s = 0; s < 100; ++s) {
    JointPmf3 a = random_pmf({2, 3, 2}, 2 * s + 1);
    JointPmf3 b = random_pmf({2, 3, 2}, 2 * s + 2);
    // Round trip through the validator.
    EXPECT_NO_THROW(make_joint_pmf(a.card(), {a.probs().begin(), a.probs().end()}));
    double gap = 0;
    for (std::size_t k = 0; k < a.probs().size(); ++k) {
      gap = std::max(gap, std::abs(a.probs()[k] - b.probs()[k]));
    }
    if (gap > 1e-6) ++distinct;
  }
  EXPECT_EQ(distinct, 100);
  JointPmf3 r1 = random_pmf({2, 2, 2}, 5);
  JointPmf3 r2 = random_pmf({2, 2, 2}, 5);
  EXPECT_TRUE(std::equal(r1.probs().begin(), r1.probs().end(), r2.probs().begin()));
}

TEST(SourceModel, ParseSourceSpec) {
  JointPmf3 x = parse_source_spec(R"({"type":"xor"})");
  EXPECT_EQ(x(1, 1, 0), 0.25);
  JointPmf3 c = parse_source_spec(R"({"type":"cascade_bsc","p":0.25,"q":0.1})");
  EXPECT_NEAR(c(0, 0, 0), 0.5 * 0.75 * 0.9, 1e-15);
  JointPmf3 t = parse_source_spec(R"({"type":"table","card":[1,2,1],"p":[0.3,0.7]})");
  EXPECT_EQ(t(0, 1, 0), 0.7);
  EXPECT_EQ(code_of([] { parse_source_spec(R"({"type":"xor","extra":1})"); }),
            ErrorCode::kParseError);
  EXPECT_EQ(code_of([] { parse_source_spec(R"({"type":"mystery"})"); }), ErrorCode::kParseError);
  EXPECT_EQ(code_of([] { parse_source_spec("not json"); }), ErrorCode::kParseError);
  EXPECT_EQ(code_of([] { parse_source_spec(R"({"type":"table","card":[2,2,2],"p":[1]})"); }),
            ErrorCode::kShapeMismatch);
}

TEST(SourceModel, InlineBuilders) {
  EXPECT_EQ(parse_inline_source("point_mass").probs().size(), 1u);
  EXPECT_EQ(parse_inline_source("xor")(0, 0, 0), 0.25);
  JointPmf3 c = parse_inline_source("cascade_bsc:0.3,0.05");
  EXPECT_NEAR(c(1, 1, 1), 0.5 * 0.7 * 0.95, 1e-15);
  EXPECT_EQ(code_of([] { parse_inline_source("cascade_bsc:0.3"); }), ErrorCode::kParseError);

  auto path = std::filesystem::temp_directory_path() / "skpk_test_table.json";
  {
    std::ofstream f(path);
    f << R"({"type":"table","card":[2,1,1],"p":[0.5,0.5]})";
  }
  JointPmf3 t = parse_inline_source("table@" + path.string());
  EXPECT_EQ(t(1, 0, 0), 0.5);
  std::filesystem::remove(path);
}

}  // namespace
}  // namespace skpk
