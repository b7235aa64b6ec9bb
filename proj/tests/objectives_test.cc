// Copyright 2026 The hyperloc Authors.
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

#include "hyperloc/objectives.h"

#include <gtest/gtest.h>

#include <algorithm>
#include <cstdio>
#include <fstream>
#include <functional>
#include <random>

#include "hyperloc/error.h"

namespace hyperloc {
namespace {

TEST(OmEvalTest, Sum) {
  EXPECT_DOUBLE_EQ(OmEval(OrderedWeights::Custom({1, 1, 1}), {{3, 1, 2}}), 6);
}

TEST(OmEvalTest, Max) {
  EXPECT_DOUBLE_EQ(OmEval(OrderedWeights::Custom({1, 0, 0}), {{3, 1, 2}}), 3);
}

TEST(OmEvalTest, Centdian) {
  EXPECT_NEAR(OmEval(OrderedWeights::Centdian(3, 0.9), {{2, 5, 1}}), 7.7,
              1e-12);
}

TEST(OmEvalTest, LengthMismatch) {
  try {
    OmEval(OrderedWeights::Weber(2), {{1, 2, 3}});
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::kLengthMismatch);
  }
}

TEST(OmLpValueTest, MaxCase) {
  EXPECT_NEAR(OmLpValue(OrderedWeights::Custom({1, 0}), {{2, 5}}), 5, 1e-9);
}

TEST(OmLpValueTest, SumCase) {
  EXPECT_NEAR(OmLpValue(OrderedWeights::Custom({1, 1}), {{2, 5}}), 7, 1e-9);
}

std::vector<double> RandomMonotone(std::mt19937_64& rng, int n) {
  std::uniform_real_distribution<double> u(0.0, 2.0);
  std::vector<double> lambda(n);
  for (double& l : lambda) l = u(rng);
  std::sort(lambda.begin(), lambda.end(), std::greater<double>());
  if (n > 1 && rng() % 3 == 0) lambda.back() = 0.0;
  return lambda;
}

TEST(OmLpValueTest, MatchesOmEvalRandom) {
  std::mt19937_64 rng(2026);
  std::uniform_real_distribution<double> u(0.0, 10.0);
  for (int trial = 0; trial < 200; ++trial) {
    const int n = 1 + static_cast<int>(rng() % 8);
    const auto lambda = OrderedWeights::Custom(RandomMonotone(rng, n));
    std::vector<double> e(n);
    for (double& v : e) v = u(rng);
    if (trial % 5 == 0) e[0] = e[n - 1];  // ties
    EXPECT_NEAR(OmLpValue(lambda, e), OmEval(lambda, e), 1e-7);
  }
}

TEST(PresetTest, KCentrum) {
  EXPECT_EQ(OrderedWeights::Preset(OmPreset::kKCentrum, 4, 2).lambda(),
            (std::vector<double>{1, 1, 0, 0}));
}

TEST(PresetTest, Centdian) {
  EXPECT_EQ(OrderedWeights::Preset(OmPreset::kCentdian, 3, 0.9).lambda(),
            (std::vector<double>{1, 0.9, 0.9}));
}

TEST(PresetTest, WeberAndCenter) {
  EXPECT_EQ(OrderedWeights::Weber(2).lambda(), (std::vector<double>{1, 1}));
  EXPECT_EQ(OrderedWeights::Center(3).lambda(), (std::vector<double>{1, 0, 0}));
}

TEST(PresetTest, BadParameters) {
  for (auto make : std::vector<std::function<void()>>{
           [] { OrderedWeights::KCentrum(4, 0); },
           [] { OrderedWeights::KCentrum(4, 5); },
           [] { OrderedWeights::Centdian(4, 1.0); },
           [] { OrderedWeights::Centdian(4, 0.0); },
           [] { OrderedWeights::Preset(OmPreset::kKCentrum, 4, 1.5); }}) {
    try {
      make();
      FAIL();
    } catch (const Error& e) {
      EXPECT_EQ(e.code(), ErrorCode::kBadParam);
    }
  }
}

TEST(OrderedWeightsTest, NonMonotoneRejectedDistinctly) {
  try {
    OrderedWeights::Custom({0.5, 1.0});
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::kNonMonotoneWeights);
  }
  try {
    OrderedWeights::Custom({1.0, -1.0});
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::kBadParam);
  }
}

TEST(OrderedWeightsTest, StepsReconstructOm) {
  std::mt19937_64 rng(8);
  std::uniform_real_distribution<double> u(0.0, 4.0);
  for (int trial = 0; trial < 100; ++trial) {
    const int n = 1 + static_cast<int>(rng() % 9);
    const auto lambda = OrderedWeights::Custom(RandomMonotone(rng, n));
    std::vector<double> e(n);
    for (double& v : e) v = u(rng);
    std::vector<double> sorted = e;
    std::sort(sorted.begin(), sorted.end(), std::greater<double>());
    double via_steps = 0.0;
    for (const auto& [k, inc] : lambda.Steps()) {
      double top = 0.0;
      for (int t = 0; t < k; ++t) top += sorted[t];
      via_steps += inc * top;
    }
    EXPECT_NEAR(via_steps, OmEval(lambda, e), 1e-9);
  }
}

TEST(OmEvalPropertyTest, MonotoneSublinearPermutationInvariant) {
  std::mt19937_64 rng(99);
  std::uniform_real_distribution<double> u(0.0, 5.0);
  for (int trial = 0; trial < 300; ++trial) {
    const int n = 1 + static_cast<int>(rng() % 8);
    const auto lambda = OrderedWeights::Custom(RandomMonotone(rng, n));
    std::vector<double> e(n), t(n), bigger(n), sum(n);
    for (int i = 0; i < n; ++i) {
      e[i] = u(rng);
      t[i] = u(rng);
      bigger[i] = e[i] + (rng() % 2 ? u(rng) : 0.0);
      sum[i] = e[i] + t[i];
    }
    EXPECT_LE(OmEval(lambda, e), OmEval(lambda, bigger) + 1e-12);
    EXPECT_LE(OmEval(lambda, sum),
              OmEval(lambda, e) + OmEval(lambda, t) + 1e-12);
    std::vector<double> shuffled = e;
    std::shuffle(shuffled.begin(), shuffled.end(), rng);
    EXPECT_NEAR(OmEval(lambda, shuffled), OmEval(lambda, e), 1e-12);
  }
}

TEST(ParseOmSpecTest, Forms) {
  EXPECT_EQ(ParseOmSpec("weber", 3).preset(), OmPreset::kWeber);
  EXPECT_EQ(ParseOmSpec("center", 3).lambda(), (std::vector<double>{1, 0, 0}));
  EXPECT_EQ(ParseOmSpec("kcentrum:2", 3).lambda(),
            (std::vector<double>{1, 1, 0}));
  EXPECT_EQ(ParseOmSpec("centdian:0.5", 3).lambda(),
            (std::vector<double>{1, 0.5, 0.5}));
  EXPECT_EQ(ParseOmSpec("kcentrum:2", 3).Label(), "kcentrum:2");
  EXPECT_THROW(ParseOmSpec("median", 3), Error);
  EXPECT_THROW(ParseOmSpec("kcentrum:x", 3), Error);
}

TEST(ParseOmSpecTest, File) {
  const std::string path = ::testing::TempDir() + "/weights.txt";
  {
    std::ofstream out(path);
    out << "2\n1.5\n\n1\n";
  }
  const auto w = ParseOmSpec("file:" + path, 3);
  EXPECT_EQ(w.lambda(), (std::vector<double>{2, 1.5, 1}));
  EXPECT_EQ(w.preset(), OmPreset::kCustom);
  try {
    ParseOmSpec("file:" + path, 4);
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::kLengthMismatch);
  }
  std::remove(path.c_str());
}

}  // namespace
}  // namespace hyperloc
