/*
 * Licensed under the Apache License, Version 2.0 (the "License");
 * you may not use this file except in compliance with the License.
 * You may obtain a copy of the License at
 *
 * http://www.apache.org/licenses/LICENSE-2.0
 *
 * Unless required by applicable law or agreed to in writing, software
 * distributed under the License is distributed on an "AS IS" BASIS,
 * WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
 * See the License for the specific language governing permissions and
 * limitations under the License.
 */

#include "sisort/partition_learning.h"

#include <gtest/gtest.h>

#include <cmath>

#include "sisort/instance_model.h"
#include "sisort/monotone_partition.h"

namespace sisort {
namespace {

SampleMatrix Draw(const World& world, std::size_t rows, std::uint64_t seed) {
  SampleMatrix m(rows, world.n());
  Rng rng(seed);
  for (std::size_t r = 0; r < rows; ++r) {
    m.SetRow(r, draw_instance(world, rng).values);
  }
  return m;
}

std::vector<std::vector<std::size_t>> Truth(const World& world) {
  std::vector<std::vector<std::size_t>> t;
  for (const auto& g : world.groups()) t.push_back(g.members);
  return t;
}

TEST(SampleMatrixTest, RowSizeChecked) {
  SampleMatrix m(2, 3);
  EXPECT_THROW(m.SetRow(0, {1.0, 2.0}), std::invalid_argument);
  m.SetRow(1, {1.0, 2.0, 3.0});
  EXPECT_EQ(m.at(1, 2), 3.0);
}

TEST(SameGroupStatisticTest, IdenticalColumnsGiveOne) {
  SampleMatrix m(30, 2);
  Rng rng(1);
  for (std::size_t r = 0; r < 30; ++r) {
    const double z = rng.Uniform01();
    m.SetRow(r, {z, z});
  }
  EXPECT_EQ(same_group_statistic(m, 0, 1), 1);
}

TEST(SameGroupStatisticTest, LineAgainstParabolaWithinThree) {
  // f_i(z) = z, f_j(z) = (z - 1/2)^2, mu = 1.
  Rng rng(2);
  for (int trial = 0; trial < 50; ++trial) {
    SampleMatrix m(16, 2);
    for (std::size_t r = 0; r < 16; ++r) {
      const double z = rng.Uniform01();
      m.SetRow(r, {z, (z - 0.5) * (z - 0.5)});
    }
    EXPECT_LE(same_group_statistic(m, 0, 1), 3);
  }
}

TEST(SameGroupStatisticTest, RejectsBadColumns) {
  SampleMatrix m(4, 2);
  EXPECT_THROW(same_group_statistic(m, 0, 0), std::invalid_argument);
  EXPECT_THROW(same_group_statistic(m, 0, 2), std::invalid_argument);
}

TEST(SameGroupStatisticTest, TiesInSortColumnKeepRowOrder) {
  SampleMatrix m(4, 2);
  m.SetRow(0, {1.0, 4.0});
  m.SetRow(1, {1.0, 1.0});
  m.SetRow(2, {1.0, 3.0});
  m.SetRow(3, {1.0, 2.0});
  // Column 1 read in row order: 4, 1, 3, 2.
  EXPECT_EQ(same_group_statistic(m, 0, 1),
            monotone_partition_size(std::vector<double>{4, 1, 3, 2}));
}

TEST(SameGroupStatisticTest, SameGroupPairsStayWithinBound) {
  for (int mu = 0; mu <= 3; ++mu) {
    for (std::uint64_t seed = 1; seed <= 5; ++seed) {
      GeneratorOptions opts;
      opts.source = SourceMode::kContinuousUniform;
      const World world = generate_world(6, 1, mu, 3, seed, opts);
      const SampleMatrix m = Draw(world, PartitionSampleCount(mu), seed);
      for (std::size_t i = 0; i < 6; ++i) {
        for (std::size_t j = 0; j < 6; ++j) {
          if (i == j) continue;
          EXPECT_TRUE(same_group_within(m, i, j, SameGroupThreshold(mu)));
        }
      }
    }
  }
}

TEST(PartitionLearningTest, SampleCountFloor) {
  EXPECT_EQ(PartitionSampleCount(0), 128u);
  EXPECT_EQ(PartitionSampleCount(2), 128u);
  EXPECT_EQ(PartitionSampleCount(4), 256u);
  EXPECT_EQ(PartitionSampleCount(2, 1), 16u);
  EXPECT_EQ(SameGroupThreshold(3), 7);
}

TEST(PartitionLearningTest, SingleGroupWorld) {
  GeneratorOptions opts;
  opts.source = SourceMode::kContinuousUniform;
  const World world = generate_world(8, 1, 2, 2, 3, opts);
  const PartitionResult result =
      learn_partition(Draw(world, PartitionSampleCount(2), 4), 2);
  EXPECT_EQ(result.groups, Truth(world));
}

TEST(PartitionLearningTest, ConstantFunctionsOfOneHiddenValue) {
  SampleMatrix m(128, 5);
  for (std::size_t r = 0; r < 128; ++r) m.SetRow(r, {1, 2, 3, 4, 5});
  const PartitionResult result = learn_partition(m, 1);
  ASSERT_EQ(result.groups.size(), 1u);
  EXPECT_EQ(result.groups[0].size(), 5u);
}

TEST(PartitionLearningTest, IndependentPairsSplitAtMuTwo) {
  int split = 0;
  const int trials = 100;
  for (int t = 0; t < trials; ++t) {
    GeneratorOptions opts;
    opts.source = SourceMode::kContinuousUniform;
    const World world = generate_world(2, 2, 2, 0, 1000 + t, opts);
    const PartitionResult result =
        learn_partition(Draw(world, PartitionSampleCount(2), t), 2);
    if (result.groups.size() == 2) ++split;
  }
  EXPECT_GE(split, 95);
}

TEST(PartitionLearningTest, RecoversMultiGroupWorlds) {
  int recovered = 0;
  for (std::uint64_t seed = 1; seed <= 10; ++seed) {
    GeneratorOptions opts;
    opts.source = SourceMode::kContinuousUniform;
    const int mu = static_cast<int>(seed % 4);
    const World world = generate_world(12, 4, mu, 2, seed, opts);
    const PartitionResult result =
        learn_partition(Draw(world, PartitionSampleCount(mu), seed), mu);
    if (result.groups == Truth(world)) ++recovered;
    EXPECT_EQ(result.n(), 12u);
  }
  EXPECT_GE(recovered, 9);
}

TEST(PartitionLearningTest, RecordedStatisticsAreSymmetricAndCapped) {
  GeneratorOptions opts;
  opts.source = SourceMode::kContinuousUniform;
  const World world = generate_world(6, 3, 1, 1, 9, opts);
  PartitionLearningOptions popts;
  popts.record_statistics = true;
  const PartitionResult result =
      learn_partition(Draw(world, PartitionSampleCount(1), 9), 1, popts);
  for (std::size_t i = 0; i < 6; ++i) {
    for (std::size_t j = 0; j < 6; ++j) {
      const int s = result.pairwise_statistic[i * 6 + j];
      EXPECT_EQ(s, result.pairwise_statistic[j * 6 + i]);
      if (i != j) {
        EXPECT_GE(s, 1);
        EXPECT_LE(s, 4);
        EXPECT_EQ(result.pair_decision[i * 6 + j], s <= 3 ? 1 : 0);
      }
    }
  }
}

TEST(PartitionLearningTest, OutputIsAlwaysAPartition) {
  Rng rng(12);
  for (int t = 0; t < 20; ++t) {
    SampleMatrix m(20, 7);
    for (std::size_t r = 0; r < 20; ++r) {
      std::vector<double> row(7);
      for (double& v : row) v = static_cast<double>(rng.Below(4));
      m.SetRow(r, row);
    }
    const PartitionResult result = learn_partition(m, 0);
    std::vector<int> seen(7, 0);
    for (const auto& g : result.groups) {
      for (std::size_t e : g) ++seen[e];
    }
    for (int s : seen) EXPECT_EQ(s, 1);
  }
}

}  // namespace
}  // namespace sisort
