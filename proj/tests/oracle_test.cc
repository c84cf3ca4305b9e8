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

#include "sisort/oracle.h"

#include <gtest/gtest.h>

#include "sisort/po_model.h"

namespace sisort {
namespace {

using Seq = std::vector<double>;

TEST(ReferenceSortTest, Examples) {
  EXPECT_EQ(oracle::reference_sort(Seq{3, 1, 2}),
            (std::vector<std::size_t>{3, 1, 2}));
  EXPECT_TRUE(oracle::reference_sort(Seq{}).empty());
  EXPECT_EQ(oracle::reference_sort(Seq{5, 5}),
            (std::vector<std::size_t>{1, 2}));
  EXPECT_EQ(oracle::reference_sort(Seq{2, 1, 2, 1}),
            (std::vector<std::size_t>{3, 1, 4, 2}));
}

TEST(ExhaustivePartitionTest, Examples) {
  EXPECT_EQ(oracle::exhaustive_monotone_partition(Seq{2, 1, 3}), 2);
  EXPECT_EQ(oracle::exhaustive_monotone_partition(Seq{3, 1, 4, 2}), 2);
  EXPECT_EQ(oracle::exhaustive_monotone_partition(Seq{1, 2, 5, 9}), 1);
  EXPECT_EQ(oracle::exhaustive_monotone_partition(Seq{9, 5, 5, 1}), 1);
  EXPECT_EQ(oracle::exhaustive_monotone_partition(Seq{}), 0);
}

TEST(ExhaustivePartitionTest, KnownHardCase) {
  // Three interleaved decreasing runs, no two of which merge.
  EXPECT_EQ(oracle::exhaustive_monotone_partition(
                Seq{3, 6, 9, 2, 5, 8, 1, 4, 7}),
            3);
}

TEST(ExhaustivePartitionTest, CapEnforced) {
  EXPECT_THROW(oracle::exhaustive_monotone_partition(Seq(13, 1.0)),
               oracle::CapExceeded);
  EXPECT_THROW(oracle::exhaustive_monotone_partition(Seq(5, 1.0), 4),
               oracle::CapExceeded);
}

GroupModel LineGroup(std::vector<Rational> atoms) {
  GroupModel g;
  g.members = {0, 1};
  g.functions = {PiecewiseLinearFunction({{0, 0}, {1, 1}}),
                 PiecewiseLinearFunction({{0, 1}, {1, 0}})};
  g.source = HiddenSource::DiscreteUniform(std::move(atoms));
  return g;
}

TEST(EnumerateOutcomesTest, PointMassHasOneOutcome) {
  const World world(2, 0, 1, 0, {LineGroup({Rational(1, 4)})});
  const VList v({0.5, 0.6});
  const auto dist = oracle::enumerate_outcomes(world, 0, v);
  ASSERT_EQ(dist.outcomes.size(), 1u);
  EXPECT_DOUBLE_EQ(dist.outcomes[0].p(), 1.0);
  // 0.25 in bucket 0, 0.75 in bucket 2.
  EXPECT_EQ(dist.outcomes[0].outcome,
            (PoVector{PoRef::Landmark(0), PoRef::Landmark(2)}));
}

TEST(EnumerateOutcomesTest, DistinctOutcomesAreUniform) {
  const World world(2, 0, 1, 0,
                    {LineGroup({Rational(1, 10), Rational(1, 2),
                                Rational(9, 10)})});
  const VList v({0.3, 0.7});
  const auto dist = oracle::enumerate_outcomes(world, 0, v);
  ASSERT_EQ(dist.outcomes.size(), 3u);
  for (const auto& o : dist.outcomes) EXPECT_EQ(o.weight, 1u);
  EXPECT_TRUE(dist.within_bound());
  EXPECT_EQ(dist.bound, 2u * 2u * 1u + 4u * 1u);
}

TEST(EnumerateOutcomesTest, CollidingAtomsMerge) {
  // Atoms 0.1 and 0.2 put both elements in the same buckets in the same
  // order, so they collide.
  const World world(2, 0, 1, 0,
                    {LineGroup({Rational(1, 10), Rational(1, 5),
                                Rational(9, 10)})});
  const VList v({0.3, 0.7});
  const auto dist = oracle::enumerate_outcomes(world, 0, v);
  ASSERT_EQ(dist.outcomes.size(), 2u);
  std::uint64_t total = 0;
  for (const auto& o : dist.outcomes) total += o.weight;
  EXPECT_EQ(total, 3u);
}

TEST(EnumerateOutcomesTest, NaiveEncodingMatchesEncoder) {
  const World world = generate_world(9, 2, 2, 2, 4, [] {
    GeneratorOptions o;
    o.source = SourceMode::kDiscreteUniform;
    o.discrete_atoms = 30;
    return o;
  }());
  std::vector<double> landmarks;
  for (int i = 1; i <= 9; ++i) landmarks.push_back(i * 3.0 - 10.0);
  const VList v(landmarks);
  for (std::size_t k = 0; k < world.groups().size(); ++k) {
    std::map<PoVector, std::uint64_t> fast;
    for (std::size_t a = 0; a < world.group(k).source.atoms.size(); ++a) {
      ++fast[encode_po(world.AtomValues(k, a), v)];
    }
    const auto dist = oracle::enumerate_outcomes(world, k, v);
    ASSERT_EQ(dist.outcomes.size(), fast.size());
    for (const auto& o : dist.outcomes) EXPECT_EQ(fast.at(o.outcome), o.weight);
  }
}

TEST(EnumerateOutcomesTest, ContinuousSourceRejected) {
  GroupModel g = LineGroup({0});
  g.source = HiddenSource::ContinuousUniform(0, 1);
  const World world(2, 0, 1, 0, {g});
  EXPECT_THROW(oracle::enumerate_outcomes(world, 0, VList({0.5, 0.6})),
               std::invalid_argument);
  oracle::OracleConfig tight;
  tight.enumeration_budget = 1;
  const World two(2, 0, 1, 0, {LineGroup({0, 1})});
  EXPECT_THROW(oracle::enumerate_outcomes(two, 0, VList({0.5, 0.6}), tight),
               oracle::CapExceeded);
}

}  // namespace
}  // namespace sisort
