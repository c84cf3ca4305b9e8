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

#include "sisort/instance_model.h"

#include <gtest/gtest.h>

#include <set>

namespace sisort {
namespace {

PiecewiseLinearFunction Line(Rational y0, Rational y1) {
  return PiecewiseLinearFunction({{0, y0}, {1, y1}});
}

PiecewiseLinearFunction Tent() {
  return PiecewiseLinearFunction({{0, 0}, {Rational(1, 2), 1}, {1, 0}});
}

TEST(FunctionTest, RejectsBadVertices) {
  EXPECT_THROW(PiecewiseLinearFunction({{0, 0}}), std::invalid_argument);
  EXPECT_THROW(PiecewiseLinearFunction({{0, 0}, {0, 1}}),
               std::invalid_argument);
  EXPECT_THROW(PiecewiseLinearFunction({{1, 0}, {0, 1}}),
               std::invalid_argument);
}

TEST(FunctionTest, EvalInterpolatesAndIsExactAtVertices) {
  const PiecewiseLinearFunction f({{0, 0}, {1, 2}});
  EXPECT_EQ(eval_function(f, Rational(1, 2)), Rational(1));
  EXPECT_EQ(eval_function(f, Rational(1)), Rational(2));
  EXPECT_EQ(eval_function(Tent(), Rational(1, 2)), Rational(1));
  EXPECT_EQ(eval_function(Tent(), Rational(3, 4)), Rational(1, 2));
}

TEST(FunctionTest, EvalOutsideDomainThrows) {
  const PiecewiseLinearFunction f({{0, 0}, {1, 2}});
  EXPECT_THROW(eval_function(f, Rational(-1, 10)), DomainError);
  EXPECT_THROW(eval_function(f, Rational(11, 10)), DomainError);
  EXPECT_THROW(f.Eval(1.5), DomainError);
}

TEST(FunctionTest, DoubleEvalMatchesExactAndIsMonotone) {
  const PiecewiseLinearFunction f({{0, 3}, {Rational(1, 3), -1}, {1, 7}});
  for (int i = 0; i <= 12; ++i) {
    const Rational z(i, 12);
    EXPECT_NEAR(f.Eval(ToDouble(z)), ToDouble(f.Eval(z)), 1e-12);
  }
  double prev = f.Eval(0.34);
  for (double z = 0.35; z <= 1.0; z += 0.01) {
    const double v = f.Eval(z);
    EXPECT_GE(v, prev);
    prev = v;
  }
}

TEST(FunctionTest, ExtremumCounts) {
  EXPECT_EQ(Line(0, 1).ExtremumCount(), 0);
  EXPECT_EQ(Tent().ExtremumCount(), 1);
  const PiecewiseLinearFunction zigzag(
      {{0, 0}, {Rational(1, 4), 1}, {Rational(1, 2), 0}, {Rational(3, 4), 1},
       {1, 0}});
  EXPECT_EQ(zigzag.ExtremumCount(), 3);
  // A plateau between a rise and a fall is one extremum.
  const PiecewiseLinearFunction plateau(
      {{0, 0}, {Rational(1, 3), 1}, {Rational(2, 3), 1}, {1, 0}});
  EXPECT_EQ(plateau.ExtremumCount(), 1);
}

TEST(FunctionTest, IntersectionsExact) {
  bool coincident = true;
  EXPECT_EQ(CountIntersections(Line(0, 1), Line(1, 0), &coincident), 1);
  EXPECT_FALSE(coincident);
  EXPECT_EQ(CountIntersections(Line(0, 1), Line(2, 3), &coincident), 0);
  EXPECT_EQ(CountIntersections(Tent(), Line(Rational(1, 2), Rational(1, 2)),
                                &coincident),
            2);
  CountIntersections(Line(0, 1), Line(0, 1), &coincident);
  EXPECT_TRUE(coincident);
}

TEST(FunctionTest, IntersectionsSymmetricAcrossBreakpointGrids) {
  const PiecewiseLinearFunction f(
      {{0, 0}, {Rational(1, 3), 3}, {Rational(2, 3), -1}, {1, 2}});
  const PiecewiseLinearFunction g({{0, 1}, {Rational(1, 2), 1}, {1, 1}});
  bool c1 = false, c2 = false;
  EXPECT_EQ(CountIntersections(f, g, &c1), CountIntersections(g, f, &c2));
  EXPECT_EQ(CountIntersections(f, g, &c1), 3);
}

World TwoLineWorld() {
  GroupModel g;
  g.id = 0;
  g.members = {0, 1};
  g.functions = {Line(0, 1), Line(1, 0)};
  g.source = HiddenSource::ContinuousUniform(0, 1);
  return World(2, 0, 1, 0, {g});
}

TEST(ValidateTest, CrossingLinesCountOneIntersection) {
  const ValidationReport report = validate_world(TwoLineWorld(), 0, 1);
  EXPECT_TRUE(report.ok());
  ASSERT_EQ(report.pairs.size(), 1u);
  EXPECT_EQ(report.pairs[0].intersections, 1);
  EXPECT_FALSE(validate_world(TwoLineWorld(), 0, 0).ok());
}

TEST(ValidateTest, TentHasOneExtremum) {
  GroupModel g;
  g.members = {0};
  g.functions = {Tent()};
  g.source = HiddenSource::ContinuousUniform(0, 1);
  const World world(1, 1, 0, 0, {g});
  const ValidationReport report = validate_world(world, 1, 0);
  EXPECT_TRUE(report.ok());
  EXPECT_EQ(report.functions[0].extrema, 1);
  EXPECT_FALSE(validate_world(world, 0, 0).ok());
}

TEST(ValidateTest, IdenticalFunctionsAreRejected) {
  GroupModel g;
  g.members = {0, 1};
  g.functions = {Line(0, 1), Line(0, 1)};
  g.source = HiddenSource::ContinuousUniform(0, 1);
  const World world(2, 0, 5, 0, {g});
  const ValidationReport report = validate_world(world, 0, 5);
  EXPECT_FALSE(report.ok());
  EXPECT_TRUE(report.pairs[0].coincident);
}

TEST(WorldTest, RejectsBrokenPartitions) {
  GroupModel a;
  a.members = {0};
  a.functions = {Line(0, 1)};
  a.source = HiddenSource::ContinuousUniform(0, 1);
  GroupModel b = a;
  EXPECT_THROW(World(2, 0, 0, 0, {a, b}), std::invalid_argument);
  EXPECT_THROW(World(2, 0, 0, 0, {a}), std::invalid_argument);
  GroupModel c = a;
  c.members = {1};
  c.functions.clear();
  EXPECT_THROW(World(2, 0, 0, 0, {a, c}), std::invalid_argument);
}

TEST(DrawTest, EvaluatesEachMember) {
  const World world = TwoLineWorld();
  Rng rng(3);
  for (int i = 0; i < 50; ++i) {
    const Instance inst = draw_instance(world, rng);
    ASSERT_EQ(inst.values.size(), 2u);
    ASSERT_EQ(inst.hidden.size(), 1u);
    EXPECT_DOUBLE_EQ(inst.values[0], inst.hidden[0]);
    EXPECT_DOUBLE_EQ(inst.values[1], 1.0 - inst.hidden[0]);
  }
}

TEST(DrawTest, QuarterGivesQuarterAndThreeQuarters) {
  GroupModel g;
  g.members = {0, 1};
  g.functions = {Line(0, 1), Line(1, 0)};
  g.source = HiddenSource::DiscreteUniform({Rational(1, 4)});
  const World world(2, 0, 1, 0, {g});
  Rng rng(1);
  const Instance inst = draw_instance(world, rng);
  EXPECT_EQ(inst.values, (std::vector<double>{0.25, 0.75}));
}

TEST(DrawTest, DiscreteSourceStaysOnItsAtoms) {
  GroupModel g;
  g.members = {0};
  g.functions = {Line(0, 1)};
  g.source = HiddenSource::DiscreteUniform({0, Rational(1, 2), 1});
  const World world(1, 0, 0, 0, {g});
  Rng rng(9);
  std::set<double> seen;
  for (int i = 0; i < 300; ++i) seen.insert(draw_instance(world, rng).values[0]);
  EXPECT_EQ(seen, (std::set<double>{0.0, 0.5, 1.0}));
}

TEST(DrawTest, SameSeedSameInstances) {
  const World world = generate_world(12, 3, 2, 2, 5);
  Rng a(77), b(77);
  for (int i = 0; i < 20; ++i) {
    EXPECT_EQ(draw_instance(world, a).values, draw_instance(world, b).values);
  }
}

TEST(DrawTest, GaussianStaysInSupport) {
  GroupModel g;
  g.members = {0};
  g.functions = {Line(0, 1)};
  g.source = HiddenSource::TruncatedGaussian(Rational(1, 2), Rational(1, 4),
                                             Rational(1, 4), Rational(3, 4));
  const World world(1, 0, 0, 0, {g});
  Rng rng(2);
  for (int i = 0; i < 1000; ++i) {
    const double v = draw_instance(world, rng).values[0];
    EXPECT_GE(v, 0.25);
    EXPECT_LE(v, 0.75);
  }
}

TEST(SourceTest, RejectsBadParameters) {
  EXPECT_THROW(HiddenSource::ContinuousUniform(1, 0), std::invalid_argument);
  EXPECT_THROW(HiddenSource::DiscreteUniform({}), std::invalid_argument);
  EXPECT_THROW(HiddenSource::DiscreteUniform({1, 1}), std::invalid_argument);
  EXPECT_THROW(HiddenSource::TruncatedGaussian(0, 0, 0, 1),
               std::invalid_argument);
}

TEST(GenerateTest, SingleElementIsMonotone) {
  const World world = generate_world(1, 1, 0, 0, 7);
  ASSERT_EQ(world.groups().size(), 1u);
  EXPECT_EQ(world.group(0).functions[0].ExtremumCount(), 0);
  EXPECT_TRUE(validate_world(world, 0, 0).ok());
}

TEST(GenerateTest, TwoGroupsOfTwo) {
  const World world = generate_world(4, 2, 1, 2, 1);
  ASSERT_EQ(world.groups().size(), 2u);
  std::size_t total = 0;
  for (const auto& g : world.groups()) total += g.members.size();
  EXPECT_EQ(total, 4u);
  EXPECT_TRUE(validate_world(world, 1, 2).ok());
}

TEST(GenerateTest, ValidatorAgreesAcrossParameterSweep) {
  int worlds = 0;
  for (std::size_t n : {1, 5, 16, 40}) {
    for (int mu = 0; mu <= 3; ++mu) {
      for (int sigma = 0; sigma <= 4; ++sigma) {
        for (SourceMode mode : {SourceMode::kMixed, SourceMode::kPointMass}) {
          GeneratorOptions opts;
          opts.source = mode;
          const std::size_t g = std::max<std::size_t>(1, n / 4);
          const World world = generate_world(n, g, mu, sigma,
                                             n * 100 + mu * 10 + sigma, opts);
          const ValidationReport report = validate_world(world, mu, sigma);
          EXPECT_TRUE(report.ok()) << n << " " << mu << " " << sigma;
          ++worlds;
        }
      }
    }
  }
  EXPECT_EQ(worlds, 160);
}

TEST(GenerateTest, DeterministicPerSeed) {
  EXPECT_EQ(generate_world(20, 4, 2, 3, 11), generate_world(20, 4, 2, 3, 11));
  EXPECT_FALSE(generate_world(20, 4, 2, 3, 11) ==
               generate_world(20, 4, 2, 3, 12));
}

TEST(GenerateTest, GroupsSortedAndAscending) {
  const World world = generate_world(30, 6, 1, 1, 4);
  for (std::size_t k = 0; k < world.groups().size(); ++k) {
    const auto& m = world.group(k).members;
    EXPECT_TRUE(std::is_sorted(m.begin(), m.end()));
    if (k > 0) EXPECT_LT(world.group(k - 1).members.front(), m.front());
    for (std::size_t e : m) EXPECT_EQ(world.group_of(e), k);
  }
}

TEST(GenerateTest, OverlappingFreeFunctionsWithoutSlackFail) {
  GeneratorOptions opts;
  opts.family = FunctionFamily::kFree;
  opts.attempt_budget = 2000;
  EXPECT_THROW(generate_world(12, 1, 0, 0, 3, opts), GenerationError);
}

TEST(GenerateTest, BadCountsThrow) {
  EXPECT_THROW(generate_world(3, 4, 0, 0, 1), std::invalid_argument);
  EXPECT_THROW(generate_world(3, 0, 0, 0, 1), std::invalid_argument);
  EXPECT_THROW(generate_world(3, 1, -1, 0, 1), std::invalid_argument);
}

TEST(GenerateTest, DiscreteAtomsGiveFewTuples) {
  GeneratorOptions opts;
  opts.source = SourceMode::kDiscreteUniform;
  opts.discrete_atoms = 5;
  const World world = generate_world(10, 2, 2, 2, 8, opts);
  Rng rng(4);
  std::set<std::vector<double>> tuples;
  for (int i = 0; i < 500; ++i) {
    tuples.insert(GroupValues(world, 0, draw_instance(world, rng)));
  }
  EXPECT_LE(tuples.size(), 5u);
}

TEST(GenerateTest, NamesRoundTrip) {
  for (SourceMode m :
       {SourceMode::kContinuousUniform, SourceMode::kTruncatedGaussian,
        SourceMode::kDiscreteUniform, SourceMode::kPointMass,
        SourceMode::kMixed}) {
    EXPECT_EQ(ParseSourceMode(SourceModeName(m)), m);
  }
  EXPECT_EQ(ParseFamily("free"), FunctionFamily::kFree);
  EXPECT_THROW(ParseSourceMode("bogus"), std::invalid_argument);
}

}  // namespace
}  // namespace sisort
