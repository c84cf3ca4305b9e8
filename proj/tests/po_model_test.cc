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

#include "sisort/po_model.h"

#include <gtest/gtest.h>

#include <cmath>
#include <map>

#include "sisort/rng.h"

namespace sisort {
namespace {

using Seq = std::vector<double>;
const PoRef V0 = PoRef::Landmark(0);
const PoRef V1 = PoRef::Landmark(1);
const PoRef X1 = PoRef::Element(0);

VList TenTwenty() { return VList({10, 20}); }

TEST(PoRefTest, TextForm) {
  EXPECT_EQ(FormatPoRef(PoRef::Landmark(3)), "V3");
  EXPECT_EQ(FormatPoRef(PoRef::Element(0)), "x1");
  EXPECT_EQ(ParsePoRef("x4"), PoRef::Element(3));
  EXPECT_EQ(ParsePoRef("V0"), PoRef::Landmark(0));
  EXPECT_THROW(ParsePoRef("x0"), MalformedPoVector);
  EXPECT_THROW(ParsePoRef("y1"), MalformedPoVector);
  EXPECT_THROW(ParsePoRef("V"), MalformedPoVector);
  EXPECT_EQ(FormatPoVector({V1, X1}), "(V1, x1)");
}

TEST(EncodeTest, Examples) {
  EXPECT_EQ(encode_po(Seq{12, 15}, TenTwenty()), (PoVector{V1, X1}));
  EXPECT_EQ(encode_po(Seq{12, 11}, TenTwenty()), (PoVector{V1, V1}));
  EXPECT_EQ(encode_po(Seq{3}, TenTwenty()), (PoVector{V0}));
}

TEST(EncodeTest, TieRules) {
  // Equal to a landmark: the landmark comes first, so V_1 is the predecessor.
  EXPECT_EQ(encode_po(Seq{10}, TenTwenty()), (PoVector{V1}));
  // Equal earlier element sorts before the later one.
  EXPECT_EQ(encode_po(Seq{12, 12}, TenTwenty()), (PoVector{V1, X1}));
  // An element equal to a landmark still follows it.
  EXPECT_EQ(encode_po(Seq{10, 10}, TenTwenty()), (PoVector{V1, X1}));
  // Element below the landmark loses to it.
  EXPECT_EQ(encode_po(Seq{9, 15}, TenTwenty()), (PoVector{V0, V1}));
}

TEST(DecodeTest, Examples) {
  const DecodedPo a = decode_po({V1, X1}, TenTwenty());
  EXPECT_EQ(a.bucket, (std::vector<std::uint32_t>{1, 1}));
  EXPECT_EQ(a.order, (std::vector<std::uint32_t>{0, 1}));
  const DecodedPo b = decode_po({V1, V1}, TenTwenty());
  EXPECT_EQ(b.order, (std::vector<std::uint32_t>{1, 0}));
  const DecodedPo c = decode_po({V0}, TenTwenty());
  EXPECT_EQ(c.bucket, (std::vector<std::uint32_t>{0}));
  ASSERT_EQ(c.runs.size(), 1u);
  EXPECT_EQ(c.runs[0], (BucketRun{0, 0, 1}));
}

TEST(DecodeTest, MalformedVectors) {
  EXPECT_THROW(decode_po({X1}, TenTwenty()), MalformedPoVector);
  EXPECT_THROW(decode_po({V1, PoRef::Element(1)}, TenTwenty()),
               MalformedPoVector);
  EXPECT_THROW(decode_po({PoRef::Landmark(3)}, TenTwenty()),
               MalformedPoVector);
}

// Order and buckets straight from the values.
void ExpectRoundTrip(const Seq& values, const VList& v) {
  const DecodedPo d = decode_po(encode_po(values, v), v);
  std::vector<std::uint32_t> order(values.size());
  for (std::uint32_t i = 0; i < order.size(); ++i) order[i] = i;
  std::sort(order.begin(), order.end(), [&](std::uint32_t a, std::uint32_t b) {
    return values[a] != values[b] ? values[a] < values[b] : a < b;
  });
  ASSERT_EQ(d.order, order);
  for (std::size_t t = 0; t < values.size(); ++t) {
    ASSERT_EQ(d.bucket[t], v.predecessor(values[t]));
  }
  std::uint32_t covered = 0;
  for (const BucketRun& run : d.runs) {
    ASSERT_EQ(run.begin, covered);
    covered = run.end;
    for (std::uint32_t i = run.begin; i < run.end; ++i) {
      ASSERT_EQ(d.bucket[d.order[i]], run.bucket);
    }
  }
  ASSERT_EQ(covered, values.size());
}

TEST(RoundTripTest, RandomValuesWithTies) {
  Rng rng(21);
  for (int trial = 0; trial < 2000; ++trial) {
    std::vector<double> landmarks(1 + rng.Below(8));
    for (double& x : landmarks) x = static_cast<double>(rng.Below(10));
    std::sort(landmarks.begin(), landmarks.end());
    const VList v(landmarks);
    Seq values(1 + rng.Below(10));
    for (double& x : values) x = static_cast<double>(rng.Below(12)) - 1.0;
    ExpectRoundTrip(values, v);
  }
}

TEST(SizingTest, Formulas) {
  EXPECT_EQ(OutcomeBound(3, 16, 1, 2), 3u * 16u * 2u + 9u * 2u);
  // n' (n (mu + 1) + n' sigma) ceil(log2 n)
  EXPECT_EQ(PoSampleSize(16, 5, 1, 1), 5u * (16u * 2u + 5u) * 4u);
  EXPECT_EQ(PoSampleSize(1, 1, 0, 0), 1u);
}

std::map<PoVector, std::uint64_t> Counts(
    std::initializer_list<std::pair<PoVector, std::uint64_t>> list) {
  return {list.begin(), list.end()};
}

TEST(TrieTest, SinglePath) {
  const PoTrie trie = PoTrie::Build(Counts({{{V1, X1}, 7}}), 2, 2);
  EXPECT_EQ(trie.total(), 7u);
  EXPECT_EQ(trie.leaf_count(), 1u);
  EXPECT_EQ(trie.node_count(), 3u);
  for (const auto& node : trie.nodes()) EXPECT_EQ(node.count, 7u);
  const DescentResult hit = trie.Descend(Seq{12, 15}, TenTwenty());
  ASSERT_TRUE(hit.hit);
  EXPECT_EQ(trie.outcome(hit.leaf), (PoVector{V1, X1}));
  EXPECT_LE(hit.comparisons, 2u * 4u);
}

TEST(TrieTest, MissesOnUnseenOutcome) {
  const PoTrie trie = PoTrie::Build(Counts({{{V1, X1}, 7}}), 2, 2);
  const DescentResult below = trie.Descend(Seq{12, 11}, TenTwenty());
  EXPECT_FALSE(below.hit);
  EXPECT_EQ(below.depth, 1u);
  const DescentResult first = trie.Descend(Seq{25, 30}, TenTwenty());
  EXPECT_FALSE(first.hit);
  EXPECT_EQ(first.depth, 0u);
  // 20 equals V_2, which is the right boundary of x_1's range.
  EXPECT_FALSE(trie.Descend(Seq{12, 20}, TenTwenty()).hit);
  EXPECT_FALSE(trie.Descend(Seq{5, 15}, TenTwenty()).hit);
}

TEST(TrieTest, BuildRejectsBadInput) {
  EXPECT_THROW(PoTrie::Build({}, 2, 2), std::invalid_argument);
  EXPECT_THROW(PoTrie::Build(Counts({{{V1}, 1}}), 2, 2),
               std::invalid_argument);
  EXPECT_THROW(PoTrie::Build(Counts({{{X1, V1}, 1}}), 2, 2),
               std::invalid_argument);
  EXPECT_THROW(PoTrie::Build(Counts({{{V1, V1}, 0}}), 2, 2),
               std::invalid_argument);
}

struct Sampled {
  VList vlist;
  std::vector<Seq> draws;
  PoTrie trie;
};

// Values from a few correlated "functions" of one hidden value plus a few
// coarse levels, so outcomes repeat and ties occur.
Sampled Sample(std::uint64_t seed, std::size_t nk, std::size_t n,
               std::size_t draws) {
  Rng rng(seed);
  std::vector<double> landmarks(n);
  for (double& x : landmarks) x = std::round(rng.Uniform01() * 40.0) / 4.0;
  std::sort(landmarks.begin(), landmarks.end());
  std::vector<double> slope(nk), offset(nk);
  for (std::size_t i = 0; i < nk; ++i) {
    slope[i] = static_cast<double>(rng.Between(-3, 3));
    offset[i] = static_cast<double>(rng.Below(8));
  }
  Sampled s{VList(landmarks), {}, {}};
  std::map<PoVector, std::uint64_t> counts;
  for (std::size_t d = 0; d < draws; ++d) {
    const double z = static_cast<double>(rng.Below(6));
    Seq values(nk);
    for (std::size_t i = 0; i < nk; ++i) {
      values[i] = (slope[i] * z + offset[i]) / 2.0;
    }
    ++counts[encode_po(values, s.vlist)];
    s.draws.push_back(values);
  }
  s.trie = PoTrie::Build(counts, nk, n);
  return s;
}

TEST(TrieTest, WeightsAreChildSums) {
  const Sampled s = Sample(3, 6, 12, 500);
  EXPECT_EQ(s.trie.total(), 500u);
  for (const auto& node : s.trie.nodes()) {
    if (node.leaf >= 0) continue;
    std::uint64_t sum = 0;
    for (std::uint32_t i = 0; i < node.edge_count; ++i) {
      sum += s.trie.nodes()[s.trie.edges()[node.first_edge + i].target].count;
    }
    EXPECT_EQ(sum, node.count);
  }
  std::uint64_t leaves = 0;
  for (std::uint32_t l = 0; l < s.trie.leaf_count(); ++l) {
    leaves += s.trie.outcome_count(l);
  }
  EXPECT_EQ(leaves, 500u);
}

TEST(TrieTest, DescentAgreesWithEncoderOnSampledOutcomes) {
  for (std::uint64_t seed = 1; seed <= 20; ++seed) {
    const Sampled s = Sample(seed, 1 + seed % 7, 4 + seed % 9, 200);
    for (const Seq& values : s.draws) {
      const DescentResult r = s.trie.Descend(values, s.vlist);
      ASSERT_TRUE(r.hit);
      ASSERT_EQ(s.trie.outcome(r.leaf), encode_po(values, s.vlist));
      ASSERT_EQ(s.trie.decoded(r.leaf),
                decode_po(encode_po(values, s.vlist), s.vlist));
    }
  }
}

TEST(TrieTest, DescentHitsExactlyTheSampledOutcomes) {
  Rng rng(5);
  for (std::uint64_t seed = 1; seed <= 10; ++seed) {
    const Sampled s = Sample(seed, 4, 8, 100);
    const auto seen = s.trie.Outcomes();
    for (int trial = 0; trial < 2000; ++trial) {
      Seq values(4);
      for (double& x : values) x = static_cast<double>(rng.Below(24)) / 2.0 - 2.0;
      const PoVector truth = encode_po(values, s.vlist);
      const DescentResult r = s.trie.Descend(values, s.vlist);
      ASSERT_EQ(r.hit, seen.count(truth) == 1);
      if (r.hit) ASSERT_EQ(s.trie.outcome(r.leaf), truth);
    }
  }
}

// Sum over the path of ceil(log2(w_parent / w_child)) + 2.
std::uint64_t PathBound(const PoTrie& trie, const PoVector& vec) {
  std::uint64_t bound = 0;
  std::uint32_t at = 0;
  for (const PoRef& ref : vec) {
    const auto& node = trie.nodes()[at];
    for (std::uint32_t i = 0; i < node.edge_count; ++i) {
      const auto& e = trie.edges()[node.first_edge + i];
      if (e.ref != ref) continue;
      const double ratio = static_cast<double>(node.count) /
                           static_cast<double>(trie.nodes()[e.target].count);
      bound += static_cast<std::uint64_t>(std::ceil(std::log2(ratio) - 1e-12)) + 2;
      at = e.target;
      break;
    }
  }
  return bound;
}

TEST(TrieTest, StepCostWithinWeightBound) {
  for (std::uint64_t seed = 1; seed <= 30; ++seed) {
    const Sampled s = Sample(seed, 2 + seed % 6, 3 + seed % 13, 400);
    for (const Seq& values : s.draws) {
      const DescentResult r = s.trie.Descend(values, s.vlist);
      ASSERT_TRUE(r.hit);
      const PoVector& vec = s.trie.outcome(r.leaf);
      ASSERT_LE(r.comparisons, PathBound(s.trie, vec));
      const double q = static_cast<double>(s.trie.outcome_count(r.leaf)) /
                       static_cast<double>(s.trie.total());
      ASSERT_LE(static_cast<double>(r.comparisons),
                3.0 * (static_cast<double>(vec.size()) + std::log2(1.0 / q)));
    }
  }
}

class VectorStream : public InstanceStream {
 public:
  explicit VectorStream(std::vector<Instance> v) : v_(std::move(v)) {}
  Instance Next() override { return v_.at(i_++); }
  std::size_t Remaining() const override { return v_.size() - i_; }

 private:
  std::vector<Instance> v_;
  std::size_t i_ = 0;
};

TEST(LearnPoTest, TwoEquiprobableOutcomes) {
  Rng rng(31);
  std::vector<Instance> instances;
  for (int i = 0; i < 1000; ++i) {
    const bool up = rng.Coin(0.5);
    instances.push_back({{up ? 1.0 : 3.0, up ? 3.0 : 1.0}, {}});
  }
  VectorStream stream(instances);
  PartitionResult partition;
  partition.groups = {{0, 1}};
  const LearnedModel model = learn_po_distribution(
      stream, partition, VList({2.0, 4.0}), 1000, {2, 0, 1, 1.0});
  ASSERT_EQ(model.groups.size(), 1u);
  const PoTrie& trie = model.groups[0].trie;
  ASSERT_EQ(trie.leaf_count(), 2u);
  for (std::uint32_t l = 0; l < 2; ++l) {
    EXPECT_NEAR(static_cast<double>(trie.outcome_count(l)) / 1000.0, 0.5, 0.05);
  }
}

TEST(LearnPoTest, ShortStreamAndZeroSamplesRejected) {
  VectorStream stream(std::vector<Instance>{Instance{{1.0}, {}}});
  PartitionResult partition;
  partition.groups = {{0}};
  EXPECT_THROW(learn_po_distribution(stream, partition, VList({0.0}), 2,
                                     {1, 0, 0, 1.0}),
               std::invalid_argument);
  EXPECT_THROW(learn_po_distribution(stream, partition, VList({0.0}), 0,
                                     {1, 0, 0, 1.0}),
               std::invalid_argument);
}

}  // namespace
}  // namespace sisort
