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

#ifndef SISORT_PO_MODEL_H_
#define SISORT_PO_MODEL_H_

#include <compare>
#include <cstddef>
#include <cstdint>
#include <map>
#include <span>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include "sisort/instance_model.h"
#include "sisort/partition_learning.h"
#include "sisort/vlist.h"

namespace sisort {

// One entry of a group outcome vector: the predecessor of an element among
// the landmarks V_0..V_n and the group elements placed before it.
struct PoRef {
  enum class Kind : std::uint8_t { kLandmark, kElement };

  Kind kind = Kind::kLandmark;
  std::uint32_t index = 0;  // landmark r, or group-local element position

  static PoRef Landmark(std::size_t r) {
    return {Kind::kLandmark, static_cast<std::uint32_t>(r)};
  }
  static PoRef Element(std::size_t s) {
    return {Kind::kElement, static_cast<std::uint32_t>(s)};
  }
  bool is_landmark() const { return kind == Kind::kLandmark; }

  auto operator<=>(const PoRef&) const = default;
};

using PoVector = std::vector<PoRef>;

// "V<r>" for landmarks, "x<s>" with s counted from 1 for elements.
std::string FormatPoRef(PoRef ref);
PoRef ParsePoRef(std::string_view text);
std::string FormatPoVector(const PoVector& vec);

class MalformedPoVector : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

// Entry t is the predecessor of values[t] among the landmarks and
// values[0..t-1], under the order (value, landmarks first, element index).
PoVector encode_po(std::span<const double> values, const VList& vlist);

struct BucketRun {
  std::uint32_t bucket = 0;
  std::uint32_t begin = 0;  // range into DecodedPo::order
  std::uint32_t end = 0;

  bool operator==(const BucketRun&) const = default;
};

struct DecodedPo {
  std::vector<std::uint32_t> bucket;  // landmark bucket of each element
  std::vector<std::uint32_t> order;   // element positions, ascending
  std::vector<BucketRun> runs;        // maximal same-bucket ranges of order

  bool operator==(const DecodedPo&) const = default;
};

// Inverse of encode_po. Throws MalformedPoVector.
DecodedPo decode_po(const PoVector& vec, const VList& vlist);
DecodedPo decode_po(const PoVector& vec, std::size_t landmark_count);

// W = n_k * n * (mu + 1) + n_k^2 * sigma, the slab-count bound on distinct
// outcomes of a group of n_k elements.
std::uint64_t OutcomeBound(std::size_t group_size, std::size_t n, int mu,
                           int sigma);

// T = n' * (n * (mu + 1) + n' * sigma) * ceil(log2 n).
std::uint64_t PoSampleSize(std::size_t n, std::size_t max_group_size, int mu,
                           int sigma);

struct DescentResult {
  bool hit = false;
  std::uint32_t leaf = 0;       // outcome id when hit
  std::size_t depth = 0;        // entries resolved before a miss
  std::uint64_t comparisons = 0;
};

// Trie of sampled outcome vectors with counts. Each node orders its children
// by where their predecessor sits in the value order and searches them with
// a weight-balanced tree, so reaching a child of count c under a node of
// count w costs at most ceil(log2(w / c)) + 2 value comparisons.
class PoTrie {
 public:
  struct Edge {
    PoRef ref;             // the entry; also the left boundary of its range
    PoRef right;           // next item in value order (may be V_{n+1})
    std::uint32_t target;  // child node
  };

  struct Node {
    std::uint64_t count = 0;
    std::uint32_t first_edge = 0;
    std::uint32_t edge_count = 0;
    std::uint32_t search_root = 0;
    std::int32_t leaf = -1;  // outcome id at full depth
  };

  PoTrie() = default;

  // `counts` maps distinct vectors of length group_size to sample counts.
  // Throws std::invalid_argument on empty input or malformed vectors.
  static PoTrie Build(const std::map<PoVector, std::uint64_t>& counts,
                      std::size_t group_size, std::size_t landmark_count);

  std::size_t group_size() const { return group_size_; }
  std::uint64_t total() const { return nodes_.empty() ? 0 : nodes_[0].count; }
  std::size_t leaf_count() const { return outcomes_.size(); }
  std::size_t node_count() const { return nodes_.size(); }

  const std::vector<Node>& nodes() const { return nodes_; }
  const std::vector<Edge>& edges() const { return edges_; }

  const PoVector& outcome(std::uint32_t leaf) const { return outcomes_[leaf]; }
  std::uint64_t outcome_count(std::uint32_t leaf) const {
    return nodes_[leaf_nodes_[leaf]].count;
  }
  const DecodedPo& decoded(std::uint32_t leaf) const { return decoded_[leaf]; }

  std::map<PoVector, std::uint64_t> Outcomes() const;

  // Follows values down the trie. A miss is an ordinary result.
  DescentResult Descend(std::span<const double> values,
                        const VList& vlist) const;

 private:
  struct SearchNode {
    std::int32_t key_edge = -1;  // internal: compare against this edge's ref
    std::uint32_t below = 0;
    std::uint32_t above = 0;
    std::int32_t leaf_edge = -1;  // leaf: edge index, or -1 for "below all"
  };

  void BuildSearch(std::uint32_t node);

  std::size_t group_size_ = 0;
  std::size_t landmark_count_ = 0;
  std::vector<Node> nodes_;
  std::vector<Edge> edges_;
  std::vector<SearchNode> search_;
  std::vector<PoVector> outcomes_;
  std::vector<std::uint32_t> leaf_nodes_;
  std::vector<DecodedPo> decoded_;
};

// trie_descend with the counter stored in the result.
DescentResult trie_descend(const PoTrie& trie, std::span<const double> values,
                           const VList& vlist);

struct GroupPoModel {
  std::vector<std::size_t> members;
  std::uint64_t samples = 0;  // T actually drawn for this group
  PoTrie trie;
};

struct LearnProvenance {
  std::uint64_t seed = 0;
  std::size_t partition_samples = 0;
  std::size_t landmark_instances = 0;
  std::uint64_t po_sample_formula = 0;  // T before the rho multiplier
  std::uint64_t po_samples = 0;         // ceil(rho * T)
};

struct LearnedModel {
  std::size_t n = 0;
  int mu = 0;
  int sigma = 0;
  std::size_t max_group_size = 0;  // n'
  double rho = 1.0;
  PartitionResult partition;
  VList vlist;
  std::vector<GroupPoModel> groups;
  LearnProvenance provenance;
};

struct ModelParams {
  std::size_t n = 0;
  int mu = 0;
  int sigma = 0;
  double rho = 1.0;
};

// Source of fresh instances for the learning phases.
class InstanceStream {
 public:
  virtual ~InstanceStream() = default;
  virtual Instance Next() = 0;
  // Instances still available; SIZE_MAX when unbounded.
  virtual std::size_t Remaining() const = 0;
};

// Draws `samples` instances, encodes each learned group's outcome and builds
// one trie per group from the counts.
LearnedModel learn_po_distribution(InstanceStream& stream,
                                   PartitionResult partition, VList vlist,
                                   std::uint64_t samples,
                                   const ModelParams& params);

}  // namespace sisort

#endif  // SISORT_PO_MODEL_H_
