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

#include <algorithm>
#include <cctype>
#include <cmath>
#include <functional>
#include <limits>
#include <set>
#include <utility>

namespace sisort {

std::string FormatPoRef(PoRef ref) {
  return ref.is_landmark() ? "V" + std::to_string(ref.index)
                           : "x" + std::to_string(ref.index + 1);
}

PoRef ParsePoRef(std::string_view text) {
  if (text.size() < 2 || (text[0] != 'V' && text[0] != 'x')) {
    throw MalformedPoVector("bad outcome entry '" + std::string(text) + "'");
  }
  std::uint64_t value = 0;
  for (char c : text.substr(1)) {
    if (!std::isdigit(static_cast<unsigned char>(c)) || value > 1'000'000'000) {
      throw MalformedPoVector("bad outcome entry '" + std::string(text) + "'");
    }
    value = value * 10 + static_cast<std::uint64_t>(c - '0');
  }
  if (text[0] == 'V') return PoRef::Landmark(value);
  if (value == 0) {
    throw MalformedPoVector("element entries count from x1");
  }
  return PoRef::Element(value - 1);
}

std::string FormatPoVector(const PoVector& vec) {
  std::string out = "(";
  for (std::size_t i = 0; i < vec.size(); ++i) {
    if (i > 0) out += ", ";
    out += FormatPoRef(vec[i]);
  }
  return out + ")";
}

PoVector encode_po(std::span<const double> values, const VList& vlist) {
  PoVector vec;
  vec.reserve(values.size());
  std::set<std::pair<double, std::size_t>> placed;
  for (std::size_t t = 0; t < values.size(); ++t) {
    const double x = values[t];
    const std::size_t r = vlist.predecessor(x);
    // Latest earlier element not above x; equal values count as preceding.
    auto it = placed.upper_bound({x, std::numeric_limits<std::size_t>::max()});
    if (it != placed.begin() && std::prev(it)->first >= vlist[r]) {
      // An element equal to V_r still sorts after the landmark.
      vec.push_back(PoRef::Element(std::prev(it)->second));
    } else {
      vec.push_back(PoRef::Landmark(r));
    }
    placed.emplace(x, t);
  }
  return vec;
}

DecodedPo decode_po(const PoVector& vec, const VList& vlist) {
  return decode_po(vec, vlist.n());
}

DecodedPo decode_po(const PoVector& vec, std::size_t landmark_count) {
  const std::size_t size = vec.size();
  DecodedPo out;
  out.bucket.assign(size, 0);
  // Each element hangs off its predecessor; the final order is a preorder
  // walk that visits later-inserted siblings first.
  std::vector<std::vector<std::uint32_t>> children(size);
  std::vector<std::pair<std::uint32_t, std::uint32_t>> roots;  // (r, element)
  for (std::size_t t = 0; t < size; ++t) {
    const PoRef ref = vec[t];
    if (ref.is_landmark()) {
      if (ref.index > landmark_count) {
        throw MalformedPoVector("entry " + std::to_string(t + 1) +
                                " names landmark V" +
                                std::to_string(ref.index) + " beyond V" +
                                std::to_string(landmark_count));
      }
      out.bucket[t] = ref.index;
      roots.emplace_back(ref.index, static_cast<std::uint32_t>(t));
    } else {
      if (ref.index >= t) {
        throw MalformedPoVector("entry " + std::to_string(t + 1) +
                                " refers to x" + std::to_string(ref.index + 1) +
                                ", which is not earlier");
      }
      out.bucket[t] = out.bucket[ref.index];
      children[ref.index].push_back(static_cast<std::uint32_t>(t));
    }
  }
  // Roots: ascending landmark, then latest element first.
  std::sort(roots.begin(), roots.end(), [](const auto& a, const auto& b) {
    return a.first != b.first ? a.first < b.first : a.second > b.second;
  });
  out.order.reserve(size);
  std::vector<std::uint32_t> stack;
  for (const auto& root : roots) {
    stack.push_back(root.second);
    while (!stack.empty()) {
      const std::uint32_t e = stack.back();
      stack.pop_back();
      out.order.push_back(e);
      // Push ascending so the latest child pops first.
      for (std::uint32_t c : children[e]) stack.push_back(c);
    }
  }
  for (std::uint32_t i = 0; i < out.order.size(); ++i) {
    const std::uint32_t b = out.bucket[out.order[i]];
    if (out.runs.empty() || out.runs.back().bucket != b) {
      out.runs.push_back({b, i, i + 1});
    } else {
      out.runs.back().end = i + 1;
    }
  }
  return out;
}

std::uint64_t OutcomeBound(std::size_t group_size, std::size_t n, int mu,
                           int sigma) {
  const auto nk = static_cast<std::uint64_t>(group_size);
  return nk * n * static_cast<std::uint64_t>(mu + 1) +
         nk * nk * static_cast<std::uint64_t>(sigma);
}

std::uint64_t PoSampleSize(std::size_t n, std::size_t max_group_size, int mu,
                           int sigma) {
  const auto np = static_cast<std::uint64_t>(max_group_size);
  return np *
         (n * static_cast<std::uint64_t>(mu + 1) +
          np * static_cast<std::uint64_t>(sigma)) *
         LandmarkSampleCount(n);
}

PoTrie PoTrie::Build(const std::map<PoVector, std::uint64_t>& counts,
                     std::size_t group_size, std::size_t landmark_count) {
  if (counts.empty()) throw std::invalid_argument("no outcomes to store");
  PoTrie trie;
  trie.group_size_ = group_size;
  trie.landmark_count_ = landmark_count;

  // Plain prefix tree first.
  struct Raw {
    std::uint64_t count = 0;
    std::map<PoRef, std::uint32_t> children;
    std::int32_t leaf = -1;
  };
  std::vector<Raw> raw(1);
  for (const auto& [vec, count] : counts) {
    if (vec.size() != group_size) {
      throw std::invalid_argument("outcome " + FormatPoVector(vec) +
                                  " has the wrong length");
    }
    if (count == 0) throw std::invalid_argument("zero outcome count");
    decode_po(vec, landmark_count);  // validates
    std::uint32_t at = 0;
    raw[0].count += count;
    for (PoRef ref : vec) {
      auto it = raw[at].children.find(ref);
      if (it == raw[at].children.end()) {
        raw.emplace_back();
        it = raw[at].children.emplace(ref, static_cast<std::uint32_t>(
                                               raw.size() - 1))
                 .first;
      }
      at = it->second;
      raw[at].count += count;
    }
    raw[at].leaf = static_cast<std::int32_t>(trie.outcomes_.size());
    trie.outcomes_.push_back(vec);
  }
  trie.leaf_nodes_.assign(trie.outcomes_.size(), 0);
  trie.decoded_.resize(trie.outcomes_.size());
  for (std::size_t i = 0; i < trie.outcomes_.size(); ++i) {
    trie.decoded_[i] = decode_po(trie.outcomes_[i], landmark_count);
  }

  // Walk the prefix tree while tracking the value order of everything placed
  // so far: head[r] is the first element of bucket r, next[s] the element
  // after s in its bucket.
  std::vector<std::int32_t> head(landmark_count + 2, -1);
  std::vector<std::int32_t> next(group_size, -1);
  std::vector<std::uint32_t> bucket_of(group_size, 0);

  auto position = [&](PoRef ref) -> std::pair<std::uint32_t, std::uint32_t> {
    if (ref.is_landmark()) return {ref.index, 0};
    std::uint32_t pos = 1;
    for (std::int32_t e = head[bucket_of[ref.index]];
         e != static_cast<std::int32_t>(ref.index); e = next[e]) {
      ++pos;
    }
    return {bucket_of[ref.index], pos};
  };
  auto successor = [&](PoRef ref) -> PoRef {
    if (ref.is_landmark()) {
      return head[ref.index] >= 0 ? PoRef::Element(head[ref.index])
                                  : PoRef::Landmark(ref.index + 1);
    }
    return next[ref.index] >= 0 ? PoRef::Element(next[ref.index])
                                : PoRef::Landmark(bucket_of[ref.index] + 1);
  };

  std::function<std::uint32_t(std::uint32_t, std::size_t)> lay_out =
      [&](std::uint32_t raw_index, std::size_t depth) -> std::uint32_t {
    const Raw& node = raw[raw_index];
    const auto id = static_cast<std::uint32_t>(trie.nodes_.size());
    trie.nodes_.push_back({node.count, 0, 0, 0, node.leaf});
    if (node.leaf >= 0) {
      trie.leaf_nodes_[static_cast<std::size_t>(node.leaf)] = id;
      return id;
    }
    struct Pending {
      std::pair<std::uint32_t, std::uint32_t> key;
      PoRef ref;
      PoRef right;
      std::uint32_t raw_child;
    };
    std::vector<Pending> pending;
    for (const auto& [ref, child] : node.children) {
      pending.push_back({position(ref), ref, successor(ref), child});
    }
    std::sort(pending.begin(), pending.end(),
              [](const Pending& a, const Pending& b) { return a.key < b.key; });

    const auto first_edge = static_cast<std::uint32_t>(trie.edges_.size());
    trie.nodes_[id].first_edge = first_edge;
    trie.nodes_[id].edge_count = static_cast<std::uint32_t>(pending.size());
    for (const Pending& p : pending) trie.edges_.push_back({p.ref, p.right, 0});

    const auto t = static_cast<std::uint32_t>(depth);
    for (std::size_t i = 0; i < pending.size(); ++i) {
      const PoRef ref = pending[i].ref;
      // Place element t right after its predecessor.
      std::int32_t saved;
      if (ref.is_landmark()) {
        saved = head[ref.index];
        next[t] = head[ref.index];
        head[ref.index] = static_cast<std::int32_t>(t);
        bucket_of[t] = ref.index;
      } else {
        saved = next[ref.index];
        next[t] = next[ref.index];
        next[ref.index] = static_cast<std::int32_t>(t);
        bucket_of[t] = bucket_of[ref.index];
      }
      const std::uint32_t child = lay_out(pending[i].raw_child, depth + 1);
      trie.edges_[first_edge + i].target = child;
      if (ref.is_landmark()) {
        head[ref.index] = saved;
      } else {
        next[ref.index] = saved;
      }
      next[t] = -1;
    }
    trie.BuildSearch(id);
    return id;
  };
  lay_out(0, 0);
  return trie;
}

void PoTrie::BuildSearch(std::uint32_t node_id) {
  const Node& node = nodes_[node_id];
  // Leaf sequence: an optional "below the first range" miss leaf, then one
  // leaf per edge. Leaf i sits at the midpoint of its slice of [0, 2W) and
  // the tree bisects that interval (Gilbert-Moore), so a leaf of weight c is
  // isolated within ceil(log2(W / c)) + 1 levels.
  struct Leaf {
    std::int32_t edge;
    double point;
  };
  std::vector<Leaf> leaves;
  const Edge& first = edges_[node.first_edge];
  if (!(first.ref.is_landmark() && first.ref.index == 0)) {
    leaves.push_back({-1, 0.0});
  }
  double cumulative = 0.0;
  for (std::uint32_t i = 0; i < node.edge_count; ++i) {
    const std::uint32_t e = node.first_edge + i;
    const auto w = static_cast<double>(nodes_[edges_[e].target].count);
    leaves.push_back({static_cast<std::int32_t>(e), 2.0 * cumulative + w});
    cumulative += w;
  }

  std::function<std::uint32_t(std::size_t, std::size_t, double, double)> build =
      [&](std::size_t lo, std::size_t hi, double a,
          double b) -> std::uint32_t {
    // Half-open leaf range [lo, hi), all points inside [a, b).
    if (hi - lo == 1) {
      search_.push_back({-1, 0, 0, leaves[lo].edge});
      return static_cast<std::uint32_t>(search_.size() - 1);
    }
    for (;;) {
      const double mid = a + (b - a) / 2;
      std::size_t split = lo;
      while (split < hi && leaves[split].point < mid) ++split;
      if (split == lo) {
        a = mid;
      } else if (split == hi) {
        b = mid;
      } else {
        const auto id = static_cast<std::uint32_t>(search_.size());
        search_.push_back({leaves[split].edge, 0, 0, -1});
        const std::uint32_t below = build(lo, split, a, mid);
        const std::uint32_t above = build(split, hi, mid, b);
        search_[id].below = below;
        search_[id].above = above;
        return id;
      }
    }
  };
  nodes_[node_id].search_root =
      build(0, leaves.size(), 0.0, 2.0 * static_cast<double>(node.count));
}

std::map<PoVector, std::uint64_t> PoTrie::Outcomes() const {
  std::map<PoVector, std::uint64_t> out;
  for (std::uint32_t i = 0; i < outcomes_.size(); ++i) {
    out.emplace(outcomes_[i], outcome_count(i));
  }
  return out;
}

DescentResult PoTrie::Descend(std::span<const double> values,
                              const VList& vlist) const {
  DescentResult result;
  if (nodes_.empty() || values.size() != group_size_) return result;
  auto boundary = [&](PoRef ref) {
    return ref.is_landmark() ? vlist[ref.index] : values[ref.index];
  };
  std::uint32_t at = 0;
  for (std::size_t t = 0; t < group_size_; ++t) {
    const double x = values[t];
    std::uint32_t s = nodes_[at].search_root;
    while (search_[s].key_edge >= 0) {
      ++result.comparisons;
      s = boundary(edges_[static_cast<std::size_t>(search_[s].key_edge)].ref) <= x
              ? search_[s].above
              : search_[s].below;
    }
    if (search_[s].leaf_edge < 0) {
      result.depth = t;
      return result;
    }
    const Edge& edge = edges_[static_cast<std::size_t>(search_[s].leaf_edge)];
    ++result.comparisons;
    if (boundary(edge.right) <= x) {
      result.depth = t;
      return result;
    }
    at = edge.target;
  }
  result.hit = true;
  result.depth = group_size_;
  result.leaf = static_cast<std::uint32_t>(nodes_[at].leaf);
  return result;
}

DescentResult trie_descend(const PoTrie& trie, std::span<const double> values,
                           const VList& vlist) {
  return trie.Descend(values, vlist);
}

LearnedModel learn_po_distribution(InstanceStream& stream,
                                   PartitionResult partition, VList vlist,
                                   std::uint64_t samples,
                                   const ModelParams& params) {
  if (samples == 0) throw std::invalid_argument("need at least one sample");
  if (stream.Remaining() < samples) {
    throw std::invalid_argument(
        "instance stream has " + std::to_string(stream.Remaining()) +
        " instances left, outcome learning needs " + std::to_string(samples));
  }
  LearnedModel model;
  model.n = params.n;
  model.mu = params.mu;
  model.sigma = params.sigma;
  model.rho = params.rho;
  for (const auto& g : partition.groups) {
    model.max_group_size = std::max(model.max_group_size, g.size());
  }

  std::vector<std::map<PoVector, std::uint64_t>> counts(partition.groups.size());
  std::vector<double> values;
  for (std::uint64_t i = 0; i < samples; ++i) {
    const Instance instance = stream.Next();
    if (instance.values.size() != params.n) {
      throw std::invalid_argument("instance size does not match n");
    }
    for (std::size_t k = 0; k < partition.groups.size(); ++k) {
      values.clear();
      for (std::size_t e : partition.groups[k]) {
        values.push_back(instance.values[e]);
      }
      ++counts[k][encode_po(values, vlist)];
    }
  }
  for (std::size_t k = 0; k < partition.groups.size(); ++k) {
    GroupPoModel group;
    group.members = partition.groups[k];
    group.samples = samples;
    group.trie = PoTrie::Build(counts[k], group.members.size(), vlist.n());
    model.groups.push_back(std::move(group));
  }
  model.partition = std::move(partition);
  model.vlist = std::move(vlist);
  model.provenance.po_samples = samples;
  return model;
}

}  // namespace sisort
