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

#include "sisort/operation.h"

#include <algorithm>
#include <chrono>
#include <stdexcept>

namespace sisort {

namespace {

// (value, index) order with a counter on the value comparison.
struct CountingLess {
  std::span<const double> values;
  std::uint64_t* count;

  bool operator()(std::size_t a, std::size_t b) const {
    ++*count;
    if (values[a] != values[b]) return values[a] < values[b];
    return a < b;
  }
};

void AppendRuns(BucketSet& set, std::size_t k,
                const std::vector<std::size_t>& members,
                const DecodedPo& decoded) {
  for (const BucketRun& run : decoded.runs) {
    Sublist sub;
    sub.group = k;
    sub.elements.reserve(run.end - run.begin);
    for (std::uint32_t i = run.begin; i < run.end; ++i) {
      sub.elements.push_back(members[decoded.order[i]]);
    }
    set.buckets[run.bucket].push_back(std::move(sub));
  }
}

std::vector<std::size_t> MergeTwo(const std::vector<std::size_t>& a,
                                  const std::vector<std::size_t>& b,
                                  const CountingLess& less) {
  std::vector<std::size_t> out;
  out.reserve(a.size() + b.size());
  std::size_t i = 0;
  std::size_t j = 0;
  while (i < a.size() && j < b.size()) {
    if (less(b[j], a[i])) {
      out.push_back(b[j++]);
    } else {
      out.push_back(a[i++]);
    }
  }
  out.insert(out.end(), a.begin() + static_cast<std::ptrdiff_t>(i), a.end());
  out.insert(out.end(), b.begin() + static_cast<std::ptrdiff_t>(j), b.end());
  return out;
}

}  // namespace

PoVector fallback_po(std::span<const double> values, const VList& vlist,
                     std::uint64_t* comparisons) {
  std::uint64_t local = 0;
  std::uint64_t& count = comparisons ? *comparisons : local;
  std::vector<std::size_t> sorted(values.size());
  for (std::size_t i = 0; i < sorted.size(); ++i) sorted[i] = i;
  std::sort(sorted.begin(), sorted.end(), CountingLess{values, &count});

  std::vector<std::size_t> bucket(values.size());
  for (std::size_t t = 0; t < values.size(); ++t) {
    bucket[t] = vlist.predecessor(values[t], &count);
  }

  // Within a bucket the predecessor of t is the nearest element before it in
  // sorted order with a smaller index, or the landmark when there is none.
  PoVector vec(values.size());
  std::vector<std::size_t> stack;
  for (std::size_t pos = 0; pos < sorted.size(); ++pos) {
    const std::size_t t = sorted[pos];
    if (pos == 0 || bucket[sorted[pos - 1]] != bucket[t]) stack.clear();
    while (!stack.empty() && stack.back() > t) stack.pop_back();
    vec[t] = stack.empty() ? PoRef::Landmark(bucket[t])
                           : PoRef::Element(stack.back());
    stack.push_back(t);
  }
  return vec;
}

PoComputation compute_po(const LearnedModel& model, std::size_t k,
                         std::span<const double> values) {
  PoComputation out;
  const PoTrie& trie = model.groups.at(k).trie;
  out.descent = trie.Descend(values, model.vlist);
  out.comparisons = out.descent.comparisons;
  if (out.descent.hit) {
    out.path = PoPath::kFast;
    out.vec = trie.outcome(out.descent.leaf);
  } else {
    out.path = PoPath::kFallback;
    out.vec = fallback_po(values, model.vlist, &out.comparisons);
  }
  return out;
}

std::size_t BucketSet::size() const {
  std::size_t total = 0;
  for (const auto& bucket : buckets) {
    for (const auto& sub : bucket) total += sub.elements.size();
  }
  return total;
}

BucketSet distribute(const LearnedModel& model,
                     std::span<const PoVector> vectors) {
  if (vectors.size() != model.groups.size()) {
    throw std::invalid_argument("one outcome vector per group expected");
  }
  BucketSet set;
  set.buckets.resize(model.vlist.n() + 1);
  for (std::size_t k = 0; k < vectors.size(); ++k) {
    AppendRuns(set, k, model.groups[k].members,
               decode_po(vectors[k], model.vlist));
  }
  return set;
}

std::vector<std::size_t> merge_bucket(
    const std::vector<std::vector<std::size_t>>& sublists,
    std::span<const double> values, std::uint64_t* comparisons) {
  std::uint64_t local = 0;
  const CountingLess less{values, comparisons ? comparisons : &local};
  std::vector<std::vector<std::size_t>> round;
  for (const auto& s : sublists) {
    if (!s.empty()) round.push_back(s);
  }
  if (round.empty()) return {};
  while (round.size() > 1) {
    std::vector<std::vector<std::size_t>> next;
    next.reserve((round.size() + 1) / 2);
    for (std::size_t i = 0; i + 1 < round.size(); i += 2) {
      next.push_back(MergeTwo(round[i], round[i + 1], less));
    }
    if (round.size() % 2 == 1) next.push_back(std::move(round.back()));
    round = std::move(next);
  }
  return std::move(round.front());
}

SortResult sort_instance(const LearnedModel& model, const Instance& instance) {
  return sort_instance(model, instance.values);
}

SortResult sort_instance(const LearnedModel& model,
                         std::span<const double> values) {
  if (values.size() != model.n) {
    throw std::invalid_argument("instance has " +
                                std::to_string(values.size()) +
                                " values but the model was learned for n = " +
                                std::to_string(model.n));
  }
  const auto start = std::chrono::steady_clock::now();
  SortResult result;
  RunReport& report = result.report;

  BucketSet set;
  set.buckets.resize(model.vlist.n() + 1);
  std::vector<double> group_values;
  for (std::size_t k = 0; k < model.groups.size(); ++k) {
    const GroupPoModel& group = model.groups[k];
    group_values.clear();
    for (std::size_t e : group.members) group_values.push_back(values[e]);
    const PoComputation po = compute_po(model, k, group_values);
    if (po.path == PoPath::kFast) {
      ++report.fast_count;
      report.descent_comparisons += po.comparisons;
      report.descents.push_back(
          {k, group.members.size(), po.comparisons,
           group.trie.outcome_count(po.descent.leaf), group.trie.total()});
      AppendRuns(set, k, group.members, group.trie.decoded(po.descent.leaf));
    } else {
      ++report.fallback_count;
      // The failed descent is charged to the fallback.
      report.fallback_comparisons += po.comparisons;
      AppendRuns(set, k, group.members, decode_po(po.vec, model.vlist));
    }
  }

  report.bucket_sublists.assign(set.buckets.size(), 0);
  result.order.reserve(values.size());
  std::vector<std::vector<std::size_t>> lists;
  for (std::size_t r = 0; r < set.buckets.size(); ++r) {
    auto& bucket = set.buckets[r];
    report.bucket_sublists[r] = static_cast<std::uint32_t>(bucket.size());
    if (bucket.empty()) continue;
    if (bucket.size() == 1) {
      const auto& e = bucket.front().elements;
      result.order.insert(result.order.end(), e.begin(), e.end());
      continue;
    }
    lists.clear();
    for (auto& sub : bucket) lists.push_back(std::move(sub.elements));
    const auto merged = merge_bucket(lists, values, &report.merge_comparisons);
    result.order.insert(result.order.end(), merged.begin(), merged.end());
  }
  if (result.order.size() != values.size()) {
    throw std::logic_error("partition does not cover the instance");
  }
  result.ranks.assign(values.size(), 0);
  for (std::size_t i = 0; i < result.order.size(); ++i) {
    result.ranks[result.order[i]] = i + 1;
  }
  report.elapsed_ns = static_cast<std::uint64_t>(
      std::chrono::duration_cast<std::chrono::nanoseconds>(
          std::chrono::steady_clock::now() - start)
          .count());
  return result;
}

}  // namespace sisort
