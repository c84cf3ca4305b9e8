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

#ifndef SISORT_OPERATION_H_
#define SISORT_OPERATION_H_

#include <cstddef>
#include <cstdint>
#include <span>
#include <vector>

#include "sisort/instance_model.h"
#include "sisort/metrics.h"
#include "sisort/po_model.h"
#include "sisort/vlist.h"

namespace sisort {

enum class PoPath { kFast, kFallback };

struct PoComputation {
  PoVector vec;
  PoPath path = PoPath::kFast;
  std::uint64_t comparisons = 0;
  DescentResult descent;
};

// Sorts the values, locates each in the VList and reads off predecessors.
// Costs O(n_k log n) comparisons, counted into *comparisons when given.
PoVector fallback_po(std::span<const double> values, const VList& vlist,
                     std::uint64_t* comparisons = nullptr);

// Trie descent for group k, falling back on a miss.
PoComputation compute_po(const LearnedModel& model, std::size_t k,
                         std::span<const double> values);

struct Sublist {
  std::size_t group = 0;
  std::vector<std::size_t> elements;  // global indices, ascending by value
};

struct BucketSet {
  std::vector<std::vector<Sublist>> buckets;  // S_r for r in [0, n]
  std::size_t size() const;                   // elements over all buckets
};

// Decodes each group's vector and appends its same-bucket runs to S_r.
// `vectors[k]` belongs to model group k.
BucketSet distribute(const LearnedModel& model,
                     std::span<const PoVector> vectors);

// Balanced pairwise merge of sorted sublists of element indices under the
// (value, index) order.
std::vector<std::size_t> merge_bucket(
    const std::vector<std::vector<std::size_t>>& sublists,
    std::span<const double> values, std::uint64_t* comparisons = nullptr);

struct SortResult {
  std::vector<std::size_t> ranks;  // 1-based rank of each element
  std::vector<std::size_t> order;  // element indices in sorted order
  RunReport report;
};

// Throws std::invalid_argument when the instance size differs from model.n.
SortResult sort_instance(const LearnedModel& model, const Instance& instance);
SortResult sort_instance(const LearnedModel& model,
                         std::span<const double> values);

}  // namespace sisort

#endif  // SISORT_OPERATION_H_
