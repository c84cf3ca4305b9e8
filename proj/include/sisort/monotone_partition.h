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

#ifndef SISORT_MONOTONE_PARTITION_H_
#define SISORT_MONOTONE_PARTITION_H_

#include <cstdint>
#include <span>
#include <stdexcept>

namespace sisort {

// Thrown when the exact search gives up. Carries the best upper bound known at
// that point (from the greedy cover), so callers can still report something.
class SearchBudgetExceeded : public std::runtime_error {
 public:
  SearchBudgetExceeded(int best_upper_bound, std::uint64_t nodes_visited);

  int best_upper_bound() const { return best_upper_bound_; }
  std::uint64_t nodes_visited() const { return nodes_visited_; }

 private:
  int best_upper_bound_;
  std::uint64_t nodes_visited_;
};

struct MonotoneSearchOptions {
  // Maximum number of search nodes expanded per decision query.
  std::uint64_t node_budget = 20'000'000;
};

// Minimum number of monotone (non-decreasing or non-increasing) subsequences
// that partition `seq`. Empty input gives 0.
int monotone_partition_size(std::span<const double> seq,
                            const MonotoneSearchOptions& options = {});

// True iff `seq` can be partitioned into at most `d` monotone subsequences.
// Never answers when the budget runs out; throws SearchBudgetExceeded instead.
bool monotone_partition_at_most(std::span<const double> seq, int d,
                                const MonotoneSearchOptions& options = {});

// Upper bound: repeatedly strips the longest monotone subsequence.
int greedy_monotone_cover(std::span<const double> seq);

// Lower bound from the RSK shapes of the sequence and its negation. A union
// of a non-decreasing chains has at most lambda_1 + ... + lambda_a elements
// (Greene), and likewise for non-increasing chains.
int shape_lower_bound(std::span<const double> seq);

}  // namespace sisort

#endif  // SISORT_MONOTONE_PARTITION_H_
