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

#ifndef SISORT_ORACLE_H_
#define SISORT_ORACLE_H_

#include <cstddef>
#include <cstdint>
#include <span>
#include <stdexcept>
#include <vector>

#include "sisort/instance_model.h"
#include "sisort/metrics.h"
#include "sisort/vlist.h"

// Brute-force references for tests. Nothing here shares code with the fast
// paths.
namespace sisort::oracle {

struct OracleConfig {
  std::size_t partition_cap = 12;
  std::uint64_t enumeration_budget = 1'000'000;
};

class CapExceeded : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

// 1-based ranks under the (value, index) order.
std::vector<std::size_t> reference_sort(std::span<const double> values);

// Minimum number of non-decreasing / non-increasing subsequences covering
// seq, by dynamic programming over all subsets. Throws CapExceeded when
// seq.size() > cap.
int exhaustive_monotone_partition(std::span<const double> seq,
                                  std::size_t cap = 12);

struct OutcomeDistribution {
  std::vector<OutcomeProbability> outcomes;  // sorted by outcome vector
  std::uint64_t atoms = 0;
  std::uint64_t bound = 0;  // W for the group

  bool within_bound() const { return outcomes.size() <= bound; }
};

// Exact outcome distribution of group k. Throws std::invalid_argument for a
// continuous source and CapExceeded over the enumeration budget.
OutcomeDistribution enumerate_outcomes(const World& world, std::size_t k,
                                       const VList& vlist,
                                       const OracleConfig& config = {});

}  // namespace sisort::oracle

#endif  // SISORT_ORACLE_H_
