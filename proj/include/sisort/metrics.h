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

#ifndef SISORT_METRICS_H_
#define SISORT_METRICS_H_

#include <cstddef>
#include <cstdint>
#include <functional>
#include <span>
#include <stdexcept>
#include <vector>

#include "sisort/instance_model.h"
#include "sisort/po_model.h"
#include "sisort/rng.h"
#include "sisort/vlist.h"

namespace sisort {

struct EntropyEstimate {
  double bits = 0.0;
  std::size_t support = 0;   // outcomes with a positive count
  std::uint64_t samples = 0;
  // Delta-method standard error, sqrt((E[log^2 p] - H^2) / T).
  double std_error = 0.0;
  // Set when the sample count is below the support size, where the plug-in
  // value is biased low.
  bool small_sample = false;
};

// H = sum_i (c_i / T) log2(T / c_i) over positive counts. Throws
// std::invalid_argument when no count is positive.
EntropyEstimate plugin_entropy(std::span<const std::uint64_t> counts);

class EnumerationBudgetExceeded : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

inline constexpr std::uint64_t kEnumerationBudget = 1'000'000;

// Exact entropy of group k's outcome vector, by enumerating its atoms.
// Throws std::invalid_argument for a continuous source.
double exact_po_entropy(const World& world, std::size_t k, const VList& vlist);

// Exact entropy of the output permutation over the product of all groups'
// atoms. Throws std::invalid_argument for continuous sources and
// EnumerationBudgetExceeded when the product exceeds `budget`.
double exact_pi_entropy(const World& world,
                        std::uint64_t budget = kEnumerationBudget);

struct DescentRecord {
  std::size_t group = 0;
  std::size_t group_size = 0;
  std::uint64_t comparisons = 0;
  std::uint64_t leaf_count = 0;  // chi of the reached leaf
  std::uint64_t samples = 0;     // T of the trie
};

// Counters from one sort_instance call. Comparisons are value comparisons
// only; index tie-breaks are free.
struct RunReport {
  std::uint64_t descent_comparisons = 0;
  std::uint64_t fallback_comparisons = 0;
  std::uint64_t merge_comparisons = 0;
  std::uint64_t fast_count = 0;
  std::uint64_t fallback_count = 0;
  std::vector<std::uint32_t> bucket_sublists;  // |S_r| for r in [0, n]
  std::vector<DescentRecord> descents;         // FAST path only
  std::uint64_t elapsed_ns = 0;  // wall clock; excluded from saved reports

  std::uint64_t total_comparisons() const {
    return descent_comparisons + fallback_comparisons + merge_comparisons;
  }
};

struct OccupancyStats {
  std::vector<double> bucket_mean;  // per r, averaged over all runs
  double mean_nonempty = 0.0;       // mean |S_r| over nonempty buckets
  std::uint32_t max_sublists = 0;
  std::uint64_t nonempty_buckets = 0;
};

// Throws std::invalid_argument on an empty list or mismatched bucket counts.
OccupancyStats bucket_occupancy_stats(std::span<const RunReport> reports);

struct OutcomeProbability {
  PoVector outcome;
  std::uint64_t weight = 0;  // atoms mapping to the outcome
  std::uint64_t total = 0;   // atoms in the source
  double p() const {
    return static_cast<double>(weight) / static_cast<double>(total);
  }
};

struct ChernoffRow {
  PoVector outcome;
  double p = 0.0;
  std::uint64_t events = 0;  // runs with q <= p / 2
  double rate = 0.0;
  double bound = 0.0;   // exp(-p T / 8)
  double margin = 0.0;  // 3 binomial standard deviations at the bound
  bool violated = false;
};

struct ChernoffReport {
  std::uint64_t runs = 0;
  std::uint64_t samples = 0;
  std::vector<ChernoffRow> rows;
  std::size_t violations = 0;
};

// Repeats the learning of one group's counts `runs` times with `samples`
// draws each and measures how often the learned frequency q of each outcome
// with p >= min_p falls to p / 2 or below. `draw` produces one outcome.
ChernoffReport chernoff_diagnostic(
    std::span<const OutcomeProbability> exact, std::uint64_t runs,
    std::uint64_t samples, const std::function<PoVector(Rng&)>& draw,
    std::uint64_t seed, double min_p = 0.05);

}  // namespace sisort

#endif  // SISORT_METRICS_H_
